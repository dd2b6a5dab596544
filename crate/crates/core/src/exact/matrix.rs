//! Dense exact matrices over [`Rational`].

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// A dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// An exact column vector.
pub type RationalVector = Vec<Rational>;

/// Bound below which integer products are accumulated in `i128` without
/// going through [`Rational`] arithmetic.
const FAST_INT_BOUND: i64 = 1 << 40;

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::ONE;
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, columns: &[RationalVector]) -> Result<Self> {
        let mut m = Self::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in dimension {dim}",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RationalVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn small_ints(&self) -> Option<Vec<i64>> {
        self.entries
            .iter()
            .map(|x| match x.as_small() {
                Some((n, 1)) if n.abs() < FAST_INT_BOUND => Some(n),
                _ => None,
            })
            .collect()
    }

    /// Exact product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        if let (Some(a), Some(b)) = (self.small_ints(), rhs.small_ints()) {
            let mut entries = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    let mut acc: i128 = 0;
                    for l in 0..k {
                        acc += a[i * k + l] as i128 * b[l * m + j] as i128;
                    }
                    entries.push(match acc.to_i64() {
                        Some(v) if v != i64::MIN => Rational::from_int(v),
                        _ => Rational::from_bigint(BigInt::from(acc)),
                    });
                }
            }
            return Ok(Self {
                rows: n,
                cols: m,
                entries,
            });
        }
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let b = rhs.get(l, j);
                    if !b.is_zero() {
                        let idx = i * m + j;
                        out.entries[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RationalVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative order, searching up to `max`.
    pub fn order(&self, max: u32) -> Option<u32> {
        if !self.is_square() {
            return None;
        }
        let mut p = self.clone();
        for k in 1..=max {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self).ok()?;
        }
        None
    }

    /// Coefficients of `det(λI − M)` in ascending powers of `λ`; the last
    /// entry is 1. Uses Berkowitz's division-free recurrence.
    pub fn charpoly(&self) -> Result<Vec<Rational>> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        // `v` holds the charpoly of the trailing principal submatrix, highest
        // degree first.
        let mut v: Vec<Rational> = vec![Rational::ONE];
        for r in (0..n).rev() {
            let m = n - r - 1;
            let mut toeplitz = Vec::with_capacity(m + 2);
            toeplitz.push(Rational::ONE);
            toeplitz.push(-self.get(r, r));
            let mut x: RationalVector = (r + 1..n).map(|i| self.get(i, r).clone()).collect();
            let row = &self.row(r)[r + 1..];
            for k in 0..m {
                toeplitz.push(-dot(row, &x));
                if k + 1 < m {
                    x = (r + 1..n).map(|i| dot(&self.row(i)[r + 1..], &x)).collect();
                }
            }
            let next: Vec<Rational> = (0..m + 2)
                .map(|i| {
                    (0..=i.min(m))
                        .filter(|&j| !v[j].is_zero() && !toeplitz[i - j].is_zero())
                        .map(|j| &toeplitz[i - j] * &v[j])
                        .sum()
                })
                .collect();
            v = next;
        }
        v.reverse();
        Ok(v)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let pj = m.get(r, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let x = m.get(i, j) - &(&f * pj);
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel `{x : Mx = 0}`, one vector per free
    /// column, in column order.
    pub fn kernel(&self) -> Vec<RationalVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::ZERO; self.cols];
                v[f] = Rational::ONE;
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::ONE);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Canonical byte encoding: per entry, the zigzag LEB128 numerator
    /// followed by the LEB128 denominator. Equal matrices of equal shape
    /// encode to equal bytes.
    pub fn encode(&self) -> Box<[u8]> {
        let mut out = Vec::with_capacity(self.entries.len() * 2);
        for x in &self.entries {
            match x.as_small() {
                Some((n, d)) => {
                    write_varint_u64(&mut out, ((n << 1) ^ (n >> 63)) as u64);
                    write_varint_u64(&mut out, d as u64);
                }
                None => {
                    let n = x.numer();
                    let z = if n.sign() == num_bigint::Sign::Minus {
                        (-n * 2u32 - 1u32).to_biguint()
                    } else {
                        (n * 2u32).to_biguint()
                    }
                    .expect("zigzag is non-negative");
                    write_varint_big(&mut out, z);
                    write_varint_big(&mut out, x.denom().to_biguint().expect("positive"));
                }
            }
        }
        out.into_boxed_slice()
    }

    /// Inverse of [`RationalMatrix::encode`].
    pub fn decode(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let z = read_varint(bytes, &mut pos)?;
            let d = read_varint(bytes, &mut pos)?;
            let n: BigInt = if (&z % 2u32).is_zero() {
                BigInt::from(z >> 1)
            } else {
                -BigInt::from((z >> 1) + 1u32)
            };
            if d.is_zero() {
                return Err(Error::Malformed("zero denominator in encoding".into()));
            }
            entries.push(match (n.to_i64(), d.to_i64()) {
                (Some(n), Some(d)) => Rational::new(n, d),
                _ => Rational::from_big(num_rational::BigRational::new(n, BigInt::from(d))),
            });
        }
        if pos != bytes.len() {
            return Err(Error::Malformed("trailing bytes in encoding".into()));
        }
        Self::from_entries(rows, cols, entries)
    }
}

fn write_varint_u64(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let b = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

fn write_varint_big(out: &mut Vec<u8>, v: BigUint) {
    let digits = v.to_radix_le(128);
    let last = digits.len() - 1;
    for (i, d) in digits.into_iter().enumerate() {
        out.push(if i < last { d | 0x80 } else { d });
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Result<BigUint> {
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos] & 0x80 != 0 {
        *pos += 1;
    }
    if *pos >= bytes.len() {
        return Err(Error::Malformed("truncated varint".into()));
    }
    *pos += 1;
    let chunk = &bytes[start..*pos];
    if chunk.len() <= 9 {
        let mut v = 0u64;
        for (i, b) in chunk.iter().enumerate() {
            v |= ((b & 0x7f) as u64) << (7 * i);
        }
        return Ok(BigUint::from(v));
    }
    let digits: Vec<u8> = chunk.iter().map(|b| b & 0x7f).collect();
    Ok(BigUint::from_radix_le(&digits, 128).expect("radix-128 digits"))
}

/// Exact dot product.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::ZERO;
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn m(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn identity_products() {
        let i2 = RationalMatrix::identity(2);
        assert_eq!(i2.mul(&i2).unwrap(), i2);
        let d = m(&[vec![1, 0], vec![0, -1]]);
        assert_eq!(d.mul(&d).unwrap(), i2);
    }

    #[test]
    fn companion_square() {
        // companion matrix of λ² − λ − 1
        let c = m(&[vec![0, 1], vec![1, 1]]);
        assert_eq!(c.mul(&c).unwrap(), m(&[vec![1, 1], vec![1, 2]]));
    }

    #[test]
    fn mismatched_product_errors() {
        let a = RationalMatrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(
            RationalMatrix::identity(2).charpoly().unwrap(),
            vec![q(1), q(-2), q(1)]
        );
        assert_eq!(
            m(&[vec![1, 0], vec![0, -1]]).charpoly().unwrap(),
            vec![q(-1), q(0), q(1)]
        );
        // s1 s2 acting on the A2 root lattice in simple-root coordinates
        let rot = m(&[vec![-1, -1], vec![1, 0]]);
        let cube = rot.pow(3).unwrap();
        assert!(cube.is_identity());
        assert_eq!(rot.charpoly().unwrap(), vec![q(1), q(1), q(1)]);
        assert!(RationalMatrix::zeros(2, 3).charpoly().is_err());
        assert_eq!(RationalMatrix::identity(0).charpoly().unwrap(), vec![q(1)]);
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).unwrap().iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[vec![2, 1], vec![7, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert!(matches!(
            m(&[vec![1, 2], vec![2, 4]]).inverse(),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn big_entries_encode() {
        let big = Rational::from_int(i64::MAX) * Rational::from_int(-3) / Rational::from_int(7);
        let a = RationalMatrix::from_entries(1, 2, vec![big, Rational::new(-1, 2)]).unwrap();
        let bytes = a.encode();
        assert_eq!(RationalMatrix::decode(1, 2, &bytes).unwrap(), a);
    }

    // Cofactor expansion, used only as an independent reference.
    fn det_cofactor(a: &RationalMatrix) -> Rational {
        let n = a.rows();
        if n == 0 {
            return Rational::ONE;
        }
        (0..n)
            .map(|j| {
                let minor = RationalMatrix::from_rows(
                    &(1..n)
                        .map(|i| {
                            (0..n)
                                .filter(|&c| c != j)
                                .map(|c| a.get(i, c).clone())
                                .collect()
                        })
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let term = a.get(0, j) * &det_cofactor(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec((-5i64..6, 1i64..4), n * n).prop_map(move |v| {
            RationalMatrix::from_entries(
                n,
                n,
                v.into_iter().map(|(a, b)| Rational::new(a, b)).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn cayley_hamilton(a in (1usize..5).prop_flat_map(small_matrix)) {
            let cp = a.charpoly().unwrap();
            let n = a.rows();
            let mut acc = RationalMatrix::zeros(n, n);
            let mut power = RationalMatrix::identity(n);
            for c in &cp {
                acc = acc.add(&power.scale(c)).unwrap();
                power = power.mul(&a).unwrap();
            }
            prop_assert!(acc.is_zero());
            prop_assert!(acc.entries().iter().all(Rational::is_normalized));
        }

        #[test]
        fn charpoly_constant_is_signed_det(a in (1usize..5).prop_flat_map(small_matrix)) {
            let cp = a.charpoly().unwrap();
            let n = a.rows();
            let det = det_cofactor(&a);
            let expected = if n % 2 == 0 { det } else { -det };
            prop_assert_eq!(cp[0].clone(), expected);
        }

        #[test]
        fn encoding_is_canonical(a in (1usize..4).prop_flat_map(small_matrix)) {
            let bytes = a.encode();
            prop_assert_eq!(RationalMatrix::decode(a.rows(), a.cols(), &bytes).unwrap(), a.clone());
            prop_assert_eq!(a.clone().encode(), bytes);
        }
    }
}
