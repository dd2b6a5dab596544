//! Root systems of the simple types A–G in their classical realizations.
//!
//! Simple roots follow the Bourbaki chain ordering:
//!
//! | type  | ambient | simple roots |
//! |-------|---------|--------------|
//! | A_n   | ℝ^{n+1} | e_i − e_{i+1} |
//! | B_n   | ℝ^n     | e_i − e_{i+1}, e_n |
//! | C_n   | ℝ^n     | e_i − e_{i+1}, 2e_n |
//! | D_n   | ℝ^n     | e_i − e_{i+1}, e_{n−1} + e_n |
//! | G_2   | ℝ^3     | e_1 − e_2, −2e_1 + e_2 + e_3 |
//! | F_4   | ℝ^4     | e_2 − e_3, e_3 − e_4, e_4, ½(e_1 − e_2 − e_3 − e_4) |
//! | E_6,7,8 | ℝ^8   | ½(e_1 + e_8 − e_2 − … − e_7), e_1 + e_2, e_2 − e_1, e_3 − e_2, … |
//!
//! B_1 and the reducible D_2 = A_1 × A_1 are admitted because they occur as
//! the smallest members of the B and D series under folding.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{dot, Rational, RationalMatrix, RationalVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A family letter with a rank inside the family's bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::B => rank >= 1,
            Family::C => rank >= 2,
            Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::InvalidRank {
                family: family.letter(),
                rank,
            })
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Number of roots.
    pub fn root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => [72, 126, 240][n - 6],
            Family::F => 48,
            Family::G => 12,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::Malformed(format!("unknown Cartan type {s:?}")))?;
        let rank = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Malformed(format!("bad rank in {s:?}")))?;
        CartanType::new(family, rank)
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Order of the Weyl group, from the classical closed forms.
pub fn weyl_order(t: CartanType) -> BigUint {
    let n = t.rank;
    match t.family {
        Family::A => factorial(n + 1),
        Family::B | Family::C => (BigUint::one() << n) * factorial(n),
        Family::D => (BigUint::one() << (n - 1)) * factorial(n),
        Family::E => BigUint::from([51840u64, 2903040, 696729600][n - 6]),
        Family::F => BigUint::from(1152u32),
        Family::G => BigUint::from(12u32),
    }
}

/// Degrees of the basic polynomial invariants of the Weyl group, ascending.
pub fn degrees(t: CartanType) -> Vec<u32> {
    let n = t.rank as u32;
    let mut d: Vec<u32> = match t.family {
        Family::A => (2..=n + 1).collect(),
        Family::B | Family::C => (1..=n).map(|k| 2 * k).collect(),
        Family::D => (1..n).map(|k| 2 * k).chain([n]).collect(),
        Family::E => match n {
            6 => vec![2, 5, 6, 8, 9, 12],
            7 => vec![2, 6, 8, 10, 12, 14, 18],
            _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
        },
        Family::F => vec![2, 6, 8, 12],
        Family::G => vec![2, 6],
    };
    d.sort_unstable();
    d
}

/// A finite crystallographic root system in a rational ambient space with
/// an explicit inner product.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    gram: RationalMatrix,
    simple_roots: Vec<RationalVector>,
    /// Positive roots first, then their negatives in the same order.
    roots: Vec<RationalVector>,
    /// Coordinates of `roots` over `simple_roots`.
    root_coords: Vec<Vec<i64>>,
    cartan_matrix: Vec<Vec<i64>>,
    weyl_order: BigUint,
    degrees: Vec<u32>,
}

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn unit(dim: usize, i: usize, c: i64) -> RationalVector {
    let mut v = vec![Rational::ZERO; dim];
    v[i] = q(c);
    v
}

fn e_diff(dim: usize, i: usize, j: usize) -> RationalVector {
    let mut v = unit(dim, i, 1);
    v[j] = q(-1);
    v
}

fn standard_simple_roots(t: CartanType) -> (usize, Vec<RationalVector>) {
    let n = t.rank;
    let half = Rational::new(1, 2);
    match t.family {
        Family::A => (n + 1, (0..n).map(|i| e_diff(n + 1, i, i + 1)).collect()),
        Family::B | Family::C => {
            let mut s: Vec<_> = (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect();
            s.push(unit(n, n - 1, if t.family == Family::B { 1 } else { 2 }));
            (n, s)
        }
        Family::D => {
            let mut s: Vec<_> = (0..n - 1).map(|i| e_diff(n, i, i + 1)).collect();
            let mut last = unit(n, n - 2, 1);
            last[n - 1] = q(1);
            s.push(last);
            (n, s)
        }
        Family::G => {
            let a1 = e_diff(3, 0, 1);
            let a2 = vec![q(-2), q(1), q(1)];
            (3, vec![a1, a2])
        }
        Family::F => {
            let a4 = vec![half.clone(), -&half, -&half, -&half];
            (4, vec![e_diff(4, 1, 2), e_diff(4, 2, 3), unit(4, 3, 1), a4])
        }
        Family::E => {
            let mut a1: Vec<Rational> = vec![-&half; 8];
            a1[0] = half.clone();
            a1[7] = half.clone();
            let mut a2 = unit(8, 0, 1);
            a2[1] = q(1);
            let mut s = vec![a1, a2, e_diff(8, 1, 0)];
            for i in 2..n - 1 {
                s.push(e_diff(8, i, i - 1));
            }
            (8, s)
        }
    }
}

/// The classical realization of the given type with the Euclidean inner
/// product.
pub fn build_root_system(t: CartanType) -> Result<RootSystem> {
    let (dim, simple) = standard_simple_roots(t);
    RootSystem::from_simple_roots(t, RationalMatrix::identity(dim), simple)
}

/// The positive half of the roots.
pub fn positive_roots(rs: &RootSystem) -> &[RationalVector] {
    rs.positive_roots()
}

impl RootSystem {
    /// Generates the full root system from a base by closing under simple
    /// reflections, then checks it against the tables for `t`.
    pub fn from_simple_roots(
        t: CartanType,
        gram: RationalMatrix,
        simple_roots: Vec<RationalVector>,
    ) -> Result<Self> {
        let dim = gram.rows();
        if !gram.is_square()
            || simple_roots.len() != t.rank
            || simple_roots.iter().any(|r| r.len() != dim)
        {
            return Err(Error::DimensionMismatch(format!(
                "base for {t} in dimension {dim}"
            )));
        }
        let ip =
            |x: &[Rational], y: &[Rational]| -> Result<Rational> { Ok(dot(x, &gram.mul_vec(y)?)) };

        let rank = simple_roots.len();
        let norms: Vec<Rational> = simple_roots
            .iter()
            .map(|a| ip(a, a))
            .collect::<Result<_>>()?;
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                let c = &(q(2) * ip(&simple_roots[i], &simple_roots[j])?) / &norms[j];
                let c = c
                    .as_small()
                    .filter(|&(_, d)| d == 1)
                    .map(|(n, _)| n)
                    .ok_or_else(|| {
                        Error::Inconsistent(format!("non-integral Cartan entry {c} in {t}"))
                    })?;
                if (i == j && c != 2) || (i != j && !(-3..=0).contains(&c)) {
                    return Err(Error::Inconsistent(format!(
                        "Cartan entry {c} at ({i},{j}) in {t}"
                    )));
                }
                cartan[i][j] = c;
            }
        }

        // Coordinates over the base: solve (⟨α_i, α_j⟩) c = (⟨α_i, v⟩).
        let simple_gram = RationalMatrix::from_rows(
            &simple_roots
                .iter()
                .map(|a| {
                    simple_roots
                        .iter()
                        .map(|b| ip(a, b))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        let simple_gram_inv = simple_gram.inverse()?;
        let coords_of = |v: &[Rational]| -> Result<Vec<i64>> {
            let rhs: Vec<Rational> = simple_roots
                .iter()
                .map(|a| ip(a, v))
                .collect::<Result<_>>()?;
            simple_gram_inv
                .mul_vec(&rhs)?
                .iter()
                .map(|c| match c.as_small() {
                    Some((n, 1)) => Ok(n),
                    _ => Err(Error::Inconsistent(format!(
                        "root with coordinate {c} in {t}"
                    ))),
                })
                .collect()
        };

        let mut seen: HashSet<RationalVector> = simple_roots.iter().cloned().collect();
        let mut queue: Vec<RationalVector> = simple_roots.clone();
        let mut i = 0;
        while i < queue.len() {
            for (a, na) in simple_roots.iter().zip(&norms) {
                let r = reflect(&queue[i], a, na, &ip)?;
                if seen.insert(r.clone()) {
                    queue.push(r);
                }
            }
            i += 1;
        }

        let mut positive = Vec::new();
        for r in &queue {
            let c = coords_of(r)?;
            let pos = c.iter().all(|&x| x >= 0);
            let neg = c.iter().all(|&x| x <= 0);
            if !(pos || neg) {
                return Err(Error::Inconsistent(format!(
                    "root with mixed-sign coordinates in {t}"
                )));
            }
            if pos {
                positive.push((c, r.clone()));
            }
        }
        positive
            .sort_by(|(a, _), (b, _)| (a.iter().sum::<i64>(), a).cmp(&(b.iter().sum::<i64>(), b)));
        if 2 * positive.len() != queue.len() || queue.len() != t.root_count() {
            return Err(Error::Inconsistent(format!(
                "{t} generated {} roots, expected {}",
                queue.len(),
                t.root_count()
            )));
        }
        let mut roots: Vec<RationalVector> = positive.iter().map(|(_, r)| r.clone()).collect();
        let mut root_coords: Vec<Vec<i64>> = positive.iter().map(|(c, _)| c.clone()).collect();
        for (c, r) in &positive {
            roots.push(r.iter().map(|x| -x).collect());
            root_coords.push(c.iter().map(|x| -x).collect());
        }

        let weyl = weyl_order(t);
        let degs = degrees(t);
        let prod = degs.iter().fold(BigUint::one(), |acc, &d| acc * d);
        if degs.len() != t.rank || prod != weyl {
            return Err(Error::Inconsistent(format!(
                "degree table of {t} disagrees with |W|"
            )));
        }

        Ok(Self {
            cartan_type: t,
            gram,
            simple_roots,
            roots,
            root_coords,
            cartan_matrix: cartan,
            weyl_order: weyl,
            degrees: degs,
        })
    }

    /// The same root system with ambient space the span of the roots,
    /// coordinatized by the simple roots. Roots become integer vectors and
    /// the inner product becomes the Gram matrix of the base.
    pub fn in_root_coordinates(&self) -> Result<Self> {
        let rank = self.rank();
        let gram = RationalMatrix::from_rows(
            &self
                .simple_roots
                .iter()
                .map(|a| self.simple_roots.iter().map(|b| self.inner(a, b)).collect())
                .collect::<Vec<_>>(),
        )?;
        let simple = (0..rank).map(|i| unit(rank, i, 1)).collect();
        Self::from_simple_roots(self.cartan_type, gram, simple)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &self.gram.mul_vec(y).expect("vector in ambient space"))
    }

    pub fn roots(&self) -> &[RationalVector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[RationalVector] {
        &self.roots[..self.roots.len() / 2]
    }

    pub fn simple_roots(&self) -> &[RationalVector] {
        &self.simple_roots
    }

    /// Coordinates of `roots()[i]` over the simple roots.
    pub fn root_coords(&self) -> &[Vec<i64>] {
        &self.root_coords
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    pub fn weyl_order(&self) -> &BigUint {
        &self.weyl_order
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn contains_root(&self, v: &[Rational]) -> bool {
        self.roots.iter().any(|r| r.as_slice() == v)
    }

    /// Reflection through the hyperplane orthogonal to `root`, with respect
    /// to this system's inner product.
    pub fn reflection(&self, root: &[Rational]) -> Result<RationalMatrix> {
        crate::weyl::reflection_matrix_with_gram(root, &self.gram)
    }

    pub fn simple_reflections(&self) -> Result<Vec<RationalMatrix>> {
        self.simple_roots
            .iter()
            .map(|a| self.reflection(a))
            .collect()
    }

    /// Basis of the span of the roots (the simple roots).
    pub fn root_span(&self) -> &[RationalVector] {
        &self.simple_roots
    }
}

fn reflect(
    x: &[Rational],
    a: &[Rational],
    norm: &Rational,
    ip: &impl Fn(&[Rational], &[Rational]) -> Result<Rational>,
) -> Result<RationalVector> {
    let c = &(q(2) * ip(x, a)?) / norm;
    Ok(x.iter().zip(a).map(|(xi, ai)| xi - &(&c * ai)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CartanType {
        s.parse().unwrap()
    }

    fn all_types() -> Vec<CartanType> {
        let mut v = Vec::new();
        for n in 1..=8 {
            v.push(ct(&format!("A{n}")));
            v.push(ct(&format!("B{n}")));
        }
        for n in 2..=8 {
            v.push(ct(&format!("C{n}")));
            v.push(ct(&format!("D{n}")));
        }
        v.extend(["E6", "E7", "E8", "F4", "G2"].iter().map(|s| ct(s)));
        v
    }

    #[test]
    fn rank_bounds() {
        assert!(CartanType::new(Family::A, 0).is_err());
        assert!(CartanType::new(Family::C, 1).is_err());
        assert!(CartanType::new(Family::E, 5).is_err());
        assert!(CartanType::new(Family::E, 9).is_err());
        assert!(CartanType::new(Family::F, 3).is_err());
        assert!(CartanType::new(Family::G, 3).is_err());
        assert!("X3".parse::<CartanType>().is_err());
        assert_eq!(ct("d4").to_string(), "D4");
    }

    #[test]
    fn a2_roots() {
        let rs = build_root_system(ct("A2")).unwrap();
        assert_eq!(rs.roots().len(), 6);
        let e = |i, j| e_diff(3, i, j);
        for (i, j) in [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)] {
            assert!(rs.contains_root(&e(i, j)));
        }
        assert_eq!(positive_roots(&rs).len(), 3);
    }

    #[test]
    fn classical_counts_and_tables() {
        for t in all_types() {
            let rs = build_root_system(t).unwrap();
            assert_eq!(rs.roots().len(), t.root_count(), "{t}");
            assert_eq!(rs.positive_roots().len() * 2, rs.roots().len());
            let prod = rs.degrees().iter().fold(BigUint::one(), |a, &d| a * d);
            assert_eq!(&prod, rs.weyl_order(), "{t}");
            assert_eq!(rs.degrees().len(), t.rank());
            for (r, c) in rs.roots().iter().zip(rs.root_coords()) {
                assert!(c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0));
                assert!(!r.iter().all(Rational::is_zero));
                let neg: RationalVector = r.iter().map(|x| -x).collect();
                assert!(rs.contains_root(&neg));
            }
        }
    }

    #[test]
    fn small_root_counts() {
        assert_eq!(
            positive_roots(&build_root_system(ct("D4")).unwrap()).len(),
            12
        );
        assert_eq!(
            positive_roots(&build_root_system(ct("G2")).unwrap()).len(),
            6
        );
        assert_eq!(
            positive_roots(&build_root_system(ct("F4")).unwrap()).len(),
            24
        );
        assert_eq!(build_root_system(ct("D4")).unwrap().roots().len(), 24);
    }

    #[test]
    fn weyl_orders() {
        for n in 2..=8 {
            let t = ct(&format!("D{n}"));
            assert_eq!(weyl_order(t), (BigUint::one() << (n - 1)) * factorial(n));
        }
        assert_eq!(weyl_order(ct("E6")), BigUint::from(51840u32));
        assert_eq!(weyl_order(ct("A1")), BigUint::from(2u32));
    }

    #[test]
    fn degree_tables() {
        assert_eq!(degrees(ct("G2")), vec![2, 6]);
        assert_eq!(degrees(ct("F4")), vec![2, 6, 8, 12]);
        assert_eq!(degrees(ct("C2")), vec![2, 4]);
        assert_eq!(degrees(ct("D4")), vec![2, 4, 4, 6]);
        assert_eq!(degrees(ct("E6")), vec![2, 5, 6, 8, 9, 12]);
    }

    #[test]
    fn cartan_matrices() {
        let g2 = build_root_system(ct("G2")).unwrap();
        let c = g2.cartan_matrix();
        assert_eq!((c[0][1], c[1][0]), (-1, -3));
        let b3 = build_root_system(ct("B3")).unwrap();
        assert_eq!(b3.cartan_matrix()[1][2], -2);
        let e6 = build_root_system(ct("E6")).unwrap();
        let expect = [
            [2, 0, -1, 0, 0, 0],
            [0, 2, 0, -1, 0, 0],
            [-1, 0, 2, -1, 0, 0],
            [0, -1, -1, 2, -1, 0],
            [0, 0, 0, -1, 2, -1],
            [0, 0, 0, 0, -1, 2],
        ];
        for i in 0..6 {
            assert_eq!(e6.cartan_matrix()[i], expect[i]);
        }
    }

    #[test]
    fn reflections_permute_roots() {
        for t in all_types().into_iter().filter(|t| t.rank() <= 6) {
            let rs = build_root_system(t).unwrap();
            let set: HashSet<&RationalVector> = rs.roots().iter().collect();
            for r in rs.roots() {
                let s = rs.reflection(r).unwrap();
                for x in rs.roots() {
                    assert!(set.contains(&s.mul_vec(x).unwrap()), "{t}");
                }
            }
        }
    }

    #[test]
    fn root_coordinates_realization() {
        for t in ["A3", "B3", "G2", "F4", "E6"].map(ct) {
            let rs = build_root_system(t).unwrap();
            let rc = rs.in_root_coordinates().unwrap();
            assert_eq!(rc.ambient_dim(), t.rank());
            assert_eq!(rc.cartan_matrix(), rs.cartan_matrix());
            assert_eq!(rc.root_coords(), rs.root_coords());
            for r in rc.roots() {
                assert!(r.iter().all(Rational::is_integer));
            }
        }
    }
}
