//! Truncated power series with exact integer coefficients.
//!
//! [`BigradedSeries`] is indexed by (exterior degree `a`, symmetric degree
//! `b`) and keeps only terms of cohomological degree `a + 2b` up to its
//! truncation. [`Series`] is the single-graded series in `u` obtained by
//! setting `s = u`, `t = u²`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradedSeries {
    truncation: u32,
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl BigradedSeries {
    pub fn zero(truncation: u32) -> Self {
        Self {
            truncation,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(truncation: u32) -> Self {
        Self::from_terms(truncation, [((0, 0), BigInt::one())])
    }

    /// Builds a series from `((a, b), coefficient)` terms, dropping terms
    /// beyond the truncation and summing repeated keys.
    pub fn from_terms(
        truncation: u32,
        terms: impl IntoIterator<Item = ((u32, u32), BigInt)>,
    ) -> Self {
        let mut s = Self::zero(truncation);
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    fn add_term(&mut self, (a, b): (u32, u32), c: BigInt) {
        if a as u64 + 2 * b as u64 > self.truncation as u64 || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((a, b)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(a, b));
        }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// Nonzero terms in `(a, b)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn truncate(&self, truncation: u32) -> Self {
        Self::from_terms(truncation, self.coeffs.iter().map(|(k, c)| (*k, c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let mut out = self.truncate(t);
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(
            self.truncation,
            self.coeffs.iter().map(|(k, x)| (*k, x * c)),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let mut out = Self::zero(t);
        for ((a1, b1), c1) in &self.coeffs {
            for ((a2, b2), c2) in &other.coeffs {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    /// Divides every coefficient by `d`, failing if any division is inexact.
    pub fn div_exact(&self, d: &BigInt) -> Result<Self> {
        let mut out = Self::zero(self.truncation);
        for (k, c) in &self.coeffs {
            if !(c % d).is_zero() {
                return Err(Error::NonIntegral(*k));
            }
            out.add_term(*k, c / d);
        }
        Ok(out)
    }

    /// Substitutes `s = u`, `t = u²`.
    pub fn to_cohomological(&self) -> Series {
        let mut coeffs = vec![BigInt::zero(); self.truncation as usize + 1];
        for ((a, b), c) in &self.coeffs {
            coeffs[(a + 2 * b) as usize] += c;
        }
        Series { coeffs }
    }
}

/// Expands `num(s) / den(t)` to the given truncation. Polynomials are given
/// in ascending powers.
pub fn rational_function_series(
    num: &[Rational],
    den: &[Rational],
    truncation: u32,
) -> Result<BigradedSeries> {
    let d0 = den
        .first()
        .filter(|d| !d.is_zero())
        .ok_or(Error::ZeroConstantTerm)?;
    let d0_inv = d0.recip().expect("nonzero");
    let max_b = truncation as usize / 2;
    let mut inv: Vec<Rational> = Vec::with_capacity(max_b + 1);
    inv.push(d0_inv.clone());
    for k in 1..=max_b {
        let mut acc = Rational::ZERO;
        for j in 1..=k.min(den.len() - 1) {
            if !den[j].is_zero() {
                acc += &(&den[j] * &inv[k - j]);
            }
        }
        inv.push(-(acc * &d0_inv));
    }
    let mut out = BigradedSeries::zero(truncation);
    for (a, na) in num.iter().enumerate() {
        if na.is_zero() {
            continue;
        }
        for (b, ib) in inv.iter().enumerate() {
            if a + 2 * b > truncation as usize {
                break;
            }
            let key = (a as u32, b as u32);
            let c = (na * ib).to_integer().ok_or(Error::NonIntegral(key))?;
            out.add_term(key, c);
        }
    }
    Ok(out)
}

/// A truncated single-graded series `Σ c_n uⁿ`, `n = 0..=truncation`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

impl Series {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        Self { coeffs }
    }

    pub fn one(truncation: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); truncation as usize + 1];
        coeffs[0] = BigInt::one();
        Self { coeffs }
    }

    pub fn truncation(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Multiplies by the sparse polynomial `Σ c·u^e`.
    pub fn mul_poly(&self, poly: &[(u32, i64)]) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n];
        for &(e, c) in poly {
            let e = e as usize;
            for i in 0..n.saturating_sub(e) {
                if !self.coeffs[i].is_zero() {
                    out[i + e] += &self.coeffs[i] * c;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Multiplies by `1 / (1 − u^e)`, `e ≥ 1`.
    pub fn div_one_minus(&self, e: u32) -> Self {
        let e = e as usize;
        let mut out = self.coeffs.clone();
        for i in e..out.len() {
            let prev = out[i - e].clone();
            out[i] += prev;
        }
        Self { coeffs: out }
    }

    /// Multiplies by `1 / (1 + u^e)`, `e ≥ 1`.
    pub fn div_one_plus(&self, e: u32) -> Self {
        let e = e as usize;
        let mut out = self.coeffs.clone();
        for i in e..out.len() {
            let prev = out[i - e].clone();
            out[i] -= prev;
        }
        Self { coeffs: out }
    }

    /// `∏ (1 + u^{2d−1}) / (1 − u^{2d})` over the given degrees `d`.
    pub fn product_form(degrees: &[u32], truncation: u32) -> Self {
        degrees.iter().fold(Self::one(truncation), |s, &d| {
            s.mul_poly(&[(0, 1), (2 * d - 1, 1)]).div_one_minus(2 * d)
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (n, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "u")?,
                (1, false) => write!(f, "{c}u")?,
                (_, true) => write!(f, "u^{n}")?,
                (_, false) => write!(f, "{c}u^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^{})", self.coeffs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn poly_series(trunc: u32, terms: &[((u32, u32), i64)]) -> BigradedSeries {
        BigradedSeries::from_terms(trunc, terms.iter().map(|&(k, c)| (k, bi(c))))
    }

    #[test]
    fn add_zero() {
        let s = poly_series(6, &[((0, 0), 1), ((1, 2), -3)]);
        assert_eq!(s.add(&BigradedSeries::zero(6)), s);
    }

    #[test]
    fn exterior_times_geometric() {
        let one_plus_s = poly_series(4, &[((0, 0), 1), ((1, 0), 1)]);
        let geo = rational_function_series(&[q(1)], &[q(1), q(-1)], 4).unwrap();
        let prod = one_plus_s.mul(&geo);
        let expected = poly_series(
            4,
            &[
                ((0, 0), 1),
                ((1, 0), 1),
                ((0, 1), 1),
                ((1, 1), 1),
                ((0, 2), 1),
            ],
        );
        assert_eq!(prod, expected);
        assert_eq!(
            prod,
            rational_function_series(&[q(1), q(1)], &[q(1), q(-1)], 4).unwrap()
        );
    }

    #[test]
    fn inverse_pair() {
        let s = poly_series(10, &[((0, 0), 2), ((1, 1), 1), ((2, 3), 5)]);
        let f = poly_series(10, &[((0, 0), 1), ((0, 2), -1)]);
        let g = rational_function_series(&[q(1)], &[q(1), q(0), q(-1)], 10).unwrap();
        assert_eq!(s.mul(&f).mul(&g), s);
    }

    #[test]
    fn geometric_expansions() {
        let s = rational_function_series(&[q(1), q(0), q(-1)], &[q(1), q(0), q(-1)], 6).unwrap();
        let expected = poly_series(6, &[((0, 0), 1), ((2, 0), -1), ((0, 2), 1), ((2, 2), -1)]);
        assert_eq!(s, expected);

        let sq = rational_function_series(&[q(1)], &[q(1), q(-2), q(1)], 20).unwrap();
        for b in 0..=10u32 {
            assert_eq!(sq.coeff(0, b), bi(b as i64 + 1));
        }
    }

    #[test]
    fn rational_function_errors() {
        assert!(matches!(
            rational_function_series(&[q(1)], &[q(0), q(1)], 4),
            Err(Error::ZeroConstantTerm)
        ));
        assert!(matches!(
            rational_function_series(&[q(1)], &[q(2)], 4),
            Err(Error::NonIntegral((0, 0)))
        ));
    }

    #[test]
    fn cohomological_substitution() {
        // (1 + st)/(1 − t²)  ->  (1 + u³)/(1 − u⁴)
        let s = rational_function_series(&[q(1)], &[q(1), q(0), q(-1)], 12)
            .unwrap()
            .mul(&poly_series(12, &[((0, 0), 1), ((1, 1), 1)]));
        assert_eq!(s.to_cohomological(), Series::product_form(&[2], 12));

        // (1 + s)/(1 − t)  ->  1/(1 − u)
        let triv = rational_function_series(&[q(1), q(1)], &[q(1), q(-1)], 9).unwrap();
        assert!(triv.to_cohomological().coeffs().iter().all(|c| c.is_one()));
    }

    #[test]
    fn product_form_g2() {
        let s = Series::product_form(&[2, 6], 16);
        let expect: Vec<i64> = vec![1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 2, 2, 0, 1, 3, 2];
        assert_eq!(
            s.coeffs(),
            expect.into_iter().map(bi).collect::<Vec<_>>().as_slice()
        );
    }

    proptest! {
        #[test]
        fn quotient_times_denominator(
            num in proptest::collection::vec(-3i64..4, 1..4),
            tail in proptest::collection::vec(-3i64..4, 0..4),
            trunc in 0u32..16,
        ) {
            let mut den = vec![1i64];
            den.extend(tail);
            let numq: Vec<Rational> = num.iter().map(|&x| q(x)).collect();
            let denq: Vec<Rational> = den.iter().map(|&x| q(x)).collect();
            let quotient = rational_function_series(&numq, &denq, trunc).unwrap();
            let den_series = BigradedSeries::from_terms(
                trunc,
                den.iter().enumerate().map(|(b, &c)| ((0, b as u32), bi(c))),
            );
            let num_series = BigradedSeries::from_terms(
                trunc,
                num.iter().enumerate().map(|(a, &c)| ((a as u32, 0), bi(c))),
            );
            prop_assert_eq!(quotient.mul(&den_series), num_series);
        }
    }
}
