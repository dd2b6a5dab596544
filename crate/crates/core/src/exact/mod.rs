//! Exact rational linear algebra and truncated power series.

mod matrix;
mod rational;
mod series;

pub use matrix::{dot, RationalMatrix, RationalVector};
pub use rational::Rational;
pub use series::{rational_function_series, BigradedSeries, Series};

use crate::error::Result;

/// Exact matrix product; fails on a dimension mismatch.
pub fn mat_mul(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    a.mul(b)
}

/// Characteristic polynomial `det(λI − M)`, ascending coefficients, monic.
pub fn charpoly(m: &RationalMatrix) -> Result<Vec<Rational>> {
    m.charpoly()
}

/// Given the ascending coefficients of a monic `det(λI − M)`, returns
/// `(det(1 + sM), det(1 − tM))` as ascending polynomials in `s` and `t`.
pub fn dets_from_charpoly(cp: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let n = cp.len() - 1;
    let plus = (0..=n)
        .map(|j| {
            if j % 2 == 0 {
                cp[n - j].clone()
            } else {
                -&cp[n - j]
            }
        })
        .collect();
    let minus = (0..=n).map(|j| cp[n - j].clone()).collect();
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn dets_examples() {
        assert_eq!(
            dets_from_charpoly(&qs(&[-1, 1])),
            (qs(&[1, 1]), qs(&[1, -1]))
        );
        assert_eq!(
            dets_from_charpoly(&qs(&[-1, 0, 1])),
            (qs(&[1, 0, -1]), qs(&[1, 0, -1]))
        );
        assert_eq!(
            dets_from_charpoly(&qs(&[1, 1, 1])),
            (qs(&[1, -1, 1]), qs(&[1, 1, 1]))
        );
    }
}
