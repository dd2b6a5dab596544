//! Finite reflection groups as exact matrix groups, subspace stabilizers,
//! restriction, and super-Molien series.

mod group;

pub use group::{
    generate_group, generate_group_capped, reflection_matrix, reflection_matrix_with_gram,
    restrict_to_subspace, subspace_stabilizer, CharpolyBuckets, FiniteMatrixGroup, SubspaceBasis,
    DEFAULT_ELEMENT_CAP,
};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::Result;
use crate::exact::{dets_from_charpoly, rational_function_series, BigradedSeries, Series};
use crate::rootsys::RootSystem;

/// The Weyl group of `rs`, generated by its simple reflections in the
/// ambient coordinates of `rs`.
pub fn weyl_group(rs: &RootSystem) -> Result<FiniteMatrixGroup> {
    generate_group(&rs.simple_reflections()?)
}

/// `(1/|G|) Σ_g det(1 + s·g) / det(1 − t·g)`, the bigraded dimension series
/// of `(Λ(V) ⊗ S(V))^G`. One expansion per characteristic polynomial.
pub fn super_molien(group: &FiniteMatrixGroup, truncation: u32) -> Result<BigradedSeries> {
    super_molien_with(group, truncation, 1)
}

/// [`super_molien`] with bucket expansion spread over `workers` threads.
pub fn super_molien_with(
    group: &FiniteMatrixGroup,
    truncation: u32,
    workers: usize,
) -> Result<BigradedSeries> {
    let buckets: Vec<_> = group.charpoly_buckets_with(workers).iter().collect();
    let parts: Vec<BigradedSeries> = group::with_workers(workers, || {
        buckets
            .par_iter()
            .map(|(cp, mult)| {
                let (num, den) = dets_from_charpoly(cp);
                Ok(rational_function_series(&num, &den, truncation)?.scale(&BigInt::from(**mult)))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let total = parts
        .iter()
        .fold(BigradedSeries::zero(truncation), |acc, s| acc.add(s));
    total.div_exact(&BigInt::from(group.order()))
}

/// Single-graded series with exterior generators in degree 1 and symmetric
/// generators in degree 2 (`s = u`, `t = u²`).
pub fn cohomological_series(s: &BigradedSeries) -> Series {
    s.to_cohomological()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Rational, RationalMatrix};
    use crate::rootsys::{build_root_system, CartanType};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ct(s: &str) -> CartanType {
        s.parse().unwrap()
    }

    #[test]
    fn reflection_examples() {
        let s = reflection_matrix(&[q(1), q(-1), q(0)], 3).unwrap();
        let swap =
            RationalMatrix::from_int_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(s, swap);
        assert!(s.mul(&s).unwrap().is_identity());
        let fixed = vec![q(2), q(2), q(5)];
        assert_eq!(s.mul_vec(&fixed).unwrap(), fixed);
        assert!(matches!(
            reflection_matrix(&[q(0), q(0)], 2),
            Err(crate::Error::ZeroRoot)
        ));
    }

    #[test]
    fn small_group_orders() {
        let a1 = generate_group(&[reflection_matrix(&[q(1)], 1).unwrap()]).unwrap();
        assert_eq!(a1.order(), 2);
        assert!(a1.is_closed());
        let d4 = weyl_group(&build_root_system(ct("D4")).unwrap()).unwrap();
        assert_eq!(d4.order(), 192);
        let sum: u64 = d4.charpoly_buckets().values().sum();
        assert_eq!(sum, 192);
    }

    #[test]
    fn cap_is_enforced() {
        let rs = build_root_system(ct("B3")).unwrap();
        let err = generate_group_capped(&rs.simple_reflections().unwrap(), 10).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn infinite_order_generator_rejected() {
        let shear = RationalMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(generate_group(&[shear]).is_err());
    }

    #[test]
    fn stabilizer_trivial_subspaces() {
        let w = weyl_group(&build_root_system(ct("A2")).unwrap()).unwrap();
        let full = SubspaceBasis::full(3);
        let zero = SubspaceBasis::new(3, vec![]).unwrap();
        assert_eq!(subspace_stabilizer(&w, &full).unwrap().order(), 6);
        assert_eq!(subspace_stabilizer(&w, &zero).unwrap().order(), 6);
        let r =
            restrict_to_subspace(&FiniteMatrixGroup::trivial(3), &SubspaceBasis::full(3)).unwrap();
        assert_eq!(r.order(), 1);
    }

    #[test]
    fn restriction_requires_invariance() {
        let w = weyl_group(&build_root_system(ct("A2")).unwrap()).unwrap();
        let line = SubspaceBasis::new(3, vec![vec![q(1), q(0), q(0)]]).unwrap();
        assert!(matches!(
            restrict_to_subspace(&w, &line),
            Err(crate::Error::NotInvariant)
        ));
        let stab = subspace_stabilizer(&w, &line).unwrap();
        // the reflection in e2 − e3 fixes e1
        assert_eq!(stab.order(), 2);
        assert_eq!(restrict_to_subspace(&stab, &line).unwrap().order(), 1);
    }

    #[test]
    fn dependent_basis_rejected() {
        assert!(SubspaceBasis::new(2, vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_err());
    }

    #[test]
    fn trivial_group_series() {
        for r in 1..=3 {
            let s = super_molien(&FiniteMatrixGroup::trivial(r), 10).unwrap();
            // (1+s)^r / (1−t)^r
            let mut expect = BigradedSeries::one(10);
            for _ in 0..r {
                expect = expect
                    .mul(&rational_function_series(&[q(1), q(1)], &[q(1), q(-1)], 10).unwrap());
            }
            assert_eq!(s, expect);
        }
        let one_dim =
            cohomological_series(&super_molien(&FiniteMatrixGroup::trivial(1), 12).unwrap());
        assert!(one_dim.coeffs().iter().all(|c| *c == BigInt::from(1)));
    }

    #[test]
    fn a1_series() {
        let g = generate_group(&[reflection_matrix(&[q(1)], 1).unwrap()]).unwrap();
        let s = super_molien(&g, 20).unwrap();
        // (1 + st)/(1 − t²)
        let expect = BigradedSeries::from_terms(
            20,
            (0..=10u32).flat_map(|k| {
                [
                    ((0, 2 * k), BigInt::from(1)),
                    ((1, 2 * k + 1), BigInt::from(1)),
                ]
            }),
        );
        assert_eq!(s, expect);
        assert_eq!(cohomological_series(&s), Series::product_form(&[2], 20));
    }

    // Element-by-element average, independent of the bucketing and of
    // Berkowitz: det(I + x·w) is interpolated from Gaussian determinants.
    fn molien_by_elements(g: &FiniteMatrixGroup, trunc: u32) -> BigradedSeries {
        let mut acc = BigradedSeries::zero(trunc);
        for w in g.elements() {
            let n = w.rows();
            let ident = RationalMatrix::identity(n);
            let xs: Vec<i64> = (0..=n as i64).collect();
            let ys: Vec<Rational> = xs
                .iter()
                .map(|&x| gauss_det(&ident.add(&w.scale(&q(x))).unwrap()))
                .collect();
            let plus = interpolate(&xs, &ys);
            let minus: Vec<Rational> = plus
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
                .collect();
            acc = acc.add(&rational_function_series(&plus, &minus, trunc).unwrap());
        }
        acc.div_exact(&BigInt::from(g.order())).unwrap()
    }

    fn gauss_det(m: &RationalMatrix) -> Rational {
        let n = m.rows();
        let mut a = m.clone();
        let mut det = Rational::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Rational::ZERO;
            };
            if p != c {
                for j in 0..n {
                    let t = a.get(p, j).clone();
                    a.set(p, j, a.get(c, j).clone());
                    a.set(c, j, t);
                }
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det = &det * &piv;
            for i in c + 1..n {
                let f = a.get(i, c) / &piv;
                for j in c..n {
                    let x = a.get(i, j) - &(&f * a.get(c, j));
                    a.set(i, j, x);
                }
            }
        }
        det
    }

    fn interpolate(xs: &[i64], ys: &[Rational]) -> Vec<Rational> {
        let n = xs.len();
        let mut coeffs = vec![Rational::ZERO; n];
        for i in 0..n {
            let mut basis = vec![Rational::ONE];
            let mut denom = Rational::ONE;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut next = vec![Rational::ZERO; basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= &(b * &q(xs[j]));
                }
                basis = next;
                denom = &denom * &q(xs[i] - xs[j]);
            }
            let f = &ys[i] / &denom;
            for (k, b) in basis.iter().enumerate() {
                coeffs[k] += &(b * &f);
            }
        }
        coeffs
    }

    #[test]
    fn buckets_agree_with_elementwise_average() {
        for t in ["A1", "A2", "B2", "G2", "A3", "B3"] {
            let w = weyl_group(
                &build_root_system(ct(t))
                    .unwrap()
                    .in_root_coordinates()
                    .unwrap(),
            )
            .unwrap();
            assert!(w.order() <= 48);
            assert_eq!(
                super_molien(&w, 16).unwrap(),
                molien_by_elements(&w, 16),
                "{t}"
            );
        }
    }

    #[test]
    fn solomon_identity_small_types() {
        for t in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let rs = build_root_system(ct(t))
                .unwrap()
                .in_root_coordinates()
                .unwrap();
            let w = weyl_group(&rs).unwrap();
            assert_eq!(
                BigInt::from(w.order()),
                BigInt::from(rs.weyl_order().clone())
            );
            let s = super_molien(&w, 30).unwrap();
            assert!(s.is_nonnegative());
            assert_eq!(s.coeff(0, 0), BigInt::from(1));
            // ∏ (1 + s t^{d−1}) / (1 − t^d)
            let mut expect = BigradedSeries::one(30);
            for &d in rs.degrees() {
                let mut num = BigradedSeries::from_terms(
                    30,
                    [((0, 0), BigInt::from(1)), ((1, d - 1), BigInt::from(1))],
                );
                let mut den = vec![Rational::ZERO; d as usize + 1];
                den[0] = Rational::ONE;
                den[d as usize] = q(-1);
                num = num.mul(&rational_function_series(&[Rational::ONE], &den, 30).unwrap());
                expect = expect.mul(&num);
            }
            assert_eq!(s, expect, "{t}");
        }
    }

    #[test]
    fn workers_do_not_change_result() {
        let rs = build_root_system(ct("B3")).unwrap();
        let w1 = weyl_group(&rs).unwrap();
        let w4 = weyl_group(&rs).unwrap();
        assert_eq!(
            super_molien_with(&w1, 24, 1).unwrap(),
            super_molien_with(&w4, 24, 4).unwrap()
        );
    }
}
