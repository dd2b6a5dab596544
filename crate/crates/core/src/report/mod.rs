//! End-to-end pipeline from a Lie type and twist to the Poincaré series of
//! the twisted loop group's classifying space, plus recognition, checks,
//! and output.

mod cli;
mod oracle;
mod render;

pub use cli::cli_main;
pub use oracle::{brute_force_invariant_dims, ORACLE_MAX_DEGREE, ORACLE_MAX_DIM};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{BigradedSeries, Series};
use crate::rootsys::{build_root_system, weyl_order, CartanType};
use crate::twist::{
    classical_representative_group, folded_root_system, make_automorphism, orbit_count_criterion,
    positive_orbits, wsigma_preserves_folded, AutomorphismSpec, DiagramAutomorphism,
    OrbitCriterion, TwistClass,
};
use crate::weyl::{
    cohomological_series, generate_group_capped, restrict_to_subspace, subspace_stabilizer,
    super_molien_with, DEFAULT_ELEMENT_CAP,
};

pub const DEFAULT_TRUNCATION: u32 = 50;

/// Untwisted types whose Weyl group is larger than this are answered from
/// the degree table instead of by enumeration.
pub const TABLE_THRESHOLD: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub run_oracle: bool,
    pub workers: usize,
    pub element_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            run_oracle: false,
            workers: 1,
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub cartan_type: CartanType,
    pub automorphism: AutomorphismSpec,
    pub truncation: u32,
    pub options: RunOptions,
}

impl TwistSpec {
    pub fn new(cartan_type: CartanType, automorphism: AutomorphismSpec) -> Self {
        Self {
            cartan_type,
            automorphism,
            truncation: DEFAULT_TRUNCATION,
            options: RunOptions::default(),
        }
    }

    pub fn with_truncation(mut self, truncation: u32) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.options.workers = workers;
        self
    }

    pub fn with_oracle(mut self, run: bool) -> Self {
        self.options.run_oracle = run;
        self
    }
}

/// `Λ(x_{2d−1} : d) ⊗ F[y_{2d} : d]` over a multiset of degrees `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub degrees: Vec<u32>,
}

impl ClosedForm {
    pub fn exterior_degrees(&self) -> Vec<u32> {
        self.degrees.iter().map(|d| 2 * d - 1).collect()
    }

    pub fn symmetric_degrees(&self) -> Vec<u32> {
        self.degrees.iter().map(|d| 2 * d).collect()
    }
}

#[derive(Clone, Debug)]
pub struct TwistReport {
    pub spec: TwistSpec,
    pub folded_type: CartanType,
    pub fixed_group_note: String,
    pub orbit_criterion: OrbitCriterion,
    /// orbit size → number of orbits, over positive roots
    pub positive_orbit_sizes: BTreeMap<usize, usize>,
    pub wsigma_check: bool,
    pub wsigma_order: BigUint,
    pub restricted_image_order: BigUint,
    pub bigraded: Option<BigradedSeries>,
    pub series: Series,
    pub closed_form: Option<ClosedForm>,
    pub excluded_characteristics: Vec<u64>,
    /// `Some(agrees)` when the oracle ran.
    pub oracle_agrees: Option<bool>,
    /// For the SU(2m) flip: whether the SO(2m)-with-Z/2 representative
    /// gives the same series.
    pub representative_agrees: Option<bool>,
    pub notes: Vec<String>,
}

impl TwistReport {
    pub fn to_json(&self) -> Result<String> {
        render::json(self)
    }

    pub fn to_text(&self) -> String {
        render::text(self)
    }
}

fn prime_factors(n: &BigUint) -> Vec<u64> {
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while rest > BigUint::one() {
        if BigUint::from(p) * BigUint::from(p) > rest {
            out.push(
                rest.to_u64()
                    .expect("Weyl group orders have small prime factors"),
            );
            break;
        }
        if (&rest % p).is_zero() {
            out.push(p);
            while (&rest % p).is_zero() {
                rest /= p;
            }
        }
        p += 1;
    }
    out
}

fn excluded_for(a: &DiagramAutomorphism) -> Vec<u64> {
    let catalog = a.catalog();
    let components = catalog
        .components_canonical
        .max(catalog.components_classical);
    let mut primes = prime_factors(a.base().weyl_order());
    primes.extend(prime_factors(&BigUint::from(a.order())));
    primes.extend(prime_factors(&BigUint::from(components)));
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// Primes dividing `|W|`, the order of the outer class, or the number of
/// components of the fixed subgroup (largest over both representatives).
pub fn excluded_characteristics(spec: &TwistSpec) -> Result<Vec<u64>> {
    let rs = build_root_system(spec.cartan_type)?;
    Ok(excluded_for(&make_automorphism(&rs, &spec.automorphism)?))
}

/// Smallest truncation at which a closed form over `degrees` is certified.
pub fn required_truncation(degrees: &[u32]) -> u32 {
    degrees.iter().max().map_or(1, |d| 4 * d + 1)
}

/// Checks `series · ∏(1 − u^{2d}) = ∏(1 + u^{2d−1})` to the truncation.
pub fn recognize_closed_form(series: &Series, degrees: &[u32]) -> Result<Option<ClosedForm>> {
    let required = required_truncation(degrees);
    if series.truncation() < required {
        return Err(Error::TruncationTooSmall {
            truncation: series.truncation(),
            required,
        });
    }
    let mut lhs = series.clone();
    let mut rhs = Series::one(series.truncation());
    for &d in degrees {
        lhs = lhs.mul_poly(&[(0, 1), (2 * d, -1)]);
        rhs = rhs.mul_poly(&[(0, 1), (2 * d - 1, 1)]);
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    Ok((lhs == rhs).then_some(ClosedForm { degrees: sorted }))
}

/// Recovers degrees by peeling off the lowest exterior generator, with
/// `Σ(2d−1) ≤ truncation/2`, then certifies with [`recognize_closed_form`].
pub fn search_closed_form(series: &Series) -> Option<ClosedForm> {
    let budget = series.truncation() / 2;
    let mut rest = series.clone();
    let mut degrees = Vec::new();
    let mut used = 0u32;
    while let Some(k) = (1..rest.coeffs().len()).find(|&k| !rest.coeffs()[k].is_zero()) {
        if k % 2 == 0 || rest.coeffs()[k] < BigInt::zero() || used + k as u32 > budget {
            return None;
        }
        let d = (k as u32).div_ceil(2);
        used += k as u32;
        degrees.push(d);
        rest = rest
            .mul_poly(&[(0, 1), (2 * d, -1)])
            .div_one_plus(2 * d - 1);
    }
    recognize_closed_form(series, &degrees).ok().flatten()
}

fn positive_orbit_sizes(a: &DiagramAutomorphism) -> BTreeMap<usize, usize> {
    let mut sizes = BTreeMap::new();
    for o in positive_orbits(a) {
        *sizes.entry(o.len()).or_insert(0) += 1;
    }
    sizes
}

fn describe_orbits(sizes: &BTreeMap<usize, usize>) -> String {
    let total: usize = sizes.values().sum();
    let parts: Vec<String> = sizes
        .iter()
        .map(|(s, c)| format!("{c} of size {s}"))
        .collect();
    format!("positive-root orbits: {total} ({})", parts.join(", "))
}

fn common_notes(a: &DiagramAutomorphism, notes: &mut Vec<String>) {
    let catalog = a.catalog();
    notes.push(catalog.fixed_group_note.clone());
    notes.push(format!(
        "components of the fixed subgroup: {} for the diagram automorphism, {} for the classical representative",
        catalog.components_canonical, catalog.components_classical
    ));
    if let Some(h) = &catalog.classical_hypothesis {
        notes.push(format!(
            "classically stated coefficient hypothesis: {h}; excluded characteristics above are the primes dividing \
             |W|, the order of the outer class, and the number of components of the fixed subgroup"
        ));
    }
    if matches!(
        a.class(),
        TwistClass::FlipAOdd { .. } | TwistClass::FlipAEven { .. }
    ) {
        notes.push(format!(
            "U({n}) with entrywise complex conjugation has the same ring for characteristics coprime to 2 and {n}",
            n = a.base().rank() + 1
        ));
    }
    notes.push(
        "a quotient by a finite central subgroup K has the same ring for characteristics coprime to |K|".into(),
    );
}

/// Runs the full pipeline.
pub fn compute(spec: &TwistSpec) -> Result<TwistReport> {
    let t = spec.cartan_type;
    let truncation = spec.truncation;
    let base = build_root_system(t)?.in_root_coordinates()?;
    let a = make_automorphism(&base, &spec.automorphism)?;
    let catalog = a.catalog();
    let order = base.weyl_order();
    let mut notes = Vec::new();
    common_notes(&a, &mut notes);
    let orbit_criterion = orbit_count_criterion(&a);
    let orbit_sizes = positive_orbit_sizes(&a);
    notes.push(describe_orbits(&orbit_sizes));

    if a.order() == 1 && *order > BigUint::from(TABLE_THRESHOLD) {
        let degrees = base.degrees().to_vec();
        notes.push(format!(
            "|W| = {order} exceeds {TABLE_THRESHOLD}: series and closed form taken from the degree table, the group \
             was not enumerated"
        ));
        return Ok(TwistReport {
            spec: spec.clone(),
            folded_type: t,
            fixed_group_note: catalog.fixed_group_note,
            orbit_criterion,
            positive_orbit_sizes: orbit_sizes,
            wsigma_check: true,
            wsigma_order: order.clone(),
            restricted_image_order: order.clone(),
            bigraded: None,
            series: Series::product_form(&degrees, truncation),
            closed_form: Some(ClosedForm { degrees }),
            excluded_characteristics: excluded_for(&a),
            oracle_agrees: None,
            representative_agrees: None,
            notes,
        });
    }
    if *order > BigUint::from(spec.options.element_cap) {
        return Err(Error::GroupTooLarge {
            cap: spec.options.element_cap,
        });
    }

    let workers = spec.options.workers;
    let w = generate_group_capped(&base.simple_reflections()?, spec.options.element_cap)?;
    let folding = folded_root_system(&a)?;
    let v = &folding.fixed_basis;
    let stab = subspace_stabilizer(&w, v)?;
    let restricted = restrict_to_subspace(&stab, v)?;
    let bigraded = super_molien_with(&restricted, truncation, workers)?;
    let series = cohomological_series(&bigraded);
    let preserves = wsigma_preserves_folded(&restricted, &folding);

    let folded_weyl = weyl_order(folding.folded_type);
    let restricted_order = BigUint::from(restricted.order());
    notes.push(if restricted_order == folded_weyl {
        format!(
            "restricted W_sigma image has order {restricted_order} = |W({})|",
            folding.folded_type
        )
    } else {
        format!(
            "restricted W_sigma image has order {restricted_order}, |W({})| = {folded_weyl}",
            folding.folded_type
        )
    });

    let folded_degrees = build_root_system(folding.folded_type)?.degrees().to_vec();
    let closed_form = if truncation < required_truncation(&folded_degrees) {
        notes.push(format!(
            "closed form not certified: truncation {truncation} is below {}",
            required_truncation(&folded_degrees)
        ));
        None
    } else if let Some(cf) = recognize_closed_form(&series, &folded_degrees)? {
        Some(cf)
    } else {
        let found = search_closed_form(&series);
        notes.push(match &found {
            Some(cf) => format!(
                "closed form found by degree search, degrees {:?}",
                cf.degrees
            ),
            None => format!(
                "no closed form over the {} degrees or by degree search",
                folding.folded_type
            ),
        });
        found
    };

    let oracle_agrees = if spec.options.run_oracle {
        let degree = truncation.min(ORACLE_MAX_DEGREE);
        match brute_force_invariant_dims(&restricted, degree) {
            Ok(dims) => {
                let agrees = dims == bigraded.truncate(degree);
                notes.push(format!(
                    "direct invariant count up to degree {degree}: {}",
                    if agrees {
                        "agrees with the series"
                    } else {
                        "DISAGREES with the series"
                    }
                ));
                Some(agrees)
            }
            Err(Error::GuardExceeded(why)) => {
                notes.push(format!("direct invariant count skipped: {why}"));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let representative_agrees = match classical_representative_group(&a)? {
        Some(g) => {
            let other = cohomological_series(&super_molien_with(&g, truncation, workers)?);
            let agrees = other == series;
            notes.push(format!(
                "SO({}) representative with Z/2 acting by an orientation-reversing change of basis: series {}",
                base.rank() + 1,
                if agrees { "agrees" } else { "DIFFERS" }
            ));
            Some(agrees)
        }
        None => None,
    };

    Ok(TwistReport {
        spec: spec.clone(),
        folded_type: folding.folded_type,
        fixed_group_note: catalog.fixed_group_note,
        orbit_criterion,
        positive_orbit_sizes: orbit_sizes,
        wsigma_check: preserves,
        wsigma_order: BigUint::from(stab.order()),
        restricted_image_order: restricted_order,
        bigraded: Some(bigraded),
        series,
        closed_form,
        excluded_characteristics: excluded_for(&a),
        oracle_agrees,
        representative_agrees,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Series;

    fn spec(t: &str, auto: &str) -> TwistSpec {
        TwistSpec::new(t.parse().unwrap(), auto.parse().unwrap())
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(&BigUint::from(51840u32)), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigUint::from(1u32)), Vec::<u64>::new());
        assert_eq!(
            prime_factors(&BigUint::from(2u32 * 7 * 7 * 11)),
            vec![2, 7, 11]
        );
    }

    #[test]
    fn excluded_examples() {
        assert_eq!(
            excluded_characteristics(&spec("D4", "triality")).unwrap(),
            vec![2, 3]
        );
        assert_eq!(
            excluded_characteristics(&spec("E6", "flip")).unwrap(),
            vec![2, 3, 5]
        );
        assert_eq!(
            excluded_characteristics(&spec("A1", "identity")).unwrap(),
            vec![2]
        );
        assert_eq!(
            excluded_characteristics(&spec("A4", "flip")).unwrap(),
            vec![2, 3, 5]
        );
    }

    #[test]
    fn recognition() {
        let g2 = Series::product_form(&[2, 6], 30);
        assert_eq!(
            recognize_closed_form(&g2, &[6, 2]).unwrap(),
            Some(ClosedForm {
                degrees: vec![2, 6]
            })
        );
        let a1 = Series::product_form(&[2], 20);
        assert_eq!(recognize_closed_form(&a1, &[3]).unwrap(), None);
        assert!(matches!(
            recognize_closed_form(&a1, &[6]),
            Err(Error::TruncationTooSmall {
                truncation: 20,
                required: 25
            })
        ));
    }

    #[test]
    fn closed_form_degrees() {
        let cf = ClosedForm {
            degrees: vec![2, 6],
        };
        assert_eq!(cf.exterior_degrees(), vec![3, 11]);
        assert_eq!(cf.symmetric_degrees(), vec![4, 12]);
    }

    #[test]
    fn degree_search() {
        for degrees in [
            vec![2],
            vec![2, 6],
            vec![2, 3, 4],
            vec![2, 2, 4],
            vec![1, 2],
        ] {
            let s = Series::product_form(&degrees, 40);
            assert_eq!(search_closed_form(&s), Some(ClosedForm { degrees }));
        }
        // 1/(1−u)² = ((1+u)/(1−u²))², a product in disguise
        let square = Series::from_coeffs((0..=20).map(|k| BigInt::from(k + 1)).collect());
        assert_eq!(
            search_closed_form(&square),
            Some(ClosedForm {
                degrees: vec![1, 1]
            })
        );
        let even_start = Series::from_coeffs(
            (0..=20)
                .map(|k| BigInt::from(u8::from(k % 2 == 0)))
                .collect(),
        );
        assert_eq!(search_closed_form(&even_start), None);
        let mut tail = Series::product_form(&[2], 20).coeffs().to_vec();
        tail[17] += 1;
        assert_eq!(search_closed_form(&Series::from_coeffs(tail)), None);
    }

    #[test]
    fn a1_identity() {
        let r = compute(&spec("A1", "identity")).unwrap();
        assert_eq!(r.series, Series::product_form(&[2], 50));
        assert_eq!(r.closed_form, Some(ClosedForm { degrees: vec![2] }));
        assert_eq!(r.excluded_characteristics, vec![2]);
        assert!(r.wsigma_check);
    }

    #[test]
    fn a3_flip_is_c2() {
        let r = compute(&spec("A3", "flip").with_oracle(true)).unwrap();
        assert_eq!(r.folded_type.to_string(), "C2");
        assert_eq!(
            r.closed_form,
            Some(ClosedForm {
                degrees: vec![2, 4]
            })
        );
        assert_eq!(r.restricted_image_order, BigUint::from(8u32));
        assert_eq!(r.oracle_agrees, Some(true));
        assert_eq!(r.representative_agrees, Some(true));
    }

    #[test]
    fn small_truncation_is_reported() {
        let r = compute(&spec("G2", "identity").with_truncation(10)).unwrap();
        assert!(r.closed_form.is_none());
        assert!(r.notes.iter().any(|n| n.contains("not certified")));
    }

    #[test]
    fn table_path_and_caps() {
        let r = compute(&spec("E8", "identity")).unwrap();
        assert!(r.bigraded.is_none());
        assert_eq!(
            r.closed_form.unwrap().degrees,
            vec![2, 8, 12, 14, 18, 20, 24, 30]
        );
        assert_eq!(r.excluded_characteristics, vec![2, 3, 5, 7]);
        assert!(matches!(
            compute(&spec("E8", "flip")),
            Err(Error::UnsupportedAutomorphism(_))
        ));
        let mut capped = spec("B4", "identity");
        capped.options.element_cap = 100;
        assert!(compute(&capped).unwrap_err().is_resource_cap());
    }
}
