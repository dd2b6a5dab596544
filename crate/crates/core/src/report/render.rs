use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::ser::{Error as _, SerializeSeq};
use serde::{Serialize, Serializer};

use super::TwistReport;
use crate::error::{Error, Result};

/// Exact integers as JSON numbers of any size.
struct Exact(String);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&self.0)
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

struct Coefficients<'a>(&'a [BigInt]);

impl Serialize for Coefficients<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in self.0 {
            seq.serialize_element(&Exact(c.to_string()))?;
        }
        seq.end()
    }
}

#[derive(Serialize)]
struct Input {
    #[serde(rename = "type")]
    family: String,
    rank: usize,
    auto: String,
    truncation: u32,
    check: bool,
}

#[derive(Serialize)]
struct OrbitCriterion {
    orbits: usize,
    folded_roots: usize,
    holds: bool,
}

#[derive(Serialize)]
struct Wsigma {
    order: Exact,
    restricted_order: Exact,
    preserves_folded: bool,
}

#[derive(Serialize)]
struct ClosedForm {
    x_degrees: Vec<u32>,
    y_degrees: Vec<u32>,
}

#[derive(Serialize)]
struct Report<'a> {
    input: Input,
    folded_type: String,
    orbit_criterion: OrbitCriterion,
    wsigma: Wsigma,
    series: Coefficients<'a>,
    closed_form: Option<ClosedForm>,
    excluded_characteristics: &'a [u64],
    notes: &'a [String],
}

pub(super) fn json(r: &TwistReport) -> Result<String> {
    let t = r.spec.cartan_type;
    let view = Report {
        input: Input {
            family: t.family().letter().to_string(),
            rank: t.rank(),
            auto: r.spec.automorphism.to_string(),
            truncation: r.spec.truncation,
            check: r.spec.options.run_oracle,
        },
        folded_type: r.folded_type.to_string(),
        orbit_criterion: OrbitCriterion {
            orbits: r.orbit_criterion.orbit_count,
            folded_roots: r.orbit_criterion.folded_root_count,
            holds: r.orbit_criterion.holds,
        },
        wsigma: Wsigma {
            order: Exact(r.wsigma_order.to_string()),
            restricted_order: Exact(r.restricted_image_order.to_string()),
            preserves_folded: r.wsigma_check,
        },
        series: Coefficients(r.series.coeffs()),
        closed_form: r.closed_form.as_ref().map(|cf| ClosedForm {
            x_degrees: cf.exterior_degrees(),
            y_degrees: cf.symmetric_degrees(),
        }),
        excluded_characteristics: &r.excluded_characteristics,
        notes: &r.notes,
    };
    let mut out =
        serde_json::to_string_pretty(&view).map_err(|e| Error::Inconsistent(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

pub(super) fn text(r: &TwistReport) -> String {
    let mut s = String::new();
    let oc = &r.orbit_criterion;
    let _ = writeln!(s, "type:            {}", r.spec.cartan_type);
    let _ = writeln!(s, "automorphism:    {}", r.spec.automorphism);
    let _ = writeln!(s, "folded type:     {}", r.folded_type);
    let _ = writeln!(
        s,
        "orbit criterion: {} orbits, {} folded roots ({})",
        oc.orbit_count,
        oc.folded_root_count,
        if oc.holds { "holds" } else { "inconclusive" }
    );
    let _ = writeln!(
        s,
        "W_sigma:         order {}, restricted order {}, preserves folded roots: {}",
        r.wsigma_order,
        r.restricted_image_order,
        if r.wsigma_check { "yes" } else { "no" }
    );
    let _ = writeln!(s, "series:          {}", r.series);
    match &r.closed_form {
        Some(cf) => {
            let xs: Vec<String> = cf
                .exterior_degrees()
                .iter()
                .map(|d| format!("x{d}"))
                .collect();
            let ys: Vec<String> = cf
                .symmetric_degrees()
                .iter()
                .map(|d| format!("y{d}"))
                .collect();
            let _ = writeln!(
                s,
                "closed form:     Λ({}) ⊗ F[{}]",
                xs.join(", "),
                ys.join(", ")
            );
        }
        None => {
            let _ = writeln!(s, "closed form:     none");
        }
    }
    let _ = writeln!(
        s,
        "excluded chars:  {}",
        join(&r.excluded_characteristics, ", ")
    );
    let _ = writeln!(s, "notes:");
    for n in &r.notes {
        let _ = writeln!(s, "  - {n}");
    }
    s
}
