//! Dynkin diagram automorphisms, their action on roots, the fixed subspace
//! `𝔱^σ` with the projection `π`, and the folded root system `Φ_σ`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{Rational, RationalMatrix, RationalVector};
use crate::rootsys::{build_root_system, CartanType, Family, RootSystem};
use crate::weyl::{FiniteMatrixGroup, SubspaceBasis};

/// Which automorphism to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismSpec {
    Identity,
    Flip,
    Triality,
    TrialitySquared,
    /// Images of the simple roots, 0-based: `α_i ↦ α_{perm[i]}`.
    Permutation(Vec<usize>),
}

impl fmt::Display for AutomorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomorphismSpec::Identity => write!(f, "identity"),
            AutomorphismSpec::Flip => write!(f, "flip"),
            AutomorphismSpec::Triality => write!(f, "triality"),
            AutomorphismSpec::TrialitySquared => write!(f, "triality2"),
            AutomorphismSpec::Permutation(p) => {
                let images: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "perm={}", images.join(","))
            }
        }
    }
}

impl FromStr for AutomorphismSpec {
    type Err = Error;

    /// Parses `identity`, `flip`, `triality`, `triality2`, or
    /// `perm=i1,i2,...` with 1-based images.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" => AutomorphismSpec::Identity,
            "flip" => AutomorphismSpec::Flip,
            "triality" => AutomorphismSpec::Triality,
            "triality2" => AutomorphismSpec::TrialitySquared,
            _ => {
                let list = s
                    .strip_prefix("perm=")
                    .ok_or_else(|| Error::Malformed(format!("unknown automorphism {s:?}")))?;
                let perm = list
                    .split(',')
                    .map(|x| match x.trim().parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(Error::Malformed(format!("bad permutation entry {x:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                AutomorphismSpec::Permutation(perm)
            }
        })
    }
}

/// The conjugacy class of a diagram automorphism of a simple type, which
/// determines the folding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistClass {
    Identity,
    /// A_{2m−1}, i.e. SU(2m) with its outer involution.
    FlipAOdd {
        m: usize,
    },
    /// A_{2m}, i.e. SU(2m+1).
    FlipAEven {
        m: usize,
    },
    /// D_n, i.e. SO(2n) with an orientation-reversing change of basis.
    FlipD {
        n: usize,
    },
    Triality,
    FlipE6,
}

/// Per-class metadata: folded type, order of the outer class, and the
/// number of components of the fixed subgroup for the two representatives
/// (the diagram automorphism, and the one used classically for the group).
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub folded_type: CartanType,
    pub outer_order: u32,
    pub components_canonical: u32,
    pub components_classical: u32,
    pub fixed_group_note: String,
    /// The coefficient hypothesis as classically stated for this case.
    pub classical_hypothesis: Option<String>,
}

impl TwistClass {
    pub fn catalog(self, base: CartanType) -> CatalogEntry {
        let ct = |f, r| CartanType::new(f, r).expect("catalog types are valid");
        match self {
            TwistClass::Identity => CatalogEntry {
                folded_type: base,
                outer_order: 1,
                components_canonical: 1,
                components_classical: 1,
                fixed_group_note: format!("untwisted: fixed group is the whole group of type {base}"),
                classical_hypothesis: Some("p-torsion-free integral cohomology (p coprime to |W|)".into()),
            },
            TwistClass::FlipAOdd { m } => CatalogEntry {
                folded_type: ct(Family::C, m),
                outer_order: 2,
                components_canonical: 1,
                components_classical: 1,
                fixed_group_note: format!(
                    "diagram automorphism of SU({n}): fixed group Sp({m}) (type C{m}); entrywise complex \
                     conjugation: fixed group SO({n}) (type D{m}) with Z/2 acting by an orientation-reversing \
                     change of basis; both representatives give the same series",
                    n = 2 * m
                ),
                classical_hypothesis: Some(format!("characteristic coprime to {}!", 2 * m)),
            },
            TwistClass::FlipAEven { m } => CatalogEntry {
                folded_type: ct(Family::B, m),
                outer_order: 2,
                components_canonical: 1,
                components_classical: 1,
                fixed_group_note: format!(
                    "SU({n}) with entrywise complex conjugation: fixed group SO({n}) (type B{m}); projected roots \
                     form the non-reduced pattern with the automorphism group of C{m}",
                    n = 2 * m + 1
                ),
                classical_hypothesis: Some(format!("characteristic coprime to {}!", 2 * m + 1)),
            },
            TwistClass::FlipD { n } => CatalogEntry {
                folded_type: ct(Family::B, n - 1),
                outer_order: 2,
                components_canonical: 2,
                components_classical: 2,
                fixed_group_note: format!(
                    "SO({}) with an orientation-reversing change of basis: fixed group O({}), identity component \
                     SO({}) (type B{})",
                    2 * n,
                    2 * n - 1,
                    2 * n - 1,
                    n - 1
                ),
                classical_hypothesis: Some(format!("odd characteristic coprime to {n}!")),
            },
            TwistClass::Triality => CatalogEntry {
                folded_type: ct(Family::G, 2),
                outer_order: 3,
                components_canonical: 1,
                components_classical: 1,
                fixed_group_note: "SO(8) with triality: fixed group G2, the automorphisms of the octonions".into(),
                classical_hypothesis: Some("characteristic coprime to 6".into()),
            },
            TwistClass::FlipE6 => CatalogEntry {
                folded_type: ct(Family::F, 4),
                outer_order: 2,
                components_canonical: 1,
                components_classical: 1,
                fixed_group_note: "E6 with its outer involution: fixed group F4".into(),
                classical_hypothesis: Some("characteristic greater than 30".into()),
            },
        }
    }
}

/// A diagram automorphism together with its linear extension to the
/// ambient space of the root system.
#[derive(Clone, Debug)]
pub struct DiagramAutomorphism {
    base: RootSystem,
    simple_perm: Vec<usize>,
    matrix: RationalMatrix,
    order: u32,
    class: TwistClass,
}

fn permutation_order(p: &[usize]) -> u32 {
    let mut seen = vec![false; p.len()];
    let mut order = 1u32;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

fn standard_permutation(t: CartanType, spec: &AutomorphismSpec) -> Result<Vec<usize>> {
    let n = t.rank();
    let unsupported = || Error::UnsupportedAutomorphism(format!("{spec} on {t}"));
    let mut p: Vec<usize> = (0..n).collect();
    match spec {
        AutomorphismSpec::Identity => {}
        AutomorphismSpec::Flip => match t.family() {
            Family::A if n >= 2 => p.reverse(),
            Family::D => p.swap(n - 2, n - 1),
            Family::E if n == 6 => {
                p.swap(0, 5);
                p.swap(2, 4);
            }
            _ => return Err(unsupported()),
        },
        AutomorphismSpec::Triality | AutomorphismSpec::TrialitySquared => {
            if t != CartanType::new(Family::D, 4)? {
                return Err(unsupported());
            }
            // α1 → α3 → α4 → α1
            p = vec![2, 1, 3, 0];
            if *spec == AutomorphismSpec::TrialitySquared {
                p = vec![3, 1, 0, 2];
            }
        }
        AutomorphismSpec::Permutation(q) => {
            let mut sorted = q.clone();
            sorted.sort_unstable();
            if sorted != p {
                return Err(Error::Malformed(format!(
                    "{spec} is not a permutation of 1..={n}"
                )));
            }
            p = q.clone();
        }
    }
    Ok(p)
}

fn classify(t: CartanType, order: u32) -> Result<TwistClass> {
    let n = t.rank();
    Ok(match (t.family(), order) {
        (_, 1) => TwistClass::Identity,
        (Family::A, 2) if n % 2 == 1 => TwistClass::FlipAOdd { m: n.div_ceil(2) },
        (Family::A, 2) => TwistClass::FlipAEven { m: n / 2 },
        (Family::D, 2) => TwistClass::FlipD { n },
        (Family::D, 3) if n == 4 => TwistClass::Triality,
        (Family::E, 2) if n == 6 => TwistClass::FlipE6,
        _ => {
            return Err(Error::UnsupportedAutomorphism(format!(
                "order {order} automorphism of {t}"
            )))
        }
    })
}

/// Builds `σ` on the ambient space of `rs`: simple roots are permuted, and
/// the orthogonal complement of the roots is fixed, except for the type A
/// flip in `e`-coordinates where `σ(e_i) = −e_{n+1−i}` negates it.
pub fn make_automorphism(rs: &RootSystem, spec: &AutomorphismSpec) -> Result<DiagramAutomorphism> {
    let t = rs.cartan_type();
    let perm = standard_permutation(t, spec)?;
    let c = rs.cartan_matrix();
    for i in 0..perm.len() {
        for j in 0..perm.len() {
            if c[perm[i]][perm[j]] != c[i][j] {
                return Err(Error::NotDiagramSymmetry(format!("{spec} on {t}")));
            }
        }
    }
    let order = permutation_order(&perm);
    let class = classify(t, order)?;

    let dim = rs.ambient_dim();
    let simple = rs.simple_roots();
    let simple_matrix = RationalMatrix::from_columns(dim, simple)?;
    let complement = simple_matrix.transpose().mul(rs.gram())?.kernel();
    let negate_complement = t.family() == Family::A && order == 2;
    let mut domain: Vec<RationalVector> = simple.to_vec();
    let mut image: Vec<RationalVector> = perm.iter().map(|&j| simple[j].clone()).collect();
    for v in complement {
        image.push(if negate_complement {
            v.iter().map(|x| -x).collect()
        } else {
            v.clone()
        });
        domain.push(v);
    }
    let matrix = RationalMatrix::from_columns(dim, &image)?
        .mul(&RationalMatrix::from_columns(dim, &domain)?.inverse()?)?;

    let a = DiagramAutomorphism {
        base: rs.clone(),
        simple_perm: perm,
        matrix,
        order,
        class,
    };
    a.check()?;
    Ok(a)
}

impl DiagramAutomorphism {
    fn check(&self) -> Result<()> {
        let roots = self.base.roots();
        let half = roots.len() / 2;
        let index: HashMap<&RationalVector, usize> =
            roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        for (i, r) in roots.iter().enumerate() {
            let img = self.matrix.mul_vec(r)?;
            match index.get(&img) {
                Some(&j) if (i < half) == (j < half) => {}
                _ => {
                    return Err(Error::Inconsistent(
                        "automorphism does not preserve positive roots".into(),
                    ))
                }
            }
        }
        for k in 1..self.order {
            if self.matrix.pow(k)?.is_identity() {
                return Err(Error::Inconsistent(
                    "automorphism order is not minimal".into(),
                ));
            }
        }
        if !self.matrix.pow(self.order)?.is_identity() {
            return Err(Error::Inconsistent("σ^order is not the identity".into()));
        }
        Ok(())
    }

    pub fn base(&self) -> &RootSystem {
        &self.base
    }

    pub fn simple_perm(&self) -> &[usize] {
        &self.simple_perm
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn class(&self) -> TwistClass {
        self.class
    }

    pub fn catalog(&self) -> CatalogEntry {
        self.class.catalog(self.base.cartan_type())
    }

    /// Index of `σ(roots[i])` in the root list.
    pub fn root_permutation(&self) -> Vec<usize> {
        let roots = self.base.roots();
        let index: HashMap<&RationalVector, usize> =
            roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        roots
            .iter()
            .map(|r| index[&self.matrix.mul_vec(r).expect("ambient vector")])
            .collect()
    }
}

/// The `σ`-orbits on the root list, as index sets, in order of their
/// smallest member.
pub fn orbits_on_roots(a: &DiagramAutomorphism) -> Vec<Vec<usize>> {
    let perm = a.root_permutation();
    let mut seen = vec![false; perm.len()];
    let mut orbits = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = perm[i];
        }
        orbits.push(orbit);
    }
    orbits
}

/// Orbits consisting of positive roots.
pub fn positive_orbits(a: &DiagramAutomorphism) -> Vec<Vec<usize>> {
    let half = a.base().roots().len() / 2;
    orbits_on_roots(a)
        .into_iter()
        .filter(|o| o[0] < half)
        .collect()
}

/// `𝔱^σ`: the fixed vectors of `σ` inside the span of the roots.
pub fn fixed_subspace(a: &DiagramAutomorphism) -> Result<SubspaceBasis> {
    let rs = a.base();
    let dim = rs.ambient_dim();
    let span = RationalMatrix::from_columns(dim, rs.root_span())?;
    let shifted = a.matrix().sub(&RationalMatrix::identity(dim))?;
    let kernel = shifted.mul(&span)?.kernel();
    let basis = kernel
        .iter()
        .map(|c| span.mul_vec(c))
        .collect::<Result<Vec<_>>>()?;
    SubspaceBasis::new(dim, basis)
}

/// `π(x) = (1/ord σ) Σ_k σ^k x`, the orthogonal projection onto `𝔱^σ`.
pub fn project(a: &DiagramAutomorphism, x: &[Rational]) -> Result<RationalVector> {
    let mut acc: RationalVector = x.to_vec();
    let mut cur: RationalVector = x.to_vec();
    for _ in 1..a.order() {
        cur = a.matrix().mul_vec(&cur)?;
        for (s, c) in acc.iter_mut().zip(&cur) {
            *s += c;
        }
    }
    let inv = Rational::new(1, a.order() as i64);
    Ok(acc.iter().map(|v| v * &inv).collect())
}

/// `π(Φ)` in fixed-subspace coordinates, as distinct vectors with
/// multiplicities, in order of first occurrence along the root list.
pub fn project_roots(a: &DiagramAutomorphism) -> Result<Vec<(RationalVector, usize)>> {
    let v = fixed_subspace(a)?;
    project_roots_in(a, &v)
}

fn project_roots_in(
    a: &DiagramAutomorphism,
    v: &SubspaceBasis,
) -> Result<Vec<(RationalVector, usize)>> {
    let coords = v.coordinate_map();
    let mut out: Vec<(RationalVector, usize)> = Vec::new();
    let mut index: HashMap<RationalVector, usize> = HashMap::new();
    for r in a.base().roots() {
        let p = coords.mul_vec(&project(a, r)?)?;
        match index.get(&p) {
            Some(&i) => out[i].1 += 1,
            None => {
                index.insert(p.clone(), out.len());
                out.push((p, 1));
            }
        }
    }
    Ok(out)
}

/// The folded system `Φ_σ` and the data it was derived from.
#[derive(Clone, Debug)]
pub struct FoldingResult {
    pub fixed_basis: SubspaceBasis,
    pub projected_roots: Vec<(RationalVector, usize)>,
    /// `Φ_σ` in fixed-subspace coordinates, with the inner product induced
    /// from the ambient space.
    pub folded: RootSystem,
    pub folded_type: CartanType,
}

impl FoldingResult {
    /// Each folded root `r` satisfies `r ∈ π(Φ)` or `2r ∈ π(Φ)`.
    pub fn folded_within_projection(&self) -> bool {
        let proj: HashSet<&RationalVector> = self.projected_roots.iter().map(|(v, _)| v).collect();
        let two = Rational::from_int(2);
        self.folded.roots().iter().all(|r| {
            proj.contains(r)
                || proj.contains(&r.iter().map(|x| x * &two).collect::<RationalVector>())
        })
    }
}

/// Matches the simple roots of `found` to positions of `expected` so that
/// Cartan matrices agree; returns `order[i]` = index in `found` placed at
/// position `i`.
fn match_cartan(found: &[Vec<i64>], expected: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = expected.len();
    if found.len() != n {
        return None;
    }
    // visit expected nodes so that each is adjacent to an earlier one
    let mut visit = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for root in 0..n {
        if placed[root] {
            continue;
        }
        placed[root] = true;
        visit.push(root);
        let mut k = visit.len() - 1;
        while k < visit.len() {
            let u = visit[k];
            for v in 0..n {
                if !placed[v] && expected[u][v] != 0 {
                    placed[v] = true;
                    visit.push(v);
                }
            }
            k += 1;
        }
    }
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn go(
        depth: usize,
        visit: &[usize],
        found: &[Vec<i64>],
        expected: &[Vec<i64>],
        assign: &mut [Option<usize>],
        used: &mut [bool],
    ) -> bool {
        if depth == visit.len() {
            return true;
        }
        let pos = visit[depth];
        for cand in 0..found.len() {
            if used[cand] {
                continue;
            }
            let ok = visit[..depth].iter().all(|&p| {
                let c = assign[p].expect("assigned");
                found[cand][c] == expected[pos][p] && found[c][cand] == expected[p][pos]
            }) && found[cand][cand] == expected[pos][pos];
            if ok {
                assign[pos] = Some(cand);
                used[cand] = true;
                if go(depth + 1, visit, found, expected, assign, used) {
                    return true;
                }
                used[cand] = false;
                assign[pos] = None;
            }
        }
        false
    }
    go(0, &visit, found, expected, &mut assign, &mut used)
        .then(|| assign.into_iter().map(Option::unwrap).collect())
}

/// Builds `Φ_σ` from `π(Φ)`: every projected root is kept except those
/// whose half is also a projected root (the long classes `±2E_i` that only
/// occur for A_{2m}). The result is identified with the catalog type by
/// matching Cartan matrices.
pub fn folded_root_system(a: &DiagramAutomorphism) -> Result<FoldingResult> {
    let v = fixed_subspace(a)?;
    let projected = project_roots_in(a, &v)?;
    let expected_type = a.catalog().folded_type;

    let basis = v.matrix();
    let gram = basis.transpose().mul(a.base().gram())?.mul(&basis)?;
    let proj_set: HashSet<&RationalVector> = projected.iter().map(|(p, _)| p).collect();
    let half = Rational::new(1, 2);
    let keep = |p: &RationalVector| {
        !proj_set.contains(&p.iter().map(|x| x * &half).collect::<RationalVector>())
    };

    // π maps positive roots to the positive side, so order is inherited.
    let coords = v.coordinate_map();
    let mut positive: Vec<RationalVector> = Vec::new();
    for r in a.base().positive_roots() {
        let p = coords.mul_vec(&project(a, r)?)?;
        if keep(&p) && !positive.contains(&p) {
            positive.push(p);
        }
    }
    let pos_set: HashSet<&RationalVector> = positive.iter().collect();
    let simple: Vec<RationalVector> = positive
        .iter()
        .filter(|p| {
            !positive.iter().any(|x| {
                let rest: RationalVector = p.iter().zip(x).map(|(a, b)| a - b).collect();
                pos_set.contains(&rest)
            })
        })
        .cloned()
        .collect();
    if simple.len() != v.dim() {
        return Err(Error::FoldingMismatch(format!(
            "{} simple folded roots in a {}-dimensional fixed space",
            simple.len(),
            v.dim()
        )));
    }
    let ip = |x: &RationalVector, y: &RationalVector| {
        crate::exact::dot(x, &gram.mul_vec(y).expect("dims"))
    };
    let found_cartan: Vec<Vec<i64>> = simple
        .iter()
        .map(|x| {
            simple
                .iter()
                .map(|y| {
                    let c = &(Rational::from_int(2) * ip(x, y)) / &ip(y, y);
                    c.as_small()
                        .filter(|&(_, d)| d == 1)
                        .map_or(i64::MAX, |(n, _)| n)
                })
                .collect()
        })
        .collect();
    let reference = build_root_system(expected_type)?;
    let order = match_cartan(&found_cartan, reference.cartan_matrix()).ok_or_else(|| {
        Error::FoldingMismatch(format!(
            "folded Cartan matrix does not match {expected_type}"
        ))
    })?;
    let ordered: Vec<RationalVector> = order.iter().map(|&i| simple[i].clone()).collect();
    let folded = RootSystem::from_simple_roots(expected_type, gram, ordered)?;

    let folded_set: HashSet<&RationalVector> = folded.roots().iter().collect();
    let kept: HashSet<&RationalVector> = projected
        .iter()
        .map(|(p, _)| p)
        .filter(|p| keep(p))
        .collect();
    if folded_set != kept {
        return Err(Error::FoldingMismatch(format!(
            "generated {expected_type} differs from the kept projections"
        )));
    }
    Ok(FoldingResult {
        fixed_basis: v,
        projected_roots: projected,
        folded,
        folded_type: expected_type,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitCriterion {
    pub orbit_count: usize,
    pub folded_root_count: usize,
    pub holds: bool,
}

/// Compares the number of `σ`-orbits on `Φ` with `|Φ_σ|`. A `false` result
/// only means the shortcut does not apply.
pub fn orbit_count_criterion(a: &DiagramAutomorphism) -> OrbitCriterion {
    let orbit_count = orbits_on_roots(a).len();
    let folded_root_count = a.catalog().folded_type.root_count();
    OrbitCriterion {
        orbit_count,
        folded_root_count,
        holds: orbit_count == folded_root_count,
    }
}

/// Whether every element of the restricted group permutes `Φ_σ`.
pub fn wsigma_preserves_folded(restricted: &FiniteMatrixGroup, folding: &FoldingResult) -> bool {
    let roots = folding.folded.roots();
    if restricted.dim() != folding.fixed_basis.dim() {
        return false;
    }
    let set: HashSet<&RationalVector> = roots.iter().collect();
    restricted.elements().all(|g| {
        roots
            .iter()
            .all(|r| g.mul_vec(r).map(|img| set.contains(&img)).unwrap_or(false))
    })
}

/// For the SU(2m) flip, the group acting on the maximal torus of SO(2m)
/// under the classical representative: W(D_m) extended by the
/// orientation-reversing change of basis `e_m ↦ −e_m`.
pub fn classical_representative_group(
    a: &DiagramAutomorphism,
) -> Result<Option<FiniteMatrixGroup>> {
    let TwistClass::FlipAOdd { m } = a.class() else {
        return Ok(None);
    };
    let d = build_root_system(CartanType::new(Family::D, m)?)?;
    let mut gens = d.simple_reflections()?;
    let mut diag = vec![Rational::ONE; m];
    diag[m - 1] = Rational::from_int(-1);
    gens.push(RationalMatrix::diagonal(&diag));
    Ok(Some(crate::weyl::generate_group(&gens)?))
}
