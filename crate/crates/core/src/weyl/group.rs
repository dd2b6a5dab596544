use std::collections::BTreeMap;
use std::sync::OnceLock;

use indexmap::IndexSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{dot, Rational, RationalMatrix, RationalVector};

/// Default bound on the number of elements `generate_group` will enumerate.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// Generators whose order is not found below this bound are rejected.
const MAX_GENERATOR_ORDER: u32 = 1000;

/// Characteristic polynomial (ascending coefficients) to multiplicity.
pub type CharpolyBuckets = BTreeMap<Vec<Rational>, u64>;

/// A finite group of exact square matrices.
///
/// Elements are stored by their canonical byte encoding in first-seen order,
/// with the identity first. Characteristic-polynomial buckets are computed
/// on first use.
#[derive(Debug)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: IndexSet<Box<[u8]>>,
    buckets: OnceLock<CharpolyBuckets>,
}

impl Clone for FiniteMatrixGroup {
    fn clone(&self) -> Self {
        let buckets = OnceLock::new();
        if let Some(b) = self.buckets.get() {
            let _ = buckets.set(b.clone());
        }
        Self {
            dim: self.dim,
            elements: self.elements.clone(),
            buckets,
        }
    }
}

impl FiniteMatrixGroup {
    pub fn trivial(dim: usize) -> Self {
        let mut elements = IndexSet::new();
        elements.insert(RationalMatrix::identity(dim).encode());
        Self {
            dim,
            elements,
            buckets: OnceLock::new(),
        }
    }

    /// Wraps an already-closed set of matrices, dropping duplicates. The
    /// identity is moved to the front. Closure is not checked here.
    pub fn from_elements(
        dim: usize,
        elements: impl IntoIterator<Item = RationalMatrix>,
    ) -> Result<Self> {
        let mut set = IndexSet::new();
        set.insert(RationalMatrix::identity(dim).encode());
        for m in elements {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "{}x{} element in a group of dimension {dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            set.insert(m.encode());
        }
        Ok(Self {
            dim,
            elements: set,
            buckets: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> RationalMatrix {
        RationalMatrix::decode(self.dim, self.dim, &self.elements[i])
            .expect("stored encoding is valid")
    }

    pub fn elements(&self) -> impl Iterator<Item = RationalMatrix> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn contains(&self, m: &RationalMatrix) -> bool {
        m.rows() == self.dim && m.cols() == self.dim && self.elements.contains(&m.encode())
    }

    /// Buckets computed single-threaded if not already present.
    pub fn charpoly_buckets(&self) -> &CharpolyBuckets {
        self.charpoly_buckets_with(1)
    }

    /// Buckets, computing per-element characteristic polynomials on
    /// `workers` threads if not already present. The result does not depend
    /// on `workers`.
    pub fn charpoly_buckets_with(&self, workers: usize) -> &CharpolyBuckets {
        self.buckets.get_or_init(|| {
            let cps: Vec<Vec<Rational>> = with_workers(workers, || {
                (0..self.order())
                    .into_par_iter()
                    .map(|i| self.element(i).charpoly().expect("square"))
                    .collect()
            });
            let mut b = CharpolyBuckets::new();
            for cp in cps {
                *b.entry(cp).or_default() += 1;
            }
            b
        })
    }

    /// Checks closure under multiplication. Quadratic in the order.
    pub fn is_closed(&self) -> bool {
        let elems: Vec<RationalMatrix> = self.elements().collect();
        elems.iter().all(|a| {
            elems
                .iter()
                .all(|b| self.contains(&a.mul(b).expect("same dim")))
        })
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generating_set(&self) -> Result<Vec<RationalMatrix>> {
        let mut gens: Vec<RationalMatrix> = Vec::new();
        let mut sub = FiniteMatrixGroup::trivial(self.dim);
        for g in self.elements() {
            if !sub.contains(&g) {
                gens.push(g);
                sub = generate_group(&gens)?;
                if sub.order() == self.order() {
                    break;
                }
            }
        }
        Ok(gens)
    }
}

pub(crate) fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

/// Closure of the generators under multiplication, with the default cap.
pub fn generate_group(generators: &[RationalMatrix]) -> Result<FiniteMatrixGroup> {
    generate_group_capped(generators, DEFAULT_ELEMENT_CAP)
}

/// Breadth-first closure under right multiplication by generators. Fails
/// with [`Error::GroupTooLarge`] once more than `cap` elements are found.
pub fn generate_group_capped(
    generators: &[RationalMatrix],
    cap: usize,
) -> Result<FiniteMatrixGroup> {
    let dim = generators
        .first()
        .map(RationalMatrix::rows)
        .ok_or_else(|| Error::Malformed("no generators".into()))?;
    for g in generators {
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::DimensionMismatch(
                "generators of different shapes".into(),
            ));
        }
        if g.order(MAX_GENERATOR_ORDER).is_none() {
            return Err(Error::Malformed(format!(
                "generator {g:?} has no finite order"
            )));
        }
    }
    let mut group = FiniteMatrixGroup::trivial(dim);
    let mut i = 0;
    while i < group.elements.len() {
        let x = group.element(i);
        for g in generators {
            if group.elements.insert(x.mul(g)?.encode()) && group.elements.len() > cap {
                return Err(Error::GroupTooLarge { cap });
            }
        }
        i += 1;
    }
    Ok(group)
}

/// Euclidean reflection `x ↦ x − 2⟨x,α⟩/⟨α,α⟩ α`.
pub fn reflection_matrix(root: &[Rational], ambient_dim: usize) -> Result<RationalMatrix> {
    if root.len() != ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "root of length {} in dimension {ambient_dim}",
            root.len()
        )));
    }
    reflection_matrix_with_gram(root, &RationalMatrix::identity(ambient_dim))
}

/// Reflection through `root` for the inner product `⟨x,y⟩ = xᵀ G y`.
pub fn reflection_matrix_with_gram(
    root: &[Rational],
    gram: &RationalMatrix,
) -> Result<RationalMatrix> {
    let g_root = gram.mul_vec(root)?;
    let norm = dot(root, &g_root);
    if norm.is_zero() {
        return Err(Error::ZeroRoot);
    }
    let c = &Rational::from_int(2) / &norm;
    let n = root.len();
    let mut m = RationalMatrix::identity(n);
    for i in 0..n {
        if root[i].is_zero() {
            continue;
        }
        let ci = &c * &root[i];
        for j in 0..n {
            if !g_root[j].is_zero() {
                let x = m.get(i, j) - &(&ci * &g_root[j]);
                m.set(i, j, x);
            }
        }
    }
    Ok(m)
}

/// A linearly independent set of vectors spanning a subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    basis: Vec<RationalVector>,
}

impl SubspaceBasis {
    pub fn new(ambient_dim: usize, basis: Vec<RationalVector>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(
                "basis vector of wrong length".into(),
            ));
        }
        if !basis.is_empty()
            && RationalMatrix::from_columns(ambient_dim, &basis)?.rank() != basis.len()
        {
            return Err(Error::Malformed(
                "basis vectors are linearly dependent".into(),
            ));
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = RationalMatrix::identity(ambient_dim).transpose();
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|j| basis.column(j)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vectors(&self) -> &[RationalVector] {
        &self.basis
    }

    /// The basis as the columns of an `ambient_dim × dim` matrix.
    pub fn matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient_dim, &self.basis).expect("checked lengths")
    }

    /// Rows spanning the annihilator: `v` lies in the span iff `A v = 0`.
    pub fn annihilator(&self) -> RationalMatrix {
        let rows = if self.basis.is_empty() {
            (0..self.ambient_dim)
                .map(|i| {
                    let mut v = vec![Rational::ZERO; self.ambient_dim];
                    v[i] = Rational::ONE;
                    v
                })
                .collect()
        } else {
            self.matrix().transpose().kernel()
        };
        if rows.is_empty() {
            return RationalMatrix::zeros(0, self.ambient_dim);
        }
        RationalMatrix::from_rows(&rows).expect("equal lengths")
    }

    /// Left inverse `L` with `L B = I`, giving coordinates of vectors in the
    /// span.
    pub fn coordinate_map(&self) -> RationalMatrix {
        if self.basis.is_empty() {
            return RationalMatrix::zeros(0, self.ambient_dim);
        }
        let b = self.matrix();
        let bt = b.transpose();
        let normal = bt.mul(&b).expect("shapes");
        normal
            .inverse()
            .expect("independent columns")
            .mul(&bt)
            .expect("shapes")
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.annihilator()
            .mul_vec(v)
            .map(|r| r.iter().all(Rational::is_zero))
            .unwrap_or(false)
    }

    /// Coordinates of `v` in this basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<RationalVector> {
        if !self.contains(v) {
            return None;
        }
        self.coordinate_map().mul_vec(v).ok()
    }

    pub fn from_coordinates(&self, c: &[Rational]) -> RationalVector {
        let mut v = vec![Rational::ZERO; self.ambient_dim];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += &(ci * bi);
            }
        }
        v
    }
}

fn maps_into(
    w: &RationalMatrix,
    basis: &RationalMatrix,
    annihilator: &RationalMatrix,
) -> Result<bool> {
    if annihilator.rows() == 0 || basis.cols() == 0 {
        return Ok(true);
    }
    Ok(annihilator.mul(&w.mul(basis)?)?.is_zero())
}

/// The elements of `group` mapping `span(subspace)` onto itself.
pub fn subspace_stabilizer(
    group: &FiniteMatrixGroup,
    subspace: &SubspaceBasis,
) -> Result<FiniteMatrixGroup> {
    if subspace.ambient_dim() != group.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of R^{} in a group acting on R^{}",
            subspace.ambient_dim(),
            group.dim()
        )));
    }
    let basis = subspace.matrix();
    let ann = subspace.annihilator();
    let mut kept = IndexSet::new();
    for (i, code) in group.elements.iter().enumerate() {
        if maps_into(&group.element(i), &basis, &ann)? {
            kept.insert(code.clone());
        }
    }
    Ok(FiniteMatrixGroup {
        dim: group.dim(),
        elements: kept,
        buckets: OnceLock::new(),
    })
}

/// The image of `group` acting on `span(subspace)`, written in the
/// subspace basis. Elements acting identically on the subspace collapse.
pub fn restrict_to_subspace(
    group: &FiniteMatrixGroup,
    subspace: &SubspaceBasis,
) -> Result<FiniteMatrixGroup> {
    if subspace.ambient_dim() != group.dim() {
        return Err(Error::DimensionMismatch(
            "subspace and group dimensions differ".into(),
        ));
    }
    let basis = subspace.matrix();
    let ann = subspace.annihilator();
    let coords = subspace.coordinate_map();
    let k = subspace.dim();
    let mut images = Vec::with_capacity(group.order());
    for w in group.elements() {
        if !maps_into(&w, &basis, &ann)? {
            return Err(Error::NotInvariant);
        }
        if k == 0 {
            continue;
        }
        images.push(coords.mul(&w.mul(&basis)?)?);
    }
    FiniteMatrixGroup::from_elements(k, images)
}
