//! Direct invariant counting in `Λ^a(V) ⊗ S^b(V)` by exact linear algebra,
//! independent of characteristic polynomials and series expansion.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{BigradedSeries, Rational, RationalMatrix};
use crate::weyl::FiniteMatrixGroup;

pub const ORACLE_MAX_DIM: usize = 4;
pub const ORACLE_MAX_DEGREE: u32 = 12;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exponent vectors of total degree `b` in `n` variables.
fn monomials(n: usize, b: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
    }
    if n == 0 {
        return if b == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    go(0, b, &mut vec![0; n], &mut out);
    out
}

fn det(m: &RationalMatrix) -> Result<Rational> {
    if m.rows() == 0 {
        return Ok(Rational::ONE);
    }
    let cp = m.charpoly()?;
    Ok(if m.rows().is_multiple_of(2) {
        cp[0].clone()
    } else {
        -&cp[0]
    })
}

/// `Λ^a(g)`: entry `(I, J)` is the minor on rows `I`, columns `J`.
fn exterior_power(g: &RationalMatrix, basis: &[Vec<usize>]) -> Result<RationalMatrix> {
    let k = basis.len();
    let mut out = RationalMatrix::zeros(k, k);
    for (r, rows) in basis.iter().enumerate() {
        for (c, cols) in basis.iter().enumerate() {
            let entries = rows
                .iter()
                .flat_map(|&i| cols.iter().map(move |&j| g.get(i, j).clone()))
                .collect();
            out.set(
                r,
                c,
                det(&RationalMatrix::from_entries(
                    rows.len(),
                    cols.len(),
                    entries,
                )?)?,
            );
        }
    }
    Ok(out)
}

/// `S^b(g)` with `g·x_j = Σ_i g_ij x_i`.
fn symmetric_power(g: &RationalMatrix, basis: &[Vec<u32>]) -> RationalMatrix {
    let n = g.rows();
    let index: HashMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = RationalMatrix::zeros(basis.len(), basis.len());
    for (c, mono) in basis.iter().enumerate() {
        let mut poly: BTreeMap<Vec<u32>, Rational> = BTreeMap::from([(vec![0; n], Rational::ONE)]);
        for (j, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
                for (m, coef) in &poly {
                    for i in 0..n {
                        let gij = g.get(i, j);
                        if gij.is_zero() {
                            continue;
                        }
                        let mut m2 = m.clone();
                        m2[i] += 1;
                        *next.entry(m2).or_insert(Rational::ZERO) += &(coef * gij);
                    }
                }
                poly = next;
            }
        }
        for (m, coef) in poly {
            if !coef.is_zero() {
                out.set(index[&m], c, coef);
            }
        }
    }
    out
}

fn kronecker(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = RationalMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, x * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Dimensions of `(Λ^a(V) ⊗ S^b(V))^Γ` for `a + 2b ≤ max_total_degree`, as
/// the nullity of the stacked `ρ(g) − I` over a generating set.
pub fn brute_force_invariant_dims(
    group: &FiniteMatrixGroup,
    max_total_degree: u32,
) -> Result<BigradedSeries> {
    let n = group.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::GuardExceeded(format!(
            "dimension {n} > {ORACLE_MAX_DIM}"
        )));
    }
    if max_total_degree > ORACLE_MAX_DEGREE {
        return Err(Error::GuardExceeded(format!(
            "degree {max_total_degree} > {ORACLE_MAX_DEGREE}"
        )));
    }
    let gens = group.generating_set()?;
    let mut terms = Vec::new();
    for a in 0..=n.min(max_total_degree as usize) {
        let ext_basis = subsets(n, a);
        let ext: Vec<RationalMatrix> = gens
            .iter()
            .map(|g| exterior_power(g, &ext_basis))
            .collect::<Result<_>>()?;
        for b in 0..=(max_total_degree - a as u32) / 2 {
            let sym_basis = monomials(n, b);
            let size = ext_basis.len() * sym_basis.len();
            let mut stacked = Vec::with_capacity(size * size * gens.len());
            for (g, e) in gens.iter().zip(&ext) {
                let rho = kronecker(e, &symmetric_power(g, &sym_basis));
                stacked.extend(
                    rho.sub(&RationalMatrix::identity(size))?
                        .entries()
                        .iter()
                        .cloned(),
                );
            }
            let rank = if gens.is_empty() {
                0
            } else {
                RationalMatrix::from_entries(size * gens.len(), size, stacked)?.rank()
            };
            terms.push(((a as u32, b), BigInt::from(size - rank)));
        }
    }
    Ok(BigradedSeries::from_terms(max_total_degree, terms))
}
