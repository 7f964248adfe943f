use std::collections::BTreeMap;

use serde::Serialize;

use super::ConstructionError;
use crate::cdga::{Derivation, FreeAlgebra, Generator, Monomial, Polynomial};
use crate::kernel::{determinant, rank, rat, zero, Rational, SparseMatrix};
use crate::ncw::{nc_window, GradedMixedComplex};

/// `(Sym^p 𝔤^∨)^G` placed in mixed degree 0 and weight `p`, with `ε = 0`.
#[derive(Clone, Debug)]
pub struct InvariantModel {
    pub dims: BTreeMap<u32, usize>,
    pub complex: GradedMixedComplex,
}

impl InvariantModel {
    /// Largest weight with known dimension.
    pub fn bound(&self) -> u32 {
        self.dims.keys().max().copied().unwrap_or(0)
    }
}

pub fn invariant_model(dims: &BTreeMap<u32, usize>) -> Result<InvariantModel, ConstructionError> {
    let pieces = dims
        .iter()
        .map(|(&p, &d)| ((0, p as i64), (0..d).map(|k| format!("inv{p}_{k}")).collect()))
        .collect();
    Ok(InvariantModel {
        dims: dims.clone(),
        complex: GradedMixedComplex::new(pieces, BTreeMap::new(), BTreeMap::new())?,
    })
}

/// `dim (Sym^p 𝔤𝔩_n^∨)^{GL_n}` for `p ≤ p_max`, as the common kernel of the
/// infinitesimal conjugation action on polynomials in the matrix entries.
pub fn gl_invariant_dims(n: usize, p_max: u32) -> BTreeMap<u32, usize> {
    let gens: Vec<Generator> = (0..n * n)
        .map(|k| Generator {
            name: format!("a{}{}", k / n + 1, k % n + 1),
            degree: 0,
            weight: 1,
            odd: false,
            form: 0,
        })
        .collect();
    let alg = FreeAlgebra::new(gens);
    let nv = n * n;
    let entry = |i: usize, j: usize| Polynomial::var(nv, i * n + j);
    // E_ab acts by A ↦ A E_ab − E_ab A on coordinates.
    let mut actions = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut images = vec![Polynomial::zero(nv); nv];
            for i in 0..n {
                for j in 0..n {
                    let mut img = Polynomial::zero(nv);
                    if j == b {
                        img.add_assign(&entry(i, a));
                    }
                    if i == a {
                        img = img.sub(&entry(b, j));
                    }
                    images[i * n + j] = img;
                }
            }
            actions.push(Derivation { odd: false, images });
        }
    }
    (0..=p_max)
        .map(|p| {
            let monos = alg.monomials_of_weight(p);
            let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(k, m)| (m, k)).collect();
            let mut mat = SparseMatrix::zeros(actions.len() * monos.len(), monos.len());
            for (c, m) in monos.iter().enumerate() {
                let f = Polynomial::term(m.clone(), rat(1));
                for (r, act) in actions.iter().enumerate() {
                    for (mm, x) in alg.apply(act, &f).terms() {
                        mat.add_to(r * monos.len() + index[mm], c, x);
                    }
                }
            }
            (p, monos.len() - rank(&mat))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BgCell {
    pub dim: usize,
    /// Whether every weight the answer depends on lies within the model's
    /// bound.
    pub certified: bool,
}

/// `π_0(A^{p,cl}(BG, n)) = H^{n−p}(NC(p))`, through the generic window.
pub fn bg_closed_forms(model: &InvariantModel, p: u32, n: i64) -> Result<BgCell, ConstructionError> {
    let m = n - p as i64;
    let w = nc_window(&model.complex, p as i64, m, m, 0)?;
    let dim = w.window.cohomology().dim(m).unwrap_or(0);
    // NC^m(p) only sees weights p + i with 2i ≤ m + 2.
    let reach = p as i64 + (m.max(0) + 2) / 2;
    Ok(BgCell {
        dim,
        certified: reach <= model.bound() as i64,
    })
}

/// `π_i(A^p(BG, n)) = H^{n−p−i}(E(p), d)`.
pub fn bg_forms(model: &InvariantModel, p: u32, n: i64, i: i64) -> BgCell {
    BgCell {
        dim: model.complex.weight_cohomology_dim(n - p as i64 - i, p as i64),
        certified: p <= model.bound(),
    }
}

/// Gram matrix of `(A, B) ↦ Tr(AB)` on elementary matrices.
#[derive(Clone, Debug, Serialize)]
pub struct TraceForm {
    pub n: usize,
    pub labels: Vec<String>,
    #[serde(skip)]
    pub gram: Vec<Vec<Rational>>,
    pub gram_text: Vec<Vec<String>>,
    pub determinant: String,
    pub nondegenerate: bool,
}

pub fn trace_form(n: usize) -> TraceForm {
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let gram: Vec<Vec<Rational>> = idx
        .iter()
        .map(|&(i, j)| {
            idx.iter()
                .map(|&(k, l)| if j == k && i == l { rat(1) } else { zero() })
                .collect()
        })
        .collect();
    let det = determinant(&SparseMatrix::from_dense(n * n, n * n, &gram)).expect("square");
    TraceForm {
        n,
        labels: idx.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect(),
        gram_text: gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        determinant: det.to_string(),
        nondegenerate: det != zero(),
        gram,
    }
}
