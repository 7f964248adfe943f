//! Graded mixed complexes and the weighted negative cyclic complex.
//!
//! Indexing: `piece(m, q)` is the degree-`m` part of the weight-`q` complex
//! `E(q)`; `d` has bidegree `(+1, 0)` and `ε` has bidegree `(−1, +1)`.
//! `NC^m(p) = ∏_{i≥0} E^{m−2i}(p+i)` with `D(c)_i = d c_i + ε c_{i−1}`.

mod dr;
mod oracle;

pub use dr::{mixed_from_dr, DrMixed};
pub use oracle::qp_oracle;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{ComplexWindow, KernelError, SparseMatrix, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcwError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("d² ≠ 0 at piece ({0}, {1})")]
    DSquaredNonzero(i64, i64),
    #[error("ε² ≠ 0 at piece ({0}, {1})")]
    EpsSquaredNonzero(i64, i64),
    #[error("dε + εd ≠ 0 at piece ({0}, {1})")]
    NotAnticommuting(i64, i64),
    #[error("piece ({0}, {1}) is not finite-dimensional")]
    InfinitePiece(i64, i64),
    #[error("oracle instance too large ({0} coordinates)")]
    TooLarge(usize),
}

pub type Bidegree = (i64, i64);

#[derive(Clone, Debug, PartialEq)]
pub struct GradedMixedComplex {
    pieces: BTreeMap<Bidegree, Vec<String>>,
    d: BTreeMap<Bidegree, SparseMatrix>,
    eps: BTreeMap<Bidegree, SparseMatrix>,
}

impl GradedMixedComplex {
    /// Validates shapes and the three identities d² = 0, ε² = 0 and
    /// dε + εd = 0. Missing maps are zero; empty pieces may be omitted.
    pub fn new(
        pieces: BTreeMap<Bidegree, Vec<String>>,
        d: BTreeMap<Bidegree, SparseMatrix>,
        eps: BTreeMap<Bidegree, SparseMatrix>,
    ) -> Result<Self, NcwError> {
        let pieces: BTreeMap<Bidegree, Vec<String>> = pieces.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let e = GradedMixedComplex {
            pieces,
            d: d.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
            eps: eps.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        };
        for (&(m, q), mat) in &e.d {
            e.check_shape(mat, (m, q), (m + 1, q))?;
        }
        for (&(m, q), mat) in &e.eps {
            e.check_shape(mat, (m, q), (m - 1, q + 1))?;
        }
        for &(m, q) in e.pieces.keys() {
            if !e.d_at(m + 1, q).mul(&e.d_at(m, q))?.is_zero() {
                return Err(NcwError::DSquaredNonzero(m, q));
            }
            if !e.eps_at(m - 1, q + 1).mul(&e.eps_at(m, q))?.is_zero() {
                return Err(NcwError::EpsSquaredNonzero(m, q));
            }
            let a = e.d_at(m - 1, q + 1).mul(&e.eps_at(m, q))?;
            let b = e.eps_at(m + 1, q).mul(&e.d_at(m, q))?;
            if !a.add(&b)?.is_zero() {
                return Err(NcwError::NotAnticommuting(m, q));
            }
        }
        Ok(e)
    }

    fn check_shape(&self, mat: &SparseMatrix, from: Bidegree, to: Bidegree) -> Result<(), NcwError> {
        if mat.cols() != self.dim(from.0, from.1) || mat.rows() != self.dim(to.0, to.1) {
            return Err(KernelError::ShapeMismatch(format!(
                "map {from:?} → {to:?} is {}×{}, pieces have dims {} and {}",
                mat.rows(),
                mat.cols(),
                self.dim(from.0, from.1),
                self.dim(to.0, to.1)
            ))
            .into());
        }
        Ok(())
    }

    pub fn piece(&self, m: i64, q: i64) -> &[String] {
        self.pieces.get(&(m, q)).map_or(&[], |v| v.as_slice())
    }

    pub fn dim(&self, m: i64, q: i64) -> usize {
        self.piece(m, q).len()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&Bidegree, &Vec<String>)> {
        self.pieces.iter()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(|v| v.len()).sum()
    }

    pub fn d_at(&self, m: i64, q: i64) -> SparseMatrix {
        self.d
            .get(&(m, q))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(m + 1, q), self.dim(m, q)))
    }

    pub fn eps_at(&self, m: i64, q: i64) -> SparseMatrix {
        self.eps
            .get(&(m, q))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(m - 1, q + 1), self.dim(m, q)))
    }

    pub fn eps_is_zero(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.pieces.keys().map(|k| k.1).max()
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.pieces.keys().map(|k| k.1).min()
    }

    /// Cohomology of `(E(q), d)` in degree `m`.
    pub fn weight_cohomology_dim(&self, m: i64, q: i64) -> usize {
        let out = crate::kernel::rank(&self.d_at(m, q));
        let inc = crate::kernel::rank(&self.d_at(m - 1, q));
        self.dim(m, q) - out - inc
    }

    /// Degrees `m` for which `NC^m(p)` (or its `i ≥ first` part) is nonzero.
    fn nc_support(&self, p: i64, first: i64) -> Option<(i64, i64)> {
        let degs: Vec<i64> = self
            .pieces
            .keys()
            .filter(|(_, q)| *q >= p + first)
            .map(|(m, q)| m + 2 * (q - p))
            .collect();
        Some((*degs.iter().min()?, *degs.iter().max()?))
    }
}

/// One basis vector of `NC^m(p)`: component `i`, index inside
/// `E^{m−2i}(p+i)`, and its label there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcBasisEntry {
    pub i: i64,
    pub index: usize,
    pub label: String,
}

/// A finite window of `NC(p)` (or of its tail `i ≥ 1`), with the exact
/// product differential.
#[derive(Clone, Debug)]
pub struct NcwWindow {
    pub p: i64,
    pub first_component: i64,
    pub basis: Vec<Vec<NcBasisEntry>>,
    pub window: ComplexWindow,
    /// Degrees strictly inside the window, where cohomology is exact.
    pub certified: (i64, i64),
}

impl NcwWindow {
    pub fn start(&self) -> i64 {
        self.window.start()
    }

    pub fn basis_at(&self, m: i64) -> &[NcBasisEntry] {
        let k = m - self.start();
        if k < 0 || k as usize >= self.basis.len() {
            return &[];
        }
        &self.basis[k as usize]
    }

    pub fn differential(&self, m: i64) -> Option<&SparseMatrix> {
        self.window.differential(m)
    }

    /// Splits a vector of `NC^m(p)` into its components.
    pub fn components(&self, m: i64, v: &[crate::kernel::Rational]) -> BTreeMap<i64, Vector> {
        let mut out: BTreeMap<i64, Vector> = BTreeMap::new();
        for (k, e) in self.basis_at(m).iter().enumerate() {
            let comp = out.entry(e.i).or_default();
            if comp.len() <= e.index {
                comp.resize(e.index + 1, crate::kernel::zero());
            }
            comp[e.index] = v[k].clone();
        }
        out
    }
}

/// Builds `NC^m(p)` for `m` in `[lo, hi]`, padded by one degree on each side
/// so that every requested degree is interior. `first` selects the
/// components `i ≥ first` (0 for NC itself, 1 for the tail).
pub fn nc_window(e: &GradedMixedComplex, p: i64, lo: i64, hi: i64, first: i64) -> Result<NcwWindow, NcwError> {
    let start = lo - 1;
    let end = hi + 1;
    let qmax = e.max_weight().unwrap_or(p);
    let mut basis = Vec::new();
    for m in start..=end {
        let mut b = Vec::new();
        let mut i = first;
        while p + i <= qmax {
            for (index, label) in e.piece(m - 2 * i, p + i).iter().enumerate() {
                b.push(NcBasisEntry {
                    i,
                    index,
                    label: format!("[{i}] {label}"),
                });
            }
            i += 1;
        }
        basis.push(b);
    }
    let mut diffs = Vec::new();
    for k in 0..basis.len() - 1 {
        let m = start + k as i64;
        let (src, dst) = (&basis[k], &basis[k + 1]);
        let offsets = |b: &Vec<NcBasisEntry>| {
            let mut off: BTreeMap<i64, usize> = BTreeMap::new();
            for (pos, entry) in b.iter().enumerate() {
                off.entry(entry.i).or_insert(pos - entry.index);
            }
            off
        };
        let (so, to) = (offsets(src), offsets(dst));
        let mut mat = SparseMatrix::zeros(dst.len(), src.len());
        for (&i, &s0) in &so {
            let q = p + i;
            let dm = e.d_at(m - 2 * i, q);
            if let Some(&t0) = to.get(&i) {
                place(&mut mat, &dm, t0, s0);
            }
            let em = e.eps_at(m - 2 * i, q);
            if let Some(&t0) = to.get(&(i + 1)) {
                place(&mut mat, &em, t0, s0);
            }
        }
        diffs.push(mat);
    }
    let spaces = basis
        .iter()
        .map(|b| b.iter().map(|x| x.label.clone()).collect())
        .collect();
    let window = ComplexWindow::new(start, spaces, diffs)?;
    Ok(NcwWindow {
        p,
        first_component: first,
        basis,
        window,
        certified: (lo, hi),
    })
}

fn place(target: &mut SparseMatrix, block: &SparseMatrix, r0: usize, c0: usize) {
    for r in 0..block.rows() {
        for (c, v) in block.row(r) {
            target.set(r0 + r, c0 + c, v.clone());
        }
    }
}

pub fn ncw_window(e: &GradedMixedComplex, p: i64, lo: i64, hi: i64) -> Result<NcwWindow, NcwError> {
    nc_window(e, p, lo, hi, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeCell {
    pub dim: usize,
    pub certified: bool,
}

/// `(n, p) ↦ dim NC^w_n(E)(p) = dim H^{−n}(NC(p))`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HodgeTable {
    pub cells: BTreeMap<(i64, i64), HodgeCell>,
}

impl HodgeTable {
    pub fn dim(&self, n: i64, p: i64) -> Option<usize> {
        self.cells.get(&(n, p)).map(|c| c.dim)
    }

    /// Total over weights for a fixed `n` (the Hodge decomposition).
    pub fn row_sum(&self, n: i64) -> usize {
        self.cells.iter().filter(|((k, _), _)| *k == n).map(|(_, c)| c.dim).sum()
    }
}

/// Exact `dim NC^w_n(E)(p)` for `n` in `[n_lo, n_hi]` and every `p` in
/// `ps`.
pub fn ncw_cohomology(
    e: &GradedMixedComplex,
    ps: &[i64],
    n_lo: i64,
    n_hi: i64,
    certified: bool,
) -> Result<HodgeTable, NcwError> {
    let rows: Result<Vec<_>, NcwError> = ps
        .par_iter()
        .map(|&p| {
            let w = ncw_window(e, p, -n_hi, -n_lo)?;
            let betti = w.window.betti();
            Ok((n_lo..=n_hi)
                .map(|n| {
                    let dim = betti.iter().find(|(m, _)| *m == -n).map_or(0, |x| x.1);
                    ((n, p), HodgeCell { dim, certified })
                })
                .collect::<Vec<_>>())
        })
        .collect();
    let mut table = HodgeTable::default();
    for row in rows? {
        table.cells.extend(row);
    }
    Ok(table)
}

/// Cohomology of the whole `NC(p)` (or its tail), degree by degree.
pub fn nc_betti(e: &GradedMixedComplex, p: i64, first: i64) -> Result<BTreeMap<i64, usize>, NcwError> {
    let Some((lo, hi)) = e.nc_support(p, first) else {
        return Ok(BTreeMap::new());
    };
    let w = nc_window(e, p, lo, hi, first)?;
    Ok(w.window
        .betti()
        .into_iter()
        .filter(|(m, _)| *m >= lo && *m <= hi)
        .collect())
}

/// The `i = 0` component of an element of `NC^m(p)`.
pub fn underlying_projection(w: &NcwWindow, m: i64, v: &[crate::kernel::Rational]) -> Vector {
    let mut out = Vec::new();
    for (k, entry) in w.basis_at(m).iter().enumerate() {
        if entry.i == 0 {
            out.push(v[k].clone());
        }
    }
    out
}

#[cfg(test)]
mod tests;
