//! Independent route to `NC^w(E)(p)`: the morphism complex out of the
//! explicit cofibrant model `Q(p)`, free over `k[ε]` on `a_0, a_1, …` with
//! `d a_j = −ε a_{j−1}`. Every weight-preserving linear map is enumerated
//! and ε-compatibility is imposed as a linear constraint.

use std::collections::BTreeMap;

use super::{GradedMixedComplex, HodgeCell, HodgeTable, NcwError};
use crate::kernel::{rank, rank_kernel, sign, SparseMatrix, Vector};

const MAX_COORDS: usize = 4000;

/// Basis element of the truncated `Q(p)`: `(j, is ε a_j)`.
type QBasis = (i64, bool);

struct Q {
    p: i64,
    elems: Vec<QBasis>,
}

impl Q {
    fn degree(&self, b: QBasis) -> i64 {
        -2 * b.0 - b.1 as i64
    }

    fn weight(&self, b: QBasis) -> i64 {
        self.p + b.0 + b.1 as i64
    }

    fn eps(&self, b: QBasis) -> Option<QBasis> {
        (!b.1).then_some((b.0, true))
    }

    /// `d a_j = −ε a_{j−1}`.
    fn d(&self, b: QBasis) -> Option<(QBasis, bool)> {
        (!b.1 && b.0 > 0).then_some(((b.0 - 1, true), true))
    }
}

/// Coordinates of `Hom^k(Q, E)`: one block per Q basis element.
struct HomSpace {
    offsets: BTreeMap<QBasis, usize>,
    dim: usize,
}

fn hom_space(q: &Q, e: &GradedMixedComplex, k: i64) -> HomSpace {
    let mut offsets = BTreeMap::new();
    let mut dim = 0;
    for &b in &q.elems {
        offsets.insert(b, dim);
        dim += e.dim(q.degree(b) + k, q.weight(b));
    }
    HomSpace { offsets, dim }
}

/// Rows: `f(ε b) − (−1)^k ε f(b)` for every b.
fn constraint(q: &Q, e: &GradedMixedComplex, k: i64, v: &HomSpace) -> SparseMatrix {
    let mut rows = Vec::new();
    for &b in &q.elems {
        let (deg, wt) = (q.degree(b) + k, q.weight(b));
        let target_dim = e.dim(deg - 1, wt + 1);
        let eps = e.eps_at(deg, wt);
        for r in 0..target_dim {
            let mut row: BTreeMap<usize, crate::kernel::Rational> = BTreeMap::new();
            if let Some(eb) = q.eps(b) {
                if let Some(&off) = v.offsets.get(&eb) {
                    *row.entry(off + r).or_default() += crate::kernel::one();
                }
            }
            let s = sign(k.rem_euclid(2) == 1);
            for (c, val) in eps.row(r) {
                *row.entry(v.offsets[&b] + c).or_default() -= &s * val;
            }
            rows.push(row);
        }
    }
    let mut m = SparseMatrix::zeros(rows.len(), v.dim);
    for (r, row) in rows.into_iter().enumerate() {
        for (c, val) in row {
            m.set(r, c, val);
        }
    }
    m
}

/// `δf = d_E ∘ f − (−1)^k f ∘ d_Q` as a matrix `V_k → V_{k+1}`.
fn delta(q: &Q, e: &GradedMixedComplex, k: i64, src: &HomSpace, dst: &HomSpace) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(dst.dim, src.dim);
    for &b in &q.elems {
        let (deg, wt) = (q.degree(b) + k, q.weight(b));
        let de = e.d_at(deg, wt);
        for r in 0..de.rows() {
            for (c, val) in de.row(r) {
                m.add_to(dst.offsets[&b] + r, src.offsets[&b] + c, val);
            }
        }
        if let Some((db, negative)) = q.d(b) {
            let n = e.dim(deg + 1, wt);
            let s = -sign(k.rem_euclid(2) == 1) * sign(negative);
            for r in 0..n {
                m.add_to(dst.offsets[&b] + r, src.offsets[&db] + r, &s);
            }
        }
    }
    m
}

pub fn qp_oracle(e: &GradedMixedComplex, p: i64, n_lo: i64, n_hi: i64) -> Result<HodgeTable, NcwError> {
    let qmax = e.max_weight().unwrap_or(p);
    let top = (qmax - p).max(0);
    let elems = (0..=top).flat_map(|j| [(j, false), (j, true)]).collect();
    let q = Q { p, elems };
    let (k_lo, k_hi) = (-n_hi - 1, -n_lo + 1);
    let mut spaces = BTreeMap::new();
    for k in k_lo..=k_hi + 1 {
        let v = hom_space(&q, e, k);
        if v.dim > MAX_COORDS {
            return Err(NcwError::TooLarge(v.dim));
        }
        spaces.insert(k, v);
    }
    let mut kernels: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for k in k_lo..=k_hi {
        let v = &spaces[&k];
        let (_, hom) = rank_kernel(&constraint(&q, e, k, v));
        let dm = delta(&q, e, k, v, &spaces[&(k + 1)]);
        let images: Vec<Vector> = hom.iter().map(|f| dm.mul_vec(f)).collect();
        ranks.insert(k, rank(&SparseMatrix::from_columns(spaces[&(k + 1)].dim, &images)));
        kernels.insert(k, hom);
    }
    let mut table = HodgeTable::default();
    for n in n_lo..=n_hi {
        let k = -n;
        let dim = kernels[&k].len() - ranks[&k] - ranks[&(k - 1)];
        table.cells.insert((n, p), HodgeCell { dim, certified: true });
    }
    Ok(table)
}
