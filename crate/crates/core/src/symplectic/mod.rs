//! Forms, closed forms, keys and non-degeneracy on affine models.
//!
//! Everything is computed one slice at a time. A closed `p`-form of degree
//! `n` is a family `ω_i ∈ (Ω^{p+i})^{n−i}` with `d ω_0 = 0` and
//! `ε ω_{i−1} + d ω_i = 0`; as a vector it is a cocycle of `NC^{n−p}(p)`.

mod certificate;
mod nondegenerate;

pub use certificate::{
    jacobian, leg_record, matrix_strings, symplectic_certificate, CheckRecord, LadderWitness, LegRecord, NondegeneracyWitness, PolyRecord,
    SymplecticCertificate, TermRecord,
};
pub use nondegenerate::{amplitude_report, cone_check, is_nondegenerate, AmplitudeReport, ConeCheck, Nondegeneracy};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cdga::{Mode, Polynomial, Presentation, Slice};
use crate::derham::{DeRhamAlgebra, DerhamError};
use crate::kernel::{solve, zero, ComplexWindow, KernelError, SparseMatrix};
use crate::ncw::{mixed_from_dr, nc_betti, nc_window, DrMixed, NcwError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("closedness failed: {0}")]
    ClosednessFailed(String),
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("no augmentation: {0}")]
    NoAugmentation(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Derham(#[from] DerhamError),
    #[error(transparent)]
    Ncw(#[from] NcwError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The slices covering a list of requested weights.
pub fn slices(p: &Presentation, weights: &[u32]) -> Vec<Slice> {
    match p.mode() {
        Mode::Weighted => weights.iter().map(|&w| Slice::Weight(w)).collect(),
        Mode::Truncated(n) => vec![Slice::Truncated(n)],
    }
}

/// Slice containing a homogeneous form.
pub fn slice_of(dr: &DeRhamAlgebra, f: &Polynomial) -> Slice {
    match dr.base().mode() {
        Mode::Truncated(n) => Slice::Truncated(n),
        Mode::Weighted => Slice::Weight(dr.algebra().tridegree(f).map_or(0, |t| t.1)),
    }
}

/// A `d`-cocycle in `(Ω^p)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormClass {
    pub p: u32,
    pub n: i64,
    pub slice: Slice,
    pub representative: Polynomial,
}

/// Components `ω_0, ω_1, …` of a closed form; trailing zeros may be omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormRep {
    pub p: u32,
    pub n: i64,
    pub slice: Slice,
    pub components: Vec<Polynomial>,
}

impl ClosedFormRep {
    pub fn omega0(&self) -> &Polynomial {
        &self.components[0]
    }

    pub fn scale(&self, c: &crate::kernel::Rational) -> ClosedFormRep {
        ClosedFormRep {
            components: self.components.iter().map(|x| x.scale(c)).collect(),
            ..self.clone()
        }
    }

    pub fn higher_components_vanish(&self) -> bool {
        self.components.iter().skip(1).all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FormsCell {
    pub dim: usize,
    pub certified: bool,
    #[serde(skip)]
    pub representatives: Vec<FormClass>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormsTable {
    pub p: u32,
    pub n: i64,
    pub cells: BTreeMap<Slice, FormsCell>,
}

fn mixed(dr: &DeRhamAlgebra, slice: Slice) -> Result<DrMixed, SymplecticError> {
    Ok(mixed_from_dr(dr, slice)?)
}

/// `H^n((Ω^p)^•, d)` per slice.
pub fn forms_space(p: &Presentation, form_weight: u32, n: i64, weights: &[u32]) -> Result<FormsTable, SymplecticError> {
    let dr = DeRhamAlgebra::new(p);
    let q = form_weight as i64;
    let m = n - q;
    let cells: Result<Vec<_>, SymplecticError> = slices(p, weights)
        .into_par_iter()
        .map(|slice| {
            let mx = mixed(&dr, slice)?;
            let e = &mx.complex;
            let spaces = (m - 1..=m + 1).map(|k| e.piece(k, q).to_vec()).collect();
            let w = ComplexWindow::new(m - 1, spaces, vec![e.d_at(m - 1, q), e.d_at(m, q)])?;
            let h = w.cohomology();
            let reps = h
                .at(m)
                .map(|c| {
                    c.representatives
                        .iter()
                        .map(|v| FormClass {
                            p: form_weight,
                            n,
                            slice,
                            representative: mx.to_form((m, q), v),
                        })
                        .collect()
                })
                .unwrap_or_default();
            Ok((
                slice,
                FormsCell {
                    dim: h.dim(m).unwrap_or(0),
                    certified: slice.certified(),
                    representatives: reps,
                },
            ))
        })
        .collect();
    Ok(FormsTable {
        p: form_weight,
        n,
        cells: cells?.into_iter().collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedCell {
    pub dim: usize,
    pub certified: bool,
}

/// `π_i(A^{p,cl}(n)) = H^{n−p−i}(NC(p))` per slice, with representatives
/// of `π_0`.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormsTable {
    pub p: u32,
    pub n: i64,
    pub cells: BTreeMap<(Slice, i64), ClosedCell>,
    #[serde(skip)]
    pub representatives: BTreeMap<Slice, Vec<ClosedFormRep>>,
}

impl ClosedFormsTable {
    pub fn dim(&self, slice: Slice, i: i64) -> Option<usize> {
        self.cells.get(&(slice, i)).map(|c| c.dim)
    }
}

pub fn closed_forms_space(
    p: &Presentation,
    form_weight: u32,
    n: i64,
    i_max: i64,
    weights: &[u32],
) -> Result<ClosedFormsTable, SymplecticError> {
    let dr = DeRhamAlgebra::new(p);
    let q = form_weight as i64;
    let top = n - q;
    let per_slice: Result<Vec<_>, SymplecticError> = slices(p, weights)
        .into_par_iter()
        .map(|slice| {
            let mx = mixed(&dr, slice)?;
            let w = nc_window(&mx.complex, q, top - i_max, top, 0)?;
            let h = w.window.cohomology();
            let mut cells = Vec::new();
            for i in 0..=i_max {
                cells.push((
                    (slice, i),
                    ClosedCell {
                        dim: h.dim(top - i).unwrap_or(0),
                        certified: slice.certified(),
                    },
                ));
            }
            let reps = h
                .at(top)
                .map(|c| {
                    c.representatives
                        .iter()
                        .map(|v| rep_from_vector(&mx, form_weight, n, &w.components(top, v)))
                        .collect()
                })
                .unwrap_or_default();
            Ok((cells, (slice, reps)))
        })
        .collect();
    let mut table = ClosedFormsTable {
        p: form_weight,
        n,
        cells: BTreeMap::new(),
        representatives: BTreeMap::new(),
    };
    for (cells, (slice, reps)) in per_slice? {
        table.cells.extend(cells);
        table.representatives.insert(slice, reps);
    }
    Ok(table)
}

fn rep_from_vector(mx: &DrMixed, p: u32, n: i64, comps: &BTreeMap<i64, crate::kernel::Vector>) -> ClosedFormRep {
    let q = p as i64;
    let m = n - q;
    let last = comps.keys().max().copied().unwrap_or(0);
    let components = (0..=last)
        .map(|i| match comps.get(&i) {
            Some(v) => mx.to_form((m - 2 * i, q + i), v),
            None => mx.dr.algebra().zero(),
        })
        .collect();
    ClosedFormRep {
        p,
        n,
        slice: mx.slice,
        components,
    }
}

/// `(ε α, 0, 0, …)`.
pub fn close_by_de_rham(dr: &DeRhamAlgebra, alpha: &FormClass) -> Result<ClosedFormRep, SymplecticError> {
    let d = dr.d_internal(&alpha.representative);
    if !d.is_zero() {
        return Err(SymplecticError::NotACocycle(dr.format(&d)));
    }
    Ok(ClosedFormRep {
        p: alpha.p + 1,
        n: alpha.n,
        slice: alpha.slice,
        components: vec![dr.d_de_rham(&alpha.representative)],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedCheck {
    pub closed: bool,
    pub failing_equation: Option<String>,
}

/// Checks placement of every component and the cocycle equations.
pub fn check_closed(dr: &DeRhamAlgebra, r: &ClosedFormRep) -> ClosedCheck {
    let alg = dr.algebra();
    let fail = |msg: String| ClosedCheck {
        closed: false,
        failing_equation: Some(msg),
    };
    if r.components.is_empty() {
        return fail("no components".into());
    }
    for (i, c) in r.components.iter().enumerate() {
        for (m, _) in c.terms() {
            let (deg, form) = (alg.mono_degree(m), alg.mono_form(m) as i64);
            if form != r.p as i64 + i as i64 || deg != r.n - i as i64 {
                return fail(format!("ω_{i} is not in (Ω^{})^{}", r.p as usize + i, r.n - i as i64));
            }
        }
    }
    let d0 = dr.d_internal(&r.components[0]);
    if !d0.is_zero() {
        return fail(format!("d ω_0 = {} ≠ 0", dr.format(&d0)));
    }
    for i in 1..=r.components.len() {
        let mut lhs = dr.d_de_rham(&r.components[i - 1]);
        if let Some(c) = r.components.get(i) {
            lhs.add_assign(&dr.d_internal(c));
        }
        let lhs = match r.slice {
            Slice::Truncated(_) => r.slice.project(alg, &lhs),
            Slice::Weight(_) => lhs,
        };
        if !lhs.is_zero() {
            let eq = if i < r.components.len() {
                format!("ε ω_{} + d ω_{i} = {} ≠ 0", i - 1, dr.format(&lhs))
            } else {
                format!("ε ω_{} = {} ≠ 0", i - 1, dr.format(&lhs))
            };
            return fail(eq);
        }
    }
    ClosedCheck {
        closed: true,
        failing_equation: None,
    }
}

/// Fiber of closed forms over a fixed form `w`.
#[derive(Clone, Debug, Serialize)]
pub struct KeysReport {
    pub liftable: bool,
    /// `i ↦ dim π_i(K(w))` for `i ≥ 0`; `π_0` is a torsor when liftable.
    pub tail_dims: BTreeMap<i64, usize>,
    /// Full cohomology of the tail complex, by degree.
    pub tail_cohomology: BTreeMap<i64, usize>,
    pub certified: bool,
    #[serde(skip)]
    pub key: Option<ClosedFormRep>,
}

pub fn keys_report(dr: &DeRhamAlgebra, w: &FormClass) -> Result<KeysReport, SymplecticError> {
    let d = dr.d_internal(&w.representative);
    if !d.is_zero() {
        return Err(SymplecticError::NotACocycle(dr.format(&d)));
    }
    let mx = mixed(dr, w.slice)?;
    let q = w.p as i64;
    let m = w.n - q;
    let tail_cohomology = nc_betti(&mx.complex, q, 1)?;
    let tail_dims = tail_cohomology
        .iter()
        .filter(|(deg, _)| **deg <= m)
        .map(|(deg, dim)| (m - deg, *dim))
        .collect();
    let win = nc_window(&mx.complex, q, m, m + 1, 1)?;
    let rhs_form = dr.d_de_rham(&w.representative).neg();
    let target = mx
        .to_vector((m - 1, q + 1), &w.slice.project(dr.algebra(), &rhs_form))
        .ok_or_else(|| SymplecticError::Malformed("ε w leaves its piece".into()))?;
    let basis_next = win.basis_at(m + 1);
    let mut rhs = vec![zero(); basis_next.len()];
    for (k, e) in basis_next.iter().enumerate() {
        if e.i == 1 {
            rhs[k] = target[e.index].clone();
        }
    }
    let dmat = win
        .differential(m)
        .cloned()
        .unwrap_or_else(|| SparseMatrix::zeros(basis_next.len(), 0));
    let sol = solve(&dmat, &rhs);
    let key = sol.map(|t| {
        let comps = win.components(m, &t);
        let mut rep = rep_from_vector(&mx, w.p, w.n, &comps);
        if rep.components.is_empty() {
            rep.components.push(w.representative.clone());
        } else {
            rep.components[0] = w.representative.clone();
        }
        rep
    });
    Ok(KeysReport {
        liftable: key.is_some(),
        tail_dims,
        tail_cohomology,
        certified: w.slice.certified(),
        key,
    })
}

#[cfg(test)]
mod tests;
