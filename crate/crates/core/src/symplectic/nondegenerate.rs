use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SymplecticError;
use crate::cdga::{Mode, Monomial, Polynomial};
use crate::derham::{theta_matrix, theta_of, DeRhamAlgebra, PairingMatrix, TangentVector};
use crate::kernel::{inverse, rank, sign, Rational, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nondegeneracy {
    /// The constant part of Θ is invertible, so Θ itself is an isomorphism
    /// of free modules.
    Strict { theta: PairingMatrix, inverse: Vec<Vec<Rational>> },
    Degenerate { reason: String },
}

impl Nondegeneracy {
    pub fn is_strict(&self) -> bool {
        matches!(self, Nondegeneracy::Strict { .. })
    }
}

/// Degree profile of the generators against a shift `n`. A non-degenerate
/// `n`-shifted form needs `{|x|}` to equal `{n − |x|}` as multisets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplitudeReport {
    pub min_degree: i64,
    pub max_degree: i64,
    pub compatible_shift: i64,
    pub symmetric: bool,
}

pub fn amplitude_report(dr: &DeRhamAlgebra, n: i64) -> AmplitudeReport {
    let mut degs: Vec<i64> = dr.base().gens().iter().map(|g| g.degree).collect();
    degs.sort_unstable();
    let mut mirrored: Vec<i64> = degs.iter().map(|d| n - d).collect();
    mirrored.sort_unstable();
    let (a, b) = (degs.first().copied().unwrap_or(0), degs.last().copied().unwrap_or(0));
    AmplitudeReport {
        min_degree: a,
        max_degree: b,
        compatible_shift: a + b,
        symmetric: degs == mirrored,
    }
}

pub fn is_nondegenerate(dr: &DeRhamAlgebra, omega0: &Polynomial, n: i64) -> Result<Nondegeneracy, SymplecticError> {
    let alg = dr.algebra();
    if omega0.is_zero() {
        if dr.nbase() == 0 {
            let theta = theta_matrix(dr, omega0, n)?;
            return Ok(Nondegeneracy::Strict { theta, inverse: vec![] });
        }
        return Ok(Nondegeneracy::Degenerate {
            reason: "ω0 = 0".into(),
        });
    }
    if let Some(m) = omega0.terms().map(|(m, _)| m).find(|m| alg.mono_degree(m) != n) {
        return Ok(Nondegeneracy::Degenerate {
            reason: format!("ω0 has degree {}, not {n}", alg.mono_degree(m)),
        });
    }
    let theta = theta_matrix(dr, omega0, n)?;
    let m0 = theta.augmentation();
    let g = dr.nbase();
    let inv = inverse(&SparseMatrix::from_dense(g, g, &m0))?;
    Ok(match inv {
        Some(inv) => Nondegeneracy::Strict {
            theta,
            inverse: inv.to_dense(),
        },
        None => Nondegeneracy::Degenerate {
            reason: format!("constant part of Θ has rank {} < {g}", rank(&SparseMatrix::from_dense(g, g, &m0))),
        },
    })
}

/// Cohomology of `Cone(Θ : T → Ω¹[n])` on one weight of `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeCheck {
    pub per_weight: BTreeMap<i64, BTreeMap<i64, usize>>,
    pub acyclic: bool,
}

struct Graded {
    index: BTreeMap<i64, Vec<(usize, Monomial)>>,
}

impl Graded {
    fn position(&self, deg: i64, key: &(usize, Monomial)) -> Option<usize> {
        self.index.get(&deg)?.iter().position(|k| k == key)
    }
    fn dim(&self, deg: i64) -> usize {
        self.index.get(&deg).map_or(0, |v| v.len())
    }
}

/// Exact check on the listed tangent weights; only meaningful for weight
/// slices, so truncated presentations are refused.
pub fn cone_check(dr: &DeRhamAlgebra, omega0: &Polynomial, n: i64, weights: &[i64]) -> Result<ConeCheck, SymplecticError> {
    if matches!(dr.base().mode(), Mode::Truncated(_)) {
        return Err(SymplecticError::Malformed("cone check needs a weighted presentation".into()));
    }
    let alg = dr.algebra();
    let big_w = alg.tridegree(omega0).map_or(0, |t| t.1) as i64;
    let g = dr.nbase();
    let balg = dr.base().algebra();
    let mut per_weight = BTreeMap::new();
    let mut acyclic = true;
    for &k in weights {
        let mut tan = Graded { index: BTreeMap::new() };
        for j in 0..g {
            let w = k + balg.gens()[j].weight as i64;
            if w < 0 {
                continue;
            }
            for m in balg.monomials_of_weight(w as u32) {
                let deg = balg.mono_degree(&m) - balg.gens()[j].degree;
                tan.index.entry(deg).or_default().push((j, m));
            }
        }
        let mut one = Graded { index: BTreeMap::new() };
        if k + big_w >= 0 {
            for m in alg.monomials_of_weight((k + big_w) as u32) {
                if alg.mono_form(&m) == 1 {
                    one.index.entry(alg.mono_degree(&m) - n).or_default().push((0, m));
                }
            }
        }
        let degrees: Vec<i64> = tan.index.keys().map(|d| d - 1).chain(one.index.keys().copied()).collect();
        let (Some(&lo), Some(&hi)) = (degrees.iter().min(), degrees.iter().max()) else {
            per_weight.insert(k, BTreeMap::new());
            continue;
        };
        let vector = |j: usize, m: &Monomial| {
            let mut v = TangentVector::zero(g, dr);
            v.coeffs[j] = Polynomial::term(m.clone(), crate::kernel::one());
            v
        };
        // Cone^s = T^{s+1} ⊕ B^s, D(a, b) = (−d_T a, Θ a + (−1)^n d b).
        let cone_dim = |s: i64| tan.dim(s + 1) + one.dim(s);
        let mut ranks = BTreeMap::new();
        for s in lo - 1..=hi {
            let (src_t, dst_t) = (tan.dim(s + 1), tan.dim(s + 2));
            let mut mat = SparseMatrix::zeros(cone_dim(s + 1), cone_dim(s));
            for (c, (j, m)) in tan.index.get(&(s + 1)).into_iter().flatten().enumerate() {
                let v = vector(*j, m);
                let dv = dr.tangent_differential(&v);
                for (jj, coeff) in dv.coeffs.iter().enumerate() {
                    for (mm, x) in coeff.terms() {
                        let r = tan.position(s + 2, &(jj, mm.clone())).expect("tangent basis");
                        mat.add_to(r, c, &-x.clone());
                    }
                }
                let th = theta_of(dr, omega0, n, &v);
                for (mm, x) in th.terms() {
                    let r = one.position(s + 1, &(0, mm.clone())).expect("one-form basis");
                    mat.add_to(dst_t + r, c, x);
                }
            }
            for (c, (_, m)) in one.index.get(&s).into_iter().flatten().enumerate() {
                let db = dr
                    .d_internal(&Polynomial::term(m.clone(), crate::kernel::one()))
                    .scale(&sign(n.rem_euclid(2) == 1));
                for (mm, x) in db.terms() {
                    let r = one.position(s + 1, &(0, mm.clone())).expect("one-form basis");
                    mat.add_to(dst_t + r, src_t + c, x);
                }
            }
            ranks.insert(s, rank(&mat));
        }
        let mut h = BTreeMap::new();
        for s in lo..=hi {
            let dim = cone_dim(s) - ranks[&s] - ranks[&(s - 1)];
            if dim != 0 {
                acyclic = false;
                h.insert(s, dim);
            }
        }
        per_weight.insert(k, h);
    }
    Ok(ConeCheck { per_weight, acyclic })
}
