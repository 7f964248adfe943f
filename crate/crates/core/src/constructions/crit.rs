use serde::Serialize;

use super::{partial, ConstructionError};
use crate::cdga::{
    build_presentation, truncation_h0, BuildOptions, DiffAssignment, GeneratorDecl, Mode, Polynomial, Presentation,
    QuotientRing, Slice,
};
use crate::derham::DeRhamAlgebra;
use crate::kernel::{rat, Rational};
use crate::symplectic::{symplectic_certificate, ClosedFormRep, SymplecticCertificate};

/// Global sign of `ω_0 = σ Σ δx_i δξ_i`, frozen to agree with the strict
/// Lagrangian residue of the zero section against the graph of `d(x²)`.
pub const RCRIT_SIGN: i64 = -1;

fn check_smooth(p: &Presentation) -> Result<(), ConstructionError> {
    for k in 0..p.nvars() {
        let g = &p.gens()[k];
        if g.degree != 0 || !p.d_of(k).is_zero() {
            return Err(ConstructionError::NotSmooth(format!("generator {} is not a free even coordinate", g.name)));
        }
    }
    Ok(())
}

fn xi_name(p: &Presentation, i: usize) -> String {
    if p.nvars() == 1 {
        "xi".to_string()
    } else {
        format!("xi_{}", p.gens()[i].name)
    }
}

/// Koszul model of the zero locus of `s`: one odd `ξ_i` of degree −1 per
/// component, with `d ξ_i = s_i`. An inhomogeneous section needs
/// `truncate`, which puts the result in truncated mode.
pub fn derived_zero_locus(
    p: &Presentation,
    sections: &[Polynomial],
    truncate: Option<usize>,
) -> Result<Presentation, ConstructionError> {
    let names: Vec<String> = if sections.len() == 1 {
        vec!["xi".to_string()]
    } else {
        (1..=sections.len()).map(|i| format!("xi_{i}")).collect()
    };
    let weights = section_weights(p, sections, truncate.is_some(), None)?;
    zero_locus(p, sections, &names, &weights, truncate)
}

fn section_weights(
    p: &Presentation,
    sections: &[Polynomial],
    truncated: bool,
    fallback: Option<&[u32]>,
) -> Result<Vec<u32>, ConstructionError> {
    let alg = p.algebra();
    sections
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.is_zero() {
                return Ok(fallback.map_or(1, |f| f[i]));
            }
            match alg.tridegree(s) {
                Some((0, w, _)) if w > 0 => Ok(w),
                Some((0, _, _)) => Err(ConstructionError::WeightAssignmentFailed(format!("ξ_{}", i + 1))),
                _ if truncated => Ok(1),
                _ => Err(ConstructionError::InhomogeneousSection(i)),
            }
        })
        .collect()
}

fn zero_locus(
    p: &Presentation,
    sections: &[Polynomial],
    names: &[String],
    weights: &[u32],
    truncate: Option<usize>,
) -> Result<Presentation, ConstructionError> {
    check_smooth(p)?;
    let g = p.nvars();
    let nv = g + sections.len();
    let mut decls = p.decls();
    let mut diffs = Vec::new();
    for (i, s) in sections.iter().enumerate() {
        if s.nvars() != g {
            return Err(crate::cdga::CdgaError::MixedPresentations.into());
        }
        decls.push(GeneratorDecl::new(&names[i], -1, weights[i]));
        diffs.push(DiffAssignment {
            generator: names[i].clone(),
            value: s.embed(nv),
            formal_degree: None,
        });
    }
    let truncate = truncate.or(match p.mode() {
        Mode::Truncated(k) => Some(k),
        Mode::Weighted => None,
    });
    Ok(build_presentation(
        &decls,
        &diffs,
        BuildOptions {
            strict_nonpositive: p.strict_nonpositive(),
            truncate,
        },
    )?)
}

/// `RCrit(f)` with its (−1)-shifted symplectic structure.
#[derive(Clone, Debug)]
pub struct CritData {
    pub base: Presentation,
    pub f: Polynomial,
    pub presentation: Presentation,
    pub dr: DeRhamAlgebra,
    pub omega: ClosedFormRep,
    pub certificate: SymplecticCertificate,
    pub h0: QuotientRing,
}

pub fn rcrit(p: &Presentation, f: &Polynomial) -> Result<CritData, ConstructionError> {
    check_smooth(p)?;
    let alg = p.algebra();
    let g = p.nvars();
    let total_weight = match alg.tridegree(f) {
        Some((0, w, _)) => w,
        _ if f.is_zero() => 2 * p.gens().iter().map(|x| x.weight).max().unwrap_or(1),
        _ => return Err(ConstructionError::InhomogeneousSection(0)),
    };
    let sections: Vec<Polynomial> = (0..g).map(|k| partial(alg, k, f)).collect();
    let fallback: Vec<u32> = p
        .gens()
        .iter()
        .map(|x| total_weight.checked_sub(x.weight).filter(|w| *w > 0).unwrap_or(1))
        .collect();
    let weights = section_weights(p, &sections, false, Some(&fallback))?;
    let names: Vec<String> = (0..g).map(|i| xi_name(p, i)).collect();
    let presentation = zero_locus(p, &sections, &names, &weights, None)?;
    let dr = DeRhamAlgebra::new(&presentation);
    let mut omega0 = dr.algebra().zero();
    for i in 0..g {
        omega0.add_assign(&dr.mul(&dr.delta(i), &dr.delta(g + i)));
    }
    let omega0 = omega0.scale(&rat(RCRIT_SIGN));
    let slice = match dr.algebra().tridegree(&omega0) {
        Some((_, w, _)) => Slice::Weight(w),
        None => {
            return Err(ConstructionError::WeightAssignmentFailed(
                "ω_0 is not weight-homogeneous".into(),
            ))
        }
    };
    let omega = ClosedFormRep {
        p: 2,
        n: -1,
        slice,
        components: vec![omega0],
    };
    let certificate = symplectic_certificate(&dr, &omega, None)?;
    let h0 = truncation_h0(&presentation)?;
    Ok(CritData {
        base: p.clone(),
        f: f.clone(),
        presentation,
        dr,
        omega,
        certificate,
        h0,
    })
}

/// The cotangent module of `RCrit(f)` restricted to `h⁰`: free on `δξ_j` in
/// degree −1 and `δx_i` in degree 0, with `d(δξ_j) = Σ_i D_ij δx_i`.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    /// `∂_i ∂_j f` in normal form over `h⁰`.
    #[serde(skip)]
    pub hessian: Vec<Vec<Polynomial>>,
    /// Matrix of the differential `δξ → δx` in normal form over `h⁰`.
    #[serde(skip)]
    pub differential: Vec<Vec<Polynomial>>,
    pub hessian_text: Vec<Vec<String>>,
    pub differential_text: Vec<Vec<String>>,
    /// The differential equals `sign · hessian`.
    pub sign: Option<i64>,
    pub symmetric: bool,
}

pub fn symmetric_obstruction(c: &CritData) -> Result<ObstructionReport, ConstructionError> {
    let g = c.base.nvars();
    let alg = c.base.algebra();
    let pres = &c.presentation;
    let to_h0 = |f: &Polynomial| -> Result<Polynomial, ConstructionError> {
        let q = c
            .h0
            .from_presentation(pres, f)
            .ok_or_else(|| ConstructionError::ModelMismatch("entry leaves the degree-0 part".into()))?;
        Ok(c.h0.normal_form(&q))
    };
    let mut hessian = vec![vec![]; g];
    let mut differential = vec![vec![c.h0.ring().zero(); g]; g];
    for i in 0..g {
        for j in 0..g {
            let h = partial(alg, i, &partial(alg, j, &c.f));
            hessian[i].push(to_h0(&h.embed(pres.nvars()))?);
        }
    }
    for j in 0..g {
        let image = c.dr.d_internal(&c.dr.delta(g + j));
        let coeffs = c
            .dr
            .one_form_coefficients(&image)
            .ok_or_else(|| ConstructionError::ModelMismatch("d δξ is not a 1-form".into()))?;
        for i in 0..g {
            differential[i][j] = to_h0(&coeffs[i])?;
        }
        if coeffs[g..].iter().any(|x| !x.is_zero()) {
            return Err(ConstructionError::ModelMismatch("d δξ has a δξ component".into()));
        }
    }
    let sign = [1i64, -1].into_iter().find(|&s| {
        let s: Rational = rat(s);
        (0..g).all(|i| (0..g).all(|j| differential[i][j] == hessian[i][j].scale(&s)))
    });
    let symmetric = (0..g).all(|i| (0..g).all(|j| differential[i][j] == differential[j][i]));
    let ring = c.h0.ring();
    let text = |m: &Vec<Vec<Polynomial>>| m.iter().map(|r| r.iter().map(|p| ring.format(p)).collect()).collect();
    Ok(ObstructionReport {
        hessian_text: text(&hessian),
        differential_text: text(&differential),
        hessian,
        differential,
        sign,
        symmetric,
    })
}
