use std::collections::BTreeMap;

use serde::Serialize;

use super::{substitute, ConstructionError, Parametrized};
use crate::cdga::{build_presentation, BuildOptions, Derivation, DiffAssignment, GeneratorDecl, Mode, Polynomial, Presentation};
use crate::derham::DeRhamAlgebra;
use crate::symplectic::{check_closed, slice_of, symplectic_certificate, ClosedFormRep, SymplecticCertificate, SymplecticError};

/// Functions on the derived loop space: one extra generator `σx` of degree
/// `|x| − 1` per `x`, with `d(σx) = −σ(dx)`.
#[derive(Clone, Debug)]
pub struct LoopModel {
    pub base: Presentation,
    pub presentation: Presentation,
    /// The odd derivation `x ↦ σx`, `σx ↦ 0`.
    pub sigma: Derivation,
}

pub fn loop_model(p: &Presentation) -> Result<LoopModel, ConstructionError> {
    let g = p.nvars();
    let nv = 2 * g;
    let mut decls = p.decls();
    for x in p.gens() {
        decls.push(GeneratorDecl::new(&format!("σ{}", x.name), x.degree - 1, x.weight));
    }
    let mut images = vec![Polynomial::zero(nv); nv];
    for (k, img) in images.iter_mut().enumerate().take(g) {
        *img = Polynomial::var(nv, g + k);
    }
    let sigma = Derivation { odd: true, images };
    let free = build_presentation(&decls, &[], BuildOptions::default())?;
    let mut diffs = Vec::new();
    for k in 0..g {
        let dx = p.d_of(k).embed(nv);
        diffs.push(DiffAssignment {
            generator: p.gens()[k].name.clone(),
            value: dx.clone(),
            formal_degree: None,
        });
        diffs.push(DiffAssignment {
            generator: decls[g + k].name.clone(),
            value: free.algebra().apply(&sigma, &dx).neg(),
            formal_degree: None,
        });
    }
    let presentation = build_presentation(
        &decls,
        &diffs,
        BuildOptions {
            strict_nonpositive: p.strict_nonpositive(),
            truncate: match p.mode() {
                Mode::Weighted => None,
                Mode::Truncated(k) => Some(k),
            },
        },
    )?;
    for k in 0..nv {
        let twice = presentation.algebra().apply(&sigma, &sigma.images[k]);
        if !twice.is_zero() {
            return Err(ConstructionError::ModelMismatch("σ² ≠ 0".into()));
        }
    }
    Ok(LoopModel {
        base: p.clone(),
        presentation,
        sigma,
    })
}

/// Per-degree ranks of the tangent complex of the loop model against those
/// of `C(S¹) ⊗ T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentRanks {
    pub loop_model: BTreeMap<i64, usize>,
    pub circle_tensor_tangent: BTreeMap<i64, usize>,
    pub matches: bool,
}

fn tangent_ranks(l: &LoopModel) -> TangentRanks {
    let mut loop_model = BTreeMap::new();
    for x in l.presentation.gens() {
        *loop_model.entry(-x.degree).or_insert(0) += 1;
    }
    let mut tensor = BTreeMap::new();
    for x in l.base.gens() {
        // C(S¹) has one cochain in degree 0 and one in degree 1.
        for c in [0, 1] {
            *tensor.entry(-x.degree + c).or_insert(0) += 1;
        }
    }
    TangentRanks {
        matches: loop_model == tensor,
        loop_model,
        circle_tensor_tangent: tensor,
    }
}

#[derive(Clone, Debug)]
pub struct Transgression {
    pub loop_model: LoopModel,
    pub dr: DeRhamAlgebra,
    pub form: ClosedFormRep,
    pub certificate: SymplecticCertificate,
    pub ranks: TangentRanks,
}

/// `∫_{S¹} ev*ω` with `C(S¹) = ℚ ⊕ ℚe`, `|e| = 1`, and the orientation that
/// reads off the coefficient of `e` on the left.
pub fn s1_transgression(p: &Presentation, omega: &ClosedFormRep) -> Result<Transgression, ConstructionError> {
    let dr_p = DeRhamAlgebra::new(p);
    symplectic_certificate(&dr_p, omega, None)?;
    let l = loop_model(p)?;
    let dr = DeRhamAlgebra::new(&l.presentation);
    let g = p.nvars();
    let par = Parametrized::new(&dr, 1);
    let e = par.tau();
    let mut images = Vec::with_capacity(2 * g);
    for k in 0..g {
        let sx = par.lift(&dr.x(g + k));
        images.push(par.lift(&dr.x(k)).add(&par.alg.mul(&e, &sx)));
    }
    for k in 0..g {
        let dsx = par.lift(&dr.delta(g + k));
        images.push(par.lift(&dr.delta(k)).sub(&par.alg.mul(&e, &dsx)));
    }
    let components: Vec<Polynomial> = omega
        .components
        .iter()
        .map(|w| par.integrate(&substitute(dr_p.algebra(), &par.alg, &images, w)))
        .collect();
    let form = ClosedFormRep {
        p: omega.p,
        n: omega.n - 1,
        slice: slice_of(&dr, &components[0]),
        components,
    };
    if let Some(eq) = check_closed(&dr, &form).failing_equation {
        return Err(SymplecticError::ClosednessFailed(eq).into());
    }
    let certificate = symplectic_certificate(&dr, &form, None)?;
    let ranks = tangent_ranks(&l);
    Ok(Transgression {
        loop_model: l,
        dr,
        form,
        certificate,
        ranks,
    })
}
