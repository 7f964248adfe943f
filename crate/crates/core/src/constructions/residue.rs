use super::{
    partial, pullback_form, shifted_cotangent_with_weight, substitute, ConstructionError, CritData,
    Parametrized,
};
use crate::cdga::{build_presentation, AlgebraMorphism, BuildOptions, DiffAssignment, GeneratorDecl, Polynomial, Presentation};
use crate::derham::{theta_matrix, DeRhamAlgebra};
use crate::kernel::{inverse, rat, SparseMatrix};
use crate::symplectic::{
    check_closed, close_by_de_rham, cone_check, jacobian, leg_record, matrix_strings, slice_of, ClosedFormRep,
    CheckRecord, FormClass, LadderWitness, SymplecticCertificate,
};

/// Two strictly isotropic maps into a symplectic target, and a quasi-free
/// model `Z` of their fiber product.
///
/// `leg0 : X → L` and `leg1 : X → L′` are algebra maps; `incl0 : L → Z` and
/// `incl1 : L′ → Z` land in the model, and `homotopy[k] ∈ Z` satisfies
/// `d h_k = incl0(leg0(x_k)) − incl1(leg1(x_k))`.
#[derive(Clone, Debug)]
pub struct StrictLagrangianData {
    pub omega: ClosedFormRep,
    pub leg0: AlgebraMorphism,
    pub leg1: AlgebraMorphism,
    pub incl0: AlgebraMorphism,
    pub incl1: AlgebraMorphism,
    pub homotopy: Vec<Polynomial>,
}

impl StrictLagrangianData {
    /// Functions on the symplectic target. Algebra maps point away from it.
    #[allow(clippy::misnamed_getters)]
    pub fn target(&self) -> &Presentation {
        &self.leg0.source
    }

    pub fn model(&self) -> &Presentation {
        &self.incl0.target
    }
}

#[derive(Clone, Debug)]
pub struct ResidueResult {
    pub dr: DeRhamAlgebra,
    pub form: ClosedFormRep,
    pub certificate: SymplecticCertificate,
}

/// Transports `ω_0` around the loop `φ0 ⇒ φ1` given by the homotopy
/// generators and integrates over the interval.
pub fn strict_lagrangian_residue(
    data: &StrictLagrangianData,
    cone_weights: Option<&[i64]>,
) -> Result<ResidueResult, ConstructionError> {
    let x = data.target();
    let z = data.model();
    let n = data.omega.n;
    if !data.omega.higher_components_vanish() {
        return Err(ConstructionError::StrictnessViolated("ω has higher components".into()));
    }
    if let Some(k) = (0..x.nvars()).find(|&k| !x.d_of(k).is_zero()) {
        return Err(ConstructionError::StrictnessViolated(format!(
            "target generator {} is not a cocycle",
            x.gens()[k].name
        )));
    }
    if data.leg0.target != data.incl0.source || data.leg1.target != data.incl1.source || data.incl1.target != *z {
        return Err(ConstructionError::ModelMismatch("legs and inclusions do not compose".into()));
    }
    if data.homotopy.len() != x.nvars() {
        return Err(ConstructionError::ModelMismatch("one homotopy generator per target generator".into()));
    }
    let dr_x = DeRhamAlgebra::new(x);
    let omega0 = data.omega.omega0();
    for (name, leg) in [("leg0", &data.leg0), ("leg1", &data.leg1)] {
        let dr_l = DeRhamAlgebra::new(&leg.target);
        let pulled = pullback_form(&dr_x, &dr_l, &leg.images, omega0);
        if !pulled.is_zero() {
            return Err(ConstructionError::StrictnessViolated(format!(
                "{name} pulls ω_0 back to {}",
                dr_l.format(&pulled)
            )));
        }
    }
    let a: Vec<Polynomial> = data.leg0.images.iter().map(|p| data.incl0.apply(p)).collect();
    let b: Vec<Polynomial> = data.leg1.images.iter().map(|p| data.incl1.apply(p)).collect();
    for k in 0..x.nvars() {
        if z.apply_d(&data.homotopy[k]) != a[k].sub(&b[k]) {
            return Err(ConstructionError::ModelMismatch(format!(
                "d h does not witness the composites on {}",
                x.gens()[k].name
            )));
        }
    }

    let dr_z = DeRhamAlgebra::new(z);
    let par = Parametrized::new(&dr_z, 1);
    let (t, tau) = (par.t(), par.tau());
    let one_minus_t = par.alg.one().sub(&t);
    let mut images = Vec::new();
    let mut delta_images = Vec::new();
    for k in 0..x.nvars() {
        let (ak, bk, hk) = (dr_z.embed(&a[k]), dr_z.embed(&b[k]), dr_z.embed(&data.homotopy[k]));
        let path = par
            .alg
            .mul(&one_minus_t, &par.lift(&ak))
            .add(&par.alg.mul(&t, &par.lift(&bk)))
            .sub(&par.alg.mul(&tau, &par.lift(&hk)));
        let dpath = par
            .alg
            .mul(&one_minus_t, &par.lift(&dr_z.d_de_rham(&ak)))
            .add(&par.alg.mul(&t, &par.lift(&dr_z.d_de_rham(&bk))))
            .add(&par.alg.mul(&tau, &par.lift(&dr_z.d_de_rham(&hk))));
        images.push(path);
        delta_images.push(dpath);
    }
    // The path must be a chain map for d_Z + (t ↦ τ).
    let mut d_images: Vec<Polynomial> = dr_z
        .internal_derivation()
        .images
        .iter()
        .map(|p| par.lift(p))
        .collect();
    d_images.push(tau.clone());
    d_images.push(par.alg.zero());
    let d_par = crate::cdga::Derivation {
        odd: true,
        images: d_images,
    };
    for (k, path) in images.iter().enumerate() {
        if !par.alg.apply(&d_par, path).is_zero() {
            return Err(ConstructionError::ModelMismatch(format!(
                "path is not a chain map on {}",
                x.gens()[k].name
            )));
        }
    }
    images.extend(delta_images);
    let transported = substitute(dr_x.algebra(), &par.alg, &images, omega0);
    let residue = par.integrate(&transported);

    let form = ClosedFormRep {
        p: 2,
        n: n - 1,
        slice: slice_of(&dr_z, &residue),
        components: vec![residue],
    };
    if let Some(eq) = check_closed(&dr_z, &form).failing_equation {
        return Err(ConstructionError::Symplectic(crate::symplectic::SymplecticError::ClosednessFailed(eq)));
    }

    let theta_x = theta_matrix(&dr_x, omega0, n)?;
    let m0 = theta_x.augmentation();
    let gx = x.nvars();
    let inv = inverse(&SparseMatrix::from_dense(gx, gx, &m0))?.ok_or_else(|| {
        ConstructionError::Symplectic(crate::symplectic::SymplecticError::DegenerateForm(
            "target form is degenerate".into(),
        ))
    })?;
    let legs = vec![
        leg_record("leg0", &jacobian(data.leg0.target.nvars(), &data.leg0.images), &m0),
        leg_record("leg1", &jacobian(data.leg1.target.nvars(), &data.leg1.images), &m0),
    ];
    let ladder = LadderWitness {
        target_matrix: matrix_strings(&m0),
        target_inverse: matrix_strings(&inv.to_dense()),
        legs,
    };
    let mut certificate = SymplecticCertificate::with_ladder(&dr_z, &form, ladder)?;
    if let Some(ws) = cone_weights {
        let cone = cone_check(&dr_z, form.omega0(), form.n, ws)?;
        certificate.checks.push(CheckRecord {
            name: "cone acyclic".into(),
            passed: cone.acyclic,
        });
        if !cone.acyclic {
            return Err(ConstructionError::Symplectic(crate::symplectic::SymplecticError::DegenerateForm(
                "cone of Θ on the model is not acyclic".into(),
            )));
        }
        certificate.cone = Some(cone);
    }
    Ok(ResidueResult {
        dr: dr_z,
        form,
        certificate,
    })
}

fn smooth_copy(p: &Presentation, prefix: &str) -> Result<Presentation, ConstructionError> {
    let decls: Vec<GeneratorDecl> = p
        .gens()
        .iter()
        .map(|g| GeneratorDecl::new(&format!("{prefix}{}", g.name), g.degree, g.weight))
        .collect();
    Ok(build_presentation(&decls, &[], BuildOptions::default())?)
}

/// The zero section and the graph of `df` inside `T*X` (with `ω = ε λ`),
/// and the model of their intersection on `u, v, h_x, h_y`.
pub fn crit_lagrangian_data(p: &Presentation, f: &Polynomial) -> Result<StrictLagrangianData, ConstructionError> {
    let g = p.nvars();
    if (0..g).any(|k| p.gens()[k].degree != 0 || !p.d_of(k).is_zero()) {
        return Err(ConstructionError::NotSmooth("base must be free on even degree-0 generators".into()));
    }
    let alg = p.algebra();
    let w = match alg.tridegree(f) {
        Some((0, w, _)) => Some(w),
        _ if f.is_zero() => None,
        _ => return Err(ConstructionError::InhomogeneousSection(0)),
    };
    let cot = shifted_cotangent_with_weight(p, 0, w)?;
    let x = cot.total.clone();
    let lambda = FormClass {
        p: 1,
        n: 0,
        slice: slice_of(&cot.dr, &cot.liouville),
        representative: cot.liouville.clone(),
    };
    let omega = close_by_de_rham(&cot.dr, &lambda)?;

    let l0 = smooth_copy(p, "u_")?;
    let l1 = smooth_copy(p, "v_")?;
    let mut zdecls = l0.decls();
    zdecls.extend(l1.decls());
    for gen in x.gens() {
        zdecls.push(GeneratorDecl::new(&format!("h_{}", gen.name), gen.degree - 1, gen.weight));
    }
    let free_z = build_presentation(&zdecls, &[], BuildOptions::default())?;
    let za = free_z.algebra();
    let into = |src: &Presentation, offset: usize, q: &Polynomial| {
        let imgs: Vec<Polynomial> = (0..g).map(|k| za.var(offset + k)).collect();
        substitute(src.algebra(), za, &imgs, q)
    };
    let l1_vars: Vec<Polynomial> = (0..g).map(|k| l1.algebra().var(k)).collect();
    let grad_v: Vec<Polynomial> = (0..g)
        .map(|k| substitute(alg, l1.algebra(), &l1_vars, &partial(alg, k, f)))
        .collect();
    let mut zdiffs = Vec::new();
    for k in 0..2 * g {
        let value = if k < g {
            za.var(k).sub(&za.var(g + k))
        } else {
            into(&l1, g, &grad_v[k - g]).neg()
        };
        zdiffs.push(DiffAssignment {
            generator: format!("h_{}", x.gens()[k].name),
            value,
            formal_degree: None,
        });
    }
    let z = build_presentation(&zdecls, &zdiffs, BuildOptions::default())?;
    let mut leg0_images: Vec<Polynomial> = (0..g).map(|k| l0.algebra().var(k)).collect();
    let mut leg1_images: Vec<Polynomial> = (0..g).map(|k| l1.algebra().var(k)).collect();
    leg0_images.extend((0..g).map(|_| l0.algebra().zero()));
    leg1_images.extend(grad_v);
    let incl0 = AlgebraMorphism::new(l0.clone(), z.clone(), (0..g).map(|k| z.algebra().var(k)).collect())?;
    let incl1 = AlgebraMorphism::new(l1.clone(), z.clone(), (0..g).map(|k| z.algebra().var(g + k)).collect())?;
    let homotopy: Vec<Polynomial> = (0..2 * g).map(|k| z.algebra().var(2 * g + k)).collect();
    Ok(StrictLagrangianData {
        omega,
        leg0: AlgebraMorphism::new(x.clone(), l0, leg0_images)?,
        leg1: AlgebraMorphism::new(x, l1, leg1_images)?,
        incl0,
        incl1,
        homotopy,
    })
}

/// Pushes a form on the intersection model forward to `RCrit(f)` along
/// `u, v ↦ x`, `h_x ↦ 0`, `h_y ↦ −ξ`, and returns it with the ratio to the
/// `RCrit` form when that ratio is ±1.
pub fn pushforward_to_rcrit(res: &ResidueResult, crit: &CritData) -> Result<(Polynomial, Option<i64>), ConstructionError> {
    let z = res.dr.base();
    let r = &crit.presentation;
    let g = crit.base.nvars();
    let mut images = Vec::new();
    for k in 0..2 * g {
        images.push(r.algebra().var(k % g));
    }
    for _ in 0..g {
        images.push(r.algebra().zero());
    }
    for k in 0..g {
        images.push(r.algebra().var(g + k).neg());
    }
    let psi = AlgebraMorphism::new(z.clone(), r.clone(), images)?;
    let pushed = pullback_form(&res.dr, &crit.dr, &psi.images, res.form.omega0());
    let omega = crit.omega.omega0();
    let ratio = [1i64, -1].into_iter().find(|&s| pushed == omega.scale(&rat(s)));
    Ok((pushed, ratio))
}
