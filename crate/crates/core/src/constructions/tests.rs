use super::*;
use crate::cdga::{Presentation, Slice};
use crate::dsl::{form, function, presentation};
use crate::kernel::rat;
use crate::symplectic::{check_closed, NondegeneracyWitness};

fn line() -> Presentation {
    presentation("gen x: degree 0;")
}

fn plane() -> Presentation {
    presentation("gen x: degree 0; gen y: degree 0;")
}

#[test]
fn cotangent_of_the_line() {
    let c = shifted_cotangent(&line(), 0).unwrap();
    assert_eq!(c.total.gens()[1].name, "y_x");
    assert_eq!(c.total.gens()[1].degree, 0);
    assert_eq!(c.liouville, form(&c.dr, "y_x*d x"));
    let (cert, golden) = cotangent_symplectic(&c, true).unwrap();
    assert!(golden.matches);
    cert.verify().unwrap();
}

#[test]
fn cotangent_degrees_follow_the_shift() {
    let c = shifted_cotangent(&line(), -2).unwrap();
    assert_eq!(c.total.gens()[1].degree, -2);
    assert_eq!(c.liouville, form(&c.dr, "y_x*d x"));
    let odd = presentation("gen th: degree -1;");
    let c = shifted_cotangent(&odd, -1).unwrap();
    assert_eq!(c.total.gens()[1].degree, 0);
    assert_eq!(c.liouville, form(&c.dr, "y_th*d th"));
}

#[test]
fn odd_cotangent_has_the_opposite_global_sign() {
    let odd = presentation("gen th: degree -1;");
    let c = shifted_cotangent(&odd, -1).unwrap();
    let (_, golden) = cotangent_symplectic(&c, false).unwrap();
    assert_eq!(golden.mismatches.len(), 2);
    assert!(matches!(
        cotangent_symplectic(&c, true),
        Err(ConstructionError::GoldenMismatch(_))
    ));
}

#[test]
fn cotangent_of_rcrit_is_a_cocycle_model() {
    let r = presentation("gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = 3*x^2;");
    let c = shifted_cotangent(&r, -1).unwrap();
    assert!(check_closed(&c.dr, &crate::symplectic::ClosedFormRep {
        p: 2,
        n: -1,
        slice: crate::symplectic::slice_of(&c.dr, &c.dr.d_de_rham(&c.liouville)),
        components: vec![c.dr.d_de_rham(&c.liouville)],
    })
    .closed);
    let (cert, _) = cotangent_symplectic(&c, false).unwrap();
    cert.verify().unwrap();
    let bad = shifted_cotangent_with_weight(&r, -1, Some(2));
    assert!(matches!(bad, Err(ConstructionError::WeightAssignmentFailed(_))));
}

#[test]
fn positive_shift_needs_the_strict_flag_off() {
    let strict = crate::dsl::parse("strict_nonpositive; gen x: degree 0;").unwrap().presentation;
    assert!(shifted_cotangent(&strict, 1).is_err());
    assert!(shifted_cotangent(&line(), 2).is_ok());
}

#[test]
fn zero_loci() {
    let p = line();
    let z = derived_zero_locus(&p, &[function(&p, "x")], None).unwrap();
    assert_eq!(crate::cdga::truncation_h0(&z).unwrap().dims(4).total, Some(1));
    let q = plane();
    let z = derived_zero_locus(&q, &[function(&q, "x*y"), function(&q, "0")], None).unwrap();
    // ξ_2 is a cycle that is not a boundary.
    let h = crate::symplectic::forms_space(&z, 0, -1, &[1]).unwrap();
    assert!(h.cells[&Slice::Weight(1)].dim >= 1);
    assert!(matches!(
        derived_zero_locus(&p, &[function(&p, "x + x^2")], None),
        Err(ConstructionError::InhomogeneousSection(0))
    ));
    let t = derived_zero_locus(&p, &[function(&p, "x + x^2")], Some(3)).unwrap();
    assert!(!t.is_certified());
}

#[test]
fn rcrit_of_a_cubic() {
    let p = line();
    let c = rcrit(&p, &function(&p, "x^3")).unwrap();
    assert_eq!(c.presentation.d_of(1), &function(&c.presentation, "3*x^2"));
    assert_eq!(c.h0.dims(5).total, Some(2));
    assert!(c.omega.higher_components_vanish());
    c.certificate.verify().unwrap();
}

#[test]
fn rcrit_weights() {
    let p = plane();
    let c = rcrit(&p, &function(&p, "x^2*y")).unwrap();
    assert_eq!(c.presentation.gens()[2].weight, 2);
    assert_eq!(c.presentation.gens()[3].weight, 2);
    let c = rcrit(&p, &function(&p, "x^2 + y^2")).unwrap();
    assert_eq!(c.h0.dims(4).total, Some(1));
}

#[test]
fn obstruction_for_the_cubic() {
    let p = line();
    let c = rcrit(&p, &function(&p, "x^3")).unwrap();
    let o = symmetric_obstruction(&c).unwrap();
    assert_eq!(o.hessian_text, vec![vec!["6*x".to_string()]]);
    assert!(o.symmetric);
    assert_eq!(o.sign, Some(-1));
}

#[test]
fn obstruction_for_x2y() {
    let p = plane();
    let c = rcrit(&p, &function(&p, "x^2*y")).unwrap();
    let o = symmetric_obstruction(&c).unwrap();
    assert!(o.symmetric);
    assert_eq!(o.hessian_text[1][1], "0");
    assert_eq!(o.hessian_text[0][1], o.hessian_text[1][0]);
}

#[test]
fn residue_of_the_square_fixes_the_rcrit_sign() {
    let p = line();
    let f = function(&p, "x^2");
    let data = crit_lagrangian_data(&p, &f).unwrap();
    let res = strict_lagrangian_residue(&data, Some(&[-2, -1, 0, 1, 2])).unwrap();
    let crit = rcrit(&p, &f).unwrap();
    let (_, ratio) = pushforward_to_rcrit(&res, &crit).unwrap();
    assert_eq!(ratio, Some(1));
    assert!(matches!(res.certificate.witness, NondegeneracyWitness::Ladder(_)));
    res.certificate.verify().unwrap();
}

#[test]
fn residue_of_the_cubic() {
    let p = line();
    let f = function(&p, "x^3");
    let data = crit_lagrangian_data(&p, &f).unwrap();
    let res = strict_lagrangian_residue(&data, Some(&[-2, -1, 0, 1, 2])).unwrap();
    let dr = &res.dr;
    let expected = form(dr, "3*v_x*d v_x*d h_x - 1/2*d h_y_x*d u_x - 1/2*d h_y_x*d v_x");
    assert_eq!(res.form.omega0().scale(&rat(-1)), expected);
    let (_, ratio) = pushforward_to_rcrit(&res, &rcrit(&p, &f).unwrap()).unwrap();
    assert_eq!(ratio, Some(1));
}

#[test]
fn residue_scales_with_the_target_form() {
    let p = line();
    let f = function(&p, "x^3");
    let mut data = crit_lagrangian_data(&p, &f).unwrap();
    let base = strict_lagrangian_residue(&data, None).unwrap();
    data.omega = data.omega.scale(&rat(5));
    let scaled = strict_lagrangian_residue(&data, None).unwrap();
    assert_eq!(scaled.form.omega0(), &base.form.omega0().scale(&rat(5)));
}

#[test]
fn residue_of_the_zero_function() {
    let p = line();
    let data = crit_lagrangian_data(&p, &function(&p, "0")).unwrap();
    let res = strict_lagrangian_residue(&data, None).unwrap();
    let crit = rcrit(&p, &function(&p, "0")).unwrap();
    assert!(crit.presentation.d_of(1).is_zero());
    assert_eq!(pushforward_to_rcrit(&res, &crit).unwrap().1, Some(1));
}

#[test]
fn residue_rejects_a_broken_homotopy() {
    let p = line();
    let mut data = crit_lagrangian_data(&p, &function(&p, "x^2")).unwrap();
    data.homotopy.swap(0, 1);
    assert!(matches!(
        strict_lagrangian_residue(&data, None),
        Err(ConstructionError::ModelMismatch(_))
    ));
}

#[test]
fn loop_models() {
    let l = loop_model(&line()).unwrap();
    assert_eq!(l.presentation.gens()[1].name, "σx");
    assert_eq!(l.presentation.gens()[1].degree, -1);
    let r = presentation("gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = 3*x^2;");
    let l = loop_model(&r).unwrap();
    assert_eq!(l.presentation.gens()[3].degree, -2);
    assert_eq!(l.presentation.d_of(3), &function(&l.presentation, "-6*x*σx"));
}

#[test]
fn transgression_of_the_plane() {
    let p = plane();
    let dr = crate::derham::DeRhamAlgebra::new(&p);
    let omega = crate::symplectic::ClosedFormRep {
        p: 2,
        n: 0,
        slice: Slice::Weight(2),
        components: vec![form(&dr, "d x*d y")],
    };
    let t = s1_transgression(&p, &omega).unwrap();
    assert_eq!(t.form.n, -1);
    assert_eq!(t.form.omega0(), &form(&t.dr, "d x*d σy - d σx*d y"));
    assert!(t.ranks.matches);
    assert_eq!(t.ranks.loop_model.get(&0), Some(&2));
    assert_eq!(t.ranks.loop_model.get(&1), Some(&2));
    let scaled = s1_transgression(&p, &omega.scale(&rat(3))).unwrap();
    assert_eq!(scaled.form.omega0(), &t.form.omega0().scale(&rat(3)));
    t.certificate.verify().unwrap();
}

#[test]
fn gl_invariants() {
    let d1 = gl_invariant_dims(1, 3);
    assert!(d1.values().all(|&d| d == 1));
    let d2 = gl_invariant_dims(2, 3);
    assert_eq!(d2.values().copied().collect::<Vec<_>>(), vec![1, 1, 2, 2]);
}

#[test]
fn bg_closed_two_forms() {
    let m = invariant_model(&gl_invariant_dims(1, 4)).unwrap();
    assert_eq!(bg_closed_forms(&m, 2, 2).unwrap().dim, 1);
    assert_eq!(bg_closed_forms(&m, 2, 3).unwrap().dim, 0);
    let m2 = invariant_model(&gl_invariant_dims(2, 3)).unwrap();
    assert_eq!(bg_closed_forms(&m2, 2, 2).unwrap().dim, 2);
    assert_eq!(bg_forms(&m2, 2, 4, 2).dim, 2);
    assert_eq!(bg_forms(&m2, 2, 4, 1).dim, 0);
}

#[test]
fn trace_forms() {
    let t1 = trace_form(1);
    assert_eq!(t1.gram_text, vec![vec!["1".to_string()]]);
    let t2 = trace_form(2);
    assert_eq!(t2.gram[1][2], rat(1));
    assert_eq!(t2.gram[0][0], rat(1));
    assert_eq!(t2.gram[0][3], rat(0));
    assert!(t2.nondegenerate);
    assert!(trace_form(3).nondegenerate);
}

#[test]
fn residue_matches_rcrit_in_two_variables() {
    let p = plane();
    for f in ["x^2 + y^2", "x^2*y", "x^4 + y^4"] {
        let f = function(&p, f);
        let data = crit_lagrangian_data(&p, &f).unwrap();
        let res = strict_lagrangian_residue(&data, None).unwrap();
        let (_, ratio) = pushforward_to_rcrit(&res, &rcrit(&p, &f).unwrap()).unwrap();
        assert_eq!(ratio, Some(1));
    }
}
