use super::*;
use crate::dsl::{form, presentation};

fn line() -> Presentation {
    presentation("gen x: degree 0;")
}

fn plane() -> Presentation {
    presentation("gen x: degree 0; gen y: degree 0;")
}

fn rcrit() -> Presentation {
    presentation("gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = 3*x^2;")
}

fn rep(dr: &DeRhamAlgebra, src: &str, p: u32, n: i64) -> ClosedFormRep {
    let f = form(dr, src);
    ClosedFormRep {
        p,
        n,
        slice: slice_of(dr, &f),
        components: vec![f],
    }
}

#[test]
fn closed_one_forms_on_the_line() {
    let t = closed_forms_space(&line(), 1, 0, 1, &[1, 2, 3]).unwrap();
    for w in 1..=3 {
        assert_eq!(t.dim(Slice::Weight(w), 0), Some(1));
        assert_eq!(t.dim(Slice::Weight(w), 1), Some(0));
    }
    let reps = &t.representatives[&Slice::Weight(3)];
    assert_eq!(reps.len(), 1);
    let dr = DeRhamAlgebra::new(&line());
    assert!(check_closed(&dr, &reps[0]).closed);
}

#[test]
fn one_forms_on_the_line() {
    let t = forms_space(&line(), 1, 0, &[1, 2]).unwrap();
    assert_eq!(t.cells[&Slice::Weight(2)].dim, 1);
    assert_eq!(t.cells[&Slice::Weight(2)].representatives.len(), 1);
}

#[test]
fn de_rham_closure_is_closed() {
    let p = plane();
    let dr = DeRhamAlgebra::new(&p);
    let a = FormClass {
        p: 1,
        n: 0,
        slice: Slice::Weight(2),
        representative: form(&dr, "x*d y"),
    };
    let r = close_by_de_rham(&dr, &a).unwrap();
    assert_eq!(r.components[0], form(&dr, "d x*d y"));
    assert!(check_closed(&dr, &r).closed);
}

#[test]
fn closedness_reports_the_first_failing_equation() {
    let p = presentation("gen x: degree 0; gen y: degree 0; gen z: degree 0;");
    let dr = DeRhamAlgebra::new(&p);
    let r = rep(&dr, "x*d y*d z", 2, 0);
    let c = check_closed(&dr, &r);
    assert!(!c.closed);
    assert!(c.failing_equation.unwrap().starts_with("ε ω_0"));
    assert!(matches!(
        symplectic_certificate(&dr, &r, None),
        Err(SymplecticError::ClosednessFailed(_))
    ));
}

#[test]
fn misplaced_component_is_rejected() {
    let dr = DeRhamAlgebra::new(&plane());
    let r = rep(&dr, "d x*d y", 2, -1);
    assert!(!check_closed(&dr, &r).closed);
}

#[test]
fn plane_is_zero_shifted_symplectic() {
    let dr = DeRhamAlgebra::new(&plane());
    let r = rep(&dr, "d x*d y", 2, 0);
    let cert = symplectic_certificate(&dr, &r, Some(&[-1, 0, 1, 2])).unwrap();
    assert!(cert.certified);
    assert!(cert.cone.as_ref().unwrap().acyclic);
    assert!(cert.amplitude.symmetric);
    cert.verify().unwrap();
}

#[test]
fn plane_form_has_the_wrong_degree_for_shift_one() {
    let dr = DeRhamAlgebra::new(&plane());
    let r = rep(&dr, "d x*d y", 2, 1);
    assert!(!check_closed(&dr, &r).closed);
    assert!(matches!(
        is_nondegenerate(&dr, r.omega0(), 1).unwrap(),
        Nondegeneracy::Degenerate { .. }
    ));
}

#[test]
fn form_vanishing_at_the_origin_is_degenerate() {
    let dr = DeRhamAlgebra::new(&plane());
    let r = rep(&dr, "x*d x*d y", 2, 0);
    assert!(check_closed(&dr, &r).closed);
    assert!(matches!(
        symplectic_certificate(&dr, &r, None),
        Err(SymplecticError::DegenerateForm(_))
    ));
}

#[test]
fn rcrit_certificate_round_trips() {
    let dr = DeRhamAlgebra::new(&rcrit());
    let r = rep(&dr, "d x*d xi", 2, -1);
    let cert = symplectic_certificate(&dr, &r, Some(&[-2, -1, 0, 1, 2, 3])).unwrap();
    assert!(cert.cone.as_ref().unwrap().acyclic);
    assert_eq!(cert.amplitude.compatible_shift, -1);
    let back = SymplecticCertificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
    back.verify().unwrap();
}

#[test]
fn tampered_certificate_fails_verification() {
    let dr = DeRhamAlgebra::new(&rcrit());
    let r = rep(&dr, "d x*d xi", 2, -1);
    let mut cert = symplectic_certificate(&dr, &r, None).unwrap();
    if let NondegeneracyWitness::Strict { inverse } = &mut cert.witness {
        inverse[0][1] = "7".into();
    }
    assert!(cert.verify().is_err());
    let mut cert = symplectic_certificate(&dr, &r, None).unwrap();
    cert.components[0].terms[0].coeff = "2".into();
    assert!(cert.verify().is_err());
}

#[test]
fn degenerate_form_has_a_non_acyclic_cone() {
    let dr = DeRhamAlgebra::new(&plane());
    let c = cone_check(&dr, &form(&dr, "x*d x*d y"), 0, &[-1, 0]).unwrap();
    assert!(!c.acyclic);
}

#[test]
fn amplitude_of_rcrit() {
    let dr = DeRhamAlgebra::new(&rcrit());
    let a = amplitude_report(&dr, -1);
    assert_eq!((a.min_degree, a.max_degree), (-1, 0));
    assert!(a.symmetric);
    assert!(!amplitude_report(&dr, 0).symmetric);
}

#[test]
fn keys_of_an_exact_one_form() {
    let dr = DeRhamAlgebra::new(&plane());
    let w = FormClass {
        p: 1,
        n: 0,
        slice: Slice::Weight(2),
        representative: form(&dr, "x*d x"),
    };
    let k = keys_report(&dr, &w).unwrap();
    assert!(k.liftable);
    let key = k.key.unwrap();
    assert_eq!(key.components[0], w.representative);
    assert!(check_closed(&dr, &key).closed);
}

#[test]
fn keys_of_a_non_closed_one_form() {
    let dr = DeRhamAlgebra::new(&plane());
    let w = FormClass {
        p: 1,
        n: 0,
        slice: Slice::Weight(2),
        representative: form(&dr, "x*d y"),
    };
    let k = keys_report(&dr, &w).unwrap();
    assert!(!k.liftable);
    assert!(k.key.is_none());
}

#[test]
fn liouville_form_on_rcrit_has_no_key() {
    let p = presentation("gen x: degree 0; gen xi: degree -1, weight 2; d xi = x^2;");
    let dr = DeRhamAlgebra::new(&p);
    let w = FormClass {
        p: 1,
        n: -1,
        slice: Slice::Weight(3),
        representative: form(&dr, "x*d xi + 2*xi*d x"),
    };
    assert!(dr.d_internal(&w.representative).is_zero());
    assert_eq!(dr.d_de_rham(&w.representative), form(&dr, "3*d x*d xi"));
    let k = keys_report(&dr, &w).unwrap();
    assert!(!k.liftable);
    assert!(k.certified);
}
