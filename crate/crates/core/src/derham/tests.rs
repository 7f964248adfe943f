use super::*;
use crate::dsl::{form, presentation};
use crate::kernel::rat;

fn rcrit() -> DeRhamAlgebra {
    DeRhamAlgebra::new(&presentation(
        "gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = 3*x^2;",
    ))
}

fn plane() -> DeRhamAlgebra {
    DeRhamAlgebra::new(&presentation("gen x: degree 0, weight 1; gen y: degree 0, weight 1;"))
}

#[test]
fn line_has_no_two_forms() {
    let dr = DeRhamAlgebra::new(&presentation("gen x: degree 0, weight 1;"));
    assert!(dr.mul(&dr.delta(0), &dr.delta(0)).is_zero());
    assert!(dr.algebra().gens()[1].odd);
}

#[test]
fn rcrit_has_forms_in_every_form_weight() {
    let dr = rcrit();
    assert!(dr.algebra().gens()[2].odd);
    assert!(!dr.algebra().gens()[3].odd);
    for p in 0..5u32 {
        let power = dr.algebra().pow(&dr.delta(1), p);
        assert!(!power.is_zero());
        assert_eq!(dr.form_weight(&power), Some(p));
    }
}

#[test]
fn plane_two_forms_in_weight_two() {
    let dr = plane();
    let basis: Vec<_> = dr
        .algebra()
        .monomials_of_weight(2)
        .into_iter()
        .filter(|m| dr.algebra().mono_form(m) == 2 && dr.algebra().mono_degree(m) == 0)
        .collect();
    assert_eq!(basis.len(), 1);
}

#[test]
fn internal_differential_of_delta_xi() {
    let dr = rcrit();
    // d(δξ) = −δ(dξ) = −6x δx under the frozen sign normalization.
    assert_eq!(dr.d_internal(&dr.delta(1)), form(&dr, "-6*x*d x"));
    let line = DeRhamAlgebra::new(&presentation("gen x: degree 0;"));
    assert!(line.d_internal(&line.delta(0)).is_zero());
}

#[test]
fn de_rham_differential_examples() {
    let dr = plane();
    for w in 1..6u32 {
        let xw = dr.algebra().pow(&dr.x(0), w);
        let expected = dr.mul(&dr.algebra().pow(&dr.x(0), w - 1), &dr.delta(0)).scale(&rat(w as i64));
        assert_eq!(dr.d_de_rham(&xw), expected);
    }
    assert_eq!(dr.d_de_rham(&form(&dr, "y*d x")), form(&dr, "d y * d x"));
}

#[test]
fn liouville_differential() {
    // T*[n]𝔸¹ with |y| = −1: λ = −y δx, d_DR λ = −δy δx.
    let dr = DeRhamAlgebra::new(&presentation("gen x: degree 0; gen y: degree -1;"));
    let lambda = form(&dr, "-y*d x");
    assert_eq!(dr.d_de_rham(&lambda), form(&dr, "-d y * d x"));
    let dr0 = DeRhamAlgebra::new(&presentation("gen x: degree 0; gen y: degree 0;"));
    assert_eq!(dr0.d_de_rham(&form(&dr0, "y*d x")), form(&dr0, "d y * d x"));
}

#[test]
fn contraction_examples() {
    let dr = plane();
    let dx = TangentVector::basis(2, 0);
    let dy = TangentVector::basis(2, 1);
    assert_eq!(dr.contract(&dx, &dr.delta(0)), dr.algebra().one());
    assert_eq!(dr.contract(&dy, &form(&dr, "d x * d y")), form(&dr, "-d x"));
    assert!(dr.contract(&dy, &form(&dr, "x^2*d x")).is_zero());
}

#[test]
fn theta_of_zero_is_zero() {
    let dr = rcrit();
    let t = theta_matrix(&dr, &dr.algebra().zero(), -1).unwrap();
    assert!(t.is_zero());
}

#[test]
fn theta_for_rcrit_is_antidiagonal() {
    let dr = rcrit();
    let t = theta_matrix(&dr, &form(&dr, "d x * d xi"), -1).unwrap();
    let m = t.augmentation();
    assert_eq!(m[0][0], rat(0));
    assert_eq!(m[1][1], rat(0));
    assert!(m[0][1] == rat(1) || m[0][1] == rat(-1));
    assert!(m[1][0] == rat(1) || m[1][0] == rat(-1));
    assert!(t.entries.iter().flatten().all(|p| p.len() <= 1));
}

#[test]
fn theta_is_linear_in_scalars() {
    let dr = rcrit();
    let w = form(&dr, "d x * d xi");
    let t1 = theta_matrix(&dr, &w, -1).unwrap();
    let t3 = theta_matrix(&dr, &w.scale(&rat(-3)), -1).unwrap();
    for (r1, r3) in t1.entries.iter().zip(&t3.entries) {
        for (a, b) in r1.iter().zip(r3) {
            assert_eq!(a.scale(&rat(-3)), *b);
        }
    }
}

#[test]
fn non_cocycle_is_rejected() {
    let dr = rcrit();
    let w = form(&dr, "d xi * d xi");
    assert!(matches!(theta_matrix(&dr, &w, -1), Err(DerhamError::NotACocycle(_))));
}
