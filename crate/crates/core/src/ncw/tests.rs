use std::collections::{BTreeMap, BTreeSet};

use super::*;
use crate::cdga::Slice;
use crate::derham::DeRhamAlgebra;
use crate::dsl::presentation;
use crate::kernel::rat;

fn point() -> GradedMixedComplex {
    GradedMixedComplex::new(
        BTreeMap::from([((0, 0), vec!["e".to_string()])]),
        BTreeMap::new(),
        BTreeMap::new(),
    )
    .unwrap()
}

#[test]
fn point_has_one_class() {
    let e = point();
    let t = ncw_cohomology(&e, &[0], -3, 3, true).unwrap();
    for n in -3..=3 {
        assert_eq!(t.dim(n, 0), Some(usize::from(n == 0)));
    }
    assert_eq!(qp_oracle(&e, 0, -3, 3).unwrap(), t);
}

#[test]
fn epsilon_isomorphism_cancels() {
    let e = GradedMixedComplex::new(
        BTreeMap::from([((0, 0), vec!["a".to_string()]), ((-1, 1), vec!["εa".to_string()])]),
        BTreeMap::new(),
        BTreeMap::from([((0, 0), SparseMatrix::identity(1))]),
    )
    .unwrap();
    let t = ncw_cohomology(&e, &[0, 1], -3, 3, true).unwrap();
    for n in -3..=3 {
        assert_eq!(t.dim(n, 0), Some(0));
        assert_eq!(t.dim(n, 1), Some(usize::from(n == 1)));
        assert_eq!(qp_oracle(&e, 0, n, n).unwrap().dim(n, 0), t.dim(n, 0));
        assert_eq!(qp_oracle(&e, 1, n, n).unwrap().dim(n, 1), t.dim(n, 1));
    }
}

#[test]
fn violated_identities_are_rejected() {
    let pieces = BTreeMap::from([((0, 0), vec!["a".to_string()]), ((1, 0), vec!["b".to_string()]), ((0, 1), vec!["c".to_string()])]);
    let bad = GradedMixedComplex::new(
        pieces,
        BTreeMap::from([((0, 0), SparseMatrix::identity(1))]),
        BTreeMap::from([((1, 0), SparseMatrix::identity(1))]),
    );
    assert!(matches!(bad, Err(NcwError::NotAnticommuting(0, 0))));
}

#[test]
fn empty_presentation_is_a_point() {
    let dr = DeRhamAlgebra::new(&presentation(""));
    let mixed = mixed_from_dr(&dr, Slice::Weight(0)).unwrap();
    assert_eq!(mixed.complex.total_dim(), 1);
    assert_eq!(mixed.complex.dim(0, 0), 1);
}

#[test]
fn line_one_forms_sit_in_degree_minus_one() {
    let dr = DeRhamAlgebra::new(&presentation("gen x: degree 0, weight 1;"));
    for w in 1..5 {
        let mixed = mixed_from_dr(&dr, Slice::Weight(w)).unwrap();
        let monos = mixed.monomials((-1, 1));
        assert_eq!(monos.len(), 1);
        assert_eq!(monos[0].exps(), &[w as u16 - 1, 1]);
    }
}

#[test]
fn rcrit_weight_five_uses_two_components() {
    let dr = DeRhamAlgebra::new(&presentation(
        "gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = 3*x^2;",
    ));
    let mixed = mixed_from_dr(&dr, Slice::Weight(5)).unwrap();
    let w = ncw_window(&mixed.complex, 2, -12, 6).unwrap();
    let used: BTreeSet<i64> = w.basis.iter().flatten().map(|b| b.i).collect();
    assert_eq!(used, BTreeSet::from([0, 1]));
}

#[test]
fn zero_epsilon_splits_as_a_sum() {
    let mut pieces = BTreeMap::new();
    for q in 0..4 {
        pieces.insert((0, q), (0..q + 1).map(|k| format!("s{q}_{k}")).collect());
    }
    let e = GradedMixedComplex::new(pieces, BTreeMap::new(), BTreeMap::new()).unwrap();
    let t = ncw_cohomology(&e, &[0, 1, 2], -8, 2, true).unwrap();
    for p in 0..3 {
        for n in -8..=2 {
            let expected: usize = (0..4)
                .filter(|i| -n == 2 * i)
                .map(|i| e.weight_cohomology_dim(0, p + i))
                .sum();
            assert_eq!(t.dim(n, p), Some(expected), "n={n} p={p}");
        }
    }
}

#[test]
fn projection_is_a_chain_map() {
    let dr = DeRhamAlgebra::new(&presentation(
        "gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = 3*x^2;",
    ));
    let mixed = mixed_from_dr(&dr, Slice::Weight(4)).unwrap();
    let w = ncw_window(&mixed.complex, 1, -8, 2).unwrap();
    for m in -8..2 {
        let dim = w.basis_at(m).len();
        let d = w.differential(m).unwrap();
        for k in 0..dim {
            let mut v = vec![rat(0); dim];
            v[k] = rat(k as i64 + 1);
            let lhs = underlying_projection(&w, m + 1, &d.mul_vec(&v));
            let rhs = mixed.complex.d_at(m, 1).mul_vec(&underlying_projection(&w, m, &v));
            assert_eq!(lhs, rhs);
        }
    }
}
