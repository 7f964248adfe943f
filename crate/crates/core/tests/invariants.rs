use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shiftsym::fixtures::{gallery, random_presentation};
use shiftsym::invariants::{check_invariants, InvariantOptions};

#[test]
fn gallery_satisfies_operator_identities() {
    for (name, doc) in gallery() {
        let r = check_invariants(&doc.presentation, InvariantOptions { samples: 40, ..Default::default() });
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

#[test]
fn random_presentations_satisfy_operator_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..15 {
        let p = random_presentation(&mut rng, 4, 3);
        let r = check_invariants(&p, InvariantOptions { seed: k, samples: 30, max_weight: 3, ..Default::default() });
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn every_identity_is_reported() {
    let p = shiftsym::dsl::presentation("gen x: degree 0, weight 1; gen xi: degree -1, weight 2; d xi = x^2;");
    let r = check_invariants(&p, InvariantOptions::default());
    assert!(r.passed());
    assert_eq!(r.checks.len(), 10);
}
