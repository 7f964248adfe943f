//! Shipped example presentations and seeded random generators for
//! property suites.

use std::collections::BTreeMap;

use rand::Rng;

use crate::cdga::{build_presentation, BuildOptions, DiffAssignment, GeneratorDecl, Polynomial, Presentation};
use crate::dsl::{parse, DslDocument};
use crate::kernel::{inverse, rank_kernel, rat, SparseMatrix};
use crate::ncw::{Bidegree, GradedMixedComplex};

pub const GALLERY: &[(&str, &str)] = &[
    ("line", include_str!("../fixtures/line.dsl")),
    ("plane", include_str!("../fixtures/plane.dsl")),
    ("space3", include_str!("../fixtures/space3.dsl")),
    ("odd_point", include_str!("../fixtures/odd_point.dsl")),
    ("cotangent_line", include_str!("../fixtures/cotangent_line.dsl")),
    ("cotangent_theta", include_str!("../fixtures/cotangent_theta.dsl")),
    ("rcrit_x3", include_str!("../fixtures/rcrit_x3.dsl")),
    ("rcrit_x2y2", include_str!("../fixtures/rcrit_x2y2.dsl")),
    ("rcrit_x2y", include_str!("../fixtures/rcrit_x2y.dsl")),
    ("rcrit_x4y4", include_str!("../fixtures/rcrit_x4y4.dsl")),
    ("loop_plane", include_str!("../fixtures/loop_plane.dsl")),
    ("loop_rcrit_x3", include_str!("../fixtures/loop_rcrit_x3.dsl")),
    ("zero_locus_xy", include_str!("../fixtures/zero_locus_xy.dsl")),
];

pub fn gallery() -> Vec<(&'static str, DslDocument)> {
    GALLERY
        .iter()
        .map(|(name, src)| (*name, parse(src).unwrap_or_else(|e| panic!("fixture {name}: {e}"))))
        .collect()
}

pub fn fixture(name: &str) -> Option<DslDocument> {
    GALLERY.iter().find(|(n, _)| *n == name).map(|(_, src)| parse(src).expect("fixture parses"))
}

struct Builder {
    elems: Vec<Bidegree>,
    d: Vec<(usize, usize, i64)>,
    eps: Vec<(usize, usize, i64)>,
}

impl Builder {
    fn push(&mut self, b: Bidegree) -> usize {
        self.elems.push(b);
        self.elems.len() - 1
    }
}

/// A random graded mixed complex: a direct sum of small indecomposable
/// blocks (points, d-pairs, ε-pairs, squares and staircases) seen through a
/// random change of basis in every bidegree.
pub fn random_mixed_complex<R: Rng>(rng: &mut R, max_dim: usize, max_weight: i64) -> GradedMixedComplex {
    let mut b = Builder {
        elems: Vec::new(),
        d: Vec::new(),
        eps: Vec::new(),
    };
    let target = rng.gen_range(1..=max_dim);
    while b.elems.len() < target {
        let room = max_dim - b.elems.len();
        let m = rng.gen_range(-3..=1);
        let q = rng.gen_range(0..=max_weight);
        let kind = rng.gen_range(0..5);
        match kind {
            1 if room >= 2 => {
                let a = b.push((m, q));
                let c = b.push((m + 1, q));
                b.d.push((a, c, 1));
            }
            2 if room >= 2 && q < max_weight => {
                let a = b.push((m, q));
                let c = b.push((m - 1, q + 1));
                b.eps.push((a, c, 1));
            }
            3 if room >= 4 && q < max_weight => {
                let a = b.push((m, q));
                let db = b.push((m + 1, q));
                let ea = b.push((m - 1, q + 1));
                let z = b.push((m, q + 1));
                b.d.push((a, db, 1));
                b.eps.push((a, ea, 1));
                b.d.push((ea, z, 1));
                b.eps.push((db, z, -1));
            }
            4 if room >= 4 && q + 2 <= max_weight => {
                // a1 → ε → c1 ← d ← a2 → ε → c2
                let a1 = b.push((m, q));
                let c1 = b.push((m - 1, q + 1));
                let a2 = b.push((m - 2, q + 1));
                let c2 = b.push((m - 3, q + 2));
                b.eps.push((a1, c1, 1));
                b.d.push((a2, c1, 1));
                b.eps.push((a2, c2, 1));
            }
            _ => {
                b.push((m, q));
            }
        }
    }
    let mut local: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
    let mut slot = vec![0; b.elems.len()];
    for (k, bd) in b.elems.iter().enumerate() {
        let v = local.entry(*bd).or_default();
        slot[k] = v.len();
        v.push(k);
    }
    let mut change = BTreeMap::new();
    let mut change_inv = BTreeMap::new();
    for (bd, v) in &local {
        let n = v.len();
        let mut p = SparseMatrix::identity(n);
        for r in 0..n {
            for c in 0..r {
                p.set(r, c, rat(rng.gen_range(-2..=2)));
            }
        }
        change_inv.insert(*bd, inverse(&p).expect("square").expect("unitriangular"));
        change.insert(*bd, p);
    }
    let assemble = |edges: &[(usize, usize, i64)], shift: Bidegree| {
        let mut maps: BTreeMap<Bidegree, SparseMatrix> = BTreeMap::new();
        for &(from, to, s) in edges {
            let (src, dst) = (b.elems[from], b.elems[to]);
            debug_assert_eq!(dst, (src.0 + shift.0, src.1 + shift.1));
            let mat = maps
                .entry(src)
                .or_insert_with(|| SparseMatrix::zeros(local[&dst].len(), local[&src].len()));
            mat.set(slot[to], slot[from], rat(s));
        }
        maps.into_iter()
            .map(|(src, mat)| {
                let dst = (src.0 + shift.0, src.1 + shift.1);
                let conj = change[&dst].mul(&mat).and_then(|x| x.mul(&change_inv[&src])).expect("shapes");
                (src, conj)
            })
            .collect::<BTreeMap<_, _>>()
    };
    let d = assemble(&b.d, (1, 0));
    let eps = assemble(&b.eps, (-1, 1));
    let pieces = local
        .iter()
        .map(|(&(m, q), v)| ((m, q), (0..v.len()).map(|k| format!("e{m}_{q}_{k}")).collect()))
        .collect();
    GradedMixedComplex::new(pieces, d, eps).expect("blocks satisfy the mixed identities")
}

/// A random quasi-free presentation with at most `max_gens` generators of
/// degree in `[-2, 0]` and weight at most `max_weight`. Each differential is
/// a random cycle of the subalgebra on the generators of higher degree, so
/// `d² = 0` and homogeneity hold by construction.
pub fn random_presentation<R: Rng>(rng: &mut R, max_gens: usize, max_weight: u32) -> Presentation {
    let n = rng.gen_range(1..=max_gens);
    let mut degs: Vec<(i64, u32)> = (0..n)
        .map(|_| (-rng.gen_range(0..=2i64), rng.gen_range(1..=max_weight)))
        .collect();
    degs.sort_by(|a, b| b.0.cmp(&a.0));
    let decls: Vec<GeneratorDecl> = degs
        .iter()
        .enumerate()
        .map(|(k, &(deg, w))| GeneratorDecl::new(&format!("x{}", k + 1), deg, w))
        .collect();
    let mut diffs: Vec<DiffAssignment> = Vec::new();
    for k in 0..n {
        let (deg, w) = degs[k];
        if deg == 0 || k == 0 {
            continue;
        }
        let prefix: Vec<DiffAssignment> = diffs
            .iter()
            .map(|a| DiffAssignment {
                value: a.value.embed(k),
                ..a.clone()
            })
            .collect();
        let partial = build_presentation(&decls[..k], &prefix, BuildOptions::default()).expect("partial presentation");
        let src = partial.bigraded_basis(deg + 1, w);
        if src.is_empty() {
            continue;
        }
        let tgt = partial.bigraded_basis(deg + 2, w);
        let index: BTreeMap<_, usize> = tgt.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut mat = SparseMatrix::zeros(tgt.len(), src.len());
        for (c, m) in src.iter().enumerate() {
            let img = partial.apply_d(&Polynomial::term(m.clone(), rat(1)));
            for (mm, x) in img.terms() {
                mat.add_to(index[mm], c, x);
            }
        }
        let (_, cycles) = rank_kernel(&mat);
        let mut value = Polynomial::zero(k);
        for z in &cycles {
            let c = rat(rng.gen_range(-2..=2));
            for (i, x) in z.iter().enumerate() {
                value.add_term(src[i].clone(), x * &c);
            }
        }
        let value = value.embed(k + 1);
        if value.is_zero() {
            continue;
        }
        diffs.push(DiffAssignment {
            generator: decls[k].name.clone(),
            value,
            formal_degree: None,
        });
    }
    let diffs: Vec<DiffAssignment> = diffs
        .into_iter()
        .map(|a| DiffAssignment {
            value: a.value.embed(n),
            ..a
        })
        .collect();
    build_presentation(&decls, &diffs, BuildOptions::default()).expect("random presentation is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gallery_parses() {
        assert_eq!(gallery().len(), GALLERY.len());
    }

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let e = random_mixed_complex(&mut rng, 12, 4);
            assert!(e.total_dim() <= 12);
            let p = random_presentation(&mut rng, 4, 3);
            assert!(p.nvars() <= 4);
        }
    }
}
