//! Randomized operator identities on a presentation, its de Rham algebra and
//! the negative cyclic windows of its weight slices.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cdga::{Derivation, FreeAlgebra, Monomial, Polynomial, Presentation, Slice};
use crate::derham::DeRhamAlgebra;
use crate::kernel::{rat, sign, Rational};
use crate::ncw::{mixed_from_dr, nc_window, ncw_cohomology, underlying_projection};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(InvariantCheck {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure,
        });
    }
}

#[derive(Clone, Copy, Debug)]
pub struct InvariantOptions {
    pub seed: u64,
    pub samples: usize,
    /// Largest weight slice sampled and windowed.
    pub max_weight: u32,
    pub max_p: i64,
    pub window: (i64, i64),
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            seed: 0,
            samples: 100,
            max_weight: 4,
            max_p: 2,
            window: (-6, 2),
        }
    }
}

/// Random homogeneous element: a combination of monomials sharing weight,
/// degree and form weight.
fn random_element(alg: &FreeAlgebra, rng: &mut ChaCha8Rng, max_weight: u32) -> Polynomial {
    let w = rng.gen_range(0..=max_weight);
    let mut groups: BTreeMap<(i64, u32), Vec<Monomial>> = BTreeMap::new();
    for m in alg.monomials_of_weight(w) {
        groups.entry((alg.mono_degree(&m), alg.mono_form(&m))).or_default().push(m);
    }
    if groups.is_empty() {
        return alg.constant(rat(rng.gen_range(-3..=3)));
    }
    let pick = rng.gen_range(0..groups.len());
    let monos = groups.into_values().nth(pick).expect("nonempty");
    let mut out = alg.zero();
    for m in monos.into_iter().take(6) {
        out.add_term(m, rat(rng.gen_range(-3..=3)));
    }
    out
}

fn leibniz_defect(alg: &FreeAlgebra, der: &Derivation, a: &Polynomial, b: &Polynomial) -> Polynomial {
    let lhs = alg.apply(der, &alg.mul(a, b));
    let s: Rational = sign(der.odd && alg.parity(a).unwrap_or(false));
    let rhs = alg
        .mul(&alg.apply(der, a), b)
        .add(&alg.mul(a, &alg.apply(der, b)).scale(&s));
    lhs.sub(&rhs)
}

pub fn check_invariants(p: &Presentation, opts: InvariantOptions) -> InvariantReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = InvariantReport::default();
    let dr = DeRhamAlgebra::new(p);
    let alg = dr.algebra();
    let base = p.algebra();

    let mut fail: BTreeMap<&str, Option<String>> = BTreeMap::new();
    let mut note = |key: &'static str, bad: bool, what: &dyn Fn() -> String| {
        let slot = fail.entry(key).or_insert(None);
        if bad && slot.is_none() {
            *slot = Some(what());
        }
    };
    for _ in 0..opts.samples {
        let f = random_element(base, &mut rng, opts.max_weight);
        note("d² = 0", !p.apply_d(&p.apply_d(&f)).is_zero(), &|| base.format(&f));
        let a = random_element(alg, &mut rng, opts.max_weight);
        let b = random_element(alg, &mut rng, opts.max_weight);
        let da = dr.d_internal(&a);
        let ea = dr.d_de_rham(&a);
        note("d_internal² = 0", !dr.d_internal(&da).is_zero(), &|| alg.format(&a));
        note("ε² = 0", !dr.d_de_rham(&ea).is_zero(), &|| alg.format(&a));
        note(
            "dε + εd = 0",
            !dr.d_internal(&ea).add(&dr.d_de_rham(&da)).is_zero(),
            &|| alg.format(&a),
        );
        note(
            "Leibniz for d_internal",
            !leibniz_defect(alg, dr.internal_derivation(), &a, &b).is_zero(),
            &|| format!("{} · {}", alg.format(&a), alg.format(&b)),
        );
        note(
            "Leibniz for ε",
            !leibniz_defect(alg, dr.de_rham_derivation(), &a, &b).is_zero(),
            &|| format!("{} · {}", alg.format(&a), alg.format(&b)),
        );
        let s = sign(alg.parity(&a).unwrap_or(false) && alg.parity(&b).unwrap_or(false));
        note(
            "Koszul commutativity",
            alg.mul(&a, &b) != alg.mul(&b, &a).scale(&s),
            &|| format!("{} · {}", alg.format(&a), alg.format(&b)),
        );
    }
    for (name, f) in fail {
        report.record(name, f);
    }

    let (lo, hi) = opts.window;
    let mut d2 = None;
    let mut chain = None;
    let mut determinism = None;
    for w in 0..=opts.max_weight {
        let mixed = match mixed_from_dr(&dr, Slice::Weight(w)) {
            Ok(m) => m,
            Err(e) => {
                d2.get_or_insert(format!("weight {w}: {e}"));
                continue;
            }
        };
        for pp in 0..=opts.max_p {
            let win = match nc_window(&mixed.complex, pp, lo, hi, 0) {
                Ok(x) => x,
                Err(e) => {
                    d2.get_or_insert(format!("weight {w}, p = {pp}: {e}"));
                    continue;
                }
            };
            for m in win.start()..win.start() + win.basis.len() as i64 - 2 {
                let (Some(d0), Some(d1)) = (win.differential(m), win.differential(m + 1)) else {
                    continue;
                };
                if !d1.mul(d0).map(|x| x.is_zero()).unwrap_or(false) {
                    d2.get_or_insert(format!("weight {w}, p = {pp}, degree {m}"));
                }
            }
            for m in win.start()..win.start() + win.basis.len() as i64 - 1 {
                let Some(d) = win.differential(m) else { continue };
                let dim = win.basis_at(m).len();
                for k in 0..dim {
                    let mut v = vec![rat(0); dim];
                    v[k] = rat(1);
                    let lhs = underlying_projection(&win, m + 1, &d.mul_vec(&v));
                    let rhs = mixed.complex.d_at(m, pp).mul_vec(&underlying_projection(&win, m, &v));
                    if lhs != rhs {
                        chain.get_or_insert(format!("weight {w}, p = {pp}, degree {m}, basis vector {k}"));
                    }
                }
            }
        }
        let ps: Vec<i64> = (0..=opts.max_p).collect();
        let again = mixed_from_dr(&dr, Slice::Weight(w));
        let same_complex = again.as_ref().map(|x| x.complex == mixed.complex).unwrap_or(false);
        let t1 = ncw_cohomology(&mixed.complex, &ps, -hi, -lo, true);
        let t2 = ncw_cohomology(&mixed.complex, &ps, -hi, -lo, true);
        let same_table = match (&t1, &t2) {
            (Ok(a), Ok(b)) => {
                a == b && serde_json::to_string(a).ok() == serde_json::to_string(b).ok()
            }
            _ => false,
        };
        if !(same_complex && same_table) {
            determinism.get_or_insert(format!("weight {w}"));
        }
    }
    report.record("D² = 0 on NC windows", d2);
    report.record("underlying projection is a chain map", chain);
    report.record("reports are deterministic", determinism);
    report
}
