//! Producers of shifted symplectic data: shifted cotangents, derived
//! critical loci, strict Lagrangian residues, circle transgression and
//! classifying-stack models.

mod bg;
mod cotangent;
mod crit;
mod loops;
mod residue;

pub use bg::{bg_closed_forms, bg_forms, gl_invariant_dims, invariant_model, trace_form, BgCell, InvariantModel, TraceForm};
pub use cotangent::{
    cotangent_symplectic, golden_compare, golden_matrix, shifted_cotangent, shifted_cotangent_with_weight,
    CotangentData, GoldenReport,
};
pub use crit::{derived_zero_locus, rcrit, symmetric_obstruction, CritData, ObstructionReport, RCRIT_SIGN};
pub use loops::{loop_model, s1_transgression, LoopModel, TangentRanks, Transgression};
pub use residue::{crit_lagrangian_data, pushforward_to_rcrit, strict_lagrangian_residue, ResidueResult, StrictLagrangianData};

use thiserror::Error;

use crate::cdga::{CdgaError, Derivation, FreeAlgebra, Generator, Monomial, Polynomial};
use crate::derham::{DeRhamAlgebra, DerhamError};
use crate::kernel::{one, ratio, sign, KernelError, Rational};
use crate::ncw::NcwError;
use crate::symplectic::SymplecticError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no positive weight for {0}")]
    WeightAssignmentFailed(String),
    #[error("section {0} is not weight-homogeneous")]
    InhomogeneousSection(usize),
    #[error("base must be smooth: {0}")]
    NotSmooth(String),
    #[error("strictness violated: {0}")]
    StrictnessViolated(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Derham(#[from] DerhamError),
    #[error(transparent)]
    Ncw(#[from] NcwError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Evaluates `p` after replacing generator `k` of `src` by `images[k]`.
pub(crate) fn substitute(src: &FreeAlgebra, tgt: &FreeAlgebra, images: &[Polynomial], p: &Polynomial) -> Polynomial {
    debug_assert_eq!(images.len(), src.nvars());
    let mut out = tgt.zero();
    for (m, c) in p.terms() {
        let mut acc = tgt.constant(c.clone());
        for (k, e) in m.factors() {
            acc = tgt.mul(&acc, &tgt.pow(&images[k], e as u32));
        }
        out.add_assign(&acc);
    }
    out
}

/// Images in `DR(Y)` of the generators of `DR(X)` for an algebra map
/// `X → Y` given on the generators of `X`.
pub(crate) fn form_images(y: &DeRhamAlgebra, images: &[Polynomial]) -> Vec<Polynomial> {
    let lifted: Vec<Polynomial> = images.iter().map(|f| y.embed(f)).collect();
    let deltas: Vec<Polynomial> = lifted.iter().map(|f| y.d_de_rham(f)).collect();
    lifted.into_iter().chain(deltas).collect()
}

pub(crate) fn pullback_form(x: &DeRhamAlgebra, y: &DeRhamAlgebra, images: &[Polynomial], form: &Polynomial) -> Polynomial {
    substitute(x.algebra(), y.algebra(), &form_images(y, images), form)
}

/// `∂f/∂x_k` for an even generator.
pub(crate) fn partial(alg: &FreeAlgebra, k: usize, f: &Polynomial) -> Polynomial {
    let n = alg.nvars();
    let mut images = vec![Polynomial::zero(n); n];
    images[k] = Polynomial::constant(n, one());
    alg.apply(&Derivation { odd: false, images }, f)
}

/// `DR(·)` with a parameter algebra `ℚ[t, τ]` appended (`t` even of degree
/// 0, `τ` odd of degree 1, both of weight 0).
pub(crate) struct Parametrized {
    pub alg: FreeAlgebra,
    pub base_vars: usize,
}

impl Parametrized {
    pub fn new(dr: &DeRhamAlgebra, odd_degree: i64) -> Self {
        let mut gens: Vec<Generator> = dr.algebra().gens().to_vec();
        let base_vars = gens.len();
        gens.push(Generator {
            name: "t".into(),
            degree: 0,
            weight: 0,
            odd: false,
            form: 0,
        });
        gens.push(Generator {
            name: "τ".into(),
            degree: odd_degree,
            weight: 0,
            odd: true,
            form: 0,
        });
        Parametrized {
            alg: FreeAlgebra::new(gens),
            base_vars,
        }
    }

    pub fn t(&self) -> Polynomial {
        self.alg.var(self.base_vars)
    }

    pub fn tau(&self) -> Polynomial {
        self.alg.var(self.base_vars + 1)
    }

    pub fn lift(&self, p: &Polynomial) -> Polynomial {
        p.embed(self.alg.nvars())
    }

    /// `∫ τ t^a · η = η / (a + 1)` with `τ` moved to the far left; terms
    /// without `τ` integrate to zero.
    pub fn integrate(&self, p: &Polynomial) -> Polynomial {
        let (t, tau) = (self.base_vars, self.base_vars + 1);
        let mut out = Polynomial::zero(self.base_vars);
        for (m, c) in p.terms() {
            if m.0[tau] != 1 {
                continue;
            }
            let a = m.0[t] as i64;
            let mut e = m.0.clone();
            e[t] = 0;
            e[tau] = 0;
            let s: Rational = sign(self.alg.mono_odd(&Monomial(e)));
            let rest = Monomial(m.0[..self.base_vars].to_vec());
            out.add_term(rest, c * s * ratio(1, a + 1));
        }
        out
    }
}

#[cfg(test)]
mod tests;
