use serde::Serialize;

use super::ConstructionError;
use crate::cdga::{build_presentation, BuildOptions, DiffAssignment, GeneratorDecl, Mode, Polynomial, Presentation};
use crate::derham::DeRhamAlgebra;
use crate::kernel::{rat, sign, Rational};
use crate::symplectic::{close_by_de_rham, slice_of, symplectic_certificate, FormClass, SymplecticCertificate};

/// `T*X[n]` as the quasi-free algebra on `x_i` and `y_i`, with
/// `|y_i| = n − |x_i|`, and its Liouville form.
#[derive(Clone, Debug)]
pub struct CotangentData {
    pub base: Presentation,
    pub n: i64,
    pub total: Presentation,
    pub dr: DeRhamAlgebra,
    pub liouville: Polynomial,
    /// `wt(x_i) + wt(y_i)`, the weight of λ.
    pub pair_weight: u32,
}

impl CotangentData {
    /// Index of `y_i` in the total presentation.
    pub fn y(&self, i: usize) -> usize {
        self.base.nvars() + i
    }

    /// `(−1)^{|y_i|}`.
    pub fn y_sign(&self, i: usize) -> Rational {
        sign(self.total.gens()[self.y(i)].degree.rem_euclid(2) == 1)
    }
}

pub fn shifted_cotangent(p: &Presentation, n: i64) -> Result<CotangentData, ConstructionError> {
    shifted_cotangent_with_weight(p, n, None)
}

/// As [`shifted_cotangent`], with `wt(y_i) = c − wt(x_i)`. The default `c`
/// is `max wt + min wt`, which gives `wt(y_i) = wt(x_i)` when all weights
/// agree.
pub fn shifted_cotangent_with_weight(
    p: &Presentation,
    n: i64,
    pair_weight: Option<u32>,
) -> Result<CotangentData, ConstructionError> {
    let g = p.nvars();
    let weights: Vec<u32> = p.gens().iter().map(|x| x.weight).collect();
    let c = pair_weight.unwrap_or_else(|| weights.iter().max().unwrap_or(&1) + weights.iter().min().unwrap_or(&1));
    let mut decls = p.decls();
    for x in p.gens() {
        if c <= x.weight {
            return Err(ConstructionError::WeightAssignmentFailed(format!("y_{}", x.name)));
        }
        decls.push(GeneratorDecl::new(&format!("y_{}", x.name), n - x.degree, c - x.weight));
    }
    let nv = 2 * g;
    let mut diffs: Vec<DiffAssignment> = (0..g)
        .map(|k| DiffAssignment {
            generator: p.gens()[k].name.clone(),
            value: p.d_of(k).embed(nv),
            formal_degree: None,
        })
        .collect();
    let options = BuildOptions {
        strict_nonpositive: p.strict_nonpositive(),
        truncate: match p.mode() {
            Mode::Weighted => None,
            Mode::Truncated(k) => Some(k),
        },
    };
    // First pass with d(y) = 0, to read off the correction that makes λ
    // a d-cocycle.
    let naive = build_presentation(&decls, &diffs, options)?;
    let dr0 = DeRhamAlgebra::new(&naive);
    let lambda = liouville(&dr0, g);
    let residual = dr0.d_internal(&lambda);
    let coeffs = dr0
        .one_form_coefficients(&residual)
        .ok_or_else(|| ConstructionError::ModelMismatch("dλ is not a 1-form".into()))?;
    for j in 0..g {
        let s = sign(naive.gens()[g + j].degree.rem_euclid(2) == 1);
        diffs.push(DiffAssignment {
            generator: decls[g + j].name.clone(),
            value: coeffs[j].scale(&-s),
            formal_degree: None,
        });
    }
    if coeffs[g..].iter().any(|c| !c.is_zero()) {
        return Err(ConstructionError::ModelMismatch("dλ has a δy component".into()));
    }
    let total = build_presentation(&decls, &diffs, options)?;
    let dr = DeRhamAlgebra::new(&total);
    let liouville = liouville(&dr, g);
    let dl = dr.d_internal(&liouville);
    if !dl.is_zero() {
        return Err(ConstructionError::ModelMismatch(format!("dλ = {}", dr.format(&dl))));
    }
    if liouville.terms().any(|(m, _)| (0..g).any(|i| m.0[3 * g + i] > 0)) {
        return Err(ConstructionError::ModelMismatch("λ is not horizontal".into()));
    }
    Ok(CotangentData {
        base: p.clone(),
        n,
        total,
        dr,
        liouville,
        pair_weight: c,
    })
}

/// `Σ (−1)^{|y_i|} y_i δx_i`.
fn liouville(dr: &DeRhamAlgebra, g: usize) -> Polynomial {
    let mut out = dr.algebra().zero();
    for i in 0..g {
        let y = &dr.base().gens()[g + i];
        let term = dr.mul(&dr.x(g + i), &dr.delta(i));
        out.add_assign(&term.scale(&sign(y.degree.rem_euclid(2) == 1)));
    }
    out
}

/// Entry-by-entry comparison of Θ with the closed-form ± permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenReport {
    pub matches: bool,
    pub mismatches: Vec<String>,
}

/// `Θ(∂x_i) = −(−1)^{|y_i|} δy_i`, `Θ(∂y_i) = (−1)^{|y_i|} δx_i`, as a
/// constant matrix with rows `δ·` and columns `∂·`.
pub fn golden_matrix(c: &CotangentData) -> Vec<Vec<Rational>> {
    let g = c.base.nvars();
    let mut m = vec![vec![rat(0); 2 * g]; 2 * g];
    for i in 0..g {
        let s = c.y_sign(i);
        m[g + i][i] = -s.clone();
        m[i][g + i] = s;
    }
    m
}

pub fn golden_compare(c: &CotangentData, cert: &SymplecticCertificate) -> Result<GoldenReport, ConstructionError> {
    let expected = golden_matrix(c);
    let nv = c.total.nvars();
    let mut mismatches = Vec::new();
    for (i, row) in cert.theta.iter().enumerate() {
        for (j, rec) in row.iter().enumerate() {
            let got = rec.decode(nv)?;
            let want = Polynomial::constant(nv, expected[i][j].clone());
            if got != want {
                mismatches.push(format!(
                    "Θ(∂{})[δ{}]: expected {}, got {}",
                    c.total.gens()[j].name,
                    c.total.gens()[i].name,
                    expected[i][j],
                    c.total.format(&got)
                ));
            }
        }
    }
    Ok(GoldenReport {
        matches: mismatches.is_empty(),
        mismatches,
    })
}

/// Certifies `ω = ε λ`; with `golden`, a mismatch against
/// [`golden_matrix`] is an error.
pub fn cotangent_symplectic(
    c: &CotangentData,
    golden: bool,
) -> Result<(SymplecticCertificate, GoldenReport), ConstructionError> {
    let lambda = FormClass {
        p: 1,
        n: c.n,
        slice: slice_of(&c.dr, &c.liouville),
        representative: c.liouville.clone(),
    };
    let omega = close_by_de_rham(&c.dr, &lambda)?;
    let cert = symplectic_certificate(&c.dr, &omega, None)?;
    let report = golden_compare(c, &cert)?;
    if golden && !report.matches {
        return Err(ConstructionError::GoldenMismatch(report.mismatches.join("; ")));
    }
    Ok((cert, report))
}
