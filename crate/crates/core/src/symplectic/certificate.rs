use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{amplitude_report, check_closed, cone_check, is_nondegenerate, AmplitudeReport, ClosedFormRep, ConeCheck};
use super::{Nondegeneracy, SymplecticError};
use crate::cdga::{build_presentation, BuildOptions, DiffAssignment, GeneratorDecl, Mode, Monomial, Polynomial, Slice};
use crate::derham::{theta_matrix, DeRhamAlgebra};
use crate::kernel::{rank, zero, Rational, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    /// `(generator index, exponent)` pairs.
    pub factors: Vec<(usize, u16)>,
}

/// A polynomial in structural form, plus a rendering for people.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub text: String,
    pub terms: Vec<TermRecord>,
}

impl PolyRecord {
    pub fn new(p: &Polynomial, text: String) -> Self {
        PolyRecord {
            text,
            terms: p
                .terms()
                .map(|(m, c)| TermRecord {
                    coeff: c.to_string(),
                    factors: m.factors(),
                })
                .collect(),
        }
    }

    pub fn decode(&self, nvars: usize) -> Result<Polynomial, SymplecticError> {
        let mut out = Polynomial::zero(nvars);
        for t in &self.terms {
            let c = parse_rational(&t.coeff)?;
            let mut e = vec![0u16; nvars];
            for &(k, x) in &t.factors {
                *e.get_mut(k)
                    .ok_or_else(|| SymplecticError::Malformed(format!("generator index {k} out of range")))? += x;
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<Rational, SymplecticError> {
    Rational::from_str(s).map_err(|_| SymplecticError::Malformed(format!("bad rational {s:?}")))
}

fn matrix_record(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn matrix_decode(m: &[Vec<String>], rows: usize, cols: usize) -> Result<SparseMatrix, SymplecticError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(SymplecticError::Malformed(format!("expected a {rows}×{cols} matrix")));
    }
    let dense: Result<Vec<Vec<Rational>>, _> = m.iter().map(|r| r.iter().map(|x| parse_rational(x)).collect()).collect();
    Ok(SparseMatrix::from_dense(rows, cols, &dense?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
}

/// One leg `L → X` of a Lagrangian correspondence, by its linear part
/// `J : T_L → T_X` at the augmentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegRecord {
    pub name: String,
    pub jacobian: Vec<Vec<String>>,
    pub injective: bool,
    pub isotropic: bool,
    pub lagrangian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderWitness {
    /// Constant part of Θ on the symplectic target of the legs.
    pub target_matrix: Vec<Vec<String>>,
    pub target_inverse: Vec<Vec<String>>,
    pub legs: Vec<LegRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NondegeneracyWitness {
    Strict { inverse: Vec<Vec<String>> },
    Ladder(LadderWitness),
}

/// Self-contained record of a shifted symplectic structure on one slice.
/// [`SymplecticCertificate::verify`] recomputes every claim from the stored
/// presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticCertificate {
    pub n: i64,
    pub generators: Vec<GeneratorDecl>,
    pub differential: Vec<PolyRecord>,
    pub strict_nonpositive: bool,
    pub mode: Mode,
    pub slice: Slice,
    pub components: Vec<PolyRecord>,
    pub theta: Vec<Vec<PolyRecord>>,
    pub witness: NondegeneracyWitness,
    pub amplitude: AmplitudeReport,
    pub cone: Option<ConeCheck>,
    pub certified: bool,
    pub checks: Vec<CheckRecord>,
}

/// Checks closedness and strict non-degeneracy, optionally confirming the
/// latter by the cone on the given tangent weights.
pub fn symplectic_certificate(
    dr: &DeRhamAlgebra,
    rep: &ClosedFormRep,
    cone_weights: Option<&[i64]>,
) -> Result<SymplecticCertificate, SymplecticError> {
    if rep.p != 2 {
        return Err(SymplecticError::Malformed(format!("expected a 2-form, got p = {}", rep.p)));
    }
    let closed = check_closed(dr, rep);
    if let Some(eq) = closed.failing_equation {
        return Err(SymplecticError::ClosednessFailed(eq));
    }
    let inverse = match is_nondegenerate(dr, rep.omega0(), rep.n)? {
        Nondegeneracy::Strict { inverse, .. } => inverse,
        Nondegeneracy::Degenerate { reason } => return Err(SymplecticError::DegenerateForm(reason)),
    };
    let cone = match cone_weights {
        Some(ws) if matches!(dr.base().mode(), Mode::Weighted) => Some(cone_check(dr, rep.omega0(), rep.n, ws)?),
        _ => None,
    };
    let mut checks = vec![
        CheckRecord {
            name: "closed".into(),
            passed: true,
        },
        CheckRecord {
            name: "theta chain map".into(),
            passed: true,
        },
        CheckRecord {
            name: "constant part invertible".into(),
            passed: true,
        },
    ];
    if let Some(c) = &cone {
        checks.push(CheckRecord {
            name: "cone acyclic".into(),
            passed: c.acyclic,
        });
        if !c.acyclic {
            return Err(SymplecticError::DegenerateForm("cone of Θ is not acyclic".into()));
        }
    }
    let mut cert = base_record(dr, rep, NondegeneracyWitness::Strict {
        inverse: matrix_record(&inverse),
    });
    cert.cone = cone;
    cert.checks = checks;
    Ok(cert)
}

/// Record with everything but the checks filled in from `rep`.
pub(crate) fn base_record(dr: &DeRhamAlgebra, rep: &ClosedFormRep, witness: NondegeneracyWitness) -> SymplecticCertificate {
    let base = dr.base();
    let theta = theta_matrix(dr, rep.omega0(), rep.n)
        .map(|t| {
            t.entries
                .iter()
                .map(|row| row.iter().map(|p| PolyRecord::new(p, base.format(p))).collect())
                .collect()
        })
        .unwrap_or_default();
    SymplecticCertificate {
        n: rep.n,
        generators: base.decls(),
        differential: (0..base.nvars())
            .map(|k| PolyRecord::new(base.d_of(k), base.format(base.d_of(k))))
            .collect(),
        strict_nonpositive: base.strict_nonpositive(),
        mode: base.mode(),
        slice: rep.slice,
        components: rep.components.iter().map(|c| PolyRecord::new(c, dr.format(c))).collect(),
        theta,
        witness,
        amplitude: amplitude_report(dr, rep.n),
        cone: None,
        certified: rep.slice.certified() && base.is_certified(),
        checks: vec![],
    }
}

impl SymplecticCertificate {
    pub fn with_ladder(dr: &DeRhamAlgebra, rep: &ClosedFormRep, ladder: LadderWitness) -> Result<Self, SymplecticError> {
        let closed = check_closed(dr, rep);
        if let Some(eq) = closed.failing_equation {
            return Err(SymplecticError::ClosednessFailed(eq));
        }
        let mut cert = base_record(dr, rep, NondegeneracyWitness::Ladder(ladder));
        cert.checks.push(CheckRecord {
            name: "closed".into(),
            passed: true,
        });
        cert.verify()?;
        cert.checks.push(CheckRecord {
            name: "ladder".into(),
            passed: true,
        });
        Ok(cert)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SymplecticError> {
        serde_json::from_str(s).map_err(|e| SymplecticError::Malformed(e.to_string()))
    }

    /// Rebuilds the presentation and checks closedness, Θ and the witness.
    pub fn verify(&self) -> Result<(), SymplecticError> {
        let g = self.generators.len();
        let mut diffs = Vec::new();
        if self.differential.len() != g {
            return Err(SymplecticError::Malformed("one differential per generator".into()));
        }
        for (decl, rec) in self.generators.iter().zip(&self.differential) {
            diffs.push(DiffAssignment {
                generator: decl.name.clone(),
                value: rec.decode(g)?,
                formal_degree: None,
            });
        }
        let options = BuildOptions {
            strict_nonpositive: self.strict_nonpositive,
            truncate: match self.mode {
                Mode::Weighted => None,
                Mode::Truncated(n) => Some(n),
            },
        };
        let base = build_presentation(&self.generators, &diffs, options)
            .map_err(|e| SymplecticError::Malformed(e.to_string()))?;
        let dr = DeRhamAlgebra::new(&base);
        let nv = dr.algebra().nvars();
        let components: Result<Vec<_>, _> = self.components.iter().map(|c| c.decode(nv)).collect();
        let rep = ClosedFormRep {
            p: 2,
            n: self.n,
            slice: self.slice,
            components: components?,
        };
        if rep.components.is_empty() {
            return Err(SymplecticError::Malformed("no components".into()));
        }
        if let Some(eq) = check_closed(&dr, &rep).failing_equation {
            return Err(SymplecticError::ClosednessFailed(eq));
        }
        let theta = theta_matrix(&dr, rep.omega0(), self.n)?;
        if self.theta.len() != g || self.theta.iter().any(|r| r.len() != g) {
            return Err(SymplecticError::Malformed("Θ has the wrong shape".into()));
        }
        for (i, row) in self.theta.iter().enumerate() {
            for (j, rec) in row.iter().enumerate() {
                if rec.decode(g)? != theta.entries[i][j] {
                    return Err(SymplecticError::Malformed(format!("stored Θ differs at ({i}, {j})")));
                }
            }
        }
        let check_inverse = |m: &SparseMatrix, inv: &[Vec<String>]| -> Result<(), SymplecticError> {
            let k = m.rows();
            let inv = matrix_decode(inv, k, k)?;
            if m.mul(&inv)? != SparseMatrix::identity(k) {
                return Err(SymplecticError::DegenerateForm("stored inverse is wrong".into()));
            }
            Ok(())
        };
        match &self.witness {
            NondegeneracyWitness::Strict { inverse } => {
                check_inverse(&SparseMatrix::from_dense(g, g, &theta.augmentation()), inverse)?
            }
            NondegeneracyWitness::Ladder(l) => {
                let k = l.target_matrix.len();
                let m0 = matrix_decode(&l.target_matrix, k, k)?;
                check_inverse(&m0, &l.target_inverse)?;
                if l.legs.is_empty() {
                    return Err(SymplecticError::Malformed("ladder without legs".into()));
                }
                for leg in &l.legs {
                    let cols = leg.jacobian.first().map_or(0, |r| r.len());
                    let j = matrix_decode(&leg.jacobian, k, cols)?;
                    let injective = rank(&j) == cols;
                    let isotropic = j.transpose().mul(&m0)?.mul(&j)?.is_zero();
                    let lagrangian = injective && isotropic && 2 * cols == k;
                    if (injective, isotropic, lagrangian) != (leg.injective, leg.isotropic, leg.lagrangian) || !lagrangian {
                        return Err(SymplecticError::DegenerateForm(format!("leg {} is not Lagrangian", leg.name)));
                    }
                }
            }
        }
        if self.amplitude != amplitude_report(&dr, self.n) {
            return Err(SymplecticError::Malformed("amplitude report differs".into()));
        }
        Ok(())
    }
}

/// Linear part at the augmentation of a map `L → X` given by the images of
/// the coordinates of `X` in the functions on `L`.
pub fn jacobian(gl: usize, images: &[Polynomial]) -> Vec<Vec<Rational>> {
    images
        .iter()
        .map(|f| {
            (0..gl)
                .map(|a| {
                    let mut e = vec![0u16; gl];
                    e[a] = 1;
                    f.terms()
                        .find(|(m, _)| m.0 == e)
                        .map_or_else(zero, |(_, c)| c.clone())
                })
                .collect()
        })
        .collect()
}

pub fn leg_record(name: &str, jac: &[Vec<Rational>], m0: &[Vec<Rational>]) -> LegRecord {
    let g = m0.len();
    let cols = jac.first().map_or(0, |r| r.len());
    let j = SparseMatrix::from_dense(g, cols, jac);
    let m = SparseMatrix::from_dense(g, g, m0);
    let injective = rank(&j) == cols;
    let isotropic = j
        .transpose()
        .mul(&m)
        .and_then(|x| x.mul(&j))
        .map(|x| x.is_zero())
        .unwrap_or(false);
    LegRecord {
        name: name.to_string(),
        jacobian: matrix_record(jac),
        injective,
        isotropic,
        lagrangian: injective && isotropic && 2 * cols == g,
    }
}

pub fn matrix_strings(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    matrix_record(m)
}
