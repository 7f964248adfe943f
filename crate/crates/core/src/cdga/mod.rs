//! Quasi-free graded-commutative differential algebras over ℚ.

mod algebra;
mod quotient;

pub use algebra::{Derivation, FreeAlgebra, Generator, Monomial, Polynomial};
pub use quotient::{truncation_h0, QuotientRing};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error("d² ≠ 0 on generator {generator}: residual {residual}")]
    DSquaredNonzero { generator: String, residual: String },
    #[error("differential of {generator} is not homogeneous of the required bidegree: {detail}")]
    InhomogeneousDifferential { generator: String, detail: String },
    #[error("duplicate generator name {0}")]
    DuplicateName(String),
    #[error("generator {0} has weight 0; weights must be positive")]
    NonpositiveWeight(String),
    #[error("operands belong to different presentations")]
    MixedPresentations,
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("generator {0} has positive degree but the presentation is strictly nonpositive")]
    PositiveDegree(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("morphism is not a chain map on generator {0}")]
    NotAChainMap(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: i64,
    pub weight: u32,
}

impl GeneratorDecl {
    pub fn new(name: &str, degree: i64, weight: u32) -> Self {
        GeneratorDecl {
            name: name.to_string(),
            degree,
            weight,
        }
    }
}

/// `d(generator) = value`. `formal_degree` is the degree of the expression
/// as written, before any cancellation; parsers fill it in so that e.g.
/// `d a = a*a` with `a` odd is rejected even though `a*a` is zero.
#[derive(Clone, Debug)]
pub struct DiffAssignment {
    pub generator: String,
    pub value: Polynomial,
    pub formal_degree: Option<i64>,
}

/// Finite pieces the engine computes on. A weight slice is a sub-complex
/// for every structure map; a truncated slice is the quotient by monomials
/// with more than `N` factors and is never certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slice {
    Weight(u32),
    Truncated(usize),
}

impl Slice {
    pub fn certified(&self) -> bool {
        matches!(self, Slice::Weight(_))
    }

    pub fn monomials(&self, alg: &FreeAlgebra) -> Vec<Monomial> {
        match *self {
            Slice::Weight(w) => alg.monomials_of_weight(w),
            Slice::Truncated(n) => alg.monomials_of_length_at_most(n),
        }
    }

    /// Projects a polynomial into the slice. Terms outside it are dropped,
    /// which is exact for weight slices because every map is weight 0.
    pub fn project(&self, alg: &FreeAlgebra, p: &Polynomial) -> Polynomial {
        match *self {
            Slice::Weight(w) => p.filter(|m| alg.mono_weight(m) == w),
            Slice::Truncated(n) => p.filter(|m| m.length() <= n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Weighted,
    /// Total polynomial length is clipped at this bound; weights are not
    /// required to be preserved by d.
    Truncated(usize),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    pub strict_nonpositive: bool,
    pub truncate: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    alg: FreeAlgebra,
    d: Derivation,
    strict_nonpositive: bool,
    mode: Mode,
}

pub fn build_presentation(
    gens: &[GeneratorDecl],
    diffs: &[DiffAssignment],
    options: BuildOptions,
) -> Result<Presentation, CdgaError> {
    let mut seen = std::collections::BTreeSet::new();
    for g in gens {
        if !seen.insert(g.name.as_str()) {
            return Err(CdgaError::DuplicateName(g.name.clone()));
        }
        if g.weight == 0 {
            return Err(CdgaError::NonpositiveWeight(g.name.clone()));
        }
        if options.strict_nonpositive && g.degree > 0 {
            return Err(CdgaError::PositiveDegree(g.name.clone()));
        }
    }
    let alg = FreeAlgebra::new(
        gens.iter()
            .map(|g| Generator {
                name: g.name.clone(),
                degree: g.degree,
                weight: g.weight,
                odd: g.degree.rem_euclid(2) == 1,
                form: 0,
            })
            .collect(),
    );
    let n = alg.nvars();
    let mut images = vec![Polynomial::zero(n); n];
    let mut assigned = vec![false; n];
    for a in diffs {
        let k = alg
            .index_of(&a.generator)
            .ok_or_else(|| CdgaError::UnknownGenerator(a.generator.clone()))?;
        if a.value.nvars() != n {
            return Err(CdgaError::MixedPresentations);
        }
        if assigned[k] {
            return Err(CdgaError::DuplicateName(format!("d {}", a.generator)));
        }
        assigned[k] = true;
        let g = &alg.gens()[k];
        let want = g.degree + 1;
        if let Some(fd) = a.formal_degree {
            if fd != want {
                return Err(CdgaError::InhomogeneousDifferential {
                    generator: g.name.clone(),
                    detail: format!("expression has degree {fd}, expected {want}"),
                });
            }
        }
        for (m, _) in a.value.terms() {
            let deg = alg.mono_degree(m);
            if deg != want {
                return Err(CdgaError::InhomogeneousDifferential {
                    generator: g.name.clone(),
                    detail: format!(
                        "term {} has degree {deg}, expected {want}",
                        alg.format_monomial(m)
                    ),
                });
            }
            match options.truncate {
                None => {
                    let w = alg.mono_weight(m);
                    if w != g.weight {
                        return Err(CdgaError::InhomogeneousDifferential {
                            generator: g.name.clone(),
                            detail: format!(
                                "term {} has weight {w}, expected {}",
                                alg.format_monomial(m),
                                g.weight
                            ),
                        });
                    }
                }
                Some(_) => {
                    if m.is_one() {
                        return Err(CdgaError::UnsupportedShape(format!(
                            "d {} has a constant term, which truncation cannot handle",
                            g.name
                        )));
                    }
                }
            }
        }
        images[k] = a.value.clone();
    }
    let d = Derivation { odd: true, images };
    for k in 0..n {
        let dd = alg.apply(&d, &d.images[k]);
        if !dd.is_zero() {
            return Err(CdgaError::DSquaredNonzero {
                generator: alg.gens()[k].name.clone(),
                residual: alg.format(&dd),
            });
        }
    }
    Ok(Presentation {
        alg,
        d,
        strict_nonpositive: options.strict_nonpositive,
        mode: options.truncate.map_or(Mode::Weighted, Mode::Truncated),
    })
}

impl Presentation {
    pub fn algebra(&self) -> &FreeAlgebra {
        &self.alg
    }

    pub fn gens(&self) -> &[Generator] {
        self.alg.gens()
    }

    pub fn nvars(&self) -> usize {
        self.alg.nvars()
    }

    pub fn differential(&self) -> &Derivation {
        &self.d
    }

    pub fn d_of(&self, k: usize) -> &Polynomial {
        &self.d.images[k]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn strict_nonpositive(&self) -> bool {
        self.strict_nonpositive
    }

    pub fn is_certified(&self) -> bool {
        self.mode == Mode::Weighted
    }

    pub fn var(&self, name: &str) -> Result<Polynomial, CdgaError> {
        let k = self
            .alg
            .index_of(name)
            .ok_or_else(|| CdgaError::UnknownGenerator(name.to_string()))?;
        Ok(self.alg.var(k))
    }

    pub fn decls(&self) -> Vec<GeneratorDecl> {
        self.gens()
            .iter()
            .map(|g| GeneratorDecl::new(&g.name, g.degree, g.weight))
            .collect()
    }

    pub fn multiply(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, CdgaError> {
        self.alg.multiply(a, b)
    }

    pub fn apply_d(&self, a: &Polynomial) -> Polynomial {
        self.alg.apply(&self.d, a)
    }

    /// Monomials of exactly the given degree and weight.
    pub fn bigraded_basis(&self, degree: i64, weight: u32) -> Vec<Monomial> {
        self.alg
            .monomials_of_weight(weight)
            .into_iter()
            .filter(|m| self.alg.mono_degree(m) == degree)
            .collect()
    }

    pub fn max_weight_of_generators(&self) -> u32 {
        self.gens().iter().map(|g| g.weight).max().unwrap_or(0)
    }

    /// Slice used for a user-requested weight, honouring truncated mode.
    pub fn slice(&self, weight: u32) -> Slice {
        match self.mode {
            Mode::Weighted => Slice::Weight(weight),
            Mode::Truncated(n) => Slice::Truncated(n),
        }
    }

    pub fn format(&self, p: &Polynomial) -> String {
        self.alg.format(p)
    }

    /// Same generators and differential with the given mode.
    pub fn with_mode(&self, mode: Mode) -> Presentation {
        Presentation {
            mode,
            ..self.clone()
        }
    }
}

pub fn augmentation_reduce(p: &Polynomial) -> Rational {
    p.augmentation()
}

/// An algebra map given on generators.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<Polynomial>,
}

impl AlgebraMorphism {
    /// Validates degree and weight preservation and `φ d = d φ` on
    /// generators.
    pub fn new(
        source: Presentation,
        target: Presentation,
        images: Vec<Polynomial>,
    ) -> Result<Self, CdgaError> {
        if images.len() != source.nvars() {
            return Err(CdgaError::MixedPresentations);
        }
        let talg = target.algebra();
        for (k, img) in images.iter().enumerate() {
            if img.nvars() != target.nvars() {
                return Err(CdgaError::MixedPresentations);
            }
            let g = &source.gens()[k];
            for (m, _) in img.terms() {
                let weight_ok = !target.is_certified() || talg.mono_weight(m) == g.weight;
                if talg.mono_degree(m) != g.degree || !weight_ok {
                    return Err(CdgaError::InhomogeneousDifferential {
                        generator: g.name.clone(),
                        detail: format!("image term {} has the wrong bidegree", talg.format_monomial(m)),
                    });
                }
            }
        }
        let f = AlgebraMorphism {
            source,
            target,
            images,
        };
        for k in 0..f.source.nvars() {
            let lhs = f.apply(f.source.d_of(k));
            let rhs = f.target.apply_d(&f.images[k]);
            if lhs != rhs {
                return Err(CdgaError::NotAChainMap(f.source.gens()[k].name.clone()));
            }
        }
        Ok(f)
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let talg = self.target.algebra();
        let mut out = talg.zero();
        for (m, c) in p.terms() {
            let mut acc = talg.constant(c.clone());
            for (k, e) in m.factors() {
                acc = talg.mul(&acc, &talg.pow(&self.images[k], e as u32));
            }
            out.add_assign(&acc);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn rcrit_x3() -> Presentation {
        let gens = [GeneratorDecl::new("x", 0, 1), GeneratorDecl::new("xi", -1, 2)];
        let alg_x = Polynomial::var(2, 0);
        let tmp = build_presentation(&gens, &[], BuildOptions::default()).unwrap();
        let x2 = tmp.multiply(&alg_x, &alg_x).unwrap().scale(&rat(3));
        build_presentation(
            &gens,
            &[DiffAssignment {
                generator: "xi".into(),
                value: x2,
                formal_degree: None,
            }],
            BuildOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn polynomial_line_is_valid() {
        let p = build_presentation(&[GeneratorDecl::new("x", 0, 1)], &[], BuildOptions::default()).unwrap();
        assert!(p.d_of(0).is_zero());
    }

    #[test]
    fn d_of_x_xi_is_three_x_cubed() {
        let p = rcrit_x3();
        let x = p.var("x").unwrap();
        let xi = p.var("xi").unwrap();
        let got = p.apply_d(&p.multiply(&x, &xi).unwrap());
        let expected = p.algebra().pow(&x, 3).scale(&rat(3));
        assert_eq!(got, expected);
    }

    #[test]
    fn bigraded_basis_examples() {
        let line = build_presentation(&[GeneratorDecl::new("x", 0, 1)], &[], BuildOptions::default()).unwrap();
        assert_eq!(line.bigraded_basis(0, 3).len(), 1);
        let p = rcrit_x3();
        let b = p.bigraded_basis(-1, 5);
        assert_eq!(b, vec![Monomial(vec![3, 1])]);
        assert!(p.bigraded_basis(1, 4).is_empty());
    }

    #[test]
    fn duplicate_and_weight_errors() {
        let dup = build_presentation(
            &[GeneratorDecl::new("x", 0, 1), GeneratorDecl::new("x", 0, 1)],
            &[],
            BuildOptions::default(),
        );
        assert!(matches!(dup, Err(CdgaError::DuplicateName(_))));
        let w0 = build_presentation(&[GeneratorDecl::new("x", 0, 0)], &[], BuildOptions::default());
        assert!(matches!(w0, Err(CdgaError::NonpositiveWeight(_))));
    }

    #[test]
    fn formal_degree_mismatch_is_rejected() {
        let gens = [GeneratorDecl::new("a", -1, 1)];
        let r = build_presentation(
            &gens,
            &[DiffAssignment {
                generator: "a".into(),
                value: Polynomial::zero(1),
                formal_degree: Some(-2),
            }],
            BuildOptions::default(),
        );
        assert!(matches!(r, Err(CdgaError::InhomogeneousDifferential { .. })));
    }

    #[test]
    fn nonzero_square_is_rejected() {
        // d t = x, d x = y with t, x, y of degrees −2, −1, 0.
        let gens = [
            GeneratorDecl::new("t", -2, 1),
            GeneratorDecl::new("x", -1, 1),
            GeneratorDecl::new("y", 0, 1),
        ];
        let r = build_presentation(
            &gens,
            &[
                DiffAssignment {
                    generator: "t".into(),
                    value: Polynomial::var(3, 1),
                    formal_degree: None,
                },
                DiffAssignment {
                    generator: "x".into(),
                    value: Polynomial::var(3, 2),
                    formal_degree: None,
                },
            ],
            BuildOptions::default(),
        );
        assert!(matches!(r, Err(CdgaError::DSquaredNonzero { .. })));
    }

    #[test]
    fn augmentation_examples() {
        let line = build_presentation(&[GeneratorDecl::new("x", 0, 1)], &[], BuildOptions::default()).unwrap();
        let p = line.algebra().constant(rat(5)).add(&line.var("x").unwrap().scale(&rat(2)));
        assert_eq!(augmentation_reduce(&p), rat(5));
        let r = rcrit_x3();
        for k in 0..r.nvars() {
            assert_eq!(augmentation_reduce(r.d_of(k)), rat(0));
        }
        let x = r.var("x").unwrap();
        let xi = r.var("xi").unwrap();
        assert_eq!(augmentation_reduce(&r.multiply(&x, &xi).unwrap()), rat(0));
    }

    #[test]
    fn mixed_presentations_are_rejected() {
        let r = rcrit_x3();
        let other = Polynomial::var(3, 0);
        assert_eq!(r.multiply(&r.var("x").unwrap(), &other), Err(CdgaError::MixedPresentations));
    }
}
