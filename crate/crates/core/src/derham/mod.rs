//! Kähler forms on a quasi-free model, with the internal differential, the
//! de Rham differential, contraction and the pairing matrix Θ.
//!
//! Generators are ordered `x_1 … x_g, δx_1 … δx_g`. The form generator δx
//! sits in the same degree as x but has the opposite parity.

use serde::Serialize;
use thiserror::Error;

use crate::cdga::{Derivation, FreeAlgebra, Generator, Polynomial, Presentation};
use crate::kernel::{one, sign, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerhamError {
    #[error("form is not a cocycle for the internal differential: d = {0}")]
    NotACocycle(String),
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("expected a form of form-weight {expected}, got {got}")]
    WrongFormWeight { expected: u32, got: u32 },
    #[error("Θ fails to be a chain map on column {0}")]
    ChainMapFailed(String),
}

#[derive(Clone, Debug)]
pub struct DeRhamAlgebra {
    base: Presentation,
    alg: FreeAlgebra,
    d_int: Derivation,
    eps: Derivation,
}

impl DeRhamAlgebra {
    pub fn new(base: &Presentation) -> Self {
        let g = base.nvars();
        let mut gens: Vec<Generator> = base.gens().to_vec();
        for x in base.gens() {
            gens.push(Generator {
                name: format!("δ{}", x.name),
                degree: x.degree,
                weight: x.weight,
                odd: !x.odd,
                form: 1,
            });
        }
        let alg = FreeAlgebra::new(gens);
        let n = alg.nvars();
        let mut eps_images = vec![Polynomial::zero(n); n];
        for (k, img) in eps_images.iter_mut().enumerate().take(g) {
            *img = alg.var(g + k);
        }
        let eps = Derivation {
            odd: true,
            images: eps_images,
        };
        let mut d_images = vec![Polynomial::zero(n); n];
        for k in 0..g {
            let dx = base.d_of(k).embed(n);
            d_images[g + k] = alg.apply(&eps, &dx).neg();
            d_images[k] = dx;
        }
        let d_int = Derivation {
            odd: true,
            images: d_images,
        };
        DeRhamAlgebra {
            base: base.clone(),
            alg,
            d_int,
            eps,
        }
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.alg
    }

    pub fn nbase(&self) -> usize {
        self.base.nvars()
    }

    /// Base generator `x_k` as a form of form-weight 0.
    pub fn x(&self, k: usize) -> Polynomial {
        self.alg.var(k)
    }

    /// Form generator `δx_k`.
    pub fn delta(&self, k: usize) -> Polynomial {
        self.alg.var(self.nbase() + k)
    }

    pub fn embed(&self, p: &Polynomial) -> Polynomial {
        p.embed(self.alg.nvars())
    }

    /// The base-algebra polynomial, if `f` has form-weight 0.
    pub fn restrict(&self, f: &Polynomial) -> Option<Polynomial> {
        f.restrict(self.nbase())
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.alg.mul(a, b)
    }

    pub fn d_internal(&self, f: &Polynomial) -> Polynomial {
        self.alg.apply(&self.d_int, f)
    }

    pub fn d_de_rham(&self, f: &Polynomial) -> Polynomial {
        self.alg.apply(&self.eps, f)
    }

    pub fn internal_derivation(&self) -> &Derivation {
        &self.d_int
    }

    pub fn de_rham_derivation(&self) -> &Derivation {
        &self.eps
    }

    /// Parity of the contraction ι_j, which is that of δx_j.
    pub fn iota_parity(&self, j: usize) -> bool {
        !self.base.gens()[j].odd
    }

    /// ι_v as a derivation, or `None` if `v` is not parity-homogeneous.
    pub fn contraction(&self, v: &TangentVector) -> Option<Derivation> {
        let parity = v.contraction_parity(self)?;
        let n = self.alg.nvars();
        let g = self.nbase();
        let mut images = vec![Polynomial::zero(n); n];
        for (j, c) in v.coeffs.iter().enumerate() {
            images[g + j] = self.embed(c);
        }
        Some(Derivation { odd: parity, images })
    }

    /// Left interior product.
    pub fn contract(&self, v: &TangentVector, f: &Polynomial) -> Polynomial {
        match self.contraction(v) {
            Some(der) => self.alg.apply(&der, f),
            None => {
                let mut out = self.alg.zero();
                for (j, c) in v.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut single = TangentVector::zero(self.nbase(), self);
                    single.coeffs[j] = c.clone();
                    out.add_assign(&self.contract(&single, f));
                }
                out
            }
        }
    }

    /// Components `c_i` of a 1-form `Σ c_i δx_i`, with coefficients on the
    /// left.
    pub fn one_form_coefficients(&self, f: &Polynomial) -> Option<Vec<Polynomial>> {
        let g = self.nbase();
        let mut out = vec![self.base.algebra().zero(); g];
        for (m, c) in f.terms() {
            let deltas: Vec<usize> = (0..g).filter(|&i| m.0[g + i] > 0).collect();
            if deltas.len() != 1 || m.0[g + deltas[0]] != 1 {
                return None;
            }
            let i = deltas[0];
            let mut e = m.0[..g].to_vec();
            e.truncate(g);
            out[i].add_term(crate::cdga::Monomial(e), c.clone());
        }
        Some(out)
    }

    pub fn form_weight(&self, f: &Polynomial) -> Option<u32> {
        if f.is_zero() {
            return None;
        }
        self.alg.tridegree(f).map(|(_, _, q)| q)
    }

    pub fn format(&self, f: &Polynomial) -> String {
        self.alg.format(f)
    }

    /// Tangent differential `[d, ι_v]`, returned as the vector it contracts
    /// with.
    pub fn tangent_differential(&self, v: &TangentVector) -> TangentVector {
        let g = self.nbase();
        let Some(par) = v.contraction_parity(self) else {
            return TangentVector::zero(g, self);
        };
        let der = self.contraction(v).expect("homogeneous");
        let mut coeffs = Vec::with_capacity(g);
        for k in 0..g {
            let dv = self.base.apply_d(&v.coeffs[k]);
            let eps_dx = self.d_de_rham(&self.embed(self.base.d_of(k)));
            let contracted = self.alg.apply(&der, &eps_dx);
            let contracted = self.restrict(&contracted).expect("contraction of a 1-form");
            coeffs.push(dv.add(&contracted.scale(&sign(par))));
        }
        TangentVector { coeffs }
    }
}

/// `Σ_j c_j ∂_j` with coefficients in the base algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentVector {
    pub coeffs: Vec<Polynomial>,
}

impl TangentVector {
    pub fn zero(g: usize, dr: &DeRhamAlgebra) -> Self {
        TangentVector {
            coeffs: vec![dr.base().algebra().zero(); g],
        }
    }

    /// The coordinate vector ∂_j.
    pub fn basis(g: usize, j: usize) -> Self {
        let mut coeffs = vec![Polynomial::zero(g); g];
        coeffs[j] = Polynomial::constant(g, one());
        TangentVector { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TangentVector {
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Parity of ι_v, if homogeneous. The zero vector counts as even.
    pub fn contraction_parity(&self, dr: &DeRhamAlgebra) -> Option<bool> {
        let mut out: Option<bool> = None;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pc = dr.base().algebra().parity(c)?;
            let p = pc ^ dr.iota_parity(j);
            match out {
                Some(q) if q != p => return None,
                _ => out = Some(p),
            }
        }
        Some(out.unwrap_or(false))
    }
}

/// Matrix of Θ_ω : T → Ω¹[n]. Entry `(i, j)` is the coefficient of δx_i in
/// Θ(∂_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    pub n: i64,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<Polynomial>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingEntry {
    pub row: String,
    pub col: String,
    pub value: String,
}

impl PairingMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_zero())
    }

    /// Constant part of every entry.
    pub fn augmentation(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.augmentation()).collect())
            .collect()
    }

    pub fn display(&self, base: &Presentation) -> Vec<PairingEntry> {
        let mut out = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    out.push(PairingEntry {
                        row: self.rows[i].clone(),
                        col: self.cols[j].clone(),
                        value: base.format(p),
                    });
                }
            }
        }
        out
    }
}

/// Θ(v) = (−1)^{n·|ι_v|} ι_v(ω0).
pub fn theta_of(dr: &DeRhamAlgebra, omega0: &Polynomial, n: i64, v: &TangentVector) -> Polynomial {
    let par = v.contraction_parity(dr).unwrap_or(false);
    dr.contract(v, omega0).scale(&sign(par && n.rem_euclid(2) == 1))
}

pub fn de_rham_algebra(p: &Presentation) -> DeRhamAlgebra {
    DeRhamAlgebra::new(p)
}

/// Builds Θ for a 2-form cocycle and verifies that it is a chain map
/// `T → Ω¹[n]`, i.e. `(−1)^n d Θ(∂_j) = Θ(d_T ∂_j)` for every column.
pub fn theta_matrix(dr: &DeRhamAlgebra, omega0: &Polynomial, n: i64) -> Result<PairingMatrix, DerhamError> {
    let g = dr.nbase();
    let base = dr.base();
    if !omega0.is_zero() {
        match dr.algebra().tridegree(omega0) {
            None => return Err(DerhamError::NotHomogeneous),
            Some((_, _, q)) if q != 2 => return Err(DerhamError::WrongFormWeight { expected: 2, got: q }),
            _ => {}
        }
    }
    let dw = dr.d_internal(omega0);
    if !dw.is_zero() {
        return Err(DerhamError::NotACocycle(dr.format(&dw)));
    }
    let mut entries = vec![vec![base.algebra().zero(); g]; g];
    for j in 0..g {
        let v = TangentVector::basis(g, j);
        let col = theta_of(dr, omega0, n, &v);
        let coeffs = dr.one_form_coefficients(&col).ok_or(DerhamError::NotHomogeneous)?;
        for (i, c) in coeffs.into_iter().enumerate() {
            entries[i][j] = c;
        }
        let lhs = dr.d_internal(&col).scale(&sign(n.rem_euclid(2) == 1));
        let dv = dr.tangent_differential(&v);
        let rhs = theta_of(dr, omega0, n, &dv);
        if lhs != rhs {
            return Err(DerhamError::ChainMapFailed(format!("∂{}", base.gens()[j].name)));
        }
    }
    Ok(PairingMatrix {
        n,
        rows: base.gens().iter().map(|x| format!("δ{}", x.name)).collect(),
        cols: base.gens().iter().map(|x| format!("∂{}", x.name)).collect(),
        entries,
    })
}

#[cfg(test)]
mod tests;
