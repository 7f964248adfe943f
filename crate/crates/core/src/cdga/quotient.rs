use std::collections::BTreeMap;

use serde::Serialize;

use super::{CdgaError, FreeAlgebra, Generator, Monomial, Polynomial, Presentation};
use crate::kernel::{EchelonBasis, Vector};

/// `ℚ[degree-0 generators] / (d g : |g| = −1)`, computed weight by weight.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    ring: FreeAlgebra,
    relations: Vec<Polynomial>,
    relation_weights: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientDims {
    pub per_weight: BTreeMap<u32, usize>,
    /// Total dimension when the window proves the quotient vanishes in all
    /// higher weights.
    pub total: Option<usize>,
}

pub fn truncation_h0(p: &Presentation) -> Result<QuotientRing, CdgaError> {
    if let Some(g) = p.gens().iter().find(|g| g.degree > 0) {
        return Err(CdgaError::UnsupportedShape(format!(
            "generator {} has positive degree; degree-0 part is not a polynomial ring",
            g.name
        )));
    }
    let zero_idx: Vec<usize> = (0..p.nvars()).filter(|&k| p.gens()[k].degree == 0).collect();
    let ring = FreeAlgebra::new(
        zero_idx
            .iter()
            .map(|&k| Generator {
                form: 0,
                ..p.gens()[k].clone()
            })
            .collect(),
    );
    let mut relations = Vec::new();
    let mut relation_weights = Vec::new();
    for k in 0..p.nvars() {
        if p.gens()[k].degree != -1 || p.d_of(k).is_zero() {
            continue;
        }
        let mut rel = ring.zero();
        for (m, c) in p.d_of(k).terms() {
            let exps: Vec<u16> = zero_idx.iter().map(|&i| m.0[i]).collect();
            rel.add_term(Monomial(exps), c.clone());
        }
        let weight = match ring.tridegree(&rel) {
            Some((_, w, _)) => w,
            None => {
                return Err(CdgaError::UnsupportedShape(format!(
                    "relation d {} is not weight-homogeneous",
                    p.gens()[k].name
                )))
            }
        };
        relations.push(rel);
        relation_weights.push(weight);
    }
    Ok(QuotientRing {
        ring,
        relations,
        relation_weights,
    })
}

impl QuotientRing {
    pub fn ring(&self) -> &FreeAlgebra {
        &self.ring
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Monomial coordinates at weight `w`, largest monomial first, and the
    /// echelon basis of the ideal's weight-`w` part in those coordinates.
    fn ideal_at(&self, w: u32) -> (Vec<Monomial>, EchelonBasis) {
        let mut monos = self.ring.monomials_of_weight(w);
        monos.reverse();
        let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut basis = EchelonBasis::new(monos.len());
        for (rel, &rw) in self.relations.iter().zip(&self.relation_weights) {
            if rw > w {
                continue;
            }
            for m in self.ring.monomials_of_weight(w - rw) {
                let prod = self.ring.mul(&Polynomial::term(m, crate::kernel::one()), rel);
                basis.insert(&to_coords(&prod, &index, monos.len()));
            }
        }
        (monos, basis)
    }

    pub fn dim_at_weight(&self, w: u32) -> usize {
        let (monos, basis) = self.ideal_at(w);
        monos.len() - basis.rank()
    }

    pub fn dims(&self, max_weight: u32) -> QuotientDims {
        let per_weight: BTreeMap<u32, usize> = (0..=max_weight).map(|w| (w, self.dim_at_weight(w))).collect();
        let span = self.ring.gens().iter().map(|g| g.weight).max().unwrap_or(1);
        let mut total = None;
        if self.ring.nvars() == 0 {
            total = Some(1);
        } else {
            for start in 1..=max_weight {
                if start + span - 1 > max_weight {
                    break;
                }
                if (start..start + span).all(|w| per_weight[&w] == 0) {
                    total = Some(per_weight.range(..start).map(|(_, d)| d).sum());
                    break;
                }
            }
        }
        QuotientDims { per_weight, total }
    }

    /// Canonical representative modulo the ideal, supported on standard
    /// monomials. Input must be a polynomial in the ring's generators.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let mut by_weight: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in p.terms() {
            by_weight
                .entry(self.ring.mono_weight(m))
                .or_insert_with(|| self.ring.zero())
                .add_term(m.clone(), c.clone());
        }
        let mut out = self.ring.zero();
        for (w, part) in by_weight {
            let (monos, basis) = self.ideal_at(w);
            let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let r = basis.remainder(&to_coords(&part, &index, monos.len()));
            for (i, c) in r.into_iter().enumerate() {
                out.add_term(monos[i].clone(), c);
            }
        }
        out
    }

    /// Maps a polynomial of the presentation that only involves degree-0
    /// generators into the ring.
    pub fn from_presentation(&self, p: &Presentation, f: &Polynomial) -> Option<Polynomial> {
        let idx: Vec<usize> = (0..p.nvars()).filter(|&k| p.gens()[k].degree == 0).collect();
        let mut out = self.ring.zero();
        for (m, c) in f.terms() {
            if (0..p.nvars()).any(|k| m.0[k] > 0 && p.gens()[k].degree != 0) {
                return None;
            }
            out.add_term(Monomial(idx.iter().map(|&k| m.0[k]).collect()), c.clone());
        }
        Some(out)
    }
}

fn to_coords(p: &Polynomial, index: &BTreeMap<&Monomial, usize>, n: usize) -> Vector {
    let mut v = vec![crate::kernel::zero(); n];
    for (m, c) in p.terms() {
        v[index[m]] = c.clone();
    }
    v
}
