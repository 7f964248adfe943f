use std::collections::BTreeMap;

use super::{Bidegree, GradedMixedComplex, NcwError};
use crate::cdga::{Monomial, Polynomial, Slice};
use crate::derham::DeRhamAlgebra;
use crate::kernel::{zero, SparseMatrix, Vector};

/// The de Rham graded mixed complex of one slice, with the monomial basis
/// of every piece kept so that vectors can be turned back into forms.
#[derive(Clone, Debug)]
pub struct DrMixed {
    pub dr: DeRhamAlgebra,
    pub slice: Slice,
    pub complex: GradedMixedComplex,
    monos: BTreeMap<Bidegree, Vec<Monomial>>,
    index: BTreeMap<Monomial, (Bidegree, usize)>,
}

/// `piece(m, q) = (Ω^q)^{m+q}` restricted to the slice, with `d = d_internal`
/// and `ε = d_de_rham`.
pub fn mixed_from_dr(dr: &DeRhamAlgebra, slice: Slice) -> Result<DrMixed, NcwError> {
    let alg = dr.algebra();
    if let Some(g) = alg.gens().iter().find(|g| g.weight == 0) {
        return Err(NcwError::InfinitePiece(g.degree, g.form as i64));
    }
    let mut monos: BTreeMap<Bidegree, Vec<Monomial>> = BTreeMap::new();
    for m in slice.monomials(alg) {
        let q = alg.mono_form(&m) as i64;
        let s = alg.mono_degree(&m);
        monos.entry((s - q, q)).or_default().push(m);
    }
    let mut index = BTreeMap::new();
    for (&b, list) in &monos {
        for (k, m) in list.iter().enumerate() {
            index.insert(m.clone(), (b, k));
        }
    }
    let pieces = monos
        .iter()
        .map(|(b, list)| (*b, list.iter().map(|m| alg.format_monomial(m)).collect()))
        .collect();
    let mut out = DrMixed {
        dr: dr.clone(),
        slice,
        complex: GradedMixedComplex::new(BTreeMap::new(), BTreeMap::new(), BTreeMap::new())?,
        monos,
        index,
    };
    let mut d = BTreeMap::new();
    let mut eps = BTreeMap::new();
    for (&(m, q), list) in &out.monos {
        let dm = out.matrix(list, (m + 1, q), |f| dr.d_internal(f));
        let em = out.matrix(list, (m - 1, q + 1), |f| dr.d_de_rham(f));
        d.insert((m, q), dm);
        eps.insert((m, q), em);
    }
    out.complex = GradedMixedComplex::new(pieces, d, eps)?;
    Ok(out)
}

impl DrMixed {
    fn matrix(&self, src: &[Monomial], target: Bidegree, op: impl Fn(&Polynomial) -> Polynomial) -> SparseMatrix {
        let rows = self.monos.get(&target).map_or(0, |v| v.len());
        let mut mat = SparseMatrix::zeros(rows, src.len());
        for (c, m) in src.iter().enumerate() {
            let image = op(&Polynomial::term(m.clone(), crate::kernel::one()));
            let image = self.slice.project(self.dr.algebra(), &image);
            for (mono, coeff) in image.terms() {
                let (b, r) = self.index[mono];
                debug_assert_eq!(b, target);
                mat.set(r, c, coeff.clone());
            }
        }
        mat
    }

    pub fn monomials(&self, b: Bidegree) -> &[Monomial] {
        self.monos.get(&b).map_or(&[], |v| v.as_slice())
    }

    /// Coordinates of a form in piece `b`; `None` if it has terms elsewhere.
    pub fn to_vector(&self, b: Bidegree, f: &Polynomial) -> Option<Vector> {
        let mut v = vec![zero(); self.complex.dim(b.0, b.1)];
        for (m, c) in f.terms() {
            let &(bb, k) = self.index.get(m)?;
            if bb != b {
                return None;
            }
            v[k] = c.clone();
        }
        Some(v)
    }

    pub fn to_form(&self, b: Bidegree, v: &[crate::kernel::Rational]) -> Polynomial {
        let mut out = self.dr.algebra().zero();
        for (m, c) in self.monomials(b).iter().zip(v) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}
