use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::CdgaError;
use crate::kernel::{rat, Rational};

/// A free generator. `odd` is the Koszul parity, which for algebra
/// generators is the degree mod 2 and for form generators is shifted by one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub weight: u32,
    pub odd: bool,
    /// Number of δ-factors carried by the generator (0 or 1).
    pub form: u32,
}

/// Exponent vector over a fixed ordered generator list. Odd generators
/// have exponent at most 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[k] = 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    /// Total number of factors.
    pub fn length(&self) -> usize {
        self.0.iter().map(|e| *e as usize).sum()
    }

    /// `(generator index, exponent)` pairs with nonzero exponent.
    pub fn factors(&self) -> Vec<(usize, u16)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| (i, *e))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Finite linear combination of monomials. Never stores a zero coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        Polynomial::term(Monomial::var(nvars, k), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let nvars = m.0.len();
        let mut p = Polynomial::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different algebras");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Coefficient of the empty monomial.
    pub fn augmentation(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Same polynomial viewed in an algebra whose generator list extends
    /// this one's.
    pub fn embed(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Inverse of [`Polynomial::embed`]; `None` if a dropped generator
    /// occurs.
    pub fn restrict(&self, nvars: usize) -> Option<Polynomial> {
        let mut out = Polynomial::zero(nvars);
        for (m, c) in &self.terms {
            if m.0[nvars..].iter().any(|e| *e > 0) {
                return None;
            }
            out.add_term(Monomial(m.0[..nvars].to_vec()), c.clone());
        }
        Some(out)
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Ordered generator list of a free graded-commutative algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeAlgebra {
    gens: Vec<Generator>,
}

/// A derivation of the free algebra, given by its values on generators.
/// `odd` is its Koszul parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub odd: bool,
    pub images: Vec<Polynomial>,
}

impl FreeAlgebra {
    pub fn new(gens: Vec<Generator>) -> Self {
        FreeAlgebra { gens }
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn nvars(&self) -> usize {
        self.gens.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn var(&self, k: usize) -> Polynomial {
        Polynomial::var(self.nvars(), k)
    }

    pub fn constant(&self, c: Rational) -> Polynomial {
        Polynomial::constant(self.nvars(), c)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        self.constant(Rational::one())
    }

    pub fn mono_degree(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(&self.gens)
            .map(|(e, g)| *e as i64 * g.degree)
            .sum()
    }

    pub fn mono_weight(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.gens).map(|(e, g)| *e as u32 * g.weight).sum()
    }

    pub fn mono_form(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.gens).map(|(e, g)| *e as u32 * g.form).sum()
    }

    pub fn mono_odd(&self, m: &Monomial) -> bool {
        m.0.iter()
            .zip(&self.gens)
            .filter(|(_, g)| g.odd)
            .map(|(e, _)| *e as u32)
            .sum::<u32>()
            % 2
            == 1
    }

    /// `(degree, weight, form)` if every term shares it.
    pub fn tridegree(&self, p: &Polynomial) -> Option<(i64, u32, u32)> {
        let mut it = p.terms().map(|(m, _)| {
            (self.mono_degree(m), self.mono_weight(m), self.mono_form(m))
        });
        let first = it.next()?;
        it.all(|t| t == first).then_some(first)
    }

    /// Koszul parity if homogeneous; zero counts as even.
    pub fn parity(&self, p: &Polynomial) -> Option<bool> {
        let mut it = p.terms().map(|(m, _)| self.mono_odd(m));
        let first = it.next().unwrap_or(false);
        it.all(|t| t == first).then_some(first)
    }

    /// Product of two monomials as `(negative, monomial)`, or `None` when an
    /// odd generator would be squared.
    pub fn mul_mono(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let mut negative = false;
        let mut odd_in_a_above = 0u32;
        let mut out = vec![0u16; self.gens.len()];
        for j in (0..self.gens.len()).rev() {
            let (ea, eb) = (a.0[j], b.0[j]);
            if self.gens[j].odd {
                if ea > 0 && eb > 0 {
                    return None;
                }
                if eb > 0 && odd_in_a_above % 2 == 1 {
                    negative = !negative;
                }
                if ea > 0 {
                    odd_in_a_above += 1;
                }
            }
            out[j] = ea + eb;
        }
        Some((negative, Monomial(out)))
    }

    pub fn multiply(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, CdgaError> {
        if a.nvars != self.nvars() || b.nvars != self.nvars() {
            return Err(CdgaError::MixedPresentations);
        }
        Ok(self.mul(a, b))
    }

    /// Infallible product for callers that already own both operands.
    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        debug_assert!(a.nvars == self.nvars() && b.nvars == self.nvars());
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((neg, m)) = self.mul_mono(ma, mb) {
                    let c = ca * cb;
                    let e = acc.entry(m).or_insert_with(Rational::zero);
                    if neg {
                        *e -= c;
                    } else {
                        *e += c;
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Polynomial {
            nvars: self.nvars(),
            terms: acc,
        }
    }

    pub fn pow(&self, a: &Polynomial, e: u32) -> Polynomial {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    /// Applies a derivation: on a monomial `u · x^e · v` the generator
    /// `x` contributes `(−1)^{|D||u|} u · (e x^{e−1} D(x)) · v`.
    pub fn apply(&self, der: &Derivation, p: &Polynomial) -> Polynomial {
        let n = self.nvars();
        let mut out = self.zero();
        for (m, c) in p.terms() {
            for (k, e) in m.factors() {
                let image = &der.images[k];
                if image.is_zero() {
                    continue;
                }
                let mut prefix = Monomial::one(n);
                prefix.0[..k].copy_from_slice(&m.0[..k]);
                let mut suffix = Monomial::one(n);
                suffix.0[k + 1..].copy_from_slice(&m.0[k + 1..]);
                let mut rest = Monomial::one(n);
                rest.0[k] = e - 1;
                let negative = der.odd && self.mono_odd(&prefix);
                let mut coeff = c * rat(e as i64);
                if negative {
                    coeff = -coeff;
                }
                let middle = self.mul(&Polynomial::term(rest, Rational::one()), image);
                let left = self.mul(&Polynomial::term(prefix, coeff), &middle);
                out.add_assign(&self.mul(&left, &Polynomial::term(suffix, Rational::one())));
            }
        }
        out
    }

    /// All monomials of internal weight exactly `w`, in monomial order.
    pub fn monomials_of_weight(&self, w: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; self.nvars()];
        self.enumerate(0, w, &mut cur, &mut |m| {
            out.push(Monomial(m.to_vec()));
        }, &|g, rem| if g.weight == 0 { 0 } else { rem / g.weight });
        out.sort();
        out
    }

    /// All monomials with at most `n` factors, in monomial order.
    pub fn monomials_of_length_at_most(&self, n: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; self.nvars()];
        self.enumerate_len(0, n, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(
        &self,
        k: usize,
        rem: u32,
        cur: &mut Vec<u16>,
        emit: &mut dyn FnMut(&[u16]),
        bound: &dyn Fn(&Generator, u32) -> u32,
    ) {
        if k == self.nvars() {
            if rem == 0 {
                emit(cur);
            }
            return;
        }
        let g = &self.gens[k];
        let mut max = bound(g, rem);
        if g.odd {
            max = max.min(1);
        }
        for e in 0..=max {
            cur[k] = e as u16;
            self.enumerate(k + 1, rem - e * g.weight, cur, emit, bound);
        }
        cur[k] = 0;
    }

    fn enumerate_len(&self, k: usize, rem: usize, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if k == self.nvars() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let max = if self.gens[k].odd { rem.min(1) } else { rem };
        for e in 0..=max {
            cur[k] = e as u16;
            self.enumerate_len(k + 1, rem - e, cur, out);
        }
        cur[k] = 0;
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .factors()
            .into_iter()
            .map(|(k, e)| {
                if e == 1 {
                    self.gens[k].name.clone()
                } else {
                    format!("{}^{}", self.gens[k].name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in p.terms().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&self.format_monomial(m));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ratio;

    fn alg(decls: &[(&str, i64, bool)]) -> FreeAlgebra {
        FreeAlgebra::new(
            decls.iter()
                .map(|(n, d, odd)| Generator {
                    name: n.to_string(),
                    degree: *d,
                    weight: 1,
                    odd: *odd,
                    form: 0,
                })
                .collect(),
        )
    }

    #[test]
    fn odd_square_vanishes() {
        let a = alg(&[("t", -1, true)]);
        let t = a.var(0);
        assert!(a.mul(&t, &t).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = alg(&[("t1", -1, true), ("t2", -1, true)]);
        let (t1, t2) = (a.var(0), a.var(1));
        let s = a.mul(&t1, &t2).add(&a.mul(&t2, &t1));
        assert!(s.is_zero());
        assert!(!a.mul(&t1, &t2).is_zero());
    }

    #[test]
    fn square_of_even_plus_odd_pair() {
        let a = alg(&[("x", 0, false), ("t1", -1, true), ("t2", -1, true)]);
        let (x, t1, t2) = (a.var(0), a.var(1), a.var(2));
        let t12 = a.mul(&t1, &t2);
        let s = x.add(&t12);
        let sq = a.mul(&s, &s);
        // (x + θ₁θ₂)² = x² + xθ₁θ₂ + θ₁θ₂x + (θ₁θ₂)², with θ₁θ₂ even and squaring to zero.
        let expected = a.mul(&x, &x).add(&a.mul(&x, &t12).scale(&rat(2)));
        assert_eq!(sq, expected);
    }

    #[test]
    fn weight_enumeration_counts() {
        let a = alg(&[("x", 0, false), ("y", 0, false)]);
        assert_eq!(a.monomials_of_weight(3).len(), 4);
        let b = alg(&[("x", 0, false), ("t", -1, true)]);
        assert_eq!(b.monomials_of_weight(3).len(), 2);
    }

    #[test]
    fn formatting() {
        let a = alg(&[("x", 0, false), ("y", 0, false)]);
        let p = a.var(0).scale(&ratio(-3, 2)).add(&a.one());
        assert_eq!(a.format(&p), "1 - 3/2*x");
    }
}
