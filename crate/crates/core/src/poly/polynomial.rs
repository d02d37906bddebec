use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arena::ArenaRef;
use super::monomial::Monomial;
use super::{ComplexPoint, Rational};
use crate::error::{Error, Result};

/// Sparse polynomial over Q. Terms are stored in a `BTreeMap` keyed by the
/// exponent vector, so two polynomials over the same arena compare
/// structurally. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arena: ArenaRef,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(arena: &ArenaRef) -> Self {
        Polynomial {
            arena: arena.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arena: &ArenaRef) -> Self {
        Self::constant(arena, Rational::one())
    }

    pub fn constant(arena: &ArenaRef, c: Rational) -> Self {
        let mut p = Self::zero(arena);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(arena.len()), c);
        }
        p
    }

    pub fn from_int(arena: &ArenaRef, c: i64) -> Self {
        Self::constant(arena, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(arena: &ArenaRef, i: usize) -> Self {
        Self::monomial(arena, Monomial::var(arena.len(), i, 1), Rational::one())
    }

    /// Variable by name; panics if absent (use for literals in code and tests).
    pub fn named(arena: &ArenaRef, name: &str) -> Self {
        let i = arena
            .index_of(name)
            .unwrap_or_else(|| panic!("variable {name} not in arena {arena}"));
        Self::var(arena, i)
    }

    pub fn monomial(arena: &ArenaRef, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.len(), arena.len());
        let mut p = Self::zero(arena);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(arena: &ArenaRef, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(arena);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn arena(&self) -> &ArenaRef {
        &self.arena
    }

    pub fn nvars(&self) -> usize {
        self.arena.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_arena(&self, other: &Polynomial) {
        assert!(
            self.arena == other.arena,
            "polynomial arenas differ: {} vs {}",
            self.arena,
            other.arena
        );
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.arena);
        }
        Polynomial {
            arena: self.arena.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.arena);
        }
        Polynomial {
            arena: self.arena.clone(),
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.arena);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.deg(i)).max()
    }

    /// Coefficient of `x_i^k`, as a polynomial in the same arena not involving `x_i`.
    pub fn coeff_in(&self, i: usize, k: u32) -> Polynomial {
        Polynomial {
            arena: self.arena.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg(i) == k)
                .map(|(m, c)| (m.with_exponent(i, 0), c.clone()))
                .collect(),
        }
    }

    pub fn leading_coeff_in(&self, i: usize) -> Polynomial {
        match self.degree_in(i) {
            Some(d) => self.coeff_in(i, d),
            None => Polynomial::zero(&self.arena),
        }
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.arena);
        for (m, c) in &self.terms {
            let e = m.deg(i);
            if e > 0 {
                out.add_term(m.with_exponent(i, e - 1), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Indices of variables that actually occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.deg(i) > 0))
            .collect()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.deg(i) > 0)
    }

    /// Largest term under the canonical lex order.
    pub fn lex_leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Integer-coefficient primitive associate with positive lex-leading
    /// coefficient. Zero maps to zero.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm_den = BigInt::one();
        for c in self.terms.values() {
            lcm_den = lcm_den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&lcm_den / c.denom());
            g = g.gcd(&n);
        }
        let mut factor = Rational::new(lcm_den, g);
        if self.lex_leading().unwrap().1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Monic associate under lex.
    pub fn monic_lex(&self) -> Polynomial {
        match self.lex_leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn evaluate(&self, point: &ComplexPoint) -> Result<Complex64> {
        self.evaluate_slice(point.coords())
    }

    pub fn evaluate_slice(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(1.0, 0.0);
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            acc += t * c.to_f64().unwrap_or(f64::NAN);
        }
        Ok(acc)
    }

    pub fn evaluate_rational(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replace variable `i` by the rational value `v` (the slot stays in the arena).
    pub fn substitute_value(&self, i: usize, v: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.arena);
        for (m, c) in &self.terms {
            let e = m.deg(i);
            let f = if e == 0 {
                c.clone()
            } else {
                c * num_traits::pow(v.clone(), e as usize)
            };
            out.add_term(m.with_exponent(i, 0), f);
        }
        out
    }

    /// Ring homomorphism `x_i -> images[i]`; all images share one target arena.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.arena.clone(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| p.arena != target) {
            return Err(Error::ArenaMismatch("composition images over different arenas".into()));
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-index into a larger arena through `map[i] = target index of variable i`.
    pub fn embed(&self, target: &ArenaRef, map: &[usize]) -> Polynomial {
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &k) in m.exponents().iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        out
    }

    /// Embed by matching variable names.
    pub fn embed_by_name(&self, target: &ArenaRef) -> Result<Polynomial> {
        let map = self.arena.embedding_into(target)?;
        Ok(self.embed(target, &map))
    }

    /// Restrict to a smaller arena; fails if a dropped variable occurs.
    pub fn restrict_to(&self, target: &ArenaRef) -> Result<Polynomial> {
        let mut out = Polynomial::zero(target);
        let mut idx = Vec::with_capacity(target.len());
        for n in target.names() {
            idx.push(self.arena.index_of(n));
        }
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            let mut used = 0u32;
            for (k, slot) in idx.iter().enumerate() {
                if let Some(i) = slot {
                    e[k] = m.deg(*i);
                    used += m.deg(*i);
                }
            }
            if used != m.degree() {
                return Err(Error::ArenaMismatch(format!(
                    "term {} uses variables outside {}",
                    Polynomial::monomial(&self.arena, m.clone(), c.clone()),
                    target
                )));
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_arena(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_arena(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_arena(rhs);
        let mut out = Polynomial::zero(&self.arena);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -(&self)
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Parseable text: `3*x1^2*x2 - 1/2*x3 + 4`, terms in descending lex order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.arena.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.arena.name(i), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({} over {})", self, self.arena)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Arena};

    #[test]
    fn arithmetic_and_display() {
        let a = Arena::numbered("x", 2);
        let x1 = Polynomial::var(&a, 0);
        let x2 = Polynomial::var(&a, 1);
        let p = &(&x1 * &x2) - &Polynomial::constant(&a, rat(1, 2));
        assert_eq!(p.to_string(), "x1*x2 - 1/2");
        assert!((&p - &p).is_zero());
        assert_eq!((&x1 + &x2).pow(2).num_terms(), 3);
    }

    #[test]
    fn evaluates_worked_examples() {
        let a = Arena::numbered("x", 2);
        let x1 = Polynomial::var(&a, 0);
        let x2 = Polynomial::var(&a, 1);
        let prod = &x1 * &x2;
        let pt = ComplexPoint::real(&[2.0, 3.0]).unwrap();
        assert_eq!(prod.evaluate(&pt).unwrap(), Complex64::new(6.0, 0.0));
        // (x1 x2)^3 + x1 at (1, 2) = 8 + 1
        let p = &prod.pow(3) + &x1;
        let pt = ComplexPoint::real(&[1.0, 2.0]).unwrap();
        assert_eq!(p.evaluate(&pt).unwrap(), Complex64::new(9.0, 0.0));
        assert!(p.evaluate(&ComplexPoint::real(&[1.0]).unwrap()).is_err());
    }

    #[test]
    fn cusp_point_evaluates_to_zero() {
        let a = Arena::numbered("a", 2);
        let p = &Polynomial::var(&a, 1).pow(2) - &Polynomial::var(&a, 0).pow(3);
        let v = p.evaluate(&ComplexPoint::real(&[1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn primitive_normalises_sign_and_content() {
        let a = Arena::numbered("x", 2);
        let p = &Polynomial::var(&a, 0).scale(&rat(-2, 3)) + &Polynomial::constant(&a, rat(4, 9));
        assert_eq!(p.primitive().to_string(), "3*x1 - 2");
    }

    #[test]
    fn compose_and_restrict() {
        let a = Arena::numbered("x", 2);
        let t = Arena::new(["t"]).unwrap();
        let tt = Polynomial::var(&t, 0);
        let p = &Polynomial::var(&a, 1) - &Polynomial::var(&a, 0).pow(2);
        let q = p.compose(&[tt.clone(), tt.pow(2)]).unwrap();
        assert!(q.is_zero());
        let big = a.extended(&["y"]).unwrap();
        let pe = p.embed_by_name(&big).unwrap();
        assert_eq!(pe.restrict_to(&a).unwrap(), p);
    }
}
