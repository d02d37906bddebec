use std::collections::BTreeMap;
use std::fmt;

use super::{Arena, ArenaRef, Polynomial};
use crate::error::{Error, Result};

/// One coordinate of a curve ansatz: `shift + coeff * u^weight`.
/// With `weight == 0` the coordinate is the constant `shift` and `coeff`
/// is ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCoordinate {
    pub shift: Polynomial,
    pub coeff: Polynomial,
    pub weight: i64,
}

/// Parametrised curve `u -> x(u)` with symbolic coefficients living in
/// `symbols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveAnsatz {
    symbols: ArenaRef,
    coords: Vec<CurveCoordinate>,
}

impl CurveAnsatz {
    pub fn new(symbols: ArenaRef, coords: Vec<CurveCoordinate>) -> Result<Self> {
        for c in &coords {
            if *c.shift.arena() != symbols || *c.coeff.arena() != symbols {
                return Err(Error::ArenaMismatch("ansatz coefficient outside the symbol arena".into()));
            }
        }
        Ok(CurveAnsatz { symbols, coords })
    }

    /// Generic ansatz for a weight vector: `c_j u^{w_j}` for `w_j > 0`,
    /// `b_j + c_j u^{w_j}` for `w_j < 0`, and `b_j` for `w_j = 0`. Only the
    /// symbols that are used are created, in the order `b.., c..`.
    pub fn from_weights(weights: &[i64]) -> Self {
        let mut names = Vec::new();
        for (j, &w) in weights.iter().enumerate() {
            if w <= 0 {
                names.push(format!("b{}", j + 1));
            }
        }
        for (j, &w) in weights.iter().enumerate() {
            if w != 0 {
                names.push(format!("c{}", j + 1));
            }
        }
        let symbols = Arena::new(names).expect("generated names are valid");
        let coords = weights
            .iter()
            .enumerate()
            .map(|(j, &w)| {
                let shift = if w <= 0 {
                    Polynomial::named(&symbols, &format!("b{}", j + 1))
                } else {
                    Polynomial::zero(&symbols)
                };
                let coeff = if w != 0 {
                    Polynomial::named(&symbols, &format!("c{}", j + 1))
                } else {
                    Polynomial::zero(&symbols)
                };
                CurveCoordinate { shift, coeff, weight: w }
            })
            .collect();
        CurveAnsatz { symbols, coords }
    }

    pub fn symbols(&self) -> &ArenaRef {
        &self.symbols
    }

    pub fn coords(&self) -> &[CurveCoordinate] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.coords.iter().map(|c| c.weight).collect()
    }

    fn coordinate_expansion(&self, j: usize) -> LaurentExpansion {
        let c = &self.coords[j];
        let mut e = LaurentExpansion::zero(&self.symbols);
        if c.weight == 0 {
            e.add_term(0, c.shift.clone());
        } else {
            e.add_term(0, c.shift.clone());
            e.add_term(c.weight, c.coeff.clone());
        }
        e
    }
}

/// Finite Laurent polynomial in `u` with coefficients in `Q[symbols]`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentExpansion {
    symbols: ArenaRef,
    terms: BTreeMap<i64, Polynomial>,
}

impl LaurentExpansion {
    pub fn zero(symbols: &ArenaRef) -> Self {
        LaurentExpansion {
            symbols: symbols.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: Polynomial) -> Self {
        let mut e = Self::zero(p.arena());
        e.add_term(0, p);
        e
    }

    pub fn symbols(&self) -> &ArenaRef {
        &self.symbols
    }

    pub fn add_term(&mut self, k: i64, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let next = match self.terms.remove(&k) {
            Some(q) => &q + &p,
            None => p,
        };
        if !next.is_zero() {
            self.terms.insert(k, next);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `u^k`.
    pub fn coeff(&self, k: i64) -> Polynomial {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.symbols))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Polynomial)> {
        self.terms.iter().map(|(k, p)| (*k, p))
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Coefficients of strictly positive powers, highest first.
    pub fn positive_part(&self) -> Vec<(i64, Polynomial)> {
        self.terms
            .iter()
            .rev()
            .filter(|(k, _)| **k > 0)
            .map(|(k, p)| (*k, p.clone()))
            .collect()
    }

    pub fn checked_add(&self, other: &LaurentExpansion) -> LaurentExpansion {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(*k, p.clone());
        }
        out
    }

    pub fn checked_mul(&self, other: &LaurentExpansion) -> Result<LaurentExpansion> {
        let mut out = LaurentExpansion::zero(&self.symbols);
        for (k1, p1) in &self.terms {
            for (k2, p2) in &other.terms {
                let k = k1.checked_add(*k2).ok_or(Error::ExponentOverflow)?;
                out.add_term(k, p1 * p2);
            }
        }
        Ok(out)
    }

    /// Multiply by a polynomial in the symbols.
    pub fn mul_poly(&self, c: &Polynomial) -> LaurentExpansion {
        let mut out = LaurentExpansion::zero(&self.symbols);
        for (k, p) in &self.terms {
            out.add_term(*k, p * c);
        }
        out
    }
}

impl fmt::Debug for LaurentExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, p)| format!("({p})*u^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Substitute the curve into `p`, producing a Laurent polynomial in `u`.
pub fn substitute_curve(p: &Polynomial, ansatz: &CurveAnsatz) -> Result<LaurentExpansion> {
    if ansatz.len() != p.nvars() {
        return Err(Error::ArenaMismatch(format!(
            "ansatz has {} coordinates, polynomial arena has {}",
            ansatz.len(),
            p.nvars()
        )));
    }
    let symbols = ansatz.symbols();
    let mut powers: Vec<Vec<LaurentExpansion>> = (0..ansatz.len())
        .map(|j| {
            vec![
                LaurentExpansion::constant(Polynomial::one(symbols)),
                ansatz.coordinate_expansion(j),
            ]
        })
        .collect();
    let mut out = LaurentExpansion::zero(symbols);
    for (m, c) in p.terms() {
        let mut t = LaurentExpansion::constant(Polynomial::constant(symbols, c.clone()));
        for (j, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[j].len() <= e as usize {
                let next = powers[j].last().unwrap().checked_mul(&powers[j][1])?;
                powers[j].push(next);
            }
            t = t.checked_mul(&powers[j][e as usize])?;
        }
        out = out.checked_add(&t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn x12() -> Polynomial {
        let x = Arena::numbered("x", 2);
        &Polynomial::var(&x, 0) * &Polynomial::var(&x, 1)
    }

    #[test]
    fn monomial_weights_add() {
        let a = CurveAnsatz::from_weights(&[1, -1]);
        // generic ansatz has the shift b2; drop it to get (c1 u, c2 u^-1)
        let s = a.symbols().clone();
        let mut coords = a.coords().to_vec();
        coords[1].shift = Polynomial::zero(&s);
        let a = CurveAnsatz::new(s.clone(), coords).unwrap();
        let e = substitute_curve(&x12(), &a).unwrap();
        assert_eq!(e.max_exponent(), Some(0));
        assert_eq!(e.coeff(0).to_string(), "c1*c2");
    }

    #[test]
    fn shifted_coordinate_distributes() {
        let a = CurveAnsatz::from_weights(&[1, -1]);
        let e = substitute_curve(&x12(), &a).unwrap();
        assert_eq!(e.coeff(1).to_string(), "b2*c1");
        assert_eq!(e.coeff(0).to_string(), "c1*c2");
        assert_eq!(e.terms().count(), 2);
    }

    #[test]
    fn constants_stay_constant() {
        let x = Arena::numbered("x", 2);
        let a = CurveAnsatz::from_weights(&[2, -3]);
        let e = substitute_curve(&Polynomial::constant(&x, int(5)), &a).unwrap();
        assert_eq!(e.coeff(0).as_constant(), Some(int(5)));
        assert_eq!(e.terms().count(), 1);
    }

    #[test]
    fn overflow_is_reported() {
        let x = Arena::numbered("x", 1);
        let a = CurveAnsatz::from_weights(&[i64::MAX / 2 + 1]);
        let p = Polynomial::var(&x, 0).pow(2);
        assert_eq!(substitute_curve(&p, &a), Err(Error::ExponentOverflow));
    }
}
