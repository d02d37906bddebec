use std::fmt;

use num_complex::Complex64;

use super::{Arena, ArenaRef, ComplexPoint, Polynomial, Rational};
use crate::error::{Error, Result};

/// Square polynomial map C^n -> C^n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolynomialMap {
    source: ArenaRef,
    target: ArenaRef,
    components: Vec<Polynomial>,
}

impl PolynomialMap {
    pub fn new(source: ArenaRef, target: ArenaRef, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                got: components.len(),
            });
        }
        if target.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                got: target.len(),
            });
        }
        if components.iter().any(|p| *p.arena() != source) {
            return Err(Error::ArenaMismatch("map component not over the source arena".into()));
        }
        if target.names().iter().any(|n| source.index_of(n).is_some()) {
            return Err(Error::ArenaMismatch("source and target arenas share a name".into()));
        }
        Ok(PolynomialMap {
            source,
            target,
            components,
        })
    }

    /// Map with default target names `a1..an`.
    pub fn with_default_targets(source: ArenaRef, components: Vec<Polynomial>) -> Result<Self> {
        let target = Arena::numbered("a", source.len());
        Self::new(source, target, components)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn source(&self) -> &ArenaRef {
        &self.source
    }

    pub fn target(&self) -> &ArenaRef {
        &self.target
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn evaluate(&self, x: &ComplexPoint) -> Result<Vec<Complex64>> {
        self.components.iter().map(|p| p.evaluate(x)).collect()
    }

    pub fn evaluate_rational(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|p| p.evaluate_rational(x)).collect()
    }

    /// `[dF_i/dx_j]`
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.components
            .iter()
            .map(|f| (0..self.n()).map(|j| f.derivative(j)).collect())
            .collect()
    }

    pub fn jacobian_determinant(&self) -> Polynomial {
        let jac = self.jacobian();
        let cols: Vec<usize> = (0..self.n()).collect();
        let mut memo = std::collections::HashMap::new();
        det_cofactor(&jac, 0, &cols, &self.source, &mut memo)
    }

    pub fn is_dominant(&self) -> bool {
        !self.jacobian_determinant().is_zero()
    }

    /// Precompose with another map on the same source: `F(G(x))`.
    pub fn compose(&self, inner: &PolynomialMap) -> Result<PolynomialMap> {
        let comps = self
            .components
            .iter()
            .map(|f| f.compose(inner.components()))
            .collect::<Result<Vec<_>>>()?;
        PolynomialMap::new(inner.source.clone(), self.target.clone(), comps)
    }
}

/// Laplace expansion along `row`, memoised on the remaining column set.
/// Zero entries are skipped, which keeps sparse Jacobians cheap.
fn det_cofactor(
    m: &[Vec<Polynomial>],
    row: usize,
    cols: &[usize],
    arena: &ArenaRef,
    memo: &mut std::collections::HashMap<Vec<usize>, Polynomial>,
) -> Polynomial {
    if cols.is_empty() {
        return Polynomial::one(arena);
    }
    if let Some(p) = memo.get(cols) {
        return p.clone();
    }
    let mut acc = Polynomial::zero(arena);
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_cofactor(m, row + 1, &rest, arena, memo);
        if minor.is_zero() {
            continue;
        }
        let term = entry * &minor;
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    memo.insert(cols.to_vec(), acc.clone());
    acc
}

impl fmt::Display for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.source.names().join(" "))?;
        writeln!(f, "targets: {}", self.target.names().join(" "))?;
        writeln!(f, "map:")?;
        for p in &self.components {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_1_1() -> PolynomialMap {
        let x = Arena::numbered("x", 3);
        let v = |i| Polynomial::var(&x, i);
        PolynomialMap::with_default_targets(x.clone(), vec![&v(0) * &v(1), &v(1) * &v(2), &(&v(0) * &v(1)) * &v(2)])
            .unwrap()
    }

    #[test]
    fn identity_has_unit_jacobian() {
        let x = Arena::numbered("x", 3);
        let f = PolynomialMap::with_default_targets(x.clone(), (0..3).map(|i| Polynomial::var(&x, i)).collect()).unwrap();
        assert_eq!(f.jacobian_determinant(), Polynomial::one(&x));
    }

    #[test]
    fn jacobian_of_three_monomial_map() {
        let f = example_1_1();
        assert_eq!(f.jacobian_determinant().to_string(), "x1*x2^2*x3");
    }

    #[test]
    fn dependent_rows_vanish() {
        let x = Arena::numbered("x", 2);
        let f = PolynomialMap::with_default_targets(x.clone(), vec![Polynomial::var(&x, 0), Polynomial::var(&x, 0)]).unwrap();
        assert!(f.jacobian_determinant().is_zero());
        assert!(!f.is_dominant());
    }
}
