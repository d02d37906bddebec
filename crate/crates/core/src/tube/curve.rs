use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::LaurentExpansion;

/// Complex Laurent polynomial curve `u -> Γ(u)` in the target space.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageCurve {
    /// Per coordinate: `(exponent, coefficient)`, exponents ascending.
    coords: Vec<Vec<(i64, Complex64)>>,
}

impl ImageCurve {
    pub fn new(coords: Vec<Vec<(i64, Complex64)>>) -> Result<ImageCurve> {
        let mut coords = coords;
        for c in coords.iter_mut() {
            c.retain(|(_, z)| *z != Complex64::new(0.0, 0.0));
            c.sort_by_key(|(k, _)| *k);
            if c.iter().any(|(_, z)| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(ImageCurve { coords })
    }

    /// Evaluate symbolic coefficients at a parameter value.
    pub fn from_expansions(exps: &[LaurentExpansion], values: &[Complex64]) -> Result<ImageCurve> {
        let coords = exps
            .iter()
            .map(|e| {
                e.terms()
                    .map(|(k, p)| Ok((k, p.evaluate_slice(values)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ImageCurve::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coords.iter().filter_map(|c| c.last().map(|t| t.0)).max()
    }

    pub fn at(&self, u: f64) -> Vec<Complex64> {
        self.coords
            .iter()
            .map(|c| c.iter().map(|&(k, z)| z * u.powi(k as i32)).sum())
            .collect()
    }

    pub fn derivative(&self, u: f64) -> Vec<Complex64> {
        self.coords
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|(k, _)| *k != 0)
                    .map(|&(k, z)| z * (k as f64) * u.powi(k as i32 - 1))
                    .sum()
            })
            .collect()
    }

    pub fn speed(&self, u: f64) -> f64 {
        self.derivative(u).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Value at `u = ∞`; fails when a coordinate diverges.
    pub fn limit(&self) -> Result<Vec<Complex64>> {
        if self.max_exponent().is_some_and(|k| k > 0) {
            return Err(Error::Divergent("image curve has positive powers of u".into()));
        }
        Ok(self
            .coords
            .iter()
            .map(|c| c.iter().filter(|(k, _)| *k == 0).map(|t| t.1).sum())
            .collect())
    }

    /// Arc length of `Γ([u0, ∞))` to relative tolerance `rel_tol`.
    pub fn arc_length(&self, u0: f64, rel_tol: f64) -> Result<f64> {
        if u0.is_infinite() {
            return Ok(0.0);
        }
        if !(u0 > 0.0) {
            return Err(Error::Precondition(format!("arc length from u = {u0}")));
        }
        if self.max_exponent().is_some_and(|k| k > 0) {
            return Err(Error::Divergent("arc length of a diverging curve".into()));
        }
        // u = 1/(1-s) maps [u0, ∞) to [1 - 1/u0, 1).
        let s0 = 1.0 - 1.0 / u0;
        let f = |s: f64| {
            let r = 1.0 - s;
            if r <= 0.0 {
                return 0.0;
            }
            self.speed(1.0 / r) / (r * r)
        };
        let rough = quadrature::double_exponential::integrate(f, s0, 1.0, 1e-6).integral;
        let target = (rel_tol * rough.abs()).max(1e-300);
        let out = quadrature::double_exponential::integrate(f, s0, 1.0, target);
        if !out.integral.is_finite() {
            return Err(Error::Divergent("arc length quadrature did not converge".into()));
        }
        Ok(out.integral)
    }
}

/// Pointwise convex combination of curves sharing their limit point.
pub fn blend_curves(curves: &[ImageCurve], weights: &[f64]) -> Result<ImageCurve> {
    if curves.is_empty() || curves.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: curves.len(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition("blend weights must lie on the simplex".into()));
    }
    let first = curves[0].limit()?;
    let scale = 1.0 + first.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for c in &curves[1..] {
        let l = c.limit()?;
        if l.len() != first.len() {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                got: l.len(),
            });
        }
        if l.iter().zip(&first).any(|(a, b)| (a - b).norm() > 1e-9 * scale) {
            return Err(Error::MismatchedLimits);
        }
    }
    let mut coords = Vec::with_capacity(first.len());
    for j in 0..first.len() {
        let mut terms: std::collections::BTreeMap<i64, Complex64> = std::collections::BTreeMap::new();
        for (c, &w) in curves.iter().zip(weights) {
            for &(k, z) in &c.coords[j] {
                *terms.entry(k).or_default() += z * w;
            }
        }
        coords.push(terms.into_iter().collect());
    }
    ImageCurve::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn arc_length_of_a_segment() {
        // Γ(u) = (1/u, 0): length from u0 is 1/u0.
        let g = ImageCurve::new(vec![vec![(-1, c(1.0))], vec![]]).unwrap();
        for u0 in [1.0, 2.0, 8.0] {
            assert!((g.arc_length(u0, 1e-10).unwrap() - 1.0 / u0).abs() < 1e-10);
        }
        assert_eq!(g.arc_length(f64::INFINITY, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn diverging_curves_are_rejected() {
        let g = ImageCurve::new(vec![vec![(1, c(1.0))]]).unwrap();
        assert!(g.limit().is_err());
        assert!(g.arc_length(1.0, 1e-8).is_err());
    }

    #[test]
    fn blending_keeps_the_limit() {
        let a = ImageCurve::new(vec![vec![(0, c(2.0)), (-1, c(1.0))]]).unwrap();
        let b = ImageCurve::new(vec![vec![(0, c(2.0)), (-2, c(3.0))]]).unwrap();
        let m = blend_curves(&[a.clone(), b.clone()], &[0.5, 0.5]).unwrap();
        assert_eq!(m.limit().unwrap(), vec![c(2.0)]);
        assert_eq!(blend_curves(&[a.clone(), b], &[1.0, 0.0]).unwrap().at(3.0), a.at(3.0));
        let off = ImageCurve::new(vec![vec![(0, c(1.0))]]).unwrap();
        assert!(blend_curves(&[a, off], &[0.5, 0.5]).is_err());
    }
}
