use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rational;

/// Roots of `Σ coeffs[k] z^k`, with multiplicity. Leading zeros are ignored.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().unwrap().norm() <= 1e-14 * scale {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    if c.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Vec::new();
    }
    let lead = c[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::one();
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    let eig = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect::<Vec<_>>())
        .unwrap_or_else(|| durand_kerner(&c));
    eig.into_iter().map(|z| polish(&c, z)).collect()
}

/// Distinct roots of `Σ coeffs[k] z^k`. Clusters of nearly equal roots are
/// taken as one multiple root and refined on the matching derivative, where
/// the root is simple.
pub fn distinct_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let roots = complex_roots(coeffs);
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        match clusters
            .iter_mut()
            .find(|cl| (cl[0] - r).norm() <= 1e-5 * cl[0].norm().max(r.norm()))
        {
            Some(cl) => cl.push(r),
            None => clusters.push(vec![r]),
        }
    }
    clusters
        .into_iter()
        .map(|cl| {
            if cl.len() == 1 {
                return cl[0];
            }
            let center = cl.iter().sum::<Complex64>() / cl.len() as f64;
            let mut d: Vec<Complex64> = coeffs.to_vec();
            for _ in 1..cl.len() {
                d = (1..d.len()).map(|k| d[k] * k as f64).collect();
            }
            polish(&d, center)
        })
        .collect()
}

/// Simultaneous iteration, used when the QR iteration stalls (typically on
/// root sets symmetric under `z -> -z`).
fn durand_kerner(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let monic: Vec<Complex64> = c.iter().map(|z| z / c[deg]).collect();
    let radius = 1.0 + monic[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::one();
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = horner(&monic, z[i]).0 / denom;
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..20 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        let next = z - step;
        if !(next.re.is_finite() && next.im.is_finite()) || horner(c, next).0.norm() >= p.norm() {
            break;
        }
        z = next;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn eval_exact(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if !a.is_finite() || a.abs() > 1e15 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        out.push(Ratio::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// Distinct rational roots of a univariate polynomial with rational
/// coefficients, ascending.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut out: Vec<Rational> = Vec::new();
    if c[0].is_zero() {
        out.push(Rational::zero());
    }
    let numeric: Vec<Complex64> = c
        .iter()
        .map(|q| Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    if numeric.iter().any(|z| !z.re.is_finite()) {
        return out;
    }
    for z in complex_roots(&numeric) {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            continue;
        }
        for q in convergents(z.re, 1_000_000_000) {
            if !out.contains(&q) && eval_exact(&c, &q).is_zero() {
                out.push(q);
                break;
            }
        }
    }
    out.sort();
    out
}

/// Saturates to an infinity outside the `f64` range.
pub(crate) fn to_complex(q: &Rational) -> Complex64 {
    let re = q.to_f64().unwrap_or_else(|| if q.is_positive() { f64::INFINITY } else { f64::NEG_INFINITY });
    Complex64::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn quadratic_roots() {
        // z^2 + 2z - 3 = (z - 1)(z + 3)
        let c: Vec<Complex64> = [-3.0, 2.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut r: Vec<f64> = complex_roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 3.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_rational_roots() {
        // 6z^3 - 5z^2 - 2z + 1 = (3z - 1)(2z + 1)(z - 1)
        let c = vec![rat(1, 1), rat(-2, 1), rat(-5, 1), rat(6, 1)];
        assert_eq!(rational_roots(&c), vec![rat(-1, 2), rat(1, 3), rat(1, 1)]);
        // z^2 - 2 has none
        assert!(rational_roots(&[rat(-2, 1), rat(0, 1), rat(1, 1)]).is_empty());
        // roots ±1/2, ±5/2
        let even = vec![rat(25, 16), rat(0, 1), rat(-13, 2), rat(0, 1), rat(1, 1)];
        assert_eq!(rational_roots(&even), vec![rat(-5, 2), rat(-1, 2), rat(1, 2), rat(5, 2)]);
        // z^2 (z + 1)
        assert_eq!(rational_roots(&[rat(0, 1), rat(0, 1), rat(1, 1), rat(1, 1)]), vec![rat(-1, 1), rat(0, 1)]);
    }
}
