//! Multivariate gcd over Q by recursive primitive remainder sequences.

use num_traits::One;

use super::{Monomial, Polynomial};

/// Exact quotient `a / b`, or `None` if `b` does not divide `a`.
pub fn divide_exact(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    assert!(!b.is_zero(), "division by zero polynomial");
    let (lb, cb) = {
        let (m, c) = b.lex_leading().unwrap();
        (m.clone(), c.clone())
    };
    let mut r = a.clone();
    let mut q = Polynomial::zero(a.arena());
    while let Some((lr, cr)) = r.lex_leading() {
        if !lb.divides(lr) {
            return None;
        }
        let m = lb.quotient_of(lr);
        let c = cr / &cb;
        r = &r - &b.mul_monomial(&m, &c);
        q.add_term(m, c);
    }
    Some(q)
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x_v`.
pub fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut g = Polynomial::zero(p.arena());
    for k in 0..=p.degree_in(v).unwrap_or(0) {
        let c = p.coeff_in(v, k);
        if !c.is_zero() {
            g = gcd(&g, &c);
            if g.is_constant() {
                break;
            }
        }
    }
    g
}

fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = b.degree_in(v).unwrap_or(0);
    let lb = b.leading_coeff_in(v);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v).unwrap();
        if dr < db {
            break;
        }
        let lr = r.leading_coeff_in(v);
        let shift = Monomial::var(a.nvars(), v, dr - db);
        let t = (&lr * b).mul_monomial(&shift, &One::one());
        r = &(&lb * &r) - &t;
    }
    r
}

/// Greatest common divisor, normalised to a primitive integer polynomial
/// with positive lex-leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.arena());
    }
    let v = match (0..a.nvars()).find(|&i| a.involves(i) || b.involves(i)) {
        Some(v) => v,
        None => return Polynomial::one(a.arena()),
    };
    if !a.involves(v) {
        return gcd(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let gc = gcd(&ca, &cb);
    let mut p = divide_exact(a, &ca).expect("content divides");
    let mut q = divide_exact(b, &cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_remainder(&p, &q, v);
        p = q;
        q = if r.is_zero() {
            r
        } else {
            let c = content_in(&r, v);
            divide_exact(&r, &c).expect("content divides")
        };
    }
    let g = if p.involves(v) {
        let c = content_in(&p, v);
        divide_exact(&p, &c).expect("content divides")
    } else {
        Polynomial::one(a.arena())
    };
    (&gc * &g).primitive()
}

/// Product of the distinct irreducible factors of `p`, primitive.
pub fn squarefree_part(p: &Polynomial) -> Polynomial {
    if p.is_zero() || p.is_constant() {
        return p.primitive();
    }
    let mut g = p.clone();
    for i in p.variables() {
        g = gcd(&g, &p.derivative(i));
        if g.is_constant() {
            break;
        }
    }
    divide_exact(p, &g).expect("gcd divides").primitive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Arena;

    #[test]
    fn gcd_of_products() {
        let a = Arena::numbered("x", 3);
        let v = |i| Polynomial::var(&a, i);
        let f = &(&v(0) * &v(1)) - &Polynomial::one(&a);
        let g = &v(2) + &v(0).pow(2);
        let h = &v(1) + &v(2);
        let p = &(&f * &g) * &f;
        let q = &(&f * &h) * &v(0);
        assert_eq!(gcd(&p, &q), f.primitive());
        assert_eq!(squarefree_part(&p), (&f * &g).primitive());
    }

    #[test]
    fn exact_division_detects_remainder() {
        let a = Arena::numbered("x", 2);
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&a, 1);
        let p = &x.pow(2) - &y.pow(2);
        assert_eq!(divide_exact(&p, &(&x - &y)).unwrap(), &x + &y);
        assert!(divide_exact(&p, &(&x - &Polynomial::one(&a))).is_none());
    }
}
