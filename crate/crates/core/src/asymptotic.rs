//! The non-properness set S_F of a dominant map, via the leading
//! coefficients of the coordinate eliminants.

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{divide_exact, gcd, squarefree_part, ArenaRef, Polynomial, PolynomialMap, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateEliminant {
    /// Index of the source coordinate `x_i`.
    pub coordinate: usize,
    /// Over the arena `(x_i, a_1, .., a_n)`.
    pub eliminant: Polynomial,
    /// Over the target arena.
    pub phi0: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub polynomial: Polynomial,
    /// No cheap irreducibility certificate was found.
    pub possibly_reducible: bool,
    /// Source coordinates whose `phi0` this component divides.
    pub coordinates: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticSet {
    pub target: ArenaRef,
    pub components: Vec<Component>,
    pub per_coordinate: Vec<CoordinateEliminant>,
}

impl AsymptoticSet {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.components.iter().map(|c| c.polynomial.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Exact membership of a rational point in `V(S_F)`.
    pub fn contains(&self, a: &[Rational]) -> Result<bool> {
        for c in &self.components {
            if c.polynomial.evaluate_rational(a)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub fn check_dominant(f: &PolynomialMap) -> bool {
    f.is_dominant()
}

/// Arena `(x_1..x_n, a_1..a_n)` and the graph ideal `<F_k(x) - a_k>`.
pub fn graph_ideal(f: &PolynomialMap) -> Result<Ideal> {
    let joint = f.source().concat(f.target())?;
    let n = f.n();
    let gens = f
        .components()
        .iter()
        .enumerate()
        .map(|(k, p)| Ok(&p.embed_by_name(&joint)? - &Polynomial::var(&joint, n + k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::new(&joint, gens))
}

/// Generator of `<F(x) - a> ∩ Q[x_i, a]`, over the arena `(x_i, a_1..a_n)`.
pub fn coordinate_eliminant(f: &PolynomialMap, i: usize) -> Result<Polynomial> {
    if i >= f.n() {
        return Err(Error::Precondition(format!("coordinate {i} out of range")));
    }
    let g = graph_ideal(f)?;
    let drop: Vec<usize> = (0..f.n()).filter(|&j| j != i).collect();
    let e = g.eliminate(&drop)?;
    let xi = 0; // x_i is first in the kept arena
    let best = e
        .generators()
        .iter()
        .filter(|p| p.degree_in(xi).unwrap_or(0) > 0)
        .min_by(|p, q| {
            let key = |r: &Polynomial| (r.degree_in(xi).unwrap_or(0), r.total_degree().unwrap_or(0));
            key(p).cmp(&key(q)).then_with(|| p.to_string().cmp(&q.to_string()))
        })
        .cloned()
        .ok_or_else(|| {
            Error::EmptyElimination(format!(
                "no relation between {} and the target coordinates",
                f.source().name(i)
            ))
        })?;
    Ok(squarefree_in(&best, xi))
}

/// A specialisation of the other variables that keeps the degree in `x_v`
/// and is squarefree proves `p` squarefree in `x_v`.
fn squarefree_certificate(p: &Polynomial, v: usize) -> bool {
    let d = p.degree_in(v).unwrap_or(0);
    let others: Vec<usize> = p.variables().into_iter().filter(|&j| j != v).collect();
    (0..4i64).any(|k| {
        let mut q = p.clone();
        for (n, &j) in others.iter().enumerate() {
            let val = Rational::from_integer((2 + k * 7 + 3 * n as i64 * (k + 1)).into());
            q = q.substitute_value(j, &val);
        }
        q.degree_in(v) == Some(d) && !gcd(&q, &q.derivative(v)).involves(v)
    })
}

/// Remove repeated factors involving `x_v`, keep the rest.
fn squarefree_in(p: &Polynomial, v: usize) -> Polynomial {
    if squarefree_certificate(p, v) {
        return p.primitive();
    }
    let g = gcd(p, &p.derivative(v));
    if !g.involves(v) {
        return p.primitive();
    }
    divide_exact(p, &g).expect("gcd divides").primitive()
}

/// Leading coefficient of `e` in its variable `v`, primitive. Returned over
/// the arena of `e`; callers restrict it to the target arena.
pub fn phi0(e: &Polynomial, v: usize) -> Polynomial {
    e.leading_coeff_in(v).primitive()
}

/// `m1 - c m2` with coprime monomials and primitive exponent difference,
/// or linear in some variable with coprime coefficients.
fn irreducibility_certificate(p: &Polynomial) -> bool {
    if p.total_degree() == Some(1) {
        return true;
    }
    if p.num_terms() == 2 {
        let ms: Vec<_> = p.terms().map(|(m, _)| m.clone()).collect();
        if ms[0].coprime(&ms[1]) {
            let g = ms[0]
                .exponents()
                .iter()
                .zip(ms[1].exponents())
                .fold(0i64, |g, (a, b)| g.gcd(&(*a as i64 - *b as i64)));
            if g == 1 {
                return true;
            }
        }
    }
    for v in p.variables() {
        if p.degree_in(v) == Some(1) {
            let a = p.coeff_in(v, 1);
            let b = p.coeff_in(v, 0);
            if gcd(&a, &b).is_constant() {
                return true;
            }
        }
    }
    false
}

/// Split into coprime squarefree pieces: content, monomial factors, then
/// pairwise gcd refinement.
fn coprime_base(polys: &[(Polynomial, usize)]) -> Vec<(Polynomial, Vec<usize>)> {
    let mut base: Vec<(Polynomial, Vec<usize>)> = Vec::new();
    for (p, coord) in polys {
        let mut pieces = Vec::new();
        let mut rest = p.primitive();
        for v in 0..rest.nvars() {
            let x = Polynomial::var(rest.arena(), v);
            let mut hit = false;
            while let Some(q) = divide_exact(&rest, &x) {
                rest = q;
                hit = true;
            }
            if hit {
                pieces.push(x);
            }
        }
        if !rest.is_constant() {
            pieces.push(squarefree_part(&rest));
        }
        for piece in pieces {
            insert_coprime(&mut base, piece, *coord);
        }
    }
    base
}

fn insert_coprime(base: &mut Vec<(Polynomial, Vec<usize>)>, f: Polynomial, coord: usize) {
    let mut work = vec![(f, vec![coord])];
    while let Some((f, cf)) = work.pop() {
        if f.is_constant() {
            continue;
        }
        let hit = base
            .iter()
            .enumerate()
            .find_map(|(k, (g, _))| {
                let d = gcd(&f, g);
                (!d.is_constant()).then_some((k, d))
            });
        match hit {
            None => base.push((f, cf)),
            Some((k, d)) => {
                let (g, cg) = base.remove(k);
                let mut both = cf.clone();
                both.extend(cg.iter().copied());
                both.sort_unstable();
                both.dedup();
                let g_rest = divide_exact(&g, &d).expect("gcd divides").primitive();
                let f_rest = divide_exact(&f, &d).expect("gcd divides").primitive();
                work.push((f_rest, cf));
                work.push((g_rest, cg));
                work.push((d, both));
            }
        }
    }
}

pub fn asymptotic_set(f: &PolynomialMap) -> Result<AsymptoticSet> {
    if !check_dominant(f) {
        return Err(Error::NotDominant);
    }
    let per: Vec<CoordinateEliminant> = (0..f.n())
        .into_par_iter()
        .map(|i| {
            let e = coordinate_eliminant(f, i)?;
            let phi = phi0(&e, 0).restrict_to(f.target())?;
            Ok(CoordinateEliminant {
                coordinate: i,
                eliminant: e,
                phi0: phi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let nonconstant: Vec<(Polynomial, usize)> = per
        .iter()
        .filter(|c| !c.phi0.is_constant())
        .map(|c| (c.phi0.clone(), c.coordinate))
        .collect();
    let components = coprime_base(&nonconstant)
        .into_iter()
        .map(|(p, coords)| Component {
            possibly_reducible: !irreducibility_certificate(&p),
            polynomial: p,
            coordinates: coords,
        })
        .collect();
    Ok(AsymptoticSet {
        target: f.target().clone(),
        components,
        per_coordinate: per,
    })
}

/// `F^{-1}(a)` is nonempty over C.
pub fn fiber_nonempty(f: &PolynomialMap, a: &[Rational]) -> Result<bool> {
    if a.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: a.len(),
        });
    }
    let src = f.source();
    let gens = f
        .components()
        .iter()
        .zip(a)
        .map(|(p, v)| p - &Polynomial::constant(src, v.clone()));
    Ok(!Ideal::new(src, gens).is_unit()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_map;
    use crate::poly::int;

    fn map(s: &str) -> PolynomialMap {
        parse_map(s).unwrap().1
    }

    #[test]
    fn three_monomial_map_eliminants() {
        let f = map("vars: x1 x2 x3\nmap: x1*x2; x2*x3; x1*x2*x3");
        let e = coordinate_eliminant(&f, 0).unwrap();
        assert_eq!(e.to_string(), "x1*a2 - a3");
        let s = asymptotic_set(&f).unwrap();
        let names: Vec<String> = s.components.iter().map(|c| c.polynomial.to_string()).collect();
        assert_eq!(names, vec!["a2", "a3", "a1"]);
        assert!(s.components.iter().all(|c| !c.possibly_reducible));
    }

    #[test]
    fn cusp_phi0() {
        let f = map("vars: x1 x2\nmap: (x1*x2)^2; (x1*x2)^3 + x1");
        let e1 = coordinate_eliminant(&f, 0).unwrap();
        assert_eq!(e1.to_string(), "x1^2 - 2*x1*a2 - a1^3 + a2^2");
        assert!(phi0(&e1, 0).is_constant());
        let s = asymptotic_set(&f).unwrap();
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.components[0].polynomial.to_string(), "a1^3 - a2^2");
    }

    #[test]
    fn fibers() {
        let f = map("vars: x1 x2 x3\nmap: x1*x2; x2*x3; x1*x2*x3");
        assert!(fiber_nonempty(&f, &[int(1), int(1), int(1)]).unwrap());
        assert!(!fiber_nonempty(&f, &[int(1), int(1), int(0)]).unwrap());
        let g = map("vars: x1 x2\nmap: x1; x1");
        assert_eq!(asymptotic_set(&g), Err(Error::NotDominant));
    }

    #[test]
    fn coprime_splitting() {
        let a = crate::poly::Arena::numbered("a", 2);
        let x = Polynomial::var(&a, 0);
        let y = Polynomial::var(&a, 1);
        let p = &(&x * &(&y - &Polynomial::one(&a))) * &(&x + &y);
        let q = &(&y - &Polynomial::one(&a)) * &(&x - &y);
        let base = coprime_base(&[(p, 0), (q, 1)]);
        let mut names: Vec<String> = base.iter().map(|b| b.0.to_string()).collect();
        names.sort();
        assert_eq!(names, vec!["a1", "a1 + a2", "a1 - a2", "a2 - 1"]);
        let shared = base.iter().find(|b| b.0.to_string() == "a2 - 1").unwrap();
        assert_eq!(shared.1, vec![0, 1]);
    }
}
