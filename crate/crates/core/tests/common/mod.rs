#![allow(dead_code)]

use facons_kit::asymptotic::{asymptotic_set, AsymptoticSet};
use facons_kit::facon::FaconSearch;
use facons_kit::parser::parse_map;
use facons_kit::poly::PolynomialMap;
use facons_kit::stratify::{star_stratify, Stratification, Stratum};

pub const PRODUCTS: &str = include_str!("../../../../maps/products.map");
pub const CUSP: &str = include_str!("../../../../maps/cusp.map");
pub const SHIFTED: &str = include_str!("../../../../maps/shifted.map");

pub const SAMPLE_MAPS: [(&str, &str); 3] = [("products", PRODUCTS), ("cusp", CUSP), ("shifted", SHIFTED)];

pub fn map(text: &str) -> PolynomialMap {
    parse_map(text).expect("map parses").1
}

pub struct Pipeline {
    pub f: PolynomialMap,
    pub sf: AsymptoticSet,
    pub search: FaconSearch,
    pub strat: Stratification,
}

pub fn pipeline(text: &str) -> Pipeline {
    let f = map(text);
    let sf = asymptotic_set(&f).expect("asymptotic set");
    let search = FaconSearch::new(&f, 3).expect("search");
    let strat = star_stratify(&sf, &search).expect("stratification");
    Pipeline { f, sf, search, strat }
}

pub fn stratum_by_facons<'a>(s: &'a Stratification, text: &str) -> &'a Stratum {
    s.strata
        .iter()
        .find(|st| st.facon_text() == text)
        .unwrap_or_else(|| panic!("no stratum with façons {text}"))
}

use facons_kit::groebner::{GroebnerBasis, MonomialOrder};
use facons_kit::poly::{ArenaRef, Monomial, Polynomial, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn leading(p: &Polynomial, order: &MonomialOrder) -> (Monomial, Rational) {
    let (m, c) = p
        .terms()
        .max_by(|a, b| order.cmp(a.0, b.0))
        .expect("nonzero polynomial");
    (m.clone(), c.clone())
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (mf, cf) = leading(f, order);
    let (mg, cg) = leading(g, order);
    let l = mf.lcm(&mg);
    let one = Rational::one();
    let a = f.mul_monomial(&mf.quotient_of(&l), &(&one / &cf));
    let b = g.mul_monomial(&mg.quotient_of(&l), &(&one / &cg));
    &a - &b
}

/// Every S-polynomial reduces to zero, leading coefficients are one and no
/// term of an element is divisible by another element's leading monomial.
pub fn is_reduced_basis(gb: &GroebnerBasis) -> bool {
    let ps = gb.polynomials();
    let order = gb.order();
    let lead: Vec<Monomial> = ps.iter().map(|p| leading(p, order).0).collect();
    for (i, p) in ps.iter().enumerate() {
        if !leading(p, order).1.is_one() {
            return false;
        }
        for (j, lj) in lead.iter().enumerate() {
            if i != j && p.terms().any(|(m, _)| lj.divides(m)) {
                return false;
            }
        }
    }
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if !gb.normal_form(&s_polynomial(&ps[i], &ps[j], order)).is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=d - used).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Monomial::from_exponents).collect()
}

pub fn random_polynomial(rng: &mut ChaCha8Rng, arena: &ArenaRef, max_deg: u32, max_terms: usize) -> Polynomial {
    let mons = monomials_up_to(arena.len(), max_deg);
    loop {
        let k = rng.gen_range(1..=max_terms);
        let terms: Vec<(Monomial, Rational)> = (0..k)
            .map(|_| {
                let m = mons[rng.gen_range(0..mons.len())].clone();
                let mut c = 0;
                while c == 0 {
                    c = rng.gen_range(-3i64..=3);
                }
                (m, Rational::from_integer(c.into()))
            })
            .collect();
        let p = Polynomial::from_terms(arena, terms);
        if !p.is_constant() {
            return p;
        }
    }
}

/// Row echelon form over Q of the coefficient vectors of `rows` with
/// columns in the order of `cols`.
fn echelon(rows: Vec<Vec<Rational>>) -> Vec<(usize, Vec<Rational>)> {
    let mut out: Vec<(usize, Vec<Rational>)> = Vec::new();
    for mut r in rows {
        for (piv, pr) in &out {
            if !r[*piv].is_zero() {
                let f = r[*piv].clone();
                for (x, y) in r.iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(piv) = r.iter().position(|x| !x.is_zero()) {
            let inv = Rational::one() / &r[piv];
            for x in r.iter_mut() {
                *x *= &inv;
            }
            for (_, pr) in out.iter_mut() {
                if !pr[piv].is_zero() {
                    let f = pr[piv].clone();
                    for (x, y) in pr.iter_mut().zip(&r) {
                        *x -= &f * y;
                    }
                }
            }
            out.push((piv, r));
        }
    }
    out
}

/// Degree-bounded elimination by linear algebra: the span of `m g` with
/// `deg(m g) <= d`, intersected with the polynomials free of `drop`.
/// Returns the kept-variable echelon rows and a membership test for the
/// whole span.
pub struct BoundedSpan {
    cols: Vec<Monomial>,
    rows: Vec<(usize, Vec<Rational>)>,
    first_kept: usize,
    arena: ArenaRef,
}

impl BoundedSpan {
    pub fn new(gens: &[Polynomial], drop: &[usize], d: u32) -> BoundedSpan {
        let arena = gens[0].arena().clone();
        let n = arena.len();
        let mut cols = monomials_up_to(n, d);
        cols.sort_by_key(|m| (drop.iter().all(|&i| m.deg(i) == 0), m.clone()));
        let first_kept = cols.iter().position(|m| drop.iter().all(|&i| m.deg(i) == 0)).unwrap_or(cols.len());
        let index = |m: &Monomial| cols.iter().position(|c| c == m).expect("column");
        let mut rows = Vec::new();
        for g in gens {
            let dg = g.total_degree().unwrap_or(0);
            if dg > d {
                continue;
            }
            for m in monomials_up_to(n, d - dg) {
                let mut r = vec![Rational::zero(); cols.len()];
                for (t, c) in g.terms() {
                    r[index(&t.mul(&m))] = c.clone();
                }
                rows.push(r);
            }
        }
        BoundedSpan { rows: echelon(rows), cols, first_kept, arena }
    }

    pub fn kept_rows(&self) -> Vec<Polynomial> {
        self.rows
            .iter()
            .filter(|(piv, _)| *piv >= self.first_kept)
            .map(|(_, r)| {
                Polynomial::from_terms(
                    &self.arena,
                    r.iter().zip(&self.cols).filter(|(c, _)| !c.is_zero()).map(|(c, m)| (m.clone(), c.clone())),
                )
            })
            .collect()
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        let mut r = vec![Rational::zero(); self.cols.len()];
        for (t, c) in p.terms() {
            match self.cols.iter().position(|m| m == t) {
                Some(k) => r[k] = c.clone(),
                None => return false,
            }
        }
        for (piv, pr) in &self.rows {
            if !r[*piv].is_zero() {
                let f = r[*piv].clone();
                for (x, y) in r.iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
        }
        r.iter().all(Zero::is_zero)
    }
}
