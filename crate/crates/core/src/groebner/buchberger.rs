use std::cmp::Ordering;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::order::MonomialOrder;
use crate::error::{Error, Result};
use crate::poly::{ArenaRef, Monomial, Polynomial, Rational};

/// Terms sorted in strictly decreasing order.
pub(crate) type Terms = Vec<(Monomial, Rational)>;

/// Hard limits for one Buchberger run. `FACONS_RESOURCE_BUDGET=pairs[:basis]`
/// overrides the defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_basis: usize,
}

impl Budget {
    pub const DEFAULT: Budget = Budget {
        max_pairs: 100_000,
        max_basis: 4_000,
    };

    pub fn parse(s: &str) -> Option<Budget> {
        let mut it = s.trim().splitn(2, ':');
        let pairs = it.next()?.trim().parse().ok()?;
        let basis = match it.next() {
            Some(b) => b.trim().parse().ok()?,
            None => Budget::DEFAULT.max_basis,
        };
        Some(Budget {
            max_pairs: pairs,
            max_basis: basis,
        })
    }

    /// Defaults overridden by the environment, read once per process.
    pub fn from_env() -> Budget {
        static CACHE: OnceLock<Budget> = OnceLock::new();
        *CACHE.get_or_init(|| {
            std::env::var("FACONS_RESOURCE_BUDGET")
                .ok()
                .and_then(|s| Budget::parse(&s))
                .unwrap_or(Budget::DEFAULT)
        })
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

pub(crate) fn to_terms(p: &Polynomial, order: &MonomialOrder) -> Terms {
    let mut t: Terms = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    if *order != MonomialOrder::Lex {
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    } else {
        t.reverse();
    }
    t
}

pub(crate) fn from_terms(arena: &ArenaRef, t: Terms) -> Polynomial {
    Polynomial::from_terms(arena, t)
}

/// `p - c * m * g`
fn sub_mul(p: &[(Monomial, Rational)], c: &Rational, m: &Monomial, g: &[(Monomial, Rational)], order: &MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gj: Option<(Monomial, Rational)> = g.first().map(|(gm, gc)| (gm.mul(m), gc * c));
    while i < p.len() || gj.is_some() {
        let ord = match (&gj, p.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some((gm, _)), Some((pm, _))) => order.cmp(pm, gm),
        };
        match ord {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (gm, gc) = gj.take().unwrap();
                out.push((gm, -gc));
                j += 1;
                gj = g.get(j).map(|(gm, gc)| (gm.mul(m), gc * c));
            }
            Ordering::Equal => {
                let (gm, gc) = gj.take().unwrap();
                let s = &p[i].1 - gc;
                if !s.is_zero() {
                    out.push((gm, s));
                }
                i += 1;
                j += 1;
                gj = g.get(j).map(|(gm, gc)| (gm.mul(m), gc * c));
            }
        }
    }
    out
}

/// Full reduction of `p` by monic `basis` elements (those with `active` set).
pub(crate) fn reduce(p: Terms, basis: &[Terms], active: Option<&[bool]>, order: &MonomialOrder) -> Terms {
    let mut rem = Vec::new();
    let mut p = p;
    let mut start = 0;
    while start < p.len() {
        let lm = &p[start].0;
        let reducer = basis.iter().enumerate().find(|(k, g)| {
            active.is_none_or(|a| a[*k]) && !g.is_empty() && g[0].0.divides(lm)
        });
        match reducer {
            Some((_, g)) => {
                let m = g[0].0.quotient_of(lm);
                let c = p[start].1.clone();
                p = sub_mul(&p[start + 1..], &c, &m, &g[1..], order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

pub(crate) fn make_monic(mut t: Terms) -> Terms {
    if let Some((_, lc)) = t.first() {
        if !lc.is_one() {
            let inv = lc.recip();
            for (_, c) in t.iter_mut() {
                *c *= &inv;
            }
        }
    }
    t
}

fn spoly(f: &Terms, g: &Terms, order: &MonomialOrder) -> Terms {
    let l = f[0].0.lcm(&g[0].0);
    let mf = f[0].0.quotient_of(&l);
    let mg = g[0].0.quotient_of(&l);
    // both monic: S = mf*f - mg*g, leading terms cancel
    let a: Terms = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_mul(&a, &Rational::one(), &mg, &g[1..], order)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'a> {
    order: &'a MonomialOrder,
    g: Vec<Terms>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    fn lm(&self, k: usize) -> &Monomial {
        &self.g[k][0].0
    }

    /// Gebauer-Moeller update after appending `h`.
    fn update(&mut self, h: usize) {
        let lh = self.lm(h).clone();
        let mut c: Vec<Pair> = (0..h)
            .filter(|&k| self.active[k])
            .map(|k| Pair {
                i: k,
                j: h,
                lcm: self.lm(k).lcm(&lh),
            })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while !c.is_empty() {
            let p = c.remove(0);
            let coprime = self.lm(p.i).coprime(&lh);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d.into_iter().filter(|p| !self.lm(p.i).coprime(&lh)).collect();
        let old = std::mem::take(&mut self.pairs);
        for p in old {
            let l1 = self.lm(p.i).lcm(&lh);
            let l2 = self.lm(p.j).lcm(&lh);
            if !lh.divides(&p.lcm) || l1 == p.lcm || l2 == p.lcm {
                self.pairs.push(p);
            }
        }
        self.pairs.extend(e);
        for k in 0..h {
            if self.active[k] && lh.divides(self.lm(k)) {
                self.active[k] = false;
            }
        }
    }

    fn push(&mut self, h: Terms) {
        self.g.push(h);
        self.active.push(true);
        let k = self.g.len() - 1;
        self.update(k);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let o = self.order.cmp(&a.lcm, &b.lcm).then((a.i, a.j).cmp(&(b.i, b.j)));
            if o == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced monic Groebner basis, sorted by increasing leading monomial.
/// Returns `[1]` for the unit ideal and `[]` for the zero ideal.
pub(crate) fn groebner_terms(gens: Vec<Terms>, order: &MonomialOrder, budget: Budget) -> Result<Vec<Terms>> {
    let one = |n: usize| vec![(Monomial::one(n), Rational::one())];
    let mut input: Vec<Terms> = gens.into_iter().filter(|t| !t.is_empty()).collect();
    if input.is_empty() {
        return Ok(Vec::new());
    }
    let n = input[0][0].0.len();
    input.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0).then(a.len().cmp(&b.len())));
    let mut st = State {
        order,
        g: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for f in input {
        let h = reduce(f, &st.g, Some(&st.active), order);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return Ok(vec![one(n)]);
        }
        st.push(make_monic(h));
    }
    let mut done = 0usize;
    while let Some(p) = st.select() {
        done += 1;
        if done > budget.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "Groebner basis exceeded {} S-pairs",
                budget.max_pairs
            )));
        }
        let s = spoly(&st.g[p.i], &st.g[p.j], order);
        let h = reduce(s, &st.g, Some(&st.active), order);
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return Ok(vec![one(n)]);
        }
        st.push(make_monic(h));
        if st.g.len() > budget.max_basis {
            return Err(Error::ResourceLimit(format!(
                "Groebner basis exceeded {} elements",
                budget.max_basis
            )));
        }
    }
    let mut minimal: Vec<Terms> = st
        .g
        .into_iter()
        .zip(st.active)
        .filter_map(|(g, a)| a.then_some(g))
        .collect();
    minimal.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let head = minimal[k][0].clone();
        let tail = minimal[k][1..].to_vec();
        let mut flags = vec![true; minimal.len()];
        flags[k] = false;
        let mut t = vec![head];
        t.extend(reduce(tail, &minimal, Some(&flags), order));
        reduced.push(t);
    }
    Ok(reduced)
}
