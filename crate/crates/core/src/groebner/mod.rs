//! Buchberger's algorithm and the ideal operations built on it.

mod buchberger;
mod order;

pub use buchberger::Budget;
pub use order::{InnerOrder, MonomialOrder};

use buchberger::{from_terms, groebner_terms, reduce, to_terms, Terms};

use crate::error::{Error, Result};
use crate::poly::{Arena, ArenaRef, Polynomial};

/// Finitely generated ideal of `Q[arena]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    arena: ArenaRef,
    order: MonomialOrder,
    gens: Vec<Polynomial>,
    budget: Budget,
}

/// Reduced Groebner basis: monic, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    arena: ArenaRef,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    terms: Vec<Terms>,
}

impl Ideal {
    /// Ideal under grevlex. Zero generators are dropped.
    pub fn new(arena: &ArenaRef, gens: impl IntoIterator<Item = Polynomial>) -> Ideal {
        let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert!(g.arena() == arena, "ideal generator over {} not {}", g.arena(), arena);
        }
        Ideal {
            arena: arena.clone(),
            order: MonomialOrder::GrevLex,
            gens,
            budget: Budget::default(),
        }
    }

    pub fn unit(arena: &ArenaRef) -> Ideal {
        Ideal::new(arena, [Polynomial::one(arena)])
    }

    pub fn zero(arena: &ArenaRef) -> Ideal {
        Ideal::new(arena, [])
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Result<Ideal> {
        if !order.is_valid_for(self.arena.len()) {
            return Err(Error::Precondition("block order does not partition the arena".into()));
        }
        self.order = order;
        Ok(self)
    }

    pub fn with_budget(mut self, budget: Budget) -> Ideal {
        self.budget = budget;
        self
    }

    pub fn arena(&self) -> &ArenaRef {
        &self.arena
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// `I + <extra>`
    pub fn with_generators(&self, extra: impl IntoIterator<Item = Polynomial>) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.into_iter().filter(|g| !g.is_zero()));
        Ideal {
            gens,
            ..self.clone()
        }
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        self.with_generators(other.gens.iter().cloned())
    }

    pub fn groebner(&self) -> Result<GroebnerBasis> {
        buchberger(self)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.is_unit())
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.groebner()?.contains(p))
    }

    /// Same ideal re-expressed over a larger arena (by variable name).
    pub fn embed(&self, target: &ArenaRef) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.embed_by_name(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(target, gens).with_budget(self.budget))
    }

    pub fn eliminate(&self, drop: &[usize]) -> Result<Ideal> {
        eliminate(self, drop)
    }

    /// Eliminate every variable not named in `keep`.
    pub fn eliminate_to(&self, keep: &[&str]) -> Result<Ideal> {
        let drop: Vec<usize> = (0..self.arena.len())
            .filter(|&i| !keep.contains(&self.arena.name(i)))
            .collect();
        eliminate(self, &drop)
    }

    /// `I : h^inf`
    pub fn saturate(&self, h: &Polynomial) -> Result<Ideal> {
        let t = fresh_name(&self.arena, "sat");
        let big = self.arena.extended(&[t.as_str()])?;
        let tv = Polynomial::var(&big, big.len() - 1);
        let hh = h.embed_by_name(&big)?;
        let mut gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|g| g.embed_by_name(&big))
            .collect::<Result<_>>()?;
        gens.push(&Polynomial::one(&big) - &(&tv * &hh));
        let ext = Ideal::new(&big, gens).with_budget(self.budget);
        let e = eliminate(&ext, &[big.len() - 1])?;
        let gens = e
            .gens
            .iter()
            .map(|g| g.restrict_to(&self.arena))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(&self.arena, gens).with_budget(self.budget))
    }

    pub fn radical_member(&self, p: &Polynomial) -> Result<bool> {
        radical_member(p, self)
    }

    pub fn dimension(&self) -> Result<i64> {
        dimension(self)
    }
}

impl GroebnerBasis {
    pub fn arena(&self) -> &ArenaRef {
        &self.arena
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<crate::poly::Monomial> {
        self.terms.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, self)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal::new(&self.arena, self.basis.iter().cloned())
            .with_order(self.order.clone())
            .expect("order already validated")
    }
}

/// Remainder of full division by `g`.
pub fn normal_form(p: &Polynomial, g: &GroebnerBasis) -> Polynomial {
    assert!(p.arena() == &g.arena, "normal form across arenas");
    let r = reduce(to_terms(p, &g.order), &g.terms, None, &g.order);
    from_terms(&g.arena, r)
}

pub fn buchberger(ideal: &Ideal) -> Result<GroebnerBasis> {
    let gens: Vec<Terms> = ideal.gens.iter().map(|g| to_terms(g, &ideal.order)).collect();
    let terms = groebner_terms(gens, &ideal.order, ideal.budget)?;
    let basis = terms.iter().map(|t| from_terms(&ideal.arena, t.clone())).collect();
    Ok(GroebnerBasis {
        arena: ideal.arena.clone(),
        order: ideal.order.clone(),
        basis,
        terms,
    })
}

/// `I ∩ Q[arena \ drop]`, returned over the sub-arena of kept variables
/// (original relative order, grevlex).
pub fn eliminate(ideal: &Ideal, drop: &[usize]) -> Result<Ideal> {
    let n = ideal.arena.len();
    if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
        return Err(Error::Precondition(format!("variable index {bad} outside the arena")));
    }
    let keep_names: Vec<String> = (0..n)
        .filter(|i| !drop.contains(i))
        .map(|i| ideal.arena.name(i).to_string())
        .collect();
    let sub = Arena::new(keep_names)?;
    let gb = if drop.is_empty() {
        ideal.groebner()?
    } else {
        let order = MonomialOrder::elimination(n, drop);
        ideal.clone().with_order(order)?.groebner()?
    };
    let mut kept = Vec::new();
    for p in gb.polynomials() {
        if drop.iter().all(|&i| !p.involves(i)) {
            kept.push(p.restrict_to(&sub)?.primitive());
        }
    }
    Ok(Ideal::new(&sub, kept).with_budget(ideal.budget))
}

pub fn fresh_name(arena: &Arena, base: &str) -> String {
    let mut k = 0;
    loop {
        let name = format!("{base}{k}");
        if arena.index_of(&name).is_none() {
            return name;
        }
        k += 1;
    }
}

/// `p` vanishes on `V(I)`, decided by `1 ∈ I + <1 - t p>`.
pub fn radical_member(p: &Polynomial, ideal: &Ideal) -> Result<bool> {
    if p.is_zero() {
        return Ok(true);
    }
    let t = fresh_name(&ideal.arena, "rad");
    let big = ideal.arena.extended(&[t.as_str()])?;
    let tv = Polynomial::var(&big, big.len() - 1);
    let mut gens: Vec<Polynomial> = ideal
        .gens
        .iter()
        .map(|g| g.embed_by_name(&big))
        .collect::<Result<_>>()?;
    gens.push(&Polynomial::one(&big) - &(&tv * &p.embed_by_name(&big)?));
    Ideal::new(&big, gens).with_budget(ideal.budget).is_unit()
}

/// `V(I) ⊆ V(J)`
pub fn variety_containment(i: &Ideal, j: &Ideal) -> Result<bool> {
    if i.arena != j.arena {
        return Err(Error::ArenaMismatch("containment across arenas".into()));
    }
    for g in &j.gens {
        if !radical_member(g, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension of `V(I) \ V(h_1 ... h_k)`; `-1` when empty.
pub fn open_dimension(ideal: &Ideal, opens: &[Polynomial]) -> Result<i64> {
    let h = opens.iter().fold(Polynomial::one(&ideal.arena), |acc, p| &acc * p);
    if h.is_constant() {
        return if h.is_zero() { Ok(-1) } else { dimension(ideal) };
    }
    let y = fresh_name(&ideal.arena, "open");
    let big = ideal.arena.extended(&[y.as_str()])?;
    let yv = Polynomial::var(&big, big.len() - 1);
    let mut gens: Vec<Polynomial> = ideal
        .gens
        .iter()
        .map(|g| g.embed_by_name(&big))
        .collect::<Result<_>>()?;
    gens.push(&Polynomial::one(&big) - &(&yv * &h.embed_by_name(&big)?));
    dimension(&Ideal::new(&big, gens).with_budget(ideal.budget))
}

/// Krull dimension of `V(I)`; `-1` for the unit ideal.
pub fn dimension(ideal: &Ideal) -> Result<i64> {
    let n = ideal.arena.len();
    if ideal.gens.is_empty() {
        return Ok(n as i64);
    }
    let gb = ideal.groebner()?;
    if gb.is_unit() {
        return Ok(-1);
    }
    Ok(dimension_from_leading(&gb.leading_monomials(), n))
}

/// Largest variable set containing the support of no leading monomial.
pub(crate) fn dimension_from_leading(lms: &[crate::poly::Monomial], n: usize) -> i64 {
    assert!(n < 31, "dimension search supports at most 30 variables");
    let supports: Vec<u32> = lms
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u32, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    let mut best = 0i64;
    for s in 0u32..(1u32 << n) {
        let size = s.count_ones() as i64;
        if size <= best {
            continue;
        }
        if supports.iter().all(|&m| m & !s != 0) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn ring(names: &[&str]) -> (ArenaRef, Vec<Polynomial>) {
        let a = Arena::new(names.iter().copied()).unwrap();
        let v = (0..names.len()).map(|i| Polynomial::var(&a, i)).collect();
        (a, v)
    }

    #[test]
    fn normal_form_examples() {
        let (a, v) = ring(&["x", "y"]);
        let g = Ideal::new(&a, [v[0].clone()]).groebner().unwrap();
        assert!(g.normal_form(&v[0].pow(2)).is_zero());
        assert_eq!(g.normal_form(&Polynomial::one(&a)), Polynomial::one(&a));
        let g = Ideal::new(&a, [&v[0] - &v[1]]).with_order(MonomialOrder::Lex).unwrap().groebner().unwrap();
        assert_eq!(g.normal_form(&(&v[0] + &v[1])), v[1].scale(&int(2)));
    }

    #[test]
    fn lex_basis_contains_quartic() {
        let (a, v) = ring(&["x", "y"]);
        let i = Ideal::new(&a, [&v[0].pow(2) - &v[1], &v[1].pow(2) - &v[0]])
            .with_order(MonomialOrder::Lex)
            .unwrap();
        let g = i.groebner().unwrap();
        let quartic = &v[1].pow(4) - &v[1];
        assert!(g.polynomials().contains(&quartic));
        assert!(Ideal::new(&a, [v[0].clone(), &Polynomial::one(&a) - &v[0]]).is_unit().unwrap());
        let single = Ideal::new(&a, [&v[0] - &Polynomial::one(&a)]).groebner().unwrap();
        assert_eq!(single.polynomials(), &[&v[0] - &Polynomial::one(&a)]);
    }

    #[test]
    fn elimination_of_parameter() {
        let (a, v) = ring(&["t", "x", "y"]);
        let i = Ideal::new(&a, [&v[1] - &v[0], &v[2] - &v[0].pow(2)]);
        let e = i.eliminate(&[0]).unwrap();
        assert_eq!(e.generators().len(), 1);
        assert_eq!(e.generators()[0].to_string(), "x^2 - y");
    }

    #[test]
    fn dimension_examples() {
        let (a, v) = ring(&["a1", "a2", "a3"]);
        assert_eq!(Ideal::new(&a, [v[1].clone()]).dimension().unwrap(), 2);
        assert_eq!(Ideal::new(&a, [v[0].clone(), v[1].clone()]).dimension().unwrap(), 1);
        assert_eq!(Ideal::unit(&a).dimension().unwrap(), -1);
        let (b, w) = ring(&["a1", "a2"]);
        assert_eq!(Ideal::new(&b, [&w[1].pow(2) - &w[0].pow(3)]).dimension().unwrap(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let (a, v) = ring(&["x", "y", "z"]);
        let i = Ideal::new(&a, [&v[0].pow(3) - &v[1], &v[1].pow(3) - &v[2], &v[2].pow(3) - &(&v[0] * &v[1])])
            .with_order(MonomialOrder::Lex)
            .unwrap()
            .with_budget(Budget { max_pairs: 1, max_basis: 100 });
        assert!(matches!(i.groebner(), Err(Error::ResourceLimit(_))));
        assert_eq!(Budget::parse("10:20"), Some(Budget { max_pairs: 10, max_basis: 20 }));
        assert_eq!(Budget::parse("7").map(|b| b.max_pairs), Some(7));
        assert_eq!(Budget::parse("x"), None);
    }
}
