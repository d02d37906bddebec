use serde::Serialize;

use super::{Cell, Facon};
use crate::error::{Error, Result};
use crate::groebner::{fresh_name, Ideal};
use crate::poly::{squarefree_part, substitute_curve, Arena, ArenaRef, CurveAnsatz, Polynomial, PolynomialMap, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    /// (i) tends to infinity
    Diverging,
    /// (ii) converges to a value independent of the limit point
    Fixed,
    /// (iii) converges to a value depending on the limit point
    Dependent,
}

/// Expansion of `F` along a curve ansatz.
#[derive(Clone, Debug)]
pub struct LimitAnalysis {
    pub weights: Vec<i64>,
    pub ansatz: CurveAnsatz,
    /// Coefficients of positive powers of `u`, over the ansatz symbols.
    pub positive: Vec<Polynomial>,
    /// Positive coefficients saturated by the nonvanishing of the `c_j`.
    pub constraint_ideal: Ideal,
    /// `u^0` coefficients reduced modulo the constraints.
    pub limit_map: Vec<Polynomial>,
    /// Product of the coefficients required to be nonzero.
    pub nonzero: Polynomial,
    /// Closure of the set of limits, over the target arena.
    pub image: Ideal,
    pub image_dim: i64,
    target: ArenaRef,
}

/// Joint arena `(symbols, extras, alpha aliases)`.
pub(crate) struct Joint {
    pub arena: ArenaRef,
    pub nsym: usize,
    pub extras: Vec<usize>,
    pub alpha0: usize,
    pub n: usize,
}

impl Joint {
    pub fn new(symbols: &Arena, extras: &[&str], target: &Arena) -> Result<Joint> {
        let mut names: Vec<String> = symbols.names().to_vec();
        let mut extra_idx = Vec::new();
        for e in extras {
            let tmp = Arena::new(names.clone())?;
            let name = fresh_name(&tmp, e);
            extra_idx.push(names.len());
            names.push(name);
        }
        let alpha0 = names.len();
        for a in target.names() {
            let name = if names.contains(a) {
                let tmp = Arena::new(names.clone())?;
                fresh_name(&tmp, "alpha")
            } else {
                a.clone()
            };
            names.push(name);
        }
        Ok(Joint {
            arena: Arena::new(names)?,
            nsym: symbols.len(),
            extras: extra_idx,
            alpha0,
            n: target.len(),
        })
    }

    pub fn sym(&self, p: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.nsym).collect();
        p.embed(&self.arena, &map)
    }

    pub fn alpha(&self, p: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.n).map(|k| self.alpha0 + k).collect();
        p.embed(&self.arena, &map)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.arena, i)
    }

    /// Eliminate everything but the alpha block; result over `target`.
    pub fn image(&self, ideal: &Ideal, target: &ArenaRef) -> Result<Ideal> {
        self.project(ideal, &[], target).map(|(i, _)| i)
    }

    /// Eliminate everything except `keep` (joint indices) and the alpha block.
    /// Returns the ideal over `target` when `keep` is empty, otherwise over
    /// the kept sub-arena together with that sub-arena.
    pub fn project(&self, ideal: &Ideal, keep: &[usize], target: &ArenaRef) -> Result<(Ideal, ArenaRef)> {
        let drop: Vec<usize> = (0..self.alpha0).filter(|i| !keep.contains(i)).collect();
        let e = ideal.eliminate(&drop)?;
        if keep.is_empty() {
            let map: Vec<usize> = (0..self.n).collect();
            let gens: Vec<Polynomial> = e.generators().iter().map(|g| g.embed(target, &map)).collect();
            Ok((Ideal::new(target, gens), target.clone()))
        } else {
            let sub = e.arena().clone();
            Ok((e, sub))
        }
    }
}

/// Expand `F` along the ansatz and collect limit data.
pub fn limit_constraints(f: &PolynomialMap, ansatz: &CurveAnsatz) -> Result<LimitAnalysis> {
    if ansatz.len() != f.n() {
        return Err(Error::InvalidAnsatz(format!(
            "ansatz has {} coordinates for a map in {} variables",
            ansatz.len(),
            f.n()
        )));
    }
    if ansatz.coords().iter().all(|c| c.weight <= 0) {
        return Err(Error::InvalidAnsatz("no coordinate tends to infinity".into()));
    }
    for c in ansatz.coords() {
        if c.weight > 0 && !c.shift.is_zero() {
            return Err(Error::InvalidAnsatz("diverging coordinate carries a shift".into()));
        }
        if c.weight != 0 && c.coeff.is_zero() {
            return Err(Error::InvalidAnsatz("zero coefficient on a nonconstant term".into()));
        }
    }
    let symbols = ansatz.symbols().clone();
    let mut positive = Vec::new();
    let mut constant = Vec::new();
    for p in f.components() {
        let e = substitute_curve(p, ansatz)?;
        positive.extend(e.positive_part().into_iter().map(|(_, c)| c));
        constant.push(e.coeff(0));
    }
    let nonzero = ansatz
        .coords()
        .iter()
        .filter(|c| c.weight != 0 && !c.coeff.is_constant())
        .fold(Polynomial::one(&symbols), |acc, c| &acc * &c.coeff);

    let joint = Joint::new(&symbols, &["t"], f.target())?;
    let t = joint.var(joint.extras[0]);
    let sat = &(&t * &joint.sym(&nonzero)) - &Polynomial::one(&joint.arena);
    let mut gens: Vec<Polynomial> = positive.iter().map(|p| joint.sym(p)).collect();
    gens.push(sat.clone());
    let constraint_joint = Ideal::new(&joint.arena, gens.clone());
    let drop: Vec<usize> = (joint.nsym..joint.arena.len()).collect();
    let c_ideal = constraint_joint.eliminate(&drop)?;
    let constraint_ideal = Ideal::new(
        &symbols,
        c_ideal
            .generators()
            .iter()
            .map(|g| squarefree_part(&g.embed(&symbols, &(0..joint.nsym).collect::<Vec<_>>()))),
    );
    let gb = constraint_ideal.groebner()?;
    if gb.is_unit() {
        return Err(Error::NoFiniteLimit);
    }
    let limit_map: Vec<Polynomial> = constant.iter().map(|p| gb.normal_form(p)).collect();

    for (k, l) in limit_map.iter().enumerate() {
        gens.push(&joint.var(joint.alpha0 + k) - &joint.sym(l));
    }
    let image = joint.image(&Ideal::new(&joint.arena, gens), f.target())?;
    let image_dim = image.dimension()?;
    Ok(LimitAnalysis {
        weights: ansatz.weights(),
        ansatz: ansatz.clone(),
        positive,
        constraint_ideal,
        limit_map,
        nonzero,
        image,
        image_dim,
        target: f.target().clone(),
    })
}

/// Limits of a family inside one cell.
#[derive(Clone, Debug)]
pub struct CellRestriction {
    /// Closure of the limits lying in the cell.
    pub image: Ideal,
    pub image_dim: i64,
    pub categories: Vec<Category>,
    /// Value of each fixed coordinate when it is a single rational.
    pub forced: Vec<Option<Rational>>,
}

impl LimitAnalysis {
    pub fn target(&self) -> &ArenaRef {
        &self.target
    }

    /// `None` when no limit of the family lies in the cell.
    pub fn restrict(&self, closure: &Ideal, opens: &[Polynomial]) -> Result<Option<CellRestriction>> {
        let symbols = self.ansatz.symbols();
        let joint = Joint::new(symbols, &["t", "s"], &self.target)?;
        let t = joint.var(joint.extras[0]);
        let s = joint.var(joint.extras[1]);
        let one = Polynomial::one(&joint.arena);
        let mut gens: Vec<Polynomial> = self.constraint_ideal.generators().iter().map(|p| joint.sym(p)).collect();
        gens.push(&(&t * &joint.sym(&self.nonzero)) - &one);
        for (k, l) in self.limit_map.iter().enumerate() {
            gens.push(&joint.var(joint.alpha0 + k) - &joint.sym(l));
        }
        gens.extend(closure.generators().iter().map(|g| joint.alpha(g)));
        let h = opens.iter().fold(Polynomial::one(&self.target), |acc, p| &acc * p);
        if !h.is_constant() {
            gens.push(&(&s * &joint.alpha(&h)) - &one);
        }
        let ideal = Ideal::new(&joint.arena, gens);
        if ideal.is_unit()? {
            return Ok(None);
        }
        let image = joint.image(&ideal, &self.target)?;
        let image_dim = image.dimension()?;
        if image_dim < 0 {
            return Ok(None);
        }
        let mut categories = Vec::with_capacity(self.weights.len());
        let mut forced = Vec::with_capacity(self.weights.len());
        for c in self.ansatz.coords() {
            if c.weight > 0 {
                categories.push(Category::Diverging);
                forced.push(None);
                continue;
            }
            if let Some(v) = c.shift.as_constant() {
                categories.push(Category::Fixed);
                forced.push(Some(v));
                continue;
            }
            let vars = c.shift.variables();
            if vars.len() != 1 || c.shift.total_degree() != Some(1) || c.shift.num_terms() != 1 {
                return Err(Error::InvalidAnsatz("shift must be a constant or a single symbol".into()));
            }
            let b = vars[0];
            let all_but_b: Vec<usize> = (0..joint.arena.len()).filter(|&i| i != b).collect();
            let finite = ideal.eliminate(&all_but_b)?;
            if !finite.is_zero_ideal() {
                categories.push(Category::Fixed);
                let g = &finite.generators()[0];
                forced.push(if finite.generators().len() == 1 && g.total_degree() == Some(1) {
                    let a = g.coeff_in(0, 1).as_constant().unwrap();
                    let c0 = g.coeff_in(0, 0).as_constant().unwrap();
                    Some(-c0 / a)
                } else {
                    None
                });
                continue;
            }
            let (with_b, _) = joint.project(&ideal, &[b], &self.target)?;
            if with_b.dimension()? == image_dim + 1 {
                categories.push(Category::Fixed);
            } else {
                categories.push(Category::Dependent);
            }
            forced.push(None);
        }
        Ok(Some(CellRestriction {
            image,
            image_dim,
            categories,
            forced,
        }))
    }
}

/// Façon label of the family over its whole image.
pub fn classify_coordinates(analysis: &LimitAnalysis) -> Result<Facon> {
    let r = analysis
        .restrict(&Ideal::zero(&analysis.target), &[])?
        .ok_or(Error::NoFiniteLimit)?;
    facon_of(&r.categories)
}

pub(crate) fn facon_of(categories: &[Category]) -> Result<Facon> {
    let div = (0..categories.len()).filter(|&j| categories[j] == Category::Diverging).collect();
    let fix = (0..categories.len()).filter(|&j| categories[j] == Category::Fixed).collect();
    Facon::new(div, fix, 0)
}

/// Convenience: restrict to a cell.
pub(crate) fn restrict_cell(a: &LimitAnalysis, cell: &Cell) -> Result<Option<CellRestriction>> {
    a.restrict(&cell.closure, &cell.opens)
}
