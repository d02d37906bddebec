use num_integer::Integer;
use rayon::prelude::*;

use super::analysis::{facon_of, restrict_cell, Category};
use super::{limit_constraints, Cell, Facon, LimitAnalysis, PQUple};
use crate::error::{Error, Result};
use crate::groebner::open_dimension;
use crate::groebner::Ideal;
use crate::poly::{CurveAnsatz, PolynomialMap, Rational};

/// A weight-vector family restricted to a cell.
#[derive(Clone, Debug)]
pub struct Family {
    pub weights: Vec<i64>,
    pub facon: Facon,
    pub uple: PQUple,
    /// Closure of the family's limits inside the cell.
    pub image: Ideal,
    pub image_dim: i64,
    pub categories: Vec<Category>,
    pub forced: Vec<Option<Rational>>,
    /// The limits fill the cell (dimension equal to the cell's).
    pub generic: bool,
}

/// Nonzero primitive weight vectors in `[-w, w]^n` with a positive entry,
/// in increasing lexicographic order.
pub fn candidate_weights(n: usize, w: i64) -> Vec<Vec<i64>> {
    let values: Vec<i64> = (-w..=w).filter(|&v| v != 0).collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    if n == 0 || values.is_empty() {
        return out;
    }
    loop {
        let v: Vec<i64> = cur.iter().map(|&k| values[k]).collect();
        let g = v.iter().fold(0i64, |g, x| g.gcd(x));
        if v.iter().any(|&x| x > 0) && g == 1 {
            out.push(v);
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < values.len() {
                break;
            }
            cur[k] = 0;
        }
    }
}

pub fn restrict_to_cell(analysis: &LimitAnalysis, cell: &Cell) -> Result<Option<Family>> {
    let Some(r) = restrict_cell(analysis, cell)? else {
        return Ok(None);
    };
    let facon = facon_of(&r.categories)?;
    let uple = PQUple::from_weights(&analysis.weights, &facon);
    Ok(Some(Family {
        weights: analysis.weights.clone(),
        generic: r.image_dim == cell.dim,
        facon,
        uple,
        image: r.image,
        image_dim: r.image_dim,
        categories: r.categories,
        forced: r.forced,
    }))
}

/// All weight-vector analyses of a map within a weight box.
#[derive(Clone, Debug)]
pub struct FaconSearch {
    pub weight_box: i64,
    pub analyses: Vec<LimitAnalysis>,
}

impl FaconSearch {
    pub fn new(f: &PolynomialMap, weight_box: i64) -> Result<FaconSearch> {
        if weight_box < 1 {
            return Err(Error::Precondition("weight box must be at least 1".into()));
        }
        let cands = candidate_weights(f.n(), weight_box);
        let results: Vec<Option<LimitAnalysis>> = cands
            .par_iter()
            .map(|w| match limit_constraints(f, &CurveAnsatz::from_weights(w)) {
                Ok(a) => Ok(Some(a)),
                Err(Error::NoFiniteLimit) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<_>>()?;
        Ok(FaconSearch {
            weight_box,
            analyses: results.into_iter().flatten().collect(),
        })
    }

    /// Every family with at least one limit in the cell, in weight order.
    pub fn families_on(&self, cell: &Cell) -> Result<Vec<Family>> {
        if cell.is_empty() {
            return Ok(Vec::new());
        }
        let found: Vec<Option<Family>> = self
            .analyses
            .par_iter()
            .map(|a| {
                let meet = a.image.sum(&cell.closure);
                if open_dimension(&meet, &cell.opens)? < 0 {
                    return Ok(None);
                }
                restrict_to_cell(a, cell)
            })
            .collect::<Result<_>>()?;
        Ok(found.into_iter().flatten().collect())
    }

    /// One generic witness per façon label: the lexicographically least
    /// weight vector whose limits fill the cell. Sorted by label.
    pub fn facons_of(&self, cell: &Cell) -> Result<Vec<Family>> {
        Ok(generic_witnesses(self.families_on(cell)?))
    }
}

pub fn generic_witnesses(families: Vec<Family>) -> Vec<Family> {
    let mut out: Vec<Family> = Vec::new();
    for fam in families.into_iter().filter(|f| f.generic) {
        if !out.iter().any(|g| g.facon == fam.facon) {
            out.push(fam);
        }
    }
    out.sort_by(|a, b| a.facon.cmp(&b.facon));
    out
}

/// Façons of a cell within the weight box `w`.
pub fn facons_of_component(f: &PolynomialMap, cell: &Cell, w: i64) -> Result<Vec<Family>> {
    FaconSearch::new(f, w)?.facons_of(cell)
}
