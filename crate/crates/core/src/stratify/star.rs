use super::cells::partition_by_facons;
use crate::asymptotic::AsymptoticSet;
use crate::error::Result;
use crate::facon::{star_refine, Facon, FaconSearch, Family, StarGroup};
use crate::groebner::{open_dimension, variety_containment, Ideal};
use crate::poly::Polynomial;

/// Locally closed piece `V(equations) \ V(∏ non_equations)` of S_F.
/// `equations` is saturated by the non-equations, so it cuts out the
/// closure of the stratum.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub label: String,
    pub equations: Ideal,
    pub non_equations: Vec<Polynomial>,
    pub dimension: i64,
    /// Ξ*, sorted.
    pub facon_set: Vec<Facon>,
    /// One witness family per entry of `facon_set`.
    pub witnesses: Vec<Family>,
    /// Index of the arrangement cell the stratum comes from.
    pub cell: usize,
    pub incomplete: bool,
}

impl Stratum {
    pub fn order(&self) -> usize {
        self.facon_set.len()
    }

    pub fn facon_text(&self) -> String {
        let v: Vec<String> = self.facon_set.iter().map(Facon::to_string).collect();
        format!("{{{}}}", v.join(", "))
    }

    fn open_product(&self) -> Polynomial {
        self.non_equations
            .iter()
            .fold(Polynomial::one(self.equations.arena()), |acc, p| &acc * p)
    }

    /// Exact membership of a rational point.
    pub fn contains_point(&self, a: &[crate::poly::Rational]) -> Result<bool> {
        use num_traits::Zero;
        for g in self.equations.generators() {
            if !g.evaluate_rational(a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(!self.open_product().evaluate_rational(a)?.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub strata: Vec<Stratum>,
    /// `(lower, upper)`: covering pairs of the closure-containment order.
    pub frontier_edges: Vec<(usize, usize)>,
}

fn product_ideal(a: &Ideal, b: &Ideal) -> Ideal {
    let mut gens = Vec::new();
    for p in a.generators() {
        for q in b.generators() {
            gens.push((p * q).primitive());
        }
    }
    Ideal::new(a.arena(), gens)
}

fn make_stratum(
    closure: &Ideal,
    opens: Vec<Polynomial>,
    picks: &[(Facon, Family)],
    cell: usize,
    incomplete: bool,
) -> Result<Stratum> {
    let h = opens.iter().fold(Polynomial::one(closure.arena()), |acc, p| &acc * p);
    let saturated = if h.is_constant() {
        closure.clone()
    } else {
        closure.saturate(&h)?
    };
    let equations = Ideal::new(
        closure.arena(),
        saturated.groebner()?.polynomials().iter().map(Polynomial::primitive),
    );
    let dimension = open_dimension(&equations, &opens)?;
    let mut picks = picks.to_vec();
    picks.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Stratum {
        label: String::new(),
        equations,
        non_equations: opens,
        dimension,
        facon_set: picks.iter().map(|p| p.0.clone()).collect(),
        witnesses: picks.into_iter().map(|p| p.1).collect(),
        cell,
        incomplete,
    })
}

/// Peel one cell into star strata: at each round the stratum is the set of
/// points generic for the first remaining group of at least one façon.
fn peel_cell(cell_index: usize, part: &super::CellFacons) -> Result<Vec<Stratum>> {
    let cell = &part.cell;
    if part.facons.is_empty() {
        return Ok(vec![make_stratum(&cell.closure, cell.opens.clone(), &[], cell_index, true)?]);
    }
    let mut remaining: Vec<(Facon, Vec<StarGroup>)> = Vec::new();
    let mut incomplete = false;
    for fam in &part.facons {
        let groups = star_refine(cell, &part.families, &fam.facon)?;
        incomplete |= groups.iter().any(|g| g.incomplete);
        remaining.push((fam.facon.clone(), groups));
    }

    let mut out = Vec::new();
    let mut closure = cell.closure.clone();
    let opens = cell.opens.clone();
    loop {
        for (_, groups) in remaining.iter_mut() {
            let mut kept = Vec::new();
            for g in groups.drain(..) {
                if open_dimension(&closure.sum(&g.closure), &opens)? >= 0 {
                    kept.push(g);
                }
            }
            *groups = kept;
        }
        remaining.retain(|(_, g)| !g.is_empty());
        if remaining.is_empty() {
            out.push(make_stratum(&closure, opens.clone(), &[], cell_index, true)?);
            break;
        }
        let picks: Vec<(Facon, Family)> = remaining
            .iter()
            .map(|(k, g)| (k.with_star(g[0].level), g[0].representative.clone()))
            .collect();
        if remaining.iter().any(|(_, g)| g.len() == 1) {
            out.push(make_stratum(&closure, opens.clone(), &picks, cell_index, incomplete)?);
            break;
        }
        let mut cut: Option<Ideal> = None;
        for (_, groups) in &remaining {
            let union = groups[1..]
                .iter()
                .map(|g| g.closure.clone())
                .reduce(|a, b| product_ideal(&a, &b))
                .expect("at least one later group");
            cut = Some(match cut {
                None => union,
                Some(c) => c.sum(&union),
            });
        }
        let cut = cut.expect("nonempty");
        let mut here = opens.clone();
        let mut piece_incomplete = incomplete;
        match crate::facon::cutting_equation(&closure, &cut)? {
            Some(g) => here.push(g),
            None => piece_incomplete = true,
        }
        out.push(make_stratum(&closure, here, &picks, cell_index, piece_incomplete)?);
        for (_, groups) in remaining.iter_mut() {
            groups.remove(0);
        }
        closure = closure.sum(&cut);
        if open_dimension(&closure, &opens)? < 0 {
            break;
        }
    }
    Ok(out)
}

/// Partition of S_F by star façons, with its frontier poset.
pub fn star_stratify(sf: &AsymptoticSet, search: &FaconSearch) -> Result<Stratification> {
    let parts = partition_by_facons(sf, search)?;
    let mut strata = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        strata.extend(peel_cell(k, part)?);
    }
    strata.sort_by(|a, b| b.dimension.cmp(&a.dimension).then(a.cell.cmp(&b.cell)));
    for (k, s) in strata.iter_mut().enumerate() {
        s.label = format!("S{k}");
    }
    let frontier_edges = hasse_edges(&strata)?;
    Ok(Stratification { strata, frontier_edges })
}

/// `contains[i][j]`: stratum `i` lies in the closure of stratum `j`.
pub fn containment_matrix(strata: &[Stratum]) -> Result<Vec<Vec<bool>>> {
    use rayon::prelude::*;
    let n = strata.len();
    let flat: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if i == j {
                Ok(true)
            } else {
                variety_containment(&strata[i].equations, &strata[j].equations)
            }
        })
        .collect::<Result<_>>()?;
    Ok(flat.chunks(n.max(1)).map(<[bool]>::to_vec).collect())
}

pub(crate) fn hasse_edges(strata: &[Stratum]) -> Result<Vec<(usize, usize)>> {
    let c = containment_matrix(strata)?;
    let n = strata.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !c[i][j] {
                continue;
            }
            let covered = (0..n).any(|m| m != i && m != j && c[i][m] && c[m][j] && !c[m][i]);
            if !covered {
                edges.push((i, j));
            }
        }
    }
    Ok(edges)
}
