use super::{Cell, Facon, Family};
use crate::error::{Error, Result};
use crate::groebner::{open_dimension, variety_containment, Ideal};
use crate::poly::Polynomial;

/// One piece `S^κ_i` of the partition of a cell defined by a façon.
#[derive(Clone, Debug)]
pub struct StarGroup {
    pub level: u32,
    pub closure: Ideal,
    pub opens: Vec<Polynomial>,
    pub dim: i64,
    /// Lexicographically least weight vector of the group.
    pub representative: Family,
    pub weights: Vec<Vec<i64>>,
    /// Some later group could not be cut out by a single non-equation.
    pub incomplete: bool,
}

fn same_variety(a: &Ideal, b: &Ideal) -> Result<bool> {
    Ok(variety_containment(a, b)? && variety_containment(b, a)?)
}

/// A generator `g` of `later` with `g ∉ rad(base)` and `V(base + g) ⊆ V(later)`,
/// so that `V(base) \ V(later) = V(base) \ V(g)`.
pub(crate) fn cutting_equation(base: &Ideal, later: &Ideal) -> Result<Option<Polynomial>> {
    let mut cands: Vec<Polynomial> = later.groebner()?.polynomials().iter().map(|p| p.primitive()).collect();
    cands.extend(later.generators().iter().map(|p| p.primitive()));
    cands.sort_by(|p, q| {
        (p.total_degree(), p.num_terms(), p.to_string()).cmp(&(q.total_degree(), q.num_terms(), q.to_string()))
    });
    cands.dedup();
    for g in cands {
        if base.radical_member(&g)? {
            continue;
        }
        if variety_containment(&base.with_generators([g.clone()]), later)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Partition of `cell` by the proportionality classes of the façon's
/// families, ordered by decreasing dimension of their limit sets.
pub fn star_refine(cell: &Cell, families: &[Family], facon: &Facon) -> Result<Vec<StarGroup>> {
    let fams: Vec<&Family> = families.iter().filter(|f| f.facon.same_label(facon)).collect();
    if !fams.iter().any(|f| f.generic) {
        return Err(Error::Precondition(format!("façon {facon} is not generic on the cell")));
    }
    let mut groups: Vec<Vec<&Family>> = Vec::new();
    for f in fams {
        let mut placed = false;
        for g in groups.iter_mut() {
            if g[0].image_dim == f.image_dim && same_variety(&g[0].image, &f.image)? {
                g.push(f);
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(vec![f]);
        }
    }
    groups.sort_by(|a, b| b[0].image_dim.cmp(&a[0].image_dim).then_with(|| a[0].weights.cmp(&b[0].weights)));

    let mut out = Vec::with_capacity(groups.len());
    for (i, g) in groups.iter().enumerate() {
        let closure = cell.closure.sum(&g[0].image);
        let mut opens = cell.opens.clone();
        let mut incomplete = false;
        for later in &groups[i + 1..] {
            let meet = closure.sum(&later[0].image);
            if open_dimension(&meet, &opens)? < 0 {
                continue;
            }
            match cutting_equation(&closure, &later[0].image)? {
                Some(h) => {
                    if !opens.contains(&h) {
                        opens.push(h);
                    }
                }
                None => incomplete = true,
            }
        }
        let dim = open_dimension(&closure, &opens)?;
        let mut weights: Vec<Vec<i64>> = g.iter().map(|f| f.weights.clone()).collect();
        weights.sort();
        let representative = g.iter().min_by(|a, b| a.weights.cmp(&b.weights)).unwrap();
        out.push(StarGroup {
            level: i as u32,
            closure,
            opens,
            dim,
            representative: (*representative).clone(),
            weights,
            incomplete,
        });
    }
    Ok(out)
}
