use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::star::{containment_matrix, Stratification, Stratum};
use crate::error::Result;
use crate::facon::Facon;
use crate::groebner::open_dimension;

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// `k1 ≺ k2`.
pub fn facon_less(k1: &Facon, k2: &Facon) -> bool {
    let i_sup = subset(&k2.diverging, &k1.diverging);
    let j_sup = subset(&k2.fixed, &k1.fixed);
    let i_eq = k1.diverging == k2.diverging;
    let j_eq = k1.fixed == k2.fixed;
    (i_sup && !i_eq && j_sup) || (i_eq && j_sup && !j_eq) || (i_eq && j_eq && k1.star > k2.star)
}

/// Every façon of `b` is matched by an equal or smaller façon of `a`.
pub fn point_less(a: &Stratum, b: &Stratum) -> bool {
    b.facon_set
        .iter()
        .all(|k2| a.facon_set.iter().any(|k1| k1 == k2 || facon_less(k1, k2)))
}

pub fn order_of(s: &Stratum) -> usize {
    s.order()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `point_less` and closure containment disagree.
    OrderMismatch { lower: String, upper: String, point_less: bool, contained: bool },
    Overlap { a: String, b: String },
    /// The closure of `upper` meets `other` without containing it.
    Frontier { upper: String, other: String },
    /// `a ≺ b` but `or(a) < or(b)`.
    OrderCount { lower: String, upper: String },
    EdgeDimension { lower: String, upper: String },
    Incomplete { stratum: String },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FrontierReport {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl FrontierReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of the order/closure equivalence, disjointness and the
/// frontier property.
pub fn check_frontier(s: &Stratification) -> Result<FrontierReport> {
    let st = &s.strata;
    let n = st.len();
    let c = containment_matrix(st)?;
    let mut violations = Vec::new();
    for i in 0..n {
        if st[i].incomplete {
            violations.push(Violation::Incomplete { stratum: st[i].label.clone() });
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let pl = point_less(&st[i], &st[j]);
            if pl != c[i][j] {
                violations.push(Violation::OrderMismatch {
                    lower: st[i].label.clone(),
                    upper: st[j].label.clone(),
                    point_less: pl,
                    contained: c[i][j],
                });
            }
            if pl && st[i].order() < st[j].order() {
                violations.push(Violation::OrderCount {
                    lower: st[i].label.clone(),
                    upper: st[j].label.clone(),
                });
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let found: Vec<Vec<Violation>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut v = Vec::new();
            if i < j {
                let mut opens = st[i].non_equations.clone();
                opens.extend(st[j].non_equations.iter().cloned());
                if open_dimension(&st[i].equations.sum(&st[j].equations), &opens)? >= 0 {
                    v.push(Violation::Overlap {
                        a: st[i].label.clone(),
                        b: st[j].label.clone(),
                    });
                }
            }
            if !c[i][j] {
                let meet = st[i].equations.sum(&st[j].equations);
                if open_dimension(&meet, &st[i].non_equations)? >= 0 {
                    v.push(Violation::Frontier {
                        upper: st[j].label.clone(),
                        other: st[i].label.clone(),
                    });
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    violations.extend(found.into_iter().flatten());
    for &(lo, up) in &s.frontier_edges {
        if st[lo].dimension >= st[up].dimension {
            violations.push(Violation::EdgeDimension {
                lower: st[lo].label.clone(),
                upper: st[up].label.clone(),
            });
        }
    }
    violations.sort();
    Ok(FrontierReport {
        pairs_checked: pairs.len(),
        violations,
    })
}

/// Negative control: replace strata `lower` and `upper` by their union,
/// assuming `lower` lies in the closure of `upper`. Non-equations of
/// `upper` that vanish somewhere on `lower` are dropped.
pub fn merge_strata(s: &Stratification, lower: usize, upper: usize) -> Result<Stratification> {
    let lo = &s.strata[lower];
    let up = &s.strata[upper];
    let mut non_equations = Vec::new();
    for h in &up.non_equations {
        if open_dimension(&lo.equations.with_generators([h.clone()]), &lo.non_equations)? < 0 {
            non_equations.push(h.clone());
        }
    }
    let mut merged = up.clone();
    merged.non_equations = non_equations;
    merged.dimension = open_dimension(&merged.equations, &merged.non_equations)?;
    let mut pairs: Vec<(Facon, crate::facon::Family)> = up
        .facon_set
        .iter()
        .cloned()
        .zip(up.witnesses.iter().cloned())
        .chain(lo.facon_set.iter().cloned().zip(lo.witnesses.iter().cloned()))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    pairs.dedup_by(|a, b| a.0 == b.0);
    merged.facon_set = pairs.iter().map(|p| p.0.clone()).collect();
    merged.witnesses = pairs.into_iter().map(|p| p.1).collect();
    let strata: Vec<Stratum> = s
        .strata
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != lower)
        .map(|(k, st)| if k == upper { merged.clone() } else { st.clone() })
        .collect();
    let frontier_edges = super::star::hasse_edges(&strata)?;
    Ok(Stratification { strata, frontier_edges })
}

/// DOT digraph of the frontier poset, edges from lower to upper stratum.
pub fn render_dot(s: &Stratification) -> String {
    let mut out = String::from("digraph strata {\n  rankdir=BT;\n");
    for st in &s.strata {
        let _ = writeln!(
            out,
            "  {} [label=\"{} | {} | {}\"];",
            st.label,
            st.label,
            st.dimension,
            st.facon_text()
        );
    }
    for &(lo, up) in &s.frontier_edges {
        let _ = writeln!(out, "  {} -> {};", s.strata[lo].label, s.strata[up].label);
    }
    out.push_str("}\n");
    out
}
