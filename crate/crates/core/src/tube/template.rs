use crate::error::Result;
use crate::facon::{limit_constraints, restrict_to_cell, Cell, Facon, Family};
use crate::poly::{Arena, CurveAnsatz, CurveCoordinate, Polynomial, PolynomialMap, Rational};
use crate::stratify::Stratum;

const MAX_WEIGHT: i64 = 6;

/// Ansatz for a weight vector: `c_j u^{w_j}` when `w_j > 0`, otherwise
/// `b_j + c_j u^{w_j}` with `b_j` replaced by `forced[j]` when given.
pub fn template_for(weights: &[i64], forced: &[Option<Rational>]) -> Result<CurveAnsatz> {
    let forced = |j: usize| forced.get(j).cloned().flatten();
    let mut names = Vec::new();
    for (j, &wj) in weights.iter().enumerate() {
        if wj <= 0 && forced(j).is_none() {
            names.push(format!("b{}", j + 1));
        }
    }
    for (j, &wj) in weights.iter().enumerate() {
        if wj != 0 {
            names.push(format!("c{}", j + 1));
        }
    }
    let symbols = Arena::new(names)?;
    let coords = weights
        .iter()
        .enumerate()
        .map(|(j, &wj)| {
            let shift = if wj > 0 {
                Polynomial::zero(&symbols)
            } else {
                match forced(j) {
                    Some(v) => Polynomial::constant(&symbols, v),
                    None => Polynomial::named(&symbols, &format!("b{}", j + 1)),
                }
            };
            let coeff = if wj != 0 {
                Polynomial::named(&symbols, &format!("c{}", j + 1))
            } else {
                Polynomial::zero(&symbols)
            };
            CurveCoordinate { shift, coeff, weight: wj }
        })
        .collect();
    CurveAnsatz::new(symbols, coords)
}

/// Ray template taken directly from a witness family.
pub fn template_from_witness(witness: &Family) -> Result<CurveAnsatz> {
    template_for(&witness.weights, &witness.forced)
}

/// Weight vectors with the sign pattern of `facon`, smallest total weight
/// first, then lexicographic in absolute values.
fn patterned_weights(n: usize, facon: &Facon) -> Vec<Vec<i64>> {
    let moving: Vec<usize> = (0..n)
        .filter(|j| facon.diverging.contains(j) || facon.fixed.contains(j))
        .collect();
    let mut abs: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in &moving {
        abs = abs
            .into_iter()
            .flat_map(|v| {
                (1..=MAX_WEIGHT).map(move |w| {
                    let mut v = v.clone();
                    v.push(w);
                    v
                })
            })
            .collect();
    }
    abs.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    abs.into_iter()
        .map(|v| {
            let mut w = vec![0; n];
            for (k, &j) in moving.iter().enumerate() {
                w[j] = if facon.diverging.contains(&j) { v[k] } else { -v[k] };
            }
            w
        })
        .collect()
}

/// Ray template whose limits fill `stratum` with the label of `facon`.
/// Diverging coordinates get positive weights, fixed ones negative weights
/// and the remaining ones stay constant. Falls back to the witness weights.
pub fn infer_template(f: &PolynomialMap, stratum: &Stratum, facon: &Facon, witness: &Family) -> Result<CurveAnsatz> {
    let cell = Cell::new(stratum.equations.clone(), stratum.non_equations.clone(), vec![stratum.cell])?;
    for w in patterned_weights(f.n(), facon) {
        let ansatz = CurveAnsatz::from_weights(&w);
        let analysis = match limit_constraints(f, &ansatz) {
            Ok(a) => a,
            Err(_) => continue,
        };
        if let Some(fam) = restrict_to_cell(&analysis, &cell)? {
            if fam.generic && fam.facon.same_label(facon) {
                return template_for(&w, &fam.forced);
            }
        }
    }
    template_from_witness(witness)
}
