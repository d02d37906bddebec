//! Façons: labels `(I)[J]` recording which coordinates of a curve escape
//! to infinity and which converge to point-independent values.

mod analysis;
mod cell;
mod search;
mod star;

pub use analysis::{classify_coordinates, limit_constraints, Category, LimitAnalysis};
pub use cell::Cell;
pub use search::{candidate_weights, facons_of_component, generic_witnesses, restrict_to_cell, FaconSearch, Family};
pub use star::{star_refine, StarGroup};
pub(crate) use star::cutting_equation;

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// `(I)[J]` with a star level. Indices are 0-based internally and printed
/// 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facon {
    pub diverging: Vec<usize>,
    pub fixed: Vec<usize>,
    pub star: u32,
}

impl Facon {
    pub fn new(mut diverging: Vec<usize>, mut fixed: Vec<usize>, star: u32) -> Result<Facon> {
        diverging.sort_unstable();
        diverging.dedup();
        fixed.sort_unstable();
        fixed.dedup();
        if diverging.is_empty() {
            return Err(Error::Precondition("a façon needs at least one diverging coordinate".into()));
        }
        if diverging.iter().any(|i| fixed.contains(i)) {
            return Err(Error::Precondition("diverging and fixed index sets overlap".into()));
        }
        Ok(Facon {
            diverging,
            fixed,
            star,
        })
    }

    /// Parse `(1,3)[2]` or `(2)[1]^{1*}` (1-based indices).
    pub fn parse(s: &str) -> Result<Facon> {
        let bad = || Error::Precondition(format!("malformed façon label `{s}`"));
        let s = s.trim();
        let (body, star) = match s.find('^') {
            Some(k) => {
                let st = s[k + 1..].trim_start_matches('{').trim_end_matches('}').trim_end_matches('*');
                (&s[..k], st.parse::<u32>().map_err(|_| bad())?)
            }
            None => (s, 0),
        };
        let open = body.strip_prefix('(').ok_or_else(bad)?;
        let close = open.find(')').ok_or_else(bad)?;
        let rest = open[close + 1..].strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let idx = |t: &str| -> Result<Vec<usize>> {
            t.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| match x.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(bad()),
                })
                .collect()
        };
        Facon::new(idx(&open[..close])?, idx(rest)?, star)
    }

    pub fn with_star(&self, star: u32) -> Facon {
        Facon {
            star,
            ..self.clone()
        }
    }

    /// Same `(I)[J]`, ignoring star levels.
    pub fn same_label(&self, other: &Facon) -> bool {
        self.diverging == other.diverging && self.fixed == other.fixed
    }

    /// `(I)[J]` without the star suffix.
    pub fn base_label(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        format!("({})[{}]", join(&self.diverging), join(&self.fixed))
    }
}

impl fmt::Display for Facon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base_label())?;
        if self.star > 0 {
            write!(f, "^{{{}*}}", self.star)?;
        }
        Ok(())
    }
}

/// Primitive degree vector on `I ∪ J` (indices ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PQUple {
    pub indices: Vec<usize>,
    pub degrees: Vec<u64>,
}

impl PQUple {
    /// Degrees `|w_j|` on the façon's coordinates, made primitive.
    pub fn from_weights(weights: &[i64], facon: &Facon) -> PQUple {
        let mut indices: Vec<usize> = facon.diverging.iter().chain(&facon.fixed).copied().collect();
        indices.sort_unstable();
        let degrees: Vec<u64> = indices.iter().map(|&j| weights[j].unsigned_abs()).collect();
        PQUple::new(indices, degrees)
    }

    pub fn new(indices: Vec<usize>, degrees: Vec<u64>) -> PQUple {
        let g = degrees.iter().fold(0u64, |g, d| g.gcd(d));
        let degrees = if g > 1 {
            degrees.into_iter().map(|d| d / g).collect()
        } else {
            degrees
        };
        PQUple { indices, degrees }
    }
}

impl fmt::Display for PQUple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.degrees.iter().map(u64::to_string).collect();
        write!(f, "({})", d.join(","))
    }
}

/// Proportional with a positive rational factor.
pub fn uple_equivalent(u1: &PQUple, u2: &PQUple) -> Result<bool> {
    if u1.indices != u2.indices {
        return Err(Error::LabelMismatch(format!(
            "uples over {:?} and {:?}",
            u1.indices, u2.indices
        )));
    }
    let a = PQUple::new(u1.indices.clone(), u1.degrees.clone());
    let b = PQUple::new(u2.indices.clone(), u2.degrees.clone());
    Ok(a.degrees == b.degrees)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for s in ["(1,3)[2]", "(2)[1]^{1*}", "(3)[1,2]", "(1)[]"] {
            assert_eq!(Facon::parse(s).unwrap().to_string(), s);
        }
        assert!(Facon::parse("()[1]").is_err());
        assert!(Facon::parse("(1)[1]").is_err());
    }

    #[test]
    fn proportional_uples() {
        let u = |d: &[u64]| PQUple::new(vec![0, 1], d.to_vec());
        assert!(uple_equivalent(&u(&[1, 1]), &u(&[2, 2])).unwrap());
        assert!(!uple_equivalent(&u(&[1, 2]), &u(&[2, 2])).unwrap());
        let other = PQUple::new(vec![0, 2], vec![1, 1]);
        assert!(uple_equivalent(&u(&[1, 1]), &other).is_err());
    }
}
