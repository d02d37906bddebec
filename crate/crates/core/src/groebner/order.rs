use std::cmp::Ordering;

use crate::poly::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InnerOrder {
    Lex,
    GrevLex,
}

/// Monomial order. Variables compare by arena index, lower index larger.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Groups compared left to right; each group uses its inner order on
    /// the listed variables. Groups must partition the arena.
    Block(Vec<(Vec<usize>, InnerOrder)>),
}

fn cmp_lex_on(a: &[u32], b: &[u32], vars: impl Iterator<Item = usize>) -> Ordering {
    for i in vars {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn cmp_grevlex_on(a: &[u32], b: &[u32], vars: &[usize]) -> Ordering {
    let da: u32 = vars.iter().map(|&i| a[i]).sum();
    let db: u32 = vars.iter().map(|&i| b[i]).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for &i in vars.iter().rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Two-block elimination order: `drop` variables above all others,
    /// grevlex inside each block.
    pub fn elimination(nvars: usize, drop: &[usize]) -> MonomialOrder {
        let keep: Vec<usize> = (0..nvars).filter(|i| !drop.contains(i)).collect();
        let mut d = drop.to_vec();
        d.sort_unstable();
        d.dedup();
        MonomialOrder::Block(vec![(d, InnerOrder::GrevLex), (keep, InnerOrder::GrevLex)])
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for i in (0..a.len()).rev() {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block(groups) => {
                for (vars, inner) in groups {
                    let o = match inner {
                        InnerOrder::Lex => cmp_lex_on(a, b, vars.iter().copied()),
                        InnerOrder::GrevLex => cmp_grevlex_on(a, b, vars),
                    };
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Checks that block groups partition `0..nvars`.
    pub fn is_valid_for(&self, nvars: usize) -> bool {
        match self {
            MonomialOrder::Block(groups) => {
                let mut seen = vec![false; nvars];
                for (vars, _) in groups {
                    for &v in vars {
                        if v >= nvars || seen[v] {
                            return false;
                        }
                        seen[v] = true;
                    }
                }
                seen.into_iter().all(|s| s)
            }
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        let o = MonomialOrder::GrevLex;
        // x*z < y^2 in grevlex with x > y > z
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::elimination(3, &[2]);
        assert!(o.is_valid_for(3));
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
    }
}
