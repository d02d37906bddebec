use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered, immutable list of variable names. Polynomials carry a shared
/// handle to the arena their exponent vectors are indexed by.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arena {
    names: Vec<String>,
}

pub type ArenaRef = Arc<Arena>;

impl Arena {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<ArenaRef> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_valid_name(n) {
                return Err(Error::InvalidVariable(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(Arena { names }))
    }

    /// `prefix1 .. prefixN`
    pub fn numbered(prefix: &str, n: usize) -> ArenaRef {
        Arc::new(Arena {
            names: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New arena `self ++ extra`. Existing indices are preserved, so the
    /// embedding of `self` is the identity on the first `len()` slots.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<ArenaRef> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Arena::new(names)
    }

    /// Concatenation of two arenas; fails on name clashes.
    pub fn concat(&self, other: &Arena) -> Result<ArenaRef> {
        self.extended(&other.names)
    }

    /// Index map from `self` into `target` by name.
    pub fn embedding_into(&self, target: &Arena) -> Result<Vec<usize>> {
        self.names
            .iter()
            .map(|n| {
                target
                    .index_of(n)
                    .ok_or_else(|| Error::ArenaMismatch(format!("variable {n} missing from target arena")))
            })
            .collect()
    }
}

impl fmt::Display for Arena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_and_duplicate_names() {
        assert!(Arena::new(["x1", "x1"]).is_err());
        assert!(Arena::new(["1x"]).is_err());
        assert!(Arena::new(["x_1", "Y2"]).is_ok());
    }

    #[test]
    fn extension_keeps_prefix() {
        let a = Arena::numbered("x", 2);
        let b = a.extended(&["t"]).unwrap();
        assert_eq!(a.embedding_into(&b).unwrap(), vec![0, 1]);
        assert_eq!(b.index_of("t"), Some(2));
    }
}
