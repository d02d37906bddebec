use num_traits::Zero;

use crate::error::Result;
use crate::groebner::{open_dimension, Ideal};
use crate::poly::{Polynomial, Rational};

/// Locally closed piece of S_F: points of `V(closure)` where every
/// polynomial in `opens` is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub closure: Ideal,
    pub opens: Vec<Polynomial>,
    pub dim: i64,
    /// Indices of the S_F components vanishing on the cell.
    pub members: Vec<usize>,
}

impl Cell {
    pub fn new(closure: Ideal, opens: Vec<Polynomial>, members: Vec<usize>) -> Result<Cell> {
        let dim = open_dimension(&closure, &opens)?;
        Ok(Cell {
            closure,
            opens,
            dim,
            members,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    pub fn open_product(&self) -> Polynomial {
        self.opens
            .iter()
            .fold(Polynomial::one(self.closure.arena()), |acc, p| &acc * p)
    }

    /// Exact membership of a rational point.
    pub fn contains_point(&self, a: &[Rational]) -> Result<bool> {
        for g in self.closure.generators() {
            if !g.evaluate_rational(a)?.is_zero() {
                return Ok(false);
            }
        }
        for h in &self.opens {
            if h.evaluate_rational(a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
