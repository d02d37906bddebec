//! Sparse multivariate polynomials over Q, polynomial maps, and Laurent
//! substitution of curve ansätze.

mod arena;
mod complex;
mod gcd;
mod laurent;
mod map;
mod monomial;
mod polynomial;

pub use arena::{is_valid_name, Arena, ArenaRef};
pub use complex::ComplexPoint;
pub use gcd::{content_in, divide_exact, gcd, squarefree_part};
pub use laurent::{substitute_curve, CurveAnsatz, CurveCoordinate, LaurentExpansion};
pub use map::PolynomialMap;
pub use monomial::Monomial;
pub use polynomial::Polynomial;

pub type Rational = num_rational::BigRational;

/// `p/q` as a `Rational`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(p.into())
}
