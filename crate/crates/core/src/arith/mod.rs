//! Exact arithmetic kernel: rationals, sparse polynomials, factored rational
//! functions, polynomial matrices and exact linear solves.

pub mod linsolve;
mod matrix;
mod monomial;
mod poly;
mod rat;
mod ratfunc;

pub use matrix::PolyMatrix;
pub use monomial::{Monomial, VarList};
pub use poly::{Coeff, Poly};
pub use rat::{binomial, factorial, int, parse_rat, rat, Rat};
pub use ratfunc::{RatFunc, Value};
