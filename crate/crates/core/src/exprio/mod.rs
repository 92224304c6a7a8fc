//! Text formats: the polynomial expression grammar and job documents.
//!
//! Polynomials print in descending graded-lex order with coefficients as
//! `p/q` (see [`Poly`](crate::arith::Poly)'s `Display`), and that output is
//! always accepted by [`parse_poly`].

mod job;
mod parse;

pub use job::{parse_job, parse_job_value, JobDescription, JobKind, JobOptions, Payload};
pub use parse::{parse_poly, ExprSource};
