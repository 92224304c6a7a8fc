//! Exact residue calculus for holomorphic vector fields with isolated
//! singularities, and the Futaki-type invariants built from it.
//!
//! The crate is organized bottom-up:
//!
//! - [`arith`]: rationals, sparse polynomials, factored rational functions
//!   and polynomial matrices.
//! - [`exprio`]: the expression grammar and the job document format.
//! - [`residue`]: Grothendieck point residues of vector-field germs, for
//!   non-degenerate and degenerate zeros.
//! - [`futaki`]: fixed-point sums giving Futaki-type invariants and
//!   characteristic numbers of orbifolds.
//! - [`wps`]: the weighted projective plane, its obstruction polynomial and
//!   the Kähler–Einstein obstruction check.
//!
//! ```
//! use residue_futaki::arith::VarList;
//! use residue_futaki::exprio::parse_poly;
//! use residue_futaki::residue::{grothendieck_residue, Caps, VectorFieldGerm};
//!
//! let vars = VarList::new(["z1", "z2"])?;
//! let germ = VectorFieldGerm::new(vec![parse_poly("z1^2", &vars)?, parse_poly("z2", &vars)?])?;
//! let r = grothendieck_residue(&germ, &parse_poly("(2*z1 + 1)^3", &vars)?, Caps::default())?;
//! assert_eq!(r.to_string(), "6");
//! # Ok::<(), residue_futaki::Error>(())
//! ```

pub mod arith;
pub mod error;
pub mod exprio;
pub mod futaki;
pub mod residue;
pub mod wps;

pub use error::{Error, Result};
