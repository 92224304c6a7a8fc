//! Compiles the code listings of the guide in `book/src` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("../../../book/src/residues.md")]
pub mod residues {}
#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}
#[doc = include_str!("../../../book/src/weighted-planes.md")]
pub mod weighted_planes {}
#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
