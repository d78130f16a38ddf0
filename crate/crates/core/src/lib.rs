//! Disjoint Golomb rulers: verification, constructions, exact search and
//! bound propagation.
//!
//! An `(I, J, n)`-DGR is a family of `I` pairwise disjoint Golomb rulers, each
//! a `J`-subset of `{1, ..., n}`; `H(I, J)` is the least such `n`. This crate
//! is `no_std` (it needs `alloc`); file formats, the command line and
//! multi-threaded search live in the `dgr` crate.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod conjectures;
pub mod constructions;
pub mod error;
pub mod gf;
pub mod ruler;
pub mod search;
pub mod system;

pub use error::{BoundsError, ConstructionError, FieldError, RulerError};
pub use ruler::Ruler;
pub use system::{DgrSystem, Gap, Header, ValidationReport, Violation};
