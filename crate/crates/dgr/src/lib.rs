//! File formats, witness storage, parallel search and the `dgr` command line
//! over [`dgr_core`].

pub mod cli;
pub mod format;
pub mod json;
pub mod parallel;
pub mod store;

pub use dgr_core;
