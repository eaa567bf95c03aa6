//! Exact combinatorics and lattice arithmetic for Picard groups of moduli of
//! (properly balanced) vector bundles on semistable curves.
//!
//! The crate is `no_std` + `alloc`: everything is exact integer / rational
//! arithmetic, no IO. The companion `vecpic` crate carries the CLI and the
//! JSON file formats.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod balance;
pub mod boundary;
pub mod error;
pub mod graph;
pub mod hstab;
pub mod invariants;
pub mod picard;
pub mod poly;
pub mod snf;
pub mod taut;
pub mod testcurves;

pub use error::{Error, Result};
