//! Exact combinatorics of weight systems of isolated quasihomogeneous
//! singularities: cyclotomic divisor arithmetic, the conditions (C2) and
//! (C2-bar), excellent orders and compatibility, Orlik-block coverings, and
//! a deterministic census engine over reduced weight systems.

pub mod arith;
pub mod blocks;
pub mod census;
pub mod cyclo;
pub mod error;
pub mod orders;
pub mod poly;
pub mod report;
pub mod semigroup;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
