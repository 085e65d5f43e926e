//! Integrable maps, their invariant varieties of periodic points, and the
//! fixed-period recurrence equations obtained by eliminating variables on
//! those varieties.
//!
//! Everything symbolic is exact over Q ([`algebra::MPoly`],
//! [`algebra::RatFunc`]); complex doubles appear only when evaluating maps
//! and solving univariate equations.

pub mod algebra;
pub mod biquad;
pub mod catalog;
pub mod elim;
pub mod moebius;
pub mod orbit;
pub mod qrt;
pub mod rng;
pub mod varieties;
mod error;

pub use error::{Error, Result};
