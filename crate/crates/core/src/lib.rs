//! Wireless mesh topologies with a controllable fractal dimension.
//!
//! The pipeline is: generate a quadrant-recursive point set ([`fractal`]),
//! place and wire it by radius ([`topology`]), measure structure
//! ([`metrics`], [`boxcount`]) and traffic performance ([`netsim`]), and run
//! whole experiment grids ([`harness`]). Layouts are produced through the
//! name-keyed [`registry`].

// `!(x > 0.0)` guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Pairwise loops index symmetric matrices by both coordinates.
#![allow(clippy::needless_range_loop)]

pub mod boxcount;
pub mod error;
pub mod fractal;
pub mod harness;
pub mod metrics;
pub mod netsim;
pub mod registry;
pub mod topology;

pub use error::{Error, Result};
