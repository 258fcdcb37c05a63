//! Union-subgraph structural coefficients for message-passing graph networks.
//!
//! The crate covers graph I/O and generators, neighborhood substructures,
//! per-edge descriptors, Weisfeiler-Leman refinement and a small neural
//! stack that consumes the coefficients.

#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod dataset;
pub mod descriptors;
pub mod error;
pub mod graph;
pub mod neural;
pub mod substructure;
pub mod wl;

pub use error::{Error, Result};
