//! Seed-set minimization with probabilistic coverage guarantees.
//!
//! Given a directed graph whose edges carry activation probabilities, the
//! independent cascade process spreads activation from a seed set to the rest
//! of the graph. This crate selects a seed set of minimum size such that the
//! number of activated nodes inside a target set reaches a threshold `eta`
//! with probability at least `P`:
//!
//! * [`graph`] — probability-weighted directed graphs, edge-list parsing,
//!   weighting schemes, one-way bipartite views.
//! * [`diffusion`] — the independent cascade simulator (stepwise and
//!   live-edge-table modes) and reproducible random streams.
//! * [`estimate`] — Monte Carlo estimators for coverage probability and
//!   expected coverage, the Hoeffding run-count rule, and an exact
//!   brute-force oracle for small graphs.
//! * [`bipartite`] — exact coverage distributions on one-way bipartite
//!   graphs via dynamic programming, plus a two-stage algorithm for the
//!   full-coverage case.
//! * [`solve`] — the greedy sequence builder, baseline rankers
//!   (random, high-degree, PageRank), and the prefix search that turns a
//!   ranked sequence into a minimum qualifying seed set.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature and enable `libm` for embedded float math.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("either the `std` or the `libm` feature must be enabled");

mod fmath;

pub mod bipartite;
pub mod diffusion;
pub mod estimate;
pub mod graph;
pub mod solve;

pub use diffusion::{Model, RngStream};
pub use graph::{BipartiteGraph, CoverageInstance, NodeId, ProbGraph};
