//! Dynamic hypergraph modeling: AR(1) edge processes, maximum-likelihood
//! estimation with confidence intervals, residual permutation diagnostics,
//! transition-probability spectral clustering under a hypergraph stochastic
//! block model, likelihood-based change-point detection, and BIC/AIC
//! community-count selection.
//!
//! The crate is organized bottom-up:
//!
//! - [`hypercore`]: canonical hyperedges, edge universes, snapshots, series
//! - [`ar1`]: the AR(1) edge process and its closed-form quantities
//! - [`estimate`]: per-edge transition MLEs and asymptotic intervals
//! - [`diagnose`]: residual contingency statistic and permutation test
//! - [`hsbm`]: similarity matrices, combined Laplacian, spectral clustering
//! - [`changepoint`]: segmented-likelihood change-point scan
//! - [`modelsel`]: BIC/AIC selection of the community count
//! - [`ingest`]: temporal edge-list parsing, clique expansion, decomposition
//! - [`harness`]: replication studies behind the `bench-*` CLI commands
//!
//! All randomness is counter-based ([`rng`]) and every parallel loop
//! ([`exec`]) reduces in index order, so results are bit-identical for a
//! fixed seed regardless of thread count.

pub mod ar1;
pub mod block;
pub mod changepoint;
pub mod diagnose;


pub mod error;
pub mod estimate;
pub mod exec;
pub mod harness;

pub mod hsbm;
pub mod hypercore;
pub mod ingest;
pub mod modelsel;

pub mod kmeans;
pub mod linalg;
pub mod metrics;

pub mod rng;
pub mod stats;

pub use error::{Error, Result};
