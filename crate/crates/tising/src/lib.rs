//! Ising models on triangular-type 3D lattices.
//!
//! The crate has three layers:
//!
//! * an **exact layer** ([`exact`]) that enumerates the finite-volume Gibbs
//!   measure on small regions and evaluates probabilities, expectations,
//!   covariances and conditional measures without sampling error;
//! * a **Monte Carlo layer** ([`mc`]) with heat-bath sweeps, a ghost-spin
//!   cluster update that stays valid in an external field, and union-find
//!   cluster statistics for spanning/coexistence measurements;
//! * a **verification layer** ([`verify`]) that turns finite-volume
//!   identities and correlation inequalities into executable checks over
//!   randomized instances, using the exact layer as ground truth.
//!
//! Between the exact and MC layers sits the [`hybrid`] module: a measure that
//! averages a Bernoulli availability mask on the top layer of a slab over the
//! Gibbs layer below, together with exact formulas for both of its partial
//! derivatives and the ratio table used by the slanted-path monotonicity
//! check.
//!
//! Start with the `examples/` directory: each file is a small runnable
//! program exercising one capability. The `tising` binary exposes the same
//! pipelines as subcommands (`verify`, `exact`, `hybrid`, `mc`, `sweep`,
//! `plot`).

pub mod cli;
pub mod cluster;
pub mod config;
pub mod error;
pub mod events;
pub mod exact;
pub mod hybrid;
pub mod lattice;
pub mod manifest;
pub mod mc;
pub mod plot;
pub mod rng;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{Box3, LatticeKind, Region, Site};
