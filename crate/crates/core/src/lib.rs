//! Community (proximity) and structural-role node embedding mechanisms.
//!
//! The crate is organised around the two mechanism families:
//!
//! * proximity mechanisms: explicit random walks ([`walks`]), implicit walk
//!   matrices and feature diffusion ([`diffusion`]);
//! * role mechanisms: graphlet orbit counts and motif graphs ([`graphlets`]),
//!   feature-based walks and feature factorization ([`roles`]).
//!
//! [`embedding`] turns both families into node embeddings through one shared
//! corpus → co-occurrence → factorization pipeline, [`equivalence`] computes and
//! verifies classical and feature-based node equivalences, and [`diagnostics`]
//! decides which notion a given embedding preserves.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod diffusion;
pub mod embedding;
pub mod equivalence;
pub mod error;
pub mod exec;
pub mod features;
pub mod generators;
pub mod graph;
pub mod graphlets;
pub mod io;
pub mod partition;
pub mod roles;
pub mod stats;
pub mod walks;

pub use error::{Error, Result};
pub use exec::Exec;
pub use features::FeatureMatrix;
pub use graph::Graph;
pub use partition::{Partition, RoleGraph};
