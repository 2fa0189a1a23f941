//! Conditional (control-program) simulation of quantum channel mixtures and
//! the two-way capacity bounds it yields.
//!
//! Modules, bottom-up:
//!
//! - [`opcore`]: dense matrices, subsystem signatures, density matrices.
//! - [`channels`]: Kraus/Choi channel algebra and the named channels.
//! - [`telecov`]: Weyl-group teleportation and covariance detection.
//! - [`condsim`]: control-program states, conditional simulation, REE chain
//!   and finite-size bounds, memory channels.
//! - [`entro`]: entropies, coherent informations and the PPT relative
//!   entropy of entanglement.
//! - [`cvgauss`]: Gaussian moments, lossy channels, Fock-space oracle.
//! - [`bounds`]: capacity reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channels;
pub mod condsim;
pub mod cvgauss;
pub mod entro;
mod error;
pub mod opcore;
pub mod telecov;

pub use error::{Error, Result};
