//! Reconstruction of functions from attenuated Radon projections by
//! orthogonal polynomial expansions on the disk, sphere, ball and cylinder.
//!
//! The attenuation is the weight `W_μ(x, y) = (1 - x² - y²)^(μ-1/2)`; at
//! `μ = 1/2` the data are ordinary X-ray line integrals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis2d;
pub mod cli;
pub mod error;
pub mod io;
pub mod phantoms;
pub mod polynomial;
pub mod quadrature;
pub mod radon2d;
pub mod recon2d;
pub mod selftest;
pub mod specfun;
pub mod sphere3d;
pub mod volume3d;

pub use error::{OpedError, Result};
