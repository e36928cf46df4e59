//! Fundamental functions of cardinal interpolation on the integer lattice.
//!
//! Given a radial basis function `φ` with transform `φ̂`, the cardinal
//! fundamental function `L` satisfies `L(j) = δ_{0j}` on `ℤ^n` and
//! interpolates lattice data through `s(x) = Σ_j f(j) L(x − j)`. This crate
//! evaluates `L̂` and `L` for polyharmonic, Gaussian and multiquadric families
//! and studies how the interpolants approach band-limited functions as the
//! family parameter grows.

pub mod cli;
pub mod convergence;
pub mod families;
pub mod fundamental;
pub mod interpolation;
pub mod io;
pub mod lattice;
pub mod paleywiener;
pub mod specfun;

pub use families::{FamilyError, FamilyKind, FamilySpec};
pub use specfun::{BesselEvalConfig, SpecfunError};
