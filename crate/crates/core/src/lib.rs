//! Critical points of random polynomials with independent roots.
//!
//! The crate generates polynomials whose roots are drawn iid from a planar
//! probability measure (optionally with appended deterministic roots), finds
//! their critical points with a rational Aberth–Ehrlich solver, cross-checks
//! them against a companion-matrix eigensolver, and runs seeded Monte Carlo
//! campaigns measuring outliers, root/critical-point pairing and weak
//! convergence of the critical-point measure.
//!
//! Module map:
//! - [`measure`]: planar measures, samplers, Cauchy–Stieltjes transforms, zero sets.
//! - [`polyroots`]: root-form polynomials and the critical-point solver.
//! - [`cxlinalg`]: small dense complex linear algebra and determinant identities.
//! - [`nets`]: ε-nets of compact planar sets.
//! - [`stats`]: empirical measures, distances and concentration diagnostics.
//! - [`experiments`]: Monte Carlo campaigns.
//! - [`cli`]: configuration, persistence and SVG figures behind the `critpair` binary.

pub mod assignment;
pub mod cli;
pub mod config;
pub mod cxlinalg;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod nets;
pub mod par;
pub mod polyroots;
pub mod quadrature;
pub mod stats;
pub mod svg;

pub use error::{Error, Result};
pub use num_complex::Complex64;
