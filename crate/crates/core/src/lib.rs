//! Numerical library for Pascali systems `w_ζ̄ + B₁w + B₂w̄ = 0` on planar domains.
//!
//! The crate provides the building blocks and the end-to-end pipelines for
//! constructive approximation by global solutions of such systems:
//!
//! * [`grid`] — uniform complex-plane grids, ℂⁿ-valued grid functions,
//!   discrete `∂̄`, masks and norms;
//! * [`expr`] — a small expression language for coefficients and targets;
//! * [`cauchy_green`] — the discrete Cauchy–Green (Pompeiu) transform via
//!   zero-padded FFT convolution;
//! * [`operator`] — the operator `∂̄_B`, its formal adjoint and the
//!   integration-by-parts pairing;
//! * [`solver`] — the integral operator `𝒫_D`, its Krylov inversion,
//!   solution correction, formal-power bases and Runge-type least squares;
//! * [`geometry`] — admissible sets, cut-offs, smooth extensions and the
//!   extension of boundary data along Jordan arcs;
//! * [`approx`] — the Mergelyan and Carleman approximation pipelines;
//! * [`scenario`] — config-driven scenario runner with CSV/SVG/JSON reports.
//!
//! The [`oracle`] module holds independent reference implementations (direct
//! summation, component labeling, dense least squares) used by the test
//! suites to cross-check the fast paths.

pub mod approx;
pub mod cauchy_green;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod grid;
pub mod operator;
pub mod oracle;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{Grid, GridFunction, Mask};
