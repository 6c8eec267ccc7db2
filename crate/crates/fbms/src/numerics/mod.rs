//! Shared numerical kernels: bracketed scalar root finding, adaptive
//! Runge-Kutta stepping and symmetric tridiagonal eigenvalues.

pub mod ode;
pub mod roots;
pub mod tridiag;

pub use ode::{integrate_adaptive, OdeError};
pub use roots::{bisect_monotone, expand_bracket_down, solve_bracketed, RootError};
pub use tridiag::SymTridiagonal;
