//! Conformable fractional ODE solver based on the fractional differential
//! transform.
//!
//! Functions are represented by truncated fractional power series in
//! `(t - t0)^alpha` ([`FracSeries`]). Conformable derivatives of order
//! `beta` become index shifts with a falling-factorial weight, so an explicit
//! equation `T_beta y = rhs(y, T_b y, t)` turns into a recurrence over the
//! series coefficients ([`solver::solve`]).
//!
//! The [`oracle`] module checks solutions independently: a finite-difference
//! conformable derivative, ODE residuals on a grid, and closed-form solutions
//! of a set of reference problems.

pub mod error;
pub mod oracle;
pub mod series;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use series::{EvalGrid, FracSeries, Grid};
pub use solver::{solve, validate, Diagnostic, DiagnosticCode, Expr, OdeProblem};
pub use transform::{gamma_ratio, DerivOrder};
