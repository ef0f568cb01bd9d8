//! Reference problems with closed-form solutions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::solver::{Expr, OdeProblem};
use crate::transform::DerivOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    /// `T_a y = -y`, `y(0) = 1`; exact `exp(-t^a / a)`.
    Example1,
    /// Riccati `T_a y = 1 + 2y + y^2`, `y(0) = 0`; exact `t^a / (a - t^a)`.
    Example2,
    /// Riccati `T_a y = 1 - y^2`, `y(0) = 0`; exact `tanh(t^a / a)`.
    Example3,
    /// Bagley-Torvik `D2 y + D1.5 y + y = 1 + t`, `y(0) = y'(0) = 1`; exact `1 + t`.
    Example4,
    /// `T_1.5 y = T_0.5 y`, `y(0) = 0`, `y'(0) = 1`; exact `e^t - 1`.
    Example5,
}

/// How a reference problem is run and checked end to end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExamplePlan {
    pub alpha: f64,
    pub n_terms: usize,
    /// `(start, stop, count)` of the comparison grid.
    pub compare_grid: (f64, f64, usize),
    pub max_abs_error: f64,
    /// `(start, stop, count)` of the interior residual grid.
    pub residual_grid: (f64, f64, usize),
    pub max_abs_residual: f64,
}

const RESIDUAL_TOL: f64 = 1e-4;

impl ExampleId {
    pub const ALL: [ExampleId; 5] = [
        ExampleId::Example1,
        ExampleId::Example2,
        ExampleId::Example3,
        ExampleId::Example4,
        ExampleId::Example5,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExampleId::Example1 => "example1",
            ExampleId::Example2 => "example2",
            ExampleId::Example3 => "example3",
            ExampleId::Example4 => "example4",
            ExampleId::Example5 => "example5",
        }
    }

    /// The equation in the command-line equation syntax.
    pub fn equation(&self) -> &'static str {
        match self {
            ExampleId::Example1 => "D[a] y = -y",
            ExampleId::Example2 => "D[a] y = 1 + 2*y + y^2",
            ExampleId::Example3 => "D[a] y = 1 - y^2",
            ExampleId::Example4 => "1*D[2] y + 1*D[1.5] y + 1*y = 1 + t^1",
            ExampleId::Example5 => "D[1.5] y = D[0.5] y",
        }
    }

    pub fn init(&self) -> Vec<f64> {
        match self {
            ExampleId::Example1 => vec![1.0],
            ExampleId::Example2 | ExampleId::Example3 => vec![0.0],
            ExampleId::Example4 => vec![1.0, 1.0],
            ExampleId::Example5 => vec![0.0, 1.0],
        }
    }

    /// Remarks about the published form of the problem, if any.
    pub fn note(&self) -> Option<&'static str> {
        match self {
            ExampleId::Example2 => Some(
                "the commonly printed recurrence for this equation, \
                 a(k+1)Y(k+1) = delta(k) - sum Y(l)Y(k-l), drops the 2Y(k) term \
                 and flips the sign of the convolution; the transform of the \
                 stated equation is delta(k) + 2Y(k) + sum Y(l)Y(k-l), and it \
                 yields the printed series Y(k) = a^-k",
            ),
            _ => None,
        }
    }

    /// The problem as an explicit equation `T_beta_max y = rhs`.
    pub fn problem(&self, alpha: f64, n_terms: usize) -> Result<OdeProblem> {
        let d = |beta: f64| DerivOrder::new(beta, alpha).map(Expr::Deriv);
        let y = || Expr::Unknown;
        let c = Expr::Const;
        let (beta_max, rhs) = match self {
            ExampleId::Example1 => (alpha, -y()),
            ExampleId::Example2 => (alpha, c(1.0) + c(2.0) * y() + y().pow(2)),
            ExampleId::Example3 => (alpha, c(1.0) - y().pow(2)),
            ExampleId::Example4 => (2.0, c(1.0) + Expr::Monomial(1.0) - d(1.5)? - y()),
            ExampleId::Example5 => (1.5, d(0.5)?),
        };
        OdeProblem::new(alpha, 0.0, beta_max, rhs, self.init(), n_terms)
    }

    /// Closed-form solution for the given order.
    pub fn exact(&self, alpha: f64) -> Box<dyn Fn(f64) -> f64 + Send + Sync> {
        match self {
            ExampleId::Example1 => Box::new(move |t: f64| (-t.powf(alpha) / alpha).exp()),
            ExampleId::Example2 => Box::new(move |t: f64| {
                let w = t.powf(alpha);
                w / (alpha - w)
            }),
            // (e^(2x) - 1) / (e^(2x) + 1) with x = t^a / a
            ExampleId::Example3 => Box::new(move |t: f64| (t.powf(alpha) / alpha).tanh()),
            ExampleId::Example4 => Box::new(|t: f64| 1.0 + t),
            ExampleId::Example5 => Box::new(|t: f64| t.exp_m1()),
        }
    }

    /// Interval on which the closed form may be compared with the series.
    /// Example 2 has a pole at `t^a = a`; it is capped at 90% of that point.
    pub fn valid_interval(&self, alpha: f64) -> (f64, f64) {
        match self {
            ExampleId::Example2 => (0.0, 0.9 * alpha.powf(1.0 / alpha)),
            _ => (0.0, f64::INFINITY),
        }
    }

    /// Run settings and pass thresholds for the end-to-end check.
    pub fn plan(&self) -> ExamplePlan {
        let alpha: f64 = 0.5;
        let (n_terms, compare_grid, max_abs_error) = match self {
            ExampleId::Example1 => (30, (0.0, 0.5, 50), 1e-8),
            ExampleId::Example2 => (60, (0.0, 0.5 * alpha.powf(1.0 / alpha), 50), 1e-6),
            ExampleId::Example3 => (120, (0.0, 0.4, 41), 1e-6),
            ExampleId::Example4 => (20, (0.0, 2.0, 41), 1e-12),
            ExampleId::Example5 => (40, (0.0, 1.0, 41), 1e-8),
        };
        let hi = compare_grid.1;
        ExamplePlan {
            alpha,
            n_terms,
            compare_grid,
            max_abs_error,
            residual_grid: (0.1 * hi, hi, 10),
            max_abs_residual: RESIDUAL_TOL,
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown example '{s}'")))
    }
}

/// Looks up a reference problem by name (`example1` .. `example5`).
pub fn exact_registry(name: &str) -> Result<ExampleId> {
    name.parse()
}
