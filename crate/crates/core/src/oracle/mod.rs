//! Independent checks for transform solutions.
//!
//! Nothing here goes through the transform recurrence: derivatives are taken
//! by finite differences on the function values, using the identity
//! `T_gamma f(t) = (t - t0)^(1 - gamma) f'(t)` for differentiable `f` and
//! `T_beta f = T_(beta - m) f^(m)` for `m < beta <= m + 1`.

pub mod registry;

use crate::error::{Error, Result};
use crate::series::{FracSeries, Grid};
use crate::solver::{solve, Expr, OdeProblem};
use crate::transform::integer_part;

pub use registry::{exact_registry, ExampleId, ExamplePlan};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Finite-difference step for a first derivative, relative to `max(1, |t|)`.
    pub h: f64,
    /// Smallest `t - t0` at which the operator is evaluated.
    pub t_min_offset: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            h: 1e-6,
            t_min_offset: 1e-3,
        }
    }
}

impl OracleConfig {
    fn check(&self) -> Result<()> {
        if self.h > 0.0 && self.t_min_offset > 0.0 {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "oracle step and offset must be positive, got h = {}, offset = {}",
                self.h, self.t_min_offset
            )))
        }
    }
}

/// Fourth-order central difference of the `n`-th derivative, by nesting the
/// 5-point first-derivative stencil `n` times.
fn nested_derivative(f: &dyn Fn(f64) -> f64, x: f64, n: usize, h: f64) -> f64 {
    if n == 0 {
        return f(x);
    }
    let g = |z: f64| nested_derivative(f, z, n - 1, h);
    (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h)
}

/// Conformable derivative of order `beta` of `f` at `t`, anchored at `t0`.
///
/// Each nesting level of the stencil uses step `h^(1/(m+1))` (relative), so
/// that rounding stays near `h` after `m + 1` levels. The step is also capped
/// so the stencil never reaches left of `t0`.
pub fn conformable_deriv(
    f: &dyn Fn(f64) -> f64,
    beta: f64,
    t: f64,
    t0: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    cfg.check()?;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Argument(format!(
            "derivative order must be positive, got {beta}"
        )));
    }
    let offset = t - t0;
    if !(offset >= cfg.t_min_offset * (1.0 - 1e-12)) {
        return Err(Error::Domain { t, t0 });
    }
    let m = integer_part(beta);
    let frac = beta - m as f64;
    let levels = m + 1;
    let scale = t.abs().max(1.0);
    let h = (cfg.h.powf(1.0 / levels as f64) * scale).min(offset / (4.0 * levels as f64));
    let d = nested_derivative(f, t, levels, h);
    Ok(offset.powf(1.0 - frac) * d)
}

/// Pointwise value of an expression, with `y` and its conformable
/// derivatives taken from `y_fn`.
pub fn eval_expr(
    e: &Expr,
    t: f64,
    alpha: f64,
    t0: f64,
    y_fn: &dyn Fn(f64) -> f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    let rec = |x: &Expr| eval_expr(x, t, alpha, t0, y_fn, cfg);
    let phase_var = (t - t0).powf(alpha) / alpha;
    Ok(match e {
        Expr::Const(c) => *c,
        Expr::Unknown => y_fn(t),
        Expr::Deriv(o) => conformable_deriv(y_fn, o.beta(), t, t0, cfg)?,
        Expr::Add(l, r) => rec(l)? + rec(r)?,
        Expr::Sub(l, r) => rec(l)? - rec(r)?,
        Expr::Neg(x) => -rec(x)?,
        Expr::Mul(fs) => fs.iter().try_fold(1.0, |acc, x| Ok::<_, Error>(acc * rec(x)?))?,
        Expr::Pow(b, n) => rec(b)?.powi(*n as i32),
        Expr::Monomial(p) => (t - t0).powf(*p),
        Expr::ExpSrc(l) => (l * phase_var).exp(),
        Expr::SinSrc { omega, phase } => (omega * phase_var + phase).sin(),
        Expr::CosSrc { omega, phase } => (omega * phase_var + phase).cos(),
    })
}

/// Comparison of a series against an exact solution and/or its equation on
/// a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub grid: Grid,
    pub series_values: Vec<f64>,
    pub exact_values: Option<Vec<f64>>,
    pub residuals: Option<Vec<f64>>,
    /// Zero when there is nothing to compare.
    pub max_abs_error: f64,
    pub max_abs_residual: f64,
}

impl VerifyReport {
    pub fn abs_errors(&self) -> Option<Vec<f64>> {
        self.exact_values.as_ref().map(|ex| {
            ex.iter()
                .zip(&self.series_values)
                .map(|(e, s)| (e - s).abs())
                .collect()
        })
    }
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| if x.abs() > m || x.is_nan() { x.abs() } else { m })
}

fn series_fn(y: &FracSeries) -> impl Fn(f64) -> f64 + '_ {
    move |t| y.evaluate(t).unwrap_or(f64::NAN)
}

/// ODE residual `T_beta_max y - rhs` of the series `y` at each grid point.
pub fn residual(
    p: &OdeProblem,
    y: &FracSeries,
    grid: &Grid,
    cfg: &OracleConfig,
) -> Result<VerifyReport> {
    cfg.check()?;
    grid.check_domain(p.t0 + cfg.t_min_offset * (1.0 - 1e-12))?;
    let f = series_fn(y);
    let series_values = y.sample(grid)?.values;
    let residuals = grid
        .points()
        .iter()
        .map(|&t| {
            let lhs = conformable_deriv(&f, p.principal.beta(), t, p.t0, cfg)?;
            let rhs = eval_expr(&p.rhs, t, p.alpha, p.t0, &f, cfg)?;
            Ok(lhs - rhs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        grid: grid.clone(),
        series_values,
        exact_values: None,
        max_abs_error: 0.0,
        max_abs_residual: max_abs(&residuals),
        residuals: Some(residuals),
    })
}

/// Samples an already solved series against an exact solution.
pub fn compare_series(
    y: &FracSeries,
    exact: &dyn Fn(f64) -> f64,
    grid: &Grid,
) -> Result<VerifyReport> {
    let series_values = y.sample(grid)?.values;
    let exact_values: Vec<f64> = grid.points().iter().map(|&t| exact(t)).collect();
    let errs: Vec<f64> = exact_values
        .iter()
        .zip(&series_values)
        .map(|(e, s)| e - s)
        .collect();
    Ok(VerifyReport {
        grid: grid.clone(),
        series_values,
        max_abs_error: max_abs(&errs),
        exact_values: Some(exact_values),
        residuals: None,
        max_abs_residual: 0.0,
    })
}

/// Solves `p` and compares the series with `exact` on `grid`.
pub fn compare(p: &OdeProblem, exact: &dyn Fn(f64) -> f64, grid: &Grid) -> Result<VerifyReport> {
    grid.check_domain(p.t0)?;
    compare_series(&solve(p)?, exact, grid)
}
