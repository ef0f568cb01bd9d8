//! Truncated fractional power series and their transform algebra.
//!
//! A [`FracSeries`] stores the coefficients `F(k)` of
//!
//! ```text
//! f(t) = sum_k F(k) (t - t0)^(alpha k)
//! ```
//!
//! which doubles as the conformable fractional differential transform of `f`
//! at `t0`. Sums, scalar multiples and products of functions map onto
//! coefficientwise arithmetic and convolution of these sequences.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Absolute tolerance used when deciding whether a ratio such as `p / alpha`
/// is an integer.
pub const INTEGRALITY_TOL: f64 = 1e-9;

/// Returns the nearest integer if `x` is within [`INTEGRALITY_TOL`] of it.
pub fn snap_to_integer(x: f64) -> Option<i64> {
    if !x.is_finite() {
        return None;
    }
    let r = x.round();
    ((x - r).abs() <= INTEGRALITY_TOL).then_some(r as i64)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

pub(crate) fn check_t0(t0: f64) -> Result<()> {
    if t0.is_finite() && t0 >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidBasePoint(t0))
    }
}

/// A truncated fractional power series in `(t - t0)^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracSeries {
    alpha: f64,
    t0: f64,
    coeffs: Vec<f64>,
}

impl FracSeries {
    pub fn new(alpha: f64, t0: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_alpha(alpha)?;
        check_t0(t0)?;
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(Self { alpha, t0, coeffs })
    }

    pub fn zeros(alpha: f64, t0: f64, len: usize) -> Result<Self> {
        Self::new(alpha, t0, vec![0.0; len])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient `k`, or zero past the truncation point.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Same `alpha` and `t0`, compared exactly.
    pub fn is_compatible(&self, other: &FracSeries) -> bool {
        self.alpha == other.alpha && self.t0 == other.t0
    }

    fn check_compatible(&self, other: &FracSeries) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::Incompatible(
                self.alpha,
                self.t0,
                other.alpha,
                other.t0,
            ))
        }
    }

    fn with_coeffs(&self, coeffs: Vec<f64>) -> Self {
        Self {
            alpha: self.alpha,
            t0: self.t0,
            coeffs,
        }
    }

    /// First `len` coefficients (zero-padded if `len` exceeds the current length).
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptySeries);
        }
        Ok(self.with_coeffs((0..len).map(|k| self.coeff(k)).collect()))
    }

    /// Coefficientwise sum; the shorter operand is zero-padded.
    pub fn add(&self, other: &FracSeries) -> Result<Self> {
        self.zip_padded(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FracSeries) -> Result<Self> {
        self.zip_padded(other, |a, b| a - b)
    }

    fn zip_padded(&self, other: &FracSeries, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_compatible(other)?;
        let len = self.len().max(other.len());
        Ok(self.with_coeffs(
            (0..len)
                .map(|k| op(self.coeff(k), other.coeff(k)))
                .collect(),
        ))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|x| c * x).collect())
    }

    /// Transform of the pointwise product. The result is truncated to the
    /// shorter operand, past which the convolution would be incomplete.
    pub fn cauchy_product(&self, other: &FracSeries) -> Result<Self> {
        self.check_compatible(other)?;
        let len = self.len().min(other.len());
        let coeffs = (0..len)
            .map(|k| {
                (0..=k)
                    .map(|l| self.coeffs[l] * other.coeffs[k - l])
                    .sum()
            })
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    /// Inverse transform: sums the series at `t` by Horner's scheme in
    /// `w = (t - t0)^alpha`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t >= self.t0) || !t.is_finite() {
            return Err(Error::Domain { t, t0: self.t0 });
        }
        let w = (t - self.t0).powf(self.alpha);
        Ok(self.coeffs.iter().rev().fold(0.0, |acc, c| acc * w + c))
    }

    pub fn sample(&self, grid: &Grid) -> Result<EvalGrid> {
        let values = grid
            .points()
            .iter()
            .map(|&t| self.evaluate(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(EvalGrid {
            points: grid.points().to_vec(),
            values,
        })
    }
}

/// Left fold of [`FracSeries::cauchy_product`] over a non-empty list.
pub fn nary_product(us: &[FracSeries]) -> Result<FracSeries> {
    let (first, rest) = us
        .split_first()
        .ok_or_else(|| Error::Argument("product of an empty list of series".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, u| acc.cauchy_product(u))
}

/// Kronecker delta on transform indices.
pub fn delta(k: i64) -> f64 {
    if k == 0 {
        1.0
    } else {
        0.0
    }
}

/// Transform index of `(t - t0)^p`, i.e. `p / alpha`, when that is a
/// non-negative integer.
pub fn monomial_index(p: f64, alpha: f64) -> Result<usize> {
    check_alpha(alpha)?;
    if !(p >= 0.0) {
        return Err(Error::Argument(format!(
            "monomial power must be non-negative, got {p}"
        )));
    }
    match snap_to_integer(p / alpha) {
        Some(i) if i >= 0 => Ok(i as usize),
        _ => Err(Error::NotRepresentable {
            what: "monomial power",
            value: p,
        }),
    }
}

/// Transform of `(t - t0)^p`: a single unit coefficient at `k = p / alpha`.
pub fn monomial_transform(p: f64, alpha: f64, t0: f64, len: usize) -> Result<FracSeries> {
    let idx = monomial_index(p, alpha)?;
    if len <= idx {
        return Err(Error::TooShort {
            len,
            needed: idx + 1,
        });
    }
    let mut coeffs = vec![0.0; len];
    coeffs[idx] = 1.0;
    FracSeries::new(alpha, t0, coeffs)
}

/// `lambda^k / (alpha^k k!)`, accumulated as a running product so that large
/// `k` neither overflows nor loses precision through a separate factorial.
pub fn exp_coefficient(lambda: f64, alpha: f64, k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * lambda / (alpha * j as f64))
}

/// `sin(k pi / 2 + c)` with the quarter turns applied exactly.
fn quarter_turn_sin(k: usize, c: f64) -> f64 {
    match k % 4 {
        0 => c.sin(),
        1 => c.cos(),
        2 => -c.sin(),
        _ => -c.cos(),
    }
}

pub fn sin_coefficient(omega: f64, c: f64, alpha: f64, k: usize) -> f64 {
    exp_coefficient(omega, alpha, k) * quarter_turn_sin(k, c)
}

pub fn cos_coefficient(omega: f64, c: f64, alpha: f64, k: usize) -> f64 {
    exp_coefficient(omega, alpha, k) * quarter_turn_sin(k + 1, c)
}

fn series_from_fn(
    alpha: f64,
    t0: f64,
    len: usize,
    coeff: impl FnMut(usize) -> f64,
) -> Result<FracSeries> {
    FracSeries::new(alpha, t0, (0..len).map(coeff).collect())
}

/// Transform of `exp(lambda (t - t0)^alpha / alpha)`.
pub fn exp_transform(lambda: f64, alpha: f64, t0: f64, len: usize) -> Result<FracSeries> {
    check_alpha(alpha)?;
    let mut term = 1.0;
    series_from_fn(alpha, t0, len, |k| {
        if k > 0 {
            term *= lambda / (alpha * k as f64);
        }
        term
    })
}

/// Transform of `sin(omega (t - t0)^alpha / alpha + c)`.
pub fn sin_transform(omega: f64, c: f64, alpha: f64, t0: f64, len: usize) -> Result<FracSeries> {
    let e = exp_transform(omega, alpha, t0, len)?;
    series_from_fn(alpha, t0, len, |k| e.coeffs[k] * quarter_turn_sin(k, c))
}

/// Transform of `cos(omega (t - t0)^alpha / alpha + c)`.
pub fn cos_transform(omega: f64, c: f64, alpha: f64, t0: f64, len: usize) -> Result<FracSeries> {
    let e = exp_transform(omega, alpha, t0, len)?;
    series_from_fn(alpha, t0, len, |k| e.coeffs[k] * quarter_turn_sin(k + 1, c))
}

/// Strictly increasing evaluation points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|t| !t.is_finite()) {
            return Err(Error::Argument("grid points must be finite".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Argument(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    /// `count` equally spaced points from `start` to `stop` inclusive.
    pub fn linspace(start: f64, stop: f64, count: usize) -> Result<Self> {
        let points = match count {
            0 => Vec::new(),
            1 => vec![start],
            n => {
                let step = (stop - start) / (n - 1) as f64;
                (0..n)
                    .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
                    .collect()
            }
        };
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fails if any point lies before `t0`.
    pub fn check_domain(&self, t0: f64) -> Result<()> {
        match self.points.first() {
            Some(&t) if t < t0 => Err(Error::Domain { t, t0 }),
            _ => Ok(()),
        }
    }
}

/// Sampled values on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalGrid {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

impl EvalGrid {
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self {
            points: grid.points().to_vec(),
            values: grid.points().iter().map(|&t| f(t)).collect(),
        }
    }
}

/// Highest transform index that [`transform_of_samples`] resolves reliably.
pub const SAMPLED_STABLE_DEPTH: usize = 6;

const SAMPLE_NODES: usize = 12;
/// Chebyshev coefficients below this fraction of the largest are rounding noise.
const CHEB_CHOP: f64 = 1e-13;
const SAMPLE_WINDOW: f64 = 0.5;

/// Numerically estimated transform, with a note when the requested length
/// goes past the reliable depth.
#[derive(Debug, Clone)]
pub struct SampledTransform {
    pub series: FracSeries,
    pub warning: Option<String>,
}

/// Estimates `F(k)` for `k < len` from samples of `f` on the right of `t0`.
///
/// In `x = (t - t0)^alpha / alpha` the conformable derivative is plain `d/dx`,
/// so `F(k) = g^(k)(0) / (alpha^k k!)` with `g(x) = f(t0 + (alpha x)^(1/alpha))`.
/// The derivatives of `g` at the left end of `[0, SAMPLE_WINDOW]` come from a
/// Chebyshev interpolant through `SAMPLE_NODES` samples. Meant for
/// cross-checking closed-form transforms at low `k`, never for solving.
pub fn transform_of_samples(
    f: impl Fn(f64) -> f64,
    alpha: f64,
    t0: f64,
    len: usize,
) -> Result<SampledTransform> {
    check_alpha(alpha)?;
    check_t0(t0)?;
    if len == 0 {
        return Err(Error::EmptySeries);
    }
    let n = SAMPLE_NODES;
    let h = SAMPLE_WINDOW;
    let theta = |j: usize| PI * (j as f64 + 0.5) / n as f64;
    let samples: Vec<f64> = (0..n)
        .map(|j| {
            let x = 0.5 * h * (theta(j).cos() + 1.0);
            f(t0 + (alpha * x).powf(1.0 / alpha))
        })
        .collect();
    let mut cheb: Vec<f64> = (0..n)
        .map(|i| {
            let s: f64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * (i as f64 * theta(j)).cos())
                .sum();
            let c = 2.0 * s / n as f64;
            if i == 0 {
                c / 2.0
            } else {
                c
            }
        })
        .collect();
    let largest = cheb.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    for c in cheb.iter_mut() {
        if c.abs() < CHEB_CHOP * largest {
            *c = 0.0;
        }
    }

    let coeffs = (0..len)
        .map(|k| {
            // T_i^(k)(1) = prod_{r<k} (i^2 - r^2) / (2r + 1); at -1 flip by (-1)^(i+k).
            let dk: f64 = cheb
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let at_one: f64 = (0..k)
                        .map(|r| ((i * i) as f64 - (r * r) as f64) / (2 * r + 1) as f64)
                        .product();
                    let sign = if (i + k) % 2 == 0 { 1.0 } else { -1.0 };
                    c * sign * at_one
                })
                .sum();
            let gk = dk * (2.0 / h).powi(k as i32);
            gk / exp_coefficient_denominator(alpha, k)
        })
        .collect();

    let warning = (len > SAMPLED_STABLE_DEPTH).then(|| {
        format!(
            "coefficients past k = {} are below oracle accuracy",
            SAMPLED_STABLE_DEPTH - 1
        )
    });
    Ok(SampledTransform {
        series: FracSeries::new(alpha, t0, coeffs)?,
        warning,
    })
}

fn exp_coefficient_denominator(alpha: f64, k: usize) -> f64 {
    (1..=k).map(|j| alpha * j as f64).product()
}
