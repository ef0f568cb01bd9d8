//! Transforms of conformable derivatives and initial-condition seeding.
//!
//! A derivative of order `beta`, with `m < beta <= m + 1`, acts on the
//! transform sequence as an index shift by `s = beta / alpha` followed by a
//! weight `Gamma(k alpha + beta + 1) / Gamma(k alpha + beta - m)`. Both are
//! only meaningful when `s` is a positive integer.

use crate::error::{Error, Result};
use crate::series::{check_alpha, nary_product, snap_to_integer, FracSeries};

/// A derivative order `beta` together with its integer part `m` and its
/// index shift `s = beta / alpha` on a given `alpha` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivOrder {
    beta: f64,
    m: usize,
    shift: usize,
}

impl DerivOrder {
    pub fn new(beta: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Argument(format!(
                "derivative order must be positive, got {beta}"
            )));
        }
        let shift = match snap_to_integer(beta / alpha) {
            Some(s) if s >= 1 => s as usize,
            _ => {
                return Err(Error::NotRepresentable {
                    what: "derivative order",
                    value: beta,
                })
            }
        };
        Ok(Self {
            beta,
            m: integer_part(beta),
            shift,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Number of classical derivatives taken before the fractional step.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Whether this order sits on the grid of `alpha` with the same shift.
    pub fn is_valid_for(&self, alpha: f64) -> bool {
        snap_to_integer(self.beta / alpha) == Some(self.shift as i64)
    }

    fn check_alpha(&self, alpha: f64) -> Result<()> {
        if self.is_valid_for(alpha) {
            Ok(())
        } else {
            Err(Error::NotRepresentable {
                what: "derivative order",
                value: self.beta,
            })
        }
    }
}

/// `m` with `m < beta <= m + 1`; orders within tolerance of an integer `n`
/// count as exactly `n`.
pub fn integer_part(beta: f64) -> usize {
    match snap_to_integer(beta) {
        Some(n) if n >= 1 => (n - 1) as usize,
        _ => beta.floor().max(0.0) as usize,
    }
}

/// `Gamma(x + 1) / Gamma(x - m)` with `x = k alpha + beta`, evaluated as the
/// falling factorial `x (x - 1) ... (x - m)`.
pub fn gamma_ratio(k: usize, alpha: f64, order: &DerivOrder) -> f64 {
    let x = k as f64 * alpha + order.beta;
    (0..=order.m).map(|j| x - j as f64).product()
}

/// Transform of `T_beta u`: `F(k) = gamma_ratio(k) * U(k + s)`.
///
/// This is the bare shift formula. It drops `U(0..s)`, which is correct when
/// those entries are the seeded initial-condition prefix.
pub fn deriv_transform(u: &FracSeries, order: &DerivOrder) -> Result<FracSeries> {
    order.check_alpha(u.alpha())?;
    let s = order.shift;
    if u.len() <= s {
        return Err(Error::TooShort {
            len: u.len(),
            needed: s + 1,
        });
    }
    let coeffs = u.coeffs()[s..]
        .iter()
        .enumerate()
        .map(|(k, c)| gamma_ratio(k, u.alpha(), order) * c)
        .collect();
    FracSeries::new(u.alpha(), u.t0(), coeffs)
}

/// Transform of a product of derivatives `(T_b1 u1)(T_b2 u2)...`.
pub fn deriv_product_transform(factors: &[(FracSeries, DerivOrder)]) -> Result<FracSeries> {
    if factors.is_empty() {
        return Err(Error::Argument(
            "product of an empty list of derivative factors".into(),
        ));
    }
    let parts = factors
        .iter()
        .map(|(u, order)| deriv_transform(u, order))
        .collect::<Result<Vec<_>>>()?;
    nary_product(&parts)
}

/// The first `beta_max / alpha` transform coefficients implied by classical
/// initial data `y(t0), y'(t0), ..., y^(ceil(beta_max) - 1)(t0)`.
///
/// Slot `k` holds `y^(alpha k)(t0) / (alpha k)!` when `alpha k` is a
/// non-negative integer and zero otherwise.
pub fn seed_initial_conditions(
    alpha: f64,
    beta_max: f64,
    classical_derivs: &[f64],
) -> Result<Vec<f64>> {
    let principal = DerivOrder::new(beta_max, alpha)?;
    let needed = principal.m + 1;
    if classical_derivs.len() != needed {
        return Err(Error::Argument(format!(
            "order {beta_max} needs {needed} initial values, got {}",
            classical_derivs.len()
        )));
    }
    let mut factorial = 1.0;
    let mut last_j = 0usize;
    (0..principal.shift)
        .map(|k| match snap_to_integer(alpha * k as f64) {
            Some(j) => {
                let j = j as usize;
                let value = classical_derivs.get(j).ok_or_else(|| {
                    Error::Argument(format!(
                        "initial data for derivative {j} is missing"
                    ))
                })?;
                while last_j < j {
                    last_j += 1;
                    factorial *= last_j as f64;
                }
                Ok(value / factorial)
            }
            None => Ok(0.0),
        })
        .collect()
}
