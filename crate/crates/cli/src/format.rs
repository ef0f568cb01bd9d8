//! Number formatting for tables and CSV output.

use std::fmt::Write as _;

const RATIONAL_TOL: f64 = 1e-9;
const MAX_DENOMINATOR: i64 = 1_000_000;

/// Nearest fraction `p/q` with `q <= 1e6` within `1e-9 * max(1, |x|)` of `x`,
/// from the continued-fraction convergents.
pub fn rational(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let tol = RATIONAL_TOL * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOMINATOR {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1, k1));
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// `p/q`, `p`, or an empty string when no small fraction matches.
pub fn rational_text(x: f64) -> String {
    match rational(x) {
        Some((p, 1)) => p.to_string(),
        Some((p, q)) => format!("{p}/{q}"),
        None => String::new(),
    }
}

/// 17 significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text with a header row and LF line endings.
pub fn csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| sci(v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Aligned coefficient table: index, value, and matching fraction.
pub fn coefficient_table(coeffs: &[f64]) -> String {
    let mut out = format!("{:>4}  {:>24}  {}\n", "k", "Y(k)", "rational");
    for (k, &c) in coeffs.iter().enumerate() {
        let _ = writeln!(out, "{k:>4}  {:>24}  {}", sci(c), rational_text(c));
    }
    out
}
