//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints one PASS/FAIL line; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use cfdtm::oracle::{compare_series, conformable_deriv, ExampleId, OracleConfig};
use cfdtm::series::delta;
use cfdtm::{gamma_ratio, solve, DerivOrder, Expr, FracSeries, Grid, OdeProblem};
use cfdtm_cli::commands::{check_example, figure1_file_name, run_figure1, FIGURE1_ALPHAS};
use cfdtm_cli::dsl::{parse_ast, parse_equation};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use statrs::function::gamma::ln_gamma;

mod common;
use common::{MALFORMED, ROUND_TRIP_CORPUS};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs()
}

fn solved(id: ExampleId, alpha: f64, n: usize) -> Result<FracSeries, String> {
    let p = id.problem(alpha, n).map_err(|e| e.to_string())?;
    solve(&p).map_err(|e| e.to_string())
}

fn max_error(id: ExampleId, alpha: f64, n: usize, lo: f64, hi: f64, count: usize) -> Result<f64, String> {
    let y = solved(id, alpha, n)?;
    let grid = Grid::linspace(lo, hi, count).map_err(|e| e.to_string())?;
    let r = compare_series(&y, &*id.exact(alpha), &grid).map_err(|e| e.to_string())?;
    Ok(r.max_abs_error)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

// 1e-12 relative on coefficients, 1e-8 absolute on [0, 0.5] with N = 30.
fn criterion_1() -> Check {
    let mut worst_err: f64 = 0.0;
    for alpha in [0.5, 0.75, 1.0] {
        let y = solved(ExampleId::Example1, alpha, 12)?;
        for (n, &c) in y.coeffs().iter().enumerate() {
            let want = (-1f64).powi(n as i32) / (factorial(n) * alpha.powi(n as i32));
            ensure(rel_close(c, want, 1e-12), || format!("alpha {alpha}, Y({n}) = {c}, want {want}"))?;
        }
        let err = max_error(ExampleId::Example1, alpha, 30, 0.0, 0.5, 50)?;
        ensure(err <= 1e-8, || format!("alpha {alpha}: max error {err:e} > 1e-8"))?;
        worst_err = worst_err.max(err);
    }
    Ok(format!("coefficients exact to 1e-12; worst max error {worst_err:.2e}"))
}

// Y(k) = alpha^-k to 1e-12 relative; 1e-6 absolute on [0, 0.5 alpha^(1/alpha)].
fn criterion_2() -> Check {
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 0.75, 1.0] {
        let y = solved(ExampleId::Example2, alpha, 10)?;
        ensure(y.coeffs()[0] == 0.0, || format!("alpha {alpha}: Y(0) = {}", y.coeffs()[0]))?;
        for k in 1..=10 {
            let (c, want) = (y.coeffs()[k], alpha.powi(-(k as i32)));
            ensure(rel_close(c, want, 1e-12), || format!("alpha {alpha}, Y({k}) = {c}, want {want}"))?;
        }
        let hi = 0.5 * alpha.powf(1.0 / alpha);
        let n = ExampleId::Example2.plan().n_terms;
        let err = max_error(ExampleId::Example2, alpha, n, 0.0, hi, 50)?;
        ensure(err <= 1e-6, || format!("alpha {alpha}: max error {err:e} > 1e-6"))?;
        worst = worst.max(err);
    }
    Ok(format!("Y(k) = alpha^-k through k = 10; worst max error {worst:.2e}"))
}

// Odd coefficients of tanh(t^a/a) to 1e-12 relative, even ones zero;
// 1e-6 absolute on [0, 0.4].
fn criterion_3() -> Check {
    let odd = [(1.0, 1), (-1.0 / 3.0, 3), (2.0 / 15.0, 5), (-17.0 / 315.0, 7), (62.0 / 2835.0, 9)];
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0] {
        let y = solved(ExampleId::Example3, alpha, 10)?;
        for (c, k) in odd {
            let want = c / alpha.powi(k);
            let got = y.coeffs()[k as usize];
            ensure(rel_close(got, want, 1e-12), || format!("alpha {alpha}, Y({k}) = {got}, want {want}"))?;
        }
        for k in (0..=8).step_by(2) {
            let got = y.coeffs()[k];
            ensure(got.abs() <= 1e-12, || format!("alpha {alpha}, Y({k}) = {got}, want 0"))?;
        }
        let n = ExampleId::Example3.plan().n_terms;
        let err = max_error(ExampleId::Example3, alpha, n, 0.0, 0.4, 41)?;
        ensure(err <= 1e-6, || format!("alpha {alpha}: max error {err:e} > 1e-6"))?;
        worst = worst.max(err);
    }
    Ok(format!("series through k = 9 matches; worst max error {worst:.2e}"))
}

fn check_bagley_torvik(y: &FracSeries) -> Check {
    ensure(y.coeffs()[..4] == [1.0, 0.0, 1.0, 0.0], || format!("prefix {:?}", &y.coeffs()[..4]))?;
    for k in 4..=20 {
        let c = y.coeffs()[k];
        ensure(c.abs() <= 1e-12, || format!("Y({k}) = {c}"))?;
    }
    let grid = Grid::linspace(0.0, 2.0, 41).map_err(|e| e.to_string())?;
    let r = compare_series(y, &|t| 1.0 + t, &grid).map_err(|e| e.to_string())?;
    ensure(r.max_abs_error <= 1e-12, || format!("max error {:e} > 1e-12", r.max_abs_error))?;
    Ok(format!("prefix [1, 0, 1, 0], tail zero, max error {:.2e}", r.max_abs_error))
}

// Seeded prefix, zero tail to 1e-12, equals 1 + t to 1e-12 on [0, 2].
fn criterion_4() -> Check {
    check_bagley_torvik(&solved(ExampleId::Example4, 0.5, 20)?)
}

// [0, 0, 1, 0, 1/2, ...] to 1e-12 relative; e^t - 1 to 1e-8 on [0, 1], N = 40.
fn criterion_5() -> Check {
    let y = solved(ExampleId::Example5, 0.5, 40)?;
    for (k, &c) in y.coeffs().iter().enumerate() {
        if k % 2 == 1 || k == 0 {
            ensure(c == 0.0, || format!("Y({k}) = {c}, want 0"))?;
        } else {
            let want = 1.0 / factorial(k / 2);
            ensure(rel_close(c, want, 1e-12), || format!("Y({k}) = {c}, want {want}"))?;
        }
    }
    let err = max_error(ExampleId::Example5, 0.5, 40, 0.0, 1.0, 41)?;
    ensure(err <= 1e-8, || format!("max error {err:e} > 1e-8"))?;
    Ok(format!("Y(2j) = 1/j!; max error {err:.2e}"))
}

// alpha (k + 1) at beta = alpha to 1e-14; log-gamma agreement to 1e-10.
fn criterion_6() -> Check {
    for alpha in [0.1, 0.3, 0.5, 0.9] {
        let o = DerivOrder::new(alpha, alpha).map_err(|e| e.to_string())?;
        for k in 0..=100 {
            let (g, want) = (gamma_ratio(k, alpha, &o), alpha * (k + 1) as f64);
            ensure(rel_close(g, want, 1e-14), || format!("alpha {alpha}, k {k}: {g} vs {want}"))?;
        }
    }
    let mut rng = StdRng::seed_from_u64(0x6a11);
    let alphas = [0.1, 0.2, 0.25, 0.5, 1.0];
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let alpha = alphas[rng.gen_range(0..alphas.len())];
        let shift = rng.gen_range(1..=(3.0 / alpha) as usize);
        let o = DerivOrder::new(shift as f64 * alpha, alpha).map_err(|e| e.to_string())?;
        let k = rng.gen_range(0..40);
        let x = k as f64 * alpha + o.beta();
        let want = (ln_gamma(x + 1.0) - ln_gamma(x - o.m() as f64)).exp();
        let got = gamma_ratio(k, alpha, &o);
        let rel = (got - want).abs() / want.abs();
        ensure(rel <= 1e-10, || format!("alpha {alpha}, beta {}, k {k}: {got} vs {want}", o.beta()))?;
        worst = worst.max(rel);
    }
    Ok(format!("worst log-gamma relative gap {worst:.2e}"))
}

// Linearity, power rule, constants, product and quotient rules to 1e-5;
// the fractional clock (t - t0)^a / a has derivative 1 to 1e-6.
fn criterion_7() -> Check {
    let cfg = OracleConfig::default();
    let d = |f: &dyn Fn(f64) -> f64, a: f64, t: f64, t0: f64| {
        conformable_deriv(f, a, t, t0, &cfg).map_err(|e| e.to_string())
    };
    let f = |t: f64| (2.0 * t).sin() + 1.5;
    let g = |t: f64| (0.5 * t).exp();
    let mut worst: f64 = 0.0;
    let mut check = |got: f64, want: f64, tol: f64, what: &str| {
        let gap = (got - want).abs();
        worst = worst.max(gap);
        ensure(gap <= tol, || format!("{what}: {got} vs {want}"))
    };
    for alpha in [0.3, 0.5, 0.8, 1.0] {
        for t in [0.3, 0.7, 1.2, 2.0] {
            let (df, dg) = (d(&f, alpha, t, 0.0)?, d(&g, alpha, t, 0.0)?);
            let lin = d(&|s| 3.0 * f(s) - 2.0 * g(s), alpha, t, 0.0)?;
            check(lin, 3.0 * df - 2.0 * dg, 1e-5, "linearity")?;
            for p in [0.0, 1.0, 2.5, alpha] {
                let got = d(&|s: f64| s.powf(p), alpha, t, 0.0)?;
                check(got, p * t.powf(p - alpha), 1e-5, &format!("power rule p = {p}"))?;
            }
            check(d(&|_| 7.25, alpha, t, 0.0)?, 0.0, 1e-5, "constant")?;
            let prod = d(&|s| f(s) * g(s), alpha, t, 0.0)?;
            check(prod, f(t) * dg + g(t) * df, 1e-5, "product rule")?;
            let quot = d(&|s| f(s) / g(s), alpha, t, 0.0)?;
            check(quot, (g(t) * df - f(t) * dg) / (g(t) * g(t)), 1e-5, "quotient rule")?;
        }
    }
    for (alpha, t0) in [(0.3, 0.0), (0.5, 0.0), (0.7, 1.0), (0.9, 2.5)] {
        for dt in [0.05, 0.5, 1.5] {
            let clock = |s: f64| (s - t0).powf(alpha) / alpha;
            check(d(&clock, alpha, t0 + dt, t0)?, 1.0, 1e-6, "fractional clock")?;
        }
    }
    Ok(format!("worst gap {worst:.2e}"))
}

// Interior residual at most 1e-4 for every reference problem.
fn criterion_8() -> Check {
    let mut parts = Vec::new();
    for id in ExampleId::ALL {
        let o = check_example(id).map_err(|e| e.to_string())?;
        let tol = id.plan().max_abs_residual;
        ensure(o.max_abs_residual <= tol, || format!("{id}: residual {:e} > {tol:e}", o.max_abs_residual))?;
        parts.push(format!("{id} {:.1e}", o.max_abs_residual));
    }
    Ok(parts.join(", "))
}

// The engine agrees with a hand-unrolled recurrence on 100 random problems.
fn criterion_9() -> Check {
    let mut rng = StdRng::seed_from_u64(0x11_2e);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let alpha: f64 = rng.gen_range(0.05..=1.0);
        let a: f64 = rng.gen_range(-3.0..3.0);
        let b: f64 = rng.gen_range(-3.0..3.0);
        let y0: f64 = rng.gen_range(-2.0..2.0);
        let n = rng.gen_range(5..40);
        let rhs = Expr::Const(a) * Expr::Unknown + Expr::Const(b);
        let p = OdeProblem::new(alpha, 0.0, alpha, rhs, vec![y0], n).map_err(|e| e.to_string())?;
        let y = solve(&p).map_err(|e| e.to_string())?;
        let mut want = vec![y0];
        for k in 0..n {
            want.push((a * want[k] + b * delta(k as i64)) / (alpha * (k + 1) as f64));
        }
        ensure(y.len() == want.len(), || format!("case {case}: length {} vs {}", y.len(), want.len()))?;
        for (k, (&got, &w)) in y.coeffs().iter().zip(&want).enumerate() {
            let rel = if w == 0.0 { got.abs() } else { (got - w).abs() / w.abs() };
            ensure(rel <= 1e-12, || format!("case {case}, k {k}: {got} vs {w}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("100 problems, worst relative gap {worst:.2e}"))
}

fn read_figure(dir: &std::path::Path, alpha: f64) -> Result<Vec<[f64; 3]>, String> {
    let text = std::fs::read_to_string(dir.join(figure1_file_name(alpha))).map_err(|e| e.to_string())?;
    text.lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().map_err(|_| format!("bad cell in '{l}'"))).collect::<Result<_, _>>()?;
            Ok([v[0], v[1], v[2]])
        })
        .collect()
}

// Four CSVs; max error on [0, 0.6] at most 0.02 for each order; the error at
// t = 1 grows from alpha = 0.9 to alpha = 0.6.
fn criterion_10() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_figure1(dir.path(), &mut out, &mut err);
    ensure(code == 0, || format!("figure1 exited {code}: {}", String::from_utf8_lossy(&err)))?;
    let mut summary = Vec::new();
    let mut failures = Vec::new();
    let mut at_one = Vec::new();
    for alpha in FIGURE1_ALPHAS {
        let rows = read_figure(dir.path(), alpha)?;
        ensure(rows.len() == 101, || format!("alpha {alpha}: {} rows", rows.len()))?;
        let near = rows
            .iter()
            .filter(|r| r[0] <= 0.6 + 1e-12)
            .map(|r| (r[1] - r[2]).abs())
            .fold(0.0, f64::max);
        let last = rows[100];
        at_one.push((alpha, (last[1] - last[2]).abs()));
        summary.push(format!("a={alpha}: max[0,0.6] {near:.2e}, |e(1)| {:.2e}", (last[1] - last[2]).abs()));
        if near > 0.02 {
            failures.push(format!("alpha {alpha}: max error on [0, 0.6] is {near:.4} > 0.02"));
        }
    }
    let e = |a: f64| at_one.iter().find(|(x, _)| *x == a).map(|p| p.1).unwrap();
    if !(e(0.6) > e(0.9)) {
        failures.push(format!("error at t = 1 does not grow: {:e} (0.6) vs {:e} (0.9)", e(0.6), e(0.9)));
    }
    if failures.is_empty() {
        Ok(summary.join("; "))
    } else {
        Err(format!("{} [{}]", failures.join("; "), summary.join("; ")))
    }
}

// Round-trip corpus, malformed inputs, and the normalized Bagley-Torvik input.
fn criterion_11() -> Check {
    ensure(ROUND_TRIP_CORPUS.len() >= 20, || "corpus too small".into())?;
    for src in ROUND_TRIP_CORPUS {
        let ast = parse_ast(src).map_err(|e| format!("{src}: {e:?}"))?;
        let printed = ast.to_string();
        let again = parse_ast(&printed).map_err(|e| format!("{printed}: {e:?}"))?;
        ensure(ast == again, || format!("{src} reprinted as {printed} parses differently"))?;
    }
    ensure(MALFORMED.len() >= 10, || "too few malformed inputs".into())?;
    for src in MALFORMED {
        match catch_unwind(|| parse_ast(src)) {
            Ok(Err(ds)) if !ds.is_empty() => {}
            Ok(_) => return Err(format!("'{src}' was accepted")),
            Err(_) => return Err(format!("'{src}' crashed the parser")),
        }
    }
    let p = parse_equation(ExampleId::Example4.equation(), 0.5).map_err(|e| format!("{e:?}"))?;
    let direct = ExampleId::Example4.problem(0.5, 20).map_err(|e| e.to_string())?;
    ensure(p.principal == direct.principal && p.rhs == direct.rhs, || {
        format!("normalized to T_{} y = {}", p.principal.beta(), p.rhs)
    })?;
    let prob = OdeProblem::new(0.5, 0.0, p.principal.beta(), p.rhs.clone(), vec![1.0, 1.0], 20)
        .map_err(|e| e.to_string())?;
    let detail = check_bagley_torvik(&solve(&prob).map_err(|e| e.to_string())?)?;
    Ok(format!(
        "{} equations round-trip, {} malformed rejected, normalized form {}",
        ROUND_TRIP_CORPUS.len(),
        MALFORMED.len(),
        detail
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("Example 1 coefficients and values", criterion_1),
        ("Example 2 coefficients and values", criterion_2),
        ("Example 3 coefficients and values", criterion_3),
        ("Example 4 Bagley-Torvik exactness", criterion_4),
        ("Example 5 coefficients and values", criterion_5),
        ("gamma ratio degeneration and log-gamma agreement", criterion_6),
        ("oracle derivative properties", criterion_7),
        ("residuals of all reference problems", criterion_8),
        ("agreement with the unrolled linear recurrence", criterion_9),
        ("figure 1 reproduction", criterion_10),
        ("parser suite", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
