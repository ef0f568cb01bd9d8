//! Command implementations. Each `run_*` writes to the given streams and
//! returns the process exit code.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use cfdtm::oracle::{compare_series, residual, ExampleId, OracleConfig};
use cfdtm::solver::source_transform;
use cfdtm::{solve, FracSeries, Grid};

use crate::dsl::{lower_source, parse_expr};
use crate::format::{coefficient_table, csv, rational_text, sci};
use crate::problem::ProblemFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{}", .0.join("\n"))]
    Diagnostics(Vec<String>),
    #[error("{0}")]
    Solver(cfdtm::Error),
}

impl From<cfdtm::Error> for CliError {
    fn from(e: cfdtm::Error) -> Self {
        match e {
            cfdtm::Error::Invalid(ds) => CliError::Diagnostics(ds.iter().map(ToString::to_string).collect()),
            other => CliError::Solver(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            _ => EXIT_INVALID,
        }
    }

    fn diagnostics<D: Display>(ds: Vec<D>) -> Self {
        CliError::Diagnostics(ds.iter().map(ToString::to_string).collect())
    }

    fn io(path: impl AsRef<Path>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.as_ref().display().to_string();
        move |source| CliError::Io { path, source }
    }
}

fn finish(result: Result<i32, CliError>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(CliError::io("<output>"))
}

// ------------------------------------------------------------------ solve

/// Rows of `(t, y_series[, y_exact, abs_err])` for a solved problem file.
pub fn solution_csv(file: &ProblemFile, y: &FracSeries) -> Result<String, CliError> {
    let grid = file.grid().map_err(|d| CliError::diagnostics(vec![d]))?;
    grid.check_domain(file.t0)?;
    let values = y.sample(&grid)?.values;
    match file.exact {
        Some(id) => {
            let exact = id.exact(file.alpha);
            let rows: Vec<Vec<f64>> = grid
                .points()
                .iter()
                .zip(&values)
                .map(|(&t, &s)| {
                    let e = exact(t);
                    vec![t, s, e, (e - s).abs()]
                })
                .collect();
            Ok(csv(&["t", "y_series", "y_exact", "abs_err"], &rows))
        }
        None => {
            let rows: Vec<Vec<f64>> = grid.points().iter().zip(&values).map(|(&t, &s)| vec![t, s]).collect();
            Ok(csv(&["t", "y_series"], &rows))
        }
    }
}

/// Solves a problem file, prints its coefficient table, and writes the
/// solution CSV to `csv_path` or, without one, after the table.
pub fn run_solve(file: &Path, csv_path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        let text = std::fs::read_to_string(file).map_err(CliError::io(file))?;
        let pf = ProblemFile::parse(&text).map_err(CliError::diagnostics)?;
        let problem = pf.to_problem().map_err(CliError::diagnostics)?;
        let y = solve(&problem)?;
        let table = solution_csv(&pf, &y)?;
        emit(out, &format!("# T_{} y = {}\n", problem.principal.beta(), problem.rhs))?;
        emit(out, &coefficient_table(y.coeffs()))?;
        match csv_path {
            Some(path) => std::fs::write(path, table).map_err(CliError::io(path))?,
            None => {
                emit(out, "\n")?;
                emit(out, &table)?;
            }
        }
        Ok(EXIT_OK)
    })();
    finish(result, err)
}

// --------------------------------------------------------------- examples

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleOutcome {
    pub id: ExampleId,
    pub coeffs: Vec<f64>,
    pub max_abs_error: f64,
    pub max_abs_residual: f64,
    pub passed: bool,
}

/// Solves a reference problem with its plan, then compares it with the
/// closed form and measures the equation residual.
pub fn check_example(id: ExampleId) -> Result<ExampleOutcome, CliError> {
    let plan = id.plan();
    let problem = id.problem(plan.alpha, plan.n_terms)?;
    let y = solve(&problem)?;
    let (a, b, n) = plan.compare_grid;
    let cmp = compare_series(&y, &*id.exact(plan.alpha), &Grid::linspace(a, b, n)?)?;
    let (a, b, n) = plan.residual_grid;
    let res = residual(&problem, &y, &Grid::linspace(a, b, n)?, &OracleConfig::default())?;
    Ok(ExampleOutcome {
        id,
        passed: cmp.max_abs_error <= plan.max_abs_error && res.max_abs_residual <= plan.max_abs_residual,
        coeffs: y.into_coeffs(),
        max_abs_error: cmp.max_abs_error,
        max_abs_residual: res.max_abs_residual,
    })
}

/// Runs the selected reference problems and prints a pass/fail table.
/// Returns 0 only if every one passes.
pub fn run_examples(only: Option<ExampleId>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        let ids: Vec<ExampleId> = match only {
            Some(id) => vec![id],
            None => ExampleId::ALL.to_vec(),
        };
        emit(
            out,
            &format!(
                "{:<9} {:>5} {:>4} {:>11} {:>8} {:>11} {:>8}  status\n",
                "example", "alpha", "N", "max_err", "tol", "residual", "tol"
            ),
        )?;
        let mut all = true;
        let mut details = String::new();
        for id in ids {
            let plan = id.plan();
            let o = check_example(id)?;
            all &= o.passed;
            emit(
                out,
                &format!(
                    "{:<9} {:>5} {:>4} {:>11.3e} {:>8.0e} {:>11.3e} {:>8.0e}  {}\n",
                    id.name(),
                    plan.alpha,
                    plan.n_terms,
                    o.max_abs_error,
                    plan.max_abs_error,
                    o.max_abs_residual,
                    plan.max_abs_residual,
                    if o.passed { "PASS" } else { "FAIL" }
                ),
            )?;
            let head: Vec<String> = o
                .coeffs
                .iter()
                .take(9)
                .map(|&c| match rational_text(c) {
                    s if s.is_empty() => sci(c),
                    s => s,
                })
                .collect();
            details.push_str(&format!("{}: {}\n  Y = [{}, ...]\n", id.name(), id.equation(), head.join(", ")));
            if let Some(note) = id.note() {
                details.push_str(&format!("  note: {note}\n"));
            }
        }
        emit(out, "\n")?;
        emit(out, &details)?;
        Ok(if all { EXIT_OK } else { EXIT_INVALID })
    })();
    finish(result, err)
}

// ---------------------------------------------------------------- figure1

pub const FIGURE1_ALPHAS: [f64; 4] = [0.9, 0.8, 0.7, 0.6];
pub const FIGURE1_TERMS: usize = 10;
pub const FIGURE1_POINTS: usize = 101;

pub fn figure1_file_name(alpha: f64) -> String {
    format!("figure1_alpha_{alpha}.csv")
}

/// `(t, exact, series)` rows for the tanh Riccati problem on `[0, 1]`.
pub fn figure1_rows(alpha: f64) -> Result<Vec<Vec<f64>>, CliError> {
    let id = ExampleId::Example3;
    let y = solve(&id.problem(alpha, FIGURE1_TERMS)?)?;
    let grid = Grid::linspace(0.0, 1.0, FIGURE1_POINTS)?;
    let exact = id.exact(alpha);
    let values = y.sample(&grid)?.values;
    Ok(grid
        .points()
        .iter()
        .zip(values)
        .map(|(&t, s)| vec![t, exact(t), s])
        .collect())
}

/// Writes one CSV per order into `dir` and returns their paths.
pub fn write_figure1(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let tables: Vec<Result<String, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = FIGURE1_ALPHAS
            .iter()
            .map(|&a| s.spawn(move || figure1_rows(a).map(|rows| csv(&["t", "exact", "cfdtm"], &rows))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("figure worker panicked"))
            .collect()
    });
    let mut paths = Vec::new();
    for (alpha, table) in FIGURE1_ALPHAS.iter().zip(tables) {
        let path = dir.join(figure1_file_name(*alpha));
        std::fs::write(&path, table?).map_err(CliError::io(&path))?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn run_figure1(dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        for p in write_figure1(dir)? {
            emit(out, &format!("wrote {}\n", p.display()))?;
        }
        Ok(EXIT_OK)
    })();
    finish(result, err)
}

// -------------------------------------------------------------- transform

/// Prints the transform coefficients of a source expression such as
/// `exp(-1*t^a/a)` or `t^1.5`.
pub fn run_transform(
    spec: &str,
    alpha: f64,
    t0: f64,
    terms: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = (|| {
        let ast = parse_expr(spec).map_err(CliError::diagnostics)?;
        let expr = lower_source(&ast, alpha).map_err(CliError::diagnostics)?;
        let series = source_transform(&expr, alpha, t0, terms)?;
        emit(out, &format!("# {expr}, alpha = {alpha}, t0 = {t0}\n"))?;
        emit(out, &coefficient_table(series.coeffs()))?;
        Ok(EXIT_OK)
    })();
    finish(result, err)
}
