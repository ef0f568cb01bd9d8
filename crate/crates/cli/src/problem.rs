//! Problem files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! alpha    = 0.5
//! t0       = 0                 # optional, default 0
//! equation = D[a] y = -y
//! init     = 1                 # y(t0), y'(t0), ...
//! n_terms  = 30
//! grid     = 0, 0.5, 50        # start, stop, count
//! exact    = example1          # optional
//! ```

use cfdtm::oracle::ExampleId;
use cfdtm::{Grid, OdeProblem};

use crate::dsl::{parse_equation, SourceDiagnostic};

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub alpha: f64,
    pub t0: f64,
    pub equation: String,
    /// 1-based line of the equation and the column where its text starts.
    pub equation_at: (usize, usize),
    pub init: Vec<f64>,
    pub n_terms: usize,
    pub grid: (f64, f64, usize),
    pub exact: Option<ExampleId>,
}

const KEYS: [&str; 7] = ["alpha", "t0", "equation", "init", "n_terms", "grid", "exact"];

fn diag(line: usize, col: usize, message: impl Into<String>) -> SourceDiagnostic {
    SourceDiagnostic {
        line,
        col,
        message: message.into(),
        expected: Vec::new(),
    }
}

fn number(text: &str, line: usize, col: usize, key: &str) -> Result<f64, SourceDiagnostic> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(diag(line, col, format!("{key}: expected a finite number, got '{}'", text.trim()))),
    }
}

fn count(text: &str, line: usize, col: usize, key: &str) -> Result<usize, SourceDiagnostic> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| diag(line, col, format!("{key}: expected a non-negative integer, got '{}'", text.trim())))
}

fn take<T>(r: Option<Result<T, SourceDiagnostic>>, diags: &mut Vec<SourceDiagnostic>) -> Option<T> {
    match r {
        Some(Ok(v)) => Some(v),
        Some(Err(d)) => {
            diags.push(d);
            None
        }
        None => None,
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, Vec<SourceDiagnostic>> {
        let mut diags = Vec::new();
        let mut seen: Vec<(&str, &str, usize, usize)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(eq) = content.find('=') else {
                diags.push(diag(line, 1, "expected 'key = value'"));
                continue;
            };
            let key = content[..eq].trim();
            let value = &content[eq + 1..];
            let lead = value.len() - value.trim_start().len();
            let col = raw[..eq + 1].chars().count() + lead + 1;
            if !KEYS.contains(&key) {
                diags.push(SourceDiagnostic {
                    line,
                    col: 1,
                    message: format!("unknown key '{key}'"),
                    expected: KEYS.iter().map(|k| k.to_string()).collect(),
                });
            } else if seen.iter().any(|(k, ..)| *k == key) {
                diags.push(diag(line, 1, format!("duplicate key '{key}'")));
            } else {
                seen.push((key, value.trim(), line, col));
            }
        }

        let get = |key: &str| seen.iter().find(|(k, ..)| *k == key).map(|&(_, v, l, c)| (v, l, c));
        let required = |key: &str, diags: &mut Vec<SourceDiagnostic>| {
            let found = get(key);
            if found.is_none() {
                diags.push(diag(0, 0, format!("missing key '{key}'")));
            }
            found
        };

        let alpha = required("alpha", &mut diags).map(|(v, l, c)| number(v, l, c, "alpha"));
        let equation = required("equation", &mut diags);
        let init = required("init", &mut diags).map(|(v, l, c)| {
            v.split(',')
                .map(|x| number(x, l, c, "init"))
                .collect::<Result<Vec<_>, _>>()
        });
        let n_terms = required("n_terms", &mut diags).map(|(v, l, c)| count(v, l, c, "n_terms"));
        let grid = required("grid", &mut diags).map(|(v, l, c)| {
            let parts: Vec<&str> = v.split(',').collect();
            if parts.len() != 3 {
                return Err(diag(l, c, "grid: expected 'start, stop, count'"));
            }
            Ok((
                number(parts[0], l, c, "grid start")?,
                number(parts[1], l, c, "grid stop")?,
                count(parts[2], l, c, "grid count")?,
            ))
        });
        let t0 = get("t0").map(|(v, l, c)| number(v, l, c, "t0")).unwrap_or(Ok(0.0));
        let exact = get("exact").map(|(v, l, c)| {
            v.parse::<ExampleId>()
                .map_err(|e| diag(l, c, format!("exact: {e}")))
        });

        let alpha = take(alpha, &mut diags);
        let init = take(init, &mut diags);
        let n_terms = take(n_terms, &mut diags);
        let grid = take(grid, &mut diags);
        let t0 = take(Some(t0), &mut diags);
        let exact = match exact {
            Some(r) => take(Some(r), &mut diags).map(Some),
            None => Some(None),
        };

        match (alpha, equation, init, n_terms, grid, t0, exact) {
            (Some(alpha), Some((eq, l, c)), Some(init), Some(n_terms), Some(grid), Some(t0), Some(exact))
                if diags.is_empty() =>
            {
                Ok(Self {
                    alpha,
                    t0,
                    equation: eq.to_string(),
                    equation_at: (l, c),
                    init,
                    n_terms,
                    grid,
                    exact,
                })
            }
            _ => Err(diags),
        }
    }

    /// Builds the solver problem, reporting equation errors at file positions.
    pub fn to_problem(&self) -> Result<OdeProblem, Vec<SourceDiagnostic>> {
        let (line, col) = self.equation_at;
        let parsed = parse_equation(&self.equation, self.alpha).map_err(|ds| {
            ds.into_iter()
                .map(|d| d.offset(line - 1, col - 1))
                .collect::<Vec<_>>()
        })?;
        OdeProblem::new(
            self.alpha,
            self.t0,
            parsed.principal.beta(),
            parsed.rhs,
            self.init.clone(),
            self.n_terms,
        )
        .map_err(|e| vec![diag(line, col, e.to_string())])
    }

    pub fn grid(&self) -> Result<Grid, SourceDiagnostic> {
        let (a, b, n) = self.grid;
        Grid::linspace(a, b, n).map_err(|e| diag(0, 0, format!("grid: {e}")))
    }
}
