//! Explicit conformable ODEs `T_beta_max y = rhs` and the transform recurrence
//! that solves them.
//!
//! The right-hand side is an [`Expr`] tree. Solving seeds the first
//! `s_max = beta_max / alpha` coefficients from the initial data, then for
//! `k = 0, 1, ...` computes
//!
//! ```text
//! Y(k + s_max) = RHS(k) / gamma_ratio(k, alpha, beta_max)
//! ```
//!
//! where `RHS(k)` is the transform of the right-hand side at index `k`. It only
//! reads `Y(0..k + s_max)`, which is what the causality check guarantees.

use std::fmt;
use std::ops;

use crate::error::{Error, Result};
use crate::series::{
    check_alpha, check_t0, cos_coefficient, exp_coefficient, monomial_index, sin_coefficient,
    FracSeries,
};
use crate::transform::{gamma_ratio, seed_initial_conditions, DerivOrder};

/// Right-hand side of an explicit conformable ODE in the unknown `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// The unknown `y` itself.
    Unknown,
    /// `T_beta y`.
    Deriv(DerivOrder),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Product of two or more factors.
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
    /// `(t - t0)^p`.
    Monomial(f64),
    /// `exp(lambda (t - t0)^alpha / alpha)`.
    ExpSrc(f64),
    /// `sin(omega (t - t0)^alpha / alpha + phase)`.
    SinSrc { omega: f64, phase: f64 },
    /// `cos(omega (t - t0)^alpha / alpha + phase)`.
    CosSrc { omega: f64, phase: f64 },
}

impl Expr {
    pub fn pow(self, n: u32) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Add(l, r) | Expr::Sub(l, r) => vec![l, r],
            Expr::Neg(e) | Expr::Pow(e, _) => vec![e],
            Expr::Mul(fs) => fs.iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Whether the expression references `y` or any of its derivatives.
    pub fn depends_on_unknown(&self) -> bool {
        matches!(self, Expr::Unknown | Expr::Deriv(_))
            || self.children().iter().any(|c| c.depends_on_unknown())
    }

    /// Visits every node with its path of child indices from the root.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr, &[usize])) {
        fn go<'a>(e: &'a Expr, path: &mut Vec<usize>, f: &mut impl FnMut(&'a Expr, &[usize])) {
            f(e, path);
            for (i, c) in e.children().into_iter().enumerate() {
                path.push(i);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(_) => 2,
        _ => 3,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if precedence(e) < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Renders in the equation syntax accepted by the command-line front end.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Unknown => write!(f, "y"),
            Expr::Deriv(o) => write!(f, "D[{}] y", o.beta()),
            Expr::Add(l, r) | Expr::Sub(l, r) => {
                let op = if matches!(self, Expr::Add(..)) { '+' } else { '-' };
                write_operand(f, l, 1)?;
                write!(f, " {op} ")?;
                write_operand(f, r, 2)
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                write_operand(f, e, 3)
            }
            Expr::Mul(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write_operand(f, x, if i == 0 { 2 } else { 3 })?;
                }
                Ok(())
            }
            Expr::Pow(b, n) => {
                write_operand(f, b, 3)?;
                write!(f, "^{n}")
            }
            Expr::Monomial(p) => write!(f, "t^{p}"),
            Expr::ExpSrc(l) => write!(f, "exp({l}*t^a/a)"),
            Expr::SinSrc { omega, phase } => write_trig(f, "sin", *omega, *phase),
            Expr::CosSrc { omega, phase } => write_trig(f, "cos", *omega, *phase),
        }
    }
}

fn write_trig(f: &mut fmt::Formatter<'_>, name: &str, omega: f64, phase: f64) -> fmt::Result {
    write!(f, "{name}({omega}*t^a/a")?;
    if phase != 0.0 {
        write!(f, " + {phase}")?;
    }
    write!(f, ")")
}

/// An explicit conformable ODE `T_principal y = rhs` with classical initial
/// data `init[j] = y^(j)(t0)`, solved to coefficients `0..=n_terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeProblem {
    pub alpha: f64,
    pub t0: f64,
    pub principal: DerivOrder,
    pub rhs: Expr,
    pub init: Vec<f64>,
    pub n_terms: usize,
}

impl OdeProblem {
    pub fn new(
        alpha: f64,
        t0: f64,
        beta_max: f64,
        rhs: Expr,
        init: Vec<f64>,
        n_terms: usize,
    ) -> Result<Self> {
        Ok(Self {
            alpha,
            t0,
            principal: DerivOrder::new(beta_max, alpha)?,
            rhs,
            init,
            n_terms,
        })
    }

    pub fn with_terms(&self, n_terms: usize) -> Self {
        Self {
            n_terms,
            ..self.clone()
        }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    AlphaOutOfRange,
    BadBasePoint,
    PrincipalNotOnGrid,
    DerivNotOnGrid,
    Causality,
    MonomialNotRepresentable,
    InitLength,
    TooFewTerms,
    MulArity,
    ZeroPower,
    NonFinite,
}

impl DiagnosticCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagnosticCode::AlphaOutOfRange => "alpha-out-of-range",
            DiagnosticCode::BadBasePoint => "bad-base-point",
            DiagnosticCode::PrincipalNotOnGrid => "principal-not-on-grid",
            DiagnosticCode::DerivNotOnGrid => "deriv-not-on-grid",
            DiagnosticCode::Causality => "causality",
            DiagnosticCode::MonomialNotRepresentable => "monomial-not-representable",
            DiagnosticCode::InitLength => "init-length",
            DiagnosticCode::TooFewTerms => "too-few-terms",
            DiagnosticCode::MulArity => "mul-arity",
            DiagnosticCode::ZeroPower => "zero-power",
            DiagnosticCode::NonFinite => "non-finite",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    /// Dotted child-index path from the right-hand side root, e.g. `rhs.1.0`,
    /// or the name of the offending problem field.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.code.as_str(), self.path, self.message)
    }
}

fn rhs_path(path: &[usize]) -> String {
    std::iter::once("rhs".to_string())
        .chain(path.iter().map(|i| i.to_string()))
        .collect::<Vec<_>>()
        .join(".")
}

/// Checks every structural requirement of a problem and reports all
/// violations at once.
pub fn validate(p: &OdeProblem) -> std::result::Result<(), Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut push = |code, path: String, message: String| out.push(Diagnostic { code, path, message });

    let alpha_ok = check_alpha(p.alpha).is_ok();
    if !alpha_ok {
        push(
            DiagnosticCode::AlphaOutOfRange,
            "alpha".into(),
            format!("alpha must lie in (0, 1], got {}", p.alpha),
        );
    }
    if check_t0(p.t0).is_err() {
        push(
            DiagnosticCode::BadBasePoint,
            "t0".into(),
            format!("t0 must be finite and non-negative, got {}", p.t0),
        );
    }
    let principal_ok = alpha_ok && p.principal.is_valid_for(p.alpha);
    if alpha_ok && !principal_ok {
        push(
            DiagnosticCode::PrincipalNotOnGrid,
            "principal".into(),
            format!(
                "principal order {} is not an integer multiple of alpha = {}",
                p.principal.beta(),
                p.alpha
            ),
        );
    }
    let s_max = p.principal.shift();
    if p.init.len() != p.principal.m() + 1 {
        push(
            DiagnosticCode::InitLength,
            "init".into(),
            format!(
                "order {} needs {} initial values, got {}",
                p.principal.beta(),
                p.principal.m() + 1,
                p.init.len()
            ),
        );
    }
    if p.init.iter().any(|v| !v.is_finite()) {
        push(
            DiagnosticCode::NonFinite,
            "init".into(),
            "initial values must be finite".into(),
        );
    }
    if p.n_terms < s_max {
        push(
            DiagnosticCode::TooFewTerms,
            "n_terms".into(),
            format!("n_terms = {} is below the principal shift {s_max}", p.n_terms),
        );
    }

    p.rhs.walk(&mut |e, path| match e {
        Expr::Deriv(o) => {
            if alpha_ok && !o.is_valid_for(p.alpha) {
                push(
                    DiagnosticCode::DerivNotOnGrid,
                    rhs_path(path),
                    format!("order {} is not an integer multiple of alpha = {}", o.beta(), p.alpha),
                );
            } else if o.shift() + 1 > s_max {
                push(
                    DiagnosticCode::Causality,
                    rhs_path(path),
                    format!(
                        "right-hand side order {} must be below the principal order {}",
                        o.beta(),
                        p.principal.beta()
                    ),
                );
            }
        }
        Expr::Monomial(q) => {
            if alpha_ok && monomial_index(*q, p.alpha).is_err() {
                push(
                    DiagnosticCode::MonomialNotRepresentable,
                    rhs_path(path),
                    format!("t^{q} is not a non-negative integer power of t^{}", p.alpha),
                );
            }
        }
        Expr::Mul(fs) if fs.len() < 2 => push(
            DiagnosticCode::MulArity,
            rhs_path(path),
            format!("a product needs at least two factors, got {}", fs.len()),
        ),
        Expr::Pow(_, 0) => push(
            DiagnosticCode::ZeroPower,
            rhs_path(path),
            "powers must be positive integers".into(),
        ),
        Expr::Const(c) | Expr::ExpSrc(c) if !c.is_finite() => push(
            DiagnosticCode::NonFinite,
            rhs_path(path),
            "constants must be finite".into(),
        ),
        Expr::SinSrc { omega, phase } | Expr::CosSrc { omega, phase }
            if !omega.is_finite() || !phase.is_finite() =>
        {
            push(
                DiagnosticCode::NonFinite,
                rhs_path(path),
                "constants must be finite".into(),
            )
        }
        _ => {}
    });

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Const(f64),
    Unknown,
    Deriv(DerivOrder),
    Add(usize, usize),
    Sub(usize, usize),
    Neg(usize),
    Mul(usize, usize),
    Monomial(usize),
    Exp(f64),
    Sin(f64, f64),
    Cos(f64, f64),
}

/// Per-node coefficient streams for one right-hand side, advanced one index
/// at a time. Children precede their parents in `nodes`, so a single forward
/// sweep per index fills every stream; products read their children's cached
/// prefixes instead of recomputing them.
struct CoefficientStreams {
    alpha: f64,
    nodes: Vec<Node>,
    cache: Vec<Vec<f64>>,
}

impl CoefficientStreams {
    fn compile(expr: &Expr, alpha: f64) -> Result<Self> {
        let mut s = Self {
            alpha,
            nodes: Vec::new(),
            cache: Vec::new(),
        };
        s.lower(expr)?;
        s.cache = vec![Vec::new(); s.nodes.len()];
        Ok(s)
    }

    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn lower(&mut self, e: &Expr) -> Result<usize> {
        let node = match e {
            Expr::Const(c) => Node::Const(*c),
            Expr::Unknown => Node::Unknown,
            Expr::Deriv(o) => Node::Deriv(*o),
            Expr::Add(l, r) => {
                let (l, r) = (self.lower(l)?, self.lower(r)?);
                Node::Add(l, r)
            }
            Expr::Sub(l, r) => {
                let (l, r) = (self.lower(l)?, self.lower(r)?);
                Node::Sub(l, r)
            }
            Expr::Neg(x) => Node::Neg(self.lower(x)?),
            Expr::Mul(fs) => {
                let (first, rest) = fs
                    .split_first()
                    .ok_or_else(|| Error::Internal("empty product".into()))?;
                let mut acc = self.lower(first)?;
                for x in rest {
                    let id = self.lower(x)?;
                    acc = self.push(Node::Mul(acc, id));
                }
                return Ok(acc);
            }
            Expr::Pow(base, n) => {
                if *n == 0 {
                    return Err(Error::Internal("zero power".into()));
                }
                // The base stream is shared by every factor.
                let b = self.lower(base)?;
                let mut acc = b;
                for _ in 1..*n {
                    acc = self.push(Node::Mul(acc, b));
                }
                return Ok(acc);
            }
            Expr::Monomial(p) => Node::Monomial(monomial_index(*p, self.alpha)?),
            Expr::ExpSrc(l) => Node::Exp(*l),
            Expr::SinSrc { omega, phase } => Node::Sin(*omega, *phase),
            Expr::CosSrc { omega, phase } => Node::Cos(*omega, *phase),
        };
        Ok(self.push(node))
    }

    /// Computes the next index of every stream and returns the root's value.
    fn advance(&mut self, y: &[f64]) -> Result<f64> {
        let k = self.cache.first().map_or(0, Vec::len);
        let read = |i: usize| {
            y.get(i).copied().ok_or_else(|| {
                Error::Internal(format!(
                    "coefficient Y({i}) requested with only {} known",
                    y.len()
                ))
            })
        };
        for id in 0..self.nodes.len() {
            let at = |c: usize| self.cache[c][k];
            let v = match self.nodes[id] {
                Node::Const(c) => {
                    if k == 0 {
                        c
                    } else {
                        0.0
                    }
                }
                Node::Unknown => read(k)?,
                Node::Deriv(o) => gamma_ratio(k, self.alpha, &o) * read(k + o.shift())?,
                Node::Add(l, r) => at(l) + at(r),
                Node::Sub(l, r) => at(l) - at(r),
                Node::Neg(x) => -at(x),
                Node::Mul(l, r) => {
                    let (a, b) = (&self.cache[l], &self.cache[r]);
                    (0..=k).map(|j| a[j] * b[k - j]).sum()
                }
                Node::Monomial(idx) => {
                    if k == idx {
                        1.0
                    } else {
                        0.0
                    }
                }
                Node::Exp(l) => exp_coefficient(l, self.alpha, k),
                Node::Sin(w, c) => sin_coefficient(w, c, self.alpha, k),
                Node::Cos(w, c) => cos_coefficient(w, c, self.alpha, k),
            };
            self.cache[id].push(v);
        }
        self.cache
            .last()
            .and_then(|s| s.last())
            .copied()
            .ok_or_else(|| Error::Internal("empty expression".into()))
    }
}

/// Transform coefficient of `e` at index `k`, given the known prefix `y` of
/// the unknown's transform.
pub fn rhs_coefficient(e: &Expr, alpha: f64, k: usize, y: &[f64]) -> Result<f64> {
    check_alpha(alpha)?;
    let mut streams = CoefficientStreams::compile(e, alpha)?;
    let mut last = 0.0;
    for _ in 0..=k {
        last = streams.advance(y)?;
    }
    Ok(last)
}

/// Transform coefficients `0..len` of an expression that does not involve
/// the unknown.
pub fn source_transform(e: &Expr, alpha: f64, t0: f64, len: usize) -> Result<FracSeries> {
    check_alpha(alpha)?;
    if e.depends_on_unknown() {
        return Err(Error::Argument(
            "expression depends on the unknown y".into(),
        ));
    }
    let mut streams = CoefficientStreams::compile(e, alpha)?;
    let coeffs = (0..len)
        .map(|_| streams.advance(&[]))
        .collect::<Result<Vec<_>>>()?;
    FracSeries::new(alpha, t0, coeffs)
}

/// Runs the transform recurrence and returns coefficients `0..=n_terms`.
pub fn solve(p: &OdeProblem) -> Result<FracSeries> {
    validate(p).map_err(Error::Invalid)?;
    let principal = p.principal;
    let s_max = principal.shift();
    let mut y = seed_initial_conditions(p.alpha, principal.beta(), &p.init)?;
    y.reserve(p.n_terms + 1 - s_max);
    let mut streams = CoefficientStreams::compile(&p.rhs, p.alpha)?;
    for k in 0..=(p.n_terms - s_max) {
        let rhs = streams.advance(&y)?;
        y.push(rhs / gamma_ratio(k, p.alpha, &principal));
    }
    FracSeries::new(p.alpha, p.t0, y)
}
