//! Equation syntax.
//!
//! ```text
//! equation := lhs "=" expr
//! lhs      := term (("+" | "-") term)*
//! term     := [number "*"] "D[" order "]" "y" | [number "*"] "y"
//! expr     := expr ("+" | "-") mul | mul
//! mul      := mul "*" atom | atom
//! atom     := number | "y" | "D[" order "]" "y" | "y" "^" integer
//!           | "t" "^" number
//!           | "exp(" signed "*t^a/a)"
//!           | "sin(" signed "*t^a/a" [("+" | "-") number] ")"
//!           | "cos(" signed "*t^a/a" [("+" | "-") number] ")"
//!           | "(" expr ")" | "-" atom
//! order    := number | "a"
//! ```
//!
//! `a` stands for the problem's `alpha`; `t^a/a` is literal syntax. A
//! left-hand side with several derivative terms is normalized by isolating
//! the highest order and dividing through by its coefficient.

use std::fmt;

use cfdtm::series::monomial_index;
use cfdtm::{DerivOrder, Expr};

const MAX_DEPTH: usize = 200;

/// Source position, 1-based. Equality ignores it so that a reprinted tree
/// compares equal to the one it was printed from.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

/// A parse or normalization problem at a source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDiagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Tokens that would have been accepted here; empty for semantic errors.
    pub expected: Vec<String>,
}

impl SourceDiagnostic {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        Self {
            line: pos.line,
            col: pos.col,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    /// Moves the position by a line and column offset, for equations
    /// embedded in a larger document.
    pub fn offset(mut self, line: usize, col: usize) -> Self {
        if self.line == 1 {
            self.col += col;
        }
        self.line += line;
        self
    }
}

impl fmt::Display for SourceDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderSpec {
    /// The literal `a`.
    Alpha,
    Value(f64),
}

impl OrderSpec {
    pub fn resolve(&self, alpha: f64) -> f64 {
        match self {
            OrderSpec::Alpha => alpha,
            OrderSpec::Value(v) => *v,
        }
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Alpha => f.write_str("a"),
            OrderSpec::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DslExpr {
    Num(f64),
    Y,
    D(OrderSpec, Pos),
    YPow(u32, Pos),
    TPow(f64, Pos),
    Exp(f64),
    Sin(f64, Option<f64>),
    Cos(f64, Option<f64>),
    Add(Box<DslExpr>, Box<DslExpr>),
    Sub(Box<DslExpr>, Box<DslExpr>),
    Mul(Box<DslExpr>, Box<DslExpr>),
    Neg(Box<DslExpr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhsTerm {
    pub negated: bool,
    pub coeff: Option<f64>,
    /// `None` for a bare `y`.
    pub order: Option<OrderSpec>,
    pub pos: Pos,
}

impl LhsTerm {
    fn signed_coeff(&self) -> f64 {
        let c = self.coeff.unwrap_or(1.0);
        if self.negated {
            -c
        } else {
            c
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DslEquation {
    pub lhs: Vec<LhsTerm>,
    pub rhs: DslExpr,
}

/// An equation in explicit form, ready to become an `OdeProblem`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEquation {
    pub ast: DslEquation,
    pub principal: DerivOrder,
    pub rhs: Expr,
}

// ---------------------------------------------------------------- printing

fn prec(e: &DslExpr) -> u8 {
    match e {
        DslExpr::Add(..) | DslExpr::Sub(..) => 1,
        DslExpr::Mul(..) => 2,
        _ => 3,
    }
}

fn operand(f: &mut fmt::Formatter<'_>, e: &DslExpr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn trig(f: &mut fmt::Formatter<'_>, name: &str, w: f64, c: Option<f64>) -> fmt::Result {
    write!(f, "{name}({w}*t^a/a")?;
    match c {
        Some(c) if c.is_sign_negative() => write!(f, " - {})", -c),
        Some(c) => write!(f, " + {c})"),
        None => write!(f, ")"),
    }
}

impl fmt::Display for DslExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslExpr::Num(c) => write!(f, "{c}"),
            DslExpr::Y => f.write_str("y"),
            DslExpr::D(o, _) => write!(f, "D[{o}] y"),
            DslExpr::YPow(n, _) => write!(f, "y^{n}"),
            DslExpr::TPow(p, _) => write!(f, "t^{p}"),
            DslExpr::Exp(l) => write!(f, "exp({l}*t^a/a)"),
            DslExpr::Sin(w, c) => trig(f, "sin", *w, *c),
            DslExpr::Cos(w, c) => trig(f, "cos", *w, *c),
            DslExpr::Add(l, r) => {
                operand(f, l, 1)?;
                f.write_str(" + ")?;
                operand(f, r, 2)
            }
            DslExpr::Sub(l, r) => {
                operand(f, l, 1)?;
                f.write_str(" - ")?;
                operand(f, r, 2)
            }
            DslExpr::Mul(l, r) => {
                operand(f, l, 2)?;
                f.write_str("*")?;
                operand(f, r, 3)
            }
            DslExpr::Neg(e) => {
                f.write_str("-")?;
                operand(f, e, 3)
            }
        }
    }
}

impl fmt::Display for LhsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.coeff {
            write!(f, "{c}*")?;
        }
        match self.order {
            Some(o) => write!(f, "D[{o}] y"),
            None => f.write_str("y"),
        }
    }
}

impl fmt::Display for DslEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.lhs.iter().enumerate() {
            if i > 0 {
                f.write_str(if term.negated { " - " } else { " + " })?;
            }
            write!(f, "{term}")?;
        }
        write!(f, " = {}", self.rhs)
    }
}

// ----------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v, _) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Eq => "'='".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SourceDiagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut integral = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integral = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    integral = false;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| SourceDiagnostic::at(pos, format!("malformed number '{text}'")))?;
            if !v.is_finite() {
                return Err(SourceDiagnostic::at(pos, format!("number '{text}' is out of range")));
            }
            Tok::Num(v, integral)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '=' => Tok::Eq,
                other => {
                    return Err(SourceDiagnostic::at(pos, format!("unexpected character '{other}'")));
                }
            }
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

// ---------------------------------------------------------------- parsing

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

type PResult<T> = Result<T, SourceDiagnostic>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Self {
            toks: lex(src)?,
            at: 0,
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SourceDiagnostic {
        let pos = self.pos();
        SourceDiagnostic {
            line: pos.line,
            col: pos.col,
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn expect(&mut self, tok: Tok, label: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[label]))
        }
    }

    fn expect_ident(&mut self, name: &str) -> PResult<()> {
        if self.is_ident(name) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("'{name}'")]))
        }
    }

    fn number(&mut self) -> PResult<f64> {
        match self.peek() {
            Tok::Num(v, _) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&["number"])),
        }
    }

    fn signed_number(&mut self) -> PResult<f64> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.number()?);
        }
        self.number()
    }

    fn order(&mut self) -> PResult<OrderSpec> {
        if self.is_ident("a") {
            self.bump();
            return Ok(OrderSpec::Alpha);
        }
        match self.peek() {
            Tok::Num(v, _) => {
                let v = *v;
                self.bump();
                Ok(OrderSpec::Value(v))
            }
            _ => Err(self.error(&["number", "'a'"])),
        }
    }

    /// `"[" order "]" "y"` after a consumed `D`.
    fn deriv_tail(&mut self) -> PResult<OrderSpec> {
        self.expect(Tok::LBracket, "'['")?;
        let o = self.order()?;
        self.expect(Tok::RBracket, "']'")?;
        self.expect_ident("y")?;
        Ok(o)
    }

    fn equation(&mut self) -> PResult<DslEquation> {
        let mut lhs = vec![self.lhs_term(false)?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs.push(self.lhs_term(false)?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs.push(self.lhs_term(true)?);
                }
                Tok::Eq => {
                    self.bump();
                    break;
                }
                _ => return Err(self.error(&["'+'", "'-'", "'='"])),
            }
        }
        let rhs = self.expr()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error(&["'+'", "'-'", "'*'", "end of input"]));
        }
        Ok(DslEquation { lhs, rhs })
    }

    fn lhs_term(&mut self, negated: bool) -> PResult<LhsTerm> {
        let pos = self.pos();
        let coeff = match self.peek() {
            Tok::Num(..) => {
                let c = self.number()?;
                self.expect(Tok::Star, "'*'")?;
                Some(c)
            }
            _ => None,
        };
        let order = if self.is_ident("D") {
            self.bump();
            Some(self.deriv_tail()?)
        } else if self.is_ident("y") {
            self.bump();
            None
        } else {
            let mut exp = vec!["'D'", "'y'"];
            if coeff.is_none() {
                exp.insert(0, "number");
            }
            return Err(self.error(&exp));
        };
        Ok(LhsTerm {
            negated,
            coeff,
            order,
            pos,
        })
    }

    fn expr(&mut self) -> PResult<DslExpr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SourceDiagnostic::at(self.pos(), "expression nested too deeply"));
        }
        let mut acc = self.mul()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = DslExpr::Add(Box::new(acc), Box::new(self.mul()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = DslExpr::Sub(Box::new(acc), Box::new(self.mul()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn mul(&mut self) -> PResult<DslExpr> {
        let mut acc = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = DslExpr::Mul(Box::new(acc), Box::new(self.atom()?));
        }
        Ok(acc)
    }

    /// `"*" "t" "^" "a" "/" "a"` inside a source-term call.
    fn fractional_clock(&mut self) -> PResult<()> {
        self.expect(Tok::Star, "'*'")?;
        self.expect_ident("t")?;
        self.expect(Tok::Caret, "'^'")?;
        self.expect_ident("a")?;
        self.expect(Tok::Slash, "'/'")?;
        self.expect_ident("a")
    }

    fn atom(&mut self) -> PResult<DslExpr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(DslExpr::Num(v))
            }
            Tok::Minus => {
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(SourceDiagnostic::at(pos, "expression nested too deeply"));
                }
                self.bump();
                let inner = self.atom()?;
                self.depth -= 1;
                Ok(DslExpr::Neg(Box::new(inner)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "y" => {
                        if *self.peek() == Tok::Caret {
                            self.bump();
                            let p = self.pos();
                            match self.peek().clone() {
                                Tok::Num(v, true) if v >= 1.0 && v <= u32::MAX as f64 => {
                                    self.bump();
                                    Ok(DslExpr::YPow(v as u32, pos))
                                }
                                Tok::Num(..) => {
                                    Err(SourceDiagnostic::at(p, "power of y must be a positive integer"))
                                }
                                _ => Err(self.error(&["integer"])),
                            }
                        } else {
                            Ok(DslExpr::Y)
                        }
                    }
                    "t" => {
                        self.expect(Tok::Caret, "'^'")?;
                        Ok(DslExpr::TPow(self.number()?, pos))
                    }
                    "D" => Ok(DslExpr::D(self.deriv_tail()?, pos)),
                    "exp" | "sin" | "cos" => {
                        self.expect(Tok::LParen, "'('")?;
                        let w = self.signed_number()?;
                        self.fractional_clock()?;
                        let phase = if name == "exp" {
                            None
                        } else {
                            match self.peek() {
                                Tok::Plus => {
                                    self.bump();
                                    Some(self.signed_number()?)
                                }
                                Tok::Minus => {
                                    self.bump();
                                    Some(-self.number()?)
                                }
                                _ => None,
                            }
                        };
                        let close: &[&str] = if name == "exp" { &["')'"] } else { &["'+'", "'-'", "')'"] };
                        if *self.peek() != Tok::RParen {
                            return Err(self.error(close));
                        }
                        self.bump();
                        Ok(match name.as_str() {
                            "exp" => DslExpr::Exp(w),
                            "sin" => DslExpr::Sin(w, phase),
                            _ => DslExpr::Cos(w, phase),
                        })
                    }
                    other => Err(SourceDiagnostic {
                        line: pos.line,
                        col: pos.col,
                        message: format!("unknown identifier '{other}'"),
                        expected: atom_starts(),
                    }),
                }
            }
            _ => Err(self.error(&atom_starts().iter().map(String::as_str).collect::<Vec<_>>())),
        }
    }
}

fn atom_starts() -> Vec<String> {
    ["number", "'y'", "'t'", "'D'", "'exp'", "'sin'", "'cos'", "'('", "'-'"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Parses the syntax of an equation without interpreting it.
pub fn parse_ast(src: &str) -> Result<DslEquation, Vec<SourceDiagnostic>> {
    let mut p = Parser::new(src).map_err(|d| vec![d])?;
    p.equation().map_err(|d| vec![d])
}

/// Parses a bare right-hand-side style expression.
pub fn parse_expr(src: &str) -> Result<DslExpr, Vec<SourceDiagnostic>> {
    let mut p = Parser::new(src).map_err(|d| vec![d])?;
    let e = p.expr().map_err(|d| vec![d])?;
    if *p.peek() != Tok::Eof {
        return Err(vec![p.error(&["'+'", "'-'", "'*'", "end of input"])]);
    }
    Ok(e)
}

// -------------------------------------------------------------- lowering

struct Lowering {
    alpha: f64,
    /// Right-hand side orders must stay below this shift.
    max_shift: Option<usize>,
    diags: Vec<SourceDiagnostic>,
}

impl Lowering {
    fn order(&mut self, spec: OrderSpec, pos: Pos) -> Option<DerivOrder> {
        let beta = spec.resolve(self.alpha);
        match DerivOrder::new(beta, self.alpha) {
            Ok(o) => Some(o),
            Err(e) => {
                self.diags.push(SourceDiagnostic::at(pos, format!("derivative order {beta}: {e}")));
                None
            }
        }
    }

    fn expr(&mut self, e: &DslExpr) -> Expr {
        match e {
            DslExpr::Num(c) => Expr::Const(*c),
            DslExpr::Y => Expr::Unknown,
            DslExpr::D(spec, pos) => match self.order(*spec, *pos) {
                Some(o) => {
                    if let Some(max) = self.max_shift {
                        if o.shift() >= max {
                            self.diags.push(SourceDiagnostic::at(
                                *pos,
                                format!(
                                    "right-hand side order {} must be below the principal order",
                                    o.beta()
                                ),
                            ));
                        }
                    }
                    Expr::Deriv(o)
                }
                None => Expr::Const(0.0),
            },
            DslExpr::YPow(n, _) => Expr::Unknown.pow(*n),
            DslExpr::TPow(p, pos) => {
                if let Err(err) = monomial_index(*p, self.alpha) {
                    self.diags.push(SourceDiagnostic::at(*pos, format!("t^{p}: {err}")));
                }
                Expr::Monomial(*p)
            }
            DslExpr::Exp(l) => Expr::ExpSrc(*l),
            DslExpr::Sin(w, c) => Expr::SinSrc {
                omega: *w,
                phase: c.unwrap_or(0.0),
            },
            DslExpr::Cos(w, c) => Expr::CosSrc {
                omega: *w,
                phase: c.unwrap_or(0.0),
            },
            DslExpr::Add(l, r) => self.expr(l) + self.expr(r),
            DslExpr::Sub(l, r) => self.expr(l) - self.expr(r),
            DslExpr::Neg(x) => -self.expr(x),
            DslExpr::Mul(l, r) => {
                let left = self.expr(l);
                let right = self.expr(r);
                match left {
                    Expr::Mul(mut fs) => {
                        fs.push(right);
                        Expr::Mul(fs)
                    }
                    other => Expr::Mul(vec![other, right]),
                }
            }
        }
    }
}

/// Lowers a right-hand-side expression that may not involve `y`, such as a
/// forcing term.
pub fn lower_source(e: &DslExpr, alpha: f64) -> Result<Expr, Vec<SourceDiagnostic>> {
    let mut l = Lowering {
        alpha,
        max_shift: None,
        diags: Vec::new(),
    };
    let out = l.expr(e);
    if out.depends_on_unknown() {
        l.diags.push(SourceDiagnostic::at(
            Pos { line: 1, col: 1 },
            "expression must not involve y",
        ));
    }
    if l.diags.is_empty() {
        Ok(out)
    } else {
        Err(l.diags)
    }
}

impl DslEquation {
    /// Normalizes to `T_principal y = rhs`.
    pub fn lower(&self, alpha: f64) -> Result<(DerivOrder, Expr), Vec<SourceDiagnostic>> {
        let mut l = Lowering {
            alpha,
            max_shift: None,
            diags: Vec::new(),
        };
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(vec![SourceDiagnostic::at(
                Pos { line: 1, col: 1 },
                format!("alpha must lie in (0, 1], got {alpha}"),
            )]);
        }

        let mut terms: Vec<(LhsTerm, Option<DerivOrder>)> = Vec::new();
        for t in &self.lhs {
            let order = match t.order {
                Some(spec) => match l.order(spec, t.pos) {
                    Some(o) => Some(o),
                    None => continue,
                },
                None => None,
            };
            terms.push((*t, order));
        }
        if !l.diags.is_empty() {
            return Err(l.diags);
        }

        let shift_of = |o: &Option<DerivOrder>| o.map_or(0, |o| o.shift());
        let top = terms.iter().map(|(_, o)| shift_of(o)).max().unwrap_or(0);
        let first_pos = self.lhs.first().map(|t| t.pos).unwrap_or_default();
        if top == 0 {
            return Err(vec![SourceDiagnostic::at(
                first_pos,
                "left-hand side needs a derivative term D[...] y",
            )]);
        }
        let principal_terms: Vec<_> = terms.iter().filter(|(_, o)| shift_of(o) == top).collect();
        if principal_terms.len() > 1 {
            return Err(vec![SourceDiagnostic::at(
                principal_terms[1].0.pos,
                "the highest-order derivative appears more than once on the left-hand side",
            )]);
        }
        let (pterm, porder) = principal_terms[0];
        let principal = porder.expect("top shift is positive");
        let pcoeff = pterm.signed_coeff();
        if pcoeff == 0.0 {
            return Err(vec![SourceDiagnostic::at(
                pterm.pos,
                "the highest-order derivative needs a nonzero coefficient",
            )]);
        }

        l.max_shift = Some(top);
        let mut rhs = l.expr(&self.rhs);
        for (t, order) in &terms {
            if shift_of(order) == top {
                continue;
            }
            let term = match order {
                Some(o) => Expr::Deriv(*o),
                None => Expr::Unknown,
            };
            let c = t.signed_coeff();
            rhs = if c == 1.0 {
                rhs - term
            } else if c == -1.0 {
                rhs + term
            } else {
                rhs - Expr::Const(c) * term
            };
        }
        if pcoeff != 1.0 {
            rhs = Expr::Const(1.0 / pcoeff) * rhs;
        }
        if l.diags.is_empty() {
            Ok((principal, rhs))
        } else {
            Err(l.diags)
        }
    }
}

/// Parses and normalizes an equation for the given `alpha`.
pub fn parse_equation(src: &str, alpha: f64) -> Result<ParsedEquation, Vec<SourceDiagnostic>> {
    let ast = parse_ast(src)?;
    let (principal, rhs) = ast.lower(alpha)?;
    Ok(ParsedEquation { ast, principal, rhs })
}
