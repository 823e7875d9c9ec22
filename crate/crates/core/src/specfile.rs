//! The line-oriented spec file format.
//!
//! ```text
//! [meta]
//! name = kodaira-thurston-ak
//! param t = 1
//!
//! [algebra]
//! dim = 4
//! d e4 = e1^e2
//!
//! [J]
//! 0 0 -1 0
//! ...
//!
//! [metric]
//! 1 0 0 0
//! 0 t 0 0
//! ...
//! ```
//!
//! Matrix entries are whitespace-separated exact expressions over integers,
//! `p/q`, declared parameters, `+ - * / ^` and parentheses. Column `j` of the
//! `[J]` block holds `J e_j`. Structure constants come either from coframe
//! relations (`d e4 = e1^e2 - 1/2 e2^e3`) or explicit triples
//! (`c k i j = v` meaning `[e_i, e_j]` has `e_k`-component `v`). Decimal
//! literals are rejected so that every number is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::fmt_rational;
use crate::manifold::{ManifoldSpec, SpecError};
use crate::{Rational, RealMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: floats forbidden; write {suggestion}")]
    Float {
        line: usize,
        column: usize,
        suggestion: String,
    },
    #[error("line {line}: dimension mismatch: {message}")]
    Dimension { line: usize, message: String },
    #[error("missing section [{0}]")]
    MissingSection(&'static str),
    #[error("unknown parameter '{0}'")]
    UnknownParameter(String),
    #[error("line {line}: division by zero")]
    DivisionByZero { line: usize },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug, PartialEq)]
struct Tok {
    token: Token,
    column: usize,
}

/// An exact arithmetic expression possibly mentioning parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Debug)]
enum EvalError {
    Unknown(String),
    DivisionByZero,
}

impl Expr {
    fn eval(&self, params: &BTreeMap<String, Rational>) -> Result<Rational, EvalError> {
        Ok(match self {
            Expr::Num(r) => r.clone(),
            Expr::Param(p) => params.get(p).cloned().ok_or_else(|| EvalError::Unknown(p.clone()))?,
            Expr::Neg(a) => -a.eval(params)?,
            Expr::Add(a, b) => a.eval(params)? + b.eval(params)?,
            Expr::Sub(a, b) => a.eval(params)? - b.eval(params)?,
            Expr::Mul(a, b) => a.eval(params)? * b.eval(params)?,
            Expr::Div(a, b) => {
                let den = b.eval(params)?;
                if den.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(params)? / den
            }
            Expr::Pow(a, k) => {
                let base = a.eval(params)?;
                if *k < 0 && base.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                num_traits::pow::Pow::pow(base, *k)
            }
        })
    }

    fn params(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Param(p) => {
                out.insert(p.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.params(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Exact value of a decimal literal such as `0.5` or `-1.25`, as `p/q`.
fn decimal_suggestion(literal: &str) -> String {
    let (int, frac) = literal.split_once('.').unwrap_or((literal, ""));
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().unwrap_or_default();
    let den = num_traits::pow(BigInt::from(10), frac.len());
    fmt_rational(&Rational::new(num, den))
}

fn lex(text: &str, line: usize, offset: usize) -> Result<Vec<Tok>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let literal: String = chars[start..i].iter().collect();
            if literal.contains('.') {
                return Err(ParseError::Float {
                    line,
                    column,
                    suggestion: decimal_suggestion(&literal),
                });
            }
            out.push(Tok {
                token: Token::Int(literal.parse().expect("digits")),
                column,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok {
                token: Token::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else if "+-*/^()=".contains(c) {
            out.push(Tok {
                token: Token::Op(c),
                column,
            });
            i += 1;
        } else {
            return Err(syntax(line, column, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> ExprParser<'a> {
    fn new(toks: &'a [Tok], line: usize, end_column: usize) -> Self {
        Self {
            toks,
            pos: 0,
            line,
            end_column,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|t| &t.token)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Token::Ident(_)) | Some(Token::Op('('))) {
                // juxtaposition: 2t, 3(1+t)
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let column = self.column();
        match self.peek().cloned() {
            Some(Token::Int(k)) => {
                self.pos += 1;
                let k = k
                    .to_i32()
                    .ok_or_else(|| syntax(self.line, column, "exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
            }
            _ => Err(syntax(self.line, column, "exponent must be an integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let column = self.column();
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(v)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Param(name))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.line, self.column(), "expected ')'"));
                }
                Ok(e)
            }
            Some(t) => Err(syntax(self.line, column, format!("unexpected token {t:?}"))),
            None => Err(syntax(self.line, column, "unexpected end of expression")),
        }
    }
}

fn parse_expr(text: &str, line: usize, offset: usize) -> Result<Expr, ParseError> {
    let toks = lex(text, line, offset)?;
    let mut p = ExprParser::new(&toks, line, offset + text.chars().count() + 1);
    let e = p.expr()?;
    if !p.done() {
        return Err(syntax(line, p.column(), "trailing input in expression"));
    }
    Ok(e)
}

/// One `coefficient · e^i ∧ e^j` term of a coframe relation.
#[derive(Clone, Debug, PartialEq)]
struct WedgeTerm {
    coef: Expr,
    i: usize,
    j: usize,
}

#[derive(Clone, Debug, PartialEq)]
struct ConstantEntry {
    k: usize,
    i: usize,
    j: usize,
    value: Expr,
}

/// A parsed spec file whose entries may still mention parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecTemplate {
    pub name: String,
    pub description: Option<String>,
    pub dim: usize,
    /// Declared parameters and their default values.
    pub params: BTreeMap<String, Rational>,
    relations: Vec<(usize, Vec<WedgeTerm>, usize)>,
    constants: Vec<(ConstantEntry, usize)>,
    j: Vec<(Vec<Expr>, usize)>,
    metric: Vec<(Vec<Expr>, usize)>,
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    None,
    Meta,
    Algebra,
    J,
    Metric,
}

fn frame_index(tok: Option<&Tok>, dim: Option<usize>, line: usize, fallback: usize) -> Result<usize, ParseError> {
    let column = tok.map_or(fallback, |t| t.column);
    let Some(Tok {
        token: Token::Ident(name),
        ..
    }) = tok
    else {
        return Err(syntax(line, column, "expected a coframe name like e1"));
    };
    let idx: usize = name
        .strip_prefix('e')
        .and_then(|s| s.parse().ok())
        .filter(|&i: &usize| i >= 1)
        .ok_or_else(|| syntax(line, column, format!("'{name}' is not a coframe name like e1")))?;
    if let Some(d) = dim {
        if idx > d {
            return Err(ParseError::Dimension {
                line,
                message: format!("e{idx} exceeds dimension {d}"),
            });
        }
    }
    Ok(idx - 1)
}

fn parse_relation_rhs(toks: &[Tok], dim: Option<usize>, line: usize, end: usize) -> Result<Vec<WedgeTerm>, ParseError> {
    if toks.len() == 1 && toks[0].token == Token::Int(BigInt::zero()) {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut pos = 0;
    let at = |pos: usize| toks.get(pos).map_or(end, |t| t.column);
    while pos < toks.len() {
        let mut negative = false;
        match toks[pos].token {
            Token::Op('+') => pos += 1,
            Token::Op('-') => {
                negative = true;
                pos += 1;
            }
            _ if !terms.is_empty() => return Err(syntax(line, at(pos), "expected '+' or '-' between terms")),
            _ => {}
        }
        let mut coef = Expr::Num(Rational::one());
        match toks.get(pos).map(|t| &t.token) {
            Some(Token::Int(_)) => {
                let start = pos;
                pos += 1;
                if toks.get(pos).map(|t| &t.token) == Some(&Token::Op('/')) {
                    pos += 2;
                }
                let mut p = ExprParser::new(&toks[start..pos.min(toks.len())], line, end);
                coef = p.expr()?;
                if !p.done() {
                    return Err(syntax(line, at(start), "malformed coefficient"));
                }
            }
            Some(Token::Op('(')) => {
                let start = pos;
                let mut depth = 0;
                while pos < toks.len() {
                    match toks[pos].token {
                        Token::Op('(') => depth += 1,
                        Token::Op(')') => depth -= 1,
                        _ => {}
                    }
                    pos += 1;
                    if depth == 0 {
                        break;
                    }
                }
                let mut p = ExprParser::new(&toks[start..pos], line, end);
                coef = p.expr()?;
            }
            _ => {}
        }
        if toks.get(pos).map(|t| &t.token) == Some(&Token::Op('*')) {
            pos += 1;
        }
        let i = frame_index(toks.get(pos), dim, line, at(pos))?;
        pos += 1;
        if toks.get(pos).map(|t| &t.token) != Some(&Token::Op('^')) {
            return Err(syntax(line, at(pos), "expected '^' in a wedge monomial"));
        }
        pos += 1;
        let j = frame_index(toks.get(pos), dim, line, at(pos))?;
        pos += 1;
        if i == j {
            return Err(syntax(line, at(pos - 1), "repeated coframe element in wedge"));
        }
        if negative {
            coef = Expr::Neg(Box::new(coef));
        }
        terms.push(WedgeTerm { coef, i, j });
    }
    Ok(terms)
}

impl SpecTemplate {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut section = Section::None;
        let mut seen = BTreeSet::new();
        let mut name = None;
        let mut description = None;
        let mut dim: Option<usize> = None;
        let mut params = BTreeMap::new();
        let mut relations = Vec::new();
        let mut constants = Vec::new();
        let mut j = Vec::new();
        let mut metric = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            if trimmed.starts_with('[') {
                if !trimmed.ends_with(']') {
                    return Err(syntax(line, indent + 1, "unterminated section header"));
                }
                let header = trimmed[1..trimmed.len() - 1].trim();
                section = match header {
                    "meta" => Section::Meta,
                    "algebra" => Section::Algebra,
                    "J" => Section::J,
                    "metric" => Section::Metric,
                    other => return Err(syntax(line, indent + 2, format!("unknown section [{other}]"))),
                };
                if !seen.insert(header.to_string()) {
                    return Err(syntax(line, indent + 1, format!("duplicate section [{header}]")));
                }
                continue;
            }
            match section {
                Section::None => return Err(syntax(line, indent + 1, "content before any section header")),
                Section::Meta => {
                    let Some((key, value)) = trimmed.split_once('=') else {
                        return Err(syntax(line, indent + 1, "expected 'key = value'"));
                    };
                    let key = key.trim();
                    let value_col = indent + trimmed.find('=').unwrap() + 2;
                    if let Some(p) = key.strip_prefix("param ") {
                        let p = p.trim().to_string();
                        if !p.chars().all(|c| c.is_alphanumeric() || c == '_') || p.starts_with(|c: char| c == 'e' || c.is_ascii_digit()) {
                            return Err(syntax(line, indent + 7, format!("invalid parameter name '{p}'")));
                        }
                        let e = parse_expr(value, line, value_col)?;
                        let v = e.eval(&BTreeMap::new()).map_err(|err| match err {
                            EvalError::DivisionByZero => ParseError::DivisionByZero { line },
                            EvalError::Unknown(_) => syntax(line, value_col, "parameter defaults must be numbers"),
                        })?;
                        params.insert(p, v);
                    } else {
                        match key {
                            "name" => name = Some(value.trim().to_string()),
                            "description" => description = Some(value.trim().to_string()),
                            other => return Err(syntax(line, indent + 1, format!("unknown meta key '{other}'"))),
                        }
                    }
                }
                Section::Algebra => {
                    let toks = lex(content, line, 0)?;
                    let end = content.chars().count() + 1;
                    match toks.first().map(|t| &t.token) {
                        Some(Token::Ident(w)) if w == "dim" => {
                            let value = match toks.as_slice() {
                                [_, Tok { token: Token::Op('='), .. }, Tok { token: Token::Int(v), .. }] => v.to_usize(),
                                _ => None,
                            };
                            let Some(v) = value else {
                                return Err(syntax(line, indent + 1, "expected 'dim = <integer>'"));
                            };
                            dim = Some(v);
                        }
                        Some(Token::Ident(w)) if w == "d" => {
                            let k = frame_index(toks.get(1), dim, line, end)?;
                            if toks.get(2).map(|t| &t.token) != Some(&Token::Op('=')) {
                                return Err(syntax(line, toks.get(2).map_or(end, |t| t.column), "expected '='"));
                            }
                            let terms = parse_relation_rhs(&toks[3..], dim, line, end)?;
                            if terms.is_empty() && toks.len() == 3 {
                                return Err(syntax(line, end, "missing right-hand side"));
                            }
                            relations.push((k, terms, line));
                        }
                        Some(Token::Ident(w)) if w == "c" => {
                            let mut idx3 = [0usize; 3];
                            for (slot, t) in idx3.iter_mut().zip(toks.iter().skip(1)) {
                                let Token::Int(v) = &t.token else {
                                    return Err(syntax(line, t.column, "expected 'c k i j = value'"));
                                };
                                *slot = v
                                    .to_usize()
                                    .filter(|&x| x >= 1)
                                    .ok_or_else(|| syntax(line, t.column, "frame indices start at 1"))?
                                    - 1;
                                if dim.is_some_and(|d| *slot >= d) {
                                    return Err(ParseError::Dimension {
                                        line,
                                        message: format!("index {} exceeds dimension", *slot + 1),
                                    });
                                }
                            }
                            if toks.len() < 6 || toks[4].token != Token::Op('=') {
                                return Err(syntax(line, indent + 1, "expected 'c k i j = value'"));
                            }
                            let mut p = ExprParser::new(&toks[5..], line, end);
                            let value = p.expr()?;
                            if !p.done() {
                                return Err(syntax(line, p.column(), "trailing input"));
                            }
                            let [k, i, j] = idx3;
                            constants.push((ConstantEntry { k, i, j, value }, line));
                        }
                        _ => return Err(syntax(line, indent + 1, "expected 'dim = ..', 'd eK = ..' or 'c k i j = ..'")),
                    }
                }
                Section::J | Section::Metric => {
                    let mut row = Vec::new();
                    let mut col = 0;
                    for chunk in content.split_whitespace() {
                        let start = content[col..].find(chunk).unwrap() + col;
                        row.push(parse_expr(chunk, line, start)?);
                        col = start + chunk.len();
                    }
                    if section == Section::J {
                        j.push((row, line));
                    } else {
                        metric.push((row, line));
                    }
                }
            }
        }

        if !seen.contains("algebra") {
            return Err(ParseError::MissingSection("algebra"));
        }
        if !seen.contains("J") {
            return Err(ParseError::MissingSection("J"));
        }
        if !seen.contains("metric") {
            return Err(ParseError::MissingSection("metric"));
        }
        let dim = dim.ok_or(ParseError::Dimension {
            line: 0,
            message: "[algebra] must declare 'dim = <n>'".into(),
        })?;
        if dim == 0 || dim % 2 != 0 {
            return Err(ParseError::Spec(SpecError::Dimension(dim)));
        }
        for (label, rows) in [("J", &j), ("metric", &metric)] {
            if rows.len() != dim {
                return Err(ParseError::Dimension {
                    line: rows.last().map_or(0, |r| r.1),
                    message: format!("[{label}] has {} rows, expected {dim}", rows.len()),
                });
            }
            for (row, line) in rows {
                if row.len() != dim {
                    return Err(ParseError::Dimension {
                        line: *line,
                        message: format!("row has {} entries, expected {dim}", row.len()),
                    });
                }
            }
        }
        for (k, terms, line) in &relations {
            let ok = *k < dim && terms.iter().all(|t| t.i < dim && t.j < dim);
            if !ok {
                return Err(ParseError::Dimension {
                    line: *line,
                    message: format!("coframe index exceeds dimension {dim}"),
                });
            }
        }

        let template = Self {
            name: name.unwrap_or_else(|| "unnamed".into()),
            description,
            dim,
            params,
            relations,
            constants,
            j,
            metric,
        };
        let mut used = BTreeSet::new();
        template.each_expr(|e| e.params(&mut used));
        if let Some(unknown) = used.iter().find(|p| !template.params.contains_key(*p)) {
            return Err(ParseError::UnknownParameter(unknown.clone()));
        }
        Ok(template)
    }

    fn each_expr(&self, mut f: impl FnMut(&Expr)) {
        for (_, terms, _) in &self.relations {
            terms.iter().for_each(|t| f(&t.coef));
        }
        for (c, _) in &self.constants {
            f(&c.value);
        }
        for (row, _) in self.j.iter().chain(&self.metric) {
            row.iter().for_each(&mut f);
        }
    }

    /// Substitutes parameter values (defaults unless overridden).
    pub fn instantiate(&self, overrides: &BTreeMap<String, Rational>) -> Result<ManifoldSpec, ParseError> {
        let mut values = self.params.clone();
        for (k, v) in overrides {
            if !values.contains_key(k) {
                return Err(ParseError::UnknownParameter(k.clone()));
            }
            values.insert(k.clone(), v.clone());
        }
        let eval = |e: &Expr, line: usize| {
            e.eval(&values).map_err(|err| match err {
                EvalError::DivisionByZero => ParseError::DivisionByZero { line },
                EvalError::Unknown(p) => ParseError::UnknownParameter(p),
            })
        };

        let n = self.dim;
        let mut rel = vec![Vec::new(); n];
        for (k, terms, line) in &self.relations {
            for t in terms {
                rel[*k].push((eval(&t.coef, *line)?, t.i, t.j));
            }
        }
        let mut c = ManifoldSpec::constants_from_differentials(n, &rel);
        let explicit: BTreeSet<(usize, usize, usize)> = self.constants.iter().map(|(e, _)| (e.k, e.i, e.j)).collect();
        for (e, line) in &self.constants {
            let v = eval(&e.value, *line)?;
            if !explicit.contains(&(e.k, e.j, e.i)) {
                c[e.k][e.j][e.i] = -v.clone();
            }
            c[e.k][e.i][e.j] = v;
        }
        let matrix = |rows: &Vec<(Vec<Expr>, usize)>| -> Result<RealMatrix, ParseError> {
            let mut out = Vec::new();
            for (row, line) in rows {
                out.push(row.iter().map(|e| eval(e, *line)).collect::<Result<Vec<_>, _>>()?);
            }
            Ok(RealMatrix::from_rows(out))
        };
        let mut spec = ManifoldSpec::new(self.name.clone(), n, c, matrix(&self.j)?, matrix(&self.metric)?)?;
        spec.params = values;
        Ok(spec)
    }
}

pub fn parse_spec(text: &str) -> Result<ManifoldSpec, ParseError> {
    SpecTemplate::parse(text)?.instantiate(&BTreeMap::new())
}

pub fn read_template(path: &std::path::Path) -> Result<SpecTemplate, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    SpecTemplate::parse(&text)
}

fn is_antisymmetric(spec: &ManifoldSpec) -> bool {
    let c = &spec.constants;
    let n = spec.dim;
    (0..n).all(|k| (0..n).all(|i| (0..n).all(|j| c[k][i][j] == -c[k][j][i].clone())))
}

fn write_relation(out: &mut String, k: usize, terms: &[(Rational, usize, usize)]) {
    let _ = write!(out, "d e{} =", k + 1);
    for (idx, (coef, i, j)) in terms.iter().enumerate() {
        let mono = format!("e{}^e{}", i + 1, j + 1);
        let mag = coef.abs();
        let body = if mag.is_one() { mono } else { format!("{} {mono}", fmt_rational(&mag)) };
        let sign = if coef.is_negative() { "-" } else { "+" };
        if idx == 0 {
            let lead = if coef.is_negative() { "-" } else { "" };
            let _ = write!(out, " {lead}{body}");
        } else {
            let _ = write!(out, " {sign} {body}");
        }
    }
    out.push('\n');
}

/// Canonical text for a concrete spec; parsing it returns an equal spec.
pub fn serialize(spec: &ManifoldSpec) -> String {
    let n = spec.dim;
    let mut out = String::new();
    out.push_str("[meta]\n");
    let _ = writeln!(out, "name = {}", spec.name);
    for (p, v) in &spec.params {
        let _ = writeln!(out, "param {p} = {}", fmt_rational(v));
    }
    out.push_str("\n[algebra]\n");
    let _ = writeln!(out, "dim = {n}");
    if is_antisymmetric(spec) {
        for k in 0..n {
            let terms: Vec<(Rational, usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !spec.constants[k][i][j].is_zero())
                .map(|(i, j)| (-spec.constants[k][i][j].clone(), i, j))
                .collect();
            if !terms.is_empty() {
                write_relation(&mut out, k, &terms);
            }
        }
    } else {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = &spec.constants[k][i][j];
                    if !v.is_zero() {
                        let _ = writeln!(out, "c {} {} {} = {}", k + 1, i + 1, j + 1, fmt_rational(v));
                    }
                }
            }
        }
    }
    for (label, m) in [("J", &spec.j), ("metric", &spec.metric)] {
        let _ = writeln!(out, "\n[{label}]");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| fmt_rational(&m[(i, j)])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

/// SHA-256 of the canonical serialization, hex encoded.
pub fn digest(spec: &ManifoldSpec) -> String {
    let hash = Sha256::digest(serialize(spec).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses a comma-separated list of exact rationals, e.g. `1,2,-3/2`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, ParseError> {
    text.split(',')
        .map(|s| parse_rational(s.trim()))
        .collect()
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let e = parse_expr(text, 1, 0)?;
    e.eval(&BTreeMap::new()).map_err(|err| match err {
        EvalError::DivisionByZero => ParseError::DivisionByZero { line: 1 },
        EvalError::Unknown(p) => ParseError::UnknownParameter(p),
    })
}
