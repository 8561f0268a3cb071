//! Symbol expressions: parsing, `bar` normalization and evaluation.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' int)?
//! base   := 'z' | number ['i'] | 'i' | 'B(' expr ')' | 'bar(' expr ')' | '(' expr ')'
//! ```
//! The argument of `B(...)` must be a constant.

use std::fmt;

use num_complex::Complex64;
use toepkern::{Blaschke64, Rational64};

/// Largest accepted exponent magnitude.
pub const MAX_EXPONENT: i32 = 64;
/// Largest accepted nesting depth.
pub const MAX_DEPTH: usize = 200;
/// Largest total degree (numerator plus denominator) an expression may reach.
pub const MAX_DEGREE: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Z,
    Const(Complex64),
    /// The Blaschke factor `(z - lam) / (1 - conj(lam) z)`.
    Factor(Complex64),
    Bar(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: expected {}, found {}", self.position, self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for ParseError {}

/// Error from evaluating a parsed expression.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    Parse(ParseError),
    Engine(toepkern::Error),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Parse(e) => e.fmt(f),
            EvalError::Engine(e) => e.fmt(f),
        }
    }
}

impl From<ParseError> for EvalError {
    fn from(e: ParseError) -> Self {
        EvalError::Parse(e)
    }
}

impl From<toepkern::Error> for EvalError {
    fn from(e: toepkern::Error) -> Self {
        EvalError::Engine(e)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

const FACTOR_START: &[&str] = &["'z'", "number", "'i'", "'B('", "'bar('", "'('", "'-'"];

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn error(&mut self, expected: &[&'static str]) -> ParseError {
        let found = self.found();
        ParseError { position: self.pos, expected: expected.to_vec(), found }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, name: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word) {
            let rest = &self.src[self.pos + word.len()..];
            let rest = rest.trim_start();
            if rest.starts_with('(') {
                self.pos = self.src.len() - rest.len() + 1;
                return true;
            }
        }
        false
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError { position: self.pos, expected: vec!["shallower nesting"], found: "too deep".into() });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let out = if self.eat('-') {
            Expr::Neg(Box::new(self.factor()?))
        } else {
            let base = self.base()?;
            if self.eat('^') {
                Expr::Pow(Box::new(base), self.integer()?)
            } else {
                base
            }
        };
        self.depth -= 1;
        Ok(out)
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat('-');
        self.skip_ws();
        let digits_start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error(&["integer exponent"]));
        }
        match self.src[digits_start..self.pos].parse::<i32>() {
            Ok(n) if n <= MAX_EXPONENT => Ok(if neg { -n } else { n }),
            _ => Err(ParseError { position: start, expected: vec!["exponent of magnitude at most 64"], found: self.src[start..self.pos].into() }),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            let ds = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k > ds {
                end = k;
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok(v)
            }
            _ => Err(ParseError { position: start, expected: vec!["number"], found: format!("'{}'", &self.src[start..end]) }),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                Ok(Expr::Z)
            }
            Some('i') => {
                self.pos += 1;
                Ok(Expr::Const(Complex64::new(0.0, 1.0)))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')', "')'")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let v = self.number()?;
                if self.src[self.pos..].starts_with('i') {
                    self.pos += 1;
                    Ok(Expr::Const(Complex64::new(0.0, v)))
                } else {
                    Ok(Expr::Const(Complex64::new(v, 0.0)))
                }
            }
            _ => {
                if self.keyword("bar") {
                    let e = self.expr()?;
                    self.expect(')', "')'")?;
                    return Ok(Expr::Bar(Box::new(e)));
                }
                let at = self.pos;
                if self.keyword("B") {
                    let e = self.expr()?;
                    self.expect(')', "')'")?;
                    return match constant_value(&normalize(&e)) {
                        Some(lam) => Ok(Expr::Factor(lam)),
                        None => Err(ParseError { position: at, expected: vec!["constant argument of B(...)"], found: "expression in z".into() }),
                    };
                }
                Err(self.error(FACTOR_START))
            }
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text, pos: 0, depth: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]));
    }
    Ok(e)
}

/// Parses a constant such as `0.3`, `-2i` or `0.3-0.4i`.
pub fn parse_complex(text: &str) -> Result<Complex64, ParseError> {
    let e = normalize(&parse(text)?);
    constant_value(&e).ok_or(ParseError { position: 0, expected: vec!["constant"], found: "expression in z".into() })
}

/// Parses a comma-separated list of constants.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_complex(part).map_err(|mut e| {
            e.position += offset;
            e
        })?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// Pushes every `bar` to the leaves: it distributes over the field
/// operations, conjugates constants, maps `z` to `z^-1` and `B(lam)` to
/// `B(lam)^-1`. The result contains no `Bar` node.
pub fn normalize(e: &Expr) -> Expr {
    match e {
        Expr::Bar(inner) => conj(&normalize(inner)),
        Expr::Z | Expr::Const(_) | Expr::Factor(_) => e.clone(),
        Expr::Neg(a) => Expr::Neg(Box::new(normalize(a))),
        Expr::Add(a, b) => Expr::Add(Box::new(normalize(a)), Box::new(normalize(b))),
        Expr::Sub(a, b) => Expr::Sub(Box::new(normalize(a)), Box::new(normalize(b))),
        Expr::Mul(a, b) => Expr::Mul(Box::new(normalize(a)), Box::new(normalize(b))),
        Expr::Div(a, b) => Expr::Div(Box::new(normalize(a)), Box::new(normalize(b))),
        Expr::Pow(a, n) => Expr::Pow(Box::new(normalize(a)), *n),
    }
}

// conjugate of a bar-free tree on the circle
fn conj(e: &Expr) -> Expr {
    match e {
        Expr::Z => Expr::Pow(Box::new(Expr::Z), -1),
        Expr::Const(c) => Expr::Const(c.conj()),
        Expr::Factor(l) => Expr::Pow(Box::new(Expr::Factor(*l)), -1),
        Expr::Pow(a, n) => match (a.as_ref(), *n) {
            // undo the images of z and B(lam)
            (Expr::Z, -1) => Expr::Z,
            (Expr::Factor(l), -1) => Expr::Factor(*l),
            _ => Expr::Pow(Box::new(conj(a)), *n),
        },
        Expr::Bar(a) => normalize(a),
        Expr::Neg(a) => Expr::Neg(Box::new(conj(a))),
        Expr::Add(a, b) => Expr::Add(Box::new(conj(a)), Box::new(conj(b))),
        Expr::Sub(a, b) => Expr::Sub(Box::new(conj(a)), Box::new(conj(b))),
        Expr::Mul(a, b) => Expr::Mul(Box::new(conj(a)), Box::new(conj(b))),
        Expr::Div(a, b) => Expr::Div(Box::new(conj(a)), Box::new(conj(b))),
    }
}

/// Value of an expression without `z`, or `None`.
pub fn constant_value(e: &Expr) -> Option<Complex64> {
    Some(match e {
        Expr::Z | Expr::Factor(_) => return None,
        Expr::Const(c) => *c,
        Expr::Bar(a) => constant_value(a)?.conj(),
        Expr::Neg(a) => -constant_value(a)?,
        Expr::Add(a, b) => constant_value(a)? + constant_value(b)?,
        Expr::Sub(a, b) => constant_value(a)? - constant_value(b)?,
        Expr::Mul(a, b) => constant_value(a)? * constant_value(b)?,
        Expr::Div(a, b) => constant_value(a)? / constant_value(b)?,
        Expr::Pow(a, n) => constant_value(a)?.powi(*n),
    })
}

/// Upper bound on numerator plus denominator degree of `e`.
fn degree_bound(e: &Expr) -> usize {
    match e {
        Expr::Z => 1,
        Expr::Const(_) => 0,
        Expr::Factor(_) => 2,
        Expr::Neg(a) => degree_bound(a),
        Expr::Bar(a) => degree_bound(a).saturating_mul(2),
        Expr::Add(a, b) | Expr::Sub(a, b) => degree_bound(a).saturating_add(degree_bound(b)).saturating_mul(2),
        Expr::Mul(a, b) | Expr::Div(a, b) => degree_bound(a).saturating_add(degree_bound(b)),
        Expr::Pow(a, n) => degree_bound(a).saturating_mul(n.unsigned_abs() as usize),
    }
}

/// Evaluates the expression as a rational function on the circle.
pub fn evaluate(e: &Expr) -> Result<Rational64, toepkern::Error> {
    if degree_bound(e) > MAX_DEGREE {
        return Err(toepkern::Error::InvalidInput(format!("expression degree exceeds {MAX_DEGREE}")));
    }
    eval_inner(e)
}

fn eval_inner(e: &Expr) -> Result<Rational64, toepkern::Error> {
    let evaluate = eval_inner;
    Ok(match e {
        Expr::Z => Rational64::z_pow(1),
        Expr::Const(c) => Rational64::constant(*c),
        Expr::Factor(l) => Blaschke64::factor(*l)?.to_rational(),
        Expr::Bar(a) => evaluate(a)?.boundary_conjugate(),
        Expr::Neg(a) => evaluate(a)?.scale(Complex64::new(-1.0, 0.0)),
        Expr::Add(a, b) => evaluate(a)?.add(&evaluate(b)?)?,
        Expr::Sub(a, b) => evaluate(a)?.sub(&evaluate(b)?)?,
        Expr::Mul(a, b) => evaluate(a)?.mul(&evaluate(b)?)?,
        Expr::Div(a, b) => {
            let d = evaluate(b)?;
            if d.is_zero() {
                return Err(toepkern::Error::InvalidInput("division by zero".into()));
            }
            evaluate(a)?.div(&d)?
        }
        Expr::Pow(a, n) => evaluate(a)?.powi(*n)?,
    })
}

/// Parses, normalizes and evaluates `text`.
pub fn rational_from_str(text: &str) -> Result<Rational64, EvalError> {
    Ok(evaluate(&normalize(&parse(text)?))?)
}

/// Parses `text` and certifies the result as a finite Blaschke product.
pub fn blaschke_from_str(text: &str) -> Result<Blaschke64, EvalError> {
    let f = rational_from_str(text)?;
    Ok(Blaschke64::from_rational(&f, 1e-9)?)
}
