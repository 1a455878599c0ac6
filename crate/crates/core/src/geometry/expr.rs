//! Arithmetic expressions in the chart parameters `u`, `v` with symbolic
//! differentiation.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | name | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | sinh | cosh | exp | sqrt
//! ```
//!
//! Names are `u`, `v`, `pi` or a previously declared parameter.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Sqrt,
    Ln,
}

impl Func {
    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// 0 for `u`, 1 for `v`.
    Var(u8),
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, Arc<Expr>),
    Call(Func, Arc<Expr>),
}

use Expr::*;

fn c(x: f64) -> Arc<Expr> {
    Arc::new(Const(x))
}

fn as_const(e: &Expr) -> Option<f64> {
    if let Const(x) = e {
        Some(*x)
    } else {
        None
    }
}

fn neg(a: Arc<Expr>) -> Arc<Expr> {
    match &*a {
        Const(x) => c(-x),
        Neg(inner) => inner.clone(),
        _ => Arc::new(Neg(a)),
    }
}

fn add(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => c(x + y),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => Arc::new(Add(a, b)),
    }
}

fn sub(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => c(x - y),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => Arc::new(Sub(a, b)),
    }
}

fn mul(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => c(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => c(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        (Some(x), _) if x == -1.0 => neg(b),
        (_, Some(y)) if y == -1.0 => neg(a),
        _ => Arc::new(Mul(a, b)),
    }
}

fn div(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) if y != 0.0 => c(x / y),
        (Some(x), _) if x == 0.0 => c(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => Arc::new(Div(a, b)),
    }
}

fn pow(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => c(x.powf(y)),
        (_, Some(y)) if y == 0.0 => c(1.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => Arc::new(Pow(a, b)),
    }
}

fn call(f: Func, a: Arc<Expr>) -> Arc<Expr> {
    if let Some(x) = as_const(&a) {
        let y = match f {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Exp => x.exp(),
            Func::Sqrt => x.sqrt(),
            Func::Ln => x.ln(),
        };
        return c(y);
    }
    Arc::new(Call(f, a))
}

impl Expr {
    /// Partial derivative with respect to variable `var` (0 = u, 1 = v).
    pub fn derivative(self: &Arc<Self>, var: u8) -> Arc<Expr> {
        match &**self {
            Const(_) => c(0.0),
            Var(k) => c(if *k == var { 1.0 } else { 0.0 }),
            Neg(a) => neg(a.derivative(var)),
            Add(a, b) => add(a.derivative(var), b.derivative(var)),
            Sub(a, b) => sub(a.derivative(var), b.derivative(var)),
            Mul(a, b) => add(mul(a.derivative(var), b.clone()), mul(a.clone(), b.derivative(var))),
            Div(a, b) => {
                let num = sub(mul(a.derivative(var), b.clone()), mul(a.clone(), b.derivative(var)));
                div(num, mul(b.clone(), b.clone()))
            }
            Pow(a, b) => {
                if let Some(k) = as_const(b) {
                    mul(mul(c(k), pow(a.clone(), c(k - 1.0))), a.derivative(var))
                } else {
                    // (a^b)' = a^b (b' ln a + b a'/a)
                    let t1 = mul(b.derivative(var), call(Func::Ln, a.clone()));
                    let t2 = div(mul(b.clone(), a.derivative(var)), a.clone());
                    mul(self.clone(), add(t1, t2))
                }
            }
            Call(f, a) => {
                let da = a.derivative(var);
                let outer = match f {
                    Func::Sin => call(Func::Cos, a.clone()),
                    Func::Cos => neg(call(Func::Sin, a.clone())),
                    Func::Sinh => call(Func::Cosh, a.clone()),
                    Func::Cosh => call(Func::Sinh, a.clone()),
                    Func::Exp => self.clone(),
                    Func::Sqrt => div(c(0.5), self.clone()),
                    Func::Ln => div(c(1.0), a.clone()),
                };
                mul(outer, da)
            }
        }
    }

    pub fn eval<T: Real>(&self, u: T, v: T) -> T {
        match self {
            Const(x) => T::lit(*x),
            Var(0) => u,
            Var(_) => v,
            Neg(a) => -a.eval(u, v),
            Add(a, b) => a.eval(u, v) + b.eval(u, v),
            Sub(a, b) => a.eval(u, v) - b.eval(u, v),
            Mul(a, b) => a.eval(u, v) * b.eval(u, v),
            Div(a, b) => a.eval(u, v) / b.eval(u, v),
            Pow(a, b) => {
                let base = a.eval(u, v);
                match as_const(b) {
                    Some(k) if k.fract() == 0.0 && k.abs() < 64.0 => base.powi(k as i32),
                    _ => base.powf(b.eval(u, v)),
                }
            }
            Call(f, a) => {
                let x = a.eval(u, v);
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Exp => x.exp(),
                    Func::Sqrt => x.sqrt(),
                    Func::Ln => x.ln(),
                }
            }
        }
    }

    pub fn depends_on_parameters(&self) -> bool {
        match self {
            Const(_) => false,
            Var(_) => true,
            Neg(a) | Call(_, a) => a.depends_on_parameters(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.depends_on_parameters() || b.depends_on_parameters()
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const(x) => write!(f, "{x}"),
            Var(0) => write!(f, "u"),
            Var(_) => write!(f, "v"),
            Neg(a) => write!(f, "(-{a})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, b) => write!(f, "({a} ^ {b})"),
            Call(g, a) => write!(f, "{}({a})", g.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
    params: &'a BTreeMap<String, f64>,
    allow_vars: bool,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, column: self.col0 + at + 1, message: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Arc<Expr>> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' { add(lhs, rhs) } else { sub(lhs, rhs) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Arc<Expr>> {
        let mut lhs = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == b'*' { mul(lhs, rhs) } else { div(lhs, rhs) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Arc<Expr>> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Arc<Expr>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.unary()?;
            return Ok(pow(base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Arc<Expr>> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => self.err(start, "unexpected end of expression"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => {
                let mut end = self.pos;
                while end < self.src.len() && (self.src[end].is_ascii_digit() || self.src[end] == b'.') {
                    end += 1;
                }
                if end < self.src.len() && (self.src[end] == b'e' || self.src[end] == b'E') {
                    let mut k = end + 1;
                    if k < self.src.len() && (self.src[k] == b'+' || self.src[k] == b'-') {
                        k += 1;
                    }
                    if k < self.src.len() && self.src[k].is_ascii_digit() {
                        end = k;
                        while end < self.src.len() && self.src[end].is_ascii_digit() {
                            end += 1;
                        }
                    }
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap_or("");
                match text.parse::<f64>() {
                    Ok(x) => {
                        self.pos = end;
                        Ok(c(x))
                    }
                    Err(_) => self.err(start, format!("invalid number '{text}'")),
                }
            }
            Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                let mut end = self.pos;
                while end < self.src.len() && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_') {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.src[self.pos..end]).unwrap_or("").to_string();
                self.pos = end;
                if let Some(f) = Func::from_name(&name) {
                    if self.peek() != Some(b'(') {
                        return self.err(self.pos, format!("expected '(' after {name}"));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(b')') {
                        return self.err(self.pos, "expected ')'");
                    }
                    self.pos += 1;
                    return Ok(call(f, arg));
                }
                match name.as_str() {
                    "u" | "v" if self.allow_vars => Ok(Arc::new(Var(if name == "u" { 0 } else { 1 }))),
                    "u" | "v" => self.err(start, "chart parameters are not allowed here"),
                    "pi" => Ok(c(std::f64::consts::PI)),
                    _ => match self.params.get(&name) {
                        Some(&x) => Ok(c(x)),
                        None => self.err(start, format!("unknown name '{name}'")),
                    },
                }
            }
            Some(ch) => self.err(start, format!("unexpected character '{}'", ch as char)),
        }
    }
}

/// Parses `text` as found on `line`, starting at zero-based `column`, so
/// errors carry file positions.
pub fn parse_at(
    text: &str,
    line: usize,
    column: usize,
    params: &BTreeMap<String, f64>,
    allow_vars: bool,
) -> Result<Arc<Expr>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, line, col0: column, params, allow_vars };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(p.pos, "unexpected trailing input");
    }
    Ok(e)
}

/// Parses a standalone expression in `u`, `v` and the given parameters.
pub fn parse(text: &str, params: &BTreeMap<String, f64>) -> Result<Arc<Expr>> {
    parse_at(text, 1, 0, params, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Arc<Expr> {
        parse(s, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("1 + 2 * 3").eval(0.0, 0.0), 7.0);
        assert_eq!(p("2 ^ 3 ^ 2").eval(0.0, 0.0), 512.0);
        assert_eq!(p("-2 ^ 2").eval(0.0, 0.0), -4.0);
        assert_eq!(p("8 / 4 / 2").eval(0.0, 0.0), 1.0);
        assert_eq!(p("1e-2 * 100").eval(0.0, 0.0), 1.0);
    }

    #[test]
    fn derivatives_match_differences() {
        let e = p("sqrt(2 + cos(u)) * sinh(v) ^ 2 / exp(u * v) + u ^ v");
        let (u, v, h) = (0.7_f64, 1.1_f64, 1e-6);
        let du = e.derivative(0).eval(u, v);
        let fd = (e.eval(u + h, v) - e.eval(u - h, v)) / (2.0 * h);
        assert!((du - fd).abs() < 1e-8, "{du} {fd}");
        let dv = e.derivative(1).eval(u, v);
        let fd = (e.eval(u, v + h) - e.eval(u, v - h)) / (2.0 * h);
        assert!((dv - fd).abs() < 1e-8);
    }

    #[test]
    fn errors_carry_positions() {
        let params = BTreeMap::new();
        match parse_at("1 + foo", 3, 4, &params, true) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 9)),
            other => panic!("{other:?}"),
        }
        assert!(parse("(1 + 2", &params).is_err());
        assert!(parse("sin 2", &params).is_err());
        assert!(parse_at("u", 1, 0, &params, false).is_err());
    }

    #[test]
    fn parameters_are_substituted() {
        let mut params = BTreeMap::new();
        params.insert("R".to_string(), 2.5);
        assert_eq!(parse("R * pi", &params).unwrap().eval(0.0, 0.0), 2.5 * std::f64::consts::PI);
    }
}
