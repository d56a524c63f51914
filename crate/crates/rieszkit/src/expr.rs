//! Operator-expression language "opexpr-v1".
//!
//! Grammar:
//!   expr   := term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := atom ('^' uint)?
//!   atom   := 'x' | 'p' | 'i' | number | '(' expr ')'
//!           | 'inv' '(' expr ')' | 'mul' '(' scalar-expr ')' | 'diag' '(' ident ')'
//!
//! Subtraction is desugared at parse time: a - b becomes Add(a, Mul(Const(-1), b)).
//! A '-' directly before a number in atom position is a negative literal.
//! The scalar sub-language inside mul(...) is the same grammar restricted to
//! {x, numbers, + - * ^, parentheses}.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_SRC_LEN: usize = 4096;
pub const MAX_DEPTH: usize = 64;
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpr {
    Const(Complex64),
    X,
    P,
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, u32),
    Inv(Box<OperatorExpr>),
    /// Multiplication operator by a scalar function of x (the inner
    /// expression uses only x, numbers and + - * ^).
    MulOp(Box<OperatorExpr>),
    /// Diagonal operator from a named alpha sequence.
    Diag(String),
}

impl OperatorExpr {
    pub fn depth(&self) -> usize {
        match self {
            Self::Const(_) | Self::X | Self::P | Self::Diag(_) => 1,
            Self::Add(l, r) | Self::Mul(l, r) => 1 + l.depth().max(r.depth()),
            Self::Pow(b, _) => 1 + b.depth(),
            Self::Inv(e) | Self::MulOp(e) => 1 + e.depth(),
        }
    }

    /// True if the subtree uses only x, numbers and + - * ^ (valid inside mul).
    pub fn is_scalar_in_x(&self) -> bool {
        match self {
            Self::Const(c) => c.im == 0.0,
            Self::X => true,
            Self::P | Self::Diag(_) | Self::Inv(_) | Self::MulOp(_) => false,
            Self::Add(l, r) | Self::Mul(l, r) => l.is_scalar_in_x() && r.is_scalar_in_x(),
            Self::Pow(b, _) => b.is_scalar_in_x(),
        }
    }

    /// Evaluate a scalar-in-x subtree pointwise.
    pub fn eval_scalar(&self, x: f64) -> Result<f64> {
        match self {
            Self::Const(c) if c.im == 0.0 => Ok(c.re),
            Self::X => Ok(x),
            Self::Add(l, r) => Ok(l.eval_scalar(x)? + r.eval_scalar(x)?),
            Self::Mul(l, r) => Ok(l.eval_scalar(x)? * r.eval_scalar(x)?),
            Self::Pow(b, k) => Ok(b.eval_scalar(x)?.powi(*k as i32)),
            _ => Err(Error::Contract(format!(
                "not a scalar expression in x: {self}"
            ))),
        }
    }
}

fn fmt_f64(v: f64, out: &mut String) {
    if v == v.trunc() && v.abs() < 1e15 {
        out.push_str(&format!("{}", v as i64));
    } else {
        out.push_str(&format!("{v}"));
    }
}

fn print_into(e: &OperatorExpr, out: &mut String) {
    match e {
        OperatorExpr::Const(c) => {
            if c.im == 0.0 {
                fmt_f64(c.re, out);
            } else if c.re == 0.0 && c.im == 1.0 {
                out.push('i');
            } else if c.re == 0.0 {
                out.push('(');
                fmt_f64(c.im, out);
                out.push_str(" * i)");
            } else {
                out.push('(');
                fmt_f64(c.re, out);
                out.push_str(" + (");
                fmt_f64(c.im, out);
                out.push_str(" * i))");
            }
        }
        OperatorExpr::X => out.push('x'),
        OperatorExpr::P => out.push('p'),
        OperatorExpr::Add(l, r) => {
            out.push('(');
            print_into(l, out);
            out.push_str(" + ");
            print_into(r, out);
            out.push(')');
        }
        OperatorExpr::Mul(l, r) => {
            out.push('(');
            print_into(l, out);
            out.push_str(" * ");
            print_into(r, out);
            out.push(')');
        }
        OperatorExpr::Pow(b, k) => {
            match **b {
                OperatorExpr::X | OperatorExpr::P => print_into(b, out),
                _ => {
                    out.push('(');
                    print_into(b, out);
                    out.push(')');
                }
            }
            out.push('^');
            out.push_str(&k.to_string());
        }
        OperatorExpr::Inv(inner) => {
            out.push_str("inv(");
            print_into(inner, out);
            out.push(')');
        }
        OperatorExpr::MulOp(inner) => {
            out.push_str("mul(");
            print_into(inner, out);
            out.push(')');
        }
        OperatorExpr::Diag(name) => {
            out.push_str("diag(");
            out.push_str(name);
            out.push(')');
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_into(self, &mut s);
        f.write_str(&s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    scalar_mode: bool,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset, message: message.into() })
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

    fn expect(&mut self, ch: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(self.pos, format!("expected `{}`", ch as char)),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => self.err(start, format!("invalid number `{text}`")),
        }
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return self.err(self.pos, "expected unsigned integer exponent");
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<u32>() {
            Ok(v) if v <= MAX_EXPONENT => Ok(v),
            _ => self.err(start, format!("exponent `{text}` exceeds {MAX_EXPONENT}")),
        }
    }

    fn expr(&mut self, depth: usize) -> Result<OperatorExpr> {
        if depth > MAX_DEPTH {
            return self.err(self.pos, format!("expression nests deeper than {MAX_DEPTH}"));
        }
        let mut lhs = self.term(depth)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term(depth)?;
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term(depth)?;
                    let neg = OperatorExpr::Mul(
                        Box::new(OperatorExpr::Const(Complex64::new(-1.0, 0.0))),
                        Box::new(rhs),
                    );
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(neg));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<OperatorExpr> {
        let mut lhs = self.factor(depth)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor(depth)?;
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self, depth: usize) -> Result<OperatorExpr> {
        let base = self.atom(depth)?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.uint()?;
            return Ok(OperatorExpr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn atom(&mut self, depth: usize) -> Result<OperatorExpr> {
        if depth > MAX_DEPTH {
            return self.err(self.pos, format!("expression nests deeper than {MAX_DEPTH}"));
        }
        match self.peek() {
            None => self.err(self.pos, "expected `x`, `p`, `i`, a number, `(`, `inv`, `mul` or `diag`; found end of input"),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr(depth + 1)?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                Ok(OperatorExpr::Const(Complex64::new(self.number()?, 0.0)))
            }
            Some(b'-') if self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) => {
                Ok(OperatorExpr::Const(Complex64::new(self.number()?, 0.0)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.ident();
                match name.as_str() {
                    "x" => Ok(OperatorExpr::X),
                    "p" if !self.scalar_mode => Ok(OperatorExpr::P),
                    "i" if !self.scalar_mode => Ok(OperatorExpr::Const(Complex64::new(0.0, 1.0))),
                    "inv" if !self.scalar_mode => {
                        self.expect(b'(')?;
                        let inner = self.expr(depth + 1)?;
                        self.expect(b')')?;
                        Ok(OperatorExpr::Inv(Box::new(inner)))
                    }
                    "mul" if !self.scalar_mode => {
                        self.expect(b'(')?;
                        self.scalar_mode = true;
                        let inner = self.expr(depth + 1);
                        self.scalar_mode = false;
                        let inner = inner?;
                        self.expect(b')')?;
                        Ok(OperatorExpr::MulOp(Box::new(inner)))
                    }
                    "diag" if !self.scalar_mode => {
                        self.expect(b'(')?;
                        self.skip_ws();
                        let seq_start = self.pos;
                        let seq = self.ident();
                        if seq.is_empty() {
                            return self.err(seq_start, "expected sequence name inside diag(...)");
                        }
                        self.expect(b')')?;
                        Ok(OperatorExpr::Diag(seq))
                    }
                    _ if self.scalar_mode => self.err(
                        start,
                        format!("unknown identifier `{name}` (inside mul(...) only `x`, numbers and + - * ^ are allowed)"),
                    ),
                    _ => self.err(start, format!("unknown identifier `{name}`")),
                }
            }
            Some(c) => self.err(
                self.pos,
                format!("expected `x`, `p`, `i`, a number, `(`, `inv`, `mul` or `diag`; found `{}`", c as char),
            ),
        }
    }
}

/// Parse an operator expression; errors carry the byte offset of the problem.
pub fn parse(src: &str) -> Result<OperatorExpr> {
    if src.trim().is_empty() {
        return Err(Error::Parse { offset: 0, message: "empty expression".into() });
    }
    if src.len() > MAX_SRC_LEN {
        return Err(Error::Parse {
            offset: MAX_SRC_LEN,
            message: format!("expression longer than {MAX_SRC_LEN} bytes"),
        });
    }
    let mut p = Parser { src: src.as_bytes(), pos: 0, scalar_mode: false };
    let e = p.expr(1)?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(Error::Parse {
            offset: p.pos,
            message: format!("unexpected trailing input `{}`", &src[p.pos..]),
        });
    }
    Ok(e)
}
