//! Profile-function expressions in the single variable `u`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?          exponent must be constant
//! atom  := number | 'u' | func '(' expr ')' | '(' expr ')'
//! func  := sin | cos | tan | exp | log | sqrt | sinh | cosh | asinh | acosh
//! ```
//!
//! `^` binds tighter than unary minus, so `-u^2` is `-(u^2)`, and it is
//! right-associative through the exponent's own `unary`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::jet::Jet2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Asinh,
    Acosh,
}

impl Func {
    const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Asinh,
        Func::Acosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Asinh => "asinh",
            Func::Acosh => "acosh",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Abstract syntax tree of a profile expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Var,
    Num(f64),
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, f64),
    Call(Func, Box<Expression>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent at offset {offset} must be a finite constant")]
    NonConstantExponent { offset: usize },
    #[error("numeric literal at offset {offset} is out of range")]
    BadNumber { offset: usize },
}

impl ParseError {
    /// Byte offset into the source text, when the error has one.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::NonConstantExponent { offset }
            | ParseError::BadNumber { offset } => Some(*offset),
        }
    }
}

pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    if p.pos == text.len() {
        return Err(ParseError::Empty);
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(e)
}

impl FromStr for Expression {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_vec(),
            found,
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.eat('-') {
            Ok(Expression::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let offset = self.pos;
        let exponent = self.unary()?;
        match exponent.constant_value() {
            Some(p) if p.is_finite() => Ok(Expression::Pow(Box::new(base), p)),
            _ => Err(ParseError::NonConstantExponent { offset }),
        }
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        const EXPECTED: &[&str] = &["number", "`u`", "function", "`(`"];
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let len = self
                    .rest()
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.rest().len());
                let name = &self.src[start..start + len];
                self.pos += len;
                if name == "u" {
                    return Ok(Expression::Var);
                }
                let Some(func) = Func::from_name(name) else {
                    return Err(ParseError::UnknownIdentifier {
                        offset: start,
                        name: name.to_string(),
                    });
                };
                if !self.eat('(') {
                    return Err(self.unexpected(&["`(`"]));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return Err(self.unexpected(&["`)`"]));
                }
                Ok(Expression::Call(func, Box::new(arg)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.unexpected(&["`)`"]));
                }
                Ok(inner)
            }
            _ => Err(self.unexpected(EXPECTED)),
        }
    }

    fn number(&mut self) -> Result<Expression, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let mut mantissa = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            mantissa += digits(&mut i);
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(self.unexpected(&["digit"]));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) > 0 {
                i = j;
            }
        }
        self.pos = i;
        let value: f64 = self.src[start..i]
            .parse()
            .map_err(|_| ParseError::BadNumber { offset: start })?;
        if !value.is_finite() {
            return Err(ParseError::BadNumber { offset: start });
        }
        Ok(Expression::Num(value))
    }
}

impl Expression {
    pub fn var() -> Self {
        Expression::Var
    }

    pub fn num(value: f64) -> Self {
        Expression::Num(value)
    }

    /// Value of a `u`-free expression, computed without any domain checks.
    pub fn constant_value(&self) -> Option<f64> {
        Some(match self {
            Expression::Var => return None,
            Expression::Num(x) => *x,
            Expression::Neg(e) => -e.constant_value()?,
            Expression::Binary(op, l, r) => {
                let (l, r) = (l.constant_value()?, r.constant_value()?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => l / r,
                }
            }
            Expression::Pow(b, p) => b.constant_value()?.powf(*p),
            Expression::Call(f, e) => {
                let x = e.constant_value()?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Exp => x.exp(),
                    Func::Log => x.ln(),
                    Func::Sqrt => x.sqrt(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Asinh => x.asinh(),
                    Func::Acosh => x.acosh(),
                }
            }
        })
    }

    /// Value and first two derivatives at `u`.
    pub fn eval_jet(&self, u: f64) -> Result<Jet2> {
        let out = self.jet_at(Jet2::variable(u), u)?;
        if !out.is_finite() {
            return Err(Error::domain("non-finite result", u));
        }
        Ok(out)
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        self.eval_jet(u).map(|j| j.value)
    }

    fn jet_at(&self, x: Jet2, u: f64) -> Result<Jet2> {
        let out = match self {
            Expression::Var => x,
            Expression::Num(c) => Jet2::constant(*c),
            Expression::Neg(e) => -e.jet_at(x, u)?,
            Expression::Binary(op, l, r) => {
                let (l, r) = (l.jet_at(x, u)?, r.jet_at(x, u)?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r.value == 0.0 {
                            return Err(Error::domain("division by zero", u));
                        }
                        l / r
                    }
                }
            }
            Expression::Pow(b, p) => {
                let b = b.jet_at(x, u)?;
                let p = *p;
                if p.fract() == 0.0 && p.abs() <= f64::from(i32::MAX) {
                    if p < 0.0 && b.value == 0.0 {
                        return Err(Error::domain("negative power of zero", u));
                    }
                    b.powi(p as i32)
                } else {
                    if b.value <= 0.0 {
                        return Err(Error::domain(format!("non-integer power {p} of non-positive base"), u));
                    }
                    b.powf(p)
                }
            }
            Expression::Call(f, e) => {
                let a = e.jet_at(x, u)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => {
                        if a.value.cos() == 0.0 {
                            return Err(Error::domain("tan pole", u));
                        }
                        a.tan()
                    }
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a.value <= 0.0 {
                            return Err(Error::domain("log of non-positive value", u));
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if a.value <= 0.0 {
                            return Err(Error::domain("sqrt of non-positive value", u));
                        }
                        a.sqrt()
                    }
                    Func::Sinh => a.sinh(),
                    Func::Cosh => a.cosh(),
                    Func::Asinh => a.asinh(),
                    Func::Acosh => {
                        if a.value <= 1.0 {
                            return Err(Error::domain("acosh of value <= 1", u));
                        }
                        a.acosh()
                    }
                }
            }
        };
        if !out.is_finite() {
            return Err(Error::domain("non-finite intermediate value", u));
        }
        Ok(out)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Var => f.write_str("u"),
            Expression::Num(x) => write!(f, "{x}"),
            Expression::Neg(e) => write!(f, "-({e})"),
            Expression::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expression::Pow(b, p) => {
                match **b {
                    Expression::Var | Expression::Num(_) | Expression::Call(..) => write!(f, "{b}")?,
                    _ => write!(f, "({b})")?,
                }
                if *p < 0.0 {
                    write!(f, "^({p})")
                } else {
                    write!(f, "^{p}")
                }
            }
            Expression::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn jet(text: &str, u: f64) -> Jet2 {
        parse(text).unwrap().eval_jet(u).unwrap()
    }

    #[test]
    fn parses_variable_and_power() {
        assert_eq!(parse("u").unwrap(), Expression::Var);
        assert_eq!(parse("u^2").unwrap(), Expression::Pow(Box::new(Expression::Var), 2.0));
    }

    #[test]
    fn precedence() {
        // -u^2 is -(u^2)
        assert_eq!(
            parse("-u^2").unwrap(),
            Expression::Neg(Box::new(Expression::Pow(Box::new(Expression::Var), 2.0)))
        );
        assert_eq!(jet("1 + 2*u^2", 3.0).value, 19.0);
        assert_eq!(jet("2^3^2", 0.0).value, 512.0);
        assert_eq!(jet("(1+u)*(2-u)/4", 1.0).value, 0.5);
        assert_eq!(jet("u^-1", 4.0).value, 0.25);
    }

    #[test]
    fn syntax_errors_carry_offset() {
        match parse("u^") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("sin(u") {
            Err(ParseError::Syntax { offset, expected, .. }) => {
                assert_eq!(offset, 5);
                assert_eq!(expected, vec!["`)`"]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("u u"), Err(ParseError::Syntax { offset: 2, .. })));
        assert_eq!(parse("   "), Err(ParseError::Empty));
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert!(matches!(
            parse("2*v"),
            Err(ParseError::UnknownIdentifier { offset: 2, .. })
        ));
        assert!(matches!(
            parse("u^u"),
            Err(ParseError::NonConstantExponent { offset: 2 })
        ));
        assert!(matches!(parse("1e999"), Err(ParseError::BadNumber { offset: 0 })));
    }

    #[test]
    fn polynomial_jets() {
        assert_eq!(jet("u^2", 3.0), Jet2::new(9.0, 6.0, 2.0));
        assert_eq!(jet("u^3", 2.0), Jet2::new(8.0, 12.0, 12.0));
        assert_eq!(jet("sqrt(u^2+1)", 0.0), Jet2::new(1.0, 0.0, 1.0));
    }

    #[test]
    fn catenoid_height_is_expressible() {
        // b acosh(sqrt(u^2+a^2)/b), a=1, b=1 at u=1: log(1+sqrt 2)
        let j = jet("acosh(sqrt(u^2+1))", 1.0);
        assert!((j.value - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-14);
        // d/du = 1/sqrt(u^2+1)
        assert!((j.d1 - 1.0 / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let e = parse("log(u)").unwrap();
        assert!(matches!(e.eval_jet(0.0), Err(Error::Domain { .. })));
        assert!(matches!(e.eval_jet(-1.0), Err(Error::Domain { .. })));
        let e = parse("u^0.5").unwrap();
        assert!(matches!(e.eval_jet(-1.0), Err(Error::Domain { .. })));
        assert!(e.eval_jet(4.0).is_ok());
        let e = parse("1/u").unwrap();
        assert!(matches!(e.eval_jet(0.0), Err(Error::Domain { .. })));
        let e = parse("acosh(u)").unwrap();
        assert!(matches!(e.eval_jet(0.5), Err(Error::Domain { .. })));
    }

    fn arb_expr() -> impl Strategy<Value = Expression> {
        let leaf = prop_oneof![Just(Expression::Var), (0.0f64..10.0).prop_map(Expression::Num),];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expression::Neg(Box::new(e))),
                (inner.clone(), inner.clone(), 0..4usize).prop_map(|(l, r, k)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][k];
                    Expression::Binary(op, Box::new(l), Box::new(r))
                }),
                (inner.clone(), -3i32..4).prop_map(|(b, p)| Expression::Pow(Box::new(b), f64::from(p))),
                (inner.clone(), 0.1f64..3.0).prop_map(|(b, p)| Expression::Pow(Box::new(b), p)),
                (inner, 0..10usize).prop_map(|(e, k)| Expression::Call(Func::ALL[k], Box::new(e))),
            ]
        })
    }

    /// Random polynomial in `u` as (expression, coefficients).
    fn arb_poly() -> impl Strategy<Value = (Expression, Vec<f64>)> {
        prop::collection::vec(-2.0f64..2.0, 1..6).prop_map(|coeffs| {
            let mut e = Expression::Num(coeffs[0]);
            for (k, &c) in coeffs.iter().enumerate().skip(1) {
                let mono = Expression::Binary(
                    BinOp::Mul,
                    Box::new(Expression::Num(c)),
                    Box::new(Expression::Pow(Box::new(Expression::Var), k as f64)),
                );
                e = Expression::Binary(BinOp::Add, Box::new(e), Box::new(mono));
            }
            (e, coeffs)
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse(&printed).unwrap(), e);
        }

        #[test]
        fn jets_match_richardson_differences((e, _) in arb_poly(), u in -2.0f64..2.0) {
            let f = |x: f64| e.eval(x).unwrap();
            let j = e.eval_jet(u).unwrap();
            let d1 = |h: f64| (f(u + h) - f(u - h)) / (2.0 * h);
            let d2 = |h: f64| (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
            let h = 1e-2;
            let r1 = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
            let r2 = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
            let scale = 1.0 + j.d1.abs();
            prop_assert!((r1 - j.d1).abs() <= 1e-6 * scale);
            let scale = 1.0 + j.d2.abs();
            prop_assert!((r2 - j.d2).abs() <= 1e-6 * scale);
        }

        #[test]
        fn differentiation_is_linear(
            (f, _) in arb_poly(), (g, _) in arb_poly(),
            a in -3.0f64..3.0, b in -3.0f64..3.0, u in -2.0f64..2.0,
        ) {
            let combo = Expression::Binary(
                BinOp::Add,
                Box::new(Expression::Binary(BinOp::Mul, Box::new(Expression::Num(a)), Box::new(f.clone()))),
                Box::new(Expression::Binary(BinOp::Mul, Box::new(Expression::Num(b)), Box::new(g.clone()))),
            );
            let c = combo.eval_jet(u).unwrap();
            let (jf, jg) = (f.eval_jet(u).unwrap(), g.eval_jet(u).unwrap());
            let expect = jf.scale(a) + jg.scale(b);
            for (x, y) in [(c.value, expect.value), (c.d1, expect.d1), (c.d2, expect.d2)] {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
            }
        }
    }
}
