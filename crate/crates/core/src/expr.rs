//! Expressions for forms, scalars and parameter constraints.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := power (('*'|'/') power)*
//! power   := atom ('^' atom)*
//! atom    := number | 'i' | param | basis | '(' expr ')'
//! basis   := ('e'|'f') digits
//! ```
//!
//! `^` is the wedge product between forms and an integer power on scalars.
//! A basis token with several digits is a compact monomial when `n ≤ 9`
//! (`e134` is `e1^e3^e4`, digits strictly increasing) and a single index otherwise.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::{KForm, MultiIndex};
use crate::scalar::{CScalar, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(Rational),
    I,
    Param(String),
    /// Basis letter and 0-based indices in the order written.
    Basis(char, Vec<usize>),
    Neg(Box<Ast>),
    Bin(Op, Box<Ast>, Box<Ast>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed expression, evaluated later against a dimension and parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct Ast {
    node: Node,
    pos: usize,
}

/// Result of evaluating an [`Ast`].
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(CScalar),
    Form(KForm),
}

/// Evaluation context.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub dim: usize,
    /// Expected basis letter; `None` accepts either, but not both in one expression.
    pub letter: Option<char>,
    pub params: BTreeMap<String, Rational>,
}

impl Env {
    pub fn new(dim: usize, letter: char) -> Self {
        Env { dim, letter: Some(letter), params: BTreeMap::new() }
    }

    pub fn with_params(mut self, params: &BTreeMap<String, Rational>) -> Self {
        self.params.extend(params.iter().map(|(k, v)| (k.clone(), v.clone())));
        self
    }
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    letter: Option<(char, usize)>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Ast> {
        let start = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let mut lhs = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.term()?;
                Ast { node: Node::Neg(Box::new(t)), pos: start }
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            let pos = self.pos;
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == b'+' { Op::Add } else { Op::Sub };
            lhs = Ast { node: Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.power()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            let pos = self.pos;
            self.pos += 1;
            let rhs = self.power()?;
            let op = if c == b'*' { Op::Mul } else { Op::Div };
            lhs = Ast { node: Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Ast> {
        let mut lhs = self.atom()?;
        while let Some(b'^') = self.peek() {
            let pos = self.pos;
            self.pos += 1;
            let rhs = self.atom()?;
            lhs = Ast { node: Node::Bin(Op::Pow, Box::new(lhs), Box::new(rhs)), pos };
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Ast> {
        let Some(c) = self.peek() else {
            return Err(err(self.pos, "unexpected end of input"));
        };
        let start = self.pos;
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(err(self.pos, "expected ')'"));
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let v: BigInt = text.parse().map_err(|_| err(start, "bad number"))?;
            return Ok(Ast { node: Node::Num(Rational::from_integer(v)), pos: start });
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                self.pos += 1;
            }
            let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            if word == "i" {
                return Ok(Ast { node: Node::I, pos: start });
            }
            let bytes = word.as_bytes();
            if (bytes[0] == b'e' || bytes[0] == b'f') && bytes.len() > 1 && bytes[1..].iter().all(u8::is_ascii_digit) {
                let letter = bytes[0] as char;
                match self.letter {
                    Some((l, p)) if l != letter => {
                        return Err(err(start, format!("mixed basis letters '{l}' (at {p}) and '{letter}'")));
                    }
                    None => self.letter = Some((letter, start)),
                    _ => {}
                }
                // digits are interpreted at evaluation time, once n is known
                let digits: Vec<usize> = bytes[1..].iter().map(|d| (d - b'0') as usize).collect();
                return Ok(Ast { node: Node::Basis(letter, digits), pos: start });
            }
            return Ok(Ast { node: Node::Param(word.to_string()), pos: start });
        }
        Err(err(start, format!("unexpected character '{}'", c as char)))
    }
}

/// Parses an expression without evaluating it.
pub fn parse(text: &str) -> Result<Ast> {
    if !text.is_ascii() {
        let pos = text.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |(i, _)| i);
        return Err(err(pos, "non-ASCII character"));
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, letter: None };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(ast)
}

impl Ast {
    /// Parameter names referenced by the expression.
    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match &self.node {
            Node::Param(p) => out.push(p.clone()),
            Node::Neg(a) => a.collect_params(out),
            Node::Bin(_, a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            _ => {}
        }
    }

    pub fn eval(&self, env: &Env) -> Result<Value> {
        match &self.node {
            Node::Num(q) => Ok(Value::Scalar(CScalar::real(q.clone()))),
            Node::I => Ok(Value::Scalar(CScalar::i())),
            Node::Param(name) => env
                .params
                .get(name)
                .map(|q| Value::Scalar(CScalar::real(q.clone())))
                .ok_or_else(|| err(self.pos, format!("unknown parameter '{name}'"))),
            Node::Basis(letter, digits) => self.basis(env, *letter, digits).map(Value::Form),
            Node::Neg(a) => Ok(match a.eval(env)? {
                Value::Scalar(s) => Value::Scalar(-s),
                Value::Form(f) => Value::Form(-&f),
            }),
            Node::Bin(op, a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                self.binary(*op, x, y, b)
            }
        }
    }

    fn basis(&self, env: &Env, letter: char, digits: &[usize]) -> Result<KForm> {
        if let Some(l) = env.letter {
            if l != letter {
                return Err(err(self.pos, format!("basis letter '{letter}' but this entry uses '{l}'")));
            }
        }
        let n = env.dim;
        let idx: Vec<usize> = if n <= 9 {
            digits.to_vec()
        } else {
            vec![digits.iter().fold(0usize, |a, d| a * 10 + d)]
        };
        for &i in &idx {
            if i == 0 || i > n {
                return Err(err(self.pos, format!("index {i} out of range 1..{n}")));
            }
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err(self.pos, "compact monomial indices must be strictly increasing; use '^' for other orders"));
        }
        let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        Ok(KForm::from_terms(n, idx.len(), [(MultiIndex::from_sorted(&zero_based).expect("increasing"), CScalar::one())]))
    }

    fn binary(&self, op: Op, x: Value, y: Value, rhs: &Ast) -> Result<Value> {
        use Value::{Form, Scalar};
        let pos = self.pos;
        Ok(match (op, x, y) {
            (Op::Add, Scalar(a), Scalar(b)) => Scalar(a + b),
            (Op::Sub, Scalar(a), Scalar(b)) => Scalar(a - b),
            (Op::Add | Op::Sub, Form(a), Form(b)) => {
                if a.degree() != b.degree() {
                    return Err(err(pos, format!("adding forms of degree {} and {}", a.degree(), b.degree())));
                }
                Form(if op == Op::Add { &a + &b } else { &a - &b })
            }
            (Op::Add | Op::Sub, Scalar(s), Form(f)) | (Op::Add | Op::Sub, Form(f), Scalar(s)) => {
                if s.is_zero() {
                    Form(f)
                } else {
                    return Err(err(pos, "adding a scalar to a form"));
                }
            }
            (Op::Mul, Scalar(a), Scalar(b)) => Scalar(a * b),
            (Op::Mul, Scalar(s), Form(f)) | (Op::Mul, Form(f), Scalar(s)) => Form(f.scale(&s)),
            (Op::Mul, Form(_), Form(_)) => return Err(err(pos, "use '^' for the wedge product")),
            (Op::Div, x, Scalar(s)) => {
                if s.is_zero() {
                    return Err(err(pos, "division by zero"));
                }
                let inv = s.inv();
                match x {
                    Scalar(a) => Scalar(a * inv),
                    Form(f) => Form(f.scale(&inv)),
                }
            }
            (Op::Div, _, Form(_)) => return Err(err(pos, "division by a form")),
            (Op::Pow, Form(a), Form(b)) => Form(a.try_wedge(&b).map_err(|_| err(pos, "dimension mismatch"))?),
            (Op::Pow, Scalar(a), Scalar(b)) => {
                if !b.is_real() || !b.re.is_integer() {
                    return Err(err(rhs.pos, "exponent must be an integer"));
                }
                let e = b.re.to_integer().to_i64().ok_or_else(|| err(rhs.pos, "exponent too large"))?;
                if e < 0 && a.is_zero() {
                    return Err(err(pos, "division by zero"));
                }
                let base = if e < 0 { a.inv() } else { a };
                let mut out = CScalar::one();
                for _ in 0..e.unsigned_abs() {
                    out = &out * &base;
                }
                Scalar(out)
            }
            (Op::Pow, _, _) => return Err(err(pos, "'^' needs two forms or a scalar and an integer")),
        })
    }

    pub fn eval_scalar(&self, env: &Env) -> Result<CScalar> {
        match self.eval(env)? {
            Value::Scalar(s) => Ok(s),
            Value::Form(f) if f.degree() == 0 => Ok(f.coeff(MultiIndex::EMPTY)),
            Value::Form(_) => Err(err(self.pos, "expected a scalar, found a form")),
        }
    }

    pub fn eval_rational(&self, env: &Env) -> Result<Rational> {
        let s = self.eval_scalar(env)?;
        if !s.is_real() {
            return Err(err(self.pos, "expected a real number"));
        }
        Ok(s.re)
    }

    /// A form of the given degree; the scalar `0` is accepted as the zero form.
    pub fn eval_form(&self, env: &Env, degree: usize) -> Result<KForm> {
        match self.eval(env)? {
            Value::Form(f) if f.degree() == degree => Ok(f),
            Value::Form(f) => Err(err(self.pos, format!("expected a {degree}-form, found degree {}", f.degree()))),
            Value::Scalar(s) if s.is_zero() => Ok(KForm::zero(env.dim, degree)),
            Value::Scalar(s) if degree == 0 => Ok(KForm::constant(env.dim, s)),
            Value::Scalar(_) => Err(err(self.pos, format!("expected a {degree}-form, found a scalar"))),
        }
    }

    /// A homogeneous form of any degree.
    pub fn eval_any_form(&self, env: &Env) -> Result<KForm> {
        match self.eval(env)? {
            Value::Form(f) => Ok(f),
            Value::Scalar(s) => Ok(KForm::constant(env.dim, s)),
        }
    }
}

/// Parses and evaluates a form of the given degree.
pub fn parse_form(text: &str, dim: usize, letter: char, degree: usize) -> Result<KForm> {
    parse(text)?.eval_form(&Env::new(dim, letter), degree)
}

/// Parses and evaluates a homogeneous form (e.g. `"e12 - e45"`).
pub fn parse_form_expr(text: &str, dim: usize) -> Result<KForm> {
    parse(text)?.eval_any_form(&Env { dim, letter: None, params: BTreeMap::new() })
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    parse(text)?.eval_rational(&Env::default())
}

/// A comma-separated matrix row of scalar expressions.
pub fn parse_row(text: &str) -> Result<Vec<Ast>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for cell in text.split(',') {
        let ast = parse(cell).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
            other => other,
        })?;
        out.push(ast);
        offset += cell.len() + 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

/// `lhs <op> rhs` between real scalar expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub text: String,
    lhs: Ast,
    cmp: Cmp,
    rhs: Ast,
}

impl Constraint {
    pub fn parse(text: &str) -> Result<Self> {
        const OPS: [(&str, Cmp); 6] = [("<=", Cmp::Le), (">=", Cmp::Ge), ("==", Cmp::Eq), ("!=", Cmp::Ne), ("<", Cmp::Lt), (">", Cmp::Gt)];
        for (tok, cmp) in OPS {
            if let Some(at) = text.find(tok) {
                let lhs = parse(&text[..at])?;
                let rhs = parse(&text[at + tok.len()..]).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: pos + at + tok.len(), msg },
                    other => other,
                })?;
                return Ok(Constraint { text: text.trim().to_string(), lhs, cmp, rhs });
            }
        }
        Err(err(0, "constraint needs one of < <= > >= == !="))
    }

    pub fn holds(&self, env: &Env) -> Result<bool> {
        let a = self.lhs.eval_rational(env)?;
        let b = self.rhs.eval_rational(env)?;
        Ok(match self.cmp {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
        })
    }

    pub fn params(&self) -> Vec<String> {
        let mut p = self.lhs.params();
        p.extend(self.rhs.params());
        p.sort();
        p.dedup();
        p
    }
}

/// Prints a rational so that [`parse_rational`] reads it back.
pub fn rational_text(q: &Rational) -> String {
    if q.is_negative() {
        format!("-{}", crate::scalar::fmt_rational(&-q.clone()))
    } else if q.is_one() {
        "1".into()
    } else {
        crate::scalar::fmt_rational(q)
    }
}
