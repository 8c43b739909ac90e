//! Subtraction-free rational expressions and their max/min-plus evaluation.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor (('*' | '/') factor)*
//! factor := primary ('^' int)*
//! primary:= int | ident | '(' expr ')'
//! ident  := 'x' digits ('_' digits)?
//! ```
//!
//! `x12` names `(1,2)`, `x10_3` names `(10,3)`, and `x1` names the single index `1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact_arith::Convention;
use crate::grassmannian::GrContext;

/// Variable name: a pair `(a,b)` or a single index `(a, None)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub a: usize,
    pub b: Option<usize>,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            None => write!(f, "x{}", self.a),
            Some(b) if self.a < 10 && b < 10 => write!(f, "x{}{}", self.a, b),
            Some(b) => write!(f, "x{}_{}", self.a, b),
        }
    }
}

/// Parse tree of a subtraction-free expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SfExpr {
    Lit(u64),
    Var(Var),
    Sum(Vec<SfExpr>),
    Product(Vec<SfExpr>),
    Quotient(Box<SfExpr>, Box<SfExpr>),
    Power(Box<SfExpr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'-') {
            return Err(Error::NegativeLiteral { offset: self.pos });
        }
        let at = self.pos;
        match self.digits() {
            Some(d) => d.parse().or_else(|_| Err(Error::Syntax { offset: at, message: "integer too large".into() })),
            None => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<SfExpr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { SfExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<SfExpr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = match acc {
                        SfExpr::Product(mut fs) => {
                            fs.push(rhs);
                            SfExpr::Product(fs)
                        }
                        other => SfExpr::Product(vec![other, rhs]),
                    };
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = SfExpr::Quotient(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<SfExpr> {
        let mut base = self.primary()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = u32::try_from(e).or_else(|_| self.err("exponent too large"))?;
            base = SfExpr::Power(Box::new(base), e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<SfExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let at = self.pos;
                let head = match self.digits() {
                    Some(d) => d.to_string(),
                    None => return self.err("expected digits after 'x'"),
                };
                let var = if self.src.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                    let b = match self.digits() {
                        Some(d) => d.parse().unwrap(),
                        None => return self.err("expected digits after '_'"),
                    };
                    Var { a: head.parse().unwrap(), b: Some(b) }
                } else {
                    match head.len() {
                        1 => Var { a: head.parse().unwrap(), b: None },
                        2 => {
                            let d = head.as_bytes();
                            Var { a: (d[0] - b'0') as usize, b: Some((d[1] - b'0') as usize) }
                        }
                        _ => {
                            return Err(Error::Syntax {
                                offset: at,
                                message: format!("ambiguous variable x{head}; use x<a>_<b>"),
                            })
                        }
                    }
                };
                Ok(SfExpr::Var(var))
            }
            Some(b'-') => Err(Error::NegativeLiteral { offset: self.pos }),
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let v = self.integer()?;
                if v == 0 {
                    return Err(Error::Syntax { offset: at, message: "literals must be positive".into() });
                }
                Ok(SfExpr::Lit(v))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a subtraction-free expression.
pub fn parse_sfexpr(text: &str) -> Result<SfExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        if p.src[p.pos] == b'-' {
            return p.err("subtraction is not allowed");
        }
        return p.err("trailing input");
    }
    Ok(e)
}

/// Tropical value of `e` under `assign`, using max (`Max`) or min (`Min`) for sums.
pub fn trop_eval(e: &SfExpr, assign: &dyn Fn(Var) -> Option<i64>, conv: Convention) -> Result<i64> {
    Ok(match e {
        SfExpr::Lit(_) => 0,
        SfExpr::Var(v) => assign(*v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?,
        SfExpr::Sum(ts) => {
            let vals = ts.iter().map(|t| trop_eval(t, assign, conv)).collect::<Result<Vec<_>>>()?;
            match conv {
                Convention::Max => vals.into_iter().max().unwrap(),
                Convention::Min => vals.into_iter().min().unwrap(),
            }
        }
        SfExpr::Product(fs) => {
            let mut acc = 0;
            for f in fs {
                acc += trop_eval(f, assign, conv)?;
            }
            acc
        }
        SfExpr::Quotient(p, q) => trop_eval(p, assign, conv)? - trop_eval(q, assign, conv)?,
        SfExpr::Power(b, k) => i64::from(*k) * trop_eval(b, assign, conv)?,
    })
}

impl SfExpr {
    /// Copy with every literal replaced by 1.
    pub fn unit_literals(&self) -> SfExpr {
        match self {
            SfExpr::Lit(_) => SfExpr::Lit(1),
            SfExpr::Var(v) => SfExpr::Var(*v),
            SfExpr::Sum(ts) => SfExpr::Sum(ts.iter().map(|t| t.unit_literals()).collect()),
            SfExpr::Product(fs) => SfExpr::Product(fs.iter().map(|t| t.unit_literals()).collect()),
            SfExpr::Quotient(p, q) => SfExpr::Quotient(Box::new(p.unit_literals()), Box::new(q.unit_literals())),
            SfExpr::Power(b, k) => SfExpr::Power(Box::new(b.unit_literals()), *k),
        }
    }

    pub fn count_quotients(&self) -> usize {
        match self {
            SfExpr::Lit(_) | SfExpr::Var(_) => 0,
            SfExpr::Sum(ts) | SfExpr::Product(ts) => ts.iter().map(|t| t.count_quotients()).sum(),
            SfExpr::Quotient(p, q) => 1 + p.count_quotients() + q.count_quotients(),
            SfExpr::Power(b, _) => b.count_quotients(),
        }
    }
}

/// Assignment reading `x<a><b>` from a point in the coordinate order of `ctx`.
pub fn grassmannian_assignment<'a>(ctx: &'a GrContext, v: &'a [i64]) -> impl Fn(Var) -> Option<i64> + 'a {
    move |var| {
        let b = var.b?;
        if var.a == 0 || b == 0 || var.a > ctx.n - ctx.k - 1 || b > ctx.k - 1 {
            return None;
        }
        v.get(ctx.index(var.a, b)).copied()
    }
}

/// Assignment reading `x<i>` as the `i`-th coordinate of `v` (1-based).
pub fn indexed_assignment(v: &[i64]) -> impl Fn(Var) -> Option<i64> + '_ {
    move |var| match var.b {
        None if var.a >= 1 => v.get(var.a - 1).copied(),
        _ => None,
    }
}

/// A displayed map: one expression per component.
#[derive(Clone, Debug)]
pub struct MapFixture {
    pub components: Vec<SfExpr>,
}

impl MapFixture {
    /// Parses fixture text: `#` starts a comment, blank lines are skipped,
    /// each remaining line is one component.
    pub fn parse(text: &str) -> Result<Self> {
        let components = text
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .filter(|l| !l.is_empty())
            .map(parse_sfexpr)
            .collect::<Result<Vec<_>>>()?;
        Ok(MapFixture { components })
    }

    pub fn eval(&self, assign: &dyn Fn(Var) -> Option<i64>, conv: Convention) -> Result<Vec<i64>> {
        self.components.iter().map(|e| trop_eval(e, assign, conv)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: usize, b: usize) -> SfExpr {
        SfExpr::Var(Var { a, b: Some(b) })
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_sfexpr("x11*(1+x13)").unwrap(),
            SfExpr::Product(vec![v(1, 1), SfExpr::Sum(vec![SfExpr::Lit(1), v(1, 3)])])
        );
        let e = parse_sfexpr("x22/(1+x21+x21*x22)").unwrap();
        assert_eq!(e.count_quotients(), 1);
        assert_eq!(parse_sfexpr("x10_3").unwrap(), SfExpr::Var(Var { a: 10, b: Some(3) }));
    }

    #[test]
    fn precedence() {
        let e = parse_sfexpr("x1/x2/x1").unwrap();
        let at = indexed_assignment(&[5, 2]);
        assert_eq!(trop_eval(&e, &at, Convention::Max).unwrap(), -2);
        let e = parse_sfexpr("2*x1^2").unwrap();
        assert_eq!(trop_eval(&e, &at, Convention::Max).unwrap(), 10);
    }

    #[test]
    fn evaluates() {
        let e = parse_sfexpr("1+x1^2+2*x1*x2").unwrap();
        let at = indexed_assignment(&[1, 3]);
        assert_eq!(trop_eval(&e, &at, Convention::Max).unwrap(), 4);
        assert_eq!(trop_eval(&e, &at, Convention::Min).unwrap(), 0);
        let e = parse_sfexpr("x1+x3").unwrap();
        assert_eq!(trop_eval(&e, &at, Convention::Max), Err(Error::UnboundVariable("x3".into())));
    }

    #[test]
    fn rejects() {
        assert!(matches!(parse_sfexpr("1+-2"), Err(Error::NegativeLiteral { offset: 2 })));
        assert!(matches!(parse_sfexpr("x1-x2"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_sfexpr("(x1"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_sfexpr("x123"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_sfexpr(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_sfexpr("0+x1"), Err(Error::Syntax { .. })));
    }
}
