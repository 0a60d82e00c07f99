//! A small expression grammar shared by the file formats and the CLI.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' uint)?
//! atom   := integer | ident | '(' expr ')' | '-' factor | 'sqrt' '(' expr ')'
//! ```
//!
//! Identifiers name the transcendental `t`, declared constants, adjoined
//! square roots, or subvariety coordinates, depending on the evaluation
//! context. Exponents are literal nonnegative integers of arbitrary size.

use num_bigint::{BigInt, BigUint};
use num_traits::Num;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, BigUint),
    Sqrt(Box<Expr>),
}

impl Expr {
    /// All identifiers appearing in the expression.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Sqrt(a) => a.collect_vars(out),
            Expr::Pow(a, _) => a.collect_vars(out),
        }
    }
}

/// The operations an evaluation domain must provide.
pub trait ExprRing {
    type Val: Clone;
    fn from_int(&self, n: &BigInt) -> Self::Val;
    fn var(&self, name: &str) -> Result<Self::Val, String>;
    fn add(&self, a: &Self::Val, b: &Self::Val) -> Self::Val;
    fn sub(&self, a: &Self::Val, b: &Self::Val) -> Self::Val;
    fn mul(&self, a: &Self::Val, b: &Self::Val) -> Self::Val;
    fn div(&self, a: &Self::Val, b: &Self::Val) -> Result<Self::Val, String>;
    fn pow(&self, a: &Self::Val, e: &BigUint) -> Self::Val;
    fn sqrt(&self, _a: &Self::Val) -> Result<Self::Val, String> {
        Err("sqrt is not available in this context".into())
    }
}

pub fn eval<R: ExprRing>(expr: &Expr, ring: &R) -> Result<R::Val, String> {
    match expr {
        Expr::Int(n) => Ok(ring.from_int(n)),
        Expr::Var(name) => ring.var(name),
        Expr::Add(a, b) => Ok(ring.add(&eval(a, ring)?, &eval(b, ring)?)),
        Expr::Sub(a, b) => Ok(ring.sub(&eval(a, ring)?, &eval(b, ring)?)),
        Expr::Mul(a, b) => Ok(ring.mul(&eval(a, ring)?, &eval(b, ring)?)),
        Expr::Div(a, b) => ring.div(&eval(a, ring)?, &eval(b, ring)?),
        Expr::Neg(a) => {
            let v = eval(a, ring)?;
            Ok(ring.sub(&ring.from_int(&BigInt::from(0)), &v))
        }
        Expr::Pow(a, e) => Ok(ring.pow(&eval(a, ring)?, e)),
        Expr::Sqrt(a) => ring.sqrt(&eval(a, ring)?),
    }
}

// ---- Tokenizer and parser ----

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Tok::Int(BigInt::from_str_radix(&s, 10).unwrap()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character '{}'", other)),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(format!("expected {:?}, found {:?}", t, got)),
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, String> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(n)) => {
                    let (sign, mag) = n.into_parts();
                    if sign == num_bigint::Sign::Minus {
                        return Err("negative exponent".into());
                    }
                    Ok(Expr::Pow(Box::new(base), mag))
                }
                got => Err(format!("expected integer exponent, found {:?}", got)),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(name)) if name == "sqrt" => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Sqrt(Box::new(inner)))
            }
            Some(Tok::Ident(name)) => Ok(Expr::Var(name)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::Minus) => Ok(Expr::Neg(Box::new(self.factor()?))),
            got => Err(format!("unexpected token {:?}", got)),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, String> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input after expression in '{}'", src));
    }
    Ok(e)
}

// ---- Concrete evaluation domains ----

/// Polynomials/rational functions in `t` with named constants.
pub struct RatFuncRing<'a> {
    pub field: &'a crate::field::Fq,
    pub constants: &'a std::collections::BTreeMap<String, crate::field::FqElem>,
}

impl ExprRing for RatFuncRing<'_> {
    type Val = crate::ratfunc::RatFunc;

    fn from_int(&self, n: &BigInt) -> Self::Val {
        use num_traits::ToPrimitive;
        let p = self.field.p() as i64;
        let red = (n % p).to_i64().unwrap();
        crate::ratfunc::RatFunc::constant(self.field.from_i64(red))
    }

    fn var(&self, name: &str) -> Result<Self::Val, String> {
        if name == "t" {
            return Ok(crate::ratfunc::RatFunc::var(self.field));
        }
        self.constants
            .get(name)
            .map(|c| crate::ratfunc::RatFunc::constant(c.clone()))
            .ok_or_else(|| format!("unknown name '{}'", name))
    }

    fn add(&self, a: &Self::Val, b: &Self::Val) -> Self::Val {
        a.add(b)
    }

    fn sub(&self, a: &Self::Val, b: &Self::Val) -> Self::Val {
        a.sub(b)
    }

    fn mul(&self, a: &Self::Val, b: &Self::Val) -> Self::Val {
        a.mul(b)
    }

    fn div(&self, a: &Self::Val, b: &Self::Val) -> Result<Self::Val, String> {
        if b.is_zero() {
            return Err("division by zero".into());
        }
        Ok(a.div(b))
    }

    fn pow(&self, a: &Self::Val, e: &BigUint) -> Self::Val {
        a.pow_big(e)
    }
}

/// Parse a polynomial in `t` over the given field (no constants, no
/// division except by constants).
pub fn parse_poly(field: &crate::field::Fq, src: &str) -> Result<crate::poly::SparsePoly, String> {
    let consts = std::collections::BTreeMap::new();
    parse_poly_with(field, &consts, src)
}

/// Parse a polynomial in `t`, resolving named constants.
pub fn parse_poly_with(
    field: &crate::field::Fq,
    constants: &std::collections::BTreeMap<String, crate::field::FqElem>,
    src: &str,
) -> Result<crate::poly::SparsePoly, String> {
    let rf = parse_ratfunc_with(field, constants, src)?;
    rf.as_poly().ok_or_else(|| format!("'{}' is not a polynomial", src))
}

/// Parse a rational function in `t`, resolving named constants.
pub fn parse_ratfunc_with(
    field: &crate::field::Fq,
    constants: &std::collections::BTreeMap<String, crate::field::FqElem>,
    src: &str,
) -> Result<crate::ratfunc::RatFunc, String> {
    let expr = parse(src)?;
    let ring = RatFuncRing { field, constants };
    eval(&expr, &ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence() {
        let e = parse("1 + 2*t^3 - (t+1)^2").unwrap();
        assert_eq!(
            e.variables(),
            vec!["t".to_string()]
        );
    }

    #[test]
    fn rejects_trailing() {
        assert!(parse("t + ").is_err());
        assert!(parse("t ) 1").is_err());
        assert!(parse("t ^ -2").is_err());
    }
}
