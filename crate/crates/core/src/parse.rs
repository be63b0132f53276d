//! Text grammars: field specs (`GF(5)`, `GF(2^2)`, `GF(3^2;mod=1,0,1)`),
//! field elements (`2*a+1`), univariate polynomials (`3*X^2+12*X+14` or
//! `[14,12,3]`), and multivariate polynomials (`T1^2*T2 + 3*T2^3`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField};
use crate::multipoly::MPoly;
use crate::poly::Poly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| Error::Parse(format!("bad number {text}")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()[],".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(BigInt),
    Ident(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
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

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e = n.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(Error::Parse("expected a non-negative integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

enum Ident<C> {
    Var(usize),
    Const(C),
}

fn eval<C: Scalar>(
    e: &Expr,
    ctx: &C::Ctx,
    nvars: usize,
    int: &dyn Fn(&BigInt) -> C,
    ident: &dyn Fn(&str) -> Option<Ident<C>>,
) -> Result<MPoly<C>> {
    let rec = |x: &Expr| eval(x, ctx, nvars, int, ident);
    Ok(match e {
        Expr::Num(n) => MPoly::constant(int(n), nvars),
        Expr::Ident(s) => match ident(s) {
            Some(Ident::Var(i)) => MPoly::var(ctx, nvars, i),
            Some(Ident::Const(c)) => MPoly::constant(c, nvars),
            None => return Err(Error::Parse(format!("unknown symbol {s:?}"))),
        },
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Neg(a) => -&rec(a)?,
        Expr::Pow(a, k) => rec(a)?.pow(*k as u64),
    })
}

fn field_int(field: &GaloisField) -> impl Fn(&BigInt) -> Fq + '_ {
    move |n| {
        let r = n.mod_floor(&BigInt::from(field.characteristic));
        field.int(r.to_i64().expect("residue fits"))
    }
}

fn generator_of(field: &GaloisField, name: &str) -> Option<Fq> {
    (name == "a" && field.degree > 1).then(|| field.generator())
}

/// Parses `GF(5)`, `GF(2^2)` or `GF(3^2;mod=1,0,1)`.
pub fn parse_field(s: &str) -> Result<GaloisField> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("field spec {s:?} must look like GF(...)")))?;
    let (size, modulus) = match inner.split_once(';') {
        Some((a, b)) => {
            let list = b
                .strip_prefix("mod=")
                .ok_or_else(|| Error::Parse("expected mod=c0,c1,...".into()))?;
            let coeffs = list
                .split(',')
                .map(|x| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad modulus coefficient {x:?}"))))
                .collect::<Result<Vec<_>>>()?;
            (a, Some(coeffs))
        }
        None => (inner, None),
    };
    let (l, s) = match size.split_once('^') {
        Some((l, e)) => (l, e),
        None => (size, "1"),
    };
    let l: u64 = l.parse().map_err(|_| Error::Parse(format!("bad characteristic {l:?}")))?;
    let s: usize = s.parse().map_err(|_| Error::Parse(format!("bad extension degree {s:?}")))?;
    GaloisField::new(l, s, modulus)
}

/// Field element in the generator `a`, e.g. `3`, `2*a+1`.
pub fn parse_element(field: &GaloisField, s: &str) -> Result<Fq> {
    let e = parse_expr(s)?;
    let int = field_int(field);
    let p = eval(&e, field, 0, &int, &|name| generator_of(field, name).map(Ident::Const))?;
    Ok(p.constant_term())
}

/// Univariate polynomial: list form `[c0,c1,...]` or an expression in `var`.
pub fn parse_poly(field: &GaloisField, s: &str, var: &str) -> Result<Poly<Fq>> {
    let t = s.trim();
    if let Some(body) = t.strip_prefix('[') {
        let body = body.strip_suffix(']').ok_or_else(|| Error::Parse("missing ']'".into()))?;
        if body.trim().is_empty() {
            return Ok(Poly::zero(field));
        }
        let coeffs = split_top_level(body)
            .iter()
            .map(|c| parse_element(field, c))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Poly::new(field.clone(), coeffs));
    }
    let e = parse_expr(t)?;
    let int = field_int(field);
    let p = eval(&e, field, 1, &int, &|name| {
        if name == var {
            Some(Ident::Var(0))
        } else {
            generator_of(field, name).map(Ident::Const)
        }
    })?;
    Ok(p.to_univariate().expect("one variable"))
}

/// Integer polynomial: list form or an expression in `var`.
pub fn parse_int_poly(s: &str, var: &str) -> Result<Poly<BigInt>> {
    let t = s.trim();
    if let Some(body) = t.strip_prefix('[') {
        let body = body.strip_suffix(']').ok_or_else(|| Error::Parse("missing ']'".into()))?;
        let coeffs = body
            .split(',')
            .filter(|c| !c.trim().is_empty())
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Poly::new((), coeffs));
    }
    let e = parse_expr(t)?;
    let p = eval::<BigInt>(&e, &(), 1, &|n| n.clone(), &|name| (name == var).then_some(Ident::Var(0)))?;
    Ok(p.to_univariate().expect("one variable"))
}

/// Multivariate polynomial in `T1, …, T{nvars}`.
pub fn parse_mpoly(field: &GaloisField, s: &str, nvars: usize) -> Result<MPoly<Fq>> {
    let e = parse_expr(s)?;
    let int = field_int(field);
    eval(&e, field, nvars, &int, &|name| {
        if let Some(idx) = name.strip_prefix('T').and_then(|d| d.parse::<usize>().ok()) {
            if (1..=nvars).contains(&idx) {
                return Some(Ident::Var(idx - 1));
            }
        }
        generator_of(field, name).map(Ident::Const)
    })
}

/// Splits on commas not nested in parentheses or brackets.
pub(crate) fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs_round_trip() {
        for s in ["GF(5)", "GF(2^2)", "GF(3^2)", "GF(3^2;mod=2,2,1)", "GF(7^2)"] {
            let f = parse_field(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(parse_field(&f.to_string()).unwrap(), f);
        }
        let f = parse_field("GF(3^2;mod=1,0,1)").unwrap();
        assert_eq!(f.to_string(), "GF(3^2)");
        assert!(parse_field("GF(4)").is_err());
        assert!(parse_field("F(5)").is_err());
        assert_eq!(parse_field("GF(3^2;mod=2,0,1)").unwrap_err(), Error::ReducibleModulus);
    }

    #[test]
    fn polynomials() {
        let f5 = parse_field("GF(5)").unwrap();
        let a = parse_poly(&f5, "3*X^2+12*X+14", "X").unwrap();
        let b = parse_poly(&f5, "[14,12,3]", "X").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_list(), "[4,2,3]");
        assert_eq!(parse_poly(&f5, "(X-2)*(X-4)*3", "X").unwrap(), a);
        assert_eq!(parse_poly(&f5, "-X", "X").unwrap(), Poly::from_ints(&f5, &[0, 4]));
        assert!(parse_poly(&f5, "Y+1", "X").is_err());
        assert!(parse_poly(&f5, "X^", "X").is_err());
    }

    #[test]
    fn extension_coefficients() {
        let f9 = parse_field("GF(3^2)").unwrap();
        let p = parse_poly(&f9, "[a+1, 2*a, 1]", "X").unwrap();
        assert_eq!(p.coeff(0), f9.from_coeffs(&[1, 1]).unwrap());
        let q = parse_poly(&f9, &p.to_text("X"), "X").unwrap();
        assert_eq!(p, q);
        let back = parse_poly(&f9, &p.to_list(), "X").unwrap();
        assert_eq!(p, back);
        // a^2 = -1 in GF(3)[a]/(a^2+1)
        assert_eq!(parse_element(&f9, "a^2").unwrap(), f9.int(-1));
        let f5 = parse_field("GF(5)").unwrap();
        assert!(parse_element(&f5, "a").is_err());
    }

    #[test]
    fn integer_and_multivariate() {
        let z = parse_int_poly("3*X^2+12*X+14", "X").unwrap();
        assert_eq!(z, parse_int_poly("[14, 12, 3]", "X").unwrap());
        let f5 = parse_field("GF(5)").unwrap();
        let m = parse_mpoly(&f5, "T1^2*T2 + 3*T2^3", 2).unwrap();
        assert_eq!(m.to_text(), "T1^2*T2+3*T2^3");
        assert!(parse_mpoly(&f5, "T3", 2).is_err());
    }
}
