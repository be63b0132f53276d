//! Sparse multivariate polynomials `K[T_1, …, T_r]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField};
use crate::poly::{Algebra, Poly};
use crate::scalar::Scalar;

pub type Exponents = Vec<u32>;

/// Graded lexicographic order (`T1` most significant among equal degrees).
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq)]
pub struct MPoly<C: Scalar> {
    ctx: C::Ctx,
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Scalar> MPoly<C> {
    pub fn zero(ctx: &C::Ctx, nvars: usize) -> Self {
        MPoly { ctx: ctx.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        Self::term(c, vec![0; nvars])
    }

    pub fn term(c: C, exps: Exponents) -> Self {
        let mut p = MPoly::zero(&c.ctx(), exps.len());
        if !c.is_zero_value() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `T_{i+1}` (zero-based index).
    pub fn var(ctx: &C::Ctx, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(C::one_in(ctx), e)
    }

    pub fn from_terms(ctx: &C::Ctx, nvars: usize, terms: impl IntoIterator<Item = (Exponents, C)>) -> Result<Self> {
        let mut p = MPoly::zero(ctx, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Invalid(format!("exponent vector {e:?} has wrong length")));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero_value() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero_value() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    /// Degree in `T_{i+1}`; undefined for zero.
    pub fn per_var_degree(&self, i: usize) -> Result<u32> {
        if i >= self.nvars {
            return Err(Error::Invalid(format!("variable index {i} out of range")));
        }
        self.terms.keys().map(|e| e[i]).max().ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &C)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = MPoly::zero(&self.ctx, self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = MPoly::constant(C::one_in(&self.ctx), self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check(&self, other: &Self) {
        assert!(self.ctx == other.ctx && self.nvars == other.nvars, "multivariate ring mismatch");
    }

    pub fn checked_op(&self, other: &Self, op: MpOp) -> Result<Self> {
        if self.ctx != other.ctx || self.nvars != other.nvars {
            return Err(Error::SpecMismatch);
        }
        Ok(match op {
            MpOp::Add => self + other,
            MpOp::Sub => self - other,
            MpOp::Mul => self * other,
        })
    }

    /// Univariate view when `nvars == 1`.
    pub fn to_univariate(&self) -> Option<Poly<C>> {
        if self.nvars != 1 {
            return None;
        }
        let deg = self.terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![C::zero_in(&self.ctx); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        Some(Poly::new(self.ctx.clone(), coeffs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpOp {
    Add,
    Sub,
    Mul,
}

impl<'a, C: Scalar> Add<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &MPoly<C>) -> MPoly<C> {
        self.check(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Scalar> Sub<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &MPoly<C>) -> MPoly<C> {
        self.check(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Scalar> Mul<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &MPoly<C>) -> MPoly<C> {
        self.check(rhs);
        let mut out = MPoly::zero(&self.ctx, self.nvars);
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        self.scale(&C::int_in(&self.ctx, -1))
    }
}

impl<C: Scalar> Algebra<C> for MPoly<C> {
    fn constant_like(&self, c: &C) -> Self {
        MPoly::constant(c.clone(), self.nvars)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl<C: Scalar> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly{:?}", self.terms)
    }
}

impl<C: Scalar + fmt::Display> MPoly<C> {
    /// Text form, terms in decreasing graded-lex order, e.g. `T1^2*T2+3*T2^3`.
    pub fn to_text(&self) -> String {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("T{}", i + 1) } else { format!("T{}^{}", i + 1, x) })
                    .collect();
                let cs = c.to_string();
                if mono.is_empty() {
                    cs
                } else if c.is_one_value() {
                    mono.join("*")
                } else if cs.contains(['+', '-']) {
                    format!("({cs})*{}", mono.join("*"))
                } else {
                    format!("{cs}*{}", mono.join("*"))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    pub fn to_serial(&self) -> Vec<SerialTerm> {
        self.terms
            .iter()
            .map(|(e, c)| SerialTerm { exponents: e.clone(), coefficient: c.to_string() })
            .collect()
    }
}

/// Serialized term: exponent vector and coefficient text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialTerm {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl MPoly<Fq> {
    pub fn field(&self) -> &GaloisField {
        &self.ctx
    }

    /// Some `Y` with `Y^n = self` by graded-lex leading-term peeling.
    pub fn nth_root(&self, n: u64) -> Option<MPoly<Fq>> {
        assert!(n >= 1, "root index must be positive");
        if self.is_zero() || n == 1 {
            return Some(self.clone());
        }
        let field = self.field().clone();
        let l = field.characteristic;
        if n % l == 0 {
            let mut inner = MPoly::zero(&field, self.nvars);
            for (e, c) in &self.terms {
                if e.iter().any(|&x| x as u64 % l != 0) {
                    return None;
                }
                let e = e.iter().map(|&x| x / l as u32).collect();
                inner.add_term(e, c.frobenius_inverse());
            }
            return inner.nth_root(n / l);
        }
        let (lead_exp, lead_coeff) = self.leading_term()?;
        if lead_exp.iter().any(|&x| x as u64 % n != 0) {
            return None;
        }
        let y_exp: Exponents = lead_exp.iter().map(|&x| x / n as u32).collect();
        let y_coeff = lead_coeff.nth_root(n)?;
        let denom = (field.int((n % l) as i64) * y_coeff.pow(n - 1)).inverse()?;
        let mut y = MPoly::term(y_coeff, y_exp.clone());
        loop {
            let rest = self - &y.pow(n);
            let Some((r_exp, r_coeff)) = rest.leading_term() else {
                return Some(y);
            };
            let mut t_exp = Vec::with_capacity(self.nvars);
            for (&r, &ye) in r_exp.iter().zip(&y_exp) {
                let shift = (n as u32 - 1) * ye;
                if r < shift {
                    return None;
                }
                t_exp.push(r - shift);
            }
            if grlex_cmp(&t_exp, &y_exp) != Ordering::Less {
                return None;
            }
            y = &y + &MPoly::term(r_coeff.clone() * denom.clone(), t_exp);
        }
    }
}

/// All exponent vectors with `e_i ≤ bounds_i`, in graded-lex order.
pub fn bounded_monomials(bounds: &[u32]) -> Vec<Exponents> {
    let mut out: Vec<Exponents> = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..=b).map(move |x| {
                    let mut e = e.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
    }
    out.sort_by(|a, b| grlex_cmp(a, b));
    out
}

/// Number of polynomials with the given per-variable degree bounds,
/// saturating at `u128::MAX`.
pub fn bounded_count(field: &GaloisField, bounds: &[u32]) -> u128 {
    let monomials: u32 = bounds.iter().map(|&b| b + 1).product();
    (field.order() as u128).checked_pow(monomials).unwrap_or(u128::MAX)
}

/// Every polynomial with `deg_{T_i} ≤ bounds_i`, each exactly once.
pub fn enumerate_bounded(field: &GaloisField, bounds: &[u32], cap: u128) -> Result<BoundedPolys> {
    if bounds.is_empty() {
        return Err(Error::Invalid("at least one variable required".into()));
    }
    let count = bounded_count(field, bounds);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    Ok(BoundedPolys {
        field: field.clone(),
        nvars: bounds.len(),
        monomials: bounded_monomials(bounds),
        next: 0,
        end: count,
    })
}

pub struct BoundedPolys {
    field: GaloisField,
    nvars: usize,
    monomials: Vec<Exponents>,
    next: u128,
    end: u128,
}

impl BoundedPolys {
    pub fn len(&self) -> u128 {
        self.end - self.next
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Candidate with the given index (base-`Q` digits over the monomials).
    pub fn nth_candidate(&self, mut index: u128) -> MPoly<Fq> {
        let q = self.field.order() as u128;
        let mut p = MPoly::zero(&self.field, self.nvars);
        for m in &self.monomials {
            let digit = (index % q) as u64;
            index /= q;
            if digit != 0 {
                p.terms.insert(m.clone(), self.field.from_index(digit));
            }
        }
        p
    }
}

impl Iterator for BoundedPolys {
    type Item = MPoly<Fq>;
    fn next(&mut self) -> Option<MPoly<Fq>> {
        if self.next >= self.end {
            return None;
        }
        self.next += 1;
        Some(self.nth_candidate(self.next - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(l: u64) -> GaloisField {
        GaloisField::prime(l).unwrap()
    }

    fn t(f: &GaloisField, i: usize) -> MPoly<Fq> {
        MPoly::var(f, 2, i)
    }

    #[test]
    fn ring_identities() {
        let f = gf(5);
        let (t1, t2) = (t(&f, 0), t(&f, 1));
        let lhs = &(&t1 + &t2) * &(&t1 - &t2);
        let rhs = &t1.pow(2) - &t2.pow(2);
        assert_eq!(lhs, rhs);
        assert!((&t1 - &t1).is_zero());
        let f2 = gf(2);
        let (u1, u2) = (t(&f2, 0), t(&f2, 1));
        assert_eq!((&u1 + &u2).pow(2), &u1.pow(2) + &u2.pow(2));
    }

    #[test]
    fn degrees() {
        let f = gf(5);
        let (t1, t2) = (t(&f, 0), t(&f, 1));
        let g = &(&t1.pow(2) * &t2) + &t2.pow(3);
        assert_eq!(g.per_var_degree(0).unwrap(), 2);
        assert_eq!(g.per_var_degree(1).unwrap(), 3);
        let c = MPoly::constant(f.int(4), 2);
        assert_eq!(c.per_var_degree(0).unwrap(), 0);
        assert_eq!(c.per_var_degree(1).unwrap(), 0);
        assert_eq!(MPoly::<Fq>::zero(&f, 2).per_var_degree(0), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn roots() {
        let f = gf(5);
        let (t1, t2) = (t(&f, 0), t(&f, 1));
        let s = &t1 + &t2;
        assert_eq!(s.pow(3).nth_root(3), Some(s.clone()));
        assert_eq!((&t1 * &t2).nth_root(2), None);
        let m = &t1 * &t2;
        assert_eq!(m.pow(2).nth_root(2), Some(m.clone()));
        let f3 = gf(3);
        let (u1, u2) = (t(&f3, 0), t(&f3, 1));
        let g = &(&u1 * &u2) + &MPoly::constant(f3.int(2), 2);
        assert_eq!(g.pow(3).nth_root(3), Some(g.clone()));
        let h = g.pow(6);
        assert_eq!(h.nth_root(6).map(|r| r.pow(6)), Some(h));
    }

    #[test]
    fn enumeration_counts() {
        let f2 = gf(2);
        let all: Vec<_> = enumerate_bounded(&f2, &[1], 1000).unwrap().collect();
        assert_eq!(all.len(), 4);
        let texts: Vec<String> = all.iter().map(|p| p.to_text()).collect();
        assert_eq!(texts, vec!["0", "1", "T1", "T1+1"]);
        let f3 = gf(3);
        assert_eq!(enumerate_bounded(&f3, &[1, 1], 1_000_000).unwrap().count(), 81);
        let f5 = gf(5);
        let err = enumerate_bounded(&f5, &[3, 3], 1_000_000).err().unwrap();
        assert_eq!(err, Error::CapExceeded { count: 5u128.pow(16), cap: 1_000_000 });
    }

    #[test]
    fn text_and_serial() {
        let f = gf(5);
        let (t1, t2) = (t(&f, 0), t(&f, 1));
        let g = &(&t1.pow(2) * &t2) + &t2.pow(3).scale(&f.int(3));
        assert_eq!(g.to_text(), "T1^2*T2+3*T2^3");
        assert_eq!(g.to_serial().len(), 2);
    }
}
