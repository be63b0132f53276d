//! Exact arithmetic in finite fields `GF(ℓ^s)`.
//!
//! Elements are stored in the power basis of a root `a` of a monic
//! irreducible modulus of degree `s` over `GF(ℓ)`, constant coefficient
//! first. The canonical element order compares the integer encoding
//! `Σ c_i ℓ^i`, i.e. coefficient vectors compared from the top degree down.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Deref, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::poly::{FqPoly, Poly};
use crate::scalar::{is_prime, Domain, FieldScalar, Scalar};

/// Default cap on the number of elements any enumeration may produce.
pub const DEFAULT_ENUM_CAP: u128 = 10_000_000;

/// Validated description of `GF(ℓ^s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub characteristic: u64,
    pub degree: usize,
    /// Monic modulus, constant term first, length `degree + 1`.
    pub modulus: Vec<u64>,
    /// Whether `modulus` is the one the deterministic search picks.
    pub default_modulus: bool,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        self.characteristic.pow(self.degree as u32)
    }
}

/// Shared handle on a [`FieldSpec`]; elements keep one of these.
#[derive(Clone)]
pub struct GaloisField(Arc<FieldSpec>);

impl Deref for GaloisField {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for GaloisField {}

impl Hash for GaloisField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "GF({})", self.characteristic)
        } else if self.default_modulus {
            write!(f, "GF({}^{})", self.characteristic, self.degree)
        } else {
            let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            write!(f, "GF({}^{};mod={})", self.characteristic, self.degree, m.join(","))
        }
    }
}

impl GaloisField {
    pub fn prime(l: u64) -> Result<Self> {
        Self::new(l, 1, None)
    }

    /// Builds `GF(l^s)`. Without an explicit modulus the first monic
    /// irreducible of degree `s` in canonical order is used.
    pub fn new(l: u64, s: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(l) || l > u32::MAX as u64 {
            return Err(Error::NotPrime(l));
        }
        if s == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        if (l as u128).checked_pow(s as u32).is_none_or(|q| q > u64::MAX as u128 / 2) {
            return Err(Error::Invalid(format!("GF({l}^{s}) is too large")));
        }
        let base = Self::raw(l, 1, vec![0, 1], true);
        if s == 1 {
            if let Some(m) = modulus {
                let trimmed = trim(&m, l);
                if trimmed.len() != 2 {
                    return Err(Error::DegreeMismatch { expected: 1, found: trimmed.len().saturating_sub(1) });
                }
                if trimmed[1] != 1 {
                    return Err(Error::Invalid("modulus must be monic".into()));
                }
            }
            return Ok(base);
        }
        let default = default_modulus(&base, s);
        match modulus {
            None => Ok(Self::raw(l, s, default, true)),
            Some(m) => {
                let m = trim(&m, l);
                if m.len() != s + 1 {
                    return Err(Error::DegreeMismatch { expected: s, found: m.len().saturating_sub(1) });
                }
                if m[s] != 1 {
                    return Err(Error::Invalid("modulus must be monic".into()));
                }
                if !Poly::from_ints(&base, &m).is_irreducible() {
                    return Err(Error::ReducibleModulus);
                }
                let is_default = m == default;
                Ok(Self::raw(l, s, m, is_default))
            }
        }
    }

    fn raw(l: u64, s: usize, modulus: Vec<u64>, default_modulus: bool) -> Self {
        GaloisField(Arc::new(FieldSpec { characteristic: l, degree: s, modulus, default_modulus }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn zero(&self) -> Fq {
        Fq { field: self.clone(), c: vec![0; self.degree] }
    }

    pub fn one(&self) -> Fq {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Fq {
        let mut c = vec![0; self.degree];
        c[0] = n.rem_euclid(self.characteristic as i64) as u64;
        Fq { field: self.clone(), c }
    }

    /// The class of `a` (root of the modulus). For prime fields this is
    /// the root of the placeholder modulus `X`, i.e. zero.
    pub fn generator(&self) -> Fq {
        if self.degree == 1 {
            return self.zero();
        }
        let mut c = vec![0; self.degree];
        c[1] = 1;
        Fq { field: self.clone(), c }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq> {
        if coeffs.len() > self.degree {
            return Err(Error::Invalid(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        let mut c = vec![0; self.degree];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = src % self.characteristic;
        }
        Ok(Fq { field: self.clone(), c })
    }

    /// Element whose integer encoding `Σ c_i ℓ^i` equals `index`.
    pub fn from_index(&self, mut index: u64) -> Fq {
        let l = self.characteristic;
        let mut c = vec![0; self.degree];
        for slot in c.iter_mut() {
            *slot = index % l;
            index /= l;
        }
        Fq { field: self.clone(), c }
    }

    pub fn elements(&self) -> Elements {
        Elements { field: self.clone(), next: 0, end: self.order() }
    }

    pub fn enumerate_elements(&self, cap: u128) -> Result<Elements> {
        let count = self.order() as u128;
        if count > cap {
            return Err(Error::CapExceeded { count, cap });
        }
        Ok(self.elements())
    }

    /// Checked version of the arithmetic operators.
    pub fn arith(&self, a: &Fq, b: &Fq, op: ArithOp) -> Result<Fq> {
        if a.field != *self || b.field != *self {
            return Err(Error::SpecMismatch);
        }
        Ok(match op {
            ArithOp::Add => a.clone() + b.clone(),
            ArithOp::Sub => a.clone() - b.clone(),
            ArithOp::Mul => a.clone() * b.clone(),
            ArithOp::Div => {
                let inv = b.inverse().ok_or(Error::DivisionByZero)?;
                a.clone() * inv
            }
        })
    }

    /// `true` when `self` is a subfield-compatible extension of `other`:
    /// same characteristic and `other.degree | self.degree`.
    pub fn extends(&self, other: &GaloisField) -> bool {
        self.characteristic == other.characteristic && self.degree % other.degree == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn trim(m: &[u64], l: u64) -> Vec<u64> {
    let mut v: Vec<u64> = m.iter().map(|c| c % l).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn default_modulus(base: &GaloisField, s: usize) -> Vec<u64> {
    let l = base.characteristic;
    let count = l.pow(s as u32);
    for idx in 0..count {
        let mut m = Vec::with_capacity(s + 1);
        let mut rest = idx;
        for _ in 0..s {
            m.push(rest % l);
            rest /= l;
        }
        m.push(1);
        // irreducibles of degree ≥ 2 have nonzero constant term
        if m[0] == 0 {
            continue;
        }
        if FqPoly::from_ints(base, &m).is_irreducible() {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

pub struct Elements {
    field: GaloisField,
    next: u64,
    end: u64,
}

impl Iterator for Elements {
    type Item = Fq;
    fn next(&mut self) -> Option<Fq> {
        (self.next < self.end).then(|| {
            self.next += 1;
            self.field.from_index(self.next - 1)
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

/// Element of `GF(ℓ^s)`.
#[derive(Clone)]
pub struct Fq {
    field: GaloisField,
    c: Vec<u64>,
}

impl Fq {
    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Power-basis coordinates, constant first.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn index(&self) -> u64 {
        let l = self.field.characteristic;
        self.c.iter().rev().fold(0, |acc, &d| acc * l + d)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&d| d == 0)
    }

    /// Lies in the prime field.
    pub fn is_prime_field(&self) -> bool {
        self.c[1..].iter().all(|&d| d == 0)
    }

    pub fn pow(&self, e: u64) -> Fq {
        self.pow_u64(e)
    }

    pub fn inverse(&self) -> Option<Fq> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(self.field.order() - 2))
    }

    /// `a^(ℓ^iterations)`.
    pub fn frobenius(&self, iterations: u64) -> Fq {
        let s = self.field.degree as u64;
        let mut out = self.clone();
        for _ in 0..(iterations % s) {
            out = out.pow(self.field.characteristic);
        }
        out
    }

    /// Unique `b` with `b^ℓ = self`.
    pub fn frobenius_inverse(&self) -> Fq {
        let s = self.field.degree as u64;
        self.frobenius(s - 1)
    }

    /// Some `b` with `b^n = self`, choosing the smallest in canonical order.
    pub fn nth_root(&self, n: u64) -> Option<Fq> {
        assert!(n >= 1, "root index must be positive");
        if self.is_zero() {
            return Some(self.clone());
        }
        let l = self.field.characteristic;
        let mut a = self.clone();
        let mut m = n;
        // ℓ-th roots are unique
        while m % l == 0 {
            a = a.frobenius_inverse();
            m /= l;
        }
        let q1 = self.field.order() - 1;
        let g = m.gcd(&q1);
        if g == 1 {
            let inv = mod_inverse(m % q1, q1).unwrap_or(0);
            return Some(a.pow(inv));
        }
        if !a.pow(q1 / g).is_one() {
            return None;
        }
        if self.field.order() <= 1 << 12 {
            return self.field.elements().find(|b| b.pow(m) == a);
        }
        let f = self.field.clone();
        let mut coeffs = vec![-a.clone()];
        coeffs.resize(m as usize, f.zero());
        coeffs.push(f.one());
        Poly::new(f, coeffs).roots().into_iter().min()
    }

    /// Polynomial in the generator `a`, e.g. `2*a+1`; plain integer for prime fields.
    pub fn to_text(&self) -> String {
        if self.field.degree == 1 {
            return self.c[0].to_string();
        }
        let mut terms = Vec::new();
        for (i, &d) in self.c.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn check(&self, other: &Fq) {
        assert!(self.field == other.field, "field mismatch: {} vs {}", self.field, other.field);
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (a, m) = (a as i128, m as i128);
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m) as u64)
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}
impl Eq for Fq {}

impl Hash for Fq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state)
    }
}

impl PartialOrd for Fq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: integer encoding (top coefficient most significant).
impl Ord for Fq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.iter().rev().cmp(other.c.iter().rev())
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(mut self, rhs: Fq) -> Fq {
        self.check(&rhs);
        let l = self.field.characteristic;
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a = (*a + b) % l;
        }
        self
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(mut self, rhs: Fq) -> Fq {
        self.check(&rhs);
        let l = self.field.characteristic;
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a = (*a + l - b) % l;
        }
        self
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(mut self) -> Fq {
        let l = self.field.characteristic;
        for a in self.c.iter_mut() {
            *a = (l - *a) % l;
        }
        self
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        self.check(&rhs);
        let l = self.field.characteristic;
        let s = self.field.degree;
        if s == 1 {
            let v = ((self.c[0] as u128 * rhs.c[0] as u128) % l as u128) as u64;
            return Fq { field: self.field, c: vec![v] };
        }
        let mut prod = vec![0u128; 2 * s - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u128 * b as u128) % l as u128;
            }
        }
        let m = &self.field.modulus;
        for top in (s..2 * s - 1).rev() {
            let t = prod[top];
            if t == 0 {
                continue;
            }
            prod[top] = 0;
            for k in 0..s {
                let sub = t * m[k] as u128 % l as u128;
                let idx = top - s + k;
                prod[idx] = (prod[idx] + l as u128 - sub) % l as u128;
            }
        }
        let c = prod[..s].iter().map(|&v| v as u64).collect();
        Fq { field: self.field, c }
    }
}

impl Div for Fq {
    type Output = Fq;
    fn div(self, rhs: Fq) -> Fq {
        let inv = rhs.inverse().expect("division by zero in finite field");
        self * inv
    }
}

impl Scalar for Fq {
    type Ctx = GaloisField;

    fn ctx(&self) -> GaloisField {
        self.field.clone()
    }
    fn zero_in(ctx: &GaloisField) -> Fq {
        ctx.zero()
    }
    fn one_in(ctx: &GaloisField) -> Fq {
        ctx.one()
    }
    fn int_in(ctx: &GaloisField, n: i64) -> Fq {
        ctx.int(n)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl Domain for Fq {
    fn div_exact(&self, rhs: &Fq) -> Option<Fq> {
        rhs.inverse().map(|inv| self.clone() * inv)
    }
}

impl FieldScalar for Fq {
    fn inv(&self) -> Option<Fq> {
        self.inverse()
    }
}
