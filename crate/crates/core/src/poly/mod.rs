//! Dense univariate polynomials generic over a [`Scalar`].

mod factor;
mod resultant;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::scalar::{Domain, FieldScalar, Scalar};

pub use factor::{Factorization, DEFAULT_FACTOR_SEED};
pub use resultant::{discriminant, integer_poly_discriminant, resultant};
pub use roots::Embedding;

pub type FqPoly = Poly<crate::fields::Fq>;

/// Ring in which polynomials over `C` can be evaluated.
pub trait Algebra<C: Scalar>: Clone {
    /// The constant `c` in the same ring (and context) as `self`.
    fn constant_like(&self, c: &C) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
}

impl<C: Scalar> Algebra<C> for C {
    fn constant_like(&self, c: &C) -> C {
        c.clone()
    }
    fn add_ref(&self, rhs: &C) -> C {
        self.clone() + rhs.clone()
    }
    fn mul_ref(&self, rhs: &C) -> C {
        self.clone() * rhs.clone()
    }
}

impl<C: Scalar> Algebra<C> for Poly<C> {
    fn constant_like(&self, c: &C) -> Self {
        Poly::constant(c.clone())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

#[derive(Clone, PartialEq)]
pub struct Poly<C: Scalar> {
    ctx: C::Ctx,
    /// Constant term first; no trailing zeros (empty for the zero polynomial).
    coeffs: Vec<C>,
}

impl<C: Scalar> Poly<C> {
    pub fn new(ctx: C::Ctx, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_value()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn zero(ctx: &C::Ctx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &C::Ctx) -> Self {
        Poly::constant(C::one_in(ctx))
    }

    pub fn constant(c: C) -> Self {
        Poly::new(c.ctx(), vec![c])
    }

    /// The indeterminate.
    pub fn x(ctx: &C::Ctx) -> Self {
        Poly::monomial(C::one_in(ctx), 1)
    }

    pub fn monomial(c: C, degree: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![C::zero_in(&ctx); degree];
        coeffs.push(c);
        Poly::new(ctx, coeffs)
    }

    /// Coefficients from integers, constant first.
    pub fn from_ints<I: Copy + Into<i128>>(ctx: &C::Ctx, ints: &[I]) -> Self {
        let coeffs = ints
            .iter()
            .map(|&n| {
                let n: i128 = n.into();
                C::int_in(ctx, i64::try_from(n).expect("coefficient fits in i64"))
            })
            .collect();
        Poly::new(ctx.clone(), coeffs)
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.ctx.clone(), self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero_in(&self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
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

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * C::int_in(&self.ctx, i as i64))
            .collect();
        Poly::new(self.ctx.clone(), coeffs)
    }

    pub fn eval(&self, x: &C) -> C {
        self.eval_at(x)
    }

    /// Horner evaluation at an element of any algebra over `C`.
    pub fn eval_at<A: Algebra<C>>(&self, x: &A) -> A {
        let mut acc = x.constant_like(&self.lc());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul_ref(x).add_ref(&x.constant_like(c));
        }
        acc
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &Poly<C>) -> Poly<C> {
        if self.is_zero() {
            return self.clone();
        }
        self.eval_at(inner)
    }

    /// Coefficientwise image under a ring map.
    pub fn map<D: Scalar>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(ctx.clone(), self.coeffs.iter().map(f).collect())
    }

    fn check(&self, other: &Self) {
        assert!(self.ctx == other.ctx, "polynomials over different coefficient rings");
    }

    pub fn checked_op(&self, other: &Self, op: PolyOp) -> Result<Self>
    where
        C: FieldScalar,
    {
        if self.ctx != other.ctx {
            return Err(Error::SpecMismatch);
        }
        Ok(match op {
            PolyOp::Add => self + other,
            PolyOp::Sub => self - other,
            PolyOp::Mul => self * other,
            PolyOp::Gcd => self.gcd(other),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Gcd,
}

impl<C: Domain> Poly<C> {
    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero");
        let Some(da) = self.degree() else { return self.clone() };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let s = Poly::monomial(r.lc(), dr - db);
            r = &r.scale(&lb) - &(&s * b);
            e -= 1;
        }
        r.scale(&lb.pow_u64(e as u64))
    }

    /// Exact division by a scalar; `None` if some coefficient is not divisible.
    pub fn div_scalar_exact(&self, c: &C) -> Option<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.div_exact(c)).collect::<Option<Vec<_>>>()?;
        Some(Poly::new(self.ctx.clone(), coeffs))
    }
}

impl<C: FieldScalar> Poly<C> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one_value())
    }

    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        if self.ctx != b.ctx {
            return Err(Error::SpecMismatch);
        }
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv = b.lc().inv().ok_or(Error::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        let Some(da) = self.degree() else {
            return Ok((self.clone(), self.clone()));
        };
        if da < db {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![C::zero_in(&self.ctx); da - db + 1];
        for i in (0..=da - db).rev() {
            let t = r[i + db].clone() * inv.clone();
            if t.is_zero_value() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].clone() - t.clone() * bj.clone();
            }
            q[i] = t;
        }
        r.truncate(db);
        Ok((Poly::new(self.ctx.clone(), q), Poly::new(self.ctx.clone(), r)))
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.divrem(b).expect("nonzero divisor").1
    }

    /// Exact quotient; panics if `b` does not divide `self`.
    pub fn exact_div(&self, b: &Self) -> Self {
        let (q, r) = self.divrem(b).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`, exponent given as a big integer.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Poly::one(&self.ctx).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = (&acc * &acc).rem(m);
            if e.bit(i) {
                acc = (&acc * &base).rem(m);
            }
        }
        acc
    }
}

impl<'a, C: Scalar> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.check(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::new(self.ctx.clone(), coeffs)
    }
}

impl<'a, C: Scalar> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.check(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::new(self.ctx.clone(), coeffs)
    }
}

impl<'a, C: Scalar> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.check(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![C::zero_in(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_value() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(self.ctx.clone(), out)
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Scalar> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Scalar + fmt::Display> Poly<C> {
    /// Text form in the variable `var`, e.g. `3*X^2+2*X+4`.
    pub fn to_text(&self, var: &str) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero_value() {
                continue;
            }
            let cs = c.to_string();
            let cs = if cs.contains(['+', '-']) && i > 0 { format!("({cs})") } else { cs };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match i {
                0 => cs,
                _ if c.is_one_value() => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// List form `[c0,c1,...]`, constant first.
    pub fn to_list(&self) -> String {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", v.join(","))
    }
}

impl<C: Scalar> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GaloisField;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn gf5() -> GaloisField {
        GaloisField::prime(5).unwrap()
    }

    #[test]
    fn product_reduces_mod_5() {
        let f = gf5();
        let a = FqPoly::from_ints(&f, &[1, 1]);
        let b = FqPoly::from_ints(&f, &[4, 1]);
        assert_eq!(&a * &b, FqPoly::from_ints(&f, &[4, 0, 1]));
    }

    #[test]
    fn gcd_and_divrem() {
        let f = gf5();
        let a = FqPoly::from_ints(&f, &[-1, 0, 1]);
        let b = FqPoly::from_ints(&f, &[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        // gcd is returned monic
        assert_eq!(a.gcd(&b.scale(&f.int(3))), b);
        let t3 = FqPoly::from_ints(&f, &[0, 0, 0, 1]);
        let t2 = FqPoly::from_ints(&f, &[0, 0, 1]);
        let (q, r) = t3.divrem(&t2).unwrap();
        assert_eq!(q, Poly::x(&f));
        assert!(r.is_zero());
        assert_eq!(t3.divrem(&Poly::zero(&f)), Err(Error::DivisionByZero));
        let g7 = GaloisField::prime(7).unwrap();
        assert_eq!(t3.divrem(&Poly::x(&g7)), Err(Error::SpecMismatch));
        assert_eq!(t3.checked_op(&Poly::x(&g7), PolyOp::Add), Err(Error::SpecMismatch));
    }

    #[test]
    fn text_forms() {
        let f = gf5();
        let p = FqPoly::from_ints(&f, &[4, 2, 3]);
        assert_eq!(p.to_text("X"), "3*X^2+2*X+4");
        assert_eq!(p.to_list(), "[4,2,3]");
        assert_eq!(Poly::<crate::Fq>::zero(&f).to_text("X"), "0");
    }

    #[test]
    fn generic_over_integers_and_rationals() {
        let p: Poly<BigInt> = Poly::from_ints(&(), &[14, 12, 3]);
        assert_eq!(p.eval(&BigInt::from(1)), BigInt::from(29));
        assert_eq!(p.derivative(), Poly::from_ints(&(), &[12, 6]));
        let q: Poly<BigRational> = Poly::from_ints(&(), &[-1, 0, 2]);
        let (quo, rem) = q.divrem(&Poly::from_ints(&(), &[0, 2])).unwrap();
        assert_eq!(quo, Poly::from_ints(&(), &[0, 1]));
        assert_eq!(rem, Poly::from_ints(&(), &[-1]));
        let fl: Poly<f64> = Poly::from_ints(&(), &[1, 1]);
        assert_eq!(fl.pow(3).coeffs(), &[1.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn pseudo_remainder() {
        let a: Poly<BigInt> = Poly::from_ints(&(), &[1, 0, 1]);
        let b: Poly<BigInt> = Poly::from_ints(&(), &[1, 2]);
        // 4(x^2+1) = (2x - 1)(2x + 1) + 5
        assert_eq!(a.pseudo_rem(&b), Poly::from_ints(&(), &[5]));
    }

    #[test]
    fn compose_and_powmod() {
        let f = gf5();
        let p = FqPoly::from_ints(&f, &[1, 0, 1]);
        let inner = FqPoly::from_ints(&f, &[1, 1]);
        assert_eq!(p.compose(&inner), FqPoly::from_ints(&f, &[2, 2, 1]));
        let m = FqPoly::from_ints(&f, &[2, 0, 0, 1]);
        let x = Poly::x(&f);
        let e = BigUint::from(125u32);
        let direct = x.pow(125).rem(&m);
        assert_eq!(x.powmod(&e, &m), direct);
    }
}
