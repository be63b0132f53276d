//! Scalar abstractions shared by the polynomial types.
//!
//! Coefficient types either carry no runtime context (machine and `num`
//! integers, rationals, floats: anything implementing [`num_traits::Num`])
//! or carry a cheap-to-clone context describing the ring they live in
//! (finite field elements carry their [`crate::fields::GaloisField`]).
//! The polynomial code only ever talks to [`Scalar`], so the same
//! arithmetic, Horner evaluation and subresultant code runs over
//! `GF(ℓ^s)`, `ℤ` and `ℚ`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// A commutative ring element.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Runtime description of the ring (unit type for context-free scalars).
    type Ctx: Clone + PartialEq + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    /// Image of an integer under the canonical map `ℤ → R`.
    fn int_in(ctx: &Self::Ctx, n: i64) -> Self;
    fn is_zero_value(&self) -> bool;

    fn is_one_value(&self) -> bool {
        *self == Self::one_in(&self.ctx())
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Integral domain with exact division.
pub trait Domain: Scalar {
    /// `Some(q)` with `q * rhs == self` when such `q` exists.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

pub trait FieldScalar: Domain {
    fn inv(&self) -> Option<Self>;
}

impl<T> Scalar for T
where
    T: Num + Clone + PartialEq + Debug + Neg<Output = T> + FromPrimitive,
{
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        T::zero()
    }
    fn one_in(_: &()) -> Self {
        T::one()
    }
    fn int_in(_: &(), n: i64) -> Self {
        T::from_i64(n).expect("integer representable in scalar type")
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Domain for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
}

impl Domain for i64 {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0 || self % rhs != 0 {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl Domain for BigRational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}

impl FieldScalar for BigRational {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Domain for f64 {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (*rhs != 0.0).then(|| self / rhs)
    }
}

impl FieldScalar for f64 {
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

/// `v_p(n)` for nonzero `n`.
pub fn padic_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n` with multiplicity, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
