//! Resultants by the subresultant pseudo-remainder sequence, valid over
//! any integral domain with exact division (`ℤ`, `GF(ℓ^s)`, `ℚ`).

use num_bigint::BigInt;

use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::{Domain, Scalar};

fn sign<C: Scalar>(ctx: &C::Ctx, negative: bool) -> C {
    C::int_in(ctx, if negative { -1 } else { 1 })
}

pub fn resultant<C: Domain>(f: &Poly<C>, g: &Poly<C>) -> Result<C> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let ctx = f.ctx().clone();
    if dg == 0 {
        return Ok(g.lc().pow_u64(df as u64));
    }
    if df == 0 {
        return Ok(f.lc().pow_u64(dg as u64));
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut s = sign::<C>(&ctx, false);
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            s = -s;
        }
    }
    let mut gg = C::one_in(&ctx);
    let mut h = C::one_in(&ctx);
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u64;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = gg.clone() * h.pow_u64(delta);
        b = r.div_scalar_exact(&divisor).expect("subresultant division is exact");
        gg = a.lc();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            _ => gg
                .pow_u64(delta)
                .div_exact(&h.pow_u64(delta - 1))
                .expect("subresultant division is exact"),
        };
        match b.degree() {
            None => return Ok(C::zero_in(&ctx)),
            Some(0) => {
                let da = a.degree().unwrap() as u64;
                let num = b.lc().pow_u64(da);
                let out = if da == 0 {
                    num * h
                } else {
                    num.div_exact(&h.pow_u64(da - 1)).expect("subresultant division is exact")
                };
                return Ok(s * out);
            }
            Some(_) => {}
        }
    }
}

/// `(−1)^{d(d−1)/2} · Res(f, f′) / lc(f)`, where the resultant treats `f′`
/// as having formal degree `d − 1` (so a vanishing `f′` gives zero).
pub fn discriminant<C: Domain>(f: &Poly<C>) -> Result<C> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::Invalid("discriminant of a constant".into()));
    }
    let ctx = f.ctx().clone();
    let df = f.derivative();
    let Some(m) = df.degree() else {
        return Ok(C::zero_in(&ctx));
    };
    let lc = f.lc();
    let res = resultant(f, &df)?;
    // Res_{d, d−1} = lc^{d−1−m} · Res_{d, m}
    let formal = res * lc.pow_u64((d - 1 - m) as u64);
    let quotient = formal.div_exact(&lc).ok_or(Error::DivisionByZero)?;
    let negative = (d * (d - 1) / 2) % 2 == 1;
    Ok(sign::<C>(&ctx, negative) * quotient)
}

/// Exact discriminant of an integer polynomial.
pub fn integer_poly_discriminant(f: &Poly<BigInt>) -> Result<BigInt> {
    discriminant(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FqPoly;
    use crate::fields::GaloisField;

    fn z(c: &[i64]) -> Poly<BigInt> {
        Poly::from_ints(&(), c)
    }

    #[test]
    fn integer_discriminants() {
        assert_eq!(integer_poly_discriminant(&z(&[14, 12, 3])).unwrap(), BigInt::from(-24));
        assert_eq!(integer_poly_discriminant(&z(&[-1, 0, 1])).unwrap(), BigInt::from(4));
        assert_eq!(integer_poly_discriminant(&z(&[0, -1, 0, 1])).unwrap(), BigInt::from(4));
        // X^3 + pX + q: −4p³ − 27q²
        assert_eq!(integer_poly_discriminant(&z(&[5, 2, 0, 1])).unwrap(), BigInt::from(-4 * 8 - 27 * 25));
        assert_eq!(integer_poly_discriminant(&z(&[7, 3])).unwrap(), BigInt::from(1));
        assert_eq!(integer_poly_discriminant(&z(&[])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn quadratic_formula_sampled() {
        let f5 = GaloisField::prime(5).unwrap();
        for b in 0..5 {
            for c in 0..5 {
                let p = FqPoly::from_ints(&f5, &[c, b, 1]);
                let d = discriminant(&p).unwrap();
                assert_eq!(d, f5.int(b * b - 4 * c));
            }
        }
    }

    #[test]
    fn mod_p_discriminants() {
        let f5 = GaloisField::prime(5).unwrap();
        assert_eq!(discriminant(&FqPoly::from_ints(&f5, &[4, 2, 3])).unwrap(), f5.int(1));
        assert_eq!(discriminant(&FqPoly::from_ints(&f5, &[1, -2, 1])).unwrap(), f5.zero());
        // derivative vanishes identically: X^5 + 1
        assert_eq!(discriminant(&FqPoly::from_ints(&f5, &[1, 0, 0, 0, 0, 1])).unwrap(), f5.zero());
    }

    #[test]
    fn small_resultants() {
        // Res(x - a, g) = g(a)
        let g = z(&[3, -2, 0, 1]);
        assert_eq!(resultant(&z(&[-4, 1]), &g).unwrap(), BigInt::from(3 - 8 + 64));
        // Res(g, x - a) = (−1)^{deg g} g(a)
        assert_eq!(resultant(&g, &z(&[-4, 1])).unwrap(), BigInt::from(-(3 - 8 + 64)));
        assert_eq!(resultant(&z(&[-1, 0, 1]), &z(&[1, 1])).unwrap(), BigInt::from(0));
    }
}
