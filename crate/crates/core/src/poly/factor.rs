//! Factorization over `GF(ℓ^s)`: square-free decomposition (with the
//! `f' = 0` case handled by taking `ℓ`-th roots), distinct-degree
//! splitting, then Cantor–Zassenhaus equal-degree splitting driven by a
//! seeded generator.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField};
use crate::scalar::factor_u64;

pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_f00d;

/// `unit · Π (X − a_i)^{n_i} · Π g_j^{m_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub unit: Fq,
    /// Distinct roots in canonical order, with multiplicity.
    pub linear_roots: Vec<(Fq, u32)>,
    /// Monic irreducibles of degree ≥ 2, ordered by degree then coefficients.
    pub nonlinear: Vec<(Poly<Fq>, u32)>,
    /// Seed of the equal-degree splitting generator.
    pub seed: u64,
}

impl Factorization {
    /// Number of distinct linear factors.
    pub fn t(&self) -> usize {
        self.linear_roots.len()
    }

    pub fn field(&self) -> &GaloisField {
        self.unit.field()
    }

    pub fn splits(&self) -> bool {
        self.nonlinear.is_empty()
    }

    pub fn expand(&self) -> Poly<Fq> {
        let f = self.field();
        let mut acc = Poly::constant(self.unit.clone());
        for (a, n) in &self.linear_roots {
            let lin = Poly::new(f.clone(), vec![-a.clone(), f.one()]);
            acc = &acc * &lin.pow(*n as u64);
        }
        for (g, m) in &self.nonlinear {
            acc = &acc * &g.pow(*m as u64);
        }
        acc
    }

    /// `Σ n_i + Σ deg(g_j)·m_j`.
    pub fn total_degree(&self) -> usize {
        let lin: usize = self.linear_roots.iter().map(|(_, n)| *n as usize).sum();
        let non: usize = self
            .nonlinear
            .iter()
            .map(|(g, m)| g.degree().unwrap_or(0) * *m as usize)
            .sum();
        lin + non
    }

    /// Degree over the current field of the smallest extension splitting
    /// every factor.
    pub fn splitting_degree(&self) -> usize {
        self.nonlinear
            .iter()
            .fold(1usize, |acc, (g, _)| acc.lcm(&g.degree().unwrap_or(1)))
    }
}

fn q_big(f: &GaloisField) -> BigUint {
    BigUint::from(f.order())
}

impl Poly<Fq> {
    pub fn field(&self) -> &GaloisField {
        self.ctx()
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let field = self.field().clone();
        let x = Poly::x(&field);
        let q = q_big(&field);
        for (r, _) in factor_u64(n as u64) {
            let e = q.pow((n as u64 / r) as u32);
            let h = &x.powmod(&e, &f) - &x;
            if !h.gcd(&f).is_constant() {
                return false;
            }
        }
        let h = &x.powmod(&q.pow(n as u32), &f) - &x;
        h.rem(&f).is_zero()
    }

    /// Replaces each coefficient by its unique `ℓ`-th root and divides
    /// exponents by `ℓ`. Requires `self = h(X^ℓ)`.
    pub(crate) fn lth_root_of_power(&self) -> Option<Poly<Fq>> {
        let l = self.field().characteristic as usize;
        let mut out = Vec::with_capacity(self.coeffs().len() / l + 1);
        for (i, c) in self.coeffs().iter().enumerate() {
            if i % l == 0 {
                out.push(c.frobenius_inverse());
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(Poly::new(self.field().clone(), out))
    }

    /// Square-free decomposition of a monic polynomial: pairwise coprime
    /// square-free parts with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly<Fq>, u32)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let l = self.field().characteristic as u32;
        let d = f.derivative();
        if d.is_zero() {
            let h = f.lth_root_of_power().expect("vanishing derivative means f = h(X^ℓ)");
            return h.squarefree_decomposition().into_iter().map(|(g, m)| (g, m * l)).collect();
        }
        let mut out = Vec::new();
        let mut c = f.gcd(&d);
        let mut w = f.exact_div(&c);
        let mut i = 1;
        while !w.is_constant() {
            let y = w.gcd(&c);
            let fac = w.exact_div(&y);
            if !fac.is_constant() {
                out.push((fac, i));
            }
            i += 1;
            w = y;
            c = c.exact_div(&w);
        }
        if !c.is_constant() {
            let h = c.lth_root_of_power().expect("remaining cofactor is an ℓ-th power");
            out.extend(h.squarefree_decomposition().into_iter().map(|(g, m)| (g, m * l)));
        }
        out
    }

    /// Distinct-degree factorization of a monic square-free polynomial:
    /// `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree(&self) -> Vec<(Poly<Fq>, usize)> {
        let field = self.field().clone();
        let q = q_big(&field);
        let x = Poly::x(&field);
        let mut rest = self.monic();
        let mut h = x.rem(&rest);
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            h = h.powmod(&q, &rest);
            let g = (&h - &x).gcd(&rest);
            if !g.is_constant() {
                rest = rest.exact_div(&g);
                h = h.rem(&rest);
                out.push((g, d));
            }
            d += 1;
        }
        if let Some(n) = rest.degree() {
            if n > 0 {
                out.push((rest, n));
            }
        }
        out
    }

    /// Splits a monic square-free product of irreducibles of degree `d`.
    pub fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<Fq>> {
        let n = self.degree().expect("nonzero");
        if n == d {
            return vec![self.monic()];
        }
        let field = self.field().clone();
        let q = field.order();
        loop {
            let a = random_poly(&field, n, rng);
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let g = a.gcd(self);
            let cand = if !g.is_constant() {
                g
            } else if q % 2 == 1 {
                let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
                let b = a.powmod(&e, self);
                (&b - &Poly::one(&field)).gcd(self)
            } else {
                // trace map to GF(2)
                let k = field.degree * d;
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..k {
                    t = (&t * &t).rem(self);
                    acc = &acc + &t;
                }
                acc.gcd(self)
            };
            let cd = cand.degree().unwrap_or(0);
            if cd > 0 && cd < n {
                let other = self.exact_div(&cand);
                let mut out = cand.equal_degree(d, rng);
                out.extend(other.equal_degree(d, rng));
                return out;
            }
        }
    }

    pub fn factor(&self) -> Result<Factorization> {
        self.factor_seeded(DEFAULT_FACTOR_SEED)
    }

    pub fn factor_seeded(&self, seed: u64) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut irreducibles: Vec<(Poly<Fq>, u32)> = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            for (block, d) in part.distinct_degree() {
                for g in block.equal_degree(d, &mut rng) {
                    match irreducibles.iter_mut().find(|(h, _)| *h == g) {
                        Some(entry) => entry.1 += mult,
                        None => irreducibles.push((g, mult)),
                    }
                }
            }
        }
        let mut linear_roots = Vec::new();
        let mut nonlinear = Vec::new();
        for (g, m) in irreducibles {
            if g.degree() == Some(1) {
                linear_roots.push((-g.coeff(0), m));
            } else {
                nonlinear.push((g, m));
            }
        }
        linear_roots.sort_by(|a, b| a.0.cmp(&b.0));
        nonlinear.sort_by(|(a, _), (b, _)| {
            a.degree().cmp(&b.degree()).then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
        });
        Ok(Factorization { unit: self.lc(), linear_roots, nonlinear, seed })
    }

    /// Distinct roots in the coefficient field, canonical order.
    pub fn roots(&self) -> Vec<Fq> {
        if self.is_zero() {
            return Vec::new();
        }
        let field = self.field().clone();
        let f = self.monic();
        let x = Poly::x(&field);
        let split = (&x.powmod(&q_big(&field), &f) - &x).gcd(&f);
        if split.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_FACTOR_SEED);
        let mut roots: Vec<Fq> = split.equal_degree(1, &mut rng).into_iter().map(|g| -g.coeff(0)).collect();
        roots.sort();
        roots
    }
}

fn random_poly(field: &GaloisField, below: usize, rng: &mut ChaCha8Rng) -> Poly<Fq> {
    let q = field.order();
    let coeffs = (0..below).map(|_| field.from_index(rng.gen_range(0..q))).collect();
    Poly::new(field.clone(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FqPoly;

    #[test]
    fn difference_of_squares() {
        let f5 = GaloisField::prime(5).unwrap();
        let fac = FqPoly::from_ints(&f5, &[-1, 0, 1]).factor().unwrap();
        assert_eq!(fac.unit, f5.one());
        assert_eq!(fac.linear_roots, vec![(f5.int(1), 1), (f5.int(4), 1)]);
        assert!(fac.nonlinear.is_empty());
    }

    #[test]
    fn progression_quadratic_mod_5() {
        let f5 = GaloisField::prime(5).unwrap();
        let fac = FqPoly::from_ints(&f5, &[4, 2, 3]).factor().unwrap();
        assert_eq!(fac.unit, f5.int(3));
        assert_eq!(fac.linear_roots, vec![(f5.int(2), 1), (f5.int(4), 1)]);
    }

    #[test]
    fn irreducible_quadratic_over_gf3() {
        let f3 = GaloisField::prime(3).unwrap();
        let p = FqPoly::from_ints(&f3, &[1, 0, 1]);
        let fac = p.factor().unwrap();
        assert_eq!(fac.t(), 0);
        assert_eq!(fac.nonlinear, vec![(p, 1)]);
        assert_eq!(fac.splitting_degree(), 2);
    }

    #[test]
    fn frobenius_power() {
        for l in [2u64, 3, 5, 7] {
            let f = GaloisField::prime(l).unwrap();
            for a in f.elements() {
                let mut c = vec![-a.clone()];
                c.resize(l as usize, f.zero());
                c.push(f.one());
                let fac = Poly::new(f.clone(), c).factor().unwrap();
                assert_eq!(fac.linear_roots, vec![(a.clone(), l as u32)]);
            }
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f5 = GaloisField::prime(5).unwrap();
        assert_eq!(Poly::<Fq>::zero(&f5).factor(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn inseparable_multiplicities() {
        // (X+1)^6 (X^2+1)^3 over GF(3): both multiplicities divisible by ℓ
        let f3 = GaloisField::prime(3).unwrap();
        let a = FqPoly::from_ints(&f3, &[1, 1]).pow(6);
        let b = FqPoly::from_ints(&f3, &[1, 0, 1]).pow(3);
        let p = &a * &b;
        let fac = p.factor().unwrap();
        assert_eq!(fac.linear_roots, vec![(f3.int(2), 6)]);
        assert_eq!(fac.nonlinear, vec![(FqPoly::from_ints(&f3, &[1, 0, 1]), 3)]);
        assert_eq!(fac.expand(), p);
    }

    #[test]
    fn irreducibility_counts() {
        // number of monic irreducible cubics over GF(3) is (27-3)/3 = 8
        let f3 = GaloisField::prime(3).unwrap();
        let count = (0..27u64)
            .filter(|i| FqPoly::from_ints(&f3, &[(i % 3) as i64, (i / 3 % 3) as i64, (i / 9) as i64, 1]).is_irreducible())
            .count();
        assert_eq!(count, 8);
    }

    #[test]
    fn roots_over_extension() {
        let f9 = GaloisField::new(3, 2, None).unwrap();
        let p = FqPoly::from_ints(&f9, &[1, 0, 1]);
        let roots = p.roots();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(p.eval(&r).is_zero());
        }
    }
}
