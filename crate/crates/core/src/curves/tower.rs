//! Class numbers in the constant `ℤ_p`-tower of a genus ≤ 1 function field.
//!
//! For genus one the class number over the degree-`m` constant extension
//! is `Q^m + 1 − a_m` with `a_0 = 2`, `a_m = a₁·a_{m−1} − Q·a_{m−2}`, which
//! equals `det(I − M^m)` for the companion matrix `M` of `x² − a₁x + Q`.
//! Reducing `M` modulo `q^K` gives a matrix of finite order, so the
//! residues of the level-`n` class numbers depend only on `p^n` modulo
//! that order; scanning one cycle of `p^n` yields the supremum of
//! `v_q(h_n)` once every residue in the cycle is nonzero.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{factor_u64, padic_valuation};

pub const DEFAULT_CYCLE_CAP: u64 = 1_000_000;
/// Largest `K` tried when escalating the modulus `q^K`.
pub const MAX_PRECISION: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    /// `Q = ℓ^s`
    pub field_size: u64,
    pub genus: u32,
    /// `a₁ = Q + 1 − #E(κ)` (zero for genus 0)
    pub trace: i64,
    /// `h_F`
    pub class_number: u64,
}

/// One level of the tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub p: u64,
    pub q: u64,
    pub levels: u32,
    /// `v_q(h_n)` for `n = 0..=levels`.
    pub vq_sequence: Vec<u32>,
    /// Proven supremum of `v_q(h_n)` over all `n ≥ 0` (only for `p ≠ q`).
    pub rigorous_bound: Option<u32>,
    /// Modulus exponent `K` at which the cycle scan succeeded.
    pub precision: Option<u32>,
    /// Number of distinct residues of `p^n` in the cycle.
    pub cycle_length: Option<u64>,
}

type Mat = [[BigInt; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat, m: Option<&BigInt>) -> Mat {
    let red = |x: BigInt| match m {
        Some(m) => x.mod_floor(m),
        None => x,
    };
    [
        [
            red(&a[0][0] * &b[0][0] + &a[0][1] * &b[1][0]),
            red(&a[0][0] * &b[0][1] + &a[0][1] * &b[1][1]),
        ],
        [
            red(&a[1][0] * &b[0][0] + &a[1][1] * &b[1][0]),
            red(&a[1][0] * &b[0][1] + &a[1][1] * &b[1][1]),
        ],
    ]
}

fn identity() -> Mat {
    [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]]
}

fn mat_pow(a: &Mat, e: &BigInt, m: Option<&BigInt>) -> Mat {
    let mut acc = identity();
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = mat_mul(&acc, &acc, m);
        if e.bit(i) {
            acc = mat_mul(&acc, a, m);
        }
    }
    acc
}

/// `det(I − A) = 1 − tr A + det A`.
fn det_one_minus(a: &Mat) -> BigInt {
    let tr = &a[0][0] + &a[1][1];
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    BigInt::one() - tr + det
}

impl FrobeniusData {
    pub fn rational(field_size: u64) -> Self {
        FrobeniusData { field_size, genus: 0, trace: 0, class_number: 1 }
    }

    pub fn elliptic(field_size: u64, point_count: u64) -> Self {
        let trace = field_size as i64 + 1 - point_count as i64;
        FrobeniusData { field_size, genus: 1, trace, class_number: point_count }
    }

    /// Hasse: `a₁² ≤ 4Q`.
    pub fn satisfies_hasse(&self) -> bool {
        (self.trace as i128).pow(2) <= 4 * self.field_size as i128
    }

    fn companion(&self) -> Mat {
        [
            [BigInt::zero(), BigInt::from(-(self.field_size as i64))],
            [BigInt::one(), BigInt::from(self.trace)],
        ]
    }

    /// `a_m` by the linear recurrence.
    pub fn trace_power(&self, m: u64) -> BigInt {
        let q = BigInt::from(self.field_size);
        let a1 = BigInt::from(self.trace);
        let (mut prev, mut cur) = (BigInt::from(2), a1.clone());
        if m == 0 {
            return prev;
        }
        for _ in 1..m {
            let next = &a1 * &cur - &q * &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Class number of `F·κ_m` (`m = 0` returns `h_F`).
    pub fn constant_ext_class_number(&self, m: u64) -> BigInt {
        if m == 0 || self.genus == 0 {
            return BigInt::from(self.class_number);
        }
        BigInt::from(self.field_size).pow(m as u32) + 1 - self.trace_power(m)
    }

    /// Same quantity as `det(I − M^m)` over `ℤ`.
    pub fn class_number_by_matrix(&self, m: u64) -> BigInt {
        if self.genus == 0 {
            return BigInt::one();
        }
        det_one_minus(&mat_pow(&self.companion(), &BigInt::from(m), None))
    }

    /// `h_n mod q^K` at tower level `n` (constant field degree `p^n`).
    fn level_residue(&self, p: u64, n: u32, modulus: &BigInt) -> BigInt {
        let e = BigInt::from(p).pow(n);
        det_one_minus(&mat_pow(&self.companion(), &e, Some(modulus))).mod_floor(modulus)
    }

    /// `v_q(h_n)` for level `n`, escalating the working precision until the
    /// residue is nonzero.
    pub fn level_valuation(&self, p: u64, q: u64, n: u32) -> Result<u32> {
        if self.genus == 0 {
            return Ok(0);
        }
        let mut k = 4u32;
        loop {
            let m = BigInt::from(q).pow(k);
            let r = self.level_residue(p, n, &m);
            if !r.is_zero() {
                return Ok(padic_valuation(&r, q));
            }
            k *= 2;
            if k > 4096 {
                return Err(Error::CycleCapExceeded(k as u64));
            }
        }
    }

    /// Order of `M` in `GL₂(ℤ/q^K)`.
    fn matrix_order(&self, q: u64, k: u32, modulus: &BigInt) -> Result<u128> {
        let qq = q as u128;
        let group = qq
            .checked_pow(4 * (k - 1))
            .and_then(|x| x.checked_mul((qq * qq - 1) * (qq * qq - qq)))
            .ok_or(Error::CycleCapExceeded(k as u64))?;
        let mut primes: Vec<u64> = factor_u64(q).into_iter().map(|f| f.0).collect();
        for (r, _) in factor_u64(q * q - 1) {
            primes.push(r);
        }
        primes.sort_unstable();
        primes.dedup();
        let m = self.companion();
        let mut ord = group;
        for r in primes {
            let r = r as u128;
            while ord % r == 0 && mat_pow(&m, &BigInt::from(ord / r), Some(modulus)) == identity() {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// Supremum of `v_q(h_n)` over all levels, `p ≠ q`, `q ∤ Q`.
    pub fn cycle_bound(&self, p: u64, q: u64, cycle_cap: u64) -> Result<(u32, u32, u64)> {
        if self.genus == 0 {
            return Ok((0, 0, 1));
        }
        let m = self.companion();
        for k in 1..=MAX_PRECISION {
            let modulus = BigInt::from(q).pow(k);
            let ord = self.matrix_order(q, k, &modulus)?;
            let mut seen = HashSet::new();
            let mut e = 1u128 % ord;
            while seen.insert(e) {
                if seen.len() as u64 > cycle_cap {
                    return Err(Error::CycleCapExceeded(cycle_cap));
                }
                e = e * p as u128 % ord;
            }
            let mut best = 0u32;
            let mut all_nonzero = true;
            for &e in &seen {
                let r = det_one_minus(&mat_pow(&m, &BigInt::from(e), Some(&modulus))).mod_floor(&modulus);
                if r.is_zero() {
                    all_nonzero = false;
                    break;
                }
                best = best.max(padic_valuation(&r, q));
            }
            if all_nonzero {
                return Ok((best, k, seen.len() as u64));
            }
        }
        Err(Error::CycleCapExceeded(MAX_PRECISION as u64))
    }

    /// `v_q` of the class number at levels `0..=levels` of the constant
    /// `ℤ_p`-tower, plus the proven supremum when `p ≠ q`.
    pub fn tower_qpart(&self, p: u64, q: u64, levels: u32, cycle_cap: u64) -> Result<TowerReport> {
        if self.field_size % q == 0 {
            return Err(Error::CharacteristicClash(q));
        }
        let vq_sequence = (0..=levels).map(|n| self.level_valuation(p, q, n)).collect::<Result<Vec<_>>>()?;
        let (rigorous_bound, precision, cycle_length) = if p != q {
            let (b, k, len) = self.cycle_bound(p, q, cycle_cap)?;
            (Some(b), Some(k), Some(len))
        } else {
            (None, None, None)
        };
        Ok(TowerReport { p, q, levels, vq_sequence, rigorous_bound, precision, cycle_length })
    }

    /// Exact class numbers at levels `0..=levels` (only sensible for small `p^levels`).
    pub fn level_class_numbers(&self, p: u64, levels: u32) -> Vec<BigInt> {
        (0..=levels)
            .map(|n| self.constant_ext_class_number(p.pow(n)))
            .collect()
    }
}

/// `v_q` of a positive integer given as a `u64`.
pub fn vq_u64(n: u64, q: u64) -> u32 {
    padic_valuation(&BigInt::from(n), q)
}
