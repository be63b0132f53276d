//! The ring `𝒪_F = κ[x, y]` of functions on an elliptic curve with poles
//! only at `P_∞`, in the canonical form `a(x) + b(x)·y`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::EllipticModel;
use crate::error::{Error, Result};
use crate::fields::Fq;
use crate::poly::{Algebra, Poly};

#[derive(Clone)]
pub struct EllipticElement {
    model: Arc<EllipticModel>,
    a: Poly<Fq>,
    b: Poly<Fq>,
}

impl EllipticElement {
    pub fn new(model: &Arc<EllipticModel>, a: Poly<Fq>, b: Poly<Fq>) -> Self {
        assert!(a.field() == model.field() && b.field() == model.field(), "coefficients outside the curve's field");
        EllipticElement { model: model.clone(), a, b }
    }

    pub fn constant(model: &Arc<EllipticModel>, c: Fq) -> Self {
        let f = model.field();
        Self::new(model, Poly::constant(c), Poly::zero(f))
    }

    pub fn x(model: &Arc<EllipticModel>) -> Self {
        let f = model.field();
        Self::new(model, Poly::x(f), Poly::zero(f))
    }

    pub fn y(model: &Arc<EllipticModel>) -> Self {
        let f = model.field();
        Self::new(model, Poly::zero(f), Poly::one(f))
    }

    /// `c · x^i · y^j`, `j ∈ {0, 1}`.
    pub fn monomial(model: &Arc<EllipticModel>, c: Fq, i: usize, j: u32) -> Self {
        let f = model.field();
        let m = Poly::monomial(c, i);
        match j {
            0 => Self::new(model, m, Poly::zero(f)),
            1 => Self::new(model, Poly::zero(f), m),
            _ => panic!("y-exponent must be 0 or 1"),
        }
    }

    pub fn model(&self) -> &Arc<EllipticModel> {
        &self.model
    }

    /// The `y⁰` and `y¹` parts.
    pub fn parts(&self) -> (&Poly<Fq>, &Poly<Fq>) {
        (&self.a, &self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_constant() && self.b.is_zero()
    }

    /// Pole order at `P_∞`: `max(2·deg a, 2·deg b + 3)`.
    pub fn pole_order(&self) -> Result<u64> {
        let pa = self.a.degree().map(|d| 2 * d as u64);
        let pb = self.b.degree().map(|d| 2 * d as u64 + 3);
        pa.max(pb).ok_or(Error::ZeroPolynomial)
    }

    pub fn scale(&self, c: &Fq) -> Self {
        Self::new(&self.model, self.a.scale(c), self.b.scale(c))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(&self.model, self.model.field().one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.model, &other.model) || self.model == other.model,
            "elements of different curves"
        );
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Self::new(&self.model, &self.a - &rhs.a, &self.b - &rhs.b)
    }

    pub fn to_text(&self) -> String {
        let mut terms = Vec::new();
        let deg = self.a.degree().unwrap_or(0).max(self.b.degree().unwrap_or(0));
        for i in (0..=deg).rev() {
            for (p, j) in [(&self.b, 1), (&self.a, 0)] {
                let c = p.coeff(i);
                if c.is_zero() {
                    continue;
                }
                let mut mono = Vec::new();
                match i {
                    0 => {}
                    1 => mono.push("x".to_string()),
                    _ => mono.push(format!("x^{i}")),
                }
                if j == 1 {
                    mono.push("y".into());
                }
                let cs = c.to_text();
                let cs = if cs.contains(['+', '-']) && !mono.is_empty() { format!("({cs})") } else { cs };
                terms.push(match (mono.is_empty(), c.is_one()) {
                    (true, _) => cs,
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{cs}*{}", mono.join("*")),
                });
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl Algebra<Fq> for EllipticElement {
    fn constant_like(&self, c: &Fq) -> Self {
        Self::constant(&self.model, c.clone())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Self::new(&self.model, &self.a + &rhs.a, &self.b + &rhs.b)
    }

    /// Uses `y² = F(x) − L(x)·y` with `F = x³ + a₂x² + a₄x + a₆`,
    /// `L = a₁x + a₃`.
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let [a1, a2, a3, a4, a6] = self.model.coefficients().clone();
        let one = self.model.field().one();
        let f = Poly::new(self.model.field().clone(), vec![a6, a4, a2, one]);
        let l = Poly::new(self.model.field().clone(), vec![a3, a1]);
        let bb = &self.b * &rhs.b;
        let a = &(&self.a * &rhs.a) + &(&bb * &f);
        let b = &(&(&self.a * &rhs.b) + &(&self.b * &rhs.a)) - &(&bb * &l);
        Self::new(&self.model, a, b)
    }
}

impl PartialEq for EllipticElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && *self.model == *other.model
    }
}

impl Eq for EllipticElement {}

impl Hash for EllipticElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for p in [&self.a, &self.b] {
            p.coeffs().len().hash(state);
            for c in p.coeffs() {
                c.hash(state);
            }
        }
    }
}

impl fmt::Debug for EllipticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Basis `{x^i y^j : j ∈ {0,1}, 2i + 3j ≤ bound}` as `(i, j)`, by pole order.
pub fn integer_basis(bound: u64) -> Vec<(usize, u32)> {
    let mut out: Vec<(usize, u32)> = Vec::new();
    for j in 0..=1u32 {
        let mut i = 0usize;
        while 2 * i as u64 + 3 * j as u64 <= bound {
            out.push((i, j));
            i += 1;
        }
    }
    out.sort_by_key(|&(i, j)| 2 * i as u64 + 3 * j as u64);
    out
}

/// Every element of `𝒪_F` with pole order at most `bound`, each once.
pub fn ring_of_integers_enumerate(model: &Arc<EllipticModel>, bound: u64, cap: u128) -> Result<IntegerElements> {
    let basis = integer_basis(bound);
    let q = model.field().order() as u128;
    let count = q.checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    Ok(IntegerElements { model: model.clone(), basis, next: 0, end: count })
}

pub struct IntegerElements {
    model: Arc<EllipticModel>,
    basis: Vec<(usize, u32)>,
    next: u128,
    end: u128,
}

impl IntegerElements {
    pub fn len(&self) -> u128 {
        self.end - self.next
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn basis(&self) -> &[(usize, u32)] {
        &self.basis
    }

    pub fn nth_candidate(&self, mut index: u128) -> EllipticElement {
        let field = self.model.field();
        let q = field.order() as u128;
        let mut a = vec![field.zero(); self.basis.len() + 1];
        let mut b = a.clone();
        for &(i, j) in &self.basis {
            let digit = (index % q) as u64;
            index /= q;
            let c = field.from_index(digit);
            if j == 0 {
                a[i] = c;
            } else {
                b[i] = c;
            }
        }
        EllipticElement::new(&self.model, Poly::new(field.clone(), a), Poly::new(field.clone(), b))
    }
}

impl Iterator for IntegerElements {
    type Item = EllipticElement;
    fn next(&mut self) -> Option<EllipticElement> {
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
    use crate::fields::GaloisField;

    fn model() -> Arc<EllipticModel> {
        let f5 = GaloisField::prime(5).unwrap();
        Arc::new(EllipticModel::from_ints(&f5, [0, 0, 0, 1, 1]).unwrap())
    }

    #[test]
    fn pole_orders() {
        let m = model();
        let (x, y) = (EllipticElement::x(&m), EllipticElement::y(&m));
        assert_eq!(x.pole_order().unwrap(), 2);
        assert_eq!(y.pole_order().unwrap(), 3);
        assert_eq!(x.pow(2).mul_ref(&y).pole_order().unwrap(), 7);
        assert_eq!(y.pow(2).pole_order().unwrap(), 6);
        let one = EllipticElement::constant(&m, m.field().one());
        assert_eq!(one.pole_order().unwrap(), 0);
        let zero = EllipticElement::constant(&m, m.field().zero());
        assert_eq!(zero.pole_order(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn weierstrass_relation() {
        let m = model();
        let (x, y) = (EllipticElement::x(&m), EllipticElement::y(&m));
        let f = m.field();
        let rhs = x.pow(3).add_ref(&x).add_ref(&EllipticElement::constant(&m, f.one()));
        assert_eq!(y.pow(2), rhs);
        // general model with a1, a3 nonzero
        let f7 = GaloisField::prime(7).unwrap();
        let g = Arc::new(EllipticModel::from_ints(&f7, [1, 2, 3, 4, 5]).unwrap());
        let (x, y) = (EllipticElement::x(&g), EllipticElement::y(&g));
        let lhs = y.pow(2).add_ref(&x.mul_ref(&y)).add_ref(&y.scale(&f7.int(3)));
        let c = |n| EllipticElement::constant(&g, f7.int(n));
        let rhs = x.pow(3).add_ref(&x.pow(2).scale(&f7.int(2))).add_ref(&x.scale(&f7.int(4))).add_ref(&c(5));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn enumeration_sizes() {
        let m = model();
        assert_eq!(integer_basis(1), vec![(0, 0)]);
        assert_eq!(ring_of_integers_enumerate(&m, 3, 1 << 20).unwrap().count(), 125);
        let b7: Vec<u64> = integer_basis(7).iter().map(|&(i, j)| 2 * i as u64 + 3 * j as u64).collect();
        assert_eq!(b7, vec![0, 2, 3, 4, 5, 6, 7]);
        assert!(ring_of_integers_enumerate(&m, 20, 1000).is_err());
    }

    #[test]
    fn text() {
        let m = model();
        let (x, y) = (EllipticElement::x(&m), EllipticElement::y(&m));
        let e = x.pow(2).add_ref(&y.scale(&m.field().int(3))).add_ref(&x.mul_ref(&y));
        assert_eq!(e.to_text(), "x^2+x*y+3*y");
    }
}
