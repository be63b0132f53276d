use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField};
use crate::poly::Embedding;
use crate::scalar::factor_u64;

/// `y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆` over `κ`; the point at
/// infinity is the degree-one place `P_∞`.
#[derive(Clone, PartialEq, Eq)]
pub struct EllipticModel {
    field: GaloisField,
    /// `[a₁, a₂, a₃, a₄, a₆]`
    a: [Fq; 5],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(Fq, Fq),
}

impl EllipticModel {
    pub fn new(field: &GaloisField, a: [Fq; 5]) -> Result<Self> {
        if a.iter().any(|c| c.field() != field) {
            return Err(Error::SpecMismatch);
        }
        let model = EllipticModel { field: field.clone(), a };
        if model.discriminant().is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(model)
    }

    pub fn from_ints(field: &GaloisField, a: [i64; 5]) -> Result<Self> {
        Self::new(field, a.map(|c| field.int(c)))
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn coefficients(&self) -> &[Fq; 5] {
        &self.a
    }

    pub fn discriminant(&self) -> Fq {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a.clone();
        let i = |n: i64| f.int(n);
        let b2 = a1.clone() * a1.clone() + i(4) * a2.clone();
        let b4 = i(2) * a4.clone() + a1.clone() * a3.clone();
        let b6 = a3.clone() * a3.clone() + i(4) * a6.clone();
        let b8 = a1.clone() * a1.clone() * a6.clone() + i(4) * a2.clone() * a6.clone()
            - a1 * a3.clone() * a4.clone()
            + a2 * a3.clone() * a3
            - a4.clone() * a4;
        -(b2.clone() * b2.clone() * b8) - i(8) * b4.clone() * b4.clone() * b4.clone() - i(27) * b6.clone() * b6.clone()
            + i(9) * b2 * b4 * b6
    }

    /// Right-hand side `x³ + a₂x² + a₄x + a₆`.
    pub fn rhs(&self, x: &Fq) -> Fq {
        let [_, a2, _, a4, a6] = self.a.clone();
        ((x.clone() + a2) * x.clone() + a4) * x.clone() + a6
    }

    /// `a₁x + a₃`.
    pub fn linear_term(&self, x: &Fq) -> Fq {
        self.a[0].clone() * x.clone() + self.a[2].clone()
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y.clone() * y.clone() + self.linear_term(x) * y.clone() == self.rhs(x),
        }
    }

    /// All `κ`-points, infinity first, then affine points in canonical order.
    pub fn points(&self, cap: u128) -> Result<Vec<CurvePoint>> {
        let q = self.field.order() as u128;
        if q * q > cap {
            return Err(Error::CapExceeded { count: q * q, cap });
        }
        let mut out = vec![CurvePoint::Infinity];
        for x in self.field.elements() {
            let r = self.rhs(&x);
            let lin = self.linear_term(&x);
            for y in self.field.elements() {
                if y.clone() * y.clone() + lin.clone() * y.clone() == r {
                    out.push(CurvePoint::Affine(x.clone(), y));
                }
            }
        }
        Ok(out)
    }

    pub fn count_points(&self, cap: u128) -> Result<(u64, Vec<CurvePoint>)> {
        let pts = self.points(cap)?;
        Ok((pts.len() as u64, pts))
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), -y.clone() - self.linear_term(x)),
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, _] = self.a.clone();
        let f = &self.field;
        if x1 == x2 && (y1.clone() + y2.clone() + self.linear_term(x2)).is_zero() {
            return CurvePoint::Infinity;
        }
        let lambda = if x1 == x2 {
            let num = f.int(3) * x1.clone() * x1.clone() + f.int(2) * a2.clone() * x1.clone() + a4
                - a1.clone() * y1.clone();
            let den = f.int(2) * y1.clone() + a1.clone() * x1.clone() + a3.clone();
            num / den
        } else {
            (y2.clone() - y1.clone()) / (x2.clone() - x1.clone())
        };
        let nu = y1.clone() - lambda.clone() * x1.clone();
        let x3 = lambda.clone() * lambda.clone() + a1.clone() * lambda.clone() - a2 - x1.clone() - x2.clone();
        let y3 = -(lambda + a1) * x3.clone() - nu - a3;
        CurvePoint::Affine(x3, y3)
    }

    pub fn mul(&self, p: &CurvePoint, mut k: u64) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        let mut base = p.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// Order of `p` in a group of exponent dividing `group_order`.
    pub fn point_order(&self, p: &CurvePoint, group_order: u64) -> u64 {
        let mut ord = group_order;
        for (r, _) in factor_u64(group_order) {
            while ord % r == 0 && self.mul(p, ord / r) == CurvePoint::Infinity {
                ord /= r;
            }
        }
        ord
    }

    /// Structure of `E(κ)`, isomorphic to the degree-zero class group.
    pub fn class_group_structure(&self, cap: u128) -> Result<ClassGroupInfo> {
        let (h, pts) = self.count_points(cap)?;
        let exponent = pts.iter().map(|p| self.point_order(p, h)).max().unwrap_or(1);
        let n1 = h / exponent;
        let invariant_factors = [n1, exponent].into_iter().filter(|&n| n > 1).collect();
        Ok(ClassGroupInfo { h, invariant_factors })
    }

    /// The same equation over a larger constant field.
    pub fn base_change(&self, emb: &Embedding) -> Result<EllipticModel> {
        if emb.source != self.field {
            return Err(Error::NoEmbedding);
        }
        EllipticModel::new(&emb.target, self.a.clone().map(|c| emb.apply(&c)))
    }

    /// `elliptic(GF(5); a=[0,0,0,1,1])`
    pub fn to_spec(&self) -> String {
        let a: Vec<String> = self.a.iter().map(|c| c.to_text()).collect();
        format!("elliptic({}; a=[{}])", self.field, a.join(","))
    }
}

impl fmt::Debug for EllipticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec())
    }
}

/// Degree-zero class group `ℤ/n₁ × ℤ/n₂` (`n₁ | n₂`); nontrivial factors only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupInfo {
    pub h: u64,
    pub invariant_factors: Vec<u64>,
}

impl ClassGroupInfo {
    pub fn trivial() -> Self {
        ClassGroupInfo { h: 1, invariant_factors: Vec::new() }
    }

    /// `h_F[N]`: cardinality of the `N`-torsion.
    pub fn torsion_card(&self, n: u64) -> u64 {
        use num_integer::Integer;
        self.invariant_factors.iter().map(|&m| m.gcd(&n)).product()
    }

    /// Least `k ≥ 1` with `h_F[q^k] = h_F[q^{k−1}]`.
    pub fn least_stable_k(&self, q: u64) -> u32 {
        let mut k = 1u32;
        let mut prev = 1u64;
        loop {
            let cur = self.torsion_card(q.pow(k));
            if cur == prev {
                return k;
            }
            prev = cur;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> EllipticModel {
        let f5 = GaloisField::prime(5).unwrap();
        EllipticModel::from_ints(&f5, [0, 0, 0, 1, 1]).unwrap()
    }

    #[test]
    fn point_counts() {
        let (n, pts) = curve().count_points(1 << 20).unwrap();
        assert_eq!(n, 9);
        assert!(pts.iter().all(|p| curve().contains(p)));
        let f3 = GaloisField::prime(3).unwrap();
        let e = EllipticModel::from_ints(&f3, [0, 0, 0, -1, 0]).unwrap();
        assert_eq!(e.count_points(1000).unwrap().0, 4);
    }

    #[test]
    fn singular_rejected() {
        let f5 = GaloisField::prime(5).unwrap();
        // y^2 = x^3
        assert_eq!(EllipticModel::from_ints(&f5, [0, 0, 0, 0, 0]).unwrap_err(), Error::SingularModel);
    }

    #[test]
    fn group_law_axioms() {
        let e = curve();
        let pts = e.points(1 << 20).unwrap();
        for p in &pts {
            assert_eq!(e.add(p, &e.neg(p)), CurvePoint::Infinity);
            for q in &pts {
                let s = e.add(p, q);
                assert!(e.contains(&s));
                assert_eq!(s, e.add(q, p));
                for r in pts.iter().take(4) {
                    assert_eq!(e.add(&s, r), e.add(p, &e.add(q, r)));
                }
            }
        }
    }

    #[test]
    fn structure_of_nine_point_group() {
        let e = curve();
        let info = e.class_group_structure(1 << 20).unwrap();
        assert_eq!(info.h, 9);
        // oracle: count points killed by 3 directly
        let pts = e.points(1 << 20).unwrap();
        let three_torsion = pts.iter().filter(|p| e.mul(p, 3) == CurvePoint::Infinity).count() as u64;
        assert_eq!(info.torsion_card(3), three_torsion);
        assert_eq!(info.torsion_card(1), 1);
    }

    #[test]
    fn torsion_and_stable_k() {
        let cyc9 = ClassGroupInfo { h: 9, invariant_factors: vec![9] };
        assert_eq!(cyc9.torsion_card(3), 3);
        assert_eq!(cyc9.torsion_card(9), 9);
        assert_eq!(cyc9.torsion_card(27), 9);
        assert_eq!(cyc9.least_stable_k(3), 3);
        assert_eq!(cyc9.least_stable_k(2), 1);
        let c33 = ClassGroupInfo { h: 9, invariant_factors: vec![3, 3] };
        assert_eq!(c33.torsion_card(3), 9);
        assert_eq!(c33.least_stable_k(3), 2);
        let triv = ClassGroupInfo::trivial();
        assert_eq!(triv.torsion_card(12345), 1);
        assert_eq!(triv.least_stable_k(3), 1);
    }
}
