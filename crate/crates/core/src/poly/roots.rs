//! Perfect-power extraction and constant-field base change.

use super::{FqPoly, Poly};
use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField};

impl Poly<Fq> {
    /// Some `Y` with `Y^n = self`, or `None`. The leading coefficient of `Y`
    /// is the canonical root from [`Fq::nth_root`].
    pub fn nth_root(&self, n: u64) -> Option<Poly<Fq>> {
        assert!(n >= 1, "root index must be positive");
        let root = self.nth_root_unchecked(n)?;
        (root.pow(n) == *self).then_some(root)
    }

    fn nth_root_unchecked(&self, n: u64) -> Option<Poly<Fq>> {
        let field = self.field().clone();
        if self.is_zero() || n == 1 {
            return Some(self.clone());
        }
        let l = field.characteristic;
        if n % l == 0 {
            return self.lth_root_of_power()?.nth_root_unchecked(n / l);
        }
        let deg = self.degree().unwrap();
        if deg as u64 % n != 0 {
            return None;
        }
        let e = deg / n as usize;
        let lead = self.lc().nth_root(n)?;
        let denom = (field.int((n % l) as i64) * lead.pow(n - 1)).inverse()?;
        let mut y = Poly::monomial(lead, e);
        for i in 1..=e {
            let power = y.pow(n);
            let target = deg - i;
            let c = self.coeff(target) - power.coeff(target);
            if !c.is_zero() {
                y = &y + &Poly::monomial(c * denom.clone(), e - i);
            }
        }
        Some(y)
    }

    /// Coefficientwise image under `emb`.
    pub fn base_change(&self, emb: &Embedding) -> Result<Poly<Fq>> {
        if *self.field() != emb.source {
            return Err(Error::NoEmbedding);
        }
        Ok(self.map(&emb.target, |c| emb.apply(c)))
    }
}

/// Field embedding `GF(ℓ^s) → GF(ℓ^S)`, `s | S`, fixed by the image of
/// the source generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub source: GaloisField,
    pub target: GaloisField,
    pub generator_image: Fq,
}

impl Embedding {
    /// Sends the source generator to the smallest root of its modulus in
    /// the target.
    pub fn find(source: &GaloisField, target: &GaloisField) -> Result<Embedding> {
        if !target.extends(source) {
            return Err(Error::NoEmbedding);
        }
        let generator_image = if source.degree == 1 {
            target.zero()
        } else {
            let m = FqPoly::from_ints(target, &source.modulus.iter().map(|&c| c as i64).collect::<Vec<_>>());
            m.roots().into_iter().next().ok_or(Error::NoEmbedding)?
        };
        Ok(Embedding { source: source.clone(), target: target.clone(), generator_image })
    }

    pub fn identity(field: &GaloisField) -> Embedding {
        Embedding { source: field.clone(), target: field.clone(), generator_image: field.generator() }
    }

    pub fn apply(&self, a: &Fq) -> Fq {
        assert!(*a.field() == self.source, "element outside the embedding's source");
        let mut acc = self.target.zero();
        for &c in a.coeffs().iter().rev() {
            acc = acc * self.generator_image.clone() + self.target.int(c as i64);
        }
        acc
    }
}
