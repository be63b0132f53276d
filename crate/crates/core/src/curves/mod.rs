//! Function-field backends: the rational field `κ(T)` and elliptic
//! function fields with a rational point at infinity.

mod elliptic;
mod integers;
mod tower;

use std::fmt;

pub use elliptic::{ClassGroupInfo, CurvePoint, EllipticModel};
pub use integers::{integer_basis, ring_of_integers_enumerate, EllipticElement, IntegerElements};
pub use tower::{vq_u64, FrobeniusData, TowerReport, DEFAULT_CYCLE_CAP, MAX_PRECISION};

use crate::error::{Error, Result};
use crate::fields::GaloisField;
use crate::parse::{parse_element, parse_field, split_top_level};
use crate::poly::Embedding;

#[derive(Clone, PartialEq)]
pub enum CurveBackend {
    /// `F = κ(T)`, `𝒪_F = κ[T]`, genus 0.
    Rational(GaloisField),
    Elliptic(EllipticModel),
}

impl CurveBackend {
    pub fn field(&self) -> &GaloisField {
        match self {
            CurveBackend::Rational(f) => f,
            CurveBackend::Elliptic(m) => m.field(),
        }
    }

    pub fn genus(&self) -> u32 {
        match self {
            CurveBackend::Rational(_) => 0,
            CurveBackend::Elliptic(_) => 1,
        }
    }

    pub fn class_group(&self, cap: u128) -> Result<ClassGroupInfo> {
        match self {
            CurveBackend::Rational(_) => Ok(ClassGroupInfo::trivial()),
            CurveBackend::Elliptic(m) => m.class_group_structure(cap),
        }
    }

    pub fn frobenius(&self, cap: u128) -> Result<FrobeniusData> {
        match self {
            CurveBackend::Rational(f) => Ok(FrobeniusData::rational(f.order())),
            CurveBackend::Elliptic(m) => Ok(FrobeniusData::elliptic(m.field().order(), m.count_points(cap)?.0)),
        }
    }

    pub fn base_change(&self, emb: &Embedding) -> Result<CurveBackend> {
        match self {
            CurveBackend::Rational(f) if *f == emb.source => Ok(CurveBackend::Rational(emb.target.clone())),
            CurveBackend::Rational(_) => Err(Error::NoEmbedding),
            CurveBackend::Elliptic(m) => Ok(CurveBackend::Elliptic(m.base_change(emb)?)),
        }
    }

    /// `rational(GF(5))` or `elliptic(GF(5); a=[0,0,0,1,1])`.
    pub fn to_spec(&self) -> String {
        match self {
            CurveBackend::Rational(f) => format!("rational({f})"),
            CurveBackend::Elliptic(m) => m.to_spec(),
        }
    }

    pub fn ring_name(&self) -> &'static str {
        match self {
            CurveBackend::Rational(_) => "rational",
            CurveBackend::Elliptic(_) => "elliptic",
        }
    }
}

impl fmt::Debug for CurveBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec())
    }
}

/// Parses the curve spec grammar produced by [`CurveBackend::to_spec`].
pub fn parse_curve(s: &str) -> Result<CurveBackend> {
    let t = s.trim();
    let bad = || Error::Parse(format!("curve spec {s:?} must be rational(GF(..)) or elliptic(GF(..); a=[..])"));
    if let Some(inner) = t.strip_prefix("rational(").and_then(|r| r.strip_suffix(')')) {
        return Ok(CurveBackend::Rational(parse_field(inner)?));
    }
    let inner = t.strip_prefix("elliptic(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let pos = inner.rfind("a=").ok_or_else(bad)?;
    let field_part = inner[..pos].trim().strip_suffix(';').ok_or_else(bad)?;
    let field = parse_field(field_part)?;
    let list = inner[pos + 2..].trim();
    let body = list.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    let coeffs = split_top_level(body)
        .iter()
        .map(|c| parse_element(&field, c))
        .collect::<Result<Vec<_>>>()?;
    let a: [_; 5] = coeffs
        .try_into()
        .map_err(|_| Error::Parse("an elliptic model needs exactly five coefficients a1,a2,a3,a4,a6".into()))?;
    Ok(CurveBackend::Elliptic(EllipticModel::new(&field, a)?))
}
