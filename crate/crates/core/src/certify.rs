//! Hypothesis checkers that turn the constancy criteria into certificates.
//!
//! A certificate records every hypothesis with its status and a witness
//! string; its conclusion is `only_constant_solutions` exactly when every
//! hypothesis is satisfied. Certificates are declarative: they never
//! consult the search oracle.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::curves::{CurveBackend, DEFAULT_CYCLE_CAP};
use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField, DEFAULT_ENUM_CAP};
use crate::poly::{integer_poly_discriminant, Embedding, Factorization, Poly, DEFAULT_FACTOR_SEED};
use crate::scalar::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Satisfied,
    Violated,
    NotChecked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Hypothesis {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Satisfied } else { Status::Violated };
        Hypothesis { name: name.into(), status, detail: detail.into() }
    }

    fn not_checked(name: &str, detail: impl Into<String>) -> Self {
        Hypothesis { name: name.into(), status: Status::NotChecked, detail: detail.into() }
    }
}

pub const H1: &str = "H1_q_ne_characteristic";
pub const H2: &str = "H2_splits_over_constants";
pub const H3: &str = "H3_at_least_two_distinct_roots";
pub const H4: &str = "H4_two_exponents_coprime_to_q";
pub const H_P_COPRIME: &str = "H5_p_does_not_divide_class_number";
pub const H_TOWER: &str = "H5_tower_q_part_bounded";
pub const P1: &str = "P1_roots_in_constants";
pub const P2: &str = "P2_characteristic_does_not_divide_step";
pub const P3: &str = "P3_discriminant_or_congruence";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `Y^{q^k} = f(X)` over `𝒪_F`, `k` from the `q`-torsion of the class group.
    ConstancyCriterion,
    /// Constant `ℤ_p`-tower, `p ≠ q`, `k` from the bounded `q`-part.
    TowerBoundedQPart,
    /// Constant `ℤ_p`-tower, exponent `p`, `p ∤ h_F`.
    TowerPCoprime,
    /// `Y^q = f(X)` over `K[T_1, …, T_r]`.
    PolynomialRing,
    /// `f` a sum of `m`-th powers along an arithmetic progression.
    Progression,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    OnlyConstantSolutions,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub field: String,
    /// `f` in the variable `X`.
    pub f: String,
    /// The exponent `n` in `Y^n = f(X)`, in decimal.
    pub n: String,
    pub q: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingKind {
    Rational,
    Elliptic,
    Tower,
    Multivariate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    pub kind: RingKind,
    pub spec: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChange {
    pub from: String,
    pub to: String,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSummary {
    pub p: u64,
    pub q: u64,
    pub levels: u32,
    pub vq_sequence: Vec<u32>,
    pub rigorous_bound: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionSummary {
    pub m: u32,
    pub d: u32,
    pub r: u64,
    pub l: u64,
    pub f_integer: String,
    pub discriminant: String,
    pub discriminant_mod_l: u64,
    /// `"P3a"`, `"P3b"` or `null` when neither holds.
    pub route: Option<String>,
    /// Whether `(d+1)/4 = (2d+1)/6` holds mod `ℓ`, the relation forced by
    /// `f ≡ d(X+a)^m`.
    pub single_root_relation: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub equation: Equation,
    pub ring: Ring,
    pub theorem: Theorem,
    pub k: Option<u32>,
    pub hypotheses: Vec<Hypothesis>,
    pub conclusion: Conclusion,
    pub base_change: Option<BaseChange>,
    pub tower: Option<TowerSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub progression: Option<ProgressionSummary>,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.conclusion == Conclusion::OnlyConstantSolutions
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    /// Names of the hypotheses that failed.
    pub fn violated(&self) -> Vec<&str> {
        self.hypotheses
            .iter()
            .filter(|h| h.status != Status::Satisfied)
            .map(|h| h.name.as_str())
            .collect()
    }

    fn conclude(&mut self) {
        let ok = self.hypotheses.iter().all(|h| h.status == Status::Satisfied);
        self.conclusion = if ok { Conclusion::OnlyConstantSolutions } else { Conclusion::NotCertified };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Pass to the splitting field of `f` when it does not split over `κ`.
    pub base_change: bool,
    /// Cap on point enumeration for elliptic class groups.
    pub cap: u128,
    pub cycle_cap: u64,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { base_change: false, cap: DEFAULT_ENUM_CAP, cycle_cap: DEFAULT_CYCLE_CAP, seed: DEFAULT_FACTOR_SEED }
    }
}

fn exponent_text(q: u64, k: u32) -> String {
    BigUint::from(q).pow(k).to_string()
}

fn roots_text(fac: &Factorization) -> String {
    let parts: Vec<String> = fac.linear_roots.iter().map(|(a, n)| format!("(X-{})^{n}", a.to_text())).collect();
    format!("{} * {}", fac.unit.to_text(), if parts.is_empty() { "1".into() } else { parts.join("*") })
}

/// Factorization of `f` over `κ`, or over its splitting field when
/// `base_change` is requested and `f` does not split.
struct Analysis {
    fac: Factorization,
    embedding: Option<Embedding>,
}

fn analyze(f: &Poly<Fq>, opts: &CertifyOptions) -> Result<Analysis> {
    let fac = f.factor_seeded(opts.seed)?;
    if fac.splits() || !opts.base_change {
        return Ok(Analysis { fac, embedding: None });
    }
    let field = f.field();
    let deg = fac.splitting_degree();
    let target = GaloisField::new(field.characteristic, field.degree * deg, None)?;
    let emb = Embedding::find(field, &target)?;
    let fac = f.base_change(&emb)?.factor_seeded(opts.seed)?;
    debug_assert!(fac.splits());
    Ok(Analysis { fac, embedding: Some(emb) })
}

fn base_change_record(emb: &Embedding) -> BaseChange {
    BaseChange { from: emb.source.to_string(), to: emb.target.to_string(), degree: emb.target.degree / emb.source.degree }
}

fn q_hypothesis(q: u64, l: u64) -> Hypothesis {
    Hypothesis::new(H1, q != l, format!("q = {q}, characteristic = {l}"))
}

/// `H2`–`H4` read off a factorization.
fn split_hypotheses(fac: &Factorization, q: u64) -> Vec<Hypothesis> {
    let h2 = if fac.splits() {
        Hypothesis::new(H2, true, format!("f = {} over {}", roots_text(fac), fac.field()))
    } else {
        let non: Vec<String> = fac
            .nonlinear
            .iter()
            .map(|(g, m)| format!("({})^{m}", g.to_text("X")))
            .collect();
        Hypothesis::new(
            H2,
            false,
            format!("irreducible factors of degree >= 2 over {}: {}", fac.field(), non.join(", ")),
        )
    };
    let t = fac.t();
    let h3 = Hypothesis::new(H3, t >= 2, format!("t = {t}"));
    let exps: Vec<u32> = fac.linear_roots.iter().map(|r| r.1).collect();
    let coprime = exps.iter().filter(|&&n| n as u64 % q != 0).count();
    let h4 = Hypothesis::new(H4, coprime >= 2, format!("exponents {exps:?}; {coprime} not divisible by {q}"));
    vec![h2, h3, h4]
}

fn check_prime(n: u64, what: &str) -> Result<()> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{what} = {n} must be prime")))
    }
}

fn check_field(backend_field: &GaloisField, f: &Poly<Fq>) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.field() != backend_field {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

/// Constancy criterion over `𝒪_F`: `Y^{q^k} = f(X)` with `k` the least
/// integer such that `h_F[q^k] = h_F[q^{k−1}]`.
pub fn check_constancy_criterion(backend: &CurveBackend, f: &Poly<Fq>, q: u64, opts: &CertifyOptions) -> Result<Certificate> {
    check_prime(q, "q")?;
    check_field(backend.field(), f)?;
    let l = backend.field().characteristic;
    let an = analyze(f, opts)?;
    let effective = match &an.embedding {
        Some(emb) => backend.base_change(emb)?,
        None => backend.clone(),
    };
    let info = effective.class_group(opts.cap)?;
    let k = info.least_stable_k(q);
    let mut hypotheses = vec![q_hypothesis(q, l)];
    hypotheses.extend(split_hypotheses(&an.fac, q));
    let mut cert = Certificate {
        equation: Equation { field: backend.field().to_string(), f: f.to_text("X"), n: exponent_text(q, k), q },
        ring: Ring {
            kind: match backend {
                CurveBackend::Rational(_) => RingKind::Rational,
                CurveBackend::Elliptic(_) => RingKind::Elliptic,
            },
            spec: backend.to_spec(),
        },
        theorem: Theorem::ConstancyCriterion,
        k: Some(k),
        hypotheses,
        conclusion: Conclusion::NotCertified,
        base_change: an.embedding.as_ref().map(base_change_record),
        tower: None,
        progression: None,
    };
    cert.conclude();
    Ok(cert)
}

/// Constancy in the constant `ℤ_p`-tower. For `p ≠ q` the exponent is
/// `q^{V+1}` where `V` is the proven supremum of `v_q(h_n)`; for `p = q` it
/// is `p`, provided `p ∤ h_F`.
pub fn check_tower(
    backend: &CurveBackend,
    f: &Poly<Fq>,
    p: u64,
    q: u64,
    levels: u32,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    check_prime(p, "p")?;
    check_prime(q, "q")?;
    check_field(backend.field(), f)?;
    let l = backend.field().characteristic;
    let an = analyze(f, opts)?;
    let effective = match &an.embedding {
        Some(emb) => backend.base_change(emb)?,
        None => backend.clone(),
    };
    let mut hypotheses = vec![q_hypothesis(q, l)];
    hypotheses.extend(split_hypotheses(&an.fac, q));
    let frob = effective.frobenius(opts.cap)?;
    let (theorem, k, tower) = if q == l {
        hypotheses.push(Hypothesis::not_checked(
            if p == q { H_P_COPRIME } else { H_TOWER },
            "skipped: q equals the characteristic",
        ));
        (if p == q { Theorem::TowerPCoprime } else { Theorem::TowerBoundedQPart }, None, None)
    } else if p != q {
        let rep = frob.tower_qpart(p, q, levels, opts.cycle_cap)?;
        let bound = rep.rigorous_bound.expect("p ≠ q yields a bound");
        hypotheses.push(Hypothesis::new(
            H_TOWER,
            true,
            format!(
                "sup over n of v_{q}(h_n) = {bound} (cycle of {} residues of {p}^n, modulus {q}^{})",
                rep.cycle_length.unwrap_or(0),
                rep.precision.unwrap_or(0)
            ),
        ));
        let summary = TowerSummary {
            p,
            q,
            levels,
            vq_sequence: rep.vq_sequence,
            rigorous_bound: Some(bound),
        };
        (Theorem::TowerBoundedQPart, Some(bound + 1), Some(summary))
    } else {
        let h = frob.class_number;
        hypotheses.push(Hypothesis::new(H_P_COPRIME, h % p != 0, format!("h_F = {h}, p = {p}")));
        let rep = frob.tower_qpart(p, q, levels, opts.cycle_cap)?;
        let summary = TowerSummary { p, q, levels, vq_sequence: rep.vq_sequence, rigorous_bound: None };
        (Theorem::TowerPCoprime, Some(1), Some(summary))
    };
    let n = match k {
        Some(k) => exponent_text(q, k),
        None => format!("{q}^k"),
    };
    let mut cert = Certificate {
        equation: Equation { field: backend.field().to_string(), f: f.to_text("X"), n, q },
        ring: Ring { kind: RingKind::Tower, spec: format!("tower(p={p}; {})", backend.to_spec()) },
        theorem,
        k,
        hypotheses,
        conclusion: Conclusion::NotCertified,
        base_change: an.embedding.as_ref().map(base_change_record),
        tower,
        progression: None,
    };
    cert.conclude();
    Ok(cert)
}

/// Constancy of `Y^q = f(X)` over `K[T_1, …, T_r]` (trivial class group,
/// independent of `r`).
pub fn check_polynomial_ring(field: &GaloisField, f: &Poly<Fq>, q: u64, nvars: usize, opts: &CertifyOptions) -> Result<Certificate> {
    check_prime(q, "q")?;
    check_field(field, f)?;
    if nvars == 0 {
        return Err(Error::Invalid("at least one variable required".into()));
    }
    let an = analyze(f, opts)?;
    let mut hypotheses = vec![q_hypothesis(q, field.characteristic)];
    hypotheses.extend(split_hypotheses(&an.fac, q));
    let vars: Vec<String> = (1..=nvars).map(|i| format!("T{i}")).collect();
    let mut cert = Certificate {
        equation: Equation { field: field.to_string(), f: f.to_text("X"), n: q.to_string(), q },
        ring: Ring { kind: RingKind::Multivariate, spec: format!("{field}[{}]", vars.join(",")) },
        theorem: Theorem::PolynomialRing,
        k: Some(1),
        hypotheses,
        conclusion: Conclusion::NotCertified,
        base_change: an.embedding.as_ref().map(base_change_record),
        tower: None,
        progression: None,
    };
    cert.conclude();
    Ok(cert)
}

/// `Y^n = Σ_{i=1}^{d} (X + i·r)^m` over a field of characteristic `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionParams {
    pub m: u32,
    pub d: u32,
    pub r: u64,
    pub l: u64,
    pub q: u64,
}

impl ProgressionParams {
    pub fn new(m: u32, d: u32, r: u64, l: u64, q: u64) -> Result<Self> {
        if m < 2 || d < 2 || r < 1 {
            return Err(Error::Invalid("need m >= 2, d >= 2, r >= 1".into()));
        }
        if !is_prime(l) || l < 5 {
            return Err(Error::Invalid(format!("characteristic {l} must be a prime >= 5")));
        }
        check_prime(q, "q")?;
        if q == l {
            return Err(Error::CharacteristicClash(q));
        }
        Ok(ProgressionParams { m, d, r, l, q })
    }
}

/// One row of the expansion `coeff(X^{m−j}) = C(m,j)·r^j·S_j(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub j: u32,
    pub binomial: String,
    pub r_power: String,
    pub power_sum: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressionPoly {
    pub integer: Poly<BigInt>,
    pub reduced: Poly<Fq>,
    pub table: Vec<CoefficientRow>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σ_{i=1}^{d} (X + i·r)^m` by direct expansion.
pub fn progression_by_expansion(m: u32, d: u32, r: u64) -> Poly<BigInt> {
    let mut acc = Poly::<BigInt>::zero(&());
    for i in 1..=d as u64 {
        let lin = Poly::new((), vec![BigInt::from(i * r), BigInt::from(1)]);
        acc = &acc + &lin.pow(m as u64);
    }
    acc
}

/// The same polynomial from `C(m,j)·r^j·S_j(d)`, `S_j(d) = Σ i^j`.
pub fn progression_by_formula(m: u32, d: u32, r: u64) -> (Poly<BigInt>, Vec<CoefficientRow>) {
    let mut coeffs = vec![BigInt::zero(); m as usize + 1];
    let mut table = Vec::new();
    for j in 0..=m {
        let b = binomial(m, j);
        let rp = BigInt::from(r).pow(j);
        let s: BigInt = (1..=d).map(|i| BigInt::from(i).pow(j)).sum();
        let c = &b * &rp * &s;
        coeffs[(m - j) as usize] = c.clone();
        table.push(CoefficientRow {
            j,
            binomial: b.to_string(),
            r_power: rp.to_string(),
            power_sum: s.to_string(),
            coefficient: c.to_string(),
        });
    }
    (Poly::new((), coeffs), table)
}

fn reduce(f: &Poly<BigInt>, field: &GaloisField) -> Poly<Fq> {
    let l = BigInt::from(field.characteristic);
    f.map(field, |c| field.int(c.mod_floor(&l).to_i64().expect("residue fits")))
}

/// Integer polynomial (checked by two independent constructions), its
/// reduction mod `ℓ` and the coefficient table.
pub fn build_progression_poly(params: &ProgressionParams) -> Result<ProgressionPoly> {
    let direct = progression_by_expansion(params.m, params.d, params.r);
    let (formula, table) = progression_by_formula(params.m, params.d, params.r);
    if direct != formula {
        return Err(Error::InternalContradiction("progression expansion and coefficient formula disagree".into()));
    }
    let field = GaloisField::prime(params.l)?;
    let reduced = reduce(&direct, &field);
    Ok(ProgressionPoly { integer: direct, reduced, table })
}

/// Where the progression certificate is delegated once `P1`–`P3` hold.
#[derive(Debug, Clone)]
pub enum ProgressionTarget {
    Curve(CurveBackend),
    Tower { backend: CurveBackend, p: u64, levels: u32 },
    Multivariate { field: GaloisField, nvars: usize },
}

impl ProgressionTarget {
    fn field(&self) -> &GaloisField {
        match self {
            ProgressionTarget::Curve(b) | ProgressionTarget::Tower { backend: b, .. } => b.field(),
            ProgressionTarget::Multivariate { field, .. } => field,
        }
    }
}

/// Whether `6(d+1) ≡ 4(2d+1) (mod ℓ)`, i.e. `(d+1)/4 = (2d+1)/6` in `𝔽_ℓ`.
pub fn single_root_relation(d: u64, l: u64) -> bool {
    let d = d % l;
    (6 * (d + 1)) % l == (4 * (2 * d + 1)) % l
}

/// The progression criterion: checks `P1`–`P3`, then delegates to the
/// certifier for the target ring and confirms that its `H2`–`H4` follow.
pub fn check_progression(params: &ProgressionParams, target: &ProgressionTarget, opts: &CertifyOptions) -> Result<Certificate> {
    let field = target.field().clone();
    if field.characteristic != params.l {
        return Err(Error::SpecMismatch);
    }
    let built = build_progression_poly(params)?;
    let delta = integer_poly_discriminant(&built.integer)?;
    let l = params.l;
    let delta_mod = delta.mod_floor(&BigInt::from(l)).to_u64().expect("residue fits");
    let prime = GaloisField::prime(l)?;
    let emb = Embedding::find(&prime, &field)?;
    let f = built.reduced.base_change(&emb)?;

    let p1 = if f.is_zero() {
        Hypothesis::new(P1, false, format!("f reduces to 0 mod {l}"))
    } else {
        let an = analyze(&f, opts)?;
        let over = an.fac.field().to_string();
        if an.fac.splits() {
            Hypothesis::new(P1, true, format!("f = {} over {over}", roots_text(&an.fac)))
        } else {
            let degs: Vec<usize> = an.fac.nonlinear.iter().map(|g| g.0.degree().unwrap()).collect();
            Hypothesis::new(P1, false, format!("irreducible factors of degrees {degs:?} over {over}"))
        }
    };
    let p2 = Hypothesis::new(P2, params.r % l != 0, format!("r = {}, l = {l}", params.r));
    let p3a = delta_mod != 0;
    let dm = params.d as u64 % l;
    let congruence_ok = dm != 0 && dm != 1 && dm != l - 1;
    let p3b = params.q > params.m as u64 && congruence_ok;
    let p3 = Hypothesis::new(
        P3,
        p3a || p3b,
        format!(
            "P3a (l does not divide discriminant): {} [disc = {delta}, disc mod {l} = {delta_mod}]; \
             P3b (q > m and d not 0, +-1 mod l): {} [q = {}, m = {}, d mod {l} = {dm}]",
            if p3a { "satisfied" } else { "violated" },
            if p3b { "satisfied" } else { "violated" },
            params.q,
            params.m
        ),
    );
    let route = if p3a {
        Some("P3a".to_string())
    } else if p3b {
        Some("P3b".to_string())
    } else {
        None
    };
    let progression_holds = [&p1, &p2, &p3].iter().all(|h| h.status == Status::Satisfied);

    let delegated = if f.is_zero() {
        None
    } else {
        Some(match target {
            ProgressionTarget::Curve(b) => check_constancy_criterion(b, &f, params.q, opts)?,
            ProgressionTarget::Tower { backend, p, levels } => check_tower(backend, &f, *p, params.q, *levels, opts)?,
            ProgressionTarget::Multivariate { field, nvars } => check_polynomial_ring(field, &f, params.q, *nvars, opts)?,
        })
    };
    if progression_holds {
        let cert = delegated.as_ref().expect("P1 implies f is nonzero");
        for name in [H2, H3, H4] {
            let h = cert.hypothesis(name).expect("delegated certificate lists H2-H4");
            if h.status != Status::Satisfied {
                return Err(Error::InternalContradiction(format!(
                    "progression hypotheses hold but {name} fails: {}",
                    h.detail
                )));
            }
        }
        if route.as_deref() == Some("P3b") && single_root_relation(params.d as u64, l) {
            return Err(Error::InternalContradiction("single-root relation holds although d is not 1 mod l".into()));
        }
    }

    let mut hypotheses = vec![p1, p2, p3];
    let summary = ProgressionSummary {
        m: params.m,
        d: params.d,
        r: params.r,
        l,
        f_integer: built.integer.to_text("X"),
        discriminant: delta.to_string(),
        discriminant_mod_l: delta_mod,
        route,
        single_root_relation: single_root_relation(params.d as u64, l),
    };
    let mut cert = match delegated {
        Some(mut c) => {
            hypotheses.append(&mut c.hypotheses);
            c
        }
        None => Certificate {
            equation: Equation { field: field.to_string(), f: "0".into(), n: format!("{}^k", params.q), q: params.q },
            ring: Ring { kind: RingKind::Rational, spec: format!("{field}") },
            theorem: Theorem::Progression,
            k: None,
            hypotheses: vec![],
            conclusion: Conclusion::NotCertified,
            base_change: None,
            tower: None,
            progression: None,
        },
    };
    cert.theorem = Theorem::Progression;
    cert.hypotheses = hypotheses;
    cert.progression = Some(summary);
    cert.conclude();
    Ok(cert)
}

/// Local data of the identity `n·div(Y) = Σ n_i·div(X − a_i)` at one
/// finite prime `π` of `κ[T]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTerm {
    pub prime: String,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorIdentityReport {
    pub n: u64,
    /// `X` constant: every `X − a_i` is a constant (possibly zero) and there
    /// is nothing to compare.
    pub degenerate: bool,
    pub primes: Vec<PrimeTerm>,
    /// `n·deg Y` against `Σ n_i·deg(X − a_i)`.
    pub infinite_lhs: i64,
    pub infinite_rhs: i64,
    /// `deg f · deg X`.
    pub degree_product: i64,
    pub holds: bool,
}

fn ord_at(pi: &Poly<Fq>, g: &Poly<Fq>) -> i64 {
    let mut g = g.clone();
    let mut k = 0;
    loop {
        let (quo, rem) = g.divrem(pi).expect("prime is nonzero");
        if !rem.is_zero() {
            return k;
        }
        g = quo;
        k += 1;
    }
}

/// Checks the divisor identity for a solution `(X, Y)` of `Y^n = f(X)` in
/// `κ[T]`, with `f` given by its factorization. Nonlinear factors `g_j` of
/// `f` contribute `m_j·div(g_j(X))` to the right-hand side.
pub fn verify_divisor_identity(x: &Poly<Fq>, y: &Poly<Fq>, fac: &Factorization, n: u64) -> Result<DivisorIdentityReport> {
    let f = fac.expand();
    if y.pow(n) != f.eval_at(x) {
        return Err(Error::NotASolution);
    }
    let deg_f = f.degree().ok_or(Error::ZeroPolynomial)? as i64;
    let field = fac.field().clone();
    if x.is_constant() {
        let dy = y.degree().map(|d| d as i64).unwrap_or(0);
        return Ok(DivisorIdentityReport {
            n,
            degenerate: true,
            primes: vec![],
            infinite_lhs: n as i64 * dy,
            infinite_rhs: 0,
            degree_product: 0,
            holds: dy == 0,
        });
    }
    let mut terms: Vec<(Poly<Fq>, i64)> = fac
        .linear_roots
        .iter()
        .map(|(a, m)| (x - &Poly::constant(a.clone()), *m as i64))
        .collect();
    for (g, m) in &fac.nonlinear {
        terms.push((g.eval_at(x), *m as i64));
    }
    let mut primes: BTreeMap<Vec<u64>, Poly<Fq>> = BTreeMap::new();
    let key = |p: &Poly<Fq>| p.coeffs().iter().map(|c| c.index()).collect::<Vec<_>>();
    for g in std::iter::once(y).chain(terms.iter().map(|t| &t.0)) {
        let fg = g.factor_seeded(fac.seed)?;
        for (a, _) in &fg.linear_roots {
            let pi = Poly::new(field.clone(), vec![-a.clone(), field.one()]);
            primes.insert(key(&pi), pi);
        }
        for (pi, _) in &fg.nonlinear {
            primes.insert(key(pi), pi.clone());
        }
    }
    let mut out = Vec::new();
    let mut holds = true;
    for pi in primes.values() {
        let lhs = n as i64 * ord_at(pi, y);
        let rhs: i64 = terms.iter().map(|(g, m)| m * ord_at(pi, g)).sum();
        holds &= lhs == rhs;
        out.push(PrimeTerm { prime: pi.to_text("T"), lhs, rhs });
    }
    let deg = |p: &Poly<Fq>| p.degree().expect("nonzero") as i64;
    let infinite_lhs = n as i64 * deg(y);
    let infinite_rhs: i64 = terms.iter().map(|(g, m)| m * deg(g)).sum();
    let degree_product = deg_f * deg(x);
    holds &= infinite_lhs == infinite_rhs && infinite_rhs == degree_product;
    Ok(DivisorIdentityReport {
        n,
        degenerate: false,
        primes: out,
        infinite_lhs,
        infinite_rhs,
        degree_product,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::parse_curve;
    use crate::poly::FqPoly;

    fn gf(l: u64) -> GaloisField {
        GaloisField::prime(l).unwrap()
    }

    fn rational(l: u64) -> CurveBackend {
        CurveBackend::Rational(gf(l))
    }

    #[test]
    fn criterion_examples() {
        let o = CertifyOptions::default();
        let f5 = gf(5);
        let f = FqPoly::from_ints(&f5, &[4, 2, 3]);
        let c = check_constancy_criterion(&rational(5), &f, 3, &o).unwrap();
        assert!(c.certified(), "{c:?}");
        assert_eq!(c.k, Some(1));
        assert_eq!(c.equation.n, "3");

        let cube = FqPoly::from_ints(&f5, &[0, 0, 0, 1]);
        let c = check_constancy_criterion(&rational(5), &cube, 3, &o).unwrap();
        assert_eq!(c.violated(), vec![H3, H4]);

        let x1 = FqPoly::from_ints(&f5, &[0, -1, 1]).pow(3);
        let c = check_constancy_criterion(&rational(5), &x1, 3, &o).unwrap();
        assert_eq!(c.violated(), vec![H4]);

        let c = check_constancy_criterion(&rational(5), &f, 5, &o).unwrap();
        assert_eq!(c.violated(), vec![H1]);
    }

    #[test]
    fn elliptic_k() {
        let o = CertifyOptions::default();
        let e = parse_curve("elliptic(GF(5); a=[0,0,0,1,1])").unwrap();
        let f = FqPoly::from_ints(&gf(5), &[4, 2, 3]);
        let c = check_constancy_criterion(&e, &f, 3, &o).unwrap();
        assert!(c.certified());
        let info = e.class_group(o.cap).unwrap();
        assert_eq!(c.k, Some(info.least_stable_k(3)));
        let c2 = check_constancy_criterion(&e, &f, 2, &o).unwrap();
        assert_eq!(c2.k, Some(1));
    }

    #[test]
    fn tower_examples() {
        let o = CertifyOptions::default();
        let f = FqPoly::from_ints(&gf(5), &[4, 2, 3]);
        for p in [2, 3, 7] {
            let c = check_tower(&rational(5), &f, p, 3, 4, &o).unwrap();
            assert!(c.certified());
            assert_eq!(c.k, Some(1));
        }
        let e = parse_curve("elliptic(GF(5); a=[0,0,0,1,1])").unwrap();
        let c = check_tower(&e, &f, 2, 3, 3, &o).unwrap();
        assert!(c.certified());
        assert_eq!(c.tower.as_ref().unwrap().rigorous_bound, Some(3));
        assert_eq!(c.k, Some(4));
        let c = check_tower(&e, &f, 3, 3, 3, &o).unwrap();
        assert_eq!(c.theorem, Theorem::TowerPCoprime);
        assert_eq!(c.violated(), vec![H_P_COPRIME]);
    }

    #[test]
    fn polynomial_ring_examples() {
        let o = CertifyOptions::default();
        let f3 = gf(3);
        let f = FqPoly::from_ints(&f3, &[0, -1, 1]);
        assert!(check_polynomial_ring(&f3, &f, 2, 2, &o).unwrap().certified());
        let sq = f.pow(2);
        assert_eq!(check_polynomial_ring(&f3, &sq, 2, 2, &o).unwrap().violated(), vec![H4]);
        let f5 = gf(5);
        let irr = FqPoly::from_ints(&f5, &[2, 0, 1]);
        let c = check_polynomial_ring(&f5, &irr, 3, 1, &o).unwrap();
        assert_eq!(c.violated(), vec![H2, H3, H4]);
        let c = check_polynomial_ring(&f5, &irr, 3, 1, &CertifyOptions { base_change: true, ..o }).unwrap();
        assert!(c.certified());
        assert_eq!(c.base_change.as_ref().unwrap().to, "GF(5^2)");
    }

    #[test]
    fn progression_polynomial() {
        let p = ProgressionParams::new(2, 3, 1, 5, 3).unwrap();
        let b = build_progression_poly(&p).unwrap();
        assert_eq!(b.integer, Poly::from_ints(&(), &[14, 12, 3]));
        assert_eq!(b.reduced, FqPoly::from_ints(&gf(5), &[4, 2, 3]));
        for m in 1..=8 {
            for d in 1..=8 {
                for r in 1..=5 {
                    let (formula, _) = progression_by_formula(m, d, r);
                    let direct = progression_by_expansion(m, d, r);
                    assert_eq!(formula, direct);
                    assert_eq!(direct.lc(), BigInt::from(d));
                    let next = BigInt::from(m as u64 * r * (d as u64 * (d as u64 + 1) / 2));
                    assert_eq!(direct.coeff(m as usize - 1), next);
                }
            }
        }
    }

    #[test]
    fn progression_certificates() {
        let o = CertifyOptions::default();
        let p = ProgressionParams::new(2, 3, 1, 5, 3).unwrap();
        let c = check_progression(&p, &ProgressionTarget::Curve(rational(5)), &o).unwrap();
        assert!(c.certified(), "{c:?}");
        let s = c.progression.as_ref().unwrap();
        assert_eq!(s.discriminant, "-24");
        assert_eq!(s.discriminant_mod_l, 1);
        assert_eq!(s.route.as_deref(), Some("P3a"));

        let p = ProgressionParams::new(2, 3, 5, 5, 3).unwrap();
        let c = check_progression(&p, &ProgressionTarget::Curve(rational(5)), &o).unwrap();
        assert!(c.violated().contains(&P2));

        // d = 4 ≡ −1 (mod 5), m = 2: Δ = 4·… divisible by 5?
        let p = ProgressionParams::new(2, 4, 1, 5, 3).unwrap();
        let c = check_progression(&p, &ProgressionTarget::Curve(rational(5)), &o).unwrap();
        let s = c.progression.clone().unwrap();
        if s.discriminant_mod_l == 0 {
            assert!(c.violated().contains(&P3));
        }
        assert!(ProgressionParams::new(2, 3, 1, 5, 5).is_err());
        assert!(ProgressionParams::new(2, 3, 1, 3, 2).is_err());
    }

    #[test]
    fn relation_only_at_one() {
        for l in [5u64, 7, 11, 13, 101] {
            for d in 0..l {
                assert_eq!(single_root_relation(d, l), d == 1, "d={d} l={l}");
            }
        }
    }

    #[test]
    fn divisor_identity() {
        let f5 = gf(5);
        let f = FqPoly::from_ints(&f5, &[4, 2, 3]);
        let fac = f.factor().unwrap();
        let x = FqPoly::from_ints(&f5, &[2]);
        let y = Poly::<Fq>::zero(&f5);
        assert!(verify_divisor_identity(&x, &y, &fac, 3).unwrap().degenerate);
        let cube = FqPoly::from_ints(&f5, &[0, 0, 0, 1]).factor().unwrap();
        let t = Poly::x(&f5);
        let rep = verify_divisor_identity(&t, &t, &cube, 3).unwrap();
        assert!(rep.holds && !rep.degenerate);
        assert_eq!(rep.primes, vec![PrimeTerm { prime: "T".into(), lhs: 3, rhs: 3 }]);
        assert_eq!(verify_divisor_identity(&t, &x, &cube, 3), Err(Error::NotASolution));
        // (T^2+T)^2 = X^2(X-1)^2 at X = T^2+... : X = T(T+1)… use Y = X(X-1) with X = T^2
        let sq = FqPoly::from_ints(&f5, &[0, -1, 1]).pow(2).factor().unwrap();
        let xx = FqPoly::from_ints(&f5, &[0, 0, 1]);
        let yy = &xx * &(&xx - &FqPoly::from_ints(&f5, &[1]));
        let rep = verify_divisor_identity(&xx, &yy, &sq, 2).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.infinite_lhs, 8);
    }

    #[test]
    fn json_round_trip() {
        let o = CertifyOptions::default();
        let f = FqPoly::from_ints(&gf(5), &[4, 2, 3]);
        let c = check_constancy_criterion(&rational(5), &f, 3, &o).unwrap();
        let s = c.to_json();
        let back: Certificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), s);
    }
}
