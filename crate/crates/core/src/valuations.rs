//! Discrete valuations `d : A∖{0} → ℤ_{≥0}` in the sense used by the
//! constancy criterion, concrete instances, and randomized law checkers.
//!
//! The dominance law is checked in the form
//! `d(f) ≠ d(g) ⟹ d(f+g) = max(d(f), d(g))`, which is what pole orders
//! satisfy and what the `f^q − g^q = c` bound needs.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{integer_basis, EllipticElement, EllipticModel};
use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField};
use crate::multipoly::MPoly;
use crate::poly::{Algebra, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingKind {
    RationalPoly,
    EllipticIntegers,
    MultivarPoly,
}

/// A function on the nonzero elements of an integral domain of
/// characteristic `ℓ` together with the ring operations needed to test it.
pub trait Valuation: Sync {
    type Elem: Clone + PartialEq + Send;

    fn describe(&self) -> String;
    fn ring_kind(&self) -> RingKind;
    fn field(&self) -> &GaloisField;
    /// `d(a)`; `a = 0` is rejected.
    fn value(&self, a: &Self::Elem) -> Result<i64>;

    fn constant(&self, c: Fq) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_constant(&self, a: &Self::Elem) -> bool;
    fn text(&self, a: &Self::Elem) -> String;
    /// A random nonzero element.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    fn characteristic(&self) -> u64 {
        self.field().characteristic
    }

    /// Whether `d(a) = 0` forces `a ∈ κ` (false for a single variable's
    /// degree when there are several variables).
    fn detects_constants(&self) -> bool {
        true
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.field().one())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.mul(&self.constant(self.field().int(-1)), b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

fn random_element(field: &GaloisField, rng: &mut ChaCha8Rng) -> Fq {
    field.from_index(rng.gen_range(0..field.order()))
}

fn random_nonzero(field: &GaloisField, rng: &mut ChaCha8Rng) -> Fq {
    field.from_index(rng.gen_range(1..field.order()))
}

fn random_poly(field: &GaloisField, max_degree: usize, rng: &mut ChaCha8Rng) -> Poly<Fq> {
    let deg = rng.gen_range(0..=max_degree);
    let mut c: Vec<Fq> = (0..deg).map(|_| random_element(field, rng)).collect();
    c.push(random_nonzero(field, rng));
    Poly::new(field.clone(), c)
}

/// Degree on `κ[T]` (pole order at the infinite place of `κ(T)`).
#[derive(Debug, Clone)]
pub struct PolyDegree {
    pub field: GaloisField,
    pub max_sample_degree: usize,
}

impl PolyDegree {
    pub fn new(field: &GaloisField) -> Self {
        PolyDegree { field: field.clone(), max_sample_degree: 6 }
    }
}

impl Valuation for PolyDegree {
    type Elem = Poly<Fq>;

    fn describe(&self) -> String {
        format!("degree on {}[T]", self.field)
    }
    fn ring_kind(&self) -> RingKind {
        RingKind::RationalPoly
    }
    fn field(&self) -> &GaloisField {
        &self.field
    }
    fn value(&self, a: &Poly<Fq>) -> Result<i64> {
        a.degree().map(|d| d as i64).ok_or(Error::ZeroPolynomial)
    }
    fn constant(&self, c: Fq) -> Poly<Fq> {
        Poly::constant(c)
    }
    fn add(&self, a: &Poly<Fq>, b: &Poly<Fq>) -> Poly<Fq> {
        a + b
    }
    fn mul(&self, a: &Poly<Fq>, b: &Poly<Fq>) -> Poly<Fq> {
        a * b
    }
    fn is_zero(&self, a: &Poly<Fq>) -> bool {
        a.is_zero()
    }
    fn is_constant(&self, a: &Poly<Fq>) -> bool {
        a.is_constant()
    }
    fn text(&self, a: &Poly<Fq>) -> String {
        a.to_text("T")
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Poly<Fq> {
        random_poly(&self.field, self.max_sample_degree, rng)
    }
}

/// Order of vanishing at `T = 0`. Not a valuation in the required sense
/// (it satisfies the min-form of dominance instead); kept as a negative
/// control for the law checkers.
#[derive(Debug, Clone)]
pub struct LowestDegree {
    pub field: GaloisField,
}

impl Valuation for LowestDegree {
    type Elem = Poly<Fq>;

    fn describe(&self) -> String {
        format!("order at T=0 on {}[T] (mutant)", self.field)
    }
    fn ring_kind(&self) -> RingKind {
        RingKind::RationalPoly
    }
    fn field(&self) -> &GaloisField {
        &self.field
    }
    fn value(&self, a: &Poly<Fq>) -> Result<i64> {
        a.coeffs().iter().position(|c| !c.is_zero()).map(|i| i as i64).ok_or(Error::ZeroPolynomial)
    }
    fn constant(&self, c: Fq) -> Poly<Fq> {
        Poly::constant(c)
    }
    fn add(&self, a: &Poly<Fq>, b: &Poly<Fq>) -> Poly<Fq> {
        a + b
    }
    fn mul(&self, a: &Poly<Fq>, b: &Poly<Fq>) -> Poly<Fq> {
        a * b
    }
    fn is_zero(&self, a: &Poly<Fq>) -> bool {
        a.is_zero()
    }
    fn is_constant(&self, a: &Poly<Fq>) -> bool {
        a.is_constant()
    }
    fn text(&self, a: &Poly<Fq>) -> String {
        a.to_text("T")
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Poly<Fq> {
        random_poly(&self.field, 6, rng)
    }
}

/// Pole order at `P_∞` on the elliptic ring of integers.
#[derive(Debug, Clone)]
pub struct PoleOrder {
    pub model: Arc<EllipticModel>,
    pub max_sample_pole: u64,
}

impl PoleOrder {
    pub fn new(model: &Arc<EllipticModel>) -> Self {
        PoleOrder { model: model.clone(), max_sample_pole: 9 }
    }
}

/// Pole order of a nonzero element of `𝒪_F` at `P_∞`.
pub fn elliptic_pole_order(e: &EllipticElement) -> Result<u64> {
    e.pole_order()
}

impl Valuation for PoleOrder {
    type Elem = EllipticElement;

    fn describe(&self) -> String {
        format!("pole order at infinity on {}", self.model.to_spec())
    }
    fn ring_kind(&self) -> RingKind {
        RingKind::EllipticIntegers
    }
    fn field(&self) -> &GaloisField {
        self.model.field()
    }
    fn value(&self, a: &EllipticElement) -> Result<i64> {
        elliptic_pole_order(a).map(|v| v as i64)
    }
    fn constant(&self, c: Fq) -> EllipticElement {
        EllipticElement::constant(&self.model, c)
    }
    fn add(&self, a: &EllipticElement, b: &EllipticElement) -> EllipticElement {
        a.add_ref(b)
    }
    fn mul(&self, a: &EllipticElement, b: &EllipticElement) -> EllipticElement {
        a.mul_ref(b)
    }
    fn is_zero(&self, a: &EllipticElement) -> bool {
        a.is_zero()
    }
    fn is_constant(&self, a: &EllipticElement) -> bool {
        a.is_constant()
    }
    fn text(&self, a: &EllipticElement) -> String {
        a.to_text()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> EllipticElement {
        let field = self.model.field();
        let top = rng.gen_range(0..=self.max_sample_pole);
        let basis = integer_basis(top);
        let mut acc = EllipticElement::constant(&self.model, field.zero());
        for (k, &(i, j)) in basis.iter().enumerate() {
            let c = if k + 1 == basis.len() { random_nonzero(field, rng) } else { random_element(field, rng) };
            acc = acc.add_ref(&EllipticElement::monomial(&self.model, c, i, j));
        }
        acc
    }
}

/// Degree in one variable `T_{var+1}` on `K[T_1, …, T_r]`.
#[derive(Debug, Clone)]
pub struct VariableDegree {
    pub field: GaloisField,
    pub nvars: usize,
    pub var: usize,
    pub max_sample_degree: u32,
}

impl VariableDegree {
    pub fn new(field: &GaloisField, nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        VariableDegree { field: field.clone(), nvars, var, max_sample_degree: 2 }
    }
}

impl Valuation for VariableDegree {
    type Elem = MPoly<Fq>;

    fn describe(&self) -> String {
        let vars: Vec<String> = (1..=self.nvars).map(|i| format!("T{i}")).collect();
        format!("degree in T{} on {}[{}]", self.var + 1, self.field, vars.join(","))
    }
    fn ring_kind(&self) -> RingKind {
        RingKind::MultivarPoly
    }
    fn detects_constants(&self) -> bool {
        self.nvars == 1
    }
    fn field(&self) -> &GaloisField {
        &self.field
    }
    fn value(&self, a: &MPoly<Fq>) -> Result<i64> {
        a.per_var_degree(self.var).map(|d| d as i64)
    }
    fn constant(&self, c: Fq) -> MPoly<Fq> {
        MPoly::constant(c, self.nvars)
    }
    fn add(&self, a: &MPoly<Fq>, b: &MPoly<Fq>) -> MPoly<Fq> {
        a + b
    }
    fn mul(&self, a: &MPoly<Fq>, b: &MPoly<Fq>) -> MPoly<Fq> {
        a * b
    }
    fn is_zero(&self, a: &MPoly<Fq>) -> bool {
        a.is_zero()
    }
    fn is_constant(&self, a: &MPoly<Fq>) -> bool {
        a.is_constant()
    }
    fn text(&self, a: &MPoly<Fq>) -> String {
        a.to_text()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> MPoly<Fq> {
        loop {
            let bounds: Vec<u32> = (0..self.nvars).map(|_| rng.gen_range(0..=self.max_sample_degree)).collect();
            let terms = crate::multipoly::bounded_monomials(&bounds)
                .into_iter()
                .map(|e| (e, random_element(&self.field, rng)));
            let p = MPoly::from_terms(&self.field, self.nvars, terms).expect("exponent lengths match");
            if !p.is_zero() {
                return p;
            }
        }
    }
}

/// Outcome of one law over a sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub instance: String,
    pub ring_kind: RingKind,
    pub samples: usize,
    pub seed: u64,
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.failures == 0)
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    failures: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, checked: 0, failures: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self) -> AxiomResult {
        AxiomResult { name: self.name.into(), checked: self.checked, failures: self.failures, witness: self.witness }
    }
}

/// Randomized check of the valuation laws on `samples` pairs of nonzero
/// elements: non-negativity, `d(1) = 0`, multiplicativity, the ultrametric
/// bound, max-dominance and "value zero only on constants".
pub fn axioms_check<V: Valuation>(v: &V, samples: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonneg = Tally::new("non_negative");
    let mut unit = Tally::new("unit_value_zero");
    let mut mult = Tally::new("multiplicative");
    let mut ultra = Tally::new("ultrametric");
    let mut dom = Tally::new("max_dominance");
    let mut zero_const = Tally::new("value_zero_only_on_constants");

    let one = v.one();
    let d1 = v.value(&one).expect("one is nonzero");
    unit.record(d1 == 0, || format!("d(1) = {d1}"));

    for _ in 0..samples {
        let f = v.sample(&mut rng);
        // Bias half the pairs towards equal leading data so that cancellation occurs.
        let g = if rng.gen_bool(0.5) {
            let c = random_nonzero(v.field(), &mut rng);
            v.add(&v.mul(&v.constant(c), &f), &v.sample(&mut rng))
        } else {
            v.sample(&mut rng)
        };
        if v.is_zero(&g) {
            continue;
        }
        let df = v.value(&f).expect("sample is nonzero");
        let dg = v.value(&g).expect("checked nonzero");
        let ft = || v.text(&f);
        let gt = || v.text(&g);
        nonneg.record(df >= 0 && dg >= 0, || format!("d({}) = {df}, d({}) = {dg}", ft(), gt()));
        if v.detects_constants() {
            zero_const.record(df != 0 || v.is_constant(&f), || format!("d({}) = 0 but it is not constant", ft()));
        }

        let prod = v.mul(&f, &g);
        let dp = v.value(&prod).expect("integral domain");
        mult.record(dp == df + dg, || format!("d(({})*({})) = {dp} ≠ {df} + {dg}", ft(), gt()));

        let sum = v.add(&f, &g);
        if v.is_zero(&sum) {
            continue;
        }
        let ds = v.value(&sum).expect("checked nonzero");
        ultra.record(ds <= df.max(dg), || format!("d({} + {}) = {ds} > max({df}, {dg})", ft(), gt()));
        if df != dg {
            dom.record(ds == df.max(dg), || format!("d({} + {}) = {ds} ≠ max({df}, {dg})", ft(), gt()));
        }
    }
    AxiomReport {
        instance: v.describe(),
        ring_kind: v.ring_kind(),
        samples,
        seed,
        axioms: [nonneg, unit, mult, ultra, dom, zero_const].into_iter().map(Tally::finish).collect(),
    }
}

/// The bound `d(f), d(g) ≤ d(c)` for `c = f^q − g^q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDifferenceReport {
    pub q: u64,
    pub f: String,
    pub g: String,
    pub c: String,
    pub d_f: i64,
    pub d_g: i64,
    pub d_c: i64,
    pub holds: bool,
}

/// Evaluates the `f^q − g^q` bound. Pairs with `f^q = g^q` (which includes
/// `f = g`, and `f = ζg` for a `q`-th root of unity `ζ ∈ κ`) are rejected
/// because `d(0)` is undefined.
pub fn power_difference_check<V: Valuation>(v: &V, f: &V::Elem, g: &V::Elem, q: u64) -> Result<PowerDifferenceReport> {
    if q % v.characteristic() == 0 {
        return Err(Error::CharacteristicClash(q));
    }
    if f == g {
        return Err(Error::EqualInputs);
    }
    let c = v.sub(&v.pow(f, q), &v.pow(g, q));
    if v.is_zero(&c) {
        return Err(Error::EqualInputs);
    }
    let d_f = v.value(f)?;
    let d_g = v.value(g)?;
    let d_c = v.value(&c)?;
    Ok(PowerDifferenceReport {
        q,
        f: v.text(f),
        g: v.text(g),
        c: v.text(&c),
        d_f,
        d_g,
        d_c,
        holds: d_f <= d_c && d_g <= d_c,
    })
}

/// Aggregate of [`power_difference_check`] over random pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDifferenceSuite {
    pub instance: String,
    pub qs: Vec<u64>,
    pub seed: u64,
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
    pub witness: Option<PowerDifferenceReport>,
}

impl PowerDifferenceSuite {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `count` random triples `(f, g, q)` with `q` drawn from `qs ∖ {ℓ}`.
/// Half the pairs have `g = f + e` with a random `e`, the regime where the
/// leading terms of `f^q` and `g^q` cancel.
pub fn power_difference_suite<V: Valuation>(v: &V, count: usize, qs: &[u64], seed: u64) -> PowerDifferenceSuite {
    let qs: Vec<u64> = qs.iter().copied().filter(|&q| q % v.characteristic() != 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = PowerDifferenceSuite {
        instance: v.describe(),
        qs: qs.clone(),
        seed,
        checked: 0,
        skipped: 0,
        failures: 0,
        witness: None,
    };
    if qs.is_empty() {
        return suite;
    }
    while suite.checked < count {
        let q = qs[rng.gen_range(0..qs.len())];
        let f = v.sample(&mut rng);
        let g = match rng.gen_range(0..3) {
            0 => v.sample(&mut rng),
            1 => v.add(&f, &v.sample(&mut rng)),
            _ => v.add(&f, &v.constant(random_nonzero(v.field(), &mut rng))),
        };
        if v.is_zero(&g) {
            continue;
        }
        match power_difference_check(v, &f, &g, q) {
            Ok(rep) => {
                suite.checked += 1;
                if !rep.holds {
                    suite.failures += 1;
                    suite.witness.get_or_insert(rep);
                }
            }
            Err(Error::EqualInputs) => suite.skipped += 1,
            Err(e) => panic!("unexpected error in law suite: {e}"),
        }
    }
    suite
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub d_f: i64,
    pub d_g: i64,
    /// `None` when `f + g = 0`.
    pub d_sum: Option<i64>,
    /// Whether `d(f) ≠ d(g)`, i.e. whether the law asserts anything.
    pub applicable: bool,
    pub holds: bool,
}

/// `d(f) ≠ d(g) ⟹ d(f+g) = max(d(f), d(g))`.
pub fn dominance_check<V: Valuation>(v: &V, f: &V::Elem, g: &V::Elem) -> Result<DominanceReport> {
    let d_f = v.value(f)?;
    let d_g = v.value(g)?;
    let s = v.add(f, g);
    let d_sum = if v.is_zero(&s) { None } else { Some(v.value(&s)?) };
    let applicable = d_f != d_g;
    let holds = !applicable || d_sum == Some(d_f.max(d_g));
    Ok(DominanceReport { d_f, d_g, d_sum, applicable, holds })
}
