//! Fixed-seed invariant suites behind the `selftest` subcommand, plus the
//! certificate-vs-search catalog shared with the acceptance harness.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{check_constancy_criterion, Certificate, CertifyOptions};
use crate::curves::{CurveBackend, EllipticModel, FrobeniusData};
use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField};
use crate::parse::{parse_element, parse_poly};
use crate::poly::{Embedding, Poly};
use crate::search::{search_rational, SearchOptions, SearchReport};
use crate::valuations::{
    axioms_check, power_difference_suite, LowestDegree, PoleOrder, PolyDegree, VariableDegree,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub mutant: bool,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

fn gf(l: u64, s: usize) -> GaloisField {
    GaloisField::new(l, s, None).expect("catalog field is valid")
}

pub fn valuation_axioms_suite(samples: usize, seed: u64) -> SuiteResult {
    let mut reports = Vec::new();
    for l in [2, 3, 5, 7] {
        reports.push(axioms_check(&PolyDegree::new(&gf(l, 1)), samples, seed));
    }
    let model = Arc::new(EllipticModel::from_ints(&gf(5, 1), [0, 0, 0, 1, 1]).expect("nonsingular"));
    reports.push(axioms_check(&PoleOrder::new(&model), samples, seed));
    for var in 0..2 {
        reports.push(axioms_check(&VariableDegree::new(&gf(3, 1), 2, var), samples, seed));
    }
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.axioms.iter().filter(|a| a.failures > 0).map(move |a| {
                format!("{}: {} failed {}x, e.g. {}", r.instance, a.name, a.failures, a.witness.clone().unwrap_or_default())
            })
        })
        .collect();
    let checked = reports.iter().flat_map(|r| &r.axioms).map(|a| a.checked as u64).sum();
    SuiteResult {
        name: "valuation_axioms".into(),
        passed: failed.is_empty(),
        checked,
        detail: if failed.is_empty() {
            format!("{} instances, {samples} samples each", reports.len())
        } else {
            failed.join("; ")
        },
    }
}

/// The `d(f), d(g) ≤ d(f^q − g^q)` law on every ring kind. With `mutant`
/// the degree on `GF(ℓ)[T]` is replaced by the order at `T = 0`.
pub fn power_difference_law_suite(count: usize, seed: u64, mutant: bool) -> SuiteResult {
    let qs = [2, 3, 5];
    let mut suites = Vec::new();
    for l in [2, 3, 5, 7] {
        let field = gf(l, 1);
        suites.push(if mutant {
            power_difference_suite(&LowestDegree { field }, count, &qs, seed)
        } else {
            power_difference_suite(&PolyDegree::new(&field), count, &qs, seed)
        });
    }
    let model = Arc::new(EllipticModel::from_ints(&gf(5, 1), [0, 0, 0, 1, 1]).expect("nonsingular"));
    suites.push(power_difference_suite(&PoleOrder::new(&model), count, &qs, seed));
    suites.push(power_difference_suite(&VariableDegree::new(&gf(3, 1), 2, 0), count, &qs, seed));
    let failed: Vec<String> = suites
        .iter()
        .filter(|s| !s.passed())
        .map(|s| {
            let w = s.witness.as_ref().map(|w| {
                format!("q={} f={} g={} c={} d(f)={} d(g)={} d(c)={}", w.q, w.f, w.g, w.c, w.d_f, w.d_g, w.d_c)
            });
            format!("{}: {} failures, witness {}", s.instance, s.failures, w.unwrap_or_default())
        })
        .collect();
    SuiteResult {
        name: "power_difference_law".into(),
        passed: failed.is_empty(),
        checked: suites.iter().map(|s| s.checked as u64).sum(),
        detail: if failed.is_empty() {
            format!("{} ring instances, {count} triples each", suites.len())
        } else {
            failed.join("; ")
        },
    }
}

/// Random monic polynomial of degree `deg`.
pub fn random_monic(field: &GaloisField, deg: usize, rng: &mut ChaCha8Rng) -> Poly<Fq> {
    let mut c: Vec<Fq> = (0..deg).map(|_| field.from_index(rng.gen_range(0..field.order()))).collect();
    c.push(field.one());
    Poly::new(field.clone(), c)
}

/// Checks that `f` factors exactly into monic irreducibles. Returns a
/// description of the first defect.
pub fn factor_round_trip(f: &Poly<Fq>, seed: u64) -> std::result::Result<(), String> {
    let fac = f.factor_seeded(seed).map_err(|e| e.to_string())?;
    if fac.expand() != *f {
        return Err(format!("product of factors differs from {}", f.to_text("X")));
    }
    for (g, _) in &fac.nonlinear {
        if !g.is_irreducible() || !g.lc().is_one() {
            return Err(format!("factor {} of {} is not monic irreducible", g.to_text("X"), f.to_text("X")));
        }
    }
    let deg: usize = fac.linear_roots.iter().map(|r| r.1 as usize).sum::<usize>()
        + fac.nonlinear.iter().map(|(g, m)| g.degree().unwrap() * *m as usize).sum::<usize>();
    if Some(deg) != f.degree() {
        return Err(format!("factor degrees of {} do not add up", f.to_text("X")));
    }
    Ok(())
}

/// `per_field` random monic polynomials of degree ≤ 12 per field, a third
/// of them of the inseparable shape `h(X^ℓ)`.
pub fn factorization_suite(fields: &[GaloisField], per_field: usize, seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut checked = 0;
    for field in fields {
        let l = field.characteristic as usize;
        for i in 0..per_field {
            let f = if i % 3 == 2 {
                let h = random_monic(field, rng.gen_range(1..=12 / l), &mut rng);
                h.compose(&Poly::monomial(field.one(), l))
            } else {
                random_monic(field, rng.gen_range(1..=12), &mut rng)
            };
            checked += 1;
            if let Err(e) = factor_round_trip(&f, seed) {
                failures.push(format!("{field}: {e}"));
            }
        }
    }
    SuiteResult {
        name: "factorization_round_trip".into(),
        passed: failures.is_empty(),
        checked,
        detail: if failures.is_empty() {
            format!("{} fields, {per_field} polynomials each", fields.len())
        } else {
            failures.join("; ")
        },
    }
}

/// Curves used by the point-count cross-check.
pub fn curve_catalog() -> Vec<EllipticModel> {
    let f9 = gf(3, 2);
    let a = f9.generator();
    vec![
        EllipticModel::from_ints(&gf(5, 1), [0, 0, 0, 1, 1]).unwrap(),
        EllipticModel::from_ints(&gf(7, 1), [1, 2, 3, 4, 5]).unwrap(),
        EllipticModel::from_ints(&gf(2, 1), [1, 0, 0, 0, 1]).unwrap(),
        EllipticModel::from_ints(&gf(3, 1), [0, 1, 0, 0, 2]).unwrap(),
        EllipticModel::new(&f9, [f9.zero(), f9.zero(), f9.zero(), a, f9.one()]).unwrap(),
    ]
}

/// Enumerated `#E(κ_m)` against the trace recurrence and the Frobenius
/// matrix, for `m = 1, 2`; recurrence against matrix for `m ≤ 6`.
pub fn point_count_suite(cap: u128) -> SuiteResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for model in curve_catalog() {
        let field = model.field().clone();
        let result = (|| -> Result<()> {
            let (h1, _) = model.count_points(cap)?;
            let frob = FrobeniusData::elliptic(field.order(), h1);
            if !frob.satisfies_hasse() {
                failures.push(format!("{}: Hasse bound violated", model.to_spec()));
            }
            let ext = GaloisField::new(field.characteristic, field.degree * 2, None)?;
            let emb = Embedding::find(&field, &ext)?;
            let (h2, _) = model.base_change(&emb)?.count_points(cap)?;
            for (m, h) in [(1, h1), (2, h2)] {
                checked += 1;
                if frob.constant_ext_class_number(m) != h.into() {
                    failures.push(format!("{}: #E over degree {m} is {h}, recurrence disagrees", model.to_spec()));
                }
            }
            for m in 1..=6 {
                checked += 1;
                if frob.constant_ext_class_number(m) != frob.class_number_by_matrix(m) {
                    failures.push(format!("{}: recurrence and matrix disagree at m = {m}", model.to_spec()));
                }
            }
            Ok(())
        })();
        if let Err(e) = result {
            failures.push(format!("{}: {e}", model.to_spec()));
        }
    }
    SuiteResult {
        name: "point_count_cross_check".into(),
        passed: failures.is_empty(),
        checked,
        detail: if failures.is_empty() { "enumeration, recurrence and matrix agree".into() } else { failures.join("; ") },
    }
}

/// One instance of the confrontation catalog. `witness` is set for
/// negative controls and lists a nonconstant `(X, Y)` in `κ[T]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub l: u64,
    pub f: &'static str,
    pub q: u64,
    pub witness: Option<(&'static str, &'static str)>,
}

pub fn confrontation_catalog() -> Vec<CatalogEntry> {
    let pos = |label, l, f, q| CatalogEntry { label, l, f, q, witness: None };
    let neg = |label, l, f, q, x, y| CatalogEntry { label, l, f, q, witness: Some((x, y)) };
    vec![
        pos("two simple roots", 5, "3*(X-2)*(X-4)", 3),
        pos("two simple roots, square", 5, "3*(X-2)*(X-4)", 2),
        pos("GF(3) pair", 3, "X*(X-1)", 2),
        pos("GF(3) all roots", 3, "X^3-X", 2),
        pos("GF(7) cube", 7, "X*(X-1)", 3),
        pos("GF(7) three roots", 7, "X*(X-1)*(X-2)", 2),
        pos("mixed exponents", 7, "X^2*(X-3)*(X-5)^3", 2),
        pos("GF(5) degree five", 5, "(X-1)^2*(X-2)^2*(X-3)", 3),
        pos("fifth powers", 7, "X^4*(X-1)^2", 5),
        pos("GF(3) fifth powers", 3, "X^2*(X-1)", 5),
        pos("unit leading coefficient", 5, "2*X*(X-4)", 2),
        pos("degree six", 7, "3*(X-1)*(X-6)^5", 3),
        neg("single root", 5, "X^3", 3, "T", "T"),
        neg("single root, twisted", 7, "2*X^2", 2, "T", "3*T"),
        neg("one exponent coprime", 3, "X^2*(X-1)", 2, "T^2+1", "T^3+T"),
        neg("one exponent coprime, cube", 7, "X^3*(X-1)", 3, "T^3+1", "T^4+T"),
        neg("all exponents divisible", 5, "X^2*(X-1)^2", 2, "T", "T^2-T"),
        neg("q equals characteristic", 3, "X*(X-1)", 3, "T^3", "T^2-T"),
        neg("q equals characteristic two", 2, "X*(X+1)", 2, "T^2", "T^2+T"),
    ]
}

#[derive(Debug, Clone)]
pub struct Confrontation {
    pub entry: CatalogEntry,
    pub certificate: Certificate,
    pub search: SearchReport,
    pub ok: bool,
    pub detail: String,
}

/// Certifies a catalog entry over `κ[T]` and searches the box `deg X ≤ bound`
/// with `n = q^k`. Positive entries must certify with no nonconstant
/// solution; controls must be refused and the witness must be found.
pub fn confront_entry(entry: &CatalogEntry, bound: u32, seed: u64, workers: usize) -> Result<Confrontation> {
    let field = gf(entry.l, 1);
    let f = parse_poly(&field, entry.f, "X")?;
    let opts = CertifyOptions { seed, ..CertifyOptions::default() };
    let cert = check_constancy_criterion(&CurveBackend::Rational(field.clone()), &f, entry.q, &opts)?;
    let n = entry.q.pow(cert.k.unwrap_or(1));
    let search = search_rational(&f, n, bound, &SearchOptions { workers, ..SearchOptions::default() })?;
    let (ok, detail) = match entry.witness {
        None => match search.nonconstant().next() {
            _ if !cert.certified() => (false, format!("not certified: {:?}", cert.violated())),
            Some(s) => (false, format!("disagreement: X = {}, Y = {}", s.x, s.y)),
            None => (true, format!("certified, {} constant solutions", search.solutions.len())),
        },
        Some((wx, wy)) => {
            let wx = parse_poly(&field, wx, "T")?;
            let wy = parse_poly(&field, wy, "T")?;
            let found = search.nonconstant().any(|s| {
                parse_poly(&field, &s.x, "T").ok() == Some(wx.clone()) && parse_poly(&field, &s.y, "T").ok() == Some(wy.clone())
            });
            match (cert.certified(), found) {
                (true, _) => (false, "negative control was certified".to_string()),
                (false, false) => (false, format!("witness X = {}, Y = {} not found", wx.to_text("T"), wy.to_text("T"))),
                (false, true) => (true, format!("refused ({}), witness found", cert.violated().join(", "))),
            }
        }
    };
    Ok(Confrontation { entry: *entry, certificate: cert, search, ok, detail })
}

pub fn confrontation_suite(bound: u32, seed: u64) -> SuiteResult {
    let mut failures = Vec::new();
    let catalog = confrontation_catalog();
    for e in &catalog {
        match confront_entry(e, bound, seed, 1) {
            Ok(c) if c.ok => {}
            Ok(c) => failures.push(format!("{}: {}", e.label, c.detail)),
            Err(err) => failures.push(format!("{}: {err}", e.label)),
        }
    }
    SuiteResult {
        name: "certificate_vs_search".into(),
        passed: failures.is_empty(),
        checked: catalog.len() as u64,
        detail: if failures.is_empty() {
            format!("{} instances at degree bound {bound}", catalog.len())
        } else {
            failures.join("; ")
        },
    }
}

/// Every suite at the given seed.
pub fn run_selftest(seed: u64, mutant: bool) -> SelftestReport {
    let fields = [gf(2, 1), gf(3, 1), gf(5, 1), gf(5, 2), gf(7, 2)];
    SelftestReport {
        seed,
        mutant,
        suites: vec![
            valuation_axioms_suite(500, seed),
            power_difference_law_suite(1000, seed, mutant),
            factorization_suite(&fields, 100, seed),
            point_count_suite(1 << 20),
            confrontation_suite(3, seed),
        ],
    }
}

/// Parses `a1,a2,a3,a4,a6` over `field` into a model; shared by the CLI.
pub fn model_from_list(field: &GaloisField, list: &str) -> Result<EllipticModel> {
    let body = list.trim().trim_start_matches('[').trim_end_matches(']');
    let coeffs = crate::parse::split_top_level(body)
        .iter()
        .map(|c| parse_element(field, c))
        .collect::<Result<Vec<_>>>()?;
    let a: [Fq; 5] = coeffs
        .try_into()
        .map_err(|_| Error::Parse("an elliptic model needs exactly five coefficients a1,a2,a3,a4,a6".into()))?;
    EllipticModel::new(field, a)
}
