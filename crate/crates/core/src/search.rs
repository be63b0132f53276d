//! Exhaustive search for solutions of `Y^n = f(X)` inside explicit boxes,
//! used as an independent check on certificates.
//!
//! `X` is enumerated; `Y` is recovered by an exact `n`-th root test and
//! then multiplied through `μ_n(κ)` so that every solution in the box is
//! listed.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::Certificate;
use crate::curves::{ring_of_integers_enumerate, EllipticElement, EllipticModel};
use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField, DEFAULT_ENUM_CAP};
use crate::multipoly::{enumerate_bounded, MPoly};
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub cap: u128,
    /// Worker threads; `1` runs sequentially.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: DEFAULT_ENUM_CAP, workers: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Degree,
    PoleOrder,
    PerVariableDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub kind: BoundKind,
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "Y")]
    pub y: String,
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub ring: String,
    pub f: String,
    pub n: u64,
    pub bounds: Bounds,
    pub exhaustive: bool,
    pub solutions: Vec<Solution>,
    pub tested_count: u64,
    pub cap: String,
    pub elapsed_ms: u64,
}

impl SearchReport {
    pub fn nonconstant(&self) -> impl Iterator<Item = &Solution> {
        self.solutions.iter().filter(|s| !s.constant)
    }

    pub fn has_nonconstant(&self) -> bool {
        self.nonconstant().next().is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Fails with [`Error::InternalContradiction`] when a certificate of
/// constancy meets a nonconstant solution found by exhaustive search.
pub fn confront(cert: &Certificate, report: &SearchReport) -> Result<()> {
    if cert.certified() {
        if let Some(s) = report.nonconstant().next() {
            return Err(Error::InternalContradiction(format!(
                "certified {} but search found nonconstant solution X = {}, Y = {}",
                cert.equation.f, s.x, s.y
            )));
        }
    }
    Ok(())
}

/// `μ_n(κ)` in canonical order.
pub fn roots_of_unity(field: &GaloisField, n: u64) -> Vec<Fq> {
    let g = num_integer::gcd(n, field.order() - 1);
    let mut c = vec![field.zero(); g as usize + 1];
    c[0] = field.int(-1);
    c[g as usize] = field.one();
    Poly::new(field.clone(), c).roots()
}

fn check_candidates(count: u128, cap: u128) -> Result<u64> {
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    u64::try_from(count).map_err(|_| Error::CapExceeded { count, cap })
}

/// Runs `per_index` over `0..count`, in parallel when requested, and
/// returns the concatenated results sorted canonically.
fn run_indices<F>(count: u64, workers: usize, per_index: F) -> Result<Vec<Solution>>
where
    F: Fn(u64) -> Vec<Solution> + Sync + Send,
{
    let mut out: Vec<Solution> = if workers <= 1 {
        (0..count).flat_map(&per_index).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
        pool.install(|| (0..count).into_par_iter().flat_map_iter(&per_index).collect())
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// Polynomial of degree `≤ len − 1` whose base-`Q` digits are `index`.
fn poly_from_index(field: &GaloisField, mut index: u64, len: usize) -> Poly<Fq> {
    let q = field.order();
    let mut c = Vec::with_capacity(len);
    for _ in 0..len {
        c.push(field.from_index(index % q));
        index /= q;
    }
    Poly::new(field.clone(), c)
}

/// All `(X, Y) ∈ κ[T]²` with `deg X ≤ deg_bound` and `Y^n = f(X)`.
pub fn search_rational(f: &Poly<Fq>, n: u64, deg_bound: u32, opts: &SearchOptions) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::Invalid("exponent must be positive".into()));
    }
    let start = Instant::now();
    let field = f.field().clone();
    let count = (field.order() as u128).checked_pow(deg_bound + 1).unwrap_or(u128::MAX);
    let count = check_candidates(count, opts.cap)?;
    let units = roots_of_unity(&field, n);
    let solutions = run_indices(count, opts.workers, |i| {
        let x = poly_from_index(&field, i, deg_bound as usize + 1);
        let z = f.eval_at(&x);
        let Some(y0) = z.nth_root(n) else {
            return vec![];
        };
        let ys: Vec<Poly<Fq>> = if y0.is_zero() { vec![y0] } else { units.iter().map(|u| y0.scale(u)).collect() };
        ys.into_iter()
            .map(|y| {
                assert!(y.pow(n) == z, "root test returned a non-root");
                Solution { x: x.to_text("T"), y: y.to_text("T"), constant: x.is_constant() && y.is_constant() }
            })
            .collect()
    })?;
    Ok(SearchReport {
        ring: format!("{field}[T]"),
        f: f.to_text("X"),
        n,
        bounds: Bounds { kind: BoundKind::Degree, values: vec![deg_bound as u64] },
        exhaustive: true,
        solutions,
        tested_count: count,
        cap: opts.cap.to_string(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// How `Y` is found in the elliptic search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipticMode {
    /// Compare `f(X)` against every `Y^n` in the `Y` box.
    Exhaustive,
    /// Only look up `Y` of pole order `pole(f(X))/n` in a hash table.
    Pruned,
}

/// All `(X, Y) ∈ 𝒪_F²` with pole order of `X` at most `pole_bound` and
/// `Y^n = f(X)`. `Y` ranges over pole orders up to `⌊deg f · B / n⌋`,
/// which contains every possible root.
pub fn search_elliptic(
    model: &EllipticModel,
    f: &Poly<Fq>,
    n: u64,
    pole_bound: u64,
    mode: EllipticMode,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::Invalid("exponent must be positive".into()));
    }
    if f.field() != model.field() {
        return Err(Error::SpecMismatch);
    }
    let start = Instant::now();
    let model = Arc::new(model.clone());
    let xs = ring_of_integers_enumerate(&model, pole_bound, opts.cap)?;
    let count = check_candidates(xs.len(), opts.cap)?;
    let deg_f = f.degree().unwrap_or(0) as u64;
    let y_bound = deg_f * pole_bound / n;
    let ys: Vec<(EllipticElement, EllipticElement)> = ring_of_integers_enumerate(&model, y_bound, opts.cap)?
        .map(|y| {
            let p = y.pow(n);
            (y, p)
        })
        .collect();
    let mut table: HashMap<EllipticElement, Vec<usize>> = HashMap::new();
    for (i, (_, p)) in ys.iter().enumerate() {
        table.entry(p.clone()).or_default().push(i);
    }
    let solutions = run_indices(count, opts.workers, |i| {
        let x = xs.nth_candidate(i as u128);
        let z = f.eval_at(&x);
        let hits: Vec<usize> = match mode {
            EllipticMode::Exhaustive => (0..ys.len()).filter(|&j| ys[j].1 == z).collect(),
            EllipticMode::Pruned => {
                let feasible = match z.pole_order() {
                    Err(_) => true,
                    Ok(p) => p % n == 0 && p / n <= y_bound,
                };
                if feasible {
                    table.get(&z).cloned().unwrap_or_default()
                } else {
                    vec![]
                }
            }
        };
        hits.into_iter()
            .map(|j| {
                let y = &ys[j].0;
                assert!(y.pow(n) == z, "table entry is not a root");
                Solution { x: x.to_text(), y: y.to_text(), constant: x.is_constant() && y.is_constant() }
            })
            .collect()
    })?;
    Ok(SearchReport {
        ring: format!("O_F of {}", model.to_spec()),
        f: f.to_text("X"),
        n,
        bounds: Bounds { kind: BoundKind::PoleOrder, values: vec![pole_bound] },
        exhaustive: true,
        solutions,
        tested_count: count,
        cap: opts.cap.to_string(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// All `(X, Y) ∈ K[T_1..T_r]²` with `deg_{T_i} X ≤ bounds_i` and `Y^q = f(X)`.
pub fn search_multivar(f: &Poly<Fq>, q: u64, bounds: &[u32], opts: &SearchOptions) -> Result<SearchReport> {
    if q == 0 {
        return Err(Error::Invalid("exponent must be positive".into()));
    }
    let start = Instant::now();
    let field = f.field().clone();
    let xs = enumerate_bounded(&field, bounds, opts.cap)?;
    let count = check_candidates(xs.len(), opts.cap)?;
    let units = roots_of_unity(&field, q);
    let solutions = run_indices(count, opts.workers, |i| {
        let x = xs.nth_candidate(i as u128);
        let z: MPoly<Fq> = f.eval_at(&x);
        let Some(y0) = z.nth_root(q) else {
            return vec![];
        };
        let ys: Vec<MPoly<Fq>> = if y0.is_zero() { vec![y0] } else { units.iter().map(|u| y0.scale(u)).collect() };
        ys.into_iter()
            .map(|y| {
                assert!(y.pow(q) == z, "root test returned a non-root");
                Solution { x: x.to_text(), y: y.to_text(), constant: x.is_constant() && y.is_constant() }
            })
            .collect()
    })?;
    let vars: Vec<String> = (1..=bounds.len()).map(|i| format!("T{i}")).collect();
    Ok(SearchReport {
        ring: format!("{field}[{}]", vars.join(",")),
        f: f.to_text("X"),
        n: q,
        bounds: Bounds { kind: BoundKind::PerVariableDegree, values: bounds.iter().map(|&b| b as u64).collect() },
        exhaustive: true,
        solutions,
        tested_count: count,
        cap: opts.cap.to_string(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// `{a ∈ κ : f(a) is an n-th power in κ}`, computed by enumerating `κ`
/// and all `n`-th powers; independent of the polynomial root code.
pub fn constant_solution_xs(f: &Poly<Fq>, n: u64) -> Vec<Fq> {
    let field = f.field();
    let powers: std::collections::HashSet<Fq> = field.elements().map(|y| y.pow(n)).collect();
    field.elements().filter(|a| powers.contains(&f.eval(a))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::FqPoly;

    fn gf(l: u64) -> GaloisField {
        GaloisField::prime(l).unwrap()
    }

    #[test]
    fn rational_examples() {
        let f5 = gf(5);
        let o = SearchOptions::default();
        let f = FqPoly::from_ints(&f5, &[4, 2, 3]);
        let r = search_rational(&f, 3, 3, &o).unwrap();
        assert!(!r.has_nonconstant());
        assert_eq!(r.solutions.len(), 5);
        assert_eq!(r.tested_count, 625);
        let cube = FqPoly::from_ints(&f5, &[0, 0, 0, 1]);
        let r = search_rational(&cube, 3, 2, &o).unwrap();
        assert!(r.solutions.contains(&Solution { x: "T".into(), y: "T".into(), constant: false }));
        let r = search_rational(&f, 2, 2, &o).unwrap();
        assert!(!r.has_nonconstant());
        let xs: Vec<String> = constant_solution_xs(&f, 2).iter().map(|a| a.to_text()).collect();
        let mut found: Vec<String> = r.solutions.iter().map(|s| s.x.clone()).collect();
        found.dedup();
        assert_eq!(found, xs);
    }

    #[test]
    fn parallel_matches_sequential() {
        let f3 = gf(3);
        let f = FqPoly::from_ints(&f3, &[0, -1, 1]).pow(2);
        let a = search_rational(&f, 2, 3, &SearchOptions::default()).unwrap();
        let b = search_rational(&f, 2, 3, &SearchOptions { workers: 4, ..Default::default() }).unwrap();
        assert_eq!(a.solutions, b.solutions);
    }

    #[test]
    fn elliptic_examples() {
        let f5 = gf(5);
        let e = EllipticModel::from_ints(&f5, [0, 0, 0, 1, 1]).unwrap();
        let o = SearchOptions::default();
        let f = FqPoly::from_ints(&f5, &[4, 2, 3]);
        let a = search_elliptic(&e, &f, 3, 4, EllipticMode::Pruned, &o).unwrap();
        let b = search_elliptic(&e, &f, 3, 4, EllipticMode::Exhaustive, &o).unwrap();
        assert_eq!(a.solutions, b.solutions);
        assert!(!a.has_nonconstant());
        let cube = FqPoly::from_ints(&f5, &[0, 0, 0, 1]);
        let r = search_elliptic(&e, &cube, 3, 2, EllipticMode::Pruned, &o).unwrap();
        assert!(r.solutions.contains(&Solution { x: "x".into(), y: "x".into(), constant: false }));
        let consts = search_elliptic(&e, &f, 3, 1, EllipticMode::Pruned, &o).unwrap();
        let flat = search_rational(&f, 3, 0, &o).unwrap();
        assert_eq!(consts.solutions, flat.solutions);
    }

    #[test]
    fn multivariate_examples() {
        let f3 = gf(3);
        let o = SearchOptions::default();
        let f = FqPoly::from_ints(&f3, &[0, -1, 1]);
        let r = search_multivar(&f, 2, &[1, 1], &o).unwrap();
        assert_eq!(r.tested_count, 81);
        assert!(!r.has_nonconstant());
        let r = search_multivar(&f.pow(2), 2, &[1, 1], &o).unwrap();
        assert!(r.nonconstant().any(|s| s.x == "T1"));
        assert!(matches!(search_multivar(&f, 2, &[3, 3], &SearchOptions { cap: 1000, workers: 1 }), Err(Error::CapExceeded { .. })));
    }
}
