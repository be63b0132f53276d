//! Command-line surface. Text goes to standard output; JSON reports go to
//! the path given by `--json` (`-` for standard output).
//!
//! Exit codes: 0 completed, 1 not certified (or a failed selftest),
//! 2 internal contradiction, 3 usage or spec error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certify::{
    build_progression_poly, check_constancy_criterion, check_tower, check_polynomial_ring, check_progression, Certificate, CertifyOptions,
    ProgressionParams, ProgressionTarget,
};
use crate::curves::{parse_curve, CurveBackend, DEFAULT_CYCLE_CAP};
use crate::error::{Error, Result};
use crate::fields::{Fq, GaloisField, DEFAULT_ENUM_CAP};
use crate::parse::{parse_field, parse_poly};
use crate::poly::{Poly, DEFAULT_FACTOR_SEED};
use crate::search::{confront, search_elliptic, search_multivar, search_rational, EllipticMode, SearchOptions, SearchReport};
use crate::selftest::{model_from_list, run_selftest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_CONTRADICTION: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "constancy", version, about = "Certify and search for constant solutions of Y^n = f(X) over function fields")]
struct Cli {
    /// Seed for every randomized step (equal-degree splitting, sampling).
    #[arg(long, global = true, default_value_t = DEFAULT_FACTOR_SEED)]
    seed: u64,
    /// Cap on enumerated candidates (points, search boxes).
    #[arg(long, global = true, env = "CONSTANCY_CAP", default_value_t = DEFAULT_ENUM_CAP)]
    cap: u128,
    /// Cap on the Frobenius cycle search in towers.
    #[arg(long, global = true, env = "CONSTANCY_CYCLE_CAP", default_value_t = DEFAULT_CYCLE_CAP)]
    cycle_cap: u64,
    /// Worker threads for searches.
    #[arg(long, global = true, env = "CONSTANCY_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Write the JSON report here (`-` for standard output).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Backend {
    Rational,
    Elliptic,
    Multivariate,
}

#[derive(Args, Debug, Clone)]
struct RingArgs {
    /// Constant field, e.g. GF(5) or GF(3^2).
    #[arg(long)]
    field: Option<String>,
    #[arg(long, value_enum, default_value_t = Backend::Rational)]
    backend: Backend,
    /// Weierstrass coefficients a1,a2,a3,a4,a6 for the elliptic backend.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Full curve spec instead of --field/--backend, e.g. "elliptic(GF(5); a=[0,0,0,1,1])".
    #[arg(long)]
    curve: Option<String>,
    /// Number of variables for the multivariate backend.
    #[arg(long, default_value_t = 2)]
    vars: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify that Y^(q^k) = f(X) has only constant solutions.
    Certify {
        #[command(flatten)]
        ring: RingArgs,
        /// f as a coefficient list "[c0,c1,..]" or an expression in X.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        q: u64,
        /// Work in the constant Z_p-tower over the curve.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 8)]
        levels: u32,
        /// Pass to the splitting field of f when it does not split.
        #[arg(long)]
        base_change: bool,
        /// Also search the box of size D and compare with the certificate.
        #[arg(long, value_name = "D")]
        confront: Option<u64>,
    },
    /// q-adic valuations of the class numbers along the constant Z_p-tower.
    Tower {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 8)]
        levels: u32,
    },
    /// Sum of m-th powers along an arithmetic progression.
    Progression {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        q: u64,
        /// Defaults to GF(l).
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Backend::Rational)]
        backend: Backend,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 8)]
        levels: u32,
        #[arg(long)]
        base_change: bool,
        #[arg(long, value_name = "D")]
        confront: Option<u64>,
    },
    /// Exhaustively search a bounded box for solutions of Y^n = f(X).
    Search {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        n: u64,
        /// Degree bound (rational), pole-order bound (elliptic), or a
        /// common per-variable bound (multivariate).
        #[arg(long)]
        bound: Option<u64>,
        /// Per-variable degree bounds for the multivariate backend.
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Mode::Pruned)]
        mode: Mode,
    },
    /// Factor f over the constant field.
    Factor {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Run the fixed-seed invariant suites.
    Selftest {
        /// Corrupt the dominance rule of the degree valuation.
        #[arg(long)]
        mutant: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Exhaustive,
    Pruned,
}

enum Target {
    Curve(CurveBackend),
    Multivariate { field: GaloisField, nvars: usize },
}

impl Target {
    fn field(&self) -> &GaloisField {
        match self {
            Target::Curve(b) => b.field(),
            Target::Multivariate { field, .. } => field,
        }
    }
}

fn resolve(field: Option<&str>, backend: Backend, a: Option<&str>, vars: usize) -> Result<Target> {
    let field = parse_field(field.ok_or_else(|| Error::Invalid("--field or --curve is required".into()))?)?;
    Ok(match backend {
        Backend::Rational => Target::Curve(CurveBackend::Rational(field)),
        Backend::Elliptic => {
            let a = a.ok_or_else(|| Error::Invalid("the elliptic backend needs --a a1,a2,a3,a4,a6".into()))?;
            Target::Curve(CurveBackend::Elliptic(model_from_list(&field, a)?))
        }
        Backend::Multivariate => {
            if vars == 0 {
                return Err(Error::Invalid("--vars must be positive".into()));
            }
            Target::Multivariate { field, nvars: vars }
        }
    })
}

impl RingArgs {
    fn target(&self) -> Result<Target> {
        match &self.curve {
            Some(spec) => Ok(Target::Curve(parse_curve(spec)?)),
            None => resolve(self.field.as_deref(), self.backend, self.a.as_deref(), self.vars),
        }
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: Option<PathBuf>,
    certify: CertifyOptions,
    search: SearchOptions,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    fn emit_json(&mut self, text: &str) -> Result<()> {
        match &self.json {
            None => Ok(()),
            Some(p) if p.as_os_str() == "-" => {
                self.line(text);
                Ok(())
            }
            Some(p) => std::fs::write(p, format!("{text}\n"))
                .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display()))),
        }
    }
}

fn tag<T: Serialize>(t: &T) -> String {
    match serde_json::to_value(t) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(_) => "?".into(),
    }
}

fn print_certificate(ctx: &mut Ctx<'_>, cert: &Certificate) {
    ctx.line(format!("theorem: {}", tag(&cert.theorem)));
    ctx.line(format!("ring: {}", cert.ring.spec));
    ctx.line(format!("equation: Y^{} = {} over {}", cert.equation.n, cert.equation.f, cert.equation.field));
    if let Some(bc) = &cert.base_change {
        ctx.line(format!("base change: {} -> {} (degree {})", bc.from, bc.to, bc.degree));
    }
    if let Some(t) = &cert.tower {
        ctx.line(format!("tower: p = {}, q = {}, v_q(h_n) = {:?}, bound = {:?}", t.p, t.q, t.vq_sequence, t.rigorous_bound));
    }
    if let Some(p) = &cert.progression {
        ctx.line(format!("progression: f = {}, discriminant = {} ({} mod {})", p.f_integer, p.discriminant, p.discriminant_mod_l, p.l));
        if let Some(route) = &p.route {
            ctx.line(format!("route: {route}"));
        }
    }
    for h in &cert.hypotheses {
        ctx.line(format!("  [{}] {}: {}", tag(&h.status), h.name, h.detail));
    }
    let k = cert.k.map(|k| format!(" (k = {k})")).unwrap_or_default();
    ctx.line(format!("conclusion: {}{k}", tag(&cert.conclusion)));
}

fn exponent_of(cert: &Certificate) -> Result<u64> {
    cert.equation.n.parse().map_err(|_| Error::Invalid(format!("exponent {} is too large to search", cert.equation.n)))
}

/// Searches the box of size `bound` in the base ring of the certificate.
fn search_for(ctx: &Ctx<'_>, target: &Target, f: &Poly<Fq>, n: u64, bound: u64, mode: Mode) -> Result<SearchReport> {
    let opts = &ctx.search;
    match target {
        Target::Curve(CurveBackend::Rational(_)) => {
            let d = u32::try_from(bound).map_err(|_| Error::Invalid("degree bound too large".into()))?;
            search_rational(f, n, d, opts)
        }
        Target::Curve(CurveBackend::Elliptic(m)) => {
            let mode = match mode {
                Mode::Exhaustive => EllipticMode::Exhaustive,
                Mode::Pruned => EllipticMode::Pruned,
            };
            search_elliptic(m, f, n, bound, mode, opts)
        }
        Target::Multivariate { nvars, .. } => {
            let d = u32::try_from(bound).map_err(|_| Error::Invalid("degree bound too large".into()))?;
            search_multivar(f, n, &vec![d; *nvars], opts)
        }
    }
}

fn print_search(ctx: &mut Ctx<'_>, r: &SearchReport) {
    ctx.line(format!(
        "search: {} with Y^{} = {}, bounds {:?} {:?}: {} candidates, {} solutions ({} nonconstant)",
        r.ring,
        r.n,
        r.f,
        r.bounds.kind,
        r.bounds.values,
        r.tested_count,
        r.solutions.len(),
        r.nonconstant().count()
    ));
    for s in r.nonconstant().take(10) {
        ctx.line(format!("  X = {}, Y = {}", s.x, s.y));
    }
}

/// Prints the certificate, optionally confronts it with a search, and
/// writes the JSON.
fn finish_certificate(ctx: &mut Ctx<'_>, cert: &Certificate, target: &Target, f: &Poly<Fq>, bound: Option<u64>) -> Result<i32> {
    print_certificate(ctx, cert);
    ctx.emit_json(&cert.to_json())?;
    if let Some(b) = bound {
        let report = search_for(ctx, target, f, exponent_of(cert)?, b, Mode::Pruned)?;
        print_search(ctx, &report);
        confront(cert, &report)?;
    }
    Ok(if cert.certified() { EXIT_OK } else { EXIT_NOT_CERTIFIED })
}

#[derive(Serialize)]
struct TowerOutput<'a> {
    curve: String,
    class_number: u64,
    report: &'a crate::curves::TowerReport,
}

#[derive(Serialize)]
struct FactorRow {
    factor: String,
    multiplicity: u32,
}

#[derive(Serialize)]
struct FactorOutput {
    field: String,
    f: String,
    unit: String,
    factors: Vec<FactorRow>,
    splits: bool,
    splitting_degree: usize,
    seed: u64,
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let mut ctx = Ctx {
        out,
        json: cli.json,
        certify: CertifyOptions { base_change: false, cap: cli.cap, cycle_cap: cli.cycle_cap, seed: cli.seed },
        search: SearchOptions { cap: cli.cap, workers: cli.workers.max(1) },
    };
    match cli.command {
        Command::Certify { ring, f, q, p, levels, base_change, confront } => {
            let target = ring.target()?;
            let f = parse_poly(target.field(), &f, "X")?;
            let opts = CertifyOptions { base_change, ..ctx.certify };
            let cert = match (&target, p) {
                (Target::Curve(b), None) => check_constancy_criterion(b, &f, q, &opts)?,
                (Target::Curve(b), Some(p)) => check_tower(b, &f, p, q, levels, &opts)?,
                (Target::Multivariate { field, nvars }, None) => check_polynomial_ring(field, &f, q, *nvars, &opts)?,
                (Target::Multivariate { .. }, Some(_)) => {
                    return Err(Error::Invalid("--p needs a curve backend".into()));
                }
            };
            finish_certificate(&mut ctx, &cert, &target, &f, confront)
        }
        Command::Tower { ring, p, q, levels } => {
            let Target::Curve(backend) = ring.target()? else {
                return Err(Error::Invalid("towers need a curve backend".into()));
            };
            let frob = backend.frobenius(ctx.certify.cap)?;
            let report = frob.tower_qpart(p, q, levels, ctx.certify.cycle_cap)?;
            ctx.line(format!("curve: {} (h = {})", backend.to_spec(), frob.class_number));
            ctx.line(format!("v_{q}(h_n) for n = 0..={levels}: {:?}", report.vq_sequence));
            ctx.line(format!(
                "rigorous bound: {:?} (precision {:?}, cycle length {:?})",
                report.rigorous_bound, report.precision, report.cycle_length
            ));
            let json = serde_json::to_string_pretty(&TowerOutput {
                curve: backend.to_spec(),
                class_number: frob.class_number,
                report: &report,
            })
            .expect("tower report serializes");
            ctx.emit_json(&json)?;
            Ok(EXIT_OK)
        }
        Command::Progression { l, m, d, r, q, field, backend, a, vars, p, levels, base_change, confront } => {
            let params = ProgressionParams::new(m, d, r, l, q)?;
            let field_text = field.unwrap_or_else(|| format!("GF({l})"));
            let target = resolve(Some(&field_text), backend, a.as_deref(), vars)?;
            let ptarget = match (&target, p) {
                (Target::Curve(b), None) => ProgressionTarget::Curve(b.clone()),
                (Target::Curve(b), Some(p)) => ProgressionTarget::Tower { backend: b.clone(), p, levels },
                (Target::Multivariate { field, nvars }, None) => {
                    ProgressionTarget::Multivariate { field: field.clone(), nvars: *nvars }
                }
                (Target::Multivariate { .. }, Some(_)) => {
                    return Err(Error::Invalid("--p needs a curve backend".into()));
                }
            };
            let opts = CertifyOptions { base_change, ..ctx.certify };
            let cert = check_progression(&params, &ptarget, &opts)?;
            let built = build_progression_poly(&params)?;
            let emb = crate::poly::Embedding::find(&GaloisField::prime(l)?, target.field())?;
            let f = built.reduced.base_change(&emb)?;
            if f.is_zero() && confront.is_some() {
                ctx.line("f reduces to 0; nothing to search");
                print_certificate(&mut ctx, &cert);
                ctx.emit_json(&cert.to_json())?;
                return Ok(EXIT_NOT_CERTIFIED);
            }
            finish_certificate(&mut ctx, &cert, &target, &f, confront)
        }
        Command::Search { ring, f, n, bound, bounds, mode } => {
            let target = ring.target()?;
            let f = parse_poly(target.field(), &f, "X")?;
            let report = match (&target, bounds.is_empty()) {
                (Target::Multivariate { nvars, .. }, false) => {
                    if bounds.len() != *nvars {
                        return Err(Error::Invalid(format!("--bounds needs {nvars} entries")));
                    }
                    search_multivar(&f, n, &bounds, &ctx.search)?
                }
                (_, _) => {
                    let b = bound.ok_or_else(|| Error::Invalid("--bound is required".into()))?;
                    search_for(&ctx, &target, &f, n, b, mode)?
                }
            };
            print_search(&mut ctx, &report);
            ctx.emit_json(&report.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Factor { field, f } => {
            let field = parse_field(&field)?;
            let f = parse_poly(&field, &f, "X")?;
            let fac = f.factor_seeded(ctx.certify.seed)?;
            let mut factors: Vec<FactorRow> = fac
                .linear_roots
                .iter()
                .map(|(a, m)| FactorRow {
                    factor: (&Poly::x(&field) - &Poly::constant(a.clone())).to_text("X"),
                    multiplicity: *m,
                })
                .collect();
            factors.extend(fac.nonlinear.iter().map(|(g, m)| FactorRow { factor: g.to_text("X"), multiplicity: *m }));
            let parts: Vec<String> = factors.iter().map(|r| format!("({})^{}", r.factor, r.multiplicity)).collect();
            ctx.line(format!("{} = {} * {}", f.to_text("X"), fac.unit.to_text(), parts.join(" * ")));
            let output = FactorOutput {
                field: field.to_string(),
                f: f.to_text("X"),
                unit: fac.unit.to_text(),
                factors,
                splits: fac.splits(),
                splitting_degree: fac.splitting_degree(),
                seed: ctx.certify.seed,
            };
            ctx.emit_json(&serde_json::to_string_pretty(&output).expect("factorization serializes"))?;
            Ok(EXIT_OK)
        }
        Command::Selftest { mutant } => {
            let report = run_selftest(ctx.certify.seed, mutant);
            for s in &report.suites {
                ctx.line(format!("[{}] {} ({} checks): {}", if s.passed { "pass" } else { "FAIL" }, s.name, s.checked, s.detail));
            }
            ctx.emit_json(&serde_json::to_string_pretty(&report).expect("selftest report serializes"))?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_NOT_CERTIFIED })
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{first} (see --help)");
            return EXIT_USAGE;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Error::InternalContradiction(msg)) => {
            let _ = writeln!(err, "error: internal contradiction: {msg}");
            EXIT_CONTRADICTION
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
