//! Command-line front end: argument parsing, the flat config file,
//! structured output and the acceptance runner.
//!
//! Exit codes: 0 pass, 1 tolerance failure, 2 usage or domain error,
//! 3 I/O error.

pub mod accept;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::{fmt_f64, Field, Format, Record, Report};

use crate::coefficients::{
    cache_load, cache_store, delta_coefficients, divisor_power_coeffs, eisenstein_qcoeffs, load_maass_coefficients,
    CoefficientSeries, SpectralData, Values,
};
use crate::eisenstein::{
    eval_completed_eisenstein, eval_direct_lattice, eval_direct_sum, reduce_to_fundamental_domain, UpperHalfPoint,
};
use crate::error::Error;
use crate::extsquare::{parse_trial_fixture, run_trials};
use crate::gamma_factors::FourthRoot;
use crate::lseries::{
    completed_hecke_l, completed_maass_l, dirichlet_eval, fe_residual, rankin_selberg_l, FEKind, LSeriesSpec,
};
use crate::mellin_oracle::{load_identity_grid, parse_identity_grid, IdentityCase, IdentityReport, DEFAULT_GRID};
use crate::numerics::{complex_gamma, format_complex, parse_complex, Complex, EvalReport, PI, TAU};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "automorphic", version, about = "Automorphic L-functions, Eisenstein series and their identities")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Pass/fail tolerance; each command has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Directory for cached coefficient tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// RNG seed, recorded in every output (default 42).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` file with defaults for the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormKind {
    Delta,
    Eisenstein,
    Divisor,
    Maass,
}

#[derive(Debug, Clone, Args)]
pub struct FormArgs {
    #[arg(long, value_enum, default_value = "delta")]
    pub form: FormKind,
    /// Weight of the holomorphic Eisenstein series.
    #[arg(long)]
    pub k: Option<u32>,
    /// Exponent of the divisor series Σ_{d|n} d^{−ν}.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub nu: Option<Complex>,
    /// Maass coefficient file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LvalueKind {
    Standard,
    Completed,
    RankinSelberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeKindArg {
    Hecke,
    Maass,
    RankinSelberg,
    Prop1,
    Completed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    ExponentialMellin,
    GEta,
    BesselSingle,
    BesselDouble,
    Kernel,
    /// Every case of the identity grid fixture.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Expansion,
    Lattice,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Fast,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier coefficient table.
    Coeffs(FormArgs),
    /// Value of an L-function at s.
    Lvalue {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long, value_enum, default_value = "standard")]
        kind: LvalueKind,
    },
    /// Functional-equation residuals at one or more points.
    FeCheck {
        #[arg(value_enum)]
        kind: FeKindArg,
        #[command(flatten)]
        form: FormArgs,
        /// Comma-separated points.
        #[arg(long = "s", alias = "w", value_parser = complex_arg, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<Complex>,
    },
    /// Quadrature check of an archimedean integral identity.
    MellinVerify {
        #[arg(value_enum)]
        identity: IdentityArg,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        s: Option<Complex>,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        nu: Option<Complex>,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        mu: Option<Complex>,
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<i8>,
        #[arg(long)]
        eta: Option<u8>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<f64>,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        alpha: Option<Complex>,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        beta: Option<Complex>,
        #[arg(long)]
        delta: Option<u8>,
        /// Identity grid file for `grid`.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Seeded exterior-square identity trials.
    ExtsqVerify {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
        /// Trial fixture file; flags override its values.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Completed Eisenstein series E*(z, s).
    Eisenstein {
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        z: Complex,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long, value_enum, default_value = "expansion")]
        route: Route,
        /// Box size for the direct coset sum.
        #[arg(long, default_value_t = 40)]
        radius: u32,
    },
    /// Run the acceptance criteria.
    Accept {
        #[arg(value_enum, default_value = "fast")]
        suite: Suite,
        /// Maass coefficient file for criterion 8.
        #[arg(long)]
        maass_file: Option<PathBuf>,
    },
}

fn complex_arg(s: &str) -> Result<Complex, String> {
    parse_complex(s).ok_or_else(|| format!("not a complex number: {s:?}"))
}

/// Flags merged with the optional config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol: Option<f64>,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// A failed run: exit code and message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } | Error::CacheNotFound(_) | Error::CacheVersion { .. } | Error::CacheChecksum(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `key = value` lines (`#` comments). Keys mirror the global flags.
pub fn parse_config(text: &str) -> CliResult<GlobalArgs> {
    let mut g = GlobalArgs {
        tol: None,
        cache_dir: None,
        seed: None,
        out: None,
        format: None,
        config: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |m: &str| CliError::usage(format!("config line {}: {m}", i + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "tol" => g.tol = Some(value.parse().map_err(|_| bad("bad tol"))?),
            "cache-dir" | "cache_dir" => g.cache_dir = Some(PathBuf::from(value)),
            "seed" => g.seed = Some(value.parse().map_err(|_| bad("bad seed"))?),
            "out" => g.out = Some(PathBuf::from(value)),
            "format" => g.format = Some(value.parse().map_err(|e: String| bad(&e))?),
            _ => return Err(bad(&format!("unknown key {key:?}"))),
        }
    }
    Ok(g)
}

impl RunConfig {
    pub fn resolve(flags: &GlobalArgs) -> CliResult<RunConfig> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::from(Error::io(path, e)))?;
                parse_config(&text)?
            }
            None => parse_config("")?,
        };
        let cfg = RunConfig {
            tol: flags.tol.or(file.tol),
            cache_dir: flags.cache_dir.clone().or(file.cache_dir),
            seed: flags.seed.or(file.seed).unwrap_or(42),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(Format::Text),
        };
        if let Some(t) = cfg.tol {
            if !(t > 0.0) {
                return Err(CliError::usage(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(cfg)
    }
}

fn cache_key(form: &FormArgs) -> Option<String> {
    match form.form {
        FormKind::Delta => Some(format!("delta-{}", form.count)),
        FormKind::Eisenstein => form.k.map(|k| format!("eisenstein-k{k}-{}", form.count)),
        FormKind::Divisor | FormKind::Maass => None,
    }
}

fn build_form(form: &FormArgs) -> CliResult<CoefficientSeries> {
    Ok(match form.form {
        FormKind::Delta => delta_coefficients(form.count)?,
        FormKind::Eisenstein => {
            let k = form.k.ok_or_else(|| CliError::usage("--form eisenstein needs --k"))?;
            eisenstein_qcoeffs(k, form.count)?
        }
        FormKind::Divisor => {
            let nu = form.nu.ok_or_else(|| CliError::usage("--form divisor needs --nu"))?;
            divisor_power_coeffs(nu, form.count)?
        }
        FormKind::Maass => {
            let path = form.file.as_ref().ok_or_else(|| CliError::usage("--form maass needs --file"))?;
            load_maass_coefficients(path)?
        }
    })
}

/// The series for `form`, read from and written to the cache when one is
/// configured.
pub fn load_form(form: &FormArgs, cfg: &RunConfig) -> CliResult<CoefficientSeries> {
    let (Some(dir), Some(key)) = (&cfg.cache_dir, cache_key(form)) else {
        return build_form(form);
    };
    match cache_load(dir, &key) {
        Ok(series) => Ok(series),
        Err(Error::CacheNotFound(_)) => {
            let series = build_form(form)?;
            cache_store(&series, dir, &key)?;
            Ok(series)
        }
        Err(e) => Err(e.into()),
    }
}

fn eval_fields(mut rec: Record, r: &EvalReport) -> Record {
    rec = rec
        .with("value", Field::complex(r.value, r.error_estimate))
        .with("terms", Field::Int(r.terms as i128));
    rec.with("flags", Field::text(r.flags.join("; ")))
}

fn cmd_coeffs(form: &FormArgs, cfg: &RunConfig) -> CliResult<Report> {
    let series = load_form(form, cfg)?;
    let scale = series.scale;
    let mut records = Vec::with_capacity(series.len());
    for n in 1..=series.len() {
        let mut rec = Record::new().with("n", Field::Int(n as i128));
        rec = match &series.values {
            Values::Integer(v) => rec.with("a", Field::Int(v[n - 1])).with("scale", Field::text(scale.to_string())),
            Values::Complex(_) => {
                let a = series.get(n).expect("in range");
                let err = match form.form {
                    FormKind::Maass => 0.0,
                    _ => f64::EPSILON * (n as f64).ln().max(1.0) * a.norm(),
                };
                rec.with("a", Field::complex(a, err))
            }
        };
        records.push(rec);
    }
    Ok(Report {
        command: "coeffs".into(),
        seed: cfg.seed,
        tolerance: cfg.tol,
        records,
        passed: true,
    })
}

/// (2π)^{−w} Γ(w) for holomorphic forms, or the Maass factor
/// (i^η / 2^{1−η}) π^{−s} Γ((s+η+ν)/2) Γ((s+η−ν)/2).
fn completion_factor(spectral: &SpectralData, s: Complex) -> CliResult<Complex> {
    Ok(match spectral {
        SpectralData::Holomorphic { .. } => (-s * TAU.ln()).exp() * complex_gamma(s)?,
        SpectralData::Maass { lambda, parity } => {
            let (nu, eta) = (lambda / 2.0, (parity % 2) as f64);
            FourthRoot(parity % 2).value() / 2f64.powf(1.0 - eta)
                * (-s * PI.ln()).exp()
                * complex_gamma((s + eta + nu) / 2.0)?
                * complex_gamma((s + eta - nu) / 2.0)?
        }
        SpectralData::Gl4 { .. } => return Err(CliError::usage("GL(4) L-values are not supported")),
    })
}

fn cmd_lvalue(form: &FormArgs, s: Complex, kind: LvalueKind, cfg: &RunConfig) -> CliResult<Report> {
    let series = load_form(form, cfg)?;
    let tol = cfg.tol.unwrap_or(1e-9);
    let report = match kind {
        LvalueKind::RankinSelberg => rankin_selberg_l(&LSeriesSpec::rankin_selberg(series.clone(), series)?, s, tol)?,
        LvalueKind::Completed => match series.spectral {
            SpectralData::Holomorphic { .. } => completed_hecke_l(&series, s)?,
            _ => completed_maass_l(&series, s, tol)?,
        },
        LvalueKind::Standard => {
            let spec = LSeriesSpec::standard(series.clone());
            match dirichlet_eval(&spec, s, series.len()) {
                Ok(r) => r,
                Err(Error::Domain(_)) if series.is_cuspidal() => {
                    // continue through the completed function
                    let (w, completed) = match series.spectral {
                        SpectralData::Holomorphic { weight } => {
                            let w = s + (weight as f64 - 1.0) / 2.0;
                            (w, completed_hecke_l(&series, w)?)
                        }
                        _ => (s, completed_maass_l(&series, s, tol)?),
                    };
                    let g = completion_factor(&series.spectral, w)?;
                    EvalReport {
                        value: completed.value / g,
                        error_estimate: completed.error_estimate / g.norm(),
                        ..completed
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    let passed = report.error_estimate <= cfg.tol.unwrap_or(f64::INFINITY) && report.value.norm().is_finite();
    Ok(Report {
        command: "lvalue".into(),
        seed: cfg.seed,
        tolerance: cfg.tol,
        records: vec![eval_fields(Record::new().with("s", Field::text(format_complex(s))), &report)],
        passed,
    })
}

fn default_fe(kind: FeKindArg) -> (FEKind, f64, Complex) {
    use crate::numerics::c;
    match kind {
        FeKindArg::Hecke => (FEKind::Hecke, 1e-9, c(6.0, 3.0)),
        FeKindArg::Maass => (FEKind::Maass, 1e-12, c(0.5, 1.0)),
        FeKindArg::RankinSelberg => (FEKind::RankinSelberg, 1e-6, c(0.3, 0.0)),
        FeKindArg::Prop1 => (FEKind::Prop1, 1e-5, c(0.6, 0.0)),
        FeKindArg::Completed => (FEKind::Completed, 1e-6, c(0.45, 2.0)),
    }
}

fn cmd_fe_check(kind: FeKindArg, form: &FormArgs, points: &[Complex], cfg: &RunConfig) -> CliResult<Report> {
    let (fe_kind, default_tol, default_point) = default_fe(kind);
    let tol = cfg.tol.unwrap_or(default_tol);
    let series = load_form(form, cfg)?;
    let spec = match kind {
        FeKindArg::RankinSelberg | FeKindArg::Prop1 | FeKindArg::Completed => {
            LSeriesSpec::rankin_selberg(series.clone(), series)?
        }
        _ => LSeriesSpec::standard(series),
    };
    let points = if points.is_empty() { vec![default_point] } else { points.to_vec() };
    let mut records = Vec::new();
    let mut passed = true;
    for &s in &points {
        let r = fe_residual(fe_kind, &spec, s, (tol * 1e-3).max(1e-13))?;
        let ok = r.rel_residual <= tol;
        if !ok {
            eprintln!(
                "fe-check {:?} failed at s = {}: relative residual {:e} > {tol:e}",
                kind,
                format_complex(s),
                r.rel_residual
            );
        }
        passed &= ok;
        let rounding = f64::EPSILON * r.lhs.norm().max(r.rhs.norm());
        records.push(
            Record::new()
                .with("s", Field::text(format_complex(s)))
                .with("lhs", Field::complex(r.lhs, rounding))
                .with("rhs", Field::complex(r.rhs, rounding))
                .with("abs_residual", Field::real(r.abs_residual, rounding))
                .with("rel_residual", Field::real(r.rel_residual, f64::EPSILON))
                .with("gamma_factor", Field::text(r.gamma_expr_used.to_string()))
                .with("pass", Field::Bool(ok)),
        );
    }
    Ok(Report {
        command: format!("fe-check {}", kind.to_possible_value().expect("named").get_name()),
        seed: cfg.seed,
        tolerance: Some(tol),
        records,
        passed,
    })
}

fn identity_record(r: &IdentityReport, tol: f64) -> Record {
    let params: Vec<String> = r.parameter_point.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let q = r.quadrature_diag.abs_error_estimate;
    let closed = f64::EPSILON * 16.0 * r.rhs.norm();
    Record::new()
        .with("identity", Field::text(r.identity_id.clone()))
        .with("parameters", Field::text(params.join(" ")))
        .with("lhs", Field::complex(r.lhs, q))
        .with("rhs", Field::complex(r.rhs, closed))
        .with("abs_residual", Field::real(r.abs_residual, q + closed))
        .with("pass", Field::Bool(r.abs_residual <= tol))
}

#[allow(clippy::too_many_arguments)]
fn identity_case(
    identity: IdentityArg,
    s: Option<Complex>,
    nu: Option<Complex>,
    mu: Option<Complex>,
    sign: Option<i8>,
    eta: Option<u8>,
    xyz: (Option<f64>, Option<f64>, Option<f64>),
    alpha: Option<Complex>,
    beta: Option<Complex>,
    delta: Option<u8>,
) -> CliResult<IdentityCase> {
    fn need<T>(v: Option<T>, name: &str) -> CliResult<T> {
        v.ok_or_else(|| CliError::usage(format!("this identity needs --{name}")))
    }
    Ok(match identity {
        IdentityArg::ExponentialMellin => IdentityCase::ExponentialMellin {
            sign: need(sign, "sign")?,
            s: need(s, "s")?,
        },
        IdentityArg::GEta => IdentityCase::GEta {
            eta: need(eta, "eta")?,
            s: need(s, "s")?,
        },
        IdentityArg::BesselSingle => IdentityCase::BesselSingle {
            nu: need(nu, "nu")?,
            s: need(s, "s")?,
        },
        IdentityArg::BesselDouble => IdentityCase::BesselDouble {
            mu: need(mu, "mu")?,
            nu: need(nu, "nu")?,
            s: need(s, "s")?,
        },
        IdentityArg::Kernel => IdentityCase::Kernel {
            x: need(xyz.0, "x")?,
            y: need(xyz.1, "y")?,
            z: need(xyz.2, "z")?,
            alpha: need(alpha, "alpha")?,
            beta: need(beta, "beta")?,
            delta: need(delta, "delta")?,
        },
        IdentityArg::Grid => unreachable!("grid is handled by the caller"),
    })
}

fn cmd_mellin(cases: Vec<IdentityCase>, cfg: &RunConfig) -> CliResult<Report> {
    use rayon::prelude::*;
    let reports = cases
        .par_iter()
        .map(|case| case.run().map(|r| (case.tolerance(), r)))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let mut records = Vec::new();
    let mut passed = true;
    for (case_tol, r) in &reports {
        let tol = cfg.tol.unwrap_or(*case_tol);
        if r.abs_residual > tol {
            eprintln!("mellin-verify failed: {} residual {:e} > {tol:e}", r.describe(), r.abs_residual);
            passed = false;
        }
        records.push(identity_record(r, tol));
    }
    Ok(Report {
        command: "mellin-verify".into(),
        seed: cfg.seed,
        tolerance: cfg.tol,
        records,
        passed,
    })
}

fn cmd_extsq(trials: Option<usize>, kmax: Option<usize>, fixture: Option<&Path>, cfg: &RunConfig, seed_flag: bool) -> CliResult<Report> {
    let mut fx = match fixture {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::from(Error::io(path, e)))?;
            parse_trial_fixture(&text)?
        }
        None => parse_trial_fixture(accept::TRIAL_FIXTURE)?,
    };
    if seed_flag {
        fx.seed = cfg.seed;
    }
    fx.trials = trials.unwrap_or(fx.trials);
    fx.kmax = kmax.unwrap_or(fx.kmax);
    let tol = cfg.tol.unwrap_or(fx.tolerance);
    let batch = run_trials(fx.seed, fx.trials, fx.kmax)?;
    let passed = batch.js_max <= tol && batch.littlewood_max <= fx.littlewood_tolerance;
    if !passed {
        eprintln!(
            "extsq-verify failed: js {:e} (trial {}), littlewood {:e} (trial {})",
            batch.js_max, batch.js_worst_trial, batch.littlewood_max, batch.littlewood_worst_trial
        );
    }
    let rec = Record::new()
        .with("trials", Field::Int(batch.trials as i128))
        .with("kmax", Field::Int(batch.order as i128))
        .with("js_max", Field::real(batch.js_max, f64::EPSILON))
        .with("js_worst_trial", Field::Int(batch.js_worst_trial as i128))
        .with("littlewood_max", Field::real(batch.littlewood_max, f64::EPSILON))
        .with("littlewood_worst_trial", Field::Int(batch.littlewood_worst_trial as i128));
    Ok(Report {
        command: "extsq-verify".into(),
        seed: fx.seed,
        tolerance: Some(tol),
        records: vec![rec],
        passed,
    })
}

fn cmd_eisenstein(z: Complex, s: Complex, route: Route, radius: u32, cfg: &RunConfig) -> CliResult<Report> {
    let point = UpperHalfPoint::new(z.re, z.im)?;
    let reduced = reduce_to_fundamental_domain(point).reduced;
    let r = match route {
        Route::Expansion => eval_completed_eisenstein(s, point, cfg.tol.unwrap_or(1e-12))?,
        Route::Lattice => eval_direct_lattice(s, point)?,
        Route::Direct => eval_direct_sum(s, point, radius)?,
    };
    let rec = Record::new()
        .with("z", Field::text(format_complex(z)))
        .with("reduced_z", Field::text(format_complex(reduced.to_complex())))
        .with("s", Field::text(format_complex(s)));
    Ok(Report {
        command: "eisenstein".into(),
        seed: cfg.seed,
        tolerance: cfg.tol,
        passed: r.error_estimate <= cfg.tol.unwrap_or(f64::INFINITY),
        records: vec![eval_fields(rec, &r)],
    })
}

fn cmd_accept(suite: Suite, maass_file: Option<PathBuf>, cfg: &RunConfig) -> CliResult<Report> {
    let opts = accept::AcceptOptions { maass_file };
    let mut records = Vec::new();
    let mut passed = true;
    for id in accept::suite(suite == Suite::Full) {
        let r = accept::run_criterion(id, &opts);
        eprintln!("{}", r.line());
        passed &= r.status != accept::Status::Fail;
        let measured: Vec<String> = r.checks.iter().map(|k| format!("{}={:.3e}", k.name, k.measured)).collect();
        let threshold: Vec<String> = r.checks.iter().map(|k| format!("{}={:.0e}", k.name, k.threshold)).collect();
        records.push(
            Record::new()
                .with("id", Field::Int(id as i128))
                .with("name", Field::text(r.name))
                .with("measured", Field::text(measured.join(" ")))
                .with("threshold", Field::text(threshold.join(" ")))
                .with("status", Field::text(r.status.label()))
                .with("note", Field::text(r.note)),
        );
    }
    Ok(Report {
        command: format!("accept {}", if suite == Suite::Full { "full" } else { "fast" }),
        seed: cfg.seed,
        tolerance: cfg.tol,
        records,
        passed,
    })
}

/// Run a parsed command line and return its report.
pub fn execute(cli: &Cli) -> CliResult<(Report, RunConfig)> {
    let cfg = RunConfig::resolve(&cli.global)?;
    let report = match &cli.command {
        Command::Coeffs(form) => cmd_coeffs(form, &cfg)?,
        Command::Lvalue { form, s, kind } => cmd_lvalue(form, *s, *kind, &cfg)?,
        Command::FeCheck { kind, form, points } => cmd_fe_check(*kind, form, points, &cfg)?,
        Command::MellinVerify {
            identity,
            s,
            nu,
            mu,
            sign,
            eta,
            x,
            y,
            z,
            alpha,
            beta,
            delta,
            fixture,
        } => {
            let cases = if *identity == IdentityArg::Grid {
                match fixture {
                    Some(path) => load_identity_grid(path)?,
                    None => parse_identity_grid(DEFAULT_GRID)?,
                }
            } else {
                vec![identity_case(*identity, *s, *nu, *mu, *sign, *eta, (*x, *y, *z), *alpha, *beta, *delta)?]
            };
            cmd_mellin(cases, &cfg)?
        }
        Command::ExtsqVerify { trials, kmax, fixture } => {
            let seed_given = cli.global.seed.is_some() || cli.global.config.is_some();
            cmd_extsq(*trials, *kmax, fixture.as_deref(), &cfg, seed_given)?
        }
        Command::Eisenstein { z, s, route, radius } => cmd_eisenstein(*z, *s, *route, *radius, &cfg)?,
        Command::Accept { suite, maass_file } => cmd_accept(*suite, maass_file.clone(), &cfg)?,
    };
    Ok((report, cfg))
}

/// Full program: parse, run, write output, and return the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (report, cfg) = match execute(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    let text = report.render(cfg.format);
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| (path.clone(), e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| (PathBuf::from("<stdout>"), e)),
    };
    if let Err((path, e)) = written {
        eprintln!("error: cannot write {}: {e}", path.display());
        return EXIT_IO;
    }
    if report.passed {
        EXIT_PASS
    } else {
        EXIT_TOLERANCE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CliResult<Report> {
        let mut full = vec!["automorphic"];
        full.extend_from_slice(args);
        let cli = Cli::try_parse_from(full).map_err(|e| CliError::usage(e.to_string()))?;
        execute(&cli).map(|(r, _)| r)
    }

    fn last_field(r: &Report, key: &str) -> Field {
        r.records.last().unwrap().0.iter().find(|(k, _)| k == key).unwrap().1.clone()
    }

    #[test]
    fn coeffs_examples() {
        let r = run(&["coeffs", "--form", "delta", "--count", "10"]).unwrap();
        assert_eq!(last_field(&r, "a"), Field::Int(-115920));
        let r = run(&["coeffs", "--form", "divisor", "--nu", "1", "--count", "6"]).unwrap();
        match last_field(&r, "a") {
            Field::Complex { value, .. } => assert!((value - 2.0).norm() < 1e-15),
            other => panic!("{other:?}"),
        }
        let r = run(&["coeffs", "--form", "eisenstein", "--k", "4", "--count", "1"]).unwrap();
        assert_eq!(last_field(&r, "a"), Field::Int(1));
        assert_eq!(last_field(&r, "scale"), Field::text("240"));
    }

    #[test]
    fn fe_check_and_mellin_examples() {
        let r = run(&["fe-check", "hecke", "--form", "delta", "--w", "6+3i"]).unwrap();
        assert!(r.passed);
        let r = run(&["mellin-verify", "bessel-single", "--nu", "0", "--s", "2"]).unwrap();
        assert!(r.passed);
        for key in ["lhs", "rhs"] {
            match last_field(&r, key) {
                Field::Complex { value, .. } => assert!((value - 1.0).norm() < 1e-9, "{value}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn extsq_example() {
        let r = run(&["extsq-verify", "--trials", "100", "--kmax", "12", "--seed", "42"]).unwrap();
        assert!(r.passed);
        assert_eq!(r.seed, 42);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_from(["automorphic", "--format", "json", "coeffs", "--count", "3", "--out", "/nonexistent-dir/x"]), EXIT_IO);
        assert_eq!(run_from(["automorphic", "coeffs", "--count", "0"]), EXIT_USAGE);
        assert_eq!(run_from(["automorphic", "nonsense"]), EXIT_USAGE);
        assert_eq!(run_from(["automorphic", "eisenstein", "--z", "0.1-1i", "--s", "2"]), EXIT_USAGE);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o.txt");
        let out = out.to_str().unwrap();
        assert_eq!(run_from(["automorphic", "--tol", "1e-40", "mellin-verify", "bessel-single", "--nu", "0.3", "--s", "2", "--out", out]), EXIT_TOLERANCE);
        assert_eq!(run_from(["automorphic", "fe-check", "hecke", "--s", "5+1i,7-2i", "--out", out]), EXIT_PASS);
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# defaults\nseed = 7\nformat = csv\ntol = 1e-3\n").unwrap();
        let p = path.to_str().unwrap();
        let cli = Cli::try_parse_from(["automorphic", "--config", p, "--seed", "9", "coeffs"]).unwrap();
        let cfg = RunConfig::resolve(&cli.global).unwrap();
        assert_eq!((cfg.seed, cfg.format, cfg.tol), (9, Format::Csv, Some(1e-3)));
        assert!(parse_config("colour = blue").is_err());
        assert!(parse_config("tol = -1").is_ok());
        let cli = Cli::try_parse_from(["automorphic", "--tol", "-1", "coeffs"]);
        assert!(cli.is_err() || RunConfig::resolve(&cli.unwrap().global).is_err());
    }

    #[test]
    fn cache_round_trip_through_cli() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let a = run(&["--cache-dir", d, "coeffs", "--count", "30"]).unwrap();
        assert!(dir.path().join("delta-30.cache").exists());
        let b = run(&["--cache-dir", d, "coeffs", "--count", "30"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["--format", "json", "lvalue", "--form", "delta", "--count", "80", "--s", "0.5+3i"];
        let a = run(&args).unwrap().render(Format::Json);
        assert_eq!(a, run(&args).unwrap().render(Format::Json));
        assert!(a.contains("\"value_err\""));
    }

    #[test]
    fn lvalue_continues_past_the_abscissa() {
        // L(s) from the series at s = 2 and through Λ agree
        let series = run(&["lvalue", "--count", "200", "--s", "2"]).unwrap();
        let via = {
            let d = delta_coefficients(80).unwrap();
            let w = crate::numerics::c(7.5, 0.0);
            completed_hecke_l(&d, w).unwrap().value / completion_factor(&d.spectral, w).unwrap()
        };
        match last_field(&series, "value") {
            Field::Complex { value, err } => assert!((value - via).norm() <= err, "{value} {via} {err}"),
            other => panic!("{other:?}"),
        }
    }
}
