//! Command-line front end. Each command writes `report.json` into the output directory,
//! plus CSV and polygon artifacts where they apply, and maps its outcome to an exit code.

mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub use output::to_json;

use crate::canonical::{
    boundary_constants, classify_asymptotics, evaluate_density, existence, sample_valid_params, synthesize,
    validate_params, CanonicalParams, Family,
};
use crate::developing::{
    boundary_circles, cross_ratio_defect, developing_map_numeric, solve_global, PROBE_QUADRUPLES,
};
use crate::error::Error;
use crate::geometry::Curvature;
use crate::polygon::{alexandrov_partial_check, fit_accessory, polygon_from_spec, PolygonVertex, PolygonalMetricSpec};
use crate::schwarzian::{eval_q, validate_spec, Pole, SchwarzianSpec};
use crate::verification::{
    finiteness_of_map, grid_csv, verify_canonical, GridSpec, MetricField, Tolerances, Verdict,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Interior sampling density of the embeddedness certificate.
const CERTIFICATE_DENSITY: usize = 24;

#[derive(Debug, Parser)]
#[command(name = "liouville", version, about = "Constant-curvature metrics on the half-plane with boundary singularities")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory for reports.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Overrides every numerical tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Points per side of the residual grid.
    #[arg(long, global = true, default_value_t = 50)]
    pub grid_n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    #[command(subcommand)]
    Canonical(CanonicalCmd),
    #[command(subcommand)]
    Schwarzian(SchwarzianCmd),
    #[command(subcommand)]
    Develop(DevelopCmd),
    #[command(subcommand)]
    Polygon(PolygonCmd),
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Debug, Args)]
pub struct ParamsArg {
    /// Canonical parameters: a JSON file or an inline JSON object.
    #[arg(long)]
    pub params: String,
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Schwarzian or polygon spec: a JSON file or an inline JSON object.
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Subcommand)]
pub enum CanonicalCmd {
    Validate(ParamsArg),
    Eval {
        #[command(flatten)]
        params: ParamsArg,
        /// Evaluation point `s t`; repeatable.
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["S", "T"])]
        at: Vec<f64>,
    },
    Constants(ParamsArg),
    Synthesize {
        #[arg(long = "K", allow_negative_numbers = true, value_parser = parse_curvature)]
        k: Curvature,
        #[arg(long, allow_negative_numbers = true)]
        c1: f64,
        #[arg(long, allow_negative_numbers = true)]
        c2: f64,
    },
    Verify(ParamsArg),
}

#[derive(Debug, Subcommand)]
pub enum SchwarzianCmd {
    Validate(SpecArg),
    Eval {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["S", "T"])]
        at: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DevelopCmd {
    /// Exact map for `Q = c/z²`.
    SolveGlobal {
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
    },
    /// ODE-backed map for a Schwarzian spec.
    Numeric(SpecArg),
}

#[derive(Debug, Subcommand)]
pub enum PolygonCmd {
    /// Trace the polygon and write its artifacts.
    Extract(SpecArg),
    /// Two-pole accessory parameter fit.
    Fit {
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        q: Vec<f64>,
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        alpha: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        target_alpha_inf: f64,
    },
    /// Extract and also require the structural invariants and a local certificate.
    Check(SpecArg),
}

#[derive(Debug, Subcommand)]
pub enum ReportCmd {
    /// Seeded suite over every module.
    All,
}

fn parse_curvature(s: &str) -> Result<Curvature, String> {
    let k: i8 = s.parse().map_err(|_| format!("curvature must be -1, 0 or 1, got {s:?}"))?;
    Curvature::try_from(k).map_err(|e| e.to_string())
}

/// Failure modes of a run, each with its exit code.
#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Internal(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Internal(e)
    }
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub reason: Option<String>,
    pub result: Value,
    pub verdicts: Vec<Verdict>,
    /// Extra files, by name.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    fn judged(result: Value, verdicts: Vec<Verdict>) -> Self {
        let code = if verdicts.iter().all(|v| v.pass) { EXIT_PASS } else { EXIT_FAIL };
        Outcome { code, reason: None, result, verdicts, files: vec![] }
    }

    fn negative(reason: impl Into<String>, result: Value) -> Self {
        Outcome { code: EXIT_NEGATIVE, reason: Some(reason.into()), result, verdicts: vec![], files: vec![] }
    }

    fn with_file(mut self, name: &str, contents: String) -> Self {
        self.files.push((name.to_string(), contents));
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    status: &'static str,
    reason: Option<&'a str>,
    seed: u64,
    timestamp: u64,
    result: &'a Value,
    verdicts: &'a [Verdict],
}

fn verdict(check: &str, value: f64, tolerance: f64) -> Verdict {
    Verdict { check: check.into(), value, tolerance, pass: value <= tolerance }
}

fn to_value<S: Serialize>(x: &S) -> Result<Value, RunError> {
    serde_json::to_value(x).map_err(|e| RunError::Internal(e.into()))
}

/// Reads a JSON argument: inline when it starts with `{`, otherwise a path.
fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, RunError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| RunError::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| RunError::Usage(format!("invalid JSON in {arg}: {e}")))
}

fn points(at: &[f64], default: &[[f64; 2]]) -> Vec<Complex64> {
    if at.is_empty() {
        default.iter().map(|[s, t]| Complex64::new(*s, *t)).collect()
    } else {
        at.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
    }
}

const PROBES: [[f64; 2]; 4] = [[0.5, 1.0], [-1.0, 0.5], [2.0, 2.0], [0.0, 0.1]];

impl RunConfig {
    fn tolerances(&self) -> Tolerances {
        self.tol.map(Tolerances::uniform).unwrap_or_default()
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn grid(&self) -> GridSpec {
        GridSpec { nx: self.grid_n, ny: self.grid_n, tol: self.tolerances().liouville, ..GridSpec::default() }
    }

    fn name(&self) -> String {
        let (group, leaf) = match &self.command {
            Command::Canonical(c) => (
                "canonical",
                match c {
                    CanonicalCmd::Validate(_) => "validate",
                    CanonicalCmd::Eval { .. } => "eval",
                    CanonicalCmd::Constants(_) => "constants",
                    CanonicalCmd::Synthesize { .. } => "synthesize",
                    CanonicalCmd::Verify(_) => "verify",
                },
            ),
            Command::Schwarzian(c) => (
                "schwarzian",
                match c {
                    SchwarzianCmd::Validate(_) => "validate",
                    SchwarzianCmd::Eval { .. } => "eval",
                },
            ),
            Command::Develop(c) => (
                "develop",
                match c {
                    DevelopCmd::SolveGlobal { .. } => "solve-global",
                    DevelopCmd::Numeric(_) => "numeric",
                },
            ),
            Command::Polygon(c) => (
                "polygon",
                match c {
                    PolygonCmd::Extract(_) => "extract",
                    PolygonCmd::Fit { .. } => "fit",
                    PolygonCmd::Check(_) => "check",
                },
            ),
            Command::Report(ReportCmd::All) => ("report", "all"),
        };
        format!("{group} {leaf}")
    }

    fn validate(&self) -> Result<(), RunError> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(RunError::Usage(format!("--tol must be positive, got {t}")));
            }
        }
        if self.grid_n < 3 {
            return Err(RunError::Usage(format!("--grid-n must be at least 3, got {}", self.grid_n)));
        }
        Ok(())
    }
}

/// Parses arguments, runs the command, writes the reports and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
        }
    };
    run_config(&cfg)
}

/// Runs a parsed configuration.
pub fn run_config(cfg: &RunConfig) -> i32 {
    let outcome = cfg.validate().and_then(|_| match &cfg.command {
        Command::Canonical(c) => run_canonical(cfg, c),
        Command::Schwarzian(c) => run_schwarzian(c),
        Command::Develop(c) => run_develop(cfg, c),
        Command::Polygon(c) => run_polygon(cfg, c),
        Command::Report(ReportCmd::All) => run_report_all(cfg),
    });
    let outcome = match outcome {
        Ok(o) => o,
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            return EXIT_USAGE;
        }
        Err(RunError::Internal(e)) => Outcome {
            code: EXIT_FAIL,
            reason: Some(e.to_string()),
            result: Value::Null,
            verdicts: vec![],
            files: vec![],
        },
    };
    match write_outcome(cfg, &outcome) {
        Ok(path) => {
            let status = status_word(outcome.code);
            match &outcome.reason {
                Some(r) => println!("{status}: {r} ({})", path.display()),
                None => println!("{status} ({})", path.display()),
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("cannot write reports: {e}");
            EXIT_FAIL
        }
    }
}

fn status_word(code: i32) -> &'static str {
    match code {
        EXIT_PASS => "pass",
        EXIT_NEGATIVE => "negative",
        _ => "fail",
    }
}

fn write_outcome(cfg: &RunConfig, o: &Outcome) -> std::io::Result<PathBuf> {
    fs::create_dir_all(&cfg.out)?;
    let name = cfg.name();
    let env = Envelope {
        command: &name,
        status: status_word(o.code),
        reason: o.reason.as_deref(),
        seed: cfg.seed,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        result: &o.result,
        verdicts: &o.verdicts,
    };
    let path = cfg.out.join("report.json");
    write(&path, &to_json(&env).map_err(std::io::Error::other)?)?;
    for (f, contents) in &o.files {
        write(&cfg.out.join(f), contents)?;
    }
    Ok(path)
}

fn write(path: &Path, contents: &str) -> std::io::Result<()> {
    fs::write(path, contents)
}

/// Rejects parameters outside the validity region as an expected negative.
fn checked_params(arg: &ParamsArg) -> Result<Result<CanonicalParams, Outcome>, RunError> {
    let p: CanonicalParams = read_json(&arg.params)?;
    let report = validate_params(&p);
    Ok(match report.validity.reason() {
        Some(r) => Err(Outcome::negative(r, to_value(&report)?)),
        None => Ok(p),
    })
}

pub fn run_canonical(cfg: &RunConfig, cmd: &CanonicalCmd) -> Result<Outcome, RunError> {
    match cmd {
        CanonicalCmd::Validate(arg) => {
            let p: CanonicalParams = read_json(&arg.params)?;
            let report = validate_params(&p);
            Ok(match report.validity.reason() {
                Some(r) => Outcome::negative(r, to_value(&report)?),
                None => Outcome::judged(to_value(&report)?, vec![]),
            })
        }
        CanonicalCmd::Eval { params, at } => {
            let p = match checked_params(params)? {
                Ok(p) => p,
                Err(o) => return Ok(o),
            };
            let samples = points(at, &PROBES)
                .into_iter()
                .map(|z| {
                    let v = evaluate_density(&p, z)?;
                    Ok(json!({ "z": [z.re, z.im], "v": v, "ev": v.exp() }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let field = MetricField::from_canonical(&p);
            Ok(Outcome::judged(json!({ "params": p, "samples": samples }), vec![])
                .with_file("field.csv", grid_csv(&field, &cfg.grid())?))
        }
        CanonicalCmd::Constants(arg) => {
            let p = match checked_params(arg)? {
                Ok(p) => p,
                Err(o) => return Ok(o),
            };
            let b = boundary_constants(&p);
            Ok(Outcome::judged(
                json!({
                    "params": p,
                    "constants": b,
                    "existence": existence(p.k, b.c1, b.c2),
                    "asymptotics": classify_asymptotics(&p),
                }),
                vec![],
            ))
        }
        CanonicalCmd::Synthesize { k, c1, c2 } => {
            let requested = json!({ "K": k, "c1": c1, "c2": c2 });
            match synthesize(*k, *c1, *c2) {
                Ok(p) => {
                    let b = boundary_constants(&p);
                    let err = (b.c1 - c1).abs().max((b.c2 - c2).abs());
                    Ok(Outcome::judged(
                        json!({ "requested": requested, "params": p, "constants": b, "round_trip_error": err }),
                        vec![verdict("round_trip", err, cfg.tol_or(1e-9))],
                    ))
                }
                Err(Error::NoSolution(r)) => Ok(Outcome::negative(r, json!({ "requested": requested }))),
                Err(e) => Err(e.into()),
            }
        }
        CanonicalCmd::Verify(arg) => {
            let p = match checked_params(arg)? {
                Ok(p) => p,
                Err(o) => return Ok(o),
            };
            let rep = verify_canonical(&p, &cfg.tolerances())?;
            let field = MetricField::from_canonical(&p);
            let verdicts = rep.verdicts.clone();
            Ok(Outcome::judged(json!({ "params": p, "report": rep }), verdicts)
                .with_file("field.csv", grid_csv(&field, &cfg.grid())?))
        }
    }
}

fn run_schwarzian(cmd: &SchwarzianCmd) -> Result<Outcome, RunError> {
    match cmd {
        SchwarzianCmd::Validate(arg) => {
            let spec: SchwarzianSpec = read_json(&arg.spec)?;
            let report = validate_spec(&spec);
            Ok(match report.validity.reason() {
                Some(r) => Outcome::negative(r, to_value(&report)?),
                None => Outcome::judged(to_value(&report)?, vec![]),
            })
        }
        SchwarzianCmd::Eval { spec, at } => {
            let spec: SchwarzianSpec = read_json(&spec.spec)?;
            let samples = points(at, &PROBES)
                .into_iter()
                .map(|z| {
                    let q = eval_q(&spec, z)?;
                    Ok(json!({ "z": [z.re, z.im], "q": [q.re, q.im] }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(Outcome::judged(json!({ "spec": spec, "samples": samples }), vec![]))
        }
    }
}

fn default_basepoint(spec: &SchwarzianSpec) -> Complex64 {
    let qs: Vec<Pole> = spec.pole_list();
    let mid = if qs.is_empty() { 0.0 } else { qs.iter().map(|p| p.q).sum::<f64>() / qs.len() as f64 };
    Complex64::new(mid, 1.0)
}

fn run_develop(cfg: &RunConfig, cmd: &DevelopCmd) -> Result<Outcome, RunError> {
    match cmd {
        DevelopCmd::SolveGlobal { c } => {
            let dm = solve_global(*c);
            let tol = cfg.tol_or(1e-8);
            let pos = boundary_circles(&dm, 0.1, 10.0)?;
            let neg = boundary_circles(&dm, -10.0, -0.1)?;
            let finiteness = finiteness_of_map(&dm)?;
            Ok(Outcome::judged(
                json!({ "c": c, "map": dm, "case": dm.case(), "circles": [pos, neg], "finiteness": finiteness }),
                vec![verdict("circle_fit_positive", pos.residual, tol), verdict("circle_fit_negative", neg.residual, tol)],
            ))
        }
        DevelopCmd::Numeric(arg) => {
            let spec: SchwarzianSpec = read_json(&arg.spec)?;
            if let Some(r) = validate_spec(&spec).validity.reason() {
                return Ok(Outcome::negative(r, json!({ "spec": spec })));
            }
            let dm = developing_map_numeric(&spec, default_basepoint(&spec))?;
            let tol = cfg.tol_or(1e-6);
            let mut verdicts = vec![];
            let mut result = json!({ "map": dm });
            if let Some(c) = spec.global_c() {
                let d = cross_ratio_defect(&dm, &solve_global(c.re), &PROBE_QUADRUPLES)?;
                verdicts.push(verdict("cross_ratio_vs_closed_form", d, tol));
                result["cross_ratio_defect"] = json!(d);
            } else {
                let qs: Vec<f64> = spec.pole_list().iter().map(|p| p.q).collect();
                let mut fits = vec![];
                for (j, w) in qs.windows(2).enumerate() {
                    let m = 0.1 * (w[1] - w[0]);
                    let fit = boundary_circles(&dm, w[0] + m, w[1] - m)?;
                    verdicts.push(verdict(&format!("circle_fit_{}", j + 1), fit.residual, tol));
                    fits.push(fit);
                }
                result["circles"] = to_value(&fits)?;
            }
            Ok(Outcome::judged(result, verdicts))
        }
    }
}

/// Polygon, boundary trace, certificate and the verdicts shared by extract and check.
fn polygon_outcome(cfg: &RunConfig, spec: &PolygonalMetricSpec, strict: bool) -> Result<Outcome, RunError> {
    let report = match polygon_from_spec(spec) {
        Ok(r) => r,
        Err(Error::ConstraintViolation(r)) => return Ok(Outcome::negative(r, json!({ "spec": spec }))),
        Err(e) => return Err(e.into()),
    };
    let map = spec.developing_map()?;
    let cert = alexandrov_partial_check(&map, &report.polygon, CERTIFICATE_DENSITY);
    let tol = cfg.tol_or(1e-6);
    let angle_dev = report
        .polygon
        .vertices
        .iter()
        .map(PolygonVertex::angle_deviation)
        .fold(0.0, f64::max);
    let mut verdicts = vec![
        verdict("closure_residual", report.closure_residual, tol),
        verdict("circle_fit_residual", report.fit_residual, tol),
        verdict("vertex_angle_deviation", angle_dev, cfg.tol_or(1e-3)),
    ];
    let violations = report.polygon.invariant_violations(tol);
    if strict {
        verdicts.push(verdict("invariant_violations", violations.len() as f64, 0.0));
        verdicts.push(verdict("local_diffeomorphism", if cert.local_diffeomorphism { 0.0 } else { 1.0 }, 0.0));
        verdicts.push(verdict("boundary_regular", if cert.boundary_regular { 0.0 } else { 1.0 }, 0.0));
    }
    Ok(Outcome::judged(
        json!({
            "spec": spec,
            "closure_residual": report.closure_residual,
            "fit_residual": report.fit_residual,
            "vertex_angles": report.polygon.vertices.iter().map(|v| [v.angle, v.measured_angle]).collect::<Vec<_>>(),
            "boundary_constants": report.boundary_constants,
            "curvature_constants": report.curvature_constants,
            "invariant_violations": violations,
            "certificate_full": cert.full,
        }),
        verdicts,
    )
    .with_file("polygon.json", to_json(&report).map_err(|e| RunError::Internal(e.into()))?)
    .with_file("boundary.csv", report.polygon.boundary_csv())
    .with_file("certificate.json", to_json(&cert).map_err(|e| RunError::Internal(e.into()))?))
}

pub fn run_polygon(cfg: &RunConfig, cmd: &PolygonCmd) -> Result<Outcome, RunError> {
    match cmd {
        PolygonCmd::Extract(arg) => polygon_outcome(cfg, &read_json(&arg.spec)?, false),
        PolygonCmd::Check(arg) => polygon_outcome(cfg, &read_json(&arg.spec)?, true),
        PolygonCmd::Fit { q, alpha, target_alpha_inf } => {
            let (q, alpha) = ([q[0], q[1]], [alpha[0], alpha[1]]);
            let requested = json!({ "q": q, "alpha": alpha, "target_alpha_inf": target_alpha_inf });
            match fit_accessory(q, alpha, *target_alpha_inf) {
                Ok(fit) => Ok(Outcome::judged(
                    json!({ "requested": requested, "fit": fit }),
                    vec![verdict("fit_residual", fit.residual, cfg.tol_or(1e-9))],
                )),
                Err(e @ (Error::DomainError(_) | Error::NoBracket { .. })) => {
                    Ok(Outcome::negative(e.to_string(), json!({ "requested": requested })))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

/// Seeded sweep: sampled canonical verification, the existence grid, exact versus
/// ODE developing maps and the lune polygon.
fn run_report_all(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let tol = cfg.tolerances();
    let mut verdicts = vec![];

    let mut canonical = vec![];
    for k in Curvature::ALL {
        for family in [Family::Power, Family::Log] {
            for _ in 0..2 {
                let p = sample_valid_params(k, family, &mut rng);
                let rep = verify_canonical(&p, &tol)?;
                let failed = rep.verdicts.iter().filter(|v| !v.pass).count();
                verdicts.push(verdict(&format!("canonical_{}", canonical.len()), failed as f64, 0.0));
                canonical.push(json!({
                    "params": p,
                    "failed": failed,
                    "liouville_max": rep.liouville.as_ref().map(|l| l.max),
                    "area": rep.area.as_ref().map(|a| a.value),
                }));
            }
        }
    }

    let (mut mismatches, mut cases, mut worst) = (0usize, 0usize, 0.0f64);
    for k in Curvature::ALL {
        for i in 0..=20 {
            for j in 0..=20 {
                let (c1, c2) = (-5.0 + 0.5 * i as f64, -5.0 + 0.5 * j as f64);
                cases += 1;
                let s = synthesize(k, c1, c2);
                if s.is_ok() != existence(k, c1, c2) {
                    mismatches += 1;
                }
                if let Ok(p) = s {
                    let b = boundary_constants(&p);
                    worst = worst.max((b.c1 - c1).abs().max((b.c2 - c2).abs()));
                }
            }
        }
    }
    verdicts.push(verdict("existence_mismatches", mismatches as f64, 0.0));
    verdicts.push(verdict("synthesis_round_trip", worst, cfg.tol_or(1e-9)));

    let mut develop = vec![];
    for c in [0.375, 0.5, 0.0, -1.5] {
        let dm = developing_map_numeric(&SchwarzianSpec::global(Complex64::new(c, 0.0)), Complex64::new(0.0, 1.0))?;
        let d = cross_ratio_defect(&dm, &solve_global(c), &PROBE_QUADRUPLES)?;
        verdicts.push(verdict(&format!("develop_c{c}"), d, cfg.tol_or(1e-6)));
        develop.push(json!({ "c": c, "cross_ratio_defect": d }));
    }

    let lune = PolygonalMetricSpec::new(SchwarzianSpec::poles(vec![Pole { q: 0.0, alpha: 0.375, beta: 0.0 }]));
    let poly = polygon_from_spec(&lune)?;
    let angle_dev = poly
        .polygon
        .vertices
        .iter()
        .map(|v| (v.measured_angle - std::f64::consts::FRAC_PI_2).abs())
        .fold(0.0, f64::max);
    verdicts.push(verdict("lune_angles", angle_dev, cfg.tol_or(1e-3)));
    verdicts.push(verdict("lune_fit", poly.fit_residual, cfg.tol_or(1e-8)));

    Ok(Outcome::judged(
        json!({
            "canonical": canonical,
            "existence": { "cases": cases, "mismatches": mismatches, "max_round_trip_error": worst },
            "develop": develop,
            "lune": { "arcs": poly.polygon.arcs.len(), "angle_deviation": angle_dev, "fit_residual": poly.fit_residual },
        }),
        verdicts,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curvature_flag() {
        assert_eq!(parse_curvature("-1").unwrap(), Curvature::Hyperbolic);
        assert!(parse_curvature("2").is_err());
        assert!(parse_curvature("x").is_err());
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run(["liouville", "canonical", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["liouville", "canonical", "synthesize", "--K", "3", "--c1", "0", "--c2", "0"]), EXIT_USAGE);
    }
}
