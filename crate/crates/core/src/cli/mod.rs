//! Scenario runner behind the `ricci-compare` binary.
//!
//! Exit codes: 0 when every check passes (or is informational, or is
//! inconclusive with `allow_inconclusive`), 1 for a violated or inapplicable
//! check, 2 for configuration errors, 3 when a solver or quadrature could not
//! meet its tolerance. When checks disagree the largest code wins.

pub mod config;
pub mod gallery;
pub mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::{
    check_ambrose, check_ball_growth, check_bg_r, check_bg_s, check_blowup, check_kappa0_bound_on,
    check_laplacian_comparison_on, check_myers, check_ricci_hypothesis_on, check_riccati_inequality_on,
    check_vm_completeness, check_volume_element_on, default_grid, find_best_constant_kappa_on,
    model_functions_for, ComparisonReport, DivergenceVerdict, Slack, Verdict, DEFAULT_GRID_SIZE,
};
use crate::error::Error;
use crate::model_functions::{KappaKind, KappaProfile, ModelFunctions, DEFAULT_TOL};
use crate::model_manifold::{Drift, ModelManifold, RadialProfile};
use crate::numerics::CubicSpline;
use crate::radial::SharedFn;
use crate::rigidity::{symmetric_bump_kappa, verify_equality_case, verify_pole_smoothness, MaximalModel};
use config::{Check, ConfigError, CustomProfile, KappaSpec, ManifoldSpec, Scenario};
use gallery::Builtin;
use output::{numeric_csv, text_csv, write_atomic};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

const DEFAULT_PAIRS: [(f64, f64); 3] = [(1.0, 2.0), (1.0, 4.0), (2.0, 3.0)];
// looser than the analytic pole check: sampled warps only resolve f'(0) to
// the spline's accuracy
const SAMPLED_POLE_TOL: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "ricci-compare", version, about = "Comparison checks on weighted model manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the checks of a JSON scenario file.
    Run(RunArgs),
    /// Print the builtin manifolds and their parameters.
    ListBuiltins {
        /// Print the catalog as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    pub config: PathBuf,
    /// Grid points for the pointwise and volume checks.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Tolerance of the Jacobi solver.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Checks run concurrently on at most this many threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Treat inconclusive verdicts as success.
    #[arg(long)]
    pub allow_inconclusive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Informational,
    Inconclusive,
    HypothesisFailed,
    Violated,
    Error,
    NumericalFailure,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Informational => "informational",
            Status::Inconclusive => "inconclusive",
            Status::HypothesisFailed => "hypothesis_failed",
            Status::Violated => "violated",
            Status::Error => "error",
            Status::NumericalFailure => "numerical_failure",
        }
    }

    fn exit_code(self, allow_inconclusive: bool) -> u8 {
        match self {
            Status::Pass | Status::Informational => EXIT_OK,
            Status::Inconclusive if allow_inconclusive => EXIT_OK,
            Status::Inconclusive | Status::HypothesisFailed | Status::Violated => EXIT_VIOLATION,
            Status::Error => EXIT_CONFIG,
            Status::NumericalFailure => EXIT_NUMERICAL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsvData {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: Status,
    pub detail: String,
    /// `(r, margin)` at the smallest hypothesis margin.
    pub min_hypothesis: Option<(f64, f64)>,
    pub min_conclusion: Option<(f64, f64)>,
    pub data: Vec<(String, CsvData)>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub outcomes: Vec<CheckOutcome>,
    pub kappa: KappaProfile,
    pub wall_clock_seconds: f64,
    pub exit_code: u8,
}

/// A failure before any check ran.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) | RunError::Io(_) => EXIT_CONFIG,
            RunError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical failure: {m}"),
            RunError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.message)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e.to_string())
        } else {
            RunError::Config(e.to_string())
        }
    }
}

/// Settings after merging the scenario, the builtin defaults and the flags.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub m: f64,
    pub grid: usize,
    pub tol: f64,
    pub radius: f64,
    pub horizons: Vec<f64>,
    pub r_pairs: Vec<(f64, f64)>,
    pub checks: Vec<Check>,
    pub allow_inconclusive: bool,
    pub jobs: Option<usize>,
    pub output: PathBuf,
    pub kappa: KappaSpec,
}

struct Context {
    mm: ModelManifold,
    mf: ModelFunctions,
    cheng: Option<MaximalModel>,
    grid: Vec<f64>,
    resolved: Resolved,
}

fn load_spline(path: &Path) -> Result<CubicSpline, RunError> {
    let (x, y) = output::read_two_columns(path).map_err(RunError::Config)?;
    CubicSpline::new(x, y).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
}

fn custom_manifold(c: &CustomProfile, n: usize, m: f64, c_p: Option<f64>) -> Result<ModelManifold, RunError> {
    let f = load_spline(&c.f)?;
    let r_max = c.r_max.unwrap_or(*f.knots().last().unwrap_or(&0.0));
    let warp: SharedFn = Arc::new(f);
    let drift = match (&c.v, &c.potential) {
        (Some(v), None) => Drift::Field(Arc::new(load_spline(v)?)),
        (None, Some(p)) => Drift::Potential(Arc::new(load_spline(p)?)),
        _ => Drift::None,
    };
    let [f0, f1, _] = warp.eval(0.0);
    if f0.abs() > 1e-8 || (f1 - 1.0).abs() > SAMPLED_POLE_TOL {
        return Err(RunError::Config(format!(
            "custom warp must satisfy f(0) = 0 and f'(0) = 1, got {f0} and {f1}"
        )));
    }
    if let Drift::Potential(p) = &drift {
        let d = p.eval(0.0)[1];
        if d.abs() > SAMPLED_POLE_TOL {
            return Err(RunError::Config(format!("custom potential must satisfy phi'(0) = 0, got {d}")));
        }
    }
    for k in 1..256 {
        let r = r_max * k as f64 / 256.0;
        if !(warp.value(r) > 0.0) {
            return Err(RunError::Config(format!("custom warp is not positive at r = {r}")));
        }
    }
    let profile = RadialProfile::new_unchecked(warp, drift, r_max, c.closed)?;
    Ok(ModelManifold::new(n, m, profile, c_p)?)
}

fn kappa_profile(spec: &KappaSpec, mm: &ModelManifold, grid: &[f64]) -> Result<KappaProfile, RunError> {
    Ok(match spec {
        KappaSpec::Constant { value } => KappaProfile::constant(*value)?,
        KappaSpec::BestConstant => KappaProfile::constant(find_best_constant_kappa_on(mm, grid)?)?,
        KappaSpec::Piecewise {
            breakpoints,
            coefficients,
            horizon,
        } => KappaProfile::new(
            KappaKind::PiecewisePolynomial {
                breakpoints: breakpoints.clone(),
                coefficients: coefficients.clone(),
            },
            horizon.unwrap_or(f64::INFINITY),
        )?,
        KappaSpec::Sampled { s, kappa } => {
            let horizon = s.last().copied().unwrap_or(0.0);
            KappaProfile::new(KappaKind::SampledGrid { s: s.clone(), kappa: kappa.clone() }, horizon)?
        }
        KappaSpec::SampledCsv { path } => {
            let (s, kappa) = output::read_two_columns(path).map_err(RunError::Config)?;
            let horizon = s.last().copied().unwrap_or(0.0);
            KappaProfile::new(KappaKind::SampledGrid { s, kappa }, horizon)?
        }
        KappaSpec::Bump { c } => symmetric_bump_kappa(*c)?,
    })
}

fn report_data(rep: &ComparisonReport) -> Vec<(String, CsvData)> {
    let mut data = vec![(
        rep.check_name.clone(),
        CsvData {
            columns: ["r", "s", "hypothesis_margin", "conclusion_margin"].map(String::from).to_vec(),
            rows: (0..rep.r.len())
                .map(|i| vec![rep.r[i], rep.s[i], rep.hypothesis_margin[i], rep.conclusion_margin[i]])
                .collect(),
        },
    )];
    if let Some(t) = &rep.table {
        data.push((
            format!("{}_table", rep.check_name),
            CsvData {
                columns: t.columns.clone(),
                rows: t.rows.clone(),
            },
        ));
    }
    data
}

fn from_report(check: Check, rep: ComparisonReport) -> CheckOutcome {
    let status = match rep.verdict {
        Verdict::Pass => Status::Pass,
        Verdict::HypothesisFailed { .. } => Status::HypothesisFailed,
        Verdict::ConclusionViolated { .. } => Status::Violated,
        Verdict::Inconclusive { .. } => Status::Inconclusive,
    };
    CheckOutcome {
        check,
        status,
        detail: rep.verdict.to_string(),
        min_hypothesis: rep.min_hypothesis(),
        min_conclusion: rep.min_conclusion(),
        data: report_data(&rep),
    }
}

fn divergence_data(name: &str, v: &DivergenceVerdict) -> (String, CsvData) {
    (
        name.to_string(),
        CsvData {
            columns: vec!["horizon".into(), "partial_integral".into()],
            rows: v.partial_integrals.iter().map(|&(h, i)| vec![h, i]).collect(),
        },
    )
}

fn divergence_detail(v: &DivergenceVerdict) -> String {
    let mut out = format!(
        "{} (growth exponent {:.6e})",
        serde_json::to_value(v.classification).unwrap().as_str().unwrap_or(""),
        v.fitted_growth_exponent
    );
    if let Some(c) = v.sufficient_criterion {
        out.push_str(&format!("; C/t criterion {}", if c { "holds" } else { "fails" }));
    }
    if let Some(note) = &v.note {
        out.push_str(&format!("; {note}"));
    }
    out
}

fn failed(check: Check, e: Error) -> CheckOutcome {
    let status = match e {
        Error::EqualityViolated { .. } | Error::PoleDefect(_) => Status::Violated,
        ref e if e.is_numerical() => Status::NumericalFailure,
        _ => Status::Error,
    };
    CheckOutcome {
        check,
        status,
        detail: e.to_string(),
        min_hypothesis: None,
        min_conclusion: None,
        data: Vec::new(),
    }
}

fn run_check(ctx: &Context, check: Check) -> CheckOutcome {
    let (mm, mf, grid) = (&ctx.mm, &ctx.mf, &ctx.grid[..]);
    let report = |r: crate::error::Result<ComparisonReport>| match r {
        Ok(rep) => from_report(check, rep),
        Err(e) => failed(check, e),
    };
    match check {
        Check::Hypothesis => report(check_ricci_hypothesis_on(mm, mf.kappa(), grid, Slack::DEFAULT)),
        Check::Laplacian => report(check_laplacian_comparison_on(mm, mf, grid, Slack::DEFAULT)),
        Check::Riccati => report(check_riccati_inequality_on(mm, grid, Slack::FINITE_DIFFERENCE)),
        Check::Blowup => report(check_blowup(mm, mf, Slack::DEFAULT)),
        Check::Myers => report(check_myers(mm, mf, Slack::DEFAULT)),
        Check::Kappa0 => report(check_kappa0_bound_on(mm, grid, Slack::DEFAULT)),
        Check::VolumeElement => report(check_volume_element_on(mm, mf, grid, Slack::DEFAULT)),
        Check::BgS => report(check_bg_s(mm, mf, grid, Slack::MONOTONE_RATIO)),
        Check::BgR => report(check_bg_r(mm, mf, grid, Slack::MONOTONE_RATIO)),
        Check::BallGrowth => report(check_ball_growth(mm, &ctx.resolved.r_pairs, Slack::DEFAULT)),
        Check::VmCompleteness => match check_vm_completeness(mm, &ctx.resolved.horizons) {
            Ok(v) => CheckOutcome {
                check,
                status: Status::Informational,
                detail: divergence_detail(&v),
                min_hypothesis: None,
                min_conclusion: None,
                data: vec![divergence_data("vm_completeness", &v)],
            },
            Err(e) => failed(check, e),
        },
        Check::Ambrose => match check_ambrose(mm, &ctx.resolved.horizons) {
            Ok(a) => CheckOutcome {
                check,
                status: Status::Informational,
                detail: format!(
                    "{}; integral {}; completeness {}",
                    serde_json::to_value(a.compactness).unwrap().as_str().unwrap_or(""),
                    divergence_detail(&a.integral),
                    divergence_detail(&a.completeness)
                ),
                min_hypothesis: None,
                min_conclusion: None,
                data: vec![
                    divergence_data("ambrose", &a.integral),
                    divergence_data("ambrose_completeness", &a.completeness),
                ],
            },
            Err(e) => failed(check, e),
        },
        Check::EqualityCase | Check::PoleSmoothness => {
            let Some(model) = &ctx.cheng else {
                return failed(check, Error::InvalidProfile(format!("{check} needs the cheng-model builtin")));
            };
            if check == Check::EqualityCase {
                report(verify_equality_case(model, ctx.resolved.grid))
            } else {
                match verify_pole_smoothness(model) {
                    Ok(map) => CheckOutcome {
                        check,
                        status: Status::Pass,
                        detail: "pass".into(),
                        min_hypothesis: None,
                        min_conclusion: None,
                        data: vec![(
                            "pole_smoothness".into(),
                            CsvData {
                                columns: map.keys().cloned().collect(),
                                rows: vec![map.values().cloned().collect()],
                            },
                        )],
                    },
                    Err(e) => failed(check, e),
                }
            }
        }
    }
}

/// Merges scenario, builtin defaults and flags, builds the manifold and runs
/// the checks. Output files are written by [`write_outputs`].
pub fn execute(scenario: &Scenario, args: &RunArgs) -> Result<(RunSummary, Resolved, Option<MaximalModel>), RunError> {
    let start = Instant::now();
    let (mm, built) = match &scenario.manifold {
        ManifoldSpec::Builtin(b) => {
            let m = scenario.m.unwrap_or(b.default_m());
            let built = b.build(scenario.n, m, scenario.c_p)?;
            (built.manifold.clone(), Some(built))
        }
        ManifoldSpec::Custom(c) => (custom_manifold(c, scenario.n, scenario.m.unwrap_or(0.0), scenario.c_p)?, None),
    };
    let tol = args.tol.or(scenario.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(RunError::Config(format!("tolerance must be positive, got {tol}")));
    }
    let grid_size = args.grid.or(scenario.grid).unwrap_or(DEFAULT_GRID_SIZE);
    let radius = scenario
        .radius
        .or(built.as_ref().map(|b| b.radius))
        .unwrap_or(mm.r_max());
    if radius > mm.r_max() {
        return Err(RunError::Config(format!("radius {radius} exceeds r_max = {}", mm.r_max())));
    }
    let checks = scenario
        .checks
        .clone()
        .or(built.as_ref().map(|b| b.checks.clone()))
        .ok_or_else(|| RunError::Config("field `checks` is required for custom manifolds".into()))?;
    let horizons = scenario
        .horizons
        .clone()
        .or(built.as_ref().map(|b| b.horizons.clone()))
        .unwrap_or_else(|| vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]);
    let r_pairs = scenario.r_pairs.clone().unwrap_or_else(|| {
        DEFAULT_PAIRS.iter().cloned().filter(|p| p.1 <= mm.r_max()).collect()
    });
    let kappa_spec = scenario
        .kappa
        .clone()
        .or(built.as_ref().map(|b| b.kappa.clone()))
        .ok_or_else(|| RunError::Config("field `kappa` is required for custom manifolds".into()))?;
    let grid = default_grid(&mm, radius, grid_size)?;
    let kappa = kappa_profile(&kappa_spec, &mm, &grid)?;
    let mf = model_functions_for(&mm, &kappa, tol)?;
    let resolved = Resolved {
        m: mm.m(),
        grid: grid_size,
        tol,
        radius,
        horizons,
        r_pairs,
        checks: checks.clone(),
        allow_inconclusive: args.allow_inconclusive || scenario.allow_inconclusive.unwrap_or(false),
        jobs: args.jobs,
        output: args
            .out
            .clone()
            .or(scenario.output.clone())
            .unwrap_or_else(|| PathBuf::from("ricci-compare-out")),
        kappa: match kappa_spec {
            KappaSpec::BestConstant => KappaSpec::Constant {
                value: kappa.constant_value().unwrap_or(f64::NAN),
            },
            other => other,
        },
    };
    let ctx = Context {
        mm,
        mf,
        cheng: built.and_then(|b| b.cheng),
        grid,
        resolved: resolved.clone(),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        pool = pool.num_threads(jobs.max(1));
    }
    let pool = pool.build().map_err(|e| RunError::Config(e.to_string()))?;
    let outcomes: Vec<CheckOutcome> = pool.install(|| checks.par_iter().map(|&c| run_check(&ctx, c)).collect());
    let exit_code = outcomes
        .iter()
        .map(|o| o.status.exit_code(resolved.allow_inconclusive))
        .max()
        .unwrap_or(EXIT_OK);
    let summary = RunSummary {
        outcomes,
        kappa,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        exit_code,
    };
    Ok((summary, resolved, ctx.cheng))
}

fn opt_number(x: Option<f64>) -> String {
    x.map(output::number).unwrap_or_default()
}

/// Writes one CSV per check, `summary.csv` and `config.json` into the
/// resolved output directory. Nothing here depends on timing.
pub fn write_outputs(
    scenario: &Scenario,
    resolved: &Resolved,
    summary: &RunSummary,
    cheng: Option<&MaximalModel>,
) -> std::io::Result<()> {
    let dir = &resolved.output;
    for o in &summary.outcomes {
        for (name, data) in &o.data {
            let bytes = numeric_csv(&format!("check={}", o.check), &data.columns, &data.rows);
            write_atomic(dir, &format!("{name}.csv"), &bytes)?;
        }
    }
    if let Some(model) = cheng {
        let rows = model.table(1001).map_err(|e| std::io::Error::other(e.to_string()))?;
        let columns = ["r", "f", "v", "s"].map(String::from).to_vec();
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.to_vec()).collect();
        write_atomic(dir, "cheng_profile.csv", &numeric_csv("table=cheng_profile", &columns, &rows))?;
    }
    let columns = [
        "check",
        "status",
        "detail",
        "min_hypothesis_r",
        "min_hypothesis_margin",
        "min_conclusion_r",
        "min_conclusion_margin",
    ]
    .map(String::from)
    .to_vec();
    let rows: Vec<Vec<String>> = summary
        .outcomes
        .iter()
        .map(|o| {
            vec![
                o.check.to_string(),
                o.status.label().to_string(),
                o.detail.clone(),
                opt_number(o.min_hypothesis.map(|p| p.0)),
                opt_number(o.min_hypothesis.map(|p| p.1)),
                opt_number(o.min_conclusion.map(|p| p.0)),
                opt_number(o.min_conclusion.map(|p| p.1)),
            ]
        })
        .collect();
    write_atomic(dir, "summary.csv", &text_csv("table=summary", &columns, &rows))?;
    let echo = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": scenario,
        "resolved": resolved,
        "exit_code": summary.exit_code,
    });
    let mut text = serde_json::to_string_pretty(&echo).map_err(std::io::Error::other)?;
    text.push('\n');
    write_atomic(dir, "config.json", text.as_bytes())
}

pub fn run(args: &RunArgs) -> u8 {
    let scenario = match Scenario::load(&args.config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let (summary, resolved, cheng) = match execute(&scenario, args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    if let Err(e) = write_outputs(&scenario, &resolved, &summary, cheng.as_ref()) {
        eprintln!("i/o error: {e}");
        return EXIT_CONFIG;
    }
    for o in &summary.outcomes {
        println!("{:<16} {:<18} {}", o.check.name(), o.status.label(), o.detail);
    }
    println!(
        "exit {} after {:.3} s, output in {}",
        summary.exit_code,
        summary.wall_clock_seconds,
        resolved.output.display()
    );
    summary.exit_code
}

pub fn list_builtins(json: bool) {
    let catalog = Builtin::catalog();
    if json {
        println!("{}", serde_json::to_string_pretty(&catalog).expect("catalog serializes"));
        return;
    }
    for b in &catalog {
        let mut params = serde_json::to_value(b).expect("catalog serializes");
        if let Some(obj) = params.as_object_mut() {
            obj.remove("name");
        }
        println!(
            "{:<12} m = {:<3} {}\n             parameters {}",
            b.name(),
            b.default_m(),
            b.describe(),
            params
        );
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK });
        }
    };
    match cli.command {
        Command::Run(args) => ExitCode::from(run(&args)),
        Command::ListBuiltins { json } => {
            list_builtins(json);
            ExitCode::from(EXIT_OK)
        }
    }
}
