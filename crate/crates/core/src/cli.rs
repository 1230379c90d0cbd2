//! Scenario files, command dispatch and report rendering for `isowork`.
//!
//! A scenario is one JSON document:
//!
//! ```json
//! {
//!   "frame": { "phi": 1.5707963267948966 },
//!   "force": { "P": "1", "R": "1", "S": "-1/2" },
//!   "curve": { "x": "t", "y": "2*t", "z": "-2*t/3", "alpha": 0, "beta": 1 },
//!   "tol": 1e-10
//! }
//! ```
//!
//! `frame` defaults to φ = π/2. Omitting `S` completes the force to
//! S = −PR/(P+R); omitting `z` completes the curve from z(alpha) = 0.
//! Command-line flags override file fields. The tolerance is taken from
//! `--tol`, then the file, then `ISOWORK_TOL`, then 1e-10.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{QFrame, Vec3Q};
use crate::error::Error;
use crate::expr::{parse, Expr};
use crate::fields::{
    chebyshev_points, complete_isotropic_curve, complete_isotropic_force, ForceField, ParamCurve,
    ZCoord,
};
use crate::plane2::{self, IsoLine, Line, PlaneCase, RegimeAngles, TableEntry};
use crate::quadrature::DEFAULT_TOL;
use crate::verify;
use crate::work3d::{self, WorkResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOL_ENV: &str = "ISOWORK_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CROSS_CHECK: i32 = 3;

/// φ within this of π/2 selects the orthonormal frame.
pub const ORTHONORMAL_PHI_TOL: f64 = 1e-9;
/// Points at which `classify` reports vector classes.
const CLASSIFY_SAMPLES: usize = 5;

#[derive(Debug, Parser)]
#[command(
    name = "isowork",
    version,
    about = "Work of isotropic force fields along isotropic curves"
)]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isotropy residuals, vector classes and the work case of a scenario.
    Classify(ScenarioArgs),
    /// Work of the scenario's force along its curve.
    Work(ScenarioArgs),
    /// Isotropic lines of the plane {i, Qi} and work between them.
    #[command(allow_negative_numbers = true)]
    Plane(PlaneArgs),
    /// The summary table of work along isotropic lines.
    #[command(allow_negative_numbers = true)]
    Table1(Table1Args),
    /// Run the self-check suite.
    Verify,
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct ScenarioArgs {
    /// Scenario JSON file.
    pub file: PathBuf,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long = "p")]
    pub p: Option<String>,
    #[arg(long = "r")]
    pub r: Option<String>,
    #[arg(long = "s")]
    pub s: Option<String>,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LineArg {
    C1,
    C2,
}

impl From<LineArg> for Line {
    fn from(l: LineArg) -> Self {
        match l {
            LineArg::C1 => Line::C1,
            LineArg::C2 => Line::C2,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PlaneArgs {
    /// Angle between i and Qi, in radians.
    #[arg(long)]
    pub phi: f64,
    /// Force magnitude P(x, y); required for a work computation.
    #[arg(long = "p")]
    pub p: Option<String>,
    /// Line the force lies on.
    #[arg(long, value_enum, requires_all = ["target", "p", "alpha", "beta"])]
    pub source: Option<LineArg>,
    /// Line the force moves along.
    #[arg(long, value_enum, requires = "source")]
    pub target: Option<LineArg>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Force magnitude P(x, y).
    #[arg(long = "p")]
    pub p: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    #[serde(default = "default_phi")]
    pub phi: f64,
}

impl Default for FrameSpec {
    fn default() -> Self {
        Self { phi: default_phi() }
    }
}

fn default_phi() -> f64 {
    FRAC_PI_2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSpec {
    #[serde(rename = "P", alias = "p")]
    pub p: String,
    #[serde(rename = "R", alias = "r")]
    pub r: String,
    #[serde(
        rename = "S",
        alias = "s",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub s: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub x: String,
    pub y: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub frame: FrameSpec,
    pub force: ForceSpec,
    pub curve: CurveSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input("scenario", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::input("scenario", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
            .map_err(|e| CliError::input("scenario", format!("{}: {}", path.display(), e.message)))
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, a: &ScenarioArgs) -> Self {
        if let Some(v) = a.phi {
            self.frame.phi = v;
        }
        let set = |slot: &mut String, v: &Option<String>| {
            if let Some(v) = v {
                *slot = v.clone();
            }
        };
        set(&mut self.force.p, &a.p);
        set(&mut self.force.r, &a.r);
        set(&mut self.curve.x, &a.x);
        set(&mut self.curve.y, &a.y);
        if a.s.is_some() {
            self.force.s = a.s.clone();
        }
        if a.z.is_some() {
            self.curve.z = a.z.clone();
        }
        if let Some(v) = a.alpha {
            self.curve.alpha = v;
        }
        if let Some(v) = a.beta {
            self.curve.beta = v;
        }
        if a.tol.is_some() {
            self.tol = a.tol;
        }
        self
    }
}

/// A failure that ends a command with a nonzero exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    /// Which input or stage failed, e.g. `force.P`.
    pub context: String,
    pub message: String,
}

impl CliError {
    pub fn input(context: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            context: context.into(),
            message: message.into(),
        }
    }

    fn from_error(context: &str, e: Error) -> Self {
        let code = match e {
            Error::CrossCheckFailure { .. } => EXIT_CROSS_CHECK,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            context: context.into(),
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.context, self.message)
    }
}

fn ctx<T>(context: &str, r: crate::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::from_error(context, e))
}

/// Output of one command invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Formats with 12 significant digits, dropping trailing zeros.
pub fn fmt12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        match s.split_once('e') {
            Some((m, e)) if m.contains('.') => {
                format!("{}e{e}", m.trim_end_matches('0').trim_end_matches('.'))
            }
            _ => s,
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), fmt12)
}

fn fmt_vec(v: Vec3Q) -> String {
    format!("({}, {}, {})", fmt12(v.u), fmt12(v.v), fmt12(v.q))
}

/// `ISOWORK_TOL`, if set, replaces the built-in default.
pub fn env_tolerance(raw: Option<&str>) -> Result<Option<f64>, CliError> {
    match raw {
        None => Ok(None),
        Some(s) => s
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| CliError::input(TOL_ENV, format!("`{s}` is not a number"))),
    }
}

fn resolve_tol(explicit: Option<f64>, env: Option<f64>) -> Result<f64, CliError> {
    let tol = explicit.or(env).unwrap_or(DEFAULT_TOL);
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::input(
            "tol",
            format!("tolerance must be positive, got {tol}"),
        ))
    }
}

fn parse_field(name: &str, src: &str) -> Result<Expr, CliError> {
    ctx(name, parse(src))
}

/// A scenario turned into checked mathematical objects.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub scenario: Scenario,
    pub tol: f64,
    pub frame: QFrame,
    pub force: ForceField,
    pub curve: ParamCurve,
}

impl Prepared {
    pub fn orthonormal(&self) -> bool {
        self.frame.is_orthonormal()
    }
}

pub fn prepare(mut scenario: Scenario, env_tol: Option<f64>) -> Result<Prepared, CliError> {
    let tol = resolve_tol(scenario.tol, env_tol)?;
    scenario.tol = Some(tol);
    let phi = scenario.frame.phi;
    let frame = if (phi - FRAC_PI_2).abs() <= ORTHONORMAL_PHI_TOL {
        QFrame::orthonormal()
    } else {
        ctx("frame.phi", QFrame::new(phi))?
    };
    let p = parse_field("force.P", &scenario.force.p)?;
    let r = parse_field("force.R", &scenario.force.r)?;
    let force = match &scenario.force.s {
        Some(s) => {
            let s = parse_field("force.S", s)?;
            ctx("force", ForceField::new(p, r, s))?
        }
        None => ctx("force", complete_isotropic_force(p, r))?,
    };
    let c = &scenario.curve;
    let x = parse_field("curve.x", &c.x)?;
    let y = parse_field("curve.y", &c.y)?;
    let curve = match &c.z {
        Some(z) => {
            let z = parse_field("curve.z", z)?;
            ctx(
                "curve",
                ParamCurve::new(x, y, ZCoord::Expr(z), c.alpha, c.beta),
            )?
        }
        None => {
            let grid = chebyshev_points(c.alpha, c.beta, crate::fields::SAMPLE_COUNT);
            ctx(
                "curve.z",
                complete_isotropic_curve(x, y, 0.0, c.alpha, c.beta, &grid),
            )?
        }
    };
    Ok(Prepared {
        scenario,
        tol,
        frame,
        force,
        curve,
    })
}

/// A rendered command result, before it is turned into text or JSON.
#[derive(Debug, Clone)]
struct Report {
    command: &'static str,
    inputs: Value,
    results: Value,
    text: String,
    code: i32,
}

fn render(
    report: Result<Report, (Value, CliError)>,
    command: &'static str,
    json_out: bool,
) -> Outcome {
    match report {
        Ok(r) => {
            let stdout = if json_out {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": r.command,
                    "inputs_echo": r.inputs,
                    "results": r.results,
                });
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&doc).expect("report serializes")
                )
            } else {
                r.text
            };
            Outcome {
                code: r.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err((inputs, e)) => {
            let stdout = if json_out {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command,
                    "inputs_echo": inputs,
                    "results": Value::Null,
                    "error": { "context": e.context, "message": e.message, "exit_code": e.code },
                });
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&doc).expect("report serializes")
                )
            } else {
                String::new()
            };
            Outcome {
                code: e.code,
                stdout,
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

/// Runs one parsed invocation. `env_tol` is the raw `ISOWORK_TOL` value.
pub fn run(cli: Cli, env_tol: Option<&str>) -> Outcome {
    run_with_suite(cli, env_tol, &verify::Suite::default())
}

pub fn run_with_suite(cli: Cli, env_tol: Option<&str>, suite: &verify::Suite) -> Outcome {
    let json_out = cli.json;
    let env = env_tolerance(env_tol);
    let (name, report) = match cli.command {
        Command::Classify(a) => ("classify", with_env(env, |t| cmd_classify(&a, t))),
        Command::Work(a) => ("work", with_env(env, |t| cmd_work(&a, t))),
        Command::Plane(a) => ("plane", with_env(env, |t| cmd_plane(&a, t))),
        Command::Table1(a) => ("table1", with_env(env, |t| cmd_table1(&a, t))),
        Command::Verify => ("verify", Ok(cmd_verify(suite))),
    };
    render(report, name, json_out)
}

fn with_env(
    env: Result<Option<f64>, CliError>,
    f: impl FnOnce(Option<f64>) -> Result<Report, (Value, CliError)>,
) -> Result<Report, (Value, CliError)> {
    match env {
        Ok(t) => f(t),
        Err(e) => Err((Value::Null, e)),
    }
}

fn scenario_inputs(file: &Path, scenario: Option<&Scenario>) -> Value {
    json!({ "file": file.display().to_string(), "scenario": scenario })
}

fn load_prepared(a: &ScenarioArgs, env_tol: Option<f64>) -> Result<Prepared, (Value, CliError)> {
    let scenario = Scenario::load(&a.file)
        .map(|s| s.with_overrides(a))
        .map_err(|e| (scenario_inputs(&a.file, None), e))?;
    prepare(scenario.clone(), env_tol).map_err(|e| (scenario_inputs(&a.file, Some(&scenario)), e))
}

#[derive(Debug, Clone, Serialize)]
struct SampleClass {
    t: f64,
    position: Vec3Q,
    force: Vec3Q,
    force_class: crate::algebra::VectorClass,
    tangent: Vec3Q,
    tangent_class: crate::algebra::VectorClass,
}

fn class_samples(p: &Prepared) -> crate::Result<Vec<SampleClass>> {
    chebyshev_points(p.curve.alpha(), p.curve.beta(), CLASSIFY_SAMPLES)
        .into_iter()
        .map(|t| {
            let pt = p.curve.point(t)?;
            let force = p.force.at(pt.position)?;
            Ok(SampleClass {
                t,
                position: pt.position,
                force,
                force_class: p.frame.classify(force),
                tangent: pt.tangent,
                tangent_class: p.frame.classify(pt.tangent),
            })
        })
        .collect()
}

fn cmd_classify(a: &ScenarioArgs, env_tol: Option<f64>) -> Result<Report, (Value, CliError)> {
    let p = load_prepared(a, env_tol)?;
    let inputs = scenario_inputs(&a.file, Some(&p.scenario));
    let fail = |e: CliError| (inputs.clone(), e);
    let samples = ctx("classify", class_samples(&p)).map_err(fail)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "frame phi        {}{}",
        fmt12(p.frame.phi()),
        if p.orthonormal() {
            " (orthonormal)"
        } else {
            ""
        }
    );
    let mut results = json!({
        "frame": { "phi": p.frame.phi(), "orthonormal": p.orthonormal() },
        "force_completed": p.scenario.force.s.is_none(),
        "curve_completed": p.scenario.curve.z.is_none(),
        "samples": samples,
    });
    if p.orthonormal() {
        let d = ctx("classify", work3d::diagnose(&p.force, &p.curve)).map_err(fail)?;
        let force_ok = d.force_residual <= work3d::ISOTROPY_ADMISSION_TOL;
        let curve_ok = d.curve_residual <= work3d::ISOTROPY_ADMISSION_TOL;
        let status = if d.case.is_some() {
            "ok"
        } else {
            "not_isotropic"
        };
        let _ = writeln!(
            text,
            "force residual   {}{}",
            fmt12(d.force_residual),
            if force_ok { "" } else { "  NotIsotropic" }
        );
        let _ = writeln!(
            text,
            "curve residual   {}{}",
            fmt12(d.curve_residual),
            if curve_ok { "" } else { "  NotIsotropic" }
        );
        let _ = writeln!(text, "max |x'+y'|      {}", fmt12(d.max_dx_plus_dy));
        let _ = writeln!(text, "max |P+R|        {}", fmt12(d.max_p_plus_r));
        let _ = writeln!(
            text,
            "collinear        {} (max minor {})",
            d.collinearity.collinear,
            fmt12(d.collinearity.max_minor)
        );
        let _ = writeln!(
            text,
            "case             {}",
            d.case.map_or("none (NotIsotropic)", |c| c.label())
        );
        let obj = results.as_object_mut().expect("object");
        obj.insert("status".into(), json!(status));
        obj.insert("case".into(), json!(d.case));
        obj.insert("force_residual".into(), json!(d.force_residual));
        obj.insert("curve_residual".into(), json!(d.curve_residual));
        obj.insert("force_isotropic".into(), json!(force_ok));
        obj.insert("curve_isotropic".into(), json!(curve_ok));
        obj.insert("max_dx_plus_dy".into(), json!(d.max_dx_plus_dy));
        obj.insert("max_p_plus_r".into(), json!(d.max_p_plus_r));
        obj.insert("collinear".into(), json!(d.collinearity.collinear));
        obj.insert("max_minor".into(), json!(d.collinearity.max_minor));
    } else {
        let _ = writeln!(
            text,
            "case             not evaluated (case analysis uses the orthonormal frame, phi = pi/2)"
        );
        let obj = results.as_object_mut().expect("object");
        obj.insert("status".into(), json!("frame_only"));
        obj.insert("case".into(), Value::Null);
    }
    let _ = writeln!(text, "samples");
    for s in &samples {
        let _ = writeln!(
            text,
            "  t = {:<16} F = {} {:?}, r' = {} {:?}",
            fmt12(s.t),
            fmt_vec(s.force),
            s.force_class.tag,
            fmt_vec(s.tangent),
            s.tangent_class.tag
        );
    }
    Ok(Report {
        command: "classify",
        inputs,
        results,
        text,
        code: EXIT_OK,
    })
}

fn work_text(w: &WorkResult) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "work               {}", fmt12(w.value));
    let _ = writeln!(text, "method             {}", w.method.label());
    let _ = writeln!(text, "error_estimate     {}", fmt12(w.error_estimate));
    let _ = writeln!(text, "cross_check_delta  {}", fmt_opt(w.cross_check_delta));
    if w.fell_back {
        let _ = writeln!(
            text,
            "note               case formula was singular; direct quadrature used"
        );
    }
    text
}

fn cmd_work(a: &ScenarioArgs, env_tol: Option<f64>) -> Result<Report, (Value, CliError)> {
    let p = load_prepared(a, env_tol)?;
    let inputs = scenario_inputs(&a.file, Some(&p.scenario));
    if !p.orthonormal() {
        let e = CliError::input(
            "frame.phi",
            format!(
                "work is computed in the orthonormal frame (phi = pi/2), got {}",
                p.frame.phi()
            ),
        );
        return Err((inputs, e));
    }
    let w =
        ctx("work", work3d::work(&p.force, &p.curve, p.tol)).map_err(|e| (inputs.clone(), e))?;
    Ok(Report {
        command: "work",
        results: serde_json::to_value(&w).expect("serializes"),
        text: work_text(&w),
        inputs,
        code: EXIT_OK,
    })
}

fn iso_json(lines: &[IsoLine]) -> Value {
    Value::Array(
        lines
            .iter()
            .map(|l| match l {
                IsoLine::Slope(k) => json!({ "slope": k }),
                IsoLine::VerticalAxis => json!({ "vertical": true }),
            })
            .collect(),
    )
}

fn cmd_plane(a: &PlaneArgs, env_tol: Option<f64>) -> Result<Report, (Value, CliError)> {
    let inputs = json!({
        "phi": a.phi,
        "p": a.p,
        "source": a.source.map(|l| format!("{l:?}").to_lowercase()),
        "target": a.target.map(|l| format!("{l:?}").to_lowercase()),
        "alpha": a.alpha,
        "beta": a.beta,
        "tol": a.tol,
    });
    let fail = |e: CliError| (inputs.clone(), e);
    let tol = resolve_tol(a.tol, env_tol).map_err(fail)?;
    let pc = ctx("phi", plane2::build_plane(a.phi)).map_err(fail)?;
    let dirs = plane2::iso_directions(&pc);
    let mut text = String::new();
    let _ = writeln!(text, "phi           {}", fmt12(pc.phi));
    let _ = writeln!(
        text,
        "case          {} ({})",
        pc.case.letter(),
        pc.case.describe()
    );
    let _ = writeln!(text, "discriminant  {}", fmt12(pc.discriminant));
    let _ = writeln!(
        text,
        "f_ii f_ij f_jj {} {} {}",
        fmt12(pc.f_ii),
        fmt12(pc.f_ij),
        fmt12(pc.f_jj)
    );
    match pc.case {
        PlaneCase::NoIsotropic => {
            let _ = writeln!(text, "no isotropic directions");
        }
        PlaneCase::RightAngle => {
            let _ = writeln!(text, "c1            x = 0 (along Qi)");
            let _ = writeln!(text, "c2            y = 0 (along i)");
        }
        _ => {
            let _ = writeln!(text, "k1            {}", fmt_opt(pc.k1));
            let _ = writeln!(text, "k2            {}", fmt_opt(pc.k2));
        }
    }
    let mut results = json!({
        "case": pc.case,
        "description": pc.case.describe(),
        "discriminant": pc.discriminant,
        "f_ii": pc.f_ii,
        "f_ij": pc.f_ij,
        "f_jj": pc.f_jj,
        "k1": pc.k1,
        "k2": pc.k2,
        "iso_directions": iso_json(&dirs),
        "work": Value::Null,
    });
    if let (Some(source), Some(target)) = (a.source, a.target) {
        // clap guarantees the companions of --source
        let src = a.p.as_deref().unwrap_or_default();
        let pe = parse_field("p", src).map_err(fail)?;
        let (alpha, beta) = (a.alpha.unwrap_or_default(), a.beta.unwrap_or_default());
        let w = ctx(
            "plane",
            plane2::work_between(&pc, &pe, source.into(), target.into(), alpha, beta, tol),
        )
        .map_err(fail)?;
        text.push_str(&work_text(&w));
        results["work"] = serde_json::to_value(&w).expect("serializes");
        if pc.case == PlaneCase::TwoDirections && source != target {
            results["coefficient"] = json!(pc.cross_coefficient());
        }
    }
    Ok(Report {
        command: "plane",
        inputs,
        results,
        text,
        code: EXIT_OK,
    })
}

fn cmd_table1(a: &Table1Args, env_tol: Option<f64>) -> Result<Report, (Value, CliError)> {
    let inputs = json!({ "p": a.p, "alpha": a.alpha, "beta": a.beta, "tol": a.tol });
    let fail = |e: CliError| (inputs.clone(), e);
    let tol = resolve_tol(a.tol, env_tol).map_err(fail)?;
    let pe = parse_field("p", &a.p).map_err(fail)?;
    let t = ctx(
        "table1",
        plane2::table1_report(&pe, a.alpha, a.beta, tol, RegimeAngles::default()),
    )
    .map_err(fail)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<3} {:<34} {:<15} {:<15} {:<46} value",
        "#", "phi", "acts on", "trajectory", "A"
    );
    for (n, r) in t.rows.iter().enumerate() {
        let value = match r.work {
            TableEntry::Absent => "-".to_string(),
            TableEntry::Zero => "0".to_string(),
            TableEntry::Value(v) => fmt12(v),
        };
        let _ = writeln!(
            text,
            "{:<3} {:<34} {:<15} {:<15} {:<46} {}",
            n + 1,
            r.regime,
            r.acts_on,
            r.trajectory,
            r.formula,
            value
        );
    }
    let _ = writeln!(
        text,
        "representative phi: A {}, B {}, C {}, D {}",
        fmt12(t.angles.no_isotropic),
        fmt12(t.angles.double_root),
        fmt12(t.angles.two_directions),
        fmt12(t.angles.right_angle)
    );
    Ok(Report {
        command: "table1",
        inputs,
        results: serde_json::to_value(&t).expect("serializes"),
        text,
        code: EXIT_OK,
    })
}

fn cmd_verify(suite: &verify::Suite) -> Report {
    let s = verify::run_with(suite);
    let mut text = String::new();
    for c in &s.checks {
        let _ = writeln!(
            text,
            "{} {:<46} {:>7.3}s  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.seconds,
            c.detail
        );
    }
    let _ = writeln!(
        text,
        "{}/{} checks passed in {:.3}s",
        s.passed,
        s.checks.len(),
        s.seconds
    );
    for c in s.failures() {
        let _ = writeln!(text, "failed: {}", c.name);
    }
    Report {
        command: "verify",
        inputs: json!({}),
        code: if s.all_passed() {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        },
        results: serde_json::to_value(&s).expect("serializes"),
        text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(1.0 / 6.0), "0.166666666667");
        assert_eq!(fmt12(10.0), "10");
        assert_eq!(fmt12(2f64.sqrt()), "1.41421356237");
        assert_eq!(fmt12(-0.5), "-0.5");
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(1.5e-17), "1.5e-17");
        assert_eq!(fmt12(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt12(9.9999999999999), "10");
    }

    #[test]
    fn scenario_defaults_and_round_trip() {
        let s = Scenario::from_json(
            r#"{"force": {"P": "1", "R": "1"}, "curve": {"x": "t", "y": "2*t", "alpha": 0, "beta": 1}}"#,
        )
        .unwrap();
        assert_eq!(s.frame.phi, FRAC_PI_2);
        assert_eq!(
            (s.force.s.as_deref(), s.curve.z.as_deref(), s.tol),
            (None, None, None)
        );
        let back = Scenario::from_json(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = Scenario::from_json(r#"{"force": {"P": "1", "R": "1", "Q": "2"}, "curve": {"x": "t", "y": "t", "alpha": 0, "beta": 1}}"#)
            .unwrap_err();
        assert_eq!(e.code, EXIT_INPUT);
        assert!(e.message.contains("Q"), "{}", e.message);
    }

    #[test]
    fn tolerance_precedence() {
        assert_eq!(resolve_tol(None, None).unwrap(), DEFAULT_TOL);
        assert_eq!(resolve_tol(None, Some(1e-6)).unwrap(), 1e-6);
        assert_eq!(resolve_tol(Some(1e-8), Some(1e-6)).unwrap(), 1e-8);
        assert!(resolve_tol(Some(-1.0), None).is_err());
        assert!(env_tolerance(Some("abc")).is_err());
        assert_eq!(env_tolerance(Some(" 1e-7 ")).unwrap(), Some(1e-7));
    }

    #[test]
    fn completion_fills_missing_components() {
        let s = Scenario::from_json(
            r#"{"force": {"P": "1", "R": "1"}, "curve": {"x": "t", "y": "2*t", "alpha": 0, "beta": 1}}"#,
        )
        .unwrap();
        let p = prepare(s, None).unwrap();
        let w = work3d::work(&p.force, &p.curve, p.tol).unwrap();
        assert!((w.value - 1.0 / 6.0).abs() < 1e-10);
        assert_eq!(p.scenario.tol, Some(DEFAULT_TOL));
    }

    #[test]
    fn field_errors_name_the_field() {
        let s = Scenario::from_json(r#"{"force": {"P": "1 +", "R": "1"}, "curve": {"x": "t", "y": "t", "alpha": 0, "beta": 1}}"#)
            .unwrap();
        let e = prepare(s, None).unwrap_err();
        assert_eq!((e.code, e.context.as_str()), (EXIT_INPUT, "force.P"));
        assert!(e.message.contains("byte 3"), "{}", e.message);
    }

    #[test]
    fn overrides_replace_file_fields() {
        let s = Scenario::from_json(r#"{"force": {"P": "1", "R": "1"}, "curve": {"x": "t", "y": "t", "alpha": 0, "beta": 1}, "tol": 1e-9}"#)
            .unwrap();
        let a = ScenarioArgs {
            beta: Some(2.0),
            s: Some("-1/2".into()),
            tol: Some(1e-12),
            ..Default::default()
        };
        let s = s.with_overrides(&a);
        assert_eq!(
            (s.curve.beta, s.force.s.as_deref(), s.tol),
            (2.0, Some("-1/2"), Some(1e-12))
        );
    }
}
