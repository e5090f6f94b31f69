//! The `spiraldim` command line: argument parsing, the five subcommands and
//! their reports.

mod config;
mod report;
mod svg;

pub use report::{PrecisionInfo, PrecisionSource, RunReport, Timing, Validation};
pub use svg::{render as render_svg, PlotKind};

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::boxcount::{
    count_boxes_median, cover_counts, fit_dimension, geometric_eps, turn_merge_parameter, walk_adaptive,
    BoxCountError, ChirpCurve, CountSeries, EllipticalProjection, GridOptions, MnSpiralCurve, NnSpiralCurve,
    PlanarCurve, PointCloud, PowerSpiral, ProjectionPlane,
};
use crate::catalog::{
    dim_chirp, dim_conjecture_mn, dim_degenerate_nn, dim_elliptical, dim_power_spiral, dims_slowfast,
    parse_rational, to_f64, CatalogError, DimensionEstimate, Method, Rational,
};
use crate::numerics::{LogReal, NumericsError, Precision, PRECISION_ENV};
use crate::sector::{estimate_dimension, K5Mode, SectorError, DEFAULT_EPS_LOG10, DEFAULT_R0, DEFAULT_SECTORS};
use crate::slowfast::{analyze, build_chirp, ModelSpec, SlowFastError};
use crate::spirals::{FocusParams, Orientation, Spiral3DParams, SpiralError};

/// Exit status when a run completes but a gating validation fails.
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("plot: {0}")]
    Plot(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Sector(#[from] SectorError),
    #[error(transparent)]
    BoxCount(#[from] BoxCountError),
    #[error(transparent)]
    SlowFast(#[from] SlowFastError),
    #[error(transparent)]
    Spiral(#[from] SpiralError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad parameters, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Catalog(_) => 2,
            CliError::Spiral(SpiralError::EvenExponent { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spiraldim",
    version,
    about = "Box dimensions of degenerate spirals, chirps and slow-fast orbits"
)]
pub struct Cli {
    /// Worker threads for parallel sectors and box sizes; 0 uses every core
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Directory receiving report.json and the data files
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Seed of the random grid offsets
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Significant digits of the log-domain arithmetic; overrides SPIRALDIM_PRECISION
    #[arg(long, global = true)]
    pub precision_digits: Option<u32>,
    /// File of `flag = value` defaults; flags on the command line win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form dimension of a curve family
    Analytic(AnalyticArgs),
    /// Sector estimate of an (n, n) spiral's dimension at a tiny box size
    EstimateSector(SectorArgs),
    /// Grid box-counting of a built-in curve or a CSV point cloud
    Oracle(OracleArgs),
    /// Entry-exit orbit, chirp and their dimensions for a slow-fast model file
    Slowfast(SlowfastArgs),
    /// SVG plot of a CSV written by another subcommand
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyticFamily {
    Nn,
    MnConjecture,
    Power,
    Chirp,
    Elliptical,
    Slowfast,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyticArgs {
    #[arg(value_enum)]
    pub family: AnalyticFamily,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Exponent as `p/q` or a decimal
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub p0: Option<String>,
    #[arg(long)]
    pub q0: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum K5Arg {
    Exact,
    Approximate,
}

#[derive(Debug, Args, Serialize)]
pub struct SectorArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_R0)]
    pub r0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
    /// Number of angular sectors
    #[arg(long = "L", default_value_t = DEFAULT_SECTORS)]
    #[serde(rename = "L")]
    pub l: u32,
    /// Box size as a power of ten
    #[arg(long, default_value_t = DEFAULT_EPS_LOG10, allow_hyphen_values = true)]
    pub eps_log10: f64,
    #[arg(long, value_enum, default_value_t = K5Arg::Exact)]
    pub k5: K5Arg,
    #[arg(long, default_value = "stable")]
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleFamily {
    /// `(n, n)` spiral
    Nn,
    /// `(m, n)` spiral in generalized polar form
    Mn,
    /// `r = phi^-alpha`
    Power,
    /// `x^alpha sin(x^-beta)`
    Chirp,
    /// Planar elliptical spiral, the xy projection of the 3D trajectory
    Elliptical,
    /// All three coordinate projections of the 3D trajectory
    #[value(name = "3d")]
    #[serde(rename = "3d")]
    ThreeD,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, value_enum, required_unless_present = "file", conflicts_with = "file")]
    pub family: Option<OracleFamily>,
    /// CSV of points, one `x[,y[,z]]` row each
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Expected number of columns in `--file`
    #[arg(long, requires = "file")]
    pub dim: Option<usize>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub p0: Option<String>,
    #[arg(long)]
    pub q0: Option<String>,
    /// Spatial scale of nn and mn curves
    #[arg(long)]
    pub scale: Option<f64>,
    /// Smallest box size of the fit
    #[arg(long)]
    pub eps_lo: Option<f64>,
    /// Largest box size of the fit
    #[arg(long)]
    pub eps_hi: Option<f64>,
    /// Box sizes, geometrically spaced
    #[arg(long, default_value_t = 9)]
    pub eps_count: usize,
    /// Randomly offset grids per box size; the median count is used
    #[arg(long, default_value_t = 5)]
    pub anchors: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SlowfastArgs {
    /// Model file, `key = value` lines or JSON
    pub model: PathBuf,
    /// Number of orbit levels, overriding the file
    #[arg(long)]
    pub count: Option<usize>,
    /// First level, overriding the file
    #[arg(long)]
    pub y0: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub anchors: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PlotArgs {
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub kind: PlotKind,
    /// Output file; defaults to the data file name with an .svg extension,
    /// placed in --out-dir when given
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Values printed in the sector table for `r0 = 1/10`, `phi0 = 0`,
/// `L = 1000`, `eps = 1e-10000`.
const PUBLISHED_SECTOR_VALUES: [((u32, u32), f64); 4] = [
    ((3, 2), 1.84593),
    ((3, 11), 1.96992),
    ((11, 2), 1.95534),
    ((11, 11), 1.99155),
];

/// Default box-size window of the built-in spirals with a scale parameter.
const SCALED_WINDOW: (f64, f64) = (1e-5, 1e-3);

/// Walk budget of the curve sample written next to the counts.
const SAMPLE_POINTS: usize = 4_000_000;

struct Outcome {
    parameters: Value,
    results: Value,
    validations: Vec<Validation>,
    outputs: Vec<String>,
}

/// Files of one run, all placed in `--out-dir` when it is set.
struct Sink<'a> {
    dir: Option<&'a Path>,
    written: Vec<String>,
}

impl Sink<'_> {
    fn write(&mut self, name: &str, f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
        let Some(dir) = self.dir else {
            return Ok(());
        };
        let path = dir.join(name);
        let mut out = BufWriter::new(fs::File::create(&path)?);
        f(&mut out)?;
        out.flush()?;
        self.written.push(path.display().to_string());
        Ok(())
    }
}

fn need<T>(v: Option<T>, flag: &str, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

fn rational(v: &Option<String>, flag: &str, default: Option<&str>, what: &str) -> Result<Rational, CliError> {
    let s = match (v.as_deref(), default) {
        (Some(s), _) | (None, Some(s)) => s,
        (None, None) => return Err(CliError::Usage(format!("{what} needs --{flag}"))),
    };
    Ok(parse_rational(s)?)
}

fn exact_json(r: Rational) -> Value {
    json!({ "exact": format!("{}/{}", r.numer(), r.denom()), "value": to_f64(r) })
}

fn label(d: &DimensionEstimate) -> String {
    match d.value_exact {
        Some(r) => format!("{}/{} = {:.7} ({})", r.numer(), r.denom(), d.value, d.method),
        None => format!("{:.7} ({})", d.value, d.method),
    }
}

fn cmd_analytic(a: &AnalyticArgs) -> Result<Outcome, CliError> {
    let what = "this family";
    let results = match a.family {
        AnalyticFamily::Slowfast => {
            let (n, k) = (need(a.n, "n", what)?, need(a.k, "k", what)?);
            let d = dims_slowfast(n, k)?;
            eprintln!(
                "orbit {}/{}, chirp {}/{}",
                d.dim_orbit.numer(),
                d.dim_orbit.denom(),
                d.updim_chirp.numer(),
                d.updim_chirp.denom()
            );
            json!({
                "dim_orbit": exact_json(d.dim_orbit),
                "updim_chirp": exact_json(d.updim_chirp),
                "level_exp": exact_json(d.level_exp),
                "gap_exp": exact_json(d.gap_exp),
                "conjecture": false,
            })
        }
        family => {
            let d = match family {
                AnalyticFamily::Nn => dim_degenerate_nn(need(a.n, "n", what)?, need(a.k, "k", what)?)?,
                AnalyticFamily::MnConjecture => {
                    dim_conjecture_mn(need(a.m, "m", what)?, need(a.n, "n", what)?, need(a.k, "k", what)?)?
                }
                AnalyticFamily::Power => dim_power_spiral(rational(&a.alpha, "alpha", None, what)?)?,
                AnalyticFamily::Chirp => dim_chirp(
                    rational(&a.alpha, "alpha", None, what)?,
                    rational(&a.beta, "beta", None, what)?,
                )?,
                AnalyticFamily::Elliptical => dim_elliptical(
                    rational(&a.p0, "p0", None, what)?,
                    rational(&a.q0, "q0", None, what)?,
                )?,
                AnalyticFamily::Slowfast => unreachable!("handled above"),
            };
            eprintln!("{}", label(&d));
            json!({ "dimension": d, "conjecture": d.method == Method::Conjecture })
        }
    };
    Ok(Outcome {
        parameters: serde_json::to_value(a)?,
        results,
        validations: Vec::new(),
        outputs: Vec::new(),
    })
}

fn cmd_sector(a: &SectorArgs, prec: Precision, sink: &mut Sink) -> Result<Outcome, CliError> {
    if a.k == 0 {
        return Err(CliError::Usage(format!(
            "k = 0: the trajectories are rectifiable and the dimension is analytically 1; \
             see `spiraldim analytic nn --n {} --k 0`",
            a.n
        )));
    }
    let params = FocusParams::nn(a.n, a.k, a.orientation)?;
    let mode = match a.k5 {
        K5Arg::Exact => K5Mode::Exact,
        K5Arg::Approximate => K5Mode::Approximate,
    };
    let report = estimate_dimension(params, a.r0, a.phi0, a.l, LogReal::pow10(a.eps_log10), mode, prec)?;
    sink.write("sectors.csv", |w| Ok(report.write_csv(w)?))?;
    let mut validations = vec![Validation::within("max_D vs analytic", report.max_d, report.analytic_d, 5e-3)];
    let table_setup = a.r0 == 0.1 && a.phi0 == 0.0 && a.l == 1000 && a.eps_log10 == -10000.0;
    if let Some(&(_, v)) = PUBLISHED_SECTOR_VALUES.iter().find(|(nk, _)| *nk == (a.n, a.k)) {
        if table_setup && a.orientation == Orientation::Stable {
            validations.push(Validation::within("max_D vs published table", report.max_d, v, 5e-4));
        }
    }
    eprintln!("max_D = {:.6}, analytic {:.6}", report.max_d, report.analytic_d);
    Ok(Outcome {
        parameters: serde_json::to_value(a)?,
        results: serde_json::to_value(&report)?,
        validations,
        outputs: Vec::new(),
    })
}

/// One curve measured by the oracle, with the value it is compared to.
struct OracleCase {
    name: String,
    curve: Box<dyn PlanarCurve>,
    reference: DimensionEstimate,
    window: (f64, f64),
}

fn oracle_cases(a: &OracleArgs, family: OracleFamily) -> Result<Vec<OracleCase>, CliError> {
    let what = "this family";
    let mid = (10f64.powf(-4.5), 10f64.powf(-2.5));
    if a.scale.is_some() && !matches!(family, OracleFamily::Nn | OracleFamily::Mn) {
        return Err(CliError::Usage("--scale applies to the nn and mn families".into()));
    }
    let case = |name: &str, curve: Box<dyn PlanarCurve>, reference, window| OracleCase {
        name: name.to_string(),
        curve,
        reference,
        window,
    };
    Ok(match family {
        OracleFamily::Nn => {
            let (n, k) = (need(a.n, "n", what)?, need(a.k, "k", what)?);
            let reference = dim_degenerate_nn(n, k)?;
            // the (1,1) spiral closes up slowly; a larger picture keeps its
            // merge radius inside the window
            let scale = a.scale.unwrap_or(if n * k == 1 { 0.2 } else { 0.02 });
            vec![case("nn", Box::new(NnSpiralCurve::asymptotic(n, k, scale)?), reference, SCALED_WINDOW)]
        }
        OracleFamily::Mn => {
            let (m, n, k) = (need(a.m, "m", what)?, need(a.n, "n", what)?, need(a.k, "k", what)?);
            let reference = if m == n { dim_degenerate_nn(n, k)? } else { dim_conjecture_mn(m, n, k)? };
            let scale = a.scale.unwrap_or(0.05);
            vec![case("mn", Box::new(MnSpiralCurve::asymptotic(m, n, k, scale)?), reference, SCALED_WINDOW)]
        }
        OracleFamily::Power => {
            let alpha = rational(&a.alpha, "alpha", Some("1/2"), what)?;
            let reference = dim_power_spiral(alpha)?;
            vec![case("power", Box::new(PowerSpiral::new(to_f64(alpha))?), reference, mid)]
        }
        OracleFamily::Chirp => {
            let alpha = rational(&a.alpha, "alpha", Some("1/2"), what)?;
            let beta = rational(&a.beta, "beta", Some("1"), what)?;
            let reference = dim_chirp(alpha, beta)?;
            vec![case("chirp", Box::new(ChirpCurve::new(to_f64(alpha), to_f64(beta))?), reference, mid)]
        }
        OracleFamily::Elliptical | OracleFamily::ThreeD => {
            let p0 = rational(&a.p0, "p0", Some("1/2"), what)?;
            let q0 = rational(&a.q0, "q0", Some("1"), what)?;
            let params = Spiral3DParams::new(to_f64(p0), to_f64(q0))?;
            let xy = case(
                "xy",
                Box::new(EllipticalProjection::new(params, ProjectionPlane::Xy)),
                dim_elliptical(p0, q0)?,
                mid,
            );
            if family == OracleFamily::Elliptical {
                vec![xy]
            } else {
                // the xz and yz shadows are chirps with frequency exponent 1
                let one = Rational::from_integer(1);
                vec![
                    xy,
                    case(
                        "xz",
                        Box::new(EllipticalProjection::new(params, ProjectionPlane::Xz)),
                        dim_chirp(p0, one)?,
                        mid,
                    ),
                    case(
                        "yz",
                        Box::new(EllipticalProjection::new(params, ProjectionPlane::Yz)),
                        dim_chirp(q0, one)?,
                        mid,
                    ),
                ]
            }
        }
    })
}

fn eps_series(a: &OracleArgs, window: (f64, f64)) -> Result<((f64, f64), Vec<f64>), CliError> {
    let lo = a.eps_lo.unwrap_or(window.0);
    let hi = a.eps_hi.unwrap_or(window.1);
    if !(lo > 0.0 && hi > lo) {
        return Err(CliError::Usage(format!("need 0 < eps-lo < eps-hi, got {lo}, {hi}")));
    }
    if a.eps_count < 4 {
        return Err(CliError::Usage("a fit needs --eps-count of at least 4".into()));
    }
    Ok(((lo, hi), geometric_eps(lo, hi, a.eps_count)))
}

fn counts_json(series: &CountSeries) -> Value {
    series.entries().iter().map(|&(e, n)| json!([e, n])).collect()
}

/// Points of `curve` up to the parameter where its turns merge at `eps`.
fn curve_sample(curve: &dyn PlanarCurve, eps: f64, w: &mut dyn Write) -> Result<(), CliError> {
    let t_end = turn_merge_parameter(curve, eps)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["t", "x", "y"])?;
    let mut rows = Vec::new();
    walk_adaptive(|t| curve.point(t), curve.start(), t_end, eps, SAMPLE_POINTS, |t, p| {
        rows.push([t, p[0], p[1]]);
        Ok(())
    })?;
    for r in rows {
        csv.write_record(r.iter().map(|v| format!("{v:.10e}")))?;
    }
    csv.flush()?;
    Ok(())
}

fn cmd_oracle(a: &OracleArgs, opts: &GridOptions, sink: &mut Sink) -> Result<Outcome, CliError> {
    let parameters = serde_json::to_value(a)?;
    if let Some(path) = &a.file {
        let cloud = PointCloud::read_csv(fs::File::open(path)?)?;
        if let Some(d) = a.dim {
            if d != cloud.dim() {
                return Err(CliError::Usage(format!("--dim {d}, but the file has {} columns", cloud.dim())));
            }
        }
        let (lo, hi) = cloud.bounding_box();
        let extent = lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        if !(extent > 0.0) {
            return Err(CliError::Usage("the point cloud has no extent".into()));
        }
        let (window, eps) = eps_series(a, (extent * 1e-3, extent * 1e-1))?;
        let series = CountSeries::from_counts(eps, |e| Ok(count_boxes_median(&cloud, e, opts)? as u64))?;
        let fit = fit_dimension(&series, window)?;
        sink.write("counts.csv", |w| Ok(series.write_csv(w)?))?;
        eprintln!("grid fit {:.4} +- {:.4}", fit.value, fit.uncertainty.unwrap_or(0.0));
        return Ok(Outcome {
            parameters,
            results: json!({ "points": cloud.len(), "dim": cloud.dim(), "fit": fit, "counts": counts_json(&series) }),
            validations: Vec::new(),
            outputs: Vec::new(),
        });
    }
    let family = a.family.expect("clap requires --family without --file");
    let mut curves = Vec::new();
    let mut validations = Vec::new();
    for case in oracle_cases(a, family)? {
        let (window, eps) = eps_series(a, case.window)?;
        let series = cover_counts(case.curve.as_ref(), eps, opts)?;
        let fit = fit_dimension(&series, window)?;
        let suffix = if family == OracleFamily::ThreeD { format!("_{}", case.name) } else { String::new() };
        sink.write(&format!("counts{suffix}.csv"), |w| Ok(series.write_csv(w)?))?;
        sink.write(&format!("curve{suffix}.csv"), |w| curve_sample(case.curve.as_ref(), window.1, w))?;
        let conjecture = case.reference.method == Method::Conjecture;
        let check_name = if conjecture {
            format!("{} conjecture comparison", case.name)
        } else {
            format!("{} grid fit vs analytic", case.name)
        };
        let check = Validation::within(check_name, fit.value, case.reference.value, 0.1);
        eprintln!(
            "{:<4} grid {:.4} +- {:.4}   {} {}",
            case.name,
            fit.value,
            fit.uncertainty.unwrap_or(0.0),
            if conjecture { "conjecture comparison" } else { "analytic" },
            label(&case.reference)
        );
        validations.push(if conjecture { check.informational() } else { check });
        curves.push(json!({
            "name": case.name,
            "fit": fit,
            "reference": case.reference,
            "counts": counts_json(&series),
        }));
    }
    Ok(Outcome {
        parameters,
        results: json!({ "family": family, "curves": curves }),
        validations,
        outputs: Vec::new(),
    })
}

fn cmd_slowfast(a: &SlowfastArgs, opts: &GridOptions, sink: &mut Sink) -> Result<Outcome, CliError> {
    let mut spec = ModelSpec::parse(&fs::read_to_string(&a.model)?)?;
    if let Some(c) = a.count {
        spec.count = c;
    }
    if let Some(y0) = a.y0 {
        spec.y0 = y0;
    }
    let (orbit, analysis) = analyze(&spec, opts)?;
    sink.write("orbit.csv", |w| Ok(orbit.write_csv(w)?))?;
    let chirp = build_chirp(&orbit)?;
    sink.write("chirp.csv", |w| Ok(chirp.write_csv(w)?))?;
    let p = analysis.predicted;
    let validations = vec![
        Validation::within("orbit dimension", analysis.orbit_dimension.value, to_f64(p.dim_orbit), 0.03),
        Validation::within("chirp dimension", analysis.chirp_dimension.value, to_f64(p.updim_chirp), 0.1),
        Validation::within("spiral dimension", analysis.spiral_dimension.value, to_f64(p.updim_chirp), 0.1),
        Validation::within("level exponent", -analysis.level_exponent.slope, to_f64(p.level_exp), 0.05),
        Validation::within("gap exponent", -analysis.gap_exponent.slope, to_f64(p.gap_exp), 0.05),
        Validation::within("asymptotic ratio", analysis.asymptotic_ratio, 1.0, 0.05).informational(),
    ];
    eprintln!(
        "codimension k = {}: orbit {:.4}, chirp {:.4}, spiral {:.4}",
        analysis.codimension,
        analysis.orbit_dimension.value,
        analysis.chirp_dimension.value,
        analysis.spiral_dimension.value
    );
    Ok(Outcome {
        parameters: json!({ "args": a, "model": spec }),
        results: serde_json::to_value(&analysis)?,
        validations,
        outputs: Vec::new(),
    })
}

fn cmd_plot(a: &PlotArgs, out_dir: Option<&Path>) -> Result<Outcome, CliError> {
    let svg = render_svg(fs::File::open(&a.data)?, a.kind)?;
    let target = match (&a.out, out_dir) {
        (Some(p), _) => p.clone(),
        (None, Some(dir)) => dir.join(a.data.with_extension("svg").file_name().unwrap_or("plot.svg".as_ref())),
        (None, None) => a.data.with_extension("svg"),
    };
    fs::write(&target, svg)?;
    Ok(Outcome {
        parameters: serde_json::to_value(a)?,
        results: json!({ "svg": target.display().to_string() }),
        validations: Vec::new(),
        outputs: vec![target.display().to_string()],
    })
}

fn resolve_precision(flag: Option<u32>) -> Result<PrecisionInfo, CliError> {
    let (prec, source) = match flag {
        Some(d) => (Precision::new(d)?, PrecisionSource::Flag),
        None if std::env::var_os(PRECISION_ENV).is_some() => (Precision::from_env()?, PrecisionSource::Env),
        None => (Precision::default(), PrecisionSource::Default),
    };
    Ok(PrecisionInfo {
        digits: prec.digits(),
        source,
    })
}

/// Run a parsed command line. Data files and `report.json` go to
/// `--out-dir` when it is set; nothing is printed to stdout.
pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let precision = resolve_precision(cli.precision_digits)?;
    let prec = Precision::new(precision.digits)?;
    if let Some(dir) = &cli.out_dir {
        fs::create_dir_all(dir)?;
    }
    let mut sink = Sink {
        dir: cli.out_dir.as_deref(),
        written: Vec::new(),
    };
    let grid = |anchors: usize| GridOptions {
        anchors,
        seed: cli.seed,
        ..GridOptions::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("--workers: {e}")))?;
    let (name, outcome) = pool.install(|| -> Result<_, CliError> {
        Ok(match &cli.command {
            Command::Analytic(a) => ("analytic", cmd_analytic(a)?),
            Command::EstimateSector(a) => ("estimate-sector", cmd_sector(a, prec, &mut sink)?),
            Command::Oracle(a) => ("oracle", cmd_oracle(a, &grid(a.anchors), &mut sink)?),
            Command::Slowfast(a) => ("slowfast", cmd_slowfast(a, &grid(a.anchors), &mut sink)?),
            Command::Plot(a) => ("plot", cmd_plot(a, cli.out_dir.as_deref())?),
        })
    })?;
    let mut outputs = sink.written;
    outputs.extend(outcome.outputs);
    let mut report = RunReport {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: name.to_string(),
        parameters: outcome.parameters,
        precision,
        seed: cli.seed,
        results: outcome.results,
        validations: outcome.validations,
        outputs,
        timing: Timing { wall_seconds: 0.0 },
    };
    if let Some(dir) = &cli.out_dir {
        report.outputs.push(dir.join("report.json").display().to_string());
    }
    report.timing.wall_seconds = start.elapsed().as_secs_f64();
    if let Some(dir) = &cli.out_dir {
        fs::write(dir.join("report.json"), report.to_json())?;
    }
    Ok(report)
}

/// Parse `args` (program name first), merging `--config` defaults.
pub fn parse_args<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let mut cmd = Cli::command();
    let args = config::merge(args, &cmd).map_err(|e| cmd.error(clap::error::ErrorKind::ValueValidation, e))?;
    let matches = cmd.try_get_matches_from_mut(args)?;
    Cli::from_arg_matches(&matches)
}

/// Entry point of the binary: prints the JSON report to stdout and a short
/// summary to stderr, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let cli = match parse_args(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.to_json());
            for v in &report.validations {
                eprintln!(
                    "{} {}: {:.6} vs {:.6} (tolerance {}){}",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.name,
                    v.value,
                    v.expected,
                    v.tolerance,
                    if v.gating { "" } else { ", informational" }
                );
            }
            if report.passed() {
                0
            } else {
                EXIT_VALIDATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
