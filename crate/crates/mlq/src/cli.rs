//! Command-line front end.
//!
//! Every subcommand evaluates one library capability onto a grid and writes
//! a single table to one output file, as CSV or JSON. Runs are
//! deterministic: a repeated invocation with identical arguments produces
//! byte-identical output, the metadata line carries no timestamps, and any
//! subcommand that draws random paths demands an explicit seed. Files are
//! written atomically through a sibling temporary file plus rename, so a
//! crashed run never leaves a partial table behind.
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 for domain errors, 4 for
//! numeric failures. A failed run prints exactly one machine-parsable line
//! to stderr of the form `mlq-error code=<n> kind=<kind> message="<text>"`.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ctrw::{ctrw_pdf_series, simulate_ctrw_checkpoints, universality_gap, JumpLaw};
use crate::diffusion::{green_cauchy, green_signalling, DiffusionConfig};
use crate::error::MlqError;
use crate::ml::{ml, MLParams, Method};
use crate::relaxation::{
    e_alpha, e_approx_long, e_approx_short, phi_alpha, spectral_density, RelaxOrder,
};
use crate::renewal::{frac_poisson_pmf, WaitingTimeLaw};
use crate::wright::{f_wright, m_spacetime, m_wright};

/// Version string stamped into every output file.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

// ---------------------------------------------------------------------------
// Failure handling
// ---------------------------------------------------------------------------

/// Everything that can stop a run, split by exit code family.
#[derive(Debug)]
pub enum Failure {
    /// Bad or missing arguments; exits 2 before any computation starts.
    Usage(String),
    /// A library error surfaced while computing or writing; exits 3 or 4.
    Run(MlqError),
}

impl From<MlqError> for Failure {
    fn from(e: MlqError) -> Self {
        Failure::Run(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Run(e) => e.exit_code(),
        }
    }

    /// One-line machine-parsable rendering for stderr. The message is
    /// quoted with escape sequences, so the line never spans rows.
    pub fn render_line(&self) -> String {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Run(e) => (run_error_kind(e), e.to_string()),
        };
        format!(
            "mlq-error code={} kind={} message={:?}",
            self.exit_code(),
            kind,
            msg
        )
    }
}

fn run_error_kind(e: &MlqError) -> &'static str {
    match e {
        MlqError::Domain(_) => "domain",
        MlqError::Divergence(_) => "divergence",
        MlqError::Cancellation(_) => "cancellation",
        MlqError::NonConvergence(_) => "non-convergence",
        MlqError::TruncationBudget(_) => "truncation-budget",
        MlqError::Io(_) => "io",
    }
}

// ---------------------------------------------------------------------------
// Output table model
// ---------------------------------------------------------------------------

/// One table cell. Integer cells render without a decimal point; float
/// cells render as the shortest string that parses back to the same bits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Shortest decimal string that round-trips to the same f64.
pub fn format_float(v: f64) -> String {
    format!("{v}")
}

/// A fully computed result table plus the metadata stamped into the file.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: String,
    /// Resolved parameters in a fixed, builder-chosen order.
    pub parameters: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// CSV rendering: one `#` metadata line (command, parameters, seed,
/// artifact version), a header row, then data rows. Comma separators,
/// `.` decimal marks, LF line endings.
pub fn render_csv(t: &Table) -> String {
    let mut s = String::new();
    s.push_str(&format!("# command={}", t.command));
    for (k, v) in &t.parameters {
        s.push_str(&format!(" {k}={v}"));
    }
    match t.seed {
        Some(x) => s.push_str(&format!(" seed={x}")),
        None => s.push_str(" seed=none"),
    }
    s.push_str(&format!(" version={ARTIFACT_VERSION}\n"));
    s.push_str(&t.columns.join(","));
    s.push('\n');
    for row in &t.rows {
        let rendered: Vec<String> = row.iter().map(Cell::render).collect();
        s.push_str(&rendered.join(","));
        s.push('\n');
    }
    s
}

/// JSON rendering: an object with sorted keys `columns`, `command`,
/// `parameters`, `rows`, `seed`, `version`. Numbers are serialized in
/// shortest round-trip form by the JSON writer itself.
pub fn render_json(t: &Table) -> Result<String, MlqError> {
    use serde_json::{json, Map, Value};
    let mut root = Map::new();
    root.insert("command".into(), json!(t.command));
    let mut params = Map::new();
    for (k, v) in &t.parameters {
        params.insert(k.clone(), json!(v));
    }
    root.insert("parameters".into(), Value::Object(params));
    root.insert(
        "seed".into(),
        match t.seed {
            Some(x) => json!(x),
            None => Value::Null,
        },
    );
    root.insert("version".into(), json!(ARTIFACT_VERSION));
    root.insert("columns".into(), json!(t.columns));
    let mut rows = Vec::with_capacity(t.rows.len());
    for row in &t.rows {
        let mut out = Vec::with_capacity(row.len());
        for cell in row {
            out.push(match cell {
                Cell::Int(i) => json!(i),
                Cell::Num(v) => Value::Number(serde_json::Number::from_f64(*v).ok_or_else(
                    || MlqError::NonConvergence(format!("non-finite value {v} in output table")),
                )?),
                Cell::Text(s) => json!(s),
            });
        }
        rows.push(Value::Array(out));
    }
    root.insert("rows".into(), Value::Array(rows));
    let mut text = serde_json::to_string_pretty(&Value::Object(root))
        .map_err(|e| MlqError::NonConvergence(format!("json serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// A table read back from CSV text.
#[derive(Debug, Clone)]
pub struct ParsedTable {
    /// Raw `#` metadata lines, without the trailing newline.
    pub metadata: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// The artifact's own CSV reader: accepts exactly what `render_csv`
/// emits. Tokens that parse as i64 become integer cells, tokens that
/// parse as finite f64 become float cells, everything else stays text.
pub fn parse_csv(text: &str) -> Result<ParsedTable, MlqError> {
    let mut metadata = Vec::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') {
            metadata.push(line.to_string());
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match &columns {
            None => columns = Some(fields.iter().map(|s| s.to_string()).collect()),
            Some(cols) => {
                if fields.len() != cols.len() {
                    return Err(MlqError::Domain(format!(
                        "row has {} fields, header has {}",
                        fields.len(),
                        cols.len()
                    )));
                }
                rows.push(fields.iter().map(|tok| parse_cell(tok)).collect());
            }
        }
    }
    let columns = columns.ok_or_else(|| MlqError::Domain("csv has no header row".into()))?;
    Ok(ParsedTable {
        metadata,
        columns,
        rows,
    })
}

fn parse_cell(tok: &str) -> Cell {
    if let Ok(i) = tok.parse::<i64>() {
        return Cell::Int(i);
    }
    if let Ok(v) = tok.parse::<f64>() {
        if v.is_finite() {
            return Cell::Num(v);
        }
    }
    Cell::Text(tok.to_string())
}

/// Read and parse a CSV file previously written by this artifact.
pub fn read_csv_table(path: &Path) -> Result<ParsedTable, MlqError> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

/// Write the full content to a temporary file in the destination
/// directory, then rename it over the target path, so the output appears
/// exactly once and never half-written.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), MlqError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| MlqError::Io(e.error))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Argument types
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "mlq",
    version,
    about = "Deterministic data tables for Mittag-Leffler relaxation, Wright diffusion kernels, fractional counting, and CTRW rescaling",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Destination file; written atomically via temp file plus rename
    #[arg(long)]
    pub out: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the three-parameter Mittag-Leffler function at a point or on a grid
    Eval(EvalArgs),
    /// Relaxation function and its rate density on a time grid
    Relax(RelaxArgs),
    /// Rate spectrum of the relaxation function on a frequency grid
    Spectrum(SpectrumArgs),
    /// M-Wright density and its flux companion on a one-sided grid
    Wright(WrightArgs),
    /// Green function of the time-fractional diffusion-wave equation
    Green(GreenArgs),
    /// Fractional Poisson counting probabilities at one time
    Poisson(PoissonArgs),
    /// Lattice walker displacement law, analytic series plus optional simulation
    Ctrw(CtrwArgs),
    /// Gap between a thinned-rescaled waiting law and its scaling limit
    Universality(UniversalityArgs),
    /// Data tables for the standard figure set (ids 1 through 7)
    Figure(FigureArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    /// First parameter alpha (must be positive)
    #[arg(long)]
    pub alpha: f64,
    /// Second parameter beta
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Prabhakar exponent gamma
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Single evaluation point (mutually exclusive with --zmin/--zmax)
    #[arg(long)]
    pub z: Option<f64>,
    /// Grid start (requires --zmax)
    #[arg(long)]
    pub zmin: Option<f64>,
    /// Grid end (requires --zmin)
    #[arg(long)]
    pub zmax: Option<f64>,
    /// Grid size when sweeping
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RelaxArgs {
    /// Relaxation order in (0, 1]
    #[arg(long)]
    pub alpha: f64,
    /// First grid time; defaults to tmax/points (linear) or tmax/10^4 (log)
    #[arg(long)]
    pub tmin: Option<f64>,
    /// Last grid time
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    /// Number of grid times
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Use a geometric time grid instead of a linear one
    #[arg(long)]
    pub log: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Relaxation order in (0, 1); order 1 has no density
    #[arg(long)]
    pub alpha: f64,
    /// Last grid rate; the grid starts one step above zero
    #[arg(long, default_value_t = 2.0)]
    pub rmax: f64,
    /// Number of grid rates
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct WrightArgs {
    /// M-Wright order in (0, 1)
    #[arg(long)]
    pub nu: f64,
    /// Last grid point; the grid starts at zero
    #[arg(long, default_value_t = 4.0)]
    pub xmax: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GreenKind {
    /// Whole-line problem with an initial datum
    Cauchy,
    /// Half-line problem driven from the boundary
    Signalling,
}

#[derive(Args, Debug)]
pub struct GreenArgs {
    /// Half the fractional time order: nu in (0, 1)
    #[arg(long)]
    pub nu: f64,
    /// Generalized diffusivity (positive)
    #[arg(long, default_value_t = 1.0)]
    pub diffusivity: f64,
    /// Observation time (positive)
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Spatial extent of the grid
    #[arg(long, default_value_t = 4.0)]
    pub xmax: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Which Green function to tabulate
    #[arg(long, value_enum, default_value_t = GreenKind::Cauchy)]
    pub kind: GreenKind,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PoissonArgs {
    /// Counting order in (0, 1]
    #[arg(long)]
    pub beta: f64,
    /// Observation time (nonnegative)
    #[arg(long)]
    pub t: f64,
    /// Largest count to tabulate
    #[arg(long, default_value_t = 10)]
    pub kmax: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum JumpChoice {
    /// Every jump moves one site to the right
    Unit,
    /// Jumps move one site left or right with equal probability
    Symmetric,
}

#[derive(Args, Debug)]
pub struct CtrwArgs {
    /// Counting order in (0, 1]
    #[arg(long)]
    pub beta: f64,
    /// Observation time (positive)
    #[arg(long)]
    pub t: f64,
    /// Cap on the number of convolution terms in the analytic series
    #[arg(long, default_value_t = 400)]
    pub kmax: usize,
    /// Jump law on the lattice
    #[arg(long, value_enum, default_value_t = JumpChoice::Symmetric)]
    pub jump: JumpChoice,
    /// Simulate this many paths and add an empirical frequency column
    #[arg(long)]
    pub paths: Option<usize>,
    /// RNG seed; required whenever --paths is given
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LawChoice {
    /// Exponential waiting times (fixed point of the rescaling map)
    Exponential,
    /// Mittag-Leffler waiting times (fixed point at every scale)
    MittagLeffler,
    /// Pareto-type power tail with an abrupt cutoff near the origin
    Pareto,
}

#[derive(Args, Debug)]
pub struct UniversalityArgs {
    /// Waiting-time family to rescale
    #[arg(long, value_enum, default_value_t = LawChoice::Pareto)]
    pub law: LawChoice,
    /// Rate of the exponential law
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    /// Tail order in (0, 1) for the Mittag-Leffler and Pareto laws
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Scale constant of the Pareto tail
    #[arg(long, default_value_t = 0.3)]
    pub scale: f64,
    /// Comma-separated thinning scales
    #[arg(long, default_value = "1e-1,1e-2,1e-3,1e-4")]
    pub taus: String,
    /// Comma-separated Laplace abscissas
    #[arg(long, default_value = "0.5,1,2")]
    pub svals: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Figure id between 1 and 7
    #[arg(long)]
    pub id: u32,
    /// Comma-separated relaxation orders (figures 1, 2, 5)
    #[arg(long)]
    pub alphas: Option<String>,
    /// Single relaxation order (figures 3, 4)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated M-Wright orders (figure 6)
    #[arg(long)]
    pub nus: Option<String>,
    /// Single M-Wright order (figure 7)
    #[arg(long)]
    pub nu: Option<f64>,
    /// Comma-separated observation times (figure 7)
    #[arg(long)]
    pub times: Option<String>,
    /// First grid time (figure 4)
    #[arg(long)]
    pub tmin: Option<f64>,
    /// Last grid time (figures 2, 3, 4, 5)
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Last grid rate (figure 1)
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Spatial half-width (figures 6, 7)
    #[arg(long)]
    pub xmax: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

// ---------------------------------------------------------------------------
// Grid helpers
// ---------------------------------------------------------------------------

fn parse_f64_list(raw: &str, what: &str) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    for tok in raw.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            return Err(Failure::Usage(format!(
                "empty entry in {what} list {raw:?}"
            )));
        }
        let v: f64 = tok
            .parse()
            .map_err(|_| Failure::Usage(format!("cannot parse {tok:?} in {what} list")))?;
        if !v.is_finite() {
            return Err(Failure::Usage(format!(
                "{what} entries must be finite, got {tok}"
            )));
        }
        out.push(v);
    }
    Ok(out)
}

fn canonical_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format_float(*v))
        .collect::<Vec<_>>()
        .join(",")
}

/// `points` samples from `minv` to `maxv` inclusive.
fn linspace(minv: f64, maxv: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points < 2 {
        return Err(Failure::Usage(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    if !(minv < maxv) || !minv.is_finite() || !maxv.is_finite() {
        return Err(Failure::Usage(format!(
            "grid needs finite bounds with min < max, got [{minv}, {maxv}]"
        )));
    }
    let h = (maxv - minv) / (points - 1) as f64;
    Ok((0..points).map(|i| minv + h * i as f64).collect())
}

/// `points` samples of (0, maxv]: the grid skips zero, where several of the
/// tabulated functions diverge, and ends exactly at `maxv`.
fn grid_skip_zero(maxv: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points == 0 {
        return Err(Failure::Usage("need at least 1 grid point".into()));
    }
    if !(maxv > 0.0) || !maxv.is_finite() {
        return Err(Failure::Usage(format!(
            "grid end must be positive and finite, got {maxv}"
        )));
    }
    Ok((1..=points)
        .map(|i| maxv * i as f64 / points as f64)
        .collect())
}

/// `points` geometrically spaced samples from `minv` to `maxv` inclusive.
fn geomspace(minv: f64, maxv: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points < 2 {
        return Err(Failure::Usage(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    if !(minv > 0.0) || !(maxv > minv) || !maxv.is_finite() {
        return Err(Failure::Usage(format!(
            "geometric grid needs 0 < min < max, got [{minv}, {maxv}]"
        )));
    }
    let ratio = maxv / minv;
    Ok((0..points)
        .map(|i| minv * ratio.powf(i as f64 / (points - 1) as f64))
        .collect())
}

fn method_label(m: Method) -> &'static str {
    match m {
        Method::Series => "series",
        Method::Asymptotic => "asymptotic",
        Method::SpectralIntegral => "spectral",
    }
}

// ---------------------------------------------------------------------------
// Per-command table builders
// ---------------------------------------------------------------------------

fn build_eval(a: &EvalArgs) -> Result<Table, Failure> {
    let params = MLParams::new(a.alpha, a.beta, a.gamma)?;
    let (grid, grid_meta): (Vec<f64>, Vec<(String, String)>) = match (a.z, a.zmin, a.zmax) {
        (Some(z), None, None) => (vec![z], vec![("z".into(), format_float(z))]),
        (None, Some(zmin), Some(zmax)) => (
            linspace(zmin, zmax, a.points)?,
            vec![
                ("zmin".into(), format_float(zmin)),
                ("zmax".into(), format_float(zmax)),
                ("points".into(), a.points.to_string()),
            ],
        ),
        (Some(_), _, _) => {
            return Err(Failure::Usage(
                "--z cannot be combined with --zmin/--zmax".into(),
            ))
        }
        _ => {
            return Err(Failure::Usage(
                "provide either --z or both --zmin and --zmax".into(),
            ))
        }
    };
    let mut parameters = vec![
        ("alpha".to_string(), format_float(a.alpha)),
        ("beta".to_string(), format_float(a.beta)),
        ("gamma".to_string(), format_float(a.gamma)),
    ];
    parameters.extend(grid_meta);
    let mut rows = Vec::with_capacity(grid.len());
    for z in grid {
        let r = ml(&params, z)?;
        rows.push(vec![
            Cell::Num(z),
            Cell::Num(r.value),
            Cell::Num(r.est_error),
            Cell::Text(method_label(r.method).into()),
        ]);
    }
    Ok(Table {
        command: "eval".into(),
        parameters,
        seed: None,
        columns: vec![
            "z".into(),
            "value".into(),
            "est_error".into(),
            "method".into(),
        ],
        rows,
    })
}

fn build_relax(a: &RelaxArgs) -> Result<Table, Failure> {
    let order = RelaxOrder::new(a.alpha)?;
    let grid = if a.log {
        let tmin = a.tmin.unwrap_or(a.tmax * 1e-4);
        geomspace(tmin, a.tmax, a.points)?
    } else {
        match a.tmin {
            Some(tmin) => linspace(tmin, a.tmax, a.points)?,
            None => grid_skip_zero(a.tmax, a.points)?,
        }
    };
    let mut parameters = vec![("alpha".to_string(), format_float(a.alpha))];
    if let Some(tmin) = a.tmin {
        parameters.push(("tmin".into(), format_float(tmin)));
    }
    parameters.push(("tmax".into(), format_float(a.tmax)));
    parameters.push(("points".into(), a.points.to_string()));
    parameters.push(("log".into(), a.log.to_string()));
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        let e = e_alpha(order, t)?.value;
        let rate = phi_alpha(order, t)?;
        rows.push(vec![Cell::Num(t), Cell::Num(e), Cell::Num(rate)]);
    }
    Ok(Table {
        command: "relax".into(),
        parameters,
        seed: None,
        columns: vec!["t".into(), "relaxation".into(), "rate".into()],
        rows,
    })
}

fn build_spectrum(a: &SpectrumArgs) -> Result<Table, Failure> {
    let order = RelaxOrder::new(a.alpha)?;
    let grid = grid_skip_zero(a.rmax, a.points)?;
    let mut rows = Vec::with_capacity(grid.len());
    for r in grid {
        rows.push(vec![Cell::Num(r), Cell::Num(spectral_density(order, r)?)]);
    }
    Ok(Table {
        command: "spectrum".into(),
        parameters: vec![
            ("alpha".into(), format_float(a.alpha)),
            ("rmax".into(), format_float(a.rmax)),
            ("points".into(), a.points.to_string()),
        ],
        seed: None,
        columns: vec!["r".into(), "density".into()],
        rows,
    })
}

fn build_wright(a: &WrightArgs) -> Result<Table, Failure> {
    let grid = linspace(0.0, a.xmax, a.points)?;
    let mut rows = Vec::with_capacity(grid.len());
    for x in grid {
        rows.push(vec![
            Cell::Num(x),
            Cell::Num(m_wright(a.nu, x)?),
            Cell::Num(f_wright(a.nu, x)?),
        ]);
    }
    Ok(Table {
        command: "wright".into(),
        parameters: vec![
            ("nu".into(), format_float(a.nu)),
            ("xmax".into(), format_float(a.xmax)),
            ("points".into(), a.points.to_string()),
        ],
        seed: None,
        columns: vec!["x".into(), "m".into(), "f".into()],
        rows,
    })
}

fn build_green(a: &GreenArgs) -> Result<Table, Failure> {
    let cfg = DiffusionConfig::new(a.nu, a.diffusivity)?;
    let (grid, kind_name) = match a.kind {
        GreenKind::Cauchy => (linspace(-a.xmax, a.xmax, a.points)?, "cauchy"),
        GreenKind::Signalling => (grid_skip_zero(a.xmax, a.points)?, "signalling"),
    };
    let mut rows = Vec::with_capacity(grid.len());
    for x in grid {
        let g = match a.kind {
            GreenKind::Cauchy => green_cauchy(&cfg, x, a.t)?,
            GreenKind::Signalling => green_signalling(&cfg, x, a.t)?,
        };
        rows.push(vec![Cell::Num(x), Cell::Num(g)]);
    }
    Ok(Table {
        command: "green".into(),
        parameters: vec![
            ("nu".into(), format_float(a.nu)),
            ("diffusivity".into(), format_float(a.diffusivity)),
            ("t".into(), format_float(a.t)),
            ("xmax".into(), format_float(a.xmax)),
            ("points".into(), a.points.to_string()),
            ("kind".into(), kind_name.into()),
        ],
        seed: None,
        columns: vec!["x".into(), "green".into()],
        rows,
    })
}

fn build_poisson(a: &PoissonArgs) -> Result<Table, Failure> {
    let mut rows = Vec::with_capacity(a.kmax as usize + 1);
    let mut cumulative = 0.0f64;
    for k in 0..=a.kmax {
        let p = frac_poisson_pmf(a.beta, a.t, k)?;
        cumulative += p;
        rows.push(vec![
            Cell::Int(k as i64),
            Cell::Num(p),
            Cell::Num(cumulative.min(1.0)),
        ]);
    }
    Ok(Table {
        command: "poisson".into(),
        parameters: vec![
            ("beta".into(), format_float(a.beta)),
            ("t".into(), format_float(a.t)),
            ("kmax".into(), a.kmax.to_string()),
        ],
        seed: None,
        columns: vec!["k".into(), "pmf".into(), "cumulative".into()],
        rows,
    })
}

fn build_ctrw(a: &CtrwArgs) -> Result<Table, Failure> {
    let jump = match a.jump {
        JumpChoice::Unit => JumpLaw::DiracUnit,
        JumpChoice::Symmetric => JumpLaw::symmetric_unit(),
    };
    let jump_name = match a.jump {
        JumpChoice::Unit => "unit",
        JumpChoice::Symmetric => "symmetric",
    };
    let dist = ctrw_pdf_series(&jump, a.beta, a.t, a.kmax)?;
    let mut parameters = vec![
        ("beta".to_string(), format_float(a.beta)),
        ("t".to_string(), format_float(a.t)),
        ("kmax".to_string(), a.kmax.to_string()),
        ("jump".to_string(), jump_name.to_string()),
    ];
    let mut columns = vec!["site".to_string(), "position".to_string(), "mass".to_string()];
    let empirical: Option<BTreeMap<i64, usize>> = match a.paths {
        None => None,
        Some(paths) => {
            let seed = a.seed.ok_or_else(|| {
                Failure::Usage("--paths draws random walks, so --seed is required".into())
            })?;
            if paths == 0 {
                return Err(Failure::Usage("--paths must be at least 1".into()));
            }
            parameters.push(("paths".into(), paths.to_string()));
            columns.push("empirical".into());
            let waiting = WaitingTimeLaw::mittag_leffler(a.beta)?;
            let positions =
                simulate_ctrw_checkpoints(&jump, &waiting, &[a.t], paths, seed)?.remove(0);
            let mut counts = BTreeMap::new();
            for pos in positions {
                let cell = (pos / dist.step).round() as i64;
                *counts.entry(cell).or_insert(0usize) += 1;
            }
            Some(counts)
        }
    };
    let n_paths = a.paths.unwrap_or(0) as f64;
    let mut rows = Vec::with_capacity(dist.masses.len());
    for j in 0..dist.masses.len() {
        let cell = dist.min_cell + j as i64;
        let mut row = vec![
            Cell::Int(cell),
            Cell::Num(dist.position(j)),
            Cell::Num(dist.mass_at_cell(cell)),
        ];
        if let Some(counts) = &empirical {
            let c = counts.get(&cell).copied().unwrap_or(0);
            row.push(Cell::Num(c as f64 / n_paths));
        }
        rows.push(row);
    }
    Ok(Table {
        command: "ctrw".into(),
        parameters,
        seed: a.paths.and(a.seed),
        columns,
        rows,
    })
}

fn build_universality(a: &UniversalityArgs) -> Result<Table, Failure> {
    let taus = parse_f64_list(&a.taus, "taus")?;
    let svals = parse_f64_list(&a.svals, "svals")?;
    let (law, mut parameters) = match a.law {
        LawChoice::Exponential => (
            WaitingTimeLaw::exponential(a.rate)?,
            vec![
                ("law".to_string(), "exponential".to_string()),
                ("rate".to_string(), format_float(a.rate)),
            ],
        ),
        LawChoice::MittagLeffler => (
            WaitingTimeLaw::mittag_leffler(a.beta)?,
            vec![
                ("law".to_string(), "mittag-leffler".to_string()),
                ("beta".to_string(), format_float(a.beta)),
            ],
        ),
        LawChoice::Pareto => (
            WaitingTimeLaw::power_law(a.beta, a.scale)?,
            vec![
                ("law".to_string(), "pareto".to_string()),
                ("beta".to_string(), format_float(a.beta)),
                ("scale".to_string(), format_float(a.scale)),
            ],
        ),
    };
    parameters.push(("taus".into(), canonical_list(&taus)));
    parameters.push(("svals".into(), canonical_list(&svals)));
    let mut rows = Vec::with_capacity(taus.len() * svals.len());
    for &tau in &taus {
        for &s in &svals {
            rows.push(vec![
                Cell::Num(tau),
                Cell::Num(s),
                Cell::Num(universality_gap(&law, tau, s)?),
            ]);
        }
    }
    Ok(Table {
        command: "universality".into(),
        parameters,
        seed: None,
        columns: vec!["tau".into(), "s".into(), "gap".into()],
        rows,
    })
}

// ---------------------------------------------------------------------------
// Figure catalog
// ---------------------------------------------------------------------------

fn resolve_list(
    given: &Option<String>,
    default: &str,
    what: &str,
) -> Result<Vec<f64>, Failure> {
    match given {
        Some(raw) => parse_f64_list(raw, what),
        None => parse_f64_list(default, what),
    }
}

/// Figure 1: rate spectra of the relaxation function for several orders.
fn figure_spectra(a: &FigureArgs) -> Result<Table, Failure> {
    let alphas = resolve_list(&a.alphas, "0.25,0.5,0.75,0.9", "alphas")?;
    let rmax = a.rmax.unwrap_or(2.0);
    let points = a.points.unwrap_or(200);
    let orders: Vec<RelaxOrder> = alphas
        .iter()
        .map(|&al| RelaxOrder::new(al))
        .collect::<Result<_, _>>()?;
    let grid = grid_skip_zero(rmax, points)?;
    let mut columns = vec!["r".to_string()];
    columns.extend(alphas.iter().map(|al| format!("k_{}", format_float(*al))));
    let mut rows = Vec::with_capacity(grid.len());
    for r in grid {
        let mut row = vec![Cell::Num(r)];
        for &order in &orders {
            row.push(Cell::Num(spectral_density(order, r)?));
        }
        rows.push(row);
    }
    Ok(Table {
        command: "figure".into(),
        parameters: vec![
            ("id".into(), "1".into()),
            ("alphas".into(), canonical_list(&alphas)),
            ("rmax".into(), format_float(rmax)),
            ("points".into(), points.to_string()),
        ],
        seed: None,
        columns,
        rows,
    })
}

/// Figure 2: relaxation curves for several orders on 0 <= t <= tmax.
fn figure_relaxation(a: &FigureArgs) -> Result<Table, Failure> {
    let alphas = resolve_list(&a.alphas, "0.25,0.5,0.75,0.9,1", "alphas")?;
    let tmax = a.tmax.unwrap_or(15.0);
    let points = a.points.unwrap_or(300);
    let orders: Vec<RelaxOrder> = alphas
        .iter()
        .map(|&al| RelaxOrder::new(al))
        .collect::<Result<_, _>>()?;
    let grid = linspace(0.0, tmax, points)?;
    let mut columns = vec!["t".to_string()];
    columns.extend(alphas.iter().map(|al| format!("e_{}", format_float(*al))));
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        let mut row = vec![Cell::Num(t)];
        for &order in &orders {
            row.push(Cell::Num(e_alpha(order, t)?.value));
        }
        rows.push(row);
    }
    Ok(Table {
        command: "figure".into(),
        parameters: vec![
            ("id".into(), "2".into()),
            ("alphas".into(), canonical_list(&alphas)),
            ("tmax".into(), format_float(tmax)),
            ("points".into(), points.to_string()),
        ],
        seed: None,
        columns,
        rows,
    })
}

/// Figures 3 and 4: one relaxation curve against its short-time stretched
/// exponential and long-time power-law approximants, on a linear grid
/// (id 3) or a geometric grid spanning decades (id 4).
fn figure_approximations(a: &FigureArgs, log_grid: bool) -> Result<Table, Failure> {
    let alpha = a.alpha.unwrap_or(0.5);
    let order = RelaxOrder::new(alpha)?;
    let points = a.points.unwrap_or(200);
    let (grid, grid_meta): (Vec<f64>, Vec<(String, String)>) = if log_grid {
        let tmin = a.tmin.unwrap_or(1e-4);
        let tmax = a.tmax.unwrap_or(1e4);
        (
            geomspace(tmin, tmax, points)?,
            vec![
                ("tmin".into(), format_float(tmin)),
                ("tmax".into(), format_float(tmax)),
            ],
        )
    } else {
        let tmax = a.tmax.unwrap_or(5.0);
        (
            grid_skip_zero(tmax, points)?,
            vec![("tmax".into(), format_float(tmax))],
        )
    };
    let mut parameters = vec![
        ("id".to_string(), if log_grid { "4" } else { "3" }.to_string()),
        ("alpha".to_string(), format_float(alpha)),
    ];
    parameters.extend(grid_meta);
    parameters.push(("points".into(), points.to_string()));
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        rows.push(vec![
            Cell::Num(t),
            Cell::Num(e_alpha(order, t)?.value),
            Cell::Num(e_approx_short(order, t)?),
            Cell::Num(e_approx_long(order, t)?),
        ]);
    }
    Ok(Table {
        command: "figure".into(),
        parameters,
        seed: None,
        columns: vec![
            "t".into(),
            "exact".into(),
            "short_time".into(),
            "long_time".into(),
        ],
        rows,
    })
}

/// Figure 5: rate densities of the relaxation function for several orders.
fn figure_rates(a: &FigureArgs) -> Result<Table, Failure> {
    let alphas = resolve_list(&a.alphas, "0.25,0.5,0.75,0.9,1", "alphas")?;
    let tmax = a.tmax.unwrap_or(10.0);
    let points = a.points.unwrap_or(200);
    let orders: Vec<RelaxOrder> = alphas
        .iter()
        .map(|&al| RelaxOrder::new(al))
        .collect::<Result<_, _>>()?;
    let grid = grid_skip_zero(tmax, points)?;
    let mut columns = vec!["t".to_string()];
    columns.extend(alphas.iter().map(|al| format!("phi_{}", format_float(*al))));
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        let mut row = vec![Cell::Num(t)];
        for &order in &orders {
            row.push(Cell::Num(phi_alpha(order, t)?));
        }
        rows.push(row);
    }
    Ok(Table {
        command: "figure".into(),
        parameters: vec![
            ("id".into(), "5".into()),
            ("alphas".into(), canonical_list(&alphas)),
            ("tmax".into(), format_float(tmax)),
            ("points".into(), points.to_string()),
        ],
        seed: None,
        columns,
        rows,
    })
}

/// Figure 6: symmetric M-Wright densities at unit time for several orders.
fn figure_m_wright(a: &FigureArgs) -> Result<Table, Failure> {
    let nus = resolve_list(&a.nus, "0.25,0.5,0.75", "nus")?;
    let xmax = a.xmax.unwrap_or(4.0);
    let points = a.points.unwrap_or(201);
    let grid = linspace(-xmax, xmax, points)?;
    let mut columns = vec!["x".to_string()];
    columns.extend(nus.iter().map(|nu| format!("m_{}", format_float(*nu))));
    let mut rows = Vec::with_capacity(grid.len());
    for x in grid {
        let mut row = vec![Cell::Num(x)];
        for &nu in &nus {
            row.push(Cell::Num(0.5 * m_wright(nu, x.abs())?));
        }
        rows.push(row);
    }
    Ok(Table {
        command: "figure".into(),
        parameters: vec![
            ("id".into(), "6".into()),
            ("nus".into(), canonical_list(&nus)),
            ("xmax".into(), format_float(xmax)),
            ("points".into(), points.to_string()),
        ],
        seed: None,
        columns,
        rows,
    })
}

/// Figure 7: one symmetric M-Wright density spreading over several times,
/// with the self-similar width t^nu.
fn figure_spreading(a: &FigureArgs) -> Result<Table, Failure> {
    let nu = a.nu.unwrap_or(0.25);
    let times = resolve_list(&a.times, "0.25,0.5,1,2", "times")?;
    let xmax = a.xmax.unwrap_or(4.0);
    let points = a.points.unwrap_or(201);
    for &t in &times {
        if !(t > 0.0) {
            return Err(Failure::Usage(format!(
                "times must be positive, got {t}"
            )));
        }
    }
    let grid = linspace(-xmax, xmax, points)?;
    let mut columns = vec!["x".to_string()];
    columns.extend(times.iter().map(|t| format!("p_{}", format_float(*t))));
    let mut rows = Vec::with_capacity(grid.len());
    for x in grid {
        let mut row = vec![Cell::Num(x)];
        for &t in &times {
            row.push(Cell::Num(0.5 * m_spacetime(nu, x.abs(), t)?));
        }
        rows.push(row);
    }
    Ok(Table {
        command: "figure".into(),
        parameters: vec![
            ("id".into(), "7".into()),
            ("nu".into(), format_float(nu)),
            ("times".into(), canonical_list(&times)),
            ("xmax".into(), format_float(xmax)),
            ("points".into(), points.to_string()),
        ],
        seed: None,
        columns,
        rows,
    })
}

fn build_figure(a: &FigureArgs) -> Result<Table, Failure> {
    match a.id {
        1 => figure_spectra(a),
        2 => figure_relaxation(a),
        3 => figure_approximations(a, false),
        4 => figure_approximations(a, true),
        5 => figure_rates(a),
        6 => figure_m_wright(a),
        7 => figure_spreading(a),
        other => Err(Failure::Usage(format!(
            "figure id must be between 1 and 7, got {other}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Build the table for one parsed command and return it with the output
/// settings. Pure computation: nothing is written yet.
pub fn build_table(command: &Command) -> Result<(Table, OutputArgs), Failure> {
    match command {
        Command::Eval(a) => Ok((build_eval(a)?, a.output.clone())),
        Command::Relax(a) => Ok((build_relax(a)?, a.output.clone())),
        Command::Spectrum(a) => Ok((build_spectrum(a)?, a.output.clone())),
        Command::Wright(a) => Ok((build_wright(a)?, a.output.clone())),
        Command::Green(a) => Ok((build_green(a)?, a.output.clone())),
        Command::Poisson(a) => Ok((build_poisson(a)?, a.output.clone())),
        Command::Ctrw(a) => Ok((build_ctrw(a)?, a.output.clone())),
        Command::Universality(a) => Ok((build_universality(a)?, a.output.clone())),
        Command::Figure(a) => Ok((build_figure(a)?, a.output.clone())),
    }
}

/// Compute and write the output file for one parsed invocation.
pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let (table, output) = build_table(&cli.command)?;
    let content = match output.format {
        Format::Csv => render_csv(&table),
        Format::Json => render_json(&table)?,
    };
    write_atomic(&output.out, &content)?;
    Ok(())
}

/// Apply the MLQ_THREADS cap to the global worker pool. Results never
/// depend on the worker count; the cap only limits parallelism.
fn init_thread_pool() -> Result<(), Failure> {
    match std::env::var("MLQ_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(std::env::VarError::NotUnicode(_)) => Err(Failure::Usage(
            "MLQ_THREADS must be a positive integer".into(),
        )),
        Ok(raw) => {
            let n = raw
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    Failure::Usage(format!(
                        "MLQ_THREADS must be a positive integer, got {raw:?}"
                    ))
                })?;
            // Ignore the error from a pool that is already initialized;
            // that can only happen inside in-process tests.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
            Ok(())
        }
    }
}

fn parse_args() -> Result<Cli, Failure> {
    use clap::error::ErrorKind;
    match Cli::try_parse() {
        Ok(cli) => Ok(cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            Err(Failure::Usage(first))
        }
    }
}

/// Full process body: returns the exit code and prints the one-line error
/// on failure. The binary wraps this in `std::process::exit`.
pub fn main_entry() -> i32 {
    let result = init_thread_pool()
        .and_then(|()| parse_args())
        .and_then(|cli| execute(&cli));
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", f.render_line());
            f.exit_code()
        }
    }
}
