//! Command-line front end. Every command validates its configuration first,
//! computes, and renders one document (CSV, JSON or SVG) that is printed or
//! written atomically to `--out`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::green::{green, robin_radial, AnnulusGeometry, Point};
use crate::landscape::{
    h_of_rho, lambda1_derivatives, minimize_lambda1, negativity_certificate, positivity_certificate,
    threshold, working_interval, SignCertificate,
};
use crate::reduced_energy::{critical_d, existence_verdict, psi, EnergyConstants, Family, ProblemVariant};
use crate::series::{SeriesControl, SeriesValue};
use crate::spectrum::{f_series, lambda1};

/// Environment variable capping the sweep worker pool.
pub const THREADS_ENV: &str = "ANNULUS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "annulus", version, about = "Green functions, Lambda_1 profiles and k-peak thresholds on the annulus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Green function G(x, y)
    Green,
    /// Robin function at radius r
    Robin,
    /// Profile of Lambda_1 on a grid of radii
    Lambda1,
    /// Minimizer of Lambda_1
    Minimize,
    /// Critical inner radius rho_k
    Threshold,
    /// Analytic sign certificates and h(rho)
    Certificates,
    /// Existence verdicts for the four problems
    Verdict,
    /// Reduced energies at (d, r)
    Psi,
    /// rho_k for k = 2..=k
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
struct Opts {
    /// Space dimension
    #[arg(long = "N", global = true, default_value_t = 3)]
    dim: usize,
    /// Number of peaks (upper end of the range for `sweep`)
    #[arg(long, global = true, default_value_t = 2)]
    k: usize,
    /// Inner radius of the annulus
    #[arg(long, global = true, allow_negative_numbers = true)]
    rho: Option<f64>,
    /// Radius of the peaks
    #[arg(long, global = true, allow_negative_numbers = true)]
    r: Option<f64>,
    /// Concentration parameter for `psi`
    #[arg(long, global = true, default_value_t = 1.0)]
    d: f64,
    /// Number of grid points
    #[arg(long, global = true, default_value_t = 512)]
    grid: usize,
    #[arg(long = "tail-tol", global = true, default_value_t = 1e-10)]
    tail_tol: f64,
    #[arg(long = "max-terms", global = true, default_value_t = 5000)]
    max_terms: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1.0)]
    c1: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    c2: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    d1: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    d2: f64,
    /// First point for `green`, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    x: Option<Vec<f64>>,
    /// Second point for `green`, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    y: Option<Vec<f64>>,
    /// Permit points on the boundary spheres
    #[arg(long = "allow-boundary", global = true)]
    allow_boundary: bool,
}

/// The validated configuration, echoed into every JSON document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "N")]
    pub dim: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub d: f64,
    pub grid: usize,
    pub tail_tol: f64,
    pub max_terms: usize,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    pub allow_boundary: bool,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let o = cli.opts;
        let format = o.format.unwrap_or(match cli.command {
            Command::Lambda1 | Command::Sweep => Format::Csv,
            _ => Format::Json,
        });
        let cfg = Self {
            command: cli.command,
            dim: o.dim,
            k: o.k,
            rho: o.rho,
            r: o.r,
            d: o.d,
            grid: o.grid,
            tail_tol: o.tail_tol,
            max_terms: o.max_terms,
            format,
            out: o.out,
            c1: o.c1,
            c2: o.c2,
            d1: o.d1,
            d2: o.d2,
            x: o.x,
            y: o.y,
            allow_boundary: o.allow_boundary,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: &str| Err(CliError::Usage(m.to_string()));
        if let Some(rho) = self.rho {
            if !(rho > 0.0 && rho < 1.0) {
                return usage("rho must lie in (0,1)");
            }
        }
        if self.dim < 3 {
            return usage("N must be at least 3");
        }
        if self.k < 2 {
            return usage("k must be at least 2");
        }
        if self.grid < 2 {
            return usage("grid must be at least 2");
        }
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return usage("tail-tol must be a positive number");
        }
        if self.max_terms == 0 {
            return usage("max-terms must be positive");
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return usage("d must be positive");
        }
        self.constants().validate()?;
        let needs_rho = !matches!(self.command, Command::Threshold | Command::Sweep);
        if needs_rho && self.rho.is_none() {
            return usage("this command needs --rho");
        }
        if matches!(self.command, Command::Robin | Command::Psi) && self.r.is_none() {
            return usage("this command needs --r");
        }
        if self.command == Command::Green && (self.x.is_none() || self.y.is_none()) {
            return usage("green needs --x and --y");
        }
        let allowed: &[Format] = match self.command {
            Command::Lambda1 | Command::Sweep => &[Format::Csv, Format::Json, Format::Svg],
            Command::Certificates => &[Format::Csv, Format::Json],
            _ => &[Format::Json],
        };
        if !allowed.contains(&self.format) {
            return usage(&format!("format {:?} is not available for this command", self.format).to_lowercase());
        }
        Ok(())
    }

    fn control(&self) -> SeriesControl {
        let ctrl = SeriesControl::default()
            .with_max_terms(self.max_terms)
            .with_tail_tol(self.tail_tol);
        if self.allow_boundary {
            ctrl.allow_boundary()
        } else {
            ctrl
        }
    }

    fn constants(&self) -> EnergyConstants {
        EnergyConstants {
            c1: self.c1,
            c2: self.c2,
            d1: self.d1,
            d2: self.d2,
        }
    }

    fn geometry(&self) -> Result<AnnulusGeometry, CliError> {
        let rho = self.rho.ok_or_else(|| CliError::Usage("this command needs --rho".into()))?;
        Ok(AnnulusGeometry::new(self.dim, rho)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Help or version text; not a failure.
    Info(String),
    /// Invalid arguments or inputs (exit 2).
    Usage(String),
    /// A computation failed to converge or to bracket (exit 3).
    Numeric(String),
    /// Reading or writing files (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Info(m) | CliError::Usage(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. }
            | Error::Bracket(_)
            | Error::Inconclusive(_)
            | Error::Asymmetry(_)
            | Error::Overflow(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// A rendered document and where it should go.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub content: String,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    result: T,
}

/// Parses, validates, computes and renders, without touching the file system.
pub fn execute<I, T>(args: I) -> Result<Rendered, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let text = e.render().to_string();
        if e.use_stderr() {
            CliError::Usage(text)
        } else {
            CliError::Info(text)
        }
    })?;
    let cfg = RunConfig::from_cli(cli)?;
    let content = match cfg.command {
        Command::Green => cmd_green(&cfg)?,
        Command::Robin => cmd_robin(&cfg)?,
        Command::Lambda1 => cmd_lambda1(&cfg)?,
        Command::Minimize => {
            let geom = cfg.geometry()?;
            json(&cfg, &minimize_lambda1(&geom, &cfg.control(), cfg.k)?)?
        }
        Command::Threshold => json(&cfg, &threshold(cfg.dim, cfg.k, &cfg.control())?)?,
        Command::Certificates => cmd_certificates(&cfg)?,
        Command::Verdict => {
            let rho = cfg.geometry()?.rho();
            json(&cfg, &existence_verdict(cfg.dim, cfg.k, rho, &cfg.control())?)?
        }
        Command::Psi => cmd_psi(&cfg)?,
        Command::Sweep => cmd_sweep(&cfg)?,
    };
    Ok(Rendered {
        content,
        out: cfg.out.clone(),
    })
}

/// Entry point of the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(args).and_then(|r| emit(&r)) {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message().trim_end());
            e.exit_code()
        }
    }
}

fn emit(r: &Rendered) -> Result<(), CliError> {
    match &r.out {
        Some(path) => write_atomic(path, r.content.as_bytes()),
        None => std::io::stdout()
            .write_all(r.content.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// Writes via a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn json<T: Serialize>(cfg: &RunConfig, result: &T) -> Result<String, CliError> {
    let doc = Envelope {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        result,
    };
    let err = |e: serde_json::Error| CliError::Numeric(e.to_string());
    // non-finite floats serialize to null
    if has_null(&serde_json::to_value(&doc).map_err(err)?) {
        return Err(CliError::Numeric("result contains a non-finite number".into()));
    }
    let mut text = serde_json::to_string_pretty(&doc).map_err(err)?;
    text.push('\n');
    Ok(text)
}

fn has_null(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Null => true,
        serde_json::Value::Array(a) => a.iter().any(has_null),
        serde_json::Value::Object(o) => o.values().any(has_null),
        _ => false,
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy)]
enum Cell {
    Real(f64),
    Int(usize),
    Flag(bool),
}

impl Cell {
    fn render(self) -> Result<String, CliError> {
        match self {
            Cell::Real(x) if !x.is_finite() => Err(CliError::Numeric("result contains a non-finite number".into())),
            Cell::Real(x) => Ok(fmt_float(x)),
            Cell::Int(n) => Ok(n.to_string()),
            Cell::Flag(b) => Ok(b.to_string()),
        }
    }
}

fn csv(header: &[&str], rows: &[Vec<Cell>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        let cells = row.iter().map(|c| c.render()).collect::<Result<Vec<_>, _>>()?;
        w.write_record(cells).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn cmd_green(cfg: &RunConfig) -> Result<String, CliError> {
    let geom = cfg.geometry()?;
    let x = Point::new(cfg.x.clone().unwrap_or_default());
    let y = Point::new(cfg.y.clone().unwrap_or_default());
    json(cfg, &green(&geom, &cfg.control(), &x, &y)?)
}

fn cmd_robin(cfg: &RunConfig) -> Result<String, CliError> {
    let geom = cfg.geometry()?;
    let r = cfg.r.unwrap_or_default();
    json(cfg, &robin_radial(&geom, &cfg.control(), r)?)
}

#[derive(Serialize)]
struct ProfileRow {
    r: f64,
    lambda1: f64,
    f: f64,
    dlambda1: f64,
}

fn cmd_lambda1(cfg: &RunConfig) -> Result<String, CliError> {
    let geom = cfg.geometry()?;
    let ctrl = cfg.control();
    let (lo, hi) = working_interval(&geom, &ctrl, cfg.k)?;
    let n = geom.dim() as f64;
    let mut rows = Vec::with_capacity(cfg.grid);
    for i in 0..cfg.grid {
        let r = lo + (hi - lo) * i as f64 / (cfg.grid - 1) as f64;
        let lam = lambda1(&geom, &ctrl, cfg.k, r)?.value;
        let slope = lambda1_derivatives(&geom, &ctrl, cfg.k, r)?.0.value;
        rows.push(ProfileRow {
            r,
            lambda1: lam,
            f: r.powf(n - 2.0) * lam,
            dlambda1: slope,
        });
    }
    match cfg.format {
        Format::Csv => csv(
            &["r", "lambda1", "f", "dlambda1"],
            &rows
                .iter()
                .map(|p| [p.r, p.lambda1, p.f, p.dlambda1].map(Cell::Real).to_vec())
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(cfg, &rows),
        Format::Svg => {
            let pts: Vec<(f64, f64)> = rows.iter().map(|p| (p.r, p.lambda1)).collect();
            Ok(svg_plot(
                &format!("Lambda_1(r), N = {}, k = {}, rho = {}", cfg.dim, cfg.k, geom.rho()),
                "r",
                "Λ₁",
                &[Series { label: "Λ₁(r)", points: &pts, dashed: false }],
            ))
        }
    }
}

#[derive(Serialize)]
struct CertificateReport {
    h: SeriesValue,
    positivity: SignCertificate,
    negativity: SignCertificate,
}

fn cmd_certificates(cfg: &RunConfig) -> Result<String, CliError> {
    let rho = cfg.geometry()?.rho();
    let report = CertificateReport {
        h: h_of_rho(cfg.dim, cfg.k, rho, &cfg.control())?,
        positivity: positivity_certificate(cfg.dim, cfg.k, rho)?,
        negativity: negativity_certificate(cfg.dim, cfg.k, rho)?,
    };
    match cfg.format {
        Format::Csv => csv(
            &["rho", "h", "h_tail", "positivity_margin", "positivity_fired", "negativity_margin", "negativity_fired"],
            &[vec![
                Cell::Real(rho),
                Cell::Real(report.h.value),
                Cell::Real(report.h.tail_bound),
                Cell::Real(report.positivity.margin),
                Cell::Flag(report.positivity.fired),
                Cell::Real(report.negativity.margin),
                Cell::Flag(report.negativity.fired),
            ]],
        ),
        _ => json(cfg, &report),
    }
}

#[derive(Serialize)]
struct PsiEntry {
    family: Family,
    psi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_d: Option<f64>,
}

#[derive(Serialize)]
struct PsiReport {
    lambda1: f64,
    entries: Vec<PsiEntry>,
}

fn cmd_psi(cfg: &RunConfig) -> Result<String, CliError> {
    let geom = cfg.geometry()?;
    let r = cfg.r.unwrap_or_default();
    let lam = f_series(&geom, &cfg.control(), cfg.k, r)?.value / r.powf(cfg.dim as f64 - 2.0);
    let consts = cfg.constants();
    let mut entries = Vec::new();
    for family in Family::ALL {
        let variant = ProblemVariant::new(family, cfg.dim)?;
        match psi(&variant, &consts, cfg.d, lam) {
            Ok(value) => entries.push(PsiEntry {
                family,
                psi: value,
                critical_d: critical_d(&variant, &consts, lam).ok(),
            }),
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    json(cfg, &PsiReport { lambda1: lam, entries })
}

#[derive(Serialize)]
struct SweepRow {
    k: usize,
    rho_k: f64,
    lower_bound: f64,
}

fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CliError::Usage(format!("{THREADS_ENV} must be positive")));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Io(e.to_string()))
}

fn cmd_sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let ctrl = cfg.control();
    let pool = worker_pool()?;
    let rows: Vec<SweepRow> = pool.install(|| {
        (2..=cfg.k)
            .into_par_iter()
            .map(|k| {
                threshold(cfg.dim, k, &ctrl).map(|t| SweepRow {
                    k,
                    rho_k: t.rho_k,
                    lower_bound: t.lower_bound,
                })
            })
            .collect::<Result<_, Error>>()
    })?;
    match cfg.format {
        Format::Csv => csv(
            &["k", "rho_k", "lower_bound"],
            &rows
                .iter()
                .map(|s| vec![Cell::Int(s.k), Cell::Real(s.rho_k), Cell::Real(s.lower_bound)])
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(cfg, &rows),
        Format::Svg => {
            let rho: Vec<(f64, f64)> = rows.iter().map(|s| (s.k as f64, s.rho_k)).collect();
            let lower: Vec<(f64, f64)> = rows.iter().map(|s| (s.k as f64, s.lower_bound)).collect();
            Ok(svg_plot(
                &format!("Threshold radius, N = {}", cfg.dim),
                "k",
                "ρ_k",
                &[
                    Series { label: "ρ_k", points: &rho, dashed: false },
                    Series { label: "lower bound", points: &lower, dashed: true },
                ],
            ))
        }
    }
}

struct Series<'a> {
    label: &'a str,
    points: &'a [(f64, f64)],
    dashed: bool,
}

/// A self-contained SVG line plot with labeled axes.
fn svg_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series<'_>]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    // axes
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT} {TOP} V{} H{}" fill="none" stroke="black"/>"#,
        H - BOTTOM,
        W - RIGHT
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(xv),
            H - BOTTOM + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        escape(ylabel)
    );
    let colors = ["#1f4e9c", "#b03a2e", "#2e7d32"];
    for (i, ser) in series.iter().enumerate() {
        let color = colors[i % colors.len()];
        let path: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            path.join(" ")
        );
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{ly:.2}" fill="{color}" text-anchor="end">{}</text>"#,
            W - RIGHT - 4.0,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
