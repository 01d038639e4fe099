//! Command-line front end: sweeps, critical points, ε thresholds, windows,
//! the separability certificate and oracle diffs, written as CSV or JSON.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::channels::{ChannelFamily, ChannelSpec};
use crate::criticality::{
    asymptotic_esd_limit, bound_entanglement_window, epsilon_probability, esd_probability_closed_form,
    esd_probability_numeric, EsdOutcome, DEFAULT_EPSILON,
};
use crate::crosscheck::compare_grid;
use crate::dense::check_capacity;
use crate::error::Error;
use crate::negativity::negativity_profile;
use crate::separability::verify_full_separability;
use crate::state::{evolve, GhzParams};

/// Oracle agreement required by `oracle-diff`.
pub const ORACLE_TOL: f64 = 1e-10;
const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "ghz-decay", version, about = "Entanglement decay of generalized GHZ states under local noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Negativity of each cut over a grid of p.
    Sweep,
    /// Sudden-death probabilities, closed form and numeric.
    Critical,
    /// p at which the balanced-cut negativity falls to a fraction epsilon.
    Epsilon,
    /// Bound-entanglement window between the 1:N-1 and balanced zeros.
    Window,
    /// Full-separability certificate for amplitude damping at p_c.
    VerifyAppendix,
    /// Maximum disagreement between closed forms and the dense oracle.
    OracleDiff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// ad | gad | diffusive | depolarizing | dephasing
    #[arg(long, global = true, default_value = "depolarizing")]
    pub family: ChannelFamily,
    /// Mean bath excitation (gad only).
    #[arg(long, global = true, default_value_t = 0.0)]
    pub nbar: f64,
    /// Qubit count(s), comma separated.
    #[arg(long = "n", global = true, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// |alpha|^2; beta is fixed by normalization.
    #[arg(long, global = true, conflicts_with_all = ["alpha", "beta"])]
    pub alpha_sq: Option<f64>,
    /// Phase of alpha in radians (with --alpha-sq).
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_phase: f64,
    /// Phase of beta in radians (with --alpha-sq).
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta_phase: f64,
    /// alpha as RE,IM.
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true, requires = "beta")]
    pub alpha: Option<Complex64>,
    /// beta as RE,IM.
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true, requires = "alpha")]
    pub beta: Option<Complex64>,
    /// Rescale explicit amplitudes to unit norm instead of rejecting them.
    #[arg(long, global = true)]
    pub renormalize: bool,
    /// Cut sizes: `all`, `balanced`, or a comma list.
    #[arg(long, global = true)]
    pub k: Option<String>,
    #[arg(long, global = true)]
    pub p_start: Option<f64>,
    #[arg(long, global = true)]
    pub p_stop: Option<f64>,
    #[arg(long, global = true)]
    pub p_count: Option<usize>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid evaluation.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Preset: 1 = depolarizing, balanced, N=4; 2 = depolarizing, |alpha|^2 = 1/9, N=4,40,400.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub figure: Option<u8>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE or RE,IM, got `{s}`")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Capacity = 3,
    Verification = 4,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> ExitCode {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            exit: Exit::Usage,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::Domain(_) | Error::UndefinedCriticalPoint(_) => Exit::Usage,
            Error::Capacity { .. } => Exit::Capacity,
            Error::Numerical(_) | Error::Structural(_) => Exit::Failure,
        };
        CliError {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            exit: Exit::Failure,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, locale independent.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format_number(*v),
                    Cell::Int(v) => v.to_string(),
                    Cell::Bool(v) => v.to_string(),
                    Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.header.iter().zip(row) {
                    let v = match cell {
                        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
                        Cell::Int(v) => Value::from(*v),
                        Cell::Bool(v) => Value::Bool(*v),
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Empty => Value::Null,
                    };
                    obj.insert((*name).to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutSelection {
    All,
    Balanced,
    List(Vec<usize>),
}

impl CutSelection {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "all" => Ok(CutSelection::All),
            "balanced" => Ok(CutSelection::Balanced),
            list => list
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map(CutSelection::List)
                .map_err(|e| CliError::usage(format!("invalid --k `{s}`: {e}"))),
        }
    }

    fn resolve(&self, n: usize) -> Result<Vec<usize>, CliError> {
        match self {
            CutSelection::All => Ok((1..=n / 2).collect()),
            CutSelection::Balanced => Ok(vec![n / 2]),
            CutSelection::List(ks) => {
                if let Some(bad) = ks.iter().find(|&&k| k == 0 || k > n / 2) {
                    return Err(CliError::usage(format!("--k {bad} is outside 1..={} for N = {n}", n / 2)));
                }
                Ok(ks.clone())
            }
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub channel: ChannelSpec,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub ns: Vec<usize>,
    pub cuts: CutSelection,
    pub p_start: f64,
    pub p_stop: f64,
    pub p_count: usize,
    pub epsilon: f64,
    pub format: Format,
    pub jobs: Option<usize>,
}

impl SweepConfig {
    pub fn from_opts(command: Command, opts: &GlobalOpts) -> Result<Self, CliError> {
        let (mut family, mut ns, mut cuts) = (opts.family, opts.n.clone(), None);
        let (mut alpha, mut beta) = amplitudes(opts)?;
        match opts.figure {
            Some(1) => {
                family = ChannelFamily::Depolarizing;
                ns = vec![4];
                alpha = Complex64::new(0.5f64.sqrt(), 0.0);
                beta = alpha;
                cuts = Some(CutSelection::All);
            }
            Some(2) => {
                family = ChannelFamily::Depolarizing;
                ns = vec![4, 40, 400];
                alpha = Complex64::new(1.0 / 3.0, 0.0);
                beta = Complex64::new(8f64.sqrt() / 3.0, 0.0);
                cuts = Some(CutSelection::Balanced);
            }
            _ => {}
        }
        if ns.is_empty() {
            ns = vec![4];
        }
        let cuts = match cuts {
            Some(c) => c,
            None => opts.k.as_deref().map_or(Ok(CutSelection::All), CutSelection::parse)?,
        };
        let default_count = if command == Command::OracleDiff { 21 } else { 101 };
        let (p_start, p_stop) = (opts.p_start.unwrap_or(0.0), opts.p_stop.unwrap_or(1.0));
        let p_count = opts.p_count.unwrap_or(default_count);
        if p_count < 2 {
            return Err(CliError::usage("--p-count must be at least 2"));
        }
        if !(0.0 <= p_start && p_start <= p_stop && p_stop <= 1.0) {
            return Err(CliError::usage(format!(
                "p range [{p_start}, {p_stop}] must be an ordered sub-interval of [0, 1]"
            )));
        }
        if opts.jobs == Some(0) {
            return Err(CliError::usage("--jobs must be positive"));
        }
        Ok(SweepConfig {
            channel: ChannelSpec::new(family, opts.nbar)?,
            alpha,
            beta,
            ns,
            cuts,
            p_start,
            p_stop,
            p_count,
            epsilon: opts.epsilon.unwrap_or(DEFAULT_EPSILON),
            format: opts.format,
            jobs: opts.jobs,
        })
    }

    pub fn params(&self, n: usize) -> Result<GhzParams, CliError> {
        Ok(GhzParams::new(self.alpha, self.beta, n)?)
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = self.p_count - 1;
        (0..self.p_count)
            .map(|i| {
                if i == last {
                    self.p_stop
                } else {
                    self.p_start + (self.p_stop - self.p_start) * i as f64 / last as f64
                }
            })
            .collect()
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            b = b.num_threads(j);
        }
        b.build().map_err(|e| CliError {
            exit: Exit::Failure,
            message: e.to_string(),
        })
    }
}

fn amplitudes(opts: &GlobalOpts) -> Result<(Complex64, Complex64), CliError> {
    if let (Some(a), Some(b)) = (opts.alpha, opts.beta) {
        let norm = a.norm_sqr() + b.norm_sqr();
        if norm == 0.0 {
            return Err(CliError::usage("alpha and beta are both zero"));
        }
        if (norm - 1.0).abs() > NORMALIZATION_TOL && !opts.renormalize {
            return Err(CliError::usage(format!(
                "|alpha|^2 + |beta|^2 = {norm}; pass --renormalize to rescale"
            )));
        }
        let s = norm.sqrt();
        return Ok((a / s, b / s));
    }
    let a2 = opts.alpha_sq.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&a2) {
        return Err(CliError::usage(format!("--alpha-sq {a2} is outside [0, 1]")));
    }
    Ok((
        Complex64::from_polar(a2.sqrt(), opts.alpha_phase),
        Complex64::from_polar((1.0 - a2).sqrt(), opts.beta_phase),
    ))
}

/// Result of a command: the table plus whether a verification passed.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub verified: bool,
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Table, CliError> {
    let mut plan = Vec::new();
    for &n in &cfg.ns {
        plan.push((cfg.params(n)?, cfg.cuts.resolve(n)?));
    }
    let grid = cfg.grid();
    let blocks: Vec<Result<Vec<Vec<Cell>>, CliError>> = cfg.pool()?.install(|| {
        grid.par_iter()
            .map(|&p| {
                let mut rows = Vec::new();
                for (params, ks) in &plan {
                    let state = evolve(params, &cfg.channel, p)?;
                    let profile = negativity_profile(&state);
                    for &k in ks {
                        let r = &profile[k - 1];
                        rows.push(vec![p.into(), k.into(), r.min_eigenvalue.into(), r.negativity.into()]);
                    }
                }
                Ok(rows)
            })
            .collect()
    });
    let mut table = Table::new(&["p", "k", "lambda_min", "negativity"]);
    for block in blocks {
        for row in block? {
            table.push(row);
        }
    }
    Ok(table)
}

pub fn cmd_critical(cfg: &SweepConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&["n", "k", "closed_form", "numeric", "residual", "asymptotic_limit", "status"]);
    let limit = asymptotic_esd_limit(cfg.channel.family).ok();
    for &n in &cfg.ns {
        let params = cfg.params(n)?;
        for k in cfg.cuts.resolve(n)? {
            if cfg.channel.family == ChannelFamily::PhaseDamping {
                let outcome = esd_probability_numeric(&cfg.channel, &params, k)?;
                debug_assert_eq!(outcome, EsdOutcome::Asymptotic);
                table.push(vec![n.into(), k.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, "no ESD".into()]);
                continue;
            }
            let closed = esd_probability_closed_form(&cfg.channel, &params, k).map(|r| r.p_c);
            let (numeric, residual, status) = match esd_probability_numeric(&cfg.channel, &params, k)? {
                EsdOutcome::Finite(r) => (Some(r.p_c), Some(r.residual), "esd"),
                EsdOutcome::Asymptotic => (None, None, "no ESD before p = 1"),
            };
            table.push(vec![
                n.into(),
                k.into(),
                closed.into(),
                numeric.into(),
                residual.into(),
                limit.into(),
                status.into(),
            ]);
        }
    }
    Ok(table)
}

pub fn cmd_epsilon(cfg: &SweepConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&["n", "epsilon", "p_eps", "p_eps_approx", "n_p_eps", "n_p_eps_approx"]);
    for &n in &cfg.ns {
        let r = epsilon_probability(&cfg.channel, &cfg.params(n)?, cfg.epsilon)?;
        let nf = n as f64;
        table.push(vec![
            n.into(),
            r.epsilon.into(),
            r.p_eps.into(),
            r.p_eps_approx.into(),
            (nf * r.p_eps).into(),
            (nf * r.p_eps_approx).into(),
        ]);
    }
    Ok(table)
}

pub fn cmd_window(cfg: &SweepConfig) -> Result<Table, CliError> {
    let mut table = Table::new(&["n", "p_start", "p_end", "nonempty", "reason"]);
    for &n in &cfg.ns {
        let w = bound_entanglement_window(&cfg.channel, &cfg.params(n)?)?;
        for warning in &w.warnings {
            eprintln!("warning: N = {n}: {warning}");
        }
        table.push(vec![n.into(), w.p_start.into(), w.p_end.into(), w.nonempty.into(), w.reason.into()]);
    }
    Ok(table)
}

pub fn cmd_verify_appendix(cfg: &SweepConfig) -> Result<Report, CliError> {
    let mut table = Table::new(&[
        "n",
        "p_c",
        "scale",
        "residual",
        "sigma_min_pt_eigenvalue",
        "sigma_ppt_ok",
        "delta",
        "valid",
    ]);
    let mut verified = true;
    for &n in &cfg.ns {
        let cert = verify_full_separability(&cfg.params(n)?)?;
        verified &= cert.is_valid();
        table.push(vec![
            n.into(),
            cert.p_c.into(),
            cert.scale.into(),
            cert.reconstruction_residual.into(),
            cert.sigma_min_pt_eigenvalue.into(),
            cert.sigma_ppt_ok.into(),
            cert.delta.into(),
            cert.is_valid().into(),
        ]);
    }
    Ok(Report { table, verified })
}

pub fn cmd_oracle_diff(cfg: &SweepConfig) -> Result<Report, CliError> {
    let mut table = Table::new(&[
        "n",
        "points",
        "max_lambda_diff",
        "max_spectrum_min_diff",
        "max_negativity_diff",
        "max_negative_eigenvalue_count",
        "ok",
    ]);
    let mut verified = true;
    let grid = cfg.grid();
    for &n in &cfg.ns {
        check_capacity(n)?;
        let params = cfg.params(n)?;
        let s = cfg.pool()?.install(|| compare_grid_parallel(&params, &cfg.channel, &grid))?;
        let ok = s.worst_gap() <= ORACLE_TOL && s.max_negative_count <= 1;
        verified &= ok;
        table.push(vec![
            n.into(),
            s.points.into(),
            s.max_eigenvalue_gap.max(s.max_direct_gap).into(),
            s.max_minimum_gap.into(),
            s.max_negativity_gap.into(),
            s.max_negative_count.into(),
            ok.into(),
        ]);
    }
    Ok(Report { table, verified })
}

fn compare_grid_parallel(
    params: &GhzParams,
    channel: &ChannelSpec,
    grid: &[f64],
) -> Result<crate::crosscheck::GridSummary, CliError> {
    let parts: Vec<_> = grid
        .par_iter()
        .map(|&p| compare_grid(params, channel, &[p]))
        .collect::<Result<_, _>>()?;
    let mut total = crate::crosscheck::GridSummary::default();
    for part in &parts {
        total.merge(part);
    }
    Ok(total)
}

pub fn execute(command: Command, opts: &GlobalOpts) -> Result<Report, CliError> {
    let cfg = SweepConfig::from_opts(command, opts)?;
    let plain = |table| Report { table, verified: true };
    match command {
        Command::Sweep => cmd_sweep(&cfg).map(plain),
        Command::Critical => cmd_critical(&cfg).map(plain),
        Command::Epsilon => cmd_epsilon(&cfg).map(plain),
        Command::Window => cmd_window(&cfg).map(plain),
        Command::VerifyAppendix => cmd_verify_appendix(&cfg),
        Command::OracleDiff => cmd_oracle_diff(&cfg),
    }
}

pub fn run(cli: &Cli) -> Exit {
    match execute(cli.command, &cli.opts) {
        Ok(report) => {
            let text = report.table.render(cli.opts.format);
            let written = match &cli.opts.out {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return Exit::Failure;
            }
            if report.verified {
                Exit::Success
            } else {
                eprintln!("verification failed");
                Exit::Verification
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.exit
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("ghz-decay").chain(args.iter().copied())).unwrap()
    }

    fn cfg(args: &[&str]) -> SweepConfig {
        let cli = parse(args);
        SweepConfig::from_opts(cli.command, &cli.opts).unwrap()
    }

    #[test]
    fn sweep_header_and_initial_rows() {
        let c = cfg(&["sweep", "--n", "5", "--alpha-sq", "0.2", "--p-count", "3"]);
        let t = cmd_sweep(&c).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("p,k,lambda_min,negativity\n"));
        let ab = (0.2f64 * 0.8).sqrt();
        for row in t.rows.iter().take(2) {
            assert_eq!(row[0], Cell::Num(0.0));
            match row[3] {
                Cell::Num(v) => assert!((v - ab).abs() < 1e-15),
                _ => panic!(),
            }
        }
        assert_eq!(t.rows.len(), 6);
        // p-major, k-minor
        assert_eq!(t.rows[1][1], Cell::Int(2));
        assert_eq!(t.rows[2][1], Cell::Int(1));
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let c = cfg(&["sweep", "--n", "4", "--p-count", "2", "--format", "json"]);
        let t = cmd_sweep(&c).unwrap();
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        let first = v[0].as_object().unwrap();
        let keys: Vec<&str> = first.keys().map(String::as_str).collect();
        for h in ["p", "k", "lambda_min", "negativity"] {
            assert!(keys.contains(&h));
        }
    }

    #[test]
    fn number_format_is_seventeen_digits() {
        assert_eq!(format_number(0.5), "5.0000000000000000e-1");
        assert_eq!(format_number(-1.0 / 3.0), "-3.3333333333333331e-1");
    }

    #[test]
    fn figure_presets() {
        let c = cfg(&["sweep", "--figure", "2", "--n", "7"]);
        assert_eq!(c.ns, vec![4, 40, 400]);
        assert_eq!(c.channel.family, ChannelFamily::Depolarizing);
        assert_eq!(c.cuts, CutSelection::Balanced);
        let t = cmd_sweep(&cfg(&["sweep", "--figure", "1", "--p-count", "11"])).unwrap();
        assert_eq!(t.rows.len(), 22);
    }

    #[test]
    fn usage_errors() {
        let cli = parse(&["sweep", "--p-count", "1"]);
        assert_eq!(execute(cli.command, &cli.opts).unwrap_err().exit, Exit::Usage);
        let cli = parse(&["sweep", "--n", "4", "--k", "3"]);
        assert_eq!(execute(cli.command, &cli.opts).unwrap_err().exit, Exit::Usage);
        let cli = parse(&["sweep", "--alpha", "0.6,0", "--beta", "0.6,0"]);
        assert_eq!(execute(cli.command, &cli.opts).unwrap_err().exit, Exit::Usage);
        let cli = parse(&["sweep", "--alpha", "0.6,0", "--beta", "0.6,0", "--renormalize", "--p-count", "2"]);
        assert!(execute(cli.command, &cli.opts).is_ok());
        let cli = parse(&["epsilon", "--epsilon", "1"]);
        assert_eq!(execute(cli.command, &cli.opts).unwrap_err().exit, Exit::Usage);
        assert!(Cli::try_parse_from(["ghz-decay", "sweep", "--figure", "3"]).is_err());
        assert!(Cli::try_parse_from(["ghz-decay", "sweep", "--family", "bogus"]).is_err());
    }

    #[test]
    fn explicit_complex_amplitudes() {
        let c = cfg(&["sweep", "--alpha", "0.6,0", "--beta", "0,-0.8"]);
        assert_eq!(c.beta, Complex64::new(0.0, -0.8));
    }

    #[test]
    fn critical_rows() {
        let t = cmd_critical(&cfg(&["critical", "--family", "ad", "--alpha-sq", "0.1111111111111111", "--n", "4"])).unwrap();
        assert_eq!(t.rows.len(), 2);
        for row in &t.rows {
            match (&row[2], &row[3]) {
                (Cell::Num(a), Cell::Num(b)) => {
                    assert!((a - 0.594_604).abs() < 1e-6 && (a - b).abs() < 1e-9);
                }
                other => panic!("{other:?}"),
            }
        }
        let t = cmd_critical(&cfg(&["critical", "--family", "dephasing"])).unwrap();
        assert!(t.rows.iter().all(|r| r[6] == Cell::Text("no ESD".into())));
        let t = cmd_critical(&cfg(&["critical", "--k", "balanced"])).unwrap();
        match t.rows[0][2] {
            Cell::Num(v) => assert!((v - 0.48892).abs() < 1e-5),
            _ => panic!(),
        }
    }

    #[test]
    fn epsilon_dephasing_row() {
        let t = cmd_epsilon(&cfg(&["epsilon", "--family", "dephasing", "--n", "100", "--epsilon", "0.01"])).unwrap();
        match t.rows[0][2] {
            Cell::Num(v) => assert!((v - 0.04501).abs() < 1e-5),
            _ => panic!(),
        }
    }

    #[test]
    fn window_rows() {
        let t = cmd_window(&cfg(&["window"])).unwrap();
        assert_eq!(t.rows[0][3], Cell::Bool(true));
        let t = cmd_window(&cfg(&["window", "--family", "ad", "--alpha-sq", "0.2", "--n", "6"])).unwrap();
        assert_eq!(t.rows[0][3], Cell::Bool(false));
    }

    #[test]
    fn oracle_diff_capacity() {
        let cli = parse(&["oracle-diff", "--n", "13"]);
        assert_eq!(execute(cli.command, &cli.opts).unwrap_err().exit, Exit::Capacity);
        let r = cmd_oracle_diff(&cfg(&["oracle-diff", "--family", "gad", "--nbar", "1", "--alpha-sq", "0.3"])).unwrap();
        assert!(r.verified);
        assert_eq!(r.table.rows[0][5], Cell::Int(1));
    }
}
