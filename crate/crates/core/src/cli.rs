//! Command-line front end.
//!
//! `run` takes the full argument vector (program name first) and returns the
//! process exit code: 0 on success, 1 for invalid arguments or configuration,
//! 2 for numerical failures.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{compute_trace, detect_events, sweep, SweepAxis, SweepRow};
use crate::kernels::{coefficient_set, oracle_coefficient, CoefficientKind, ThermalKernel};
use crate::params::{validate, ConfigWarning, GridConfig, Oscillator, PhysicalConfig, SecularForm, ValidatedConfig};
use crate::secular::SecularAccumulator;

pub const TRACE_HEADER: &str = "tau,S,Gamma1,Gamma2,physical";
pub const SWEEP_HEADER: &str = "axis_value,tau_dis,n_revivals,survived";
pub const COEFFS_HEADER: &str = "tau,oscillator,delta,pi,gamma,Gamma,delta_gamma,delta_co,delta_si,pi_co,pi_si";
pub const VERIFY_HEADER: &str = "kind,tau,omega,closed_form,oracle,abs_diff,status";

/// Environment variable capping sweep parallelism (0 = all cores).
pub const THREADS_ENV: &str = "TWINBEAM_THREADS";

/// Agreement required between closed forms and the oracle in `verify`.
pub const VERIFY_TOL: f64 = 1e-7;
pub const VERIFY_TAUS: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
pub const VERIFY_OMEGAS: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "twinbeam",
    version,
    about = "Twin-beam entanglement in non-Markovian Ohmic baths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Separability function on the time grid (CSV)
    Trace(OutputArgs),
    /// Deaths, revivals and grazing contacts (JSON)
    Events(OutputArgs),
    /// Event summary over a list of parameter values
    Sweep(SweepArgs),
    /// Master-equation and secular coefficients on the time grid (CSV)
    Coeffs(OutputArgs),
    /// Closed-form coefficients against nested quadrature
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
struct ConfigArgs {
    /// JSON file with any of r, x1, x2, alpha, temperature_ratio, tau_max, dtau, refine_tol, secular_form
    #[arg(long)]
    config: Option<PathBuf>,
    /// Squeezing parameter
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    temperature_ratio: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    dtau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    refine_tol: Option<f64>,
    #[arg(long, value_enum)]
    secular_form: Option<FormArg>,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct SweepArgs {
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Comma-separated axis values
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    values: Vec<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads; overrides TWINBEAM_THREADS
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    temperature_ratio: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Derived,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    X1,
    X2,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Keys accepted in a JSON configuration file.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub r: Option<f64>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub alpha: Option<f64>,
    pub temperature_ratio: Option<f64>,
    pub tau_max: Option<f64>,
    pub dtau: Option<f64>,
    pub refine_tol: Option<f64>,
    pub secular_form: Option<SecularForm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Option<PhysicalConfig>,
    pub grid: Option<GridConfig>,
    pub warnings: Vec<ConfigWarning>,
    pub started_unix_seconds: u64,
    pub wall_time_seconds: f64,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros removed.
pub fn format_g(value: f64) -> String {
    format_significant(value, 12)
}

fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return if value.is_nan() {
            "nan".into()
        } else if value > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exponent) = sci.split_once('e').unwrap();
    let exponent: i32 = exponent.parse().unwrap();
    if exponent < -4 || exponent >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (digits as i32 - 1 - exponent) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn resolve(args: &ConfigArgs) -> Result<ValidatedConfig, Failure> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str::<ConfigFile>(&text)
                .map_err(|e| Failure::invalid(format!("invalid config {}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let phys_default = PhysicalConfig::default();
    let grid_default = GridConfig::default();
    let physical = PhysicalConfig {
        squeezing: args.r.or(file.r).unwrap_or(phys_default.squeezing),
        x1: args.x1.or(file.x1).unwrap_or(phys_default.x1),
        x2: args.x2.or(file.x2).unwrap_or(phys_default.x2),
        alpha: args.alpha.or(file.alpha).unwrap_or(phys_default.alpha),
        temperature_ratio: args
            .temperature_ratio
            .or(file.temperature_ratio)
            .unwrap_or(phys_default.temperature_ratio),
        secular_form: args
            .secular_form
            .map(|f| match f {
                FormArg::Derived => SecularForm::Derived,
                FormArg::AsPrinted => SecularForm::AsPrinted,
            })
            .or(file.secular_form)
            .unwrap_or_default(),
    };
    let grid = GridConfig {
        tau_max: args.tau_max.or(file.tau_max).unwrap_or(grid_default.tau_max),
        dtau: args.dtau.or(file.dtau).unwrap_or(grid_default.dtau),
        refine_tol: args.refine_tol.or(file.refine_tol).unwrap_or(grid_default.refine_tol),
    };
    validate(&physical, &grid).map_err(|e| Failure::invalid(format!("invalid configuration: {e}")))
}

fn write_output(out: Option<&Path>, data: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, data).map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
        }
        None => io::stdout()
            .lock()
            .write_all(data.as_bytes())
            .map_err(|e| Failure::invalid(format!("cannot write to stdout: {e}"))),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// CSV outputs keep their header on the first line, so the manifest goes
/// next to the file (or to stderr when writing to stdout).
fn write_sidecar(out: Option<&Path>, manifest: &RunManifest) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
    match out {
        Some(path) => {
            let side = sidecar_path(path);
            fs::write(&side, text).map_err(|e| Failure::invalid(format!("cannot write {}: {e}", side.display())))
        }
        None => {
            let _ = io::stderr().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

struct Clock {
    started: Instant,
    unix: u64,
}

impl Clock {
    fn start() -> Self {
        Self {
            started: Instant::now(),
            unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    fn manifest(&self, command: &str, config: Option<&ValidatedConfig>) -> RunManifest {
        RunManifest {
            tool: "twinbeam",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: config.map(|c| c.physical),
            grid: config.map(|c| c.grid),
            warnings: config.map(|c| c.warnings.clone()).unwrap_or_default(),
            started_unix_seconds: self.unix,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        }
    }
}

fn report_warnings(config: &ValidatedConfig) {
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }
}

fn cmd_trace(args: &OutputArgs) -> Result<(), Failure> {
    let clock = Clock::start();
    let config = resolve(&args.config)?;
    report_warnings(&config);
    let trace = compute_trace(&config).map_err(|e| Failure::numerical(e.to_string()))?;
    let mut csv = String::with_capacity(trace.len() * 64);
    csv.push_str(TRACE_HEADER);
    csv.push('\n');
    for i in 0..trace.len() {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            format_g(trace.taus[i]),
            format_g(trace.s_values[i]),
            format_g(trace.gamma1[i]),
            format_g(trace.gamma2[i]),
            u8::from(trace.physical[i])
        ));
    }
    write_output(args.out.as_deref(), &csv)?;
    write_sidecar(args.out.as_deref(), &clock.manifest("trace", Some(&config)))
}

fn cmd_events(args: &OutputArgs) -> Result<(), Failure> {
    let clock = Clock::start();
    let config = resolve(&args.config)?;
    report_warnings(&config);
    let trace = compute_trace(&config).map_err(|e| Failure::numerical(e.to_string()))?;
    let events = detect_events(&trace, config.grid.refine_tol).map_err(|e| Failure::numerical(e.to_string()))?;
    let doc = json!({
        "events": events,
        "manifest": clock.manifest("events", Some(&config)),
    });
    write_output(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&doc).unwrap() + "\n"),
    )
}

fn threads_from_env() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::invalid(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for row in rows {
        match &row.events {
            Some(ev) => csv.push_str(&format!(
                "{},{},{},{}\n",
                format_g(row.axis_value),
                ev.tau_dis.map(format_g).unwrap_or_default(),
                ev.n_revivals,
                u8::from(ev.survived)
            )),
            None => csv.push_str(&format!("{},,,\n", format_g(row.axis_value))),
        }
    }
    csv
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let clock = Clock::start();
    let base = resolve(&args.output.config)?;
    report_warnings(&base);
    let axis = match args.axis {
        AxisArg::X1 => SweepAxis::X1,
        AxisArg::X2 => SweepAxis::X2,
        AxisArg::R => SweepAxis::R,
    };
    for &v in &args.values {
        validate(&axis.apply(&base.physical, v), &base.grid)
            .map_err(|e| Failure::invalid(format!("invalid {} value {v}: {e}", axis.name())))?;
    }
    let threads = match args.threads {
        Some(t) => t,
        None => threads_from_env()?,
    };
    let rows = sweep(&base, axis, &args.values, threads);
    let out = args.output.out.as_deref();
    let manifest = clock.manifest("sweep", Some(&base));
    match args.format {
        Format::Csv => {
            write_output(out, &sweep_csv(&rows))?;
            write_sidecar(out, &manifest)?;
        }
        Format::Json => {
            let doc = json!({ "axis": axis, "rows": rows, "manifest": manifest });
            write_output(out, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
        }
    }
    let failed: Vec<String> = rows
        .iter()
        .filter_map(|r| {
            r.error
                .as_ref()
                .map(|e| format!("{} = {}: {e}", axis.name(), r.axis_value))
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::numerical(failed.join("\n")))
    }
}

fn cmd_coeffs(args: &OutputArgs) -> Result<(), Failure> {
    let clock = Clock::start();
    let config = resolve(&args.config)?;
    report_warnings(&config);
    let taus = config.grid.taus();
    let mut csv = String::with_capacity(taus.len() * 2 * 200);
    csv.push_str(COEFFS_HEADER);
    csv.push('\n');
    let mut accumulators = Oscillator::BOTH.map(|o| SecularAccumulator::new(o, &config));
    for &tau in &taus {
        for (osc, acc) in Oscillator::BOTH.into_iter().zip(accumulators.iter_mut()) {
            let sec = acc.advance_to(tau).map_err(|e| Failure::numerical(e.to_string()))?;
            let k = coefficient_set(tau, osc, &config);
            let fields = [
                k.delta,
                k.pi,
                k.gamma,
                k.big_gamma,
                sec.delta_gamma,
                sec.delta_co,
                sec.delta_si,
                sec.pi_co,
                sec.pi_si,
            ];
            csv.push_str(&format_g(tau));
            csv.push(',');
            csv.push_str(&osc.index().to_string());
            for f in fields {
                csv.push(',');
                csv.push_str(&format_g(f));
            }
            csv.push('\n');
        }
    }
    write_output(args.out.as_deref(), &csv)?;
    write_sidecar(args.out.as_deref(), &clock.manifest("coeffs", Some(&config)))
}

/// One line of the `verify` table.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub kind: CoefficientKind,
    pub tau: f64,
    pub omega: f64,
    pub closed_form: f64,
    pub oracle: Option<f64>,
    pub abs_diff: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

/// Closed forms against the nested-quadrature oracle on the standard grid.
pub fn verify_table(alpha: f64, temperature_ratio: f64) -> Vec<VerifyRow> {
    let mut cases = Vec::new();
    for kind in CoefficientKind::ALL {
        for omega in VERIFY_OMEGAS {
            for tau in VERIFY_TAUS {
                cases.push((kind, tau, omega));
            }
        }
    }
    cases
        .par_iter()
        .map(|&(kind, tau, omega)| {
            let closed_form = kind.closed_form(tau, omega, alpha, temperature_ratio);
            match oracle_coefficient(
                kind,
                tau,
                omega,
                alpha,
                temperature_ratio,
                ThermalKernel::HighTemperature,
            ) {
                Ok(q) => {
                    let diff = (q.value - closed_form).abs();
                    VerifyRow {
                        kind,
                        tau,
                        omega,
                        closed_form,
                        oracle: Some(q.value),
                        abs_diff: Some(diff),
                        pass: diff <= VERIFY_TOL,
                        error: None,
                    }
                }
                Err(e) => VerifyRow {
                    kind,
                    tau,
                    omega,
                    closed_form,
                    oracle: None,
                    abs_diff: None,
                    pass: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let defaults = PhysicalConfig::default();
    let physical = PhysicalConfig {
        alpha: args.alpha.unwrap_or(defaults.alpha),
        temperature_ratio: args.temperature_ratio.unwrap_or(defaults.temperature_ratio),
        ..defaults
    };
    let config = validate(&physical, &GridConfig::default())
        .map_err(|e| Failure::invalid(format!("invalid configuration: {e}")))?;
    let rows = verify_table(config.alpha(), config.temperature_ratio());
    let mut table = String::from(VERIFY_HEADER);
    table.push('\n');
    for row in &rows {
        let opt = |v: Option<f64>| v.map(format_g).unwrap_or_else(|| "-".into());
        table.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.kind.name(),
            format_g(row.tau),
            format_g(row.omega),
            format_g(row.closed_form),
            opt(row.oracle),
            opt(row.abs_diff),
            if row.pass { "pass" } else { "fail" }
        ));
    }
    write_output(args.out.as_deref(), &table)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::numerical(format!(
            "{failed} of {} coefficients disagree with the oracle",
            rows.len()
        )))
    }
}

/// Parse `argv` and execute the selected subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Trace(a) => cmd_trace(a),
        Command::Events(a) => cmd_events(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
