//! Subcommand front end: `rc`, `rho-range`, `roc`, `simulate`, `estimate`,
//! `mc-roc`.
//!
//! Output is data (CSV/JSON), never rendered plots. Every file-producing
//! invocation also writes a `<output>.manifest.json` recording the command,
//! tool version, resolved parameters, seeds and the output file list, so any
//! artifact can be regenerated bit-exactly from its manifest alone.
//!
//! Exit codes: 0 success, 2 usage errors, 3 config/format errors, 4
//! numeric or degenerate-input errors, 5 I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::detection::{
    self, conventional_roc, default_p_fa_grid, lin_spaced, log_spaced, noise_radar_roc,
    write_roc_csv, RocCurve,
};
use crate::error::{Error, Result};
use crate::estimator::fit;
use crate::mc::{compare_to_theory, run_trials_with, TrialConfig};
use crate::model::{CouplingKind, QtmsCovariance};
use crate::range::{
    characteristic_range, characteristic_range_4pi, rho_at_range, snr_at_range, LinkBudget,
    LinkBudgetConfig, RangeProfile,
};
use crate::synthesis::{
    read_sample_files, sample_covariance, sample_covariance_centered, synthesize_with,
    SynthesisOptions,
};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Parser)]
#[command(
    name = "noise-radar",
    version,
    about = "Noise radar detection performance: range law, ROC curves, simulation, estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic range R_c of a link budget (the SNR = 1 range)
    Rc {
        /// Link-budget JSON config
        #[arg(long)]
        config: PathBuf,
        /// Also write the result as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV sweep of the correlation coefficient over range
    RhoRange {
        /// Maximum observable correlation (default 1, or the config value)
        #[arg(long)]
        rho0: Option<f64>,
        /// Characteristic range in meters (alternative to --config)
        #[arg(long = "rc-m", alias = "rc")]
        rc_m: Option<f64>,
        /// Link-budget JSON config (alternative to --rc-m)
        #[arg(long, conflicts_with = "rc_m")]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        #[arg(long, default_value_t = 401)]
        steps: usize,
        /// Output CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Theoretical ROC curves (noise radar or conventional radar)
    Roc {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Correlation coefficient (noise model, direct strength)
        #[arg(long)]
        rho: Option<f64>,
        /// Signal-to-noise ratio, linear (conventional model, direct strength)
        #[arg(long)]
        snr: Option<f64>,
        /// Maximum observable correlation for range mode
        #[arg(long)]
        rho0: Option<f64>,
        /// Characteristic range in meters for range mode
        #[arg(long = "rc-m", alias = "rc")]
        rc_m: Option<f64>,
        /// Link-budget JSON config for range mode
        #[arg(long, conflicts_with = "rc_m")]
        config: Option<PathBuf>,
        /// Target range(s) in meters, comma separated; one curve per range
        #[arg(long, value_delimiter = ',')]
        range: Option<Vec<f64>>,
        /// Integration count N
        #[arg(long)]
        n: u64,
        /// False-alarm grid as min:max:steps:log|lin (default 60-point grid)
        #[arg(long = "p-fa-grid")]
        p_fa_grid: Option<GridSpec>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Output file (stdout when omitted; required for multiple ranges)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a four-channel Gaussian sample block (CSV + JSON sidecar)
    Simulate {
        #[arg(long, default_value_t = 1.0)]
        p1: f64,
        #[arg(long, default_value_t = 1.0)]
        p2: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value = "rotation")]
        coupling: CouplingKind,
        /// Number of samples
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Accept rho = 1 by substituting 1 - 1e-12
        #[arg(long)]
        allow_degenerate: bool,
        /// Output CSV path (sidecar written with .json extension)
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the covariance model to a sample block, emitting the estimate as JSON
    Estimate {
        /// Input sample-block CSV
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "rotation")]
        coupling: CouplingKind,
        /// Use the mean-subtracting sample covariance instead of the
        /// zero-mean form
        #[arg(long)]
        subtract_mean: bool,
        /// Output JSON (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo empirical ROC with comparison against the closed form
    McRoc {
        /// H1 correlation coefficient
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value = "rotation")]
        coupling: CouplingKind,
        /// Samples integrated per trial (N)
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials_h0: usize,
        #[arg(long, default_value_t = 1000)]
        trials_h1: usize,
        /// Base seed; trial i uses seed base + i (H0 trials first)
        #[arg(long)]
        seed: u64,
        #[arg(long = "p-fa-grid")]
        p_fa_grid: Option<GridSpec>,
        /// Worker threads (default: one per core); does not affect output
        #[arg(long)]
        workers: Option<usize>,
        /// Draw a fresh uniform phase per trial
        #[arg(long)]
        randomize_phi: bool,
        /// Comparison report JSON
        #[arg(long)]
        out: PathBuf,
        /// Also write the empirical curve as CSV
        #[arg(long)]
        curve_csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Noise,
    Conventional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

/// False-alarm grid specification `min:max:steps:log|lin`.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    min: f64,
    max: f64,
    steps: usize,
    log: bool,
}

impl GridSpec {
    fn to_grid(self) -> Result<Vec<f64>> {
        if self.log {
            log_spaced(self.min, self.max, self.steps)
        } else {
            lin_spaced(self.min, self.max, self.steps)
        }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidParameter(format!(
                "grid spec must be min:max:steps:log|lin, got `{s}`"
            )));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("grid min: {e}")))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("grid max: {e}")))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("grid steps: {e}")))?;
        let log = match parts[3] {
            "log" => true,
            "lin" => false,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "grid scale must be `log` or `lin`, got `{other}`"
                )))
            }
        };
        Ok(GridSpec {
            min,
            max,
            steps,
            log,
        })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}",
            self.min,
            self.max,
            self.steps,
            if self.log { "log" } else { "lin" }
        )
    }
}

/// Parse the process arguments, run the chosen command, and return the exit
/// code. Errors are reported on stderr.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits; everything else is usage
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::Degenerate(_)
        | Error::Asymmetric(_)
        | Error::NotPositiveDefinite(_)
        | Error::Trial { .. } => EXIT_NUMERIC,
        Error::Config { .. } | Error::Csv(_) | Error::Json(_) => EXIT_CONFIG,
        Error::Io(_) => EXIT_IO,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Rc { config, out } => cmd_rc(&config, out.as_deref()),
        Command::RhoRange {
            rho0,
            rc_m,
            config,
            r_min,
            r_max,
            steps,
            out,
        } => cmd_rho_range(rho0, rc_m, config.as_deref(), r_min, r_max, steps, out.as_deref()),
        Command::Roc {
            model,
            rho,
            snr,
            rho0,
            rc_m,
            config,
            range,
            n,
            p_fa_grid,
            format,
            out,
        } => cmd_roc(
            model,
            rho,
            snr,
            rho0,
            rc_m,
            config.as_deref(),
            range,
            n,
            p_fa_grid,
            format,
            out.as_deref(),
        ),
        Command::Simulate {
            p1,
            p2,
            rho,
            phi,
            coupling,
            n,
            seed,
            allow_degenerate,
            out,
        } => cmd_simulate(p1, p2, rho, phi, coupling, n, seed, allow_degenerate, &out),
        Command::Estimate {
            input,
            coupling,
            subtract_mean,
            out,
        } => cmd_estimate(&input, coupling, subtract_mean, out.as_deref()),
        Command::McRoc {
            rho,
            phi,
            coupling,
            n,
            trials_h0,
            trials_h1,
            seed,
            p_fa_grid,
            workers,
            randomize_phi,
            out,
            curve_csv,
        } => cmd_mc_roc(
            rho,
            phi,
            coupling,
            n,
            trials_h0,
            trials_h1,
            seed,
            p_fa_grid,
            workers,
            randomize_phi,
            &out,
            curve_csv.as_deref(),
        ),
    }
}

fn load_budget(path: &Path) -> Result<LinkBudget> {
    let text = std::fs::read_to_string(path)?;
    let cfg: LinkBudgetConfig = serde_json::from_str(&text).map_err(|e| Error::Config {
        path: Some(path.to_path_buf()),
        message: e.to_string(),
    })?;
    LinkBudget::try_from(cfg).map_err(|e| Error::Config {
        path: Some(path.to_path_buf()),
        message: e.to_string(),
    })
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    version: &'a str,
    parameters: serde_json::Value,
    seeds: Vec<u64>,
    outputs: Vec<String>,
}

/// Write `<out>.manifest.json` next to the primary output.
fn write_manifest(
    out: &Path,
    command: &str,
    parameters: serde_json::Value,
    seeds: Vec<u64>,
    outputs: &[&Path],
) -> Result<()> {
    let manifest = RunManifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        parameters,
        seeds,
        outputs: outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
    };
    let path = out.with_extension("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct RcReport {
    r_c_m: f64,
    r_c_m_single_4pi: f64,
    rho0: f64,
    rho_at_r_c: f64,
}

fn cmd_rc(config: &Path, out: Option<&Path>) -> Result<()> {
    let budget = load_budget(config)?;
    let r_c = characteristic_range(&budget);
    let alt = characteristic_range_4pi(&budget);
    let rho0 = budget.rho0();
    let rho_at_rc = rho0 / 2f64.sqrt();

    println!("R_c = {r_c} m");
    println!("  the range at which received signal power equals noise power (SNR = 1);");
    println!("  the correlation coefficient falls to rho0/sqrt(2) = {rho_at_rc} there (rho0 = {rho0})");
    println!(
        "note: R_c above uses the (4pi)^2 spreading denominator; sources quoting the \
         single-4pi form would report R_c = {alt} m (larger by (4pi)^(1/4) = {})",
        (4.0 * std::f64::consts::PI).powf(0.25)
    );

    if let Some(out) = out {
        let report = RcReport {
            r_c_m: r_c,
            r_c_m_single_4pi: alt,
            rho0,
            rho_at_r_c: rho_at_rc,
        };
        write_json_file(out, &report)?;
        write_manifest(
            out,
            "rc",
            json!({ "config": config.display().to_string() }),
            vec![],
            &[out],
        )?;
    }
    Ok(())
}

fn cmd_rho_range(
    rho0: Option<f64>,
    rc_m: Option<f64>,
    config: Option<&Path>,
    r_min: f64,
    r_max: f64,
    steps: usize,
    out: Option<&Path>,
) -> Result<()> {
    let profile = resolve_profile(rho0, rc_m, config)?;
    if r_min < 0.0 || r_max <= r_min {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    let ranges = lin_spaced(r_min, r_max, steps)?;

    let mut body = String::new();
    body.push_str("range_m,rho\n");
    body.push_str(&format!(
        "# R_c = {} m: rho = rho0/sqrt(2) = {}\n",
        profile.r_c_m(),
        profile.rho0() / 2f64.sqrt()
    ));
    for r in ranges {
        let rho = rho_at_range(&profile, r)?;
        body.push_str(&format!("{r:.16e},{rho:.16e}\n"));
    }

    match out {
        None => {
            print!("{body}");
        }
        Some(out) => {
            std::fs::write(out, &body)?;
            write_manifest(
                out,
                "rho-range",
                json!({
                    "rho0": profile.rho0(),
                    "rc_m": profile.r_c_m(),
                    "config": config.map(|p| p.display().to_string()),
                    "r_min": r_min,
                    "r_max": r_max,
                    "steps": steps,
                }),
                vec![],
                &[out],
            )?;
        }
    }
    Ok(())
}

fn resolve_profile(
    rho0: Option<f64>,
    rc_m: Option<f64>,
    config: Option<&Path>,
) -> Result<RangeProfile> {
    match (rc_m, config) {
        (Some(rc), None) => RangeProfile::new(rho0.unwrap_or(1.0), rc),
        (None, Some(path)) => {
            let budget = load_budget(path)?;
            RangeProfile::new(
                rho0.unwrap_or_else(|| budget.rho0()),
                characteristic_range(&budget),
            )
        }
        (None, None) => Err(Error::InvalidParameter(
            "either --rc-m or --config is required".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with prevents this"),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_roc(
    model: ModelArg,
    rho: Option<f64>,
    snr: Option<f64>,
    rho0: Option<f64>,
    rc_m: Option<f64>,
    config: Option<&Path>,
    range: Option<Vec<f64>>,
    n: u64,
    p_fa_grid: Option<GridSpec>,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<()> {
    let grid = match p_fa_grid {
        Some(spec) => spec.to_grid()?,
        None => default_p_fa_grid(),
    };

    let curves: Vec<RocCurve> = match (model, rho, snr, &range) {
        (ModelArg::Noise, Some(rho), None, None) => vec![noise_radar_roc(rho, n, &grid)?],
        (ModelArg::Conventional, None, Some(snr), None) => {
            vec![conventional_roc(snr, n, &grid)?]
        }
        (ModelArg::Noise, None, None, Some(ranges)) => {
            let profile = resolve_profile(rho0, rc_m, config)?;
            detection::roc_vs_range(&profile, ranges, n, &grid)?
        }
        (ModelArg::Conventional, None, None, Some(ranges)) => {
            let profile = resolve_profile(rho0, rc_m, config)?;
            ranges
                .iter()
                .map(|&r| {
                    let snr = snr_at_range(&profile, r)?;
                    let mut curve = conventional_roc(snr, n, &grid)?;
                    curve.params.range_m = Some(r);
                    Ok(curve)
                })
                .collect::<Result<Vec<_>>>()?
        }
        (ModelArg::Noise, None, None, None) => {
            return Err(Error::InvalidParameter(
                "the noise model needs --rho, or --range with --rc-m/--config".into(),
            ))
        }
        (ModelArg::Conventional, None, None, None) => {
            return Err(Error::InvalidParameter(
                "the conventional model needs --snr, or --range with --rc-m/--config".into(),
            ))
        }
        _ => {
            return Err(Error::InvalidParameter(
                "give exactly one strength: --rho (noise), --snr (conventional), or --range"
                    .into(),
            ))
        }
    };

    let grid_desc = p_fa_grid
        .map(|g| g.to_string())
        .unwrap_or_else(|| "default".into());
    let params = json!({
        "model": match model { ModelArg::Noise => "noise", ModelArg::Conventional => "conventional" },
        "rho": rho,
        "snr": snr,
        "rho0": rho0,
        "rc_m": rc_m,
        "config": config.map(|p| p.display().to_string()),
        "range": range,
        "n": n,
        "p_fa_grid": grid_desc,
        "format": match format { OutputFormat::Csv => "csv", OutputFormat::Json => "json" },
    });

    match (curves.len(), out) {
        (1, None) => emit_curve(&curves[0], format, None),
        (1, Some(out)) => {
            emit_curve(&curves[0], format, Some(out))?;
            write_manifest(out, "roc", params, vec![], &[out])
        }
        (_, None) => Err(Error::InvalidParameter(
            "multiple ranges need --out for per-range files".into(),
        )),
        (_, Some(out)) => {
            let mut paths = Vec::new();
            for curve in &curves {
                let r = curve.params.range_m.expect("range curves are tagged");
                let path = range_suffixed(out, r);
                emit_curve(curve, format, Some(&path))?;
                paths.push(path);
            }
            let path_refs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
            write_manifest(out, "roc", params, vec![], &path_refs)
        }
    }
}

/// `fig2.csv` + range 500 → `fig2.r500.csv`.
fn range_suffixed(out: &Path, range_m: f64) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = out
        .extension()
        .map(|s| format!(".{}", s.to_string_lossy()))
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.r{range_m}{ext}"))
}

fn emit_curve(curve: &RocCurve, format: OutputFormat, out: Option<&Path>) -> Result<()> {
    match (format, out) {
        (OutputFormat::Csv, None) => {
            let stdout = std::io::stdout();
            write_roc_csv(curve, stdout.lock())
        }
        (OutputFormat::Csv, Some(path)) => {
            let file = std::fs::File::create(path)?;
            write_roc_csv(curve, std::io::BufWriter::new(file))
        }
        (OutputFormat::Json, None) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            serde_json::to_writer_pretty(&mut lock, curve)?;
            writeln!(lock)?;
            Ok(())
        }
        (OutputFormat::Json, Some(path)) => write_json_file(path, curve),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    p1: f64,
    p2: f64,
    rho: f64,
    phi: f64,
    coupling: CouplingKind,
    n: usize,
    seed: u64,
    allow_degenerate: bool,
    out: &Path,
) -> Result<()> {
    if out.extension().is_some_and(|e| e == "json") {
        return Err(Error::InvalidParameter(
            "sample CSV path must not end in .json; that name is reserved for the metadata sidecar"
                .into(),
        ));
    }
    let params = QtmsCovariance::new(p1, p2, rho, phi, coupling)?;
    let block = synthesize_with(&params, n, seed, SynthesisOptions { allow_degenerate })?;
    let sidecar = crate::synthesis::write_sample_files(&block, out)?;
    write_manifest(
        out,
        "simulate",
        json!({
            "p1": p1, "p2": p2, "rho": rho, "phi": phi,
            "coupling": coupling.to_string(),
            "n": n, "seed": seed,
            "allow_degenerate": allow_degenerate,
        }),
        vec![seed],
        &[out, &sidecar],
    )?;
    Ok(())
}

fn cmd_estimate(
    input: &Path,
    coupling: CouplingKind,
    subtract_mean: bool,
    out: Option<&Path>,
) -> Result<()> {
    let block = read_sample_files(input)?;
    let s_hat = if subtract_mean {
        sample_covariance_centered(&block)?
    } else {
        sample_covariance(&block)?
    };
    let result = fit(&s_hat, coupling)?;
    match out {
        None => {
            println!("{}", serde_json::to_string_pretty(&result)?);
        }
        Some(out) => {
            write_json_file(out, &result)?;
            write_manifest(
                out,
                "estimate",
                json!({
                    "in": input.display().to_string(),
                    "coupling": coupling.to_string(),
                    "subtract_mean": subtract_mean,
                }),
                vec![],
                &[out],
            )?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc_roc(
    rho: f64,
    phi: f64,
    coupling: CouplingKind,
    n: usize,
    trials_h0: usize,
    trials_h1: usize,
    seed: u64,
    p_fa_grid: Option<GridSpec>,
    workers: Option<usize>,
    randomize_phi: bool,
    out: &Path,
    curve_csv: Option<&Path>,
) -> Result<()> {
    let grid = match p_fa_grid {
        Some(spec) => spec.to_grid()?,
        None => default_p_fa_grid(),
    };
    let config = TrialConfig {
        n_samples: n,
        rho,
        phi,
        coupling,
        trials_h0,
        trials_h1,
        base_seed: seed,
        randomize_phi,
    };
    let emp = run_trials_with(&config, &grid, workers)?;
    let report = compare_to_theory(&emp)?;
    if report.n_below_validity {
        eprintln!(
            "warning: n = {n} is below the ~100-sample validity region of the closed-form ROC"
        );
    }
    write_json_file(out, &report)?;

    let mut outputs: Vec<&Path> = vec![out];
    if let Some(csv_path) = curve_csv {
        let curve = emp.to_roc_curve()?;
        let file = std::fs::File::create(csv_path)?;
        write_roc_csv(&curve, std::io::BufWriter::new(file))?;
        outputs.push(csv_path);
    }
    write_manifest(
        out,
        "mc-roc",
        json!({
            "rho": rho, "phi": phi,
            "coupling": coupling.to_string(),
            "n": n,
            "trials_h0": trials_h0, "trials_h1": trials_h1,
            "seed": seed,
            "p_fa_grid": p_fa_grid.map(|g| g.to_string()).unwrap_or_else(|| "default".into()),
            "workers": workers,
            "randomize_phi": randomize_phi,
            "curve_csv": curve_csv.map(|p| p.display().to_string()),
        }),
        vec![seed],
        &outputs,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses() {
        let g: GridSpec = "1e-4:0.5:50:log".parse().unwrap();
        assert_eq!(g.steps, 50);
        assert!(g.log);
        let grid = g.to_grid().unwrap();
        assert_eq!(grid.len(), 50);
        let g: GridSpec = "0.1:0.9:5:lin".parse().unwrap();
        assert!(!g.log);
        assert_eq!(g.to_grid().unwrap(), vec![0.1, 0.3, 0.5, 0.7, 0.9]);
        assert!("1:2:3".parse::<GridSpec>().is_err());
        assert!("1:2:3:quadratic".parse::<GridSpec>().is_err());
        assert!("a:2:3:log".parse::<GridSpec>().is_err());
    }

    #[test]
    fn range_suffix_naming() {
        assert_eq!(
            range_suffixed(Path::new("out/fig2.csv"), 500.0),
            Path::new("out/fig2.r500.csv")
        );
        assert_eq!(
            range_suffixed(Path::new("curve.json"), 1512.5),
            Path::new("curve.r1512.5.json")
        );
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::InvalidParameter("x".into())), EXIT_NUMERIC);
        assert_eq!(exit_code(&Error::Degenerate("x".into())), EXIT_NUMERIC);
        assert_eq!(
            exit_code(&Error::Config {
                path: None,
                message: "x".into()
            }),
            EXIT_CONFIG
        );
        assert_eq!(
            exit_code(&Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "x"
            ))),
            EXIT_IO
        );
    }
}
