//! `focklab`: verification suite, symbol tables, growth probes, matrix export
//! and calibration.
//!
//! Exit status: 0 when everything passed, 1 when a check failed or a run
//! errored, 2 on a configuration error.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod emit;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use focklab_core::calibration::{self, run_calibration, DEFAULT_MARGIN, DEFAULT_SEED};
use focklab_core::suite::{run_suite, DIRECT_SPHI_ORDER};
use focklab_core::transforms::{translation_matrix, weyl_matrix};
use focklab_core::zhu::{conjugated_multiplier_matrix, multiplier_matrix, s_phi_matrix};
use focklab_core::{
    boundedness_probe, classical_sobolev_probe, gauss_hermite, symbol_from_multiplier, Basis, Calibration, Convention,
    FockError, MultiplierSpec, OperatorMatrix, Status, SuiteConfig, C64,
};
use serde_json::{json, Value};

use config::{config_error, extract_tolerances, ConfigError, Format, RunArgs, RunConfig};
use emit::{cell, json_text, num, write_output, Table, SCHEMA};

#[derive(Debug, Parser)]
#[command(
    name = "focklab",
    version,
    about = "Hermite/Fock spectral numerics and verification suite"
)]
#[command(after_help = "Tolerance overrides: --tol.<check-id>=<value> (verify only).\n\
                        FOCKLAB_CALIBRATION overrides the calibration file path.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the invariant suite and emit one record per check.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Tabulate the symbol φ of a multiplier on a complex grid.
    Symbol {
        #[command(flatten)]
        run: RunArgs,
        /// Real parts as start:end:count.
        #[arg(long, default_value = "-1:1:5", allow_hyphen_values = true)]
        re: String,
        /// Imaginary parts as start:end:count.
        #[arg(long, default_value = "0:0:1", allow_hyphen_values = true)]
        im: String,
    },
    /// Boundedness probe: truncated operator norms and a growth classification.
    Probe {
        #[command(flatten)]
        run: RunArgs,
        /// Also run the classical Sobolev probe (n = 1).
        #[arg(long)]
        classical: bool,
    },
    /// Write an operator matrix in the focklab matrix format.
    Export {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        matrix: MatrixKind,
        /// Shift components (translation, weyl); one per axis.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        /// Imaginary shift components (weyl).
        #[arg(long = "a-im", value_delimiter = ',', allow_hyphen_values = true)]
        a_im: Vec<f64>,
        #[arg(long, value_enum, default_value = "binary")]
        encoding: Encoding,
    },
    /// Run the oracle sweep and write the calibration file.
    Calibrate {
        /// Destination; defaults to the checked-in calibration file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Safety factor applied to the measured extremes.
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    Identity,
    Translation,
    Weyl,
    Multiplier,
    Conjugated,
    SPhi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Encoding {
    Binary,
    Csv,
}

/// Why a command stopped early.
enum Failure {
    Config(String),
    Run(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<FockError> for Failure {
    fn from(e: FockError) -> Self {
        match e {
            FockError::InvalidArgument { name, reason } => {
                Failure::Config(format!("invalid configuration: {name}: {reason}"))
            }
            FockError::UnknownMultiplier(_) | FockError::Calibration(_) => Failure::Config(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args: Vec<OsString> = std::env::args_os().collect();
    let (args, tolerances) = match extract_tolerances(args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("focklab: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if !tolerances.is_empty() && !matches!(cli.command, Command::Verify { .. }) {
        eprintln!("focklab: invalid configuration: tol: tolerance overrides apply to `verify` only");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Verify { run } => verify(&run, tolerances),
        Command::Symbol { run, re, im } => symbol(&run, &re, &im),
        Command::Probe { run, classical } => probe(&run, classical),
        Command::Export {
            run,
            matrix,
            a,
            a_im,
            encoding,
        } => export(&run, matrix, &a, &a_im, encoding),
        Command::Calibrate { out, seed, margin } => calibrate(out, seed, margin),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("focklab: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("focklab: {msg}");
            ExitCode::from(1)
        }
    }
}

/// `--calibration`, then FOCKLAB_CALIBRATION, then the checked-in file.
fn load_calibration(explicit: Option<&Path>) -> Result<Calibration, Failure> {
    let path = explicit
        .map(Path::to_path_buf)
        .unwrap_or_else(calibration::default_path);
    Calibration::load(&path).map_err(|e| {
        Failure::Config(format!(
            "cannot load calibration from {}: {e} (run `focklab calibrate` to create it)",
            path.display()
        ))
    })
}

fn parse_multiplier(cfg: &RunConfig) -> Result<MultiplierSpec, Failure> {
    let id = cfg
        .multiplier
        .as_deref()
        .ok_or_else(|| config_error("multiplier", "this command needs --multiplier"))?;
    let m = MultiplierSpec::parse(id)?;
    m.check_dim(cfg.n)?;
    Ok(m)
}

fn verify(args: &RunArgs, tolerances: std::collections::BTreeMap<String, f64>) -> CmdResult {
    let cfg = RunConfig::from_args(args, &[32], tolerances)?;
    let truncation = cfg.single_truncation()?;
    let cal = load_calibration(args.calibration.as_deref())?;
    let mut suite = SuiteConfig::new(cal);
    suite.dim = cfg.n;
    suite.truncation = truncation;
    suite.s = cfg.s;
    suite.quad_order = cfg.quad_order;
    suite.seed = cfg.seed;
    suite.tolerances = cfg.tolerances.clone();
    suite.validate()?;

    let start = Instant::now();
    let records = run_suite(&suite)?;
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let (passed, failed, inconclusive) = (count(Status::Pass), count(Status::Fail), count(Status::Inconclusive));
    for r in records.iter().filter(|r| r.status != Status::Pass) {
        log::warn!("{} {:?}: {}", r.id, r.status, r.measured);
    }

    let text = match cfg.format {
        Format::Json => json_text(json!({
            "schema": SCHEMA,
            "command": "verify",
            "config": cfg,
            "records": records,
            "summary": {
                "checks": records.len(),
                "passed": passed,
                "failed": failed,
                "inconclusive": inconclusive,
                "wall_time": start.elapsed().as_secs_f64(),
            },
        })),
        Format::Csv => {
            let mut t = Table::new(&["id", "module", "status", "tolerance", "wall_time", "inputs", "measured"]);
            for r in &records {
                t.push(vec![
                    r.id.clone(),
                    r.module.clone(),
                    cell(&serde_json::to_value(r.status).unwrap_or(Value::Null)),
                    cell(&r.tolerance),
                    num(r.wall_time),
                    cell(&r.inputs),
                    cell(&r.measured),
                ]);
            }
            t.text()
        }
    };
    write_output(cfg.out.as_deref(), &text)?;
    Ok(if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

/// `start:end:count`, inclusive, evenly spaced.
fn parse_range(field: &str, range: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = range.split(':').collect();
    let bad = || config_error(field, format!("expected start:end:count, got {range:?}"));
    let [a, b, k] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    if k == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if k == 1 {
        return Ok(vec![a]);
    }
    Ok((0..k).map(|i| a + (b - a) * i as f64 / (k - 1) as f64).collect())
}

fn symbol(args: &RunArgs, re: &str, im: &str) -> CmdResult {
    let cfg = RunConfig::from_args(args, &[], Default::default())?;
    let m = parse_multiplier(&cfg)?;
    let res = parse_range("re", re)?;
    let ims = parse_range("im", im)?;
    let phi = symbol_from_multiplier(&m, cfg.n)?;
    let points: Vec<C64> = res
        .iter()
        .flat_map(|&x| ims.iter().map(move |&y| C64::new(x, y)))
        .collect();
    // in n > 1 dimensions the point z stands for (z, …, z)
    let values: Vec<C64> = points.iter().map(|&z| phi.eval(&vec![z; cfg.n])).collect();

    let text = match cfg.format {
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .zip(&values)
                .map(|(z, p)| json!({ "re_z": z.re, "im_z": z.im, "re_phi": p.re, "im_phi": p.im }))
                .collect();
            json_text(json!({
                "schema": SCHEMA,
                "command": "symbol",
                "config": cfg,
                "multiplier": m.id(),
                "note": "in n > 1 dimensions each row is evaluated at (z, ..., z)",
                "rows": rows,
            }))
        }
        Format::Csv => {
            let mut t = Table::new(&["re_z", "im_z", "re_phi", "im_phi"]);
            for (z, p) in points.iter().zip(&values) {
                t.push(vec![num(z.re), num(z.im), num(p.re), num(p.im)]);
            }
            t.text()
        }
    };
    write_output(cfg.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn probe(args: &RunArgs, classical: bool) -> CmdResult {
    let cfg = RunConfig::from_args(args, &[8, 16, 32, 64], Default::default())?;
    if cfg.truncations.len() < 2 || cfg.truncations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config_error(
            "N",
            format!(
                "needs a strictly increasing list of at least two values, got {:?}",
                cfg.truncations
            ),
        )
        .into());
    }
    if classical && cfg.n != 1 {
        return Err(config_error("classical", "the classical probe is one-dimensional").into());
    }
    let m = parse_multiplier(&cfg)?;
    let t = load_calibration(args.calibration.as_deref())?.thresholds;
    let mut reports = vec![boundedness_probe(&m, cfg.n, cfg.s, &cfg.truncations, t)?];
    if classical {
        reports.push(classical_sobolev_probe(&m, cfg.s, &cfg.truncations, t)?);
    }

    let text = match cfg.format {
        Format::Json => json_text(json!({
            "schema": SCHEMA,
            "command": "probe",
            "config": cfg,
            "thresholds": { "growth_G": t.growth, "stable_S": t.stable },
            "note": "classifications are numerical evidence, not proofs",
            "reports": reports,
        })),
        Format::Csv => {
            let mut tb = Table::new(&[
                "multiplier",
                "side",
                "s",
                "N",
                "norm",
                "last_over_first",
                "max_over_min",
                "class",
            ]);
            for r in &reports {
                let side = cell(&serde_json::to_value(r.side).unwrap_or(Value::Null));
                for (n, v) in r.truncations.iter().zip(&r.norms) {
                    tb.push(vec![
                        r.multiplier.clone(),
                        side.clone(),
                        num(r.s),
                        n.to_string(),
                        num(*v),
                        num(r.last_over_first),
                        num(r.max_over_min),
                        r.class.name().to_string(),
                    ]);
                }
            }
            tb.text()
        }
    };
    for r in &reports {
        for w in &r.warnings {
            log::warn!("{w}");
        }
    }
    write_output(cfg.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn export(args: &RunArgs, kind: MatrixKind, a: &[f64], a_im: &[f64], encoding: Encoding) -> CmdResult {
    let cfg = RunConfig::from_args(args, &[16], Default::default())?;
    let truncation = cfg.single_truncation()?;
    let n = cfg.n;
    let shift = |need_real: bool| -> Result<Vec<C64>, ConfigError> {
        if a.len() != n {
            return Err(config_error("a", format!("needs {n} component(s), got {}", a.len())));
        }
        if need_real && !a_im.is_empty() {
            return Err(config_error("a-im", "translations take real shifts only"));
        }
        if !a_im.is_empty() && a_im.len() != n {
            return Err(config_error(
                "a-im",
                format!("needs {n} component(s), got {}", a_im.len()),
            ));
        }
        Ok((0..n)
            .map(|j| C64::new(a[j], a_im.get(j).copied().unwrap_or(0.0)))
            .collect())
    };
    let matrix: OperatorMatrix = match kind {
        MatrixKind::Identity => OperatorMatrix::identity(n, truncation, Basis::BargmannH)?,
        MatrixKind::Translation => {
            let re: Vec<f64> = shift(true)?.iter().map(|z| z.re).collect();
            translation_matrix(&re, truncation, Convention::BargmannH)?
        }
        MatrixKind::Weyl => weyl_matrix(&shift(false)?, truncation)?,
        MatrixKind::Multiplier => multiplier_matrix(&parse_multiplier(&cfg)?, n, truncation)?,
        MatrixKind::Conjugated => conjugated_multiplier_matrix(&parse_multiplier(&cfg)?, n, truncation)?,
        MatrixKind::SPhi => {
            let m = parse_multiplier(&cfg)?;
            let default_q = if n == 1 {
                DIRECT_SPHI_ORDER.max(truncation as usize + 16)
            } else {
                truncation as usize + 8
            };
            let grid = gauss_hermite(cfg.quad_order.unwrap_or(default_q), 1.0, 2 * n)?;
            s_phi_matrix(&symbol_from_multiplier(&m, n)?, truncation, &grid)?
        }
    };
    let matrix = matrix.with_smoothness(cfg.s, cfg.s);
    match encoding {
        Encoding::Binary => match &cfg.out {
            Some(p) => matrix.write_binary(p)?,
            None => {
                return Err(config_error("out", "binary encoding needs an output file").into());
            }
        },
        Encoding::Csv => {
            let mut buf = Vec::new();
            matrix.write_csv(&mut buf).map_err(|e| Failure::Run(e.to_string()))?;
            write_output(cfg.out.as_deref(), &String::from_utf8_lossy(&buf))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn calibrate(out: Option<PathBuf>, seed: u64, margin: f64) -> CmdResult {
    if !(margin >= 1.0 && margin.is_finite()) {
        return Err(config_error("margin", format!("must be finite and ≥ 1, got {margin}")).into());
    }
    let path = out.unwrap_or_else(calibration::default_path);
    let run = run_calibration(seed, margin)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Run(format!("i/o error on {}: {e}", dir.display())))?;
    }
    run.calibration.save(&path, &run.provenance)?;
    eprintln!("focklab: wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}
