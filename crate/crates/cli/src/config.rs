//! Shared run configuration and its validation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Options common to every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Dimension n ∈ {1, 2, 3}.
    #[arg(long = "n", default_value_t = 1)]
    pub n: usize,
    /// Truncation N; repeat (or separate by commas) for a list.
    #[arg(long = "N", value_delimiter = ',')]
    pub truncations: Vec<u32>,
    /// Smoothness order s ≥ 0.
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// Gauss–Hermite order per axis (at least N + 8).
    #[arg(long = "quad-order")]
    pub quad_order: Option<usize>,
    /// Multiplier id: constant(c), constant(re,im), modulation(c1,...), signum, chirp43, bump, sine, grid(path).
    #[arg(long)]
    pub multiplier: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Calibration file; overrides FOCKLAB_CALIBRATION and the checked-in default.
    #[arg(long)]
    pub calibration: Option<PathBuf>,
}

/// A validated [`RunArgs`] with subcommand defaults filled in.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n: usize,
    #[serde(rename = "N")]
    pub truncations: Vec<u32>,
    pub s: f64,
    pub quad_order: Option<usize>,
    pub multiplier: Option<String>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

/// A configuration problem, reported as `field: message` with exit status 2.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid configuration: {}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

impl RunConfig {
    pub fn from_args(
        a: &RunArgs,
        default_ns: &[u32],
        tolerances: BTreeMap<String, f64>,
    ) -> std::result::Result<Self, ConfigError> {
        let truncations = if a.truncations.is_empty() {
            default_ns.to_vec()
        } else {
            a.truncations.clone()
        };
        let cfg = Self {
            n: a.n,
            truncations,
            s: a.s,
            quad_order: a.quad_order,
            multiplier: a.multiplier.clone(),
            format: a.format,
            out: a.out.clone(),
            seed: a.seed,
            tolerances,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> std::result::Result<(), ConfigError> {
        if !(1..=3).contains(&self.n) {
            return Err(config_error("n", format!("must be 1, 2 or 3, got {}", self.n)));
        }
        if let Some(&bad) = self.truncations.iter().find(|&&n| n < 4) {
            return Err(config_error("N", format!("must be at least 4, got {bad}")));
        }
        if let (Some(q), Some(&max)) = (self.quad_order, self.truncations.iter().max()) {
            if q < max as usize + 8 {
                return Err(config_error(
                    "quad-order",
                    format!("must be at least N + 8 = {}, got {q}", max + 8),
                ));
            }
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(config_error("s", format!("must be finite and ≥ 0, got {}", self.s)));
        }
        Ok(())
    }

    /// The single truncation of a subcommand that takes one.
    pub fn single_truncation(&self) -> std::result::Result<u32, ConfigError> {
        match self.truncations.as_slice() {
            [n] => Ok(*n),
            _ => Err(config_error(
                "N",
                format!("this command takes one truncation, got {:?}", self.truncations),
            )),
        }
    }
}

/// Splits `--tol.<check-id>=<value>` and `--tol.<check-id> <value>` out of the
/// argument list, since clap cannot declare flags with open-ended names.
pub fn extract_tolerances(
    args: Vec<OsString>,
) -> std::result::Result<(Vec<OsString>, BTreeMap<String, f64>), ConfigError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut tols = BTreeMap::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(s) = a.to_str().and_then(|s| s.strip_prefix("--tol.")).map(str::to_string) else {
            rest.push(a);
            continue;
        };
        let (id, value) = match s.split_once('=') {
            Some((id, v)) => (id.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .and_then(|v| v.into_string().ok())
                    .ok_or_else(|| config_error(&format!("tol.{s}"), "missing value"))?;
                (s, v)
            }
        };
        if id.is_empty() {
            return Err(config_error("tol", "missing check id after --tol."));
        }
        let v: f64 = value
            .parse()
            .map_err(|_| config_error(&format!("tol.{id}"), format!("not a number: {value:?}")))?;
        tols.insert(id, v);
    }
    Ok((rest, tols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn tolerance_flags_are_extracted() {
        let (rest, t) = extract_tolerances(os(&[
            "focklab",
            "verify",
            "--tol.zhu.probes=0.5",
            "--N",
            "8",
            "--tol.a.b",
            "1e-3",
        ]))
        .unwrap();
        assert_eq!(rest, os(&["focklab", "verify", "--N", "8"]));
        assert_eq!(t["zhu.probes"], 0.5);
        assert_eq!(t["a.b"], 1e-3);
        assert!(extract_tolerances(os(&["x", "--tol.a=abc"])).is_err());
        assert!(extract_tolerances(os(&["x", "--tol.a"])).is_err());
    }
}
