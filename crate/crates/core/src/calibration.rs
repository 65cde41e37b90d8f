//! Empirical constants fixed by an oracle run and checked into the repository.
//!
//! Every threshold and bound used by the probes and the verification suite is
//! read from here; none is hard-coded elsewhere.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bump::{default_lattice, localization_norm, LocalizationOptions, PartitionBump};
use crate::error::{FockError, Result};
use crate::multiplier::MultiplierSpec;
use crate::probe::{boundedness_probe, classical_sobolev_probe, GrowthReport, Thresholds};
use crate::quadrature::gauss_hermite;
use crate::spaces::{ladder_norm, potential_bound_probe, sobolev_norm, weighted_fock_norm};
use crate::spectral::{Basis, SpectralVector};
use crate::transforms::weyl_matrix;

/// Environment variable that overrides the calibration file location.
pub const CALIBRATION_ENV: &str = "FOCKLAB_CALIBRATION";

pub const SCHEMA: &str = "focklab-calibration/1";

/// Seed of the calibration test set.
pub const DEFAULT_SEED: u64 = 0x464f_434b;

/// Observed extremes are widened by this factor (divided for lower bounds).
pub const DEFAULT_MARGIN: f64 = 1.25;

/// Truncations of the probe runs.
pub const PROBE_TRUNCATIONS: [u32; 4] = [8, 16, 32, 64];

/// Size of the random test set behind every ratio bound.
pub const TEST_SET_SIZE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn from_observed(values: &[f64], margin: f64) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            lo: lo / margin,
            hi: hi * margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    /// localization_norm / sobolev_norm at s = 0.
    pub s0: Interval,
    /// The same at s = 1.
    pub s1: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub s: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub schema: String,
    pub seed: u64,
    pub margin: f64,
    pub thresholds: Thresholds,
    pub localization: Localization,
    /// ‖W_a v‖_{F^{s,2}} ≤ C (1 + |a|^s) ‖v‖_{F^{s,2}}.
    pub weyl: Bound,
    /// ‖ |x|^{2s} H^{-s} v ‖ ≤ M ‖v‖.
    pub potential: Bound,
    /// ladder_norm(v, 1) / sobolev_norm(v, 1).
    pub ladder_k1: Interval,
    /// ladder_norm(v, 2) / sobolev_norm(v, 2).
    pub ladder_k2: Interval,
    /// weighted_fock_norm(v, 1) / sobolev_norm(v, 1).
    pub weighted_fock_s1: Interval,
}

/// Location of the checked-in calibration file, unless overridden by
/// [`CALIBRATION_ENV`].
pub fn default_path() -> PathBuf {
    match std::env::var_os(CALIBRATION_ENV) {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../calibration/focklab-calibration.toml"),
    }
}

impl Calibration {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| FockError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text).map_err(|e| FockError::Calibration(format!("{}: {e}", path.display())))
    }

    pub fn load_default() -> Result<Self> {
        Self::load(&default_path())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| FockError::Calibration(e.to_string()))?;
        if c.schema != SCHEMA {
            return Err(FockError::Calibration(format!(
                "schema {:?}, expected {SCHEMA:?}",
                c.schema
            )));
        }
        if !(c.thresholds.growth > 1.0 && c.thresholds.stable > 1.0) {
            return Err(FockError::Calibration(
                "growth and stable thresholds must exceed 1".into(),
            ));
        }
        Ok(c)
    }

    /// TOML body preceded by `# ` comment lines.
    pub fn to_toml(&self, comments: &[String]) -> Result<String> {
        let body = toml::to_string(self).map_err(|e| FockError::Calibration(e.to_string()))?;
        let mut out = String::new();
        for c in comments {
            for line in c.lines() {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push('\n');
        out.push_str(&body);
        Ok(out)
    }

    pub fn save(&self, path: &Path, comments: &[String]) -> Result<()> {
        let text = self.to_toml(comments)?;
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir).map_err(|e| FockError::Io {
                    path: dir.display().to_string(),
                    message: e.to_string(),
                })?;
            }
        }
        std::fs::write(path, text).map_err(|e| FockError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

/// Output of [`run_calibration`]: the constants plus what they were derived from.
#[derive(Debug, Clone)]
pub struct CalibrationRun {
    pub calibration: Calibration,
    pub stable_group: Vec<GrowthReport>,
    pub growing_group: Vec<GrowthReport>,
    pub provenance: Vec<String>,
}

fn geometric_midpoint(a: f64, b: f64) -> f64 {
    (a * b).sqrt()
}

/// Localization ratios for one set of vectors.
pub fn localization_ratios(vs: &[SpectralVector], s: f64) -> Result<Vec<f64>> {
    let bump = PartitionBump::new(1)?;
    vs.par_iter()
        .map(|v| {
            let n = v.truncation();
            let r = localization_norm(v, s, &bump, default_lattice(n), LocalizationOptions::for_truncation(n))?;
            Ok(r.norm / sobolev_norm(v, s)?)
        })
        .collect()
}

/// max over vectors and shifts of ‖W_a v‖_s / ((1 + |a|^s) ‖v‖_s) at truncation N.
pub fn weyl_ratios(vs: &[SpectralVector], shifts: &[C64], s: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for &a in shifts {
        let n = vs[0].truncation();
        let w = weyl_matrix(&[a], n)?;
        for v in vs {
            let f = v.clone().retag(Basis::Fock);
            let wv = w.apply(&f)?;
            out.push(sobolev_norm(&wv, s)? / ((1.0 + a.norm().powf(s)) * sobolev_norm(&f, s)?));
        }
    }
    Ok(out)
}

pub const WEYL_SHIFTS: [C64; 6] = [
    C64::new(0.25, 0.0),
    C64::new(0.5, 0.5),
    C64::new(1.0, 0.0),
    C64::new(0.0, 1.5),
    C64::new(-2.0, 0.0),
    C64::new(1.5, -1.5),
];

/// The mandatory oracle run. Deterministic for a given seed.
pub fn run_calibration(seed: u64, margin: f64) -> Result<CalibrationRun> {
    let provisional = Thresholds {
        growth: f64::INFINITY,
        stable: f64::INFINITY,
    };
    let ns = PROBE_TRUNCATIONS;
    let constant = MultiplierSpec::constant(C64::new(1.0, 0.0));
    let signum = MultiplierSpec::signum();
    let chirp = MultiplierSpec::chirp43();
    let bump = MultiplierSpec::bump();
    let stable_group = vec![
        boundedness_probe(&constant, 1, 1.0, &ns, provisional)?,
        boundedness_probe(&chirp, 1, 1.0, &ns, provisional)?,
        classical_sobolev_probe(&constant, 1.0, &ns, provisional)?,
        classical_sobolev_probe(&bump, 1.0, &ns, provisional)?,
    ];
    let growing_group = vec![
        boundedness_probe(&signum, 1, 1.0, &ns, provisional)?,
        classical_sobolev_probe(&chirp, 1.0, &ns, provisional)?,
    ];
    let max_of = |g: &[GrowthReport], f: fn(&GrowthReport) -> f64| g.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let min_of = |g: &[GrowthReport], f: fn(&GrowthReport) -> f64| g.iter().map(f).fold(f64::INFINITY, f64::min);
    let stable_growth = max_of(&stable_group, |r| r.last_over_first);
    let growing_growth = min_of(&growing_group, |r| r.last_over_first);
    let stable_spread = max_of(&stable_group, |r| r.max_over_min);
    let growing_spread = min_of(&growing_group, |r| r.max_over_min);
    if !(stable_growth < growing_growth && stable_spread < growing_spread) {
        return Err(FockError::Calibration(format!(
            "stable and growing groups overlap: last/first {stable_growth} vs {growing_growth}, max/min {stable_spread} vs {growing_spread}"
        )));
    }
    let thresholds = Thresholds {
        growth: geometric_midpoint(stable_growth, growing_growth),
        stable: geometric_midpoint(stable_spread, growing_spread),
    };

    let mut loc0 = Vec::new();
    let mut loc1 = Vec::new();
    let mut lad1 = Vec::new();
    let mut lad2 = Vec::new();
    let mut pot = Vec::new();
    let mut weyl = Vec::new();
    let mut fock = Vec::new();
    for (k, &n) in ns.iter().enumerate() {
        let vs = SpectralVector::random_set(
            seed.wrapping_add(k as u64),
            TEST_SET_SIZE,
            1,
            n,
            n / 2,
            Basis::BargmannH,
        )?;
        loc0.extend(localization_ratios(&vs, 0.0)?);
        loc1.extend(localization_ratios(&vs, 1.0)?);
        for v in &vs {
            lad1.push(ladder_norm(v, 1)? / sobolev_norm(v, 1.0)?);
            lad2.push(ladder_norm(v, 2)? / sobolev_norm(v, 2.0)?);
            pot.push(potential_bound_probe(v, 1.0)?);
        }
        weyl.extend(weyl_ratios(&vs, &WEYL_SHIFTS, 1.0)?);
        let grid = gauss_hermite(n as usize + 16, 1.0, 2)?;
        for v in &vs {
            let f = v.clone().retag(Basis::Fock);
            fock.push(weighted_fock_norm(&f, 1.0, &grid)? / sobolev_norm(&f, 1.0)?);
        }
    }
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let calibration = Calibration {
        schema: SCHEMA.to_string(),
        seed,
        margin,
        thresholds,
        localization: Localization {
            s0: Interval::from_observed(&loc0, margin),
            s1: Interval::from_observed(&loc1, margin),
        },
        weyl: Bound {
            s: 1.0,
            constant: max(&weyl) * margin,
        },
        potential: Bound {
            s: 1.0,
            constant: max(&pot) * margin,
        },
        ladder_k1: Interval::from_observed(&lad1, margin),
        ladder_k2: Interval::from_observed(&lad2, margin),
        weighted_fock_s1: Interval::from_observed(&fock, margin),
    };
    let mut provenance = vec![
        "Generated by `focklab calibrate`; do not edit by hand.".to_string(),
        format!("Seed {seed}, margin {margin}, truncations {ns:?}, {TEST_SET_SIZE} random BargmannH vectors per truncation with band N/2."),
        "Growth thresholds are geometric midpoints between the stable group {constant (Hermite, s=1), chirp43 (Hermite, s=1), constant (classical, s=1), bump (classical, s=1)} and the growing group {signum (Hermite, s=1), chirp43 (classical, s=1)}.".to_string(),
    ];
    for r in stable_group.iter().chain(&growing_group) {
        provenance.push(format!(
            "{:?} {} s={}: norms {:?}, last/first {:.6}, max/min {:.6}",
            r.side, r.multiplier, r.s, r.norms, r.last_over_first, r.max_over_min
        ));
    }
    provenance.push(
        "Ratio bounds are the observed extremes divided (lower) or multiplied (upper) by the margin.".to_string(),
    );
    Ok(CalibrationRun {
        calibration,
        stable_group,
        growing_group,
        provenance,
    })
}
