//! Growth probes: do truncated multiplier norms settle or keep rising as the
//! truncation grows? The classification is numerical evidence, not a proof.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::multiplier::MultiplierSpec;
use crate::norm::{operator_norm, spectral_norm, PowerOptions};
use crate::zhu::conjugated_multiplier_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthClass {
    Stable,
    Growing,
    Inconclusive,
}

impl GrowthClass {
    pub fn name(self) -> &'static str {
        match self {
            GrowthClass::Stable => "stable",
            GrowthClass::Growing => "growing",
            GrowthClass::Inconclusive => "inconclusive",
        }
    }
}

/// Ratio rule: growing if last/first > `growth`; otherwise stable if
/// max/min < `stable`; otherwise inconclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub growth: f64,
    pub stable: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeSide {
    Hermite,
    Classical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub multiplier: String,
    pub side: ProbeSide,
    pub s: f64,
    pub truncations: Vec<u32>,
    pub norms: Vec<f64>,
    pub last_over_first: f64,
    pub max_over_min: f64,
    pub class: GrowthClass,
    pub warnings: Vec<String>,
}

pub fn classify(norms: &[f64], t: Thresholds) -> (f64, f64, GrowthClass) {
    let first = norms[0];
    let last = norms[norms.len() - 1];
    let max = norms.iter().copied().fold(f64::MIN, f64::max);
    let min = norms.iter().copied().fold(f64::MAX, f64::min);
    let growth = last / first;
    let spread = max / min;
    let class = if growth > t.growth {
        GrowthClass::Growing
    } else if spread < t.stable {
        GrowthClass::Stable
    } else {
        GrowthClass::Inconclusive
    };
    (growth, spread, class)
}

fn check_list(ns: &[u32]) -> Result<()> {
    if ns.len() < 2 {
        return Err(invalid("N", "a probe needs at least two truncations"));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("N", format!("list must be strictly increasing, got {ns:?}")));
    }
    Ok(())
}

fn report(
    m: &MultiplierSpec,
    side: ProbeSide,
    s: f64,
    ns: &[u32],
    norms: Vec<f64>,
    t: Thresholds,
    warnings: Vec<String>,
) -> GrowthReport {
    let (last_over_first, max_over_min, class) = classify(&norms, t);
    GrowthReport {
        multiplier: m.id(),
        side,
        s,
        truncations: ns.to_vec(),
        norms,
        last_over_first,
        max_over_min,
        class,
        warnings,
    }
}

fn zero_norm_guard(norms: &[f64]) -> Result<()> {
    if norms.iter().any(|v| !(*v > 0.0)) {
        return Err(invalid("multiplier", "a truncated norm vanished; ratios are undefined"));
    }
    Ok(())
}

/// ‖𝓑𝓕⁻¹M_m𝓕𝓑⁻¹‖ on F^{s,2} for each truncation in `ns`.
pub fn boundedness_probe(m: &MultiplierSpec, dim: usize, s: f64, ns: &[u32], t: Thresholds) -> Result<GrowthReport> {
    check_list(ns)?;
    let norms: Vec<f64> = ns
        .par_iter()
        .map(|&n| Ok(operator_norm(&conjugated_multiplier_matrix(m, dim, n)?, s)?.value))
        .collect::<Result<_>>()?;
    zero_norm_guard(&norms)?;
    Ok(report(m, ProbeSide::Hermite, s, ns, norms, t, Vec::new()))
}

/// Layout of the periodized-box discretization for a box parameter N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxLayout {
    /// Box [-L/2, L/2) with L = N.
    pub length: f64,
    /// Trigonometric modes e^{2πikx/L}, |k| ≤ K = 2N.
    pub max_mode: usize,
    /// Samples of m used for its Fourier coefficients.
    pub samples: usize,
}

impl BoxLayout {
    pub fn for_truncation(n: u32) -> Self {
        let max_mode = 2 * n as usize;
        Self {
            length: n as f64,
            max_mode,
            samples: (16 * (2 * max_mode + 1)).next_power_of_two(),
        }
    }
}

/// Fourier coefficients m̂_j = (1/L)∫ m(x) e^{-2πijx/L} dx for |j| ≤ 2K by FFT
/// of midpoint samples, plus the share of |m̂|² in the top half of the sample band.
fn box_coefficients(m: &MultiplierSpec, layout: BoxLayout) -> (Vec<C64>, f64) {
    let p = layout.samples;
    let l = layout.length;
    let h = l / p as f64;
    let mut buf: Vec<C64> = (0..p).map(|i| m.eval(&[-0.5 * l + (i as f64 + 0.5) * h])).collect();
    FftPlanner::new().plan_fft_forward(p).process(&mut buf);
    // shift from the sample origin -L/2 + h/2 back to x = 0
    let coeff = |j: i64| -> C64 {
        let idx = j.rem_euclid(p as i64) as usize;
        let w = 2.0 * PI * j as f64 / l;
        buf[idx] / p as f64 * C64::from_polar(1.0, -w * (-0.5 * l + 0.5 * h))
    };
    let kk = 2 * layout.max_mode as i64;
    let coeffs = (-kk..=kk).map(coeff).collect();
    let total: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
    let high: f64 = (0..p)
        .filter(|&i| {
            let j = if i <= p / 2 { i } else { p - i };
            j > p / 4
        })
        .map(|i| buf[i].norm_sqr())
        .sum();
    (coeffs, if total > 0.0 { high / total } else { 0.0 })
}

/// Share of the sampled energy above half the Nyquist band that triggers a warning.
pub const ALIASING_WARN: f64 = 1e-8;

/// ‖M_m‖ on the classical W^{s,2} with weights (1 + ξ²)^{s/2}, ξ = ω/2, over
/// trigonometric polynomials on the periodized box of length N.
pub fn classical_sobolev_probe(m: &MultiplierSpec, s: f64, ns: &[u32], t: Thresholds) -> Result<GrowthReport> {
    check_list(ns)?;
    m.check_dim(1)?;
    if !(s >= 0.0) {
        return Err(invalid("s", "must be ≥ 0"));
    }
    let rows: Vec<(f64, Option<String>)> = ns
        .par_iter()
        .map(|&n| {
            let layout = BoxLayout::for_truncation(n);
            let (c, high) = box_coefficients(m, layout);
            let k = layout.max_mode as i64;
            let size = 2 * k as usize + 1;
            let weight = |i: usize| {
                let omega = 2.0 * PI * (i as i64 - k) as f64 / layout.length;
                (1.0 + 0.25 * omega * omega).powf(s / 2.0)
            };
            let b = DMatrix::from_fn(size, size, |a, bb| {
                // (M)_{ab} = m̂_{a-b}; index a-b+2K in the coefficient list
                let j = (a as i64 - bb as i64 + 2 * k) as usize;
                c[j] * (weight(a) / weight(bb))
            });
            let norm = spectral_norm(&b, PowerOptions::default())?.value;
            let warn = (high > ALIASING_WARN).then(|| {
                format!("N = {n}: {high:.2e} of the sampled energy of m lies near the Nyquist limit; coefficients may alias")
            });
            if let Some(w) = &warn {
                log::warn!("{w}");
            }
            Ok((norm, warn))
        })
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = rows.iter().map(|r| r.0).collect();
    zero_norm_guard(&norms)?;
    let warnings = rows.into_iter().filter_map(|r| r.1).collect();
    Ok(report(m, ProbeSide::Classical, s, ns, norms, t, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: Thresholds = Thresholds {
        growth: 1.25,
        stable: 1.1,
    };

    #[test]
    fn classification_rule() {
        assert_eq!(classify(&[1.0, 1.0, 1.0], T).2, GrowthClass::Stable);
        assert_eq!(classify(&[1.0, 1.5, 2.0], T).2, GrowthClass::Growing);
        assert_eq!(classify(&[1.0, 1.2, 1.1], T).2, GrowthClass::Inconclusive);
        let (g, s, _) = classify(&[2.0, 1.0, 3.0], T);
        assert_eq!((g, s), (1.5, 3.0));
    }

    #[test]
    fn constant_is_stable_on_both_sides() {
        let m = MultiplierSpec::constant(C64::new(1.0, 0.0));
        let r = boundedness_probe(&m, 1, 2.0, &[8, 16], T).unwrap();
        assert_eq!(r.class, GrowthClass::Stable);
        assert!(r.norms.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let c = classical_sobolev_probe(&m, 1.0, &[8, 16], T).unwrap();
        assert!(c.norms.iter().all(|v| (v - 1.0).abs() < 1e-12), "{:?}", c.norms);
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn scaling_leaves_ratios_unchanged() {
        let m = MultiplierSpec::signum();
        let a = boundedness_probe(&m, 1, 1.0, &[8, 16], T).unwrap();
        let b = boundedness_probe(&m.scaled(C64::new(0.0, -3.0)), 1, 1.0, &[8, 16], T).unwrap();
        assert!((a.last_over_first - b.last_over_first).abs() < 1e-9);
        assert_eq!(a.class, b.class);
        assert!((b.norms[0] / a.norms[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_lists() {
        let m = MultiplierSpec::bump();
        assert!(boundedness_probe(&m, 1, 1.0, &[16, 8], T).is_err());
        assert!(classical_sobolev_probe(&m, 1.0, &[8], T).is_err());
    }

    #[test]
    fn box_coefficients_of_a_mode() {
        // m(x) = e^{2πi·3x/L} has a single coefficient at j = 3
        let layout = BoxLayout::for_truncation(8);
        let l = layout.length;
        let m = MultiplierSpec::custom("mode", Some(1), true, Some(1.0), move |x| {
            C64::from_polar(1.0, 2.0 * PI * 3.0 * x[0] / l)
        });
        let (c, high) = box_coefficients(&m, layout);
        let k = 2 * layout.max_mode;
        for (i, v) in c.iter().enumerate() {
            let want = if i == k + 3 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-12, "j={}", i as i64 - k as i64);
        }
        assert!(high < 1e-20);
    }
}
