//! The symbol φ attached to a multiplier m,
//! φ(z) = (2/π)^{n/2} ∫ m(x) e^{-2(x - iz/2)·(x - iz/2)} dx, and its inverse.

use std::f64::consts::PI;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::multi_index::GradedBasis;
use crate::multiplier::MultiplierSpec;
use crate::quadrature::{gauss_hermite, LineRule, QuadratureGrid};
use crate::spectral::{basis_values, Basis, SpectralVector};
use crate::sum::ComplexSum;

/// Half-width of the Gauss–Legendre window used for non-smooth multipliers.
pub const LINE_RULE_HALF_WIDTH: f64 = 12.0;

/// Gauss–Hermite order per axis for multipliers on ℝ² and ℝ³.
pub fn default_symbol_order(dim: usize) -> usize {
    if dim == 2 {
        48
    } else {
        24
    }
}

/// Nodes x_i and coefficients c_i with φ(z) = Σ c_i e^{2i x_i·z + z·z/2}.
///
/// The Gaussian e^{-2|x|²} and the prefactor (2/π)^{n/2} are folded into c_i,
/// so m is only ever evaluated at real points.
#[derive(Debug, Clone)]
pub struct SymbolRule {
    dim: usize,
    nodes: Vec<f64>,
    coeffs: Vec<C64>,
    /// Largest |x_i| the rule reaches along an axis.
    reach: f64,
}

impl SymbolRule {
    /// One dimension uses composite Gauss–Legendre on [-12, 12], which also
    /// resolves the oscillation e^{2ixu} for real |u| up to about 40; higher
    /// dimensions use a tensor Gauss–Hermite rule of scale 2.
    pub fn for_multiplier(m: &MultiplierSpec, dim: usize) -> Result<Self> {
        m.check_dim(dim)?;
        let pref = (2.0 / PI).powf(dim as f64 / 2.0);
        if dim > 1 {
            let grid = gauss_hermite(default_symbol_order(dim), 2.0, dim)?;
            return Self::from_grid(m, &grid, pref);
        }
        let (panel, points) = if m.is_smooth() { (0.125, 16) } else { (0.0625, 20) };
        let rule = LineRule::composite_legendre(LINE_RULE_HALF_WIDTH, m.breakpoints(), panel, points)?;
        let coeffs = rule
            .nodes
            .iter()
            .zip(&rule.dx_weights)
            .map(|(&x, &w)| m.eval(&[x]) * (pref * w * (-2.0 * x * x).exp()))
            .collect();
        Ok(Self {
            dim: 1,
            nodes: rule.nodes,
            coeffs,
            reach: LINE_RULE_HALF_WIDTH,
        })
    }

    /// Uses the weights of a scale-2 Gauss–Hermite grid.
    pub fn from_grid(m: &MultiplierSpec, grid: &QuadratureGrid, prefactor: f64) -> Result<Self> {
        if (grid.scale() - 2.0).abs() > 1e-14 {
            return Err(crate::error::FockError::ScaleMismatch {
                grid: grid.scale(),
                expected: 2.0,
                convention: "symbol",
            });
        }
        let dim = grid.dim();
        let mut nodes = Vec::with_capacity(grid.len() * dim);
        let mut coeffs = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let x = grid.node(i);
            nodes.extend_from_slice(x);
            coeffs.push(m.eval(x) * (prefactor * grid.weight(i)));
        }
        let reach = grid.nodes_1d().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        Ok(Self {
            dim,
            nodes,
            coeffs,
            reach,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coeff(&self, i: usize) -> C64 {
        self.coeffs[i]
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    /// Σ c_i e^{2i x_i·ζ}, i.e. φ(ζ) e^{-ζ·ζ/2}.
    pub fn reduced(&self, zeta: &[C64]) -> C64 {
        let mut acc = ComplexSum::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let x = self.node(i);
            let e: C64 = x.iter().zip(zeta).map(|(a, z)| C64::new(0.0, 2.0 * a) * z).sum();
            acc.add(c * e.exp());
        }
        acc.value()
    }

    /// Whether the shifted Gaussian e^{-2|x + Im z/2|²} is still inside the rule.
    pub fn covers(&self, zeta: &[C64]) -> bool {
        zeta.iter().all(|z| 0.5 * z.im.abs() + 5.0 <= self.reach)
    }

    pub fn eval(&self, zeta: &[C64]) -> C64 {
        let zz: C64 = zeta.iter().map(|z| z * z).sum();
        self.reduced(zeta) * (0.5 * zz).exp()
    }
}

/// Where a symbol came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    FromMultiplier,
    Direct,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::FromMultiplier => "from-multiplier",
            Provenance::Direct => "direct",
        }
    }
}

type SymbolFn = Arc<dyn Fn(&[C64]) -> C64 + Send + Sync>;

/// A symbol φ on ℂⁿ with a pointwise evaluator and optionally its Fock projection.
#[derive(Clone)]
pub struct SymbolSpec {
    name: String,
    dim: usize,
    eval: SymbolFn,
    rule: Option<Arc<SymbolRule>>,
    fock: Option<SpectralVector>,
    provenance: Provenance,
    warned: Arc<AtomicBool>,
}

impl fmt::Debug for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("provenance", &self.provenance)
            .field("fock", &self.fock.as_ref().map(|v| v.truncation()))
            .finish()
    }
}

impl SymbolSpec {
    /// A symbol given directly by a closed form.
    pub fn direct<F>(name: &str, dim: usize, f: F) -> Self
    where
        F: Fn(&[C64]) -> C64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            dim,
            eval: Arc::new(f),
            rule: None,
            fock: None,
            provenance: Provenance::Direct,
            warned: Arc::new(AtomicBool::new(false)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The quadrature rule behind a multiplier-derived symbol.
    pub fn rule(&self) -> Option<&SymbolRule> {
        self.rule.as_deref()
    }

    pub fn fock(&self) -> Option<&SpectralVector> {
        self.fock.as_ref()
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        if let Some(rule) = &self.rule {
            if !rule.covers(z) && !self.warned.swap(true, Ordering::Relaxed) {
                log::warn!(
                    "symbol {}: |Im z| = {:.3} moves the Gaussian beyond the quadrature nodes; values may be inaccurate",
                    self.name,
                    z.iter().map(|w| w.im.abs()).fold(0.0, f64::max)
                );
            }
        }
        (self.eval)(z)
    }

    /// φ(z) e^{-z·z/2}; for multiplier-derived symbols this is evaluated
    /// without forming the growing factor e^{z·z/2}.
    pub fn reduced(&self, z: &[C64]) -> C64 {
        match &self.rule {
            Some(rule) => rule.reduced(z),
            None => {
                let zz: C64 = z.iter().map(|w| w * w).sum();
                self.eval(z) * (-0.5 * zz).exp()
            }
        }
    }

    /// Attaches c_α = ⟨φ, e_α⟩_{F²} computed on a 2n-dimensional scale-1 grid.
    pub fn with_fock_projection(mut self, truncation: u32, grid2n: &QuadratureGrid) -> Result<Self> {
        if grid2n.dim() != 2 * self.dim || (grid2n.scale() - 1.0).abs() > 1e-14 {
            return Err(invalid("grid2n", "must be a 2n-dimensional scale-1 grid"));
        }
        let basis = GradedBasis::new(self.dim, truncation)?;
        let norm = PI.powi(-(self.dim as i32));
        let vals: Vec<(C64, Vec<C64>)> = (0..grid2n.len())
            .into_par_iter()
            .map(|i| {
                let z = to_complex(grid2n.node(i));
                let e = basis_values(&basis, Basis::Fock, &z).expect("Fock basis values");
                (self.eval(&z) * (grid2n.weight(i) * norm), e)
            })
            .collect();
        let coeffs: Vec<C64> = (0..basis.len())
            .into_par_iter()
            .map(|a| {
                let mut acc = ComplexSum::new();
                for (f, e) in &vals {
                    acc.add(f * e[a].conj());
                }
                acc.value()
            })
            .collect();
        self.fock = Some(SpectralVector::from_coeffs(basis, Basis::Fock, coeffs)?);
        Ok(self)
    }

    /// Largest |φ(z) - Σ c_α e_α(z)| over the points; `None` without a projection.
    pub fn projection_mismatch(&self, points: &[Vec<C64>]) -> Result<Option<f64>> {
        let Some(v) = &self.fock else { return Ok(None) };
        let mut worst = 0.0f64;
        for z in points {
            worst = worst.max((self.eval(z) - crate::spectral::synthesize(v, z)?).norm());
        }
        Ok(Some(worst))
    }
}

/// Maps (Re z₁, Im z₁, …) to (z₁, …).
pub fn to_complex(p: &[f64]) -> Vec<C64> {
    p.chunks(2).map(|c| C64::new(c[0], c[1])).collect()
}

/// φ(z) = (2/π)^{n/2} ∫ m(x) e^{-2x·x + 2ix·z + z·z/2} dx.
pub fn symbol_from_multiplier(m: &MultiplierSpec, dim: usize) -> Result<SymbolSpec> {
    let rule = Arc::new(SymbolRule::for_multiplier(m, dim)?);
    let r = rule.clone();
    Ok(SymbolSpec {
        name: m.id(),
        dim,
        eval: Arc::new(move |z| r.eval(z)),
        rule: Some(rule),
        fock: None,
        provenance: Provenance::FromMultiplier,
        warned: Arc::new(AtomicBool::new(false)),
    })
}

/// Default Gauss–Hermite order per axis for the inverse map.
pub fn default_inverse_order(dim: usize) -> usize {
    match dim {
        1 => 160,
        2 => 32,
        _ => 16,
    }
}

/// A multiplier recovered from a symbol on the real slice.
#[derive(Debug, Clone)]
pub struct RecoveredMultiplier {
    pub multiplier: MultiplierSpec,
    /// C′, fixed by requiring the symbol 1 to give the multiplier 1.
    pub normalization: f64,
    /// Radius |x| within which rounding noise amplified by e^{2|x|²} stays below `tolerance`.
    pub valid_radius: f64,
    pub tolerance: f64,
}

impl RecoveredMultiplier {
    pub fn eval(&self, x: &[f64]) -> C64 {
        self.multiplier.eval(x)
    }
}

/// m(x) = C′ e^{2|x|²} 𝓕[u ↦ φ(u) e^{-|u|²/2}](x), with 𝓕 in the
/// π^{-n/2} ∫ e^{-2ix·u} normalization and C′ calibrated on φ ≡ 1.
pub fn multiplier_from_symbol(phi: &SymbolSpec, tolerance: f64) -> Result<RecoveredMultiplier> {
    let dim = phi.dim();
    let grid = gauss_hermite(default_inverse_order(dim), 0.5, dim)?;
    let fnorm = PI.powf(-(dim as f64) / 2.0);
    let nodes: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.node(i).to_vec()).collect();
    let sampled: Vec<C64> = nodes
        .par_iter()
        .zip(grid.dx_weights().par_iter())
        .map(|(u, &w)| {
            let uc: Vec<C64> = u.iter().map(|&t| C64::new(t, 0.0)).collect();
            phi.reduced(&uc) * (w * fnorm)
        })
        .collect();
    // the same sum for φ ≡ 1
    let one = crate::sum::sum_f64(
        nodes
            .iter()
            .zip(grid.dx_weights())
            .map(|(u, w)| w * fnorm * (-0.5 * u.iter().map(|t| t * t).sum::<f64>()).exp()),
    );
    let normalization = 1.0 / one;
    let mass = crate::sum::sum_f64(sampled.iter().map(|c| c.norm())) * normalization;
    // rounding in a sum of `len` terms of total size `mass`
    let noise = mass * f64::EPSILON * (grid.len() as f64).sqrt() * 4.0;
    let valid_radius = if tolerance > noise {
        (0.5 * (tolerance / noise).ln()).sqrt()
    } else {
        0.0
    };
    let name = format!("inverse[{}]", phi.name());
    let m = MultiplierSpec::custom(&name, Some(dim), true, None, move |x| {
        let mut acc = ComplexSum::new();
        for (u, c) in nodes.iter().zip(&sampled) {
            let t: f64 = u.iter().zip(x).map(|(a, b)| a * b).sum();
            acc.add(c * C64::from_polar(1.0, -2.0 * t));
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        acc.value() * (normalization * (2.0 * r2).exp())
    });
    Ok(RecoveredMultiplier {
        multiplier: m,
        normalization,
        valid_radius,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_gk;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_symbol_is_one() {
        let phi = symbol_from_multiplier(&MultiplierSpec::constant(c(1.0, 0.0)), 1).unwrap();
        for z in [c(0.0, 0.0), c(1.0, -0.5), c(-2.0, 1.5)] {
            assert!((phi.eval(&[z]) - 1.0).norm() < 1e-13, "{z}");
        }
        let phi2 = symbol_from_multiplier(&MultiplierSpec::constant(c(1.0, 0.0)), 2).unwrap();
        assert!((phi2.eval(&[c(0.3, 0.1), c(-0.4, 0.2)]) - 1.0).norm() < 1e-13);
    }

    #[test]
    fn modulation_symbol_closed_form() {
        let cc = 0.7;
        let phi = symbol_from_multiplier(&MultiplierSpec::modulation(vec![cc]), 1).unwrap();
        for z in [c(0.0, 0.0), c(1.0, 0.0), c(0.4, -1.3), c(-1.5, 2.0)] {
            let want = (z * cc - cc * cc / 2.0).exp();
            assert!((phi.eval(&[z]) - want).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn bump_symbol_against_adaptive_integral() {
        let phi = symbol_from_multiplier(&MultiplierSpec::bump(), 1).unwrap();
        let z = c(0.8, -0.6);
        let pref = (2.0 / PI).sqrt();
        let f = |part: usize| {
            move |x: f64| {
                let e = (C64::new(-3.0 * x * x, 0.0) + C64::new(0.0, 2.0 * x) * z + z * z / 2.0).exp();
                pref * if part == 0 { e.re } else { e.im }
            }
        };
        let (re, _) = adaptive_gk(f(0), -12.0, 12.0, 1e-14, 1e-14).unwrap();
        let (im, _) = adaptive_gk(f(1), -12.0, 12.0, 1e-14, 1e-14).unwrap();
        assert!((phi.eval(&[z]) - c(re, im)).norm() < 1e-12);
        let closed = (2.0f64 / 3.0).sqrt() * (z * z / 6.0).exp();
        assert!((phi.eval(&[z]) - closed).norm() < 1e-12);
    }

    #[test]
    fn signum_symbol_is_odd() {
        let phi = symbol_from_multiplier(&MultiplierSpec::signum(), 1).unwrap();
        assert!(phi.eval(&[c(0.0, 0.0)]).norm() < 1e-15);
        let z = c(0.5, 0.2);
        assert!((phi.eval(&[z]) + phi.eval(&[-z])).norm() < 1e-13);
        // φ(x) for real x: erf(x/√2)·e^{x²/2}·e^{-x²/2} = erf(x/√2)... check at x = 1 through direct integration
        let (re, _) = adaptive_gk(
            |x| (2.0 / PI).sqrt() * (-2.0 * (x - 0.5f64).powi(2)).exp(),
            0.0,
            12.0,
            1e-15,
            1e-15,
        )
        .unwrap();
        // φ(iy) = (2/π)^{1/2} ∫ sign(x) e^{-2(x + y/2)²} dx; at y = -1 the centre is x = 1/2
        let (neg, _) = adaptive_gk(
            |x| (2.0 / PI).sqrt() * (-2.0 * (x - 0.5f64).powi(2)).exp(),
            -12.0,
            0.0,
            1e-15,
            1e-15,
        )
        .unwrap();
        assert!((phi.eval(&[c(0.0, -1.0)]) - (re - neg)).norm() < 1e-12);
    }

    #[test]
    fn fock_projection_matches_evaluator() {
        let g = gauss_hermite(40, 1.0, 2).unwrap();
        let phi = symbol_from_multiplier(&MultiplierSpec::modulation(vec![0.5]), 1)
            .unwrap()
            .with_fock_projection(16, &g)
            .unwrap();
        let pts = vec![vec![c(0.2, 0.1)], vec![c(-0.5, 0.4)]];
        assert!(phi.projection_mismatch(&pts).unwrap().unwrap() < 1e-9);
        // e^{cz - c²/2} = e^{-c²/2} Σ c^k √(k!) e_k / k!
        let v = phi.fock().unwrap();
        assert!((v.coeff_1d(1) - 0.5 * (-0.125f64).exp()).norm() < 1e-12);
    }

    #[test]
    fn inverse_of_constant_and_modulation() {
        let one = SymbolSpec::direct("one", 1, |_| c(1.0, 0.0));
        let r = multiplier_from_symbol(&one, 1e-6).unwrap();
        assert!((r.normalization - 2f64.sqrt().recip()).abs() < 1e-13);
        assert!(r.valid_radius > 2.0, "{}", r.valid_radius);
        for x in [-2.0, -0.7, 0.0, 1.3, 2.0] {
            assert!((r.eval(&[x]) - 1.0).norm() < 1e-6, "x={x}");
        }
        let m = MultiplierSpec::modulation(vec![0.7]);
        let phi = symbol_from_multiplier(&m, 1).unwrap();
        let back = multiplier_from_symbol(&phi, 1e-6).unwrap();
        for i in 0..=40 {
            let x = -2.0 + 0.1 * i as f64;
            assert!((back.eval(&[x]) - m.eval(&[x])).norm() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn inverse_of_bump_at_hermite_nodes() {
        let m = MultiplierSpec::bump();
        let back = multiplier_from_symbol(&symbol_from_multiplier(&m, 1).unwrap(), 1e-5).unwrap();
        let g = gauss_hermite(8, 2.0, 1).unwrap();
        for &x in g.nodes_1d() {
            assert!(x.abs() <= back.valid_radius);
            assert!((back.eval(&[x]) - m.eval(&[x])).norm() < 1e-5, "x={x}");
        }
    }
}
