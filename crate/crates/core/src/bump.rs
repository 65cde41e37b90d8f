//! Smooth lattice partition η and the localization norm built from it.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, FockError, Result};
use crate::hermite::hermite_functions_real;
use crate::multi_index::GradedBasis;
use crate::quadrature::LineRule;
use crate::spaces::sobolev_norm;
use crate::spectral::{synthesize_real, SpectralVector};
use crate::sum::sum_f64;

/// η(x) = Π_j (1_{[-3/2, 3/2]} * ρ)(x_j) with a C^∞ mollifier ρ supported in [-1/2, 1/2].
///
/// The convolution has the closed form Φ(t + 3/2) - Φ(t - 3/2) where Φ is the
/// smooth step whose derivative is ρ, so η = 1 on |x|_∞ ≤ 1, η = 0 outside
/// |x|_∞ ≤ 2, and Σ_{m∈ℤⁿ} η(x + m) = 3ⁿ identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionBump {
    dim: usize,
}

impl PartitionBump {
    pub const PLATEAU: f64 = 1.0;
    pub const SUPPORT: f64 = 2.0;
    pub const MOLLIFIER_RADIUS: f64 = 0.5;

    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > crate::multi_index::MAX_DIM {
            return Err(invalid("dim", format!("unsupported dimension {dim}")));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Σ_m η_m.
    pub fn c0(&self) -> f64 {
        3f64.powi(self.dim as i32)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&t| bump_1d(t)).product()
    }

    /// η_m(x) = η(x + m).
    pub fn translate(&self, m: &[i64], x: &[f64]) -> f64 {
        x.iter().zip(m).map(|(&t, &k)| bump_1d(t + k as f64)).product()
    }

    /// Σ_m η_m(x) over all lattice points whose translate can be non-zero at x.
    pub fn partition_sum(&self, x: &[f64]) -> f64 {
        self.lattice_sum(x, |v| v)
    }

    /// Σ_m η_m(x)².
    pub fn partition_sum_sq(&self, x: &[f64]) -> f64 {
        self.lattice_sum(x, |v| v * v)
    }

    fn lattice_sum<F: Fn(f64) -> f64>(&self, x: &[f64], f: F) -> f64 {
        // per axis, only |x_j + m_j| < 2 contributes: at most 4 neighbours
        let per_axis: Vec<Vec<f64>> = x
            .iter()
            .map(|&t| {
                let base = (-t).floor() as i64;
                (base - 2..=base + 3).map(|m| bump_1d(t + m as f64)).collect()
            })
            .collect();
        let mut total = 0.0;
        let mut idx = vec![0usize; self.dim];
        loop {
            let v: f64 = idx.iter().enumerate().map(|(j, &i)| per_axis[j][i]).product();
            total += f(v);
            let mut j = self.dim;
            loop {
                if j == 0 {
                    return total;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < per_axis[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    /// ∂η/∂x_axis.
    pub fn derivative(&self, x: &[f64], axis: usize) -> f64 {
        x.iter()
            .enumerate()
            .map(|(j, &t)| if j == axis { bump_1d_derivative(t) } else { bump_1d(t) })
            .product()
    }

    /// Range [min, max] of Σ_m η_m² over a uniform sample of one lattice cell.
    pub fn overlap_range(&self, samples_per_axis: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let total = samples_per_axis.pow(self.dim as u32);
        for i in 0..total {
            let mut r = i;
            let x: Vec<f64> = (0..self.dim)
                .map(|_| {
                    let k = r % samples_per_axis;
                    r /= samples_per_axis;
                    k as f64 / samples_per_axis as f64
                })
                .collect();
            let v = self.partition_sum_sq(&x);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

fn psi(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Smooth step rising from 0 at t = -1/2 to 1 at t = 1/2.
fn smooth_step(t: f64) -> f64 {
    let a = psi(t + 0.5);
    let b = psi(0.5 - t);
    if a + b == 0.0 {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

fn bump_1d(t: f64) -> f64 {
    smooth_step(t + 1.5) - smooth_step(t - 1.5)
}

fn dpsi(u: f64) -> f64 {
    if u > 0.0 {
        psi(u) / (u * u)
    } else {
        0.0
    }
}

/// ρ = Φ', the mollifier.
fn mollifier(t: f64) -> f64 {
    let a = psi(t + 0.5);
    let b = psi(0.5 - t);
    if a + b == 0.0 {
        return 0.0;
    }
    (dpsi(t + 0.5) * b + a * dpsi(0.5 - t)) / ((a + b) * (a + b))
}

fn bump_1d_derivative(t: f64) -> f64 {
    mollifier(t + 1.5) - mollifier(t - 1.5)
}

/// Result of a [`localization_norm`] evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    pub norm: f64,
    /// Share of Σ_m ‖fη_m‖² carried by the outermost cells |m| = M.
    pub boundary_fraction: f64,
    /// Largest share of a cell's squared W^{s,2} norm in its top projection shell.
    pub projection_tail: f64,
}

/// Options for [`localization_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationOptions {
    /// Truncation used when projecting f·η_m back onto the Hermite basis
    /// (only for s ∉ {0, 1}).
    pub projection_truncation: u32,
    /// Composite Gauss–Legendre panel width and points per panel.
    pub panel: f64,
    pub points_per_panel: usize,
}

impl LocalizationOptions {
    pub fn for_truncation(n: u32) -> Self {
        Self {
            projection_truncation: (4 * n).max(256),
            panel: 0.0625,
            points_per_panel: 20,
        }
    }
}

/// [Σ_{|m|≤M} ‖f η_m‖²_{W^{s,2}}]^{1/2} for a one-dimensional Hermite vector.
///
/// For s = 0 and s = 1 each ‖fη_m‖² is the exact quadratic form ⟨H^s g, g⟩
/// (with H the oscillator of the vector's convention), integrated over the
/// support of η_m by composite Gauss–Legendre; these are the limits of the
/// projected norms as the projection truncation grows. Other s project f·η_m
/// onto the basis at `projection_truncation` and read the norm off the
/// coefficients; the slowly decaying tail is reported.
pub fn localization_norm(
    v: &SpectralVector,
    s: f64,
    bump: &PartitionBump,
    lattice: i64,
    opts: LocalizationOptions,
) -> Result<LocalizationReport> {
    if v.dim() != 1 || bump.dim() != 1 {
        return Err(invalid("dim", "localization norms are implemented for n = 1"));
    }
    let conv = v.tag().convention().ok_or(FockError::ConventionMismatch {
        expected: "PaperH or BargmannH",
        got: "Fock",
    })?;
    if lattice < 0 {
        return Err(invalid("lattice", "cutoff must be non-negative"));
    }
    let np = opts.projection_truncation;
    let basis = GradedBasis::new(1, np)?;
    let cells: Vec<i64> = (-lattice..=lattice).collect();
    let deriv = derivative_vector(v)?;
    let per_cell: Vec<Result<(f64, f64)>> = cells
        .par_iter()
        .map(|&m| {
            let centre = -(m as f64);
            let rule = LineRule::composite_legendre(
                PartitionBump::SUPPORT,
                &[-1.5, -1.0, 1.0, 1.5],
                opts.panel,
                opts.points_per_panel,
            )?;
            if s == 0.0 || s == 1.0 {
                return Ok((quadratic_form(v, &deriv, conv, bump, &rule, centre, s == 1.0)?, 0.0));
            }
            let mut coeffs = vec![crate::sum::ComplexSum::new(); basis.len()];
            let mut h = vec![0.0; np as usize + 1];
            for (&y, &w) in rule.nodes.iter().zip(&rule.dx_weights) {
                let x = centre + y;
                let e = bump.eval(&[y]);
                if e == 0.0 {
                    continue;
                }
                let f = synthesize_real(v, &[x])? * (w * e);
                hermite_functions_real(x, conv, &mut h);
                for (c, hk) in coeffs.iter_mut().zip(&h) {
                    c.add(f * *hk);
                }
            }
            let cv: Vec<C64> = coeffs.iter().map(|c| c.value()).collect();
            let local = SpectralVector::from_coeffs(basis.clone(), v.tag(), cv)?;
            let full = sobolev_norm(&local, s)?.powi(2);
            let below = sobolev_norm(&local.with_truncation(np - np / 8)?, s)?.powi(2);
            let tail = if full > 0.0 { (full - below) / full } else { 0.0 };
            Ok((full, tail))
        })
        .collect();
    let mut squares = Vec::with_capacity(cells.len());
    let mut worst_tail: f64 = 0.0;
    for r in per_cell {
        let (sq, tail) = r?;
        squares.push(sq);
        worst_tail = worst_tail.max(tail);
    }
    let total = sum_f64(squares.iter().copied());
    let boundary = squares[0]
        + if squares.len() > 1 {
            squares[squares.len() - 1]
        } else {
            0.0
        };
    let boundary_fraction = if total > 0.0 { boundary / total } else { 0.0 };
    if boundary_fraction > 1e-6 {
        log::warn!(
            "localization: boundary cells |m| = {lattice} carry {boundary_fraction:.2e} of the total; raise the lattice cutoff"
        );
    }
    if worst_tail > 1e-8 {
        log::warn!("localization: projection tail share {worst_tail:.2e}; raise the projection truncation");
    }
    Ok(LocalizationReport {
        norm: total.sqrt(),
        boundary_fraction,
        projection_tail: worst_tail,
    })
}

/// f' as a vector of truncation N + 1: ∂ = a (H_1 - H_{-1}) / 2 with a the
/// convention's argument scale.
fn derivative_vector(v: &SpectralVector) -> Result<SpectralVector> {
    use crate::spectral::{ladder, Ladder};
    let lifted = v.with_truncation(v.truncation() + 1)?;
    let lo = ladder(&lifted, Ladder::Lower, 0)?.vector;
    let hi = ladder(&lifted, Ladder::Raise, 0)?.vector;
    let a = v.tag().convention().map_or(1.0, |c| c.arg_scale());
    Ok(lo.axpy(C64::new(-1.0, 0.0), &hi)?.scaled(C64::new(a / 2.0, 0.0)))
}

/// ‖g‖² (s = 0) or ‖g'‖²/a² + a²‖xg‖² (s = 1) for g = f η_m.
fn quadratic_form(
    v: &SpectralVector,
    deriv: &SpectralVector,
    conv: crate::hermite::Convention,
    bump: &PartitionBump,
    rule: &LineRule,
    centre: f64,
    first_order: bool,
) -> Result<f64> {
    let a = conv.arg_scale();
    let mut acc = crate::sum::NeumaierSum::new();
    for (&y, &w) in rule.nodes.iter().zip(&rule.dx_weights) {
        let e = bump.eval(&[y]);
        let ep = bump.derivative(&[y], 0);
        if e == 0.0 && ep == 0.0 {
            continue;
        }
        let x = centre + y;
        let f = synthesize_real(v, &[x])?;
        let g = f * e;
        if !first_order {
            acc.add(w * g.norm_sqr());
            continue;
        }
        let fp = synthesize_real(deriv, &[x])?;
        let gp = fp * e + f * ep;
        acc.add(w * (gp.norm_sqr() / (a * a) + a * a * x * x * g.norm_sqr()));
    }
    Ok(acc.value())
}

/// Lattice cutoff that covers the turning region of the basis functions up to N.
pub fn default_lattice(truncation: u32) -> i64 {
    ((truncation as f64 + 0.5).sqrt()).ceil() as i64 + 6
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;
    use crate::spectral::Basis;

    #[test]
    fn shape_properties() {
        let b = PartitionBump::new(1).unwrap();
        for i in 0..=400 {
            let x = -3.0 + 6.0 * i as f64 / 400.0;
            let e = b.eval(&[x]);
            assert!((0.0..=1.0).contains(&e));
            if x.abs() <= 1.0 {
                assert_eq!(e, 1.0, "x={x}");
            }
            if x.abs() >= 2.0 {
                assert_eq!(e, 0.0, "x={x}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let b = PartitionBump::new(1).unwrap();
        let h = 1e-6;
        for i in 0..200 {
            let x = -2.2 + 4.4 * i as f64 / 199.0;
            let fd = (b.eval(&[x + h]) - b.eval(&[x - h])) / (2.0 * h);
            assert!((b.derivative(&[x], 0) - fd).abs() < 1e-7, "x={x}");
        }
    }

    #[test]
    fn partition_of_constant_sum() {
        let b = PartitionBump::new(2).unwrap();
        for i in 0..500 {
            let x = [-4.0 + 0.0173 * i as f64, 3.3 - 0.011 * i as f64];
            assert!((b.partition_sum(&x) - 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_range_is_between_c0_bounds() {
        let b = PartitionBump::new(1).unwrap();
        let (lo, hi) = b.overlap_range(2000);
        // at most four translates overlap, so c0²/4 ≤ Ση² ≤ c0
        assert!(lo >= 2.25 - 1e-12, "{lo}");
        assert!(hi <= 3.0 + 1e-12, "{hi}");
        assert!(lo < hi);
    }

    #[test]
    fn quadratic_form_is_the_projection_limit() {
        let v = SpectralVector::unit(6, &MultiIndex::new(vec![3]), Basis::BargmannH).unwrap();
        let b = PartitionBump::new(1).unwrap();
        let m_cut = default_lattice(6);
        let opts = LocalizationOptions::for_truncation(6);
        let exact = localization_norm(&v, 1.0, &b, m_cut, opts).unwrap();
        // s slightly off 1 forces the projection path
        let near = localization_norm(&v, 1.0 - 1e-9, &b, m_cut, opts).unwrap();
        assert!(
            (near.norm / exact.norm - 1.0).abs() < 1e-4,
            "{} vs {}",
            near.norm,
            exact.norm
        );
        assert!(exact.boundary_fraction < 1e-6);
        for (np, tol) in [(96u32, 1e-3), (192, 1e-4)] {
            let o = LocalizationOptions {
                projection_truncation: np,
                ..opts
            };
            let r = localization_norm(&v, 1.0 - 1e-9, &b, m_cut, o).unwrap();
            assert!((r.norm / exact.norm - 1.0).abs() < tol);
            assert!(r.norm <= exact.norm * (1.0 + 1e-12));
        }
    }

    #[test]
    fn s0_localization_is_weighted_l2() {
        let v = SpectralVector::unit(8, &MultiIndex::new(vec![0]), Basis::BargmannH).unwrap();
        let b = PartitionBump::new(1).unwrap();
        let r = localization_norm(&v, 0.0, &b, 8, LocalizationOptions::for_truncation(8)).unwrap();
        let rule =
            LineRule::composite_legendre(12.0, &(-12..=12).map(|k| k as f64 / 2.0).collect::<Vec<_>>(), 0.05, 20)
                .unwrap();
        let direct = rule.integrate(|x| {
            let f = synthesize_real(&v, &[x]).unwrap().re;
            b.partition_sum_sq(&[x]) * f * f
        });
        assert!(
            (r.norm * r.norm - direct).abs() < 1e-11,
            "{} vs {direct}",
            r.norm * r.norm
        );
    }
}
