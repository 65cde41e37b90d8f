//! Fourier and Bargmann transforms, translations, Weyl operators and the
//! identities linking them.
//!
//! Conventions: 𝓕f(x) = π^{-n/2} ∫ e^{-2ix·y} f(y) dy, whose eigenfunctions are
//! the `BargmannH` functions ĥ_α with eigenvalues (-i)^{|α|};
//! 𝓑f(z) = (2/π)^{n/4} e^{z·z/2} ∫ f(x) e^{-(x-z)·(x-z)} dx, mapping ĥ_α to
//! e_α(z) = z^α/√(α!); τ_a f(x) = f(x - a); W_a F(z) = F(z - a) e^{-|a|²/2 + z·ā}.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, FockError, Result};
use crate::hermite::{eval_hermite, hermite_functions_real, Convention};
use crate::matrix::OperatorMatrix;
use crate::multi_index::{ln_factorial, GradedBasis};
use crate::quadrature::{gauss_hermite, QuadratureGrid};
use crate::spectral::{basis_values_real, ladder, project_values_any_scale, Basis, Ladder, SpectralVector};
use crate::sum::ComplexSum;

/// Extra Gauss–Hermite points beyond N + 1 for translation matrices.
pub const DEFAULT_TRANSLATION_MARGIN: usize = 16;

/// Unitarity defect above which a translation matrix is reported as too small.
pub const TRANSLATION_UNITARITY_WARN: f64 = 1e-4;

fn require_bargmann_h(v: &SpectralVector) -> Result<()> {
    if v.tag() != Basis::BargmannH {
        return Err(FockError::ConventionMismatch {
            expected: "BargmannH",
            got: v.tag().name(),
        });
    }
    Ok(())
}

fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// (-i)^k.
pub fn minus_i_pow(k: u32) -> C64 {
    i_pow(k).conj()
}

/// 𝓕 on coefficients: c_α ↦ (-i)^{|α|} c_α. Requires `BargmannH`.
pub fn fourier(v: &SpectralVector) -> Result<SpectralVector> {
    require_bargmann_h(v)?;
    Ok(phase_map(v, minus_i_pow))
}

/// 𝓕⁻¹: c_α ↦ i^{|α|} c_α.
pub fn inverse_fourier(v: &SpectralVector) -> Result<SpectralVector> {
    require_bargmann_h(v)?;
    Ok(phase_map(v, i_pow))
}

fn phase_map(v: &SpectralVector, f: fn(u32) -> C64) -> SpectralVector {
    let mut out = v.clone();
    let b = v.basis().clone();
    for (c, a) in out.coeffs_mut().iter_mut().zip(b.indices()) {
        *c *= f(a.order());
    }
    out
}

/// π^{-n/2} ∫ e^{-2ix·y} f(y) dy with the dx-weights of a scale-1 grid, for f
/// carrying a Gaussian factor e^{-|y|²}.
pub fn fourier_quadrature<F>(f: F, x: &[f64], grid: &QuadratureGrid) -> Result<C64>
where
    F: Fn(&[f64]) -> C64,
{
    if grid.dim() != x.len() {
        return Err(FockError::DimensionMismatch {
            expected: x.len(),
            got: grid.dim(),
        });
    }
    let mut acc = ComplexSum::new();
    for i in 0..grid.len() {
        let y = grid.node(i);
        let phase: f64 = -2.0 * x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        acc.add(f(y) * C64::from_polar(grid.dx_weight(i), phase));
    }
    Ok(acc.value() * PI.powf(-(x.len() as f64) / 2.0))
}

/// 𝓑 on coefficients: the identity with the tag changed to `Fock`.
pub fn bargmann(v: &SpectralVector) -> Result<SpectralVector> {
    require_bargmann_h(v)?;
    Ok(v.clone().retag(Basis::Fock))
}

/// 𝓑⁻¹ on coefficients: `Fock` back to `BargmannH`.
pub fn inverse_bargmann(v: &SpectralVector) -> Result<SpectralVector> {
    if v.tag() != Basis::Fock {
        return Err(FockError::ConventionMismatch {
            expected: "Fock",
            got: v.tag().name(),
        });
    }
    Ok(v.clone().retag(Basis::BargmannH))
}

/// (2/π)^{n/4} e^{z·z/2} ∫ f(x) e^{-(x-z)·(x-z)} dx with the dx-weights of a
/// scale-2 grid; f should carry a Gaussian factor e^{-|x|²}.
pub fn bargmann_quadrature<F>(f: F, z: &[C64], grid: &QuadratureGrid) -> Result<C64>
where
    F: Fn(&[f64]) -> C64,
{
    if grid.dim() != z.len() {
        return Err(FockError::DimensionMismatch {
            expected: z.len(),
            got: grid.dim(),
        });
    }
    let zz: C64 = z.iter().map(|w| w * w).sum();
    let mut acc = ComplexSum::new();
    for i in 0..grid.len() {
        let x = grid.node(i);
        let d: C64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
        let e = (0.5 * zz - d).exp();
        acc.add(f(x) * e * grid.dx_weight(i));
    }
    Ok(acc.value() * (2.0 / PI).powf(z.len() as f64 / 4.0))
}

/// Outcome of the startup calibration of the Bargmann kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannSelfTest {
    /// max |𝓑ĥ_0(z) - 1| over the sample points.
    pub bargmann_h_defect: f64,
    /// max |𝓑h_0(z) - (2^{3/4}/√3) e^{z²/6}| for the e^{-x²/2}-normalized h_0.
    pub paper_h_closed_form_defect: f64,
    /// max |𝓑h_0(z) - 1|: how far the other normalization is from e_0.
    pub paper_h_distance_from_unit: f64,
}

impl BargmannSelfTest {
    pub fn passed(&self, tol: f64) -> bool {
        self.bargmann_h_defect <= tol
            && self.paper_h_closed_form_defect <= tol
            && self.paper_h_distance_from_unit > 1e3 * tol
    }
}

/// Checks that the kernel maps ĥ_0 to the constant 1 while h_0 is not mapped to e_0.
pub fn bargmann_self_test() -> Result<BargmannSelfTest> {
    let grid = gauss_hermite(64, 2.0, 1)?;
    let pts = [
        C64::new(0.0, 0.0),
        C64::new(0.5, 0.3),
        C64::new(-1.1, 0.7),
        C64::new(1.5, -1.2),
        C64::new(0.0, 2.0),
    ];
    let mut out = BargmannSelfTest {
        bargmann_h_defect: 0.0,
        paper_h_closed_form_defect: 0.0,
        paper_h_distance_from_unit: 0.0,
    };
    let c = 2f64.powf(0.75) / 3f64.sqrt();
    for z in pts {
        let hat = bargmann_quadrature(
            |x| eval_hermite(0, C64::new(x[0], 0.0), Convention::BargmannH).unwrap(),
            &[z],
            &grid,
        )?;
        // h_0 carries e^{-x²/2}: integrate with a scale-1.5 rule
        let g15 = gauss_hermite(64, 1.5, 1)?;
        let paper = bargmann_quadrature(
            |x| eval_hermite(0, C64::new(x[0], 0.0), Convention::PaperH).unwrap(),
            &[z],
            &g15,
        )?;
        out.bargmann_h_defect = out.bargmann_h_defect.max((hat - 1.0).norm());
        out.paper_h_closed_form_defect = out
            .paper_h_closed_form_defect
            .max((paper - c * (z * z / 6.0).exp()).norm());
        out.paper_h_distance_from_unit = out.paper_h_distance_from_unit.max((paper - 1.0).norm());
    }
    Ok(out)
}

/// One-axis matrix t_{kl} = ∫ basis_l(x - a) basis_k(x) dx, exact up to rounding:
/// after the shift x = y + a/2 the integrand is a polynomial times e^{-σy²}.
fn translation_1d(a: f64, n: usize, conv: Convention, margin: usize) -> Result<DMatrix<f64>> {
    let grid = gauss_hermite(n + 1 + margin, conv.product_scale(), 1)?;
    let q = grid.order();
    let mut left = vec![vec![0.0; n + 1]; q];
    let mut right = vec![vec![0.0; n + 1]; q];
    for (i, &y) in grid.nodes_1d().iter().enumerate() {
        hermite_functions_real(y + 0.5 * a, conv, &mut left[i]);
        hermite_functions_real(y - 0.5 * a, conv, &mut right[i]);
    }
    let w = grid.dx_weights_1d();
    Ok(DMatrix::from_fn(n + 1, n + 1, |k, l| {
        crate::sum::sum_f64((0..q).map(|i| w[i] * left[i][k] * right[i][l]))
    }))
}

fn tensor_matrix(basis: &GradedBasis, axes: &[DMatrix<C64>]) -> DMatrix<C64> {
    let l = basis.len();
    let idx = basis.indices();
    let rows: Vec<Vec<C64>> = (0..l)
        .into_par_iter()
        .map(|i| {
            (0..l)
                .map(|j| {
                    idx[i]
                        .components()
                        .iter()
                        .zip(idx[j].components())
                        .enumerate()
                        .fold(C64::new(1.0, 0.0), |acc, (ax, (&p, &q))| {
                            acc * axes[ax][(p as usize, q as usize)]
                        })
                })
                .collect()
        })
        .collect();
    DMatrix::from_fn(l, l, |i, j| rows[i][j])
}

/// Finite section ⟨τ_a basis_β, basis_α⟩ of the translation by a ∈ ℝⁿ.
///
/// Tagged unitary-expected with tolerance [`TRANSLATION_UNITARITY_WARN`]; a
/// warning is logged when the interior block misses it.
pub fn translation_matrix(a: &[f64], truncation: u32, conv: Convention) -> Result<OperatorMatrix> {
    translation_matrix_with_margin(a, truncation, conv, DEFAULT_TRANSLATION_MARGIN)
}

pub fn translation_matrix_with_margin(
    a: &[f64],
    truncation: u32,
    conv: Convention,
    margin: usize,
) -> Result<OperatorMatrix> {
    let basis = GradedBasis::new(a.len(), truncation)?;
    let axes: Vec<DMatrix<C64>> = a
        .iter()
        .map(|&aj| translation_1d(aj, truncation as usize, conv, margin).map(|m| m.map(|x| C64::new(x, 0.0))))
        .collect::<Result<_>>()?;
    let entries = tensor_matrix(&basis, &axes);
    let m =
        OperatorMatrix::from_entries(basis, conv.into(), entries)?.with_unitary_tolerance(TRANSLATION_UNITARITY_WARN);
    let defect = m.unitarity_defect();
    if defect > TRANSLATION_UNITARITY_WARN {
        log::warn!("translation by {a:?} at N = {truncation}: interior unitarity defect {defect:.2e}; raise N");
    }
    Ok(m)
}

/// One-axis displacement matrix ⟨e_m, W e_n⟩ with W F(z) = e^{ζz - |ζ|²/2} F(z - ζ̄).
///
/// Uses the Laguerre closed form
/// √(n!/m!) ζ^{m-n} e^{-|ζ|²/2} L_n^{(m-n)}(|ζ|²) for m ≥ n and its mirror
/// √(m!/n!) (-ζ̄)^{n-m} e^{-|ζ|²/2} L_m^{(n-m)}(|ζ|²) for m < n.
fn displacement_1d(zeta: C64, n: usize) -> DMatrix<C64> {
    let r2 = zeta.norm_sqr();
    let ln_r = if r2 > 0.0 { 0.5 * r2.ln() } else { f64::NEG_INFINITY };
    let theta = zeta.arg();
    let mut out = DMatrix::from_element(n + 1, n + 1, C64::new(0.0, 0.0));
    for d in 0..=n {
        // generalized Laguerre L_k^{(d)}(r2), k = 0..=n-d
        let kmax = n - d;
        let mut lag = vec![0.0; kmax + 1];
        lag[0] = 1.0;
        if kmax >= 1 {
            lag[1] = 1.0 + d as f64 - r2;
        }
        for k in 1..kmax {
            let kf = k as f64;
            lag[k + 1] = ((2.0 * kf + 1.0 + d as f64 - r2) * lag[k] - (kf + d as f64) * lag[k - 1]) / (kf + 1.0);
        }
        for (k, &lk) in lag.iter().enumerate() {
            let (lo, hi) = (k, k + d);
            let power = if d == 0 { 0.0 } else { d as f64 * ln_r };
            if !power.is_finite() {
                continue;
            }
            let mag = (0.5 * (ln_factorial(lo as u32) - ln_factorial(hi as u32)) + power - 0.5 * r2).exp() * lk;
            // below the diagonal (m = hi > n = lo): phase ζ^d
            out[(hi, lo)] = C64::from_polar(mag, d as f64 * theta);
            if d > 0 {
                // above the diagonal (m = lo < n = hi): (-ζ̄)^d
                out[(lo, hi)] = C64::from_polar(mag, d as f64 * (PI - theta));
            }
        }
    }
    out
}

/// Finite section of W_a F(z) = F(z - a) e^{-|a|²/2 + z·ā} in the e_α basis.
pub fn weyl_matrix(a: &[C64], truncation: u32) -> Result<OperatorMatrix> {
    let basis = GradedBasis::new(a.len(), truncation)?;
    let axes: Vec<DMatrix<C64>> = a
        .iter()
        .map(|&aj| displacement_1d(aj.conj(), truncation as usize))
        .collect();
    let entries = tensor_matrix(&basis, &axes);
    Ok(OperatorMatrix::from_entries(basis, Basis::Fock, entries)?.with_unitary_tolerance(TRANSLATION_UNITARITY_WARN))
}

/// Interior-block comparison of two routes to the same operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    /// Frobenius (matrices) or Euclidean (vectors) norm of the difference on |α| ≤ N/2.
    pub defect: f64,
    pub truncation: u32,
    pub interior_order: u32,
}

/// ‖τ_a - 𝓑⁻¹ W_a 𝓑‖ on the interior block.
pub fn conjugation_check(a: &[f64], truncation: u32) -> Result<DefectReport> {
    let t = translation_matrix(a, truncation, Convention::BargmannH)?;
    let ac: Vec<C64> = a.iter().map(|&x| C64::new(x, 0.0)).collect();
    // 𝓑 and 𝓑⁻¹ are tag changes on coefficients
    let w = weyl_matrix(&ac, truncation)?.retag(Basis::BargmannH);
    Ok(DefectReport {
        defect: t.interior_distance(&w)?,
        truncation,
        interior_order: truncation / 2,
    })
}

fn ladder_index(j: i32, dim: usize) -> Result<(Ladder, usize)> {
    let axis = j.unsigned_abs() as usize;
    if j == 0 || axis > dim {
        return Err(invalid("j", format!("must satisfy 1 ≤ |j| ≤ {dim}, got {j}")));
    }
    Ok((if j > 0 { Ladder::Lower } else { Ladder::Raise }, axis - 1))
}

fn hermite_convention(v: &SpectralVector) -> Result<Convention> {
    v.tag().convention().ok_or(FockError::ConventionMismatch {
        expected: "PaperH or BargmannH",
        got: "Fock",
    })
}

fn apply_ladder(v: &SpectralVector, j: i32) -> Result<SpectralVector> {
    let (dir, axis) = ladder_index(j, v.dim())?;
    Ok(ladder(v, dir, axis)?.vector)
}

fn interior_distance(a: &SpectralVector, b: &SpectralVector) -> Result<f64> {
    let k = a.truncation() / 2;
    let d = a.axpy(C64::new(-1.0, 0.0), b)?;
    Ok(d.norm_up_to(k))
}

/// ‖H_j(τ_a v) - τ_a(H_j v + c a_{|j|} v)‖ on the interior block, where j > 0
/// is the lowering and j < 0 the raising operator along axis |j|, and c is the
/// convention's argument scale (1 for `PaperH`, √2 for `BargmannH`).
pub fn translation_ladder_check(a: &[f64], j: i32, v: &SpectralVector) -> Result<DefectReport> {
    let conv = hermite_convention(v)?;
    let (_, axis) = ladder_index(j, v.dim())?;
    if a.len() != v.dim() {
        return Err(FockError::DimensionMismatch {
            expected: v.dim(),
            got: a.len(),
        });
    }
    let t = translation_matrix(a, v.truncation(), conv)?;
    let shift = C64::new(conv.arg_scale() * a[axis], 0.0);
    let lhs = apply_ladder(&t.apply(v)?, j)?;
    let inner = apply_ladder(v, j)?.axpy(shift, v)?;
    let rhs = t.apply(&inner)?;
    Ok(DefectReport {
        defect: interior_distance(&lhs, &rhs)?,
        truncation: v.truncation(),
        interior_order: v.truncation() / 2,
    })
}

/// Second-order case: H_{j1} H_{j2} τ_a v against
/// τ_a[H_{j1}H_{j2} + c₂ H_{j1} + c₁ H_{j2} + c₁c₂] v with c_i = c·a_{|j_i|}.
pub fn translation_ladder_check2(a: &[f64], j1: i32, j2: i32, v: &SpectralVector) -> Result<DefectReport> {
    let conv = hermite_convention(v)?;
    let (_, ax1) = ladder_index(j1, v.dim())?;
    let (_, ax2) = ladder_index(j2, v.dim())?;
    let t = translation_matrix(a, v.truncation(), conv)?;
    let c1 = C64::new(conv.arg_scale() * a[ax1], 0.0);
    let c2 = C64::new(conv.arg_scale() * a[ax2], 0.0);
    let lhs = apply_ladder(&apply_ladder(&t.apply(v)?, j2)?, j1)?;
    let h12 = apply_ladder(&apply_ladder(v, j2)?, j1)?;
    let h1 = apply_ladder(v, j1)?;
    let h2 = apply_ladder(v, j2)?;
    let poly = h12.axpy(c2, &h1)?.axpy(c1, &h2)?.axpy(c1 * c2, v)?;
    let rhs = t.apply(&poly)?;
    Ok(DefectReport {
        defect: interior_distance(&lhs, &rhs)?,
        truncation: v.truncation(),
        interior_order: v.truncation() / 2,
    })
}

/// Second factor of a Leibniz-rule check.
#[derive(Debug, Clone, Copy)]
pub enum Factor<'a> {
    Vector(&'a SpectralVector),
    Constant(C64),
}

/// L² defect of H_j(fg) = (H_j f) g + f (H_j g) - c x_{|j|} f g with both sides
/// formed pointwise on a shared grid and projected at `projection_truncation`.
///
/// The left side applies H_j to the truncated projection of fg, so the defect
/// measures the truncation of the product and falls as the projection grows.
pub fn leibniz_check(f: &SpectralVector, g: Factor<'_>, j: i32, projection_truncation: u32) -> Result<DefectReport> {
    let conv = hermite_convention(f)?;
    let dim = f.dim();
    let (_, axis) = ladder_index(j, dim)?;
    let c = conv.arg_scale();
    let lift = |v: &SpectralVector| -> Result<(SpectralVector, SpectralVector)> {
        let l = v.with_truncation(v.truncation() + 1)?;
        let h = apply_ladder(&l, j)?;
        Ok((l, h))
    };
    let (f1, hf) = lift(f)?;
    let gv = match g {
        Factor::Vector(gv) => {
            if gv.tag() != f.tag() || gv.dim() != dim {
                return Err(invalid("g", "must share dimension and convention with f"));
            }
            Some(lift(gv)?)
        }
        Factor::Constant(_) => None,
    };
    // number of basis-function Gaussians in f·g·basis_α
    let factors = if gv.is_some() { 3.0 } else { 2.0 };
    let scale = factors * conv.product_scale() / 2.0;
    let max_deg = f1.truncation() + gv.as_ref().map_or(0, |(g1, _)| g1.truncation()) + 1 + projection_truncation;
    let order = max_deg as usize / 2 + 8;
    let grid = gauss_hermite(order, scale, dim)?;
    let basis_f = f1.basis().clone();
    let basis_g = gv.as_ref().map(|(g1, _)| g1.basis().clone());
    let eval = |v: &SpectralVector, b: &[f64]| crate::sum::sum_c64(v.coeffs().iter().zip(b).map(|(c, bv)| c * *bv));
    let pairs: Vec<(C64, C64)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            let bf = basis_values_real(&basis_f, conv, x);
            let (fv, hfv) = (eval(&f1, &bf), eval(&hf, &bf));
            let (gval, hgv) = match (&gv, g) {
                (Some((g1, hg)), _) => {
                    let bg = basis_values_real(basis_g.as_ref().unwrap(), conv, x);
                    (eval(g1, &bg), eval(hg, &bg))
                }
                (None, Factor::Constant(k)) => (k, k * (c * x[axis])),
                (None, Factor::Vector(_)) => unreachable!(),
            };
            let prod = fv * gval;
            (prod, hfv * gval + fv * hgv - prod * (c * x[axis]))
        })
        .collect();
    let (prod, rhs_vals): (Vec<C64>, Vec<C64>) = pairs.into_iter().unzip();
    let fg = project_values_any_scale(&prod, projection_truncation, &grid, conv)?;
    let lhs = apply_ladder(&fg, j)?;
    let rhs = project_values_any_scale(&rhs_vals, projection_truncation, &grid, conv)?;
    Ok(DefectReport {
        defect: lhs.axpy(C64::new(-1.0, 0.0), &rhs)?.norm(),
        truncation: projection_truncation,
        interior_order: projection_truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;
    use crate::spaces::sobolev_norm;
    use crate::spectral::synthesize;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(k: u32, n: u32, tag: Basis) -> SpectralVector {
        SpectralVector::unit(n, &MultiIndex::new(vec![k]), tag).unwrap()
    }

    #[test]
    fn fourier_has_period_four_and_keeps_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = SpectralVector::random(2, 12, 12, Basis::BargmannH, &mut rng).unwrap();
        let mut w = v.clone();
        for _ in 0..4 {
            w = fourier(&w).unwrap();
        }
        assert!(w.axpy(C64::new(-1.0, 0.0), &v).unwrap().norm() < 1e-15);
        let f = fourier(&v).unwrap();
        for s in [0.0, 1.0, 2.5] {
            assert_eq!(sobolev_norm(&f, s).unwrap(), sobolev_norm(&v, s).unwrap());
        }
        assert!(fourier(&unit(0, 3, Basis::PaperH)).is_err());
    }

    #[test]
    fn fourier_quadrature_fixes_the_ground_state() {
        let g = gauss_hermite(60, 1.0, 1).unwrap();
        for x in [0.0, 0.4, -1.3, 2.2] {
            let got = fourier_quadrature(
                |y| eval_hermite(0, C64::new(y[0], 0.0), Convention::BargmannH).unwrap(),
                &[x],
                &g,
            )
            .unwrap();
            let want = eval_hermite(0, C64::new(x, 0.0), Convention::BargmannH).unwrap();
            assert!((got - want).norm() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn bargmann_of_hat_ground_state_is_one() {
        let g = gauss_hermite(64, 2.0, 1).unwrap();
        let z = C64::new(0.5, 0.3);
        let b = bargmann_quadrature(
            |x| eval_hermite(0, C64::new(x[0], 0.0), Convention::BargmannH).unwrap(),
            &[z],
            &g,
        )
        .unwrap();
        assert!((b - 1.0).norm() < 1e-12);
        let st = bargmann_self_test().unwrap();
        assert!(st.passed(1e-10), "{st:?}");
    }

    #[test]
    fn bargmann_maps_basis_to_monomials() {
        let g = gauss_hermite(80, 2.0, 1).unwrap();
        let z = C64::new(-0.9, 1.1);
        for k in 0..8u32 {
            let q = bargmann_quadrature(
                |x| eval_hermite(k as usize, C64::new(x[0], 0.0), Convention::BargmannH).unwrap(),
                &[z],
                &g,
            )
            .unwrap();
            let e = synthesize(&bargmann(&unit(k, 8, Basis::BargmannH)).unwrap(), &[z]).unwrap();
            assert!((q - e).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn bargmann_round_trip_and_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = SpectralVector::random(1, 10, 10, Basis::BargmannH, &mut rng).unwrap();
        assert_eq!(inverse_bargmann(&bargmann(&v).unwrap()).unwrap(), v);
        // 𝓑𝓕𝓑⁻¹ F(z) = F(-iz)
        let fv = bargmann(&v).unwrap();
        let rot = bargmann(&fourier(&inverse_bargmann(&fv).unwrap()).unwrap()).unwrap();
        let z = C64::new(0.3, -0.8);
        let a = synthesize(&rot, &[z]).unwrap();
        let b = synthesize(&fv, &[C64::new(0.0, -1.0) * z]).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn translation_ground_state_overlap() {
        for a in [0.0, 0.3, -1.2] {
            let t = translation_matrix(&[a], 12, Convention::BargmannH).unwrap();
            assert!((t.get(0, 0).re - (-a * a / 2.0).exp()).abs() < 1e-14);
        }
        let id = translation_matrix(&[0.0], 8, Convention::BargmannH).unwrap();
        let e = OperatorMatrix::identity(1, 8, Basis::BargmannH).unwrap();
        assert!(id.interior_distance(&e).unwrap() < 1e-14);
        assert!(id.sub(&e).unwrap().frobenius_norm() < 1e-13);
    }

    #[test]
    fn translation_group_law() {
        let n = 32;
        let ta = translation_matrix(&[0.4], n, Convention::BargmannH).unwrap();
        let tb = translation_matrix(&[-0.7], n, Convention::BargmannH).unwrap();
        let tab = translation_matrix(&[-0.3], n, Convention::BargmannH).unwrap();
        assert!(ta.compose(&tb).unwrap().interior_distance(&tab).unwrap() < 1e-10);
        assert!(ta.unitarity_defect() < 1e-10);
    }

    fn weyl_binomial(a: C64, m: usize, n: usize) -> C64 {
        // coefficient of z^m in e^{-|a|²/2} e^{zā} (z-a)^n / √n!, times √m!
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..=m.min(n) {
            let binom = (ln_factorial(n as u32) - ln_factorial(k as u32) - ln_factorial((n - k) as u32)).exp();
            let term =
                binom * (-a).powu((n - k) as u32) * a.conj().powu((m - k) as u32) / ln_factorial((m - k) as u32).exp();
            acc += term;
        }
        acc * (-0.5 * a.norm_sqr()).exp() * (0.5 * (ln_factorial(m as u32) - ln_factorial(n as u32))).exp()
    }

    #[test]
    fn weyl_matches_binomial_expansion() {
        let a = C64::new(0.6, -0.35);
        let w = weyl_matrix(&[a], 14).unwrap();
        for m in 0..=14 {
            for n in 0..=14 {
                let want = weyl_binomial(a, m, n);
                assert!((w.get(m, n) - want).norm() < 1e-12, "({m},{n})");
            }
        }
        // W_a e_0 = e^{-|a|²/2} ā^k/√k!
        for k in 0..=14usize {
            let want = (-0.5 * a.norm_sqr()).exp() * a.conj().powu(k as u32) / ln_factorial(k as u32).exp().sqrt();
            assert!((w.get(k, 0) - want).norm() < 1e-14);
        }
        let w0 = weyl_matrix(&[C64::new(0.0, 0.0)], 6).unwrap();
        assert_eq!(
            w0,
            OperatorMatrix::identity(1, 6, Basis::Fock)
                .unwrap()
                .with_unitary_tolerance(TRANSLATION_UNITARITY_WARN)
        );
    }

    #[test]
    fn weyl_against_fock_quadrature() {
        // ⟨W_a e_β, e_α⟩ = π^{-1} ∫ W_a e_β(z) conj(e_α(z)) e^{-|z|²} dz
        let a = C64::new(0.5, 0.2);
        let g = gauss_hermite(48, 1.0, 2).unwrap();
        let w = weyl_matrix(&[a], 6).unwrap();
        for (al, be) in [(0usize, 0usize), (2, 1), (1, 3), (5, 5)] {
            let val = g.integrate(|p| {
                let z = C64::new(p[0], p[1]);
                let f = (z - a).powu(be as u32) / ln_factorial(be as u32).exp().sqrt()
                    * (z * a.conj() - 0.5 * a.norm_sqr()).exp();
                let e = z.conj().powu(al as u32) / ln_factorial(al as u32).exp().sqrt();
                (f * e).re
            }) / PI;
            assert!((val - w.get(al, be).re).abs() < 1e-10, "({al},{be})");
        }
    }

    #[test]
    fn conjugation_defect_small() {
        assert!(conjugation_check(&[0.0], 16).unwrap().defect < 1e-13);
        let r = conjugation_check(&[0.7], 32).unwrap();
        assert!(r.defect < 1e-10, "{}", r.defect);
        let r2 = conjugation_check(&[0.3, -0.5], 10).unwrap();
        assert!(r2.defect < 1e-10);
    }

    #[test]
    fn translation_ladder_identity() {
        for conv in [Convention::PaperH, Convention::BargmannH] {
            let v = unit(2, 32, conv.into());
            for j in [1, -1] {
                let d = translation_ladder_check(&[0.5], j, &v).unwrap();
                assert!(d.defect < 1e-10, "{conv:?} j={j}: {}", d.defect);
                assert!(translation_ladder_check(&[0.0], j, &v).unwrap().defect < 1e-13);
            }
            for (j1, j2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let d = translation_ladder_check2(&[0.5], j1, j2, &v).unwrap();
                assert!(d.defect < 1e-10, "{conv:?} ({j1},{j2}): {}", d.defect);
            }
        }
        assert!(translation_ladder_check(&[0.5], 2, &unit(2, 8, Basis::PaperH)).is_err());
    }

    #[test]
    fn second_order_equals_two_first_order_steps() {
        // H_1 H_1 τ_a v = H_1 τ_a (H_1 + c a) v = τ_a (H_1 + c a)² v
        let v = unit(3, 24, Basis::PaperH);
        let a = 0.4;
        let t = translation_matrix(&[a], 24, Convention::PaperH).unwrap();
        let step = |w: &SpectralVector| apply_ladder(w, 1).unwrap().axpy(C64::new(a, 0.0), w).unwrap();
        let composed = t.apply(&step(&step(&v))).unwrap();
        let lhs = apply_ladder(&apply_ladder(&t.apply(&v).unwrap(), 1).unwrap(), 1).unwrap();
        assert!(interior_distance(&lhs, &composed).unwrap() < 1e-10);
    }

    #[test]
    fn leibniz_rule() {
        let f = unit(0, 8, Basis::BargmannH);
        for j in [1, -1] {
            let d = leibniz_check(&f, Factor::Constant(C64::new(2.0, -1.0)), j, 16).unwrap();
            assert!(d.defect < 1e-12, "const j={j}: {}", d.defect);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = SpectralVector::random(1, 6, 6, Basis::BargmannH, &mut rng).unwrap();
        let mut last = f64::INFINITY;
        for p in [9u32, 15, 21, 27] {
            let d = leibniz_check(&r, Factor::Vector(&r), 1, p).unwrap().defect;
            assert!(d < last, "p={p}: {d} !< {last}");
            last = d;
        }
        let d = leibniz_check(&f, Factor::Vector(&f), 1, 16).unwrap();
        assert!(d.defect < 1e-8);
    }
}
