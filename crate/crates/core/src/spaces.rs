//! Hermite–Sobolev and Fock–Sobolev norms, functions of the Hermite operator,
//! the square function and its constant, and the potential probe.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, FockError, Result};
use crate::hermite::Convention;
use crate::multi_index::GradedBasis;
use crate::quadrature::{adaptive_gk, gauss_hermite, QuadratureGrid};
use crate::spectral::{basis_values, basis_values_real, Basis, SpectralVector};
use crate::sum::{sum_f64, NeumaierSum};

/// Tolerance for the t-integrals behind the square function.
pub const T_INTEGRAL_TOL: f64 = 1e-12;

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(invalid("s", format!("must be a finite number ≥ 0, got {s}")));
    }
    Ok(())
}

/// [Σ (2|α|+n)^s |c_α|²]^{1/2}; the same formula is the W_H^{s,2} norm of a
/// Hermite vector and the F^{s,2} norm of a Fock vector.
pub fn sobolev_norm(v: &SpectralVector, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(weighted_sum(v, s).sqrt())
}

fn weighted_sum(v: &SpectralVector, s: f64) -> f64 {
    let b = v.basis();
    sum_f64(
        v.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| b.eigenvalue(i).powf(s) * c.norm_sqr()),
    )
}

/// H^s: c_α ↦ (2|α|+n)^s c_α. Negative s is allowed.
pub fn fractional_h(v: &SpectralVector, s: f64) -> SpectralVector {
    diagonal_map(v, |lambda| lambda.powf(s))
}

fn diagonal_map<F: Fn(f64) -> f64>(v: &SpectralVector, f: F) -> SpectralVector {
    let mut out = v.clone();
    let b = v.basis().clone();
    for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= f(b.eigenvalue(i));
    }
    out
}

/// e^{-t²H}: c_α ↦ e^{-t²(2|α|+n)} c_α.
pub fn heat_semigroup(v: &SpectralVector, t: f64) -> Result<SpectralVector> {
    if !(t >= 0.0) {
        return Err(invalid("t", format!("must be ≥ 0, got {t}")));
    }
    Ok(diagonal_map(v, |lambda| (-t * t * lambda).exp()))
}

/// Truncated kernel Σ_{|α|≤N} e^{-t²(2|α|+n)} basis_α(x) basis_α(y) of e^{-t²H}.
pub fn heat_kernel(x: &[f64], y: &[f64], t: f64, truncation: u32, conv: Convention) -> Result<f64> {
    if x.len() != y.len() {
        return Err(FockError::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let basis = GradedBasis::new(x.len(), truncation)?;
    let bx = basis_values_real(&basis, conv, x);
    let by = basis_values_real(&basis, conv, y);
    Ok(sum_f64(
        (0..basis.len()).map(|i| (-t * t * basis.eigenvalue(i)).exp() * bx[i] * by[i]),
    ))
}

/// Fock-space weighted norm [ω_{n,s} ∫ (1+|z|)^{2s} |f(z)|² e^{-|z|²} dz]^{1/2}.
///
/// `grid2n` is a 2n-dimensional scale-1 rule whose coordinates are read as
/// (Re z_1, Im z_1, …, Re z_n, Im z_n). ω_{n,s} is the reciprocal of the same
/// quadrature applied to the constant 1, so that ‖1‖ = 1.
pub fn weighted_fock_norm(v: &SpectralVector, s: f64, grid2n: &QuadratureGrid) -> Result<f64> {
    check_s(s)?;
    if v.tag() != Basis::Fock {
        return Err(FockError::ConventionMismatch {
            expected: "Fock",
            got: v.tag().name(),
        });
    }
    let n = v.dim();
    if grid2n.dim() != 2 * n {
        return Err(FockError::DimensionMismatch {
            expected: 2 * n,
            got: grid2n.dim(),
        });
    }
    if (grid2n.scale() - 1.0).abs() > 1e-14 {
        return Err(FockError::ScaleMismatch {
            grid: grid2n.scale(),
            expected: 1.0,
            convention: "Fock",
        });
    }
    let terms: Vec<Result<(f64, f64)>> = (0..grid2n.len())
        .into_par_iter()
        .map(|i| {
            let p = grid2n.node(i);
            let z: Vec<C64> = (0..n).map(|j| C64::new(p[2 * j], p[2 * j + 1])).collect();
            let r = z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
            let wgt = grid2n.weight(i) * (1.0 + r).powf(2.0 * s);
            let vals = basis_values(v.basis(), Basis::Fock, &z)?;
            let f = crate::sum::sum_c64(vals.iter().zip(v.coeffs()).map(|(b, c)| b * c));
            Ok((wgt * f.norm_sqr(), wgt))
        })
        .collect();
    let mut num = NeumaierSum::new();
    let mut den = NeumaierSum::new();
    for t in terms {
        let (a, b) = t?;
        num.add(a);
        den.add(b);
    }
    Ok((num.value() / den.value()).sqrt())
}

fn check_square_function_range(s: f64, k: u32) -> Result<()> {
    if k == 0 {
        return Err(invalid("K", "must be at least 1"));
    }
    if !(s > 0.0 && s < 2.0 * k as f64) {
        let probe = divergence_probe(s, k);
        return Err(FockError::Divergent {
            s,
            k,
            reason: format!(
                "the t-integral converges only for 0 < s < 2K; partial-integral increments decay by a factor {:.3} per decade",
                probe.decay_ratio
            ),
        });
    }
    Ok(())
}

/// expm1-based (1 - e^{-w}) / w, stable near w = 0.
fn one_minus_exp_over(w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        -(-w).exp_m1() / w
    }
}

/// I(λ) = ∫_0^∞ (1 - e^{-λt²})^{2K} t^{-1-2s} dt by adaptive Gauss–Kronrod.
///
/// The half-line is split at t = 1. On [0, 1] the substitution t = v^{1/p},
/// p = 4K - 2s, removes the t^{4K-1-2s} endpoint behaviour; on [1, ∞) the
/// substitution t = v^{-1/(2s)} maps the t^{-1-2s} tail onto a bounded
/// integrand on (0, 1].
pub fn t_integral(lambda: f64, s: f64, k: u32) -> Result<f64> {
    check_square_function_range(s, k)?;
    if !(lambda > 0.0) {
        return Err(invalid("lambda", "must be positive"));
    }
    let kk = 2 * k as i32;
    let p = 4.0 * k as f64 - 2.0 * s;
    let head = |v: f64| {
        if v == 0.0 {
            return lambda.powi(kk) / p;
        }
        let w = lambda * v.powf(2.0 / p);
        lambda.powi(kk) * one_minus_exp_over(w).powi(kk) / p
    };
    let tail = |v: f64| {
        if v == 0.0 {
            return 1.0 / (2.0 * s);
        }
        let t2 = v.powf(-1.0 / s);
        (-(-lambda * t2).exp_m1()).powi(kk) / (2.0 * s)
    };
    let (a, _) = adaptive_gk(head, 0.0, 1.0, 0.0, T_INTEGRAL_TOL)?;
    let (b, _) = adaptive_gk(tail, 0.0, 1.0, 0.0, T_INTEGRAL_TOL)?;
    Ok(a + b)
}

/// κ = c_{s,K} = [∫_0^∞ (1 - e^{-u²})^{2K} u^{-1-2s} du]^{1/2}.
pub fn kappa_constant(s: f64, k: u32) -> Result<f64> {
    Ok(t_integral(1.0, s, k)?.sqrt())
}

/// ‖G_{s,K} f‖₂ evaluated spectrally: [Σ |c_α|² I(λ_α)]^{1/2}, one t-integral
/// per distinct eigenvalue λ_α = 2|α| + n.
pub fn square_function_norm(v: &SpectralVector, s: f64, k: u32) -> Result<f64> {
    check_square_function_range(s, k)?;
    let b = v.basis();
    let orders: Vec<u32> = (0..=b.truncation()).collect();
    let integrals: Vec<f64> = orders
        .par_iter()
        .map(|&o| t_integral((2 * o as usize + b.dim()) as f64, s, k))
        .collect::<Result<_>>()?;
    Ok(sum_f64(
        b.indices()
            .iter()
            .zip(v.coeffs())
            .map(|(a, c)| c.norm_sqr() * integrals[a.order() as usize]),
    )
    .sqrt())
}

/// ‖G_{s,K}(H^{-s/2} f)‖₂ / (κ ‖f‖₂); at most 1 for every f (equal to 1 here).
pub fn kappa_inequality_ratio(v: &SpectralVector, s: f64, k: u32) -> Result<f64> {
    let g = square_function_norm(&fractional_h(v, -s / 2.0), s, k)?;
    Ok(g / (kappa_constant(s, k)? * v.norm()))
}

/// Outcome of the numerical divergence test for the κ integral.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceProbe {
    /// ∫ over [10^{-k}, 10^k] for k = 1, 2, ….
    pub partials: Vec<f64>,
    /// Ratio of the last two per-decade increments.
    pub decay_ratio: f64,
    pub divergent: bool,
}

/// Increments of ∫_{10^{-k}}^{10^k} (1 - e^{-u²})^{2K} u^{-1-2s} du over k.
///
/// A convergent integral has increments shrinking geometrically; the probe
/// fires when the last two increments shrink by less than 10%.
pub fn divergence_probe(s: f64, k: u32) -> DivergenceProbe {
    const DECADES: usize = 8;
    let kk = 2 * k as i32;
    let ln10 = std::f64::consts::LN_10;
    // integrand in y = ln u
    let g = |y: f64| {
        let u2 = (2.0 * y).exp();
        (-(-u2).exp_m1()).powi(kk) * (-2.0 * s * y).exp()
    };
    let piece = |a: f64, b: f64| adaptive_gk(g, a, b, 1e-300, 1e-10).map(|r| r.0).unwrap_or(f64::NAN);
    let mut partials = Vec::with_capacity(DECADES);
    let mut increments = Vec::with_capacity(DECADES);
    let mut total = 0.0;
    for d in 0..DECADES {
        let lo = d as f64 * ln10;
        let hi = (d + 1) as f64 * ln10;
        let inc = piece(-hi, -lo) + piece(lo, hi);
        total += inc;
        increments.push(inc);
        partials.push(total);
    }
    let a = increments[DECADES - 2];
    let b = increments[DECADES - 1];
    let decay_ratio = if a > 0.0 { b / a } else { 0.0 };
    let divergent = !decay_ratio.is_finite() || decay_ratio >= 0.9 || !total.is_finite();
    DivergenceProbe {
        partials,
        decay_ratio,
        divergent,
    }
}

/// ‖ |x|^{2s} · H^{-s} f ‖₂ / ‖f‖₂ for a Hermite vector, by quadrature in the
/// vector's own convention.
pub fn potential_bound_probe(v: &SpectralVector, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        if s == 0.0 {
            return Ok(1.0);
        }
        return Err(invalid("s", format!("must be ≥ 0, got {s}")));
    }
    let conv = v.tag().convention().ok_or(FockError::ConventionMismatch {
        expected: "PaperH or BargmannH",
        got: "Fock",
    })?;
    let norm = v.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let g = fractional_h(v, -s);
    let extra = (4.0 * s).ceil() as usize;
    let order = v.truncation() as usize + extra / 2 + 24;
    let grid = gauss_hermite(order, conv.product_scale(), v.dim())?;
    let basis = v.basis().clone();
    let vals: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            let r2: f64 = x.iter().map(|t| t * t).sum();
            let b = basis_values_real(&basis, conv, x);
            let f = crate::sum::sum_c64(b.iter().zip(g.coeffs()).map(|(bv, c)| c * *bv));
            grid.dx_weight(i) * r2.powf(2.0 * s) * f.norm_sqr()
        })
        .collect();
    Ok(sum_f64(vals).sqrt() / norm)
}

/// ‖f‖₂ + Σ_{m=1}^{k} Σ_{j_1…j_m} ‖H_{j_1}⋯H_{j_m} f‖₂ with every j_i ranging
/// over the 2n ladder operators; the vector is first extended to truncation
/// N + k so no coefficient is lost.
pub fn ladder_norm(v: &SpectralVector, k: u32) -> Result<f64> {
    use crate::spectral::{ladder, Ladder};
    if v.tag().convention().is_none() {
        return Err(FockError::ConventionMismatch {
            expected: "PaperH or BargmannH",
            got: "Fock",
        });
    }
    let lifted = v.with_truncation(v.truncation() + k)?;
    let mut total = v.norm();
    let mut layer = vec![lifted];
    for _ in 0..k {
        let mut next = Vec::with_capacity(layer.len() * 2 * v.dim());
        for w in &layer {
            for axis in 0..v.dim() {
                for dir in [Ladder::Lower, Ladder::Raise] {
                    next.push(ladder(w, dir, axis)?.vector);
                }
            }
        }
        total += sum_f64(next.iter().map(|w| w.norm()));
        layer = next;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;
    use crate::spectral::synthesize_real;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn ladder_norm_of_ground_state() {
        // H_1 ĥ_0 = 0, H_{-1} ĥ_0 = √2 ĥ_1
        let v = SpectralVector::unit(4, &MultiIndex::new(vec![0]), Basis::BargmannH).unwrap();
        assert!((ladder_norm(&v, 1).unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        // second layer: H_1 √2ĥ_1 = √2·√2 ĥ_0, H_{-1} √2ĥ_1 = √2·2 ĥ_2
        assert!((ladder_norm(&v, 2).unwrap() - (1.0 + 2f64.sqrt() + 2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-14);
    }

    fn unit(k: u32, n: u32, tag: Basis) -> SpectralVector {
        SpectralVector::unit(n, &MultiIndex::new(vec![k]), tag).unwrap()
    }

    #[test]
    fn sobolev_examples() {
        let v = SpectralVector::unit(6, &MultiIndex::new(vec![1, 2]), Basis::BargmannH).unwrap();
        assert!((sobolev_norm(&v, 1.5).unwrap() - 8f64.powf(0.75)).abs() < 1e-13);
        let mut w = SpectralVector::zeros(1, 3, Basis::PaperH).unwrap();
        w.coeffs_mut()[0] = C64::new(1.0, 0.0);
        w.coeffs_mut()[1] = C64::new(1.0, 0.0);
        assert!((sobolev_norm(&w, 2.0).unwrap() - 10f64.sqrt()).abs() < 1e-14);
        assert!((sobolev_norm(&w, 0.0).unwrap() - w.norm()).abs() < 1e-15);
        assert!(sobolev_norm(&w, -1.0).is_err());
    }

    #[test]
    fn fractional_powers() {
        let v = unit(2, 4, Basis::PaperH);
        assert!((fractional_h(&v, 1.0).coeff_1d(2).re - 5.0).abs() < 1e-15);
        let v2 = SpectralVector::unit(4, &MultiIndex::new(vec![1, 1]), Basis::PaperH).unwrap();
        assert!((fractional_h(&v2, 1.0).coeff(&MultiIndex::new(vec![1, 1])).re - 6.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = SpectralVector::random(2, 10, 10, Basis::BargmannH, &mut rng).unwrap();
        let back = fractional_h(&fractional_h(&r, 0.7), -0.7);
        assert!(back.axpy(C64::new(-1.0, 0.0), &r).unwrap().norm() < 1e-14);
    }

    #[test]
    fn heat_semigroup_law() {
        let v = unit(0, 4, Basis::PaperH);
        assert!((heat_semigroup(&v, 1.0).unwrap().coeff_1d(0).re - (-1f64).exp()).abs() < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = SpectralVector::random(1, 20, 20, Basis::PaperH, &mut rng).unwrap();
        assert_eq!(heat_semigroup(&r, 0.0).unwrap(), r);
        let a = heat_semigroup(&heat_semigroup(&r, 0.3).unwrap(), 0.4).unwrap();
        let b = heat_semigroup(&r, 0.5).unwrap();
        assert!(a.axpy(C64::new(-1.0, 0.0), &b).unwrap().norm() < 1e-15);
    }

    fn mehler(x: f64, y: f64, t: f64) -> f64 {
        // kernel of e^{-τH}, H = -d²/dx² + x², τ = t²
        let tau = t * t;
        let (sh, ch) = ((2.0 * tau).sinh(), (2.0 * tau).cosh());
        (2.0 * PI * sh).powf(-0.5) * (-((x * x + y * y) * ch - 2.0 * x * y) / (2.0 * sh)).exp()
    }

    #[test]
    fn heat_kernel_converges_to_mehler() {
        let want = mehler(0.0, 0.0, 1.0);
        let mut errs = Vec::new();
        for n in [2u32, 6, 20, 60] {
            let k = heat_kernel(&[0.0], &[0.0], 1.0, n, Convention::PaperH).unwrap();
            errs.push((k - want).abs());
        }
        assert!(errs.windows(2).all(|w| w[1] <= w[0]));
        assert!(errs[3] < 1e-14);
        let k = heat_kernel(&[0.4], &[-0.3], 0.5, 60, Convention::PaperH).unwrap();
        assert!((k - mehler(0.4, -0.3, 0.5)).abs() < 1e-12);
    }

    #[test]
    fn weighted_fock_norm_of_constant_and_s0() {
        let g = gauss_hermite(24, 1.0, 2).unwrap();
        let one = unit(0, 6, Basis::Fock);
        for s in [0.0, 1.0, 2.5] {
            assert!((weighted_fock_norm(&one, s, &g).unwrap() - 1.0).abs() < 1e-13);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = SpectralVector::random(1, 6, 6, Basis::Fock, &mut rng).unwrap();
        assert!((weighted_fock_norm(&r, 0.0, &g).unwrap() - r.norm()).abs() < 1e-12);
        let g1 = gauss_hermite(24, 1.0, 1).unwrap();
        assert!(weighted_fock_norm(&r, 0.0, &g1).is_err());
    }

    fn kappa_sq_closed_form(s: f64, k: u32) -> f64 {
        // (1/2) Γ(-s) Σ_j C(2K, j) (-1)^j j^s for non-integer s
        let mut acc = 0.0;
        let mut binom = 1.0;
        for j in 0..=2 * k {
            if j > 0 {
                binom *= (2 * k - j + 1) as f64 / j as f64;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * binom * (j as f64).powf(s);
            }
        }
        // Γ(-s) by reflection: Γ(-s) = -π / (s sin(πs) Γ(s))
        let gamma_s = if (s - 0.5).abs() < 1e-15 {
            PI.sqrt()
        } else if (s - 2.5).abs() < 1e-15 {
            1.5 * 0.5 * PI.sqrt()
        } else {
            panic!("no Γ table entry for s = {s}")
        };
        0.5 * (-PI / (s * (PI * s).sin() * gamma_s)) * acc
    }

    #[test]
    fn kappa_matches_closed_form() {
        let want = (PI.sqrt() * (2.0 - 2f64.sqrt())).sqrt();
        assert!((kappa_constant(0.5, 1).unwrap() - want).abs() < 1e-10);
        assert!((kappa_constant(0.5, 1).unwrap().powi(2) - kappa_sq_closed_form(0.5, 1)).abs() < 1e-10);
        let c = kappa_constant(2.5, 2).unwrap().powi(2);
        assert!((c / kappa_sq_closed_form(2.5, 2) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kappa_against_log_substitution() {
        for (s, k) in [(0.5, 1u32), (1.0, 1), (3.0, 2), (1.7, 3)] {
            let kk = 2 * k as i32;
            let g = |y: f64| {
                let u2 = (2.0 * y).exp();
                (-(-u2).exp_m1()).powi(kk) * (-2.0 * s * y).exp()
            };
            let (direct, _) = adaptive_gk(g, -60.0, 40.0, 1e-300, 1e-13).unwrap();
            let kap = kappa_constant(s, k).unwrap();
            assert!((kap * kap - direct).abs() < 1e-9 * direct, "s={s} K={k}");
        }
    }

    #[test]
    fn t_integral_scales_like_lambda_to_the_s() {
        for (s, k) in [(0.5, 1u32), (3.0, 2)] {
            let c2 = t_integral(1.0, s, k).unwrap();
            for lambda in [3.0, 41.0, 129.0] {
                let got = t_integral(lambda, s, k).unwrap();
                assert!((got / (c2 * f64::powf(lambda, s)) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kappa_blows_up_near_the_edge() {
        let vals: Vec<f64> = [1.5, 1.9, 1.99]
            .iter()
            .map(|&s| kappa_constant(s, 1).unwrap())
            .collect();
        assert!(vals[0] < vals[1] && vals[1] < vals[2]);
        assert!(matches!(kappa_constant(2.0, 1), Err(FockError::Divergent { .. })));
        assert!(kappa_constant(0.0, 1).is_err());
    }

    #[test]
    fn divergence_probe_separates() {
        assert!(divergence_probe(2.0, 1).divergent);
        assert!(divergence_probe(4.0, 2).divergent);
        assert!(divergence_probe(0.0, 1).divergent);
        assert!(!divergence_probe(1.0, 1).divergent);
        assert!(!divergence_probe(0.5, 1).divergent);
    }

    #[test]
    fn square_function_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = SpectralVector::random(1, 16, 16, Basis::PaperH, &mut rng).unwrap();
        for (s, k) in [(0.5, 1u32), (1.0, 1), (3.0, 2)] {
            let g = square_function_norm(&v, s, k).unwrap();
            let h = fractional_h(&v, s / 2.0).norm();
            assert!((g / (kappa_constant(s, k).unwrap() * h) - 1.0).abs() < 1e-10);
            assert!((kappa_inequality_ratio(&v, s, k).unwrap() - 1.0).abs() < 1e-10);
        }
        assert!(square_function_norm(&v, 2.0, 1).is_err());
    }

    #[test]
    fn potential_probe_values() {
        let p = unit(0, 4, Basis::PaperH);
        assert!((potential_bound_probe(&p, 1.0).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-13);
        let b = unit(0, 4, Basis::BargmannH);
        assert!((potential_bound_probe(&b, 1.0).unwrap() - 3f64.sqrt() / 4.0).abs() < 1e-13);
        assert_eq!(potential_bound_probe(&b, 0.0).unwrap(), 1.0);
        // x² h_1 / 3 by direct quadrature
        let v = unit(1, 4, Basis::PaperH);
        let g = gauss_hermite(40, 1.0, 1).unwrap();
        let direct = g
            .integrate_dx(|x| {
                let f = synthesize_real(&v, x).unwrap().re / 3.0;
                x[0].powi(4) * f * f
            })
            .sqrt();
        assert!((potential_bound_probe(&v, 1.0).unwrap() - direct).abs() < 1e-13);
    }
}
