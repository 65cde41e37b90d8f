//! Gauss–Hermite grids, composite Gauss–Legendre line rules and adaptive
//! Gauss–Kronrod integration.
//!
//! A [`QuadratureGrid`] integrates g ↦ ∫ g(x) e^{-σ|x|²} dx over ℝⁿ. It also
//! carries *dx-weights* W_i = w_i e^{σ|x_i|²}, which integrate g ↦ ∫ g(x) dx
//! and are exact whenever g is a polynomial times e^{-σ|x|²}. Every
//! basis-product integral in this crate goes through dx-weights, so Gaussian
//! factors never have to be divided out.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, FockError, Result};
use crate::hermite::{hermite_functions_real, Convention};

/// Default cap on the Gauss–Hermite order; node accuracy is not checked beyond it.
pub const DEFAULT_MAX_ORDER: usize = 512;

/// Tensor grids above this many points are refused.
pub const MAX_GRID_POINTS: usize = 20_000_000;

/// One-dimensional unit rule for the weight e^{-x²}.
#[derive(Debug)]
struct UnitRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dx_weights: Vec<f64>,
}

fn unit_rule_cache() -> &'static Mutex<HashMap<usize, Arc<UnitRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<UnitRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn unit_rule(order: usize) -> Arc<UnitRule> {
    if let Some(r) = unit_rule_cache().lock().unwrap().get(&order) {
        return r.clone();
    }
    let rule = Arc::new(build_unit_rule(order));
    unit_rule_cache().lock().unwrap().insert(order, rule.clone());
    rule
}

/// Golub–Welsch eigen-solve of the Jacobi matrix, then Newton polishing on the
/// normalized Hermite function h_Q and Christoffel weights W = 1/(Q h_{Q-1}²).
fn build_unit_rule(q: usize) -> UnitRule {
    let mut jac = DMatrix::<f64>::zeros(q, q);
    for k in 1..q {
        let b = (k as f64 / 2.0).sqrt();
        jac[(k, k - 1)] = b;
        jac[(k - 1, k)] = b;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut h = vec![0.0; q + 1];
    let qf = q as f64;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            hermite_functions_real(*x, Convention::PaperH, &mut h);
            let step = h[q] / ((2.0 * qf).sqrt() * h[q - 1]);
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() < 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
    }
    // exact symmetry about the origin
    for i in 0..q / 2 {
        let m = 0.5 * (nodes[q - 1 - i] - nodes[i]);
        nodes[i] = -m;
        nodes[q - 1 - i] = m;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    let mut dx_weights = Vec::with_capacity(q);
    let mut hq = vec![0.0; q];
    for &x in &nodes {
        hermite_functions_real(x, Convention::PaperH, &mut hq);
        dx_weights.push(1.0 / (qf * hq[q - 1] * hq[q - 1]));
    }
    for i in 0..q / 2 {
        let m = 0.5 * (dx_weights[i] + dx_weights[q - 1 - i]);
        dx_weights[i] = m;
        dx_weights[q - 1 - i] = m;
    }
    let weights = nodes.iter().zip(&dx_weights).map(|(x, w)| w * (-x * x).exp()).collect();
    UnitRule {
        nodes,
        weights,
        dx_weights,
    }
}

/// Tensorized Gauss–Hermite rule for ∫_{ℝⁿ} g(x) e^{-σ|x|²} dx.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    order: usize,
    dim: usize,
    scale: f64,
    /// Flattened Qⁿ × n node coordinates; the last axis varies fastest.
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dx_weights: Vec<f64>,
    nodes_1d: Vec<f64>,
    dx_weights_1d: Vec<f64>,
}

/// Gauss–Hermite grid of `order` points per axis for the weight e^{-scale·|x|²} on ℝ^dim.
pub fn gauss_hermite(order: usize, scale: f64, dim: usize) -> Result<QuadratureGrid> {
    gauss_hermite_with_max(order, scale, dim, DEFAULT_MAX_ORDER)
}

pub fn gauss_hermite_with_max(order: usize, scale: f64, dim: usize, max_order: usize) -> Result<QuadratureGrid> {
    if order == 0 {
        return Err(invalid("order", "must be at least 1"));
    }
    if order > max_order {
        return Err(FockError::OrderTooLarge { order, max: max_order });
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(invalid("scale", format!("must be positive, got {scale}")));
    }
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let total = (order as f64).powi(dim as i32);
    if total > MAX_GRID_POINTS as f64 {
        return Err(invalid(
            "dim",
            format!("{order}^{dim} grid points exceed the limit {MAX_GRID_POINTS}"),
        ));
    }
    let unit = unit_rule(order);
    let rs = scale.sqrt();
    let nodes_1d: Vec<f64> = unit.nodes.iter().map(|x| x / rs).collect();
    let w_1d: Vec<f64> = unit.weights.iter().map(|w| w / rs).collect();
    let dxw_1d: Vec<f64> = unit.dx_weights.iter().map(|w| w / rs).collect();

    let npts = order.pow(dim as u32);
    let mut nodes = Vec::with_capacity(npts * dim);
    let mut weights = Vec::with_capacity(npts);
    let mut dx_weights = Vec::with_capacity(npts);
    let mut idx = vec![0usize; dim];
    for _ in 0..npts {
        let mut w = 1.0;
        let mut wd = 1.0;
        for &i in &idx {
            nodes.push(nodes_1d[i]);
            w *= w_1d[i];
            wd *= dxw_1d[i];
        }
        weights.push(w);
        dx_weights.push(wd);
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < order {
                break;
            }
            idx[a] = 0;
        }
    }
    Ok(QuadratureGrid {
        order,
        dim,
        scale,
        nodes,
        weights,
        dx_weights,
        nodes_1d,
        dx_weights_1d: dxw_1d,
    })
}

impl QuadratureGrid {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn dx_weight(&self, i: usize) -> f64 {
        self.dx_weights[i]
    }

    pub fn dx_weights(&self) -> &[f64] {
        &self.dx_weights
    }

    pub fn nodes_1d(&self) -> &[f64] {
        &self.nodes_1d
    }

    pub fn dx_weights_1d(&self) -> &[f64] {
        &self.dx_weights_1d
    }

    /// ∫ g(x) e^{-σ|x|²} dx.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        crate::sum::sum_f64((0..self.len()).map(|i| self.weights[i] * g(self.node(i))))
    }

    /// ∫ g(x) dx for g decaying like e^{-σ|x|²}.
    pub fn integrate_dx<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        crate::sum::sum_f64((0..self.len()).map(|i| self.dx_weights[i] * g(self.node(i))))
    }

    /// The 1-D dx rule of this grid as a [`LineRule`].
    pub fn line_rule(&self) -> LineRule {
        LineRule {
            nodes: self.nodes_1d.clone(),
            dx_weights: self.dx_weights_1d.clone(),
        }
    }
}

/// A one-dimensional rule for ∫ g(x) dx over the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRule {
    pub nodes: Vec<f64>,
    pub dx_weights: Vec<f64>,
}

impl LineRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        crate::sum::sum_f64(self.nodes.iter().zip(&self.dx_weights).map(|(&x, &w)| w * g(x)))
    }

    /// Composite Gauss–Legendre on [-half_width, half_width], split at every
    /// breakpoint inside the interval, with panels no wider than `panel`.
    pub fn composite_legendre(
        half_width: f64,
        breakpoints: &[f64],
        panel: f64,
        points_per_panel: usize,
    ) -> Result<Self> {
        if !(half_width > 0.0) || !(panel > 0.0) {
            return Err(invalid("half_width", "interval and panel width must be positive"));
        }
        let (gx, gw) = gauss_legendre(points_per_panel)?;
        let mut cuts = vec![-half_width, half_width];
        cuts.extend(breakpoints.iter().copied().filter(|b| b.abs() < half_width));
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut nodes = Vec::new();
        let mut dx_weights = Vec::new();
        for seg in cuts.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let pieces = ((b - a) / panel).ceil().max(1.0) as usize;
            let h = (b - a) / pieces as f64;
            for p in 0..pieces {
                let lo = a + p as f64 * h;
                let mid = lo + 0.5 * h;
                for (x, w) in gx.iter().zip(&gw) {
                    nodes.push(mid + 0.5 * h * x);
                    dx_weights.push(0.5 * h * w);
                }
            }
        }
        Ok(Self { nodes, dx_weights })
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(invalid("order", "must be at least 1"));
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    Ok((x, w))
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive Gauss–Kronrod (G7/K15) on a finite interval.
///
/// Bisects the panel with the largest error estimate until the summed estimate
/// is below max(abs_tol, rel_tol·|I|). Returns (integral, error estimate).
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<(f64, f64)> {
    const MAX_PANELS: usize = 4000;
    let (v, e) = kronrod15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = crate::sum::sum_f64(panels.iter().map(|p| p.2));
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok((total, err));
        }
        if panels.len() >= MAX_PANELS {
            return Err(FockError::QuadratureFailed {
                tol: abs_tol.max(rel_tol * total.abs()),
                err,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_moment(k: u32, sigma: f64) -> f64 {
        // ∫ x^k e^{-σx²} dx = Γ((k+1)/2) / σ^{(k+1)/2} for even k
        if k % 2 == 1 {
            return 0.0;
        }
        let mut g = PI.sqrt(); // Γ(1/2)
        let mut a = 0.5;
        for _ in 0..k / 2 {
            g *= a;
            a += 1.0;
        }
        g / sigma.powf((k as f64 + 1.0) / 2.0)
    }

    #[test]
    fn one_point_rule() {
        let g = gauss_hermite(1, 1.0, 1).unwrap();
        assert_eq!(g.node(0), &[0.0]);
        assert!((g.weight(0) - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let g = gauss_hermite(2, 1.0, 1).unwrap();
        let s = 0.5f64.sqrt();
        assert!((g.node(0)[0] + s).abs() < 1e-15);
        assert!((g.node(1)[0] - s).abs() < 1e-15);
        assert!((g.weight(0) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((g.weight(1) - PI.sqrt() / 2.0).abs() < 1e-15);
        let m2 = g.integrate(|x| x[0] * x[0]);
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_on_monomials_up_to_degree_2q_minus_1() {
        for &q in &[3usize, 8, 20, 40] {
            for &sigma in &[1.0, 2.0, 0.5] {
                let g = gauss_hermite(q, sigma, 1).unwrap();
                for k in 0..(2 * q as u32) {
                    let got = g.integrate(|x| x[0].powi(k as i32));
                    let want = gaussian_moment(k, sigma);
                    let scale = gaussian_moment(k + (k % 2), sigma).max(1.0);
                    assert!(
                        (got - want).abs() <= 1e-12 * scale,
                        "q={q} σ={sigma} k={k}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn weights_sum_to_gaussian_mass() {
        for &(q, sigma, n) in &[
            (10usize, 1.0, 1usize),
            (64, 2.0, 1),
            (300, 1.0, 1),
            (512, 3.0, 1),
            (12, 2.0, 2),
            (6, 1.0, 3),
        ] {
            let g = gauss_hermite(q, sigma, n).unwrap();
            let s: f64 = crate::sum::sum_f64(g.weights().iter().copied());
            let want = (PI / sigma).powf(n as f64 / 2.0);
            assert!((s / want - 1.0).abs() < 1e-12, "q={q}: {s} vs {want}");
        }
    }

    #[test]
    fn scaled_rule_is_rescaled_unit_rule() {
        let u = gauss_hermite(9, 1.0, 1).unwrap();
        let s = gauss_hermite(9, 4.0, 1).unwrap();
        for i in 0..9 {
            assert!((s.node(i)[0] - u.node(i)[0] / 2.0).abs() < 1e-15);
            assert!((s.weight(i) - u.weight(i) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn high_order_nodes_are_roots() {
        let g = gauss_hermite(400, 1.0, 1).unwrap();
        let mut h = vec![0.0; 401];
        for &x in g.nodes_1d() {
            hermite_functions_real(x, Convention::PaperH, &mut h);
            // h_Q vanishes at the nodes relative to its neighbours
            assert!(h[400].abs() <= 1e-11 * h[399].abs().max(1e-300), "x={x}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_hermite(0, 1.0, 1).is_err());
        assert!(gauss_hermite(4, 0.0, 1).is_err());
        assert!(gauss_hermite(4, 1.0, 0).is_err());
        assert!(matches!(
            gauss_hermite(513, 1.0, 1),
            Err(FockError::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn legendre_and_kronrod() {
        let (x, w) = gauss_legendre(5).unwrap();
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
        let (v, _) = adaptive_gk(|x: f64| x.sqrt(), 0.0, 1.0, 1e-13, 1e-13).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let r = LineRule::composite_legendre(3.0, &[0.0], 0.5, 10).unwrap();
        let v = r.integrate(|x| if x > 0.0 { (-x * x).exp() } else { 0.0 });
        assert!((v - 0.5 * PI.sqrt() * ERF_3).abs() < 1e-13);
    }

    const ERF_3: f64 = 0.999_977_909_503_001_4;
}
