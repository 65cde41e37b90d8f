//! Zhu's operator S_φF(z) = ∫ F(w) e^{z·w̄} φ(z - w̄) dλ(w) and the Fourier
//! multiplier matrices it is compared with.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, FockError, Result};
use crate::hermite::Convention;
use crate::matrix::OperatorMatrix;
use crate::multi_index::GradedBasis;
use crate::multiplier::MultiplierSpec;
use crate::quadrature::{gauss_hermite, LineRule, QuadratureGrid};
use crate::spectral::{basis_values, basis_values_real, synthesize, Basis, SpectralVector};
use crate::sum::ComplexSum;
use crate::symbol::{to_complex, SymbolRule, SymbolSpec};
use crate::transforms::minus_i_pow;

/// Terms whose share of the integral is below this are reported as safe.
const GROWTH_WARN: f64 = 1e-10;

fn check_grid2n(grid2n: &QuadratureGrid, dim: usize) -> Result<()> {
    if grid2n.dim() != 2 * dim {
        return Err(FockError::DimensionMismatch {
            expected: 2 * dim,
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
    Ok(())
}

/// e^{z·w̄} φ(z - w̄).
pub fn zhu_kernel(phi: &SymbolSpec, z: &[C64], w: &[C64]) -> C64 {
    let wb: Vec<C64> = w.iter().map(|v| v.conj()).collect();
    let zeta: Vec<C64> = z.iter().zip(&wb).map(|(a, b)| a - b).collect();
    match phi.rule() {
        // e^{z·w̄} φ(z - w̄) = e^{(z·z + w̄·w̄)/2} · φ(ζ) e^{-ζ·ζ/2}
        Some(_) => {
            let s: C64 = z.iter().map(|a| a * a).sum::<C64>() + wb.iter().map(|b| b * b).sum::<C64>();
            (0.5 * s).exp() * phi.reduced(&zeta)
        }
        None => {
            let zw: C64 = z.iter().zip(&wb).map(|(a, b)| a * b).sum();
            zw.exp() * phi.eval(&zeta)
        }
    }
}

/// S_φF(z) by quadrature over w on a 2n-dimensional scale-1 grid.
pub fn s_phi_apply(phi: &SymbolSpec, f: &SpectralVector, z: &[C64], grid2n: &QuadratureGrid) -> Result<C64> {
    if f.tag() != Basis::Fock {
        return Err(FockError::ConventionMismatch {
            expected: "Fock",
            got: f.tag().name(),
        });
    }
    check_grid2n(grid2n, phi.dim())?;
    if z.len() != phi.dim() || f.dim() != phi.dim() {
        return Err(FockError::DimensionMismatch {
            expected: phi.dim(),
            got: z.len(),
        });
    }
    let norm = PI.powi(-(phi.dim() as i32));
    let terms: Vec<C64> = (0..grid2n.len())
        .into_par_iter()
        .map(|i| {
            let w = to_complex(grid2n.node(i));
            let fw = synthesize(f, &w).unwrap_or(C64::new(f64::NAN, 0.0));
            fw * zhu_kernel(phi, z, &w) * (grid2n.weight(i) * norm)
        })
        .collect();
    warn_on_edge_growth(phi.name(), grid2n, &terms);
    let mut acc = ComplexSum::new();
    for t in &terms {
        acc.add(*t);
    }
    Ok(acc.value())
}

fn warn_on_edge_growth(name: &str, grid: &QuadratureGrid, terms: &[C64]) {
    let peak = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let outer = grid.nodes_1d().iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let edge = (0..grid.len())
        .filter(|&i| grid.node(i).iter().any(|x| (x.abs() - outer).abs() < 1e-12))
        .map(|i| terms[i].norm())
        .fold(0.0, f64::max);
    if !(edge <= GROWTH_WARN * peak) {
        log::warn!("S_phi[{name}]: outermost nodes carry {:.2e} of the peak term; the Gaussian weight no longer compensates the kernel growth", edge / peak);
    }
}

/// How [`s_phi_matrix`] evaluates the double integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SPhiRoute {
    /// Factorized for multiplier-derived symbols, streaming otherwise.
    Auto,
    /// e^{z·w̄}φ(z - w̄) = Σ_i c_i A_i(z) conj(A_i(w)) with A_i(z) = e^{z·z/2 + 2ix_i·z};
    /// the z and w integrals then separate.
    Factorized,
    /// The kernel is evaluated on every node pair, one z-row at a time.
    Streaming,
}

/// ⟨S_φ e_β, e_α⟩_{F²} for |α|, |β| ≤ N by quadrature on a 2n-dimensional scale-1 grid.
pub fn s_phi_matrix(phi: &SymbolSpec, truncation: u32, grid2n: &QuadratureGrid) -> Result<OperatorMatrix> {
    s_phi_matrix_with(phi, truncation, grid2n, SPhiRoute::Auto)
}

pub fn s_phi_matrix_with(
    phi: &SymbolSpec,
    truncation: u32,
    grid2n: &QuadratureGrid,
    route: SPhiRoute,
) -> Result<OperatorMatrix> {
    check_grid2n(grid2n, phi.dim())?;
    let basis = GradedBasis::new(phi.dim(), truncation)?;
    let entries = match (route, phi.rule()) {
        (SPhiRoute::Auto | SPhiRoute::Factorized, Some(rule)) => factorized(rule, &basis, grid2n)?,
        (SPhiRoute::Factorized, None) => {
            return Err(invalid(
                "route",
                "the factorized route needs a multiplier-derived symbol",
            ))
        }
        _ => streaming(phi, &basis, grid2n)?,
    };
    OperatorMatrix::from_entries(basis, Basis::Fock, entries)
}

/// conj(e_α(z)) times the dλ weight at every node: rows α, columns nodes.
fn weighted_monomials(
    basis: &GradedBasis,
    grid2n: &QuadratureGrid,
    extra: impl Fn(&[C64]) -> C64 + Sync,
) -> Result<DMatrix<C64>> {
    let norm = PI.powi(-(basis.dim() as i32));
    let cols: Vec<Vec<C64>> = (0..grid2n.len())
        .into_par_iter()
        .map(|i| {
            let z = to_complex(grid2n.node(i));
            let e = basis_values(basis, Basis::Fock, &z)?;
            let f = extra(&z) * (grid2n.weight(i) * norm);
            Ok(e.into_iter().map(|v| v.conj() * f).collect())
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(basis.len(), grid2n.len(), |a, i| cols[i][a]))
}

fn factorized(rule: &SymbolRule, basis: &GradedBasis, grid2n: &QuadratureGrid) -> Result<DMatrix<C64>> {
    // G[α, z] = conj(e_α(z)) e^{z·z/2} dλ(z)
    let g = weighted_monomials(basis, grid2n, |z| (0.5 * z.iter().map(|v| v * v).sum::<C64>()).exp())?;
    let zs: Vec<Vec<C64>> = (0..grid2n.len()).map(|i| to_complex(grid2n.node(i))).collect();
    // |c_i| |P_i|² ≲ |c_i| e^{4|x_i|²/3}: drop nodes far below the largest coefficient
    let cmax = (0..rule.len()).map(|i| rule.coeff(i).norm()).fold(0.0, f64::max);
    let live: Vec<usize> = (0..rule.len())
        .filter(|&i| {
            let x2: f64 = rule.node(i).iter().map(|x| x * x).sum();
            let c = rule.coeff(i).norm();
            c > 0.0 && c.ln() + 4.0 * x2 / 3.0 > cmax.ln() - 40.0
        })
        .collect();
    const BLOCK: usize = 128;
    let blocks: Vec<DMatrix<C64>> = live
        .par_chunks(BLOCK)
        .map(|chunk| {
            // E[z, i] = e^{2i x_i·z}; P = G E
            let e = DMatrix::from_fn(zs.len(), chunk.len(), |zi, k| {
                let x = rule.node(chunk[k]);
                x.iter()
                    .zip(&zs[zi])
                    .map(|(a, z)| C64::new(0.0, 2.0 * a) * z)
                    .sum::<C64>()
                    .exp()
            });
            let p = &g * e;
            // Σ_i c_i P_i P_i^H
            let mut pc = p.clone();
            for (k, &i) in chunk.iter().enumerate() {
                let c = rule.coeff(i);
                pc.column_mut(k).iter_mut().for_each(|v| *v *= c);
            }
            pc * p.adjoint()
        })
        .collect();
    let l = basis.len();
    Ok(DMatrix::from_fn(l, l, |a, b| {
        let mut acc = ComplexSum::new();
        for blk in &blocks {
            acc.add(blk[(a, b)]);
        }
        acc.value()
    }))
}

fn streaming(phi: &SymbolSpec, basis: &GradedBasis, grid2n: &QuadratureGrid) -> Result<DMatrix<C64>> {
    let l = basis.len();
    let gz = weighted_monomials(basis, grid2n, |_| C64::new(1.0, 0.0))?;
    // e_β(w) dλ(w) = conj of the same weights
    let ew = gz.map(|v| v.conj());
    let zs: Vec<Vec<C64>> = (0..grid2n.len()).map(|i| to_complex(grid2n.node(i))).collect();
    let rows: Vec<Vec<C64>> = (0..zs.len())
        .into_par_iter()
        .map(|zi| {
            // v[β] = Σ_w K(z, w) e_β(w) dλ(w)
            let k: Vec<C64> = zs.iter().map(|w| zhu_kernel(phi, &zs[zi], w)).collect();
            (0..l)
                .map(|b| {
                    let mut acc = ComplexSum::new();
                    for (wi, kv) in k.iter().enumerate() {
                        acc.add(kv * ew[(b, wi)]);
                    }
                    acc.value()
                })
                .collect()
        })
        .collect();
    Ok(DMatrix::from_fn(l, l, |a, b| {
        let mut acc = ComplexSum::new();
        for (zi, row) in rows.iter().enumerate() {
            acc.add(gz[(a, zi)] * row[b]);
        }
        acc.value()
    }))
}

/// Default Gauss–Hermite order for smooth multiplier matrices.
pub fn default_multiplier_order(truncation: u32) -> usize {
    2 * truncation as usize + 16
}

/// ∫ m ĥ_β ĥ_α on a scale-2 Gauss–Hermite grid of order ≥ 2N.
pub fn multiplier_matrix_on_grid(m: &MultiplierSpec, truncation: u32, grid: &QuadratureGrid) -> Result<OperatorMatrix> {
    let dim = grid.dim();
    m.check_dim(dim)?;
    if (grid.scale() - 2.0).abs() > 1e-14 {
        return Err(FockError::ScaleMismatch {
            grid: grid.scale(),
            expected: 2.0,
            convention: "BargmannH",
        });
    }
    if grid.order() < 2 * truncation as usize {
        return Err(invalid(
            "grid",
            format!("order {} is below 2N = {}", grid.order(), 2 * truncation),
        ));
    }
    let basis = GradedBasis::new(dim, truncation)?;
    let pts: Vec<(C64, Vec<f64>)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.node(i);
            (
                m.eval(x) * grid.dx_weight(i),
                basis_values_real(&basis, Convention::BargmannH, x),
            )
        })
        .collect();
    assemble(basis, pts)
}

/// ∫ m ĥ_β ĥ_α with the rule chosen from the multiplier: Gauss–Hermite for
/// smooth m, composite Gauss–Legendre split at the breakpoints otherwise.
pub fn multiplier_matrix(m: &MultiplierSpec, dim: usize, truncation: u32) -> Result<OperatorMatrix> {
    m.check_dim(dim)?;
    if m.is_smooth() {
        let grid = gauss_hermite(default_multiplier_order(truncation), 2.0, dim)?;
        return multiplier_matrix_on_grid(m, truncation, &grid);
    }
    let half = (truncation as f64 + 0.5).sqrt() + 6.0;
    let rule = LineRule::composite_legendre(half, m.breakpoints(), 0.0625, 20)?;
    multiplier_matrix_on_line(m, truncation, &rule)
}

/// ∫ m ĥ_β ĥ_α dx with an explicit one-dimensional rule.
pub fn multiplier_matrix_on_line(m: &MultiplierSpec, truncation: u32, rule: &LineRule) -> Result<OperatorMatrix> {
    m.check_dim(1)?;
    let basis = GradedBasis::new(1, truncation)?;
    let pts: Vec<(C64, Vec<f64>)> = rule
        .nodes
        .par_iter()
        .zip(rule.dx_weights.par_iter())
        .map(|(&x, &w)| (m.eval(&[x]) * w, basis_values_real(&basis, Convention::BargmannH, &[x])))
        .collect();
    assemble(basis, pts)
}

fn assemble(basis: std::sync::Arc<GradedBasis>, pts: Vec<(C64, Vec<f64>)>) -> Result<OperatorMatrix> {
    let l = basis.len();
    let rows: Vec<Vec<C64>> = (0..l)
        .into_par_iter()
        .map(|a| {
            (0..l)
                .map(|b| {
                    let mut acc = ComplexSum::new();
                    for (w, h) in &pts {
                        acc.add(w * (h[a] * h[b]));
                    }
                    acc.value()
                })
                .collect()
        })
        .collect();
    OperatorMatrix::from_entries(basis, Basis::BargmannH, DMatrix::from_fn(l, l, |a, b| rows[a][b]))
}

/// 𝓑 𝓕⁻¹ M_m 𝓕 𝓑⁻¹ on Fock coefficients: i^{|α|} M_{αβ} (-i)^{|β|}.
pub fn conjugate_to_fock(mm: &OperatorMatrix) -> Result<OperatorMatrix> {
    if mm.tag() != Basis::BargmannH {
        return Err(FockError::ConventionMismatch {
            expected: "BargmannH",
            got: mm.tag().name(),
        });
    }
    let basis = mm.basis().clone();
    let ph: Vec<C64> = basis.indices().iter().map(|a| minus_i_pow(a.order())).collect();
    let e = DMatrix::from_fn(basis.len(), basis.len(), |a, b| ph[a].conj() * mm.get(a, b) * ph[b]);
    Ok(OperatorMatrix::from_entries(basis, Basis::Fock, e)?.with_smoothness(mm.domain_s(), mm.codomain_s()))
}

pub fn conjugated_multiplier_matrix(m: &MultiplierSpec, dim: usize, truncation: u32) -> Result<OperatorMatrix> {
    conjugate_to_fock(&multiplier_matrix(m, dim, truncation)?)
}
