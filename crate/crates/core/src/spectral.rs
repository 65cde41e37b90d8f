//! Truncated coefficient vectors and their link to point values.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, FockError, Result};
use crate::hermite::{hermite_functions_into, hermite_functions_real, Convention};
use crate::multi_index::{GradedBasis, MultiIndex};
use crate::quadrature::QuadratureGrid;
use crate::sum::ComplexSum;

/// Which orthonormal system a coefficient vector refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    PaperH,
    BargmannH,
    /// Monomials e_α(z) = z^α / √(α!) of the Fock space.
    Fock,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::PaperH => "PaperH",
            Basis::BargmannH => "BargmannH",
            Basis::Fock => "Fock",
        }
    }

    pub fn convention(self) -> Option<Convention> {
        match self {
            Basis::PaperH => Some(Convention::PaperH),
            Basis::BargmannH => Some(Convention::BargmannH),
            Basis::Fock => None,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Basis::PaperH => 0,
            Basis::BargmannH => 1,
            Basis::Fock => 2,
        }
    }

    pub fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(Basis::PaperH),
            1 => Some(Basis::BargmannH),
            2 => Some(Basis::Fock),
            _ => None,
        }
    }
}

impl From<Convention> for Basis {
    fn from(c: Convention) -> Self {
        match c {
            Convention::PaperH => Basis::PaperH,
            Convention::BargmannH => Basis::BargmannH,
        }
    }
}

/// Coefficients {c_α : |α| ≤ N} in the graded enumeration of [`GradedBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    basis: Arc<GradedBasis>,
    tag: Basis,
    coeffs: Vec<C64>,
}

impl SpectralVector {
    pub fn zeros(dim: usize, truncation: u32, tag: Basis) -> Result<Self> {
        let basis = GradedBasis::new(dim, truncation)?;
        let coeffs = vec![C64::new(0.0, 0.0); basis.len()];
        Ok(Self { basis, tag, coeffs })
    }

    pub fn from_coeffs(basis: Arc<GradedBasis>, tag: Basis, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(FockError::DimensionMismatch {
                expected: basis.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { basis, tag, coeffs })
    }

    /// Unit vector at α.
    pub fn unit(truncation: u32, alpha: &MultiIndex, tag: Basis) -> Result<Self> {
        let mut v = Self::zeros(alpha.dim(), truncation, tag)?;
        let i = v
            .basis
            .position(alpha)
            .ok_or_else(|| invalid("alpha", format!("|{alpha}| exceeds truncation {truncation}")))?;
        v.coeffs[i] = C64::new(1.0, 0.0);
        Ok(v)
    }

    /// Unit-norm vector with uniformly random complex coefficients on |α| ≤ `band`.
    pub fn random<R: Rng + ?Sized>(dim: usize, truncation: u32, band: u32, tag: Basis, rng: &mut R) -> Result<Self> {
        let mut v = Self::zeros(dim, truncation, tag)?;
        let live = v.basis.prefix_len(band.min(truncation));
        for c in v.coeffs[..live].iter_mut() {
            *c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let n = v.norm();
        if n > 0.0 {
            v.scale_mut(C64::new(1.0 / n, 0.0));
        }
        Ok(v)
    }

    /// `count` independent [`Self::random`] draws from one seeded stream.
    pub fn random_set(
        seed: u64,
        count: usize,
        dim: usize,
        truncation: u32,
        band: u32,
        tag: Basis,
    ) -> Result<Vec<Self>> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| Self::random(dim, truncation, band, tag, &mut rng))
            .collect()
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn tag(&self) -> Basis {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn truncation(&self) -> u32 {
        self.basis.truncation()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C64 {
        self.basis
            .position(alpha)
            .map_or(C64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// Coefficient at the 1-D index k (only meaningful for n = 1).
    pub fn coeff_1d(&self, k: u32) -> C64 {
        self.coeff(&MultiIndex::new(vec![k]))
    }

    /// Same coefficients under a different tag.
    pub fn retag(mut self, tag: Basis) -> Self {
        self.tag = tag;
        self
    }

    /// L² (= F²) norm, i.e. the Euclidean norm of the coefficients.
    pub fn norm(&self) -> f64 {
        crate::sum::sum_f64(self.coeffs.iter().map(|c| c.norm_sqr())).sqrt()
    }

    pub fn scale_mut(&mut self, a: C64) {
        for c in self.coeffs.iter_mut() {
            *c *= a;
        }
    }

    pub fn scaled(&self, a: C64) -> Self {
        let mut v = self.clone();
        v.scale_mut(a);
        v
    }

    /// self + a·other; both must share dimension, truncation and tag.
    pub fn axpy(&self, a: C64, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + a * y).collect();
        Ok(Self {
            basis: self.basis.clone(),
            tag: self.tag,
            coeffs,
        })
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.tag != other.tag {
            return Err(FockError::ConventionMismatch {
                expected: self.tag.name(),
                got: other.tag.name(),
            });
        }
        if self.basis.dim() != other.basis.dim() || self.basis.truncation() != other.basis.truncation() {
            return Err(FockError::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }

    /// Pads with zeros or drops coefficients to reach truncation `n`.
    pub fn with_truncation(&self, n: u32) -> Result<Self> {
        let mut out = Self::zeros(self.dim(), n, self.tag)?;
        let keep = self.basis.prefix_len(n).min(out.len());
        out.coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        Ok(out)
    }

    /// Euclidean norm of the coefficients with |α| ≤ `order`.
    pub fn norm_up_to(&self, order: u32) -> f64 {
        let k = self.basis.prefix_len(order);
        crate::sum::sum_f64(self.coeffs[..k].iter().map(|c| c.norm_sqr())).sqrt()
    }
}

/// Real-argument values of basis_0 … basis_N for each coordinate, one row per axis.
fn axis_tables_real(x: &[f64], n: usize, conv: Convention) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&xj| {
            let mut t = vec![0.0; n + 1];
            hermite_functions_real(xj, conv, &mut t);
            t
        })
        .collect()
}

fn axis_tables_complex(x: &[C64], n: usize, tag: Basis) -> Result<Vec<Vec<C64>>> {
    x.iter()
        .map(|&xj| {
            let mut t = vec![C64::new(0.0, 0.0); n + 1];
            match tag.convention() {
                Some(conv) => hermite_functions_into(xj, conv, &mut t)?,
                None => fock_monomials_into(xj, &mut t),
            }
            Ok(t)
        })
        .collect()
}

/// e_k(z) = z^k / √(k!) for k = 0 … out.len()-1.
pub fn fock_monomials_into(z: C64, out: &mut [C64]) {
    let mut e = C64::new(1.0, 0.0);
    for (k, o) in out.iter_mut().enumerate() {
        *o = e;
        e *= z / ((k + 1) as f64).sqrt();
    }
}

/// All basis values basis_α(x), |α| ≤ N, at a complex point.
pub fn basis_values(basis: &GradedBasis, tag: Basis, x: &[C64]) -> Result<Vec<C64>> {
    if x.len() != basis.dim() {
        return Err(FockError::DimensionMismatch {
            expected: basis.dim(),
            got: x.len(),
        });
    }
    let tables = axis_tables_complex(x, basis.truncation() as usize, tag)?;
    Ok(basis
        .indices()
        .iter()
        .map(|a| {
            a.components()
                .iter()
                .enumerate()
                .fold(C64::new(1.0, 0.0), |acc, (j, &k)| acc * tables[j][k as usize])
        })
        .collect())
}

/// Real-point variant of [`basis_values`] for the Hermite conventions.
pub fn basis_values_real(basis: &GradedBasis, conv: Convention, x: &[f64]) -> Vec<f64> {
    let tables = axis_tables_real(x, basis.truncation() as usize, conv);
    basis
        .indices()
        .iter()
        .map(|a| {
            a.components()
                .iter()
                .enumerate()
                .fold(1.0, |acc, (j, &k)| acc * tables[j][k as usize])
        })
        .collect()
}

fn check_grid(grid: &QuadratureGrid, dim: usize, truncation: u32, conv: Convention) -> Result<()> {
    if grid.dim() != dim {
        return Err(FockError::DimensionMismatch {
            expected: dim,
            got: grid.dim(),
        });
    }
    let want = conv.product_scale();
    if (grid.scale() - want).abs() > 1e-14 * want {
        return Err(FockError::ScaleMismatch {
            grid: grid.scale(),
            expected: want,
            convention: conv.name(),
        });
    }
    if grid.order() <= truncation as usize {
        return Err(invalid(
            "grid",
            format!("order {} must exceed the truncation {truncation}", grid.order()),
        ));
    }
    Ok(())
}

/// c_α ≈ ⟨f, basis_α⟩ by the dx-weights of `grid`.
///
/// The grid scale must be the convention's product scale (1 for `PaperH`, 2
/// for `BargmannH`), so that f·basis_α is integrated exactly whenever f is a
/// finite expansion in the same system.
pub fn project<F>(f: F, dim: usize, truncation: u32, grid: &QuadratureGrid, conv: Convention) -> Result<SpectralVector>
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    check_grid(grid, dim, truncation, conv)?;
    let values: Vec<C64> = (0..grid.len()).into_par_iter().map(|i| f(grid.node(i))).collect();
    project_values(&values, truncation, grid, conv)
}

/// [`project`] from precomputed values at the grid nodes (in grid order).
pub fn project_values(
    values: &[C64],
    truncation: u32,
    grid: &QuadratureGrid,
    conv: Convention,
) -> Result<SpectralVector> {
    let dim = grid.dim();
    check_grid(grid, dim, truncation, conv)?;
    project_values_any_scale(values, truncation, grid, conv)
}

/// [`project_values`] without the scale check, for integrands whose Gaussian
/// factor differs from a single basis product (e.g. triple products).
pub fn project_values_any_scale(
    values: &[C64],
    truncation: u32,
    grid: &QuadratureGrid,
    conv: Convention,
) -> Result<SpectralVector> {
    let dim = grid.dim();
    if values.len() != grid.len() {
        return Err(FockError::DimensionMismatch {
            expected: grid.len(),
            got: values.len(),
        });
    }
    let basis = GradedBasis::new(dim, truncation)?;
    let q = grid.order();
    let tables = axis_tables_real(grid.nodes_1d(), truncation as usize, conv);
    let weighted: Vec<C64> = values.iter().zip(grid.dx_weights()).map(|(v, w)| v * *w).collect();
    let coeffs: Vec<C64> = basis
        .indices()
        .par_iter()
        .map(|alpha| {
            let a = alpha.components();
            let mut acc = ComplexSum::new();
            let mut idx = vec![0usize; dim];
            for wv in &weighted {
                let mut b = 1.0;
                for j in 0..dim {
                    b *= tables[idx[j]][a[j] as usize];
                }
                acc.add(wv * b);
                for j in (0..dim).rev() {
                    idx[j] += 1;
                    if idx[j] < q {
                        break;
                    }
                    idx[j] = 0;
                }
            }
            acc.value()
        })
        .collect();
    SpectralVector::from_coeffs(basis, conv.into(), coeffs)
}

/// Σ c_α basis_α(x) at a complex point; Fock vectors evaluate Σ c_α z^α/√(α!).
pub fn synthesize(v: &SpectralVector, x: &[C64]) -> Result<C64> {
    let vals = basis_values(v.basis(), v.tag(), x)?;
    Ok(crate::sum::sum_c64(vals.iter().zip(v.coeffs()).map(|(b, c)| b * c)))
}

/// Real-point synthesis for the Hermite conventions.
pub fn synthesize_real(v: &SpectralVector, x: &[f64]) -> Result<C64> {
    let conv = v.tag().convention().ok_or(FockError::ConventionMismatch {
        expected: "PaperH or BargmannH",
        got: v.tag().name(),
    })?;
    let vals = basis_values_real(v.basis(), conv, x);
    Ok(crate::sum::sum_c64(vals.iter().zip(v.coeffs()).map(|(b, c)| c * *b)))
}

/// Raising (H_{-j}) or lowering (H_j) ladder operator along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ladder {
    /// H_{-j}: c_α ↦ √(2α_j) c_{α-e_j}.
    Raise,
    /// H_j: c_α ↦ √(2α_j+2) c_{α+e_j}.
    Lower,
}

#[derive(Debug, Clone)]
pub struct LadderOutput {
    pub vector: SpectralVector,
    /// Norm of the part pushed above the truncation by a raising step.
    pub truncation_loss: f64,
}

/// Coefficient action of the ladder operators.
///
/// In `PaperH` these are exactly H_j = ∂_j + x_j and H_{-j} = -∂_j + x_j. In
/// `BargmannH` the same coefficient maps realize ∂_j/√2 + √2 x_j and
/// -∂_j/√2 + √2 x_j, the ladder operators of the rescaled oscillator.
pub fn ladder(v: &SpectralVector, dir: Ladder, axis: usize) -> Result<LadderOutput> {
    if axis >= v.dim() {
        return Err(invalid("axis", format!("must be below the dimension {}", v.dim())));
    }
    let basis = v.basis();
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    let mut lost = 0.0;
    for (i, alpha) in basis.indices().iter().enumerate() {
        let c = v.coeffs()[i];
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        let aj = alpha.components()[axis] as f64;
        match dir {
            Ladder::Raise => {
                let f = (2.0 * aj + 2.0).sqrt();
                let target = alpha.shifted(axis, 1).expect("raising never underflows");
                match basis.position(&target) {
                    Some(t) => out[t] += f * c,
                    None => lost += (f * c).norm_sqr(),
                }
            }
            Ladder::Lower => {
                if let Some(target) = alpha.shifted(axis, -1) {
                    let t = basis.position(&target).expect("lowering stays inside the truncation");
                    out[t] += (2.0 * aj).sqrt() * c;
                }
            }
        }
    }
    Ok(LadderOutput {
        vector: SpectralVector::from_coeffs(basis.clone(), v.tag(), out)?,
        truncation_loss: lost.sqrt(),
    })
}

/// Square of the coefficient factor picked up by index `a_j` under one ladder step.
pub fn ladder_factor_sq(dir: Ladder, a_j: u32) -> u64 {
    match dir {
        Ladder::Raise => 2 * a_j as u64 + 2,
        Ladder::Lower => 2 * a_j as u64,
    }
}

/// Diagonal of ½(H_j H_{-j} + H_{-j} H_j) at index a_j, in integer arithmetic.
///
/// Each composite step returns to the same index, so its factor is the product
/// √f·√f of a raise and a lower factor that meet at a shared index, i.e. the
/// integer f itself.
pub fn symmetrized_ladder_diagonal(a_j: u32) -> u64 {
    // lower after raise: factor √(2a+2) up, then √(2(a+1)) down
    let lower_raise = ladder_factor_sq(Ladder::Raise, a_j);
    debug_assert_eq!(lower_raise, ladder_factor_sq(Ladder::Lower, a_j + 1));
    // raise after lower: √(2a) down, then √(2(a-1)+2) up
    let raise_lower = ladder_factor_sq(Ladder::Lower, a_j);
    (lower_raise + raise_lower) / 2
}

/// Reinterprets Hermite coefficients in another convention; the coefficients are unchanged.
pub fn convert_convention(v: &SpectralVector, target: Convention) -> Result<SpectralVector> {
    if v.tag() == Basis::Fock {
        return Err(FockError::ConventionMismatch {
            expected: "PaperH or BargmannH",
            got: "Fock",
        });
    }
    Ok(v.clone().retag(target.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::eval_hermite;
    use crate::quadrature::gauss_hermite;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn idx(k: u32) -> MultiIndex {
        MultiIndex::new(vec![k])
    }

    #[test]
    fn project_basis_function_gives_unit_vector() {
        let g = gauss_hermite(16, 2.0, 1).unwrap();
        let f = |x: &[f64]| eval_hermite(3, C64::new(x[0], 0.0), Convention::BargmannH).unwrap();
        let v = project(f, 1, 8, &g, Convention::BargmannH).unwrap();
        for k in 0..=8 {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((v.coeff_1d(k) - want).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn project_is_linear() {
        let g = gauss_hermite(16, 2.0, 1).unwrap();
        let f = |x: &[f64]| {
            let z = C64::new(x[0], 0.0);
            eval_hermite(0, z, Convention::BargmannH).unwrap()
                + 2.0 * eval_hermite(5, z, Convention::BargmannH).unwrap()
        };
        let v = project(f, 1, 8, &g, Convention::BargmannH).unwrap();
        assert!((v.coeff_1d(0) - 1.0).norm() < 1e-12);
        assert!((v.coeff_1d(5) - 2.0).norm() < 1e-12);
        assert!((v.norm() - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn position_times_ground_state() {
        // x ĥ_0 = ĥ_1 / 2 and x h_0 = h_1 / √2
        let g = gauss_hermite(12, 2.0, 1).unwrap();
        let f = |x: &[f64]| x[0] * eval_hermite(0, C64::new(x[0], 0.0), Convention::BargmannH).unwrap();
        let v = project(f, 1, 6, &g, Convention::BargmannH).unwrap();
        // ∫ x ĥ_0 ĥ_1 dx = (2/π)^{1/2} · 2 ∫ x² e^{-2x²} dx
        let oracle = (2.0 / PI).sqrt() * 2.0 * (PI.sqrt() / (2.0 * 2f64.powf(1.5)));
        assert!((v.coeff_1d(1).re - 0.5).abs() < 1e-14);
        assert!((oracle - 0.5).abs() < 1e-14);

        let g1 = gauss_hermite(12, 1.0, 1).unwrap();
        let f = |x: &[f64]| x[0] * eval_hermite(0, C64::new(x[0], 0.0), Convention::PaperH).unwrap();
        let v = project(f, 1, 6, &g1, Convention::PaperH).unwrap();
        assert!((v.coeff_1d(1).re - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn scale_mismatch_is_rejected() {
        let g = gauss_hermite(16, 1.0, 1).unwrap();
        let r = project(|_| C64::new(0.0, 0.0), 1, 4, &g, Convention::BargmannH);
        assert!(matches!(r, Err(FockError::ScaleMismatch { .. })));
        let g = gauss_hermite(4, 2.0, 1).unwrap();
        assert!(project(|_| C64::new(0.0, 0.0), 1, 4, &g, Convention::BargmannH).is_err());
    }

    #[test]
    fn round_trip_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (dim, n, q) in [(1usize, 20u32, 30usize), (2, 8, 14)] {
            let v = SpectralVector::random(dim, n, n, Basis::BargmannH, &mut rng).unwrap();
            let g = gauss_hermite(q, 2.0, dim).unwrap();
            let f = |x: &[f64]| synthesize_real(&v, x).unwrap();
            let w = project(f, dim, n, &g, Convention::BargmannH).unwrap();
            let d = w.axpy(C64::new(-1.0, 0.0), &v).unwrap().norm();
            assert!(d < 1e-10, "dim={dim}: {d}");
        }
    }

    #[test]
    fn synthesize_unit_vector_matches_basis() {
        let v = SpectralVector::unit(10, &idx(7), Basis::PaperH).unwrap();
        let x = C64::new(0.8, 0.0);
        let a = synthesize(&v, &[x]).unwrap();
        let b = eval_hermite(7, x, Convention::PaperH).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn fock_synthesis_is_monomial() {
        let v = SpectralVector::unit(6, &idx(3), Basis::Fock).unwrap();
        let z = C64::new(0.5, -1.2);
        let got = synthesize(&v, &[z]).unwrap();
        assert!((got - z * z * z / 6f64.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn ladder_actions() {
        let v0 = SpectralVector::unit(8, &idx(0), Basis::PaperH).unwrap();
        assert_eq!(ladder(&v0, Ladder::Lower, 0).unwrap().vector.norm(), 0.0);

        let v3 = SpectralVector::unit(8, &idx(3), Basis::PaperH).unwrap();
        let r = ladder(&v3, Ladder::Raise, 0).unwrap();
        assert!((r.vector.coeff_1d(4).re - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.truncation_loss, 0.0);

        let top = SpectralVector::unit(8, &idx(8), Basis::PaperH).unwrap();
        let r = ladder(&top, Ladder::Raise, 0).unwrap();
        assert_eq!(r.vector.norm(), 0.0);
        assert!((r.truncation_loss - 18f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn symmetrized_ladder_is_the_oscillator() {
        for k in 0..8u32 {
            let v = SpectralVector::unit(10, &idx(k), Basis::PaperH).unwrap();
            let lr = ladder(&ladder(&v, Ladder::Raise, 0).unwrap().vector, Ladder::Lower, 0)
                .unwrap()
                .vector;
            let rl = ladder(&ladder(&v, Ladder::Lower, 0).unwrap().vector, Ladder::Raise, 0)
                .unwrap()
                .vector;
            let h = lr.axpy(C64::new(1.0, 0.0), &rl).unwrap().scaled(C64::new(0.5, 0.0));
            let want = (2 * k + 1) as f64;
            assert!((h.coeff_1d(k).re - want).abs() <= 4.0 * f64::EPSILON * want);
            assert!((h.norm() - want).abs() <= 4.0 * f64::EPSILON * want);
            assert_eq!(symmetrized_ladder_diagonal(k), 2 * k as u64 + 1);
        }
    }

    #[test]
    fn convention_change_keeps_coefficients() {
        let v = SpectralVector::unit(4, &idx(0), Basis::PaperH).unwrap();
        let b = convert_convention(&v, Convention::BargmannH).unwrap();
        assert_eq!(b.coeffs(), v.coeffs());
        let back = convert_convention(&b, Convention::PaperH).unwrap();
        assert_eq!(back, v);
        let x = [0.0];
        assert!((synthesize_real(&v, &x).unwrap().re - PI.powf(-0.25)).abs() < 1e-15);
        assert!((synthesize_real(&b, &x).unwrap().re - (2.0 / PI).powf(0.25)).abs() < 1e-15);
    }
}
