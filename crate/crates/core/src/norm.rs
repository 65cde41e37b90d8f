//! Operator norms on F^{s,2} and W_H^{s,2} by power iteration.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, FockError, Result};
use crate::matrix::{frobenius, OperatorMatrix};

/// Stopping rule and seed for [`operator_norm_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Relative change of the Rayleigh quotient that ends the iteration.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 10_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    /// Frobenius norm of the weighted matrix, an upper bound for `value`.
    pub upper: f64,
}

/// D^{s/2} A D^{-s/2} with D = diag(2|α| + n).
pub fn weighted_entries(a: &OperatorMatrix, s: f64) -> Result<DMatrix<C64>> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(invalid("s", format!("must be finite and ≥ 0, got {s}")));
    }
    let b = a.basis();
    let w: Vec<f64> = (0..b.len()).map(|i| b.eigenvalue(i).powf(s / 2.0)).collect();
    let e = a.entries();
    Ok(DMatrix::from_fn(e.nrows(), e.ncols(), |i, j| e[(i, j)] * (w[i] / w[j])))
}

/// ‖A‖ as a map on the order-s space: the largest singular value of D^{s/2} A D^{-s/2}.
pub fn operator_norm(a: &OperatorMatrix, s: f64) -> Result<NormEstimate> {
    operator_norm_with(a, s, PowerOptions::default())
}

pub fn operator_norm_with(a: &OperatorMatrix, s: f64, opts: PowerOptions) -> Result<NormEstimate> {
    let b = weighted_entries(a, s)?;
    spectral_norm(&b, opts)
}

/// Largest singular value by power iteration on B*B from a seeded random start.
pub fn spectral_norm(b: &DMatrix<C64>, opts: PowerOptions) -> Result<NormEstimate> {
    let upper = frobenius(b);
    if upper == 0.0 {
        return Ok(NormEstimate {
            value: 0.0,
            iterations: 0,
            upper,
        });
    }
    let bh = b.adjoint();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v = DVector::from_fn(b.ncols(), |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    v /= C64::new(v.norm(), 0.0);
    let mut rq = 0.0f64;
    for it in 1..=opts.max_iter {
        let bv = b * &v;
        let w = &bh * &bv;
        // Rayleigh quotient of B*B at the unit vector v
        let next = bv.norm_squared();
        let wn = w.norm();
        if wn == 0.0 {
            return Ok(NormEstimate {
                value: 0.0,
                iterations: it,
                upper,
            });
        }
        v = w / C64::new(wn, 0.0);
        if it > 1 && (next - rq).abs() <= opts.tol * next {
            return Ok(NormEstimate {
                value: next.sqrt(),
                iterations: it,
                upper,
            });
        }
        rq = next;
    }
    Err(FockError::NormNotConverged {
        lower: rq.sqrt(),
        upper,
        iterations: opts.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::GradedBasis;
    use crate::spectral::Basis;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn identity_and_diagonal() {
        for s in [0.0, 1.0, 3.5] {
            let id = OperatorMatrix::identity(1, 10, Basis::Fock).unwrap();
            assert!((operator_norm(&id, s).unwrap().value - 1.0).abs() < 1e-12);
        }
        let basis = GradedBasis::new(1, 6).unwrap();
        let d: Vec<C64> = [0.3, -2.5, 1.0, 0.0, 2.0, 0.1, -1.0]
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .collect();
        let m = OperatorMatrix::diagonal(basis, Basis::Fock, &d).unwrap();
        let e = operator_norm(&m, 0.0).unwrap();
        assert!((e.value - 2.5).abs() < 1e-9, "{e:?}");
        // weights cancel on a diagonal
        assert!((operator_norm(&m, 2.0).unwrap().value - 2.5).abs() < 1e-9);
    }

    #[test]
    fn non_convergence_reports_bracket() {
        let basis = GradedBasis::new(1, 3).unwrap();
        let d: Vec<C64> = [1.0, 0.999999, 0.5, 0.2].iter().map(|&x| C64::new(x, 0.0)).collect();
        let m = OperatorMatrix::diagonal(basis, Basis::Fock, &d).unwrap();
        let opts = PowerOptions {
            tol: 1e-16,
            max_iter: 3,
            seed: 1,
        };
        match operator_norm_with(&m, 0.0, opts) {
            Err(FockError::NormNotConverged {
                lower,
                upper,
                iterations,
            }) => {
                assert!(lower <= 1.0 + 1e-12 && upper >= 1.0 && iterations == 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weights_shift_the_norm() {
        // a single coupling from index 0 to index 3
        let basis = GradedBasis::new(1, 3).unwrap();
        let mut e = DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
        e[(3, 0)] = C64::new(1.0, 0.0);
        let m = OperatorMatrix::from_entries(basis, Basis::Fock, e).unwrap();
        // D^{s/2}: (7/1)^{s/2}
        assert!((operator_norm(&m, 2.0).unwrap().value - 7.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn matches_svd(seed in 0u64..1000, s in 0.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = GradedBasis::new(1, 9).unwrap();
            let e = DMatrix::from_fn(10, 10, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let m = OperatorMatrix::from_entries(basis, Basis::Fock, e).unwrap();
            let est = operator_norm(&m, s).unwrap();
            let svd = weighted_entries(&m, s).unwrap().singular_values().max();
            prop_assert!((est.value - svd).abs() <= 1e-6 * svd, "{} vs {}", est.value, svd);
            prop_assert!(est.value <= est.upper);
        }
    }
}
