//! Hermite and Fock spectral numerics at truncated-basis scale.
//!
//! Functions on ℝⁿ are coefficient vectors in a Hermite basis, functions on
//! ℂⁿ are coefficient vectors in the Fock monomial basis, and the Bargmann
//! transform is the change of tag between the two. On top of that sit the
//! Fourier transform, translations and Weyl operators, Zhu's integral
//! operator S_φ, the correspondence between Fourier multipliers m and
//! symbols φ, operator-norm estimation and growth probes.
//!
//! Two Hermite normalizations are carried side by side:
//! [`Convention::PaperH`] (weight e^{-|x|²/2}) and the default
//! [`Convention::BargmannH`] (weight e^{-|x|²}), which is the one mapped to
//! the monomials z^α/√(α!) by the Bargmann kernel.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bump;
pub mod calibration;
pub mod error;
pub mod hermite;
pub mod matrix;
pub mod multi_index;
pub mod multiplier;
pub mod norm;
pub mod probe;
pub mod quadrature;
pub mod reference;
pub mod spaces;
pub mod spectral;
pub mod suite;
pub mod sum;
pub mod symbol;
pub mod transforms;
pub mod zhu;

pub use bump::{localization_norm, LocalizationOptions, LocalizationReport, PartitionBump};
pub use calibration::{Calibration, Interval};
pub use error::{FockError, Result};
pub use hermite::{eval_hermite, Convention};
pub use matrix::OperatorMatrix;
pub use multi_index::{GradedBasis, MultiIndex};
pub use multiplier::{MultiplierKind, MultiplierSpec};
pub use norm::{operator_norm, NormEstimate, PowerOptions};
pub use probe::{boundedness_probe, classical_sobolev_probe, GrowthClass, GrowthReport, ProbeSide, Thresholds};
pub use quadrature::{gauss_hermite, QuadratureGrid};
pub use spaces::{
    fractional_h, heat_semigroup, kappa_constant, potential_bound_probe, sobolev_norm, square_function_norm,
    weighted_fock_norm,
};
pub use spectral::{convert_convention, ladder, project, synthesize, Basis, Ladder, SpectralVector};
pub use suite::{ReportRecord, Status, SuiteConfig};
pub use symbol::{multiplier_from_symbol, symbol_from_multiplier, SymbolSpec};
pub use transforms::{
    bargmann, conjugation_check, fourier, inverse_bargmann, inverse_fourier, leibniz_check, translation_ladder_check,
    translation_matrix, weyl_matrix,
};
pub use zhu::{conjugated_multiplier_matrix, multiplier_matrix, s_phi_apply, s_phi_matrix};

/// Complex scalar used throughout.
pub use num_complex::Complex64 as C64;
