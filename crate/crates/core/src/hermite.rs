//! Normalized Hermite functions by the stable three-term recurrence.
//!
//! Two normalizations share one recurrence:
//!
//! * [`Convention::PaperH`]: h_k(x) = (√π 2^k k!)^{-1/2} e^{-x²/2} H_k(x),
//!   the L²-normalized eigenfunctions of -d²/dx² + x² (eigenvalue 2k + 1).
//! * [`Convention::BargmannH`]: ĥ_k(x) = 2^{1/4} h_k(√2 x), with Gaussian
//!   weight e^{-x²}; this is the system the Bargmann kernel maps onto z^k/√k!.
//!
//! The polynomial part is never formed. Values are carried as a mantissa and a
//! real log-scale that is renormalized whenever the mantissa grows past 2^±500,
//! so k in the hundreds and |x| up to ~30 stay in range.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{FockError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Convention {
    /// Weight e^{-|x|²/2}: eigenfunctions of -Δ + |x|².
    PaperH,
    /// Weight e^{-|x|²}: ĥ_α(x) = 2^{n/4} h_α(√2 x); 𝓑ĥ_α = e_α.
    BargmannH,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::PaperH => "PaperH",
            Convention::BargmannH => "BargmannH",
        }
    }

    /// σ such that products basis_α·basis_β carry the weight e^{-σ|x|²}.
    pub fn product_scale(self) -> f64 {
        match self {
            Convention::PaperH => 1.0,
            Convention::BargmannH => 2.0,
        }
    }

    /// Argument scaling: basis_k(x) = c · h_k(`arg_scale` · x).
    pub fn arg_scale(self) -> f64 {
        match self {
            Convention::PaperH => 1.0,
            Convention::BargmannH => std::f64::consts::SQRT_2,
        }
    }

    pub fn amplitude(self) -> f64 {
        match self {
            Convention::PaperH => 1.0,
            Convention::BargmannH => 2f64.powf(0.25),
        }
    }
}

const RESCALE_HI: f64 = 3.273_390_607_896_142e150; // 2^500
const LN_RESCALE: f64 = 346.573_590_279_972_6; // 500 ln 2

/// Largest |Re(-y²/2)| (y the rescaled argument) we accept before exp overflows.
const EXP_LIMIT: f64 = 700.0;

/// Evaluates basis_0 … basis_{kmax} at a complex point.
///
/// Errors with [`FockError::Overflow`] if the Gaussian factor e^{-y²/2}
/// (y = arg_scale·x) would exceed the f64 range, i.e. roughly |Im x| > 37 for
/// `PaperH` and |Im x| > 26 for `BargmannH`.
pub fn hermite_functions(kmax: usize, x: C64, conv: Convention) -> Result<Vec<C64>> {
    let mut out = vec![C64::new(0.0, 0.0); kmax + 1];
    hermite_functions_into(x, conv, &mut out)?;
    Ok(out)
}

/// In-place variant of [`hermite_functions`]; fills all of `out`.
pub fn hermite_functions_into(x: C64, conv: Convention, out: &mut [C64]) -> Result<()> {
    let y = x * conv.arg_scale();
    let gauss_exp = -0.5 * y * y;
    if gauss_exp.re > EXP_LIMIT {
        return Err(FockError::Overflow { re: x.re, im: x.im });
    }
    let amp = conv.amplitude() * PI.powf(-0.25);
    if out.is_empty() {
        return Ok(());
    }
    // h_k = v_k · exp(gauss_exp + log_scale)
    let mut log_scale = 0.0f64;
    let mut prev = C64::new(0.0, 0.0);
    let mut cur = C64::new(amp, 0.0);
    let sqrt2 = std::f64::consts::SQRT_2;
    for k in 0..out.len() {
        out[k] = cur * (gauss_exp + log_scale).exp();
        if k + 1 == out.len() {
            break;
        }
        let kf = k as f64;
        let next = y * (sqrt2 / (kf + 1.0).sqrt()) * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.norm() > RESCALE_HI {
            cur /= RESCALE_HI;
            prev /= RESCALE_HI;
            log_scale += LN_RESCALE;
        }
    }
    Ok(())
}

/// Real-argument fast path of [`hermite_functions_into`].
pub fn hermite_functions_real(x: f64, conv: Convention, out: &mut [f64]) {
    let y = x * conv.arg_scale();
    let gauss_exp = -0.5 * y * y;
    let amp = conv.amplitude() * PI.powf(-0.25);
    if out.is_empty() {
        return;
    }
    let mut log_scale = 0.0f64;
    let mut prev = 0.0f64;
    let mut cur = amp;
    let sqrt2 = std::f64::consts::SQRT_2;
    for k in 0..out.len() {
        out[k] = cur * (gauss_exp + log_scale).exp();
        if k + 1 == out.len() {
            break;
        }
        let kf = k as f64;
        let next = y * (sqrt2 / (kf + 1.0).sqrt()) * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_HI {
            cur /= RESCALE_HI;
            prev /= RESCALE_HI;
            log_scale += LN_RESCALE;
        }
    }
}

/// Single basis function value basis_k(x).
pub fn eval_hermite(k: usize, x: C64, conv: Convention) -> Result<C64> {
    let v = hermite_functions(k, x, conv)?;
    let out = v[k];
    if !out.re.is_finite() || !out.im.is_finite() {
        return Err(FockError::Overflow { re: x.re, im: x.im });
    }
    Ok(out)
}
