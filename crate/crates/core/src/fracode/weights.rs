//! Adams-Bashforth-Moulton quadrature weights for the Caputo integrator.
//!
//! At step `k + 1` the predictor uses
//!
//! ```text
//! b[j, k+1] = (k + 1 - j)^a - (k - j)^a,            j = 0..k
//! ```
//!
//! and the corrector uses
//!
//! ```text
//! a[0, k+1]   = k^(a+1) - (k - a) (k + 1)^a
//! a[j, k+1]   = (k-j+2)^(a+1) + (k-j)^(a+1) - 2 (k-j+1)^(a+1),  1 <= j <= k
//! a[k+1, k+1] = 1
//! ```
//!
//! Both rows depend on `j` only through the lag `k - j` (apart from the
//! corrector's first and last entries), which the integrator exploits by
//! precomputing lag kernels once per run. For `a = 1` the rows reduce to the
//! classical rectangle/trapezoid weights; that limit is built directly so it
//! holds exactly.

use crate::error::{Error, Result};

/// Predictor and corrector weight rows for one step of the ABM scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct AbmWeights {
    /// Fractional order the rows were built for.
    pub alpha: f64,
    /// Step index `k`; the rows advance the solution to node `k + 1`.
    pub k: usize,
    /// Predictor row `b[0..=k]`, length `k + 1`.
    pub predictor: Vec<f64>,
    /// Corrector row `a[0..=k+1]`, length `k + 2`.
    pub corrector: Vec<f64>,
}

pub(crate) fn check_alpha_unit(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
        return Err(Error::InvalidAlpha {
            expected: "(0, 1]",
            value: alpha,
        });
    }
    Ok(())
}

/// Predictor lag kernel `w_b[m] = (m + 1)^a - m^a`, so `b[j, k+1] = w_b[k - j]`.
pub(crate) fn predictor_kernel(alpha: f64, len: usize) -> Vec<f64> {
    if alpha == 1.0 {
        return vec![1.0; len];
    }
    (0..len)
        .map(|m| ((m + 1) as f64).powf(alpha) - (m as f64).powf(alpha))
        .collect()
}

/// Interior corrector lag kernel
/// `w_a[m] = (m + 2)^(a+1) + m^(a+1) - 2 (m + 1)^(a+1)`,
/// so `a[j, k+1] = w_a[k - j]` for `1 <= j <= k`.
pub(crate) fn corrector_kernel(alpha: f64, len: usize) -> Vec<f64> {
    if alpha == 1.0 {
        return vec![2.0; len];
    }
    let p = alpha + 1.0;
    (0..len)
        .map(|m| ((m + 2) as f64).powf(p) + (m as f64).powf(p) - 2.0 * ((m + 1) as f64).powf(p))
        .collect()
}

/// First corrector entry `a[0, k+1] = k^(a+1) - (k - a)(k + 1)^a`.
pub(crate) fn corrector_first(alpha: f64, k: usize) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    let kf = k as f64;
    kf.powf(alpha + 1.0) - (kf - alpha) * (kf + 1.0).powf(alpha)
}

/// Builds the weight rows for step `k` at fractional order `alpha` in (0, 1].
pub fn abm_weights(alpha: f64, k: usize) -> Result<AbmWeights> {
    check_alpha_unit(alpha)?;

    let wb = predictor_kernel(alpha, k + 1);
    let predictor: Vec<f64> = (0..=k).map(|j| wb[k - j]).collect();

    let wa = corrector_kernel(alpha, k);
    let mut corrector = Vec::with_capacity(k + 2);
    corrector.push(corrector_first(alpha, k));
    for j in 1..=k {
        corrector.push(wa[k - j]);
    }
    corrector.push(1.0);

    Ok(AbmWeights {
        alpha,
        k,
        predictor,
        corrector,
    })
}
