//! L1 discretization of the Caputo derivative.
//!
//! For samples `x_0..x_n` on a uniform grid the scheme evaluates, at each
//! node `k = 1..n`,
//!
//! ```text
//! D^a x(t_k) ~= h^-a / Gamma(2-a) *
//!     sum_{j=0}^{k-1} ((k-j)^(1-a) - (k-j-1)^(1-a)) (x_{j+1} - x_j)
//! ```
//!
//! It shares nothing with the ABM integrator, which makes the pair a useful
//! consistency check: applying this operator to an integrated trajectory
//! should reproduce the field values along it.

use crate::error::{Error, Result};
use crate::fracode::special::gamma;
use crate::grid::TimeGrid;
use crate::par::{map_indexed, L1_PAR_MIN_NODES};

/// Applies the L1 operator to scalar samples at every grid node.
///
/// `samples` must hold one value per node (`n_steps + 1` entries) and
/// `alpha` must lie strictly inside (0, 1); the classical limit has no L1
/// form. Returns the derivative at nodes `1..=n_steps` (node 0 excluded).
pub fn l1_caputo_derivative(samples: &[f64], grid: &TimeGrid, alpha: f64) -> Result<Vec<f64>> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::InvalidAlpha {
            expected: "(0, 1)",
            value: alpha,
        });
    }
    let n = grid.n_steps();
    if samples.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: samples.len(),
        });
    }

    let scale = grid.h().powf(-alpha) / gamma(2.0 - alpha);
    // Lag kernel psi[m] = m^(1-a) - (m-1)^(1-a), m >= 1, so the sum over j
    // is sum_m psi[m] * diff[k - m].
    let p = 1.0 - alpha;
    let psi: Vec<f64> = (1..=n)
        .map(|m| (m as f64).powf(p) - ((m - 1) as f64).powf(p))
        .collect();
    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();

    Ok(map_indexed(n, L1_PAR_MIN_NODES, |i| {
        let k = i + 1;
        let mut acc = 0.0;
        for j in 0..k {
            acc += psi[k - j - 1] * diffs[j];
        }
        scale * acc
    }))
}
