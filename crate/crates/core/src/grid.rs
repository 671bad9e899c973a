//! Uniform time grid on `[0, tf]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid with `n_steps + 1` nodes, `t_j = j * h`, `h = tf / n_steps`.
///
/// All solver routines evaluate fields only at grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawGrid")]
pub struct TimeGrid {
    tf: f64,
    n_steps: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(default = "default_tf")]
    tf: f64,
    #[serde(default = "default_n_steps")]
    n_steps: usize,
}

fn default_tf() -> f64 {
    100.0
}

fn default_n_steps() -> usize {
    1000
}

impl TryFrom<RawGrid> for TimeGrid {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        TimeGrid::new(raw.tf, raw.n_steps)
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            tf: default_tf(),
            n_steps: default_n_steps(),
        }
    }
}

impl TimeGrid {
    /// Builds a grid over `[0, tf]`; requires `tf > 0` finite and `n_steps >= 2`.
    pub fn new(tf: f64, n_steps: usize) -> Result<Self> {
        if !tf.is_finite() || tf <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "tf must be positive and finite, got {tf}"
            )));
        }
        if n_steps < 2 {
            return Err(Error::InvalidGrid(format!(
                "n_steps must be at least 2, got {n_steps}"
            )));
        }
        Ok(TimeGrid { tf, n_steps })
    }

    /// Final time.
    pub fn tf(&self) -> f64 {
        self.tf
    }

    /// Number of steps; the grid has `n_steps + 1` nodes.
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of nodes, `n_steps + 1`.
    pub fn n_nodes(&self) -> usize {
        self.n_steps + 1
    }

    /// Step size `tf / n_steps`.
    pub fn h(&self) -> f64 {
        self.tf / self.n_steps as f64
    }

    /// Time of node `j`, `t_j = j * h`.
    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h()
    }

    /// All node times in order.
    pub fn times(&self) -> Vec<f64> {
        (0..self.n_nodes()).map(|j| self.node(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_uniform() {
        let g = TimeGrid::new(1.0, 4).unwrap();
        assert_eq!(g.n_nodes(), 5);
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(4), 1.0);
        assert_eq!(g.times().len(), 5);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(-1.0, 10).is_err());
        assert!(TimeGrid::new(f64::NAN, 10).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
    }

    #[test]
    fn default_matches_documented_values() {
        let g = TimeGrid::default();
        assert_eq!(g.tf(), 100.0);
        assert_eq!(g.n_steps(), 1000);
    }
}
