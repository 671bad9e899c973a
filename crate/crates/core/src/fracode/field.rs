//! Vector fields and node-indexed trajectories.

use crate::error::{Error, Result};

/// Right-hand side of a fractional differential system.
///
/// Implementations must be deterministic and side-effect free; the solver
/// only ever evaluates fields at grid nodes.
pub trait VectorField {
    /// State dimension; `eval` receives and fills slices of this length.
    fn dim(&self) -> usize;

    /// Writes `f(t, x)` into `dx`.
    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]);
}

/// Adapter turning a closure `(t, x, dx)` into a [`VectorField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnField<F> {
    /// Wraps `f` as a field of the given dimension.
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> VectorField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, x: &[f64], dx: &mut [f64]) {
        (self.f)(t, x, dx)
    }
}

/// Dense node-by-dimension sample matrix produced by the integrators.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    dim: usize,
    data: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn with_capacity(dim: usize, nodes: usize) -> Self {
        Trajectory {
            dim,
            data: Vec::with_capacity(dim * nodes),
        }
    }

    pub(crate) fn push_row(&mut self, row: &[f64]) {
        debug_assert_eq!(row.len(), self.dim);
        self.data.extend_from_slice(row);
    }

    /// State dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of nodes stored.
    pub fn n_nodes(&self) -> usize {
        self.data.len() / self.dim
    }

    /// State at node `j`.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.dim..(j + 1) * self.dim]
    }

    /// Iterator over node states in time order.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Copy of component `c` at every node.
    pub fn column(&self, c: usize) -> Result<Vec<f64>> {
        if c >= self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: c,
            });
        }
        Ok(self.rows().map(|row| row[c]).collect())
    }

    /// Same samples in reversed node order.
    pub fn reversed(&self) -> Trajectory {
        let mut out = Trajectory::with_capacity(self.dim, self.n_nodes());
        for j in (0..self.n_nodes()).rev() {
            out.push_row(self.row(j));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_roundtrips_rows_and_columns() {
        let mut t = Trajectory::with_capacity(2, 3);
        t.push_row(&[1.0, 2.0]);
        t.push_row(&[3.0, 4.0]);
        t.push_row(&[5.0, 6.0]);
        assert_eq!(t.n_nodes(), 3);
        assert_eq!(t.row(1), &[3.0, 4.0]);
        assert_eq!(t.column(1).unwrap(), vec![2.0, 4.0, 6.0]);
        assert!(t.column(2).is_err());
    }

    #[test]
    fn reversal_is_an_involution() {
        let mut t = Trajectory::with_capacity(1, 4);
        for v in [0.0, 1.0, 2.0, 3.0] {
            t.push_row(&[v]);
        }
        let r = t.reversed();
        assert_eq!(r.column(0).unwrap(), vec![3.0, 2.0, 1.0, 0.0]);
        assert_eq!(r.reversed(), t);
    }
}
