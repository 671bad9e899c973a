//! Predictor-corrector integration of Caputo initial-value problems and,
//! via time reversal, of adjoint terminal-value problems.
//!
//! The initial-value solver advances the Volterra form of
//! `D^a x(t) = f(t, x(t))`, `x(0) = x0`, on a uniform grid:
//!
//! ```text
//! predictor: X*[k+1] = x0 + h^a / Gamma(a+1) * sum_j b[j,k+1] f(t_j, X[j])
//! corrector: X[k+1]  = x0 + h^a / Gamma(a+2) * ( f(t_{k+1}, X*) + sum_j a[j,k+1] f(t_j, X[j]) )
//! ```
//!
//! with the weight rows of [`super::weights`]. The corrector may be applied
//! several times, re-evaluating `f` at the latest iterate each time; the
//! classical P(EC)E scheme corresponds to one application. The full history
//! sum is kept (no truncation), so a run over `n` steps costs O(n^2) field
//! coefficient multiplies.

use crate::error::{Error, Result};
use crate::fracode::field::{Trajectory, VectorField};
use crate::fracode::special::gamma;
use crate::fracode::weights::{check_alpha_unit, corrector_first, corrector_kernel, predictor_kernel};
use crate::grid::TimeGrid;
use crate::par::weighted_history_sum;

fn eval_checked<F: VectorField + ?Sized>(
    field: &F,
    t: f64,
    node: usize,
    x: &[f64],
    dx: &mut [f64],
) -> Result<()> {
    field.eval(t, x, dx);
    for (component, v) in dx.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteField {
                node,
                time: t,
                component,
            });
        }
    }
    Ok(())
}

/// Integrates the Caputo initial-value problem `D^a x = f(t, x)`, `x(0) = x0`
/// over `grid`, returning the states at every node (node 0 is `x0` itself).
///
/// `alpha` must lie in (0, 1] and `corrector_iterations >= 1`. A non-finite
/// field output aborts with the offending node in the error.
pub fn integrate_caputo_ivp<F: VectorField + ?Sized>(
    field: &F,
    x0: &[f64],
    grid: &TimeGrid,
    alpha: f64,
    corrector_iterations: usize,
) -> Result<Trajectory> {
    check_alpha_unit(alpha)?;
    let dim = field.dim();
    if x0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x0.len(),
        });
    }
    if corrector_iterations == 0 {
        return Err(Error::InvalidInput(
            "corrector_iterations must be at least 1".into(),
        ));
    }

    let n = grid.n_steps();
    let h = grid.h();
    let c_pred = h.powf(alpha) / gamma(alpha + 1.0);
    let c_corr = h.powf(alpha) / gamma(alpha + 2.0);

    // Lag kernels shared by every step: b[j,k+1] = wb[k-j], and for the
    // corrector interior a[j,k+1] = wa[k-j] (1 <= j <= k).
    let wb = predictor_kernel(alpha, n);
    let wa = corrector_kernel(alpha, n.saturating_sub(1));

    let mut traj = Trajectory::with_capacity(dim, n + 1);
    traj.push_row(x0);

    // Field history f(t_j, X[j]) in node order, row-major.
    let mut fhist = vec![0.0; (n + 1) * dim];
    eval_checked(field, grid.node(0), 0, x0, &mut fhist[0..dim])?;

    let mut sum = vec![0.0; dim];
    let mut x_next = vec![0.0; dim];
    let mut f_next = vec![0.0; dim];

    for k in 0..n {
        let t_next = grid.node(k + 1);

        // Predictor.
        for s in sum.iter_mut() {
            *s = 0.0;
        }
        weighted_history_sum(&wb, &fhist, dim, 0, k, k, &mut sum);
        for c in 0..dim {
            x_next[c] = x0[c] + c_pred * sum[c];
        }

        // Corrector history: a[0,k+1] f(t_0) + interior lag terms.
        let a0 = corrector_first(alpha, k);
        for (c, s) in sum.iter_mut().enumerate() {
            *s = a0 * fhist[c];
        }
        if k >= 1 {
            weighted_history_sum(&wa, &fhist, dim, 1, k, k, &mut sum);
        }

        for _ in 0..corrector_iterations {
            eval_checked(field, t_next, k + 1, &x_next, &mut f_next)?;
            for c in 0..dim {
                x_next[c] = x0[c] + c_corr * (f_next[c] + sum[c]);
            }
        }

        // Final evaluation enters the history (the trailing E of P(EC)E).
        let row = &mut fhist[(k + 1) * dim..(k + 2) * dim];
        field.eval(t_next, &x_next, row);
        for (component, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteField {
                    node: k + 1,
                    time: t_next,
                    component,
                });
            }
        }
        traj.push_row(&x_next);
    }

    Ok(traj)
}

struct Reversed<'a, F: ?Sized> {
    inner: &'a F,
    tf: f64,
}

impl<F: VectorField + ?Sized> VectorField for Reversed<'_, F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, s: f64, x: &[f64], dx: &mut [f64]) {
        self.inner.eval(self.tf - s, x, dx);
        for v in dx.iter_mut() {
            *v = -*v;
        }
    }
}

/// Integrates the terminal-value problem `D^a lambda = field(t, lambda)`,
/// `lambda(tf) = lambda_tf`, by the substitution `s = tf - t`: the reversed
/// unknown solves a left-sided initial-value problem with initial datum
/// `lambda_tf` and reversed-sign field, which is handed to
/// [`integrate_caputo_ivp`] and the result reversed back.
///
/// The returned trajectory is in forward node order; its final node equals
/// `lambda_tf` exactly.
pub fn integrate_adjoint_tvp<F: VectorField + ?Sized>(
    field: &F,
    lambda_tf: &[f64],
    grid: &TimeGrid,
    alpha: f64,
    corrector_iterations: usize,
) -> Result<Trajectory> {
    let reversed = Reversed {
        inner: field,
        tf: grid.tf(),
    };
    let backward = integrate_caputo_ivp(&reversed, lambda_tf, grid, alpha, corrector_iterations)?;
    Ok(backward.reversed())
}
