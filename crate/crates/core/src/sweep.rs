//! Forward-backward sweep for the fractional optimal control problem.
//!
//! Each iteration integrates the state system forward with the current
//! controls, integrates the adjoint system backward from the transversality
//! condition `lambda(tf) = (A3, A4, 0, 0)`, evaluates the stationary control
//! law nodewise, and relaxes the controls toward it. The adjoint
//! terminal-value problem is handled by [`integrate_adjoint_tvp`], i.e. as a
//! time-reversed Caputo problem; an optional correction restores the
//! Riemann-Liouville boundary term that the Caputo reading drops.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracode::special::gamma;
use crate::fracode::{integrate_adjoint_tvp, integrate_caputo_ivp, FnField, Trajectory};
use crate::grid::TimeGrid;
use crate::model::{
    objective, rhs_controlled, Control, ModelParams, ObjectiveWeights, State,
};

/// Costate values at one time point, ordered like the state compartments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adjoint {
    /// Costate of `S`.
    pub l1: f64,
    /// Costate of `E`.
    pub l2: f64,
    /// Costate of `I`.
    pub l3: f64,
    /// Costate of `R`.
    pub l4: f64,
}

impl Adjoint {
    /// Zero costate.
    pub const ZERO: Adjoint = Adjoint {
        l1: 0.0,
        l2: 0.0,
        l3: 0.0,
        l4: 0.0,
    };

    fn from_slice(x: &[f64]) -> Adjoint {
        Adjoint {
            l1: x[0],
            l2: x[1],
            l3: x[2],
            l4: x[3],
        }
    }
}

/// Which right-hand side the backward pass integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjointMode {
    /// Gradient of the full Hamiltonian of the controlled system, including
    /// the control coupling terms (the default).
    #[default]
    FullHamiltonian,
    /// The adjoint system without the control coupling terms. Both modes
    /// coincide wherever the controls vanish.
    PaperPrinted,
}

/// Closed interval the controls are clamped to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlBounds {
    /// Lower bound.
    pub min: f64,
    /// Upper bound.
    pub max: f64,
}

impl ControlBounds {
    fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }
}

/// Sweep iteration parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Iteration cap; hitting it reports non-convergence, not an error.
    pub max_iterations: usize,
    /// Relaxation factor applied to control updates, in (0, 1].
    pub omega: f64,
    /// Relative convergence tolerance on the control update.
    pub tolerance: f64,
    /// Lower control bound.
    pub u_min: f64,
    /// Upper control bound.
    pub u_max: f64,
    /// Adjoint right-hand side variant.
    pub adjoint_mode: AdjointMode,
    /// Adds the Riemann-Liouville boundary term of the terminal datum to the
    /// reversed adjoint field (a sensitivity knob, off by default).
    pub adjoint_rl_correction: bool,
    /// Corrector applications per integrator step.
    pub corrector_iterations: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_iterations: 200,
            omega: 0.5,
            tolerance: 1e-3,
            u_min: 0.0,
            u_max: 1.0,
            adjoint_mode: AdjointMode::FullHamiltonian,
            adjoint_rl_correction: false,
            corrector_iterations: 1,
        }
    }
}

impl SweepConfig {
    pub(crate) fn field_violation(&self) -> Option<(&'static str, String)> {
        if self.max_iterations == 0 {
            return Some(("max_iterations", "must be at least 1".into()));
        }
        if !self.omega.is_finite() || self.omega <= 0.0 || self.omega > 1.0 {
            return Some(("omega", format!("must lie in (0, 1], got {}", self.omega)));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Some((
                "tolerance",
                format!("must be positive, got {}", self.tolerance),
            ));
        }
        if !self.u_min.is_finite() || !self.u_max.is_finite() || self.u_min > self.u_max {
            return Some((
                "u_min",
                format!(
                    "bounds must be finite with u_min <= u_max, got [{}, {}]",
                    self.u_min, self.u_max
                ),
            ));
        }
        if self.corrector_iterations == 0 {
            return Some(("corrector_iterations", "must be at least 1".into()));
        }
        None
    }

    /// Checks the ranges documented on each field.
    pub fn validate(&self) -> Result<()> {
        match self.field_violation() {
            Some((name, msg)) => Err(Error::InvalidInput(format!("sweep {name}: {msg}"))),
            None => Ok(()),
        }
    }

    /// Control bounds as an interval.
    pub fn bounds(&self) -> ControlBounds {
        ControlBounds {
            min: self.u_min,
            max: self.u_max,
        }
    }
}

/// Everything a finished sweep produces. All trajectories share the grid,
/// one entry per node.
#[derive(Debug, Clone)]
pub struct SweepSolution {
    /// Grid the problem was solved on.
    pub grid: TimeGrid,
    /// State trajectory of the final iterate.
    pub states: Vec<State>,
    /// Adjoint trajectory of the final iterate.
    pub adjoints: Vec<Adjoint>,
    /// Stationary control law evaluated along the final trajectories.
    pub controls: Vec<Control>,
    /// Objective value of each iterate, in iteration order.
    pub objective_history: Vec<f64>,
    /// Whether the control update dropped below the tolerance.
    pub converged: bool,
    /// Iterations actually performed (equals `objective_history.len()`).
    pub iterations_used: usize,
    /// Max projected Hamiltonian-gradient violation of the returned triple.
    pub stationarity_residual: f64,
}

/// Adjoint right-hand side `g` such that the costates solve the backward
/// problem with `D^alpha lambda = g` under the sweep's time-reversal
/// convention.
///
/// `FullHamiltonian` returns the gradient of the Hamiltonian of the
/// controlled dynamics; `PaperPrinted` omits the control coupling terms
/// (`u1 (l4 - l1)` in the first equation, `u2 (-l2 + (1-p) l3 + p l4)` in
/// the second). The two coincide at `u = 0`.
pub fn rhs_adjoint(
    p: &ModelParams,
    w: &ObjectiveWeights,
    x: &State,
    u: &Control,
    lam: &Adjoint,
    mode: AdjointMode,
) -> [f64; 4] {
    let force = p.beta1 * x.e + p.beta2 * x.i;
    let mut g = [
        lam.l1 * (-force - p.mu) + lam.l2 * force,
        -lam.l1 * p.beta1 * x.s + lam.l2 * (p.beta1 * x.s - p.mu - p.rho) + lam.l3 * p.rho,
        w.a1 - lam.l1 * p.beta2 * x.s + lam.l2 * p.beta2 * x.s
            - lam.l3 * (p.gamma + p.d + p.mu)
            + lam.l4 * p.gamma,
        -w.a2 + lam.l1 * p.tau - lam.l4 * (p.mu + p.tau),
    ];
    if mode == AdjointMode::FullHamiltonian {
        g[0] += u.u1 * (lam.l4 - lam.l1);
        g[1] += u.u2 * (-lam.l2 + (1.0 - p.p) * lam.l3 + p.p * lam.l4);
    }
    g
}

/// Stationary control law clamped to `bounds`:
///
/// ```text
/// u1* = clamp( (l1 - l4) S / r1 )
/// u2* = clamp( (l2 - (1-p) l3 - p l4) E / r2 )
/// ```
pub fn stationary_controls(
    p: &ModelParams,
    w: &ObjectiveWeights,
    x: &State,
    lam: &Adjoint,
    bounds: &ControlBounds,
) -> Control {
    Control {
        u1: bounds.clamp((lam.l1 - lam.l4) * x.s / w.r1),
        u2: bounds.clamp((lam.l2 - (1.0 - p.p) * lam.l3 - p.p * lam.l4) * x.e / w.r2),
    }
}

fn states_of(traj: &Trajectory) -> Vec<State> {
    traj.rows().map(State::from_slice).collect()
}

fn adjoints_of(traj: &Trajectory) -> Vec<Adjoint> {
    traj.rows().map(Adjoint::from_slice).collect()
}

/// Maps a node time back to its index; fields are only evaluated at nodes.
fn node_index(t: f64, h: f64, n: usize) -> usize {
    let j = (t / h).round();
    debug_assert!((j - t / h).abs() < 1e-6, "off-node field evaluation at t = {t}");
    (j.max(0.0) as usize).min(n)
}

/// Solves the optimal control problem by forward-backward sweeping, starting
/// from `u = 0`. Non-convergence within `config.max_iterations` is reported
/// through [`SweepSolution::converged`], not as an error; integration
/// failures abort with the iteration attached.
pub fn fbsm_solve(
    params: &ModelParams,
    weights: &ObjectiveWeights,
    x0: &State,
    grid: &TimeGrid,
    config: &SweepConfig,
) -> Result<SweepSolution> {
    params.validate()?;
    weights.validate()?;
    x0.validate()?;
    config.validate()?;

    let n = grid.n_steps();
    let nodes = grid.n_nodes();
    let h = grid.h();
    let tf = grid.tf();
    let alpha = params.alpha;
    let ci = config.corrector_iterations;
    let bounds = config.bounds();
    let lambda_tf = [weights.a3, weights.a4, 0.0, 0.0];

    // Caputo reading of the reversed adjoint problem drops the boundary term
    // lambda(tf) (tf - t)^(-alpha) / Gamma(1 - alpha); optionally restore it.
    // At alpha = 1 the term vanishes identically.
    let rl_coeff = if config.adjoint_rl_correction && alpha < 1.0 {
        1.0 / gamma(1.0 - alpha)
    } else {
        0.0
    };
    // The kernel is integrable but pointwise singular at t = tf; the terminal
    // node uses its average over the last cell instead.
    let terminal_kernel = h.powf(-alpha) / (1.0 - alpha).max(f64::MIN_POSITIVE);

    let x0_arr = x0.to_array();
    let mut u = vec![Control::ZERO; nodes];
    let mut objective_history = Vec::new();
    let mut converged = false;

    let mut states: Vec<State> = Vec::new();
    let mut adjoints: Vec<Adjoint> = Vec::new();
    let mut u_stat = vec![Control::ZERO; nodes];

    for iteration in 1..=config.max_iterations {
        let wrap = |e: Error| Error::SweepAborted {
            iteration,
            source: Box::new(e),
        };

        let u_now = &u;
        let state_field = FnField::new(4, |t: f64, x: &[f64], dx: &mut [f64]| {
            let j = node_index(t, h, n);
            let s = State::from_slice(x);
            dx.copy_from_slice(&rhs_controlled(params, &s, &u_now[j]));
        });
        let forward =
            integrate_caputo_ivp(&state_field, &x0_arr, grid, alpha, ci).map_err(wrap)?;
        states = states_of(&forward);

        let states_now = &states;
        let adjoint_field = FnField::new(4, |t: f64, lam: &[f64], dx: &mut [f64]| {
            let j = node_index(t, h, n);
            let lam = Adjoint::from_slice(lam);
            let g = rhs_adjoint(params, weights, &states_now[j], &u_now[j], &lam, config.adjoint_mode);
            for c in 0..4 {
                dx[c] = -g[c];
            }
            if rl_coeff != 0.0 {
                let s = tf - t;
                let kernel = if j == n { terminal_kernel } else { s.powf(-alpha) };
                for c in 0..4 {
                    dx[c] += rl_coeff * lambda_tf[c] * kernel;
                }
            }
        });
        let backward =
            integrate_adjoint_tvp(&adjoint_field, &lambda_tf, grid, alpha, ci).map_err(wrap)?;
        adjoints = adjoints_of(&backward);

        for j in 0..nodes {
            u_stat[j] = stationary_controls(params, weights, &states[j], &adjoints[j], &bounds);
        }

        objective_history.push(objective(weights, grid, &states, &u)?);

        let mut change = 0.0f64;
        let mut scale = 0.0f64;
        for j in 0..nodes {
            let next = Control {
                u1: (1.0 - config.omega) * u[j].u1 + config.omega * u_stat[j].u1,
                u2: (1.0 - config.omega) * u[j].u2 + config.omega * u_stat[j].u2,
            };
            change = change
                .max((next.u1 - u[j].u1).abs())
                .max((next.u2 - u[j].u2).abs());
            scale = scale.max(next.u1.abs()).max(next.u2.abs());
            u[j] = next;
        }

        if change <= config.tolerance * (scale + 1e-12) {
            converged = true;
            break;
        }
    }

    let iterations_used = objective_history.len();
    let mut solution = SweepSolution {
        grid: *grid,
        states,
        adjoints,
        controls: u_stat,
        objective_history,
        converged,
        iterations_used,
        stationarity_residual: 0.0,
    };
    solution.stationarity_residual = stationarity_residual(&solution, params, weights, &bounds);
    Ok(solution)
}

/// Largest violation of the Pontryagin stationarity conditions along the
/// solution: `|dH/du_i|` at nodes where the control is strictly inside the
/// bounds, and the projected one-sided violation at active bounds (a control
/// pinned at the upper bound only violates optimality if the gradient still
/// points upward, and symmetrically at the lower bound).
pub fn stationarity_residual(
    solution: &SweepSolution,
    params: &ModelParams,
    weights: &ObjectiveWeights,
    bounds: &ControlBounds,
) -> f64 {
    let mut worst = 0.0f64;
    for ((x, lam), u) in solution
        .states
        .iter()
        .zip(&solution.adjoints)
        .zip(&solution.controls)
    {
        let g1 = weights.r1 * u.u1 - (lam.l1 - lam.l4) * x.s;
        let g2 = weights.r2 * u.u2
            - (lam.l2 - (1.0 - params.p) * lam.l3 - params.p * lam.l4) * x.e;
        for (v, g) in [(u.u1, g1), (u.u2, g2)] {
            let violation = if v <= bounds.min {
                (-g).max(0.0)
            } else if v >= bounds.max {
                g.max(0.0)
            } else {
                g.abs()
            };
            worst = worst.max(violation);
        }
    }
    worst
}
