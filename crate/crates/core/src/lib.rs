//! Numerical toolkit for optimal control of a fractional-order SEIR
//! epidemic model.
//!
//! The crate is layered:
//!
//! * [`fracode`] — general-purpose fractional calculus: a Caputo
//!   initial-value integrator (Adams-type predictor-corrector), a matching
//!   terminal-value wrapper for adjoint problems, an L1 evaluator for
//!   Caputo derivatives of sampled trajectories, and the gamma /
//!   Mittag-Leffler special functions the schemes need.
//! * [`model`] — the SEIR dynamics with relapse and two controls
//!   (vaccination of susceptibles, treatment of exposed), plus the
//!   quadratic objective functional.
//! * [`sweep`] — the forward-backward sweep solving the optimal control
//!   problem: forward state pass, backward adjoint pass from the
//!   transversality data, stationary control law, relaxed updates.
//! * [`scenario`] — JSON config ingestion and the batch runner that writes
//!   trajectory CSVs, summary, and SVG figures.
//!
//! With the default `parallel` feature the scenario matrix and the large
//! reductions inside the integrators use a thread pool; disabling it gives
//! a dependency-free sequential build producing byte-identical output.
//!
//! ```
//! use focsweep::fracode::{integrate_caputo_ivp, mittag_leffler, FnField};
//! use focsweep::TimeGrid;
//!
//! // D^0.8 x = -x, x(0) = 1, whose exact solution is E_0.8(-t^0.8).
//! let field = FnField::new(1, |_t, x: &[f64], dx: &mut [f64]| dx[0] = -x[0]);
//! let grid = TimeGrid::new(1.0, 200)?;
//! let path = integrate_caputo_ivp(&field, &[1.0], &grid, 0.8, 1)?;
//! let exact = mittag_leffler(0.8, -1.0)?;
//! assert!((path.row(200)[0] - exact).abs() < 1e-3);
//! # Ok::<(), focsweep::Error>(())
//! ```

#![warn(missing_docs)]

mod error;
pub mod fracode;
mod grid;
pub mod model;
mod par;
pub mod scenario;
pub mod sweep;

pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use model::{Control, ModelParams, ObjectiveWeights, State};
pub use scenario::{
    load_config, parse_config, run_scenario, solve_scenario, CaseResult, RunOptions,
    ScenarioConfig, ScenarioReport, Variant, VariantSet,
};
pub use sweep::{fbsm_solve, Adjoint, AdjointMode, SweepConfig, SweepSolution};
