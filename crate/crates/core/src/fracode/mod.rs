//! Fractional ODE machinery: quadrature weights, the Adams-Bashforth-Moulton
//! predictor-corrector for Caputo initial-value problems, its time-reversed
//! form for adjoint terminal-value problems, the L1 derivative evaluator,
//! and the special functions backing them.

mod field;
mod integrate;
mod l1;
pub mod special;
mod weights;

pub use field::{FnField, Trajectory, VectorField};
pub use integrate::{integrate_adjoint_tvp, integrate_caputo_ivp};
pub use l1::l1_caputo_derivative;
pub use special::{gamma, mittag_leffler};
pub use weights::{abm_weights, AbmWeights};
