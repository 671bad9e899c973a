//! Controlled SEIR-type epidemic model with awareness and quarantine controls.
//!
//! States are `S` (susceptible), `E` (exposed), `I` (infected), `R`
//! (recovered). The uncontrolled dynamics are
//!
//! ```text
//! S' = Lambda - beta1 S E - beta2 S I - mu S + tau R
//! E' = beta1 S E + beta2 S I - (mu + rho) E
//! I' = rho E - (gamma + d + mu) I
//! R' = gamma I - (mu + tau) R
//! ```
//!
//! The two controls redistribute mass without creating or destroying it:
//! `u1` moves susceptibles directly to `R`, and `u2` removes exposed, a
//! fraction `p` recovering immediately and the rest entering `I`. Summing
//! the controlled right-hand side therefore gives the same population
//! balance `Lambda - mu N - d I` as the uncontrolled one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Model rates and the fractional order of the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Recruitment rate into the susceptible class.
    pub lambda: f64,
    /// Transmission rate from contact with exposed individuals.
    pub beta1: f64,
    /// Transmission rate from contact with infected individuals.
    pub beta2: f64,
    /// Natural death rate.
    pub mu: f64,
    /// Progression rate from exposed to infected.
    pub rho: f64,
    /// Recovery rate of infected individuals.
    pub gamma: f64,
    /// Relapse rate from recovered back to susceptible.
    pub tau: f64,
    /// Disease-induced death rate.
    pub d: f64,
    /// Fraction of quarantined exposed individuals that recover directly.
    pub p: f64,
    /// Fractional order of the dynamics, in (0, 1].
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    1.0
}

impl ModelParams {
    pub(crate) fn field_violation(&self) -> Option<(&'static str, String)> {
        let nonneg = [
            ("lambda", self.lambda),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("rho", self.rho),
            ("gamma", self.gamma),
            ("tau", self.tau),
            ("d", self.d),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Some((name, format!("must be non-negative and finite, got {v}")));
            }
        }
        if !self.mu.is_finite() || self.mu <= 0.0 {
            return Some(("mu", format!("must be positive, got {}", self.mu)));
        }
        if !self.p.is_finite() || !(0.0..=1.0).contains(&self.p) {
            return Some(("p", format!("must lie in [0, 1], got {}", self.p)));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 || self.alpha > 1.0 {
            return Some(("alpha", format!("must lie in (0,1], got {}", self.alpha)));
        }
        None
    }

    /// Checks the parameter ranges documented on each field.
    pub fn validate(&self) -> Result<()> {
        match self.field_violation() {
            Some((name, msg)) => Err(Error::InvalidInput(format!("model {name}: {msg}"))),
            None => Ok(()),
        }
    }

    /// Copy of the parameters with a different fractional order.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }
}

/// Compartment populations at one time point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct State {
    /// Susceptible.
    pub s: f64,
    /// Exposed.
    pub e: f64,
    /// Infected.
    pub i: f64,
    /// Recovered.
    pub r: f64,
}

impl State {
    /// Zero state.
    pub const ZERO: State = State {
        s: 0.0,
        e: 0.0,
        i: 0.0,
        r: 0.0,
    };

    pub(crate) fn from_slice(x: &[f64]) -> State {
        State {
            s: x[0],
            e: x[1],
            i: x[2],
            r: x[3],
        }
    }

    pub(crate) fn to_array(self) -> [f64; 4] {
        [self.s, self.e, self.i, self.r]
    }

    pub(crate) fn field_violation(&self) -> Option<(&'static str, String)> {
        for (name, v) in [("s", self.s), ("e", self.e), ("i", self.i), ("r", self.r)] {
            if !v.is_finite() || v < 0.0 {
                return Some((name, format!("must be non-negative and finite, got {v}")));
            }
        }
        None
    }

    /// Checks that every compartment is non-negative and finite.
    pub fn validate(&self) -> Result<()> {
        match self.field_violation() {
            Some((name, msg)) => Err(Error::InvalidInput(format!("state {name}: {msg}"))),
            None => Ok(()),
        }
    }
}

/// Control levels at one time point, each in the configured bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Control {
    /// Awareness/vaccination effort moving `S` to `R`.
    pub u1: f64,
    /// Quarantine effort removing exposed individuals.
    pub u2: f64,
}

impl Control {
    /// No control.
    pub const ZERO: Control = Control { u1: 0.0, u2: 0.0 };
}

/// Objective weights: running state costs, terminal costs, control costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObjectiveWeights {
    /// Running weight on the infected compartment.
    pub a1: f64,
    /// Running reward weight on the recovered compartment.
    pub a2: f64,
    /// Terminal weight on `S(tf)`.
    pub a3: f64,
    /// Terminal weight on `E(tf)`.
    pub a4: f64,
    /// Quadratic cost of `u1`.
    pub r1: f64,
    /// Quadratic cost of `u2`.
    pub r2: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights {
            a1: 1.0,
            a2: 1.0,
            a3: 1.0,
            a4: 1.0,
            r1: 10.0,
            r2: 10.0,
        }
    }
}

impl ObjectiveWeights {
    pub(crate) fn field_violation(&self) -> Option<(&'static str, String)> {
        for (name, v) in [
            ("a1", self.a1),
            ("a2", self.a2),
            ("a3", self.a3),
            ("a4", self.a4),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Some((name, format!("must be non-negative and finite, got {v}")));
            }
        }
        for (name, v) in [("r1", self.r1), ("r2", self.r2)] {
            if !v.is_finite() || v <= 0.0 {
                return Some((name, format!("must be positive, got {v}")));
            }
        }
        None
    }

    /// Checks the weight ranges (state weights non-negative, control costs positive).
    pub fn validate(&self) -> Result<()> {
        match self.field_violation() {
            Some((name, msg)) => Err(Error::InvalidInput(format!("weights {name}: {msg}"))),
            None => Ok(()),
        }
    }
}

/// Uncontrolled right-hand side.
pub fn rhs_uncontrolled(p: &ModelParams, x: &State) -> [f64; 4] {
    let infection = p.beta1 * x.s * x.e + p.beta2 * x.s * x.i;
    [
        p.lambda - infection - p.mu * x.s + p.tau * x.r,
        infection - (p.mu + p.rho) * x.e,
        p.rho * x.e - (p.gamma + p.d + p.mu) * x.i,
        p.gamma * x.i - (p.mu + p.tau) * x.r,
    ]
}

/// Controlled right-hand side: the uncontrolled field plus the control
/// transfer terms `-u1 S`, `-u2 E`, `+(1-p) u2 E`, `+u1 S + p u2 E`.
pub fn rhs_controlled(p: &ModelParams, x: &State, u: &Control) -> [f64; 4] {
    let mut dx = rhs_uncontrolled(p, x);
    let moved_s = u.u1 * x.s;
    let moved_e = u.u2 * x.e;
    dx[0] -= moved_s;
    dx[1] -= moved_e;
    dx[2] += (1.0 - p.p) * moved_e;
    dx[3] += moved_s + p.p * moved_e;
    dx
}

/// Total population `N = S + E + I + R`.
pub fn total_population(x: &State) -> f64 {
    x.s + x.e + x.i + x.r
}

/// Cost functional
///
/// ```text
/// J = A3 S(tf) + A4 E(tf)
///   + integral of A1 I - A2 R + (r1 u1^2 + r2 u2^2) / 2
/// ```
///
/// with the integral evaluated by the trapezoid rule on the grid nodes.
/// `states` and `controls` must both hold one entry per node.
pub fn objective(
    w: &ObjectiveWeights,
    grid: &TimeGrid,
    states: &[State],
    controls: &[Control],
) -> Result<f64> {
    let nodes = grid.n_nodes();
    if states.len() != nodes {
        return Err(Error::DimensionMismatch {
            expected: nodes,
            got: states.len(),
        });
    }
    if controls.len() != nodes {
        return Err(Error::DimensionMismatch {
            expected: nodes,
            got: controls.len(),
        });
    }

    let running = |x: &State, u: &Control| {
        w.a1 * x.i - w.a2 * x.r + 0.5 * (w.r1 * u.u1 * u.u1 + w.r2 * u.u2 * u.u2)
    };
    let mut integral = 0.5 * (running(&states[0], &controls[0])
        + running(&states[nodes - 1], &controls[nodes - 1]));
    for j in 1..nodes - 1 {
        integral += running(&states[j], &controls[j]);
    }
    integral *= grid.h();

    let last = &states[nodes - 1];
    Ok(w.a3 * last.s + w.a4 * last.e + integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn scenario_params() -> ModelParams {
        ModelParams {
            lambda: 0.271,
            beta1: 0.00035,
            beta2: 0.0004,
            mu: 0.001,
            rho: 0.0058,
            gamma: 0.007,
            tau: 0.002,
            d: 0.00025,
            p: 0.3,
            alpha: 1.0,
        }
    }

    fn scenario_state() -> State {
        State {
            s: 220.0,
            e: 100.0,
            i: 3.0,
            r: 0.0,
        }
    }

    #[test]
    fn uncontrolled_rhs_at_scenario_point() {
        // By substitution: infection = 7.7 + 0.264, mu S = 0.22, rho E = 0.58,
        // (gamma + d + mu) I = 0.02475, gamma I = 0.021.
        let dx = rhs_uncontrolled(&scenario_params(), &scenario_state());
        assert!((dx[0] - (-7.913)).abs() <= 1e-12);
        assert!((dx[1] - 7.284).abs() <= 1e-12);
        assert!((dx[2] - 0.55525).abs() <= 1e-12);
        assert!((dx[3] - 0.021).abs() <= 1e-12);
    }

    #[test]
    fn uncontrolled_rhs_at_origin_is_recruitment_only() {
        let dx = rhs_uncontrolled(&scenario_params(), &State::ZERO);
        assert_eq!(dx, [0.271, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn controlled_rhs_at_scenario_point_with_full_controls() {
        let u = Control { u1: 1.0, u2: 1.0 };
        let dx = rhs_controlled(&scenario_params(), &scenario_state(), &u);
        assert!((dx[0] - (-227.913)).abs() <= 1e-12);
        assert!((dx[1] - (-92.716)).abs() <= 1e-12);
        assert!((dx[2] - 70.55525).abs() <= 1e-12);
        assert!((dx[3] - 250.021).abs() <= 1e-12);
    }

    #[test]
    fn zero_control_reduces_to_uncontrolled_bitwise() {
        let x = scenario_state();
        let p = scenario_params();
        assert_eq!(rhs_controlled(&p, &x, &Control::ZERO), rhs_uncontrolled(&p, &x));
    }

    #[test]
    fn population_sum() {
        assert_eq!(total_population(&scenario_state()), 323.0);
        assert_eq!(total_population(&State::ZERO), 0.0);
    }

    #[test]
    fn objective_of_zero_data_is_zero() {
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let w = ObjectiveWeights::default();
        let states = vec![State::ZERO; 5];
        let controls = vec![Control::ZERO; 5];
        assert_eq!(objective(&w, &grid, &states, &controls).unwrap(), 0.0);
    }

    #[test]
    fn objective_integrates_constant_infection_exactly() {
        // A1 = 1, I = 1 over [0, 1]: the trapezoid rule is exact.
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let w = ObjectiveWeights {
            a1: 1.0,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
            ..ObjectiveWeights::default()
        };
        let state = State {
            s: 0.0,
            e: 0.0,
            i: 1.0,
            r: 0.0,
        };
        let states = vec![state; 11];
        let controls = vec![Control::ZERO; 11];
        let j = objective(&w, &grid, &states, &controls).unwrap();
        assert!((j - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn objective_charges_quadratic_control_cost() {
        // Constant u1 = 1 with r1 = 2 over [0, 1] costs exactly 1.
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let w = ObjectiveWeights {
            a1: 0.0,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
            r1: 2.0,
            r2: 10.0,
        };
        let states = vec![State::ZERO; 11];
        let controls = vec![Control { u1: 1.0, u2: 0.0 }; 11];
        let j = objective(&w, &grid, &states, &controls).unwrap();
        assert!((j - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn objective_rejects_mismatched_lengths() {
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let w = ObjectiveWeights::default();
        assert!(objective(&w, &grid, &[State::ZERO; 4], &[Control::ZERO; 5]).is_err());
        assert!(objective(&w, &grid, &[State::ZERO; 5], &[Control::ZERO; 4]).is_err());
    }

    #[test]
    fn validation_catches_out_of_range_parameters() {
        let mut p = scenario_params();
        p.mu = 0.0;
        assert!(p.validate().is_err());
        let mut p = scenario_params();
        p.p = 1.5;
        assert!(p.validate().is_err());
        let mut p = scenario_params();
        p.alpha = 0.0;
        assert!(p.validate().is_err());
        let w = ObjectiveWeights {
            r1: 0.0,
            ..ObjectiveWeights::default()
        };
        assert!(w.validate().is_err());
        let bad = State {
            s: -1.0,
            ..State::ZERO
        };
        assert!(bad.validate().is_err());
    }

    fn state_strategy() -> impl Strategy<Value = State> {
        (0.0f64..500.0, 0.0f64..500.0, 0.0f64..500.0, 0.0f64..500.0)
            .prop_map(|(s, e, i, r)| State { s, e, i, r })
    }

    proptest! {
        #[test]
        fn control_transfers_preserve_the_population_balance(
            x in state_strategy(),
            u1 in 0.0f64..1.0,
            u2 in 0.0f64..1.0,
        ) {
            let p = scenario_params();
            let dx = rhs_controlled(&p, &x, &Control { u1, u2 });
            let sum: f64 = dx.iter().sum();
            let expected = p.lambda - p.mu * total_population(&x) - p.d * x.i;
            let scale = dx.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            prop_assert!((sum - expected).abs() <= 1e-12 * scale);
        }

        #[test]
        fn objective_is_monotone_in_the_infection_weight(
            x in state_strategy(),
            bump in 0.0f64..5.0,
        ) {
            let grid = TimeGrid::new(1.0, 4).unwrap();
            let states = vec![x; 5];
            let controls = vec![Control::ZERO; 5];
            let base = ObjectiveWeights::default();
            let mut heavier = base;
            heavier.a1 += bump;
            let j0 = objective(&base, &grid, &states, &controls).unwrap();
            let j1 = objective(&heavier, &grid, &states, &controls).unwrap();
            prop_assert!(j1 >= j0 - 1e-12 * j0.abs().max(1.0));
        }
    }
}
