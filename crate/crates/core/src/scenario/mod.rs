//! Scenario orchestration: config ingestion, the uncontrolled/controlled
//! run matrix over a list of fractional orders, and file emission.
//!
//! A scenario is described by one JSON document (see [`ScenarioConfig`]).
//! [`solve_scenario`] produces in-memory results; [`run_scenario`]
//! additionally writes one trajectory CSV per item, optional per-compartment
//! SVG figures, and a summary CSV. Items run concurrently when the
//! `parallel` feature is enabled; outputs are deterministic either way
//! because items are independent and emitted in config order.

mod csv;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracode::{integrate_caputo_ivp, FnField};
use crate::grid::TimeGrid;
use crate::model::{
    objective, rhs_uncontrolled, Control, ModelParams, ObjectiveWeights, State,
};
use crate::sweep::{fbsm_solve, Adjoint, SweepConfig};

pub use csv::{trajectory_csv, write_trajectory_csv};

/// Fully validated scenario description.
///
/// `model` and `initial_state` are required; every other block takes the
/// documented defaults when omitted. Unknown keys are rejected. When
/// `alphas` is omitted the scenario runs at the model's own order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Epidemic model rates and default order.
    pub model: ModelParams,
    /// Compartment values at t = 0.
    pub initial_state: State,
    /// Objective weights.
    #[serde(default)]
    pub weights: ObjectiveWeights,
    /// Time horizon and resolution.
    #[serde(default)]
    pub grid: TimeGrid,
    /// Sweep iteration parameters.
    #[serde(default)]
    pub sweep: SweepConfig,
    /// Fractional orders to run, each in (0, 1].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    /// Directory the run writes into.
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl ScenarioConfig {
    /// Orders the scenario will run, falling back to `model.alpha`.
    pub fn alpha_list(&self) -> Vec<f64> {
        self.alphas
            .clone()
            .unwrap_or_else(|| vec![self.model.alpha])
    }

    /// Validates every block, naming offending fields by their JSON path.
    pub fn validate(&self) -> Result<()> {
        if let Some((name, msg)) = self.model.field_violation() {
            return Err(Error::config(&format!("model.{name}"), msg));
        }
        if let Some((name, msg)) = self.initial_state.field_violation() {
            return Err(Error::config(&format!("initial_state.{name}"), msg));
        }
        if let Some((name, msg)) = self.weights.field_violation() {
            return Err(Error::config(&format!("weights.{name}"), msg));
        }
        if let Some((name, msg)) = self.sweep.field_violation() {
            return Err(Error::config(&format!("sweep.{name}"), msg));
        }
        if let Some(alphas) = &self.alphas {
            if alphas.is_empty() {
                return Err(Error::config("alphas", "must be non-empty"));
            }
            for (i, &a) in alphas.iter().enumerate() {
                if !a.is_finite() || a <= 0.0 || a > 1.0 {
                    return Err(Error::config(
                        &format!("alphas[{i}]"),
                        format!("must lie in (0, 1], got {a}"),
                    ));
                }
            }
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(Error::config("output_dir", "must be non-empty"));
        }
        Ok(())
    }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let config: ScenarioConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Reads, parses, and validates a scenario file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

/// The two runs performed per fractional order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Free dynamics, no controls.
    Uncontrolled,
    /// Optimal-control solution of the sweep.
    Controlled,
}

impl Variant {
    /// Name used in filenames and the summary.
    pub fn name(self) -> &'static str {
        match self {
            Variant::Uncontrolled => "uncontrolled",
            Variant::Controlled => "controlled",
        }
    }
}

/// Which variants a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VariantSet {
    /// Only the free dynamics.
    UncontrolledOnly,
    /// Only the optimal-control solve.
    ControlledOnly,
    /// Both, paired per order.
    #[default]
    Both,
}

impl VariantSet {
    fn includes(self, v: Variant) -> bool {
        match self {
            VariantSet::UncontrolledOnly => v == Variant::Uncontrolled,
            VariantSet::ControlledOnly => v == Variant::Controlled,
            VariantSet::Both => true,
        }
    }
}

/// Output switches for [`run_scenario`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Variants to execute.
    pub variants: VariantSet,
    /// Also render per-compartment figures.
    pub svg: bool,
    /// Concurrency cap for scenario items; `None` uses the default pool.
    /// Ignored when the `parallel` feature is disabled.
    pub jobs: Option<usize>,
}

/// One finished scenario item.
#[derive(Debug, Clone)]
pub struct CaseResult {
    /// Which variant ran.
    pub variant: Variant,
    /// Fractional order it ran at.
    pub alpha: f64,
    /// State trajectory, one entry per node.
    pub states: Vec<State>,
    /// Controls (controlled runs only).
    pub controls: Option<Vec<Control>>,
    /// Adjoints (controlled runs only).
    pub adjoints: Option<Vec<Adjoint>>,
    /// Objective of the emitted trajectory and controls.
    pub objective: f64,
    /// Sweep iterations (0 for uncontrolled runs).
    pub iterations: usize,
    /// Whether the sweep converged (uncontrolled runs are trivially true).
    pub converged: bool,
    /// Stationarity residual (0 for uncontrolled runs).
    pub stationarity_residual: f64,
}

/// Everything a [`run_scenario`] call wrote, in config order.
#[derive(Debug, Clone)]
pub struct ScenarioReport {
    /// Per-item results.
    pub cases: Vec<CaseResult>,
    /// Trajectory CSV paths, aligned with `cases`.
    pub csv_paths: Vec<PathBuf>,
    /// Figure paths (empty unless SVG output was requested).
    pub svg_paths: Vec<PathBuf>,
    /// Summary CSV path.
    pub summary_path: PathBuf,
}

fn case_failed(variant: Variant, alpha: f64) -> impl Fn(Error) -> Error {
    move |e| Error::CaseFailed {
        variant: variant.name(),
        alpha,
        source: Box::new(e),
    }
}

/// Solves one scenario item at the given order.
pub fn solve_case(config: &ScenarioConfig, variant: Variant, alpha: f64) -> Result<CaseResult> {
    let params = config.model.with_alpha(alpha);
    let wrap = case_failed(variant, alpha);
    match variant {
        Variant::Uncontrolled => {
            params.validate().map_err(&wrap)?;
            config.initial_state.validate().map_err(&wrap)?;
            let field = FnField::new(4, |_t: f64, x: &[f64], dx: &mut [f64]| {
                dx.copy_from_slice(&rhs_uncontrolled(&params, &State::from_slice(x)));
            });
            let traj = integrate_caputo_ivp(
                &field,
                &config.initial_state.to_array(),
                &config.grid,
                alpha,
                config.sweep.corrector_iterations,
            )
            .map_err(&wrap)?;
            let states: Vec<State> = traj.rows().map(State::from_slice).collect();
            let zeros = vec![Control::ZERO; states.len()];
            let objective =
                objective(&config.weights, &config.grid, &states, &zeros).map_err(&wrap)?;
            Ok(CaseResult {
                variant,
                alpha,
                states,
                controls: None,
                adjoints: None,
                objective,
                iterations: 0,
                converged: true,
                stationarity_residual: 0.0,
            })
        }
        Variant::Controlled => {
            let solution = fbsm_solve(
                &params,
                &config.weights,
                &config.initial_state,
                &config.grid,
                &config.sweep,
            )
            .map_err(&wrap)?;
            let objective =
                objective(&config.weights, &config.grid, &solution.states, &solution.controls)
                    .map_err(&wrap)?;
            Ok(CaseResult {
                variant,
                alpha,
                states: solution.states,
                controls: Some(solution.controls),
                adjoints: Some(solution.adjoints),
                objective,
                iterations: solution.iterations_used,
                converged: solution.converged,
                stationarity_residual: solution.stationarity_residual,
            })
        }
    }
}

fn scenario_items(config: &ScenarioConfig, variants: VariantSet) -> Vec<(Variant, f64)> {
    let mut items = Vec::new();
    for &alpha in &config.alpha_list() {
        for variant in [Variant::Uncontrolled, Variant::Controlled] {
            if variants.includes(variant) {
                items.push((variant, alpha));
            }
        }
    }
    items
}

fn check_jobs(jobs: Option<usize>) -> Result<()> {
    if jobs == Some(0) {
        return Err(Error::InvalidInput("jobs must be at least 1".into()));
    }
    Ok(())
}

/// Runs `f` under a thread pool capped at `jobs` threads (when the
/// `parallel` feature is on and a cap was given).
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    #[cfg(feature = "parallel")]
    if let Some(n) = jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        return Ok(pool.install(f));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    Ok(f())
}

fn map_items<T: Send>(
    items: &[(Variant, f64)],
    f: impl Fn(Variant, f64) -> T + Sync,
) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(|&(v, a)| f(v, a)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    items.iter().map(|&(v, a)| f(v, a)).collect()
}

/// Solves every item of the scenario without touching the filesystem.
/// Results are ordered by config order (each alpha, uncontrolled before
/// controlled); the first failing item in that order aborts the run.
pub fn solve_scenario(
    config: &ScenarioConfig,
    variants: VariantSet,
    jobs: Option<usize>,
) -> Result<Vec<CaseResult>> {
    config.validate()?;
    check_jobs(jobs)?;
    let items = scenario_items(config, variants);
    let results = with_jobs(jobs, || {
        map_items(&items, |variant, alpha| solve_case(config, variant, alpha))
    })?;
    results.into_iter().collect()
}

fn case_filename(variant: Variant, alpha: f64) -> String {
    format!("{}_alpha{}.csv", variant.name(), alpha)
}

type Picker = fn(&State) -> f64;

const COMPARTMENTS: [(&str, Picker); 4] = [
    ("S", |x| x.s),
    ("E", |x| x.e),
    ("I", |x| x.i),
    ("R", |x| x.r),
];

fn write_figures(
    dir: &Path,
    grid: &TimeGrid,
    config: &ScenarioConfig,
    cases: &[CaseResult],
) -> Result<Vec<PathBuf>> {
    let alphas = config.alpha_list();
    let color_of = |alpha: f64| alphas.iter().position(|&a| a == alpha).unwrap_or(0);
    let mut paths = Vec::new();
    for (name, pick) in COMPARTMENTS {
        let mut series = Vec::new();
        for case in cases {
            series.push(svg::Series {
                label: format!("alpha = {}", case.alpha),
                color_index: color_of(case.alpha),
                dotted: case.variant == Variant::Uncontrolled,
                points: case
                    .states
                    .iter()
                    .enumerate()
                    .map(|(j, x)| (grid.node(j), pick(x)))
                    .collect(),
            });
        }
        let text = svg::render_figure(name, &format!("{name}(t)"), &series);
        let path = dir.join(format!("fig_{name}.svg"));
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Solves the scenario and writes its artifact files: one trajectory CSV
/// per item, optional figures, and `summary.csv` last, only after every
/// item has succeeded. Returns what was written.
pub fn run_scenario(config: &ScenarioConfig, options: &RunOptions) -> Result<ScenarioReport> {
    config.validate()?;
    check_jobs(options.jobs)?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let items = scenario_items(config, options.variants);
    let results = with_jobs(options.jobs, || {
        map_items(&items, |variant, alpha| -> Result<(CaseResult, PathBuf)> {
            let case = solve_case(config, variant, alpha)?;
            let path = dir.join(case_filename(variant, alpha));
            write_trajectory_csv(
                &path,
                &config.grid,
                &case.states,
                case.controls.as_deref(),
                case.adjoints.as_deref(),
            )
            .map_err(case_failed(variant, alpha))?;
            Ok((case, path))
        })
    })?;

    let mut cases = Vec::with_capacity(results.len());
    let mut csv_paths = Vec::with_capacity(results.len());
    for result in results {
        let (case, path) = result?;
        cases.push(case);
        csv_paths.push(path);
    }

    let svg_paths = if options.svg {
        write_figures(dir, &config.grid, config, &cases)?
    } else {
        Vec::new()
    };

    let summary_path = dir.join("summary.csv");
    fs::write(&summary_path, csv::summary_csv(&cases)).map_err(|e| Error::io(&summary_path, e))?;

    Ok(ScenarioReport {
        cases,
        csv_paths,
        svg_paths,
        summary_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario_json() -> String {
        r#"{
            "model": {
                "lambda": 0.271, "beta1": 0.00035, "beta2": 0.0004,
                "mu": 0.001, "rho": 0.0058, "gamma": 0.007,
                "tau": 0.002, "d": 0.00025, "p": 0.3
            },
            "initial_state": {"s": 220.0, "e": 100.0, "i": 3.0, "r": 0.0},
            "grid": {"tf": 20.0, "n_steps": 100},
            "alphas": [0.9, 1.0],
            "output_dir": "out"
        }"#
        .to_string()
    }

    #[test]
    fn parse_applies_defaults() {
        let config = parse_config(&scenario_json()).unwrap();
        assert_eq!(config.model.alpha, 1.0);
        assert_eq!(config.weights, ObjectiveWeights::default());
        assert_eq!(config.sweep, SweepConfig::default());
        assert_eq!(config.alpha_list(), vec![0.9, 1.0]);
        assert_eq!(config.grid.tf(), 20.0);
        assert_eq!(config.grid.n_steps(), 100);
    }

    #[test]
    fn omitted_alphas_fall_back_to_the_model_order() {
        let text = scenario_json().replace(r#""alphas": [0.9, 1.0],"#, "");
        let config = parse_config(&text).unwrap();
        assert_eq!(config.alpha_list(), vec![1.0]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = scenario_json().replace(r#""output_dir""#, r#""output_dirs""#);
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("output_dirs"));
    }

    #[test]
    fn out_of_range_values_name_their_path() {
        let text = scenario_json().replace(r#""mu": 0.001"#, r#""mu": 0"#);
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("model.mu"), "message was: {err}");

        let text = scenario_json().replace("[0.9, 1.0]", "[0.9, 1.5]");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("alphas[1]"), "message was: {err}");

        let text = scenario_json().replace("[0.9, 1.0]", "[]");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("alphas"), "message was: {err}");
    }

    #[test]
    fn weight_violations_are_path_qualified() {
        let text = scenario_json().replace(
            r#""initial_state""#,
            r#""weights": {"r1": 0.0}, "initial_state""#,
        );
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("weights.r1"), "message was: {err}");
    }

    #[test]
    fn items_pair_variants_per_alpha_in_order() {
        let config = parse_config(&scenario_json()).unwrap();
        let items = scenario_items(&config, VariantSet::Both);
        assert_eq!(
            items,
            vec![
                (Variant::Uncontrolled, 0.9),
                (Variant::Controlled, 0.9),
                (Variant::Uncontrolled, 1.0),
                (Variant::Controlled, 1.0),
            ]
        );
        let only = scenario_items(&config, VariantSet::UncontrolledOnly);
        assert_eq!(only.len(), 2);
        assert!(only.iter().all(|(v, _)| *v == Variant::Uncontrolled));
    }

    #[test]
    fn solve_scenario_orders_results_like_the_items() {
        let config = parse_config(&scenario_json()).unwrap();
        let cases = solve_scenario(&config, VariantSet::Both, Some(2)).unwrap();
        assert_eq!(cases.len(), 4);
        assert_eq!(cases[0].variant, Variant::Uncontrolled);
        assert_eq!(cases[0].alpha, 0.9);
        assert_eq!(cases[3].variant, Variant::Controlled);
        assert_eq!(cases[3].alpha, 1.0);
        assert!(cases.iter().all(|c| c.converged));
        // Controlled runs carry controls and adjoints, uncontrolled do not.
        assert!(cases[1].controls.is_some() && cases[1].adjoints.is_some());
        assert!(cases[0].controls.is_none() && cases[0].adjoints.is_none());
    }

    #[test]
    fn rejects_zero_jobs() {
        let config = parse_config(&scenario_json()).unwrap();
        assert!(solve_scenario(&config, VariantSet::Both, Some(0)).is_err());
    }

    #[test]
    fn case_failures_identify_the_alpha() {
        let mut config = parse_config(&scenario_json()).unwrap();
        config.model.lambda = 1e300;
        config.model.beta1 = 1e6;
        let err = solve_scenario(&config, VariantSet::Both, None).unwrap_err();
        match &err {
            Error::CaseFailed { variant, alpha, .. } => {
                assert_eq!(*variant, "uncontrolled");
                assert_eq!(*alpha, 0.9);
            }
            other => panic!("unexpected error {other:?}"),
        }
        let msg = err.to_string();
        assert!(msg.contains("0.9"), "message was: {msg}");
    }

    #[test]
    fn filenames_use_shortest_alpha_rendering() {
        assert_eq!(
            case_filename(Variant::Uncontrolled, 0.75),
            "uncontrolled_alpha0.75.csv"
        );
        assert_eq!(case_filename(Variant::Controlled, 1.0), "controlled_alpha1.csv");
    }
}
