//! Trajectory and summary CSV emission.
//!
//! Cells use the shortest decimal rendering that round-trips the exact
//! double, so re-parsing a file recovers the computed values bit for bit.
//! Line endings are LF.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::model::{Control, State};
use crate::sweep::Adjoint;

use super::CaseResult;

pub(crate) const TRAJECTORY_HEADER: &str = "t,S,E,I,R,u1,u2,lambda1,lambda2,lambda3,lambda4";
pub(crate) const SUMMARY_HEADER: &str =
    "variant,alpha,objective,iterations,converged,stationarity_residual";

/// Shortest round-trip decimal form of a double.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn check_len(name: &'static str, expected: usize, got: usize) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name}: expected {expected} nodes, got {got}"
        )))
    }
}

/// Renders one trajectory as CSV text, one row per node. Control and adjoint
/// columns of runs that do not produce them are written as zeros so every
/// file shares one schema.
pub fn trajectory_csv(
    grid: &TimeGrid,
    states: &[State],
    controls: Option<&[Control]>,
    adjoints: Option<&[Adjoint]>,
) -> Result<String> {
    let nodes = grid.n_nodes();
    check_len("states", nodes, states.len())?;
    if let Some(u) = controls {
        check_len("controls", nodes, u.len())?;
    }
    if let Some(l) = adjoints {
        check_len("adjoints", nodes, l.len())?;
    }

    let mut out = String::with_capacity(nodes * 96);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for j in 0..nodes {
        let x = &states[j];
        let u = controls.map_or(Control::ZERO, |u| u[j]);
        let l = adjoints.map_or(Adjoint::ZERO, |l| l[j]);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(grid.node(j)),
            fmt_f64(x.s),
            fmt_f64(x.e),
            fmt_f64(x.i),
            fmt_f64(x.r),
            fmt_f64(u.u1),
            fmt_f64(u.u2),
            fmt_f64(l.l1),
            fmt_f64(l.l2),
            fmt_f64(l.l3),
            fmt_f64(l.l4),
        );
    }
    Ok(out)
}

/// Writes [`trajectory_csv`] output to `path`.
pub fn write_trajectory_csv(
    path: &Path,
    grid: &TimeGrid,
    states: &[State],
    controls: Option<&[Control]>,
    adjoints: Option<&[Adjoint]>,
) -> Result<()> {
    let text = trajectory_csv(grid, states, controls, adjoints)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Renders the run summary, one row per scenario item in execution order.
pub(crate) fn summary_csv(cases: &[CaseResult]) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for case in cases {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            case.variant.name(),
            fmt_f64(case.alpha),
            fmt_f64(case.objective),
            case.iterations,
            case.converged,
            fmt_f64(case.stationarity_residual),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Variant;

    #[test]
    fn three_node_grid_gives_header_plus_three_rows() {
        let grid = TimeGrid::new(1.0, 2).unwrap();
        let states = vec![
            State { s: 1.0, e: 2.0, i: 3.0, r: 4.0 };
            3
        ];
        let text = trajectory_csv(&grid, &states, None, None).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], TRAJECTORY_HEADER);
        assert_eq!(lines[1], "0,1,2,3,4,0,0,0,0,0,0");
        assert_eq!(lines[2], "0.5,1,2,3,4,0,0,0,0,0,0");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn cells_round_trip_bit_exactly() {
        let grid = TimeGrid::new(0.3, 2).unwrap();
        let values = [
            0.1 + 0.2,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            -0.0,
            1e300,
            271.00000000000006,
        ];
        let states: Vec<State> = values
            .iter()
            .map(|&v| State { s: v, e: v, i: v, r: v })
            .collect();
        let states = &states[..3];
        let text = trajectory_csv(&grid, states, None, None).unwrap();
        for (line, want) in text.lines().skip(1).zip(states) {
            let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cells.len(), 11);
            assert!(cells[1].to_bits() == want.s.to_bits());
            assert!(cells[4].to_bits() == want.r.to_bits());
        }
        // The t column round-trips too.
        let t1: f64 = text.lines().nth(2).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(t1.to_bits(), grid.node(1).to_bits());
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let grid = TimeGrid::new(1.0, 2).unwrap();
        let states = vec![State::ZERO; 2];
        assert!(trajectory_csv(&grid, &states, None, None).is_err());
        let states = vec![State::ZERO; 3];
        let controls = vec![Control::ZERO; 2];
        assert!(trajectory_csv(&grid, &states, Some(&controls), None).is_err());
    }

    #[test]
    fn summary_rows_follow_case_order() {
        let case = |variant, alpha, objective| CaseResult {
            variant,
            alpha,
            states: Vec::new(),
            controls: None,
            adjoints: None,
            objective,
            iterations: 7,
            converged: true,
            stationarity_residual: 1e-9,
        };
        let text = summary_csv(&[
            case(Variant::Uncontrolled, 0.75, 12.5),
            case(Variant::Controlled, 0.75, 3.25),
        ]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SUMMARY_HEADER);
        assert_eq!(lines[1], "uncontrolled,0.75,12.5,7,true,0.000000001");
        assert_eq!(lines[2], "controlled,0.75,3.25,7,true,0.000000001");
    }
}
