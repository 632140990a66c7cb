//! Consequences of an algorithmic simulation on the computed functions.
//!
//! If `b` simulates `a` with maps `fI`, `fO`, then on every input where
//! `a` converges: (1) `b` converges on `fI(d)`, (2) `fO` maps its output to
//! the output of `a`, and (3) both take the same number of algorithmic
//! steps. This is a self-check of the checker and the executor.

use serde::Serialize;

use super::sim::SimulationWitness;
use crate::exec::{ProtoAlgorithm, StepKind};
use crate::interp::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseViolation {
    pub input: Value,
    /// 1: convergence, 2: output correspondence, 3: equal step counts.
    pub clause: u8,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConsequenceReport {
    pub converging_inputs: usize,
    pub violations: Vec<ClauseViolation>,
}

impl ConsequenceReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fails(&self, clause: u8) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

pub fn verify_simulation_consequences(
    a: &ProtoAlgorithm,
    b: &ProtoAlgorithm,
    w: &SimulationWitness,
    max_steps: usize,
) -> ConsequenceReport {
    let mut report = ConsequenceReport::default();
    for (i, d) in a.input_values().iter().enumerate() {
        let Some((out, nas)) = a.iterate_ix(StepKind::Algorithmic, i as u32, max_steps) else { continue };
        report.converging_inputs += 1;
        let out = &a.output_values()[out as usize];
        let mut violation =
            |clause, message: String| report.violations.push(ClauseViolation { input: d.clone(), clause, message });
        let Some(e) = w.input_map.iter().find(|(x, _)| x == d).map(|(_, e)| e) else {
            violation(1, "input is not mapped".into());
            continue;
        };
        let Ok(ei) = b.input_index(e) else {
            violation(1, format!("mapped input {e} is not an input"));
            continue;
        };
        let Some((out2, nas2)) = b.iterate_ix(StepKind::Algorithmic, ei, max_steps) else {
            violation(1, format!("no output from {e} within {max_steps} steps"));
            continue;
        };
        let out2 = &b.output_values()[out2 as usize];
        match w.output_map.iter().find(|(x, _)| x == out2) {
            Some((_, back)) if back == out => {}
            Some((_, back)) => violation(2, format!("output {out2} maps back to {back}, expected {out}")),
            None => violation(2, format!("output {out2} is not mapped")),
        }
        if nas != nas2 {
            violation(3, format!("{nas} algorithmic steps against {nas2}"));
        }
    }
    report
}
