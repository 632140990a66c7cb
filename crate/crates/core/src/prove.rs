//! Proving algorithmic equivalence through process terms: translate both
//! graphs, evaluate under `[MEM ↦ d]` for each input and show the results
//! derivably equal. The method is sound but incomplete, so a failed proof is
//! reported as inconclusive, never as a refutation.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exec::{IState, ProtoAlgorithm};
use crate::interp::Value;
use crate::procalg::{
    check_derivation, derivably_equal, head_normal_form, Atom, EqualityVerdict, Evaluated, Hnf, ProcError, Valuation,
    MEM,
};
use crate::translate::{graph_to_process, var_for_vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("mismatched signature: {0}")]
    MismatchedSignature(String),
    #[error("input {0} is not in the input domain")]
    InputNotInDomain(Value),
    #[error(transparent)]
    Proc(#[from] ProcError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProveVerdict {
    /// Derivably equal on every input; certifies algorithmic equivalence.
    Proven,
    /// Some input gives different unfoldings. Says nothing about equivalence.
    MethodInconclusive {
        input: Value,
    },
    UnknownAtBound {
        bound: usize,
        reason: String,
    },
}

impl ProveVerdict {
    /// 0 proven; 2 otherwise, since the method never refutes.
    pub fn exit_code(&self) -> i32 {
        match self {
            ProveVerdict::Proven => 0,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputOutcome {
    Proven,
    MethodInconclusive,
    UnknownAtBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub index: usize,
    pub left: Hnf,
    pub right: Hnf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputReport {
    pub input: Value,
    pub verdict: InputOutcome,
    /// Actions both sides agreed on before they parted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_prefix_on_divergence: Option<Vec<Atom>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<Divergence>,
    /// Number of axiom applications used, for proven inputs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProveReport {
    #[serde(flatten)]
    pub verdict: ProveVerdict,
    pub inputs: Vec<InputReport>,
}

pub fn prove_aeqv(
    a: &ProtoAlgorithm,
    b: &ProtoAlgorithm,
    inputs: Option<&[Value]>,
    bound: usize,
) -> Result<ProveReport, ProveError> {
    if a.alphabet() != b.alphabet() {
        return Err(ProveError::MismatchedSignature("the alphabets differ".into()));
    }
    if a.interp() != b.interp() {
        return Err(ProveError::MismatchedSignature("the interpretations differ".into()));
    }
    let inputs: Vec<Value> = match inputs {
        Some(xs) => {
            for x in xs {
                a.input_index(x).map_err(|_| ProveError::InputNotInDomain(x.clone()))?;
            }
            xs.to_vec()
        }
        None => a.input_values().to_vec(),
    };
    let (pa, pb) = (graph_to_process(a.graph()), graph_to_process(b.graph()));
    let (sa, sb) = (pa.shared_spec(), pb.shared_spec());
    let mut reports = Vec::new();
    for d in inputs {
        let rho = Valuation::single(MEM, d.clone());
        let left = Evaluated::new(rho.clone(), &pa.root, &sa);
        let right = Evaluated::new(rho, &pb.root, &sb);
        let report = match derivably_equal(a.interp(), &left, &right, bound)? {
            EqualityVerdict::Proven { left_log, right_log, .. } => InputReport {
                input: d,
                verdict: InputOutcome::Proven,
                trace_prefix_on_divergence: None,
                divergence: None,
                proof_steps: Some(left_log.iter().chain(&right_log).map(Vec::len).sum()),
            },
            EqualityVerdict::Refuted { index, prefix, left, right } => InputReport {
                input: d,
                verdict: InputOutcome::MethodInconclusive,
                trace_prefix_on_divergence: Some(prefix),
                divergence: Some(Divergence { index, left, right }),
                proof_steps: None,
            },
            EqualityVerdict::UnknownAtBound { .. } => InputReport {
                input: d,
                verdict: InputOutcome::UnknownAtBound,
                trace_prefix_on_divergence: None,
                divergence: None,
                proof_steps: None,
            },
        };
        reports.push(report);
    }
    let verdict = if let Some(r) = reports.iter().find(|r| r.verdict == InputOutcome::MethodInconclusive) {
        ProveVerdict::MethodInconclusive { input: r.input.clone() }
    } else if reports.iter().any(|r| r.verdict == InputOutcome::UnknownAtBound) {
        ProveVerdict::UnknownAtBound { bound, reason: "unfolding did not settle on some input".into() }
    } else {
        ProveVerdict::Proven
    };
    Ok(ProveReport { verdict, inputs: reports })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepMismatch {
    pub state: String,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StepAgreementReport {
    pub checked_states: usize,
    pub mismatches: Vec<StepMismatch>,
}

impl StepAgreementReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `astep` with head normal forms of the translated process on every
/// state reachable from an input. Every derivation is also replayed through
/// the axiom checker.
pub fn cross_validate_steps(a: &ProtoAlgorithm) -> StepAgreementReport {
    let g = a.graph();
    let p = graph_to_process(g);
    let spec = Arc::new(p.spec.clone());
    let mut report = StepAgreementReport::default();

    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<IState> = (0..a.input_values().len() as u32).map(IState::Input).collect();
    while let Some(s) = queue.pop_front() {
        if !seen.insert(s) {
            continue;
        }
        let next = a.astep_ix(s);
        if next != s {
            queue.push_back(next);
        }
        report.checked_states += 1;

        let state = a.to_state(s);
        let (var, value) = match &state {
            crate::exec::State::Input { value } => (p.root.clone(), value.clone()),
            crate::exec::State::Internal { vertex, value } => (var_for_vertex(g, vertex), value.clone()),
            crate::exec::State::Output { value } => (p.epsilon.clone(), value.clone()),
        };
        let expected = match a.to_state(next) {
            _ if matches!(s, IState::Output(_)) => Hnf::Terminated,
            crate::exec::State::Internal { vertex, value } => Hnf::Step {
                action: Atom::Assign { var: MEM.into(), value: value.clone() },
                valuation: Valuation::single(MEM, value),
                next: var_for_vertex(g, &vertex),
            },
            crate::exec::State::Output { value } => Hnf::Step {
                action: Atom::Assign { var: MEM.into(), value: value.clone() },
                valuation: Valuation::single(MEM, value),
                next: p.epsilon.clone(),
            },
            crate::exec::State::Input { .. } => unreachable!("astep never yields an input"),
        };
        let rho = Valuation::single(MEM, value);
        let mut mismatch = |found: String| {
            report.mismatches.push(StepMismatch { state: state.to_string(), expected: format!("{expected:?}"), found })
        };
        match head_normal_form(a.interp(), &rho, &var, &spec) {
            Err(e) => mismatch(format!("error: {e}")),
            Ok(d) if d.result != expected => mismatch(format!("{:?}", d.result)),
            Ok(d) => {
                if let Err(e) = check_derivation(a.interp(), &rho, &var, &spec, &d) {
                    mismatch(format!("derivation does not replay: {e}"));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::fixtures;

    #[test]
    fn fixture_verdicts() {
        let r = prove_aeqv(&fixtures::cd(), &fixtures::cd_reordered(), None, 1000).unwrap();
        assert_eq!(r.verdict, ProveVerdict::Proven);
        assert_eq!(r.inputs.len(), 4);

        let (a, b) = fixtures::swap();
        let r = prove_aeqv(&a, &b, None, 1000).unwrap();
        assert!(matches!(r.verdict, ProveVerdict::MethodInconclusive { .. }));
        assert!(r.inputs.iter().all(|i| i.verdict == InputOutcome::MethodInconclusive));

        let (a, b) = fixtures::cyc();
        let r = prove_aeqv(&a, &b, None, 1000).unwrap();
        assert!(matches!(r.verdict, ProveVerdict::MethodInconclusive { .. }));

        assert!(matches!(
            prove_aeqv(&fixtures::cd(), &fixtures::cd_renamed(), None, 1000),
            Err(ProveError::MismatchedSignature(_))
        ));
    }

    #[test]
    fn countdown_step_correspondence() {
        let r = cross_validate_steps(&fixtures::cd());
        assert!(r.is_ok(), "{:?}", r.mismatches);
        // 4 inputs, (c,d) and (g,d) for d in 0..3 minus (g,0), (h,0), out<0>.
        assert_eq!(r.checked_states, 4 + 4 + 3 + 1 + 1);
    }
}
