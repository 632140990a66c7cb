//! Isomorphism, simulation and the two equivalences, with witnesses and
//! counterexamples that can be checked independently of the searches.

pub mod consequences;
pub mod iso;
pub mod sim;

use serde::Serialize;
use thiserror::Error;

pub use consequences::{verify_simulation_consequences, ClauseViolation, ConsequenceReport};
pub use iso::{
    check_graph_isomorphism, check_iso_witness, check_isomorphism, BitMap, IsoRefutation, IsoVerdict, IsoWitness,
    DEFAULT_ISO_BUDGET,
};
pub use sim::{
    check_simulation, check_simulation_witness, replay_counterexample, SimCounterexample, SimOptions, SimVerdict,
    SimulationWitness, DEFAULT_MAP_BUDGET,
};

use crate::exec::{ProtoAlgorithm, StepKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("invalid input map: {0}")]
    InvalidInputMap(String),
    #[error("the step bound must be at least 1")]
    ZeroBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<W, C> {
    Proven { witness: W },
    Refuted { counterexample: C },
    UnknownAtBound { bound: usize, reason: String },
}

impl<W, C> Verdict<W, C> {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::UnknownAtBound { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Proven { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn counterexample(&self) -> Option<&C> {
        match self {
            Verdict::Refuted { counterexample } => Some(counterexample),
            _ => None,
        }
    }

    /// 0 proven, 1 refuted, 2 unknown.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Proven { .. } => 0,
            Verdict::Refuted { .. } => 1,
            Verdict::UnknownAtBound { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Proven { .. } => "proven",
            Verdict::Refuted { .. } => "refuted",
            Verdict::UnknownAtBound { .. } => "unknown_at_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// The second proto-algorithm simulates the first.
    Forward,
    /// The first simulates the second.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivWitness {
    pub forward: SimulationWitness,
    pub backward: SimulationWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivCounterexample {
    pub direction: Direction,
    pub counterexample: SimCounterexample,
}

pub type EquivVerdict = Verdict<EquivWitness, EquivCounterexample>;

/// Simulation in both directions; a refutation in either direction wins,
/// the forward one first.
pub fn check_equivalence(
    a: &ProtoAlgorithm,
    b: &ProtoAlgorithm,
    kind: StepKind,
    opts: SimOptions,
) -> Result<EquivVerdict, EquivError> {
    let fwd = check_simulation(a, b, kind, None, opts)?;
    let bwd = check_simulation(b, a, kind, None, opts)?;
    Ok(match (fwd, bwd) {
        (Verdict::Refuted { counterexample }, _) => {
            Verdict::Refuted { counterexample: EquivCounterexample { direction: Direction::Forward, counterexample } }
        }
        (_, Verdict::Refuted { counterexample }) => {
            Verdict::Refuted { counterexample: EquivCounterexample { direction: Direction::Backward, counterexample } }
        }
        (Verdict::UnknownAtBound { bound, reason }, _) | (_, Verdict::UnknownAtBound { bound, reason }) => {
            Verdict::UnknownAtBound { bound, reason }
        }
        (Verdict::Proven { witness: forward }, Verdict::Proven { witness: backward }) => {
            Verdict::Proven { witness: EquivWitness { forward, backward } }
        }
    })
}

pub fn check_aeqv(a: &ProtoAlgorithm, b: &ProtoAlgorithm, opts: SimOptions) -> Result<EquivVerdict, EquivError> {
    check_equivalence(a, b, StepKind::Algorithmic, opts)
}

pub fn check_ceqv(a: &ProtoAlgorithm, b: &ProtoAlgorithm, opts: SimOptions) -> Result<EquivVerdict, EquivError> {
    check_equivalence(a, b, StepKind::Computational, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::fixtures;

    fn opts() -> SimOptions {
        SimOptions::default()
    }

    #[test]
    fn self_simulation() {
        for (name, a) in fixtures::all() {
            for kind in [StepKind::Algorithmic, StepKind::Computational] {
                let v = check_simulation(&a, &a, kind, None, opts()).unwrap();
                let w = v.witness().unwrap_or_else(|| panic!("{name} {kind}: {v:?}"));
                assert!(check_simulation_witness(&a, &a, w).is_empty(), "{name}");
            }
            let iso = check_isomorphism(&a, &a, DEFAULT_ISO_BUDGET);
            assert!(check_iso_witness(&a, &a, iso.witness().unwrap()).is_empty(), "{name}");
        }
    }

    #[test]
    fn renamed_countdown_is_isomorphic_with_swapped_bits() {
        let (a, b) = (fixtures::cd(), fixtures::cd_renamed());
        let v = check_isomorphism(&a, &b, DEFAULT_ISO_BUDGET);
        let w = v.witness().expect("isomorphic");
        assert_eq!(w.bits, BitMap::Swap);
        assert!(check_iso_witness(&a, &b, w).is_empty());
        // The hand-made witness.
        let s = |x: &str, y: &str| (x.to_string(), y.to_string());
        let ids: Vec<_> = a.main_values().iter().map(|v| (v.clone(), v.clone())).collect();
        let hand = IsoWitness {
            functions: vec![s("ini", "ini"), s("fin", "fin"), s("dec", "dec")],
            predicates: vec![s("iszero", "isnonzero")],
            vertices: vec![s("r", "s"), s("c", "t"), s("g", "u"), s("h", "w")],
            data: ids.clone(),
            inputs: ids.clone(),
            outputs: ids,
            bits: BitMap::Swap,
        };
        assert!(check_iso_witness(&a, &b, &hand).is_empty());
        let mut wrong = hand.clone();
        wrong.bits = BitMap::Identity;
        assert!(!check_iso_witness(&a, &b, &wrong).is_empty());
    }

    #[test]
    fn strictness_examples() {
        let (a, b) = fixtures::diamond();
        assert!(check_isomorphism(&a, &b, DEFAULT_ISO_BUDGET).is_refuted());
        assert!(check_aeqv(&a, &b, opts()).unwrap().is_proven());

        let (a, b) = fixtures::cyc();
        let v = check_aeqv(&a, &b, opts()).unwrap();
        let c = v.counterexample().expect("refuted");
        let (x, y) = match c.direction {
            Direction::Forward => (&a, &b),
            Direction::Backward => (&b, &a),
        };
        assert!(replay_counterexample(x, y, StepKind::Algorithmic, &c.counterexample));
        assert!(check_ceqv(&a, &b, opts()).unwrap().is_proven());

        let (a, b) = fixtures::swap();
        let v = check_aeqv(&a, &b, opts()).unwrap();
        let w = v.witness().expect("proven");
        assert!(check_simulation_witness(&a, &b, &w.forward).is_empty());
        assert!(w.forward.relation.iter().any(|(s, t)| s != t));
    }

    #[test]
    fn simulation_consequences_self_check() {
        let (a, b) = (fixtures::cd(), fixtures::cd_renamed());
        let v = check_simulation(&a, &b, StepKind::Algorithmic, None, opts()).unwrap();
        let r = verify_simulation_consequences(&a, &b, v.witness().unwrap(), 1000);
        assert_eq!(r.converging_inputs, 4);
        assert!(r.is_ok());

        let (a, b) = fixtures::cyc();
        let v = check_simulation(&a, &b, StepKind::Computational, None, opts()).unwrap();
        let r = verify_simulation_consequences(&a, &b, v.witness().unwrap(), 1000);
        assert!(!r.fails(1) && !r.fails(2) && r.fails(3));
    }

    #[test]
    fn spinner_diverges_in_lockstep() {
        let a = fixtures::spinner();
        assert!(check_aeqv(&a, &a, opts()).unwrap().is_proven());
        let tight = SimOptions { bound: 2, ..opts() };
        assert!(check_aeqv(&a, &a, tight).unwrap().is_unknown());
    }
}
