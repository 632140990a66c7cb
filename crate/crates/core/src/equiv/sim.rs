//! Algorithmic and computational simulation.
//!
//! Any simulation with input map `fI` contains, for every input `d`, the
//! pairs `(step^n(d), step'^n(fI d))`. So per candidate `fI` it suffices to
//! walk the paired trajectories: they must stay type-matched, and every
//! reached output of the simulating side must be paired with one output of
//! the simulated side. Pair trajectories live in a finite product, so a
//! repeated pair proves lockstep divergence.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::{EquivError, Verdict};
use crate::exec::{IState, ProtoAlgorithm, State, StepKind, DEFAULT_MAX_STEPS};
use crate::interp::Value;

/// Candidate input maps beyond this count are not searched.
pub const DEFAULT_MAP_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    /// Steps per paired trajectory.
    pub bound: usize,
    /// Maximum number of candidate input maps `|Din'|^|Din|`.
    pub budget: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { bound: DEFAULT_MAX_STEPS, budget: DEFAULT_MAP_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationWitness {
    pub kind: StepKind,
    /// `fI`: every input of the simulated side, in order.
    pub input_map: Vec<(Value, Value)>,
    /// `fO`: every output of the simulating side to an output of the simulated side.
    pub output_map: Vec<(Value, Value)>,
    pub relation: Vec<(State, State)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimCounterexample {
    /// After `step` steps from `input` and `mapped_input` the two states
    /// have different types.
    TypeMismatch {
        input_map: Vec<(Value, Value)>,
        input: Value,
        mapped_input: Value,
        step: usize,
        left: State,
        right: State,
    },
    /// One output of the simulating side is reached together with two
    /// different outputs of the simulated side.
    OutputNotUnique { input_map: Vec<(Value, Value)>, output: Value, inputs: (Value, Value), outputs: (Value, Value) },
    /// The simulating side has no inputs at all.
    NoInputs,
    /// Unreached outputs cannot be padded because the simulated side has
    /// no outputs.
    NoOutputs,
}

pub type SimVerdict = Verdict<SimulationWitness, SimCounterexample>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    Bad {
        step: usize,
        left: IState,
        right: IState,
    },
    /// Lockstep; both converge to the given outputs, or both diverge.
    Ok(Option<(u32, u32)>),
    Unknown,
}

fn walk(
    a: &ProtoAlgorithm,
    b: &ProtoAlgorithm,
    kind: StepKind,
    d: u32,
    e: u32,
    bound: usize,
    mut record: Option<&mut BTreeSet<(IState, IState)>>,
) -> Entry {
    let (mut s, mut t) = (IState::Input(d), IState::Input(e));
    let mut seen = HashSet::new();
    for step in 0..=bound {
        if s.type_tag() != t.type_tag() {
            return Entry::Bad { step, left: s, right: t };
        }
        if let Some(r) = record.as_deref_mut() {
            r.insert((s, t));
        }
        if let (IState::Output(o), IState::Output(p)) = (s, t) {
            return Entry::Ok(Some((o, p)));
        }
        if !seen.insert((s, t)) {
            return Entry::Ok(None);
        }
        s = a.step_ix(kind, s);
        t = b.step_ix(kind, t);
    }
    Entry::Unknown
}

/// Pairs of values as the witness and counterexamples list them.
fn map_listing(a: &ProtoAlgorithm, b: &ProtoAlgorithm, fi: &[u32]) -> Vec<(Value, Value)> {
    fi.iter().enumerate().map(|(d, &e)| (a.input_values()[d].clone(), b.input_values()[e as usize].clone())).collect()
}

struct Search<'a> {
    a: &'a ProtoAlgorithm,
    b: &'a ProtoAlgorithm,
    kind: StepKind,
    bound: usize,
    table: Vec<Vec<Option<Entry>>>,
}

impl Search<'_> {
    fn entry(&mut self, d: u32, e: u32) -> Entry {
        if let Some(x) = self.table[d as usize][e as usize] {
            return x;
        }
        let x = walk(self.a, self.b, self.kind, d, e, self.bound, None);
        self.table[d as usize][e as usize] = Some(x);
        x
    }

    /// Candidates for `d`, the same value first when it exists.
    fn candidates(&self, d: u32) -> Vec<u32> {
        let m = self.b.input_values().len() as u32;
        let same = self.b.input_values().binary_search(&self.a.input_values()[d as usize]).ok().map(|i| i as u32);
        same.into_iter().chain((0..m).filter(|e| Some(*e) != same)).collect()
    }

    /// Depth-first search over input maps; `optimistic` accepts unknown
    /// trajectories without output constraints.
    fn dfs(&mut self, d: u32, fi: &mut Vec<u32>, outs: &mut BTreeMap<u32, u32>, optimistic: bool) -> bool {
        let n = self.a.input_values().len() as u32;
        if d == n {
            return true;
        }
        for e in self.candidates(d) {
            let pair = match self.entry(d, e) {
                Entry::Bad { .. } => continue,
                Entry::Unknown if !optimistic => continue,
                Entry::Unknown | Entry::Ok(None) => None,
                Entry::Ok(Some(p)) => Some(p),
            };
            let mut added = false;
            if let Some((o, p)) = pair {
                match outs.get(&p) {
                    Some(&q) if q != o => continue,
                    Some(_) => {}
                    None => {
                        outs.insert(p, o);
                        added = true;
                    }
                }
            }
            fi.push(e);
            if self.dfs(d + 1, fi, outs, optimistic) {
                return true;
            }
            fi.pop();
            if added {
                outs.remove(&pair.expect("added").1);
            }
        }
        false
    }

    /// Why a specific map fails, if it fails definitively.
    fn explain(&mut self, fi: &[u32]) -> Option<SimCounterexample> {
        let mut outs: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
        for (d, &e) in fi.iter().enumerate() {
            match self.entry(d as u32, e) {
                Entry::Bad { step, left, right } => {
                    return Some(SimCounterexample::TypeMismatch {
                        input_map: map_listing(self.a, self.b, fi),
                        input: self.a.input_values()[d].clone(),
                        mapped_input: self.b.input_values()[e as usize].clone(),
                        step,
                        left: self.a.to_state(left),
                        right: self.b.to_state(right),
                    })
                }
                Entry::Ok(Some((o, p))) => match outs.get(&p) {
                    Some(&(d0, o0)) if o0 != o => {
                        let av = self.a.input_values();
                        let ao = self.a.output_values();
                        return Some(SimCounterexample::OutputNotUnique {
                            input_map: map_listing(self.a, self.b, fi),
                            output: self.b.output_values()[p as usize].clone(),
                            inputs: (av[d0 as usize].clone(), av[d].clone()),
                            outputs: (ao[o0 as usize].clone(), ao[o as usize].clone()),
                        });
                    }
                    Some(_) => {}
                    None => {
                        outs.insert(p, (d as u32, o));
                    }
                },
                Entry::Ok(None) | Entry::Unknown => {}
            }
        }
        None
    }

    fn witness(&self, fi: &[u32]) -> Result<SimulationWitness, SimCounterexample> {
        let (a, b) = (self.a, self.b);
        let mut rel = BTreeSet::new();
        for (d, &e) in fi.iter().enumerate() {
            walk(a, b, self.kind, d as u32, e, self.bound, Some(&mut rel));
        }
        let mut fo: BTreeMap<u32, u32> = BTreeMap::new();
        for (s, t) in &rel {
            if let (IState::Output(o), IState::Output(p)) = (s, t) {
                fo.insert(*p, *o);
            }
        }
        for p in 0..b.output_values().len() as u32 {
            if !fo.contains_key(&p) {
                if a.output_values().is_empty() {
                    return Err(SimCounterexample::NoOutputs);
                }
                // Padding pairs are step fixpoints, so closure is kept.
                fo.insert(p, 0);
                rel.insert((IState::Output(0), IState::Output(p)));
            }
        }
        Ok(SimulationWitness {
            kind: self.kind,
            input_map: map_listing(a, b, fi),
            output_map: fo
                .iter()
                .map(|(&p, &o)| (b.output_values()[p as usize].clone(), a.output_values()[o as usize].clone()))
                .collect(),
            relation: rel.into_iter().map(|(s, t)| (a.to_state(s), b.to_state(t))).collect(),
        })
    }
}

fn resolve_map(a: &ProtoAlgorithm, b: &ProtoAlgorithm, fi: &[(Value, Value)]) -> Result<Vec<u32>, EquivError> {
    let mut out = vec![None; a.input_values().len()];
    for (d, e) in fi {
        let di = a.input_index(d).map_err(|_| EquivError::InvalidInputMap(format!("{d} is not an input")))?;
        let ei = b
            .input_index(e)
            .map_err(|_| EquivError::InvalidInputMap(format!("{e} is not an input of the other side")))?;
        if out[di as usize].replace(ei).is_some() {
            return Err(EquivError::InvalidInputMap(format!("{d} is mapped twice")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| EquivError::InvalidInputMap(format!("{} is not mapped", a.input_values()[i]))))
        .collect()
}

/// Decide whether `b` simulates `a`. With `input_map` given only that map
/// is tried; otherwise the identity (when both input carriers coincide) and
/// then all maps, within the budget.
pub fn check_simulation(
    a: &ProtoAlgorithm,
    b: &ProtoAlgorithm,
    kind: StepKind,
    input_map: Option<&[(Value, Value)]>,
    opts: SimOptions,
) -> Result<SimVerdict, EquivError> {
    if opts.bound == 0 {
        return Err(EquivError::ZeroBound);
    }
    let (n, m) = (a.input_values().len(), b.input_values().len());
    let mut s = Search { a, b, kind, bound: opts.bound, table: vec![vec![None; m]; n] };

    let refuted_or_unknown = |s: &mut Search, fi: &[u32], unknown_reason: &str| -> SimVerdict {
        match s.explain(fi) {
            Some(c) => Verdict::Refuted { counterexample: c },
            None => Verdict::UnknownAtBound { bound: opts.bound, reason: unknown_reason.into() },
        }
    };
    let finish = |s: &Search, fi: &[u32]| -> SimVerdict {
        match s.witness(fi) {
            Ok(w) => Verdict::Proven { witness: w },
            Err(c) => Verdict::Refuted { counterexample: c },
        }
    };

    if let Some(map) = input_map {
        let fi = resolve_map(a, b, map)?;
        return Ok(
            if s.explain(&fi).is_none() && fi.iter().enumerate().all(|(d, &e)| s.entry(d as u32, e) != Entry::Unknown) {
                finish(&s, &fi)
            } else {
                refuted_or_unknown(&mut s, &fi, "trajectory bound")
            },
        );
    }
    if n > 0 && m == 0 {
        return Ok(Verdict::Refuted { counterexample: SimCounterexample::NoInputs });
    }

    // Identity first.
    let identity: Option<Vec<u32>> = (a.input_values() == b.input_values()).then(|| (0..n as u32).collect());
    if let Some(fi) = &identity {
        let definite = fi.iter().enumerate().all(|(d, &e)| s.entry(d as u32, e) != Entry::Unknown);
        if definite && s.explain(fi).is_none() {
            return Ok(finish(&s, fi));
        }
    }
    let candidates = (m as f64).powi(n as i32);
    if candidates > opts.budget as f64 {
        return Ok(Verdict::UnknownAtBound { bound: opts.bound, reason: "search budget".into() });
    }
    let mut fi = Vec::new();
    if s.dfs(0, &mut fi, &mut BTreeMap::new(), false) {
        return Ok(finish(&s, &fi));
    }
    fi.clear();
    if s.dfs(0, &mut fi, &mut BTreeMap::new(), true) {
        return Ok(Verdict::UnknownAtBound { bound: opts.bound, reason: "trajectory bound".into() });
    }
    let first = identity.unwrap_or_else(|| vec![0; n]);
    Ok(refuted_or_unknown(&mut s, &first, "trajectory bound"))
}

/// Check every defining clause of a simulation directly against the step
/// functions. Returns the violated clauses, if any.
pub fn check_simulation_witness(a: &ProtoAlgorithm, b: &ProtoAlgorithm, w: &SimulationWitness) -> Vec<String> {
    let mut errs = Vec::new();
    let rel: BTreeSet<&(State, State)> = w.relation.iter().collect();
    let step = |p: &ProtoAlgorithm, s: &State| match w.kind {
        StepKind::Algorithmic => p.astep(s),
        StepKind::Computational => p.cstep(s),
    };
    for (s, t) in &rel {
        let typed = matches!(
            (s, t),
            (State::Input { .. }, State::Input { .. })
                | (State::Internal { .. }, State::Internal { .. })
                | (State::Output { .. }, State::Output { .. })
        );
        if !typed {
            errs.push(format!("pair ({s}, {t}) mixes state types"));
            continue;
        }
        match (step(a, s), step(b, t)) {
            (Ok(s2), Ok(t2)) => {
                if !rel.contains(&(s2.clone(), t2.clone())) {
                    errs.push(format!("({s}, {t}) is in the relation but its successor ({s2}, {t2}) is not"));
                }
            }
            _ => errs.push(format!("pair ({s}, {t}) is not made of states of the two proto-algorithms")),
        }
    }
    for d in a.input_values() {
        let partners: Vec<&Value> = rel
            .iter()
            .filter_map(|(s, t)| match (s, t) {
                (State::Input { value }, State::Input { value: e }) if value == d => Some(e),
                _ => None,
            })
            .collect();
        if partners.len() != 1 {
            errs.push(format!("input {d} has {} partners", partners.len()));
        }
        let mapped: Vec<&Value> = w.input_map.iter().filter(|(x, _)| x == d).map(|(_, e)| e).collect();
        if mapped.len() != 1 || partners.len() == 1 && mapped[0] != partners[0] {
            errs.push(format!("input map disagrees with the relation at {d}"));
        }
    }
    for e in b.output_values() {
        let partners: Vec<&Value> = rel
            .iter()
            .filter_map(|(s, t)| match (s, t) {
                (State::Output { value }, State::Output { value: f }) if f == e => Some(value),
                _ => None,
            })
            .collect();
        if partners.len() != 1 {
            errs.push(format!("output {e} has {} partners", partners.len()));
        }
        let mapped: Vec<&Value> = w.output_map.iter().filter(|(x, _)| x == e).map(|(_, d)| d).collect();
        if mapped.len() != 1 || partners.len() == 1 && mapped[0] != partners[0] {
            errs.push(format!("output map disagrees with the relation at {e}"));
        }
    }
    errs
}

/// Re-run a counterexample and confirm that it shows what it claims.
pub fn replay_counterexample(a: &ProtoAlgorithm, b: &ProtoAlgorithm, kind: StepKind, c: &SimCounterexample) -> bool {
    let run = |p: &ProtoAlgorithm, d: &Value, steps: usize| -> Option<State> {
        let mut s = State::input(d.clone());
        for _ in 0..steps {
            s = match kind {
                StepKind::Algorithmic => p.astep(&s).ok()?,
                StepKind::Computational => p.cstep(&s).ok()?,
            };
        }
        Some(s)
    };
    let converge = |p: &ProtoAlgorithm, d: &Value| -> Option<Value> {
        let i = p.input_index(d).ok()?;
        p.iterate_ix(kind, i, DEFAULT_MAX_STEPS).map(|(o, _)| p.output_values()[o as usize].clone())
    };
    match c {
        SimCounterexample::TypeMismatch { input_map, input, mapped_input, step, left, right } => {
            input_map.iter().any(|(d, e)| d == input && e == mapped_input)
                && run(a, input, *step).as_ref() == Some(left)
                && run(b, mapped_input, *step).as_ref() == Some(right)
                && std::mem::discriminant(left) != std::mem::discriminant(right)
        }
        SimCounterexample::OutputNotUnique { input_map, output, inputs, outputs } => {
            let image = |d: &Value| input_map.iter().find(|(x, _)| x == d).map(|(_, e)| e.clone());
            let (Some(e0), Some(e1)) = (image(&inputs.0), image(&inputs.1)) else { return false };
            outputs.0 != outputs.1
                && converge(a, &inputs.0).as_ref() == Some(&outputs.0)
                && converge(a, &inputs.1).as_ref() == Some(&outputs.1)
                && converge(b, &e0).as_ref() == Some(output)
                && converge(b, &e1).as_ref() == Some(output)
        }
        SimCounterexample::NoInputs => b.input_values().is_empty() && !a.input_values().is_empty(),
        SimCounterexample::NoOutputs => a.output_values().is_empty() && !b.output_values().is_empty(),
    }
}
