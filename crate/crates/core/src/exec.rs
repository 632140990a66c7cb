//! Step semantics of proto-algorithms.
//!
//! A [`ProtoAlgorithm`] is validated once and then compiled to dense tables:
//! every carrier is enumerated, every symbol becomes a lookup table, and
//! states are represented internally as [`IState`] index triples.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{validate_algorithm_graph, AlgorithmGraph, Alphabet, Digraph, GraphReport, FIN, INI};
use crate::interp::{check_interpretation, Bit, InterpError, InterpReport, Interpretation, Value, DEFAULT_EXTENT_CAP};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtoError {
    #[error("invalid algorithm graph ({} violation(s)); first: {}", .0.violations.len(), .0.violations[0])]
    Graph(GraphReport),
    #[error("invalid interpretation ({} violation(s)); first: {}", .0.violations.len(), .0.violations[0])]
    Interp(InterpReport),
    #[error(transparent)]
    Eval(#[from] InterpError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("malformed state {0}")]
    MalformedState(State),
    #[error("input {0} is not in the input domain")]
    InputNotInDomain(Value),
    #[error("max_steps must be at least 1")]
    ZeroBound,
}

/// A state of a proto-algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum State {
    Input { value: Value },
    Internal { vertex: String, value: Value },
    Output { value: Value },
}

impl State {
    pub fn input(v: Value) -> Self {
        State::Input { value: v }
    }

    pub fn internal(vertex: impl Into<String>, v: Value) -> Self {
        State::Internal { vertex: vertex.into(), value: v }
    }

    pub fn output(v: Value) -> Self {
        State::Output { value: v }
    }

    pub fn value(&self) -> &Value {
        match self {
            State::Input { value } | State::Internal { value, .. } | State::Output { value } => value,
        }
    }

    pub fn is_output(&self) -> bool {
        matches!(self, State::Output { .. })
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Input { value } => write!(f, "in{value}"),
            State::Internal { vertex, value } => write!(f, "({vertex},{value})"),
            State::Output { value } => write!(f, "out{value}"),
        }
    }
}

/// Index form of [`State`]: carrier positions and vertex positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IState {
    Input(u32),
    Internal(u32, u32),
    Output(u32),
}

impl IState {
    /// 0 for inputs, 1 for internal states, 2 for outputs.
    pub fn type_tag(self) -> u8 {
        match self {
            IState::Input(_) => 0,
            IState::Internal(..) => 1,
            IState::Output(_) => 2,
        }
    }
}

/// Compiled vertex behaviour; operands index the symbol tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Ini { next: u32 },
    Op { op: u32, next: u32 },
    Pred { pred: u32, one: u32, zero: u32 },
    Fin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Algorithmic,
    Computational,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Algorithmic => "algorithmic",
            StepKind::Computational => "computational",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Converged { output: Value, nas: usize },
    DivergedAtBound { bound: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Record {
    pub algorithmic: bool,
    pub computational: bool,
}

impl Record {
    pub const NONE: Record = Record { algorithmic: false, computational: false };
    pub const BOTH: Record = Record { algorithmic: true, computational: true };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunResult {
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithmic_trace: Option<Vec<State>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computational_trace: Option<Vec<State>>,
}

/// Alphabet, algorithm graph and interpretation, validated together.
#[derive(Debug, Clone)]
pub struct ProtoAlgorithm {
    graph: AlgorithmGraph,
    interp: Interpretation,
    main: Vec<Value>,
    input: Vec<Value>,
    output: Vec<Value>,
    vertices: Vec<String>,
    vertex_index: HashMap<String, u32>,
    nodes: Vec<Node>,
    op_names: Vec<String>,
    pred_names: Vec<String>,
    ini: Vec<u32>,
    fin: Vec<u32>,
    ops: Vec<Vec<u32>>,
    preds: Vec<Vec<Bit>>,
}

fn position(carrier: &[Value], v: &Value) -> Option<u32> {
    carrier.binary_search(v).ok().map(|i| i as u32)
}

impl ProtoAlgorithm {
    pub fn new(alphabet: Alphabet, graph: Digraph, interp: Interpretation) -> Result<Self, ProtoError> {
        let report = validate_algorithm_graph(&alphabet, &graph);
        if !report.is_ok() {
            return Err(ProtoError::Graph(report));
        }
        let graph = AlgorithmGraph::new(alphabet, graph).map_err(ProtoError::Graph)?;
        Self::from_algorithm_graph(graph, interp)
    }

    pub fn from_algorithm_graph(graph: AlgorithmGraph, interp: Interpretation) -> Result<Self, ProtoError> {
        Self::with_cap(graph, interp, DEFAULT_EXTENT_CAP)
    }

    pub fn with_cap(graph: AlgorithmGraph, interp: Interpretation, cap: usize) -> Result<Self, ProtoError> {
        let report = check_interpretation(graph.alphabet(), &interp, cap)?;
        if !report.is_ok() {
            return Err(ProtoError::Interp(report));
        }
        let main = interp.main.enumerate(cap).map_err(InterpError::from)?;
        let input = interp.input.enumerate(cap).map_err(InterpError::from)?;
        let output = interp.output.enumerate(cap).map_err(InterpError::from)?;

        let idx = |carrier: &[Value], v: Value| position(carrier, &v).expect("closure checked");
        let mut ini = Vec::with_capacity(input.len());
        for d in &input {
            ini.push(idx(&main, interp.eval_fun(INI, d)?));
        }
        let mut fin = Vec::with_capacity(main.len());
        for d in &main {
            fin.push(idx(&output, interp.eval_fun(FIN, d)?));
        }
        let alphabet = graph.alphabet();
        let op_names: Vec<String> = alphabet.operations().map(str::to_string).collect();
        let pred_names: Vec<String> = alphabet.predicates().map(str::to_string).collect();
        let mut ops = Vec::new();
        for f in &op_names {
            let mut table = Vec::with_capacity(main.len());
            for d in &main {
                table.push(idx(&main, interp.eval_fun(f, d)?));
            }
            ops.push(table);
        }
        let mut preds = Vec::new();
        for p in &pred_names {
            let mut table = Vec::with_capacity(main.len());
            for d in &main {
                table.push(interp.eval_pred(p, d)?);
            }
            preds.push(table);
        }

        let g = graph.graph();
        let vertices: Vec<String> = g.vertices().map(str::to_string).collect();
        let vertex_index: HashMap<String, u32> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
        let vi = |v: &str| vertex_index[v];
        let nodes = vertices
            .iter()
            .map(|v| {
                let label = graph.label(v);
                if label == INI {
                    Node::Ini { next: vi(graph.next(v).expect("validated")) }
                } else if label == FIN {
                    Node::Fin
                } else if let Some(op) = op_names.iter().position(|f| f == label) {
                    Node::Op { op: op as u32, next: vi(graph.next(v).expect("validated")) }
                } else {
                    let pred = pred_names.iter().position(|p| p == label).expect("validated");
                    Node::Pred {
                        pred: pred as u32,
                        one: vi(graph.branch(v, Bit::One).expect("validated")),
                        zero: vi(graph.branch(v, Bit::Zero).expect("validated")),
                    }
                }
            })
            .collect();

        Ok(ProtoAlgorithm {
            graph,
            interp,
            main,
            input,
            output,
            vertices,
            vertex_index,
            nodes,
            op_names,
            pred_names,
            ini,
            fin,
            ops,
            preds,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.graph.alphabet()
    }

    pub fn graph(&self) -> &AlgorithmGraph {
        &self.graph
    }

    pub fn interp(&self) -> &Interpretation {
        &self.interp
    }

    /// The main carrier in enumeration order.
    pub fn main_values(&self) -> &[Value] {
        &self.main
    }

    pub fn input_values(&self) -> &[Value] {
        &self.input
    }

    pub fn output_values(&self) -> &[Value] {
        &self.output
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: &str) -> Option<u32> {
        self.vertex_index.get(v).copied()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root_index(&self) -> u32 {
        self.vertex_index[self.graph.graph().root()]
    }

    pub fn op_names(&self) -> &[String] {
        &self.op_names
    }

    pub fn pred_names(&self) -> &[String] {
        &self.pred_names
    }

    pub fn ini_table(&self) -> &[u32] {
        &self.ini
    }

    pub fn fin_table(&self) -> &[u32] {
        &self.fin
    }

    pub fn op_table(&self, op: usize) -> &[u32] {
        &self.ops[op]
    }

    pub fn pred_table(&self, pred: usize) -> &[Bit] {
        &self.preds[pred]
    }

    fn root_successor(&self) -> u32 {
        match self.nodes[self.root_index() as usize] {
            Node::Ini { next } => next,
            _ => unreachable!("validated root is ini"),
        }
    }

    pub fn astep_ix(&self, s: IState) -> IState {
        match s {
            IState::Input(d) => IState::Internal(self.root_successor(), self.ini[d as usize]),
            IState::Internal(v, d) => match self.nodes[v as usize] {
                // Only reachable from a state nobody produces; treat like the
                // first clause applied to the stored value.
                Node::Ini { next } => IState::Internal(next, d),
                Node::Op { op, next } => IState::Internal(next, self.ops[op as usize][d as usize]),
                Node::Pred { pred, one, zero } => match self.preds[pred as usize][d as usize] {
                    Bit::One => IState::Internal(one, d),
                    Bit::Zero => IState::Internal(zero, d),
                },
                Node::Fin => IState::Output(self.fin[d as usize]),
            },
            out @ IState::Output(_) => out,
        }
    }

    pub fn cstep_ix(&self, s: IState) -> IState {
        let mut s = s;
        // Predicate moves are concealed; validated graphs have no
        // predicate-only cycle, so this runs at most |V| times.
        loop {
            match s {
                IState::Internal(v, _) if matches!(self.nodes[v as usize], Node::Pred { .. }) => {
                    s = self.astep_ix(s);
                }
                _ => return self.astep_ix(s),
            }
        }
    }

    pub fn step_ix(&self, kind: StepKind, s: IState) -> IState {
        match kind {
            StepKind::Algorithmic => self.astep_ix(s),
            StepKind::Computational => self.cstep_ix(s),
        }
    }

    pub fn to_index(&self, s: &State) -> Result<IState, ExecError> {
        let bad = || ExecError::MalformedState(s.clone());
        Ok(match s {
            State::Input { value } => IState::Input(position(&self.input, value).ok_or_else(bad)?),
            State::Internal { vertex, value } => IState::Internal(
                self.vertex_index(vertex).ok_or_else(bad)?,
                position(&self.main, value).ok_or_else(bad)?,
            ),
            State::Output { value } => IState::Output(position(&self.output, value).ok_or_else(bad)?),
        })
    }

    pub fn to_state(&self, s: IState) -> State {
        match s {
            IState::Input(d) => State::input(self.input[d as usize].clone()),
            IState::Internal(v, d) => State::internal(self.vertices[v as usize].clone(), self.main[d as usize].clone()),
            IState::Output(d) => State::output(self.output[d as usize].clone()),
        }
    }

    pub fn astep(&self, s: &State) -> Result<State, ExecError> {
        Ok(self.to_state(self.astep_ix(self.to_index(s)?)))
    }

    pub fn cstep(&self, s: &State) -> Result<State, ExecError> {
        Ok(self.to_state(self.cstep_ix(self.to_index(s)?)))
    }

    pub fn input_index(&self, d: &Value) -> Result<u32, ExecError> {
        position(&self.input, d).ok_or_else(|| ExecError::InputNotInDomain(d.clone()))
    }

    /// Iterate `kind` steps from `Input(d)` until an output state appears.
    /// Returns the output index and the number of steps taken.
    pub fn iterate_ix(&self, kind: StepKind, d: u32, max_steps: usize) -> Option<(u32, usize)> {
        let mut s = IState::Input(d);
        for n in 1..=max_steps {
            s = self.step_ix(kind, s);
            if let IState::Output(o) = s {
                return Some((o, n));
            }
        }
        None
    }

    fn trace(&self, kind: StepKind, d: u32, max_steps: usize) -> Vec<State> {
        let mut s = IState::Input(d);
        let mut out = vec![self.to_state(s)];
        for _ in 0..max_steps {
            if matches!(s, IState::Output(_)) {
                break;
            }
            s = self.step_ix(kind, s);
            out.push(self.to_state(s));
        }
        out
    }

    pub fn run(&self, d: &Value, max_steps: usize, record: Record) -> Result<RunResult, ExecError> {
        if max_steps == 0 {
            return Err(ExecError::ZeroBound);
        }
        let di = self.input_index(d)?;
        let outcome = match self.iterate_ix(StepKind::Algorithmic, di, max_steps) {
            Some((o, nas)) => Outcome::Converged { output: self.output[o as usize].clone(), nas },
            None => Outcome::DivergedAtBound { bound: max_steps },
        };
        Ok(RunResult {
            outcome,
            algorithmic_trace: record.algorithmic.then(|| self.trace(StepKind::Algorithmic, di, max_steps)),
            computational_trace: record.computational.then(|| self.trace(StepKind::Computational, di, max_steps)),
        })
    }

    /// Like [`run`](Self::run) but iterating `cstep`; the count is the number
    /// of computational steps.
    pub fn run_computational(&self, d: &Value, max_steps: usize) -> Result<Outcome, ExecError> {
        let di = self.input_index(d)?;
        Ok(match self.iterate_ix(StepKind::Computational, di, max_steps) {
            Some((o, n)) => Outcome::Converged { output: self.output[o as usize].clone(), nas: n },
            None => Outcome::DivergedAtBound { bound: max_steps },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::fixtures;

    fn v(x: i64) -> Value {
        Value::scalar(x)
    }

    #[test]
    fn countdown_steps() {
        let cd = fixtures::cd();
        assert_eq!(cd.astep(&State::input(v(2))).unwrap(), State::internal("c", v(2)));
        assert_eq!(cd.astep(&State::internal("c", v(0))).unwrap(), State::internal("h", v(0)));
        assert_eq!(cd.astep(&State::output(v(1))).unwrap(), State::output(v(1)));
        assert_eq!(cd.cstep(&State::internal("c", v(2))).unwrap(), State::internal("c", v(1)));
        assert_eq!(cd.cstep(&State::internal("c", v(0))).unwrap(), State::output(v(0)));
        assert_eq!(cd.cstep(&State::output(v(3))).unwrap(), State::output(v(3)));
    }

    #[test]
    fn countdown_runs() {
        let cd = fixtures::cd();
        for n in 0..4 {
            let r = cd.run(&v(n), DEFAULT_MAX_STEPS, Record::BOTH).unwrap();
            assert_eq!(r.outcome, Outcome::Converged { output: v(0), nas: 2 * n as usize + 3 });
            assert_eq!(r.algorithmic_trace.unwrap().len(), 2 * n as usize + 4);
            assert_eq!(r.computational_trace.unwrap().last().unwrap(), &State::output(v(0)));
        }
        let r = cd.run(&v(0), DEFAULT_MAX_STEPS, Record::BOTH).unwrap();
        assert_eq!(
            r.algorithmic_trace.unwrap(),
            vec![State::input(v(0)), State::internal("c", v(0)), State::internal("h", v(0)), State::output(v(0))]
        );
    }

    #[test]
    fn malformed_states() {
        let cd = fixtures::cd();
        assert!(matches!(cd.astep(&State::internal("zz", v(0))), Err(ExecError::MalformedState(_))));
        assert!(matches!(cd.astep(&State::internal("c", v(9))), Err(ExecError::MalformedState(_))));
        assert!(matches!(cd.run(&v(7), 10, Record::NONE), Err(ExecError::InputNotInDomain(_))));
    }

    #[test]
    fn divergence_is_reported() {
        let a = fixtures::spinner();
        let r = a.run(&v(0), 50, Record::NONE).unwrap();
        assert_eq!(r.outcome, Outcome::DivergedAtBound { bound: 50 });
    }

    #[test]
    fn trace_json_shape() {
        let s = State::internal("c", Value::new(vec![1, 2]));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"internal","vertex":"c","value":[1,2]}"#);
        let s = State::output(v(0));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"output","value":[0]}"#);
    }
}
