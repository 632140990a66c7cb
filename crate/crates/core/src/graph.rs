//! Rooted labeled directed graphs and the algorithm-graph conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interp::Bit;

pub const INI: &str = "ini";
pub const FIN: &str = "fin";

/// Default number of cycles listed by [`predicate_only_cycles`] in reports.
pub const DEFAULT_CYCLE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    InvalidVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is both a function and a predicate symbol")]
    OverlappingSymbol(String),
    #[error("alphabet lacks the function symbol `{0}`")]
    MissingDistinguished(&'static str),
}

/// Function and predicate symbols. `ini` and `fin` are always functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    functions: IndexSet<String>,
    predicates: IndexSet<String>,
}

impl Alphabet {
    pub fn new<F, P>(functions: F, predicates: P) -> Result<Self, GraphError>
    where
        F: IntoIterator,
        F::Item: Into<String>,
        P: IntoIterator,
        P::Item: Into<String>,
    {
        let mut fs = IndexSet::new();
        for f in functions {
            let f = f.into();
            if !fs.insert(f.clone()) {
                return Err(GraphError::DuplicateSymbol(f));
            }
        }
        let mut ps = IndexSet::new();
        for p in predicates {
            let p = p.into();
            if fs.contains(&p) {
                return Err(GraphError::OverlappingSymbol(p));
            }
            if !ps.insert(p.clone()) {
                return Err(GraphError::DuplicateSymbol(p));
            }
        }
        for d in [INI, FIN] {
            if !fs.contains(d) {
                return Err(GraphError::MissingDistinguished(d));
            }
        }
        Ok(Alphabet { functions: fs, predicates: ps })
    }

    pub fn functions(&self) -> impl Iterator<Item = &str> {
        self.functions.iter().map(String::as_str)
    }

    /// Function symbols other than `ini` and `fin`.
    pub fn operations(&self) -> impl Iterator<Item = &str> {
        self.functions().filter(|f| *f != INI && *f != FIN)
    }

    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.predicates.iter().map(String::as_str)
    }

    pub fn is_function(&self, s: &str) -> bool {
        self.functions.contains(s)
    }

    pub fn is_operation(&self, s: &str) -> bool {
        self.is_function(s) && s != INI && s != FIN
    }

    pub fn is_predicate(&self, s: &str) -> bool {
        self.predicates.contains(s)
    }

    pub fn contains(&self, s: &str) -> bool {
        self.is_function(s) || self.is_predicate(s)
    }
}

/// A rooted directed graph with optional vertex and edge labels. At most one
/// edge per ordered vertex pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    vertices: IndexMap<String, Option<String>>,
    edges: IndexMap<(String, String), Option<Bit>>,
    root: String,
}

pub type Edge = (String, String);

impl Digraph {
    /// A graph consisting of the (unlabeled) root alone.
    pub fn new(root: impl Into<String>) -> Self {
        let root = root.into();
        let mut vertices = IndexMap::new();
        vertices.insert(root.clone(), None);
        Digraph { vertices, edges: IndexMap::new(), root }
    }

    pub fn from_parts<V, E>(vertices: V, edges: E, root: &str) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (String, Option<String>)>,
        E: IntoIterator<Item = (String, String, Option<Bit>)>,
    {
        let mut vs = IndexMap::new();
        for (id, label) in vertices {
            if vs.contains_key(&id) {
                return Err(GraphError::DuplicateVertex(id));
            }
            vs.insert(id, label);
        }
        if !vs.contains_key(root) {
            return Err(GraphError::InvalidVertex(root.to_string()));
        }
        let mut g = Digraph { vertices: vs, edges: IndexMap::new(), root: root.to_string() };
        for (a, b, l) in edges {
            g.add_edge(&a, &b, l)?;
        }
        Ok(g)
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn set_root(&mut self, v: &str) -> Result<(), GraphError> {
        self.require(v)?;
        self.root = v.to_string();
        Ok(())
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, label: Option<String>) -> Result<(), GraphError> {
        let id = id.into();
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.vertices.insert(id, label);
        Ok(())
    }

    pub fn set_label(&mut self, v: &str, label: Option<String>) -> Result<(), GraphError> {
        *self.vertices.get_mut(v).ok_or_else(|| GraphError::InvalidVertex(v.to_string()))? = label;
        Ok(())
    }

    pub fn add_edge(&mut self, from: &str, to: &str, label: Option<Bit>) -> Result<(), GraphError> {
        self.require(from)?;
        self.require(to)?;
        let key = (from.to_string(), to.to_string());
        if self.edges.contains_key(&key) {
            return Err(GraphError::DuplicateEdge(key.0, key.1));
        }
        self.edges.insert(key, label);
        Ok(())
    }

    pub fn remove_edge(&mut self, from: &str, to: &str) -> Option<Option<Bit>> {
        self.edges.shift_remove(&(from.to_string(), to.to_string()))
    }

    pub fn set_edge_label(&mut self, from: &str, to: &str, label: Option<Bit>) -> Result<(), GraphError> {
        match self.edges.get_mut(&(from.to_string(), to.to_string())) {
            Some(l) => {
                *l = label;
                Ok(())
            }
            None => Err(GraphError::InvalidVertex(format!("{from} -> {to}"))),
        }
    }

    fn require(&self, v: &str) -> Result<(), GraphError> {
        if self.vertices.contains_key(v) {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v.to_string()))
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices.keys().map(String::as_str)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.vertices.contains_key(v)
    }

    pub fn label(&self, v: &str) -> Option<&str> {
        self.vertices.get(v).and_then(|l| l.as_deref())
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, Option<Bit>)> {
        self.edges.iter().map(|((a, b), l)| (a.as_str(), b.as_str(), *l))
    }

    pub fn edge_label(&self, from: &str, to: &str) -> Option<Option<Bit>> {
        self.edges.get(&(from.to_string(), to.to_string())).copied()
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edge_label(from, to).is_some()
    }

    pub fn successors<'a>(&'a self, v: &str) -> impl Iterator<Item = (&'a str, Option<Bit>)> + 'a {
        let v = v.to_string();
        self.edges().filter(move |(a, _, _)| *a == v).map(|(_, b, l)| (b, l))
    }

    pub fn predecessors<'a>(&'a self, v: &str) -> impl Iterator<Item = &'a str> + 'a {
        let v = v.to_string();
        self.edges().filter(move |(_, b, _)| *b == v).map(|(a, _, _)| a)
    }

    /// `(indegree, outdegree)` of `v`.
    pub fn degrees(&self, v: &str) -> Result<(usize, usize), GraphError> {
        self.require(v)?;
        let (mut ind, mut outd) = (0, 0);
        for (a, b, _) in self.edges() {
            if b == v {
                ind += 1;
            }
            if a == v {
                outd += 1;
            }
        }
        Ok((ind, outd))
    }

    /// Vertex ids renamed through `f`; structure and labels unchanged.
    pub fn rename_vertices(&self, mut f: impl FnMut(&str) -> String) -> Result<Digraph, GraphError> {
        Digraph::from_parts(
            self.vertices.iter().map(|(v, l)| (f(v), l.clone())).collect::<Vec<_>>(),
            self.edges().map(|(a, b, l)| (f(a), f(b), l)).collect::<Vec<_>>(),
            &f(&self.root),
        )
    }
}

/// The algorithm-graph condition a violation falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// A vertex is labeled `ini` iff it is the root.
    RootIni,
    /// The `ini` vertex has indegree 0 and one unlabeled outgoing edge.
    IniVertex,
    /// Every `fin` vertex has indegree > 0 and outdegree 0.
    FinVertex,
    /// Every operation vertex has indegree > 0 and one unlabeled outgoing edge.
    FunctionVertex,
    /// Every predicate vertex has indegree > 0 and two outgoing edges labeled 0 and 1.
    PredicateVertex,
    /// Every vertex carries a label.
    LabelTotal,
    /// Vertex labels are symbols of the alphabet.
    LabelInAlphabet,
    /// Every cycle passes through a function-labeled vertex.
    PredicateCycle,
}

impl Clause {
    pub const ALL: [Clause; 8] = [
        Clause::RootIni,
        Clause::IniVertex,
        Clause::FinVertex,
        Clause::FunctionVertex,
        Clause::PredicateVertex,
        Clause::LabelTotal,
        Clause::LabelInAlphabet,
        Clause::PredicateCycle,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            Clause::RootIni => "vertex labeled ini iff it is the root",
            Clause::IniVertex => "ini vertex: indegree 0, outdegree 1, unlabeled edge",
            Clause::FinVertex => "fin vertex: indegree > 0, outdegree 0",
            Clause::FunctionVertex => "function vertex: indegree > 0, outdegree 1, unlabeled edge",
            Clause::PredicateVertex => "P vertex: indegree > 0, outdegree 2, edges labeled 0 and 1",
            Clause::LabelTotal => "every vertex is labeled",
            Clause::LabelInAlphabet => "vertex labels are alphabet symbols",
            Clause::PredicateCycle => "every cycle contains a function-labeled vertex",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphViolation {
    pub clause: Clause,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<Edge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    pub message: String,
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.clause, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub violations: Vec<GraphViolation>,
}

impl GraphReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn cites(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }

    fn at_vertex(&mut self, clause: Clause, v: &str, message: String) {
        self.violations.push(GraphViolation { clause, vertex: Some(v.to_string()), edge: None, cycle: None, message });
    }

    fn at_edge(&mut self, clause: Clause, v: &str, w: &str, message: String) {
        self.violations.push(GraphViolation {
            clause,
            vertex: Some(v.to_string()),
            edge: Some((v.to_string(), w.to_string())),
            cycle: None,
            message,
        });
    }
}

/// A digraph that satisfies every algorithm-graph clause over its alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgorithmGraph {
    alphabet: Alphabet,
    graph: Digraph,
}

impl AlgorithmGraph {
    pub fn new(alphabet: Alphabet, graph: Digraph) -> Result<Self, GraphReport> {
        let report = validate_algorithm_graph(&alphabet, &graph);
        if report.is_ok() {
            Ok(AlgorithmGraph { alphabet, graph })
        } else {
            Err(report)
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn into_parts(self) -> (Alphabet, Digraph) {
        (self.alphabet, self.graph)
    }

    /// Label of `v`; total on algorithm graphs.
    pub fn label(&self, v: &str) -> &str {
        self.graph.label(v).expect("algorithm graphs label every vertex")
    }

    /// The unique successor of an `ini` or operation vertex.
    pub fn next(&self, v: &str) -> Option<&str> {
        let mut it = self.graph.successors(v);
        match (it.next(), it.next()) {
            (Some((w, None)), None) => Some(w),
            _ => None,
        }
    }

    /// The successor along the edge labeled `bit` of a predicate vertex.
    pub fn branch(&self, v: &str, bit: Bit) -> Option<&str> {
        self.graph.successors(v).find(|(_, l)| *l == Some(bit)).map(|(w, _)| w)
    }
}

/// Check `g` against every algorithm-graph clause. The report lists each
/// violated clause with the offending vertex, edge or cycle; it is empty
/// exactly when `g` is an algorithm graph over `alphabet`.
pub fn validate_algorithm_graph(alphabet: &Alphabet, g: &Digraph) -> GraphReport {
    let mut report = GraphReport::default();
    let mut indeg: BTreeMap<&str, usize> = g.vertices().map(|v| (v, 0)).collect();
    let mut out: BTreeMap<&str, Vec<(&str, Option<Bit>)>> = g.vertices().map(|v| (v, Vec::new())).collect();
    for (a, b, l) in g.edges() {
        *indeg.get_mut(b).expect("edge endpoints are vertices") += 1;
        out.get_mut(a).expect("edge endpoints are vertices").push((b, l));
    }

    for v in g.vertices() {
        let is_root = v == g.root();
        let label = g.label(v);
        let (ind, succ) = (indeg[v], &out[v]);
        match label {
            None => {
                report.at_vertex(Clause::LabelTotal, v, format!("vertex {v} is unlabeled"));
                if is_root {
                    report.at_vertex(Clause::RootIni, v, format!("root {v} is not labeled ini"));
                }
                continue;
            }
            Some(l) if !alphabet.contains(l) => {
                report.at_vertex(
                    Clause::LabelInAlphabet,
                    v,
                    format!("vertex {v} has label `{l}` outside the alphabet"),
                );
                continue;
            }
            Some(_) => {}
        }
        let label = label.expect("checked above");
        if label == INI && !is_root {
            report.at_vertex(Clause::RootIni, v, format!("vertex {v} is labeled ini but is not the root"));
        }
        if label != INI && is_root {
            report.at_vertex(Clause::RootIni, v, format!("root {v} is labeled `{label}`, not ini"));
        }

        if label == INI {
            if ind != 0 {
                report.at_vertex(Clause::IniVertex, v, format!("ini vertex {v}: indegree {ind}, expected 0"));
            }
            single_unlabeled_edge(&mut report, Clause::IniVertex, "ini", v, succ);
        } else if label == FIN {
            if ind == 0 {
                report.at_vertex(Clause::FinVertex, v, format!("fin vertex {v}: indegree 0"));
            }
            if !succ.is_empty() {
                report.at_vertex(Clause::FinVertex, v, format!("fin vertex {v}: outdegree {}, expected 0", succ.len()));
            }
        } else if alphabet.is_operation(label) {
            if ind == 0 {
                report.at_vertex(Clause::FunctionVertex, v, format!("function vertex {v}: indegree 0"));
            }
            single_unlabeled_edge(&mut report, Clause::FunctionVertex, "function", v, succ);
        } else {
            if ind == 0 {
                report.at_vertex(Clause::PredicateVertex, v, format!("P vertex {v}: indegree 0"));
            }
            if succ.len() != 2 {
                report.at_vertex(
                    Clause::PredicateVertex,
                    v,
                    format!("P vertex outdegree 2 violated: {v} has outdegree {}", succ.len()),
                );
            }
            for (w, l) in succ {
                if l.is_none() {
                    report.at_edge(Clause::PredicateVertex, v, w, format!("P vertex {v}: edge to {w} is unlabeled"));
                }
            }
            if succ.len() == 2 && succ[0].1.is_some() && succ[0].1 == succ[1].1 {
                report.at_vertex(
                    Clause::PredicateVertex,
                    v,
                    format!("P vertex {v}: both edges labeled {}", succ[0].1.expect("checked")),
                );
            }
        }
    }

    if has_predicate_cycle(alphabet, g) {
        for cycle in predicate_only_cycles(alphabet, g, DEFAULT_CYCLE_CAP) {
            report.violations.push(GraphViolation {
                clause: Clause::PredicateCycle,
                vertex: None,
                edge: None,
                message: format!("cycle {} has no function-labeled vertex", cycle.join(" -> ")),
                cycle: Some(cycle),
            });
        }
    }
    report
}

fn single_unlabeled_edge(report: &mut GraphReport, clause: Clause, kind: &str, v: &str, succ: &[(&str, Option<Bit>)]) {
    if succ.len() != 1 {
        report.at_vertex(clause, v, format!("{kind} vertex {v}: outdegree {}, expected 1", succ.len()));
    }
    for (w, l) in succ {
        if let Some(bit) = l {
            report.at_edge(clause, v, w, format!("{kind} vertex {v}: edge to {w} carries label {bit}"));
        }
    }
}

fn is_predicate_vertex(alphabet: &Alphabet, g: &Digraph, v: &str) -> bool {
    g.label(v).is_some_and(|l| alphabet.is_predicate(l))
}

/// Whether the subgraph induced by predicate-labeled vertices has a cycle.
pub fn has_predicate_cycle(alphabet: &Alphabet, g: &Digraph) -> bool {
    // Kahn's algorithm on the induced subgraph.
    let preds: Vec<&str> = g.vertices().filter(|v| is_predicate_vertex(alphabet, g, v)).collect();
    let set: BTreeSet<&str> = preds.iter().copied().collect();
    let mut indeg: BTreeMap<&str, usize> = preds.iter().map(|v| (*v, 0)).collect();
    for (a, b, _) in g.edges() {
        if set.contains(a) && set.contains(b) {
            *indeg.get_mut(b).expect("in set") += 1;
        }
    }
    let mut queue: Vec<&str> = indeg.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for (w, _) in g.successors(v) {
            if let Some(d) = indeg.get_mut(w) {
                *d -= 1;
                if *d == 0 {
                    queue.push(w);
                }
            }
        }
    }
    removed < preds.len()
}

/// Simple cycles made only of predicate-labeled vertices, each written with
/// its first vertex repeated at the end and rooted at its earliest vertex in
/// declaration order. At most `cap` cycles are returned.
pub fn predicate_only_cycles(alphabet: &Alphabet, g: &Digraph, cap: usize) -> Vec<Vec<String>> {
    let preds: Vec<&str> = g.vertices().filter(|v| is_predicate_vertex(alphabet, g, v)).collect();
    let index: BTreeMap<&str, usize> = preds.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let adj: Vec<Vec<usize>> =
        preds.iter().map(|v| g.successors(v).filter_map(|(w, _)| index.get(w).copied()).collect()).collect();

    let mut cycles = Vec::new();
    for start in 0..preds.len() {
        let mut path = vec![start];
        let mut on_path = vec![false; preds.len()];
        on_path[start] = true;
        let mut stack = vec![0usize];
        while let Some(pos) = stack.last_mut() {
            if cycles.len() >= cap {
                return cycles;
            }
            let v = *path.last().expect("path tracks stack");
            if *pos >= adj[v].len() {
                stack.pop();
                on_path[v] = false;
                path.pop();
                continue;
            }
            let w = adj[v][*pos];
            *pos += 1;
            if w == start {
                let mut c: Vec<String> = path.iter().map(|&i| preds[i].to_string()).collect();
                c.push(preds[start].to_string());
                cycles.push(c);
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                stack.push(0);
            }
        }
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet() -> Alphabet {
        Alphabet::new(["ini", "fin", "dec"], ["iszero", "p", "q"]).unwrap()
    }

    fn countdown() -> Digraph {
        Digraph::from_parts(
            [("r", "ini"), ("c", "iszero"), ("g", "dec"), ("h", "fin")]
                .map(|(v, l)| (v.to_string(), Some(l.to_string()))),
            [("r", "c", None), ("c", "h", Some(Bit::One)), ("c", "g", Some(Bit::Zero)), ("g", "c", None)]
                .map(|(a, b, l)| (a.to_string(), b.to_string(), l)),
            "r",
        )
        .unwrap()
    }

    #[test]
    fn degrees_examples() {
        let g = Digraph::new("r");
        assert_eq!(g.degrees("r").unwrap(), (0, 0));
        let cd = countdown();
        assert_eq!(cd.degrees("c").unwrap(), (2, 2));
        assert_eq!(cd.degrees("r").unwrap(), (0, 1));
        assert_eq!(cd.degrees("zz"), Err(GraphError::InvalidVertex("zz".into())));
    }

    #[test]
    fn countdown_is_valid() {
        let r = validate_algorithm_graph(&alphabet(), &countdown());
        assert!(r.is_ok(), "{:?}", r);
        assert!(predicate_only_cycles(&alphabet(), &countdown(), 16).is_empty());
    }

    #[test]
    fn deleting_zero_edge() {
        let mut g = countdown();
        g.remove_edge("c", "g");
        let r = validate_algorithm_graph(&alphabet(), &g);
        assert!(r.cites(Clause::PredicateVertex));
        assert!(r.violations.iter().any(|v| v.message.contains("P vertex outdegree 2")));
    }

    #[test]
    fn predicate_only_cycle_is_found() {
        let g = Digraph::from_parts(
            [("r", "ini"), ("p1", "p"), ("p2", "q"), ("f", "fin")].map(|(v, l)| (v.to_string(), Some(l.to_string()))),
            [
                ("r", "p1", None),
                ("p1", "p2", Some(Bit::One)),
                ("p1", "f", Some(Bit::Zero)),
                ("p2", "p1", Some(Bit::One)),
                ("p2", "f", Some(Bit::Zero)),
            ]
            .map(|(a, b, l)| (a.to_string(), b.to_string(), l)),
            "r",
        )
        .unwrap();
        let cycles = predicate_only_cycles(&alphabet(), &g, 16);
        assert_eq!(cycles, vec![vec!["p1".to_string(), "p2".into(), "p1".into()]]);
        let r = validate_algorithm_graph(&alphabet(), &g);
        assert!(r.cites(Clause::PredicateCycle));
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn cycle_cap() {
        // complete predicate digraph on four vertices has many cycles
        let names = ["a", "b", "c", "d"];
        let mut g = Digraph::new("r");
        g.set_label("r", Some("ini".into())).unwrap();
        for n in names {
            g.add_vertex(n, Some("p".into())).unwrap();
        }
        for a in names {
            for b in names {
                if a != b {
                    g.add_edge(a, b, None).unwrap();
                }
            }
        }
        assert_eq!(predicate_only_cycles(&alphabet(), &g, 5).len(), 5);
        // 6 two-cycles + 8 three-cycles + 6 four-cycles
        assert_eq!(predicate_only_cycles(&alphabet(), &g, 100).len(), 20);
    }

    #[test]
    fn alphabet_invariants() {
        assert!(matches!(Alphabet::new(["ini", "f"], ["p"]), Err(GraphError::MissingDistinguished("fin"))));
        assert!(matches!(Alphabet::new(["ini", "fin", "f"], ["f"]), Err(GraphError::OverlappingSymbol(_))));
        let a = alphabet();
        assert_eq!(a.operations().collect::<Vec<_>>(), vec!["dec"]);
    }

    #[test]
    fn multigraph_edges_rejected() {
        let mut g = countdown();
        assert!(matches!(g.add_edge("c", "h", Some(Bit::Zero)), Err(GraphError::DuplicateEdge(..))));
        assert!(matches!(g.add_edge("c", "nowhere", None), Err(GraphError::InvalidVertex(_))));
    }
}
