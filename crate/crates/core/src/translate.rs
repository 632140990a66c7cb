//! Translation between algorithm graphs and algorithm processes.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{validate_algorithm_graph, AlgorithmGraph, Alphabet, Digraph, FIN, INI};
use crate::interp::Bit;
use crate::procalg::{CondTerm, DataTerm, LinearSpec, ProcTerm, MEM};

pub const ROOT_VAR: &str = "X";
pub const EPSILON_VAR: &str = "X_ε";

/// A recursion constant `⟨root|spec⟩` meant to be an algorithm process;
/// `epsilon` names the terminating equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgorithmProcess {
    pub root: String,
    pub epsilon: String,
    pub spec: LinearSpec,
}

impl AlgorithmProcess {
    pub fn shared_spec(&self) -> Arc<LinearSpec> {
        Arc::new(self.spec.clone())
    }
}

impl fmt::Display for AlgorithmProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "root {}", self.root)?;
        writeln!(f, "final {}", self.epsilon)?;
        write!(f, "{}", self.spec)
    }
}

/// The five equation shapes of an algorithm process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationForm {
    /// (1) `true :→ MEM := ini(MEM) · Z`
    Ini { next: String },
    /// (2) `true :→ MEM := o(MEM) · Z`
    Op { op: String, next: String },
    /// (3) `p(MEM)=1 :→ MEM := MEM · Z + p(MEM)=0 :→ MEM := MEM · Z'`
    Pred { pred: String, one: String, zero: String },
    /// (4) `true :→ MEM := fin(MEM) · X_ε`
    Fin { next: String },
    /// (5) `true :→ ε`
    Epsilon,
}

impl EquationForm {
    pub fn number(&self) -> u8 {
        match self {
            EquationForm::Ini { .. } => 1,
            EquationForm::Op { .. } => 2,
            EquationForm::Pred { .. } => 3,
            EquationForm::Fin { .. } => 4,
            EquationForm::Epsilon => 5,
        }
    }

    pub fn to_term(&self) -> ProcTerm {
        let mem = || DataTerm::flex(MEM);
        let step = |e: DataTerm, next: &str| ProcTerm::seq(ProcTerm::assign(MEM, e), ProcTerm::var(next));
        match self {
            EquationForm::Ini { next } => ProcTerm::guard(CondTerm::True, step(DataTerm::apply(INI, mem()), next)),
            EquationForm::Op { op, next } => ProcTerm::guard(CondTerm::True, step(DataTerm::apply(op, mem()), next)),
            EquationForm::Pred { pred, one, zero } => ProcTerm::Alt(vec![
                ProcTerm::guard(CondTerm::pred_is(pred, mem(), Bit::One), step(mem(), one)),
                ProcTerm::guard(CondTerm::pred_is(pred, mem(), Bit::Zero), step(mem(), zero)),
            ]),
            EquationForm::Fin { next } => ProcTerm::guard(CondTerm::True, step(DataTerm::apply(FIN, mem()), next)),
            EquationForm::Epsilon => ProcTerm::guard(CondTerm::True, ProcTerm::Empty),
        }
    }

    /// Continuation variables in order (1-branch first).
    pub fn successors(&self) -> Vec<&str> {
        match self {
            EquationForm::Ini { next } | EquationForm::Op { next, .. } | EquationForm::Fin { next } => vec![next],
            EquationForm::Pred { one, zero, .. } => vec![one, zero],
            EquationForm::Epsilon => vec![],
        }
    }
}

fn mem_step(t: &ProcTerm) -> Option<(&DataTerm, &str)> {
    match t {
        ProcTerm::Seq(a, x) => match (&**a, &**x) {
            (ProcTerm::Assign(v, e), ProcTerm::Var(z)) if v == MEM => Some((e, z)),
            _ => None,
        },
        _ => None,
    }
}

fn applied_to_mem(e: &DataTerm) -> Option<&str> {
    match e {
        DataTerm::Apply(f, arg) if **arg == DataTerm::flex(MEM) => Some(f),
        _ => None,
    }
}

fn pred_branch(t: &ProcTerm) -> Option<(&str, Bit, &str)> {
    let ProcTerm::Guard(CondTerm::BitEq(crate::procalg::BitTerm::Pred(p, arg), crate::procalg::BitTerm::Lit(b)), body) =
        t
    else {
        return None;
    };
    if *arg != DataTerm::flex(MEM) {
        return None;
    }
    match mem_step(body)? {
        (DataTerm::Flex(m), z) if m == MEM => Some((p, *b, z)),
        _ => None,
    }
}

/// Recognize the shape of a right-hand side, ignoring symbol membership.
pub fn classify(t: &ProcTerm) -> Option<EquationForm> {
    match t {
        ProcTerm::Guard(CondTerm::True, body) => {
            if **body == ProcTerm::Empty {
                return Some(EquationForm::Epsilon);
            }
            let (e, z) = mem_step(body)?;
            let f = applied_to_mem(e)?;
            Some(match f {
                INI => EquationForm::Ini { next: z.to_string() },
                FIN => EquationForm::Fin { next: z.to_string() },
                _ => EquationForm::Op { op: f.to_string(), next: z.to_string() },
            })
        }
        ProcTerm::Alt(ts) if ts.len() == 2 => {
            let (p1, b1, z1) = pred_branch(&ts[0])?;
            let (p2, b2, z2) = pred_branch(&ts[1])?;
            if p1 != p2 || b1 == b2 {
                return None;
            }
            let (one, zero) = if b1 == Bit::One { (z1, z2) } else { (z2, z1) };
            Some(EquationForm::Pred { pred: p1.to_string(), one: one.to_string(), zero: zero.to_string() })
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcessDiagnosis {
    /// The offending equation's variable.
    pub equation: String,
    /// The form the equation should have had, when one applies.
    pub form: Option<u8>,
    pub message: String,
}

impl fmt::Display for ProcessDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.form {
            Some(n) => write!(f, "equation {} (form ({n})): {}", self.equation, self.message),
            None => write!(f, "equation {}: {}", self.equation, self.message),
        }
    }
}

fn expected_form(p: &AlgorithmProcess, y: &str, t: &ProcTerm) -> u8 {
    if y == p.epsilon {
        5
    } else if y == p.root {
        1
    } else if matches!(t, ProcTerm::Alt(_)) {
        3
    } else if let ProcTerm::Guard(_, body) = t {
        match mem_step(body).and_then(|(e, _)| applied_to_mem(e)) {
            Some(FIN) => 4,
            _ => 2,
        }
    } else {
        2
    }
}

/// Check the algorithm-process conditions; the diagnosis names the first
/// non-conforming equation in spec order.
pub fn is_algorithm_process(p: &AlgorithmProcess, alphabet: &Alphabet) -> Result<(), ProcessDiagnosis> {
    let diag = |equation: &str, form: Option<u8>, message: String| ProcessDiagnosis {
        equation: equation.to_string(),
        form,
        message,
    };
    if p.root == p.epsilon {
        return Err(diag(&p.root, None, "root and final variable coincide".into()));
    }
    for needed in [&p.root, &p.epsilon] {
        if p.spec.get(needed).is_none() {
            return Err(diag(needed, None, "no equation".into()));
        }
    }
    for (y, t) in &p.spec.equations {
        let expected = expected_form(p, y, t);
        let Some(form) = classify(t) else {
            return Err(diag(y, Some(expected), format!("`{t}` does not have the required shape")));
        };
        let n = form.number();
        if (n == 1) != (*y == p.root) {
            return Err(diag(y, Some(expected), "only the root equation may have the ini shape".into()));
        }
        if (n == 5) != (*y == p.epsilon) {
            return Err(diag(y, Some(expected), format!("only {} may terminate", p.epsilon)));
        }
        match &form {
            EquationForm::Op { op, .. } if !alphabet.is_operation(op) => {
                return Err(diag(y, Some(2), format!("`{op}` is not an operation symbol")));
            }
            EquationForm::Pred { pred, .. } if !alphabet.is_predicate(pred) => {
                return Err(diag(y, Some(3), format!("`{pred}` is not a predicate symbol")));
            }
            EquationForm::Fin { next } if *next != p.epsilon => {
                return Err(diag(y, Some(4), format!("must continue with {}", p.epsilon)));
            }
            _ => {}
        }
        if n != 4 {
            for z in form.successors() {
                if z == p.epsilon {
                    return Err(diag(y, Some(n), format!("continues with {}", p.epsilon)));
                }
                if p.spec.get(z).is_none() {
                    return Err(diag(y, Some(n), format!("continues with {z}, which has no equation")));
                }
            }
        }
    }
    Ok(())
}

/// Recursion variable of vertex `v`.
pub fn var_for_vertex(g: &AlgorithmGraph, v: &str) -> String {
    if v == g.graph().root() {
        ROOT_VAR.to_string()
    } else {
        format!("X_{v}")
    }
}

/// The graph-to-process translation. Equations appear as: root, the other
/// vertices in graph order, then the final variable.
pub fn graph_to_process(g: &AlgorithmGraph) -> AlgorithmProcess {
    let name = |v: &str| var_for_vertex(g, v);
    let mut equations = IndexMap::new();
    let root = g.graph().root();
    let ordered = std::iter::once(root).chain(g.graph().vertices().filter(|v| *v != root));
    for v in ordered {
        let label = g.label(v);
        let form = if label == INI {
            EquationForm::Ini { next: name(g.next(v).expect("validated")) }
        } else if label == FIN {
            EquationForm::Fin { next: EPSILON_VAR.to_string() }
        } else if g.alphabet().is_operation(label) {
            EquationForm::Op { op: label.to_string(), next: name(g.next(v).expect("validated")) }
        } else {
            EquationForm::Pred {
                pred: label.to_string(),
                one: name(g.branch(v, Bit::One).expect("validated")),
                zero: name(g.branch(v, Bit::Zero).expect("validated")),
            }
        };
        equations.insert(name(v), form.to_term());
    }
    equations.insert(EPSILON_VAR.to_string(), EquationForm::Epsilon.to_term());
    AlgorithmProcess { root: ROOT_VAR.to_string(), epsilon: EPSILON_VAR.to_string(), spec: LinearSpec { equations } }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("not an algorithm process: {0}")]
    NotAlgorithmProcess(ProcessDiagnosis),
    #[error("the constructed graph is not an algorithm graph: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
}

/// Inverse translation: vertices are the variables other than the final
/// one, the root is the root variable, and edges follow continuations.
pub fn process_to_graph(p: &AlgorithmProcess, alphabet: &Alphabet) -> Result<AlgorithmGraph, TranslateError> {
    is_algorithm_process(p, alphabet).map_err(TranslateError::NotAlgorithmProcess)?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (y, t) in &p.spec.equations {
        if *y == p.epsilon {
            continue;
        }
        let form = classify(t).expect("checked");
        let label = match &form {
            EquationForm::Ini { next } => {
                edges.push((y.clone(), next.clone(), None));
                INI.to_string()
            }
            EquationForm::Op { op, next } => {
                edges.push((y.clone(), next.clone(), None));
                op.clone()
            }
            EquationForm::Pred { pred, one, zero } => {
                edges.push((y.clone(), one.clone(), Some(Bit::One)));
                edges.push((y.clone(), zero.clone(), Some(Bit::Zero)));
                pred.clone()
            }
            EquationForm::Fin { .. } => FIN.to_string(),
            EquationForm::Epsilon => unreachable!("only the final equation terminates"),
        };
        vertices.push((y.clone(), Some(label)));
    }
    let graph =
        Digraph::from_parts(vertices, edges, &p.root).map_err(|e| TranslateError::InvalidGraph(vec![e.to_string()]))?;
    let report = validate_algorithm_graph(alphabet, &graph);
    if !report.is_ok() {
        return Err(TranslateError::InvalidGraph(report.violations.iter().map(|v| v.to_string()).collect()));
    }
    Ok(AlgorithmGraph::new(alphabet.clone(), graph).expect("validated above"))
}

fn rename_term(t: &ProcTerm, map: &BTreeMap<String, String>) -> ProcTerm {
    match t {
        ProcTerm::Var(x) => ProcTerm::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
        ProcTerm::Alt(ts) => ProcTerm::Alt(ts.iter().map(|u| rename_term(u, map)).collect()),
        ProcTerm::Seq(a, b) => ProcTerm::seq(rename_term(a, map), rename_term(b, map)),
        ProcTerm::Guard(c, u) => ProcTerm::guard(c.clone(), rename_term(u, map)),
        ProcTerm::Eval(r, u) => ProcTerm::eval(r.clone(), rename_term(u, map)),
        other => other.clone(),
    }
}

/// Rename variables through `map` (unmapped names are kept).
pub fn rename(p: &AlgorithmProcess, map: &BTreeMap<String, String>) -> AlgorithmProcess {
    let get = |x: &String| map.get(x).cloned().unwrap_or_else(|| x.clone());
    AlgorithmProcess {
        root: get(&p.root),
        epsilon: get(&p.epsilon),
        spec: LinearSpec { equations: p.spec.equations.iter().map(|(x, t)| (get(x), rename_term(t, map))).collect() },
    }
}

/// Canonical renaming: the root becomes `X`, the final variable `X_ε`, and
/// the rest `X_1, X_2, …` in breadth-first order from the root (1-branches
/// first), then unreachable equations in spec order. Equations are listed in
/// that order and predicate equations put their 1-branch first.
pub fn canonicalize(p: &AlgorithmProcess) -> AlgorithmProcess {
    let mut order: Vec<String> = Vec::new();
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut queue = VecDeque::from([p.root.clone()]);
    seen.insert(p.root.clone());
    seen.insert(p.epsilon.clone());
    while let Some(y) = queue.pop_front() {
        order.push(y.clone());
        if let Some(form) = p.spec.get(&y).and_then(classify) {
            for z in form.successors() {
                if seen.insert(z.to_string()) {
                    queue.push_back(z.to_string());
                }
            }
        }
    }
    for y in p.spec.vars() {
        if !seen.contains(y) {
            seen.insert(y.to_string());
            order.push(y.to_string());
        }
    }
    let mut map = BTreeMap::new();
    for (i, y) in order.iter().enumerate() {
        map.insert(y.clone(), if i == 0 { ROOT_VAR.to_string() } else { format!("X_{i}") });
    }
    map.insert(p.epsilon.clone(), EPSILON_VAR.to_string());
    let mut equations = IndexMap::new();
    for y in order.iter().chain(std::iter::once(&p.epsilon)) {
        if let Some(t) = p.spec.get(y) {
            let t = match classify(t) {
                Some(form) => form.to_term(),
                None => t.clone(),
            };
            equations.insert(map[y].clone(), rename_term(&t, &map));
        }
    }
    AlgorithmProcess { root: ROOT_VAR.to_string(), epsilon: EPSILON_VAR.to_string(), spec: LinearSpec { equations } }
}

/// Structural match of two terms, extending the variable bijection.
fn match_terms(a: &ProcTerm, b: &ProcTerm, map: &mut Bijection) -> bool {
    use ProcTerm::*;
    match (a, b) {
        (Var(x), Var(y)) => map.bind(x, y),
        (Alt(xs), Alt(ys)) => {
            if xs.len() != ys.len() {
                return false;
            }
            match_permuted(xs, ys, &mut vec![false; ys.len()], map)
        }
        (Seq(a1, a2), Seq(b1, b2)) => match_terms(a1, b1, map) && match_terms(a2, b2, map),
        (Guard(c, t), Guard(d, u)) => c == d && match_terms(t, u, map),
        (Eval(r, t), Eval(s, u)) => r == s && match_terms(t, u, map),
        _ => a == b,
    }
}

fn match_permuted(xs: &[ProcTerm], ys: &[ProcTerm], used: &mut Vec<bool>, map: &mut Bijection) -> bool {
    let Some((x, rest)) = xs.split_first() else { return true };
    for j in 0..ys.len() {
        if used[j] {
            continue;
        }
        let saved = map.clone();
        used[j] = true;
        if match_terms(x, &ys[j], map) && match_permuted(rest, ys, used, map) {
            return true;
        }
        used[j] = false;
        *map = saved;
    }
    false
}

#[derive(Debug, Clone, Default)]
struct Bijection {
    fwd: BTreeMap<String, String>,
    bwd: BTreeMap<String, String>,
    /// Pairs bound but whose equations are not yet compared.
    pending: Vec<(String, String)>,
}

impl Bijection {
    fn bind(&mut self, x: &str, y: &str) -> bool {
        match (self.fwd.get(x), self.bwd.get(y)) {
            (Some(y0), _) => y0 == y,
            (None, Some(_)) => false,
            (None, None) => {
                self.fwd.insert(x.to_string(), y.to_string());
                self.bwd.insert(y.to_string(), x.to_string());
                self.pending.push((x.to_string(), y.to_string()));
                true
            }
        }
    }
}

fn close(p: &AlgorithmProcess, q: &AlgorithmProcess, map: &mut Bijection) -> bool {
    while let Some((x, y)) = map.pending.pop() {
        match (p.spec.get(&x), q.spec.get(&y)) {
            (Some(s), Some(t)) => {
                if !match_terms(s, t, map) {
                    return false;
                }
            }
            (None, None) => {}
            _ => return false,
        }
    }
    true
}

fn extend(p: &AlgorithmProcess, q: &AlgorithmProcess, map: Bijection) -> Option<Bijection> {
    let Some(x) = p.spec.vars().find(|x| !map.fwd.contains_key(*x)) else { return Some(map) };
    for y in q.spec.vars().filter(|y| !map.bwd.contains_key(*y)) {
        let mut m = map.clone();
        if m.bind(x, y) && close(p, q, &mut m) {
            if let Some(done) = extend(p, q, m) {
                return Some(done);
            }
        }
    }
    None
}

/// A variable bijection mapping `p` onto `q` (root to root, final to final),
/// if the two are identical up to consistent renaming.
pub fn alpha_equivalence(p: &AlgorithmProcess, q: &AlgorithmProcess) -> Option<BTreeMap<String, String>> {
    if p.spec.equations.len() != q.spec.equations.len() {
        return None;
    }
    let mut map = Bijection::default();
    if !(map.bind(&p.root, &q.root) && map.bind(&p.epsilon, &q.epsilon) && close(p, q, &mut map)) {
        return None;
    }
    extend(p, q, map).map(|m| m.fwd)
}

pub fn alpha_equivalent(p: &AlgorithmProcess, q: &AlgorithmProcess) -> bool {
    alpha_equivalence(p, q).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::fixtures;

    #[test]
    fn countdown_translation() {
        let cd = fixtures::cd();
        let p = graph_to_process(cd.graph());
        let text = p.spec.to_string();
        assert_eq!(
            text,
            "X = true :-> MEM := ini(MEM) . X_c\n\
             X_c = iszero(MEM) = 1 :-> MEM := MEM . X_h + iszero(MEM) = 0 :-> MEM := MEM . X_g\n\
             X_g = true :-> MEM := dec(MEM) . X_c\n\
             X_h = true :-> MEM := fin(MEM) . X_ε\n\
             X_ε = true :-> eps\n"
        );
        assert!(is_algorithm_process(&p, cd.alphabet()).is_ok());
    }

    #[test]
    fn diagnoses() {
        let cd = fixtures::cd();
        let mut p = graph_to_process(cd.graph());
        p.spec.equations.insert(EPSILON_VAR.into(), ProcTerm::guard(CondTerm::True, ProcTerm::Deadlock));
        let d = is_algorithm_process(&p, cd.alphabet()).unwrap_err();
        assert_eq!((d.equation.as_str(), d.form), (EPSILON_VAR, Some(5)));

        let mut p = graph_to_process(cd.graph());
        let same = ProcTerm::Alt(vec![
            ProcTerm::guard(
                CondTerm::pred_is("iszero", DataTerm::flex(MEM), Bit::One),
                ProcTerm::seq(ProcTerm::assign(MEM, DataTerm::flex(MEM)), ProcTerm::var("X_h")),
            ),
            ProcTerm::guard(
                CondTerm::pred_is("iszero", DataTerm::flex(MEM), Bit::One),
                ProcTerm::seq(ProcTerm::assign(MEM, DataTerm::flex(MEM)), ProcTerm::var("X_g")),
            ),
        ]);
        p.spec.equations.insert("X_c".into(), same);
        let d = is_algorithm_process(&p, cd.alphabet()).unwrap_err();
        assert_eq!((d.equation.as_str(), d.form), ("X_c", Some(3)));
    }

    #[test]
    fn round_trip_and_renaming() {
        let cd = fixtures::cd();
        let p = graph_to_process(cd.graph());
        let g = process_to_graph(&p, cd.alphabet()).unwrap();
        assert_eq!(g.graph().vertex_count(), 4);
        assert_eq!(g.graph().root(), "X");
        let back = graph_to_process(&g);
        assert_ne!(back, p);
        assert_eq!(canonicalize(&back), canonicalize(&p));
        assert!(alpha_equivalent(&back, &p));
        let renamed = fixtures::cd_renamed();
        // different predicate, so not a renaming
        assert!(!alpha_equivalent(&graph_to_process(renamed.graph()), &p));
    }

    #[test]
    fn rejects_processes_without_graphs() {
        let cd = fixtures::cd();
        let mut p = graph_to_process(cd.graph());
        // dec loops back into the root
        p.spec.equations.insert("X_g".into(), EquationForm::Op { op: "dec".into(), next: "X".into() }.to_term());
        assert!(matches!(process_to_graph(&p, cd.alphabet()), Err(TranslateError::InvalidGraph(_))));
    }
}
