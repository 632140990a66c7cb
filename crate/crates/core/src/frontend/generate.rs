//! Seeded random proto-algorithms and related variants with known
//! ground-truth relations.
//!
//! Instances are built directly from the graph clauses: one `ini` root, one
//! `fin` vertex, operation vertices with one successor, predicate vertices
//! with a 1-edge and a 0-edge to distinct targets. Predicate-to-predicate
//! edges only go forward in the construction order, so every cycle passes
//! through an operation vertex. Every vertex is reachable from the root.
//!
//! The main domain is `0..n` (scalars), the input domain equals it and `ini`
//! is a bijection, so the domain is minimal by construction.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exec::{ProtoAlgorithm, StepKind, DEFAULT_MAX_STEPS};
use crate::graph::{Alphabet, Digraph, FIN, INI};
use crate::interp::{BinOp, Bit, CmpOp, DomainDecl, DomainRole, Expr, Interpretation};
use crate::translate::{graph_to_process, AlgorithmProcess, ROOT_VAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeParams {
    /// Size of the main (and input) domain `0..domain`.
    pub domain: usize,
    /// Operation symbols in the alphabet besides `ini` and `fin`.
    pub operations: usize,
    pub predicates: usize,
    /// Operation and predicate vertices in the random body.
    pub body: usize,
    /// Probability (percent) of a countdown-style loop gadget after the root.
    pub loop_percent: u32,
    /// Probability (percent) of a pair of commuting shifts after the root.
    pub swap_percent: u32,
}

impl Default for SizeParams {
    fn default() -> Self {
        SizeParams { domain: 4, operations: 2, predicates: 2, body: 4, loop_percent: 50, swap_percent: 50 }
    }
}

impl SizeParams {
    /// Small instances: a handful of reachable states per side.
    pub fn tiny() -> Self {
        SizeParams { domain: 2, operations: 1, predicates: 1, body: 2, loop_percent: 0, swap_percent: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantTag {
    /// Bijective renaming of vertices, symbols and data, with predicate negation.
    Iso,
    /// An operation or `fin` vertex with two entries split in two.
    VertexSplit,
    /// The leading loop preceded by a copy testing a weaker predicate.
    CycleDup,
    /// Two leading commuting operations applied in the other order.
    OpSwap,
}

/// The relation a variant is known to have with its base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroundTruth {
    Iso,
    AeqvNotIso,
    CeqvNotAeqv,
    AeqvProcessUnequal,
}

impl VariantTag {
    pub fn ground_truth(self) -> GroundTruth {
        match self {
            VariantTag::Iso => GroundTruth::Iso,
            VariantTag::VertexSplit => GroundTruth::AeqvNotIso,
            VariantTag::CycleDup => GroundTruth::CeqvNotAeqv,
            VariantTag::OpSwap => GroundTruth::AeqvProcessUnequal,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VariantTag::Iso => "iso",
            VariantTag::VertexSplit => "vertex-split",
            VariantTag::CycleDup => "cycle-dup",
            VariantTag::OpSwap => "op-swap",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Variant {
    pub tag: VariantTag,
    pub algorithm: ProtoAlgorithm,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub seed: u64,
    pub base: ProtoAlgorithm,
    pub variants: Vec<Variant>,
}

impl Generated {
    pub fn variant(&self, tag: VariantTag) -> Option<&ProtoAlgorithm> {
        self.variants.iter().find(|v| v.tag == tag).map(|v| &v.algorithm)
    }
}

// ---------------------------------------------------------------------------
// Plain description, easy to transform, turned into real types at the end.

#[derive(Debug, Clone, PartialEq)]
enum Fun {
    Shift(usize),
    Table(Vec<usize>),
}

impl Fun {
    fn table(&self, n: usize) -> Vec<usize> {
        match self {
            Fun::Shift(k) => (0..n).map(|x| (x + k) % n).collect(),
            Fun::Table(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct Blueprint {
    n: usize,
    out: usize,
    ini: Vec<usize>,
    fin: Vec<usize>,
    ops: Vec<(String, Fun)>,
    preds: Vec<(String, Vec<bool>)>,
    root: String,
    vertices: Vec<(String, String)>,
    edges: Vec<(String, String, Option<Bit>)>,
    /// Leading commuting pair `(first, second)` vertex ids, if present.
    swap: Option<(String, String)>,
    /// Leading loop `(test, body)` vertex ids, if present.
    gadget: Option<(String, String)>,
}

fn lit(i: usize) -> Expr {
    Expr::Lit(i as i64)
}

fn x0() -> Expr {
    Expr::Proj(0)
}

fn table_expr(t: &[usize], wrap: impl Fn(Expr) -> Expr) -> Expr {
    let mut e = wrap(lit(*t.last().expect("non-empty table")));
    for (i, v) in t.iter().enumerate().rev().skip(1) {
        e = Expr::ite(Expr::cmp(CmpOp::Eq, x0(), lit(i)), wrap(lit(*v)), e);
    }
    e
}

fn vector(e: Expr) -> Expr {
    Expr::Tuple(vec![e])
}

fn fun_expr(f: &Fun, n: usize) -> Expr {
    match f {
        Fun::Shift(k) => vector(Expr::bin(BinOp::Rem, Expr::bin(BinOp::Add, x0(), lit(*k)), lit(n))),
        Fun::Table(t) => table_expr(t, vector),
    }
}

fn identity(t: &[usize]) -> bool {
    t.iter().enumerate().all(|(i, v)| i == *v)
}

impl Blueprint {
    fn op_table(&self, name: &str) -> Vec<usize> {
        self.ops.iter().find(|o| o.0 == name).expect("declared operation").1.table(self.n)
    }

    fn pred_table(&self, name: &str) -> &[bool] {
        &self.preds.iter().find(|p| p.0 == name).expect("declared predicate").1
    }

    fn label(&self, v: &str) -> &str {
        &self.vertices.iter().find(|x| x.0 == v).expect("vertex").1
    }

    fn build(&self) -> ProtoAlgorithm {
        let alphabet = Alphabet::new(
            [INI.to_string(), FIN.to_string()].into_iter().chain(self.ops.iter().map(|o| o.0.clone())),
            self.preds.iter().map(|p| p.0.clone()),
        )
        .expect("generated alphabet is well formed");
        let graph = Digraph::from_parts(
            self.vertices.iter().map(|(v, l)| (v.clone(), Some(l.clone()))),
            self.edges.iter().cloned(),
            &self.root,
        )
        .expect("generated graph is well formed");
        let mut functions = indexmap::IndexMap::new();
        let ini = if identity(&self.ini) { Expr::Arg } else { table_expr(&self.ini, vector) };
        functions.insert(INI.to_string(), ini);
        let fin = if identity(&self.fin) {
            Expr::Arg
        } else if self.fin.iter().enumerate().all(|(i, v)| i % self.out == *v) {
            vector(Expr::bin(BinOp::Rem, x0(), lit(self.out)))
        } else {
            table_expr(&self.fin, vector)
        };
        functions.insert(FIN.to_string(), fin);
        for (name, f) in &self.ops {
            functions.insert(name.clone(), fun_expr(f, self.n));
        }
        let predicates = self
            .preds
            .iter()
            .map(|(name, t)| {
                let t: Vec<usize> = t.iter().map(|b| usize::from(*b)).collect();
                (name.clone(), table_expr(&t, |e| e))
            })
            .collect();
        let range = |role, hi: usize| DomainDecl::boxed(role, vec![(0, hi as i64 - 1)]).expect("non-empty");
        let interp = Interpretation {
            main: range(DomainRole::Main, self.n),
            input: range(DomainRole::Input, self.n),
            output: range(DomainRole::Output, self.out),
            functions,
            predicates,
        };
        ProtoAlgorithm::new(alphabet, graph, interp).expect("generated proto-algorithm is valid")
    }
}

fn random_fun(rng: &mut ChaCha8Rng, n: usize) -> Fun {
    if rng.gen_bool(0.5) {
        Fun::Shift(rng.gen_range(0..n))
    } else {
        Fun::Table((0..n).map(|_| rng.gen_range(0..n)).collect())
    }
}

fn random_pred(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen_bool(0.5)).collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Op,
    Pred,
}

fn blueprint(rng: &mut ChaCha8Rng, p: &SizeParams) -> Blueprint {
    let n = p.domain.max(1);
    let out = rng.gen_range(1..=n);
    let mut ops: Vec<(String, Fun)> = (0..p.operations.max(1)).map(|i| (format!("f{i}"), random_fun(rng, n))).collect();
    let preds: Vec<(String, Vec<bool>)> = (0..p.predicates).map(|i| (format!("p{i}"), random_pred(rng, n))).collect();

    let mut vertices = vec![("r".to_string(), INI.to_string())];
    let mut edges = Vec::new();
    // Where the next structure gets attached: (vertex, edge label).
    let mut hook: (String, Option<Bit>) = ("r".into(), None);

    let mut swap = None;
    if n >= 2 && rng.gen_range(0..100) < p.swap_percent {
        // Two distinct non-zero shifts commute and differ everywhere.
        let a = rng.gen_range(1..n);
        let mut b = rng.gen_range(1..n);
        if b == a {
            b = (a % (n - 1)) + 1;
        }
        let (ia, ib) = (ops.len(), ops.len() + 1);
        ops.push((format!("f{ia}"), Fun::Shift(a)));
        ops.push((format!("f{ib}"), Fun::Shift(b)));
        vertices.push(("s1".into(), format!("f{ia}")));
        vertices.push(("s2".into(), format!("f{ib}")));
        edges.push((hook.0.clone(), "s1".into(), hook.1));
        edges.push(("s1".into(), "s2".into(), None));
        hook = ("s2".into(), None);
        swap = Some(("s1".to_string(), "s2".to_string()));
    }
    finish(rng, p, n, out, ops, preds, vertices, edges, hook, swap)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    rng: &mut ChaCha8Rng,
    p: &SizeParams,
    n: usize,
    out: usize,
    mut ops: Vec<(String, Fun)>,
    mut preds: Vec<(String, Vec<bool>)>,
    mut vertices: Vec<(String, String)>,
    mut edges: Vec<(String, String, Option<Bit>)>,
    mut hook: (String, Option<Bit>),
    swap: Option<(String, String)>,
) -> Blueprint {
    let mut gadget = None;
    if rng.gen_range(0..100) < p.loop_percent {
        let test = format!("p{}", preds.len());
        preds.push((test.clone(), random_pred(rng, n)));
        let body_op = ops.choose(rng).expect("at least one operation").0.clone();
        vertices.push(("c".into(), test));
        vertices.push(("g".into(), body_op));
        edges.push((hook.0.clone(), "c".into(), hook.1));
        edges.push(("c".into(), "g".into(), Some(Bit::Zero)));
        edges.push(("g".into(), "c".into(), None));
        hook = ("c".into(), Some(Bit::One));
        gadget = Some(("c".to_string(), "g".to_string()));
    }

    // Random body, attached by a spanning tree then filled in.
    let body = p.body.max(1);
    let mut kinds: Vec<Kind> =
        (0..body).map(|_| if preds.is_empty() || rng.gen_bool(0.6) { Kind::Op } else { Kind::Pred }).collect();
    if !kinds.contains(&Kind::Op) {
        kinds[0] = Kind::Op;
    }
    let names: Vec<String> = (0..body).map(|i| format!("v{i}")).collect();
    for (i, k) in kinds.iter().enumerate() {
        let label = match k {
            Kind::Op => ops.choose(rng).expect("operation").0.clone(),
            Kind::Pred => preds.choose(rng).expect("predicate").0.clone(),
        };
        vertices.push((names[i].clone(), label));
    }
    vertices.push(("h".into(), FIN.into()));

    // Free out-slots per body vertex.
    let mut slots: Vec<Vec<Option<Bit>>> = kinds
        .iter()
        .map(|k| match k {
            Kind::Op => vec![None],
            Kind::Pred => vec![Some(Bit::One), Some(Bit::Zero)],
        })
        .collect();
    let mut targets: Vec<Vec<String>> = vec![Vec::new(); body];
    edges.push((hook.0, names[0].clone(), hook.1));
    for i in 1..body {
        let open: Vec<usize> = (0..i).filter(|&j| !slots[j].is_empty()).collect();
        let j = *open.choose(rng).expect("a free slot always exists");
        let k = rng.gen_range(0..slots[j].len());
        let label = slots[j].remove(k);
        targets[j].push(names[i].clone());
        edges.push((names[j].clone(), names[i].clone(), label));
    }
    // The fin vertex takes one remaining slot, chosen at random.
    let open: Vec<usize> = (0..body).filter(|&j| !slots[j].is_empty()).collect();
    let j = *open.choose(rng).expect("a free slot always exists");
    let k = rng.gen_range(0..slots[j].len());
    let label = slots[j].remove(k);
    targets[j].push("h".into());
    edges.push((names[j].clone(), "h".into(), label));
    // Remaining slots.
    let reentry = swap.as_ref().map(|s| s.0.clone());
    for j in 0..body {
        while let Some(label) = slots[j].pop() {
            let mut cands: Vec<String> = vec!["h".into()];
            for (i, name) in names.iter().enumerate() {
                if kinds[j] == Kind::Pred && kinds[i] == Kind::Pred && i <= j {
                    continue;
                }
                cands.push(name.clone());
            }
            cands.extend(reentry.clone());
            cands.retain(|c| !targets[j].contains(c));
            let t = cands.choose(rng).cloned().unwrap_or_else(|| "h".into());
            if targets[j].contains(&t) {
                // Only possible for a predicate whose other edge already
                // targets the last candidate; retarget via a fresh op vertex.
                let name = format!("v{}", names.len() + 1000);
                let op = ops.choose(rng).expect("operation").0.clone();
                vertices.push((name.clone(), op));
                edges.push((names[j].clone(), name.clone(), label));
                edges.push((name, "h".into(), None));
                continue;
            }
            targets[j].push(t.clone());
            edges.push((names[j].clone(), t, label));
        }
    }

    let fin: Vec<usize> = (0..n).map(|x| x % out).collect();
    ops.sort_by(|a, b| a.0.cmp(&b.0));
    Blueprint { n, out, ini: (0..n).collect(), fin, ops, preds, root: "r".into(), vertices, edges, swap, gadget }
}

// ---------------------------------------------------------------------------
// Variants

fn iso_variant(rng: &mut ChaCha8Rng, b: &Blueprint) -> Blueprint {
    let n = b.n;
    let mut pi: Vec<usize> = (0..n).collect();
    pi.shuffle(rng);
    let mut inv = vec![0; n];
    for (x, &y) in pi.iter().enumerate() {
        inv[y] = x;
    }
    // Vertices.
    let mut fresh: Vec<usize> = (0..b.vertices.len()).collect();
    fresh.shuffle(rng);
    let vname = |v: &str| -> String {
        let i = b.vertices.iter().position(|x| x.0 == v).expect("vertex");
        format!("n{}", fresh[i])
    };
    // Operations.
    let mut op_ix: Vec<usize> = (0..b.ops.len()).collect();
    op_ix.shuffle(rng);
    let op_name = |o: &str| -> String {
        let i = b.ops.iter().position(|x| x.0 == o).expect("operation");
        format!("g{}", op_ix[i])
    };
    // Predicates; the bit map is global, so either all are negated or none.
    let mut pred_ix: Vec<usize> = (0..b.preds.len()).collect();
    pred_ix.shuffle(rng);
    let negate = rng.gen_bool(0.5);
    let flips: Vec<bool> = vec![negate; b.preds.len()];
    let pred_name = |p: &str| -> (String, bool) {
        let i = b.preds.iter().position(|x| x.0 == p).expect("predicate");
        let prefix = if flips[i] { "not_q" } else { "q" };
        (format!("{prefix}{}", pred_ix[i]), flips[i])
    };

    let relabel = |l: &str| -> String {
        if l == INI || l == FIN {
            l.to_string()
        } else if b.ops.iter().any(|o| o.0 == l) {
            op_name(l)
        } else {
            pred_name(l).0
        }
    };
    let mut vertices: Vec<(String, String)> = b.vertices.iter().map(|(v, l)| (vname(v), relabel(l))).collect();
    vertices.shuffle(rng);
    let mut edges: Vec<(String, String, Option<Bit>)> = b
        .edges
        .iter()
        .map(|(a, c, l)| {
            let flipped = b.preds.iter().any(|p| p.0 == b.label(a)) && pred_name(b.label(a)).1;
            let l = if flipped { l.map(Bit::flip) } else { *l };
            (vname(a), vname(c), l)
        })
        .collect();
    edges.shuffle(rng);

    let conj = |t: &[usize]| -> Vec<usize> { (0..n).map(|x| pi[t[inv[x]]]).collect() };
    let mut ops: Vec<(String, Fun)> = b
        .ops
        .iter()
        .map(|(o, f)| {
            let t = f.table(n);
            (op_name(o), Fun::Table(conj(&t)))
        })
        .collect();
    ops.sort_by(|a, c| a.0.cmp(&c.0));
    let mut preds: Vec<(String, Vec<bool>)> = b
        .preds
        .iter()
        .map(|(p, t)| {
            let (name, flip) = pred_name(p);
            (name, (0..n).map(|x| t[inv[x]] != flip).collect())
        })
        .collect();
    preds.sort_by(|a, c| a.0.cmp(&c.0));
    Blueprint {
        n,
        out: b.out,
        ini: b.ini.iter().map(|&d| pi[d]).collect(),
        fin: (0..n).map(|x| b.fin[inv[x]]).collect(),
        ops,
        preds,
        root: vname(&b.root),
        vertices,
        edges,
        swap: None,
        gadget: None,
    }
}

fn vertex_split(rng: &mut ChaCha8Rng, b: &Blueprint) -> Option<Blueprint> {
    let candidates: Vec<&(String, String)> = b
        .vertices
        .iter()
        .filter(|(v, l)| {
            !b.preds.iter().any(|p| &p.0 == l) && l != INI && b.edges.iter().filter(|e| &e.1 == v).count() >= 2
        })
        .collect();
    let (v, label) = (*candidates.choose(rng)?).clone();
    let copy = format!("{v}_split");
    let mut out = b.clone();
    out.vertices.push((copy.clone(), label));
    let incoming: Vec<usize> = out.edges.iter().enumerate().filter(|(_, e)| e.1 == v).map(|(i, _)| i).collect();
    let moved = *incoming.choose(rng).expect("two incoming edges");
    out.edges[moved].1 = copy.clone();
    let succ: Vec<(String, String, Option<Bit>)> =
        b.edges.iter().filter(|e| e.0 == v).map(|e| (copy.clone(), e.1.clone(), e.2)).collect();
    out.edges.extend(succ);
    Some(out)
}

/// `weak` yields 1 wherever `strong` does, checked over the whole domain.
fn implies_everywhere(strong: &[bool], weak: &[bool]) -> bool {
    strong.iter().zip(weak).all(|(s, w)| !*s || *w)
}

fn cycle_dup(rng: &mut ChaCha8Rng, b: &Blueprint) -> Option<Blueprint> {
    let (test, body) = b.gadget.clone()?;
    let strong = b.pred_table(b.label(&test)).to_vec();
    let weak: Vec<bool> = strong.iter().map(|s| *s || rng.gen_bool(0.5)).collect();
    if !implies_everywhere(&strong, &weak) {
        return None;
    }
    let mut out = b.clone();
    let weak_name = format!("p{}", b.preds.len());
    out.preds.push((weak_name.clone(), weak));
    let body_label = b.label(&body).to_string();
    out.vertices.push(("c_dup".into(), weak_name));
    out.vertices.push(("g_dup".into(), body_label));
    for e in out.edges.iter_mut() {
        if e.1 == test && e.0 != body {
            e.1 = "c_dup".into();
        }
    }
    out.edges.push(("c_dup".into(), test, Some(Bit::One)));
    out.edges.push(("c_dup".into(), "g_dup".into(), Some(Bit::Zero)));
    out.edges.push(("g_dup".into(), "c_dup".into(), None));
    out.gadget = None;
    Some(out)
}

fn op_swap(b: &Blueprint) -> Option<Blueprint> {
    let (first, second) = b.swap.clone()?;
    let (lf, ls) = (b.label(&first).to_string(), b.label(&second).to_string());
    let (tf, ts) = (b.op_table(&lf), b.op_table(&ls));
    let commute = (0..b.n).all(|x| tf[ts[x]] == ts[tf[x]]);
    let differ = (0..b.n).any(|x| tf[x] != ts[x]);
    if !commute || !differ {
        return None;
    }
    let mut out = b.clone();
    for v in out.vertices.iter_mut() {
        if v.0 == first {
            v.1 = ls.clone();
        } else if v.0 == second {
            v.1 = lf.clone();
        }
    }
    Some(out)
}

fn some_input_converges(a: &ProtoAlgorithm) -> bool {
    (0..a.input_values().len() as u32).any(|d| a.iterate_ix(StepKind::Algorithmic, d, DEFAULT_MAX_STEPS).is_some())
}

/// A random proto-algorithm and every variant the sample admits.
pub fn generate_random(seed: u64, params: &SizeParams) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = blueprint(&mut rng, params);
    let base = b.build();
    let mut variants = vec![Variant { tag: VariantTag::Iso, algorithm: iso_variant(&mut rng, &b).build() }];
    if let Some(v) = vertex_split(&mut rng, &b) {
        variants.push(Variant { tag: VariantTag::VertexSplit, algorithm: v.build() });
    }
    // The duplicated loop is entered by every input; as long as one input
    // converges, the extra tests make the step counts incompatible.
    if some_input_converges(&base) {
        if let Some(v) = cycle_dup(&mut rng, &b) {
            variants.push(Variant { tag: VariantTag::CycleDup, algorithm: v.build() });
        }
    }
    if let Some(v) = op_swap(&b) {
        variants.push(Variant { tag: VariantTag::OpSwap, algorithm: v.build() });
    }
    Generated { seed, base, variants }
}

/// A random algorithm process: the translation of a random graph with its
/// variables renamed and its equations shuffled.
pub fn random_process(seed: u64, params: &SizeParams) -> (AlgorithmProcess, Alphabet) {
    let g = generate_random(seed, params);
    let p = graph_to_process(g.base.graph());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let vars: Vec<String> = p.spec.vars().filter(|x| *x != ROOT_VAR && *x != p.epsilon).map(String::from).collect();
    let mut fresh: Vec<usize> = (0..vars.len()).collect();
    fresh.shuffle(&mut rng);
    let map = vars.iter().zip(fresh).map(|(x, i)| (x.clone(), format!("Y{i}"))).collect();
    let mut q = crate::translate::rename(&p, &map);
    let mut eqs: Vec<_> = q.spec.equations.drain(..).collect();
    eqs.shuffle(&mut rng);
    q.spec.equations = eqs.into_iter().collect();
    (q, g.base.alphabet().clone())
}

/// Number of states reachable from the inputs under algorithmic steps.
pub fn reachable_states(a: &ProtoAlgorithm) -> usize {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<_> = (0..a.input_values().len() as u32).map(crate::exec::IState::Input).collect();
    while let Some(s) = stack.pop() {
        if seen.insert(s) {
            let t = a.astep_ix(s);
            if !seen.contains(&t) {
                stack.push(t);
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_algorithm_graph;
    use crate::interp::check_interpretation;

    #[test]
    fn deterministic() {
        let a = generate_random(7, &SizeParams::default());
        let b = generate_random(7, &SizeParams::default());
        assert_eq!(a.base.graph().graph(), b.base.graph().graph());
        assert_eq!(a.base.interp(), b.base.interp());
        assert_eq!(a.variants.len(), b.variants.len());
    }

    #[test]
    fn always_valid() {
        for seed in 0..200 {
            let g = generate_random(seed, &SizeParams::default());
            for a in std::iter::once(&g.base).chain(g.variants.iter().map(|v| &v.algorithm)) {
                assert!(validate_algorithm_graph(a.alphabet(), a.graph().graph()).is_ok());
                assert!(check_interpretation(a.alphabet(), a.interp(), 1 << 16).unwrap().is_ok());
            }
        }
    }

    #[test]
    fn all_tags_occur() {
        let mut tags = BTreeSet::new();
        for seed in 0..50 {
            tags.extend(generate_random(seed, &SizeParams::default()).variants.iter().map(|v| v.tag));
        }
        assert_eq!(tags.len(), 4);
    }
}
