//! Isomorphism of proto-algorithms.
//!
//! The vertex bijection is searched first, in breadth-first order from the
//! root, so every vertex after the root has an already-mapped predecessor
//! and its image is one of a handful of successors. Label transport builds
//! the symbol maps on the way. Value bijections are then searched with
//! forced-assignment propagation along `ini`, the operations and `fin`.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::Verdict;
use crate::exec::{Node, ProtoAlgorithm};
use crate::graph::{AlgorithmGraph, FIN, INI};
use crate::interp::{Bit, Value};

pub const DEFAULT_ISO_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BitMap {
    Identity,
    Swap,
}

impl BitMap {
    pub fn apply(self, b: Bit) -> Bit {
        match self {
            BitMap::Identity => b,
            BitMap::Swap => b.flip(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub functions: Vec<(String, String)>,
    pub predicates: Vec<(String, String)>,
    pub vertices: Vec<(String, String)>,
    pub data: Vec<(Value, Value)>,
    pub inputs: Vec<(Value, Value)>,
    pub outputs: Vec<(Value, Value)>,
    pub bits: BitMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoRefutation {
    pub reason: String,
}

pub type IsoVerdict = Verdict<IsoWitness, IsoRefutation>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum VKind {
    Ini,
    Fin,
    Op(u32),
    Pred(u32),
}

fn kind(n: Node) -> VKind {
    match n {
        Node::Ini { .. } => VKind::Ini,
        Node::Fin => VKind::Fin,
        Node::Op { op, .. } => VKind::Op(op),
        Node::Pred { pred, .. } => VKind::Pred(pred),
    }
}

/// Successors with their edge bits, from the compiled nodes.
fn succs(n: Node) -> Vec<(u32, Option<Bit>)> {
    match n {
        Node::Ini { next } | Node::Op { next, .. } => vec![(next, None)],
        Node::Pred { one, zero, .. } => vec![(one, Some(Bit::One)), (zero, Some(Bit::Zero))],
        Node::Fin => vec![],
    }
}

struct Budget {
    left: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<(), Exhausted> {
        if self.left == 0 {
            return Err(Exhausted);
        }
        self.left -= 1;
        Ok(())
    }
}

struct Exhausted;

/// Structural state of the vertex search.
struct VertexSearch<'a> {
    a: &'a ProtoAlgorithm,
    b: &'a ProtoAlgorithm,
    order: Vec<u32>,
    parent: Vec<Option<(u32, Option<Bit>)>>,
    bv: Vec<Option<u32>>,
    used: Vec<bool>,
    bf: Vec<Option<u32>>,
    bf_used: Vec<bool>,
    bp: Vec<Option<u32>>,
    bp_used: Vec<bool>,
    bits: Option<BitMap>,
    indeg_a: Vec<usize>,
    indeg_b: Vec<usize>,
}

fn indegrees(p: &ProtoAlgorithm) -> Vec<usize> {
    let mut d = vec![0; p.nodes().len()];
    for n in p.nodes() {
        for (s, _) in succs(*n) {
            d[s as usize] += 1;
        }
    }
    d
}

fn bfs_order(p: &ProtoAlgorithm) -> (Vec<u32>, Vec<Option<(u32, Option<Bit>)>>) {
    let n = p.nodes().len();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([p.root_index()]);
    seen[p.root_index() as usize] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for (s, bit) in succs(p.nodes()[v as usize]) {
            if !seen[s as usize] {
                seen[s as usize] = true;
                parent[s as usize] = Some((v, bit));
                queue.push_back(s);
            }
        }
    }
    for v in 0..n as u32 {
        if !seen[v as usize] {
            order.push(v);
        }
    }
    (order, parent)
}

/// An undo log entry for the symbol maps.
enum Undo {
    Fun(u32),
    Pred(u32),
    Bits,
}

impl<'a> VertexSearch<'a> {
    fn new(a: &'a ProtoAlgorithm, b: &'a ProtoAlgorithm) -> Self {
        let (order, parent) = bfs_order(a);
        let (na, nb) = (a.nodes().len(), b.nodes().len());
        VertexSearch {
            a,
            b,
            order,
            parent,
            bv: vec![None; na],
            used: vec![false; nb],
            bf: vec![None; a.op_names().len()],
            bf_used: vec![false; b.op_names().len()],
            bp: vec![None; a.pred_names().len()],
            bp_used: vec![false; b.pred_names().len()],
            bits: None,
            indeg_a: indegrees(a),
            indeg_b: indegrees(b),
        }
    }

    /// Try to extend the symbol maps so that `v` may map to `w`.
    fn bind_label(&mut self, v: u32, w: u32, undo: &mut Vec<Undo>) -> bool {
        let (ka, kb) = (kind(self.a.nodes()[v as usize]), kind(self.b.nodes()[w as usize]));
        match (ka, kb) {
            (VKind::Ini, VKind::Ini) | (VKind::Fin, VKind::Fin) => true,
            (VKind::Op(f), VKind::Op(g)) => match self.bf[f as usize] {
                Some(x) => x == g,
                None if self.bf_used[g as usize] => false,
                None => {
                    self.bf[f as usize] = Some(g);
                    self.bf_used[g as usize] = true;
                    undo.push(Undo::Fun(f));
                    true
                }
            },
            (VKind::Pred(p), VKind::Pred(q)) => match self.bp[p as usize] {
                Some(x) => x == q,
                None if self.bp_used[q as usize] => false,
                None => {
                    self.bp[p as usize] = Some(q);
                    self.bp_used[q as usize] = true;
                    undo.push(Undo::Pred(p));
                    true
                }
            },
            _ => false,
        }
    }

    fn bind_bit(&mut self, from: Option<Bit>, to: Option<Bit>, undo: &mut Vec<Undo>) -> bool {
        match (from, to) {
            (None, None) => true,
            (Some(x), Some(y)) => {
                let needed = if x == y { BitMap::Identity } else { BitMap::Swap };
                match self.bits {
                    Some(m) => m == needed,
                    None => {
                        self.bits = Some(needed);
                        undo.push(Undo::Bits);
                        true
                    }
                }
            }
            _ => false,
        }
    }

    fn rollback(&mut self, undo: Vec<Undo>) {
        for u in undo.into_iter().rev() {
            match u {
                Undo::Fun(f) => {
                    let g = self.bf[f as usize].take().expect("bound");
                    self.bf_used[g as usize] = false;
                }
                Undo::Pred(p) => {
                    let q = self.bp[p as usize].take().expect("bound");
                    self.bp_used[q as usize] = false;
                }
                Undo::Bits => self.bits = None,
            }
        }
    }

    fn edges_agree(&self, v: u32, w: u32) -> bool {
        let (sa, sb) = (succs(self.a.nodes()[v as usize]), succs(self.b.nodes()[w as usize]));
        // Out-edges to mapped vertices must exist on the other side, and
        // vice versa for already-used targets.
        for (s, _) in &sa {
            let target = if *s == v { Some(w) } else { self.bv[*s as usize] };
            if let Some(t) = target {
                if !sb.iter().any(|(x, _)| *x == t) {
                    return false;
                }
            }
        }
        for (x, _) in &sb {
            let mapped_back =
                if *x == w { Some(v) } else { (0..self.bv.len() as u32).find(|u| self.bv[*u as usize] == Some(*x)) };
            if let Some(u) = mapped_back {
                if !sa.iter().any(|(s, _)| *s == u) {
                    return false;
                }
            }
        }
        // In-edges from mapped vertices.
        for u in 0..self.bv.len() as u32 {
            if let Some(x) = self.bv[u as usize] {
                let ab = succs(self.a.nodes()[u as usize]).iter().any(|(s, _)| *s == v);
                let bb = succs(self.b.nodes()[x as usize]).iter().any(|(s, _)| *s == w);
                if ab != bb {
                    return false;
                }
            }
        }
        true
    }

    /// Bits on edges between `v` and mapped vertices must transport.
    fn bind_edge_bits(&mut self, v: u32, w: u32, undo: &mut Vec<Undo>) -> bool {
        let sa = succs(self.a.nodes()[v as usize]);
        let sb = succs(self.b.nodes()[w as usize]);
        for (s, bit) in sa {
            let target = if s == v { Some(w) } else { self.bv[s as usize] };
            if let Some(t) = target {
                let other = sb.iter().find(|(x, _)| *x == t).map(|(_, b)| *b);
                match other {
                    Some(b2) if self.bind_bit(bit, b2, undo) => {}
                    _ => return false,
                }
            }
        }
        for u in 0..self.bv.len() as u32 {
            if u == v {
                continue;
            }
            if let Some(x) = self.bv[u as usize] {
                for (s, bit) in succs(self.a.nodes()[u as usize]) {
                    if s == v {
                        let b2 = succs(self.b.nodes()[x as usize]).into_iter().find(|(t, _)| *t == w).map(|(_, b)| b);
                        match b2 {
                            Some(b2) if self.bind_bit(bit, b2, undo) => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }

    fn candidates(&self, v: u32) -> Vec<u32> {
        let nb = self.b.nodes().len() as u32;
        match self.parent[v as usize] {
            Some((u, _)) => {
                let x = self.bv[u as usize].expect("parent mapped first");
                succs(self.b.nodes()[x as usize]).into_iter().map(|(s, _)| s).collect()
            }
            None if v == self.a.root_index() => vec![self.b.root_index()],
            None => (0..nb).collect(),
        }
    }

    /// Enumerate complete vertex maps; `found` returns true to stop.
    fn search(
        &mut self,
        i: usize,
        budget: &mut Budget,
        found: &mut dyn FnMut(&Self, &mut Budget) -> Result<bool, Exhausted>,
    ) -> Result<bool, Exhausted> {
        if i == self.order.len() {
            return found(self, budget);
        }
        let v = self.order[i];
        for w in self.candidates(v) {
            budget.tick()?;
            if self.used[w as usize] || self.indeg_a[v as usize] != self.indeg_b[w as usize] {
                continue;
            }
            let mut undo = Vec::new();
            let ok = self.bind_label(v, w, &mut undo) && self.edges_agree(v, w) && self.bind_edge_bits(v, w, &mut undo);
            if ok {
                self.bv[v as usize] = Some(w);
                self.used[w as usize] = true;
                if self.search(i + 1, budget, found)? {
                    return Ok(true);
                }
                self.bv[v as usize] = None;
                self.used[w as usize] = false;
            }
            self.rollback(undo);
        }
        Ok(false)
    }
}

/// Value maps, searched once a vertex map and symbol maps are fixed.
struct ValueSearch<'a> {
    a: &'a ProtoAlgorithm,
    b: &'a ProtoAlgorithm,
    bits: BitMap,
    bf: Vec<Option<u32>>,
    bf_used: Vec<bool>,
    bi: Vec<Option<u32>>,
    bi_used: Vec<bool>,
    bd: Vec<Option<u32>>,
    bd_used: Vec<bool>,
    bo: Vec<Option<u32>>,
    bo_used: Vec<bool>,
}

#[derive(Default)]
struct Trail {
    d: Vec<u32>,
    o: Vec<u32>,
}

impl ValueSearch<'_> {
    fn set_d(&mut self, x: u32, y: u32, trail: &mut Trail, work: &mut Vec<u32>) -> bool {
        match self.bd[x as usize] {
            Some(z) => z == y,
            None if self.bd_used[y as usize] => false,
            None => {
                self.bd[x as usize] = Some(y);
                self.bd_used[y as usize] = true;
                trail.d.push(x);
                work.push(x);
                true
            }
        }
    }

    fn set_o(&mut self, x: u32, y: u32, trail: &mut Trail) -> bool {
        match self.bo[x as usize] {
            Some(z) => z == y,
            None if self.bo_used[y as usize] => false,
            None => {
                self.bo[x as usize] = Some(y);
                self.bo_used[y as usize] = true;
                trail.o.push(x);
                true
            }
        }
    }

    /// Push consequences of new data assignments through every known square.
    fn propagate(&mut self, mut work: Vec<u32>, trail: &mut Trail) -> bool {
        while let Some(x) = work.pop() {
            let y = self.bd[x as usize].expect("assigned");
            if !self.set_o(self.a.fin_table()[x as usize], self.b.fin_table()[y as usize], trail) {
                return false;
            }
            for f in 0..self.bf.len() {
                if let Some(g) = self.bf[f] {
                    let (fx, gy) = (self.a.op_table(f)[x as usize], self.b.op_table(g as usize)[y as usize]);
                    if !self.set_d(fx, gy, trail, &mut work) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: Trail) {
        for x in trail.d {
            let y = self.bd[x as usize].take().expect("assigned");
            self.bd_used[y as usize] = false;
        }
        for x in trail.o {
            let y = self.bo[x as usize].take().expect("assigned");
            self.bo_used[y as usize] = false;
        }
    }

    fn preds_ok(&self, bp: &[Option<u32>]) -> bool {
        for (p, q) in bp.iter().enumerate() {
            if let Some(q) = q {
                for x in 0..self.bd.len() {
                    if let Some(y) = self.bd[x] {
                        let lhs = self.bits.apply(self.a.pred_table(p)[x]);
                        if lhs != self.b.pred_table(*q as usize)[y as usize] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn search_inputs(
        &mut self,
        d: usize,
        bp: &[Option<u32>],
        budget: &mut Budget,
    ) -> Result<Option<Vec<Option<u32>>>, Exhausted> {
        if d == self.bi.len() {
            return self.search_ops(bp, budget);
        }
        let same = self.b.input_values().binary_search(&self.a.input_values()[d]).ok().map(|i| i as u32);
        let m = self.b.input_values().len() as u32;
        for e in same.into_iter().chain((0..m).filter(|e| Some(*e) != same)) {
            budget.tick()?;
            if self.bi_used[e as usize] {
                continue;
            }
            self.bi[d] = Some(e);
            self.bi_used[e as usize] = true;
            let mut trail = Trail::default();
            let mut work = Vec::new();
            let (x, y) = (self.a.ini_table()[d], self.b.ini_table()[e as usize]);
            if self.set_d(x, y, &mut trail, &mut work) && self.propagate(work, &mut trail) && self.preds_ok(bp) {
                if let Some(found) = self.search_inputs(d + 1, bp, budget)? {
                    return Ok(Some(found));
                }
            }
            self.undo(trail);
            self.bi[d] = None;
            self.bi_used[e as usize] = false;
        }
        Ok(None)
    }

    /// Map operation symbols no vertex uses, then finish with predicates.
    fn search_ops(&mut self, bp: &[Option<u32>], budget: &mut Budget) -> Result<Option<Vec<Option<u32>>>, Exhausted> {
        let Some(f) = self.bf.iter().position(Option::is_none) else {
            return Ok(self.finish_preds(bp));
        };
        for g in 0..self.bf_used.len() as u32 {
            budget.tick()?;
            if self.bf_used[g as usize] {
                continue;
            }
            self.bf[f] = Some(g);
            self.bf_used[g as usize] = true;
            let mut trail = Trail::default();
            let mut ok = true;
            let mut work = Vec::new();
            for x in 0..self.bd.len() as u32 {
                if let Some(y) = self.bd[x as usize] {
                    let (fx, gy) = (self.a.op_table(f)[x as usize], self.b.op_table(g as usize)[y as usize]);
                    if !self.set_d(fx, gy, &mut trail, &mut work) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.propagate(work, &mut trail) && self.preds_ok(bp) {
                if let Some(found) = self.search_ops(bp, budget)? {
                    return Ok(Some(found));
                }
            }
            self.undo(trail);
            self.bf[f] = None;
            self.bf_used[g as usize] = false;
        }
        Ok(None)
    }

    /// Requires a total data map; matches unused predicates by their
    /// transported tables.
    fn finish_preds(&self, bp: &[Option<u32>]) -> Option<Vec<Option<u32>>> {
        if self.bd.iter().any(Option::is_none) {
            return None;
        }
        let mut bp = bp.to_vec();
        let mut used = vec![false; self.b.pred_names().len()];
        for q in bp.iter().flatten() {
            used[*q as usize] = true;
        }
        for p in 0..bp.len() {
            if bp[p].is_some() {
                continue;
            }
            let fits = |q: usize| {
                (0..self.bd.len()).all(|x| {
                    let y = self.bd[x].expect("total");
                    self.bits.apply(self.a.pred_table(p)[x]) == self.b.pred_table(q)[y as usize]
                })
            };
            let q = (0..used.len()).find(|&q| !used[q] && fits(q))?;
            used[q] = true;
            bp[p] = Some(q as u32);
        }
        Some(bp)
    }
}

fn pairs_named(a: &[String], b: &[String], map: &[Option<u32>]) -> Vec<(String, String)> {
    map.iter().enumerate().map(|(i, j)| (a[i].clone(), b[j.expect("total") as usize].clone())).collect()
}

fn pairs_valued(a: &[Value], b: &[Value], map: &[Option<u32>]) -> Vec<(Value, Value)> {
    map.iter().enumerate().map(|(i, j)| (a[i].clone(), b[j.expect("total") as usize].clone())).collect()
}

fn size_mismatch(a: &ProtoAlgorithm, b: &ProtoAlgorithm) -> Option<String> {
    let ga = a.graph().graph();
    let gb = b.graph().graph();
    let checks: [(&str, usize, usize); 7] = [
        ("operation symbols", a.op_names().len(), b.op_names().len()),
        ("predicate symbols", a.pred_names().len(), b.pred_names().len()),
        ("vertices", ga.vertex_count(), gb.vertex_count()),
        ("edges", ga.edge_count(), gb.edge_count()),
        ("data values", a.main_values().len(), b.main_values().len()),
        ("input values", a.input_values().len(), b.input_values().len()),
        ("output values", a.output_values().len(), b.output_values().len()),
    ];
    checks.iter().find(|(_, x, y)| x != y).map(|(what, x, y)| format!("different numbers of {what}: {x} vs {y}"))
}

/// Search for an isomorphism of proto-algorithms within `budget` search nodes.
pub fn check_isomorphism(a: &ProtoAlgorithm, b: &ProtoAlgorithm, budget: u64) -> IsoVerdict {
    if let Some(reason) = size_mismatch(a, b) {
        return Verdict::Refuted { counterexample: IsoRefutation { reason } };
    }
    let mut budget = Budget { left: budget };
    let limit = budget.left;
    let mut vs = VertexSearch::new(a, b);
    let mut any_vertex_map = false;
    let mut result: Option<IsoWitness> = None;
    let outcome = vs.search(0, &mut budget, &mut |s, budget| {
        any_vertex_map = true;
        let bit_options: Vec<BitMap> = match s.bits {
            Some(m) => vec![m],
            None => vec![BitMap::Identity, BitMap::Swap],
        };
        for bits in bit_options {
            let mut v = ValueSearch {
                a,
                b,
                bits,
                bf: s.bf.clone(),
                bf_used: s.bf_used.clone(),
                bi: vec![None; a.input_values().len()],
                bi_used: vec![false; b.input_values().len()],
                bd: vec![None; a.main_values().len()],
                bd_used: vec![false; b.main_values().len()],
                bo: vec![None; a.output_values().len()],
                bo_used: vec![false; b.output_values().len()],
            };
            if let Some(bp) = v.search_inputs(0, &s.bp, budget)? {
                // Outputs outside the image of fin carry no constraint.
                let mut free = (0..v.bo_used.len() as u32).filter(|y| !v.bo_used[*y as usize]);
                for x in 0..v.bo.len() {
                    if v.bo[x].is_none() {
                        v.bo[x] = free.next();
                    }
                }
                let vertices = s
                    .bv
                    .iter()
                    .enumerate()
                    .map(|(i, j)| (a.vertex_names()[i].clone(), b.vertex_names()[j.expect("total") as usize].clone()))
                    .collect();
                let mut functions = vec![(INI.to_string(), INI.to_string()), (FIN.to_string(), FIN.to_string())];
                functions.extend(pairs_named(a.op_names(), b.op_names(), &v.bf));
                result = Some(IsoWitness {
                    functions,
                    predicates: pairs_named(a.pred_names(), b.pred_names(), &bp),
                    vertices,
                    data: pairs_valued(a.main_values(), b.main_values(), &v.bd),
                    inputs: pairs_valued(a.input_values(), b.input_values(), &v.bi),
                    outputs: pairs_valued(a.output_values(), b.output_values(), &v.bo),
                    bits,
                });
                return Ok(true);
            }
        }
        Ok(false)
    });
    match outcome {
        Err(Exhausted) => Verdict::UnknownAtBound { bound: limit as usize, reason: "search budget".into() },
        Ok(true) => Verdict::Proven { witness: result.expect("set on success") },
        Ok(false) => Verdict::Refuted {
            counterexample: IsoRefutation {
                reason: if any_vertex_map {
                    "no value bijections commute with the interpretations".into()
                } else {
                    "no vertex bijection preserves edges and label kinds".into()
                },
            },
        },
    }
}

/// Check every clause of the isomorphism definition for `w`, evaluating the
/// interpretations directly. Returns the violations found.
pub fn check_iso_witness(a: &ProtoAlgorithm, b: &ProtoAlgorithm, w: &IsoWitness) -> Vec<String> {
    let mut errs = Vec::new();
    fn bijection<T: Ord + Clone + std::fmt::Display>(
        name: &str,
        pairs: &[(T, T)],
        from: &[T],
        to: &[T],
        errs: &mut Vec<String>,
    ) -> BTreeMap<T, T> {
        let map: BTreeMap<T, T> = pairs.iter().cloned().collect();
        let mut dom: Vec<T> = pairs.iter().map(|p| p.0.clone()).collect();
        let mut img: Vec<T> = pairs.iter().map(|p| p.1.clone()).collect();
        dom.sort();
        img.sort();
        let (mut f, mut t) = (from.to_vec(), to.to_vec());
        f.sort();
        t.sort();
        if dom != f || img != t {
            errs.push(format!("{name} is not a bijection between the carriers"));
        }
        map
    }
    let (ia, ib) = (a.interp(), b.interp());
    let funs_a: Vec<String> = a.alphabet().functions().map(String::from).collect();
    let funs_b: Vec<String> = b.alphabet().functions().map(String::from).collect();
    let bf = bijection("βF", &w.functions, &funs_a, &funs_b, &mut errs);
    let bp = bijection("βP", &w.predicates, a.pred_names(), b.pred_names(), &mut errs);
    let bv = bijection("βV", &w.vertices, a.vertex_names(), b.vertex_names(), &mut errs);
    let bd = bijection("βD", &w.data, a.main_values(), b.main_values(), &mut errs);
    let bi = bijection("βI", &w.inputs, a.input_values(), b.input_values(), &mut errs);
    let bo = bijection("βO", &w.outputs, a.output_values(), b.output_values(), &mut errs);
    if !errs.is_empty() {
        return errs;
    }
    if bf.get(INI).map(String::as_str) != Some(INI) || bf.get(FIN).map(String::as_str) != Some(FIN) {
        errs.push("βF does not fix ini and fin".into());
    }
    let (ga, gb) = (a.graph().graph(), b.graph().graph());
    for u in ga.vertices() {
        for v in ga.vertices() {
            if ga.has_edge(u, v) != gb.has_edge(&bv[u], &bv[v]) {
                errs.push(format!("edge ({u},{v}) is not preserved"));
            }
            if let Some(Some(l)) = ga.edge_label(u, v) {
                if gb.edge_label(&bv[u], &bv[v]) != Some(Some(w.bits.apply(l))) {
                    errs.push(format!("label of edge ({u},{v}) is not transported"));
                }
            }
        }
        let l = ga.label(u).unwrap_or_default();
        let image = gb.label(&bv[u]).unwrap_or_default();
        let expected = bf.get(l).or_else(|| bp.get(l)).map(String::as_str);
        if expected != Some(image) {
            errs.push(format!("label of vertex {u} is not transported"));
        }
    }
    for d in a.input_values() {
        match (ia.eval_fun(INI, d), ib.eval_fun(INI, &bi[d])) {
            (Ok(x), Ok(y)) if bd.get(&x) == Some(&y) => {}
            _ => errs.push(format!("ini square fails at input {d}")),
        }
    }
    for d in a.main_values() {
        match (ia.eval_fun(FIN, d), ib.eval_fun(FIN, &bd[d])) {
            (Ok(x), Ok(y)) if bo.get(&x) == Some(&y) => {}
            _ => errs.push(format!("fin square fails at {d}")),
        }
        for f in a.op_names() {
            match (ia.eval_fun(f, d), ib.eval_fun(&bf[f], &bd[d])) {
                (Ok(x), Ok(y)) if bd.get(&x) == Some(&y) => {}
                _ => errs.push(format!("square for {f} fails at {d}")),
            }
        }
        for p in a.pred_names() {
            match (ia.eval_pred(p, d), ib.eval_pred(&bp[p], &bd[d])) {
                (Ok(x), Ok(y)) if w.bits.apply(x) == y => {}
                _ => errs.push(format!("square for {p} fails at {d}")),
            }
        }
    }
    errs
}

/// Isomorphism of the underlying labeled graphs with identity symbol maps.
pub fn check_graph_isomorphism(a: &AlgorithmGraph, b: &AlgorithmGraph) -> Option<BTreeMap<String, String>> {
    let (ca, cb) = (Skeleton::new(a), Skeleton::new(b));
    if ca.names.len() != cb.names.len() || a.graph().edge_count() != b.graph().edge_count() {
        return None;
    }
    let mut map = vec![None; ca.names.len()];
    let mut used = vec![false; cb.names.len()];
    let (order, parent) = ca.bfs();
    fn go(
        i: usize,
        order: &[usize],
        parent: &[Option<usize>],
        a: &Skeleton,
        b: &Skeleton,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        let cands: Vec<usize> = match parent[v] {
            Some(u) => b.succ[map[u].expect("parent first")].iter().map(|x| x.0).collect(),
            None if v == a.root => vec![b.root],
            None => (0..b.names.len()).collect(),
        };
        for w in cands {
            if used[w] || a.labels[v] != b.labels[w] || a.indeg[v] != b.indeg[w] || a.succ[v].len() != b.succ[w].len() {
                continue;
            }
            map[v] = Some(w);
            let consistent = (0..map.len()).all(|u| match map[u] {
                None => true,
                Some(x) => {
                    let e1 = a.succ[u].iter().find(|e| e.0 == v).map(|e| e.1);
                    let e2 = b.succ[x].iter().find(|e| e.0 == w).map(|e| e.1);
                    let e3 = a.succ[v].iter().find(|e| e.0 == u).map(|e| e.1);
                    let e4 = b.succ[w].iter().find(|e| e.0 == x).map(|e| e.1);
                    e1 == e2 && e3 == e4
                }
            });
            if consistent {
                used[w] = true;
                if go(i + 1, order, parent, a, b, map, used) {
                    return true;
                }
                used[w] = false;
            }
            map[v] = None;
        }
        false
    }
    if !go(0, &order, &parent, &ca, &cb, &mut map, &mut used) {
        return None;
    }
    Some(map.iter().enumerate().map(|(i, j)| (ca.names[i].clone(), cb.names[j.expect("total")].clone())).collect())
}

struct Skeleton {
    names: Vec<String>,
    labels: Vec<String>,
    succ: Vec<Vec<(usize, Option<Bit>)>>,
    indeg: Vec<usize>,
    root: usize,
}

impl Skeleton {
    fn new(g: &AlgorithmGraph) -> Self {
        let d = g.graph();
        let names: Vec<String> = d.vertices().map(String::from).collect();
        let ix = |v: &str| names.iter().position(|n| n == v).expect("vertex");
        let labels = names.iter().map(|v| g.label(v).to_string()).collect();
        let mut succ = vec![Vec::new(); names.len()];
        let mut indeg = vec![0; names.len()];
        for (u, v, l) in d.edges() {
            succ[ix(u)].push((ix(v), l));
            indeg[ix(v)] += 1;
        }
        let root = ix(d.root());
        Skeleton { names, labels, succ, indeg, root }
    }

    fn bfs(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let n = self.names.len();
        let mut order = Vec::new();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut q = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &(s, _) in &self.succ[v] {
                if !seen[s] {
                    seen[s] = true;
                    parent[s] = Some(v);
                    q.push_back(s);
                }
            }
        }
        order.extend((0..n).filter(|v| !seen[*v]));
        (order, parent)
    }
}
