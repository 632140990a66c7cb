//! Canonical printing of documents; `parse(pretty(d)) == d`.

use std::fmt::Write as _;

use super::parse::Document;
use crate::exec::ProtoAlgorithm;
use crate::graph::{Alphabet, Digraph};
use crate::interp::{DomainDecl, Extent, Interpretation};
use crate::translate::AlgorithmProcess;

pub fn pretty(doc: &Document) -> String {
    let mut out = String::new();
    write_alphabet(&mut out, &doc.alphabet);
    if let Some(g) = &doc.graph {
        out.push('\n');
        write_graph(&mut out, g);
    }
    if let Some(i) = &doc.interp {
        out.push('\n');
        write_interp(&mut out, i);
    }
    if let Some(p) = &doc.process {
        out.push('\n');
        write_process(&mut out, p);
    }
    out
}

/// The document describing a proto-algorithm.
pub fn document_of(a: &ProtoAlgorithm) -> Document {
    Document {
        alphabet: a.alphabet().clone(),
        graph: Some(a.graph().graph().clone()),
        interp: Some(a.interp().clone()),
        process: None,
        spans: Default::default(),
    }
}

pub fn write_alphabet(out: &mut String, a: &Alphabet) {
    out.push_str("ALPHABET\n");
    let funs: Vec<&str> = a.functions().collect();
    let _ = writeln!(out, "fun {}", funs.join(" "));
    let preds: Vec<&str> = a.predicates().collect();
    if !preds.is_empty() {
        let _ = writeln!(out, "pred {}", preds.join(" "));
    }
}

pub fn write_graph(out: &mut String, g: &Digraph) {
    out.push_str("GRAPH\n");
    let _ = writeln!(out, "root {}", g.root());
    for v in g.vertices() {
        match g.label(v) {
            Some(l) => writeln!(out, "v {v} : {l}"),
            None => writeln!(out, "v {v}"),
        }
        .expect("string write");
    }
    for (a, b, l) in g.edges() {
        match l {
            Some(bit) => writeln!(out, "edge {a} ->{bit} {b}"),
            None => writeln!(out, "edge {a} -> {b}"),
        }
        .expect("string write");
    }
}

fn write_domain(out: &mut String, d: &DomainDecl) {
    let _ = write!(out, "domain {} arity {}", d.role, d.arity);
    match &d.extent {
        Extent::Boxed(rs) => {
            out.push_str(" range");
            for (lo, hi) in rs {
                let _ = write!(out, " {lo}..{hi}");
            }
        }
        Extent::Finite(vs) => {
            out.push_str(" values");
            for v in vs {
                let _ = write!(out, " {v}");
            }
        }
    }
    out.push('\n');
}

pub fn write_interp(out: &mut String, i: &Interpretation) {
    out.push_str("INTERP\n");
    for d in [&i.main, &i.input, &i.output] {
        write_domain(out, d);
    }
    for (f, e) in &i.functions {
        let _ = writeln!(out, "fun {f}(x) = {e}");
    }
    for (p, e) in &i.predicates {
        let _ = writeln!(out, "pred {p}(x) = {e}");
    }
}

pub fn write_process(out: &mut String, p: &AlgorithmProcess) {
    out.push_str("PROCESS\n");
    let _ = writeln!(out, "root {}", p.root);
    let _ = writeln!(out, "final {}", p.epsilon);
    for (x, t) in &p.spec.equations {
        let _ = writeln!(out, "{x} = {t}");
    }
}
