use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::interp::{Bit, Value};

/// The flexible variable used by translated algorithm processes.
pub const MEM: &str = "MEM";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DataTerm {
    /// Flexible-variable constant.
    Flex(String),
    Const(Value),
    /// A data operator (function or predicate symbol) applied to one argument.
    Apply(String, Box<DataTerm>),
}

impl DataTerm {
    pub fn flex(v: &str) -> Self {
        DataTerm::Flex(v.to_string())
    }

    pub fn apply(f: &str, arg: DataTerm) -> Self {
        DataTerm::Apply(f.to_string(), Box::new(arg))
    }

    pub fn is_closed(&self) -> bool {
        match self {
            DataTerm::Flex(_) => false,
            DataTerm::Const(_) => true,
            DataTerm::Apply(_, e) => e.is_closed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BitTerm {
    Lit(Bit),
    /// `p(e)` for a predicate symbol `p`.
    Pred(String, DataTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CondTerm {
    True,
    False,
    DataEq(DataTerm, DataTerm),
    BitEq(BitTerm, BitTerm),
    Not(Box<CondTerm>),
    And(Box<CondTerm>, Box<CondTerm>),
    Or(Box<CondTerm>, Box<CondTerm>),
    Implies(Box<CondTerm>, Box<CondTerm>),
}

impl CondTerm {
    /// `p(MEM) = bit`, the guard shape produced for predicate vertices.
    pub fn pred_is(p: &str, arg: DataTerm, bit: Bit) -> Self {
        CondTerm::BitEq(BitTerm::Pred(p.to_string(), arg), BitTerm::Lit(bit))
    }
}

/// A flexible-variable valuation: a finite map with an optional default
/// covering every variable not listed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Valuation {
    pub map: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Value>,
}

impl Valuation {
    /// `[v ↦ d]`.
    pub fn single(v: &str, d: Value) -> Self {
        let mut map = BTreeMap::new();
        map.insert(v.to_string(), d);
        Valuation { map, default: None }
    }

    pub fn get(&self, v: &str) -> Option<&Value> {
        self.map.get(v).or(self.default.as_ref())
    }

    /// `ρ⟨d/v⟩`.
    pub fn update(&self, v: &str, d: Value) -> Self {
        let mut out = self.clone();
        out.map.insert(v.to_string(), d);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ProcTerm {
    /// Basic action.
    Action(String),
    Deadlock,
    Empty,
    /// n-ary alternative composition; summands form a multiset.
    Alt(Vec<ProcTerm>),
    Seq(Box<ProcTerm>, Box<ProcTerm>),
    Assign(String, DataTerm),
    Guard(CondTerm, Box<ProcTerm>),
    Eval(Valuation, Box<ProcTerm>),
    /// Recursion variable, only meaningful inside a specification.
    Var(String),
    /// The recursion constant `⟨X|S⟩`.
    Rec(String, Arc<LinearSpec>),
}

impl ProcTerm {
    /// Alternative composition of `items`, flattening nested sums. A single
    /// summand is returned as is.
    pub fn alt(items: Vec<ProcTerm>) -> ProcTerm {
        let mut flat = Vec::with_capacity(items.len());
        for t in items {
            match t {
                ProcTerm::Alt(inner) => flat.extend(inner),
                t => flat.push(t),
            }
        }
        if flat.len() == 1 {
            flat.pop().expect("one element")
        } else {
            ProcTerm::Alt(flat)
        }
    }

    pub fn seq(a: ProcTerm, b: ProcTerm) -> ProcTerm {
        ProcTerm::Seq(Box::new(a), Box::new(b))
    }

    pub fn guard(c: CondTerm, t: ProcTerm) -> ProcTerm {
        ProcTerm::Guard(c, Box::new(t))
    }

    pub fn eval(rho: Valuation, t: ProcTerm) -> ProcTerm {
        ProcTerm::Eval(rho, Box::new(t))
    }

    pub fn assign(v: &str, e: DataTerm) -> ProcTerm {
        ProcTerm::Assign(v.to_string(), e)
    }

    pub fn var(x: &str) -> ProcTerm {
        ProcTerm::Var(x.to_string())
    }

    pub fn rec(x: &str, spec: &Arc<LinearSpec>) -> ProcTerm {
        ProcTerm::Rec(x.to_string(), Arc::clone(spec))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, ProcTerm::Action(_) | ProcTerm::Assign(..))
    }

    /// Children in position order.
    pub fn children(&self) -> Vec<&ProcTerm> {
        match self {
            ProcTerm::Alt(ts) => ts.iter().collect(),
            ProcTerm::Seq(a, b) => vec![a, b],
            ProcTerm::Guard(_, t) | ProcTerm::Eval(_, t) => vec![t],
            _ => Vec::new(),
        }
    }

    /// The subterm at `path`, if any.
    pub fn at(&self, path: &[usize]) -> Option<&ProcTerm> {
        let Some((&i, rest)) = path.split_first() else { return Some(self) };
        self.children().get(i).and_then(|c| c.at(rest))
    }

    /// Mutable access to the subterm at `path`.
    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut ProcTerm> {
        let Some((&i, rest)) = path.split_first() else { return Some(self) };
        let child = match self {
            ProcTerm::Alt(ts) => ts.get_mut(i),
            ProcTerm::Seq(a, b) => match i {
                0 => Some(&mut **a),
                1 => Some(&mut **b),
                _ => None,
            },
            ProcTerm::Guard(_, t) | ProcTerm::Eval(_, t) if i == 0 => Some(&mut **t),
            _ => None,
        };
        child.and_then(|c| c.at_mut(rest))
    }

    /// Recursion variables occurring in the term.
    pub fn variables(&self, out: &mut Vec<String>) {
        match self {
            ProcTerm::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            _ => {
                for c in self.children() {
                    c.variables(out);
                }
            }
        }
    }

    /// Replace every variable `Y` by `⟨Y|S⟩`.
    pub fn close_over(&self, spec: &Arc<LinearSpec>) -> ProcTerm {
        match self {
            ProcTerm::Var(y) => ProcTerm::rec(y, spec),
            ProcTerm::Alt(ts) => ProcTerm::Alt(ts.iter().map(|t| t.close_over(spec)).collect()),
            ProcTerm::Seq(a, b) => ProcTerm::seq(a.close_over(spec), b.close_over(spec)),
            ProcTerm::Guard(c, t) => ProcTerm::guard(c.clone(), t.close_over(spec)),
            ProcTerm::Eval(r, t) => ProcTerm::eval(r.clone(), t.close_over(spec)),
            t => t.clone(),
        }
    }
}

impl PartialEq for ProcTerm {
    fn eq(&self, other: &Self) -> bool {
        use ProcTerm::*;
        match (self, other) {
            (Action(a), Action(b)) | (Var(a), Var(b)) => a == b,
            (Deadlock, Deadlock) | (Empty, Empty) => true,
            (Alt(xs), Alt(ys)) => multiset_eq(xs, ys),
            (Seq(a, b), Seq(c, d)) => a == c && b == d,
            (Assign(v, e), Assign(w, f)) => v == w && e == f,
            (Guard(c, t), Guard(d, u)) => c == d && t == u,
            (Eval(r, t), Eval(s, u)) => r == s && t == u,
            (Rec(x, s), Rec(y, t)) => x == y && (Arc::ptr_eq(s, t) || s == t),
            _ => false,
        }
    }
}

impl Eq for ProcTerm {}

fn multiset_eq(xs: &[ProcTerm], ys: &[ProcTerm]) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = vec![false; ys.len()];
    'outer: for x in xs {
        for (j, y) in ys.iter().enumerate() {
            if !used[j] && x == y {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Whether `t` belongs to the linear fragment: `δ`, `φ :→ ε`, `φ :→ α·X`,
/// and sums of non-`δ` linear terms.
pub fn is_linear(t: &ProcTerm) -> bool {
    match t {
        ProcTerm::Deadlock => true,
        _ => is_linear_summand_sum(t),
    }
}

fn is_linear_summand_sum(t: &ProcTerm) -> bool {
    match t {
        ProcTerm::Alt(ts) => ts.len() >= 2 && ts.iter().all(is_linear_summand_sum),
        ProcTerm::Guard(_, body) => match &**body {
            ProcTerm::Empty => true,
            ProcTerm::Seq(a, x) => a.is_atomic() && matches!(**x, ProcTerm::Var(_)),
            _ => false,
        },
        _ => false,
    }
}

/// A finite set of recursion equations with linear right-hand sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSpec {
    pub equations: IndexMap<String, ProcTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("equation for {0} is not linear")]
    NotLinear(String),
    #[error("variable {var} used in the equation for {equation} has no equation")]
    Unbound { equation: String, var: String },
}

impl LinearSpec {
    pub fn new(equations: IndexMap<String, ProcTerm>) -> Result<Self, SpecError> {
        let spec = LinearSpec { equations };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<(), SpecError> {
        for (x, t) in &self.equations {
            if !is_linear(t) {
                return Err(SpecError::NotLinear(x.clone()));
            }
            let mut vars = Vec::new();
            t.variables(&mut vars);
            if let Some(var) = vars.into_iter().find(|v| !self.equations.contains_key(v)) {
                return Err(SpecError::Unbound { equation: x.clone(), var });
            }
        }
        Ok(())
    }

    pub fn get(&self, x: &str) -> Option<&ProcTerm> {
        self.equations.get(x)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.equations.keys().map(String::as_str)
    }
}

// ---------------------------------------------------------------------------
// Printing. Equations print in the DSL's process syntax; `eval` and recursion
// constants only appear in diagnostics and proof logs.

impl fmt::Display for DataTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataTerm::Flex(v) => f.write_str(v),
            DataTerm::Const(v) => write!(f, "{v}"),
            DataTerm::Apply(g, e) => write!(f, "{g}({e})"),
        }
    }
}

impl fmt::Display for BitTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitTerm::Lit(b) => write!(f, "{b}"),
            BitTerm::Pred(p, e) => write!(f, "{p}({e})"),
        }
    }
}

impl CondTerm {
    // 0 implication, 1 disjunction, 2 conjunction, 3 negation, 4 atoms
    fn level(&self) -> u8 {
        match self {
            CondTerm::Implies(..) => 0,
            CondTerm::Or(..) => 1,
            CondTerm::And(..) => 2,
            CondTerm::Not(_) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            CondTerm::True => f.write_str("true"),
            CondTerm::False => f.write_str("false"),
            CondTerm::DataEq(a, b) => write!(f, "{a} = {b}"),
            CondTerm::BitEq(a, b) => write!(f, "{a} = {b}"),
            CondTerm::Not(c) => {
                f.write_str("!")?;
                c.write_at(f, 3)
            }
            CondTerm::And(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" & ")?;
                b.write_at(f, 3)
            }
            CondTerm::Or(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" | ")?;
                b.write_at(f, 2)
            }
            CondTerm::Implies(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" => ")?;
                b.write_at(f, 0)
            }
        }
    }
}

impl fmt::Display for CondTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (v, d)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} ↦ {d}")?;
        }
        if let Some(d) = &self.default {
            if !self.map.is_empty() {
                f.write_str(", ")?;
            }
            write!(f, "_ ↦ {d}")?;
        }
        f.write_str("]")
    }
}

impl ProcTerm {
    // 0 sum, 1 guard, 2 sequence, 3 atoms
    fn level(&self) -> u8 {
        match self {
            ProcTerm::Alt(_) => 0,
            ProcTerm::Guard(..) => 1,
            ProcTerm::Seq(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            ProcTerm::Action(a) => f.write_str(a),
            ProcTerm::Deadlock => f.write_str("delta"),
            ProcTerm::Empty => f.write_str("eps"),
            ProcTerm::Alt(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    t.write_at(f, 1)?;
                }
                Ok(())
            }
            ProcTerm::Seq(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" . ")?;
                b.write_at(f, 2)
            }
            ProcTerm::Assign(v, e) => write!(f, "{v} := {e}"),
            ProcTerm::Guard(c, t) => {
                // Conditions are wrapped unless atomic so `:->` never binds
                // into a connective.
                c.write_at(f, 4)?;
                f.write_str(" :-> ")?;
                t.write_at(f, 1)
            }
            ProcTerm::Eval(r, t) => {
                write!(f, "eval{r}(")?;
                t.write_at(f, 0)?;
                f.write_str(")")
            }
            ProcTerm::Var(x) => f.write_str(x),
            ProcTerm::Rec(x, _) => write!(f, "⟨{x}|S⟩"),
        }
    }
}

impl fmt::Display for ProcTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Display for LinearSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, t) in &self.equations {
            writeln!(f, "{x} = {t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(a: ProcTerm, x: &str) -> ProcTerm {
        ProcTerm::guard(CondTerm::True, ProcTerm::seq(a, ProcTerm::var(x)))
    }

    #[test]
    fn linear_grammar() {
        assert!(is_linear(&ProcTerm::Deadlock));
        let term = ProcTerm::guard(CondTerm::True, ProcTerm::Empty);
        assert!(is_linear(&term));
        assert!(!is_linear(&ProcTerm::Alt(vec![term.clone(), ProcTerm::Deadlock])));
        assert!(is_linear(&ProcTerm::Alt(vec![term.clone(), step(ProcTerm::Action("a".into()), "Y")])));
        // sequence with a non-variable tail
        assert!(!is_linear(&ProcTerm::guard(
            CondTerm::True,
            ProcTerm::seq(ProcTerm::Action("a".into()), ProcTerm::Empty)
        )));
        assert!(!is_linear(&ProcTerm::Empty));
    }

    #[test]
    fn sums_are_multisets() {
        let a = step(ProcTerm::Action("a".into()), "X");
        let b = step(ProcTerm::Action("b".into()), "Y");
        assert_eq!(ProcTerm::Alt(vec![a.clone(), b.clone()]), ProcTerm::Alt(vec![b.clone(), a.clone()]));
        assert_ne!(ProcTerm::Alt(vec![a.clone(), a.clone()]), ProcTerm::Alt(vec![a.clone(), b.clone()]));
        let nested = ProcTerm::alt(vec![a.clone(), ProcTerm::alt(vec![b.clone(), a.clone()])]);
        assert!(matches!(&nested, ProcTerm::Alt(ts) if ts.len() == 3));
    }

    #[test]
    fn printing() {
        let t = ProcTerm::alt(vec![
            ProcTerm::guard(
                CondTerm::pred_is("iszero", DataTerm::flex(MEM), Bit::One),
                ProcTerm::seq(ProcTerm::assign(MEM, DataTerm::flex(MEM)), ProcTerm::var("X_h")),
            ),
            ProcTerm::guard(
                CondTerm::And(Box::new(CondTerm::True), Box::new(CondTerm::Not(Box::new(CondTerm::False)))),
                ProcTerm::Empty,
            ),
        ]);
        assert_eq!(t.to_string(), "iszero(MEM) = 1 :-> MEM := MEM . X_h + (true & !false) :-> eps");
        let rho = Valuation::single(MEM, Value::scalar(2)).update("N", Value::new(vec![1, 0]));
        assert_eq!(rho.to_string(), "[MEM ↦ <2>, N ↦ <1,0>]");
    }

    #[test]
    fn paths() {
        let t = ProcTerm::Alt(vec![ProcTerm::Empty, ProcTerm::guard(CondTerm::True, ProcTerm::Deadlock)]);
        assert_eq!(t.at(&[1, 0]), Some(&ProcTerm::Deadlock));
        assert_eq!(t.at(&[2]), None);
    }
}
