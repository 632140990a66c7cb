//! Head normal forms of evaluated recursion constants.
//!
//! [`head_normal_form`] rewrites `eval_ρ(⟨X|S⟩)` with the axioms of the
//! theory and logs each rewrite. The sequence is fixed:
//! RDP, V4, V5 per summand, IMP2 per guard, GC1/GC2, A6, then V1, V2 or
//! V3 (+ IMP1) on the surviving summand.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::terms::{BitTerm, CondTerm, DataTerm, LinearSpec, ProcTerm, Valuation};
use super::ProcError;
use crate::interp::{Bit, Interpretation, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    GC1,
    GC2,
    GC3,
    GC4,
    GC5,
    GC6,
    GC7,
    RDP,
    V1,
    V2,
    V3,
    V4,
    V5,
    IMP1,
    IMP2,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One rewrite: `axiom` applied at `position` (child indices from the root),
/// right-to-left when `reversed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofStep {
    pub axiom: Axiom,
    pub position: Vec<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub reversed: bool,
}

impl ProofStep {
    fn at(axiom: Axiom, position: Vec<usize>) -> Self {
        ProofStep { axiom, position, reversed: false }
    }
}

/// An atomic process with its data already evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Atom {
    Action { name: String },
    Assign { var: String, value: Value },
}

impl Atom {
    pub fn to_term(&self) -> ProcTerm {
        match self {
            Atom::Action { name } => ProcTerm::Action(name.clone()),
            Atom::Assign { var, value } => ProcTerm::Assign(var.clone(), DataTerm::Const(value.clone())),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Action { name } => f.write_str(name),
            Atom::Assign { var, value } => write!(f, "{var} := {value}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Hnf {
    /// Derivably equal to `ε`.
    Terminated,
    /// Derivably equal to `action · eval_valuation(⟨next|S⟩)`.
    Step { action: Atom, valuation: Valuation, next: String },
    /// Derivably equal to `δ`.
    Stuck,
}

impl Hnf {
    /// The term this normal form stands for.
    pub fn to_term(&self, spec: &Arc<LinearSpec>) -> ProcTerm {
        match self {
            Hnf::Terminated => ProcTerm::Empty,
            Hnf::Stuck => ProcTerm::Deadlock,
            Hnf::Step { action, valuation, next } => {
                ProcTerm::seq(action.to_term(), ProcTerm::eval(valuation.clone(), ProcTerm::rec(next, spec)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub result: Hnf,
    pub log: Vec<ProofStep>,
}

/// `ρ(e)` as a closed data term.
pub fn substitute_data(rho: &Valuation, e: &DataTerm) -> Result<DataTerm, ProcError> {
    Ok(match e {
        DataTerm::Flex(v) => DataTerm::Const(rho.get(v).cloned().ok_or_else(|| ProcError::OpenCondition(v.clone()))?),
        DataTerm::Const(c) => DataTerm::Const(c.clone()),
        DataTerm::Apply(f, a) => DataTerm::Apply(f.clone(), Box::new(substitute_data(rho, a)?)),
    })
}

fn substitute_bit(rho: &Valuation, b: &BitTerm) -> Result<BitTerm, ProcError> {
    Ok(match b {
        BitTerm::Lit(b) => BitTerm::Lit(*b),
        BitTerm::Pred(p, e) => BitTerm::Pred(p.clone(), substitute_data(rho, e)?),
    })
}

/// `ρ(φ)`: the homomorphic extension of the valuation to conditions.
pub fn substitute_cond(rho: &Valuation, c: &CondTerm) -> Result<CondTerm, ProcError> {
    let b = |c: &CondTerm| substitute_cond(rho, c).map(Box::new);
    Ok(match c {
        CondTerm::True => CondTerm::True,
        CondTerm::False => CondTerm::False,
        CondTerm::DataEq(x, y) => CondTerm::DataEq(substitute_data(rho, x)?, substitute_data(rho, y)?),
        CondTerm::BitEq(x, y) => CondTerm::BitEq(substitute_bit(rho, x)?, substitute_bit(rho, y)?),
        CondTerm::Not(x) => CondTerm::Not(b(x)?),
        CondTerm::And(x, y) => CondTerm::And(b(x)?, b(y)?),
        CondTerm::Or(x, y) => CondTerm::Or(b(x)?, b(y)?),
        CondTerm::Implies(x, y) => CondTerm::Implies(b(x)?, b(y)?),
    })
}

/// Value of a closed data term in the data algebra.
pub fn eval_closed_data(interp: &Interpretation, e: &DataTerm) -> Result<Value, ProcError> {
    match e {
        DataTerm::Flex(v) => Err(ProcError::OpenCondition(v.clone())),
        DataTerm::Const(c) => Ok(c.clone()),
        DataTerm::Apply(f, a) => {
            let arg = eval_closed_data(interp, a)?;
            Ok(interp.apply_unchecked(f, &arg)?)
        }
    }
}

fn eval_closed_bit(interp: &Interpretation, b: &BitTerm) -> Result<Bit, ProcError> {
    match b {
        BitTerm::Lit(b) => Ok(*b),
        BitTerm::Pred(p, e) => {
            let arg = eval_closed_data(interp, e)?;
            let r = interp.apply_unchecked(p, &arg)?;
            r.as_bit().ok_or(ProcError::NotABit { symbol: p.clone(), result: r })
        }
    }
}

/// Truth value of a closed condition.
pub fn eval_closed_cond(interp: &Interpretation, c: &CondTerm) -> Result<bool, ProcError> {
    Ok(match c {
        CondTerm::True => true,
        CondTerm::False => false,
        CondTerm::DataEq(x, y) => eval_closed_data(interp, x)? == eval_closed_data(interp, y)?,
        CondTerm::BitEq(x, y) => eval_closed_bit(interp, x)? == eval_closed_bit(interp, y)?,
        CondTerm::Not(x) => !eval_closed_cond(interp, x)?,
        CondTerm::And(x, y) => eval_closed_cond(interp, x)? && eval_closed_cond(interp, y)?,
        CondTerm::Or(x, y) => eval_closed_cond(interp, x)? || eval_closed_cond(interp, y)?,
        CondTerm::Implies(x, y) => !eval_closed_cond(interp, x)? || eval_closed_cond(interp, y)?,
    })
}

/// The bit `ρ(φ)` denotes.
pub fn eval_cond(interp: &Interpretation, rho: &Valuation, phi: &CondTerm) -> Result<Bit, ProcError> {
    Ok(Bit::from_bool(eval_closed_cond(interp, &substitute_cond(rho, phi)?)?))
}

/// Rewrite `eval_ρ(⟨x|S⟩)` to head normal form.
pub fn head_normal_form(
    interp: &Interpretation,
    rho: &Valuation,
    x: &str,
    spec: &Arc<LinearSpec>,
) -> Result<Derivation, ProcError> {
    let body = spec.get(x).ok_or_else(|| ProcError::UnknownVariable(x.to_string()))?;
    if !super::terms::is_linear(body) {
        return Err(ProcError::NonLinearSpec(x.to_string()));
    }
    let mut log = vec![ProofStep::at(Axiom::RDP, vec![0])];
    let summands: Vec<&ProcTerm> = match body {
        ProcTerm::Deadlock => {
            // eval(δ) = eval(false :→ ε) = false :→ eval(ε) = false :→ ε = δ
            log.push(ProofStep { axiom: Axiom::GC2, position: vec![0], reversed: true });
            log.push(ProofStep::at(Axiom::V5, vec![]));
            log.push(ProofStep::at(Axiom::V1, vec![0]));
            log.push(ProofStep::at(Axiom::GC2, vec![]));
            return Ok(Derivation { result: Hnf::Stuck, log });
        }
        ProcTerm::Alt(ts) => {
            log.push(ProofStep::at(Axiom::V4, vec![]));
            ts.iter().collect()
        }
        t => vec![t],
    };
    let multi = summands.len() > 1;
    let pos = |i: usize| if multi { vec![i] } else { vec![] };

    // Guards under the valuation, decided in the data algebra.
    let mut alive = Vec::with_capacity(summands.len());
    for (i, s) in summands.iter().enumerate() {
        let ProcTerm::Guard(phi, _) = s else { unreachable!("linear summands are guarded") };
        log.push(ProofStep::at(Axiom::V5, pos(i)));
        let closed = substitute_cond(rho, phi)?;
        let holds = eval_closed_cond(interp, &closed)?;
        if !matches!(closed, CondTerm::True | CondTerm::False) {
            log.push(ProofStep::at(Axiom::IMP2, pos(i)));
        } else if (closed == CondTerm::True) != holds {
            unreachable!("literal conditions evaluate to themselves");
        }
        log.push(ProofStep::at(if holds { Axiom::GC1 } else { Axiom::GC2 }, pos(i)));
        alive.push(holds);
    }
    let survivors: Vec<usize> = (0..summands.len()).filter(|&i| alive[i]).collect();
    if survivors.len() > 1 {
        return Err(ProcError::AmbiguousGuards { variable: x.to_string(), summands: survivors });
    }
    if multi {
        // Drop δ summands one at a time, last first so earlier indices hold.
        let mut remaining = summands.len();
        for i in (0..summands.len()).rev() {
            if !alive[i] && remaining > 1 {
                // A6 is logged at the δ summand it removes.
                log.push(ProofStep::at(Axiom::A6, vec![i]));
                remaining -= 1;
            }
        }
    }
    let Some(&chosen) = survivors.first() else {
        return Ok(Derivation { result: Hnf::Stuck, log });
    };
    let ProcTerm::Guard(_, body) = summands[chosen] else { unreachable!() };
    match &**body {
        ProcTerm::Empty => {
            log.push(ProofStep::at(Axiom::V1, vec![]));
            Ok(Derivation { result: Hnf::Terminated, log })
        }
        ProcTerm::Seq(alpha, next) => {
            let ProcTerm::Var(y) = &**next else { unreachable!("linear tail") };
            match &**alpha {
                ProcTerm::Action(a) => {
                    log.push(ProofStep::at(Axiom::V2, vec![]));
                    Ok(Derivation {
                        result: Hnf::Step {
                            action: Atom::Action { name: a.clone() },
                            valuation: rho.clone(),
                            next: y.clone(),
                        },
                        log,
                    })
                }
                ProcTerm::Assign(v, e) => {
                    log.push(ProofStep::at(Axiom::V3, vec![]));
                    let closed = substitute_data(rho, e)?;
                    let value = eval_closed_data(interp, &closed)?;
                    if closed != DataTerm::Const(value.clone()) {
                        log.push(ProofStep::at(Axiom::IMP1, vec![0]));
                    }
                    Ok(Derivation {
                        result: Hnf::Step {
                            action: Atom::Assign { var: v.clone(), value: value.clone() },
                            valuation: rho.update(v, value),
                            next: y.clone(),
                        },
                        log,
                    })
                }
                _ => unreachable!("linear atoms"),
            }
        }
        _ => unreachable!("linear bodies"),
    }
}

/// One side of a co-unfolding: a valuation and a variable of a spec.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub valuation: Valuation,
    pub var: String,
    pub spec: Arc<LinearSpec>,
}

impl Evaluated {
    pub fn new(valuation: Valuation, var: &str, spec: &Arc<LinearSpec>) -> Self {
        Evaluated { valuation, var: var.to_string(), spec: Arc::clone(spec) }
    }

    pub fn to_term(&self) -> ProcTerm {
        ProcTerm::eval(self.valuation.clone(), ProcTerm::rec(&self.var, &self.spec))
    }

    fn same_term(&self, other: &Evaluated) -> bool {
        self.var == other.var
            && self.valuation == other.valuation
            && (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EqualityVerdict {
    /// Both sides unfold to the same actions and end the same way (or reach
    /// syntactically identical terms). `steps` actions were matched.
    Proven { steps: usize, left_log: Vec<Vec<ProofStep>>, right_log: Vec<Vec<ProofStep>> },
    /// The unfoldings disagree at action index `index`.
    Refuted { index: usize, prefix: Vec<Atom>, left: Hnf, right: Hnf },
    /// Neither agreement to the end nor disagreement was found.
    UnknownAtBound { bound: usize, reason: String, prefix_len: usize },
}

impl EqualityVerdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, EqualityVerdict::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, EqualityVerdict::Refuted { .. })
    }
}

/// Decide `eval_ρ(⟨X|S⟩) = eval_ρ'(⟨X'|S'⟩)` on the deterministic fragment
/// by unfolding both sides in lockstep for at most `bound` actions.
pub fn derivably_equal(
    interp: &Interpretation,
    left: &Evaluated,
    right: &Evaluated,
    bound: usize,
) -> Result<EqualityVerdict, ProcError> {
    let (mut l, mut r) = (left.clone(), right.clone());
    let mut prefix = Vec::new();
    let (mut left_log, mut right_log) = (Vec::new(), Vec::new());
    let mut seen: HashSet<(String, Valuation, String, Valuation)> = HashSet::new();
    for index in 0..bound {
        if l.same_term(&r) {
            return Ok(EqualityVerdict::Proven { steps: index, left_log, right_log });
        }
        if !seen.insert((l.var.clone(), l.valuation.clone(), r.var.clone(), r.valuation.clone())) {
            return Ok(EqualityVerdict::UnknownAtBound {
                bound,
                reason: "both sides repeat without terminating".into(),
                prefix_len: prefix.len(),
            });
        }
        let dl = head_normal_form(interp, &l.valuation, &l.var, &l.spec)?;
        let dr = head_normal_form(interp, &r.valuation, &r.var, &r.spec)?;
        left_log.push(dl.log);
        right_log.push(dr.log);
        match (&dl.result, &dr.result) {
            (Hnf::Terminated, Hnf::Terminated) | (Hnf::Stuck, Hnf::Stuck) => {
                return Ok(EqualityVerdict::Proven { steps: index, left_log, right_log });
            }
            (Hnf::Step { action: a, valuation: va, next: na }, Hnf::Step { action: b, valuation: vb, next: nb })
                if a == b =>
            {
                prefix.push(a.clone());
                l = Evaluated { valuation: va.clone(), var: na.clone(), spec: Arc::clone(&l.spec) };
                r = Evaluated { valuation: vb.clone(), var: nb.clone(), spec: Arc::clone(&r.spec) };
            }
            _ => {
                return Ok(EqualityVerdict::Refuted { index, prefix, left: dl.result, right: dr.result });
            }
        }
    }
    Ok(EqualityVerdict::UnknownAtBound { bound, reason: "unfolding bound reached".into(), prefix_len: prefix.len() })
}
