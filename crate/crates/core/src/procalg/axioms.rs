//! Replay of proof logs against the axiom schemata.
//!
//! This is deliberately separate from the normal-form engine: each axiom is
//! implemented as a rewrite of the subterm at a position, and a log is
//! accepted only if replaying it on the starting term yields the claimed
//! normal form. RSP is not a rewrite and is not supported.
//!
//! Conventions for the n-ary sum representation: A1 reverses the summands,
//! A2 flattens nested sums, A3 removes one duplicate summand, and A6 is
//! logged at the `δ` summand it removes (or at the sum, removing the first
//! `δ`). Reversed GC2 instantiates `x` with `ε`.

use std::sync::Arc;

use thiserror::Error;

use super::hnf::{eval_closed_cond, eval_closed_data, substitute_cond, substitute_data, Axiom, Derivation, ProofStep};
use super::terms::{CondTerm, DataTerm, LinearSpec, ProcTerm, Valuation};
use crate::interp::Interpretation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: no subterm at position {position:?}")]
    BadPosition { step: usize, position: Vec<usize> },
    #[error("step {step}: {axiom} does not apply to `{term}`")]
    NoMatch { step: usize, axiom: Axiom, term: String },
    #[error("step {step}: {axiom} cannot be applied right to left")]
    NotReversible { step: usize, axiom: Axiom },
    #[error("step {step}: data evaluation failed: {message}")]
    Data { step: usize, message: String },
    #[error("replay ends in `{got}`, derivation claims `{claimed}`")]
    Mismatch { got: String, claimed: String },
}

/// Apply every step of `log` to `start`, returning the final term.
pub fn replay(interp: &Interpretation, start: &ProcTerm, log: &[ProofStep]) -> Result<ProcTerm, ReplayError> {
    let mut term = start.clone();
    for (i, s) in log.iter().enumerate() {
        term = apply_step(interp, &term, s, i)?;
    }
    Ok(term)
}

/// Check that `derivation` is a correct derivation from `eval_ρ(⟨x|S⟩)`.
pub fn check_derivation(
    interp: &Interpretation,
    rho: &Valuation,
    x: &str,
    spec: &Arc<LinearSpec>,
    derivation: &Derivation,
) -> Result<(), ReplayError> {
    let start = ProcTerm::eval(rho.clone(), ProcTerm::rec(x, spec));
    let got = replay(interp, &start, &derivation.log)?;
    let claimed = derivation.result.to_term(spec);
    if got == claimed {
        Ok(())
    } else {
        Err(ReplayError::Mismatch { got: got.to_string(), claimed: claimed.to_string() })
    }
}

fn apply_step(interp: &Interpretation, term: &ProcTerm, s: &ProofStep, step: usize) -> Result<ProcTerm, ReplayError> {
    let bad_pos = || ReplayError::BadPosition { step, position: s.position.clone() };
    // A6 may address the δ summand, so it is resolved against the parent sum.
    if s.axiom == Axiom::A6 && !s.reversed {
        if let Some(ProcTerm::Deadlock) = term.at(&s.position) {
            if let Some((&idx, parent)) = s.position.split_last() {
                let mut out = term.clone();
                let sum = out.at_mut(parent).ok_or_else(bad_pos)?;
                if let ProcTerm::Alt(ts) = sum {
                    ts.remove(idx);
                    if ts.len() == 1 {
                        *sum = ts.pop().expect("one left");
                    }
                    return Ok(out);
                }
            }
        }
    }
    let mut out = term.clone();
    let target = out.at_mut(&s.position).ok_or_else(bad_pos)?;
    let rewritten = rewrite(interp, target, s.axiom, s.reversed, step)?;
    *target = rewritten;
    Ok(out)
}

fn rewrite(
    interp: &Interpretation,
    t: &ProcTerm,
    axiom: Axiom,
    reversed: bool,
    step: usize,
) -> Result<ProcTerm, ReplayError> {
    use ProcTerm::*;
    let no = || ReplayError::NoMatch { step, axiom, term: t.to_string() };
    if reversed {
        return match axiom {
            Axiom::A3 => Ok(Alt(vec![t.clone(), t.clone()])),
            Axiom::A5 => match t {
                Seq(x, yz) => match &**yz {
                    Seq(y, z) => Ok(ProcTerm::seq(ProcTerm::seq((**x).clone(), (**y).clone()), (**z).clone())),
                    _ => Err(no()),
                },
                _ => Err(no()),
            },
            Axiom::A6 => Ok(Alt(vec![t.clone(), Deadlock])),
            Axiom::A8 => Ok(ProcTerm::seq(t.clone(), Empty)),
            Axiom::A9 => Ok(ProcTerm::seq(Empty, t.clone())),
            Axiom::GC1 => Ok(ProcTerm::guard(CondTerm::True, t.clone())),
            Axiom::GC2 => match t {
                Deadlock => Ok(ProcTerm::guard(CondTerm::False, Empty)),
                _ => Err(no()),
            },
            _ => Err(ReplayError::NotReversible { step, axiom }),
        };
    }
    let data_err = |e: super::ProcError| ReplayError::Data { step, message: e.to_string() };
    match (axiom, t) {
        (Axiom::A1, Alt(ts)) => Ok(Alt(ts.iter().rev().cloned().collect())),
        (Axiom::A2, Alt(ts)) if ts.iter().any(|x| matches!(x, Alt(_))) => Ok(ProcTerm::alt(ts.clone())),
        (Axiom::A3, Alt(ts)) => {
            for i in 0..ts.len() {
                for j in i + 1..ts.len() {
                    if ts[i] == ts[j] {
                        let mut rest = ts.clone();
                        rest.remove(j);
                        return Ok(ProcTerm::alt(rest));
                    }
                }
            }
            Err(no())
        }
        (Axiom::A4, Seq(sum, z)) => match &**sum {
            Alt(ts) => Ok(Alt(ts.iter().map(|x| ProcTerm::seq(x.clone(), (**z).clone())).collect())),
            _ => Err(no()),
        },
        (Axiom::A5, Seq(xy, z)) => match &**xy {
            Seq(x, y) => Ok(ProcTerm::seq((**x).clone(), ProcTerm::seq((**y).clone(), (**z).clone()))),
            _ => Err(no()),
        },
        (Axiom::A6, Alt(ts)) => {
            let i = ts.iter().position(|x| *x == Deadlock).ok_or_else(no)?;
            let mut rest = ts.clone();
            rest.remove(i);
            Ok(ProcTerm::alt(rest))
        }
        (Axiom::A7, Seq(x, _)) if **x == Deadlock => Ok(Deadlock),
        (Axiom::A8, Seq(x, e)) if **e == Empty => Ok((**x).clone()),
        (Axiom::A9, Seq(e, x)) if **e == Empty => Ok((**x).clone()),
        (Axiom::GC1, Guard(CondTerm::True, x)) => Ok((**x).clone()),
        (Axiom::GC2, Guard(CondTerm::False, _)) => Ok(Deadlock),
        (Axiom::GC3, Guard(_, x)) if **x == Deadlock => Ok(Deadlock),
        (Axiom::GC4, Guard(phi, x)) => match &**x {
            Alt(ts) => Ok(Alt(ts.iter().map(|y| ProcTerm::guard(phi.clone(), y.clone())).collect())),
            _ => Err(no()),
        },
        (Axiom::GC5, Guard(phi, x)) => match &**x {
            Seq(a, b) => Ok(ProcTerm::seq(ProcTerm::guard(phi.clone(), (**a).clone()), (**b).clone())),
            _ => Err(no()),
        },
        (Axiom::GC6, Guard(phi, x)) => match &**x {
            Guard(psi, y) => {
                Ok(ProcTerm::guard(CondTerm::And(Box::new(phi.clone()), Box::new(psi.clone())), (**y).clone()))
            }
            _ => Err(no()),
        },
        (Axiom::GC7, Guard(CondTerm::Or(phi, psi), x)) => Ok(Alt(vec![
            ProcTerm::guard((**phi).clone(), (**x).clone()),
            ProcTerm::guard((**psi).clone(), (**x).clone()),
        ])),
        (Axiom::RDP, Rec(x, spec)) => {
            let body = spec.get(x).ok_or_else(no)?;
            Ok(body.close_over(spec))
        }
        (Axiom::V1, Eval(_, x)) if **x == Empty => Ok(Empty),
        (Axiom::V2, Eval(rho, x)) => match &**x {
            Seq(a, rest) if matches!(**a, Action(_)) => {
                Ok(ProcTerm::seq((**a).clone(), ProcTerm::eval(rho.clone(), (**rest).clone())))
            }
            _ => Err(no()),
        },
        (Axiom::V3, Eval(rho, x)) => match &**x {
            Seq(a, rest) => match &**a {
                Assign(v, e) => {
                    let closed = substitute_data(rho, e).map_err(data_err)?;
                    let value = eval_closed_data(interp, &closed).map_err(data_err)?;
                    Ok(ProcTerm::seq(Assign(v.clone(), closed), ProcTerm::eval(rho.update(v, value), (**rest).clone())))
                }
                _ => Err(no()),
            },
            _ => Err(no()),
        },
        (Axiom::V4, Eval(rho, x)) => match &**x {
            Alt(ts) => Ok(Alt(ts.iter().map(|y| ProcTerm::eval(rho.clone(), y.clone())).collect())),
            _ => Err(no()),
        },
        (Axiom::V5, Eval(rho, x)) => match &**x {
            Guard(phi, y) => Ok(ProcTerm::guard(
                substitute_cond(rho, phi).map_err(data_err)?,
                ProcTerm::eval(rho.clone(), (**y).clone()),
            )),
            _ => Err(no()),
        },
        (Axiom::IMP1, Assign(v, e)) if e.is_closed() => {
            let value = eval_closed_data(interp, e).map_err(data_err)?;
            Ok(Assign(v.clone(), DataTerm::Const(value)))
        }
        (Axiom::IMP2, Guard(phi, x)) => {
            let holds = eval_closed_cond(interp, phi).map_err(data_err)?;
            Ok(ProcTerm::guard(if holds { CondTerm::True } else { CondTerm::False }, (**x).clone()))
        }
        _ => Err(no()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::procalg::terms::MEM;

    #[test]
    fn small_rewrites() {
        let interp = crate::frontend::fixtures::cd().interp().clone();
        let a = ProcTerm::Action("a".into());
        let t = ProcTerm::seq(ProcTerm::Alt(vec![a.clone(), ProcTerm::Deadlock]), ProcTerm::Empty);
        let log = vec![
            ProofStep { axiom: Axiom::A8, position: vec![], reversed: false },
            ProofStep { axiom: Axiom::A6, position: vec![1], reversed: false },
        ];
        assert_eq!(replay(&interp, &t, &log).unwrap(), a);
        let bad = vec![ProofStep { axiom: Axiom::A9, position: vec![], reversed: false }];
        assert!(matches!(replay(&interp, &t, &bad), Err(ReplayError::NoMatch { .. })));
        let g = ProcTerm::guard(
            CondTerm::Or(Box::new(CondTerm::True), Box::new(CondTerm::False)),
            ProcTerm::assign(MEM, DataTerm::apply("dec", DataTerm::Const(crate::interp::Value::scalar(2)))),
        );
        let log = vec![
            ProofStep { axiom: Axiom::GC7, position: vec![], reversed: false },
            ProofStep { axiom: Axiom::GC2, position: vec![1], reversed: false },
            ProofStep { axiom: Axiom::A6, position: vec![], reversed: false },
            ProofStep { axiom: Axiom::GC1, position: vec![], reversed: false },
            ProofStep { axiom: Axiom::IMP1, position: vec![], reversed: false },
        ];
        assert_eq!(
            replay(&interp, &g, &log).unwrap(),
            ProcTerm::assign(MEM, DataTerm::Const(crate::interp::Value::scalar(1)))
        );
    }
}
