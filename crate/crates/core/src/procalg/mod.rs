//! Imperative process algebra with recursion: terms, head normal forms,
//! co-unfolding equality and an axiom-level proof checker.

pub mod axioms;
pub mod hnf;
pub mod terms;

use thiserror::Error;

pub use axioms::{check_derivation, replay, ReplayError};
pub use hnf::{
    derivably_equal, eval_cond, head_normal_form, Atom, Axiom, Derivation, EqualityVerdict, Evaluated, Hnf, ProofStep,
};
pub use terms::{is_linear, BitTerm, CondTerm, DataTerm, LinearSpec, ProcTerm, SpecError, Valuation, MEM};

use crate::interp::{InterpError, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProcError {
    #[error("flexible variable {0} has no value under the valuation")]
    OpenCondition(String),
    #[error("the equation for {0} is not linear")]
    NonLinearSpec(String),
    #[error("no equation for {0}")]
    UnknownVariable(String),
    #[error("more than one guard holds in the equation for {variable} (summands {summands:?})")]
    AmbiguousGuards { variable: String, summands: Vec<usize> },
    #[error("`{symbol}` yields {result}, not a bit")]
    NotABit { symbol: String, result: Value },
    #[error(transparent)]
    Data(#[from] InterpError),
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::frontend::fixtures;
    use crate::interp::{Bit, Value};
    use crate::translate::graph_to_process;

    fn v(x: i64) -> Value {
        Value::scalar(x)
    }

    #[test]
    fn conditions() {
        let interp = fixtures::cd().interp().clone();
        let iszero1 = CondTerm::pred_is("iszero", DataTerm::flex(MEM), Bit::One);
        assert_eq!(eval_cond(&interp, &Valuation::single(MEM, v(0)), &iszero1).unwrap(), Bit::One);
        assert_eq!(eval_cond(&interp, &Valuation::single(MEM, v(2)), &CondTerm::True).unwrap(), Bit::One);
        let both = CondTerm::And(Box::new(iszero1.clone()), Box::new(CondTerm::True));
        assert_eq!(eval_cond(&interp, &Valuation::single(MEM, v(2)), &both).unwrap(), Bit::Zero);
        assert_eq!(eval_cond(&interp, &Valuation::default(), &iszero1), Err(ProcError::OpenCondition(MEM.into())));
    }

    #[test]
    fn countdown_normal_forms() {
        let cd = fixtures::cd();
        let p = graph_to_process(cd.graph());
        let spec = Arc::new(p.spec.clone());
        let interp = cd.interp();

        let d = head_normal_form(interp, &Valuation::single(MEM, v(2)), &p.epsilon, &spec).unwrap();
        assert_eq!(d.result, Hnf::Terminated);
        check_derivation(interp, &Valuation::single(MEM, v(2)), &p.epsilon, &spec, &d).unwrap();

        let d = head_normal_form(interp, &Valuation::single(MEM, v(2)), "X", &spec).unwrap();
        assert_eq!(
            d.result,
            Hnf::Step {
                action: Atom::Assign { var: MEM.into(), value: v(2) },
                valuation: Valuation::single(MEM, v(2)),
                next: "X_c".into()
            }
        );
        let axioms: Vec<Axiom> = d.log.iter().map(|s| s.axiom).collect();
        assert_eq!(axioms, vec![Axiom::RDP, Axiom::V5, Axiom::GC1, Axiom::V3, Axiom::IMP1]);
        check_derivation(interp, &Valuation::single(MEM, v(2)), "X", &spec, &d).unwrap();

        let d = head_normal_form(interp, &Valuation::single(MEM, v(0)), "X_c", &spec).unwrap();
        assert_eq!(
            d.result,
            Hnf::Step {
                action: Atom::Assign { var: MEM.into(), value: v(0) },
                valuation: Valuation::single(MEM, v(0)),
                next: "X_h".into()
            }
        );
        assert!(d.log.iter().any(|s| s.axiom == Axiom::GC2));
        assert!(d.log.iter().any(|s| s.axiom == Axiom::A6));
        check_derivation(interp, &Valuation::single(MEM, v(0)), "X_c", &spec, &d).unwrap();
    }

    #[test]
    fn deadlock_and_ambiguity() {
        let interp = fixtures::cd().interp().clone();
        let mut eqs = indexmap::IndexMap::new();
        eqs.insert("D".to_string(), ProcTerm::Deadlock);
        let both = ProcTerm::Alt(vec![
            ProcTerm::guard(CondTerm::True, ProcTerm::Empty),
            ProcTerm::guard(CondTerm::True, ProcTerm::seq(ProcTerm::Action("a".into()), ProcTerm::var("D"))),
        ]);
        eqs.insert("B".to_string(), both);
        let spec = Arc::new(LinearSpec::new(eqs).unwrap());
        let rho = Valuation::single(MEM, v(0));
        let d = head_normal_form(&interp, &rho, "D", &spec).unwrap();
        assert_eq!(d.result, Hnf::Stuck);
        check_derivation(&interp, &rho, "D", &spec, &d).unwrap();
        assert!(matches!(head_normal_form(&interp, &rho, "B", &spec), Err(ProcError::AmbiguousGuards { .. })));
    }

    #[test]
    fn tampered_log_is_rejected() {
        let cd = fixtures::cd();
        let p = graph_to_process(cd.graph());
        let spec = Arc::new(p.spec.clone());
        let rho = Valuation::single(MEM, v(1));
        let mut d = head_normal_form(cd.interp(), &rho, "X_c", &spec).unwrap();
        d.log.retain(|s| s.axiom != Axiom::IMP2);
        assert!(check_derivation(cd.interp(), &rho, "X_c", &spec, &d).is_err());
    }
}
