//! Interpretations: carriers plus a total expression for every symbol.

mod domain;
mod expr;
mod value;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use domain::{DomainDecl, DomainError, DomainRole, Extent, DEFAULT_EXTENT_CAP};
pub use expr::{BinOp, CmpOp, EvalError, Expr, Shape, TypeError};
pub use value::{Bit, Value};

use crate::graph::{Alphabet, FIN, INI};

/// What a symbol maps between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// `ini`: input domain to main domain.
    Ini,
    /// `fin`: main domain to output domain.
    Fin,
    /// A proper function symbol: main domain to itself.
    Operation,
    /// A predicate: main domain to `{0,1}`.
    Predicate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub main: DomainDecl,
    pub input: DomainDecl,
    pub output: DomainDecl,
    /// Bodies for every function symbol, `ini` and `fin` included.
    pub functions: IndexMap<String, Expr>,
    pub predicates: IndexMap<String, Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects an argument of arity {expected}, got {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("argument {value} of `{symbol}` is outside its domain")]
    ArgumentOutOfDomain { symbol: String, value: Value },
    #[error("`{symbol}` maps {witness} to {result}, outside its codomain")]
    DomainViolation { symbol: String, witness: Value, result: Value },
    #[error("`{symbol}` fails at {witness}: {source}")]
    Eval { symbol: String, witness: Value, source: EvalError },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// A single finding of [`check_interpretation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterpViolation {
    MissingSymbol { symbol: String },
    UndeclaredSymbol { symbol: String },
    WrongKind { symbol: String, expected: String },
    IllTyped { symbol: String, message: String },
    CodomainArity { symbol: String, expected: usize, found: usize },
    DomainViolation { symbol: String, witness: Value, result: Value },
    EvalFailure { symbol: String, witness: Value, message: String },
    NotMinimal { unreachable: Vec<Value> },
}

impl fmt::Display for InterpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpViolation::MissingSymbol { symbol } => write!(f, "no interpretation for `{symbol}`"),
            InterpViolation::UndeclaredSymbol { symbol } => {
                write!(f, "`{symbol}` is interpreted but not in the alphabet")
            }
            InterpViolation::WrongKind { symbol, expected } => {
                write!(f, "`{symbol}` must be interpreted as a {expected}")
            }
            InterpViolation::IllTyped { symbol, message } => write!(f, "`{symbol}`: {message}"),
            InterpViolation::CodomainArity { symbol, expected, found } => {
                write!(f, "`{symbol}` yields arity {found}, codomain has arity {expected}")
            }
            InterpViolation::DomainViolation { symbol, witness, result } => {
                write!(f, "domain violation: `{symbol}` maps {witness} to {result}, outside its codomain")
            }
            InterpViolation::EvalFailure { symbol, witness, message } => {
                write!(f, "`{symbol}` fails at {witness}: {message}")
            }
            InterpViolation::NotMinimal { unreachable } => {
                write!(f, "main domain is not minimal; unreachable: ")?;
                for (i, v) in unreachable.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InterpReport {
    pub violations: Vec<InterpViolation>,
    /// Forward closure of the `ini` images under the proper operations,
    /// present once the codomain checks pass.
    pub reachable: Option<Vec<Value>>,
}

impl InterpReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Interpretation {
    pub fn kind(&self, symbol: &str) -> Option<SymbolKind> {
        if self.predicates.contains_key(symbol) {
            return Some(SymbolKind::Predicate);
        }
        if !self.functions.contains_key(symbol) {
            return None;
        }
        Some(match symbol {
            INI => SymbolKind::Ini,
            FIN => SymbolKind::Fin,
            _ => SymbolKind::Operation,
        })
    }

    fn body(&self, symbol: &str) -> Option<&Expr> {
        self.functions.get(symbol).or_else(|| self.predicates.get(symbol))
    }

    pub fn domain_of(&self, kind: SymbolKind) -> &DomainDecl {
        match kind {
            SymbolKind::Ini => &self.input,
            _ => &self.main,
        }
    }

    /// Proper function symbols in declaration order.
    pub fn operations(&self) -> impl Iterator<Item = (&str, &Expr)> {
        self.functions.iter().filter(|(k, _)| k.as_str() != INI && k.as_str() != FIN).map(|(k, e)| (k.as_str(), e))
    }

    /// Evaluate `symbol` at `v`, checking the argument and result carriers.
    pub fn eval_fun(&self, symbol: &str, v: &Value) -> Result<Value, InterpError> {
        let kind = self.kind(symbol).ok_or_else(|| InterpError::UnknownSymbol(symbol.to_string()))?;
        let dom = self.domain_of(kind);
        if v.arity() != dom.arity {
            return Err(InterpError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: dom.arity,
                found: v.arity(),
            });
        }
        if !dom.contains(v) {
            return Err(InterpError::ArgumentOutOfDomain { symbol: symbol.to_string(), value: v.clone() });
        }
        let result = self.apply_unchecked(symbol, v)?;
        let inside = match kind {
            SymbolKind::Ini | SymbolKind::Operation => self.main.contains(&result),
            SymbolKind::Fin => self.output.contains(&result),
            SymbolKind::Predicate => result.as_bit().is_some(),
        };
        if !inside {
            return Err(InterpError::DomainViolation { symbol: symbol.to_string(), witness: v.clone(), result });
        }
        Ok(result)
    }

    /// Evaluate a predicate to its bit.
    pub fn eval_pred(&self, symbol: &str, v: &Value) -> Result<Bit, InterpError> {
        let r = self.eval_fun(symbol, v)?;
        Ok(r.as_bit().expect("eval_fun checks predicate codomain"))
    }

    /// Evaluate the body without carrier checks. The expression language is
    /// total, so this only fails on unknown symbols or arithmetic overflow.
    pub fn apply_unchecked(&self, symbol: &str, v: &Value) -> Result<Value, InterpError> {
        let body = self.body(symbol).ok_or_else(|| InterpError::UnknownSymbol(symbol.to_string()))?;
        body.apply(v).map_err(|source| InterpError::Eval { symbol: symbol.to_string(), witness: v.clone(), source })
    }

    /// A copy whose main domain is exactly `values`.
    pub fn with_main_domain(&self, values: Vec<Value>) -> Result<Self, DomainError> {
        let mut out = self.clone();
        out.main = DomainDecl::finite(DomainRole::Main, self.main.arity, values)?;
        Ok(out)
    }
}

/// Check totality, codomain closure and minimality of `interp` against
/// `alphabet`. Carriers above `cap` values are refused.
pub fn check_interpretation(
    alphabet: &Alphabet,
    interp: &Interpretation,
    cap: usize,
) -> Result<InterpReport, InterpError> {
    let mut report = InterpReport::default();

    for f in alphabet.functions() {
        if interp.predicates.contains_key(f) {
            report.violations.push(InterpViolation::WrongKind { symbol: f.to_string(), expected: "function".into() });
        } else if !interp.functions.contains_key(f) {
            report.violations.push(InterpViolation::MissingSymbol { symbol: f.to_string() });
        }
    }
    for p in alphabet.predicates() {
        if interp.functions.contains_key(p) {
            report.violations.push(InterpViolation::WrongKind { symbol: p.to_string(), expected: "predicate".into() });
        } else if !interp.predicates.contains_key(p) {
            report.violations.push(InterpViolation::MissingSymbol { symbol: p.to_string() });
        }
    }
    for s in interp.functions.keys().chain(interp.predicates.keys()) {
        if !alphabet.contains(s) {
            report.violations.push(InterpViolation::UndeclaredSymbol { symbol: s.clone() });
        }
    }

    // Static typing of every body against its declared signature.
    for (symbol, body) in interp.functions.iter().chain(interp.predicates.iter()) {
        let Some(kind) = interp.kind(symbol) else { continue };
        let dom = interp.domain_of(kind);
        let expected = match kind {
            SymbolKind::Ini | SymbolKind::Operation => interp.main.arity,
            SymbolKind::Fin => interp.output.arity,
            SymbolKind::Predicate => 1,
        };
        match body.shape(dom.arity) {
            Err(e) => {
                report.violations.push(InterpViolation::IllTyped { symbol: symbol.clone(), message: e.to_string() })
            }
            Ok(shape) if shape.result_arity() != expected => report.violations.push(InterpViolation::CodomainArity {
                symbol: symbol.clone(),
                expected,
                found: shape.result_arity(),
            }),
            Ok(_) => {}
        }
    }
    if !report.violations.is_empty() {
        return Ok(report);
    }

    let main = interp.main.enumerate(cap)?;
    let input = interp.input.enumerate(cap)?;

    // Codomain closure, first witness per symbol in enumeration order.
    let mut closure_ok = true;
    let check = |symbol: &str, carrier: &[Value], report: &mut InterpReport| {
        for v in carrier {
            match interp.eval_fun(symbol, v) {
                Ok(_) => {}
                Err(InterpError::DomainViolation { witness, result, .. }) => {
                    report.violations.push(InterpViolation::DomainViolation {
                        symbol: symbol.to_string(),
                        witness,
                        result,
                    });
                    return false;
                }
                Err(e) => {
                    report.violations.push(InterpViolation::EvalFailure {
                        symbol: symbol.to_string(),
                        witness: v.clone(),
                        message: e.to_string(),
                    });
                    return false;
                }
            }
        }
        true
    };
    closure_ok &= check(INI, &input, &mut report);
    for symbol in interp.functions.keys().filter(|k| k.as_str() != INI) {
        closure_ok &= check(symbol, &main, &mut report);
    }
    for symbol in interp.predicates.keys() {
        closure_ok &= check(symbol, &main, &mut report);
    }
    if !closure_ok {
        return Ok(report);
    }

    let reachable = forward_closure(interp, &input)?;
    let unreachable: Vec<Value> = main.iter().filter(|v| !reachable.contains(*v)).cloned().collect();
    if !unreachable.is_empty() {
        report.violations.push(InterpViolation::NotMinimal { unreachable });
    }
    report.reachable = Some(reachable.into_iter().collect());
    Ok(report)
}

/// Least set containing every `ini` image and closed under the proper
/// operations.
pub fn forward_closure(interp: &Interpretation, input: &[Value]) -> Result<BTreeSet<Value>, InterpError> {
    let mut seen = BTreeSet::new();
    let mut work = Vec::new();
    for d in input {
        let v = interp.eval_fun(INI, d)?;
        if seen.insert(v.clone()) {
            work.push(v);
        }
    }
    while let Some(v) = work.pop() {
        for (op, _) in interp.operations() {
            let w = interp.eval_fun(op, &v)?;
            if seen.insert(w.clone()) {
                work.push(w);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn countdown(main_hi: i64) -> (Alphabet, Interpretation) {
        let alphabet = Alphabet::new(["ini", "fin", "dec"], ["iszero"]).unwrap();
        let mut functions = IndexMap::new();
        functions.insert("ini".to_string(), Expr::Arg);
        functions.insert("fin".to_string(), Expr::Arg);
        functions.insert(
            "dec".to_string(),
            Expr::ite(
                Expr::cmp(CmpOp::Eq, Expr::Proj(0), Expr::Lit(0)),
                Expr::Tuple(vec![Expr::Lit(0)]),
                Expr::Tuple(vec![Expr::bin(BinOp::Sub, Expr::Proj(0), Expr::Lit(1))]),
            ),
        );
        let mut predicates = IndexMap::new();
        predicates.insert("iszero".to_string(), Expr::cmp(CmpOp::Eq, Expr::Proj(0), Expr::Lit(0)));
        let interp = Interpretation {
            main: DomainDecl::boxed(DomainRole::Main, vec![(0, main_hi)]).unwrap(),
            input: DomainDecl::boxed(DomainRole::Input, vec![(0, 3)]).unwrap(),
            output: DomainDecl::boxed(DomainRole::Output, vec![(0, main_hi)]).unwrap(),
            functions,
            predicates,
        };
        (alphabet, interp)
    }

    #[test]
    fn eval_examples() {
        let (_, i) = countdown(3);
        assert_eq!(i.eval_fun("dec", &Value::scalar(3)).unwrap(), Value::scalar(2));
        assert_eq!(i.eval_fun("iszero", &Value::scalar(0)).unwrap(), Value::scalar(1));
        assert!(matches!(i.eval_fun("nope", &Value::scalar(0)), Err(InterpError::UnknownSymbol(_))));
        assert!(matches!(
            i.eval_fun("dec", &Value::new(vec![1, 2])),
            Err(InterpError::ArityMismatch { expected: 1, found: 2, .. })
        ));
    }

    #[test]
    fn countdown_is_minimal() {
        let (a, i) = countdown(3);
        let r = check_interpretation(&a, &i, DEFAULT_EXTENT_CAP).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.reachable.unwrap().len(), 4);
    }

    #[test]
    fn widened_domain_reports_unreachable() {
        let (a, i) = countdown(5);
        let r = check_interpretation(&a, &i, DEFAULT_EXTENT_CAP).unwrap();
        assert_eq!(
            r.violations,
            vec![InterpViolation::NotMinimal { unreachable: vec![Value::scalar(4), Value::scalar(5)] }]
        );
        // restricting to the reported closure yields a minimal interpretation
        let restricted = i.with_main_domain(r.reachable.unwrap()).unwrap();
        let mut restricted = restricted;
        restricted.output = DomainDecl::boxed(DomainRole::Output, vec![(0, 3)]).unwrap();
        assert!(check_interpretation(&a, &restricted, DEFAULT_EXTENT_CAP).unwrap().is_ok());
    }

    #[test]
    fn predicate_escaping_bits() {
        let (a, mut i) = countdown(3);
        i.predicates.insert("iszero".into(), Expr::bin(BinOp::Add, Expr::Proj(0), Expr::Lit(1)));
        let r = check_interpretation(&a, &i, DEFAULT_EXTENT_CAP).unwrap();
        assert_eq!(
            r.violations,
            vec![InterpViolation::DomainViolation {
                symbol: "iszero".into(),
                witness: Value::scalar(1),
                result: Value::scalar(2),
            }]
        );
    }

    #[test]
    fn missing_and_extra_symbols() {
        let (a, mut i) = countdown(3);
        i.functions.shift_remove("dec");
        i.predicates.insert("extra".into(), Expr::Lit(0));
        let r = check_interpretation(&a, &i, DEFAULT_EXTENT_CAP).unwrap();
        assert!(r.violations.contains(&InterpViolation::MissingSymbol { symbol: "dec".into() }));
        assert!(r.violations.contains(&InterpViolation::UndeclaredSymbol { symbol: "extra".into() }));
    }

    #[test]
    fn oversized_extent_is_refused() {
        let (a, i) = countdown(3);
        assert!(matches!(
            check_interpretation(&a, &i, 2),
            Err(InterpError::Domain(DomainError::ExtentTooLarge { .. }))
        ));
    }
}
