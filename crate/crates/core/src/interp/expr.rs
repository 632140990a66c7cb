//! A small total expression language over one vector argument `x`.
//!
//! Every operator is total: division and remainder by zero yield 0, and the
//! only runtime failure is signed overflow, which is reported rather than
//! wrapped.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expr {
    Lit(i64),
    /// The whole argument vector.
    Arg,
    /// Component projection `x[i]`.
    Proj(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Tuple(Vec<Expr>),
}

/// Static shape of an expression result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Scalar,
    Vector(usize),
}

impl Shape {
    /// Arity of the value a function body with this shape produces.
    pub fn result_arity(self) -> usize {
        match self {
            Shape::Scalar => 1,
            Shape::Vector(n) => n,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Scalar => f.write_str("scalar"),
            Shape::Vector(n) => write!(f, "vector of arity {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("projection x[{index}] out of range for argument arity {arity}")]
    ProjectionOutOfRange { index: usize, arity: usize },
    #[error("{op} expects scalar operands, found {found}")]
    NotScalar { op: &'static str, found: Shape },
    #[error("comparison operands have different shapes ({left} vs {right})")]
    CmpShape { left: Shape, right: Shape },
    #[error("if-branches have different shapes ({then} vs {otherwise})")]
    BranchShape { then: Shape, otherwise: Shape },
    #[error("empty vector constructor")]
    EmptyTuple,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("integer overflow")]
    Overflow,
    #[error("argument has arity {found}, expected {expected}")]
    Arity { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Val {
    Int(i64),
    Vec(Vec<i64>),
}

impl Val {
    fn int(self) -> i64 {
        match self {
            Val::Int(i) => i,
            // type checking rules this out; a 1-vector is treated as its component
            Val::Vec(v) => v.first().copied().unwrap_or(0),
        }
    }
}

impl Expr {
    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn cmp(op: CmpOp, a: Expr, b: Expr) -> Expr {
        Expr::Cmp(op, Box::new(a), Box::new(b))
    }

    pub fn ite(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::If(Box::new(c), Box::new(t), Box::new(e))
    }

    /// `<c0, c1, ...>` with literal components.
    pub fn constant(v: &Value) -> Expr {
        Expr::Tuple(v.0.iter().map(|&c| Expr::Lit(c)).collect())
    }

    /// Infer the result shape for an argument of the given arity.
    pub fn shape(&self, arity: usize) -> Result<Shape, TypeError> {
        match self {
            Expr::Lit(_) => Ok(Shape::Scalar),
            Expr::Arg => Ok(Shape::Vector(arity)),
            Expr::Proj(i) => {
                if *i < arity {
                    Ok(Shape::Scalar)
                } else {
                    Err(TypeError::ProjectionOutOfRange { index: *i, arity })
                }
            }
            Expr::Neg(e) => scalar(e.shape(arity)?, "negation"),
            Expr::Bin(op, a, b) => {
                let name = op.symbol();
                scalar(a.shape(arity)?, name)?;
                scalar(b.shape(arity)?, name)
            }
            Expr::Cmp(op, a, b) => {
                let (l, r) = (a.shape(arity)?, b.shape(arity)?);
                match op {
                    CmpOp::Eq | CmpOp::Ne => {
                        if l != r {
                            return Err(TypeError::CmpShape { left: l, right: r });
                        }
                    }
                    _ => {
                        scalar(l, op.symbol())?;
                        scalar(r, op.symbol())?;
                    }
                }
                Ok(Shape::Scalar)
            }
            Expr::If(c, t, e) => {
                scalar(c.shape(arity)?, "if-condition")?;
                let (ts, es) = (t.shape(arity)?, e.shape(arity)?);
                if ts != es {
                    return Err(TypeError::BranchShape { then: ts, otherwise: es });
                }
                Ok(ts)
            }
            Expr::Tuple(items) => {
                if items.is_empty() {
                    return Err(TypeError::EmptyTuple);
                }
                for item in items {
                    scalar(item.shape(arity)?, "vector component")?;
                }
                Ok(Shape::Vector(items.len()))
            }
        }
    }

    /// Evaluate as a function body: scalar results become arity-1 values.
    pub fn apply(&self, x: &Value) -> Result<Value, EvalError> {
        Ok(match self.eval(x.components())? {
            Val::Int(i) => Value(vec![i]),
            Val::Vec(v) => Value(v),
        })
    }

    fn eval(&self, x: &[i64]) -> Result<Val, EvalError> {
        Ok(match self {
            Expr::Lit(i) => Val::Int(*i),
            Expr::Arg => Val::Vec(x.to_vec()),
            Expr::Proj(i) => Val::Int(*x.get(*i).ok_or(EvalError::Arity { expected: i + 1, found: x.len() })?),
            Expr::Neg(e) => Val::Int(e.eval(x)?.int().checked_neg().ok_or(EvalError::Overflow)?),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x)?.int(), b.eval(x)?.int());
                Val::Int(op.apply(a, b)?)
            }
            Expr::Cmp(op, a, b) => {
                let (a, b) = (a.eval(x)?, b.eval(x)?);
                let holds = match op {
                    CmpOp::Eq => a == b,
                    CmpOp::Ne => a != b,
                    CmpOp::Lt => a.int() < b.int(),
                    CmpOp::Le => a.int() <= b.int(),
                    CmpOp::Gt => a.int() > b.int(),
                    CmpOp::Ge => a.int() >= b.int(),
                };
                Val::Int(holds as i64)
            }
            Expr::If(c, t, e) => {
                if c.eval(x)?.int() != 0 {
                    t.eval(x)?
                } else {
                    e.eval(x)?
                }
            }
            Expr::Tuple(items) => Val::Vec(items.iter().map(|i| i.eval(x).map(Val::int)).collect::<Result<_, _>>()?),
        })
    }
}

fn scalar(s: Shape, op: &'static str) -> Result<Shape, TypeError> {
    match s {
        Shape::Scalar => Ok(Shape::Scalar),
        found => Err(TypeError::NotScalar { op, found }),
    }
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
        }
    }

    fn apply(self, a: i64, b: i64) -> Result<i64, EvalError> {
        let r = match self {
            BinOp::Add => a.checked_add(b),
            BinOp::Sub => a.checked_sub(b),
            BinOp::Mul => a.checked_mul(b),
            BinOp::Div if b == 0 => Some(0),
            BinOp::Div => a.checked_div(b),
            BinOp::Rem if b == 0 => Some(0),
            BinOp::Rem => Some(a.wrapping_rem(b)),
        };
        r.ok_or(EvalError::Overflow)
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 2,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 3,
        }
    }
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

// Precedence levels used by the printer: 0 if, 1 comparison, 2 additive,
// 3 multiplicative, 4 unary, 5 atoms.
impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::If(..) => 0,
            Expr::Cmp(..) => 1,
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => 4,
            Expr::Lit(i) if *i < 0 => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Lit(i) => write!(f, "{i}"),
            Expr::Arg => f.write_str("x"),
            Expr::Proj(i) => write!(f, "x[{i}]"),
            // `-3` would read back as a literal, so keep the parentheses.
            Expr::Neg(e) if matches!(**e, Expr::Lit(i) if i >= 0) => write!(f, "-({e})"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_at(f, 5)
            }
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                a.write_at(f, p)?;
                write!(f, " {} ", op.symbol())?;
                b.write_at(f, p + 1)
            }
            Expr::Cmp(op, a, b) => {
                a.write_at(f, 2)?;
                write!(f, " {} ", op.symbol())?;
                b.write_at(f, 2)
            }
            Expr::If(c, t, e) => {
                f.write_str("if ")?;
                c.write_at(f, 1)?;
                f.write_str(" then ")?;
                t.write_at(f, 1)?;
                f.write_str(" else ")?;
                e.write_at(f, 0)
            }
            Expr::Tuple(items) => {
                f.write_str("<")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    item.write_at(f, 2)?;
                }
                f.write_str(">")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec() -> Expr {
        Expr::ite(
            Expr::cmp(CmpOp::Eq, Expr::Proj(0), Expr::Lit(0)),
            Expr::Tuple(vec![Expr::Lit(0)]),
            Expr::Tuple(vec![Expr::bin(BinOp::Sub, Expr::Proj(0), Expr::Lit(1))]),
        )
    }

    #[test]
    fn saturating_decrement() {
        assert_eq!(dec().apply(&Value::scalar(3)).unwrap(), Value::scalar(2));
        assert_eq!(dec().apply(&Value::scalar(0)).unwrap(), Value::scalar(0));
        assert_eq!(dec().shape(1).unwrap(), Shape::Vector(1));
    }

    #[test]
    fn division_by_zero_is_zero() {
        let e = Expr::bin(BinOp::Div, Expr::Proj(0), Expr::Lit(0));
        assert_eq!(e.apply(&Value::scalar(7)).unwrap(), Value::scalar(0));
        let e = Expr::bin(BinOp::Rem, Expr::Proj(0), Expr::Lit(0));
        assert_eq!(e.apply(&Value::scalar(7)).unwrap(), Value::scalar(0));
        let e = Expr::bin(BinOp::Rem, Expr::Proj(0), Expr::Lit(-1));
        assert_eq!(e.apply(&Value::scalar(i64::MIN)).unwrap(), Value::scalar(0));
    }

    #[test]
    fn overflow_is_reported() {
        let e = Expr::bin(BinOp::Add, Expr::Proj(0), Expr::Lit(1));
        assert_eq!(e.apply(&Value::scalar(i64::MAX)), Err(EvalError::Overflow));
        let e = Expr::bin(BinOp::Div, Expr::Proj(0), Expr::Lit(-1));
        assert_eq!(e.apply(&Value::scalar(i64::MIN)), Err(EvalError::Overflow));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(Expr::Proj(2).shape(2), Err(TypeError::ProjectionOutOfRange { index: 2, arity: 2 })));
        let e = Expr::bin(BinOp::Add, Expr::Arg, Expr::Lit(1));
        assert!(matches!(e.shape(1), Err(TypeError::NotScalar { .. })));
        let e = Expr::ite(Expr::Lit(1), Expr::Lit(0), Expr::Arg);
        assert!(matches!(e.shape(2), Err(TypeError::BranchShape { .. })));
    }

    #[test]
    fn vector_equality() {
        let e = Expr::cmp(CmpOp::Eq, Expr::Arg, Expr::constant(&Value::new(vec![1, 2])));
        assert_eq!(e.shape(2).unwrap(), Shape::Scalar);
        assert_eq!(e.apply(&Value::new(vec![1, 2])).unwrap(), Value::scalar(1));
        assert_eq!(e.apply(&Value::new(vec![2, 1])).unwrap(), Value::scalar(0));
    }

    #[test]
    fn display_parenthesizes() {
        let e = Expr::bin(BinOp::Mul, Expr::bin(BinOp::Add, Expr::Proj(0), Expr::Lit(1)), Expr::Lit(2));
        assert_eq!(e.to_string(), "(x[0] + 1) * 2");
        assert_eq!(dec().to_string(), "if x[0] = 0 then <0> else <x[0] - 1>");
        let e = Expr::bin(BinOp::Sub, Expr::Lit(1), Expr::bin(BinOp::Sub, Expr::Lit(2), Expr::Lit(3)));
        assert_eq!(e.to_string(), "1 - (2 - 3)");
    }
}
