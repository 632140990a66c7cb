use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::value::Value;

/// Enumeration cap applied when no explicit cap is given.
pub const DEFAULT_EXTENT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainRole {
    Main,
    Input,
    Output,
}

impl DomainRole {
    pub fn keyword(self) -> &'static str {
        match self {
            DomainRole::Main => "main",
            DomainRole::Input => "input",
            DomainRole::Output => "output",
        }
    }
}

impl fmt::Display for DomainRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extent {
    /// Explicit, duplicate-free list kept in sorted order.
    Finite(Vec<Value>),
    /// Per-component inclusive ranges.
    Boxed(Vec<(i64, i64)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainDecl {
    pub role: DomainRole,
    pub arity: usize,
    pub extent: Extent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("{role} domain: arity must be at least 1")]
    ZeroArity { role: DomainRole },
    #[error("{role} domain: value {value} has arity {found}, expected {expected}")]
    ValueArity { role: DomainRole, value: Value, expected: usize, found: usize },
    #[error("{role} domain: duplicate value {value}")]
    Duplicate { role: DomainRole, value: Value },
    #[error("{role} domain: empty range {lo}..{hi} for component {component}")]
    EmptyRange { role: DomainRole, component: usize, lo: i64, hi: i64 },
    #[error("{role} domain: {ranges} ranges given for arity {arity}")]
    RangeCount { role: DomainRole, ranges: usize, arity: usize },
    #[error("{role} domain has {size} values, above the cap of {cap}")]
    ExtentTooLarge { role: DomainRole, size: u128, cap: usize },
}

impl DomainDecl {
    pub fn finite(role: DomainRole, arity: usize, values: Vec<Value>) -> Result<Self, DomainError> {
        if arity == 0 {
            return Err(DomainError::ZeroArity { role });
        }
        let mut seen = BTreeSet::new();
        for v in &values {
            if v.arity() != arity {
                return Err(DomainError::ValueArity { role, value: v.clone(), expected: arity, found: v.arity() });
            }
            if !seen.insert(v.clone()) {
                return Err(DomainError::Duplicate { role, value: v.clone() });
            }
        }
        Ok(DomainDecl { role, arity, extent: Extent::Finite(seen.into_iter().collect()) })
    }

    pub fn boxed(role: DomainRole, ranges: Vec<(i64, i64)>) -> Result<Self, DomainError> {
        if ranges.is_empty() {
            return Err(DomainError::ZeroArity { role });
        }
        for (component, &(lo, hi)) in ranges.iter().enumerate() {
            if lo > hi {
                return Err(DomainError::EmptyRange { role, component, lo, hi });
            }
        }
        Ok(DomainDecl { role, arity: ranges.len(), extent: Extent::Boxed(ranges) })
    }

    pub fn size(&self) -> u128 {
        match &self.extent {
            Extent::Finite(vs) => vs.len() as u128,
            Extent::Boxed(rs) => rs
                .iter()
                .map(|&(lo, hi)| (hi as i128 - lo as i128 + 1) as u128)
                .fold(1u128, |acc, n| acc.saturating_mul(n)),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        if v.arity() != self.arity {
            return false;
        }
        match &self.extent {
            Extent::Finite(vs) => vs.binary_search(v).is_ok(),
            Extent::Boxed(rs) => rs.iter().zip(v.components()).all(|(&(lo, hi), &c)| lo <= c && c <= hi),
        }
    }

    /// All values in lexicographic order, refusing extents above `cap`.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Value>, DomainError> {
        let size = self.size();
        if size > cap as u128 {
            return Err(DomainError::ExtentTooLarge { role: self.role, size, cap });
        }
        Ok(match &self.extent {
            Extent::Finite(vs) => vs.clone(),
            Extent::Boxed(rs) => {
                let mut out = Vec::with_capacity(size as usize);
                let mut cur: Vec<i64> = rs.iter().map(|r| r.0).collect();
                loop {
                    out.push(Value(cur.clone()));
                    // odometer increment, last component fastest
                    let mut i = rs.len();
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        if cur[i] < rs[i].1 {
                            cur[i] += 1;
                            break;
                        }
                        cur[i] = rs[i].0;
                    }
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(xs: &[&[i64]]) -> Vec<Value> {
        xs.iter().map(|x| Value(x.to_vec())).collect()
    }

    #[test]
    fn boxed_arity_one() {
        let d = DomainDecl::boxed(DomainRole::Main, vec![(0, 3)]).unwrap();
        assert_eq!(d.enumerate(DEFAULT_EXTENT_CAP).unwrap(), vals(&[&[0], &[1], &[2], &[3]]));
    }

    #[test]
    fn finite_is_sorted() {
        let d = DomainDecl::finite(DomainRole::Input, 2, vals(&[&[2, 1], &[0, 0]])).unwrap();
        assert_eq!(d.enumerate(10).unwrap(), vals(&[&[0, 0], &[2, 1]]));
        assert!(d.contains(&Value(vec![2, 1])));
        assert!(!d.contains(&Value(vec![1, 2])));
    }

    #[test]
    fn boxed_lexicographic() {
        let d = DomainDecl::boxed(DomainRole::Main, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(d.enumerate(10).unwrap(), vals(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
    }

    #[test]
    fn rejects_bad_extents() {
        assert!(matches!(
            DomainDecl::finite(DomainRole::Main, 1, vals(&[&[1], &[1]])),
            Err(DomainError::Duplicate { .. })
        ));
        assert!(matches!(DomainDecl::boxed(DomainRole::Main, vec![(3, 0)]), Err(DomainError::EmptyRange { .. })));
        let big = DomainDecl::boxed(DomainRole::Main, vec![(0, 999), (0, 999), (0, 9)]).unwrap();
        assert!(matches!(big.enumerate(DEFAULT_EXTENT_CAP), Err(DomainError::ExtentTooLarge { .. })));
    }
}
