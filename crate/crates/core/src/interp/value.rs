use std::fmt;

use serde::{Deserialize, Serialize};

/// A data value: a fixed-arity vector of signed integers.
///
/// Values order lexicographically, which is the enumeration order used
/// throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Value(pub Vec<i64>);

impl Value {
    pub fn new(components: impl Into<Vec<i64>>) -> Self {
        Value(components.into())
    }

    pub fn scalar(v: i64) -> Self {
        Value(vec![v])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    /// The bit carried by a predicate result `<0>` or `<1>`.
    pub fn as_bit(&self) -> Option<Bit> {
        match self.0.as_slice() {
            [0] => Some(Bit::Zero),
            [1] => Some(Bit::One),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

impl From<Vec<i64>> for Value {
    fn from(v: Vec<i64>) -> Self {
        Value(v)
    }
}

/// Edge labels of algorithm graphs and results of predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn to_value(self) -> Value {
        Value::scalar(self.as_u8() as i64)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}
