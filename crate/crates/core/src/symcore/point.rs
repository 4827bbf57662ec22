use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{Mode, Scalar};
use crate::error::{Error, Result};

/// The argument vector `x = (x_1, ..., x_n)`; non-empty, one numeric mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPoint {
    entries: Vec<Scalar>,
}

impl SymPoint {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        let first = entries.first().ok_or(Error::EmptyPoint)?;
        for e in &entries[1..] {
            first.ensure_same_mode(e)?;
        }
        Ok(SymPoint { entries })
    }

    pub fn from_rationals(values: impl IntoIterator<Item = BigRational>) -> Result<Self> {
        Self::new(values.into_iter().map(Scalar::Exact).collect())
    }

    /// Exact point from integers. Panics on an empty slice.
    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| Scalar::from_int(v, Mode::Exact)).collect())
            .expect("non-empty integer point")
    }

    pub fn from_f64s(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Scalar::Float(v)).collect())
    }

    /// Parses a comma-separated list such as `"1,2/3,-5"`.
    pub fn parse_list(input: &str, mode: Mode) -> Result<Self> {
        let entries = input
            .split(',')
            .map(|tok| Scalar::parse(tok, mode))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// Parses a JSON array of rational strings (numbers are accepted too).
    pub fn from_json(input: &str, mode: Mode) -> Result<Self> {
        let raw: Vec<serde_json::Value> =
            serde_json::from_str(input).map_err(|e| Error::parse("point", input, e))?;
        let entries = raw
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => Scalar::parse(s, mode),
                serde_json::Value::Number(n) => Scalar::parse(&n.to_string(), mode),
                other => Err(Error::parse("point", &other.to_string(), "expected a string or number")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.entries[0].mode()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scalar> {
        self.entries.iter()
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn ensure_mode(&self, s: &Scalar) -> Result<()> {
        self.entries[0].ensure_same_mode(s)
    }

    pub fn require_exact(&self, what: &'static str) -> Result<()> {
        match self.mode() {
            Mode::Exact => Ok(()),
            Mode::Float64 => Err(Error::ExactRequired(what)),
        }
    }

    pub fn to_rationals(&self) -> Option<Vec<BigRational>> {
        self.entries.iter().map(|s| s.as_rational().cloned()).collect()
    }

    pub fn to_mode(&self, mode: Mode) -> SymPoint {
        SymPoint {
            entries: self.entries.iter().map(|s| s.to_mode(mode)).collect(),
        }
    }

    pub fn all_equal(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for SymPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for SymPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<Scalar>::deserialize(deserializer)?;
        SymPoint::new(entries).map_err(serde::de::Error::custom)
    }
}
