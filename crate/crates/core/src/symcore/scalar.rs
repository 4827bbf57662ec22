//! Exact rational / binary64 scalars sharing one arithmetic surface.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Numeric mode of a [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    #[serde(rename = "float")]
    Float64,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float64 => f.write_str("float"),
        }
    }
}

/// A real quantity, either an exact rational in lowest terms or a binary64 float.
///
/// Operators between values of different modes panic; the public entry points
/// reject mixed inputs up front with [`Error::MixedMode`], so reaching the panic
/// means an internal bug. Use the `checked_*` methods when mixing is possible.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float64 => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        Self::from_int(1, mode)
    }

    pub fn from_int(v: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(v))),
            Mode::Float64 => Scalar::Float(v as f64),
        }
    }

    pub fn from_bigint(v: BigInt, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(v)),
            Mode::Float64 => Scalar::Float(v.to_f64().unwrap_or(f64::NAN)),
        }
    }

    /// Exact `p/q`. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float64,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(v) => *v,
        }
    }

    /// Explicit conversion into `mode`; exact to float rounds, float to exact
    /// takes the binary value verbatim.
    pub fn to_mode(&self, mode: Mode) -> Self {
        match (self, mode) {
            (Scalar::Exact(_), Mode::Exact) | (Scalar::Float(_), Mode::Float64) => self.clone(),
            (Scalar::Exact(r), Mode::Float64) => Scalar::Float(r.to_f64().unwrap_or(f64::NAN)),
            (Scalar::Float(v), Mode::Exact) => Scalar::Exact(
                BigRational::from_float(*v).unwrap_or_else(BigRational::zero),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Float(v) => {
                if *v == 0.0 {
                    0
                } else if *v > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(v) => Scalar::Float(v.abs()),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(num_traits::pow(r.clone(), exp as usize)),
            Scalar::Float(v) => Scalar::Float(v.powi(exp as i32)),
        }
    }

    pub fn ensure_same_mode(&self, other: &Scalar) -> Result<()> {
        if self.mode() == other.mode() {
            Ok(())
        } else {
            Err(Error::MixedMode(format!(
                "{} ({}) with {} ({})",
                self,
                self.mode(),
                other,
                other.mode()
            )))
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.ensure_same_mode(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.ensure_same_mode(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.ensure_same_mode(rhs)?;
        Ok(self * rhs)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.ensure_same_mode(rhs)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    pub fn checked_cmp(&self, rhs: &Scalar) -> Result<Ordering> {
        self.ensure_same_mode(rhs)?;
        self.partial_cmp(rhs)
            .ok_or_else(|| Error::Precondition(format!("cannot order {self} and {rhs}")))
    }

    /// Parses a scalar in the given mode.
    ///
    /// Exact mode accepts `p` or `p/q` with an optional sign and rejects
    /// decimals. Float mode additionally accepts anything `f64` parses.
    pub fn parse(input: &str, mode: Mode) -> Result<Scalar> {
        let s = input.trim().replace('\u{2212}', "-");
        let s = s.strip_prefix('+').unwrap_or(&s);
        if s.is_empty() {
            return Err(Error::parse("rational", input, "empty"));
        }
        match mode {
            Mode::Exact => {
                if s.contains(['.', 'e', 'E']) {
                    return Err(Error::parse(
                        "rational",
                        input,
                        "decimals are not accepted in exact mode; write p/q",
                    ));
                }
                let r = parse_rational(s).map_err(|e| Error::parse("rational", input, e))?;
                Ok(Scalar::Exact(r))
            }
            Mode::Float64 => {
                if let Ok(v) = s.parse::<f64>() {
                    return Ok(Scalar::Float(v));
                }
                let r = parse_rational(s).map_err(|e| Error::parse("number", input, e))?;
                Ok(Scalar::Float(r.to_f64().unwrap_or(f64::NAN)))
            }
        }
    }
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|e| e.to_string())?;
            let q = BigInt::from_str(q.trim()).map_err(|e| e.to_string())?;
            if q.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(p, q))
        }
        None => BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|e| e.to_string()),
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(v)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // BigRational prints "p" when the denominator is one, "p/q" otherwise.
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(v) => write!(f, "{v:?}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Scalar::parse(&s, Mode::Exact).map_err(serde::de::Error::custom)
    }
}

fn mixed(op: &str, a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed-mode {op}: {a} ({}) and {b} ({})", a.mode(), b.mode())
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a $op b),
                    _ => mixed(stringify!($method), self, rhs),
                }
            }
        }

        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                &self $op &rhs
            }
        }

        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                &self $op rhs
            }
        }

        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self $op &rhs
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
