//! The combined operators built from consecutive symmetric means:
//!
//! * two-shift `S_k = E_k + (α+β) E_{k-1} + αβ E_{k-2}`
//! * quadratic-coefficient `S'_k = E_k + a E_{k-1} + b E_{k-2}`
//! * binomial `S_{k;s} = Σ_{i=0..s} C(s,i) α^i E_{k-i}`
//!
//! Every operator accepts any integer `k`; `E_j` outside `0..=n` is zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symcore::{binomial_scalar, shift_vector, sigma_all, Mode, Scalar, SigmaTable, SymPoint};

/// Which operator family to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    TwoShift { alpha: Scalar, beta: Scalar },
    #[serde(rename = "quad")]
    QuadCoef { a: Scalar, b: Scalar },
    Binomial { alpha: Scalar, s: u32 },
}

impl OperatorSpec {
    pub fn two_shift(alpha: Scalar, beta: Scalar) -> Result<Self> {
        let spec = OperatorSpec::TwoShift { alpha, beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn quad(a: Scalar, b: Scalar) -> Result<Self> {
        let spec = OperatorSpec::QuadCoef { a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn binomial(alpha: Scalar, s: u32) -> Result<Self> {
        let spec = OperatorSpec::Binomial { alpha, s };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks `s >= 1` and that all parameters share one mode.
    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorSpec::TwoShift { alpha, beta } => alpha.ensure_same_mode(beta),
            OperatorSpec::QuadCoef { a, b } => a.ensure_same_mode(b),
            OperatorSpec::Binomial { s, .. } if *s == 0 => Err(Error::index("s", 0, "s >= 1")),
            OperatorSpec::Binomial { .. } => Ok(()),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            OperatorSpec::TwoShift { alpha, .. } | OperatorSpec::Binomial { alpha, .. } => alpha.mode(),
            OperatorSpec::QuadCoef { a, .. } => a.mode(),
        }
    }

    /// The weights `c_i` in `Σ c_i E_{k-i}`, starting with `c_0 = 1`.
    pub fn weights(&self) -> Vec<Scalar> {
        let mode = self.mode();
        match self {
            OperatorSpec::TwoShift { alpha, beta } => {
                vec![Scalar::one(mode), alpha + beta, alpha * beta]
            }
            OperatorSpec::QuadCoef { a, b } => vec![Scalar::one(mode), a.clone(), b.clone()],
            OperatorSpec::Binomial { alpha, s } => (0..=*s)
                .map(|i| binomial_scalar(*s as usize, i as i64, mode) * alpha.pow(i))
                .collect(),
        }
    }

    /// The equivalent `QuadCoef` for a two-shift spec (`a = α+β`, `b = αβ`).
    pub fn to_quad(&self) -> Option<OperatorSpec> {
        match self {
            OperatorSpec::TwoShift { alpha, beta } => Some(OperatorSpec::QuadCoef {
                a: alpha + beta,
                b: alpha * beta,
            }),
            OperatorSpec::QuadCoef { .. } => Some(self.clone()),
            OperatorSpec::Binomial { .. } => None,
        }
    }

    /// The ratio value `-α` admitted by the equality case, when the family has one:
    /// two-shift with `α = β`, or any binomial spec.
    pub fn equality_alpha(&self) -> Option<&Scalar> {
        match self {
            OperatorSpec::TwoShift { alpha, beta } if alpha == beta => Some(alpha),
            OperatorSpec::Binomial { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OperatorSpec::TwoShift { .. } => "two_shift",
            OperatorSpec::QuadCoef { .. } => "quad",
            OperatorSpec::Binomial { .. } => "binomial",
        }
    }
}

/// Evaluates `spec` at index `k` from a precomputed table.
pub fn eval_with_table(table: &SigmaTable, spec: &OperatorSpec, k: i64) -> Scalar {
    spec.weights()
        .iter()
        .enumerate()
        .fold(Scalar::zero(table.mode()), |acc, (i, w)| acc + w * &table.e(k - i as i64))
}

pub fn eval_operator(x: &SymPoint, spec: &OperatorSpec, k: i64) -> Result<Scalar> {
    check_modes(x, spec)?;
    Ok(eval_with_table(&sigma_all(x), spec, k))
}

pub(crate) fn check_modes(x: &SymPoint, spec: &OperatorSpec) -> Result<()> {
    spec.validate()?;
    if x.mode() != spec.mode() {
        return Err(Error::MixedMode(format!(
            "point is {} but operator parameters are {}",
            x.mode(),
            spec.mode()
        )));
    }
    Ok(())
}

/// `S_k = E_k + (α+β) E_{k-1} + αβ E_{k-2}`.
pub fn eval_two_shift(x: &SymPoint, alpha: &Scalar, beta: &Scalar, k: i64) -> Result<Scalar> {
    eval_operator(x, &OperatorSpec::two_shift(alpha.clone(), beta.clone())?, k)
}

/// `S'_k = E_k + a E_{k-1} + b E_{k-2}`.
pub fn eval_quad(x: &SymPoint, a: &Scalar, b: &Scalar, k: i64) -> Result<Scalar> {
    eval_operator(x, &OperatorSpec::quad(a.clone(), b.clone())?, k)
}

/// `S_{k;s} = Σ_{i=0..s} C(s,i) α^i E_{k-i}`.
pub fn eval_binomial(x: &SymPoint, alpha: &Scalar, s: u32, k: i64) -> Result<Scalar> {
    eval_operator(x, &OperatorSpec::binomial(alpha.clone(), s)?, k)
}

/// Root structure of `t² + a t + b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadRootClass {
    /// Roots `-α` and `-β`, with `α <= β`.
    RealRoots { alpha: Scalar, beta: Scalar },
    /// Real but irrational roots; only produced in exact mode.
    RealIrrational { discriminant: Scalar },
    /// Roots `-c ± i d` with `c = a/2` and `d² = b - a²/4 > 0`.
    ComplexRoots { c: Scalar, d_squared: Scalar },
}

/// Relative tolerance on the discriminant in float mode.
pub const FLOAT_DISCRIMINANT_TOL: f64 = 1e-12;

pub fn classify_quadratic(a: &Scalar, b: &Scalar) -> Result<QuadRootClass> {
    a.ensure_same_mode(b)?;
    let mode = a.mode();
    let two = Scalar::from_int(2, mode);
    let four = Scalar::from_int(4, mode);
    let disc = a * a - &four * b;
    let complex = || QuadRootClass::ComplexRoots {
        c: a / &two,
        d_squared: b - &(a * a) / &four,
    };
    match &disc {
        Scalar::Exact(d) => {
            if d.is_negative() {
                return Ok(complex());
            }
            match rational_sqrt(d) {
                Some(root) => {
                    let root = Scalar::Exact(root);
                    Ok(QuadRootClass::RealRoots {
                        alpha: (a - &root) / &two,
                        beta: (a + &root) / &two,
                    })
                }
                None => Ok(QuadRootClass::RealIrrational { discriminant: disc }),
            }
        }
        Scalar::Float(d) => {
            let (af, bf) = (a.to_f64(), b.to_f64());
            let tol = FLOAT_DISCRIMINANT_TOL * (af * af).max(bf.abs());
            if *d < -tol {
                return Ok(complex());
            }
            let root = d.max(0.0).sqrt();
            let root = if *d <= tol { 0.0 } else { root };
            Ok(QuadRootClass::RealRoots {
                alpha: Scalar::Float((af - root) / 2.0),
                beta: Scalar::Float((af + root) / 2.0),
            })
        }
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let root = |v: &BigInt| {
        let s = v.sqrt();
        (&s * &s == *v).then_some(s)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

/// Checks `E_k(x + αe) = Σ_{i=0..k} C(k,i) α^{k-i} E_i(x)` for `0 <= k <= n`.
///
/// Exact mode compares literally; float mode allows a relative `1e-9`.
pub fn shift_identity_check(x: &SymPoint, alpha: &Scalar, k: i64) -> Result<bool> {
    let n = x.len() as i64;
    if k < 0 || k > n {
        return Err(Error::index("k", k, format!("0 <= k <= n = {n}")));
    }
    let mode = x.mode();
    let shifted = sigma_all(&shift_vector(x, alpha)?).e(k);
    let table = sigma_all(x);
    let expanded = (0..=k).fold(Scalar::zero(mode), |acc, i| {
        acc + binomial_scalar(k as usize, i, mode) * alpha.pow((k - i) as u32) * table.e(i)
    });
    Ok(match mode {
        Mode::Exact => shifted == expanded,
        Mode::Float64 => {
            let (l, r) = (shifted.to_f64(), expanded.to_f64());
            (l - r).abs() <= 1e-9 * l.abs().max(r.abs()).max(1.0)
        }
    })
}
