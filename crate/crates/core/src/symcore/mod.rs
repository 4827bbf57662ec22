//! Scalars, argument vectors and the elementary symmetric kernels.
//!
//! `σ_k(x)` is the sum of all products of `k` distinct coordinates and
//! `E_k = σ_k / C(n, k)` its normalised mean. Both vanish for `k < 0` and
//! `k > n`; `σ_0 = E_0 = 1`.

mod point;
mod scalar;

use std::ops::{Add, Mul};

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use point::SymPoint;
pub use scalar::{Mode, Scalar};

use crate::error::{Error, Result};

/// Largest `n` the subset-enumeration oracle accepts.
pub const ORACLE_MAX_N: usize = 20;

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, so acc * (n - i) is divisible by i + 1
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub(crate) fn binomial_scalar(n: usize, k: i64, mode: Mode) -> Scalar {
    Scalar::from_bigint(BigInt::from(binomial(n as u64, k)), mode)
}

/// All elementary symmetric polynomials `[σ_0, ..., σ_n]` of `items` by the
/// one-pass recurrence `e_j <- e_j + x_i * e_{j-1}` with `j` descending.
///
/// Generic over anything with by-reference `+` and `*`, so the same kernel
/// runs over rationals, floats and symbolic polynomials.
pub fn elementary_symmetric<T>(items: &[T], zero: T, one: T) -> Vec<T>
where
    T: Clone,
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let n = items.len();
    let mut e = vec![zero; n + 1];
    e[0] = one;
    for (i, x) in items.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            let term = x * &e[j - 1];
            e[j] = &e[j] + &term;
        }
    }
    e
}

/// `σ_k` and `E_k` for every `0 <= k <= n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaTable {
    pub n: usize,
    pub sigma: Vec<Scalar>,
    pub e: Vec<Scalar>,
}

impl SigmaTable {
    pub fn mode(&self) -> Mode {
        self.sigma[0].mode()
    }

    /// `σ_k`, zero outside `0..=n`.
    pub fn sigma(&self, k: i64) -> Scalar {
        self.lookup(&self.sigma, k)
    }

    /// `E_k`, zero outside `0..=n`.
    pub fn e(&self, k: i64) -> Scalar {
        self.lookup(&self.e, k)
    }

    fn lookup(&self, row: &[Scalar], k: i64) -> Scalar {
        if k < 0 || k as usize > self.n {
            Scalar::zero(self.mode())
        } else {
            row[k as usize].clone()
        }
    }
}

pub fn sigma_all(x: &SymPoint) -> SigmaTable {
    let mode = x.mode();
    let n = x.len();
    let sigma = elementary_symmetric(x.entries(), Scalar::zero(mode), Scalar::one(mode));
    let e = sigma
        .iter()
        .enumerate()
        .map(|(k, s)| s / &binomial_scalar(n, k as i64, mode))
        .collect();
    SigmaTable { n, sigma, e }
}

/// `σ_k` by explicit enumeration of all `k`-subsets. Test oracle for
/// [`sigma_all`]; refuses `n > 20`.
pub fn sigma_oracle(x: &SymPoint, k: i64) -> Result<Scalar> {
    let n = x.len();
    if n > ORACLE_MAX_N {
        return Err(Error::index("n", n as i64, format!("n <= {ORACLE_MAX_N} for enumeration")));
    }
    let mode = x.mode();
    if k < 0 || k as usize > n {
        return Ok(Scalar::zero(mode));
    }
    let subsets = || (0..n).combinations(k as usize);
    let Some(values) = x.to_rationals() else {
        let entries = x.entries();
        let total = subsets().fold(Scalar::zero(mode), |acc, subset| {
            acc + subset.iter().fold(Scalar::one(mode), |p, &i| p * &entries[i])
        });
        return Ok(total);
    };
    // Over a common denominator L every product is an integer, so the sum
    // needs no intermediate normalisation: σ_k(x) = σ_k(L x) / L^k.
    let lcm = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let total = subsets().fold(BigInt::zero(), |acc, subset| {
        acc + subset.iter().fold(BigInt::one(), |p, &i| p * &ints[i])
    });
    Ok(Scalar::Exact(BigRational::new(total, num_traits::pow(lcm, k as usize))))
}

/// `σ_k(x)` through the two-variable split
/// `σ_k = x_1 x_2 σ_{k-2}(x') + (x_1 + x_2) σ_{k-1}(x') + σ_k(x')` with
/// `x' = (x_3, ..., x_n)`.
pub fn sigma_split(x: &SymPoint, k: i64) -> Result<Scalar> {
    if x.len() < 3 {
        return Err(Error::index("n", x.len() as i64, "n >= 3"));
    }
    let e = x.entries();
    let rest = SymPoint::new(e[2..].to_vec())?;
    let t = sigma_all(&rest);
    Ok(&(&e[0] * &e[1]) * &t.sigma(k - 2) + &(&e[0] + &e[1]) * &t.sigma(k - 1) + t.sigma(k))
}

/// Membership in the open Gårding cone: `σ_m(x) > 0` for every `m = 1..=k`.
pub fn garding_member(x: &SymPoint, k: i64) -> Result<bool> {
    let n = x.len() as i64;
    if k < 1 || k > n {
        return Err(Error::index("k", k, format!("1 <= k <= n = {n}")));
    }
    let t = sigma_all(x);
    Ok((1..=k).all(|m| t.sigma(m).signum() > 0))
}

/// `x + t·(1, ..., 1)`.
pub fn shift_vector(x: &SymPoint, t: &Scalar) -> Result<SymPoint> {
    x.ensure_mode(t)?;
    SymPoint::new(x.iter().map(|v| v + t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&i| Scalar::from_int(i, Mode::Exact)).collect()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(7, 0), BigUint::one());
        assert_eq!(binomial(4, -1), BigUint::zero());
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(60, 30), BigUint::from(118264581564861424u64));
    }

    #[test]
    fn sigma_all_examples() {
        assert_eq!(sigma_all(&SymPoint::from_ints(&[2, 2, 2])).sigma, ints(&[1, 6, 12, 8]));
        assert_eq!(sigma_all(&SymPoint::from_ints(&[1, 2, 3])).sigma, ints(&[1, 6, 11, 6]));
        assert_eq!(sigma_all(&SymPoint::from_ints(&[0, 5])).sigma, ints(&[1, 5, 0]));
    }

    #[test]
    fn sigma_table_conventions() {
        let t = sigma_all(&SymPoint::from_ints(&[1, 2, 3]));
        assert_eq!(t.e(0), Scalar::one(Mode::Exact));
        assert_eq!(t.e(2), Scalar::ratio(11, 3));
        assert!(t.sigma(-1).is_zero());
        assert!(t.e(4).is_zero());
    }

    #[test]
    fn oracle_examples_and_guard() {
        let x = SymPoint::from_ints(&[1, 2, 3]);
        assert_eq!(sigma_oracle(&x, 2).unwrap(), Scalar::from_int(11, Mode::Exact));
        assert_eq!(sigma_oracle(&x, 0).unwrap(), Scalar::one(Mode::Exact));
        assert!(sigma_oracle(&x, 4).unwrap().is_zero());
        let big = SymPoint::from_ints(&[1; 21]);
        assert!(matches!(sigma_oracle(&big, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn split_examples() {
        let x = SymPoint::from_ints(&[1, 2, 3]);
        assert_eq!(sigma_split(&x, 2).unwrap(), Scalar::from_int(11, Mode::Exact));
        assert!(sigma_split(&SymPoint::from_ints(&[0, 0, 5]), 3).unwrap().is_zero());
        // Subset enumeration of (2,2,-1,-1,-1): 3 triples give -4, 6 give 2, one gives -1.
        let z0 = SymPoint::from_ints(&[2, 2, -1, -1, -1]);
        assert_eq!(sigma_split(&z0, 3).unwrap(), Scalar::from_int(-1, Mode::Exact));
        assert_eq!(sigma_oracle(&z0, 3).unwrap(), Scalar::from_int(-1, Mode::Exact));
        assert!(sigma_split(&SymPoint::from_ints(&[1, 2]), 1).is_err());
    }

    #[test]
    fn garding_examples() {
        assert!(garding_member(&SymPoint::from_ints(&[1, 1, 1]), 3).unwrap());
        assert!(garding_member(&SymPoint::from_ints(&[1, 1, -1]), 1).unwrap());
        assert!(!garding_member(&SymPoint::from_ints(&[1, 1, -1]), 2).unwrap());
        assert!(garding_member(&SymPoint::from_ints(&[1, 1, -1]), 0).is_err());
        assert!(garding_member(&SymPoint::from_ints(&[1, 1, -1]), 4).is_err());
        // boundary of the cone is excluded
        assert!(!garding_member(&SymPoint::from_ints(&[0, 1]), 2).unwrap());
    }

    #[test]
    fn shift_examples() {
        let one = Scalar::one(Mode::Exact);
        let zero = Scalar::zero(Mode::Exact);
        assert_eq!(shift_vector(&SymPoint::from_ints(&[1, 2]), &one).unwrap(), SymPoint::from_ints(&[2, 3]));
        assert_eq!(shift_vector(&SymPoint::from_ints(&[1, 2]), &zero).unwrap(), SymPoint::from_ints(&[1, 2]));
        assert_eq!(
            shift_vector(&SymPoint::from_ints(&[2, 2, -1, -1, -1]), &one).unwrap(),
            SymPoint::from_ints(&[3, 3, 0, 0, 0])
        );
        assert!(shift_vector(&SymPoint::from_ints(&[1]), &Scalar::Float(1.0)).is_err());
    }

    #[test]
    fn float_mode_table() {
        let x = SymPoint::from_f64s(&[1.0, 2.0, 3.0]).unwrap();
        let t = sigma_all(&x);
        assert_eq!(t.sigma, vec![Scalar::Float(1.0), Scalar::Float(6.0), Scalar::Float(11.0), Scalar::Float(6.0)]);
    }
}
