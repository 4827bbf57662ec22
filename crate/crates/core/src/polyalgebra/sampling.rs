//! Randomized identity testing at exact rational points. One disagreement
//! refutes an identity; agreement on every trial is probabilistic evidence.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::binom_q;
use crate::error::{Error, Result};
use crate::operators::{eval_binomial, eval_two_shift};
use crate::rng::{rational_in, stream_id, trial_rng};
use crate::symcore::{shift_vector, sigma_all, Scalar, SymPoint};

/// Sample numerators are drawn from `[-SAMPLE_NUM_MAX, SAMPLE_NUM_MAX]`.
pub const SAMPLE_NUM_MAX: i64 = 1_000_000;
/// Sample denominators are drawn from `[1, SAMPLE_DEN_MAX]`.
pub const SAMPLE_DEN_MAX: i64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityId {
    Lemma21,
    #[serde(rename = "sos5")]
    SosN5,
    Eq32,
    Eq33,
    Shift,
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma21" => Ok(IdentityId::Lemma21),
            "sos5" => Ok(IdentityId::SosN5),
            "eq32" => Ok(IdentityId::Eq32),
            "eq33" => Ok(IdentityId::Eq33),
            "shift" => Ok(IdentityId::Shift),
            other => Err(Error::UnknownIdentity(other.to_string())),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityId::Lemma21 => "lemma21",
            IdentityId::SosN5 => "sos5",
            IdentityId::Eq32 => "eq32",
            IdentityId::Eq33 => "eq33",
            IdentityId::Shift => "shift",
        })
    }
}

fn exact(s: Scalar) -> BigRational {
    s.as_rational().cloned().expect("exact evaluation")
}

fn point(coords: &[BigRational]) -> SymPoint {
    SymPoint::from_rationals(coords.iter().cloned()).expect("non-empty sample point")
}

fn pairwise_square_sum(z: &[BigRational], w: &[BigRational]) -> BigRational {
    let n = z.len();
    let mut acc = BigRational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let d = &z[i] - &z[j];
            let mut term = &d * &d;
            for (l, wl) in w.iter().enumerate() {
                if l != i && l != j {
                    term *= wl * wl;
                }
            }
            acc += term;
        }
    }
    acc
}

fn mean_gap(x: &SymPoint, k: i64) -> BigRational {
    let t = sigma_all(x);
    exact(t.e(k) * t.e(k) - t.e(k - 1) * t.e(k + 1))
}

impl IdentityId {
    /// Number of coordinates of a sample point for index `k`.
    pub fn dimension(&self, k: i64) -> usize {
        match self {
            IdentityId::Lemma21 | IdentityId::SosN5 => 6,
            IdentityId::Eq32 => (k + 1) as usize,
            IdentityId::Eq33 | IdentityId::Shift => (k + 2) as usize,
        }
    }

    pub fn check_index(&self, k: i64) -> Result<()> {
        let min = match self {
            IdentityId::Lemma21 | IdentityId::SosN5 => return Ok(()),
            IdentityId::Eq32 => 1,
            IdentityId::Eq33 => 2,
            IdentityId::Shift => 0,
        };
        if k < min {
            return Err(Error::index("k", k, format!("k >= {min} for {self}")));
        }
        Ok(())
    }

    /// Left-hand side at `p`, evaluated through the operator definitions.
    pub fn lhs(&self, k: i64, p: &[BigRational]) -> BigRational {
        match self {
            IdentityId::Lemma21 => {
                let z = point(&p[..4]);
                let (a, b) = (Scalar::Exact(p[4].clone()), Scalar::Exact(p[5].clone()));
                let s = |j| exact(eval_two_shift(&z, &a, &b, j).expect("exact two-shift"));
                (s(3) * s(3) - s(2) * s(4)) * BigRational::from_integer(576.into())
            }
            IdentityId::SosN5 => {
                let z = point(&p[..5]);
                let a = Scalar::Exact(p[5].clone());
                let s = |j| exact(eval_binomial(&z, &a, 3, j).expect("exact binomial"));
                (s(4) * s(4) - s(3) * s(5)) * BigRational::from_integer(100.into())
            }
            IdentityId::Eq32 => {
                let n = k + 1;
                mean_gap(&point(p), k) * BigRational::from_integer((k * n * n).into())
            }
            IdentityId::Eq33 => {
                let n = (k + 1) as usize;
                let z = point(&p[..n]);
                let a = Scalar::Exact(p[n].clone());
                let s = |j| exact(eval_binomial(&z, &a, (k - 1) as u32, j).expect("exact binomial"));
                s(k) * s(k) - s(k - 1) * s(k + 1)
            }
            IdentityId::Shift => {
                let n = (k + 1) as usize;
                let shifted = shift_vector(&point(&p[..n]), &Scalar::Exact(p[n].clone())).expect("exact shift");
                exact(sigma_all(&shifted).e(k))
            }
        }
    }

    /// Right-hand side at `p`, evaluated from its closed form.
    pub fn rhs(&self, k: i64, p: &[BigRational]) -> BigRational {
        match self {
            IdentityId::Lemma21 => {
                let (z, a, b) = (&p[..4], &p[4], &p[5]);
                let mut squares = BigRational::zero();
                for i in 0..4 {
                    for j in i + 1..4 {
                        let rest: Vec<usize> = (0..4).filter(|&l| l != i && l != j).collect();
                        let (u, v) = (&z[rest[0]], &z[rest[1]]);
                        let br = (u + a) * (v + b) + (v + a) * (u + b);
                        let t = (&z[i] - &z[j]) * br;
                        squares += &t * &t;
                    }
                }
                let mut cross = BigRational::zero();
                for (w, x, y, q) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
                    let t = (&z[w] - &z[x]) * (&z[y] - &z[q]) * (a - b);
                    cross += &t * &t;
                }
                squares * BigRational::from_integer(3.into()) + cross * BigRational::from_integer(2.into())
            }
            IdentityId::SosN5 => {
                let shifted: Vec<BigRational> = p[..5].iter().map(|z| z + &p[5]).collect();
                pairwise_square_sum(&p[..5], &shifted)
            }
            IdentityId::Eq32 => pairwise_square_sum(p, p),
            IdentityId::Eq33 => {
                let n = (k + 1) as usize;
                let shifted: Vec<BigRational> = p[..n].iter().map(|z| z + &p[n]).collect();
                mean_gap(&point(&shifted), k)
            }
            IdentityId::Shift => {
                let n = (k + 1) as usize;
                let t = sigma_all(&point(&p[..n]));
                let a = &p[n];
                (0..=k).fold(BigRational::zero(), |acc, i| {
                    acc + binom_q(k as usize, i as usize)
                        * num_traits::pow(a.clone(), (k - i) as usize)
                        * exact(t.e(i))
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleOutcome {
    pub trials: u64,
    /// Lowest trial index at which the sides differ.
    pub first_disagreement: Option<u64>,
}

impl SampleOutcome {
    pub fn agreed(&self) -> bool {
        self.first_disagreement.is_none()
    }
}

/// Compares `lhs` and `rhs` at `trials` points of `dim` coordinates. Trial `t`
/// draws its point from `trial_rng(seed, stream, t)`, so the outcome does
/// not depend on how trials are scheduled.
pub fn sample_identity<L, R>(dim: usize, trials: u64, seed: u64, stream: u64, lhs: L, rhs: R) -> SampleOutcome
where
    L: Fn(&[BigRational]) -> BigRational + Sync,
    R: Fn(&[BigRational]) -> BigRational + Sync,
{
    let first_disagreement = (0..trials).into_par_iter().find_first(|&t| {
        let mut rng = trial_rng(seed, stream, t);
        let p: Vec<BigRational> = (0..dim)
            .map(|_| rational_in(&mut rng, -SAMPLE_NUM_MAX..=SAMPLE_NUM_MAX, 1..=SAMPLE_DEN_MAX))
            .collect();
        lhs(&p) != rhs(&p)
    });
    SampleOutcome {
        trials,
        first_disagreement,
    }
}

pub fn identity_sample_outcome(id: IdentityId, k: i64, trials: u64, seed: u64) -> Result<SampleOutcome> {
    id.check_index(k)?;
    let stream = stream_id(&id.to_string()) ^ (k as u64);
    Ok(sample_identity(
        id.dimension(k),
        trials,
        seed,
        stream,
        |p| id.lhs(k, p),
        |p| id.rhs(k, p),
    ))
}

/// True iff both sides of `id` agree at every sampled point.
pub fn identity_sample(id: IdentityId, k: i64, trials: u64, seed: u64) -> Result<bool> {
    Ok(identity_sample_outcome(id, k, trials, seed)?.agreed())
}
