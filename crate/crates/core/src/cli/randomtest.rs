//! Seeded randomized checks of the main inequalities and of real-rootedness
//! under derivative reduction. Trial `t` of suite `s` draws everything from
//! `trial_rng(seed, stream_id(s), t)`, so reports are reproducible and
//! independent of thread scheduling.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::inequalities::{gap_low_k, maclaurin_chain, newton_gap};
use crate::operators::OperatorSpec;
use crate::polyalgebra::{poly_from_roots, quartic_reduction, sturm_real_roots, truncation_reduction};
use crate::rng::{rational_in, small_rational, stream_id, trial_rng};
use crate::symcore::{Scalar, SymPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem11,
    Theorem14,
    Chain,
    Lemma22,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Theorem11, Suite::Theorem14, Suite::Chain, Suite::Lemma22];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Theorem11 => "theorem11",
            Suite::Theorem14 => "theorem14",
            Suite::Chain => "chain",
            Suite::Lemma22 => "lemma22",
        }
    }

    pub fn default_n_max(&self) -> usize {
        match self {
            Suite::Theorem11 | Suite::Theorem14 => 9,
            Suite::Chain => 8,
            Suite::Lemma22 => 10,
        }
    }

    pub fn min_n_max(&self) -> usize {
        match self {
            Suite::Theorem11 => 4,
            Suite::Theorem14 => 3,
            Suite::Chain => 2,
            Suite::Lemma22 => 2,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite name, or every suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSelection {
    One(Suite),
    All,
}

impl SuiteSelection {
    pub fn suites(&self) -> Vec<Suite> {
        match self {
            SuiteSelection::One(s) => vec![*s],
            SuiteSelection::All => Suite::ALL.to_vec(),
        }
    }
}

impl FromStr for SuiteSelection {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            return Ok(SuiteSelection::All);
        }
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .map(SuiteSelection::One)
            .ok_or_else(|| format!("unknown suite {s:?} (expected theorem11, theorem14, chain, lemma22 or all)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub n_max: usize,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    /// Individual inequalities or certifications evaluated.
    pub checks: u64,
    /// Full inputs of the lowest-indexed failing trial.
    pub first_failure: Option<Value>,
}

struct Trial {
    checks: u64,
    failure: Option<Value>,
}

fn rational_scalar(rng: &mut SplitMix64) -> Scalar {
    Scalar::Exact(small_rational(rng))
}

fn nonneg_scalar(rng: &mut SplitMix64) -> Scalar {
    Scalar::Exact(rational_in(rng, 0..=1000, 1..=20))
}

fn positive_point(rng: &mut SplitMix64, n: usize) -> SymPoint {
    SymPoint::from_rationals((0..n).map(|_| rational_in(rng, 1..=1000, 1..=20))).expect("n >= 1")
}

fn random_point(rng: &mut SplitMix64, n: usize) -> SymPoint {
    SymPoint::from_rationals((0..n).map(|_| small_rational(rng))).expect("n >= 1")
}

fn newton_trial(t: u64, x: SymPoint, spec: OperatorSpec, ks: std::ops::RangeInclusive<i64>) -> Result<Trial> {
    let mut checks = 0;
    for k in ks {
        checks += 1;
        let report = newton_gap(&x, &spec, k)?;
        if report.gap.is_negative() {
            return Ok(Trial {
                checks,
                failure: Some(json!({ "trial": t, "x": x, "spec": spec, "k": k, "gap": report.gap })),
            });
        }
    }
    Ok(Trial { checks, failure: None })
}

fn theorem11(rng: &mut SplitMix64, t: u64, n_max: usize) -> Result<Trial> {
    let n = rng.random_range(4..=n_max);
    let x = random_point(rng, n);
    let spec = OperatorSpec::two_shift(rational_scalar(rng), rational_scalar(rng))?;
    newton_trial(t, x, spec, 3..=n as i64 - 1)
}

fn theorem14(rng: &mut SplitMix64, t: u64, n_max: usize) -> Result<Trial> {
    let s = rng.random_range(1..=4.min(n_max - 2));
    let n = rng.random_range(s + 2..=n_max);
    let x = random_point(rng, n);
    let spec = OperatorSpec::binomial(rational_scalar(rng), s as u32)?;
    newton_trial(t, x, spec, s as i64 + 1..=n as i64 - 1)
}

/// Positive-orthant `x` with non-negative parameters: the full chain must be
/// monotone and the low-index gaps non-negative. Even trials use the
/// two-shift operator, odd trials the binomial one.
fn chain(rng: &mut SplitMix64, t: u64, n_max: usize) -> Result<Trial> {
    let n = rng.random_range(2..=n_max);
    let x = positive_point(rng, n);
    let (spec, low_max) = if t.is_multiple_of(2) {
        (OperatorSpec::two_shift(nonneg_scalar(rng), nonneg_scalar(rng))?, 2)
    } else {
        let s = rng.random_range(1..=4usize.min(n - 1));
        (OperatorSpec::binomial(nonneg_scalar(rng), s as u32)?, s as i64)
    };
    let fail = |what: &str, k: i64, detail: Value| {
        Some(json!({ "trial": t, "check": what, "x": x, "spec": spec, "k": k, "detail": detail }))
    };
    let report = maclaurin_chain(&x, &spec, n as i64)?;
    let mut checks = 1;
    if report.monotone != Some(true) {
        let failure = fail("chain", n as i64, serde_json::to_value(&report).expect("serializable"));
        return Ok(Trial { checks, failure });
    }
    for k in 1..=low_max.min(n as i64 - 1) {
        checks += 1;
        let low = gap_low_k(&x, &spec, k)?;
        if low.nonnegative != Some(true) {
            let failure = fail("low_k_gap", k, serde_json::to_value(&low).expect("serializable"));
            return Ok(Trial { checks, failure });
        }
    }
    Ok(Trial { checks, failure: None })
}

/// Roots drawn at random; the polynomial and every derivative reduction must
/// be certified real-rooted.
fn lemma22(rng: &mut SplitMix64, t: u64, n_max: usize) -> Result<Trial> {
    let n = rng.random_range(2..=n_max);
    let x = random_point(rng, n);
    let mut polys = vec![("poly_from_roots", 0, poly_from_roots(&x)?)];
    for k in 1..n as i64 {
        polys.push(("truncation_reduction", k, truncation_reduction(&x, k)?));
        if k >= 3 {
            polys.push(("quartic_reduction", k, quartic_reduction(&x, k)?));
        }
    }
    let mut checks = 0;
    for (what, k, p) in polys {
        checks += 1;
        // A reduction that vanishes identically (all means zero) has nothing to certify.
        if p.is_zero() {
            continue;
        }
        let count = sturm_real_roots(&p)?;
        if !count.all_roots_real {
            let failure = Some(json!({
                "trial": t, "x": x, "reduction": what, "k": k, "poly": p, "sturm": count
            }));
            return Ok(Trial { checks, failure });
        }
    }
    Ok(Trial { checks, failure: None })
}

pub fn run_suite(suite: Suite, n_max: Option<usize>, trials: u64, seed: u64) -> Result<SuiteSummary> {
    let n_max = n_max.unwrap_or(suite.default_n_max());
    if n_max < suite.min_n_max() {
        return Err(Error::index(
            "n-max",
            n_max as i64,
            format!("{suite} needs n-max >= {}", suite.min_n_max()),
        ));
    }
    let stream = stream_id(suite.name());
    let outcomes: Vec<Result<Trial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, stream, t);
            match suite {
                Suite::Theorem11 => theorem11(&mut rng, t, n_max),
                Suite::Theorem14 => theorem14(&mut rng, t, n_max),
                Suite::Chain => chain(&mut rng, t, n_max),
                Suite::Lemma22 => lemma22(&mut rng, t, n_max),
            }
        })
        .collect();
    let mut summary = SuiteSummary {
        suite,
        n_max,
        trials,
        passed: 0,
        failed: 0,
        checks: 0,
        first_failure: None,
    };
    for outcome in outcomes {
        let trial = outcome?;
        summary.checks += trial.checks;
        match trial.failure {
            None => summary.passed += 1,
            Some(f) => {
                summary.failed += 1;
                summary.first_failure.get_or_insert(f);
            }
        }
    }
    Ok(summary)
}

pub fn run_selection(selection: SuiteSelection, n_max: Option<usize>, trials: u64, seed: u64) -> Result<Vec<SuiteSummary>> {
    selection
        .suites()
        .into_iter()
        .map(|suite| run_suite(suite, n_max, trials, seed))
        .collect()
}
