//! Newton-type gaps `S_k² - S_{k-1} S_{k+1}`, Maclaurin chains, the product
//! corollaries, and classification of the zero-gap cases.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{check_modes, eval_with_table, OperatorSpec};
use crate::symcore::{sigma_all, Scalar, SigmaTable, SymPoint};

/// Relative zero tolerance for gaps in float mode.
pub const FLOAT_GAP_TOL: f64 = 1e-9;

/// Why a gap is zero, or `Strict` when it is not.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "equality", rename_all = "snake_case")]
pub enum EqualityCase {
    Strict,
    AllEqual,
    BothSidesZero,
    RatioMinusAlpha { alpha: Scalar },
    ZeroUnclassified,
}

impl EqualityCase {
    pub fn is_strict(&self) -> bool {
        matches!(self, EqualityCase::Strict)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub k: i64,
    pub s_km1: Scalar,
    pub s_k: Scalar,
    pub s_kp1: Scalar,
    pub gap: Scalar,
    #[serde(flatten)]
    pub equality: EqualityCase,
}

impl GapReport {
    fn from_table(table: &SigmaTable, spec: &OperatorSpec, k: i64) -> Self {
        let s_km1 = eval_with_table(table, spec, k - 1);
        let s_k = eval_with_table(table, spec, k);
        let s_kp1 = eval_with_table(table, spec, k + 1);
        let gap = &s_k * &s_k - &s_km1 * &s_kp1;
        GapReport {
            k,
            s_km1,
            s_k,
            s_kp1,
            gap,
            equality: EqualityCase::Strict,
        }
    }

    /// `s_k² - s_{k-1} s_{k+1}` from the stored triple.
    pub fn recomputed_gap(&self) -> Scalar {
        &self.s_k * &self.s_k - &self.s_km1 * &self.s_kp1
    }

    fn tolerance_scale(&self) -> f64 {
        let sq = (self.s_k.to_f64()).powi(2);
        let prod = (self.s_km1.to_f64() * self.s_kp1.to_f64()).abs();
        1f64.max(sq).max(prod)
    }

    fn near_zero(&self, v: &Scalar) -> bool {
        match v {
            Scalar::Exact(_) => v.is_zero(),
            Scalar::Float(f) => f.abs() <= FLOAT_GAP_TOL * self.tolerance_scale(),
        }
    }

    fn near_equal(&self, a: &Scalar, b: &Scalar) -> bool {
        self.near_zero(&(a - b))
    }

    pub fn gap_is_zero(&self) -> bool {
        self.near_zero(&self.gap)
    }
}

fn check_gap_index(x: &SymPoint, k: i64) -> Result<()> {
    let n = x.len() as i64;
    if k < 1 || k > n - 1 {
        return Err(Error::index("k", k, format!("1 <= k <= n - 1 = {}", n - 1)));
    }
    Ok(())
}

/// The exact gap for the selected family together with its equality class.
/// No sign is asserted here.
pub fn newton_gap(x: &SymPoint, spec: &OperatorSpec, k: i64) -> Result<GapReport> {
    check_modes(x, spec)?;
    check_gap_index(x, k)?;
    let mut report = GapReport::from_table(&sigma_all(x), spec, k);
    report.equality = classify_equality(x, spec, &report);
    Ok(report)
}

/// Classifies a report produced from `(x, spec)`.
///
/// Zero gaps are tested in the fixed order all-equal, both-sides-zero,
/// ratio `-α`; the first match wins.
pub fn classify_equality(x: &SymPoint, spec: &OperatorSpec, report: &GapReport) -> EqualityCase {
    if !report.gap_is_zero() {
        return EqualityCase::Strict;
    }
    if x.all_equal() {
        return EqualityCase::AllEqual;
    }
    if report.near_zero(&report.s_k) && report.near_zero(&(&report.s_km1 * &report.s_kp1)) {
        return EqualityCase::BothSidesZero;
    }
    if let Some(alpha) = spec.equality_alpha() {
        let neg = -alpha;
        let nonzero = !report.s_km1.is_zero() && !report.s_k.is_zero();
        if nonzero
            && report.near_equal(&report.s_k, &(&neg * &report.s_km1))
            && report.near_equal(&report.s_kp1, &(&neg * &report.s_k))
        {
            return EqualityCase::RatioMinusAlpha { alpha: alpha.clone() };
        }
    }
    EqualityCase::ZeroUnclassified
}

fn nonneg_failure(v: &Scalar, name: impl Into<String>, out: &mut Vec<String>) {
    if v.is_negative() {
        out.push(format!("{} \u{2265} 0", name.into()));
    }
}

/// Parameter and low-index mean hypotheses shared by the chain and the
/// low-k gaps: two-shift needs `α, β, E_1, E_2 >= 0`; binomial needs
/// `α >= 0` and `E_1, ..., E_s >= 0`.
fn base_hypotheses(table: &SigmaTable, spec: &OperatorSpec) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    match spec {
        OperatorSpec::TwoShift { alpha, beta } => {
            nonneg_failure(alpha, "alpha", &mut failures);
            nonneg_failure(beta, "beta", &mut failures);
            for j in 1..=2 {
                nonneg_failure(&table.e(j), format!("E_{j}"), &mut failures);
            }
        }
        OperatorSpec::Binomial { alpha, s } => {
            nonneg_failure(alpha, "alpha", &mut failures);
            for j in 1..=*s as i64 {
                nonneg_failure(&table.e(j), format!("E_{j}"), &mut failures);
            }
        }
        OperatorSpec::QuadCoef { .. } => {
            return Err(Error::Precondition(
                "no chain or low-index theorem applies to a quad spec; use two_shift or binomial".into(),
            ))
        }
    }
    Ok(failures)
}

/// First index whose operator value the chain hypotheses require to be
/// non-negative explicitly (`S_3` for two-shift, `S_{s+1}` for binomial).
fn first_assumed_index(spec: &OperatorSpec) -> i64 {
    match spec {
        OperatorSpec::Binomial { s, .. } => *s as i64 + 1,
        _ => 3,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub k_max: i64,
    /// `S_1, ..., S_{k_max}`.
    pub values: Vec<Scalar>,
    pub hypothesis_failures: Vec<String>,
    /// `S_1 >= S_2^{1/2} >= ... >= S_k^{1/k}`; absent when a hypothesis fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone: Option<bool>,
}

impl ChainReport {
    /// `S_m^{m+1} >= S_{m+1}^m` for `m = 1..k_max-1`, which orders the m-th roots
    /// of non-negative values without taking radicals.
    pub fn cross_powers(&self) -> Vec<bool> {
        self.values
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let m = i as u32 + 1;
                w[0].pow(m + 1) >= w[1].pow(m)
            })
            .collect()
    }

    /// `S_1^k >= S_k`, i.e. the two ends of the chain. Only meaningful when
    /// the hypotheses hold.
    pub fn endpoints_ordered(&self) -> Option<bool> {
        self.monotone?;
        let first = self.values.first()?;
        let last = self.values.last()?;
        Some(first.pow(self.values.len() as u32) >= *last)
    }
}

/// Maclaurin-type chain for two-shift and binomial specs, `1 <= k <= n`.
pub fn maclaurin_chain(x: &SymPoint, spec: &OperatorSpec, k: i64) -> Result<ChainReport> {
    check_modes(x, spec)?;
    let n = x.len() as i64;
    if k < 1 || k > n {
        return Err(Error::index("k", k, format!("1 <= k <= n = {n}")));
    }
    let table = sigma_all(x);
    let mut failures = base_hypotheses(&table, spec)?;
    let values: Vec<Scalar> = (1..=k).map(|m| eval_with_table(&table, spec, m)).collect();
    let assumed_from = first_assumed_index(spec);
    for (m, v) in (1..=k).zip(&values) {
        if m >= assumed_from {
            nonneg_failure(v, format!("S_{m}"), &mut failures);
        }
    }
    let mut report = ChainReport {
        k_max: k,
        values,
        hypothesis_failures: failures,
        monotone: None,
    };
    if report.hypothesis_failures.is_empty() {
        report.monotone = Some(report.cross_powers().into_iter().all(|ok| ok));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub l: i64,
    pub k: i64,
    /// `S_l S_{k-1}`.
    pub lhs: Scalar,
    /// `S_{l-1} S_k`.
    pub rhs: Scalar,
    pub holds: bool,
    pub hypothesis_ok: bool,
}

/// `S_l S_{k-1} >= S_{l-1} S_k` under `S_q >= 0` for `q = l..k-1`.
pub fn corollary_product(x: &SymPoint, spec: &OperatorSpec, l: i64, k: i64) -> Result<CorollaryReport> {
    check_modes(x, spec)?;
    let n = x.len() as i64;
    let l_min = match spec {
        OperatorSpec::TwoShift { .. } => 3,
        OperatorSpec::Binomial { s, .. } => *s as i64 + 1,
        OperatorSpec::QuadCoef { .. } => {
            return Err(Error::Precondition("the product corollary needs a two_shift or binomial spec".into()))
        }
    };
    if l < l_min || l >= k {
        return Err(Error::index("l", l, format!("{l_min} <= l < k = {k}")));
    }
    if k > n {
        return Err(Error::index("k", k, format!("l < k <= n = {n}")));
    }
    let table = sigma_all(x);
    let s = |q: i64| eval_with_table(&table, spec, q);
    let hypothesis_ok = (l..k).all(|q| !s(q).is_negative());
    let lhs = s(l) * s(k - 1);
    let rhs = s(l - 1) * s(k);
    Ok(CorollaryReport {
        l,
        k,
        holds: lhs >= rhs,
        lhs,
        rhs,
        hypothesis_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowGapReport {
    #[serde(flatten)]
    pub report: GapReport,
    pub hypothesis_failures: Vec<String>,
    /// `gap >= 0`, present only when the hypotheses hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonnegative: Option<bool>,
}

/// Gaps below the range of the general theorems: `k in {1, 2}` for
/// two-shift, `1 <= k <= s` for binomial. These are non-negative under the
/// chain's parameter hypotheses; failures are reported instead of asserted.
pub fn gap_low_k(x: &SymPoint, spec: &OperatorSpec, k: i64) -> Result<LowGapReport> {
    check_modes(x, spec)?;
    let upper = match spec {
        OperatorSpec::TwoShift { .. } => 2,
        OperatorSpec::Binomial { s, .. } => *s as i64,
        OperatorSpec::QuadCoef { .. } => {
            return Err(Error::Precondition("low-index gaps need a two_shift or binomial spec".into()))
        }
    };
    if k < 1 || k > upper {
        return Err(Error::index("k", k, format!("1 <= k <= {upper}")));
    }
    let table = sigma_all(x);
    let failures = base_hypotheses(&table, spec)?;
    let mut report = GapReport::from_table(&table, spec, k);
    report.equality = classify_equality(x, spec, &report);
    let nonnegative = failures.is_empty().then(|| {
        report.gap_is_zero() || !report.gap.is_negative()
    });
    Ok(LowGapReport {
        report,
        hypothesis_failures: failures,
        nonnegative,
    })
}
