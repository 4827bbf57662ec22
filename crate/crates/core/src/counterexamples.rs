//! Complex-root counterexamples: when `t² + a t + b` has roots `-c ± i d`,
//! the quadratic-coefficient operator `S'_k = E_k + 2c E_{k-1} + (c²+d²) E_{k-2}`
//! can violate the Newton-type inequality. The constructions here build the
//! violating vectors and cross-check the gap against its closed form.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::{newton_gap, GapReport};
use crate::operators::OperatorSpec;
use crate::symcore::{sigma_all, Mode, Scalar, SymPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    #[serde(rename = "1")]
    Case1,
    #[serde(rename = "2")]
    Case2,
    HighK,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Case1 => "1",
            Case::Case2 => "2",
            Case::HighK => "highk",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub case: Case,
    pub n: usize,
    pub k: i64,
    pub c: Scalar,
    pub d: Scalar,
    pub a: Scalar,
    pub b: Scalar,
    pub z0: SymPoint,
    pub s_km1: Scalar,
    pub s_k: Scalar,
    pub s_kp1: Scalar,
    /// `S'_k² - S'_{k-1} S'_{k+1}` evaluated directly at `z0`.
    pub gap: Scalar,
    /// Closed-form gap (k = 3 constructions only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Scalar>,
    pub negative: bool,
    /// Outside the parameter range for which negativity is claimed; no assertion made.
    pub exploratory: bool,
}

fn int(v: i64) -> Scalar {
    Scalar::from_int(v, Mode::Exact)
}

fn require_exact(c: &Scalar, d: &Scalar) -> Result<()> {
    c.ensure_same_mode(d)?;
    if c.mode() != Mode::Exact {
        return Err(Error::ExactRequired("counterexample construction"));
    }
    Ok(())
}

fn precondition(msg: &str) -> Error {
    Error::Precondition(msg.to_string())
}

/// `z0 = (m·v, m·v, -v, ..., -v)` with `n - 2` trailing entries.
fn two_spike_vector(n: usize, lead: i64, v: &Scalar) -> SymPoint {
    let mut entries = vec![int(lead) * v; 2];
    entries.extend(std::iter::repeat_n(-v, n - 2));
    SymPoint::new(entries).expect("n >= 2")
}

/// `E_1..E_4` of `((n-3)v, (n-3)v, -v, ..., -v)` in closed form.
pub fn spike_means_closed_form(n: usize, v: &Scalar) -> [Scalar; 4] {
    let nn = int(n as i64);
    let n1 = int(n as i64 - 1);
    [
        int(n as i64 - 4) * v / &nn,
        -(int(n as i64 - 3) * v.pow(2)) / &n1,
        -(int((n as i64 - 3) * (n as i64 - 4)) * v.pow(3)) / (&nn * &n1),
        int(5 * (n * n) as i64 - 25 * n as i64 + 32) * v.pow(4) / (&nn * &n1),
    ]
}

fn check_spike_means(z0: &SymPoint, n: usize, v: &Scalar) -> Result<()> {
    let table = sigma_all(z0);
    for (j, expected) in spike_means_closed_form(n, v).iter().enumerate() {
        let got = table.e(j as i64 + 1);
        if &got != expected {
            return Err(Error::Invariant(format!(
                "E_{} of z0 = {got}, closed form gives {expected}",
                j + 1
            )));
        }
    }
    Ok(())
}

/// `2(n-2)³ c² d² [-2(n-2) c² + (n-1) d²] / (n² (n-1)²)`.
pub fn case1_closed_form(n: usize, c: &Scalar, d: &Scalar) -> Scalar {
    let n = n as i64;
    let bracket = int(-2 * (n - 2)) * c.pow(2) + int(n - 1) * d.pow(2);
    int(2 * (n - 2).pow(3)) * c.pow(2) * d.pow(2) * bracket / int(n * n * (n - 1) * (n - 1))
}

/// `(n-1) c⁴ + 2(n-4) c² d² - 4(n-4) c d³ - 4 d⁴`.
pub fn case2_bracket(n: usize, c: &Scalar, d: &Scalar) -> Scalar {
    let n = n as i64;
    int(n - 1) * c.pow(4) + int(2 * (n - 4)) * c.pow(2) * d.pow(2) - int(4 * (n - 4)) * c * d.pow(3)
        - int(4) * d.pow(4)
}

/// `2(n-2)³ d² [bracket] / (n² (n-1)²)`.
pub fn case2_closed_form(n: usize, c: &Scalar, d: &Scalar) -> Scalar {
    let n_i = n as i64;
    int(2 * (n_i - 2).pow(3)) * d.pow(2) * case2_bracket(n, c, d) / int(n_i * n_i * (n_i - 1) * (n_i - 1))
}

/// The quadratic-coefficient spec with roots `-c ± i d`.
pub fn complex_root_spec(c: &Scalar, d: &Scalar) -> OperatorSpec {
    OperatorSpec::QuadCoef {
        a: int(2) * c,
        b: c.pow(2) + d.pow(2),
    }
}

fn assemble(case: Case, n: usize, k: i64, c: &Scalar, d: &Scalar, z0: SymPoint) -> Result<CounterexampleReport> {
    let spec = complex_root_spec(c, d);
    let report = newton_gap(&z0, &spec, k)?;
    let OperatorSpec::QuadCoef { a, b } = spec else { unreachable!() };
    Ok(CounterexampleReport {
        case,
        n,
        k,
        c: c.clone(),
        d: d.clone(),
        a,
        b,
        z0,
        negative: report.gap.is_negative(),
        s_km1: report.s_km1,
        s_k: report.s_k,
        s_kp1: report.s_kp1,
        gap: report.gap,
        closed_form: None,
        exploratory: false,
    })
}

fn confirm(mut report: CounterexampleReport, closed: Scalar) -> Result<CounterexampleReport> {
    if report.gap != closed {
        return Err(Error::Invariant(format!(
            "case {} n={} c={} d={}: direct gap {} differs from closed form {}",
            report.case, report.n, report.c, report.d, report.gap, closed
        )));
    }
    if !report.negative {
        return Err(Error::Invariant(format!(
            "case {} n={} c={} d={}: gap {} is not negative",
            report.case, report.n, report.c, report.d, report.gap
        )));
    }
    report.closed_form = Some(closed);
    Ok(report)
}

/// Case `|c| >= |d|`: `z0 = ((n-3)c, (n-3)c, -c, ..., -c)`, `k = 3`.
pub fn construct_case1(n: usize, c: &Scalar, d: &Scalar) -> Result<CounterexampleReport> {
    require_exact(c, d)?;
    if n < 4 {
        return Err(precondition("Case 1 requires n \u{2265} 4"));
    }
    if c.is_zero() || d.is_zero() {
        return Err(precondition("Case 1 requires c \u{2260} 0 and d \u{2260} 0"));
    }
    if c.abs() < d.abs() {
        return Err(precondition("Case 1 requires |c| \u{2265} |d|"));
    }
    let z0 = two_spike_vector(n, n as i64 - 3, c);
    check_spike_means(&z0, n, c)?;
    let report = assemble(Case::Case1, n, 3, c, d, z0)?;
    confirm(report, case1_closed_form(n, c, d))
}

/// Case `|c| < |d|`: `z0 = ((n-3)d, (n-3)d, -d, ..., -d)`, `k = 3`.
///
/// `d` is only determined up to sign by the roots `-c ± i d`; it is replaced
/// by `-d` when `c·d < 0`, which keeps the closed-form bracket negative.
pub fn construct_case2(n: usize, c: &Scalar, d: &Scalar) -> Result<CounterexampleReport> {
    require_exact(c, d)?;
    if n < 4 {
        return Err(precondition("Case 2 requires n \u{2265} 4"));
    }
    if d.is_zero() {
        return Err(precondition("Case 2 requires d \u{2260} 0"));
    }
    if c.abs() >= d.abs() {
        return Err(precondition("Case 2 requires |c| < |d|"));
    }
    let d = if (c * d).is_negative() { -d } else { d.clone() };
    let z0 = two_spike_vector(n, n as i64 - 3, &d);
    check_spike_means(&z0, n, &d)?;
    let report = assemble(Case::Case2, n, 3, c, &d, z0)?;
    confirm(report, case2_closed_form(n, c, &d))
}

/// Largest `n` for which the `k = 5` construction is claimed negative.
pub const HIGHK5_MAX_N: usize = 9;

/// `k ∈ {4, 5}`, `|c| >= |d|`: `z0 = ((n-k)c, (n-k)c, -c, ..., -c)`. The sign
/// is observed, not asserted; `k = 5` with `n > 9` is flagged exploratory.
pub fn construct_highk(n: usize, k: i64, c: &Scalar, d: &Scalar) -> Result<CounterexampleReport> {
    require_exact(c, d)?;
    if k != 4 && k != 5 {
        return Err(Error::index("k", k, "k \u{2208} {4, 5}"));
    }
    if n as i64 <= k {
        return Err(Error::index("n", n as i64, format!("n \u{2265} k + 1 = {}", k + 1)));
    }
    if d.is_zero() {
        return Err(precondition("the high-k construction requires d \u{2260} 0"));
    }
    if c.abs() < d.abs() {
        return Err(precondition("the high-k construction requires |c| \u{2265} |d|"));
    }
    let z0 = two_spike_vector(n, n as i64 - k, c);
    let mut report = assemble(Case::HighK, n, k, c, d, z0)?;
    report.exploratory = k == 5 && n > HIGHK5_MAX_N;
    Ok(report)
}

/// Free-form gap of `S'_k` for arbitrary `(a, b)`; no sign is asserted.
pub fn probe_gap(x: &SymPoint, a: &Scalar, b: &Scalar, k: i64) -> Result<GapReport> {
    newton_gap(x, &OperatorSpec::quad(a.clone(), b.clone())?, k)
}

/// Gap at the same `z0` and `a` but with `b` replaced by a real-root value
/// (`a² - 4b >= 0`).
pub fn real_root_twin(report: &CounterexampleReport, b: &Scalar) -> Result<GapReport> {
    let disc = &report.a * &report.a - int(4) * b;
    if disc.is_negative() {
        return Err(precondition("the replacement b must give real roots (a\u{b2} - 4b \u{2265} 0)"));
    }
    probe_gap(&report.z0, &report.a, b, report.k)
}

/// 25 `(c, d)` pairs satisfying the hypotheses of `case` (sign-normalized
/// for case 2).
pub fn default_pairs(case: Case) -> Vec<(Scalar, Scalar)> {
    let bases = [int(1), int(-1), int(2), Scalar::ratio(3, 2), Scalar::ratio(-7, 3)];
    let mut out = Vec::with_capacity(25);
    match case {
        Case::Case1 | Case::HighK => {
            let fracs = [int(1), int(-1), Scalar::ratio(1, 2), Scalar::ratio(-1, 3), Scalar::ratio(2, 5)];
            for c in &bases {
                for f in &fracs {
                    out.push((c.clone(), c * f));
                }
            }
        }
        Case::Case2 => {
            let fracs = [int(0), Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::ratio(9, 10), Scalar::ratio(99, 100)];
            for d in &bases {
                for f in &fracs {
                    out.push((d * f, d.clone()));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: i64,
    pub c: Scalar,
    pub d: Scalar,
    pub gap: Scalar,
    pub negative: bool,
}

pub const SWEEP_CSV_HEADER: &str = "n,k,c,d,gap,negative";

/// Runs the construction for `case` over every `n` and pair. `k` is only
/// consulted for the high-k case.
pub fn sweep(
    case: Case,
    k: i64,
    ns: impl IntoIterator<Item = usize>,
    pairs: &[(Scalar, Scalar)],
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for n in ns {
        for (c, d) in pairs {
            let r = match case {
                Case::Case1 => construct_case1(n, c, d)?,
                Case::Case2 => construct_case2(n, c, d)?,
                Case::HighK => construct_highk(n, k, c, d)?,
            };
            rows.push(SweepRow {
                n,
                k: r.k,
                c: r.c,
                d: r.d,
                gap: r.gap,
                negative: r.negative,
            });
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{},{}\n", r.n, r.k, r.c, r.d, r.gap, r.negative));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::ratio(p, d)
    }

    #[test]
    fn case1_examples() {
        let r = construct_case1(5, &int(1), &int(1)).unwrap();
        assert_eq!(r.z0, SymPoint::from_ints(&[2, 2, -1, -1, -1]));
        assert_eq!(r.gap, q(-27, 100));
        assert_eq!(r.closed_form, Some(q(-27, 100)));
        let r = construct_case1(4, &int(1), &int(1)).unwrap();
        assert_eq!(r.z0, SymPoint::from_ints(&[1, 1, -1, -1]));
        assert_eq!(r.gap, q(-1, 9));
        let r = construct_case1(5, &int(-1), &int(1)).unwrap();
        assert_eq!(r.gap, q(-27, 100));
    }

    #[test]
    fn case1_operator_values() {
        // S'_2 = (2(n-2)² c² + n(n-1) d²)/(n(n-1)), S'_3 = (-2(n-2)² c³ + (n²-5n+4) c d²)/(n(n-1))
        let r = construct_case1(5, &int(1), &int(1)).unwrap();
        assert_eq!(r.s_km1, q(38, 20));
        assert_eq!(r.s_k, q(-14, 20));
        assert_eq!(r.s_kp1, q(8, 20));
    }

    #[test]
    fn case1_preconditions() {
        let e = construct_case1(5, &int(1), &int(2)).unwrap_err();
        assert_eq!(e.to_string(), "Case 1 requires |c| \u{2265} |d|");
        assert!(construct_case1(3, &int(1), &int(1)).is_err());
        assert!(construct_case1(5, &int(0), &int(0)).is_err());
        assert!(construct_case1(5, &int(1), &int(0)).is_err());
        assert!(matches!(
            construct_case1(5, &Scalar::Float(1.0), &Scalar::Float(1.0)),
            Err(Error::ExactRequired(_))
        ));
    }

    #[test]
    fn case2_examples() {
        let r = construct_case2(5, &q(1, 2), &int(1)).unwrap();
        assert_eq!(r.z0, SymPoint::from_ints(&[2, 2, -1, -1, -1]));
        assert_eq!(case2_bracket(5, &q(1, 2), &int(1)), q(-21, 4));
        assert_eq!(r.gap, q(-567, 800));
        let r = construct_case2(5, &int(0), &int(1)).unwrap();
        assert_eq!(case2_bracket(5, &int(0), &int(1)), int(-4));
        assert_eq!(r.gap, q(-27, 50));
        let r = construct_case2(5, &q(-1, 2), &int(-1)).unwrap();
        assert!(r.negative);
        // c·d < 0 is normalized by flipping d
        let r = construct_case2(5, &q(-1, 2), &int(1)).unwrap();
        assert_eq!(r.d, int(-1));
        assert!(construct_case2(5, &int(1), &int(1)).is_err());
        assert!(construct_case2(5, &int(0), &int(0)).is_err());
    }

    #[test]
    fn highk_examples() {
        assert!(construct_highk(6, 4, &int(1), &int(1)).unwrap().negative);
        assert!(construct_highk(7, 5, &int(1), &int(1)).unwrap().negative);
        assert!(construct_highk(5, 4, &int(1), &q(1, 2)).unwrap().negative);
        let r = construct_highk(10, 5, &int(1), &int(1)).unwrap();
        assert!(r.exploratory);
        assert_eq!(r.closed_form, None);
        assert!(construct_highk(5, 3, &int(1), &int(1)).is_err());
        assert!(construct_highk(5, 5, &int(1), &int(1)).is_err());
        assert!(construct_highk(6, 4, &int(1), &int(2)).is_err());
    }

    #[test]
    fn spike_means_match_table() {
        for n in 4..10 {
            let z0 = two_spike_vector(n, n as i64 - 3, &q(3, 2));
            check_spike_means(&z0, n, &q(3, 2)).unwrap();
        }
    }

    #[test]
    fn probe_reproduces_case1() {
        let r = construct_case1(6, &int(2), &int(1)).unwrap();
        let g = probe_gap(&r.z0, &r.a, &r.b, 3).unwrap();
        assert_eq!(g.gap, r.gap);
        let classical = probe_gap(&r.z0, &int(0), &int(0), 3).unwrap();
        assert!(!classical.gap.is_negative());
    }

    #[test]
    fn twin_with_real_roots_is_nonnegative() {
        let r = construct_case1(7, &int(1), &int(1)).unwrap();
        let b = &r.a * &r.a / int(4);
        assert!(!real_root_twin(&r, &b).unwrap().gap.is_negative());
        assert!(real_root_twin(&r, &r.b).is_err());
    }

    #[test]
    fn sweep_csv_format() {
        let rows = sweep(Case::Case1, 3, 4..=5, &[(int(1), int(1))]).unwrap();
        assert_eq!(sweep_csv(&rows), "n,k,c,d,gap,negative\n4,3,1,1,-1/9,true\n5,3,1,1,-27/100,true\n");
        assert_eq!(default_pairs(Case::Case1).len(), 25);
        assert_eq!(default_pairs(Case::Case2).len(), 25);
    }
}
