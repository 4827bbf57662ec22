//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use symineq::cli::randomtest::{run_suite, Suite};
use symineq::counterexamples::{
    case1_closed_form, case2_closed_form, construct_case1, construct_case2, construct_highk, default_pairs,
    real_root_twin, Case, CounterexampleReport,
};
use symineq::inequalities::{newton_gap, EqualityCase};
use symineq::operators::{shift_identity_check, OperatorSpec};
use symineq::polyalgebra::{
    identity_sample, sturm_real_roots, verify_eq32, verify_eq33, verify_lemma21, verify_sos_n5, IdentityId, UniPoly,
};
use symineq::rng::{small_rational, stream_id, trial_rng};
use symineq::symcore::{sigma_all, sigma_oracle, Scalar, SymPoint};

const SEED: u64 = 20_240_601;

/// Name, optional time budget and check.
type Criterion = (&'static str, Option<Duration>, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn rng(name: &str, index: u64) -> SplitMix64 {
    trial_rng(SEED, stream_id(name), index)
}

fn rational(r: &mut SplitMix64) -> Scalar {
    Scalar::Exact(small_rational(r))
}

fn nonzero(r: &mut SplitMix64) -> Scalar {
    loop {
        let v = rational(r);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A rational in `[-1, 1]`, never zero.
fn unit_fraction(r: &mut SplitMix64) -> Scalar {
    let q = r.random_range(1..=20i64);
    let mut p = 0;
    while p == 0 {
        p = r.random_range(-q..=q);
    }
    Scalar::ratio(p, q)
}

fn point(r: &mut SplitMix64, n: usize) -> SymPoint {
    SymPoint::new((0..n).map(|_| rational(r)).collect()).unwrap()
}

/// `count` coordinates different from `avoid`.
fn avoiding(r: &mut SplitMix64, count: usize, avoid: &Scalar) -> Vec<Scalar> {
    (0..count)
        .map(|_| loop {
            let v = rational(r);
            if &v != avoid {
                break v;
            }
        })
        .collect()
}

fn criterion1() -> Verdict {
    let mismatches: usize = (1..=12usize)
        .into_par_iter()
        .map(|n| {
            (0..1000u64)
                .filter(|&i| {
                    let x = point(&mut rng("oracle", (n as u64) << 32 | i), n);
                    let t = sigma_all(&x);
                    (0..=n as i64).any(|k| t.sigma(k) != sigma_oracle(&x, k).unwrap())
                })
                .count()
        })
        .sum();
    verdict(mismatches == 0, format!("12,000 vectors, n in [1,12], {mismatches} mismatches"))
}

fn suite_verdict(suite: Suite, n_max: usize, trials: u64) -> Verdict {
    let s = run_suite(suite, Some(n_max), trials, SEED).unwrap();
    let mut detail = format!("{} instances, {} checks, {} violations", s.trials, s.checks, s.failed);
    if let Some(f) = &s.first_failure {
        detail.push_str(&format!("; first: {f}"));
    }
    verdict(s.failed == 0 && s.passed == trials, detail)
}

fn criterion4() -> Verdict {
    let mut bad = Vec::new();
    // (a) all coordinates equal, any family, over the theorems' index range
    for i in 0..500u64 {
        let r = &mut rng("equal", i);
        let (spec, k_min) = match i % 3 {
            0 => (OperatorSpec::two_shift(rational(r), rational(r)).unwrap(), 3),
            1 => (OperatorSpec::quad(rational(r), rational(r)).unwrap(), 3),
            _ => {
                let s = r.random_range(1..=4);
                (OperatorSpec::binomial(rational(r), s).unwrap(), s as usize + 1)
            }
        };
        let n = r.random_range(k_min + 1..=9usize);
        let x = SymPoint::new(vec![rational(r); n]).unwrap();
        for k in k_min as i64..n as i64 {
            let g = newton_gap(&x, &spec, k).unwrap();
            if !g.gap.is_zero() || g.equality != EqualityCase::AllEqual {
                bad.push(format!("(a) x={x} spec={spec:?} k={k}"));
            }
        }
    }
    // (b) two-shift with alpha = beta and n-2 entries equal to -alpha
    for i in 0..500u64 {
        let r = &mut rng("ratio-two-shift", i);
        let n = r.random_range(4..=9usize);
        let alpha = nonzero(r);
        let mut entries = vec![-&alpha; n - 2];
        entries.extend(avoiding(r, 2, &-&alpha));
        let x = SymPoint::new(entries).unwrap();
        let spec = OperatorSpec::two_shift(alpha.clone(), alpha.clone()).unwrap();
        for k in 3..n as i64 {
            let g = newton_gap(&x, &spec, k).unwrap();
            let want = EqualityCase::RatioMinusAlpha { alpha: alpha.clone() };
            if !g.gap.is_zero() || g.equality != want {
                bad.push(format!("(b) x={x} alpha={alpha} k={k}: {:?}", g.equality));
            }
        }
    }
    // (c) binomial with n-s entries equal to -alpha
    for i in 0..500u64 {
        let r = &mut rng("ratio-binomial", i);
        let s = r.random_range(1..=4usize);
        let n = r.random_range(s + 2..=9);
        let alpha = nonzero(r);
        let mut entries = vec![-&alpha; n - s];
        entries.extend(avoiding(r, s, &-&alpha));
        let x = SymPoint::new(entries).unwrap();
        let spec = OperatorSpec::binomial(alpha.clone(), s as u32).unwrap();
        for k in s as i64 + 1..n as i64 {
            let g = newton_gap(&x, &spec, k).unwrap();
            let want = EqualityCase::RatioMinusAlpha { alpha: alpha.clone() };
            if !g.gap.is_zero() || g.equality != want {
                bad.push(format!("(c) x={x} alpha={alpha} s={s} k={k}: {:?}", g.equality));
            }
        }
    }
    let detail = match bad.first() {
        None => "3 x 500 instances, all gaps zero with the expected class".to_string(),
        Some(b) => format!("{} failures; first: {b}", bad.len()),
    };
    verdict(bad.is_empty(), detail)
}

fn criterion6() -> Verdict {
    let mut problems = Vec::new();
    let mut checked = 0;
    for (case, closed) in [
        (Case::Case1, case1_closed_form as fn(usize, &Scalar, &Scalar) -> Scalar),
        (Case::Case2, case2_closed_form),
    ] {
        for n in 4..=12 {
            for (c, d) in default_pairs(case) {
                checked += 1;
                let built = match case {
                    Case::Case1 => construct_case1(n, &c, &d),
                    _ => construct_case2(n, &c, &d),
                };
                match built {
                    Ok(r) if r.negative && Some(&r.gap) == r.closed_form.as_ref() && r.gap == closed(n, &r.c, &r.d) => {}
                    Ok(r) => problems.push(format!("case {case} n={n} c={c} d={d}: gap {}", r.gap)),
                    Err(e) => problems.push(format!("case {case} n={n} c={c} d={d}: {e}")),
                }
            }
        }
    }
    let spot1 = construct_case1(5, &Scalar::ratio(1, 1), &Scalar::ratio(1, 1)).map(|r| r.gap);
    let spot2 = construct_case2(5, &Scalar::ratio(1, 2), &Scalar::ratio(1, 1)).map(|r| r.gap);
    if spot1 != Ok(Scalar::ratio(-27, 100)) {
        problems.push(format!("case 1 spot value {spot1:?}"));
    }
    if spot2 != Ok(Scalar::ratio(-567, 800)) {
        problems.push(format!("case 2 spot value {spot2:?}"));
    }
    let mut highk = 0;
    for (k, ns) in [(4, 5..=12usize), (5, 6..=9)] {
        for n in ns {
            for (c, d) in default_pairs(Case::HighK) {
                highk += 1;
                match construct_highk(n, k, &c, &d) {
                    Ok(r) if r.negative && !r.exploratory => {}
                    Ok(r) => problems.push(format!("k={k} n={n} c={c} d={d}: gap {}", r.gap)),
                    Err(e) => problems.push(format!("k={k} n={n} c={c} d={d}: {e}")),
                }
            }
        }
    }
    let detail = match problems.first() {
        None => format!("{checked} k=3 constructions match closed forms and are negative, {highk} k=4/5 negative, spot values -27/100 and -567/800"),
        Some(p) => format!("{} problems; first: {p}", problems.len()),
    };
    verdict(problems.is_empty(), detail)
}

fn criterion7() -> Verdict {
    let mut failed = Vec::new();
    if !verify_lemma21() {
        failed.push("lemma21".to_string());
    }
    if !verify_sos_n5() {
        failed.push("sos5".to_string());
    }
    for k in 2..=6 {
        if verify_eq32(k) != Ok(true) {
            failed.push(format!("eq32 k={k}"));
        }
    }
    for k in 2..=5 {
        if verify_eq33(k) != Ok(true) {
            failed.push(format!("eq33 k={k}"));
        }
    }
    for id in [IdentityId::Eq32, IdentityId::Eq33] {
        for k in [7, 8] {
            if identity_sample(id, k, 100, SEED) != Ok(true) {
                failed.push(format!("{id} k={k} sampled"));
            }
        }
    }
    verdict(
        failed.is_empty(),
        if failed.is_empty() {
            "lemma21, sos5, eq32 k=2..6, eq33 k=2..5 symbolic; eq32/eq33 k=7,8 sampled x100".to_string()
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn criterion8() -> Verdict {
    let v = suite_verdict(Suite::Lemma22, 10, 2000);
    let t2p1 = sturm_real_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap();
    verdict(
        v.ok && !t2p1.all_roots_real,
        format!("{}; t^2+1 all_roots_real={}", v.detail, t2p1.all_roots_real),
    )
}

fn criterion9() -> Verdict {
    let failures = (0..2000u64)
        .into_par_iter()
        .filter(|&i| {
            let r = &mut rng("shift", i);
            let n = r.random_range(1..=10usize);
            let x = point(r, n);
            let alpha = rational(r);
            let k = r.random_range(0..=n as i64);
            !shift_identity_check(&x, &alpha, k).unwrap()
        })
        .count();
    verdict(failures == 0, format!("2000 instances, {failures} failures"))
}

fn random_counterexample(r: &mut SplitMix64) -> CounterexampleReport {
    let n = r.random_range(4..=12usize);
    let big = nonzero(r);
    let mut small = &big * &unit_fraction(r);
    if r.random::<bool>() {
        construct_case1(n, &big, &small).unwrap()
    } else {
        if small.abs() == big.abs() {
            small = &small / &Scalar::ratio(2, 1);
        }
        // |c| < |d|; c may be zero
        let c = if r.random_range(0..10) == 0 { Scalar::ratio(0, 1) } else { small };
        construct_case2(n, &c, &big).unwrap()
    }
}

fn criterion10() -> Verdict {
    let bad: Vec<String> = (0..500u64)
        .into_par_iter()
        .filter_map(|i| {
            let r = &mut rng("separation", i);
            let report = random_counterexample(r);
            // real roots -(c - u), -(c + u) keep a = 2c
            let c = &report.a / &Scalar::ratio(2, 1);
            let u = rational(r);
            let b = &c * &c - &u * &u;
            let twin = real_root_twin(&report, &b).unwrap();
            (!report.negative || twin.gap.is_negative())
                .then(|| format!("z0={} a={} b={b}: {}", report.z0, report.a, twin.gap))
        })
        .collect();
    verdict(
        bad.is_empty(),
        match bad.first() {
            None => "500 counterexamples, every real-root twin gap >= 0".to_string(),
            Some(b) => format!("{} failures; first: {b}", bad.len()),
        },
    )
}

fn criterion11() -> Verdict {
    let args = ["randomtest", "all", "--trials", "300", "--seed", "7"];
    let once = || Command::new(env!("CARGO_BIN_EXE_symineq")).args(args).output().unwrap();
    let (a, b) = (once(), once());
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    verdict(ok, format!("two runs of `{}`: {} bytes each, identical={}", args.join(" "), a.stdout.len(), a.stdout == b.stdout))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("oracle equivalence", Some(Duration::from_secs(30)), criterion1),
        ("two-shift gap >= 0", Some(Duration::from_secs(120)), || suite_verdict(Suite::Theorem11, 9, 10_000)),
        ("binomial gap >= 0", None, || suite_verdict(Suite::Theorem14, 9, 10_000)),
        ("equality cases", None, criterion4),
        ("Maclaurin chains and low-k gaps", None, || suite_verdict(Suite::Chain, 8, 2000)),
        ("complex-root counterexamples", Some(Duration::from_secs(30)), criterion6),
        ("polynomial identities", Some(Duration::from_secs(180)), criterion7),
        ("real-rootedness closure", None, criterion8),
        ("shift identity", None, criterion9),
        ("separation by real roots", None, criterion10),
        ("randomtest determinism", None, criterion11),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let ok = v.ok && in_time;
        if !ok {
            failures += 1;
        }
        let budget = budget.map(|b| format!(" (limit {}s)", b.as_secs())).unwrap_or_default();
        println!(
            "criterion {:>2} {} {name}: {} [{:.2}s{budget}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
