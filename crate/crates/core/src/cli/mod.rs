//! Command-line front end. Every command prints one report on standard
//! output (JSON by default, CSV on request) and maps failures to exit codes:
//! 0 success, 1 bad input or violated precondition, 2 internal invariant
//! breach or a refuted check.

pub mod randomtest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::counterexamples::{
    construct_case1, construct_case2, construct_highk, default_pairs, probe_gap, real_root_twin, sweep,
    sweep_csv, Case,
};
use crate::error::Error;
use crate::inequalities::{corollary_product, gap_low_k, maclaurin_chain, newton_gap};
use crate::operators::{classify_quadratic, eval_operator, shift_identity_check, OperatorSpec};
use crate::polyalgebra::{
    epsilon_perturb, expand_lemma21, expand_sos_n5, identity_sample_outcome, poly_from_roots, quartic_reduction,
    sturm_real_roots, truncation_reduction, verify_eq32_bounded, verify_eq33_bounded, IdentityId, MultiPoly,
    UniPoly, EQ32_MAX_K, EQ33_MAX_K,
};
use crate::rng::GENERATOR;
use crate::symcore::{garding_member, sigma_all, sigma_oracle, sigma_split, Mode, Scalar, SymPoint, ORACLE_MAX_N};
use randomtest::{run_selection, SuiteSelection};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "symineq", version, about = "Exact checks of Newton-Maclaurin type inequalities for combined symmetric operators")]
pub struct Cli {
    /// Arithmetic: exact rationals or 64-bit floats
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Seed for every randomized command
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Trials for randomized commands
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Largest k verified symbolically for eq32 (sampled above)
    #[arg(long, global = true, default_value_t = EQ32_MAX_K)]
    pub eq32_max_k: i64,
    /// Largest k verified symbolically for eq33 (sampled above)
    #[arg(long, global = true, default_value_t = EQ33_MAX_K)]
    pub eq33_max_k: i64,
    #[command(subcommand)]
    pub command: Command,
}

/// Echoed in every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub mode: ModeArg,
    pub seed: u64,
    pub trials: u64,
    pub output: OutputFormat,
    pub eq32_max_k: i64,
    pub eq33_max_k: i64,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Comma-separated coordinates, e.g. "1,2/3,-5"
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub x: Option<String>,
    /// JSON file holding an array of coordinates
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// Two-shift or binomial parameter
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Second two-shift parameter
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Linear coefficient of t² + a t + b
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Constant coefficient of t² + a t + b
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Binomial order
    #[arg(long)]
    pub s: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    Truncation,
    Quartic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Highk,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Elementary symmetric polynomials and their means
    Sigma {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// Cross-check against subset enumeration and the split recurrence
        #[arg(long)]
        oracle: bool,
    },
    /// Evaluate a combined operator
    Eval {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Newton-type gap S_k² - S_{k-1} S_{k+1} with equality classification
    Gap {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Low-index gap with parameter hypotheses checked
        #[arg(long)]
        low_k: bool,
    },
    /// Maclaurin-type chain S_1 >= S_2^(1/2) >= ... >= S_k^(1/k)
    Chain {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        op: OperatorArgs,
        /// Chain length (defaults to n)
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Product inequality S_l S_{k-1} >= S_{l-1} S_k
    Corollary {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Membership in the open cone sigma_1, ..., sigma_k > 0
    Cone {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Check E_k(x + alpha) against its binomial expansion
    Shift {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Single index (defaults to every k in 0..=n)
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Root structure of t² + a t + b
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Sturm real-root certification
    Sturm {
        /// Ascending coefficients, e.g. "1,0,1" for t² + 1
        #[arg(long, allow_hyphen_values = true, conflicts_with = "roots", required_unless_present = "roots")]
        poly: Option<String>,
        /// Build the polynomial from these roots instead
        #[arg(long, allow_hyphen_values = true)]
        roots: Option<String>,
    },
    /// Derivative reductions of the polynomial with roots x
    Reduce {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum)]
        kind: ReduceKind,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Lift leading zero entries of x to eps
    Perturb {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
    },
    /// Complex-root counterexamples to the Newton-type inequality
    Counterexample {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        n: Option<usize>,
        /// Index for the high-k case (4 or 5)
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        /// Also report the gap with b replaced by this real-root value
        #[arg(long, allow_hyphen_values = true)]
        twin_b: Option<String>,
        /// Emit a CSV grid over n and (c, d) pairs
        #[arg(long)]
        sweep: bool,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Gap of the quadratic-coefficient operator at an arbitrary point
    Probe {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Verify a polynomial identity symbolically or by sampling
    Verify {
        /// lemma21, sos5, eq32, eq33 or shift
        identity: String,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Seeded randomized checks: theorem11, theorem14, chain, lemma22 or all
    Randomtest {
        suite: SuiteSelection,
        #[arg(long)]
        n_max: Option<usize>,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or a violated precondition (exit 1).
    Input(String),
    /// An internal cross-check disagreed (exit 2).
    Invariant(String),
    /// The report was printed but records a refuted check (exit 2).
    Refuted,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Invariant(_) | Failure::Refuted => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            Error::IndexOutOfRange { name, .. } => Failure::Input(format!("--{name}: {e}")),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

fn flag_error(flag: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("--{flag}: {e}"))
}

fn parse_scalar(flag: &str, input: &str, mode: Mode) -> CmdResult<Scalar> {
    Scalar::parse(input, mode).map_err(|e| flag_error(flag, e))
}

fn parse_point(p: &PointArgs, mode: Mode) -> CmdResult<SymPoint> {
    match (&p.x, &p.input) {
        (Some(x), _) => SymPoint::parse_list(x, mode).map_err(|e| flag_error("x", e)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| flag_error("input", format!("{}: {e}", path.display())))?;
            SymPoint::from_json(&text, mode).map_err(|e| flag_error("input", e))
        }
        (None, None) => Err(Failure::Input("a point is required: pass --x or --input".into())),
    }
}

fn parse_operator(op: &OperatorArgs, mode: Mode) -> CmdResult<OperatorSpec> {
    let get = |flag: &str, v: &Option<String>| v.as_deref().map(|s| parse_scalar(flag, s, mode)).transpose();
    let (alpha, beta) = (get("alpha", &op.alpha)?, get("beta", &op.beta)?);
    let (a, b) = (get("a", &op.a)?, get("b", &op.b)?);
    let spec = match (alpha, beta, a, b, op.s) {
        (None, None, Some(a), Some(b), None) => OperatorSpec::quad(a, b),
        (Some(alpha), None, None, None, Some(s)) => OperatorSpec::binomial(alpha, s).map_err(|e| match e {
            Error::Precondition(m) => Error::Precondition(format!("--s: {m}")),
            other => other,
        }),
        (Some(alpha), Some(beta), None, None, None) => OperatorSpec::two_shift(alpha, beta),
        _ => {
            return Err(Failure::Input(
                "choose one operator: --alpha with --beta, --a with --b, or --alpha with --s".into(),
            ))
        }
    };
    Ok(spec?)
}

fn require_exact(mode: Mode, what: &str) -> CmdResult<()> {
    if mode != Mode::Exact {
        return Err(Failure::Input(format!("{what} requires --mode exact")));
    }
    Ok(())
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

/// A finished command: the JSON fields of its report, or raw text.
enum Report {
    Fields(Value),
    Text(String),
}

struct Outcome {
    report: Report,
    refuted: bool,
}

impl Outcome {
    fn ok(v: impl Serialize) -> Self {
        Outcome {
            report: Report::Fields(to_value(v)),
            refuted: false,
        }
    }

    fn checked(v: impl Serialize, passed: bool) -> Self {
        Outcome {
            report: Report::Fields(to_value(v)),
            refuted: !passed,
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Sigma { .. } => "sigma",
        Command::Eval { .. } => "eval",
        Command::Gap { .. } => "gap",
        Command::Chain { .. } => "chain",
        Command::Corollary { .. } => "corollary",
        Command::Cone { .. } => "cone",
        Command::Shift { .. } => "shift",
        Command::Classify { .. } => "classify",
        Command::Sturm { .. } => "sturm",
        Command::Reduce { .. } => "reduce",
        Command::Perturb { .. } => "perturb",
        Command::Counterexample { .. } => "counterexample",
        Command::Probe { .. } => "probe",
        Command::Verify { .. } => "verify",
        Command::Randomtest { .. } => "randomtest",
    }
}

fn cmd_sigma(x: SymPoint, k: Option<i64>, oracle: bool) -> CmdResult<Outcome> {
    let table = sigma_all(&x);
    let n = x.len() as i64;
    if oracle {
        if x.len() > ORACLE_MAX_N {
            return Err(flag_error("oracle", format!("subset enumeration is limited to n <= {ORACLE_MAX_N}")));
        }
        for j in 0..=n {
            let reference = sigma_oracle(&x, j)?;
            let split = if n >= 3 { Some(sigma_split(&x, j)?) } else { None };
            let agrees = |v: &Scalar| match (v, &table.sigma(j)) {
                (Scalar::Float(a), Scalar::Float(b)) => (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0),
                (a, b) => a == b,
            };
            if !agrees(&reference) || split.as_ref().is_some_and(|s| !agrees(s)) {
                return Err(Failure::Invariant(format!(
                    "sigma_{j}: table {} vs enumeration {reference}",
                    table.sigma(j)
                )));
            }
        }
    }
    let mut fields = Map::new();
    fields.insert("n".into(), json!(n));
    fields.insert("x".into(), to_value(&x));
    match k {
        Some(k) => {
            if k < 0 || k > n {
                return Err(flag_error("k", format!("k = {k} is out of range: 0 <= k <= n = {n}")));
            }
            fields.insert("k".into(), json!(k));
            fields.insert("sigma".into(), to_value(table.sigma(k)));
            fields.insert("e".into(), to_value(table.e(k)));
        }
        None => {
            fields.insert("sigma".into(), to_value((0..=n).map(|j| table.sigma(j)).collect::<Vec<_>>()));
            fields.insert("e".into(), to_value((0..=n).map(|j| table.e(j)).collect::<Vec<_>>()));
        }
    }
    if oracle {
        fields.insert("oracle_agrees".into(), json!(true));
    }
    Ok(Outcome::ok(Value::Object(fields)))
}

fn cmd_shift(x: SymPoint, alpha: Scalar, k: Option<i64>) -> CmdResult<Outcome> {
    let ks: Vec<i64> = match k {
        Some(k) => vec![k],
        None => (0..=x.len() as i64).collect(),
    };
    let mut failing = Vec::new();
    for &k in &ks {
        if !shift_identity_check(&x, &alpha, k)? {
            failing.push(k);
        }
    }
    let holds = failing.is_empty();
    Ok(Outcome::checked(
        json!({ "x": x, "alpha": alpha, "k": ks, "holds": holds, "failing_k": failing }),
        holds,
    ))
}

fn parse_poly(flag: &str, input: &str) -> CmdResult<UniPoly> {
    let coeffs = SymPoint::parse_list(input, Mode::Exact).map_err(|e| flag_error(flag, e))?;
    Ok(UniPoly::new(coeffs.to_rationals().expect("exact mode")))
}

fn cmd_sturm(poly: Option<String>, roots: Option<String>, mode: Mode) -> CmdResult<Outcome> {
    require_exact(mode, "sturm")?;
    let p = match (poly, roots) {
        (Some(p), _) => parse_poly("poly", &p)?,
        (None, Some(r)) => poly_from_roots(&SymPoint::parse_list(&r, mode).map_err(|e| flag_error("roots", e))?)?,
        (None, None) => return Err(Failure::Input("pass --poly or --roots".into())),
    };
    if p.is_zero() {
        return Err(flag_error("poly", Error::ZeroPolynomial));
    }
    let count = sturm_real_roots(&p)?;
    Ok(Outcome::ok(json!({
        "poly": p,
        "display": p.to_string(),
        "degree": p.degree(),
        "distinct_real": count.distinct_real,
        "all_roots_real": count.all_roots_real,
    })))
}

fn cmd_reduce(x: SymPoint, kind: ReduceKind, k: i64) -> CmdResult<Outcome> {
    let (name, p) = match kind {
        ReduceKind::Truncation => ("truncation", truncation_reduction(&x, k)?),
        ReduceKind::Quartic => ("quartic", quartic_reduction(&x, k)?),
    };
    let sturm = if p.is_zero() { None } else { Some(sturm_real_roots(&p)?) };
    Ok(Outcome::ok(json!({
        "kind": name,
        "k": k,
        "x": x,
        "poly": p,
        "display": p.to_string(),
        "sturm": sturm,
    })))
}

struct CounterexampleArgs {
    case: CaseArg,
    n: Option<usize>,
    k: Option<i64>,
    c: Option<Scalar>,
    d: Option<Scalar>,
    twin_b: Option<Scalar>,
    sweep: bool,
    n_min: Option<usize>,
    n_max: Option<usize>,
}

fn cmd_counterexample(args: CounterexampleArgs, mode: Mode) -> CmdResult<Outcome> {
    require_exact(mode, "counterexample")?;
    let case = match args.case {
        CaseArg::One => Case::Case1,
        CaseArg::Two => Case::Case2,
        CaseArg::Highk => Case::HighK,
    };
    let k = match (case, args.k) {
        (Case::HighK, Some(k)) => k,
        (Case::HighK, None) => return Err(Failure::Input("--k is required for the highk case (4 or 5)".into())),
        (_, None | Some(3)) => 3,
        (_, Some(other)) => return Err(flag_error("k", format!("cases 1 and 2 fix k = 3, got {other}"))),
    };
    if args.sweep {
        let pairs = match (args.c, args.d) {
            (Some(c), Some(d)) => vec![(c, d)],
            (None, None) => default_pairs(case),
            _ => return Err(Failure::Input("pass both --c and --d, or neither for the default grid".into())),
        };
        let lo = args.n_min.unwrap_or(if case == Case::HighK { k as usize + 1 } else { 4 });
        let hi = args.n_max.unwrap_or(12);
        let rows = sweep(case, k, lo..=hi, &pairs)?;
        return Ok(Outcome {
            report: Report::Text(sweep_csv(&rows)),
            refuted: false,
        });
    }
    let n = args.n.ok_or_else(|| Failure::Input("--n is required".into()))?;
    let c = args.c.ok_or_else(|| Failure::Input("--c is required".into()))?;
    let d = args.d.ok_or_else(|| Failure::Input("--d is required".into()))?;
    let report = match case {
        Case::Case1 => construct_case1(n, &c, &d)?,
        Case::Case2 => construct_case2(n, &c, &d)?,
        Case::HighK => construct_highk(n, k, &c, &d)?,
    };
    let mut fields = to_value(&report);
    if let Some(b) = args.twin_b {
        let twin = real_root_twin(&report, &b).map_err(|e| flag_error("twin-b", e))?;
        fields["twin"] = to_value(&twin);
    }
    Ok(Outcome::ok(fields))
}

fn symbolic(id: IdentityId, k: Option<i64>, lhs: &MultiPoly, rhs: &MultiPoly) -> Outcome {
    let verified = lhs == rhs;
    Outcome::checked(
        json!({
            "identity": id,
            "k": k,
            "method": "symbolic",
            "verified": verified,
            "terms": { "lhs": lhs.num_terms(), "rhs": rhs.num_terms() },
        }),
        verified,
    )
}

fn cmd_verify(name: &str, k: Option<i64>, cfg: &RunConfig) -> CmdResult<Outcome> {
    require_exact(cfg.mode.into(), "verify")?;
    let id: IdentityId = name.parse()?;
    let needs_k = || k.ok_or_else(|| Failure::Input(format!("--k is required for {id}")));
    let symbolic_bound = match id {
        IdentityId::Lemma21 => {
            let (l, r) = expand_lemma21();
            return Ok(symbolic(id, None, &l, &r));
        }
        IdentityId::SosN5 => {
            let (l, r) = expand_sos_n5();
            return Ok(symbolic(id, None, &l, &r));
        }
        IdentityId::Eq32 => Some(cfg.eq32_max_k),
        IdentityId::Eq33 => Some(cfg.eq33_max_k),
        IdentityId::Shift => None,
    };
    let k = needs_k()?;
    id.check_index(k)?;
    if symbolic_bound.is_some_and(|max| k <= max) {
        let check = match id {
            IdentityId::Eq32 => verify_eq32_bounded(k, cfg.eq32_max_k)?,
            _ => verify_eq33_bounded(k, cfg.eq33_max_k)?,
        };
        return Ok(Outcome::checked(
            json!({
                "identity": id,
                "k": k,
                "method": "symbolic",
                "verified": check.verified,
                "terms": { "lhs": check.lhs_terms, "rhs": check.rhs_terms },
            }),
            check.verified,
        ));
    }
    if cfg.trials == 0 {
        return Err(flag_error("trials", "sampled verification needs at least one trial"));
    }
    let outcome = identity_sample_outcome(id, k, cfg.trials, cfg.seed)?;
    Ok(Outcome::checked(
        json!({
            "identity": id,
            "k": k,
            "method": "sampled",
            "verified": outcome.agreed(),
            "trials": outcome.trials,
            "first_disagreement": outcome.first_disagreement,
        }),
        outcome.agreed(),
    ))
}

fn cmd_randomtest(selection: SuiteSelection, n_max: Option<usize>, cfg: &RunConfig) -> CmdResult<Outcome> {
    require_exact(cfg.mode.into(), "randomtest")?;
    let summaries = run_selection(selection, n_max, cfg.trials, cfg.seed)?;
    let failures: u64 = summaries.iter().map(|s| s.failed).sum();
    let report = match cfg.output {
        OutputFormat::Json => Report::Fields(json!({
            "generator": GENERATOR,
            "failures": failures,
            "suites": summaries,
        })),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "n_max", "trials", "passed", "failed", "checks", "seed", "generator"])
                .and_then(|_| {
                    summaries.iter().try_for_each(|s| {
                        w.write_record([
                            s.suite.name().to_string(),
                            s.n_max.to_string(),
                            s.trials.to_string(),
                            s.passed.to_string(),
                            s.failed.to_string(),
                            s.checks.to_string(),
                            cfg.seed.to_string(),
                            GENERATOR.to_string(),
                        ])
                    })
                })
                .map_err(|e| Failure::Input(e.to_string()))?;
            Report::Text(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
        }
    };
    Ok(Outcome {
        report,
        refuted: failures > 0,
    })
}

fn execute(cli: Cli, cfg: &RunConfig) -> CmdResult<Outcome> {
    let mode: Mode = cli.mode.into();
    match cli.command {
        Command::Sigma { point, k, oracle } => cmd_sigma(parse_point(&point, mode)?, k, oracle),
        Command::Eval { point, op, k } => {
            let x = parse_point(&point, mode)?;
            let spec = parse_operator(&op, mode)?;
            let value = eval_operator(&x, &spec, k)?;
            Ok(Outcome::ok(json!({ "x": x, "operator": spec, "k": k, "value": value })))
        }
        Command::Gap { point, op, k, low_k } => {
            let x = parse_point(&point, mode)?;
            let spec = parse_operator(&op, mode)?;
            if low_k {
                return Ok(Outcome::ok(gap_low_k(&x, &spec, k)?));
            }
            Ok(Outcome::ok(newton_gap(&x, &spec, k)?))
        }
        Command::Chain { point, op, k } => {
            let x = parse_point(&point, mode)?;
            let spec = parse_operator(&op, mode)?;
            let k = k.unwrap_or(x.len() as i64);
            Ok(Outcome::ok(maclaurin_chain(&x, &spec, k)?))
        }
        Command::Corollary { point, op, l, k } => {
            let x = parse_point(&point, mode)?;
            let spec = parse_operator(&op, mode)?;
            Ok(Outcome::ok(corollary_product(&x, &spec, l, k)?))
        }
        Command::Cone { point, k } => {
            let x = parse_point(&point, mode)?;
            Ok(Outcome::ok(json!({ "k": k, "member": garding_member(&x, k)? })))
        }
        Command::Shift { point, alpha, k } => {
            cmd_shift(parse_point(&point, mode)?, parse_scalar("alpha", &alpha, mode)?, k)
        }
        Command::Classify { a, b } => {
            let (a, b) = (parse_scalar("a", &a, mode)?, parse_scalar("b", &b, mode)?);
            Ok(Outcome::ok(classify_quadratic(&a, &b)?))
        }
        Command::Sturm { poly, roots } => cmd_sturm(poly, roots, mode),
        Command::Reduce { point, kind, k } => cmd_reduce(parse_point(&point, mode)?, kind, k),
        Command::Perturb { point, eps } => {
            let x = parse_point(&point, mode)?;
            let eps = parse_scalar("eps", &eps, mode)?;
            let y = epsilon_perturb(&x, &eps).map_err(|e| flag_error("eps", e))?;
            Ok(Outcome::ok(json!({ "x": x, "eps": eps, "perturbed": y })))
        }
        Command::Counterexample { case, n, k, c, d, twin_b, sweep, n_min, n_max } => {
            let opt = |flag: &str, v: Option<String>| v.map(|s| parse_scalar(flag, &s, mode)).transpose();
            let args = CounterexampleArgs {
                case,
                n,
                k,
                c: opt("c", c)?,
                d: opt("d", d)?,
                twin_b: opt("twin-b", twin_b)?,
                sweep,
                n_min,
                n_max,
            };
            cmd_counterexample(args, mode)
        }
        Command::Probe { point, a, b, k } => {
            let x = parse_point(&point, mode)?;
            let (a, b) = (parse_scalar("a", &a, mode)?, parse_scalar("b", &b, mode)?);
            Ok(Outcome::ok(probe_gap(&x, &a, &b, k)?))
        }
        Command::Verify { identity, k } => cmd_verify(&identity, k, cfg),
        Command::Randomtest { suite, n_max } => cmd_randomtest(suite, n_max, cfg),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render(cfg: &RunConfig, command: &str, report: Report) -> String {
    let fields = match report {
        Report::Text(t) => return t,
        Report::Fields(f) => f,
    };
    let mut top = Map::new();
    top.insert("version".into(), json!(VERSION));
    top.insert("command".into(), json!(command));
    top.insert("config".into(), to_value(cfg));
    match fields {
        Value::Object(m) => top.extend(m),
        other => {
            top.insert("result".into(), other);
        }
    }
    let top = Value::Object(top);
    match cfg.output {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&top).expect("serializable");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut pairs = Vec::new();
            flatten("", &top, &mut pairs);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(pairs.iter().map(|(k, _)| k)).expect("in-memory writer");
            w.write_record(pairs.iter().map(|(_, v)| v)).expect("in-memory writer");
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
    }
}

/// Parses `args`, runs the command and writes its report. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = RunConfig {
        mode: cli.mode,
        seed: cli.seed,
        trials: cli.trials,
        output: cli.output,
        eq32_max_k: cli.eq32_max_k,
        eq33_max_k: cli.eq33_max_k,
    };
    let command = command_name(&cli.command);
    let failure = match execute(cli, &cfg) {
        Ok(outcome) => {
            let text = render(&cfg, command, outcome.report);
            if stdout.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            outcome.refuted.then_some(Failure::Refuted)
        }
        Err(f) => Some(f),
    };
    match failure {
        None => 0,
        Some(f) => {
            match &f {
                Failure::Input(m) => {
                    let _ = writeln!(stderr, "error: {m}");
                }
                Failure::Invariant(m) => {
                    let _ = writeln!(stderr, "internal error: {m}");
                }
                Failure::Refuted => {
                    let _ = writeln!(stderr, "check refuted; see report");
                }
            }
            f.exit_code()
        }
    }
}
