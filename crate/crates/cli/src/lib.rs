//! Job dispatch, report formats and demos behind the `htnn` binary.
//!
//! A [`JobSpec`] names a command, carries its JSON payload and a budget, and
//! [`run`] turns it into a [`RunReport`] whose exit code depends only on the
//! kind of verdict reached.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hurwitz_tnn::cfrac::{self, CFraction};
use hurwitz_tnn::classify::{self, SPoleData, Verdict, ZeroPoleSpec};
use hurwitz_tnn::factorization::{self, Budget};
use hurwitz_tnn::matrix::{self, MatrixSpec};
use hurwitz_tnn::minors::{self, MinorIndex};
use hurwitz_tnn::rational::{format_rational, pow, rat, serde_rat, Rational};
use hurwitz_tnn::routh::{self, RouthStatus};
use hurwitz_tnn::series::{self, PowerSeries};
use hurwitz_tnn::{Error, Result};

pub const COMMANDS: [&str; 10] = ["series", "matrix", "minor", "tnn", "routh", "cfrac", "factorize", "classify", "fixture", "demo"];

/// One unit of work.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: String,
    #[serde(default)]
    pub input: Value,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: &str, input: Value) -> Self {
        JobSpec { command: command.into(), input, budget: Budget::default(), output: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// A computation with no yes/no question attached finished.
    Consistent,
    Certified,
    Refuted,
    Inconclusive,
    InputError,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Consistent | Outcome::Certified => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
            Outcome::InputError => 3,
        }
    }
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::CertifiedYes => Outcome::Certified,
            Verdict::Refuted => Outcome::Refuted,
            Verdict::Inconclusive => Outcome::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input: Value,
    pub result: Value,
    pub outcome: Outcome,
    pub exit_code: i32,
    /// Every series in the input was an exact polynomial.
    pub exact: bool,
    pub truncated: bool,
    pub wall_time_ms: f64,
}

struct Dispatch {
    result: Value,
    outcome: Outcome,
    exact: bool,
}

impl Dispatch {
    fn new<T: Serialize>(result: &T, outcome: Outcome, exact: bool) -> Result<Self> {
        let result = serde_json::to_value(result).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Dispatch { result, outcome, exact })
    }
}

fn payload<T: DeserializeOwned>(input: &Value) -> Result<T> {
    serde_json::from_value(input.clone()).map_err(|e| Error::Parse(e.to_string()))
}

fn all_exact<'a>(series: impl IntoIterator<Item = &'a PowerSeries>) -> bool {
    series.into_iter().all(PowerSeries::is_polynomial)
}

/// Runs a job; input problems become exit code 3 with a diagnostic.
pub fn run(job: &JobSpec) -> RunReport {
    let start = Instant::now();
    let dispatched = job.budget.validate().and_then(|_| dispatch(&job.command, &job.input, &job.budget));
    let (result, outcome, exact) = match dispatched {
        Ok(d) => (d.result, d.outcome, d.exact),
        Err(e) => (json!({ "error": e.to_string() }), Outcome::InputError, false),
    };
    RunReport {
        command: job.command.clone(),
        input: job.input.clone(),
        result,
        outcome,
        exit_code: outcome.exit_code(),
        exact,
        truncated: !exact && outcome != Outcome::InputError,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn dispatch(command: &str, input: &Value, budget: &Budget) -> Result<Dispatch> {
    match command {
        "series" => series_cmd(payload(input)?),
        "matrix" => matrix_cmd(payload(input)?),
        "minor" => minor_cmd(payload(input)?),
        "tnn" => tnn_cmd(payload(input)?, budget),
        "routh" => routh_cmd(payload(input)?, budget),
        "cfrac" => cfrac_cmd(payload(input)?),
        "factorize" => factorize_cmd(payload(input)?, budget),
        "classify" => classify_cmd(payload(input)?, budget),
        "fixture" => fixture_cmd(payload(input)?),
        "demo" => demo_cmd(payload(input)?),
        other => Err(Error::Parse(format!("unknown command {other:?}; expected one of {}", COMMANDS.join(", ")))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum SeriesOp {
    Add { a: PowerSeries, b: PowerSeries },
    Mul { a: PowerSeries, b: PowerSeries },
    Div { a: PowerSeries, b: PowerSeries, order: usize },
    Derivative { a: PowerSeries },
    Split { a: PowerSeries },
    Reverse { a: PowerSeries, n: usize },
    Gcd { a: PowerSeries, b: PowerSeries },
    Normalize { p: PowerSeries, q: PowerSeries },
    Eval {
        a: PowerSeries,
        #[serde(with = "serde_rat")]
        x: Rational,
    },
}

fn series_cmd(op: SeriesOp) -> Result<Dispatch> {
    let c = Outcome::Consistent;
    match op {
        SeriesOp::Add { a, b } => Dispatch::new(&series::ps_add(&a, &b), c, all_exact([&a, &b])),
        SeriesOp::Mul { a, b } => Dispatch::new(&series::ps_mul(&a, &b), c, all_exact([&a, &b])),
        SeriesOp::Div { a, b, order } => Dispatch::new(&series::ps_div(&a, &b, order)?, c, false),
        SeriesOp::Derivative { a } => Dispatch::new(&series::ps_derivative(&a), c, a.is_polynomial()),
        SeriesOp::Split { a } => {
            let s = series::even_odd_split(&a)?;
            Dispatch::new(
                &json!({ "j": s.j, "f0": format_rational(&s.f0), "q_even": s.q_even, "p_odd": s.p_odd }),
                c,
                a.is_polynomial(),
            )
        }
        SeriesOp::Reverse { a, n } => Dispatch::new(&series::poly_reverse(&a, n)?, c, true),
        SeriesOp::Gcd { a, b } => Dispatch::new(&series::poly_gcd(&a, &b)?, c, true),
        SeriesOp::Normalize { p, q } => {
            let n = series::normalize_pair(&p, &q)?;
            Dispatch::new(&json!({ "p": n.p, "q": n.q, "scale": format_rational(&n.scale) }), c, all_exact([&p, &q]))
        }
        SeriesOp::Eval { a, x } => {
            if !a.is_polynomial() {
                return Err(Error::DomainError("exact evaluation needs a polynomial".into()));
            }
            Dispatch::new(&format_rational(&a.eval(&x)), c, true)
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixInput {
    matrix: MatrixSpec,
    rows: usize,
    cols: usize,
}

fn matrix_cmd(m: MatrixInput) -> Result<Dispatch> {
    Dispatch::new(&matrix::window(&m.matrix, m.rows, m.cols)?, Outcome::Consistent, m.matrix.is_exact())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MinorInput {
    matrix: MatrixSpec,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn minor_cmd(m: MinorInput) -> Result<Dispatch> {
    let index = MinorIndex::new(m.rows, m.cols)?;
    let value = minors::minor(&m.matrix, &index)?;
    Dispatch::new(&json!({ "index": index, "value": format_rational(&value) }), Outcome::Consistent, m.matrix.is_exact())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TnnInput {
    matrix: MatrixSpec,
    n_rows: Option<usize>,
    n_cols: Option<usize>,
    max_order: Option<usize>,
}

fn tnn_cmd(t: TnnInput, budget: &Budget) -> Result<Dispatch> {
    let n = t.n_rows.unwrap_or(budget.window);
    let m = t.n_cols.unwrap_or(n);
    let report = minors::tnn_scan(&t.matrix, n, m, t.max_order.unwrap_or(budget.max_order))?;
    let outcome = if report.is_violated() { Outcome::Refuted } else { Outcome::Consistent };
    Dispatch::new(&report, outcome, t.matrix.is_exact())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput {
    p: PowerSeries,
    q: PowerSeries,
    max_steps: Option<usize>,
}

fn routh_cmd(r: PairInput, budget: &Budget) -> Result<Dispatch> {
    let run = routh::routh_run(&r.p, &r.q, r.max_steps.unwrap_or(budget.max_steps))?;
    let outcome = match run.status {
        RouthStatus::Terminated => Outcome::Consistent,
        RouthStatus::BudgetExhausted => Outcome::Inconclusive,
        RouthStatus::NegativeBeta { .. } | RouthStatus::ZeroBetaNonproportional { .. } => Outcome::Refuted,
    };
    let mut result = serde_json::to_value(&run).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(w) = run.witness() {
        result["witness"] = serde_json::to_value(w).map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(Dispatch { result, outcome, exact: all_exact([&r.p, &r.q]) })
}

#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum CfracOp {
    Correspond { f: PowerSeries, max_terms: usize },
    CorrespondRational { q: PowerSeries, p: PowerSeries, max_terms: usize },
    Convergents { fraction: CFraction, depth: usize },
    Series { fraction: CFraction, order: usize },
    Eval { fraction: CFraction, re: f64, #[serde(default)] im: f64, depth: usize },
    EvalExact {
        fraction: CFraction,
        #[serde(with = "serde_rat")]
        z: Rational,
        depth: usize,
    },
    Worpitzky {
        #[serde(with = "hurwitz_tnn::rational::serde_rat_vec")]
        betas: Vec<Rational>,
        #[serde(default)]
        j0: usize,
    },
}

fn cfrac_cmd(op: CfracOp) -> Result<Dispatch> {
    let c = Outcome::Consistent;
    match op {
        CfracOp::Correspond { f, max_terms } => Dispatch::new(&cfrac::correspond(&f, max_terms), c, f.is_polynomial()),
        CfracOp::CorrespondRational { q, p, max_terms } => {
            Dispatch::new(&cfrac::correspond_rational(&q, &p, max_terms)?, c, all_exact([&p, &q]))
        }
        CfracOp::Convergents { fraction, depth } => Dispatch::new(&cfrac::convergents(&fraction, depth)?, c, true),
        CfracOp::Series { fraction, order } => Dispatch::new(&cfrac::to_series(&fraction, order)?, c, fraction.is_complete()),
        CfracOp::Eval { fraction, re, im, depth } => {
            let v = cfrac::eval(&fraction, Complex64::new(re, im), depth)?;
            Dispatch::new(&json!({ "re": v.re, "im": v.im }), c, false)
        }
        CfracOp::EvalExact { fraction, z, depth } => {
            Dispatch::new(&format_rational(&cfrac::eval_exact(&fraction, &z, depth)?), c, true)
        }
        CfracOp::Worpitzky { betas, j0 } => Dispatch::new(&format_rational(&cfrac::worpitzky_radius(&betas, j0)?), c, true),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorizeInput {
    p: PowerSeries,
    q: PowerSeries,
    max_factors: Option<usize>,
    /// Also decide total nonnegativity of `H(p, q)`.
    #[serde(default)]
    certify: bool,
}

fn factorize_cmd(f: FactorizeInput, budget: &Budget) -> Result<Dispatch> {
    let exact = all_exact([&f.p, &f.q]);
    if f.certify {
        let cert = factorization::tnn_certificate(&f.p, &f.q, budget)?;
        let outcome = match &cert {
            factorization::TnnCertificate::CertifiedTnn { .. } => Outcome::Certified,
            factorization::TnnCertificate::Refuted { .. } => Outcome::Refuted,
            factorization::TnnCertificate::Inconclusive { .. } => Outcome::Inconclusive,
        };
        return Dispatch::new(&cert, outcome, exact);
    }
    let fr = factorization::factorize(&f.p, &f.q, f.max_factors.unwrap_or(budget.max_steps))?;
    let outcome = match fr.status {
        RouthStatus::Terminated => Outcome::Consistent,
        RouthStatus::BudgetExhausted => Outcome::Inconclusive,
        _ => Outcome::Refuted,
    };
    Dispatch::new(&fr, outcome, exact)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyInput {
    predicate: String,
    f: Option<PowerSeries>,
    p: Option<PowerSeries>,
    q: Option<PowerSeries>,
    k_max: Option<usize>,
}

fn need(s: Option<PowerSeries>, name: &str, predicate: &str) -> Result<PowerSeries> {
    s.ok_or_else(|| Error::Parse(format!("predicate {predicate} needs the series {name}")))
}

fn classify_cmd(c: ClassifyInput, budget: &Budget) -> Result<Dispatch> {
    let pr = c.predicate.as_str();
    let k_max = c.k_max.unwrap_or(budget.window);
    let (report, inputs) = match pr {
        "quasi-stable" | "neg-zeros" | "pf" | "hurwitz-profile" => {
            let f = need(c.f, "f", pr)?;
            let r = match pr {
                "quasi-stable" => classify::quasi_stable_check(&f, budget)?,
                "neg-zeros" => classify::entire_neg_zeros_check(&f, budget)?,
                "pf" => classify::is_pf_window(&f, budget.window, budget.max_order)?,
                _ => classify::hurwitz_profile(&f, k_max)?,
            };
            (r, vec![f])
        }
        "s" | "r" | "interlacing" => {
            let (p, q) = (need(c.p, "p", pr)?, need(c.q, "q", pr)?);
            let r = match pr {
                "s" => classify::is_s_profile(&p, &q, k_max)?,
                "r" => classify::is_r_profile(&p, &q, k_max.div_ceil(2))?,
                _ => classify::interlacing_check(&p, &q)?,
            };
            (r, vec![p, q])
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown predicate {other:?}; expected quasi-stable, neg-zeros, pf, hurwitz-profile, s, r or interlacing"
            )))
        }
    };
    Dispatch::new(&report, report.verdict.into(), all_exact(&inputs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomFamily {
    QuasiStable,
    NegativeReal,
    ComplexPair,
    SPoles,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
enum FixtureInput {
    Form {
        form: ZeroPoleSpec,
        #[serde(default)]
        order: usize,
    },
    Poles { poles: SPoleData },
    Random {
        family: RandomFamily,
        seed: u64,
        #[serde(default = "default_count")]
        count: usize,
        #[serde(default = "default_max_degree")]
        max_degree: usize,
    },
}

fn default_count() -> usize {
    1
}

fn default_max_degree() -> usize {
    8
}

/// Seeded fixture batch; the seed is echoed so the batch can be regenerated.
pub fn random_fixtures(family: RandomFamily, seed: u64, count: usize, max_degree: usize) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(count);
    for _ in 0..count {
        let item = match family {
            RandomFamily::SPoles => {
                use rand::Rng;
                let poles = rng.gen_range(1..=max_degree.clamp(1, 4));
                let at_infinity = rng.gen_bool(0.5);
                let data = classify::random_s_pole_data(&mut rng, poles, at_infinity);
                let (p, q) = classify::s_from_poles(&data)?;
                json!({ "poles": data, "p": p, "q": q })
            }
            _ => {
                let form = match family {
                    RandomFamily::QuasiStable => classify::random_quasi_stable(&mut rng, max_degree),
                    RandomFamily::NegativeReal => classify::random_negative_real(&mut rng, max_degree),
                    _ => classify::random_with_complex_pair(&mut rng, max_degree),
                };
                let f = classify::fixture_from_form(&form, 0)?;
                json!({ "form": form, "f": f })
            }
        };
        items.push(item);
    }
    Ok(json!({ "family": family, "seed": seed, "fixtures": items }))
}

fn fixture_cmd(f: FixtureInput) -> Result<Dispatch> {
    let c = Outcome::Consistent;
    match f {
        FixtureInput::Form { form, order } => {
            let s = classify::fixture_from_form(&form, order)?;
            let exact = s.is_polynomial();
            Dispatch::new(&s, c, exact)
        }
        FixtureInput::Poles { poles } => {
            let (p, q) = classify::s_from_poles(&poles)?;
            Dispatch::new(&json!({ "p": p, "q": q, "pole_count": poles.pole_count() }), c, true)
        }
        FixtureInput::Random { family, seed, count, max_degree } => {
            Dispatch::new(&random_fixtures(family, seed, count, max_degree)?, c, true)
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
enum DemoInput {
    Stieltjes {
        n_terms: usize,
        #[serde(default = "default_z")]
        z: f64,
        order: Option<usize>,
    },
}

fn default_z() -> f64 {
    0.5
}

fn demo_cmd(d: DemoInput) -> Result<Dispatch> {
    match d {
        DemoInput::Stieltjes { n_terms, z, order } => {
            let demo = demo_stieltjes(n_terms, z, order.unwrap_or(2 * n_terms + 4))?;
            let outcome = if demo.roundtrip_exact { Outcome::Consistent } else { Outcome::Refuted };
            Dispatch::new(&demo, outcome, true)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StieltjesDemo {
    pub n_terms: usize,
    pub z: f64,
    #[serde(with = "hurwitz_tnn::rational::serde_rat_vec")]
    pub betas: Vec<Rational>,
    /// Convergent values at depths `0..=n_terms`.
    pub values: Vec<f64>,
    /// `|value_d - value_{d-1}|` for `d = 1..=n_terms`.
    pub differences: Vec<f64>,
    /// Full-depth value at `z` in exact arithmetic.
    #[serde(with = "serde_rat")]
    pub exact_value: Rational,
    #[serde(with = "serde_rat")]
    pub worpitzky_radius: Rational,
    pub roundtrip_order: usize,
    #[serde(with = "hurwitz_tnn::rational::serde_rat_vec")]
    pub recovered_betas: Vec<Rational>,
    pub roundtrip_exact: bool,
}

/// Fraction `1 + beta_0 z / (1 + beta_1 z / ...)` with `beta_j = 2^{-j-1}`: its
/// convergents at `z`, the Worpitzky radius, and the recovery of all betas from
/// the order-`order` series of the deepest convergent.
pub fn demo_stieltjes(n_terms: usize, z: f64, order: usize) -> Result<StieltjesDemo> {
    if n_terms < 2 {
        return Err(Error::DomainError("the demo needs at least two terms".into()));
    }
    let betas: Vec<Rational> = (0..n_terms).map(|j| pow(&rat(1, 2), j + 1)).collect();
    let cf = CFraction::regular(Rational::from_integer(1.into()), &betas)?;
    let values = (0..=n_terms).map(|d| cfrac::eval(&cf, Complex64::new(z, 0.0), d).map(|v| v.re)).collect::<Result<Vec<_>>>()?;
    let differences = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let zr = Rational::from_float(z).ok_or_else(|| Error::DomainError(format!("z = {z} is not finite")))?;
    let exact_value = cfrac::eval_exact(&cf, &zr, n_terms)?;
    let radius = cfrac::worpitzky_radius(&betas, 0)?;
    let deepest = cfrac::convergents(&cf, n_terms)?.pop().expect("depth zero always present");
    let s = series::ps_div(&deepest.numerator, &deepest.denominator, order)?;
    let one = PowerSeries::one().to_order(order)?;
    let run = routh::routh_run(&one, &s, n_terms + 1)?;
    let recovered_betas = run.betas.clone();
    let roundtrip_exact = run.b0 == cf.c0 && recovered_betas.len() >= n_terms && recovered_betas[..n_terms] == betas[..];
    Ok(StieltjesDemo {
        n_terms,
        z,
        betas,
        values,
        differences,
        exact_value,
        worpitzky_radius: radius,
        roundtrip_order: order,
        recovered_betas,
        roundtrip_exact,
    })
}

/// Writes through a sibling temporary file so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

pub fn render(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}

/// Runs a job and writes its report to the job's output path, if any.
pub fn run_and_write(job: &JobSpec) -> std::io::Result<RunReport> {
    let report = run(job);
    if let Some(path) = &job.output {
        write_atomic(path, &render(&report))?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub reports: Vec<RunReport>,
    /// Worst exit code over the jobs.
    pub exit_code: i32,
}

/// Independent jobs in parallel, reports in input order.
pub fn batch(jobs: &[JobSpec]) -> std::io::Result<BatchReport> {
    let reports = jobs.par_iter().map(run_and_write).collect::<std::io::Result<Vec<_>>>()?;
    let exit_code = reports.iter().map(|r| r.exit_code).max().unwrap_or(0);
    Ok(BatchReport { reports, exit_code })
}

/// `"[1,2,1]"` style flags: JSON when it parses, a bare string otherwise.
pub fn flag_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Budget override used by the binary; `None` keeps the default.
pub fn budget_with(window: Option<usize>, max_order: Option<usize>, max_steps: Option<usize>, rho: Option<&str>) -> Result<Budget> {
    let d = Budget::default();
    let rho = match rho {
        Some(r) => hurwitz_tnn::parse_rational(r)?,
        None => d.rho,
    };
    let b = Budget {
        window: window.unwrap_or(d.window),
        max_order: max_order.unwrap_or(d.max_order),
        max_steps: max_steps.unwrap_or(d.max_steps),
        rho,
    };
    b.validate()?;
    Ok(b)
}
