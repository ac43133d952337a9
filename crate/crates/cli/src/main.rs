use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use hurwitz_tnn_cli::{batch, budget_with, flag_value, render, run_and_write, JobSpec};

/// Exact total-nonnegativity tools for Hurwitz-type matrices.
///
/// Series flags take ascending coefficients, e.g. `--f "[1,2,1]"` for 1 + 2z + z^2,
/// or the object form `{"coeffs": [...], "order": N}` for truncated series.
/// Exit codes: 0 certified or consistent, 1 refuted, 2 inconclusive, 3 input error.
#[derive(Parser, Debug)]
#[command(name = "htnn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Window side for scans and reconstruction checks (default 12).
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Largest minor order scanned (default 4).
    #[arg(long, global = true)]
    max_order: Option<usize>,
    /// Recurrence step limit (default 32).
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Weight in (0, 1] of the residual norm (default 1/2).
    #[arg(long, global = true)]
    rho: Option<String>,
    /// Also write the report here, atomically.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Raw JSON payload, replacing the per-command flags.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Read the JSON payload from a file.
    #[arg(long, global = true)]
    input_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Series arithmetic: --op add|mul|div|derivative|split|reverse|gcd|normalize|eval.
    Series(Fields),
    /// Top-left window of a structured matrix: --kind ... --rows N --cols M.
    Matrix(Fields),
    /// One minor: --kind ... --rows "[2,3]" --cols "[2,3]".
    Minor(Fields),
    /// Scan all minors up to --max-order in a window.
    Tnn(Fields),
    /// Continued-fraction recurrence on a pair: --p ... --q ....
    Routh(Fields),
    /// Continued fractions: --op correspond|correspond_rational|convergents|series|eval|eval_exact|worpitzky.
    Cfrac(Fields),
    /// Bidiagonal-type factorization of H(p, q); --certify decides total nonnegativity.
    Factorize(Fields),
    /// Class-membership predicates: --predicate quasi-stable|neg-zeros|pf|hurwitz-profile|s|r|interlacing.
    Classify(Fields),
    /// Fixtures: --source form|poles|random.
    Fixture(Fields),
    /// Reproducibility demos: --name stieltjes --n-terms N --z X.
    Demo(Fields),
    /// Run a JSON array of jobs in parallel.
    Batch {
        /// File holding `[{"command": ..., "input": ..., "budget": ..., "output": ...}, ...]`.
        jobs: PathBuf,
    },
}

/// Flags shared by the commands; each command accepts the subset its payload names.
#[derive(Args, Debug, Default)]
struct Fields {
    #[arg(long)]
    op: Option<String>,
    /// Matrix kind: hurwitz_pair, toeplitz, hurwitz_f, d_matrix, j_factor, h_one_one, diag_trim, product.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// JSON array of matrix specs for --kind product.
    #[arg(long)]
    factors: Option<String>,
    #[arg(long)]
    rows: Option<String>,
    #[arg(long)]
    cols: Option<String>,
    #[arg(long)]
    n_rows: Option<String>,
    #[arg(long)]
    n_cols: Option<String>,
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    max_terms: Option<String>,
    #[arg(long)]
    fraction: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    re: Option<String>,
    #[arg(long)]
    im: Option<String>,
    #[arg(long)]
    betas: Option<String>,
    #[arg(long)]
    j0: Option<String>,
    #[arg(long)]
    max_factors: Option<String>,
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    predicate: Option<String>,
    #[arg(long)]
    k_max: Option<String>,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    poles: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    count: Option<String>,
    #[arg(long)]
    max_degree: Option<String>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    n_terms: Option<String>,
}

const MATRIX_KEYS: [&str; 7] = ["kind", "f", "p", "q", "c", "beta", "factors"];

impl Fields {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("op", &self.op),
            ("kind", &self.kind),
            ("f", &self.f),
            ("p", &self.p),
            ("q", &self.q),
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("beta", &self.beta),
            ("factors", &self.factors),
            ("rows", &self.rows),
            ("cols", &self.cols),
            ("n_rows", &self.n_rows),
            ("n_cols", &self.n_cols),
            ("order", &self.order),
            ("n", &self.n),
            ("x", &self.x),
            ("max_terms", &self.max_terms),
            ("fraction", &self.fraction),
            ("depth", &self.depth),
            ("z", &self.z),
            ("re", &self.re),
            ("im", &self.im),
            ("betas", &self.betas),
            ("j0", &self.j0),
            ("max_factors", &self.max_factors),
            ("predicate", &self.predicate),
            ("k_max", &self.k_max),
            ("source", &self.source),
            ("form", &self.form),
            ("poles", &self.poles),
            ("family", &self.family),
            ("seed", &self.seed),
            ("count", &self.count),
            ("max_degree", &self.max_degree),
            ("name", &self.name),
            ("n_terms", &self.n_terms),
        ]
    }

    fn payload(&self, command: &str) -> Value {
        let nest_matrix = matches!(command, "matrix" | "minor" | "tnn");
        let mut top = Map::new();
        let mut matrix = Map::new();
        for (key, raw) in self.pairs() {
            let Some(raw) = raw else { continue };
            // names like quasi-stable or stieltjes stay strings
            let value = match key {
                "op" | "kind" | "predicate" | "source" | "family" | "name" => Value::String(raw.clone()),
                _ => flag_value(raw),
            };
            if nest_matrix && MATRIX_KEYS.contains(&key) {
                matrix.insert(key.into(), value);
            } else {
                top.insert(key.into(), value);
            }
        }
        if self.certify {
            top.insert("certify".into(), Value::Bool(true));
        }
        if !matrix.is_empty() {
            top.insert("matrix".into(), Value::Object(matrix));
        }
        Value::Object(top)
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code.clamp(0, 255) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            exit(3)
        }
    }
}

fn real_main(cli: Cli) -> anyhow::Result<i32> {
    let g = cli.global;
    let (name, fields) = match &cli.command {
        Command::Batch { jobs } => {
            let text = fs::read_to_string(jobs).with_context(|| format!("reading {}", jobs.display()))?;
            let jobs: Vec<JobSpec> = serde_json::from_str(&text).context("parsing the job list")?;
            let report = batch(&jobs)?;
            let text = serde_json::to_string_pretty(&report)? + "\n";
            if let Some(path) = &g.output {
                hurwitz_tnn_cli::write_atomic(path, &text)?;
            }
            print!("{text}");
            return Ok(report.exit_code);
        }
        Command::Series(f) => ("series", f),
        Command::Matrix(f) => ("matrix", f),
        Command::Minor(f) => ("minor", f),
        Command::Tnn(f) => ("tnn", f),
        Command::Routh(f) => ("routh", f),
        Command::Cfrac(f) => ("cfrac", f),
        Command::Factorize(f) => ("factorize", f),
        Command::Classify(f) => ("classify", f),
        Command::Fixture(f) => ("fixture", f),
        Command::Demo(f) => ("demo", f),
    };
    let budget = match budget_with(g.window, g.max_order, g.max_steps, g.rho.as_deref()) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(3);
        }
    };
    let input = match (&g.input, &g.input_file) {
        (Some(raw), _) => serde_json::from_str(raw).context("parsing --input")?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).context("parsing --input-file")?
        }
        (None, None) => fields.payload(name),
    };
    let job = JobSpec { command: name.into(), input, budget, output: g.output };
    let report = run_and_write(&job)?;
    print!("{}", render(&report));
    if report.exit_code == 3 {
        eprintln!("error: {}", report.result["error"].as_str().unwrap_or("invalid input"));
    }
    Ok(report.exit_code)
}
