use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use ultrafix::json::ElementJson;
use ultrafix::problem::{
    build_builtin, resolve_boundary, BoundaryJson, CoupledJson, EvalJson, EvalRequest, Overrides, RecurrenceJson,
    TreeJson,
};
use ultrafix::recurrence::DEFAULT_SAFETY_MARGIN;
use ultrafix::{
    backward_sweep, invariant_solution, padic_exp, padic_log, solve_coupled, solve_recurrence, uniqueness_gap,
    verify_contraction, AlgebraElement, Boundary, Error, SeriesBudget, SolveOptions, Valuation,
};

#[derive(Parser)]
#[command(name = "ultrafix", version, about = "Exact p-adic fixed-point solvers")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Prime p; overrides the spec file.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Working precision in p-adic digits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Target valuation for the stopping rule.
    #[arg(long, global = true)]
    target: Option<i64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a recurrence to its limit.
    Solve { spec: PathBuf },
    /// Solve a coupled three-sequence system.
    Coupled { spec: PathBuf },
    /// Backward sweep over a finite tree.
    Tree {
        spec: PathBuf,
        /// Second boundary for a uniqueness gap: "random", "random:SEED", "constant" or a JSON boundary.
        #[arg(long)]
        compare_boundary: Option<String>,
        /// Also compute the translation-invariant solution.
        #[arg(long)]
        invariant: bool,
    },
    /// Sample-check a builtin map for contraction and closure.
    Verify {
        map: String,
        /// JSON parameter block, or @FILE.
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Evaluate a map, exp or log.
    Eval { spec: PathBuf },
}

enum Failure {
    Lib(Error),
    Usage(String),
    VerifyFailed(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::VerifyFailed(_) => 5,
            Failure::Lib(e) if e.is_domain() => 2,
            Failure::Lib(Error::Precision(_)) => 3,
            Failure::Lib(Error::MaxIterations(_)) => 4,
            Failure::Lib(_) => 1,
        }
    }
}

type Outcome = std::result::Result<Output, Failure>;

struct Output {
    json: Value,
    csv: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = cli.run.clone();
    let result = match cli.command {
        Command::Solve { spec } => cmd_solve(&spec, &run),
        Command::Coupled { spec } => cmd_coupled(&spec, &run),
        Command::Tree { spec, compare_boundary, invariant } => {
            cmd_tree(&spec, &run, compare_boundary.as_deref(), invariant)
        }
        Command::Verify { map, params, samples } => cmd_verify(&map, params.as_deref(), samples, &run),
        Command::Eval { spec } => cmd_eval(&spec, &run),
    };
    match result {
        Ok(out) => {
            emit(&out, run.format);
            ExitCode::SUCCESS
        }
        Err(Failure::VerifyFailed(report)) => {
            let csv = verify_csv(&report);
            emit(&Output { json: report, csv }, run.format);
            ExitCode::from(5)
        }
        Err(f) => {
            let msg = match &f {
                Failure::Lib(e) => e.to_string(),
                Failure::Usage(m) => m.clone(),
                Failure::VerifyFailed(_) => unreachable!(),
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn emit(out: &Output, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
        Format::Csv => print!("{}", out.csv),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn schema_text(kind: &str) -> &'static str {
    match kind {
        "recurrence" => include_str!("../../../docs/schemas/recurrence.schema.json"),
        "coupled" => include_str!("../../../docs/schemas/coupled.schema.json"),
        "tree" => include_str!("../../../docs/schemas/tree.schema.json"),
        _ => include_str!("../../../docs/schemas/eval.schema.json"),
    }
}

/// Reads a spec file and checks it against the shipped schema for `kind`.
fn read_spec(path: &Path, kind: &str) -> std::result::Result<String, Failure> {
    let text = read(path)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let schema: Value = serde_json::from_str(schema_text(kind)).expect("bundled schema is JSON");
    let validator = jsonschema::validator_for(&schema).expect("bundled schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(&doc)
        .map(|err| {
            let at = err.instance_path().to_string();
            format!("at {}: {err}", if at.is_empty() { "/" } else { &at })
        })
        .collect();
    if !errors.is_empty() {
        return Err(Failure::Usage(format!("{kind} spec {}", errors.join("; "))));
    }
    Ok(text)
}

fn overrides(run: &RunConfig) -> Overrides {
    Overrides { prime: run.prime, precision: run.precision, seed: run.seed }
}

/// Command line, then spec file, then `precision - margin`.
fn options(
    run: &RunConfig,
    spec_target: Option<i64>,
    spec_max_iter: Option<usize>,
    digits: u32,
) -> std::result::Result<SolveOptions, Failure> {
    let margin = DEFAULT_SAFETY_MARGIN as i64;
    let target = run.target.or(spec_target).unwrap_or(digits as i64 - margin);
    if target < 1 {
        return Err(Failure::Usage(format!("target: must be positive, got {target}")));
    }
    if target + margin > digits as i64 {
        return Err(Failure::Lib(Error::Precision(format!(
            "target {target} plus safety margin {margin} exceeds precision {digits}"
        ))));
    }
    let mut opts = SolveOptions::new(target);
    if let Some(m) = run.max_iter.or(spec_max_iter) {
        opts = opts.max_iter(m);
    }
    Ok(opts)
}

fn valuation(v: Valuation) -> Value {
    match v {
        Valuation::Finite(n) => json!(n),
        Valuation::Infinite => json!("inf"),
    }
}

fn element(x: &AlgebraElement) -> Value {
    serde_json::to_value(ElementJson::from(x)).expect("serializable")
}

fn trace_csv(header: &str, trace: &[(usize, Valuation)]) -> String {
    let mut s = format!("{header}\n");
    for (n, v) in trace {
        let _ = writeln!(s, "{n},{v}");
    }
    s
}

fn cmd_solve(path: &Path, run: &RunConfig) -> Outcome {
    let problem = RecurrenceJson::parse(&read_spec(path, "recurrence")?)?.build(&overrides(run))?;
    let opts = options(run, problem.target, problem.max_iter, problem.context.digits)?;
    let cert = solve_recurrence(&problem.spec, &problem.initial, opts)?;
    let json = json!({
        "command": "solve",
        "prime": problem.context.prime,
        "precision": problem.context.digits,
        "target": opts.target_valuation,
        "seed": run.seed,
        "certificate": cert,
    });
    Ok(Output { json, csv: trace_csv("n,valuation", &cert.trace) })
}

fn cmd_coupled(path: &Path, run: &RunConfig) -> Outcome {
    let problem = CoupledJson::parse(&read_spec(path, "coupled")?)?.build(&overrides(run))?;
    let opts = options(run, problem.target, problem.max_iter, problem.context.digits)?;
    let [x, y, z] = &problem.initial;
    let cert = solve_coupled(&problem.spec, (x, y, z), opts)?;
    let json = json!({
        "command": "coupled",
        "prime": problem.context.prime,
        "precision": problem.context.digits,
        "target": opts.target_valuation,
        "seed": run.seed,
        "certificate": cert,
    });
    Ok(Output { json, csv: trace_csv("n,d_valuation", &cert.d_trace) })
}

/// SHA-256 over the canonical text of every value on a level.
fn digest(level: &[AlgebraElement]) -> String {
    let mut h = Sha256::new();
    for x in level {
        h.update(x.to_string().as_bytes());
        h.update(b"\n");
    }
    format!("{:x}", h.finalize())
}

fn compare_boundary(text: &str, ctx: &ultrafix::problem::Context) -> std::result::Result<Boundary, Failure> {
    if text == "random" {
        return Ok(Boundary::Random { seed: ctx.seed.wrapping_add(1) });
    }
    if let Some(seed) = text.strip_prefix("random:") {
        let seed = seed.parse().map_err(|_| Failure::Usage(format!("--compare-boundary: bad seed {seed:?}")))?;
        return Ok(Boundary::Random { seed });
    }
    let parsed: BoundaryJson = if text == "constant" {
        BoundaryJson::Keyword(text.into())
    } else {
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("--compare-boundary: {e}")))?
    };
    Ok(resolve_boundary(&parsed, ctx, "--compare-boundary")?)
}

fn cmd_tree(path: &Path, run: &RunConfig, compare: Option<&str>, invariant: bool) -> Outcome {
    let setup = TreeJson::parse(&read_spec(path, "tree")?)?.build(&overrides(run))?;
    let solution = backward_sweep(&setup.problem)?;
    let mut csv = String::from("level,vertices,digest,gap\n");
    let report = compare.map(|c| compare_boundary(c, &setup.context)).transpose()?;
    let report = report.map(|b| uniqueness_gap(&setup.problem, &b)).transpose()?;
    let levels: Vec<Value> = (0..=solution.depth())
        .map(|d| {
            let values = solution.level(d);
            let dg = digest(values);
            let gap = report.as_ref().map(|r| r.level_gaps[d].1);
            let _ = writeln!(csv, "{d},{},{dg},{}", values.len(), gap.map_or(String::new(), |g| g.to_string()));
            json!({"level": d, "vertices": values.len(), "digest": dg})
        })
        .collect();
    let mut json = json!({
        "command": "tree",
        "prime": setup.context.prime,
        "precision": setup.context.digits,
        "seed": run.seed,
        "depth": solution.depth(),
        "root": element(solution.root()),
        "min_residual_valuation": valuation(solution.min_residual()),
        "levels": levels,
    });
    if let Some(r) = report {
        json["uniqueness"] = serde_json::to_value(r).expect("serializable");
    }
    if invariant {
        let opts = options(run, setup.target, None, setup.context.digits)?;
        let u = invariant_solution(&setup.problem, opts)?;
        json["invariant"] = json!({
            "value": element(&u.value),
            "residual_valuation": valuation(u.residual_valuation),
            "iterations": u.certificate.iterations,
        });
    }
    Ok(Output { json, csv })
}

fn verify_csv(report: &Value) -> String {
    let fields = ["label", "samples", "declared_exponent", "min_observed_gap", "closure_violations", "pass"];
    let row: Vec<String> = fields
        .iter()
        .map(|f| match &report[f] {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        })
        .collect();
    format!("{}\n{}\n", fields.join(","), row.join(","))
}

fn cmd_verify(id: &str, params: Option<&str>, samples: usize, run: &RunConfig) -> Outcome {
    let text = match params {
        Some(p) => match p.strip_prefix('@') {
            Some(file) => read(Path::new(file))?,
            None => p.to_string(),
        },
        None => "null".to_string(),
    };
    let params: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--params: {e}")))?;
    let ctx = overrides(run).context(None, None)?;
    let map = build_builtin(id, &params, &ctx, "map")?;
    let report = verify_contraction(&map, samples, run.seed)?;
    let json = json!({
        "command": "verify",
        "prime": ctx.prime,
        "precision": ctx.digits,
        "seed": run.seed,
        "label": report.label,
        "samples": report.samples,
        "declared_exponent": report.declared_exponent,
        "min_observed_gap": valuation(report.min_observed_gap),
        "closure_violations": report.closure_violations,
        "pass": report.pass,
    });
    if !report.pass {
        return Err(Failure::VerifyFailed(json));
    }
    let csv = verify_csv(&json);
    Ok(Output { json, csv })
}

fn cmd_eval(path: &Path, run: &RunConfig) -> Outcome {
    let (ctx, request) = EvalJson::parse(&read_spec(path, "eval")?)?.build(&overrides(run))?;
    let budget = SeriesBudget::for_digits(ctx.digits);
    let value: AlgebraElement = match request {
        EvalRequest::Map { map, args } => map.eval(&args)?,
        EvalRequest::Exp(x) => padic_exp(&x, budget)?.into(),
        EvalRequest::Log(x) => padic_log(&x, budget)?.into(),
    };
    let mut csv = String::from("component,value\n");
    for (i, c) in value.components().iter().enumerate() {
        let _ = writeln!(csv, "{i},{c}");
    }
    let json = json!({
        "command": "eval",
        "prime": ctx.prime,
        "precision": ctx.digits,
        "value": element(&value),
        "canonical": value.to_string(),
    });
    Ok(Output { json, csv })
}
