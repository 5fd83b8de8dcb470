use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use qnet_core::certificates::lp::verify_against;
use qnet_core::certificates::{
    check_support_constraints, cycle_xi_problem, finner_slack, ineq_lhs, ineq_sign, lp_feasible,
    qutrit_forced_solution, qutrit_marginal_problem, threshold::threshold_sweep,
    triangle_marginal_problem, FeasibilityStatus, SupportKind, Threshold,
};
use qnet_core::engine::{cycle_distribution_with, total_variation, DistributionOptions, DEFAULT_CAP};
use qnet_core::exact::{format_rational, parse_rational, rational, rational_to_f64};
use qnet_core::trilocal::{
    boundary_model, boundary_u_sq, solve_boundary_params, uniform_chi_model, write_samples_csv,
    TrilocalModel,
};
use qnet_core::{CycleNetwork, Error as CoreError, JointBasis, Label, Real, SchmidtState};
use serde_json::{json, Value};

const EXIT_CONFIG: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_NONLOCAL: u8 = 10;
const EXIT_NO_SOLUTION: u8 = 11;

#[derive(Parser)]
#[command(name = "qnet")]
#[command(about = "Outcome distributions and locality certificates for cycle-shaped quantum networks")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the full outcome distribution of a network
    Distribution {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Compute in floating point even for exact inputs
        #[arg(long)]
        float: bool,
        /// Largest outcome space to materialize
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Run support, Finner and marginal-feasibility checks
    Certify {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Path of the JSON report (stdout when absent)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep the largest u² compatible with a classical model
    Threshold {
        /// First lambda0² of an evenly spaced sweep
        #[arg(long, default_value_t = 0.01)]
        from: f64,
        /// Last lambda0² of the sweep
        #[arg(long, default_value_t = 0.99)]
        to: f64,
        /// Number of sweep points
        #[arg(long, default_value_t = 99)]
        steps: usize,
        /// Explicit comma-separated lambda0² values, replacing the sweep
        #[arg(long, value_delimiter = ',')]
        at: Vec<String>,
        /// Bisection tolerance on u²
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Path of the CSV (stdout when absent)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a classical model of the qubit triangle and compare it to the quantum distribution
    Model {
        /// The u² = 1/2 model with XOR-ed coins on the χ outputs
        #[arg(long, conflicts_with = "boundary", required_unless_present = "boundary")]
        uniform_chi: bool,
        /// The model at the threshold u², with solved trit and bit weights
        #[arg(long, visible_alias = "appendix-d")]
        boundary: bool,
        /// Measurement parameter u² (default 1/2 or the threshold value)
        #[arg(long)]
        u2: Option<String>,
        /// Draw this many samples from the model
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for sampling
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Path of the model JSON (stdout when absent)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Path of the sample CSV
        #[arg(long, default_value = "samples.csv")]
        samples_output: PathBuf,
    },
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Qubit triangle
    #[arg(long, group = "shape")]
    triangle: bool,
    /// Qutrit triangle with the built-in example basis
    #[arg(long, group = "shape")]
    qutrit_example: bool,
    /// Qubit cycle with this many parties
    #[arg(long, group = "shape")]
    cycle: Option<usize>,
    /// Network description in JSON
    #[arg(long, group = "shape")]
    network: Option<PathBuf>,
    /// Measurement parameter u² (rational or decimal)
    #[arg(long)]
    u2: Option<String>,
    /// Source weight lambda0² (rational or decimal)
    #[arg(long)]
    lambda02: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path (stdout when absent)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Invalid command-line input; exits with code 2.
#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

enum Scenario {
    QubitTriangle { lambda0_sq: BigRational, u_sq: BigRational },
    QubitCycle { n: usize, lambda0_sq: BigRational, u_sq: BigRational },
    QutritExample,
    Custom,
}

fn parse_fraction(name: &str, text: &str) -> Result<BigRational> {
    parse_rational(text).ok_or_else(|| config(format!("--{name}: cannot read `{text}` as a number")))
}

impl ScenarioArgs {
    fn build(&self) -> Result<(CycleNetwork, Scenario)> {
        let lambda0_sq = match &self.lambda02 {
            Some(t) => parse_fraction("lambda02", t)?,
            None => rational(1, 2),
        };
        let u_sq = || -> Result<BigRational> {
            let t = self.u2.as_ref().ok_or_else(|| config("--u2 is required for qubit scenarios"))?;
            parse_fraction("u2", t)
        };
        if self.triangle {
            let u_sq = u_sq()?;
            let net = CycleNetwork::qubit_triangle(&lambda0_sq, &u_sq)?;
            Ok((net, Scenario::QubitTriangle { lambda0_sq, u_sq }))
        } else if let Some(n) = self.cycle {
            let u_sq = u_sq()?;
            let net = CycleNetwork::uniform(
                n,
                SchmidtState::qubit_from_square(&lambda0_sq)?,
                JointBasis::qubit_from_square(&u_sq)?,
            )?;
            Ok((net, Scenario::QubitCycle { n, lambda0_sq, u_sq }))
        } else if self.qutrit_example {
            Ok((CycleNetwork::qutrit_triangle(JointBasis::qutrit_example())?, Scenario::QutritExample))
        } else if let Some(path) = &self.network {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
            Ok((CycleNetwork::from_json(&text)?, Scenario::Custom))
        } else {
            Err(config("choose one of --triangle, --qutrit-example, --cycle N, --network FILE"))
        }
    }
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, value: &Value) -> Result<()> {
    let mut out = writer(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn support_kind(net: &CycleNetwork) -> Option<SupportKind> {
    let labels = net.measurement(0).labels().to_vec();
    if !net.measurements().iter().all(|m| m.labels() == labels.as_slice()) {
        return None;
    }
    if labels == [Label::Up, Label::Down, Label::Chi(0), Label::Chi(1)] {
        Some(SupportKind::QubitCycle)
    } else if net.n_parties() == 3 && labels.iter().any(|l| matches!(l, Label::ChiDown(_))) {
        Some(SupportKind::QutritTriangle)
    } else {
        None
    }
}

fn cmd_distribution(scenario: &ScenarioArgs, out: &OutputArgs, float: bool, cap: u128) -> Result<u8> {
    let (net, _) = scenario.build()?;
    let dist = cycle_distribution_with(&net, &DistributionOptions { cap, force_float: float })?;
    match out.format {
        Format::Csv => {
            let mut w = writer(out.output.as_deref())?;
            dist.write_csv(&mut w)?;
            w.flush()?;
        }
        Format::Json => write_json(out.output.as_deref(), &dist.to_json())?,
    }
    let total = match dist.exact_probs() {
        Some(p) => format!("{} (exact)", format_rational(&p.iter().sum())),
        None => format!("{:.17}", dist.total()),
    };
    eprintln!("outcomes: {}, total probability: {total}", dist.len());
    if let Some(kind) = support_kind(&net) {
        let report = check_support_constraints(&dist, kind);
        eprintln!(
            "support constraints: {} checks, max deviation {:e}",
            report.checks.len(),
            report.max_deviation()
        );
    }
    Ok(0)
}

fn cmd_certify(scenario: &ScenarioArgs, output: Option<&Path>) -> Result<u8> {
    let (net, kind) = scenario.build()?;
    let dist = cycle_distribution_with(&net, &DistributionOptions::default())?;
    let mut nonlocal = Vec::new();
    let mut report = serde_json::Map::new();

    if let Some(k) = support_kind(&net) {
        let support = check_support_constraints(&dist, k);
        if !support.holds(1e-12) {
            nonlocal.push("support");
        }
        report.insert("support".into(), json!({ "holds": support.holds(1e-12), "checks": support.checks }));
    }
    let finner = finner_slack(&dist)?;
    if !finner.holds(1e-12) {
        nonlocal.push("finner");
    }
    report.insert("finner".into(), json!({ "holds": finner.holds(1e-12), "min_slack": finner.min_slack() }));

    let mut run_lp = |name: &str, problem: qnet_core::certificates::FeasibilityProblem| -> Result<()> {
        let result = lp_feasible(&problem)?;
        verify_against(&problem, &result)?;
        if result.status == FeasibilityStatus::Infeasible {
            nonlocal.push("marginal LP");
        }
        let farkas: Option<Value> = result.farkas.as_ref().map(|y| {
            problem
                .constraints
                .iter()
                .zip(y)
                .map(|(c, v)| (c.name.clone(), Value::String(v.to_string())))
                .collect::<serde_json::Map<_, _>>()
                .into()
        });
        report.insert(
            "marginal_lp".into(),
            json!({ "problem": name, "status": result.status, "farkas": farkas, "witness": result.witness }),
        );
        Ok(())
    };
    match &kind {
        Scenario::QubitTriangle { lambda0_sq, u_sq } => {
            run_lp("triangle", triangle_marginal_problem(lambda0_sq, u_sq)?)?;
            let (l0, u) = (Real::sqrt_rational(lambda0_sq), Real::sqrt_rational(u_sq));
            let lhs = ineq_lhs(&l0, &u)?;
            let sign = ineq_sign(&l0, &u)?;
            if sign == std::cmp::Ordering::Less {
                nonlocal.push("inequality");
            }
            report.insert("inequality".into(), json!({ "lhs": lhs.value(), "exact": lhs, "sign": sign as i8 }));
        }
        Scenario::QubitCycle { n, lambda0_sq, u_sq } => {
            if n % 2 == 1 && *lambda0_sq == rational(1, 2) {
                run_lp("odd cycle", cycle_xi_problem(*n, u_sq)?)?;
            } else {
                report.insert(
                    "marginal_lp".into(),
                    json!({ "skipped": "needs an odd cycle with maximally entangled sources" }),
                );
            }
        }
        Scenario::QutritExample => {
            let (up, down) = JointBasis::qutrit_example_eta();
            run_lp("qutrit", qutrit_marginal_problem(&up, &down)?)?;
            let forced = qutrit_forced_solution(&up, &down)?;
            let negative: Vec<Value> = forced
                .negative_entries()
                .into_iter()
                .map(|(t, i, j, v)| json!({ "matrix": format!("M{t}"), "row": i, "col": j, "value": v }))
                .collect();
            report.insert("forced".into(), json!({ "solution": forced, "negative_entries": negative }));
        }
        Scenario::Custom => {}
    }

    let verdict = if nonlocal.is_empty() { "consistent-with-local" } else { "nonlocal" };
    report.insert("verdict".into(), json!(verdict));
    report.insert("certified_by".into(), json!(nonlocal));
    write_json(output, &Value::Object(report))?;
    eprintln!("verdict: {verdict}");
    Ok(if nonlocal.is_empty() { 0 } else { EXIT_NONLOCAL })
}

fn cmd_threshold(from: f64, to: f64, steps: usize, at: &[String], tol: f64, output: Option<&Path>) -> Result<u8> {
    let points: Vec<f64> = if at.is_empty() {
        if steps == 0 || !(from > 0.0 && to < 1.0 && from <= to) {
            bail!(config("need 0 < --from <= --to < 1 and --steps >= 1"));
        }
        if steps == 1 {
            vec![from]
        } else {
            (0..steps).map(|k| from + (to - from) * k as f64 / (steps - 1) as f64).collect()
        }
    } else {
        at.iter()
            .map(|t| parse_fraction("at", t).map(|q| rational_to_f64(&q)))
            .collect::<Result<_>>()?
    };
    let rows = threshold_sweep(&points, tol)?;
    let mut out = writer(output)?;
    writeln!(out, "lambda0_sq,u_max_sq")?;
    for row in &rows {
        match row.threshold {
            Threshold::Root { u_sq } => writeln!(out, "{:.16e},{:.16e}", row.lambda0_sq, u_sq)?,
            Threshold::NoThreshold => writeln!(out, "{:.16e},none", row.lambda0_sq)?,
        }
    }
    out.flush()?;
    Ok(0)
}

fn qubit_triangle_float(u_sq: f64) -> Result<CycleNetwork> {
    let basis = JointBasis::qubit(Real::float(u_sq.sqrt()))?;
    Ok(CycleNetwork::uniform(3, SchmidtState::maximally_entangled(2)?, basis)?)
}

struct ModelArgs<'a> {
    boundary: bool,
    u2: Option<&'a str>,
    samples: Option<usize>,
    seed: u64,
    output: Option<&'a Path>,
    samples_output: &'a Path,
}

fn cmd_model(args: ModelArgs) -> Result<u8> {
    let (model, quantum, mut report): (TrilocalModel, _, _) = if args.boundary {
        let u_sq = match args.u2 {
            Some(t) => rational_to_f64(&parse_fraction("u2", t)?),
            None => boundary_u_sq()?,
        };
        let (params, residuals) = solve_boundary_params(u_sq)?;
        let model = boundary_model(&params)?;
        let quantum = cycle_distribution_with(&qubit_triangle_float(u_sq)?, &DistributionOptions::default())?;
        let report = json!({
            "kind": "boundary",
            "u_sq": u_sq,
            "params": params,
            "max_residual": residuals.max_abs(),
            "residuals": residuals,
        });
        (model, quantum, report)
    } else {
        let u_sq = match args.u2 {
            Some(t) => parse_fraction("u2", t)?,
            None => rational(1, 2),
        };
        let net = CycleNetwork::qubit_triangle(&rational(1, 2), &u_sq)?;
        let quantum = cycle_distribution_with(&net, &DistributionOptions::default())?;
        (uniform_chi_model()?, quantum, json!({ "kind": "uniform-chi", "u_sq": format_rational(&u_sq) }))
    };
    let dist = model.evaluate()?;
    let tv = total_variation(&dist, &quantum)?;
    report["total_variation"] = json!(tv);
    report["model"] = model.to_json();
    write_json(args.output, &report)?;
    eprintln!("total variation to the quantum distribution: {tv:e}");
    if let Some(n) = args.samples {
        let samples = model.sample(n, args.seed)?;
        let mut w = writer(Some(args.samples_output))?;
        write_samples_csv(&samples, &mut w)?;
        w.flush()?;
        eprintln!("wrote {n} samples to {}", args.samples_output.display());
    }
    Ok(0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return EXIT_CONFIG;
    }
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::ResourceLimit { .. }) => EXIT_CAP,
        Some(CoreError::NoSolution(_)) => EXIT_NO_SOLUTION,
        Some(
            CoreError::Domain(_)
            | CoreError::Parse(_)
            | CoreError::DimensionMismatch(_)
            | CoreError::NotNormalized { .. }
            | CoreError::NotOrthogonal { .. }
            | CoreError::LabelMismatch { .. }
            | CoreError::InexactData(_),
        ) => EXIT_CONFIG,
        _ => 1,
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        cause
            .downcast_ref::<io::Error>()
            .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn configure_threads() -> Result<()> {
    if let Ok(text) = std::env::var("QNET_THREADS") {
        let n: usize = text
            .trim()
            .parse()
            .map_err(|_| config(format!("QNET_THREADS must be a positive integer, got `{text}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("cannot configure thread pool: {e}"))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Distribution { scenario, out, float, cap } => cmd_distribution(&scenario, &out, float, cap),
        Command::Certify { scenario, output } => cmd_certify(&scenario, output.as_deref()),
        Command::Threshold { from, to, steps, at, tol, output } => {
            cmd_threshold(from, to, steps, &at, tol, output.as_deref())
        }
        Command::Model { uniform_chi: _, boundary, u2, samples, seed, output, samples_output } => {
            cmd_model(ModelArgs {
                boundary,
                u2: u2.as_deref(),
                samples,
                seed,
                output: output.as_deref(),
                samples_output: &samples_output,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
