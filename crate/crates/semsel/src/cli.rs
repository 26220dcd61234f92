//! Command-line front end: `generate`, `solve`, `sweep`, and `check`.
//!
//! Exit codes: 0 success (feasible, or all checks passed), 1 infeasible
//! input or a detected solver violation, 2 bad flags, 3 I/O failure,
//! 4 malformed or unsuitable input. Data goes to stdout (or `-o`),
//! diagnostics to stderr. Output files are written atomically.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::check::{run_check, CheckConfig};
use crate::io::{
    detect_input, instance_to_json, outcome_to_json, read_to_string, write_atomic, SolveInput,
};
use crate::knapsack::{
    brute_force_solve, dp_solve, fptas_solve, integerize, Instance, SolveOutcome,
};
use crate::scenario::{generate_scenario, scenario_to_instance, GenerationParams};
use crate::sweep::{
    metadata_json, run_sweep, write_csv, Axis, InfeasiblePolicy, SolverKind, SweepError, SweepSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_BAD_FLAGS: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "semsel",
    version,
    about = "Select semantic-extraction models on an edge server via typed knapsack",
    after_help = "Formats: scenarios and instances are JSON, sweeps write CSV plus a .meta.json sidecar."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for sweep trials; 0 uses all cores. Results are
    /// identical for any setting.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a random scenario and write it as JSON.
    Generate(GenerateArgs),
    /// Solve a scenario or instance file and print the selection.
    Solve(SolveArgs),
    /// Sweep a scenario parameter over a grid with Monte Carlo trials.
    Sweep(SweepArgs),
    /// Cross-check the solvers against the oracle on random instances.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 6, value_parser = positive_count)]
    devices: usize,
    #[arg(long, default_value_t = 4, value_parser = positive_count)]
    classes: usize,
    #[arg(long = "models-per-class", default_value_t = 10, value_parser = positive_count)]
    models_per_class: usize,
    /// Give every task a private, freshly drawn model catalog.
    #[arg(long)]
    per_task_models: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverChoice {
    /// Exhaustive enumeration (exact).
    Oracle,
    /// Exact dynamic program; requires integral item values.
    Dp,
    /// Approximation scheme; requires --eps.
    Fptas,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Scenario or instance JSON (detected by schema).
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverChoice::Oracle)]
    solver: SolverChoice,
    /// Precision parameter in (0, 1]; required with --solver fptas.
    #[arg(long)]
    eps: Option<f64>,
    /// Output path for the solution JSON; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the knapsack instance derived from a scenario input.
    #[arg(long = "emit-instance")]
    emit_instance: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisChoice {
    EsCapacity,
    Bandwidth,
    MaxDelay,
    AccuracyCap,
}

impl From<AxisChoice> for Axis {
    fn from(choice: AxisChoice) -> Axis {
        match choice {
            AxisChoice::EsCapacity => Axis::EsCapacity,
            AxisChoice::Bandwidth => Axis::Bandwidth,
            AxisChoice::MaxDelay => Axis::MaxDelay,
            AxisChoice::AccuracyCap => Axis::AccuracyCap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyChoice {
    Resample,
    Skip,
    Error,
}

impl From<PolicyChoice> for InfeasiblePolicy {
    fn from(choice: PolicyChoice) -> InfeasiblePolicy {
        match choice {
            PolicyChoice::Resample => InfeasiblePolicy::Resample,
            PolicyChoice::Skip => InfeasiblePolicy::Skip,
            PolicyChoice::Error => InfeasiblePolicy::Error,
        }
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    axis: AxisChoice,
    /// Grid values, comma separated and strictly increasing; the axis
    /// default grid when omitted.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100, value_parser = positive_count)]
    trials: usize,
    /// Solvers to run per trial, e.g. `oracle,fptas:0.05,fptas:0.4`.
    #[arg(long, value_delimiter = ',', default_values_t = [
        "oracle".to_string(), "fptas:0.05".to_string(), "fptas:0.4".to_string()
    ])]
    solvers: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "on-infeasible", value_enum, default_value_t = PolicyChoice::Resample)]
    on_infeasible: PolicyChoice,
    #[arg(long, default_value_t = 6, value_parser = positive_count)]
    devices: usize,
    #[arg(long, default_value_t = 4, value_parser = positive_count)]
    classes: usize,
    #[arg(long = "models-per-class", default_value_t = 10, value_parser = positive_count)]
    models_per_class: usize,
    /// CSV output path; a `.meta.json` sidecar is written next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 200, value_parser = positive_count)]
    instances: usize,
    #[arg(long = "max-groups", default_value_t = 6)]
    max_groups: usize,
    #[arg(long = "max-items", default_value_t = 4)]
    max_items: usize,
    #[arg(long, default_value_t = 0.4)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn positive_count(raw: &str) -> Result<usize, String> {
    let value: usize = raw.parse().map_err(|e| format!("{e}"))?;
    if value == 0 {
        return Err("must be at least 1".into());
    }
    Ok(value)
}

impl Cli {
    /// Runs the parsed command and returns the process exit code.
    pub fn execute(self) -> i32 {
        let threads = self.threads;
        let run = || match self.command {
            Command::Generate(args) => cmd_generate(args),
            Command::Solve(args) => cmd_solve(args),
            Command::Sweep(args) => cmd_sweep(args),
            Command::Check(args) => cmd_check(args),
        };
        if threads == 0 {
            return run();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(err) => {
                eprintln!("semsel: cannot build thread pool: {err}");
                EXIT_BAD_FLAGS
            }
        }
    }
}

fn emit(output: Option<&Path>, contents: &str) -> i32 {
    match output {
        Some(path) => match write_atomic(path, contents) {
            Ok(()) => EXIT_OK,
            Err(err) => {
                eprintln!("semsel: {err}");
                EXIT_IO
            }
        },
        None => {
            println!("{contents}");
            EXIT_OK
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> i32 {
    let params = GenerationParams {
        devices: args.devices,
        classes: args.classes,
        models_per_class: args.models_per_class,
        per_task_models: args.per_task_models,
        ..GenerationParams::default()
    };
    let scenario = match generate_scenario(&params, args.seed) {
        Ok(scenario) => scenario,
        Err(err) => {
            eprintln!("semsel: {err}");
            return EXIT_BAD_FLAGS;
        }
    };
    let text = serde_json::to_string_pretty(&scenario).expect("scenario serializes");
    emit(args.output.as_deref(), &text)
}

fn solve_instance(instance: &Instance, args: &SolveArgs) -> Result<SolveOutcome, (i32, String)> {
    let flag_error = |msg: String| (EXIT_BAD_FLAGS, msg);
    let input_error = |msg: String| (EXIT_MALFORMED, msg);
    match args.solver {
        SolverChoice::Oracle => {
            if args.eps.is_some() {
                return Err(flag_error("--eps only applies to --solver fptas".into()));
            }
            brute_force_solve(instance).map_err(|e| input_error(e.to_string()))
        }
        SolverChoice::Dp => {
            if args.eps.is_some() {
                return Err(flag_error("--eps only applies to --solver fptas".into()));
            }
            let integral = integerize(instance).map_err(|e| input_error(e.to_string()))?;
            dp_solve(&integral).map_err(|e| input_error(e.to_string()))
        }
        SolverChoice::Fptas => {
            let eps = args
                .eps
                .ok_or_else(|| flag_error("--solver fptas requires --eps".into()))?;
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(flag_error(format!("--eps must be in (0, 1], got {eps}")));
            }
            fptas_solve(instance, eps).map_err(|e| input_error(e.to_string()))
        }
    }
}

fn cmd_solve(args: SolveArgs) -> i32 {
    let text = match read_to_string(&args.input) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("semsel: {err}");
            return EXIT_IO;
        }
    };
    let input = match detect_input(&text) {
        Ok(input) => input,
        Err(err) => {
            eprintln!("semsel: {err}");
            return EXIT_MALFORMED;
        }
    };

    let (instance, mapping) = match input {
        SolveInput::Instance(instance) => {
            if args.emit_instance.is_some() {
                eprintln!("semsel: --emit-instance only applies to scenario inputs");
                return EXIT_BAD_FLAGS;
            }
            (instance, None)
        }
        SolveInput::Scenario(scenario) => match scenario_to_instance(&scenario) {
            Ok(mapped) => (mapped.instance.clone(), Some(mapped)),
            Err(report) => {
                eprintln!("semsel: scenario admits no selection:\n{report}");
                let code = emit(args.output.as_deref(), &outcome_to_json(&SolveOutcome::Infeasible));
                return if code == EXIT_OK { EXIT_INFEASIBLE } else { code };
            }
        },
    };
    if let Some(path) = &args.emit_instance {
        let code = emit(Some(path), &instance_to_json(&instance));
        if code != EXIT_OK {
            return code;
        }
    }

    let outcome = match solve_instance(&instance, &args) {
        Ok(outcome) => outcome,
        Err((code, message)) => {
            eprintln!("semsel: {message}");
            return code;
        }
    };

    if let (Some(mapped), SolveOutcome::Feasible(solution)) = (&mapping, &outcome) {
        for choice in &solution.choices {
            eprintln!(
                "task {}: model {} of its class",
                choice.group, mapped.model_ids[choice.group][choice.item]
            );
        }
    }
    let code = emit(args.output.as_deref(), &outcome_to_json(&outcome));
    if code != EXIT_OK {
        return code;
    }
    match outcome {
        SolveOutcome::Feasible(_) => EXIT_OK,
        SolveOutcome::Infeasible => EXIT_INFEASIBLE,
    }
}

fn parse_solver(raw: &str) -> Result<SolverKind, String> {
    if raw == "oracle" {
        return Ok(SolverKind::Oracle);
    }
    if let Some(eps) = raw.strip_prefix("fptas:") {
        let eps: f64 = eps
            .parse()
            .map_err(|e| format!("bad fptas eps {eps:?}: {e}"))?;
        return Ok(SolverKind::Fptas { eps });
    }
    Err(format!(
        "unknown solver {raw:?}; expected `oracle` or `fptas:<eps>`"
    ))
}

fn cmd_sweep(args: SweepArgs) -> i32 {
    let mut solvers = Vec::new();
    for raw in &args.solvers {
        match parse_solver(raw) {
            Ok(solver) => solvers.push(solver),
            Err(message) => {
                eprintln!("semsel: {message}");
                return EXIT_BAD_FLAGS;
            }
        }
    }
    let axis = Axis::from(args.axis);
    let spec = SweepSpec {
        axis,
        axis_values: args.values.unwrap_or_else(|| axis.default_grid()),
        trials: args.trials,
        solvers,
        base_seed: args.seed,
        on_infeasible: args.on_infeasible.into(),
        params: GenerationParams {
            devices: args.devices,
            classes: args.classes,
            models_per_class: args.models_per_class,
            ..GenerationParams::default()
        },
    };

    let result = match run_sweep(&spec) {
        Ok(result) => result,
        Err(err) => {
            let code = match &err {
                SweepError::BadSpec(_) | SweepError::BadAxisValue { .. } => EXIT_BAD_FLAGS,
                SweepError::Scenario(_) => EXIT_BAD_FLAGS,
                SweepError::InfeasibleScenario { .. } | SweepError::ResampleLimit { .. } => {
                    EXIT_INFEASIBLE
                }
                SweepError::Solve(_) | SweepError::EmptyInput => EXIT_MALFORMED,
            };
            eprintln!("semsel: {err}");
            return code;
        }
    };

    let mut csv = Vec::new();
    write_csv(&result, &mut csv).expect("write to memory cannot fail");
    let csv = String::from_utf8(csv).expect("csv is utf-8");
    let code = emit(Some(&args.output), &csv);
    if code != EXIT_OK {
        return code;
    }
    let metadata_path = args.output.with_extension("meta.json");
    emit(Some(&metadata_path), &metadata_json(&spec))
}

fn cmd_check(args: CheckArgs) -> i32 {
    let cfg = CheckConfig {
        instances: args.instances,
        max_groups: args.max_groups,
        max_items: args.max_items,
        eps: args.eps,
        seed: args.seed,
        ..CheckConfig::default()
    };
    if let Err(message) = cfg.validate() {
        eprintln!("semsel: {message}");
        return EXIT_BAD_FLAGS;
    }
    let report = match run_check(&cfg) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("semsel: {err}");
            return EXIT_MALFORMED;
        }
    };
    if report.passed() {
        println!(
            "checked {} instances (max {} groups x {} items, eps {}): solvers agree with the oracle",
            report.instances_checked, cfg.max_groups, cfg.max_items, cfg.eps
        );
        EXIT_OK
    } else {
        for violation in &report.violations {
            eprintln!("violation (seed {}): {}", violation.seed, violation.description);
        }
        eprintln!(
            "{} violations over {} instances; replay any seed with the bounds above",
            report.violations.len(),
            report.instances_checked
        );
        EXIT_INFEASIBLE
    }
}

