//! Monte Carlo trials and parameter sweeps.
//!
//! A sweep runs `trials` seeded scenarios at every point of an axis grid.
//! Trial seeds depend only on the base seed and the trial index, so the
//! same scenarios are replayed across axis values and across solvers and
//! curves can be compared per seed. Results aggregate into per-point,
//! per-solver means and are emitted as CSV plus a metadata sidecar.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::knapsack::{brute_force_solve, fptas_solve, SolveError, SolveOutcome};
use crate::scenario::{
    generate_scenario, scenario_to_instance, Draw, GenerationParams, InfeasibilityReport,
    Scenario, ScenarioError, GENERATOR_ID, MIN_ACCURACY_LO,
};

/// Identifier of the scheme deriving per-trial seeds from the base seed.
pub const SEED_COMBINER_ID: &str = "splitmix64/1";

/// Upper bound on redraws for one trial before the sweep gives up.
pub const RESAMPLE_LIMIT: u32 = 10_000;

/// Scenario field swept over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Server CPU budget, cycles/s.
    EsCapacity,
    /// Uplink channel bandwidth, Hz.
    Bandwidth,
    /// Delay budget applied uniformly to every task, seconds.
    MaxDelay,
    /// Upper bound of the per-task accuracy-floor distribution.
    AccuracyCap,
}

impl Axis {
    /// Grid used when the caller does not supply one, spanning the regime
    /// where the axis binds up to where it saturates.
    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            Axis::EsCapacity => vec![0.2e9, 0.4e9, 0.6e9, 0.8e9, 1.2e9, 1.6e9, 2.0e9, 2.5e9, 3.0e9],
            Axis::Bandwidth => vec![6e6, 8e6, 10e6, 14e6, 20e6, 30e6, 45e6, 60e6],
            Axis::MaxDelay => vec![1.2, 1.6, 2.0, 2.4, 3.0, 4.0, 5.0, 6.0],
            Axis::AccuracyCap => vec![0.66, 0.68, 0.70, 0.72, 0.74, 0.76, 0.78, 0.80],
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::EsCapacity => "es-capacity",
            Axis::Bandwidth => "bandwidth",
            Axis::MaxDelay => "max-delay",
            Axis::AccuracyCap => "accuracy-cap",
        })
    }
}

/// Solver requested for each trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    /// Exhaustive enumeration; exact but exponential.
    Oracle,
    /// Approximation scheme with the given precision parameter.
    Fptas { eps: f64 },
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverKind::Oracle => write!(f, "oracle"),
            SolverKind::Fptas { .. } => write!(f, "fptas"),
        }
    }
}

/// What to do when a trial's scenario admits no selection at all (a task
/// cannot meet its deadline or accuracy floor with any model).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InfeasiblePolicy {
    /// Redraw the scenario from a derived seed, counting the redraws.
    #[default]
    Resample,
    /// Drop the trial at this grid point.
    Skip,
    /// Abort the sweep.
    Error,
}

impl std::fmt::Display for InfeasiblePolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InfeasiblePolicy::Resample => "resample",
            InfeasiblePolicy::Skip => "skip",
            InfeasiblePolicy::Error => "error",
        })
    }
}

/// Full description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    /// Strictly increasing, non-empty grid.
    pub axis_values: Vec<f64>,
    pub trials: usize,
    pub solvers: Vec<SolverKind>,
    pub base_seed: u64,
    pub on_infeasible: InfeasiblePolicy,
    pub params: GenerationParams,
}

impl SweepSpec {
    /// A 100-trial sweep over the default grid of the axis with the default
    /// scenario distribution.
    pub fn new(axis: Axis, solvers: Vec<SolverKind>, base_seed: u64) -> Self {
        SweepSpec {
            axis,
            axis_values: axis.default_grid(),
            trials: 100,
            solvers,
            base_seed,
            on_infeasible: InfeasiblePolicy::default(),
            params: GenerationParams::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.axis_values.is_empty() {
            return Err(SweepError::BadSpec("empty axis grid".into()));
        }
        if !self.axis_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(SweepError::BadSpec(
                "axis grid must be strictly increasing".into(),
            ));
        }
        for &value in &self.axis_values {
            validate_axis_value(self.axis, value)?;
        }
        if self.trials == 0 {
            return Err(SweepError::BadSpec("at least one trial required".into()));
        }
        if self.solvers.is_empty() {
            return Err(SweepError::BadSpec("no solvers requested".into()));
        }
        for solver in &self.solvers {
            if let SolverKind::Fptas { eps } = solver {
                if !(*eps > 0.0 && *eps <= 1.0) {
                    return Err(SweepError::BadSpec(format!(
                        "fptas eps must be in (0, 1], got {eps}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    BadSpec(String),
    #[error("bad {axis} value {value}")]
    BadAxisValue { axis: Axis, value: f64 },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("trial {trial} at {axis_value} is infeasible: {report}")]
    InfeasibleScenario {
        axis_value: f64,
        trial: usize,
        report: InfeasibilityReport,
    },
    #[error("trial {trial} at {axis_value} still infeasible after {limit} resamples")]
    ResampleLimit {
        axis_value: f64,
        trial: usize,
        limit: u32,
    },
    #[error("cannot aggregate zero trial results")]
    EmptyInput,
}

/// One solver's result on one trial instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverRun {
    pub solver: SolverKind,
    pub outcome: SolveOutcome,
    /// Monotonic-clock duration of the solver call; excluded from every
    /// reproducibility guarantee.
    pub wall_time_s: f64,
}

/// All requested solvers run on one scenario's instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// Seed that generated the scenario actually used (after resampling).
    pub seed: u64,
    pub runs: Vec<SolverRun>,
    /// Redraws consumed before this scenario mapped to an instance.
    pub resample_count: u32,
}

/// Why a single trial could not produce results.
#[derive(Debug, Error)]
pub enum TrialError {
    #[error("{0}")]
    Infeasible(InfeasibilityReport),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index`: the `index`-th output of the SplitMix64 stream
/// seeded with `base`. Shared across axis values and solvers so curves are
/// paired per trial.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    splitmix64(base.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Next seed in a trial's resample chain.
pub fn resample_seed(seed: u64) -> u64 {
    splitmix64(seed ^ 0xD1B5_4A32_D192_ED03)
}

fn validate_axis_value(axis: Axis, value: f64) -> Result<(), SweepError> {
    let ok = match axis {
        Axis::EsCapacity | Axis::Bandwidth | Axis::MaxDelay => value.is_finite() && value > 0.0,
        Axis::AccuracyCap => (MIN_ACCURACY_LO..=1.0).contains(&value),
    };
    if ok {
        Ok(())
    } else {
        Err(SweepError::BadAxisValue { axis, value })
    }
}

/// Returns a copy of the scenario with the axis field overridden.
///
/// The accuracy cap redraws every task's accuracy floor as uniform in
/// `[MIN_ACCURACY_LO, value]`, using a dedicated stream derived from the
/// scenario seed; the underlying uniforms per task do not depend on the cap,
/// so lowering the cap lowers every floor pointwise and eligible sets are
/// nested across cap values. All other draws are untouched.
pub fn apply_axis(scenario: &Scenario, axis: Axis, value: f64) -> Result<Scenario, SweepError> {
    validate_axis_value(axis, value)?;
    let mut scenario = scenario.clone();
    match axis {
        Axis::EsCapacity => scenario.es_capacity_cycles_s = value,
        Axis::Bandwidth => scenario.channel.bandwidth_hz = value,
        Axis::MaxDelay => {
            for task in &mut scenario.tasks {
                task.max_delay_s = value;
            }
        }
        Axis::AccuracyCap => {
            const ACCURACY_STREAM_SALT: u64 = 0xACC0_5EED_0000_0001;
            let mut draw = Draw::new(scenario.meta.seed ^ ACCURACY_STREAM_SALT);
            for task in &mut scenario.tasks {
                task.min_accuracy = MIN_ACCURACY_LO + (value - MIN_ACCURACY_LO) * draw.unit();
            }
        }
    }
    Ok(scenario)
}

/// Runs every requested solver on the instance derived from one scenario.
/// All solvers see the same instance; values are in suts/s.
pub fn run_trial(scenario: &Scenario, solvers: &[SolverKind]) -> Result<TrialResult, TrialError> {
    let mapped = scenario_to_instance(scenario).map_err(TrialError::Infeasible)?;
    let mut runs = Vec::with_capacity(solvers.len());
    for &solver in solvers {
        let start = Instant::now();
        let outcome = match solver {
            SolverKind::Oracle => brute_force_solve(&mapped.instance)?,
            SolverKind::Fptas { eps } => fptas_solve(&mapped.instance, eps)?,
        };
        runs.push(SolverRun {
            solver,
            outcome,
            wall_time_s: start.elapsed().as_secs_f64(),
        });
    }
    Ok(TrialResult {
        seed: scenario.meta.seed,
        runs,
        resample_count: 0,
    })
}

/// Per-solver aggregate at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverStats {
    pub solver: SolverKind,
    pub feasible_trials: usize,
    /// Trials whose instance admitted no selection within capacity.
    pub infeasible_count: usize,
    /// Mean total value over feasible trials; `None` if none were feasible.
    pub mean_total_value: Option<f64>,
    pub mean_wall_time_s: f64,
}

/// Means and counts per solver over a set of trial results.
pub fn aggregate(results: &[TrialResult]) -> Result<Vec<SolverStats>, SweepError> {
    let first = results.first().ok_or(SweepError::EmptyInput)?;
    let mut stats: Vec<SolverStats> = first
        .runs
        .iter()
        .map(|run| SolverStats {
            solver: run.solver,
            feasible_trials: 0,
            infeasible_count: 0,
            mean_total_value: None,
            mean_wall_time_s: 0.0,
        })
        .collect();
    let mut value_sums = vec![0.0f64; stats.len()];
    let mut time_sums = vec![0.0f64; stats.len()];
    for result in results {
        for (i, run) in result.runs.iter().enumerate() {
            time_sums[i] += run.wall_time_s;
            match run.outcome.value() {
                Some(value) => {
                    stats[i].feasible_trials += 1;
                    value_sums[i] += value;
                }
                None => stats[i].infeasible_count += 1,
            }
        }
    }
    for (i, entry) in stats.iter_mut().enumerate() {
        if entry.feasible_trials > 0 {
            entry.mean_total_value = Some(value_sums[i] / entry.feasible_trials as f64);
        }
        entry.mean_wall_time_s = time_sums[i] / results.len() as f64;
    }
    Ok(stats)
}

/// One grid point of a finished sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisPoint {
    pub axis_value: f64,
    /// One slot per trial index; `None` when the trial was skipped under
    /// [`InfeasiblePolicy::Skip`].
    pub trials: Vec<Option<TrialResult>>,
    pub per_solver: Vec<SolverStats>,
    /// Total scenario redraws at this grid point.
    pub resample_count: u64,
    pub skipped: usize,
}

/// A finished sweep: all trial results plus their aggregates, in grid
/// order. Aggregates are recomputable from the stored trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Axis,
    pub trials_per_point: usize,
    pub solvers: Vec<SolverKind>,
    pub points: Vec<AxisPoint>,
}

enum CellOutcome {
    Ran(TrialResult),
    Skipped,
}

fn run_cell(spec: &SweepSpec, axis_value: f64, trial: usize) -> Result<CellOutcome, SweepError> {
    let mut seed = trial_seed(spec.base_seed, trial as u64);
    let mut resamples = 0u32;
    loop {
        let scenario = generate_scenario(&spec.params, seed)?;
        let scenario = apply_axis(&scenario, spec.axis, axis_value)?;
        match run_trial(&scenario, &spec.solvers) {
            Ok(mut result) => {
                result.resample_count = resamples;
                return Ok(CellOutcome::Ran(result));
            }
            Err(TrialError::Infeasible(report)) => match spec.on_infeasible {
                InfeasiblePolicy::Error => {
                    return Err(SweepError::InfeasibleScenario {
                        axis_value,
                        trial,
                        report,
                    });
                }
                InfeasiblePolicy::Skip => return Ok(CellOutcome::Skipped),
                InfeasiblePolicy::Resample => {
                    resamples += 1;
                    if resamples > RESAMPLE_LIMIT {
                        return Err(SweepError::ResampleLimit {
                            axis_value,
                            trial,
                            limit: RESAMPLE_LIMIT,
                        });
                    }
                    seed = resample_seed(seed);
                }
            },
            Err(TrialError::Solve(err)) => return Err(err.into()),
        }
    }
}

/// Runs the whole grid. Cells execute independently (in parallel when a
/// rayon pool is available) and are reduced in (axis value, trial index)
/// order, so the result does not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    spec.validate()?;

    let cells: Vec<(usize, usize)> = (0..spec.axis_values.len())
        .flat_map(|a| (0..spec.trials).map(move |t| (a, t)))
        .collect();
    let outcomes: Vec<Result<CellOutcome, SweepError>> = cells
        .par_iter()
        .map(|&(a, t)| run_cell(spec, spec.axis_values[a], t))
        .collect();

    let mut collected = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        collected.push(outcome?);
    }

    let mut points = Vec::with_capacity(spec.axis_values.len());
    for (a, &axis_value) in spec.axis_values.iter().enumerate() {
        let chunk = &mut collected[a * spec.trials..(a + 1) * spec.trials];
        let mut trials: Vec<Option<TrialResult>> = Vec::with_capacity(spec.trials);
        for cell in chunk.iter_mut() {
            trials.push(match cell {
                CellOutcome::Ran(result) => Some(std::mem::replace(
                    result,
                    TrialResult {
                        seed: 0,
                        runs: vec![],
                        resample_count: 0,
                    },
                )),
                CellOutcome::Skipped => None,
            });
        }
        let ran: Vec<TrialResult> = trials.iter().flatten().cloned().collect();
        let skipped = spec.trials - ran.len();
        let per_solver = if ran.is_empty() {
            spec.solvers
                .iter()
                .map(|&solver| SolverStats {
                    solver,
                    feasible_trials: 0,
                    infeasible_count: 0,
                    mean_total_value: None,
                    mean_wall_time_s: 0.0,
                })
                .collect()
        } else {
            aggregate(&ran)?
        };
        points.push(AxisPoint {
            axis_value,
            resample_count: ran.iter().map(|r| r.resample_count as u64).sum(),
            skipped,
            trials,
            per_solver,
        });
    }
    Ok(SweepResult {
        axis: spec.axis,
        trials_per_point: spec.trials,
        solvers: spec.solvers.clone(),
        points,
    })
}

/// Writes the sweep as CSV, one row per (grid point, solver).
///
/// Columns: `axis_name, axis_value, solver, eps (empty for the oracle),
/// trials, mean_total_value_suts_s (empty when no trial was feasible),
/// infeasible_count (solver-infeasible plus skipped trials),
/// resample_count, mean_wall_time_s`. Every column except the wall time is
/// reproducible byte for byte for a fixed spec.
pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "axis_name,axis_value,solver,eps,trials,mean_total_value_suts_s,infeasible_count,resample_count,mean_wall_time_s"
    )?;
    for point in &result.points {
        for stats in &point.per_solver {
            let eps = match stats.solver {
                SolverKind::Oracle => String::new(),
                SolverKind::Fptas { eps } => eps.to_string(),
            };
            let mean = stats
                .mean_total_value
                .map(|v| v.to_string())
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                result.axis,
                point.axis_value,
                stats.solver,
                eps,
                result.trials_per_point,
                mean,
                stats.infeasible_count + point.skipped,
                point.resample_count,
                stats.mean_wall_time_s,
            )?;
        }
    }
    Ok(())
}

/// Renders the metadata sidecar documenting how a sweep's numbers were
/// produced: the full spec, the seed-derivation scheme, the scenario
/// generator stream, and the crate version.
pub fn metadata_json(spec: &SweepSpec) -> String {
    let solvers: Vec<serde_json::Value> = spec
        .solvers
        .iter()
        .map(|solver| match solver {
            SolverKind::Oracle => serde_json::json!({"solver": "oracle"}),
            SolverKind::Fptas { eps } => serde_json::json!({"solver": "fptas", "eps": eps}),
        })
        .collect();
    let value = serde_json::json!({
        "spec": {
            "axis": spec.axis.to_string(),
            "axis_values": spec.axis_values,
            "trials": spec.trials,
            "solvers": solvers,
            "base_seed": spec.base_seed,
            "on_infeasible": spec.on_infeasible.to_string(),
            "params": spec.params,
        },
        "seed_combiner": SEED_COMBINER_ID,
        "generator": GENERATOR_ID,
        "version": env!("CARGO_PKG_VERSION"),
    });
    serde_json::to_string_pretty(&value).expect("metadata serialization cannot fail")
}
