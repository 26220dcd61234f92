//! Randomized cross-verification of the solvers.
//!
//! Seeded random instances are thrown at the exact DP and the FPTAS and the
//! results compared against the brute-force oracle: the DP must match the
//! oracle exactly, the FPTAS must agree on feasibility and reach at least
//! `(1 - eps)` of the oracle value. Every violation carries the instance
//! seed so it can be replayed.

use crate::knapsack::{
    brute_force_solve, dp_solve, fptas_solve, integerize, Instance, IntegerInstance, Item,
    SolveError, SolveOutcome,
};
use crate::scenario::Draw;
use crate::sweep::trial_seed;

/// Bounds for the random instances thrown at the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub instances: usize,
    pub max_groups: usize,
    pub max_items: usize,
    /// Precision parameter handed to the FPTAS.
    pub eps: f64,
    pub seed: u64,
    /// Integer instances draw values from `0..=max_value`.
    pub max_value: u64,
    pub max_weight: f64,
    pub max_capacity: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            instances: 200,
            max_groups: 6,
            max_items: 4,
            eps: 0.4,
            seed: 0,
            max_value: 50,
            max_weight: 100.0,
            max_capacity: 300.0,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.instances == 0 {
            return Err("instance count must be positive".into());
        }
        if self.max_groups == 0 || self.max_items == 0 {
            return Err("group and item bounds must be positive".into());
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(format!("eps must be in (0, 1], got {}", self.eps));
        }
        let combinations = (self.max_items as u128).pow(self.max_groups.min(u32::MAX as usize) as u32);
        if combinations > crate::knapsack::DEFAULT_COMBINATION_CAP as u128 {
            return Err(format!(
                "bounds allow {combinations} combinations, beyond the oracle cap"
            ));
        }
        Ok(())
    }
}

/// One disagreement between a solver and the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckViolation {
    /// Seed that regenerates the offending instance.
    pub seed: u64,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub instances_checked: usize,
    pub violations: Vec<CheckViolation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws an instance with integer values (weights stay real), suitable for
/// the exact DP.
pub fn random_integer_instance(cfg: &CheckConfig, seed: u64) -> Instance {
    let mut draw = Draw::new(seed);
    let groups = draw_shape(cfg, &mut draw)
        .into_iter()
        .map(|items| {
            (0..items)
                .map(|_| {
                    Item::new(
                        draw.range(0.0, cfg.max_weight),
                        draw.index(cfg.max_value as usize + 1) as f64,
                    )
                })
                .collect()
        })
        .collect();
    let capacity = draw.range(0.0, cfg.max_capacity);
    Instance::new(groups, capacity).expect("drawn fields are finite and non-negative")
}

/// Draws an instance with real-valued items, suitable for the FPTAS.
pub fn random_real_instance(cfg: &CheckConfig, seed: u64) -> Instance {
    let mut draw = Draw::new(seed);
    let groups = draw_shape(cfg, &mut draw)
        .into_iter()
        .map(|items| {
            (0..items)
                .map(|_| {
                    Item::new(
                        draw.range(0.0, cfg.max_weight),
                        draw.range(0.0, cfg.max_value as f64),
                    )
                })
                .collect()
        })
        .collect();
    let capacity = draw.range(0.0, cfg.max_capacity);
    Instance::new(groups, capacity).expect("drawn fields are finite and non-negative")
}

fn draw_shape(cfg: &CheckConfig, draw: &mut Draw) -> Vec<usize> {
    let group_count = 1 + draw.index(cfg.max_groups);
    (0..group_count).map(|_| 1 + draw.index(cfg.max_items)).collect()
}

/// Runs the full check with the production solvers.
pub fn run_check(cfg: &CheckConfig) -> Result<CheckReport, SolveError> {
    run_check_with(cfg, dp_solve, fptas_solve)
}

/// Runs the check with pluggable solvers, so the harness itself can be
/// tested against deliberately broken implementations.
pub fn run_check_with<D, F>(
    cfg: &CheckConfig,
    exact: D,
    approximate: F,
) -> Result<CheckReport, SolveError>
where
    D: Fn(&IntegerInstance) -> Result<SolveOutcome, SolveError>,
    F: Fn(&Instance, f64) -> Result<SolveOutcome, SolveError>,
{
    let mut report = CheckReport::default();
    for index in 0..cfg.instances {
        let seed = trial_seed(cfg.seed, index as u64);
        let mut blame = |description: String| {
            report.violations.push(CheckViolation { seed, description });
        };

        // exact DP against the oracle, on an integer-valued instance
        let instance = random_integer_instance(cfg, seed);
        let oracle = brute_force_solve(&instance)?;
        let exact_outcome = exact(&integerize(&instance).expect("values drawn integral"))?;
        match (&exact_outcome, &oracle) {
            (SolveOutcome::Feasible(got), SolveOutcome::Feasible(want)) => {
                if got.total_value != want.total_value {
                    blame(format!(
                        "exact DP value {} != oracle value {}",
                        got.total_value, want.total_value
                    ));
                }
            }
            (SolveOutcome::Infeasible, SolveOutcome::Infeasible) => {}
            (got, want) => blame(format!(
                "exact DP feasibility {:?} != oracle {:?}",
                got.is_feasible(),
                want.is_feasible()
            )),
        }

        // FPTAS against the oracle, on a real-valued instance
        let instance = random_real_instance(cfg, seed);
        let oracle = brute_force_solve(&instance)?;
        let approx_outcome = approximate(&instance, cfg.eps)?;
        match (&approx_outcome, &oracle) {
            (SolveOutcome::Feasible(got), SolveOutcome::Feasible(want)) => {
                let bound = (1.0 - cfg.eps) * want.total_value;
                if got.total_value < bound {
                    blame(format!(
                        "FPTAS value {} below (1-eps) bound {bound}",
                        got.total_value
                    ));
                }
                if got.total_value > want.total_value {
                    blame(format!(
                        "FPTAS value {} above the optimum {}",
                        got.total_value, want.total_value
                    ));
                }
            }
            (SolveOutcome::Infeasible, SolveOutcome::Infeasible) => {}
            (got, want) => blame(format!(
                "FPTAS feasibility {:?} != oracle {:?}",
                got.is_feasible(),
                want.is_feasible()
            )),
        }

        report.instances_checked += 1;
    }
    Ok(report)
}
