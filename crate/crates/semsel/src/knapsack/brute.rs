//! Exhaustive reference solver. Deliberately free of shortcuts so it can
//! serve as the ground truth for the other solvers at small sizes.

use super::{fits, Choice, Instance, Solution, SolveError, SolveOutcome};

/// Default limit on the number of enumerated assignments.
pub const DEFAULT_COMBINATION_CAP: u64 = 10_000_000;

/// Exact optimum by enumerating every one-item-per-group assignment, with
/// the [`DEFAULT_COMBINATION_CAP`].
pub fn brute_force_solve(instance: &Instance) -> Result<SolveOutcome, SolveError> {
    brute_force_solve_capped(instance, DEFAULT_COMBINATION_CAP)
}

/// Exact optimum by full enumeration. Assignments are visited in
/// lexicographic choice order and a strictly larger value is required to
/// displace the incumbent, so value ties resolve to the lexicographically
/// smallest choice vector.
pub fn brute_force_solve_capped(
    instance: &Instance,
    cap: u64,
) -> Result<SolveOutcome, SolveError> {
    let combinations = instance
        .groups()
        .iter()
        .fold(1u128, |acc, g| acc.saturating_mul(g.len() as u128));
    if combinations > cap as u128 {
        return Err(SolveError::TooLarge { combinations, cap });
    }

    let mut best: Option<Solution> = None;
    let mut current = Vec::with_capacity(instance.group_count());
    enumerate(instance, 0, 0.0, 0.0, &mut current, &mut best);
    Ok(match best {
        Some(solution) => SolveOutcome::Feasible(solution),
        None => SolveOutcome::Infeasible,
    })
}

fn enumerate(
    instance: &Instance,
    depth: usize,
    weight: f64,
    value: f64,
    current: &mut Vec<usize>,
    best: &mut Option<Solution>,
) {
    if depth == instance.group_count() {
        if !fits(weight, instance.capacity()) {
            return;
        }
        if best.as_ref().is_none_or(|b| value > b.total_value) {
            *best = Some(Solution {
                choices: current
                    .iter()
                    .enumerate()
                    .map(|(g, &n)| Choice::new(g, n))
                    .collect(),
                total_value: value,
                total_weight: weight,
            });
        }
        return;
    }
    for (n, item) in instance.groups()[depth].items().iter().enumerate() {
        current.push(n);
        // accumulate with the new term on the left so totals match the
        // shared selection_weight/selection_value folds bit for bit
        enumerate(instance, depth + 1, item.weight + weight, item.value + value, current, best);
        current.pop();
    }
}
