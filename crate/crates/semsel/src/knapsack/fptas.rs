//! Approximation scheme with a `(1 - eps)` guarantee.
//!
//! Values are scaled by `theta = eps * v_max / M` and floored to integers,
//! which bounds the scaled value range by `M / eps` so the exact DP runs in
//! time polynomial in the input size and `1 / eps`. Since the right `v_max`
//! (the largest item value used by an optimal selection) is unknown, every
//! distinct item value is tried as a candidate; items above the candidate
//! are excluded, and the best returned selection is kept, compared at the
//! original unscaled values.

use super::{
    dp::dp_solve_capped, fits, Choice, Instance, IntItem, IntegerInstance, Solution, SolveError,
    SolveOutcome, DEFAULT_TABLE_ENTRY_CAP,
};

/// Approximate optimum with total value at least `(1 - eps)` times the true
/// optimum whenever the instance is feasible; `Infeasible` exactly when no
/// assignment fits.
pub fn fptas_solve(instance: &Instance, eps: f64) -> Result<SolveOutcome, SolveError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(SolveError::InvalidEps(eps));
    }

    // Distinct values only: equal candidates produce identical rounded
    // instances. Descending order tries the unfiltered instance first.
    let mut candidates: Vec<f64> = instance
        .groups()
        .iter()
        .flat_map(|g| g.items().iter().map(|i| i.value))
        .collect();
    candidates.sort_by(|a, b| b.partial_cmp(a).expect("values are finite"));
    candidates.dedup();

    let mut best: Option<Solution> = None;
    for &v_max in &candidates {
        let candidate = if v_max == 0.0 {
            zero_value_candidate(instance)
        } else {
            scaled_candidate(instance, eps, v_max)?
        };
        if let Some(solution) = candidate {
            if best.as_ref().is_none_or(|b| better_than(&solution, b)) {
                best = Some(solution);
            }
        }
    }
    Ok(match best {
        Some(solution) => SolveOutcome::Feasible(solution),
        None => SolveOutcome::Infeasible,
    })
}

/// Deterministic candidate ordering: higher value, then lower weight, then
/// lexicographically smaller choices. Independent of candidate iteration
/// order, so candidates could be evaluated concurrently.
fn better_than(a: &Solution, b: &Solution) -> bool {
    if a.total_value != b.total_value {
        return a.total_value > b.total_value;
    }
    if a.total_weight != b.total_weight {
        return a.total_weight < b.total_weight;
    }
    a.choices < b.choices
}

/// One candidate iteration for `v_max > 0`: exclude items valued above
/// `v_max`, floor-scale the rest, solve exactly, and price the returned
/// selection at the original values. `None` means the candidate was skipped
/// (exclusion emptied a group) or its reduced instance was infeasible.
fn scaled_candidate(
    instance: &Instance,
    eps: f64,
    v_max: f64,
) -> Result<Option<Solution>, SolveError> {
    let group_count = instance.group_count();
    let theta = eps * v_max / group_count as f64;

    // Scaled values stay within M/eps; refuse table sizes the DP would
    // reject anyway, before any cast can saturate.
    let scaled_bound = (group_count as f64 / eps).floor() + 1.0;
    let worst_entries = (group_count as f64 + 1.0) * (group_count as f64 * scaled_bound + 1.0);
    if worst_entries > DEFAULT_TABLE_ENTRY_CAP as f64 {
        return Err(SolveError::TableTooLarge {
            entries: worst_entries as u128,
            cap: DEFAULT_TABLE_ENTRY_CAP,
        });
    }

    let mut kept: Vec<Vec<usize>> = Vec::with_capacity(group_count);
    let mut rounded: Vec<Vec<IntItem>> = Vec::with_capacity(group_count);
    for group in instance.groups() {
        let mut kept_ids = Vec::new();
        let mut items = Vec::new();
        for (n, item) in group.items().iter().enumerate() {
            if item.value <= v_max {
                kept_ids.push(n);
                items.push(IntItem {
                    weight: item.weight,
                    value: (item.value / theta).floor() as u64,
                });
            }
        }
        if items.is_empty() {
            return Ok(None);
        }
        kept.push(kept_ids);
        rounded.push(items);
    }

    let reduced = IntegerInstance::new(rounded, instance.capacity())
        .expect("filtered groups are non-empty and weights unchanged");
    let outcome = dp_solve_capped(&reduced, DEFAULT_TABLE_ENTRY_CAP)?;
    Ok(outcome.solution().map(|scaled| {
        let choices: Vec<Choice> = scaled
            .choices
            .iter()
            .map(|c| Choice::new(c.group, kept[c.group][c.item]))
            .collect();
        let total_value = instance.selection_value(&choices);
        let total_weight = instance.selection_weight(&choices);
        Solution {
            choices,
            total_value,
            total_weight,
        }
    }))
}

/// Candidate for `v_max = 0`, where scaling is undefined: only zero-value
/// items remain, so any fitting selection is optimal among them; take the
/// lightest item per group.
fn zero_value_candidate(instance: &Instance) -> Option<Solution> {
    let mut choices = Vec::with_capacity(instance.group_count());
    for (g, group) in instance.groups().iter().enumerate() {
        let lightest = group
            .items()
            .iter()
            .enumerate()
            .filter(|(_, item)| item.value == 0.0)
            .min_by(|(_, a), (_, b)| a.weight.partial_cmp(&b.weight).expect("finite weights"))?;
        choices.push(Choice::new(g, lightest.0));
    }
    let total_weight = instance.selection_weight(&choices);
    fits(total_weight, instance.capacity()).then_some(Solution {
        choices,
        total_value: 0.0,
        total_weight,
    })
}
