//! Exact pseudo-polynomial solver. A table of minimum achievable weight per
//! exact total value is filled group by group, then scanned for the largest
//! value whose weight fits the capacity; the selection is recovered by
//! backtracking through the recorded per-cell choices.

use super::{fits, Choice, IntegerInstance, Solution, SolveError, SolveOutcome};

/// Default cap on `(groups + 1) * (max_total_value + 1)` table entries.
pub const DEFAULT_TABLE_ENTRY_CAP: u64 = 1 << 31;

/// Weight-minimization table over (group prefix, exact total value).
#[derive(Debug, Clone)]
pub struct DpTable {
    max_total_value: u64,
    /// `min_weight[m][v]`: least total weight selecting one item from each
    /// of the first `m` groups with total value exactly `v`; `None` when no
    /// such selection exists.
    min_weight: Vec<Vec<Option<f64>>>,
    /// `choice[m][v]`: the item of group `m` realizing `min_weight[m+1][v]`.
    choice: Vec<Vec<Option<usize>>>,
}

impl DpTable {
    pub fn max_total_value(&self) -> u64 {
        self.max_total_value
    }

    /// Minimum weight over the first `prefix` groups achieving exactly
    /// `value`, or `None` if unreachable.
    pub fn min_weight(&self, prefix: usize, value: u64) -> Option<f64> {
        self.min_weight[prefix][value as usize]
    }

    /// Item of group `group` recorded for total value `value` over the
    /// prefix ending at that group.
    pub fn choice(&self, group: usize, value: u64) -> Option<usize> {
        self.choice[group][value as usize]
    }
}

/// Fills the DP table for an integer-valued instance.
///
/// Row 0 holds the base cases (only value 0 is reachable, at weight 0); row
/// `m` is derived from row `m - 1` by trying every item of group `m - 1`
/// whose value does not exceed the column. Weight ties pick the item with
/// the lowest index.
pub fn dp_table(instance: &IntegerInstance) -> Result<DpTable, SolveError> {
    dp_table_capped(instance, DEFAULT_TABLE_ENTRY_CAP)
}

pub(crate) fn dp_table_capped(
    instance: &IntegerInstance,
    entry_cap: u64,
) -> Result<DpTable, SolveError> {
    let group_count = instance.group_count();
    let max_total_value = instance.max_total_value();
    let entries = (group_count as u128 + 1) * (max_total_value as u128 + 1);
    if entries > entry_cap as u128 {
        return Err(SolveError::TableTooLarge {
            entries,
            cap: entry_cap,
        });
    }

    let columns = max_total_value as usize + 1;
    let mut min_weight = vec![vec![None; columns]; group_count + 1];
    let mut choice = vec![vec![None; columns]; group_count];
    min_weight[0][0] = Some(0.0);

    for (g, items) in instance.groups().iter().enumerate() {
        for v in 0..columns as u64 {
            let mut best: Option<(f64, usize)> = None;
            for (n, item) in items.iter().enumerate() {
                if item.value > v {
                    continue;
                }
                if let Some(prev) = min_weight[g][(v - item.value) as usize] {
                    let weight = item.weight + prev;
                    if best.is_none_or(|(w, _)| weight < w) {
                        best = Some((weight, n));
                    }
                }
            }
            if let Some((weight, n)) = best {
                min_weight[g + 1][v as usize] = Some(weight);
                choice[g][v as usize] = Some(n);
            }
        }
    }

    Ok(DpTable {
        max_total_value,
        min_weight,
        choice,
    })
}

/// Exact optimum for an integer-valued instance: the largest total value
/// whose minimum weight fits the capacity, with the selection recovered by
/// backtracking.
pub fn dp_solve(instance: &IntegerInstance) -> Result<SolveOutcome, SolveError> {
    dp_solve_capped(instance, DEFAULT_TABLE_ENTRY_CAP)
}

pub(crate) fn dp_solve_capped(
    instance: &IntegerInstance,
    entry_cap: u64,
) -> Result<SolveOutcome, SolveError> {
    let table = dp_table_capped(instance, entry_cap)?;
    let group_count = instance.group_count();

    let mut best_value = None;
    for v in 0..=table.max_total_value() {
        if let Some(weight) = table.min_weight(group_count, v) {
            if fits(weight, instance.capacity()) {
                best_value = Some(v);
            }
        }
    }
    let Some(best_value) = best_value else {
        return Ok(SolveOutcome::Infeasible);
    };

    let mut choices = vec![Choice::new(0, 0); group_count];
    let mut v = best_value;
    for g in (0..group_count).rev() {
        let n = table
            .choice(g, v)
            .expect("reachable cell must record a choice");
        choices[g] = Choice::new(g, n);
        v -= instance.groups()[g][n].value;
    }
    debug_assert_eq!(v, 0);

    let total_weight = choices
        .iter()
        .fold(0.0, |acc, c| instance.groups()[c.group][c.item].weight + acc);
    debug_assert_eq!(Some(total_weight), table.min_weight(group_count, best_value));

    Ok(SolveOutcome::Feasible(Solution {
        choices,
        total_value: best_value as f64,
        total_weight,
    }))
}
