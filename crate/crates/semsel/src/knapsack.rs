//! Typed knapsack: pick exactly one item from every group, keep the total
//! weight within capacity, maximize total value.
//!
//! Three solvers are provided: an exact pseudo-polynomial dynamic program
//! over integer values ([`dp_solve`]), a fully polynomial approximation
//! scheme with a `(1 - eps)` guarantee ([`fptas_solve`]), and an exhaustive
//! oracle for verification at small sizes ([`brute_force_solve`]).

use thiserror::Error;

mod brute;
mod dp;
mod fptas;

pub use brute::{brute_force_solve, brute_force_solve_capped, DEFAULT_COMBINATION_CAP};
pub use dp::{dp_solve, dp_table, DpTable, DEFAULT_TABLE_ENTRY_CAP};
pub use fptas::fptas_solve;

/// Relative slack used when testing `total_weight <= capacity`, absorbing
/// summation round-off in derived weights.
pub const CAPACITY_REL_TOL: f64 = 1e-12;

/// Absolute tolerance under which a value is accepted as integral by
/// [`integerize`].
pub const INTEGRALITY_ABS_TOL: f64 = 1e-9;

/// Relative tolerance for comparing stored solution totals against
/// recomputed ones in [`validate_solution`].
pub const TOTALS_REL_TOL: f64 = 1e-9;

/// One selectable option: `weight` is the resource demand and `value` the
/// payoff, both finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Item {
    pub weight: f64,
    pub value: f64,
}

impl Item {
    pub fn new(weight: f64, value: f64) -> Self {
        Item { weight, value }
    }
}

/// A non-empty ordered set of items out of which exactly one must be
/// selected. Items are identified by their position.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    items: Vec<Item>,
}

impl Group {
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A validated typed-knapsack input: groups plus the shared capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    groups: Vec<Group>,
    capacity: f64,
}

/// Construction and integerization failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("group {0} has no items")]
    EmptyGroup(usize),
    #[error("{what} must be finite and non-negative, got {got}")]
    NegativeOrNonFinite { what: String, got: f64 },
    #[error("group {group} item {item} value {value} is not integral")]
    NonIntegralValue { group: usize, item: usize, value: f64 },
}

impl Instance {
    /// Validates and builds an instance. Every group must offer at least one
    /// item and all numeric fields must be finite and non-negative.
    pub fn new(groups: Vec<Vec<Item>>, capacity: f64) -> Result<Self, InstanceError> {
        if !capacity.is_finite() || capacity < 0.0 {
            return Err(InstanceError::NegativeOrNonFinite {
                what: "capacity".into(),
                got: capacity,
            });
        }
        if groups.is_empty() {
            return Err(InstanceError::EmptyGroup(0));
        }
        for (g, items) in groups.iter().enumerate() {
            if items.is_empty() {
                return Err(InstanceError::EmptyGroup(g));
            }
            for (n, item) in items.iter().enumerate() {
                for (what, got) in [("weight", item.weight), ("value", item.value)] {
                    if !got.is_finite() || got < 0.0 {
                        return Err(InstanceError::NegativeOrNonFinite {
                            what: format!("group {g} item {n} {what}"),
                            got,
                        });
                    }
                }
            }
        }
        Ok(Instance {
            groups: groups.into_iter().map(|items| Group { items }).collect(),
            capacity,
        })
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Sums the weights of one choice per group, accumulating in group
    /// order. All solvers and the validator use this same fold so that
    /// identical selections produce bit-identical totals.
    pub fn selection_weight(&self, choices: &[Choice]) -> f64 {
        choices
            .iter()
            .fold(0.0, |acc, c| self.groups[c.group].items[c.item].weight + acc)
    }

    /// Sums the values of one choice per group, in group order.
    pub fn selection_value(&self, choices: &[Choice]) -> f64 {
        choices
            .iter()
            .fold(0.0, |acc, c| self.groups[c.group].items[c.item].value + acc)
    }
}

/// An item of an [`IntegerInstance`]: the weight stays real, the value is an
/// exact integer so it can index a DP table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntItem {
    pub weight: f64,
    pub value: u64,
}

/// Typed-knapsack input whose values are exact integers; the precondition
/// of [`dp_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerInstance {
    groups: Vec<Vec<IntItem>>,
    capacity: f64,
}

impl IntegerInstance {
    pub fn new(groups: Vec<Vec<IntItem>>, capacity: f64) -> Result<Self, InstanceError> {
        if !capacity.is_finite() || capacity < 0.0 {
            return Err(InstanceError::NegativeOrNonFinite {
                what: "capacity".into(),
                got: capacity,
            });
        }
        if groups.is_empty() {
            return Err(InstanceError::EmptyGroup(0));
        }
        for (g, items) in groups.iter().enumerate() {
            if items.is_empty() {
                return Err(InstanceError::EmptyGroup(g));
            }
            for (n, item) in items.iter().enumerate() {
                if !item.weight.is_finite() || item.weight < 0.0 {
                    return Err(InstanceError::NegativeOrNonFinite {
                        what: format!("group {g} item {n} weight"),
                        got: item.weight,
                    });
                }
            }
        }
        Ok(IntegerInstance { groups, capacity })
    }

    pub fn groups(&self) -> &[Vec<IntItem>] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Largest achievable total value: the sum over groups of each group's
    /// maximum item value.
    pub fn max_total_value(&self) -> u64 {
        self.groups
            .iter()
            .map(|g| g.iter().map(|i| i.value).max().unwrap_or(0))
            .sum()
    }
}

/// Casts an instance with integral values into an [`IntegerInstance`].
/// Values within [`INTEGRALITY_ABS_TOL`] of an integer are accepted and
/// rounded; weights are untouched.
pub fn integerize(instance: &Instance) -> Result<IntegerInstance, InstanceError> {
    let mut groups = Vec::with_capacity(instance.group_count());
    for (g, group) in instance.groups().iter().enumerate() {
        let mut items = Vec::with_capacity(group.len());
        for (n, item) in group.items().iter().enumerate() {
            let rounded = item.value.round();
            if (item.value - rounded).abs() > INTEGRALITY_ABS_TOL {
                return Err(InstanceError::NonIntegralValue {
                    group: g,
                    item: n,
                    value: item.value,
                });
            }
            items.push(IntItem {
                weight: item.weight,
                value: rounded as u64,
            });
        }
        groups.push(items);
    }
    IntegerInstance::new(groups, instance.capacity())
}

impl From<&IntegerInstance> for Instance {
    fn from(value: &IntegerInstance) -> Self {
        let groups = value
            .groups()
            .iter()
            .map(|g| {
                g.iter()
                    .map(|i| Item::new(i.weight, i.value as f64))
                    .collect()
            })
            .collect();
        Instance::new(groups, value.capacity()).expect("integer instance is always valid")
    }
}

/// Index pair naming one selected item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Choice {
    pub group: usize,
    pub item: usize,
}

impl Choice {
    pub fn new(group: usize, item: usize) -> Self {
        Choice { group, item }
    }
}

/// One item per group together with its totals.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// One entry per group, in group order.
    pub choices: Vec<Choice>,
    pub total_value: f64,
    pub total_weight: f64,
}

/// Result of a solver run. `Infeasible` means no assignment of one item per
/// group fits within the capacity.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Feasible(Solution),
    Infeasible,
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Feasible(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Feasible(s) => Some(s),
            SolveOutcome::Infeasible => None,
        }
    }

    /// Total value when feasible.
    pub fn value(&self) -> Option<f64> {
        self.solution().map(|s| s.total_value)
    }
}

/// Failures of the solver operations themselves (infeasibility is a normal
/// outcome, not an error).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("eps must be in (0, 1], got {0}")]
    InvalidEps(f64),
    #[error("{combinations} combinations exceed the enumeration cap {cap}")]
    TooLarge { combinations: u128, cap: u64 },
    #[error("DP table would need {entries} entries, more than the cap {cap}")]
    TableTooLarge { entries: u128, cap: u64 },
}

/// `total_weight <= capacity` with [`CAPACITY_REL_TOL`] relative slack.
pub(crate) fn fits(total_weight: f64, capacity: f64) -> bool {
    total_weight <= capacity * (1.0 + CAPACITY_REL_TOL)
}

/// A constraint broken by a solution, as found by [`validate_solution`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// No choice names this group.
    MissingGroup(usize),
    /// More than one choice names this group.
    DuplicateGroup(usize),
    /// A choice names a group outside the instance.
    UnknownGroup(usize),
    /// A choice names an item outside its group.
    UnknownItem { group: usize, item: usize },
    CapacityExceeded { total_weight: f64, capacity: f64 },
    ValueMismatch { stored: f64, recomputed: f64 },
    WeightMismatch { stored: f64, recomputed: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MissingGroup(g) => write!(f, "group {g} unchosen"),
            Violation::DuplicateGroup(g) => write!(f, "group {g} chosen more than once"),
            Violation::UnknownGroup(g) => write!(f, "choice names unknown group {g}"),
            Violation::UnknownItem { group, item } => {
                write!(f, "choice names unknown item {item} of group {group}")
            }
            Violation::CapacityExceeded {
                total_weight,
                capacity,
            } => write!(f, "capacity exceeded: weight {total_weight} > {capacity}"),
            Violation::ValueMismatch { stored, recomputed } => {
                write!(f, "stored value {stored} != recomputed {recomputed}")
            }
            Violation::WeightMismatch { stored, recomputed } => {
                write!(f, "stored weight {stored} != recomputed {recomputed}")
            }
        }
    }
}

/// Outcome of checking a solution against an instance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a solution for group coverage, capacity, and consistency of its
/// stored totals. Violations are reported, never raised.
pub fn validate_solution(instance: &Instance, solution: &Solution) -> ValidationReport {
    let mut report = ValidationReport::default();
    let group_count = instance.group_count();
    let mut chosen = vec![0usize; group_count];
    let mut resolvable = Vec::with_capacity(solution.choices.len());

    for &choice in &solution.choices {
        if choice.group >= group_count {
            report.violations.push(Violation::UnknownGroup(choice.group));
            continue;
        }
        if choice.item >= instance.groups()[choice.group].len() {
            report.violations.push(Violation::UnknownItem {
                group: choice.group,
                item: choice.item,
            });
            continue;
        }
        chosen[choice.group] += 1;
        resolvable.push(choice);
    }
    for (g, &count) in chosen.iter().enumerate() {
        if count == 0 {
            report.violations.push(Violation::MissingGroup(g));
        } else if count > 1 {
            report.violations.push(Violation::DuplicateGroup(g));
        }
    }

    let recomputed_weight = instance.selection_weight(&resolvable);
    let recomputed_value = instance.selection_value(&resolvable);
    if !fits(recomputed_weight, instance.capacity()) {
        report.violations.push(Violation::CapacityExceeded {
            total_weight: recomputed_weight,
            capacity: instance.capacity(),
        });
    }
    let differs = |stored: f64, recomputed: f64| {
        let scale = stored.abs().max(recomputed.abs());
        (stored - recomputed).abs() > TOTALS_REL_TOL * scale
    };
    if differs(solution.total_value, recomputed_value) {
        report.violations.push(Violation::ValueMismatch {
            stored: solution.total_value,
            recomputed: recomputed_value,
        });
    }
    if differs(solution.total_weight, recomputed_weight) {
        report.violations.push(Violation::WeightMismatch {
            stored: solution.total_weight,
            recomputed: recomputed_weight,
        });
    }
    report
}
