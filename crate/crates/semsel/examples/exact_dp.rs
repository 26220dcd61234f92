//! Solve a small typed-knapsack instance exactly and peek inside the
//! dynamic-programming table.
//!
//!     cargo run --example exact_dp

use semsel::knapsack::{
    brute_force_solve, dp_solve, dp_table, integerize, Instance, Item,
};

fn main() {
    // two tasks, two options each: (weight, value)
    let instance = Instance::new(
        vec![
            vec![Item::new(2.0, 3.0), Item::new(3.0, 5.0)],
            vec![Item::new(2.0, 4.0), Item::new(4.0, 9.0)],
        ],
        6.0,
    )
    .unwrap();

    let integral = integerize(&instance).unwrap();
    let table = dp_table(&integral).unwrap();
    println!("minimum weight to hit each exact total value, one row per group prefix:");
    for prefix in 0..=integral.group_count() {
        let row: Vec<String> = (0..=table.max_total_value())
            .map(|v| match table.min_weight(prefix, v) {
                Some(w) => format!("{w:>4}"),
                None => "   .".into(),
            })
            .collect();
        println!("  after {prefix} group(s): {}", row.join(" "));
    }

    let exact = dp_solve(&integral).unwrap();
    let solution = exact.solution().expect("feasible");
    println!(
        "\nexact optimum: value {} at weight {} (capacity {})",
        solution.total_value,
        solution.total_weight,
        instance.capacity()
    );
    for choice in &solution.choices {
        let item = instance.groups()[choice.group].items()[choice.item];
        println!(
            "  group {} -> item {} (weight {}, value {})",
            choice.group, choice.item, item.weight, item.value
        );
    }

    let oracle = brute_force_solve(&instance).unwrap();
    assert_eq!(oracle.value(), exact.value());
    println!("full enumeration agrees: {:?}", oracle.value().unwrap());
}
