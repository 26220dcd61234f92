//! The full pipeline: draw a scenario, map it to a typed knapsack, solve
//! it three ways, and decode the winning selection back to per-task model
//! assignments with their physical budgets.
//!
//!     cargo run --example select_models [seed]

use semsel::knapsack::{brute_force_solve, fptas_solve, validate_solution};
use semsel::scenario::{
    generate_scenario, scenario_to_instance, upload_time, uplink_rate, GenerationParams,
};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("seed"))
        .unwrap_or(7);
    let scenario = generate_scenario(&GenerationParams::default(), seed).unwrap();
    let mapped = match scenario_to_instance(&scenario) {
        Ok(mapped) => mapped,
        Err(report) => {
            println!("scenario {seed} admits no selection:\n{report}");
            return;
        }
    };

    println!(
        "{} tasks mapped to a typed knapsack with capacity {:.3e} cycles/s",
        mapped.instance.group_count(),
        mapped.instance.capacity()
    );

    let oracle = brute_force_solve(&mapped.instance).unwrap();
    let Some(best) = oracle.solution() else {
        println!("no model assignment fits the server budget");
        return;
    };
    assert!(validate_solution(&mapped.instance, best).is_valid());

    println!(
        "optimal total semantic rate {:.4e} suts/s using {:.3e} of {:.3e} cycles/s:",
        best.total_value,
        best.total_weight,
        mapped.instance.capacity()
    );
    for choice in &best.choices {
        let task = &scenario.tasks[choice.group];
        let device = &scenario.devices[task.device];
        let model_id = mapped.model_ids[choice.group][choice.item];
        let model = &scenario.models[task.class][model_id];
        let rate = uplink_rate(&scenario.channel, device.link_gain().unwrap()).unwrap();
        let upload = upload_time(task.input_bits, rate).unwrap();
        println!(
            "  task {} -> class {} model {model_id}: {:.1} Msuts/s, accuracy {:.3} (floor {:.3}), \
             upload {:.2} s of {:.2} s budget",
            choice.group,
            task.class,
            model.semantic_rate_suts_s / 1e6,
            model.accuracy,
            task.min_accuracy,
            upload,
            task.max_delay_s
        );
    }

    for eps in [0.4, 0.05] {
        let approx = fptas_solve(&mapped.instance, eps).unwrap();
        let value = approx.value().unwrap();
        println!(
            "fptas(eps = {eps}): {:.4e} suts/s = {:.4}% of optimum",
            value,
            100.0 * value / best.total_value
        );
    }
}
