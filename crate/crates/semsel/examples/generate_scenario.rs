//! Draw a randomized edge-offloading scenario (6 devices on a 150 m disk,
//! 4 task classes, 10 models per class) and print what was rolled.
//!
//!     cargo run --example generate_scenario [seed]

use semsel::scenario::{generate_scenario, GenerationParams};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("seed"))
        .unwrap_or(42);
    let scenario = generate_scenario(&GenerationParams::default(), seed).unwrap();

    println!(
        "scenario seed {seed} ({}), server budget {:.1e} cycles/s, channel {:.0} MHz",
        scenario.meta.generator,
        scenario.es_capacity_cycles_s,
        scenario.channel.bandwidth_hz / 1e6
    );
    for task in &scenario.tasks {
        let device = &scenario.devices[task.device];
        println!(
            "  device {} at {:>5.1} m (fading {:.3}): class {}, {:>5.1} Mbit, accuracy >= {:.3}, deadline {:.2} s",
            device.id,
            device.distance_m,
            device.fading_gain,
            task.class,
            task.input_bits / 1e6,
            task.min_accuracy,
            task.max_delay_s
        );
    }
    for (class, models) in scenario.models.iter().enumerate() {
        let cycles: Vec<f64> = models.iter().map(|m| m.cycles / 1e6).collect();
        println!(
            "  class {class}: {} models, {:.0}-{:.0} Mcycles, rates {:.0}-{:.0} Msuts/s",
            models.len(),
            cycles.iter().cloned().fold(f64::INFINITY, f64::min),
            cycles.iter().cloned().fold(0.0f64, f64::max),
            models.iter().map(|m| m.semantic_rate_suts_s / 1e6).fold(f64::INFINITY, f64::min),
            models.iter().map(|m| m.semantic_rate_suts_s / 1e6).fold(0.0f64, f64::max),
        );
    }

    println!("\nfull JSON:\n{}", serde_json::to_string_pretty(&scenario).unwrap());
}
