//! Total semantic rate versus channel bandwidth, at two server budgets.
//! More bandwidth shortens uploads and frees deadline slack until the CPU
//! budget becomes the bottleneck; the larger budget saturates earlier and
//! higher.
//!
//!     cargo run --release --example bandwidth_sweep [trials]

use semsel::scenario::GenerationParams;
use semsel::sweep::{run_sweep, Axis, SolverKind, SweepSpec};

fn main() {
    let trials: usize = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("trial count"))
        .unwrap_or(25);

    let sweep_at = |es_capacity: f64| {
        let spec = SweepSpec {
            trials,
            params: GenerationParams {
                es_capacity_cycles_s: es_capacity,
                ..GenerationParams::default()
            },
            ..SweepSpec::new(Axis::Bandwidth, vec![SolverKind::Oracle], 0)
        };
        run_sweep(&spec).expect("sweep runs")
    };
    let small = sweep_at(0.8e9);
    let large = sweep_at(3.0e9);

    println!("bandwidth [MHz] | F=0.8 Gcycles/s | F=3 Gcycles/s  [mean Msuts/s over {trials} paired trials]");
    for (a, b) in small.points.iter().zip(&large.points) {
        let fmt = |mean: Option<f64>| {
            mean.map(|v| format!("{:>9.1}", v / 1e6))
                .unwrap_or_else(|| "        -".into())
        };
        println!(
            "  {:>5.0}         | {}       | {}",
            a.axis_value / 1e6,
            fmt(a.per_solver[0].mean_total_value),
            fmt(b.per_solver[0].mean_total_value),
        );
    }
}
