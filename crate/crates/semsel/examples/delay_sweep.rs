//! Total semantic rate versus a uniform per-task deadline, at two server
//! budgets. Longer deadlines shrink every model's CPU reservation, so both
//! curves climb to the same plateau: once deadlines stop binding, capacity
//! no longer matters and every task runs its best eligible model.
//!
//!     cargo run --release --example delay_sweep [trials]

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
            ..SweepSpec::new(Axis::MaxDelay, vec![SolverKind::Oracle], 0)
        };
        run_sweep(&spec).expect("sweep runs")
    };
    let small = sweep_at(0.8e9);
    let large = sweep_at(3.0e9);

    println!("deadline [s] | F=0.8 Gcycles/s | F=3 Gcycles/s  [mean Msuts/s over {trials} paired trials]");
    for (a, b) in small.points.iter().zip(&large.points) {
        let fmt = |mean: Option<f64>| {
            mean.map(|v| format!("{:>9.1}", v / 1e6))
                .unwrap_or_else(|| "        -".into())
        };
        println!(
            "  {:>4.1}       | {}       | {}",
            a.axis_value,
            fmt(a.per_solver[0].mean_total_value),
            fmt(b.per_solver[0].mean_total_value),
        );
    }

    let plateau = |result: &semsel::sweep::SweepResult| {
        result.points.last().unwrap().per_solver[0]
            .mean_total_value
            .unwrap()
    };
    println!(
        "plateaus: {:.4e} vs {:.4e} suts/s",
        plateau(&small),
        plateau(&large)
    );
}
