//! Effect of the accuracy requirement: sweep the upper bound of the
//! per-task accuracy-floor distribution. Stricter requirements disqualify
//! fast-but-sloppy models, so the achievable total semantic rate falls as
//! the cap rises. Floors are redrawn from shared per-task uniforms, so
//! eligible sets shrink pointwise along the grid.
//!
//!     cargo run --release --example accuracy_sweep [trials]

use semsel::sweep::{run_sweep, Axis, SolverKind, SweepSpec};

fn main() {
    let trials: usize = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("trial count"))
        .unwrap_or(25);
    let spec = SweepSpec {
        trials,
        ..SweepSpec::new(Axis::AccuracyCap, vec![SolverKind::Oracle], 0)
    };
    let result = run_sweep(&spec).expect("sweep runs");

    println!("accuracy cap | mean total rate [Msuts/s over {trials} trials]");
    let mut previous = f64::INFINITY;
    for point in &result.points {
        let mean = point.per_solver[0].mean_total_value.unwrap_or(0.0);
        println!("  {:>5.2}      | {:>8.1}", point.axis_value, mean / 1e6);
        assert!(
            mean <= previous,
            "stricter caps should not raise the mean"
        );
        previous = mean;
    }
}
