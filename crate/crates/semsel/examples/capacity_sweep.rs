//! Total semantic rate versus the server's CPU budget: rises steeply while
//! capacity binds, then flattens once every task can run its best model.
//! Compares the exact optimum with two FPTAS precisions at every grid
//! point, like for like on paired trials.
//!
//!     cargo run --release --example capacity_sweep [trials] [out.csv]

use semsel::sweep::{run_sweep, write_csv, Axis, SolverKind, SweepSpec};

fn main() {
    let trials: usize = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("trial count"))
        .unwrap_or(25);
    let spec = SweepSpec {
        trials,
        ..SweepSpec::new(
            Axis::EsCapacity,
            vec![
                SolverKind::Oracle,
                SolverKind::Fptas { eps: 0.05 },
                SolverKind::Fptas { eps: 0.4 },
            ],
            0,
        )
    };
    let result = run_sweep(&spec).expect("sweep runs");

    println!("capacity [Gcycles/s] | oracle | fptas(.05) | fptas(.4)  [mean Msuts/s over {trials} trials]");
    for point in &result.points {
        let mean = |i: usize| {
            point.per_solver[i]
                .mean_total_value
                .map(|v| format!("{:>8.1}", v / 1e6))
                .unwrap_or_else(|| "       -".into())
        };
        println!(
            "  {:>4.1}               | {} | {}   | {}   ({} infeasible)",
            point.axis_value / 1e9,
            mean(0),
            mean(1),
            mean(2),
            point.per_solver[0].infeasible_count
        );
    }

    if let Some(path) = std::env::args().nth(2) {
        let mut file = std::fs::File::create(&path).expect("create csv");
        write_csv(&result, &mut file).expect("write csv");
        println!("wrote {path}");
    }
}
