//! Watch the approximation guarantee in action: for every precision
//! parameter `eps`, the FPTAS returns at least `(1 - eps)` of the true
//! optimum, usually much more.
//!
//!     cargo run --example fptas_guarantee [instances]

use semsel::check::{random_real_instance, CheckConfig};
use semsel::knapsack::{brute_force_solve, fptas_solve};
use semsel::sweep::trial_seed;

fn main() {
    let instances: usize = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("instance count"))
        .unwrap_or(200);
    let cfg = CheckConfig {
        instances,
        max_groups: 6,
        max_items: 5,
        ..CheckConfig::default()
    };

    println!("worst observed value ratio (FPTAS / optimum) over {instances} random instances:");
    for eps in [0.05, 0.2, 0.4, 0.8] {
        let mut worst: f64 = 1.0;
        let mut feasible = 0usize;
        for index in 0..cfg.instances {
            let instance = random_real_instance(&cfg, trial_seed(1, index as u64));
            let optimum = brute_force_solve(&instance).unwrap().value();
            let approx = fptas_solve(&instance, eps).unwrap().value();
            if let (Some(optimum), Some(approx)) = (optimum, approx) {
                if optimum > 0.0 {
                    worst = worst.min(approx / optimum);
                    feasible += 1;
                }
            }
        }
        println!(
            "  eps {eps:<4}  guarantee {:.2}  worst seen {worst:.6}  ({feasible} feasible)",
            1.0 - eps
        );
        assert!(worst >= 1.0 - eps);
    }
}
