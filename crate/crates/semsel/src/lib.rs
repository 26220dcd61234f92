//! Semantic-extraction model selection on a shared edge server.
//!
//! IoT devices upload tasks to an edge server that can run each task with
//! one of several models per task class; models trade CPU demand against
//! accuracy and achieved semantic rate. Choosing one model per task to
//! maximize the total semantic rate under per-task deadlines, per-task
//! accuracy floors, and the server's CPU budget is a typed (multiple-choice)
//! knapsack problem.
//!
//! The crate is organized around that reduction:
//!
//! - [`knapsack`]: the solvers (exact pseudo-polynomial DP, an FPTAS with a
//!   `(1 - eps)` guarantee, and a brute-force oracle) plus solution
//!   validation.
//! - [`scenario`]: the physical model (link gains, Shannon uplink rates,
//!   upload times, per-model CPU-rate weights), a seeded scenario generator,
//!   and the scenario-to-knapsack mapping.
//! - [`sweep`]: Monte Carlo trials and parameter sweeps with CSV output.
//! - [`check`]: randomized cross-verification of the solvers against the
//!   oracle.
//! - [`cli`]: the `semsel` command-line front end.
//!
//! See the crate examples for runnable walkthroughs of each capability.

pub mod check;
pub mod cli;
pub mod io;
pub mod knapsack;
pub mod scenario;
pub mod sweep;

pub use knapsack::{Instance, Item, SolveOutcome, Solution};
pub use scenario::{GenerationParams, Scenario};
pub use sweep::{SweepSpec, SweepResult};
