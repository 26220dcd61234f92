//! Physical-layer scenario model: devices uploading tasks over a shared
//! wireless channel to an edge server that executes them with one model per
//! task. This module derives uplink rates, upload times, and per-model CPU
//! demands, generates randomized scenarios from seeded parameters, and maps
//! a scenario onto a typed-knapsack instance.
//!
//! All stored quantities are base SI units: bits, Hz, W, s, CPU cycles/s,
//! suts/s. Prefixed figures (Mbit, GHz, dBm) are converted exactly once, at
//! generation or parse time.

use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knapsack::{Instance, Item};

/// Identifier of the random stream written into generated scenarios:
/// PCG XSL RR 128/64 (`Pcg64`) seeded via `seed_from_u64`, uniforms taken
/// from the top 53 bits of each output word.
pub const GENERATOR_ID: &str = "pcg64-raw53/1";

/// Devices closer than this are clamped away from the antenna so the
/// inverse-square path loss stays finite.
pub const MIN_DISTANCE_M: f64 = 1.0;

/// Lower bound of the accuracy-requirement distribution; also the fixed
/// lower bound when requirements are redrawn under an accuracy cap.
pub const MIN_ACCURACY_LO: f64 = 0.65;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Domain(String),
    #[error("upload takes {upload_s} s, at or past the {max_delay_s} s delay budget")]
    DeadlineExceeded { upload_s: f64, max_delay_s: f64 },
    #[error("bad generation parameters: {0}")]
    BadParams(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// Shared uplink channel constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub noise_power_w: f64,
}

/// One IoT device: its distance to the access point and the small-scale
/// fading power realization (unit-mean exponential). The link gain is
/// derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Device {
    pub id: usize,
    pub distance_m: f64,
    pub fading_gain: f64,
}

impl Device {
    pub fn link_gain(&self) -> Result<f64, ScenarioError> {
        link_gain(self.distance_m, self.fading_gain)
    }
}

/// One upload task: raw input size, accuracy floor, and delay budget. Each
/// task belongs to exactly one class of the model catalog.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub device: usize,
    pub class: usize,
    pub input_bits: f64,
    pub min_accuracy: f64,
    pub max_delay_s: f64,
}

/// One executable model: CPU cycles to run, achieved semantic rate, and
/// achieved accuracy. Models are cataloged per class and identified by
/// position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeModel {
    pub cycles: f64,
    #[serde(rename = "semantic_rate")]
    pub semantic_rate_suts_s: f64,
    pub accuracy: f64,
}

/// Provenance of a generated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMeta {
    pub seed: u64,
    pub generator: String,
}

/// A complete problem description: channel, server budget, devices, their
/// tasks, and the per-class model catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub channel: ChannelParams,
    pub es_capacity_cycles_s: f64,
    pub devices: Vec<Device>,
    pub tasks: Vec<Task>,
    pub models: Vec<Vec<SeModel>>,
    pub meta: ScenarioMeta,
}

impl Scenario {
    /// Checks every structural invariant; parse paths must call this before
    /// any derivation.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |msg: String| Err(ScenarioError::Invalid(msg));
        let positive = |what: &str, got: f64| {
            if got.is_finite() && got > 0.0 {
                Ok(())
            } else {
                Err(ScenarioError::Invalid(format!(
                    "{what} must be finite and positive, got {got}"
                )))
            }
        };
        positive("channel.bandwidth_hz", self.channel.bandwidth_hz)?;
        positive("channel.tx_power_w", self.channel.tx_power_w)?;
        positive("channel.noise_power_w", self.channel.noise_power_w)?;
        positive("es_capacity_cycles_s", self.es_capacity_cycles_s)?;
        if self.devices.is_empty() {
            return invalid("no devices".into());
        }
        for (i, device) in self.devices.iter().enumerate() {
            if device.id != i {
                return invalid(format!("device ids must be dense, found {} at {i}", device.id));
            }
            if !(device.distance_m.is_finite() && device.distance_m >= MIN_DISTANCE_M) {
                return invalid(format!(
                    "device {i} distance {} below the {MIN_DISTANCE_M} m minimum",
                    device.distance_m
                ));
            }
            positive("device fading_gain", device.fading_gain)?;
        }
        if self.tasks.len() != self.devices.len() {
            return invalid(format!(
                "{} tasks for {} devices; expected exactly one each",
                self.tasks.len(),
                self.devices.len()
            ));
        }
        let mut seen = vec![false; self.devices.len()];
        for (t, task) in self.tasks.iter().enumerate() {
            if task.device >= self.devices.len() || seen[task.device] {
                return invalid(format!("task {t} does not reference a distinct device"));
            }
            seen[task.device] = true;
            if task.class >= self.models.len() || self.models[task.class].is_empty() {
                return invalid(format!("task {t} references empty or unknown class {}", task.class));
            }
            positive("task input_bits", task.input_bits)?;
            positive("task max_delay_s", task.max_delay_s)?;
            if !(0.0..=1.0).contains(&task.min_accuracy) {
                return invalid(format!("task {t} min_accuracy {} outside [0,1]", task.min_accuracy));
            }
        }
        for (j, class) in self.models.iter().enumerate() {
            for (k, model) in class.iter().enumerate() {
                positive("model cycles", model.cycles)?;
                if !(model.semantic_rate_suts_s.is_finite() && model.semantic_rate_suts_s >= 0.0) {
                    return invalid(format!("model ({j},{k}) semantic rate invalid"));
                }
                if !(0.0..=1.0).contains(&model.accuracy) {
                    return invalid(format!("model ({j},{k}) accuracy outside [0,1]"));
                }
            }
        }
        Ok(())
    }
}

/// Link gain from inverse-square path loss and small-scale fading:
/// `1e-3 * fading * distance^-2`.
pub fn link_gain(distance_m: f64, fading_gain: f64) -> Result<f64, ScenarioError> {
    if !(distance_m.is_finite() && distance_m >= MIN_DISTANCE_M) {
        return Err(ScenarioError::Domain(format!(
            "distance {distance_m} m below the {MIN_DISTANCE_M} m minimum"
        )));
    }
    if !(fading_gain.is_finite() && fading_gain > 0.0) {
        return Err(ScenarioError::Domain(format!(
            "fading gain must be positive, got {fading_gain}"
        )));
    }
    Ok(1e-3 * fading_gain * distance_m.powi(-2))
}

/// Shannon uplink rate in bits/s: `w * log2(1 + P * g / noise)`.
pub fn uplink_rate(channel: &ChannelParams, gain: f64) -> Result<f64, ScenarioError> {
    if !(gain.is_finite() && gain > 0.0) {
        return Err(ScenarioError::Domain(format!(
            "link gain must be positive, got {gain}"
        )));
    }
    let snr = channel.tx_power_w * gain / channel.noise_power_w;
    Ok(channel.bandwidth_hz * (1.0 + snr).log2())
}

/// Time to push the task input over the uplink, in seconds.
pub fn upload_time(input_bits: f64, rate_bits_s: f64) -> Result<f64, ScenarioError> {
    if !(input_bits.is_finite() && input_bits > 0.0) {
        return Err(ScenarioError::Domain(format!(
            "input size must be positive, got {input_bits}"
        )));
    }
    if !(rate_bits_s.is_finite() && rate_bits_s > 0.0) {
        return Err(ScenarioError::Domain(format!(
            "rate must be positive, got {rate_bits_s}"
        )));
    }
    Ok(input_bits / rate_bits_s)
}

/// Models of the task's class meeting its accuracy floor (boundary
/// inclusive), paired with their catalog indices, in catalog order.
pub fn eligible_models<'a>(
    task: &Task,
    class_models: &'a [SeModel],
) -> impl Iterator<Item = (usize, &'a SeModel)> + 'a {
    let floor = task.min_accuracy;
    class_models
        .iter()
        .enumerate()
        .filter(move |(_, m)| m.accuracy >= floor)
}

/// CPU rate the server must reserve so the model finishes within the slack
/// left after upload: `cycles / (max_delay - upload)`.
pub fn item_weight(cycles: f64, max_delay_s: f64, upload_s: f64) -> Result<f64, ScenarioError> {
    if upload_s >= max_delay_s {
        return Err(ScenarioError::DeadlineExceeded {
            upload_s,
            max_delay_s,
        });
    }
    let weight = cycles / (max_delay_s - upload_s);
    if !weight.is_finite() {
        return Err(ScenarioError::DeadlineExceeded {
            upload_s,
            max_delay_s,
        });
    }
    Ok(weight)
}

/// Why a single task can never run, regardless of the server budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InfeasibilityCause {
    /// Uploading alone meets or exceeds the delay budget.
    DeadlineExceeded { upload_s: f64, max_delay_s: f64 },
    /// No cataloged model of the task's class reaches the accuracy floor.
    AccuracyUnsatisfiable { required: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskInfeasibility {
    pub task: usize,
    pub cause: InfeasibilityCause,
}

/// Per-task reasons a scenario admits no model selection at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct InfeasibilityReport {
    pub tasks: Vec<TaskInfeasibility>,
}

impl std::fmt::Display for InfeasibilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, entry) in self.tasks.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match entry.cause {
                InfeasibilityCause::DeadlineExceeded {
                    upload_s,
                    max_delay_s,
                } => write!(
                    f,
                    "task {}: upload {upload_s} s leaves no slack within {max_delay_s} s",
                    entry.task
                )?,
                InfeasibilityCause::AccuracyUnsatisfiable { required } => write!(
                    f,
                    "task {}: no model reaches accuracy {required}",
                    entry.task
                )?,
            }
        }
        Ok(())
    }
}

/// A knapsack instance derived from a scenario, with enough bookkeeping to
/// decode item choices back to catalog models. Group `g` is task `g` of the
/// scenario; `model_ids[g][n]` is the catalog index behind item `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedInstance {
    pub instance: Instance,
    pub model_ids: Vec<Vec<usize>>,
}

/// Maps a valid scenario onto a typed-knapsack instance: one group per
/// task, one item per eligible model weighted by its reserved CPU rate and
/// valued by its semantic rate, with the server budget as capacity.
///
/// A selection of the returned instance is feasible exactly when the
/// decoded model assignment runs every task once, meets every accuracy
/// floor (by eligibility filtering), and fits the server budget (by the
/// capacity constraint).
pub fn scenario_to_instance(scenario: &Scenario) -> Result<MappedInstance, InfeasibilityReport> {
    let mut failures = Vec::new();
    let mut groups = Vec::with_capacity(scenario.tasks.len());
    let mut model_ids = Vec::with_capacity(scenario.tasks.len());

    for (t, task) in scenario.tasks.iter().enumerate() {
        let device = &scenario.devices[task.device];
        let gain = device.link_gain().expect("validated scenario");
        let rate = uplink_rate(&scenario.channel, gain).expect("validated scenario");
        let upload_s = upload_time(task.input_bits, rate).expect("validated scenario");

        let eligible: Vec<(usize, &SeModel)> =
            eligible_models(task, &scenario.models[task.class]).collect();
        if eligible.is_empty() {
            failures.push(TaskInfeasibility {
                task: t,
                cause: InfeasibilityCause::AccuracyUnsatisfiable {
                    required: task.min_accuracy,
                },
            });
            continue;
        }

        let mut items = Vec::with_capacity(eligible.len());
        let mut ids = Vec::with_capacity(eligible.len());
        let mut deadline_failure = None;
        for (k, model) in eligible {
            match item_weight(model.cycles, task.max_delay_s, upload_s) {
                Ok(weight) => {
                    items.push(Item::new(weight, model.semantic_rate_suts_s));
                    ids.push(k);
                }
                Err(ScenarioError::DeadlineExceeded {
                    upload_s,
                    max_delay_s,
                }) => {
                    deadline_failure = Some(InfeasibilityCause::DeadlineExceeded {
                        upload_s,
                        max_delay_s,
                    });
                    break;
                }
                Err(_) => unreachable!("item_weight only fails on deadlines"),
            }
        }
        if let Some(cause) = deadline_failure {
            failures.push(TaskInfeasibility { task: t, cause });
            continue;
        }
        groups.push(items);
        model_ids.push(ids);
    }

    if !failures.is_empty() {
        return Err(InfeasibilityReport { tasks: failures });
    }
    let instance = Instance::new(groups, scenario.es_capacity_cycles_s)
        .expect("mapped groups are non-empty with finite positive weights");
    Ok(MappedInstance {
        instance,
        model_ids,
    })
}

/// Converts a dBm figure to watts: `10^((dbm - 30) / 10)`.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Ranges and counts of the scenario distribution. Defaults give 6 devices
/// on a 150 m disk, 4 task classes with 10 models each, inputs of 2-200
/// Mbit, accuracy floors in [0.65, 0.8], deadlines of 1.2-2.0 s, models of
/// 5-500 Mcycles at 50-200 Msuts/s and accuracy in [0.7, 1], a 3 GHz-class
/// server, a 10 MHz channel at 0.1 W transmit power, and -120 dBm noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub devices: usize,
    pub classes: usize,
    pub models_per_class: usize,
    pub cell_radius_m: f64,
    /// Bounds of the uniform draws, as (low, high) in base SI units.
    pub input_bits: (f64, f64),
    pub min_accuracy: (f64, f64),
    pub max_delay_s: (f64, f64),
    pub model_cycles: (f64, f64),
    pub model_rate: (f64, f64),
    pub model_accuracy: (f64, f64),
    pub es_capacity_cycles_s: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub noise_power_w: f64,
    /// Redraw a private model catalog for every task instead of sharing
    /// catalogs per class (each task then gets its own class).
    pub per_task_models: bool,
}

impl Default for GenerationParams {
    fn default() -> Self {
        GenerationParams {
            devices: 6,
            classes: 4,
            models_per_class: 10,
            cell_radius_m: 150.0,
            input_bits: (2e6, 2e8),
            min_accuracy: (MIN_ACCURACY_LO, 0.8),
            max_delay_s: (1.2, 2.0),
            model_cycles: (5e6, 5e8),
            model_rate: (5e7, 2e8),
            model_accuracy: (0.7, 1.0),
            es_capacity_cycles_s: 3e9,
            bandwidth_hz: 1e7,
            tx_power_w: 0.1,
            noise_power_w: 1e-15,
            per_task_models: false,
        }
    }
}

impl GenerationParams {
    fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::BadParams(msg));
        if self.devices == 0 || self.classes == 0 || self.models_per_class == 0 {
            return bad("device, class, and model counts must all be positive".into());
        }
        if !(self.cell_radius_m.is_finite() && self.cell_radius_m >= MIN_DISTANCE_M) {
            return bad(format!("cell radius {} below {MIN_DISTANCE_M} m", self.cell_radius_m));
        }
        for (name, (lo, hi), positive) in [
            ("input_bits", self.input_bits, true),
            ("min_accuracy", self.min_accuracy, false),
            ("max_delay_s", self.max_delay_s, true),
            ("model_cycles", self.model_cycles, true),
            ("model_rate", self.model_rate, false),
            ("model_accuracy", self.model_accuracy, false),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return bad(format!("{name} bounds ({lo}, {hi}) are not an interval"));
            }
            if positive && lo <= 0.0 {
                return bad(format!("{name} lower bound must be positive, got {lo}"));
            }
            if !positive && lo < 0.0 {
                return bad(format!("{name} lower bound must be non-negative, got {lo}"));
            }
        }
        for (name, bounds) in [
            ("min_accuracy", self.min_accuracy),
            ("model_accuracy", self.model_accuracy),
        ] {
            if bounds.1 > 1.0 {
                return bad(format!("{name} upper bound {} exceeds 1", bounds.1));
            }
        }
        for (name, got) in [
            ("es_capacity_cycles_s", self.es_capacity_cycles_s),
            ("bandwidth_hz", self.bandwidth_hz),
            ("tx_power_w", self.tx_power_w),
            ("noise_power_w", self.noise_power_w),
        ] {
            if !(got.is_finite() && got > 0.0) {
                return bad(format!("{name} must be finite and positive, got {got}"));
            }
        }
        Ok(())
    }
}

/// Deterministic uniform/exponential draws on top of `Pcg64`. The stream is
/// fully specified by [`GENERATOR_ID`]: each draw consumes one output word
/// and keeps its top 53 bits as a uniform in [0, 1).
pub(crate) struct Draw(Pcg64);

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw(Pcg64::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Unit-mean exponential via inverse CDF; `unit() < 1` keeps it finite,
    /// and the zero draw (one case in 2^53) is clamped so consumers can
    /// rely on strict positivity.
    pub fn exp_unit(&mut self) -> f64 {
        (-(1.0 - self.unit()).ln()).max(f64::MIN_POSITIVE)
    }

    pub fn index(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }
}

/// Draws a scenario from the parameter distributions, deterministically for
/// a given seed.
///
/// Draw order: per device, disk radius then fading; per task (one per
/// device, in device order), class, input size, accuracy floor, delay
/// budget; then per class and per model, cycles, semantic rate, accuracy.
/// Device positions are uniform over the disk (`r = R * sqrt(u)`, clamped
/// below at [`MIN_DISTANCE_M`]); fading is unit-mean exponential.
pub fn generate_scenario(
    params: &GenerationParams,
    seed: u64,
) -> Result<Scenario, ScenarioError> {
    params.validate()?;
    let mut draw = Draw::new(seed);

    let devices: Vec<Device> = (0..params.devices)
        .map(|id| {
            let radius = params.cell_radius_m * draw.unit().sqrt();
            Device {
                id,
                distance_m: radius.max(MIN_DISTANCE_M),
                fading_gain: draw.exp_unit(),
            }
        })
        .collect();

    // With per-task catalogs every task owns one fresh class.
    let classes = if params.per_task_models {
        params.devices
    } else {
        params.classes
    };
    let tasks: Vec<Task> = (0..params.devices)
        .map(|i| {
            let class = if params.per_task_models {
                i
            } else {
                draw.index(classes)
            };
            Task {
                device: i,
                class,
                input_bits: draw.range(params.input_bits.0, params.input_bits.1),
                min_accuracy: draw.range(params.min_accuracy.0, params.min_accuracy.1),
                max_delay_s: draw.range(params.max_delay_s.0, params.max_delay_s.1),
            }
        })
        .collect();

    let models: Vec<Vec<SeModel>> = (0..classes)
        .map(|_| {
            (0..params.models_per_class)
                .map(|_| SeModel {
                    cycles: draw.range(params.model_cycles.0, params.model_cycles.1),
                    semantic_rate_suts_s: draw.range(params.model_rate.0, params.model_rate.1),
                    accuracy: draw.range(params.model_accuracy.0, params.model_accuracy.1),
                })
                .collect()
        })
        .collect();

    let scenario = Scenario {
        channel: ChannelParams {
            bandwidth_hz: params.bandwidth_hz,
            tx_power_w: params.tx_power_w,
            noise_power_w: params.noise_power_w,
        },
        es_capacity_cycles_s: params.es_capacity_cycles_s,
        devices,
        tasks,
        models,
        meta: ScenarioMeta {
            seed,
            generator: GENERATOR_ID.to_string(),
        },
    };
    debug_assert!(scenario.validate().is_ok());
    Ok(scenario)
}
