//! Random instances, experiment runs and ratio reports.
//!
//! All randomness flows from one [`ChaCha8Rng`] per experiment seed: instance
//! sizes and per-instance seeds are drawn up front, so rows are reproducible
//! regardless of how the work is spread across threads.

use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{run_algorithm, select_algorithm, AlgorithmId, ApproxError};
use crate::bounds::lower_bounds;
use crate::exact::{ExactSolver, Objective, DEFAULT_CAP};
use crate::model::{classify_variant, compute_metrics, validate_schedule, Instance, Job, Time, VariantClass};

/// Name of the pseudo-random generator, recorded in every report.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9) seeded via SeedableRng::seed_from_u64";

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("n must be at least 1")]
    EmptyInstance,
    #[error("max_task must be at least 1, got {0}")]
    MaxTask(Time),
    #[error("max_delay must be non-negative, got {0}")]
    MaxDelay(Time),
    #[error("n_min {n_min} exceeds n_max {n_max}")]
    SizeRange { n_min: usize, n_max: usize },
    #[error("instance {id}: {source}")]
    Algorithm {
        id: usize,
        #[source]
        source: ApproxError,
    },
    #[error("instance {id}: {algorithm} produced an infeasible schedule")]
    Infeasible { id: usize, algorithm: AlgorithmId },
}

/// Parameters of one random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub variant: VariantClass,
    pub n: usize,
    pub max_task: Time,
    pub max_delay: Time,
    pub seed: u64,
}

/// Draws task lengths from `[1, max_task]` and delays from `[0, max_delay]`,
/// tying values together as `spec.variant` requires. The result is admitted
/// by `spec.variant` and may classify as a refinement of it.
pub fn generate_random_instance(spec: &GenSpec) -> Result<Instance, HarnessError> {
    if spec.n == 0 {
        return Err(HarnessError::EmptyInstance);
    }
    if spec.max_task < 1 {
        return Err(HarnessError::MaxTask(spec.max_task));
    }
    if spec.max_delay < 0 {
        return Err(HarnessError::MaxDelay(spec.max_delay));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (mt, md) = (spec.max_task, spec.max_delay);
    let shared_a = rng.random_range(1..=mt);
    let shared_b = rng.random_range(1..=mt);
    let shared_l = rng.random_range(0..=md);
    let (lo, hi) = (shared_a.min(shared_b), shared_a.max(shared_b));
    let mut jobs = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let a = rng.random_range(1..=mt);
        let b = rng.random_range(1..=mt);
        let l = rng.random_range(0..=md);
        use VariantClass as V;
        let job = match spec.variant {
            V::General => Job::new(a, l, b),
            V::FixedA => Job::new(shared_a, l, b),
            V::FixedB => Job::new(a, l, shared_b),
            V::FixedABbLEa => Job::new(hi, l, lo),
            V::FixedABaLEb => Job::new(lo, l, hi),
            V::UnitTasks | V::FixedOrderUnit => Job::new(1, l, 1),
            V::FixedL => Job::new(a, shared_l, b),
            V::EqualTasks => Job::new(a, l, a),
            V::EqualTasksFixedL => Job::new(a, shared_l, a),
            V::AllEqual => Job::new(a, a, a),
            V::DelayEqualsB => Job::new(a, b, b),
            V::DelayEqualsA => Job::new(a, a, b),
        };
        jobs.push(job);
    }
    let order = (spec.variant == VariantClass::FixedOrderUnit).then(|| {
        let mut order: Vec<usize> = (1..=spec.n).collect();
        order.shuffle(&mut rng);
        order
    });
    Ok(Instance::new(jobs, order).expect("generated values are within range"))
}

/// A batch of random instances per variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub variants: Vec<VariantClass>,
    pub instances_per_variant: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub max_task: Time,
    pub max_delay: Time,
    pub seed: u64,
    /// Largest `n` handed to the exact solver.
    pub cap: usize,
    /// Record wall-clock time per row. Off by default so reports are
    /// byte-identical across runs.
    #[serde(default)]
    pub measure_time: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            variants: VariantClass::ALL.to_vec(),
            instances_per_variant: 20,
            n_min: 1,
            n_max: 5,
            max_task: 6,
            max_delay: 8,
            seed: 0,
            cap: DEFAULT_CAP,
            measure_time: false,
        }
    }
}

mod ratio_text {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(r) => s.serialize_str(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// One evaluated instance. Ratios are exact and rendered as `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub instance_id: usize,
    pub variant: VariantClass,
    pub algorithm: AlgorithmId,
    pub alg_value: Time,
    pub opt_value: Option<Time>,
    #[serde(with = "ratio_text")]
    pub ratio: Option<Rational>,
    #[serde(with = "ratio_text")]
    pub proven_factor: Option<Rational>,
    pub within_bound: Option<bool>,
    pub lb_finish: Time,
    pub lb_start: Time,
    pub runtime_micros: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantSummary {
    pub variant: VariantClass,
    pub instances: usize,
    #[serde(with = "ratio_text")]
    pub max_ratio: Option<Rational>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub generator: String,
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<VariantSummary>,
}

impl ExperimentReport {
    /// Header comment lines naming the generator and seed, then one CSV
    /// record per row in field order.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# generator: {}\n# seed: {}\n", self.generator, self.config.seed);
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            writer.serialize(row).expect("rows serialize to CSV");
        }
        if self.rows.is_empty() {
            writer
                .write_record([
                    "instance_id",
                    "variant",
                    "algorithm",
                    "alg_value",
                    "opt_value",
                    "ratio",
                    "proven_factor",
                    "within_bound",
                    "lb_finish",
                    "lb_start",
                    "runtime_micros",
                ])
                .expect("header serializes to CSV");
        }
        let bytes = writer.into_inner().expect("in-memory writer");
        out.push_str(&String::from_utf8(bytes).expect("CSV is UTF-8"));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes to JSON")
    }

    pub fn violations(&self) -> usize {
        self.summary.iter().map(|s| s.violations).sum()
    }
}

/// Evaluates one instance: the dispatched algorithm (Algorithm 1 when the
/// variant has no guarantee), the optimum when `n ≤ cap`, and both lower bounds.
pub fn evaluate_instance(
    id: usize,
    instance: &Instance,
    cap: usize,
    measure_time: bool,
) -> Result<ExperimentRow, HarnessError> {
    let variant = classify_variant(instance);
    let guarantee = select_algorithm(variant);
    let algorithm = guarantee.map_or(AlgorithmId::AsapByDelay, |g| g.algorithm);
    let started = Instant::now();
    let schedule = run_algorithm(instance, algorithm).map_err(|source| HarnessError::Algorithm { id, source })?;
    let runtime_micros = measure_time.then(|| started.elapsed().as_micros() as u64);
    let report = validate_schedule(instance, &schedule).map_err(|_| HarnessError::Infeasible { id, algorithm })?;
    if !report.feasible || !schedule.is_complete(instance) {
        return Err(HarnessError::Infeasible { id, algorithm });
    }
    let alg_value = compute_metrics(instance, &schedule)
        .map_err(|_| HarnessError::Infeasible { id, algorithm })?
        .total_completion;
    let opt_value = ExactSolver::with_cap(cap)
        .solve(instance, Objective::SumCompletion)
        .ok()
        .map(|r| r.value);
    let ratio = opt_value.map(|opt| {
        if opt == 0 {
            Rational::from_integer(1)
        } else {
            Rational::new(alg_value, opt)
        }
    });
    let proven_factor = guarantee.map(|g| g.factor);
    let within_bound = ratio.zip(proven_factor).map(|(r, f)| r <= f);
    let lb = lower_bounds(instance);
    Ok(ExperimentRow {
        instance_id: id,
        variant,
        algorithm,
        alg_value,
        opt_value,
        ratio,
        proven_factor,
        within_bound,
        lb_finish: lb.lb_finish_total,
        lb_start: lb.lb_start_total,
        runtime_micros,
    })
}

/// Instance specs in id order: `instances_per_variant` for each variant.
pub fn experiment_specs(config: &ExperimentConfig) -> Result<Vec<GenSpec>, HarnessError> {
    if config.n_min > config.n_max {
        return Err(HarnessError::SizeRange {
            n_min: config.n_min,
            n_max: config.n_max,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut specs = Vec::with_capacity(config.variants.len() * config.instances_per_variant);
    for &variant in &config.variants {
        for _ in 0..config.instances_per_variant {
            specs.push(GenSpec {
                variant,
                n: rng.random_range(config.n_min..=config.n_max),
                max_task: config.max_task,
                max_delay: config.max_delay,
                seed: rng.random(),
            });
        }
    }
    Ok(specs)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let specs = experiment_specs(config)?;
    let instances: Vec<Instance> = specs.iter().map(generate_random_instance).collect::<Result<_, _>>()?;
    let rows: Vec<ExperimentRow> = instances
        .par_iter()
        .enumerate()
        .map(|(id, instance)| evaluate_instance(id, instance, config.cap, config.measure_time))
        .collect::<Result<_, _>>()?;
    Ok(ExperimentReport {
        generator: GENERATOR.to_owned(),
        config: config.clone(),
        summary: summarize(&rows),
        rows,
    })
}

/// Per classified variant, in the fixed variant order: count, largest ratio and
/// number of rows exceeding their proven factor.
pub fn summarize(rows: &[ExperimentRow]) -> Vec<VariantSummary> {
    VariantClass::ALL
        .iter()
        .filter_map(|&variant| {
            let group: Vec<&ExperimentRow> = rows.iter().filter(|r| r.variant == variant).collect();
            (!group.is_empty()).then(|| VariantSummary {
                variant,
                instances: group.len(),
                max_ratio: group.iter().filter_map(|r| r.ratio).max(),
                violations: group.iter().filter(|r| r.within_bound == Some(false)).count(),
            })
        })
        .collect()
}
