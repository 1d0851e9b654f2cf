//! `ctsched`: generate, schedule, validate and benchmark coupled-task instances.
//!
//! Exit codes: 0 on success, 1 when an infeasible schedule or a bound
//! violation is found, 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use coupled_tasks::approx::{run_algorithm, select_algorithm, AlgorithmId};
use coupled_tasks::biobj::{stein_wein_combine, Rational};
use coupled_tasks::exact::{ExactSolver, Objective, DEFAULT_CAP};
use coupled_tasks::harness::{generate_random_instance, run_experiment, ExperimentConfig, GenSpec};
use coupled_tasks::model::{
    classify_variant, compute_metrics, parse_instance, validate_schedule, Instance, Metrics, Schedule, Time,
    ValidationReport, VariantClass,
};
use coupled_tasks::reductions::{
    reduce_3partition_to_fixed_delay_makespan, reduce_fixed_order_unit_to_sumc, reduce_makespan_to_sumc,
    ReductionOutput, ThreePartitionInstance,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ctsched", version, about = "Coupled-task scheduling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random instance of a variant.
    Gen {
        #[arg(long)]
        variant: VariantClass,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_task: Time,
        #[arg(long, default_value_t = 8)]
        max_delay: Time,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a schedule against an instance and report its metrics.
    Validate {
        instance: PathBuf,
        schedule: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an approximation algorithm.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgChoice::Auto)]
        alg: AlgChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a small instance exactly.
    Exact {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ObjectiveChoice::Sumc)]
        objective: ObjectiveChoice,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combine a makespan schedule and a total-completion-time schedule.
    Combine {
        instance: PathBuf,
        /// Trade-off parameter as `P/Q` or an integer.
        #[arg(long)]
        delta: Rational,
        #[arg(long)]
        makespan_schedule: PathBuf,
        #[arg(long)]
        sumc_schedule: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a hardness-reduction instance from a JSON parameter file.
    Reduce {
        #[arg(value_enum)]
        kind: ReductionKind,
        params: PathBuf,
        /// Instance file; without it the full output goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Threshold, parameters and warnings.
        #[arg(long)]
        metadata: Option<PathBuf>,
    },
    /// Certify approximation ratios on random instances against the exact optimum.
    Bench {
        /// Experiment configuration (JSON); flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<VariantClass>>,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        max_task: Option<Time>,
        #[arg(long)]
        max_delay: Option<Time>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cap: Option<usize>,
        /// Record per-instance wall-clock time.
        #[arg(long)]
        time: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgChoice {
    Auto,
    Asap,
    Blocks,
    Chain,
    ChainMod,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveChoice {
    Sumc,
    Cmax,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReductionKind {
    #[value(name = "3part")]
    ThreePart,
    Cmax2sumc,
    Fixed2sumc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Result of a command that ran to completion.
enum Status {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing instance {}", path.display()))
}

fn read_schedule(path: &Path) -> Result<Schedule> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing schedule {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

#[derive(Serialize)]
struct ValidateOutput {
    report: ValidationReport,
    metrics: Option<Metrics>,
    complete: bool,
}

#[derive(Serialize)]
struct SolveOutput {
    variant: VariantClass,
    algorithm: AlgorithmId,
    /// Proven ratio, absent when the run is empirical only.
    #[serde(serialize_with = "ratio_text")]
    guarantee: Option<Rational>,
    schedule: Schedule,
    metrics: Metrics,
}

#[derive(Serialize)]
struct CombineOutput {
    schedule: Schedule,
    metrics: Metrics,
    cutoff: Time,
    #[serde(serialize_with = "ratio_text")]
    makespan_bound: Option<Rational>,
    #[serde(serialize_with = "ratio_text")]
    sumc_bound: Option<Rational>,
    within_bounds: bool,
}

fn ratio_text<S: serde::Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThreePartParams {
    q: usize,
    target: Time,
    elements: Vec<Time>,
    r: Option<Time>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceParams {
    source: Instance,
    c: Time,
    m: Option<Time>,
}

#[derive(Serialize)]
struct ReductionMetadata<'a> {
    threshold: i128,
    metadata: &'a std::collections::BTreeMap<String, i128>,
    warnings: &'a [String],
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Gen {
            variant,
            n,
            max_task,
            max_delay,
            seed,
            out,
        } => {
            let spec = GenSpec {
                variant,
                n,
                max_task,
                max_delay,
                seed,
            };
            let instance = generate_random_instance(&spec)?;
            emit_json(out.as_deref(), &instance)?;
            Ok(Status::Ok)
        }
        Command::Validate {
            instance,
            schedule,
            out,
        } => {
            let instance = read_instance(&instance)?;
            let schedule = read_schedule(&schedule)?;
            let report = validate_schedule(&instance, &schedule)?;
            let complete = schedule.is_complete(&instance);
            let metrics = report
                .feasible
                .then(|| compute_metrics(&instance, &schedule))
                .transpose()?;
            let ok = report.feasible;
            emit_json(
                out.as_deref(),
                &ValidateOutput {
                    report,
                    metrics,
                    complete,
                },
            )?;
            Ok(if ok { Status::Ok } else { Status::Violation })
        }
        Command::Solve { instance, alg, out } => {
            let instance = read_instance(&instance)?;
            let variant = classify_variant(&instance);
            let (algorithm, guarantee) = match alg {
                AlgChoice::Auto => match select_algorithm(variant) {
                    Some(g) => (g.algorithm, Some(g.factor)),
                    None => (AlgorithmId::AsapByDelay, None),
                },
                AlgChoice::Asap => (AlgorithmId::AsapByDelay, None),
                AlgChoice::Blocks => (AlgorithmId::BlocksFixedDelay, None),
                AlgChoice::Chain => (AlgorithmId::ChainSorted, None),
                AlgChoice::ChainMod => (AlgorithmId::ChainSortedModified, None),
            };
            // an explicit choice still carries the guarantee when it is the dispatched one
            let guarantee = guarantee.or_else(|| {
                select_algorithm(variant)
                    .filter(|g| g.algorithm == algorithm)
                    .map(|g| g.factor)
            });
            let schedule = run_algorithm(&instance, algorithm)?;
            let report = validate_schedule(&instance, &schedule)?;
            if !report.feasible {
                eprintln!("{algorithm} produced an infeasible schedule: {:?}", report.violations);
                return Ok(Status::Violation);
            }
            let metrics = compute_metrics(&instance, &schedule)?;
            emit_json(
                out.as_deref(),
                &SolveOutput {
                    variant,
                    algorithm,
                    guarantee,
                    schedule,
                    metrics,
                },
            )?;
            Ok(Status::Ok)
        }
        Command::Exact {
            instance,
            objective,
            cap,
            out,
        } => {
            let instance = read_instance(&instance)?;
            let objective = match objective {
                ObjectiveChoice::Sumc => Objective::SumCompletion,
                ObjectiveChoice::Cmax => Objective::Makespan,
            };
            let result = ExactSolver::with_cap(cap).solve(&instance, objective)?;
            emit_json(out.as_deref(), &result)?;
            Ok(Status::Ok)
        }
        Command::Combine {
            instance,
            delta,
            makespan_schedule,
            sumc_schedule,
            out,
        } => {
            let instance = read_instance(&instance)?;
            let sched_makespan = read_schedule(&makespan_schedule)?;
            let sched_sumc = read_schedule(&sumc_schedule)?;
            for (which, s) in [("makespan", &sched_makespan), ("sumc", &sched_sumc)] {
                let report = validate_schedule(&instance, s)?;
                if !report.feasible || !s.is_complete(&instance) {
                    eprintln!("{which} schedule is infeasible or incomplete: {:?}", report.violations);
                    return Ok(Status::Violation);
                }
            }
            let combined = stein_wein_combine(&instance, &sched_makespan, &sched_sumc, delta)?;
            let metrics = compute_metrics(&instance, &combined)?;
            let m = compute_metrics(&instance, &sched_makespan)?.makespan;
            let s = compute_metrics(&instance, &sched_sumc)?.total_completion;
            let one = Rational::from_integer(1);
            let makespan_bound = (one + delta) * Rational::from_integer(m);
            let cutoff = (delta * Rational::from_integer(m)).floor().to_integer();
            let mut within = Rational::from_integer(metrics.makespan) <= makespan_bound;
            // the ΣC bound is not guaranteed under a fixed first-task order
            let sumc_bound = instance
                .first_task_order()
                .is_none()
                .then(|| (one + delta) / delta * Rational::from_integer(s));
            if let Some(bound) = sumc_bound {
                within &= Rational::from_integer(metrics.total_completion) <= bound;
            }
            emit_json(
                out.as_deref(),
                &CombineOutput {
                    schedule: combined,
                    metrics,
                    cutoff,
                    makespan_bound: Some(makespan_bound),
                    sumc_bound,
                    within_bounds: within,
                },
            )?;
            Ok(if within { Status::Ok } else { Status::Violation })
        }
        Command::Reduce {
            kind,
            params,
            out,
            metadata,
        } => {
            let text = fs::read_to_string(&params).with_context(|| format!("reading {}", params.display()))?;
            let output: ReductionOutput = match kind {
                ReductionKind::ThreePart => {
                    let p: ThreePartParams = serde_json::from_str(&text).context("parsing 3-partition parameters")?;
                    let tp = ThreePartitionInstance::new(p.q, p.target, p.elements)?;
                    reduce_3partition_to_fixed_delay_makespan(&tp, p.r)?
                }
                ReductionKind::Cmax2sumc => {
                    let p: SourceParams = serde_json::from_str(&text).context("parsing reduction parameters")?;
                    reduce_makespan_to_sumc(&p.source, p.c, p.m)?
                }
                ReductionKind::Fixed2sumc => {
                    let p: SourceParams = serde_json::from_str(&text).context("parsing reduction parameters")?;
                    reduce_fixed_order_unit_to_sumc(&p.source, p.c, p.m)?
                }
            };
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            let meta = ReductionMetadata {
                threshold: output.threshold,
                metadata: &output.metadata,
                warnings: &output.warnings,
            };
            match out {
                Some(path) => {
                    emit_json(Some(&path), &output.instance)?;
                    match metadata {
                        Some(meta_path) => emit_json(Some(&meta_path), &meta)?,
                        None => emit_json(None, &meta)?,
                    }
                }
                None => {
                    if let Some(meta_path) = metadata {
                        emit_json(Some(&meta_path), &meta)?;
                    }
                    emit_json(None, &output)?;
                }
            }
            Ok(Status::Ok)
        }
        Command::Bench {
            config,
            variants,
            instances,
            n_min,
            n_max,
            max_task,
            max_delay,
            seed,
            cap,
            time,
            format,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str(&text).context("parsing experiment configuration")?
                }
                None => ExperimentConfig::default(),
            };
            if let Some(v) = variants {
                cfg.variants = v;
            }
            if let Some(k) = instances {
                cfg.instances_per_variant = k;
            }
            if let Some(x) = n_min {
                cfg.n_min = x;
            }
            if let Some(x) = n_max {
                cfg.n_max = x;
            }
            if let Some(x) = max_task {
                cfg.max_task = x;
            }
            if let Some(x) = max_delay {
                cfg.max_delay = x;
            }
            if let Some(x) = seed {
                cfg.seed = x;
            }
            if let Some(x) = cap {
                cfg.cap = x;
            }
            cfg.measure_time |= time;
            if cfg.n_min == 0 {
                bail!("n_min must be at least 1");
            }
            let report = run_experiment(&cfg)?;
            let text = match format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            emit(out.as_deref(), text.trim_end())?;
            let violations = report.violations();
            for s in &report.summary {
                let max = s.max_ratio.map_or("-".to_owned(), |r| r.to_string());
                eprintln!(
                    "{:<18} instances {:>5}  max ratio {:>8}  violations {}",
                    s.variant.name(),
                    s.instances,
                    max,
                    s.violations
                );
            }
            Ok(if violations == 0 { Status::Ok } else { Status::Violation })
        }
    }
}
