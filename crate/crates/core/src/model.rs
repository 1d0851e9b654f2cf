//! Problem model: jobs with two coupled tasks, instances, schedules, feasibility
//! checking, objective metrics, variant classification and the JSON file format.
//!
//! Time is integral throughout. A task occupying `[s, e)` does not conflict with
//! a task starting at `e`.
//!
//! Jobs are addressed by their 1-based position in [`Instance::jobs`]; every
//! public API taking or returning a job index uses that convention.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integral time point or duration.
pub type Time = i64;

/// A job: first task `a`, exact delay `l`, second task `b`.
///
/// The second task must start exactly `l` time units after the first one ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Job {
    pub a: Time,
    pub l: Time,
    pub b: Time,
}

impl Job {
    pub const fn new(a: Time, l: Time, b: Time) -> Self {
        Job { a, l, b }
    }

    /// `a + l + b`, the span from the start of the first task to the end of the second.
    #[inline]
    pub fn span(&self) -> Time {
        self.a + self.l + self.b
    }

    /// Offset of the second task relative to the job start.
    #[inline]
    pub fn second_offset(&self) -> Time {
        self.a + self.l
    }

    /// Processing time `a + b`.
    #[inline]
    pub fn work(&self) -> Time {
        self.a + self.b
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("jobs[{index}].{field} must be ≥ {min}, got {value}")]
    OutOfRange {
        index: usize,
        field: &'static str,
        min: Time,
        value: Time,
    },
    #[error("first_task_order is not a permutation of 1..={n}")]
    NotAPermutation { n: usize },
    #[error("malformed instance: {0}")]
    Malformed(String),
}

/// A set of jobs plus an optional fixed sequence for the first tasks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    jobs: Vec<Job>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_task_order: Option<Vec<usize>>,
}

impl Instance {
    pub fn new(jobs: Vec<Job>, first_task_order: Option<Vec<usize>>) -> Result<Self, InstanceError> {
        for (index, job) in jobs.iter().enumerate() {
            for (field, value, min) in [("a", job.a, 1), ("l", job.l, 0), ("b", job.b, 1)] {
                if value < min {
                    return Err(InstanceError::OutOfRange {
                        index,
                        field,
                        min,
                        value,
                    });
                }
            }
        }
        if let Some(order) = &first_task_order {
            if !is_permutation(order, jobs.len()) {
                return Err(InstanceError::NotAPermutation { n: jobs.len() });
            }
        }
        Ok(Instance { jobs, first_task_order })
    }

    /// Instance without a fixed first-task order.
    pub fn from_jobs(jobs: Vec<Job>) -> Result<Self, InstanceError> {
        Self::new(jobs, None)
    }

    /// Convenience constructor from `(a, l, b)` triples.
    pub fn from_triples(triples: &[(Time, Time, Time)]) -> Result<Self, InstanceError> {
        Self::from_jobs(triples.iter().map(|&(a, l, b)| Job::new(a, l, b)).collect())
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    /// Job by 1-based index.
    pub fn job(&self, index: usize) -> Option<&Job> {
        index.checked_sub(1).and_then(|i| self.jobs.get(i))
    }

    /// The fixed first-task sequence (1-based job indices), if any.
    pub fn first_task_order(&self) -> Option<&[usize]> {
        self.first_task_order.as_deref()
    }

    /// Copy of this instance with the jobs permuted: job `perm[i]` of `self`
    /// becomes job `i + 1`. Any fixed order is remapped accordingly.
    ///
    /// # Panics
    ///
    /// If `perm` is not a permutation of `1..=n`.
    pub fn permuted(&self, perm: &[usize]) -> Instance {
        assert!(
            is_permutation(perm, self.jobs.len()),
            "not a permutation of 1..={}",
            self.jobs.len()
        );
        let jobs = perm.iter().map(|&i| self.jobs[i - 1]).collect();
        let order = self.first_task_order.as_ref().map(|order| {
            let mut new_index = vec![0; perm.len()];
            for (new, &old) in perm.iter().enumerate() {
                new_index[old - 1] = new + 1;
            }
            order.iter().map(|&j| new_index[j - 1]).collect()
        });
        Instance {
            jobs,
            first_task_order: order,
        }
    }
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n
        && order
            .iter()
            .all(|&j| (1..=n).contains(&j) && !std::mem::replace(&mut seen[j - 1], true))
}

#[derive(Deserialize)]
struct RawInstance {
    jobs: Vec<Job>,
    #[serde(default)]
    first_task_order: Option<Vec<usize>>,
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawInstance::deserialize(deserializer)?;
        Instance::new(raw.jobs, raw.first_task_order).map_err(serde::de::Error::custom)
    }
}

/// Parses the JSON instance format, e.g.
/// `{"jobs":[{"a":1,"l":3,"b":1}],"first_task_order":[1]}`.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        // serde reports our own validation errors verbatim; keep them readable.
        InstanceError::Malformed(msg)
    })
}

pub fn serialize_instance(instance: &Instance) -> String {
    serde_json::to_string(instance).expect("instance serialization cannot fail")
}

/// Start times of the first tasks, keyed by 1-based job index.
///
/// A schedule may cover only a subset of the jobs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub starts: BTreeMap<usize, Time>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Complete schedule from 0-based start slice: `starts[i]` is the start of job `i + 1`.
    pub fn from_starts(starts: &[Time]) -> Self {
        Schedule {
            starts: starts.iter().enumerate().map(|(i, &s)| (i + 1, s)).collect(),
        }
    }

    pub fn start(&self, job: usize) -> Option<Time> {
        self.starts.get(&job).copied()
    }

    pub fn insert(&mut self, job: usize, start: Time) {
        self.starts.insert(job, start);
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// Completion time `S_j + a_j + l_j + b_j` of a scheduled job.
    pub fn completion(&self, instance: &Instance, job: usize) -> Option<Time> {
        Some(self.start(job)? + instance.job(job)?.span())
    }

    /// Whether every job of `instance` is scheduled.
    pub fn is_complete(&self, instance: &Instance) -> bool {
        self.starts.len() == instance.len() && self.starts.keys().all(|&j| instance.job(j).is_some())
    }

    /// Restriction to the given jobs.
    pub fn restricted<I: IntoIterator<Item = usize>>(&self, jobs: I) -> Schedule {
        Schedule {
            starts: jobs.into_iter().filter_map(|j| self.start(j).map(|s| (j, s))).collect(),
        }
    }

    /// Every task as `(job, which, start, end)`.
    pub fn tasks<'a>(&'a self, instance: &'a Instance) -> impl Iterator<Item = TaskInterval> + 'a {
        self.starts.iter().flat_map(move |(&job, &s)| {
            let j = instance.job(job).copied().unwrap_or(Job::new(0, 0, 0));
            [
                TaskInterval {
                    task: TaskRef::first(job),
                    start: s,
                    end: s + j.a,
                },
                TaskInterval {
                    task: TaskRef::second(job),
                    start: s + j.second_offset(),
                    end: s + j.span(),
                },
            ]
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    First,
    Second,
}

/// One task of one job (1-based job index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaskRef {
    pub job: usize,
    pub kind: TaskKind,
}

impl TaskRef {
    pub fn first(job: usize) -> Self {
        TaskRef {
            job,
            kind: TaskKind::First,
        }
    }

    pub fn second(job: usize) -> Self {
        TaskRef {
            job,
            kind: TaskKind::Second,
        }
    }
}

impl fmt::Display for TaskRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TaskKind::First => write!(f, "a_{}", self.job),
            TaskKind::Second => write!(f, "b_{}", self.job),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaskInterval {
    pub task: TaskRef,
    pub start: Time,
    pub end: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Overlap {
        first: TaskRef,
        second: TaskRef,
    },
    NegativeStart {
        job: usize,
    },
    /// `later` precedes `earlier` in the fixed first-task order but its first
    /// task starts first.
    OrderViolation {
        earlier: usize,
        later: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("schedule refers to job {job}, but the instance has {n} jobs")]
    UnknownJob { job: usize, n: usize },
    #[error("schedule is infeasible: {0:?}")]
    Infeasible(Vec<Violation>),
}

fn check_known_jobs(instance: &Instance, schedule: &Schedule) -> Result<(), ScheduleError> {
    match schedule.starts.keys().find(|&&j| instance.job(j).is_none()) {
        Some(&job) => Err(ScheduleError::UnknownJob { job, n: instance.len() }),
        None => Ok(()),
    }
}

/// Checks nonnegative starts, pairwise disjoint tasks and the fixed first-task
/// order (restricted to the scheduled jobs).
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> Result<ValidationReport, ScheduleError> {
    check_known_jobs(instance, schedule)?;
    let mut violations = Vec::new();

    for (&job, &s) in &schedule.starts {
        if s < 0 {
            violations.push(Violation::NegativeStart { job });
        }
    }

    let mut tasks: Vec<TaskInterval> = schedule.tasks(instance).collect();
    tasks.sort_by_key(|t| (t.start, t.end, t.task));
    let mut reach: Option<TaskInterval> = None;
    for t in tasks {
        if let Some(r) = reach {
            if t.start < r.end {
                violations.push(Violation::Overlap {
                    first: r.task,
                    second: t.task,
                });
            }
            if t.end > r.end {
                reach = Some(t);
            }
        } else {
            reach = Some(t);
        }
    }

    if let Some(order) = instance.first_task_order() {
        let mut prev: Option<(usize, Time)> = None;
        for &job in order {
            if let Some(s) = schedule.start(job) {
                if let Some((p, ps)) = prev {
                    if s <= ps {
                        violations.push(Violation::OrderViolation { earlier: p, later: job });
                    }
                }
                prev = Some((job, s));
            }
        }
    }

    Ok(ValidationReport {
        feasible: violations.is_empty(),
        violations,
    })
}

/// Objective values and idle structure of a feasible schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub total_completion: Time,
    pub makespan: Time,
    /// Maximal idle intervals `(start, end)` with the machine busy right before
    /// and right after. Idle time before the first task is not a gap.
    pub gaps: Vec<(Time, Time)>,
}

pub fn compute_metrics(instance: &Instance, schedule: &Schedule) -> Result<Metrics, ScheduleError> {
    let report = validate_schedule(instance, schedule)?;
    if !report.feasible {
        return Err(ScheduleError::Infeasible(report.violations));
    }
    Ok(metrics_unchecked(instance, schedule))
}

/// Metrics without the feasibility check; callers must know the schedule is feasible.
pub(crate) fn metrics_unchecked(instance: &Instance, schedule: &Schedule) -> Metrics {
    let mut total = 0;
    let mut makespan = 0;
    for (&job, &s) in &schedule.starts {
        let c = s + instance.jobs[job - 1].span();
        total += c;
        makespan = makespan.max(c);
    }
    let mut intervals: Vec<(Time, Time)> = schedule.tasks(instance).map(|t| (t.start, t.end)).collect();
    intervals.sort_unstable();
    let gaps = intervals
        .windows(2)
        .filter(|w| w[0].1 < w[1].0)
        .map(|w| (w[0].1, w[1].0))
        .collect();
    Metrics {
        total_completion: total,
        makespan,
        gaps,
    }
}

/// Problem variants, named after the restrictions on `(a_j, L_j, b_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VariantClass {
    /// `(a_j, L_j, b_j)`
    General,
    /// `(a, L_j, b_j)`
    FixedA,
    /// `(a_j, L_j, b)`
    FixedB,
    /// `(a, L_j, b)` with `b ≤ a`
    #[serde(rename = "FixedAB_bLEa")]
    FixedABbLEa,
    /// `(a, L_j, b)` with `a ≤ b`
    #[serde(rename = "FixedAB_aLEb")]
    FixedABaLEb,
    /// `(1, L_j, 1)`
    UnitTasks,
    /// `(a_j, L, b_j)`
    FixedL,
    /// `(p_j, L_j, p_j)`
    EqualTasks,
    /// `(p_j, L, p_j)`
    EqualTasksFixedL,
    /// `(p_j, p_j, p_j)`
    AllEqual,
    /// `(a_j, p_j, p_j)`: delay equals the second task.
    DelayEqualsB,
    /// `(p_j, p_j, b_j)`: delay equals the first task.
    DelayEqualsA,
    /// `(1, L_j, 1)` with a fixed first-task sequence.
    FixedOrderUnit,
}

impl VariantClass {
    pub const ALL: [VariantClass; 13] = [
        VariantClass::General,
        VariantClass::FixedA,
        VariantClass::FixedB,
        VariantClass::FixedABbLEa,
        VariantClass::FixedABaLEb,
        VariantClass::UnitTasks,
        VariantClass::FixedL,
        VariantClass::EqualTasks,
        VariantClass::EqualTasksFixedL,
        VariantClass::AllEqual,
        VariantClass::DelayEqualsB,
        VariantClass::DelayEqualsA,
        VariantClass::FixedOrderUnit,
    ];

    /// Classification precedence: the first admitted variant wins. Variants
    /// with better proven factors come first.
    const PRECEDENCE: [VariantClass; 13] = [
        VariantClass::FixedOrderUnit,
        VariantClass::EqualTasksFixedL,
        VariantClass::UnitTasks,
        VariantClass::AllEqual,
        VariantClass::FixedABbLEa,
        VariantClass::DelayEqualsB,
        VariantClass::DelayEqualsA,
        VariantClass::FixedABaLEb,
        VariantClass::FixedL,
        VariantClass::EqualTasks,
        VariantClass::FixedA,
        VariantClass::FixedB,
        VariantClass::General,
    ];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            VariantClass::General => "General",
            VariantClass::FixedA => "FixedA",
            VariantClass::FixedB => "FixedB",
            VariantClass::FixedABbLEa => "FixedAB_bLEa",
            VariantClass::FixedABaLEb => "FixedAB_aLEb",
            VariantClass::UnitTasks => "UnitTasks",
            VariantClass::FixedL => "FixedL",
            VariantClass::EqualTasks => "EqualTasks",
            VariantClass::EqualTasksFixedL => "EqualTasksFixedL",
            VariantClass::AllEqual => "AllEqual",
            VariantClass::DelayEqualsB => "DelayEqualsB",
            VariantClass::DelayEqualsA => "DelayEqualsA",
            VariantClass::FixedOrderUnit => "FixedOrderUnit",
        }
    }

    /// Graham-style job characteristics, e.g. `(1, L_j, 1)`.
    pub fn notation(self) -> &'static str {
        match self {
            VariantClass::General => "(a_j, L_j, b_j)",
            VariantClass::FixedA => "(a, L_j, b_j)",
            VariantClass::FixedB => "(a_j, L_j, b)",
            VariantClass::FixedABbLEa => "(a, L_j, b, b <= a)",
            VariantClass::FixedABaLEb => "(a, L_j, b)",
            VariantClass::UnitTasks => "(1, L_j, 1)",
            VariantClass::FixedL => "(a_j, L, b_j)",
            VariantClass::EqualTasks => "(p_j, L_j, p_j)",
            VariantClass::EqualTasksFixedL => "(p_j, L, p_j)",
            VariantClass::AllEqual => "(p_j, p_j, p_j)",
            VariantClass::DelayEqualsB => "(a_j, p_j, p_j)",
            VariantClass::DelayEqualsA => "(p_j, p_j, b_j)",
            VariantClass::FixedOrderUnit => "(1, L_j, 1, fixed first-task order)",
        }
    }

    /// Whether `instance` satisfies every restriction of this variant.
    ///
    /// Only [`VariantClass::General`] and [`VariantClass::FixedOrderUnit`]
    /// admit instances carrying a fixed first-task order.
    pub fn admits(self, instance: &Instance) -> bool {
        let jobs = instance.jobs();
        let all = |f: &dyn Fn(&Job) -> bool| jobs.iter().all(f);
        let constant = |f: &dyn Fn(&Job) -> Time| jobs.windows(2).all(|w| f(&w[0]) == f(&w[1]));
        let unit = || all(&|j| j.a == 1 && j.b == 1);
        let ordered = instance.first_task_order().is_some();
        match self {
            VariantClass::General => true,
            VariantClass::FixedOrderUnit => ordered && unit(),
            _ if ordered => false,
            VariantClass::FixedA => constant(&|j| j.a),
            VariantClass::FixedB => constant(&|j| j.b),
            VariantClass::FixedABbLEa => constant(&|j| j.a) && constant(&|j| j.b) && all(&|j| j.b <= j.a),
            VariantClass::FixedABaLEb => constant(&|j| j.a) && constant(&|j| j.b) && all(&|j| j.a <= j.b),
            VariantClass::UnitTasks => unit(),
            VariantClass::FixedL => constant(&|j| j.l),
            VariantClass::EqualTasks => all(&|j| j.a == j.b),
            VariantClass::EqualTasksFixedL => all(&|j| j.a == j.b) && constant(&|j| j.l),
            VariantClass::AllEqual => all(&|j| j.a == j.b && j.l == j.a),
            VariantClass::DelayEqualsB => all(&|j| j.l == j.b),
            VariantClass::DelayEqualsA => all(&|j| j.l == j.a),
        }
    }
}

impl fmt::Display for VariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for VariantClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VariantClass::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = VariantClass::ALL.iter().map(|v| v.name()).collect();
                format!("unknown variant `{s}`; expected one of {}", names.join(", "))
            })
    }
}

/// The most specific variant admitting `instance`. Empty instances are `General`.
pub fn classify_variant(instance: &Instance) -> VariantClass {
    if instance.is_empty() {
        return VariantClass::General;
    }
    VariantClass::PRECEDENCE
        .into_iter()
        .find(|v| v.admits(instance))
        .unwrap_or(VariantClass::General)
}
