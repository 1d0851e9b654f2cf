//! Simultaneous approximation of makespan and total completion time.
//!
//! Given a schedule that is good for the makespan (value `M`) and one that is
//! good for `ΣC_j`, [`stein_wein_combine`] keeps the jobs of the latter that
//! finish by `⌊δM⌋` and appends the remaining jobs as they appear in the former.
//! The result satisfies
//!
//! ```text
//! C_max ≤ (1 + δ)·M        ΣC_j ≤ (1 + δ)/δ · ΣC_j(sumc schedule)
//! ```
//!
//! so an `α`-approximate makespan schedule and a `β`-approximate `ΣC_j`
//! schedule yield factors `α(1 + δ)` and `β(1 + δ)/δ`.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{validate_schedule, Instance, Schedule, ScheduleError, Time, VariantClass};

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiObjectiveError {
    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(Rational),
    #[error("no table row for variant {variant}; supported: {supported}")]
    NoTableRow { variant: VariantClass, supported: String },
    #[error("{which} schedule: {source}")]
    Schedule {
        which: &'static str,
        #[source]
        source: ScheduleError,
    },
    #[error("{0} schedule is infeasible or incomplete")]
    BadInput(&'static str),
}

/// Balanced factors for one variant: an `alpha`-approximate makespan schedule
/// and a `beta`-approximate `ΣC_j` schedule combined at `delta` give `rho` for
/// both objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiObjectiveRow {
    pub variant: VariantClass,
    pub alpha: Rational,
    pub beta: Rational,
    pub delta: Rational,
    pub rho: Rational,
}

impl BiObjectiveRow {
    /// `alpha·(1 + delta)`
    pub fn makespan_factor(&self) -> Rational {
        self.alpha * (Rational::from_integer(1) + self.delta)
    }

    /// `beta·(1 + delta)/delta`
    pub fn sumc_factor(&self) -> Rational {
        self.beta * (Rational::from_integer(1) + self.delta) / self.delta
    }
}

const fn r(n: i64, d: i64) -> Rational {
    Ratio::new_raw(n, d)
}

const TABLE: [BiObjectiveRow; 8] = [
    row(VariantClass::FixedABaLEb, r(13, 2), r(7, 2), r(3, 1), r(6, 7)),
    row(VariantClass::FixedL, r(6, 1), r(3, 1), r(3, 1), r(1, 1)),
    row(VariantClass::FixedABbLEa, r(11, 2), r(7, 2), r(2, 1), r(4, 7)),
    row(VariantClass::DelayEqualsB, r(11, 2), r(7, 2), r(2, 1), r(4, 7)),
    row(VariantClass::DelayEqualsA, r(11, 2), r(7, 2), r(2, 1), r(4, 7)),
    row(VariantClass::AllEqual, r(4, 1), r(5, 2), r(3, 2), r(3, 5)),
    row(VariantClass::UnitTasks, r(13, 4), r(7, 4), r(3, 2), r(6, 7)),
    row(VariantClass::EqualTasksFixedL, r(3, 1), r(3, 2), r(3, 2), r(1, 1)),
];

const fn row(variant: VariantClass, rho: Rational, alpha: Rational, beta: Rational, delta: Rational) -> BiObjectiveRow {
    BiObjectiveRow {
        variant,
        alpha,
        beta,
        delta,
        rho,
    }
}

/// All rows of the parameter catalog.
pub fn table_rows() -> &'static [BiObjectiveRow] {
    &TABLE
}

pub fn delta_table(variant: VariantClass) -> Result<BiObjectiveRow, BiObjectiveError> {
    TABLE
        .iter()
        .find(|row| row.variant == variant)
        .copied()
        .ok_or_else(|| BiObjectiveError::NoTableRow {
            variant,
            supported: TABLE
                .iter()
                .map(|row| row.variant.name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}

/// Splits `schedule` into the jobs completing by `cutoff` (kept at their
/// starts) and the set of jobs completing later.
pub fn truncate_schedule(instance: &Instance, schedule: &Schedule, cutoff: Time) -> (Schedule, BTreeSet<usize>) {
    let mut kept = Schedule::new();
    let mut removed = BTreeSet::new();
    for (&job, &start) in &schedule.starts {
        if start + instance.jobs()[job - 1].span() <= cutoff {
            kept.insert(job, start);
        } else {
            removed.insert(job);
        }
    }
    (kept, removed)
}

fn check_input(instance: &Instance, schedule: &Schedule, which: &'static str) -> Result<(), BiObjectiveError> {
    let report =
        validate_schedule(instance, schedule).map_err(|source| BiObjectiveError::Schedule { which, source })?;
    if report.feasible && schedule.is_complete(instance) {
        Ok(())
    } else {
        Err(BiObjectiveError::BadInput(which))
    }
}

/// Truncates `sched_sumc` at `⌊δ·M⌋`, `M` being the makespan of
/// `sched_makespan`, and appends the removed jobs with their relative
/// positions from `sched_makespan`, shifted so that the earliest of them
/// starts where the kept part ends.
///
/// With a fixed first-task order only the longest prefix of that order whose
/// jobs all complete by the cutoff is kept, so appended jobs never overtake a
/// kept one. The makespan bound `(1 + δ)M` still holds; the ΣC bound is only
/// guaranteed without a fixed order.
pub fn stein_wein_combine(
    instance: &Instance,
    sched_makespan: &Schedule,
    sched_sumc: &Schedule,
    delta: Rational,
) -> Result<Schedule, BiObjectiveError> {
    if delta <= Rational::from_integer(0) {
        return Err(BiObjectiveError::NonPositiveDelta(delta));
    }
    check_input(instance, sched_makespan, "makespan")?;
    check_input(instance, sched_sumc, "sumc")?;
    let jobs = instance.jobs();
    let makespan = sched_makespan
        .starts
        .iter()
        .map(|(&j, &s)| s + jobs[j - 1].span())
        .max()
        .unwrap_or(0);
    let cutoff = (delta * Rational::from_integer(makespan)).floor().to_integer();
    let (mut combined, mut removed) = truncate_schedule(instance, sched_sumc, cutoff);
    if let Some(order) = instance.first_task_order() {
        if let Some(cut) = order.iter().position(|j| removed.contains(j)) {
            for &job in &order[cut..] {
                removed.insert(job);
            }
            combined = combined.restricted(order[..cut].iter().copied());
        }
    }
    let Some(first) = removed.iter().filter_map(|&j| sched_makespan.start(j)).min() else {
        return Ok(combined);
    };
    let kept_end = combined
        .starts
        .iter()
        .map(|(&j, &s)| s + jobs[j - 1].span())
        .max()
        .unwrap_or(0);
    let shift = kept_end - first;
    for &job in &removed {
        let start = sched_makespan.start(job).expect("makespan schedule is complete");
        combined.insert(job, start + shift);
    }
    Ok(combined)
}
