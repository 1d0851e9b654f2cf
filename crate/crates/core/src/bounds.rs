//! Lower bounds on the optimal total completion time.
//!
//! Two independent arguments bound the optimum from below:
//!
//! * **finish bound**: the `j`-th job to finish has completed `j` jobs' worth of
//!   processing, at least the `j` smallest values of `a_i + b_i`;
//! * **start bound**: the `j`-th job to start waits for `j - 1` first tasks, at
//!   least the `j - 1` smallest `a_i`, and then needs its own `a + L + b`.

use serde::{Deserialize, Serialize};

use crate::model::{Instance, Time};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBounds {
    /// Entry `j - 1` bounds the completion time of the `j`-th finishing job.
    pub lb_finish_prefix: Vec<Time>,
    pub lb_start_total: Time,
    pub lb_finish_total: Time,
    pub lb_best: Time,
}

/// Prefix sums of `a_i + b_i` taken in non-decreasing order.
pub fn finish_prefix(instance: &Instance) -> Vec<Time> {
    let mut work: Vec<Time> = instance.jobs().iter().map(|j| j.work()).collect();
    work.sort_unstable();
    work.iter()
        .scan(0, |acc, &w| {
            *acc += w;
            Some(*acc)
        })
        .collect()
}

pub fn lb_total_finish(instance: &Instance) -> Time {
    finish_prefix(instance).iter().sum()
}

pub fn lb_total_start(instance: &Instance) -> Time {
    let mut firsts: Vec<Time> = instance.jobs().iter().map(|j| j.a).collect();
    firsts.sort_unstable();
    let n = firsts.len() as Time;
    // Σ_j Σ_{i ≤ j} a_i = Σ_i (n - i) a_i for 0-based i
    let starts: Time = firsts.iter().enumerate().map(|(i, &a)| (n - i as Time) * a).sum();
    let tails: Time = instance.jobs().iter().map(|j| j.l + j.b).sum();
    starts + tails
}

pub fn lower_bounds(instance: &Instance) -> LowerBounds {
    let lb_finish_prefix = finish_prefix(instance);
    let lb_finish_total = lb_finish_prefix.iter().sum();
    let lb_start_total = lb_total_start(instance);
    LowerBounds {
        lb_finish_prefix,
        lb_start_total,
        lb_finish_total,
        lb_best: lb_start_total.max(lb_finish_total),
    }
}
