//! Approximation algorithms for minimizing the total completion time, and the
//! dispatcher mapping each variant to an algorithm with a proven factor.
//!
//! | variant | algorithm | factor |
//! |---|---|---|
//! | `(1, L_j, 1)` | [`schedule_asap_by_delay`] | 3/2 |
//! | `(p_j, L, p_j)` | [`schedule_blocks_fixed_delay`] | 3/2 |
//! | `(p_j, p_j, p_j)` | [`schedule_asap_by_delay`] | 3/2 |
//! | `(a, L_j, b)`, `b ≤ a` | [`schedule_asap_by_delay`] | 2 |
//! | `(a_j, p_j, p_j)` | [`schedule_chain_sorted`] by `a + p` | 2 |
//! | `(p_j, p_j, b_j)` | [`schedule_chain_sorted`] by `p + b` | 2 |
//! | `(a, L_j, b)` | [`schedule_asap_by_delay`] | 3 |
//! | `(a_j, L, b_j)` | [`schedule_blocks_fixed_delay`] | 3 |
//!
//! All sorts are stable with ties broken by ascending job index.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, Job, Schedule, Time, VariantClass};
use crate::timeline::Timeline;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApproxError {
    #[error("job {0} does not exist")]
    UnknownJob(usize),
    #[error("job {0} is already scheduled")]
    AlreadyScheduled(usize),
    #[error("delays are not all equal (job {job} has L = {found}, expected {expected})")]
    NonConstantDelay { job: usize, expected: Time, found: Time },
    #[error("job {job} violates the chain precondition: {requirement}")]
    ChainPrecondition { job: usize, requirement: &'static str },
    #[error("{0} does not support a fixed first-task order")]
    FixedOrderUnsupported(AlgorithmId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgorithmId {
    /// Non-decreasing delay order, each job as early as possible.
    AsapByDelay,
    /// Non-decreasing `a + b` order packed into blocks; constant delay only.
    BlocksFixedDelay,
    /// Back-to-back chain in non-decreasing `a + p` order (`L_j = b_j`).
    ChainSorted,
    /// Back-to-back chain in non-decreasing `p + b` order (`L_j = a_j`).
    ChainSortedModified,
}

impl AlgorithmId {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::AsapByDelay => "asap",
            AlgorithmId::BlocksFixedDelay => "blocks",
            AlgorithmId::ChainSorted => "chain",
            AlgorithmId::ChainSortedModified => "chain-mod",
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An algorithm together with its worst-case ratio on a variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guarantee {
    pub algorithm: AlgorithmId,
    pub factor: Ratio<i64>,
}

/// The algorithm with a proven factor for `variant`, or `None` when no
/// constant-factor approximation is known.
pub fn select_algorithm(variant: VariantClass) -> Option<Guarantee> {
    use AlgorithmId::*;
    use VariantClass::*;
    let (algorithm, num, den) = match variant {
        UnitTasks => (AsapByDelay, 3, 2),
        EqualTasksFixedL => (BlocksFixedDelay, 3, 2),
        AllEqual => (AsapByDelay, 3, 2),
        // (p, L_j, p) has constant a = b and is classified here.
        FixedABbLEa => (AsapByDelay, 2, 1),
        DelayEqualsB => (ChainSorted, 2, 1),
        DelayEqualsA => (ChainSortedModified, 2, 1),
        FixedABaLEb => (AsapByDelay, 3, 1),
        FixedL => (BlocksFixedDelay, 3, 1),
        General | FixedA | FixedB | EqualTasks | FixedOrderUnit => return None,
    };
    Some(Guarantee {
        algorithm,
        factor: Ratio::new(num, den),
    })
}

/// Runs the named algorithm.
pub fn run_algorithm(instance: &Instance, algorithm: AlgorithmId) -> Result<Schedule, ApproxError> {
    match algorithm {
        AlgorithmId::AsapByDelay => Ok(schedule_asap_by_delay(instance)),
        AlgorithmId::BlocksFixedDelay => schedule_blocks_fixed_delay(instance).map(|(s, _)| s),
        AlgorithmId::ChainSorted => schedule_chain_sorted(instance, ChainKey::APlusP),
        AlgorithmId::ChainSortedModified => schedule_chain_sorted(instance, ChainKey::PPlusB),
    }
}

fn sorted_indices(jobs: &[Job], key: impl Fn(&Job) -> Time) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..jobs.len()).collect();
    idx.sort_by_key(|&i| key(&jobs[i]));
    idx
}

/// Smallest `t ≥ 0` at which job `job` fits into `partial`: both its first task
/// `[t, t + a)` and its second task `[t + a + L, t + a + L + b)` must be idle.
///
/// Only `t = 0`, task ends `e`, and `e - a - L` need to be tried: shifting a
/// feasible start left keeps it feasible until one of its tasks abuts an
/// existing task end.
pub fn earliest_feasible_start(instance: &Instance, partial: &Schedule, job: usize) -> Result<Time, ApproxError> {
    let j = *instance.job(job).ok_or(ApproxError::UnknownJob(job))?;
    if partial.start(job).is_some() {
        return Err(ApproxError::AlreadyScheduled(job));
    }
    if let Some(&unknown) = partial.starts.keys().find(|&&k| instance.job(k).is_none()) {
        return Err(ApproxError::UnknownJob(unknown));
    }
    let busy: Vec<(Time, Time)> = partial.tasks(instance).map(|t| (t.start, t.end)).collect();
    let idle = |s: Time, e: Time| busy.iter().all(|&(bs, be)| be <= s || e <= bs);
    let fits = |t: Time| idle(t, t + j.a) && idle(t + j.second_offset(), t + j.span());

    let candidates = std::iter::once(0)
        .chain(busy.iter().map(|&(_, e)| e))
        .chain(busy.iter().map(|&(_, e)| e - j.second_offset()))
        .filter(|&t| t >= 0);
    Ok(candidates
        .filter(|&t| fits(t))
        .min()
        .expect("the end of the partial schedule is always a feasible candidate"))
}

/// Order in which [`schedule_asap_by_delay`] places the jobs (0-based): the
/// fixed first-task order if the instance has one, otherwise non-decreasing
/// delay.
pub fn asap_processing_order(instance: &Instance) -> Vec<usize> {
    match instance.first_task_order() {
        Some(order) => order.iter().map(|&j| j - 1).collect(),
        None => sorted_indices(instance.jobs(), |j| j.l),
    }
}

/// Sorts jobs by non-decreasing delay and schedules them one by one as early
/// as possible.
///
/// With a fixed first-task order the jobs are taken in that order instead and
/// each first task is kept after the previous one, so the result is always
/// feasible.
pub fn schedule_asap_by_delay(instance: &Instance) -> Schedule {
    let jobs = instance.jobs();
    let mut timeline = Timeline::new();
    let mut starts = vec![0; jobs.len()];
    let ordered = instance.first_task_order().is_some();
    let mut lo = 0;
    for i in asap_processing_order(instance) {
        let j = jobs[i];
        let t = timeline.earliest_fit(lo, j.a, j.l, j.b);
        timeline.insert(t, t + j.a);
        timeline.insert(t + j.second_offset(), t + j.span());
        starts[i] = t;
        if ordered {
            lo = t + j.a;
        }
    }
    Schedule::from_starts(&starts)
}

/// Blocks built by [`schedule_blocks_fixed_delay`], in scheduling order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Jobs (1-based) in the order they were scheduled.
    pub order: Vec<usize>,
    /// First job (1-based) of every block.
    pub block_starts: Vec<usize>,
    /// `C(last job of block) - S(first job of block)`.
    pub block_lengths: Vec<Time>,
    /// Position in `order` at which every block begins.
    pub block_offsets: Vec<usize>,
}

impl BlockDecomposition {
    /// Jobs (1-based) of block `s`, in scheduling order.
    pub fn block(&self, s: usize) -> &[usize] {
        let from = self.block_offsets[s];
        let to = self.block_offsets.get(s + 1).copied().unwrap_or(self.order.len());
        &self.order[from..to]
    }

    pub fn len(&self) -> usize {
        self.block_starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_starts.is_empty()
    }
}

/// Which rule placed a job inside [`schedule_blocks_fixed_delay`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Placement {
    AfterFirst,
    AfterSecond,
    NewBlock,
}

/// For a common delay `L`: sorts jobs by non-decreasing `a + b` and places each
/// job, in order of preference,
///
/// 1. with its first task right after the previous job's first task,
/// 2. with its second task right after the previous job's second task,
/// 3. after everything scheduled so far, opening a new block,
///
/// taking the first option under which neither task intersects a scheduled task.
pub fn schedule_blocks_fixed_delay(instance: &Instance) -> Result<(Schedule, BlockDecomposition), ApproxError> {
    let jobs = instance.jobs();
    if instance.first_task_order().is_some() {
        return Err(ApproxError::FixedOrderUnsupported(AlgorithmId::BlocksFixedDelay));
    }
    if let Some(first) = jobs.first() {
        if let Some((i, j)) = jobs.iter().enumerate().find(|(_, j)| j.l != first.l) {
            return Err(ApproxError::NonConstantDelay {
                job: i + 1,
                expected: first.l,
                found: j.l,
            });
        }
    }

    let order = sorted_indices(jobs, Job::work);
    let mut timeline = Timeline::new();
    let mut starts = vec![0; jobs.len()];
    let mut decomposition = BlockDecomposition {
        order: order.iter().map(|&i| i + 1).collect(),
        block_starts: Vec::new(),
        block_lengths: Vec::new(),
        block_offsets: Vec::new(),
    };
    let mut prev: Option<usize> = None;
    let mut block_first = 0;

    for (pos, &i) in order.iter().enumerate() {
        let j = jobs[i];
        let fits = |t: Time, tl: &Timeline| {
            t >= 0 && tl.is_free(t, t + j.a) && tl.is_free(t + j.second_offset(), t + j.span())
        };
        let (t, how) = match prev {
            None => (0, Placement::NewBlock),
            Some(p) => {
                let pj = jobs[p];
                let after_first = starts[p] + pj.a;
                let prev_completion = starts[p] + pj.span();
                let after_second = prev_completion - j.second_offset();
                if fits(after_first, &timeline) {
                    (after_first, Placement::AfterFirst)
                } else if fits(after_second, &timeline) {
                    (after_second, Placement::AfterSecond)
                } else {
                    (prev_completion, Placement::NewBlock)
                }
            }
        };
        if how == Placement::NewBlock {
            if let Some(p) = prev {
                decomposition
                    .block_lengths
                    .push(starts[p] + jobs[p].span() - starts[block_first]);
            }
            decomposition.block_starts.push(i + 1);
            decomposition.block_offsets.push(pos);
            block_first = i;
        }
        timeline.insert(t, t + j.a);
        timeline.insert(t + j.second_offset(), t + j.span());
        starts[i] = t;
        prev = Some(i);
    }
    if let Some(p) = prev {
        decomposition
            .block_lengths
            .push(starts[p] + jobs[p].span() - starts[block_first]);
    }
    Ok((Schedule::from_starts(&starts), decomposition))
}

/// Sort key for [`schedule_chain_sorted`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainKey {
    /// `a_j + p_j` for instances with `L_j = b_j = p_j`.
    APlusP,
    /// `p_j + b_j` for instances with `a_j = L_j = p_j`.
    PPlusB,
}

/// Sorts jobs by the key and runs them back to back without interleaving: each
/// first task starts when the previous job completes.
pub fn schedule_chain_sorted(instance: &Instance, key: ChainKey) -> Result<Schedule, ApproxError> {
    let algorithm = match key {
        ChainKey::APlusP => AlgorithmId::ChainSorted,
        ChainKey::PPlusB => AlgorithmId::ChainSortedModified,
    };
    if instance.first_task_order().is_some() {
        return Err(ApproxError::FixedOrderUnsupported(algorithm));
    }
    let jobs = instance.jobs();
    for (i, j) in jobs.iter().enumerate() {
        let (ok, requirement) = match key {
            ChainKey::APlusP => (j.l == j.b, "L_j = b_j"),
            ChainKey::PPlusB => (j.l == j.a, "L_j = a_j"),
        };
        if !ok {
            return Err(ApproxError::ChainPrecondition {
                job: i + 1,
                requirement,
            });
        }
    }
    // Under either precondition the key (a + p or p + b) equals a + b.
    let order = sorted_indices(jobs, Job::work);
    let mut starts = vec![0; jobs.len()];
    let mut clock = 0;
    for i in order {
        starts[i] = clock;
        clock += jobs[i].span();
    }
    Ok(Schedule::from_starts(&starts))
}
