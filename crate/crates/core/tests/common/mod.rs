#![allow(dead_code)]

use coupled_tasks::model::{Instance, Job, Schedule, Time};
use proptest::prelude::*;

pub fn inst(t: &[(Time, Time, Time)]) -> Instance {
    Instance::from_triples(t).unwrap()
}

/// Task intervals of a complete start vector.
pub fn intervals(jobs: &[Job], starts: &[Time]) -> Vec<(Time, Time)> {
    jobs.iter()
        .zip(starts)
        .flat_map(|(j, &s)| [(s, s + j.a), (s + j.a + j.l, s + j.a + j.l + j.b)])
        .collect()
}

/// Pairwise overlap test, independent of the library's sweep.
pub fn feasible(jobs: &[Job], starts: &[Time]) -> bool {
    let iv = intervals(jobs, starts);
    starts.iter().all(|&s| s >= 0)
        && iv
            .iter()
            .enumerate()
            .all(|(x, &(s1, e1))| iv[x + 1..].iter().all(|&(s2, e2)| e1 <= s2 || e2 <= s1))
}

pub fn starts_of(schedule: &Schedule, n: usize) -> Vec<Time> {
    (1..=n).map(|j| schedule.start(j).expect("complete schedule")).collect()
}

pub fn sum_completion(jobs: &[Job], starts: &[Time]) -> Time {
    jobs.iter().zip(starts).map(|(j, s)| s + j.span()).sum()
}

pub fn makespan(jobs: &[Job], starts: &[Time]) -> Time {
    jobs.iter().zip(starts).map(|(j, s)| s + j.span()).max().unwrap_or(0)
}

/// Minimum of `objective` over all integer start vectors in `[0, horizon]^n`.
/// `horizon = Σ (a + L + b)` always admits the sequential schedule.
pub fn integer_search(instance: &Instance, objective: fn(&[Job], &[Time]) -> Time) -> Time {
    let jobs = instance.jobs();
    let horizon: Time = jobs.iter().map(|j| j.span()).sum();
    let n = jobs.len();
    let mut starts = vec![0; n];
    let mut best = Time::MAX;
    loop {
        let order_ok = instance
            .first_task_order()
            .is_none_or(|o| o.windows(2).all(|w| starts[w[0] - 1] < starts[w[1] - 1]));
        if order_ok && feasible(jobs, &starts) {
            best = best.min(objective(jobs, &starts));
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            starts[k] += 1;
            if starts[k] <= horizon {
                break;
            }
            starts[k] = 0;
            k += 1;
        }
    }
}

/// Instances with up to `max_n` jobs, tasks in `[1, max_task]`, delays in `[0, max_delay]`.
pub fn arb_instance(max_n: usize, max_task: Time, max_delay: Time) -> impl Strategy<Value = Instance> {
    prop::collection::vec((1..=max_task, 0..=max_delay, 1..=max_task), 1..=max_n)
        .prop_map(|t| Instance::from_triples(&t).unwrap())
}

/// `(a, L_j, b)` with common `a`, `b`; `b_le_a` selects the relation.
pub fn arb_fixed_ab(max_n: usize, b_le_a: bool) -> impl Strategy<Value = Instance> {
    (
        1..=6 as Time,
        1..=6 as Time,
        prop::collection::vec(0..=8 as Time, 1..=max_n),
    )
        .prop_map(move |(x, y, ls)| {
            let (lo, hi) = (x.min(y), x.max(y));
            let (a, b) = if b_le_a { (hi, lo) } else { (lo, hi) };
            Instance::from_jobs(ls.into_iter().map(|l| Job::new(a, l, b)).collect()).unwrap()
        })
}

/// `(a_j, L, b_j)` with a common delay.
pub fn arb_fixed_l(max_n: usize) -> impl Strategy<Value = Instance> {
    (
        0..=8 as Time,
        prop::collection::vec((1..=6 as Time, 1..=6 as Time), 1..=max_n),
    )
        .prop_map(|(l, ab)| Instance::from_jobs(ab.into_iter().map(|(a, b)| Job::new(a, l, b)).collect()).unwrap())
}

/// `(p_j, L, p_j)`.
pub fn arb_equal_fixed_l(max_n: usize) -> impl Strategy<Value = Instance> {
    (0..=8 as Time, prop::collection::vec(1..=6 as Time, 1..=max_n))
        .prop_map(|(l, ps)| Instance::from_jobs(ps.into_iter().map(|p| Job::new(p, l, p)).collect()).unwrap())
}

/// `n` cases, without a regression file (integration tests have no `lib.rs`
/// next to them to anchor one).
pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Merged busy intervals of the jobs in `placed` (0-based).
pub fn busy(jobs: &[Job], starts: &[Time], placed: &[usize]) -> Vec<(Time, Time)> {
    let mut iv: Vec<(Time, Time)> = placed
        .iter()
        .flat_map(|&i| {
            let j = jobs[i];
            let s = starts[i];
            [(s, s + j.a), (s + j.a + j.l, s + j.a + j.l + j.b)]
        })
        .collect();
    iv.sort_unstable();
    let mut merged: Vec<(Time, Time)> = Vec::new();
    for (s, e) in iv {
        match merged.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    merged
}

/// Idle intervals of `busy` within `[0, until)`, including leading idle time.
pub fn idle_before(busy: &[(Time, Time)], until: Time) -> Vec<(Time, Time)> {
    let mut out = Vec::new();
    let mut t = 0;
    for &(s, e) in busy {
        if s >= until {
            break;
        }
        if s > t {
            out.push((t, s));
        }
        t = t.max(e);
    }
    if t < until {
        out.push((t, until));
    }
    out
}

pub fn is_idle(busy: &[(Time, Time)], s: Time, e: Time) -> bool {
    busy.iter().all(|&(bs, be)| be <= s || e <= bs)
}
