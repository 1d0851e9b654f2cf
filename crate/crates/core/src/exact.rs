//! Exhaustive exact solver for small instances.
//!
//! Every feasible schedule induces a sequence of its `2n` tasks. For a fixed
//! sequence the start times form a system of difference constraints
//!
//! ```text
//! start(next) ≥ end(prev)            consecutive tasks
//! start(b_j)  = start(a_j) + a_j + L_j
//! start(a_j)  ≥ 0
//! ```
//!
//! whose solution set is closed under componentwise minimum, so it has a least
//! solution that simultaneously minimizes every completion time. Minimizing over
//! all sequences therefore yields the optimum for both `ΣC_j` and `C_max`.
//!
//! [`solve_optimal`] walks the sequences depth-first, maintaining the least
//! solution of the prefix incrementally and pruning with lower bounds;
//! [`solve_exhaustive`] evaluates every sequence from scratch and serves as a
//! cross-check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, Job, Schedule, TaskKind, TaskRef, Time};

pub const DEFAULT_CAP: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance has {n} jobs, above the exact-solver cap of {cap}; raise the cap (--cap) to proceed")]
    OverCap { n: usize, cap: usize },
    #[error("task order is not valid for this instance: {0}")]
    InvalidOrder(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    SumCompletion,
    Makespan,
}

/// A sequence of all `2n` tasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TaskOrder(pub Vec<TaskRef>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalResult {
    pub objective: Objective,
    pub value: Time,
    pub witness: Schedule,
    /// Completion times in non-decreasing order: entry `j - 1` is the
    /// completion of the `j`-th finishing job.
    pub completions_sorted: Vec<Time>,
    /// Completion time of the `j`-th starting job at entry `j - 1`.
    pub completions_by_start: Vec<Time>,
}

impl OptimalResult {
    fn from_witness(instance: &Instance, objective: Objective, value: Time, witness: Schedule) -> Self {
        let mut by_start: Vec<(Time, Time)> = witness
            .starts
            .iter()
            .map(|(&j, &s)| (s, s + instance.jobs()[j - 1].span()))
            .collect();
        by_start.sort_unstable();
        let completions_by_start: Vec<Time> = by_start.iter().map(|&(_, c)| c).collect();
        let mut completions_sorted = completions_by_start.clone();
        completions_sorted.sort_unstable();
        OptimalResult {
            objective,
            value,
            witness,
            completions_sorted,
            completions_by_start,
        }
    }
}

fn objective_value(jobs: &[Job], starts: &[Time], objective: Objective) -> Time {
    let completions = jobs.iter().zip(starts).map(|(j, s)| s + j.span());
    match objective {
        Objective::SumCompletion => completions.sum(),
        Objective::Makespan => completions.max().unwrap_or(0),
    }
}

fn check_cap(instance: &Instance, cap: usize) -> Result<(), ExactError> {
    if instance.len() > cap {
        Err(ExactError::OverCap { n: instance.len(), cap })
    } else {
        Ok(())
    }
}

/// For each job (0-based), the job whose first task must come earlier.
fn first_task_predecessors(instance: &Instance) -> Vec<Option<usize>> {
    let mut pred = vec![None; instance.len()];
    if let Some(order) = instance.first_task_order() {
        for w in order.windows(2) {
            pred[w[1] - 1] = Some(w[0] - 1);
        }
    }
    pred
}

/// Lazy enumeration of task sequences in which every job's first task precedes
/// its second, and first tasks follow the fixed order when there is one.
#[derive(Debug, Clone)]
pub struct TaskOrders {
    jobs: usize,
    pred: Vec<Option<usize>>,
    chain: Vec<usize>,
    placed: Vec<bool>,
    started: bool,
    done: bool,
}

impl TaskOrders {
    fn valid(&self, task: usize) -> bool {
        let job = task / 2;
        if self.placed[task] {
            return false;
        }
        if task.is_multiple_of(2) {
            self.pred[job].is_none_or(|p| self.placed[2 * p])
        } else {
            self.placed[task - 1]
        }
    }

    fn push_from(&mut self, from: usize) -> bool {
        match (from..2 * self.jobs).find(|&t| self.valid(t)) {
            Some(t) => {
                self.placed[t] = true;
                self.chain.push(t);
                true
            }
            None => false,
        }
    }

    fn fill(&mut self) -> bool {
        while self.chain.len() < 2 * self.jobs {
            if !self.push_from(0) {
                return false;
            }
        }
        true
    }

    fn current(&self) -> TaskOrder {
        TaskOrder(self.chain.iter().map(|&t| task_ref(t)).collect())
    }
}

fn task_ref(task: usize) -> TaskRef {
    if task.is_multiple_of(2) {
        TaskRef::first(task / 2 + 1)
    } else {
        TaskRef::second(task / 2 + 1)
    }
}

impl Iterator for TaskOrders {
    type Item = TaskOrder;

    fn next(&mut self) -> Option<TaskOrder> {
        loop {
            if self.done {
                return None;
            }
            if self.started {
                loop {
                    match self.chain.pop() {
                        None => {
                            self.done = true;
                            return None;
                        }
                        Some(t) => {
                            self.placed[t] = false;
                            if self.push_from(t + 1) {
                                break;
                            }
                        }
                    }
                }
            }
            self.started = true;
            if self.fill() {
                return Some(self.current());
            }
        }
    }
}

/// Every admissible task sequence, each exactly once. There are `(2n)!/2^n`
/// without a fixed first-task order.
pub fn enumerate_task_orders(instance: &Instance, cap: usize) -> Result<TaskOrders, ExactError> {
    check_cap(instance, cap)?;
    let n = instance.len();
    Ok(TaskOrders {
        jobs: n,
        pred: first_task_predecessors(instance),
        chain: Vec::with_capacity(2 * n),
        placed: vec![false; 2 * n],
        started: false,
        done: false,
    })
}

#[inline]
fn task_len(jobs: &[Job], task: usize) -> Time {
    let j = &jobs[task / 2];
    if task.is_multiple_of(2) {
        j.a
    } else {
        j.b
    }
}

/// Raises `starts` (indexed by task id) to the least solution of the prefix
/// system: chain constraints along `chain`, coupling for every job in
/// `closed`. Returns `false` on a positive cycle.
fn relax(jobs: &[Job], chain: &[usize], closed: &[usize], starts: &mut [Time]) -> bool {
    let passes = chain.len() + 2;
    for _ in 0..passes {
        let mut changed = false;
        for w in chain.windows(2) {
            let need = starts[w[0]] + task_len(jobs, w[0]);
            if starts[w[1]] < need {
                starts[w[1]] = need;
                changed = true;
            }
        }
        for &i in closed {
            let off = jobs[i].second_offset();
            let (a, b) = (2 * i, 2 * i + 1);
            if starts[b] < starts[a] + off {
                starts[b] = starts[a] + off;
                changed = true;
            }
            if starts[a] < starts[b] - off {
                starts[a] = starts[b] - off;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

/// Least start times realizing `order`, or `None` if no schedule processes the
/// tasks in this sequence.
pub fn earliest_starts_for_order(instance: &Instance, order: &TaskOrder) -> Result<Option<Schedule>, ExactError> {
    let jobs = instance.jobs();
    let n = jobs.len();
    if order.0.len() != 2 * n {
        return Err(ExactError::InvalidOrder(format!(
            "expected {} tasks, got {}",
            2 * n,
            order.0.len()
        )));
    }
    let mut seen = vec![false; 2 * n];
    let mut chain = Vec::with_capacity(2 * n);
    for t in &order.0 {
        if t.job == 0 || t.job > n {
            return Err(ExactError::InvalidOrder(format!("unknown job {}", t.job)));
        }
        let id = 2 * (t.job - 1) + usize::from(t.kind == TaskKind::Second);
        if std::mem::replace(&mut seen[id], true) {
            return Err(ExactError::InvalidOrder(format!("{t} appears twice")));
        }
        if id % 2 == 1 && !seen[id - 1] {
            return Err(ExactError::InvalidOrder(format!("{t} precedes its first task")));
        }
        chain.push(id);
    }
    let closed: Vec<usize> = (0..n).collect();
    let mut starts = vec![0; 2 * n];
    if !relax(jobs, &chain, &closed, &mut starts) {
        return Ok(None);
    }
    let job_starts: Vec<Time> = (0..n).map(|i| starts[2 * i]).collect();
    Ok(Some(Schedule::from_starts(&job_starts)))
}

/// Minimum over all task sequences, each evaluated from scratch. No pruning.
pub fn solve_exhaustive(instance: &Instance, objective: Objective, cap: usize) -> Result<OptimalResult, ExactError> {
    let jobs = instance.jobs();
    let mut best: Option<(Time, Schedule)> = None;
    for order in enumerate_task_orders(instance, cap)? {
        if let Some(schedule) = earliest_starts_for_order(instance, &order)? {
            let starts: Vec<Time> = schedule.starts.values().copied().collect();
            let value = objective_value(jobs, &starts, objective);
            if best.as_ref().is_none_or(|(v, _)| value < *v) {
                best = Some((value, schedule));
            }
        }
    }
    let (value, witness) = best.expect("every instance has at least one realizable task order");
    Ok(OptimalResult::from_witness(instance, objective, value, witness))
}

/// Branch-and-bound configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactSolver {
    pub cap: usize,
    /// Lower-bound pruning, symmetry breaking between identical jobs and a
    /// heuristic incumbent. Disabling it visits every task sequence.
    pub prune: bool,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver {
            cap: DEFAULT_CAP,
            prune: true,
        }
    }
}

impl ExactSolver {
    pub fn with_cap(cap: usize) -> Self {
        ExactSolver { cap, ..Self::default() }
    }

    pub fn solve(&self, instance: &Instance, objective: Objective) -> Result<OptimalResult, ExactError> {
        check_cap(instance, self.cap)?;
        let mut search = Search::new(instance, objective, self.prune);
        if self.prune {
            let heuristic = crate::approx::schedule_asap_by_delay(instance);
            let starts: Vec<Time> = heuristic.starts.values().copied().collect();
            search.best = objective_value(instance.jobs(), &starts, objective);
            search.best_starts = Some(starts);
        }
        search.run();
        let starts = search.best_starts.expect("search always finds a schedule");
        let witness = Schedule::from_starts(&starts);
        Ok(OptimalResult::from_witness(instance, objective, search.best, witness))
    }

    /// A schedule with objective at most `bound`, or `None` if none exists.
    pub fn find_at_most(
        &self,
        instance: &Instance,
        objective: Objective,
        bound: Time,
    ) -> Result<Option<Schedule>, ExactError> {
        check_cap(instance, self.cap)?;
        let mut search = Search::new(instance, objective, self.prune);
        search.best = bound + 1;
        search.stop_at = Some(bound);
        search.run();
        Ok(search.best_starts.map(|s| Schedule::from_starts(&s)))
    }
}

/// Optimum with the default solver (cap 6, pruning on).
pub fn solve_optimal(instance: &Instance, objective: Objective) -> Result<OptimalResult, ExactError> {
    ExactSolver::default().solve(instance, objective)
}

struct Search<'a> {
    jobs: &'a [Job],
    objective: Objective,
    prune: bool,
    pred: Vec<Option<usize>>,
    chain: Vec<usize>,
    /// chain position of every placed first task
    first_pos: Vec<usize>,
    /// prefix sums of task lengths along the chain
    prefix_len: Vec<Time>,
    placed: Vec<bool>,
    closed: Vec<usize>,
    starts: Vec<Time>,
    best: Time,
    best_starts: Option<Vec<Time>>,
    stop_at: Option<Time>,
    scratch: Vec<Time>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, objective: Objective, prune: bool) -> Self {
        let jobs = instance.jobs();
        let n = jobs.len();
        let mut pred = first_task_predecessors(instance);
        if prune && instance.first_task_order().is_none() {
            // identical jobs are interchangeable: fix their relative first-task order
            for i in 0..n {
                pred[i] = (0..i).rev().find(|&k| jobs[k] == jobs[i]);
            }
        }
        Search {
            jobs,
            objective,
            prune,
            pred,
            chain: Vec::with_capacity(2 * n),
            first_pos: vec![0; n],
            prefix_len: vec![0],
            placed: vec![false; 2 * n],
            closed: Vec::with_capacity(n),
            starts: vec![0; 2 * n],
            best: Time::MAX,
            best_starts: None,
            stop_at: None,
            scratch: Vec::with_capacity(2 * n),
        }
    }

    fn last_end(&self) -> Time {
        self.chain
            .last()
            .map_or(0, |&t| self.starts[t] + task_len(self.jobs, t))
    }

    fn finished(&self) -> bool {
        self.best_starts.is_some() && self.stop_at.is_some_and(|b| self.best <= b)
    }

    fn run(&mut self) {
        self.dfs();
    }

    fn dfs(&mut self) {
        if self.finished() {
            return;
        }
        let n = self.jobs.len();
        if self.chain.len() == 2 * n {
            let starts: Vec<Time> = (0..n).map(|i| self.starts[2 * i]).collect();
            let value = objective_value(self.jobs, &starts, self.objective);
            if value < self.best {
                self.best = value;
                self.best_starts = Some(starts);
            }
            return;
        }
        // second tasks first: closing jobs early tends to find good incumbents
        for task in (0..n).map(|i| 2 * i + 1).chain((0..n).map(|i| 2 * i)) {
            if !self.can_place(task) {
                continue;
            }
            let saved: Vec<Time> = self.starts.clone();
            if self.place(task) && (!self.prune || self.lower_bound() < self.best) {
                self.dfs();
            }
            self.unplace(task);
            self.starts = saved;
            if self.finished() {
                return;
            }
        }
    }

    fn can_place(&self, task: usize) -> bool {
        if self.placed[task] {
            return false;
        }
        let job = task / 2;
        if task.is_multiple_of(2) {
            self.pred[job].is_none_or(|p| self.placed[2 * p])
        } else {
            self.placed[task - 1]
        }
    }

    /// Appends `task` and restores the least prefix solution. `false` if the
    /// prefix became unrealizable.
    fn place(&mut self, task: usize) -> bool {
        let end = self.last_end();
        let len = task_len(self.jobs, task);
        let job = task / 2;
        self.placed[task] = true;
        self.chain.push(task);
        self.prefix_len.push(self.prefix_len.last().unwrap() + len);
        self.starts[task] = end;
        if task.is_multiple_of(2) {
            self.first_pos[job] = self.chain.len() - 1;
            return true;
        }
        self.closed.push(job);
        let j = self.jobs[job];
        let pos = self.first_pos[job];
        let between = self.prefix_len[self.chain.len() - 1] - self.prefix_len[pos + 1];
        if between > j.l {
            return false;
        }
        let required = self.starts[task - 1] + j.second_offset();
        if required >= end {
            self.starts[task] = required;
            return true;
        }
        relax(self.jobs, &self.chain, &self.closed, &mut self.starts)
    }

    fn unplace(&mut self, task: usize) {
        self.placed[task] = false;
        self.chain.pop();
        self.prefix_len.pop();
        if task % 2 == 1 {
            self.closed.pop();
        }
    }

    fn lower_bound(&mut self) -> Time {
        let end = self.last_end();
        let jobs = self.jobs;
        let mut closed_sum = 0;
        let mut closed_max = 0;
        let mut open_sum = 0;
        let mut open_max = 0;
        let mut remaining_work = 0;
        let mut unstarted_tail = 0;
        let mut unstarted_max = 0;
        let mut work = std::mem::take(&mut self.scratch);
        work.clear();
        let mut firsts: Vec<Time> = Vec::new();
        for (i, j) in jobs.iter().enumerate() {
            if self.placed[2 * i + 1] {
                let c = self.starts[2 * i + 1] + j.b;
                closed_sum += c;
                closed_max = closed_max.max(c);
            } else if self.placed[2 * i] {
                let c = (self.starts[2 * i] + j.second_offset()).max(end) + j.b;
                open_sum += c;
                open_max = open_max.max(c);
                remaining_work += j.b;
                work.push(j.b);
            } else {
                unstarted_tail += j.l + j.b;
                unstarted_max = unstarted_max.max(end + j.span());
                remaining_work += j.work();
                work.push(j.work());
                firsts.push(j.a);
            }
        }
        let bound = match self.objective {
            Objective::Makespan => closed_max.max(open_max).max(unstarted_max).max(end + remaining_work),
            Objective::SumCompletion => {
                firsts.sort_unstable();
                let mut acc = 0;
                let mut by_start = open_sum + unstarted_tail;
                for a in &firsts {
                    acc += a;
                    by_start += end + acc;
                }
                work.sort_unstable();
                let mut acc = 0;
                let mut by_finish = 0;
                for w in &work {
                    acc += w;
                    by_finish += end + acc;
                }
                closed_sum + by_start.max(by_finish)
            }
        };
        self.scratch = work;
        bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_schedule, Job};

    fn inst(t: &[(Time, Time, Time)]) -> Instance {
        Instance::from_triples(t).unwrap()
    }

    fn order(tasks: &[(usize, char)]) -> TaskOrder {
        TaskOrder(
            tasks
                .iter()
                .map(|&(j, k)| {
                    if k == 'a' {
                        TaskRef::first(j)
                    } else {
                        TaskRef::second(j)
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn order_counts() {
        assert_eq!(enumerate_task_orders(&inst(&[(1, 1, 1)]), 6).unwrap().count(), 1);
        assert_eq!(
            enumerate_task_orders(&inst(&[(1, 1, 1), (1, 1, 1)]), 6)
                .unwrap()
                .count(),
            6
        );
        assert_eq!(enumerate_task_orders(&inst(&[(1, 1, 1); 3]), 6).unwrap().count(), 90);
        assert_eq!(enumerate_task_orders(&inst(&[]), 6).unwrap().count(), 1);
        let fixed = Instance::new(vec![Job::new(1, 1, 1), Job::new(1, 1, 1)], Some(vec![2, 1])).unwrap();
        let orders: Vec<_> = enumerate_task_orders(&fixed, 6).unwrap().collect();
        assert_eq!(orders.len(), 3);
        assert!(orders.iter().all(|o| o.0[0] == TaskRef::first(2)));
    }

    #[test]
    fn order_over_cap() {
        let err = enumerate_task_orders(&inst(&[(1, 1, 1); 3]), 2).unwrap_err();
        assert_eq!(err, ExactError::OverCap { n: 3, cap: 2 });
        assert!(err.to_string().contains("--cap"));
    }

    #[test]
    fn earliest_starts_examples() {
        let s = earliest_starts_for_order(&inst(&[(2, 5, 2)]), &order(&[(1, 'a'), (1, 'b')])).unwrap();
        assert_eq!(s, Some(Schedule::from_starts(&[0])));

        let i = inst(&[(1, 1, 1), (1, 3, 1)]);
        let s = earliest_starts_for_order(&i, &order(&[(1, 'a'), (2, 'a'), (1, 'b'), (2, 'b')]))
            .unwrap()
            .unwrap();
        assert_eq!(s, Schedule::from_starts(&[0, 1]));
        assert_eq!((s.completion(&i, 1), s.completion(&i, 2)), (Some(3), Some(6)));

        // a1[0,1) a2[1,2) b1[2,3) b2[3,4)
        let i = inst(&[(1, 1, 1), (1, 1, 1)]);
        let s = earliest_starts_for_order(&i, &order(&[(1, 'a'), (2, 'a'), (1, 'b'), (2, 'b')])).unwrap();
        assert_eq!(s, Some(Schedule::from_starts(&[0, 1])));
        let s = earliest_starts_for_order(&i, &order(&[(1, 'a'), (2, 'a'), (2, 'b'), (1, 'b')])).unwrap();
        assert_eq!(s, None);
    }

    #[test]
    fn earliest_starts_shift_first_task() {
        // a_1, a_2, b_2, b_1 with b_1 forced after b_2: a_1 must move right
        let i = inst(&[(1, 1, 1), (1, 0, 1)]);
        let s = earliest_starts_for_order(&i, &order(&[(1, 'a'), (2, 'a'), (2, 'b'), (1, 'b')]));
        // a_2 at ≥1, b_2 right after, b_1 at ≥3 → a_1 at ≥1 which collides with a_2: no slack
        assert_eq!(s.unwrap(), None);
        let i = inst(&[(1, 2, 1), (1, 0, 1)]);
        let s = earliest_starts_for_order(&i, &order(&[(1, 'a'), (2, 'a'), (2, 'b'), (1, 'b')]))
            .unwrap()
            .unwrap();
        assert_eq!(s, Schedule::from_starts(&[0, 1]));
    }

    #[test]
    fn earliest_starts_rejects_bad_orders() {
        let i = inst(&[(1, 1, 1)]);
        assert!(earliest_starts_for_order(&i, &order(&[(1, 'b'), (1, 'a')])).is_err());
        assert!(earliest_starts_for_order(&i, &order(&[(1, 'a')])).is_err());
        assert!(earliest_starts_for_order(&i, &order(&[(1, 'a'), (2, 'b')])).is_err());
    }

    #[test]
    fn optimum_examples() {
        let r = solve_optimal(&inst(&[(2, 5, 2)]), Objective::SumCompletion).unwrap();
        assert_eq!(r.value, 9);

        let i = inst(&[(1, 2, 1), (1, 2, 1), (2, 2, 2)]);
        let r = solve_optimal(&i, Objective::SumCompletion).unwrap();
        assert_eq!(r.value, 19);
        assert!(validate_schedule(&i, &r.witness).unwrap().feasible);
        assert_eq!(r.completions_sorted.iter().sum::<Time>(), 19);

        let i = inst(&[(1, 1, 1), (1, 3, 1)]);
        let r = solve_optimal(&i, Objective::Makespan).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.witness, Schedule::from_starts(&[1, 0]));
    }

    #[test]
    fn pruned_matches_exhaustive_on_fixed_cases() {
        let cases: &[&[(Time, Time, Time)]] = &[
            &[(1, 2, 1), (1, 2, 1), (2, 2, 2)],
            &[(1, 1, 1), (1, 3, 1)],
            &[(3, 0, 1), (1, 4, 2), (2, 1, 2), (1, 5, 1)],
            &[(2, 3, 1), (1, 1, 3), (1, 6, 1), (4, 2, 2)],
        ];
        for t in cases {
            let i = inst(t);
            for obj in [Objective::SumCompletion, Objective::Makespan] {
                let pruned = solve_optimal(&i, obj).unwrap();
                let plain = ExactSolver { cap: 6, prune: false }.solve(&i, obj).unwrap();
                let brute = solve_exhaustive(&i, obj, 6).unwrap();
                assert_eq!(pruned.value, brute.value, "{t:?} {obj:?}");
                assert_eq!(plain.value, brute.value, "{t:?} {obj:?}");
            }
        }
    }

    #[test]
    fn fixed_order_is_respected() {
        let i = Instance::new(vec![Job::new(1, 3, 1), Job::new(1, 1, 1)], Some(vec![1, 2])).unwrap();
        let r = solve_optimal(&i, Objective::SumCompletion).unwrap();
        assert!(validate_schedule(&i, &r.witness).unwrap().feasible);
        assert!(r.witness.start(1) < r.witness.start(2));
        assert_eq!(
            r.value,
            solve_exhaustive(&i, Objective::SumCompletion, 6).unwrap().value
        );
    }

    #[test]
    fn decision_search() {
        let i = inst(&[(1, 2, 1), (1, 2, 1), (2, 2, 2)]);
        let solver = ExactSolver::default();
        let s = solver.find_at_most(&i, Objective::SumCompletion, 19).unwrap().unwrap();
        assert!(crate::model::compute_metrics(&i, &s).unwrap().total_completion <= 19);
        assert_eq!(solver.find_at_most(&i, Objective::SumCompletion, 18).unwrap(), None);
    }

    #[test]
    fn empty_instance_optimum() {
        let r = solve_optimal(&inst(&[]), Objective::SumCompletion).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.witness.is_empty());
    }
}
