mod common;

use common::*;
use coupled_tasks::approx::{run_algorithm, select_algorithm, AlgorithmId};
use coupled_tasks::bounds::lower_bounds;
use coupled_tasks::exact::{
    earliest_starts_for_order, enumerate_task_orders, solve_exhaustive, solve_optimal, ExactSolver, Objective,
    TaskOrder,
};
use coupled_tasks::model::{classify_variant, validate_schedule, Instance, Job, TaskKind, TaskRef, Time};
use proptest::prelude::*;

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

/// Whether some integer start vector realizes `order`, searched up to `horizon`.
fn order_realizable_by_search(instance: &Instance, order: &TaskOrder, horizon: Time) -> bool {
    let jobs = instance.jobs();
    let n = jobs.len();
    let mut starts = vec![0; n];
    let start_of = |starts: &[Time], t: &TaskRef| {
        let j = jobs[t.job - 1];
        match t.kind {
            TaskKind::First => starts[t.job - 1],
            TaskKind::Second => starts[t.job - 1] + j.a + j.l,
        }
    };
    loop {
        if feasible(jobs, &starts)
            && order
                .0
                .windows(2)
                .all(|w| start_of(&starts, &w[0]) < start_of(&starts, &w[1]))
        {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
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

#[test]
fn two_unit_jobs_interleaved_order_is_realizable() {
    // An integer search over horizon 8 confirms the order a1, a2, b1, b2 is
    // realizable for {(1,1,1),(1,1,1)}; a1, a2, b2, b1 is not.
    let i = inst(&[(1, 1, 1), (1, 1, 1)]);
    let o = order(&[(1, 'a'), (2, 'a'), (1, 'b'), (2, 'b')]);
    assert!(order_realizable_by_search(&i, &o, 8));
    let s = earliest_starts_for_order(&i, &o).unwrap().unwrap();
    assert_eq!(starts_of(&s, 2), vec![0, 1]);
    let o = order(&[(1, 'a'), (2, 'a'), (2, 'b'), (1, 'b')]);
    assert!(!order_realizable_by_search(&i, &o, 8));
    assert_eq!(earliest_starts_for_order(&i, &o).unwrap(), None);
}

#[test]
fn spec_optima_match_integer_search() {
    let i = inst(&[(1, 2, 1), (1, 2, 1), (2, 2, 2)]);
    assert_eq!(integer_search(&i, sum_completion), 19);
    assert_eq!(solve_optimal(&i, Objective::SumCompletion).unwrap().value, 19);

    let i = inst(&[(1, 1, 1), (1, 3, 1)]);
    assert_eq!(integer_search(&i, makespan), 5);
    assert_eq!(solve_optimal(&i, Objective::Makespan).unwrap().value, 5);
    assert_eq!(integer_search(&i, sum_completion), 9);
}

#[test]
fn order_counts_match_closed_form() {
    // (2n)! / 2^n
    for (n, count) in [(1, 1), (2, 6), (3, 90), (4, 2520)] {
        let i = Instance::from_jobs(vec![Job::new(1, 1, 1); n]).unwrap();
        assert_eq!(enumerate_task_orders(&i, 6).unwrap().count(), count);
    }
    let i = Instance::new(vec![Job::new(1, 1, 1); 3], Some(vec![3, 1, 2])).unwrap();
    // first tasks fixed: 90 / 3!
    assert_eq!(enumerate_task_orders(&i, 6).unwrap().count(), 15);
}

fn leftmost(instance: &Instance, starts: &[Time]) -> bool {
    // every job touches t = 0 or an end of another task with one of its tasks
    let jobs = instance.jobs();
    let iv = intervals(jobs, starts);
    jobs.iter().zip(starts).enumerate().all(|(i, (j, &s))| {
        let others = iv.iter().enumerate().filter(|(k, _)| k / 2 != i).map(|(_, &(_, e))| e);
        s == 0 || others.clone().any(|e| e == s || e == s + j.a + j.l)
    })
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn exact_matches_integer_search(i in arb_instance(3, 3, 3)) {
        let sumc = solve_optimal(&i, Objective::SumCompletion).unwrap();
        prop_assert_eq!(sumc.value, integer_search(&i, sum_completion));
        let cmax = solve_optimal(&i, Objective::Makespan).unwrap();
        prop_assert_eq!(cmax.value, integer_search(&i, makespan));
    }

    #[test]
    fn pruned_equals_unpruned(i in arb_instance(4, 5, 6)) {
        for obj in [Objective::SumCompletion, Objective::Makespan] {
            let pruned = solve_optimal(&i, obj).unwrap();
            let plain = ExactSolver { cap: 6, prune: false }.solve(&i, obj).unwrap();
            let brute = solve_exhaustive(&i, obj, 6).unwrap();
            prop_assert_eq!(pruned.value, brute.value);
            prop_assert_eq!(plain.value, brute.value);
        }
    }

    #[test]
    fn optimum_witness_is_consistent(i in arb_instance(5, 6, 8)) {
        let r = solve_optimal(&i, Objective::SumCompletion).unwrap();
        prop_assert!(validate_schedule(&i, &r.witness).unwrap().feasible);
        let starts = starts_of(&r.witness, i.len());
        prop_assert_eq!(sum_completion(i.jobs(), &starts), r.value);
        prop_assert!(r.completions_sorted.windows(2).all(|w| w[0] <= w[1]));
        let mut by_start = r.completions_by_start.clone();
        by_start.sort_unstable();
        prop_assert_eq!(by_start, r.completions_sorted.clone());
    }

    #[test]
    fn optimum_bounded_by_lower_bounds_and_algorithms(i in arb_instance(5, 6, 8)) {
        let opt = solve_optimal(&i, Objective::SumCompletion).unwrap().value;
        let lb = lower_bounds(&i);
        prop_assert!(lb.lb_finish_total <= opt && lb.lb_start_total <= opt);
        for alg in [AlgorithmId::AsapByDelay, AlgorithmId::BlocksFixedDelay, AlgorithmId::ChainSorted, AlgorithmId::ChainSortedModified] {
            if let Ok(s) = run_algorithm(&i, alg) {
                prop_assert!(sum_completion(i.jobs(), &starts_of(&s, i.len())) >= opt);
            }
        }
        if let Some(g) = select_algorithm(classify_variant(&i)) {
            prop_assert!(run_algorithm(&i, g.algorithm).is_ok());
        }
    }

    #[test]
    fn optimum_invariant_under_permutation(i in arb_instance(5, 6, 8), seed in any::<u64>()) {
        let n = i.len();
        let mut perm: Vec<usize> = (1..=n).collect();
        let mut x = seed;
        for k in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (x >> 33) as usize % (k + 1));
        }
        let p = i.permuted(&perm);
        for obj in [Objective::SumCompletion, Objective::Makespan] {
            prop_assert_eq!(solve_optimal(&i, obj).unwrap().value, solve_optimal(&p, obj).unwrap().value);
        }
    }

    #[test]
    fn earliest_starts_are_feasible_and_leftmost(i in arb_instance(3, 4, 5)) {
        for o in enumerate_task_orders(&i, 6).unwrap() {
            if let Some(s) = earliest_starts_for_order(&i, &o).unwrap() {
                let starts = starts_of(&s, i.len());
                prop_assert!(feasible(i.jobs(), &starts));
                prop_assert!(leftmost(&i, &starts));
            }
        }
    }

    #[test]
    fn fixed_order_optimum_matches_integer_search(
        ls in prop::collection::vec(0..=4 as Time, 1..=3),
        rot in 0usize..3,
    ) {
        let n = ls.len();
        let jobs: Vec<Job> = ls.iter().map(|&l| Job::new(1, l, 1)).collect();
        let mut order: Vec<usize> = (1..=n).collect();
        order.rotate_left(rot % n);
        let i = Instance::new(jobs, Some(order)).unwrap();
        let r = solve_optimal(&i, Objective::SumCompletion).unwrap();
        prop_assert!(validate_schedule(&i, &r.witness).unwrap().feasible);
        prop_assert_eq!(r.value, integer_search(&i, sum_completion));
    }

    #[test]
    fn decision_mode_agrees_with_optimum(i in arb_instance(4, 5, 6)) {
        let opt = solve_optimal(&i, Objective::Makespan).unwrap().value;
        let solver = ExactSolver::default();
        prop_assert!(solver.find_at_most(&i, Objective::Makespan, opt).unwrap().is_some());
        prop_assert!(solver.find_at_most(&i, Objective::Makespan, opt - 1).unwrap().is_none());
    }
}
