//! Scheduling coupled tasks with exact delays on a single machine.
//!
//! Each job consists of a first task `a_j`, an exact delay `L_j` and a second
//! task `b_j`: the second task starts precisely `L_j` after the first one
//! ends. The crate provides
//!
//! * [`model`]: instances, schedules, feasibility checks, metrics and variant
//!   classification;
//! * [`approx`]: approximation algorithms for the total completion time with a
//!   dispatcher choosing the algorithm with the best proven factor;
//! * [`exact`]: an exact branch-and-bound oracle for small instances;
//! * [`bounds`]: lower bounds on the optimal total completion time;
//! * [`biobj`]: composition of a makespan schedule and a total completion time
//!   schedule into one schedule that is good for both;
//! * [`reductions`]: instance generators for the hardness reductions;
//! * [`harness`]: seeded random instances and ratio reports.
//!
//! ```
//! use coupled_tasks::approx::{run_algorithm, select_algorithm};
//! use coupled_tasks::exact::{solve_optimal, Objective};
//! use coupled_tasks::model::{classify_variant, compute_metrics, Instance};
//!
//! let instance = Instance::from_triples(&[(1, 2, 1), (1, 2, 1), (2, 2, 2)]).unwrap();
//! let guarantee = select_algorithm(classify_variant(&instance)).unwrap();
//! let schedule = run_algorithm(&instance, guarantee.algorithm).unwrap();
//! let value = compute_metrics(&instance, &schedule).unwrap().total_completion;
//! let optimum = solve_optimal(&instance, Objective::SumCompletion).unwrap().value;
//! assert_eq!((value, optimum), (20, 19));
//! ```

pub mod approx;
pub mod biobj;
pub mod bounds;
pub mod exact;
pub mod harness;
pub mod model;
pub mod reductions;
mod timeline;

pub use model::{Instance, Job, Schedule, Time, VariantClass};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/variants.md")]
    mod variants {}
    #[doc = include_str!("../../../book/src/algorithms.md")]
    mod algorithms {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/biobjective.md")]
    mod biobjective {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
