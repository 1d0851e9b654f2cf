//! Instance generators for three hardness reductions, plus a structure-aware
//! makespan check for the 3-Partition family.
//!
//! Thresholds are computed in `i128`; the intermediate products grow roughly
//! cubically in `M`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{compute_metrics, validate_schedule, Instance, InstanceError, Job, Schedule, Time};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("q must be even and positive, got {0}")]
    OddQ(usize),
    #[error("target E must be positive, got {0}")]
    NonPositiveTarget(Time),
    #[error("expected 3q = {expected} elements, got {found}")]
    ElementCount { expected: usize, found: usize },
    #[error("elements sum to {found}, expected qE = {expected}")]
    SumMismatch { expected: Time, found: Time },
    #[error("element {index} = {value} is outside the open interval (E/4, E/2)")]
    ElementOutOfRange { index: usize, value: Time },
    #[error("R must exceed 3qE = {bound}, got {r}")]
    RTooSmall { r: Time, bound: Time },
    #[error("source job {job} is not of the form (p, L, p) with the common delay")]
    NotEqualTasksFixedL { job: usize },
    #[error("source job {job} does not have unit tasks")]
    NotUnitTasks { job: usize },
    #[error("source instance has no fixed first-task order")]
    MissingOrder,
    #[error("C must be non-negative, got {0}")]
    NegativeBound(Time),
    #[error("M must be non-negative, got {0}")]
    NegativeCopies(Time),
    #[error("parameters overflow 64-bit task lengths")]
    Overflow,
    #[error("generated instance is invalid: {0}")]
    Instance(#[from] InstanceError),
}

/// Numbers `e_1, …, e_{3q}` with `Σ e_i = qE` and `E/4 < e_i < E/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePartitionInstance {
    q: usize,
    target: Time,
    elements: Vec<Time>,
}

impl ThreePartitionInstance {
    /// Validates the invariants. `q` must also be even.
    pub fn new(q: usize, target: Time, elements: Vec<Time>) -> Result<Self, ReductionError> {
        if q == 0 || q % 2 == 1 {
            return Err(ReductionError::OddQ(q));
        }
        if target <= 0 {
            return Err(ReductionError::NonPositiveTarget(target));
        }
        if elements.len() != 3 * q {
            return Err(ReductionError::ElementCount {
                expected: 3 * q,
                found: elements.len(),
            });
        }
        if let Some(index) = elements.iter().position(|&e| 4 * e <= target || 2 * e >= target) {
            return Err(ReductionError::ElementOutOfRange {
                index,
                value: elements[index],
            });
        }
        let found: Time = elements.iter().sum();
        let expected = q as Time * target;
        if found != expected {
            return Err(ReductionError::SumMismatch { expected, found });
        }
        Ok(ThreePartitionInstance { q, target, elements })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn target(&self) -> Time {
        self.target
    }

    pub fn elements(&self) -> &[Time] {
        &self.elements
    }

    /// Some partition into triples each summing to `E`, as 0-based element
    /// indices, or `None`.
    pub fn solve(&self) -> Option<Vec<[usize; 3]>> {
        let mut used = vec![false; self.elements.len()];
        let mut triples = Vec::with_capacity(self.q);
        self.fill(&mut used, &mut triples).then_some(triples)
    }

    fn fill(&self, used: &mut [bool], triples: &mut Vec<[usize; 3]>) -> bool {
        let Some(i) = used.iter().position(|u| !u) else {
            return true;
        };
        let e = &self.elements;
        used[i] = true;
        for j in i + 1..e.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            for k in j + 1..e.len() {
                if !used[k] && e[i] + e[j] + e[k] == self.target {
                    used[k] = true;
                    triples.push([i, j, k]);
                    if self.fill(used, triples) {
                        return true;
                    }
                    triples.pop();
                    used[k] = false;
                }
            }
            used[j] = false;
        }
        used[i] = false;
        false
    }
}

/// A generated instance with its decision threshold `z` and the parameters used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub threshold: i128,
    pub metadata: BTreeMap<String, i128>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn checked_time(value: i128) -> Result<Time, ReductionError> {
    Time::try_from(value).map_err(|_| ReductionError::Overflow)
}

/// `4q` jobs of the form `(p, R + E, p)`: one per element with `p = e_i`,
/// followed by `q` jobs with `p = R`. The threshold is `z = q(3E + 2R)`; some
/// schedule has `C_max ≤ z` exactly when the elements split into triples
/// summing to `E`. `R` defaults to `3qE + 1`.
pub fn reduce_3partition_to_fixed_delay_makespan(
    tp: &ThreePartitionInstance,
    r: Option<Time>,
) -> Result<ReductionOutput, ReductionError> {
    let q = tp.q as i128;
    let e = tp.target as i128;
    let bound = checked_time(3 * q * e)?;
    let r = r.unwrap_or(bound + 1);
    if r <= bound {
        return Err(ReductionError::RTooSmall { r, bound });
    }
    let l = r.checked_add(tp.target).ok_or(ReductionError::Overflow)?;
    let jobs: Vec<Job> = tp
        .elements
        .iter()
        .map(|&p| Job::new(p, l, p))
        .chain(std::iter::repeat_n(Job::new(r, l, r), tp.q))
        .collect();
    let threshold = q * (3 * e + 2 * r as i128);
    let metadata = BTreeMap::from([
        ("q".to_owned(), q),
        ("E".to_owned(), e),
        ("R".to_owned(), r as i128),
        ("L".to_owned(), l as i128),
        ("z".to_owned(), threshold),
    ]);
    Ok(ReductionOutput {
        instance: Instance::from_jobs(jobs)?,
        threshold,
        metadata,
        warnings: Vec::new(),
    })
}

/// The source jobs followed by `M` copies of `(P, L, P)` with
/// `P = Σ p_i + nL`. With `h = 2P + L` the threshold is
/// `z = (n + M)C + h·M(M + 1)/2`; for `M > nC` some schedule has
/// `ΣC_j ≤ z` exactly when the source admits `C_max ≤ C`. `M` defaults to
/// `nC + 1`; smaller values only produce a warning.
pub fn reduce_makespan_to_sumc(src: &Instance, c: Time, m: Option<Time>) -> Result<ReductionOutput, ReductionError> {
    if c < 0 {
        return Err(ReductionError::NegativeBound(c));
    }
    let jobs = src.jobs();
    let l = jobs.first().map_or(0, |j| j.l);
    if let Some(job) = jobs.iter().position(|j| j.a != j.b || j.l != l) {
        return Err(ReductionError::NotEqualTasksFixedL { job: job + 1 });
    }
    let n = jobs.len() as i128;
    let m = m.unwrap_or(checked_time(n * c as i128 + 1)?);
    if m < 0 {
        return Err(ReductionError::NegativeCopies(m));
    }
    let mut warnings = Vec::new();
    if (m as i128) <= n * c as i128 {
        warnings.push(format!(
            "M = {m} does not exceed nC = {}; the equivalence is not guaranteed",
            n * c as i128
        ));
    }
    let sum_p: i128 = jobs.iter().map(|j| j.a as i128).sum();
    let big_p = sum_p + n * l as i128;
    let h = 2 * big_p + l as i128;
    let big = Job::new(checked_time(big_p)?, l, checked_time(big_p)?);
    let count = usize::try_from(m).map_err(|_| ReductionError::Overflow)?;
    let out_jobs: Vec<Job> = jobs.iter().copied().chain(std::iter::repeat_n(big, count)).collect();
    let mi = m as i128;
    let threshold = (n + mi) * c as i128 + h * mi * (mi + 1) / 2;
    let metadata = BTreeMap::from([
        ("n".to_owned(), n),
        ("M".to_owned(), mi),
        ("C".to_owned(), c as i128),
        ("P".to_owned(), big_p),
        ("h".to_owned(), h),
        ("z".to_owned(), threshold),
    ]);
    Ok(ReductionOutput {
        instance: Instance::from_jobs(out_jobs)?,
        threshold,
        metadata,
        warnings,
    })
}

/// The source jobs followed by `M` unit-task helpers, the `k`-th with delay
/// `C + 2(k - 1)`. Helper first tasks come first, in decreasing index order,
/// then the source order. The threshold is
/// `z = n(M + C) + M² + M(M + 1)/2 + MC`. `M` defaults to `nC + 1`.
pub fn reduce_fixed_order_unit_to_sumc(
    src: &Instance,
    c: Time,
    m: Option<Time>,
) -> Result<ReductionOutput, ReductionError> {
    if c < 0 {
        return Err(ReductionError::NegativeBound(c));
    }
    let jobs = src.jobs();
    if let Some(job) = jobs.iter().position(|j| j.a != 1 || j.b != 1) {
        return Err(ReductionError::NotUnitTasks { job: job + 1 });
    }
    let order = src.first_task_order().ok_or(ReductionError::MissingOrder)?;
    let n = jobs.len();
    let m = m.unwrap_or(checked_time(n as i128 * c as i128 + 1)?);
    if m < 0 {
        return Err(ReductionError::NegativeCopies(m));
    }
    let mut warnings = Vec::new();
    if (m as i128) <= n as i128 * c as i128 {
        warnings.push(format!(
            "M = {m} does not exceed nC = {}; the equivalence is not guaranteed",
            n as i128 * c as i128
        ));
    }
    let count = usize::try_from(m).map_err(|_| ReductionError::Overflow)?;
    let mut out_jobs = jobs.to_vec();
    for k in 0..m {
        let delay = (c as i128) + 2 * k as i128;
        out_jobs.push(Job::new(1, checked_time(delay)?, 1));
    }
    let out_order: Vec<usize> = (n + 1..=n + count).rev().chain(order.iter().copied()).collect();
    let (ni, mi, ci) = (n as i128, m as i128, c as i128);
    let threshold = ni * (mi + ci) + mi * mi + mi * (mi + 1) / 2 + mi * ci;
    let metadata = BTreeMap::from([
        ("n".to_owned(), ni),
        ("M".to_owned(), mi),
        ("C".to_owned(), ci),
        ("z".to_owned(), threshold),
    ]);
    Ok(ReductionOutput {
        instance: Instance::new(out_jobs, Some(out_order))?,
        threshold,
        metadata,
        warnings,
    })
}

/// Outcome of [`check_3partition_makespan`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePartitionCheck {
    /// Pairs of large jobs (1-based) interleaved with each other.
    pub pairing: Vec<(usize, usize)>,
    /// For every pair, the small jobs (1-based) filling its two gaps, or
    /// `None` when no gap filling exists.
    pub gap_fillings: Option<Vec<[[usize; 3]; 2]>>,
    /// A schedule realizing the filling, with its makespan.
    pub witness: Option<(Schedule, Time)>,
}

impl ThreePartitionCheck {
    /// Whether some schedule has makespan at most the threshold.
    pub fn within_threshold(&self, threshold: i128) -> bool {
        self.witness.as_ref().is_some_and(|(_, m)| *m as i128 <= threshold)
    }
}

/// Decides `C_max ≤ z` for the output of
/// [`reduce_3partition_to_fixed_delay_makespan`] by following the structure
/// every such schedule has.
///
/// Within the delay of each large job lies exactly one task of another large
/// job, so large jobs interleave in pairs `a_i, a_i', b_i, b_i'`. Each pair
/// leaves two gaps of length `E`, each filled completely by three small tasks.
/// Since all large jobs are identical the pairing is immaterial, and a filling
/// exists exactly when the elements partition into triples summing to `E`.
/// When it does, the filling is laid out block by block and the resulting
/// schedule is validated.
pub fn check_3partition_makespan(tp: &ThreePartitionInstance, out: &ReductionOutput) -> ThreePartitionCheck {
    let small = 3 * tp.q;
    let pairing: Vec<(usize, usize)> = (0..tp.q / 2).map(|k| (small + 2 * k + 1, small + 2 * k + 2)).collect();
    let Some(triples) = tp.solve() else {
        return ThreePartitionCheck {
            pairing,
            gap_fillings: None,
            witness: None,
        };
    };
    let fillings: Vec<[[usize; 3]; 2]> = triples
        .chunks(2)
        .map(|c| [c[0].map(|i| i + 1), c[1].map(|i| i + 1)])
        .collect();
    let schedule = layout_blocks(tp, &out.instance, &pairing, &fillings);
    let witness = match validate_schedule(&out.instance, &schedule) {
        Ok(report) if report.feasible => compute_metrics(&out.instance, &schedule)
            .ok()
            .map(|m| (schedule, m.makespan)),
        _ => None,
    };
    ThreePartitionCheck {
        pairing,
        gap_fillings: Some(fillings),
        witness,
    }
}

/// Concatenates one block per pair. In a block starting its large job at `s`:
/// `a_i` at `s`, the second tasks of the first triple (largest first) in
/// `[s + R, s + R + E)`, `a_i'` at `s + R + E`, and the first tasks of the
/// second triple (smallest first) in `[s + 3R + E, s + 3R + 2E)`.
fn layout_blocks(
    tp: &ThreePartitionInstance,
    instance: &Instance,
    pairing: &[(usize, usize)],
    fillings: &[[[usize; 3]; 2]],
) -> Schedule {
    let jobs = instance.jobs();
    let target = tp.target;
    let r = jobs[pairing[0].0 - 1].a;
    let delay = jobs[0].l;
    let size = |j: usize| jobs[j - 1].a;
    let mut schedule = Schedule::new();
    let mut cursor = 0;
    for (&(i, i2), [first, second]) in pairing.iter().zip(fillings) {
        let mut desc = *first;
        desc.sort_by_key(|&j| std::cmp::Reverse(size(j)));
        let mut asc = *second;
        asc.sort_by_key(|&j| size(j));
        let s = cursor + target + size(desc[0]);
        schedule.insert(i, s);
        schedule.insert(i2, s + r + target);
        let mut at = s + r;
        for &j in &desc {
            schedule.insert(j, at - delay - size(j));
            at += size(j);
        }
        let mut at = s + 3 * r + target;
        for &j in &asc {
            schedule.insert(j, at);
            at += size(j);
        }
        cursor = schedule
            .starts
            .iter()
            .map(|(&j, &st)| st + jobs[j - 1].span())
            .max()
            .unwrap_or(cursor);
    }
    schedule
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VariantClass;

    fn yes_tp() -> ThreePartitionInstance {
        ThreePartitionInstance::new(2, 20, vec![6, 7, 7, 6, 7, 7]).unwrap()
    }

    #[test]
    fn three_partition_validation() {
        assert_eq!(
            ThreePartitionInstance::new(3, 20, vec![6, 7, 7, 6, 7, 7, 6, 7, 7]),
            Err(ReductionError::OddQ(3))
        );
        assert!(matches!(
            ThreePartitionInstance::new(2, 20, vec![5, 8, 7, 6, 7, 7]),
            Err(ReductionError::ElementOutOfRange { index: 0, value: 5 })
        ));
        assert!(matches!(
            ThreePartitionInstance::new(2, 20, vec![6, 7, 7, 6, 7, 8]),
            Err(ReductionError::SumMismatch { .. })
        ));
        assert!(matches!(
            ThreePartitionInstance::new(2, 20, vec![6, 7, 7]),
            Err(ReductionError::ElementCount { .. })
        ));
    }

    #[test]
    fn three_partition_solver() {
        let t = yes_tp().solve().unwrap();
        assert_eq!(t.len(), 2);
        let no = ThreePartitionInstance::new(2, 20, vec![6, 6, 6, 6, 7, 9]).unwrap();
        assert_eq!(no.solve(), None);
    }

    #[test]
    fn fixed_delay_makespan_example() {
        let out = reduce_3partition_to_fixed_delay_makespan(&yes_tp(), None).unwrap();
        assert_eq!(out.metadata["R"], 121);
        assert_eq!(out.threshold, 604);
        let jobs = out.instance.jobs();
        assert_eq!(jobs.len(), 8);
        assert!(jobs.iter().all(|j| j.l == 141 && j.a == j.b));
        assert_eq!(jobs[6], Job::new(121, 141, 121));
        assert_eq!(jobs[0], Job::new(6, 141, 6));
        assert_eq!(
            reduce_3partition_to_fixed_delay_makespan(&yes_tp(), Some(120)),
            Err(ReductionError::RTooSmall { r: 120, bound: 120 })
        );
    }

    #[test]
    fn structured_check_yes_and_no() {
        let tp = yes_tp();
        let out = reduce_3partition_to_fixed_delay_makespan(&tp, None).unwrap();
        let check = check_3partition_makespan(&tp, &out);
        assert!(check.within_threshold(out.threshold));

        let no = ThreePartitionInstance::new(2, 20, vec![6, 6, 6, 6, 7, 9]).unwrap();
        let out = reduce_3partition_to_fixed_delay_makespan(&no, None).unwrap();
        let check = check_3partition_makespan(&no, &out);
        assert_eq!(check.gap_fillings, None);
        assert!(!check.within_threshold(out.threshold));
    }

    #[test]
    fn makespan_to_sumc_example() {
        let src = Instance::from_triples(&[(1, 1, 1)]).unwrap();
        let out = reduce_makespan_to_sumc(&src, 3, Some(4)).unwrap();
        assert_eq!(out.instance.len(), 5);
        assert_eq!(out.instance.jobs()[1], Job::new(2, 1, 2));
        assert_eq!((out.metadata["h"], out.threshold), (5, 65));
        assert!(out.warnings.is_empty());
        assert_eq!(
            crate::model::classify_variant(&out.instance),
            VariantClass::EqualTasksFixedL
        );

        let warned = reduce_makespan_to_sumc(&src, 3, Some(3)).unwrap();
        assert_eq!(warned.warnings.len(), 1);
        assert_eq!(reduce_makespan_to_sumc(&src, 3, None).unwrap().metadata["M"], 4);

        let empty = Instance::from_triples(&[]).unwrap();
        assert!(matches!(
            reduce_makespan_to_sumc(&empty, 0, Some(1)),
            Err(ReductionError::Instance(_))
        ));
        let bad = Instance::from_triples(&[(1, 1, 2)]).unwrap();
        assert_eq!(
            reduce_makespan_to_sumc(&bad, 3, None),
            Err(ReductionError::NotEqualTasksFixedL { job: 1 })
        );
    }

    #[test]
    fn fixed_order_unit_example() {
        let src = Instance::new(vec![Job::new(1, 1, 1)], Some(vec![1])).unwrap();
        let out = reduce_fixed_order_unit_to_sumc(&src, 3, Some(4)).unwrap();
        let delays: Vec<Time> = out.instance.jobs()[1..].iter().map(|j| j.l).collect();
        assert_eq!(delays, vec![3, 5, 7, 9]);
        assert_eq!(out.instance.first_task_order(), Some(&[5, 4, 3, 2, 1][..]));
        assert_eq!(out.threshold, 45);

        let none = reduce_fixed_order_unit_to_sumc(&src, 3, Some(0)).unwrap();
        assert_eq!(none.instance, src);
        assert_eq!(none.threshold, 3);

        let unordered = Instance::from_triples(&[(1, 1, 1)]).unwrap();
        assert_eq!(
            reduce_fixed_order_unit_to_sumc(&unordered, 3, None),
            Err(ReductionError::MissingOrder)
        );
        let wide = Instance::new(vec![Job::new(2, 1, 1)], Some(vec![1])).unwrap();
        assert_eq!(
            reduce_fixed_order_unit_to_sumc(&wide, 3, None),
            Err(ReductionError::NotUnitTasks { job: 1 })
        );
    }

    #[test]
    fn thresholds_at_large_m() {
        let src = Instance::new(vec![Job::new(1, 5, 1), Job::new(1, 2, 1)], Some(vec![2, 1])).unwrap();
        let out = reduce_fixed_order_unit_to_sumc(&src, 9, Some(1000)).unwrap();
        let (n, m, c) = (2i128, 1000i128, 9i128);
        assert_eq!(out.threshold, n * (m + c) + m * m + m * (m + 1) / 2 + m * c);

        let src = Instance::from_triples(&[(1000, 500, 1000), (2000, 500, 2000)]).unwrap();
        let out = reduce_makespan_to_sumc(&src, 7000, Some(1000)).unwrap();
        let h = 2 * (3000 + 2 * 500) + 500;
        assert_eq!(out.threshold, 1002 * 7000 + h * 1000 * 1001 / 2);
    }
}
