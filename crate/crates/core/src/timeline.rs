//! Idle-interval bookkeeping for a single machine.

use std::collections::BTreeMap;

use crate::model::Time;

const NIL: u32 = u32::MAX;

/// Open-ended idle time after the last task.
const FOREVER: Time = Time::MAX;

#[derive(Debug, Clone)]
struct Node {
    start: Time,
    end: Time,
    priority: u64,
    left: u32,
    right: u32,
    /// Longest gap in this subtree.
    longest: Time,
}

/// Treap of idle gaps keyed by start, each subtree annotated with its longest
/// gap, so the first gap of a given length after a point is found in
/// logarithmic time.
#[derive(Debug, Clone)]
struct GapTree {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    seed: u64,
}

impl GapTree {
    fn new() -> Self {
        GapTree {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            seed: 0x9E37_79B9_7F4A_7C15,
        }
    }

    fn longest(&self, t: u32) -> Time {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].longest
        }
    }

    fn update(&mut self, t: u32) {
        let n = &self.nodes[t as usize];
        let own = n.end.saturating_sub(n.start);
        let longest = own.max(self.longest(n.left)).max(self.longest(n.right));
        self.nodes[t as usize].longest = longest;
    }

    /// Splits into keys `< key` and keys `≥ key`.
    fn split(&mut self, t: u32, key: Time) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        if self.nodes[t as usize].start < key {
            let (l, r) = self.split(self.nodes[t as usize].right, key);
            self.nodes[t as usize].right = l;
            self.update(t);
            (t, r)
        } else {
            let (l, r) = self.split(self.nodes[t as usize].left, key);
            self.nodes[t as usize].left = r;
            self.update(t);
            (l, t)
        }
    }

    /// Joins two treaps whose keys are ordered `a < b`.
    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].priority > self.nodes[b as usize].priority {
            let r = self.merge(self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = r;
            self.update(a);
            a
        } else {
            let l = self.merge(a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = l;
            self.update(b);
            b
        }
    }

    fn next_priority(&mut self) -> u64 {
        // xorshift64
        let mut x = self.seed;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.seed = x;
        x
    }

    fn insert(&mut self, start: Time, end: Time) {
        let node = Node {
            start,
            end,
            priority: self.next_priority(),
            left: NIL,
            right: NIL,
            longest: end.saturating_sub(start),
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        };
        let (l, r) = self.split(self.root, start);
        let l = self.merge(l, id);
        self.root = self.merge(l, r);
    }

    fn remove(&mut self, start: Time) {
        let (l, r) = self.split(self.root, start);
        let (mid, r) = self.split(r, start.saturating_add(1));
        if mid != NIL {
            self.free.push(mid);
        }
        self.root = self.merge(l, r);
    }

    /// Start of the leftmost gap with start `> after` and length `≥ len`.
    fn first_after(&self, after: Time, len: Time) -> Option<Time> {
        self.first_in(self.root, after, len)
    }

    fn first_in(&self, t: u32, after: Time, len: Time) -> Option<Time> {
        if t == NIL || self.longest(t) < len {
            return None;
        }
        let n = &self.nodes[t as usize];
        if n.start <= after {
            return self.first_in(n.right, after, len);
        }
        self.first_in(n.left, after, len)
            .or_else(|| (n.end.saturating_sub(n.start) >= len).then_some(n.start))
            .or_else(|| self.first_in(n.right, after, len))
    }
}

/// Idle gaps of a machine that starts out idle on `[0, ∞)`. Gaps are disjoint
/// and maximal.
#[derive(Debug, Clone)]
pub(crate) struct Timeline {
    gaps: BTreeMap<Time, Time>,
    index: GapTree,
}

impl Timeline {
    pub(crate) fn new() -> Self {
        let mut index = GapTree::new();
        index.insert(0, FOREVER);
        Timeline {
            gaps: BTreeMap::from([(0, FOREVER)]),
            index,
        }
    }

    /// The gap containing `t`, if `t` is idle.
    fn gap_at(&self, t: Time) -> Option<(Time, Time)> {
        let (&s, &e) = self.gaps.range(..=t).next_back()?;
        (t < e).then_some((s, e))
    }

    pub(crate) fn is_free(&self, s: Time, e: Time) -> bool {
        s >= 0 && (s == e || self.gap_at(s).is_some_and(|(_, ge)| e <= ge))
    }

    /// Marks `[s, e)` busy. The caller guarantees it is currently idle.
    pub(crate) fn insert(&mut self, s: Time, e: Time) {
        debug_assert!(self.is_free(s, e));
        if s == e {
            return;
        }
        let (gs, ge) = self.gap_at(s).expect("inserted interval is idle");
        self.gaps.remove(&gs);
        self.index.remove(gs);
        if gs < s {
            self.gaps.insert(gs, s);
            self.index.insert(gs, s);
        }
        if e < ge {
            self.gaps.insert(e, ge);
            self.index.insert(e, ge);
        }
    }

    /// Smallest `t ≥ lo` (with `lo ≥ 0`) such that `[t, t + len)` is idle.
    fn first_window(&self, lo: Time, len: Time) -> Time {
        if let Some((_, ge)) = self.gap_at(lo) {
            if ge.saturating_sub(lo) >= len {
                return lo;
            }
        }
        self.index.first_after(lo, len).expect("the trailing gap is unbounded")
    }

    /// Smallest `t ≥ lo` such that `[t, t + a)` and `[t + a + l, t + a + l + b)`
    /// are both idle.
    pub(crate) fn earliest_fit(&self, lo: Time, a: Time, l: Time, b: Time) -> Time {
        let mut t = lo.max(0);
        loop {
            t = self.first_window(t, a);
            let u = t + a + l;
            let v = self.first_window(u, b);
            if v == u {
                return t;
            }
            t = v - a - l;
        }
    }

    /// End of the last busy interval (0 when empty).
    #[allow(dead_code)]
    pub(crate) fn end(&self) -> Time {
        self.gaps.keys().next_back().copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_abutting_intervals() {
        let mut t = Timeline::new();
        t.insert(0, 2);
        t.insert(3, 4);
        t.insert(2, 3);
        assert_eq!(t.gaps.len(), 1);
        assert_eq!(t.end(), 4);
        assert!(t.is_free(4, 10));
        assert!(!t.is_free(3, 5));
    }

    #[test]
    fn first_window_skips_short_gaps() {
        let mut t = Timeline::new();
        t.insert(0, 1);
        t.insert(2, 3);
        t.insert(5, 6);
        assert_eq!(t.first_window(0, 1), 1);
        assert_eq!(t.first_window(0, 2), 3);
        assert_eq!(t.first_window(4, 2), 6);
        assert_eq!(t.first_window(3, 3), 6);
    }

    #[test]
    fn earliest_fit_jumps_past_conflicts() {
        let mut t = Timeline::new();
        // job (2,1,1) at 0 → [0,2), [3,4)
        t.insert(0, 2);
        t.insert(3, 4);
        assert_eq!(t.earliest_fit(0, 2, 4, 1), 4);
        assert_eq!(t.earliest_fit(0, 1, 0, 1), 4);
        assert_eq!(t.earliest_fit(0, 1, 1, 1), 2);
    }

    #[test]
    fn gap_index_agrees_with_linear_scan() {
        let mut t = Timeline::new();
        let mut x: u64 = 7;
        let mut rand = |m: u64| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 33) % m
        };
        for _ in 0..300 {
            let s = rand(400) as Time;
            let e = s + 1 + rand(5) as Time;
            if t.is_free(s, e) {
                t.insert(s, e);
            }
            let (lo, len) = (rand(450) as Time, 1 + rand(6) as Time);
            let linear = (lo..).find(|&w| t.is_free(w, w + len)).unwrap();
            assert_eq!(t.first_window(lo, len), linear);
        }
    }
}
