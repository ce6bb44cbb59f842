//! Restless temporal walks from the source, computed on the label graph
//! without the step simulator. Used to cross-check single-transmission runs.

use std::collections::VecDeque;

use crate::bitset::VertexSet;
use crate::instance::ProblemInstance;

/// Vertices active at `t` when the source transmits only at `tau`.
///
/// A walk state `(v, a)` means `v` is activated at step `a` and, if not
/// renewed, stays active during `[a, a+δ-1]`. From there any edge `(v,u)`
/// live at some `l` in that window leads to `(u, l+1)`. Walks never
/// re-enter the source.
pub fn restless_walk_active_oracle(instance: &ProblemInstance, tau: usize, t: usize) -> VertexSet {
    let g = &instance.graph;
    let n = g.n();
    let s = instance.source;
    let delta = instance.delta as usize;
    let t_max = g.t_max();
    let mut result = VertexSet::new(n);
    if tau == 0 || tau > t || (!g.is_periodic() && tau > t_max) {
        return result;
    }

    // visited[v][a] for arrival a in [1, t]
    let mut visited = vec![vec![false; t + 1]; n];
    let mut queue = VecDeque::new();
    visited[s][tau] = true;
    queue.push_back((s, tau));

    while let Some((v, a)) = queue.pop_front() {
        if a + delta > t && a <= t {
            result.insert(v);
        }
        let last = (a + delta - 1).min(t.saturating_sub(1));
        for &(u, label) in g.incident(v) {
            let (u, label) = (u as usize, label as usize);
            if u == s {
                continue;
            }
            for l in occurrences(label, t_max, g.is_periodic(), a, last) {
                let arr = l + 1;
                if !visited[u][arr] {
                    visited[u][arr] = true;
                    queue.push_back((u, arr));
                }
            }
        }
    }
    result
}

/// Times in `[lo, hi]` at which an edge with this label is live.
fn occurrences(label: usize, t_max: usize, periodic: bool, lo: usize, hi: usize) -> impl Iterator<Item = usize> {
    let first = if !periodic {
        if label >= lo && label <= hi {
            label
        } else {
            usize::MAX
        }
    } else if label >= lo {
        label
    } else {
        label + (lo - label).div_ceil(t_max) * t_max
    };
    let step = if periodic { t_max } else { usize::MAX };
    std::iter::successors(Some(first), move |&x| x.checked_add(step)).take_while(move |&x| x <= hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::instance::{Objective, TransmissionSchedule};
    use proptest::prelude::*;

    fn inst(g: TemporalGraph, delta: u32) -> ProblemInstance {
        ProblemInstance::new(g, 0, delta, 1, Objective::MaxSpread).unwrap()
    }

    #[test]
    fn no_edges_only_source() {
        let i = inst(TemporalGraph::builder(3, 8, false).build().unwrap(), 3);
        for t in 1..=8 {
            let r = restless_walk_active_oracle(&i, 2, t);
            let expect = (2..=4).contains(&t);
            assert_eq!(r.contains(0), expect);
            assert_eq!(r.count(), expect as usize);
        }
    }

    #[test]
    fn one_hop() {
        let mut b = TemporalGraph::builder(2, 9, false);
        b.add_label(0, 1, 3).unwrap();
        let i = inst(b.build().unwrap(), 3);
        for t in 1..=9 {
            assert_eq!(restless_walk_active_oracle(&i, 3, t).contains(1), (4..=6).contains(&t));
        }
    }

    #[test]
    fn periodic_occurrences() {
        let v: Vec<usize> = occurrences(2, 3, true, 4, 12).collect();
        assert_eq!(v, vec![5, 8, 11]);
        let v: Vec<usize> = occurrences(2, 3, false, 1, 12).collect();
        assert_eq!(v, vec![2]);
        assert_eq!(occurrences(2, 3, false, 3, 12).count(), 0);
    }

    fn arb_instance() -> impl Strategy<Value = ProblemInstance> {
        (2usize..=10, 1usize..=8, 1u32..=3, any::<bool>()).prop_flat_map(|(n, t_max, delta, periodic)| {
            proptest::collection::vec((0..n, 0..n, 1..=t_max), 0..25).prop_map(move |ls| {
                let mut b = TemporalGraph::builder(n, t_max, periodic);
                for (u, v, t) in ls {
                    if u != v {
                        let _ = b.add_label(u, v, t);
                    }
                }
                inst(b.build().unwrap(), delta)
            })
        })
    }

    proptest! {
        #[test]
        fn oracle_matches_simulator(i in arb_instance()) {
            let horizon = if i.graph.is_periodic() { 3 * i.graph.t_max() + 4 } else { i.graph.t_max() };
            let tau_max = if i.graph.is_periodic() { 2 * i.graph.t_max() } else { i.graph.t_max() };
            for tau in 1..=tau_max.min(horizon) {
                let tr = i.process().simulate(&TransmissionSchedule::new(vec![tau]).unwrap(), horizon).unwrap();
                for t in 1..=horizon {
                    prop_assert_eq!(&restless_walk_active_oracle(&i, tau, t), tr.active_at(t), "tau={} t={}", tau, t);
                }
            }
        }
    }
}
