//! MaximumCoverage view of single-transmission runs and the greedy
//! approximation built on it.

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::dynamics::Process;
use crate::error::{Error, Result};
use crate::instance::{DynamicsKind, Objective, ProblemInstance, ScheduleConstraint, TransmissionSchedule};
use crate::objectives::{evaluate, ObjectiveValue};

/// `sets[i-1]` is what a lone transmission at time `i` reaches, over the
/// universe of non-source vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageInstance {
    pub universe_size: usize,
    pub sets: Vec<VertexSet>,
    pub budget: usize,
    pub target: usize,
    /// Vertex id of each universe element.
    pub vertex_of: Vec<usize>,
}

impl CoverageInstance {
    pub fn new(universe_size: usize, sets: Vec<VertexSet>, budget: usize, target: usize) -> Self {
        CoverageInstance {
            universe_size,
            sets,
            budget,
            target,
            vertex_of: (0..universe_size).collect(),
        }
    }

    /// `|⋃_{i ∈ chosen} S_i|` for 1-based indices.
    pub fn covered_by(&self, chosen: &[usize]) -> usize {
        let mut u = VertexSet::new(self.universe_size);
        for &i in chosen {
            u.union_with(&self.sets[i - 1]);
        }
        u.count()
    }
}

fn to_universe(active: &VertexSet, source: usize) -> VertexSet {
    let n = active.capacity();
    let mut out = VertexSet::new(n.saturating_sub(1));
    for v in active.iter() {
        if v != source {
            out.insert(v - (v > source) as usize);
        }
    }
    out
}

fn wrap(instance: &ProblemInstance, sets: Vec<VertexSet>) -> CoverageInstance {
    let n = instance.graph.n();
    let s = instance.source;
    CoverageInstance {
        universe_size: n - 1,
        sets,
        budget: instance.budget,
        target: instance.target,
        vertex_of: (0..n).filter(|&v| v != s).collect(),
    }
}

/// Number of steps after a transmission within which every first
/// activation on a periodic graph happens.
pub fn periodic_spread_horizon(instance: &ProblemInstance) -> usize {
    let g = &instance.graph;
    (g.n() + 1) * g.t_max() * instance.delta as usize
}

/// Ever-active non-source vertices of a lone transmission at `tau`.
pub fn singleton_spread(p: &Process<'_>, tau: usize, horizon_end: usize) -> VertexSet {
    let times = [tau];
    let mut sim = p.simulator(&times);
    let mut ever = VertexSet::new(p.graph.n());
    let mut a = VertexSet::new(p.graph.n());
    for _ in 0..horizon_end {
        sim.advance();
        sim.fill_active(&mut a);
        ever.union_with(&a);
    }
    to_universe(&ever, p.source)
}

pub fn build_spread_coverage(instance: &ProblemInstance) -> Result<CoverageInstance> {
    let p = instance.process();
    let g = &instance.graph;
    let extra = periodic_spread_horizon(instance);
    let sets = (1..=g.t_max())
        .into_par_iter()
        .map(|tau| {
            let end = if g.is_periodic() { tau + extra } else { g.t_max() };
            singleton_spread(&p, tau, end)
        })
        .collect();
    Ok(wrap(instance, sets))
}

/// Candidate transmission times for a fixed checkpoint: `[1, t_max]`, or
/// `[1, t_star]` on periodic graphs where later periods still matter.
pub fn tstep_candidates(instance: &ProblemInstance, t_star: usize) -> Result<usize> {
    let g = &instance.graph;
    if t_star == 0 {
        return Err(Error::InvalidInstance("t_star must be at least 1".into()));
    }
    if !g.is_periodic() {
        if t_star > g.t_max() {
            return Err(Error::HorizonExceeded {
                horizon: t_star,
                t_max: g.t_max(),
            });
        }
        return Ok(g.t_max());
    }
    Ok(g.t_max().max(t_star))
}

pub fn build_tstep_coverage(instance: &ProblemInstance, t_star: usize) -> Result<CoverageInstance> {
    let p = instance.process();
    let count = tstep_candidates(instance, t_star)?;
    let n = instance.graph.n();
    let sets = (1..=count)
        .into_par_iter()
        .map(|tau| {
            if tau > t_star {
                return VertexSet::new(n - 1);
            }
            let times = [tau];
            let mut sim = p.simulator(&times);
            for _ in 0..t_star {
                sim.advance();
            }
            to_universe(&sim.active_set(), p.source)
        })
        .collect();
    Ok(wrap(instance, sets))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreedyResult {
    /// 1-based set indices in pick order.
    pub chosen: Vec<usize>,
    pub covered: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetStatus {
    /// At least `(1-1/e)·k` covered; no conclusion about `k` itself.
    ApproximatelyReached,
    /// Greedy fell below `(1-1/e)·k`, so no `b` sets cover `k`.
    Unreachable,
}

impl GreedyResult {
    pub fn target_status(&self, k: usize) -> TargetStatus {
        if (self.covered as f64) < (1.0 - (-1.0f64).exp()) * k as f64 {
            TargetStatus::Unreachable
        } else {
            TargetStatus::ApproximatelyReached
        }
    }
}

/// Picks `min(budget, |sets|)` sets, each with the largest marginal gain,
/// smallest index on ties.
pub fn greedy_max_coverage(cov: &CoverageInstance) -> GreedyResult {
    let mut covered = VertexSet::new(cov.universe_size);
    let mut used = vec![false; cov.sets.len()];
    let mut chosen = Vec::new();
    for _ in 0..cov.budget.min(cov.sets.len()) {
        let mut best: Option<(usize, usize)> = None;
        for (i, s) in cov.sets.iter().enumerate() {
            if used[i] {
                continue;
            }
            let g = covered.gain(s);
            if best.is_none_or(|(_, bg)| g > bg) {
                best = Some((i, g));
            }
        }
        let (i, _) = best.expect("an unused set remains");
        used[i] = true;
        covered.union_with(&cov.sets[i]);
        chosen.push(i + 1);
    }
    GreedyResult {
        chosen,
        covered: covered.count(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxResult {
    pub schedule: TransmissionSchedule,
    pub value: ObjectiveValue,
    /// Greedy coverage count; equals the excl.-source value at `t_star`
    /// for MaxViral and the objective value otherwise.
    pub covered: usize,
    pub t_star: Option<usize>,
}

fn schedule_of(chosen: &[usize]) -> TransmissionSchedule {
    TransmissionSchedule::from_unsorted(chosen.to_vec()).expect("distinct positive indices")
}

/// Greedy schedule for MaxSpread, MaxViral or MaxViralTstep.
pub fn approx_solve(instance: &ProblemInstance) -> Result<ApproxResult> {
    if instance.dynamics != DynamicsKind::Renewal {
        return Err(Error::Unsupported("greedy needs renewal dynamics".into()));
    }
    if instance.constraint != ScheduleConstraint::Unconstrained {
        return Err(Error::Unsupported("greedy supports unconstrained schedules only".into()));
    }
    let (greedy, t_star) = match instance.objective {
        Objective::MaxSpread => (greedy_max_coverage(&build_spread_coverage(instance)?), None),
        Objective::MaxViralTstep { t_star } => (
            greedy_max_coverage(&build_tstep_coverage(instance, t_star)?),
            Some(t_star),
        ),
        Objective::MaxViral => {
            if instance.graph.is_periodic() {
                return Err(Error::Unsupported("greedy MaxViral on periodic graphs".into()));
            }
            let sweep = viral_sweep(instance);
            let (ts, g) = sweep
                .into_iter()
                .enumerate()
                .map(|(i, g)| (i + 1, g))
                .fold(None::<(usize, GreedyResult)>, |best, (t, g)| match best {
                    Some((_, ref b)) if b.covered >= g.covered => best,
                    _ => Some((t, g)),
                })
                .expect("t_max >= 1");
            (g, Some(ts))
        }
        Objective::MinNonViralTime { .. } => {
            return Err(Error::Unsupported("no greedy for MinNonViralTime".into()));
        }
    };
    let schedule = schedule_of(&greedy.chosen);
    let value = evaluate(instance, &schedule)?;
    Ok(ApproxResult {
        schedule,
        value,
        covered: greedy.covered,
        t_star,
    })
}

/// Greedy on the checkpoint coverage for every `t* ∈ [1, t_max]`.
fn viral_sweep(instance: &ProblemInstance) -> Vec<GreedyResult> {
    let p = instance.process();
    let t_max = instance.graph.t_max();
    // traces[tau-1][t-1]: active non-source vertices at t after a lone tau
    let traces: Vec<Vec<VertexSet>> = (1..=t_max)
        .into_par_iter()
        .map(|tau| {
            let times = [tau];
            let mut sim = p.simulator(&times);
            (0..t_max)
                .map(|_| {
                    sim.advance();
                    to_universe(&sim.active_set(), p.source)
                })
                .collect()
        })
        .collect();
    (1..=t_max)
        .into_par_iter()
        .map(|ts| {
            let sets = traces.iter().map(|tr| tr[ts - 1].clone()).collect();
            greedy_max_coverage(&wrap(instance, sets))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::objectives::eval_max_viral_tstep;
    use proptest::prelude::*;

    fn vs(len: usize, items: &[usize]) -> VertexSet {
        VertexSet::from_iter_with_len(len, items.iter().copied())
    }

    #[test]
    fn greedy_example() {
        let cov = CoverageInstance::new(
            6,
            vec![vs(6, &[1, 2, 3]), vs(6, &[3, 4]), vs(6, &[4, 5])],
            2,
            5,
        );
        let r = greedy_max_coverage(&cov);
        assert_eq!(r.chosen, vec![1, 3]);
        assert_eq!(r.covered, 5);
        assert_eq!(r.target_status(5), TargetStatus::ApproximatelyReached);
        assert_eq!(r.target_status(9), TargetStatus::Unreachable);
    }

    #[test]
    fn greedy_empty_and_exhaustive() {
        let cov = CoverageInstance::new(4, vec![VertexSet::new(4); 3], 2, 0);
        let r = greedy_max_coverage(&cov);
        assert_eq!((r.chosen, r.covered), (vec![1, 2], 0));
        let cov = CoverageInstance::new(4, vec![vs(4, &[0]), vs(4, &[1, 2]), vs(4, &[0])], 10, 0);
        assert_eq!(greedy_max_coverage(&cov).covered, 3);
    }

    fn star_at(label: usize, t_max: usize) -> ProblemInstance {
        let mut b = TemporalGraph::builder(4, t_max, false);
        for l in 1..4 {
            b.add_label(0, l, label).unwrap();
        }
        ProblemInstance::new(b.build().unwrap(), 0, 1, 1, Objective::MaxSpread).unwrap()
    }

    #[test]
    fn builders_on_small_graphs() {
        let edgeless = ProblemInstance::new(TemporalGraph::builder(3, 4, false).build().unwrap(), 0, 2, 1, Objective::MaxSpread).unwrap();
        assert!(build_spread_coverage(&edgeless).unwrap().sets.iter().all(|s| s.is_empty()));

        let star = star_at(1, 4);
        let cov = build_spread_coverage(&star).unwrap();
        assert_eq!(cov.sets[0].count(), 3);
        assert!(cov.sets[1..].iter().all(|s| s.is_empty()));

        let tc = build_tstep_coverage(&star, 1).unwrap();
        assert!(tc.sets.iter().all(|s| s.is_empty()));

        let single = star_at(2, 5);
        let tc = build_tstep_coverage(&single, 3).unwrap();
        assert_eq!(tc.sets.len(), 5);
        for (i, s) in tc.sets.iter().enumerate() {
            assert_eq!(s.count(), if i + 1 == 2 { 3 } else { 0 });
        }
        assert!(build_tstep_coverage(&single, 6).is_err());
    }

    #[test]
    fn approx_on_edgeless() {
        for obj in [Objective::MaxSpread, Objective::MaxViral, Objective::MaxViralTstep { t_star: 2 }] {
            let i = ProblemInstance::new(TemporalGraph::builder(3, 4, false).build().unwrap(), 0, 2, 2, obj).unwrap();
            let r = approx_solve(&i).unwrap();
            assert_eq!(r.value.value_excl_source, 0);
            assert_eq!(r.covered, 0);
        }
    }

    #[test]
    fn approx_rejects_unsupported() {
        let i = star_at(1, 4);
        assert!(approx_solve(&i.clone().with_constraint(ScheduleConstraint::FixedWindow { w: 2 })).is_err());
        assert!(approx_solve(&i.clone().with_dynamics(DynamicsKind::ClassicSis)).is_err());
        assert!(approx_solve(&i.with_objective(Objective::MinNonViralTime { d_gap: 1 })).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = ProblemInstance> {
        (2usize..=10, 1usize..=8, 1u32..=3, 0usize..=3).prop_flat_map(|(n, t_max, delta, b)| {
            proptest::collection::vec((0..n, 0..n, 1..=t_max), 0..25).prop_map(move |ls| {
                let mut g = TemporalGraph::builder(n, t_max, false);
                for (u, v, t) in ls {
                    if u != v {
                        let _ = g.add_label(u, v, t);
                    }
                }
                ProblemInstance::new(g.build().unwrap(), 0, delta, b, Objective::MaxSpread).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn coverage_matches_simulation(i in arb_instance(), picks in proptest::collection::btree_set(1usize..=8, 0..4)) {
            let t_max = i.graph.t_max();
            let picks: Vec<usize> = picks.into_iter().filter(|&t| t <= t_max).collect();
            let sched = TransmissionSchedule::new(picks.clone()).unwrap();
            let cov = build_spread_coverage(&i).unwrap();
            let spread = crate::objectives::eval_max_spread(&i, &sched).unwrap();
            prop_assert_eq!(cov.covered_by(&picks), spread.value_excl_source);
            for ts in 1..=t_max {
                let tc = build_tstep_coverage(&i, ts).unwrap();
                prop_assert_eq!(tc.covered_by(&picks), eval_max_viral_tstep(&i, &sched, ts).unwrap().value_excl_source);
            }
        }

        #[test]
        fn approx_value_equals_covered(i in arb_instance()) {
            for obj in [Objective::MaxSpread, Objective::MaxViral, Objective::MaxViralTstep { t_star: i.graph.t_max() }] {
                let inst = i.clone().with_objective(obj);
                let r = approx_solve(&inst).unwrap();
                match obj {
                    Objective::MaxViral => {
                        let at = eval_max_viral_tstep(&inst, &r.schedule, r.t_star.unwrap()).unwrap();
                        prop_assert_eq!(at.value_excl_source, r.covered);
                        prop_assert!(r.value.value_excl_source >= r.covered);
                    }
                    _ => prop_assert_eq!(r.value.value_excl_source, r.covered),
                }
                prop_assert!(r.schedule.len() <= inst.budget);
            }
        }

        #[test]
        fn greedy_deterministic(i in arb_instance()) {
            let cov = build_spread_coverage(&i).unwrap();
            prop_assert_eq!(greedy_max_coverage(&cov), greedy_max_coverage(&cov));
        }
    }
}
