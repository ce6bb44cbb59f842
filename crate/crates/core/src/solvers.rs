//! Exhaustive schedule search, the periodic MaxSpread FPT algorithm, and
//! method dispatch.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coverage::{approx_solve, periodic_spread_horizon};
use crate::dynamics::Process;
use crate::error::{Error, Result};
use crate::instance::{DynamicsKind, Objective, ProblemInstance, ScheduleConstraint, TransmissionSchedule};
use crate::objectives::{summarize, ObjectiveValue, RunSummary};

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    /// Largest number of candidate schedules the search may face.
    pub candidate_cap: u128,
    /// Union-bound pruning and merging of equivalent transmission times.
    /// Only takes effect under renewal dynamics.
    pub prune: bool,
    /// Latest transmission time considered for MaxViral and
    /// MinNonViralTime on periodic graphs (default `t_max`).
    pub periodic_tx_horizon: Option<usize>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            candidate_cap: 10_000_000,
            prune: true,
            periodic_tx_horizon: None,
        }
    }
}

impl ExactOptions {
    pub fn brute_force() -> Self {
        ExactOptions {
            prune: false,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub schedule: TransmissionSchedule,
    pub value: ObjectiveValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactResult {
    /// `None` when no schedule satisfies the MinNonViralTime gap bound.
    pub best: Option<Solution>,
    /// Schedules actually simulated.
    pub explored: u64,
    /// Size of the search space after merging equivalent times.
    pub candidates: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Cand {
    value: usize,
    times: Vec<usize>,
}

/// Higher value, then fewer transmissions, then lexicographically smaller.
fn cmp_cand(a: &Cand, b: &Cand) -> Ordering {
    a.value
        .cmp(&b.value)
        .then_with(|| b.times.len().cmp(&a.times.len()))
        .then_with(|| b.times.cmp(&a.times))
}

fn pick(a: Option<Cand>, b: Option<Cand>) -> Option<Cand> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if cmp_cand(&b, &a) == Ordering::Greater { b } else { a }),
        (a, b) => a.or(b),
    }
}

/// Upper-bound data per candidate time (renewal only).
enum Bound {
    /// One set per candidate; the value is the size of their union.
    Union { sets: Vec<VertexSet>, suffix: Vec<VertexSet> },
    /// Per-step sets; the value is the largest per-step union.
    PerStep {
        traces: Vec<Vec<VertexSet>>,
        suffix: Vec<Vec<VertexSet>>,
    },
}

#[derive(Clone)]
enum Acc {
    Union(VertexSet),
    PerStep(Vec<VertexSet>),
}

#[derive(Clone, Copy)]
enum Regime {
    Free,
    Fixed,
    Shifting { x: usize, y: usize },
}

struct Search<'a> {
    p: Process<'a>,
    objective: Objective,
    budget: usize,
    cands: Vec<usize>,
    regime: Regime,
    /// Candidate index ranges per fixed window.
    windows: Vec<(usize, usize)>,
    bound: Option<Bound>,
    floor: usize,
}

struct State {
    best: Option<Cand>,
    explored: u64,
}

impl Search<'_> {
    fn eval(&self, times: &[usize]) -> Result<(usize, bool)> {
        let s = TransmissionSchedule::new(times.to_vec())?;
        let v = summarize(&self.p, &s, self.objective)?.value(self.objective);
        Ok((v.value_excl_source, v.feasible))
    }

    fn acc_empty(&self) -> Option<Acc> {
        let n = self.p.graph.n();
        self.bound.as_ref().map(|b| match b {
            Bound::Union { .. } => Acc::Union(VertexSet::new(n)),
            Bound::PerStep { traces, .. } => Acc::PerStep(vec![VertexSet::new(n); traces.first().map_or(0, |t| t.len())]),
        })
    }

    fn acc_add(&self, acc: &Acc, j: usize) -> Acc {
        match (acc, self.bound.as_ref().unwrap()) {
            (Acc::Union(u), Bound::Union { sets, .. }) => Acc::Union(u.union(&sets[j])),
            (Acc::PerStep(us), Bound::PerStep { traces, .. }) => {
                Acc::PerStep(us.iter().zip(&traces[j]).map(|(a, b)| a.union(b)).collect())
            }
            _ => unreachable!(),
        }
    }

    /// Largest value any extension of `acc` by candidates at index `from`
    /// or later (at most `r` more, or one per remaining window) can reach.
    fn upper(&self, acc: &Acc, from: usize, r: usize, window: Option<usize>) -> usize {
        match (acc, self.bound.as_ref().unwrap()) {
            (Acc::Union(u), Bound::Union { sets, suffix }) => {
                let by_union = if from < sets.len() { u.union_count(&suffix[from]) } else { u.count() };
                let base = u.count();
                let by_gain = match window {
                    Some(w) => {
                        base + self.windows[w..]
                            .iter()
                            .map(|&(lo, hi)| (lo..hi).map(|j| u.gain(&sets[j])).max().unwrap_or(0))
                            .sum::<usize>()
                    }
                    None => {
                        let mut gains: Vec<usize> = sets[from.min(sets.len())..].iter().map(|s| u.gain(s)).collect();
                        gains.sort_unstable_by(|a, b| b.cmp(a));
                        base + gains.iter().take(r).sum::<usize>()
                    }
                };
                by_union.min(by_gain)
            }
            (Acc::PerStep(us), Bound::PerStep { suffix, traces }) => us
                .iter()
                .enumerate()
                .map(|(t, u)| if from < traces.len() { u.union_count(&suffix[from][t]) } else { u.count() })
                .max()
                .unwrap_or(0),
            _ => unreachable!(),
        }
    }

    /// Whether a subtree whose schedules have at least `min_len` times and
    /// value at most `ub` cannot beat what is known.
    fn hopeless(&self, st: &State, ub: usize, min_len: usize) -> bool {
        if ub < self.floor {
            return true;
        }
        match &st.best {
            Some(b) => ub < b.value || (ub == b.value && min_len >= b.times.len()),
            None => false,
        }
    }

    fn visit(&self, times: &mut Vec<usize>, idx: &mut Vec<usize>, acc: Option<&Acc>, st: &mut State) -> Result<()> {
        let complete = match self.regime {
            Regime::Fixed => times.len() == self.windows.len(),
            _ => true,
        };
        if complete {
            st.explored += 1;
            let (value, feasible) = self.eval(times)?;
            if feasible {
                st.best = pick(
                    st.best.take(),
                    Some(Cand {
                        value,
                        times: times.clone(),
                    }),
                );
            }
        }
        if times.len() >= self.budget || (matches!(self.regime, Regime::Fixed) && complete) {
            return Ok(());
        }
        let (lo, hi) = self.children(times, idx);
        let r = self.budget - times.len() - 1;
        for j in lo..hi {
            let child_acc = match acc {
                Some(a) => {
                    let ca = self.acc_add(a, j);
                    let (from, window) = match self.regime {
                        Regime::Fixed => {
                            let w = times.len() + 1;
                            (self.windows.get(w).map_or(self.cands.len(), |x| x.0), Some(w))
                        }
                        Regime::Free => (j + 1, None),
                        Regime::Shifting { x, .. } => (self.first_at_or_after(self.cands[j] + x), None),
                    };
                    let ub = self.upper(&ca, from, r, window);
                    if self.hopeless(st, ub, times.len() + 1) {
                        continue;
                    }
                    Some(ca)
                }
                None => None,
            };
            times.push(self.cands[j]);
            idx.push(j);
            self.visit(times, idx, child_acc.as_ref(), st)?;
            times.pop();
            idx.pop();
        }
        Ok(())
    }

    fn first_at_or_after(&self, t: usize) -> usize {
        self.cands.partition_point(|&c| c < t)
    }

    fn children(&self, times: &[usize], idx: &[usize]) -> (usize, usize) {
        match self.regime {
            Regime::Free => (idx.last().map_or(0, |&j| j + 1), self.cands.len()),
            Regime::Fixed => self.windows[times.len()],
            Regime::Shifting { x, y } => match times.last() {
                None => (0, self.cands.len()),
                Some(&t) => (self.first_at_or_after(t + x), self.first_at_or_after(t + y + 1)),
            },
        }
    }

    fn count(&self) -> u128 {
        match self.regime {
            Regime::Free => (0..=self.budget.min(self.cands.len()))
                .map(|r| binom(self.cands.len() as u128, r as u128))
                .fold(0u128, |a, b| a.saturating_add(b)),
            Regime::Fixed => self
                .windows
                .iter()
                .map(|&(lo, hi)| (hi - lo) as u128)
                .fold(1u128, |a, b| a.saturating_mul(b)),
            Regime::Shifting { x, y } => {
                // f[j][r]: sequences starting at candidate j with at most r elements
                let c = self.cands.len();
                let b = self.budget;
                let mut f = vec![vec![0u128; b + 1]; c];
                for j in (0..c).rev() {
                    for r in 1..=b {
                        let (lo, hi) = (
                            self.first_at_or_after(self.cands[j] + x),
                            self.first_at_or_after(self.cands[j] + y + 1),
                        );
                        f[j][r] = (lo..hi).fold(1u128, |a, k| a.saturating_add(f[k][r - 1]));
                    }
                }
                (0..c).fold(1u128, |a, j| a.saturating_add(if b > 0 { f[j][b] } else { 0 }))
            }
        }
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Lone-transmission data for candidate `tau`: class key and bound sets.
struct Single {
    key: Vec<VertexSet>,
    union: VertexSet,
    per_step: Vec<VertexSet>,
}

fn excl(mut s: VertexSet, source: usize) -> VertexSet {
    s.remove(source);
    s
}

fn single_effect(p: &Process<'_>, objective: Objective, tau: usize) -> Result<Single> {
    let g = p.graph;
    let sched = TransmissionSchedule::new(vec![tau])?;
    if !g.is_periodic() {
        let times = [tau];
        let mut sim = p.simulator(&times);
        let horizon = match objective {
            Objective::MaxViralTstep { t_star } => t_star,
            _ => g.t_max(),
        };
        let mut per_step = Vec::with_capacity(horizon);
        let mut union = VertexSet::new(g.n());
        for _ in 0..horizon {
            sim.advance();
            let a = excl(sim.active_set(), p.source);
            union.union_with(&a);
            per_step.push(a);
        }
        let key = match objective {
            Objective::MaxSpread => vec![union.clone()],
            Objective::MaxViralTstep { .. } => vec![per_step.last().cloned().unwrap_or_else(|| VertexSet::new(g.n()))],
            _ => per_step.clone(),
        };
        let union = match objective {
            Objective::MaxViralTstep { .. } => key[0].clone(),
            _ => union,
        };
        return Ok(Single { key, union, per_step });
    }
    let sum: RunSummary = summarize(p, &sched, objective)?;
    let set = match objective {
        Objective::MaxViralTstep { .. } => excl(sum.at_t_star.clone(), p.source),
        _ => excl(sum.ever.clone(), p.source),
    };
    Ok(Single {
        key: vec![set.clone()],
        union: set,
        per_step: Vec::new(),
    })
}

fn candidate_times(instance: &ProblemInstance, opts: &ExactOptions) -> Vec<usize> {
    let g = &instance.graph;
    let last = if !g.is_periodic() || instance.constraint != ScheduleConstraint::Unconstrained {
        g.t_max()
    } else {
        match instance.objective {
            Objective::MaxSpread => g.t_max(),
            Objective::MaxViralTstep { t_star } => t_star,
            _ => opts.periodic_tx_horizon.unwrap_or(g.t_max()),
        }
    };
    (1..=last).collect()
}

/// Best schedule under the instance's objective and constraint.
pub fn exact_solve(instance: &ProblemInstance, opts: &ExactOptions) -> Result<ExactResult> {
    instance.validate()?;
    let p = instance.process();
    let g = &instance.graph;
    let objective = instance.objective;
    let regime = match instance.constraint {
        ScheduleConstraint::Unconstrained => Regime::Free,
        ScheduleConstraint::FixedWindow { .. } => Regime::Fixed,
        ScheduleConstraint::ShiftingWindow { x, y } => Regime::Shifting { x, y },
    };
    let mut cands = candidate_times(instance, opts);

    let renewal = instance.dynamics == DynamicsKind::Renewal;
    let periodic_open = g.is_periodic() && matches!(objective, Objective::MaxViral | Objective::MinNonViralTime { .. });
    let prune = opts.prune && renewal && !periodic_open;

    let mut bound = None;
    if prune {
        let singles: Vec<Single> = cands
            .par_iter()
            .map(|&tau| single_effect(&p, objective, tau))
            .collect::<Result<_>>()?;
        let mut keep: Vec<usize> = (0..cands.len()).collect();
        if matches!(regime, Regime::Free) {
            let mut seen: HashMap<&Vec<VertexSet>, ()> = HashMap::new();
            keep.retain(|&i| {
                let s = &singles[i];
                if s.key.iter().all(|k| k.is_empty()) {
                    return false;
                }
                seen.insert(&s.key, ()).is_none()
            });
        }
        let per_step = matches!(objective, Objective::MaxViral);
        cands = keep.iter().map(|&i| cands[i]).collect();
        let n = g.n();
        bound = Some(if per_step {
            let traces: Vec<Vec<VertexSet>> = keep.iter().map(|&i| singles[i].per_step.clone()).collect();
            let steps = traces.first().map_or(0, |t| t.len());
            let mut suffix = vec![vec![VertexSet::new(n); steps]; traces.len() + 1];
            for j in (0..traces.len()).rev() {
                suffix[j] = suffix[j + 1].iter().zip(&traces[j]).map(|(a, b)| a.union(b)).collect();
            }
            Bound::PerStep { traces, suffix }
        } else {
            let sets: Vec<VertexSet> = keep.iter().map(|&i| singles[i].union.clone()).collect();
            let mut suffix = vec![VertexSet::new(n); sets.len() + 1];
            for j in (0..sets.len()).rev() {
                suffix[j] = suffix[j + 1].union(&sets[j]);
            }
            Bound::Union { sets, suffix }
        });
    }

    let mut windows = Vec::new();
    if let ScheduleConstraint::FixedWindow { w } = instance.constraint {
        let count = g.t_max().div_ceil(w);
        if count > instance.budget {
            return Err(Error::Unsatisfiable(format!(
                "{count} fixed windows of width {w} need more than budget {} transmissions",
                instance.budget
            )));
        }
        for i in 0..count {
            let lo = cands.partition_point(|&t| t < i * w + 1);
            let hi = cands.partition_point(|&t| t <= (i + 1) * w);
            windows.push((lo, hi));
        }
    }

    let floor = if prune && matches!(regime, Regime::Free) && !matches!(objective, Objective::MinNonViralTime { .. }) {
        approx_solve(instance).map(|r| r.value.value_excl_source).unwrap_or(0)
    } else {
        0
    };

    let search = Search {
        p,
        objective,
        budget: instance.budget,
        cands,
        regime,
        windows,
        bound,
        floor,
    };
    let candidates = search.count();
    if candidates > opts.candidate_cap {
        return Err(Error::CandidateCapExceeded {
            count: candidates,
            cap: opts.candidate_cap,
        });
    }

    // Root, then one independent subtree per first choice.
    let mut root = State { best: None, explored: 0 };
    let acc0 = search.acc_empty();
    let complete_root = !matches!(regime, Regime::Fixed);
    if complete_root {
        root.explored += 1;
        let (value, feasible) = search.eval(&[])?;
        if feasible {
            root.best = Some(Cand { value, times: Vec::new() });
        }
    }
    let (lo, hi) = if search.budget == 0 { (0, 0) } else { search.children(&[], &[]) };
    let results: Vec<Result<State>> = (lo..hi)
        .into_par_iter()
        .map(|j| {
            let mut st = State {
                best: root.best.clone(),
                explored: 0,
            };
            let child_acc = match &acc0 {
                Some(a) => {
                    let ca = search.acc_add(a, j);
                    let (from, window) = match regime {
                        Regime::Fixed => (search.windows.get(1).map_or(search.cands.len(), |x| x.0), Some(1)),
                        Regime::Free => (j + 1, None),
                        Regime::Shifting { x, .. } => (search.first_at_or_after(search.cands[j] + x), None),
                    };
                    let ub = search.upper(&ca, from, search.budget - 1, window);
                    if search.hopeless(&st, ub, 1) {
                        return Ok(st);
                    }
                    Some(ca)
                }
                None => None,
            };
            let mut times = vec![search.cands[j]];
            let mut idx = vec![j];
            search.visit(&mut times, &mut idx, child_acc.as_ref(), &mut st)?;
            Ok(st)
        })
        .collect();
    let mut best = root.best;
    let mut explored = root.explored;
    for r in results {
        let st = r?;
        explored += st.explored;
        best = pick(best, st.best);
    }
    let best = match best {
        Some(c) => {
            let schedule = TransmissionSchedule::new(c.times)?;
            let value = crate::objectives::evaluate(instance, &schedule)?;
            Some(Solution { schedule, value })
        }
        None => None,
    };
    Ok(ExactResult {
        best,
        explored,
        candidates,
    })
}

pub const DEFAULT_FPT_CAP: usize = 22;

#[derive(Debug, Clone, Serialize)]
pub struct FptResult {
    pub schedule: TransmissionSchedule,
    pub value: ObjectiveValue,
    pub explored: u64,
}

/// Ever-activated summary of `schedule` on a periodic graph, simulated
/// `(|V|+1)·t_max·δ` steps past the last transmission.
pub fn periodic_spread_run(instance: &ProblemInstance, schedule: &TransmissionSchedule, extra: usize) -> RunSummary {
    let p = instance.process();
    let mut sum = RunSummary::new(instance.graph.n(), instance.source, None);
    let mut sim = p.simulator(schedule.times());
    let mut a = VertexSet::new(instance.graph.n());
    let end = schedule.last().unwrap_or(0) + periodic_spread_horizon(instance) + extra;
    for t in 1..=end {
        sim.advance();
        sim.fill_active(&mut a);
        sum.observe(t, &a);
    }
    sum
}

/// Exact periodic MaxSpread by trying every size-`b` subset of the first
/// period.
pub fn periodic_fpt_maxspread(instance: &ProblemInstance, cap: usize) -> Result<FptResult> {
    let g = &instance.graph;
    if !g.is_periodic() {
        return Err(Error::Unsupported("periodic-fpt needs a periodic graph".into()));
    }
    if instance.dynamics != DynamicsKind::Renewal {
        return Err(Error::Unsupported("periodic-fpt needs renewal dynamics".into()));
    }
    let t_max = g.t_max();
    if t_max > cap || t_max > 63 {
        return Err(Error::SizeCap(format!("t_max {t_max} above enumeration cap {cap}")));
    }
    let b = instance.budget;
    let value_of = |s: &TransmissionSchedule| periodic_spread_run(instance, s, 0).value(Objective::MaxSpread);
    if b >= t_max {
        let schedule = TransmissionSchedule::new((1..=t_max).collect())?;
        let value = value_of(&schedule);
        return Ok(FptResult {
            schedule,
            value,
            explored: 1,
        });
    }
    let masks: Vec<u64> = subsets_of_size(t_max, b).collect();
    let explored = masks.len() as u64;
    let best = masks
        .into_par_iter()
        .map(|m| {
            let times: Vec<usize> = (0..t_max).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect();
            let s = TransmissionSchedule::new(times.clone()).expect("ascending");
            Cand {
                value: value_of(&s).value_excl_source,
                times,
            }
        })
        .reduce_with(|a, b| pick(Some(a), Some(b)).unwrap())
        .expect("at least one subset");
    let schedule = TransmissionSchedule::new(best.times)?;
    let value = value_of(&schedule);
    Ok(FptResult {
        schedule,
        value,
        explored,
    })
}

/// Bitmasks over `n` bits with exactly `k` ones.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut cur = Some(first);
    std::iter::from_fn(move || {
        let m = cur?;
        cur = if m == 0 {
            None
        } else {
            let c = m & m.wrapping_neg();
            let r = m + c;
            let next = (((r ^ m) >> 2) / c) | r;
            (next < limit).then_some(next)
        };
        Some(m)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Greedy,
    PeriodicFpt,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            "periodic-fpt" => Ok(Method::PeriodicFpt),
            _ => Err(Error::Unsupported(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutput {
    pub method: Method,
    pub objective: Objective,
    pub constraint: ScheduleConstraint,
    pub schedule: Option<TransmissionSchedule>,
    pub value: Option<ObjectiveValue>,
    pub explored: u64,
    pub wall_ms: f64,
    /// `value ≥ k` (and feasible) when a target was given.
    pub answer: Option<bool>,
    /// Greedy coverage count.
    pub covered: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub exact: ExactOptions,
    pub fpt_cap: Option<usize>,
}

pub fn solve(instance: &ProblemInstance, method: Method, opts: &SolveOptions, k: Option<usize>) -> Result<SolveOutput> {
    let start = Instant::now();
    let (schedule, value, explored, covered) = match method {
        Method::Exact => {
            let r = exact_solve(instance, &opts.exact)?;
            match r.best {
                Some(s) => (Some(s.schedule), Some(s.value), r.explored, None),
                None => (None, None, r.explored, None),
            }
        }
        Method::Greedy => {
            let r = approx_solve(instance)?;
            let explored = instance.graph.t_max() as u64;
            (Some(r.schedule), Some(r.value), explored, Some(r.covered))
        }
        Method::PeriodicFpt => {
            if instance.objective != Objective::MaxSpread || instance.constraint != ScheduleConstraint::Unconstrained {
                return Err(Error::Unsupported("periodic-fpt solves unconstrained MaxSpread only".into()));
            }
            let r = periodic_fpt_maxspread(instance, opts.fpt_cap.unwrap_or(DEFAULT_FPT_CAP))?;
            (Some(r.schedule), Some(r.value), r.explored, None)
        }
    };
    let answer = k.map(|k| value.as_ref().is_some_and(|v| v.feasible && v.value_excl_source >= k));
    Ok(SolveOutput {
        method,
        objective: instance.objective,
        constraint: instance.constraint,
        schedule,
        value,
        explored,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        answer,
        covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::objectives::evaluate;
    use proptest::prelude::*;

    fn brute(instance: &ProblemInstance) -> Option<(usize, Vec<usize>)> {
        // independent oracle: every subset of [t_max] of size <= b
        let t_max = instance.graph.t_max();
        let mut best: Option<(usize, Vec<usize>)> = None;
        for m in 0u32..(1 << t_max) {
            let times: Vec<usize> = (0..t_max).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect();
            if times.len() > instance.budget {
                continue;
            }
            let s = TransmissionSchedule::new(times.clone()).unwrap();
            let v = evaluate(instance, &s).unwrap();
            if !v.feasible {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bv, bt)) => {
                    v.value_excl_source > *bv
                        || (v.value_excl_source == *bv && (times.len() < bt.len() || (times.len() == bt.len() && times < *bt)))
                }
            };
            if better {
                best = Some((v.value_excl_source, times));
            }
        }
        best
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets_of_size(4, 2).count(), 6);
        assert_eq!(subsets_of_size(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets_of_size(3, 3).collect::<Vec<_>>(), vec![7]);
        assert!(subsets_of_size(5, 2).all(|m| m.count_ones() == 2 && m < 32));
    }

    #[test]
    fn zero_budget_gives_empty() {
        let mut b = TemporalGraph::builder(2, 4, false);
        b.add_label(0, 1, 2).unwrap();
        let i = ProblemInstance::new(b.build().unwrap(), 0, 1, 0, Objective::MaxSpread).unwrap();
        let r = exact_solve(&i, &ExactOptions::default()).unwrap();
        let best = r.best.unwrap();
        assert!(best.schedule.is_empty());
        assert_eq!(best.value.value_excl_source, 0);
    }

    #[test]
    fn single_useful_step() {
        let mut b = TemporalGraph::builder(2, 5, false);
        b.add_label(0, 1, 3).unwrap();
        let i = ProblemInstance::new(b.build().unwrap(), 0, 1, 1, Objective::MaxSpread).unwrap();
        for opts in [ExactOptions::default(), ExactOptions::brute_force()] {
            let best = exact_solve(&i, &opts).unwrap().best.unwrap();
            assert_eq!(best.schedule.times(), &[3]);
            assert_eq!(best.value.value_excl_source, 1);
        }
    }

    #[test]
    fn cap_error() {
        let g = TemporalGraph::builder(2, 30, false).build().unwrap();
        let i = ProblemInstance::new(g, 0, 1, 10, Objective::MaxSpread).unwrap();
        let opts = ExactOptions {
            candidate_cap: 1000,
            ..ExactOptions::brute_force()
        };
        assert!(matches!(exact_solve(&i, &opts), Err(Error::CandidateCapExceeded { .. })));
        let out = solve(&i, Method::Exact, &SolveOptions { exact: opts, fpt_cap: None }, None);
        assert!(out.is_err());
    }

    #[test]
    fn fixed_window_needs_budget() {
        let g = TemporalGraph::builder(2, 6, false).build().unwrap();
        let i = ProblemInstance::new(g, 0, 1, 2, Objective::MaxSpread)
            .unwrap()
            .with_constraint(ScheduleConstraint::FixedWindow { w: 2 });
        assert!(matches!(exact_solve(&i, &ExactOptions::default()), Err(Error::Unsatisfiable(_))));
    }

    #[test]
    fn windowed_search_respects_constraint() {
        let mut b = TemporalGraph::builder(4, 8, false);
        b.add_label(0, 1, 2).unwrap();
        b.add_label(0, 2, 3).unwrap();
        b.add_label(0, 3, 7).unwrap();
        let base = ProblemInstance::new(b.build().unwrap(), 0, 1, 4, Objective::MaxSpread).unwrap();
        let fixed = base.clone().with_constraint(ScheduleConstraint::FixedWindow { w: 2 });
        let r = exact_solve(&fixed, &ExactOptions::default()).unwrap().best.unwrap();
        assert_eq!(r.schedule.times(), &[2, 3, 5, 7]);
        assert_eq!(r.value.value_excl_source, 3);
        let shift = base.with_constraint(ScheduleConstraint::ShiftingWindow { x: 2, y: 3 });
        let r = exact_solve(&shift, &ExactOptions::default()).unwrap().best.unwrap();
        assert_eq!(r.value.value_excl_source, 2);
        assert!(r.value.feasible);
    }

    #[test]
    fn min_non_viral_infeasible_everywhere() {
        // x is activated at 2 and again at 6 (gap 4) whenever anything reaches it
        let mut b = TemporalGraph::builder(2, 6, false);
        b.add_label(0, 1, 1).unwrap();
        b.add_label(0, 1, 5).unwrap();
        let i = ProblemInstance::new(b.build().unwrap(), 0, 1, 2, Objective::MinNonViralTime { d_gap: 1 })
            .unwrap()
            .with_constraint(ScheduleConstraint::FixedWindow { w: 3 });
        let r = exact_solve(&i, &ExactOptions::default()).unwrap();
        // windows [1,3],[4,6]: any choice touching both labels is infeasible,
        // others reach x once and are feasible
        let best = r.best.unwrap();
        assert_eq!(best.value.value_excl_source, 1);
        let i = i.with_constraint(ScheduleConstraint::FixedWindow { w: 6 }).with_objective(Objective::MinNonViralTime { d_gap: 1 });
        assert!(exact_solve(&i, &ExactOptions::default()).unwrap().best.is_some());
    }

    #[test]
    fn fpt_all_times_when_budget_large() {
        let g = TemporalGraph::from_edge_sets(3, true, &[vec![(0, 1)], vec![], vec![(1, 2)]]).unwrap();
        let i = ProblemInstance::new(g, 0, 1, 5, Objective::MaxSpread).unwrap();
        let r = periodic_fpt_maxspread(&i, DEFAULT_FPT_CAP).unwrap();
        assert_eq!(r.schedule.times(), &[1, 2, 3]);
        let empty = ProblemInstance::new(TemporalGraph::builder(3, 4, true).build().unwrap(), 0, 2, 2, Objective::MaxSpread).unwrap();
        assert_eq!(periodic_fpt_maxspread(&empty, DEFAULT_FPT_CAP).unwrap().value.value_excl_source, 0);
        let big = ProblemInstance::new(TemporalGraph::builder(3, 30, true).build().unwrap(), 0, 2, 2, Objective::MaxSpread).unwrap();
        assert!(periodic_fpt_maxspread(&big, DEFAULT_FPT_CAP).is_err());
    }

    #[test]
    fn dispatch_rejects_bad_combinations() {
        let g = TemporalGraph::builder(3, 4, false).build().unwrap();
        let i = ProblemInstance::new(g, 0, 1, 2, Objective::MaxSpread).unwrap();
        let o = SolveOptions::default();
        assert!(solve(&i, Method::PeriodicFpt, &o, None).is_err());
        assert!(solve(&i.clone().with_constraint(ScheduleConstraint::FixedWindow { w: 2 }), Method::Greedy, &o, None).is_err());
        let out = solve(&i, Method::Greedy, &o, Some(0)).unwrap();
        assert_eq!(out.answer, Some(true));
    }

    fn arb_instance() -> impl Strategy<Value = ProblemInstance> {
        (2usize..=7, 1usize..=7, 1u32..=3, 0usize..=3, 0usize..4, any::<bool>()).prop_flat_map(|(n, t_max, delta, b, obj, sis)| {
            proptest::collection::vec((0..n, 0..n, 1..=t_max), 0..18).prop_map(move |ls| {
                let mut g = TemporalGraph::builder(n, t_max, false);
                for (u, v, t) in ls {
                    if u != v {
                        let _ = g.add_label(u, v, t);
                    }
                }
                let objective = match obj {
                    0 => Objective::MaxSpread,
                    1 => Objective::MaxViral,
                    2 => Objective::MaxViralTstep { t_star: t_max },
                    _ => Objective::MinNonViralTime { d_gap: 1 },
                };
                let dynamics = if sis { DynamicsKind::ClassicSis } else { DynamicsKind::Renewal };
                ProblemInstance::new(g.build().unwrap(), 0, delta, b, objective).unwrap().with_dynamics(dynamics)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn pruned_equals_brute_force(i in arb_instance()) {
            let want = brute(&i);
            for opts in [ExactOptions::default(), ExactOptions::brute_force()] {
                let got = exact_solve(&i, &opts).unwrap().best.map(|s| (s.value.value_excl_source, s.schedule.times().to_vec()));
                prop_assert_eq!(&got, &want);
            }
        }

        #[test]
        fn exact_dominates_greedy(i in arb_instance()) {
            if i.dynamics == DynamicsKind::Renewal && !matches!(i.objective, Objective::MinNonViralTime { .. }) {
                let e = exact_solve(&i, &ExactOptions::default()).unwrap().best.unwrap().value.value_excl_source;
                let g = approx_solve(&i).unwrap().value.value_excl_source;
                prop_assert!(e >= g);
                prop_assert!(g as f64 >= (1.0 - (-1.0f64).exp()) * e as f64 - 1e-9);
            }
        }
    }
}
