//! Counter-based spreading process: renewal and classic SIS dynamics.
//!
//! Time is 1-indexed. The state "at time t" holds the counters during step
//! t; moving to t+1 looks at the edges live at t and at whether the source
//! transmits at t+1. Before step 1 every counter is zero.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::TemporalGraph;
use crate::instance::{DynamicsKind, ProblemInstance, TransmissionSchedule};

/// Counters at a given time; a vertex is active iff its counter is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CounterState {
    pub counters: Vec<u32>,
    pub time: usize,
}

impl CounterState {
    /// All-zero state before the first step.
    pub fn zero(n: usize) -> Self {
        CounterState {
            counters: vec![0; n],
            time: 0,
        }
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.counters[v] > 0
    }

    pub fn active_set(&self) -> VertexSet {
        active_of(&self.counters)
    }
}

fn active_of(counters: &[u32]) -> VertexSet {
    let mut s = VertexSet::new(counters.len());
    for (v, &c) in counters.iter().enumerate() {
        if c > 0 {
            s.insert(v);
        }
    }
    s
}

/// One transition. `edges_t` are the edges live at `state.time`; `transmit`
/// says whether the source transmits at `state.time + 1`.
pub fn step(
    state: &CounterState,
    edges_t: &[(u32, u32)],
    transmit: bool,
    source: usize,
    delta: u32,
    dynamics: DynamicsKind,
) -> CounterState {
    let mut counters = state.counters.clone();
    let mut touched = vec![false; counters.len()];
    step_in_place(&mut counters, &mut touched, edges_t, transmit, source, delta, dynamics);
    CounterState {
        counters,
        time: state.time + 1,
    }
}

#[inline]
fn step_in_place(
    counters: &mut [u32],
    touched: &mut [bool],
    edges_t: &[(u32, u32)],
    transmit: bool,
    source: usize,
    delta: u32,
    dynamics: DynamicsKind,
) {
    for &(u, v) in edges_t {
        let (u, v) = (u as usize, v as usize);
        if counters[u] > 0 {
            touched[v] = true;
        }
        if counters[v] > 0 {
            touched[u] = true;
        }
    }
    for (v, c) in counters.iter_mut().enumerate() {
        let hit = std::mem::replace(&mut touched[v], false);
        if v == source {
            *c = if transmit { delta } else { c.saturating_sub(1) };
        } else if hit && (dynamics == DynamicsKind::Renewal || *c == 0) {
            *c = delta;
        } else {
            *c = c.saturating_sub(1);
        }
    }
}

/// Graph, source, δ and dynamics: everything the recurrence needs.
#[derive(Debug, Clone, Copy)]
pub struct Process<'a> {
    pub graph: &'a TemporalGraph,
    pub source: usize,
    pub delta: u32,
    pub dynamics: DynamicsKind,
}

impl ProblemInstance {
    pub fn process(&self) -> Process<'_> {
        Process {
            graph: &self.graph,
            source: self.source,
            delta: self.delta,
            dynamics: self.dynamics,
        }
    }
}

impl<'a> Process<'a> {
    pub fn new(graph: &'a TemporalGraph, source: usize, delta: u32, dynamics: DynamicsKind) -> Self {
        Process {
            graph,
            source,
            delta,
            dynamics,
        }
    }

    pub fn simulator<'s>(&self, schedule: &'s [usize]) -> Simulator<'a, 's> {
        Simulator {
            p: *self,
            times: schedule,
            next_tx: 0,
            counters: vec![0; self.graph.n()],
            touched: vec![false; self.graph.n()],
            time: 0,
        }
    }

    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        if !self.graph.is_periodic() && horizon > self.graph.t_max() {
            return Err(Error::HorizonExceeded {
                horizon,
                t_max: self.graph.t_max(),
            });
        }
        Ok(())
    }

    /// Full trace over `[1, horizon]`.
    pub fn simulate(&self, schedule: &TransmissionSchedule, horizon: usize) -> Result<SimulationTrace> {
        self.check_horizon(horizon)?;
        schedule.check_against(self.graph)?;
        let mut sim = self.simulator(schedule.times());
        let mut active_sets = Vec::with_capacity(horizon);
        let mut counters = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            sim.advance();
            active_sets.push(sim.active_set());
            counters.push(sim.counters().to_vec());
        }
        Ok(SimulationTrace {
            horizon,
            active_sets,
            counters,
        })
    }

    /// Simulates a periodic graph until the state after the last transmission
    /// repeats (same counters, same phase within the period).
    pub fn simulate_periodic(&self, schedule: &TransmissionSchedule, state_cap: usize) -> Result<PeriodicTrace> {
        if !self.graph.is_periodic() {
            return Err(Error::Unsupported("cycle detection needs a periodic graph".into()));
        }
        let t_max = self.graph.t_max();
        let start = schedule.last().unwrap_or(1);
        let mut sim = self.simulator(schedule.times());
        let mut prefix = Vec::new();
        let mut seen: HashMap<(Vec<u32>, usize), usize> = HashMap::new();
        loop {
            sim.advance();
            let t = sim.time();
            if t >= start {
                let key = (sim.counters().to_vec(), (t - 1) % t_max);
                if let Some(&first) = seen.get(&key) {
                    return Ok(PeriodicTrace {
                        prefix,
                        cycle_start: first,
                        cycle_len: t - first,
                    });
                }
                if seen.len() >= state_cap {
                    return Err(Error::StateCapExceeded { cap: state_cap });
                }
                seen.insert(key, t);
            }
            prefix.push(sim.active_set());
        }
    }
}

/// Stepwise simulator; starts before step 1, call [`Simulator::advance`]
/// to move to the next step.
#[derive(Debug, Clone)]
pub struct Simulator<'a, 's> {
    p: Process<'a>,
    times: &'s [usize],
    next_tx: usize,
    counters: Vec<u32>,
    touched: Vec<bool>,
    time: usize,
}

impl Simulator<'_, '_> {
    pub fn advance(&mut self) {
        while self.next_tx < self.times.len() && self.times[self.next_tx] <= self.time {
            self.next_tx += 1;
        }
        let transmit = self.times.get(self.next_tx) == Some(&(self.time + 1));
        step_in_place(
            &mut self.counters,
            &mut self.touched,
            self.p.graph.edges_at(self.time),
            transmit,
            self.p.source,
            self.p.delta,
            self.p.dynamics,
        );
        self.time += 1;
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn counters(&self) -> &[u32] {
        &self.counters
    }

    #[inline]
    pub fn is_active(&self, v: usize) -> bool {
        self.counters[v] > 0
    }

    pub fn active_set(&self) -> VertexSet {
        active_of(&self.counters)
    }

    pub fn fill_active(&self, out: &mut VertexSet) {
        out.clear();
        for (v, &c) in self.counters.iter().enumerate() {
            if c > 0 {
                out.insert(v);
            }
        }
    }

    pub fn active_count(&self) -> usize {
        self.counters.iter().filter(|&&c| c > 0).count()
    }

    pub fn state(&self) -> CounterState {
        CounterState {
            counters: self.counters.clone(),
            time: self.time,
        }
    }
}

/// Per-step active sets and counter snapshots over `[1, horizon]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationTrace {
    pub horizon: usize,
    active_sets: Vec<VertexSet>,
    counters: Vec<Vec<u32>>,
}

impl SimulationTrace {
    pub fn active_at(&self, t: usize) -> &VertexSet {
        &self.active_sets[t - 1]
    }

    pub fn counters_at(&self, t: usize) -> &[u32] {
        &self.counters[t - 1]
    }

    pub fn active_sets(&self) -> &[VertexSet] {
        &self.active_sets
    }

    /// `A_v`: the steps at which `v` is active, ascending.
    pub fn activation_list(&self, v: usize) -> Vec<usize> {
        (1..=self.horizon).filter(|&t| self.active_at(t).contains(v)).collect()
    }

    pub fn ever_active(&self) -> VertexSet {
        let n = self.counters.first().map_or(0, |c| c.len());
        let mut s = VertexSet::new(n);
        for a in &self.active_sets {
            s.union_with(a);
        }
        s
    }

    /// `t: v1 v2 ...` per step.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.active_sets.iter().enumerate() {
            let _ = write!(out, "{}:", i + 1);
            for v in a.iter() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Eventually periodic run on a periodic graph: `prefix[t-1]` holds step t
/// for `t < cycle_start + cycle_len`, later steps repeat with `cycle_len`.
#[derive(Debug, Clone)]
pub struct PeriodicTrace {
    prefix: Vec<VertexSet>,
    pub cycle_start: usize,
    pub cycle_len: usize,
}

impl PeriodicTrace {
    pub fn active_at(&self, t: usize) -> &VertexSet {
        let t = if t < self.cycle_start + self.cycle_len {
            t
        } else {
            self.cycle_start + (t - self.cycle_start) % self.cycle_len
        };
        &self.prefix[t - 1]
    }

    /// Steps `1..cycle_start + cycle_len`, which contain every distinct state.
    pub fn closed_prefix(&self) -> &[VertexSet] {
        &self.prefix
    }
}

pub const DEFAULT_STATE_CAP: usize = 1 << 20;

/// Trace over `[1, horizon]` for the instance's graph and source.
pub fn simulate(
    instance: &ProblemInstance,
    schedule: &TransmissionSchedule,
    horizon: usize,
    dynamics: DynamicsKind,
) -> Result<SimulationTrace> {
    Process {
        dynamics,
        ..instance.process()
    }
    .simulate(schedule, horizon)
}

pub fn simulate_periodic_with_cycle_detection(
    instance: &ProblemInstance,
    schedule: &TransmissionSchedule,
) -> Result<PeriodicTrace> {
    instance.process().simulate_periodic(schedule, DEFAULT_STATE_CAP)
}
