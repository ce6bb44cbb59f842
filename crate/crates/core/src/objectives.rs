//! The four objectives and schedule-constraint checks.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::dynamics::{Process, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::instance::{Objective, ProblemInstance, ScheduleConstraint, TransmissionSchedule};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// Step achieving the value; `None` when nothing is ever active.
    Step(Option<usize>),
    /// Vertices counted by the value.
    Vertices(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectiveValue {
    pub objective: Objective,
    pub value_incl_source: usize,
    pub value_excl_source: usize,
    pub witness: Witness,
    pub feasible: bool,
}

/// Accumulates everything the objectives need from a sequence of steps.
#[derive(Debug, Clone)]
pub struct RunSummary {
    source: usize,
    t_star: Option<usize>,
    pub ever: VertexSet,
    pub peak_excl: usize,
    pub peak_incl: usize,
    pub peak_t: Option<usize>,
    pub at_t_star: VertexSet,
    last_seen: Vec<usize>,
    /// Largest difference between consecutive active steps of a non-source vertex.
    pub max_gap: usize,
}

impl RunSummary {
    pub fn new(n: usize, source: usize, t_star: Option<usize>) -> Self {
        RunSummary {
            source,
            t_star,
            ever: VertexSet::new(n),
            peak_excl: 0,
            peak_incl: 0,
            peak_t: None,
            at_t_star: VertexSet::new(n),
            last_seen: vec![0; n],
            max_gap: 0,
        }
    }

    pub fn observe(&mut self, t: usize, active: &VertexSet) {
        let incl = active.count();
        let excl = incl - active.contains(self.source) as usize;
        if excl > self.peak_excl {
            self.peak_excl = excl;
            self.peak_t = Some(t);
        } else if self.peak_t.is_none() && incl > 0 {
            self.peak_t = Some(t);
        }
        self.peak_incl = self.peak_incl.max(incl);
        self.ever.union_with(active);
        if self.t_star == Some(t) {
            self.at_t_star = active.clone();
        }
        for v in active.iter() {
            if v != self.source && self.last_seen[v] > 0 {
                self.max_gap = self.max_gap.max(t - self.last_seen[v]);
            }
            self.last_seen[v] = t;
        }
    }

    fn excl(&self, s: &VertexSet) -> usize {
        s.count() - s.contains(self.source) as usize
    }

    pub fn value(&self, objective: Objective) -> ObjectiveValue {
        let (incl, excl, witness, feasible) = match objective {
            Objective::MaxSpread => (
                self.ever.count(),
                self.excl(&self.ever),
                Witness::Vertices(self.ever.to_vec()),
                true,
            ),
            Objective::MaxViral => (self.peak_incl, self.peak_excl, Witness::Step(self.peak_t), true),
            Objective::MaxViralTstep { t_star } => (
                self.at_t_star.count(),
                self.excl(&self.at_t_star),
                Witness::Step(Some(t_star)),
                true,
            ),
            Objective::MinNonViralTime { d_gap } => (
                self.ever.count(),
                self.excl(&self.ever),
                Witness::Vertices(self.ever.to_vec()),
                self.max_gap <= d_gap + 1,
            ),
        };
        ObjectiveValue {
            objective,
            value_incl_source: incl,
            value_excl_source: excl,
            witness,
            feasible,
        }
    }
}

/// Runs the process long enough to settle `objective` exactly: the whole
/// lifetime on non-periodic graphs, the cycle-closed run on periodic ones.
pub fn summarize(p: &Process<'_>, schedule: &TransmissionSchedule, objective: Objective) -> Result<RunSummary> {
    schedule.check_against(p.graph)?;
    let n = p.graph.n();
    let t_star = match objective {
        Objective::MaxViralTstep { t_star } => Some(t_star),
        _ => None,
    };
    let mut sum = RunSummary::new(n, p.source, t_star);
    if !p.graph.is_periodic() {
        let horizon = match t_star {
            Some(ts) if ts > p.graph.t_max() => {
                return Err(Error::HorizonExceeded {
                    horizon: ts,
                    t_max: p.graph.t_max(),
                })
            }
            Some(ts) => ts,
            None => p.graph.t_max(),
        };
        let mut sim = p.simulator(schedule.times());
        let mut active = VertexSet::new(n);
        for t in 1..=horizon {
            sim.advance();
            sim.fill_active(&mut active);
            sum.observe(t, &active);
        }
        return Ok(sum);
    }
    let pt = p.simulate_periodic(schedule, DEFAULT_STATE_CAP)?;
    let prefix = pt.closed_prefix();
    for (i, a) in prefix.iter().enumerate() {
        sum.observe(i + 1, a);
    }
    // one more cycle so gaps across the wrap-around are seen
    let end = prefix.len();
    for t in end + 1..=end + pt.cycle_len {
        sum.observe(t, pt.active_at(t));
    }
    if let Some(ts) = t_star {
        sum.at_t_star = pt.active_at(ts).clone();
    }
    Ok(sum)
}

pub fn eval_objective(instance: &ProblemInstance, schedule: &TransmissionSchedule, objective: Objective) -> Result<ObjectiveValue> {
    Ok(summarize(&instance.process(), schedule, objective)?.value(objective))
}

pub fn eval_max_spread(instance: &ProblemInstance, schedule: &TransmissionSchedule) -> Result<ObjectiveValue> {
    eval_objective(instance, schedule, Objective::MaxSpread)
}

pub fn eval_max_viral(instance: &ProblemInstance, schedule: &TransmissionSchedule) -> Result<ObjectiveValue> {
    eval_objective(instance, schedule, Objective::MaxViral)
}

pub fn eval_max_viral_tstep(instance: &ProblemInstance, schedule: &TransmissionSchedule, t_star: usize) -> Result<ObjectiveValue> {
    if t_star == 0 {
        return Err(Error::InvalidInstance("t_star must be at least 1".into()));
    }
    eval_objective(instance, schedule, Objective::MaxViralTstep { t_star })
}

pub fn eval_min_non_viral_time(instance: &ProblemInstance, schedule: &TransmissionSchedule, d_gap: usize) -> Result<ObjectiveValue> {
    if d_gap == 0 {
        return Err(Error::InvalidInstance("d_gap must be at least 1".into()));
    }
    eval_objective(instance, schedule, Objective::MinNonViralTime { d_gap })
}

/// Value under the instance's own objective; `feasible` also folds in the
/// schedule constraint and budget.
pub fn evaluate(instance: &ProblemInstance, schedule: &TransmissionSchedule) -> Result<ObjectiveValue> {
    let mut v = eval_objective(instance, schedule, instance.objective)?;
    let c = check_schedule_constraint(schedule, instance.constraint, instance.graph.t_max(), instance.budget);
    v.feasible &= c.ok;
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub ok: bool,
    pub violations: Vec<String>,
}

pub fn check_schedule_constraint(
    schedule: &TransmissionSchedule,
    constraint: ScheduleConstraint,
    t_max: usize,
    budget: usize,
) -> ConstraintCheck {
    let mut violations = Vec::new();
    let times = schedule.times();
    if times.len() > budget {
        violations.push(format!("{} transmissions exceed budget {budget}", times.len()));
    }
    match constraint {
        ScheduleConstraint::Unconstrained => {}
        ScheduleConstraint::FixedWindow { w } => {
            let windows = t_max.div_ceil(w);
            let mut per = vec![0usize; windows];
            for &t in times {
                let i = (t - 1) / w;
                if i >= windows {
                    violations.push(format!("transmission {t} lies after the last window"));
                } else {
                    per[i] += 1;
                }
            }
            for (i, &c) in per.iter().enumerate() {
                if c != 1 {
                    violations.push(format!(
                        "window [{}, {}] has {c} transmissions",
                        i * w + 1,
                        (i + 1) * w
                    ));
                }
            }
        }
        ScheduleConstraint::ShiftingWindow { x, y } => {
            for p in times.windows(2) {
                let gap = p[1] - p[0];
                if gap < x || gap > y {
                    violations.push(format!("gap {gap} between {} and {} outside [{x}, {y}]", p[0], p[1]));
                }
            }
        }
    }
    ConstraintCheck {
        ok: violations.is_empty(),
        violations,
    }
}
