//! Problem instances, objectives, schedules and schedule constraints.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TemporalGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsKind {
    /// Any active neighbour resets a counter to δ, even for active vertices.
    #[default]
    Renewal,
    /// Only inactive vertices can be infected; active ones always decay.
    ClassicSis,
}

impl FromStr for DynamicsKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "renewal" => Ok(DynamicsKind::Renewal),
            "sis" | "classic-sis" | "classic_sis" => Ok(DynamicsKind::ClassicSis),
            _ => Err(Error::InvalidInstance(format!("unknown dynamics `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    MaxSpread,
    MaxViral,
    MaxViralTstep { t_star: usize },
    /// `d_gap` is the largest allowed run of inactive steps between two
    /// active steps of the same vertex.
    MinNonViralTime { d_gap: usize },
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::MaxSpread => "max_spread",
            Objective::MaxViral => "max_viral",
            Objective::MaxViralTstep { .. } => "max_viral_tstep",
            Objective::MinNonViralTime { .. } => "min_non_viral_time",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleConstraint {
    #[default]
    Unconstrained,
    /// Exactly one transmission in every block `[(i-1)w+1, iw]`.
    FixedWindow { w: usize },
    /// Consecutive transmissions at least `x` and at most `y` steps apart.
    ShiftingWindow { x: usize, y: usize },
}

impl ScheduleConstraint {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScheduleConstraint::FixedWindow { w: 0 } => {
                Err(Error::InvalidInstance("window width must be at least 1".into()))
            }
            ScheduleConstraint::ShiftingWindow { x, y } if x == 0 || x > y => Err(
                Error::InvalidInstance(format!("shifting window needs 1 <= x <= y, got ({x},{y})")),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ScheduleConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleConstraint::Unconstrained => write!(f, "unconstrained"),
            ScheduleConstraint::FixedWindow { w } => write!(f, "fixed:{w}"),
            ScheduleConstraint::ShiftingWindow { x, y } => write!(f, "shifting:{x},{y}"),
        }
    }
}

impl FromStr for ScheduleConstraint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInstance(format!("bad window spec `{s}` (fixed:W or shifting:X,Y)"));
        let c = if s == "unconstrained" || s == "none" {
            ScheduleConstraint::Unconstrained
        } else if let Some(w) = s.strip_prefix("fixed:") {
            ScheduleConstraint::FixedWindow {
                w: w.trim().parse().map_err(|_| bad())?,
            }
        } else if let Some(xy) = s.strip_prefix("shifting:") {
            let (x, y) = xy.split_once(',').ok_or_else(bad)?;
            ScheduleConstraint::ShiftingWindow {
                x: x.trim().parse().map_err(|_| bad())?,
                y: y.trim().parse().map_err(|_| bad())?,
            }
        } else {
            return Err(bad());
        };
        c.validate()?;
        Ok(c)
    }
}

/// Strictly increasing transmission times, all at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct TransmissionSchedule(Vec<usize>);

impl TransmissionSchedule {
    pub fn new(times: Vec<usize>) -> Result<Self> {
        if times.first() == Some(&0) {
            return Err(Error::InvalidSchedule("transmission times start at 1".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSchedule(format!(
                "times must be strictly increasing: {times:?}"
            )));
        }
        Ok(TransmissionSchedule(times))
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut times: Vec<usize>) -> Result<Self> {
        times.sort_unstable();
        times.dedup();
        Self::new(times)
    }

    pub fn empty() -> Self {
        TransmissionSchedule(Vec::new())
    }

    pub fn times(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, t: usize) -> bool {
        self.0.binary_search(&t).is_ok()
    }

    pub fn check_against(&self, g: &TemporalGraph) -> Result<()> {
        if !g.is_periodic() {
            if let Some(&t) = self.0.iter().find(|&&t| t > g.t_max()) {
                return Err(Error::InvalidSchedule(format!(
                    "transmission at {t} after lifetime {}",
                    g.t_max()
                )));
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for TransmissionSchedule {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TransmissionSchedule> for Vec<usize> {
    fn from(s: TransmissionSchedule) -> Self {
        s.0
    }
}

impl FromStr for TransmissionSchedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let times = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSchedule(format!("bad time `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(times)
    }
}

impl fmt::Display for TransmissionSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub graph: TemporalGraph,
    pub source: usize,
    pub delta: u32,
    pub budget: usize,
    pub target: usize,
    pub objective: Objective,
    pub constraint: ScheduleConstraint,
    pub dynamics: DynamicsKind,
}

impl ProblemInstance {
    /// Unconstrained renewal instance with target 0.
    pub fn new(graph: TemporalGraph, source: usize, delta: u32, budget: usize, objective: Objective) -> Result<Self> {
        let inst = ProblemInstance {
            graph,
            source,
            delta,
            budget,
            target: 0,
            objective,
            constraint: ScheduleConstraint::Unconstrained,
            dynamics: DynamicsKind::Renewal,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.source >= self.graph.n() {
            return Err(Error::InvalidInstance(format!(
                "source {} out of range 0..{}",
                self.source,
                self.graph.n()
            )));
        }
        if self.delta == 0 {
            return Err(Error::InvalidInstance("delta must be at least 1".into()));
        }
        match self.objective {
            Objective::MaxViralTstep { t_star } => {
                if t_star == 0 {
                    return Err(Error::InvalidInstance("t_star must be at least 1".into()));
                }
                if !self.graph.is_periodic() && t_star > self.graph.t_max() {
                    return Err(Error::InvalidInstance(format!(
                        "t_star {t_star} exceeds lifetime {} of a non-periodic graph",
                        self.graph.t_max()
                    )));
                }
            }
            Objective::MinNonViralTime { d_gap: 0 } => {
                return Err(Error::InvalidInstance("d_gap must be at least 1".into()));
            }
            _ => {}
        }
        self.constraint.validate()
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_dynamics(mut self, dynamics: DynamicsKind) -> Self {
        self.dynamics = dynamics;
        self
    }

    pub fn with_constraint(mut self, constraint: ScheduleConstraint) -> Self {
        self.constraint = constraint;
        self
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.target = target;
        self
    }
}
