//! Seeded property suites: union lemma, periodic horizon bound, walk
//! oracle agreement, and reduction equivalences.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::coverage::periodic_spread_horizon;
use crate::error::{Error, Result};
use crate::instance::{DynamicsKind, ProblemInstance, TransmissionSchedule};
use crate::objectives::evaluate;
use crate::random::{random_instance, random_setcover, random_vertexcover, stream, RandomSpec};
use crate::reductions::{
    gen_minnonviral_tree, gen_periodic_path, gen_spread_tree, gen_viral_tree, gen_window_star, solve_setcover_exact,
    solve_vertexcover_exact, GeneratedInstance, SetCoverInstance, VertexCoverInstance, WindowRegime,
};
use crate::solvers::{exact_solve, ExactOptions};
use crate::walk::restless_walk_active_oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Union,
    Horizon,
    WalkOracle,
    Reductions,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Union, Suite::Horizon, Suite::WalkOracle, Suite::Reductions];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Union => "union",
            Suite::Horizon => "horizon",
            Suite::WalkOracle => "walk-oracle",
            Suite::Reductions => "reductions",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            trials: 0,
            passed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, outcome: std::result::Result<(), String>) {
        self.trials += 1;
        match outcome {
            Ok(()) => self.passed += 1,
            Err(e) => {
                if self.failures.len() < 20 {
                    self.failures.push(e);
                }
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

/// Runs `trials` seeded checks. With `mutate`, schedules in the union suite
/// are simulated with a decrement rule that never renews active vertices,
/// which the suite must catch.
pub fn run_suite(suite: Suite, seed: u64, trials: usize, mutate: bool) -> SuiteReport {
    let mut rep = SuiteReport::new(suite);
    match suite {
        Suite::Union => {
            let mut rng = stream(seed, "verify-union");
            let spec = RandomSpec {
                max_n: 10,
                max_t: 8,
                max_delta: 3,
                max_budget: 4,
                periodic: false,
            };
            for _ in 0..trials {
                let inst = random_instance(&mut rng, spec);
                let sched = random_schedule(&mut rng, inst.graph.t_max(), 4);
                rep.record(check_union(&inst, &sched, mutate));
            }
        }
        Suite::Horizon => {
            let mut rng = stream(seed, "verify-horizon");
            let spec = RandomSpec {
                max_n: 8,
                max_t: 4,
                max_delta: 3,
                max_budget: 3,
                periodic: true,
            };
            for _ in 0..trials {
                let inst = random_instance(&mut rng, spec);
                rep.record(check_horizon(&inst));
            }
        }
        Suite::WalkOracle => {
            let mut rng = stream(seed, "verify-walk");
            for _ in 0..trials {
                let periodic = rng.gen_bool(0.3);
                let spec = RandomSpec {
                    max_n: 8,
                    max_t: 6,
                    max_delta: 3,
                    max_budget: 1,
                    periodic,
                };
                let inst = random_instance(&mut rng, spec);
                rep.record(check_walk_oracle(&inst));
            }
        }
        Suite::Reductions => {
            let (scs, vcs) = reduction_corpus(seed, trials);
            for sc in &scs {
                for g in setcover_generators(sc) {
                    rep.record(g.and_then(|g| check_reduction(&g)));
                }
            }
            for vc in &vcs {
                for delta in 1..=2 {
                    for regime in [WindowRegime::Fixed, WindowRegime::Shifting] {
                        rep.record(
                            gen_window_star(vc, delta, regime)
                                .map_err(|e| e.to_string())
                                .and_then(|g| check_reduction(&g)),
                        );
                    }
                }
            }
        }
    }
    rep
}

pub fn random_schedule<R: Rng>(rng: &mut R, t_max: usize, max_len: usize) -> TransmissionSchedule {
    let len = rng.gen_range(0..=max_len.min(t_max));
    let times = rand::seq::index::sample(rng, t_max, len).into_iter().map(|i| i + 1).collect();
    TransmissionSchedule::from_unsorted(times).expect("distinct positive times")
}

/// `active_t(T) = ⋃_{τ∈T} active_t({τ})` for every step.
pub fn check_union(inst: &ProblemInstance, sched: &TransmissionSchedule, mutate: bool) -> std::result::Result<(), String> {
    let horizon = inst.graph.t_max();
    let mut whole = inst.process();
    if mutate {
        whole.dynamics = DynamicsKind::ClassicSis;
    }
    let full = whole.simulate(sched, horizon).map_err(|e| e.to_string())?;
    let singles: Vec<_> = sched
        .times()
        .iter()
        .map(|&tau| inst.process().simulate(&TransmissionSchedule::new(vec![tau]).unwrap(), horizon))
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    for t in 1..=horizon {
        let mut u = VertexSet::new(inst.graph.n());
        for s in &singles {
            u.union_with(s.active_at(t));
        }
        if &u != full.active_at(t) {
            return Err(format!(
                "schedule {sched} t={t}: whole {:?} vs union {:?}",
                full.active_at(t),
                u
            ));
        }
    }
    Ok(())
}

/// First activations after a lone transmission happen within the
/// `(|V|+1)·t_max·δ` horizon, and later periods add nothing new.
pub fn check_horizon(inst: &ProblemInstance) -> std::result::Result<(), String> {
    let h = periodic_spread_horizon(inst);
    let t_max = inst.graph.t_max();
    let extra = 3 * t_max * inst.delta as usize;
    let ever = |tau: usize, end: usize| {
        let times = [tau];
        let mut sim = inst.process().simulator(&times);
        let mut e = VertexSet::new(inst.graph.n());
        for _ in 0..end {
            sim.advance();
            e.union_with(&sim.active_set());
        }
        e
    };
    for tau in 1..=t_max {
        let base = ever(tau, tau + h);
        let longer = ever(tau, tau + h + extra);
        if base != longer {
            return Err(format!("tau={tau}: {:?} grows to {:?} past the horizon", base, longer));
        }
        for j in 1..=2 {
            let shifted = ever(tau + j * t_max, tau + j * t_max + h);
            let mut a = base.clone();
            a.remove(inst.source);
            let mut b = shifted;
            b.remove(inst.source);
            if a != b {
                return Err(format!("tau={tau} and tau+{j}·t_max reach different vertices"));
            }
        }
    }
    Ok(())
}

/// Walk oracle equals the simulator for every lone transmission and step.
pub fn check_walk_oracle(inst: &ProblemInstance) -> std::result::Result<(), String> {
    let t_max = inst.graph.t_max();
    let (horizon, last_tau) = if inst.graph.is_periodic() {
        (3 * t_max + inst.delta as usize, 2 * t_max)
    } else {
        (t_max, t_max)
    };
    for tau in 1..=last_tau {
        let tr = inst
            .process()
            .simulate(&TransmissionSchedule::new(vec![tau]).unwrap(), horizon)
            .map_err(|e| e.to_string())?;
        for t in 1..=horizon {
            let o = restless_walk_active_oracle(inst, tau, t);
            if &o != tr.active_at(t) {
                return Err(format!("tau={tau} t={t}: oracle {:?} vs simulator {:?}", o, tr.active_at(t)));
            }
        }
    }
    Ok(())
}

/// Witness reaches the target, and the exact optimum reaches the target
/// exactly when the certificate says yes.
pub fn check_reduction(g: &GeneratedInstance) -> std::result::Result<(), String> {
    let c = &g.certificate;
    if c.answer != c.witness.is_some() {
        return Err(format!("{}: yes-certificate without witness", c.reduction));
    }
    if let Some(w) = &c.witness {
        let v = evaluate(&g.problem, w).map_err(|e| e.to_string())?;
        if !v.feasible || v.value_excl_source < c.target_k {
            return Err(format!(
                "{}: witness {w} gives {} (feasible {}) below k={}",
                c.reduction, v.value_excl_source, v.feasible, c.target_k
            ));
        }
    }
    let r = exact_solve(&g.problem, &ExactOptions::default()).map_err(|e| e.to_string())?;
    let reached = r
        .best
        .as_ref()
        .is_some_and(|b| b.value.feasible && b.value.value_excl_source >= c.target_k);
    if reached != c.answer {
        return Err(format!(
            "{}: certificate {} but exact optimum {:?} for k={}",
            c.reduction,
            c.answer,
            r.best.map(|b| (b.schedule.to_string(), b.value.value_excl_source)),
            c.target_k
        ));
    }
    Ok(())
}

/// Every SetCover generator (and the checkpoint variant of the viral tree)
/// for δ = 1..=3; the periodic path for small (δ, t_max) pairs.
pub fn setcover_generators(sc: &SetCoverInstance) -> Vec<std::result::Result<GeneratedInstance, String>> {
    let mut out = Vec::new();
    for delta in 1..=3 {
        out.push(gen_spread_tree(sc, delta));
        match gen_viral_tree(sc, delta) {
            Ok(g) => {
                out.push(Ok(g.tstep_variant().expect("viral tree has a checkpoint")));
                out.push(Ok(g));
            }
            Err(e) => out.push(Err(e)),
        }
        out.push(gen_minnonviral_tree(sc, delta));
    }
    for (delta, t_max) in [(1, 2), (1, 3), (2, 3)] {
        out.push(gen_periodic_path(sc, delta, t_max));
    }
    out.into_iter().map(|r| r.map_err(|e| e.to_string())).collect()
}

/// Random covers with `n ≤ 8`, `m ≤ 5`; budgets are set at and just below
/// the optimum so both answers occur.
pub fn reduction_corpus(seed: u64, count: usize) -> (Vec<SetCoverInstance>, Vec<VertexCoverInstance>) {
    let mut rng = stream(seed, "reduction-corpus");
    let mut scs = Vec::new();
    while scs.len() < count {
        let mut sc = random_setcover(&mut rng, 8, 5);
        match solve_setcover_exact(&sc).expect("small universe") {
            Some(c) => {
                sc.b = c.len();
                scs.push(sc.clone());
                if c.len() > 1 && scs.len() < count {
                    sc.b = c.len() - 1;
                    scs.push(sc);
                }
            }
            None => scs.push(sc),
        }
    }
    let mut vcs = Vec::new();
    while vcs.len() < count {
        let mut vc = random_vertexcover(&mut rng, 8, 5);
        let c = solve_vertexcover_exact(&vc).expect("small graph").len();
        vc.ell = c;
        vcs.push(vc.clone());
        if c > 0 && vcs.len() < count {
            vc.ell = c - 1;
            vcs.push(vc);
        }
    }
    (scs, vcs)
}
