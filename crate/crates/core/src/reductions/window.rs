//! Star constructions for windowed schedules from VertexCover on graphs of
//! maximum degree three.

use serde::{Deserialize, Serialize};

use super::{build_problem, check_size, solve_vertexcover_exact, Certificate, GeneratedInstance, VertexCoverInstance};
use crate::error::{Error, Result};
use crate::graph::TemporalGraph;
use crate::instance::{Objective, ScheduleConstraint, TransmissionSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowRegime {
    /// Windows of width 2δ back to back, plus one dummy window.
    Fixed,
    /// Windows of width 2δ separated by δ empty steps, gaps in [2δ, 4δ].
    Shifting,
}

/// Star centred at the source with one leaf `v_j` per edge `e_j` and one
/// leaf `u_i` per vertex `h_i`. Window `i` starts at `a_i`; the edges of
/// `h_i` carry label `a_i` and `u_i` carries `a_i + δ`, so one transmission
/// per window reaches either the edges of `h_i` or `u_i`.
pub fn gen_window_star(vc: &VertexCoverInstance, delta: u32, regime: WindowRegime) -> Result<GeneratedInstance> {
    if delta == 0 {
        return Err(Error::InvalidInstance("delta must be at least 1".into()));
    }
    if vc.max_degree() > 3 {
        return Err(Error::InvalidInstance(format!("max degree {} above 3", vc.max_degree())));
    }
    let d = delta as usize;
    let (n, m) = (vc.n, vc.edges.len());
    let stride = match regime {
        WindowRegime::Fixed => 2 * d,
        WindowRegime::Shifting => 3 * d,
    };
    let a = |i: usize| stride * (i - 1) + 1;
    let (t_max, budget, constraint) = match regime {
        WindowRegime::Fixed => (2 * d * (n + 1), n + 1, ScheduleConstraint::FixedWindow { w: 2 * d }),
        WindowRegime::Shifting => (
            (3 * d * n).max(1),
            n,
            ScheduleConstraint::ShiftingWindow { x: 2 * d, y: 4 * d },
        ),
    };
    let vertices = 1 + m + n;
    check_size(vertices)?;
    let v_of = |j: usize| j;
    let u_of = |i: usize| m + i;

    let mut b = TemporalGraph::builder(vertices, t_max, false);
    for (j, &(p, q)) in vc.edges.iter().enumerate() {
        b.add_label(0, v_of(j + 1), a(p))?;
        b.add_label(0, v_of(j + 1), a(q))?;
    }
    for i in 1..=n {
        b.add_label(0, u_of(i), a(i) + d)?;
    }
    let graph = b.build()?;

    let mut names = vec!["s".to_string()];
    names.extend(vc.edges.iter().map(|(p, q)| format!("v_{p}{q}")));
    names.extend((1..=n).map(|i| format!("u_{i}")));

    let cover = solve_vertexcover_exact(vc)?;
    let answer = cover.len() <= vc.ell;
    let k = (n + m).saturating_sub(vc.ell);
    let witness = if answer {
        let mut times: Vec<usize> = (1..=n).map(|i| if cover.contains(&i) { a(i) } else { a(i) + d }).collect();
        if regime == WindowRegime::Fixed {
            times.push(2 * d * n + 1);
        }
        Some(TransmissionSchedule::new(times)?)
    } else {
        None
    };
    Ok(GeneratedInstance {
        problem: build_problem(graph, delta, budget, k, Objective::MaxSpread, constraint)?,
        names,
        certificate: Certificate {
            reduction: match regime {
                WindowRegime::Fixed => "window-star-fixed".into(),
                WindowRegime::Shifting => "window-star-shifting".into(),
            },
            answer,
            target_k: k,
            witness,
            checkpoint: None,
            cover: Some(cover),
        },
    })
}
