//! Periodic MaxViralTstep construction: a long path with cycling labels and
//! hub vertices every `t_max` steps that point at the set elements.

use super::{build_problem, check_size, solve_setcover_exact, Certificate, GeneratedInstance, SetCoverInstance};
use crate::error::{Error, Result};
use crate::graph::TemporalGraph;
use crate::instance::{Objective, ScheduleConstraint, TransmissionSchedule};

/// Path `s, v_1, ..., v_{m·t_max}` with `v_i v_{i+1}` at `(i mod t_max)+1`;
/// hub `v_{j·t_max+1}` reaches `u_i` at label 2 for every `i` in the
/// (0-indexed) set `S_j`. A pulse started at `(m-1-j)·t_max + 1` passes
/// hub `j` so that its elements are active exactly at the checkpoint
/// `t* = (m-1)·t_max + δ + 2`, where the pulse itself covers δ path vertices.
pub fn gen_periodic_path(sc: &SetCoverInstance, delta: u32, t_max: usize) -> Result<GeneratedInstance> {
    if delta == 0 || t_max < 2 || delta as usize >= t_max {
        return Err(Error::InvalidInstance(format!(
            "periodic path needs 1 <= delta < t_max and t_max >= 2 (delta {delta}, t_max {t_max})"
        )));
    }
    let m = sc.m();
    if m == 0 {
        return Err(Error::InvalidInstance("periodic path needs at least one set".into()));
    }
    let d = delta as usize;
    let q = m * t_max;
    let vertices = 1 + q + sc.n;
    check_size(vertices)?;
    let v = |i: usize| i;
    let u = |i: usize| q + i;

    let mut b = TemporalGraph::builder(vertices, t_max, true);
    b.add_label(0, v(1), 1)?;
    for i in 1..q {
        b.add_label(v(i), v(i + 1), (i % t_max) + 1)?;
    }
    for (j, set) in sc.sets.iter().enumerate() {
        for &i in set {
            b.add_label(v(j * t_max + 1), u(i), 2)?;
        }
    }
    let graph = b.build()?;

    let mut names = vec!["s".to_string()];
    names.extend((1..=q).map(|i| format!("v_{i}")));
    names.extend((1..=sc.n).map(|i| format!("u_{i}")));

    let t_star = (m - 1) * t_max + d + 2;
    let k = sc.n + sc.b * d;
    let cover = solve_setcover_exact(sc)?;
    let answer = sc.b <= m && cover.as_ref().is_some_and(|c| c.len() <= sc.b);
    let witness = if answer {
        // pad the cover with unused sets up to exactly b pulses
        let mut chosen: Vec<usize> = cover.clone().unwrap();
        for j in 1..=m {
            if chosen.len() >= sc.b {
                break;
            }
            if !chosen.contains(&j) {
                chosen.push(j);
            }
        }
        let times = chosen.iter().map(|&j| (m - j) * t_max + 1).collect();
        Some(TransmissionSchedule::from_unsorted(times)?)
    } else {
        None
    };
    Ok(GeneratedInstance {
        problem: build_problem(
            graph,
            delta,
            sc.b,
            k,
            Objective::MaxViralTstep { t_star },
            ScheduleConstraint::Unconstrained,
        )?,
        names,
        certificate: Certificate {
            reduction: "periodic-path".into(),
            answer,
            target_k: k,
            witness,
            checkpoint: Some(t_star),
            cover,
        },
    })
}
