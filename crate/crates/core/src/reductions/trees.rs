//! Source-rooted binary-tree constructions for MaxSpread, MaxViral and
//! MinNonViralTime. Trees use heap layout: node 0 is the source, children
//! of `i` are `2i+1` and `2i+2`, and leaves come last.

use super::{build_problem, check_size, level, pad_universe, solve_setcover_exact, Certificate, GeneratedInstance, SetCoverInstance};
use crate::error::{Error, Result};
use crate::graph::TemporalGraph;
use crate::instance::{Objective, ScheduleConstraint, TransmissionSchedule};

fn check_delta(delta: u32) -> Result<()> {
    if delta == 0 {
        return Err(Error::InvalidInstance("delta must be at least 1".into()));
    }
    Ok(())
}

fn tree_names(leaves: usize, leaf_name: impl Fn(usize) -> String) -> Vec<String> {
    let total = 2 * leaves - 1;
    (0..total)
        .map(|i| {
            if i == 0 {
                "s".to_string()
            } else if i >= leaves - 1 {
                leaf_name(i - (leaves - 1) + 1)
            } else {
                format!("p_{i}")
            }
        })
        .collect()
}

fn mark(name: String, padded: bool) -> String {
    if padded {
        name + "*"
    } else {
        name
    }
}

/// MaxSpread on a tree: a transmission at `t_j = (j-1)(δ+1)+1` floods the
/// whole tree and reaches exactly the pendant `y_i` with `i ∈ S_j`.
pub fn gen_spread_tree(sc: &SetCoverInstance, delta: u32) -> Result<GeneratedInstance> {
    check_delta(delta)?;
    let target_n = sc.n.max(2).next_power_of_two();
    let (sc, pad) = pad_universe(sc, target_n);
    let leaves = sc.n;
    let h = leaves.trailing_zeros() as usize;
    let d = delta as usize;
    let m = sc.m();
    let total = 2 * leaves - 1;
    let vertices = total + leaves;
    check_size(vertices)?;
    let t_j = |j: usize| (j - 1) * (d + 1) + 1;
    let t_max = h * d + t_j(m.max(1)) + 1;

    let mut b = TemporalGraph::builder(vertices, t_max, false);
    for v in 1..total {
        let l = level((v - 1) / 2);
        b.add_edge((v - 1) / 2, v, &(1..=m).map(|j| (l - 1) * d + t_j(j)).collect::<Vec<_>>())?;
    }
    for i in 1..=leaves {
        let labels: Vec<usize> = (1..=m).filter(|&j| sc.contains(j, i)).map(|j| h * d + t_j(j)).collect();
        b.add_edge(leaves - 1 + i - 1, total + i - 1, &labels)?;
    }
    let graph = b.build()?;

    let mut names = tree_names(leaves, |i| mark(format!("x_{i}"), i > leaves - pad));
    names.extend((1..=leaves).map(|i| mark(format!("y_{i}"), i > leaves - pad)));

    let cover = solve_setcover_exact(&sc)?;
    let answer = cover.as_ref().is_some_and(|c| c.len() <= sc.b);
    let witness = cover
        .as_ref()
        .filter(|_| answer)
        .map(|c| TransmissionSchedule::new(c.iter().map(|&j| t_j(j)).collect()))
        .transpose()?;
    let k = vertices - 1;
    Ok(GeneratedInstance {
        problem: build_problem(graph, delta, sc.b, k, Objective::MaxSpread, ScheduleConstraint::Unconstrained)?,
        names,
        certificate: Certificate {
            reduction: "spread-tree".into(),
            answer,
            target_k: k,
            witness,
            checkpoint: None,
            cover,
        },
    })
}

/// Transmission times of the viral tree: `t_j = h(j-1)(δ+1)+1`.
pub fn viral_wave_time(h: usize, delta: u32, j: usize) -> usize {
    h * (j - 1) * (delta as usize + 1) + 1
}

/// MaxViral on a tree with `x_i - y_i - z_i` chains. Waves at `t_j` light
/// up `y_i` for `i ∈ S_j`; each lit `y_i`/`z_i` pair then keeps itself
/// alive, and a final wave at `t_{m+1}` reactivates all `x_i` at the
/// checkpoint `t* = hδ + t_{m+1}`.
pub fn gen_viral_tree(sc: &SetCoverInstance, delta: u32) -> Result<GeneratedInstance> {
    check_delta(delta)?;
    let target_n = sc.n.max(2).next_power_of_two();
    let (sc, pad) = pad_universe(sc, target_n);
    let leaves = sc.n;
    let h = leaves.trailing_zeros() as usize;
    let d = delta as usize;
    let m = sc.m();
    let total = 2 * leaves - 1;
    let vertices = total + 2 * leaves;
    check_size(vertices)?;
    let t_j = |j: usize| viral_wave_time(h, delta, j);
    let t_star = h * d + t_j(m + 1);
    let t_max = t_star;

    let mut b = TemporalGraph::builder(vertices, t_max, false);
    for v in 1..total {
        let l = level((v - 1) / 2);
        b.add_edge((v - 1) / 2, v, &(1..=m + 1).map(|j| (l - 1) * d + t_j(j)).collect::<Vec<_>>())?;
    }
    let y = |i: usize| total + i - 1;
    let z = |i: usize| total + leaves + i - 1;
    for i in 1..=leaves {
        let labels: Vec<usize> = (1..=m).filter(|&j| sc.contains(j, i)).map(|j| h * d + t_j(j)).collect();
        b.add_edge(leaves - 1 + i - 1, y(i), &labels)?;
        let mut keep = Vec::new();
        let mut a = h * d + 2;
        while a <= t_star {
            keep.push(a);
            if a < t_star {
                keep.push(a + 1);
            }
            a += d + 1;
        }
        b.add_edge(y(i), z(i), &keep)?;
    }
    let graph = b.build()?;

    let mut names = tree_names(leaves, |i| mark(format!("x_{i}"), i > leaves - pad));
    names.extend((1..=leaves).map(|i| mark(format!("y_{i}"), i > leaves - pad)));
    names.extend((1..=leaves).map(|i| mark(format!("z_{i}"), i > leaves - pad)));

    let cover = solve_setcover_exact(&sc)?;
    let answer = cover.as_ref().is_some_and(|c| c.len() <= sc.b);
    let witness = cover
        .as_ref()
        .filter(|_| answer)
        .map(|c| TransmissionSchedule::new(c.iter().map(|&j| t_j(j)).chain([t_j(m + 1)]).collect()))
        .transpose()?;
    // with δ = 1 each y/z pair alternates, so only one of them counts
    let k = if delta >= 2 { 3 * leaves } else { 2 * leaves };
    Ok(GeneratedInstance {
        problem: build_problem(graph, delta, sc.b + 1, k, Objective::MaxViral, ScheduleConstraint::Unconstrained)?,
        names,
        certificate: Certificate {
            reduction: "viral-tree".into(),
            answer,
            target_k: k,
            witness,
            checkpoint: Some(t_star),
            cover,
        },
    })
}

/// MinNonViralTime (d = 1) on a tree whose vertices are kept alive by
/// `z_v - z'_v` gadgets. A mandatory transmission at 1 floods the tree and
/// the extra leaf `x_a`; waves at `2j(δ+1)` reach `y_i` for `i ∈ S_j`, and
/// every `y` then feeds a pendant `w` that stays active to the end.
pub fn gen_minnonviral_tree(sc: &SetCoverInstance, delta: u32) -> Result<GeneratedInstance> {
    check_delta(delta)?;
    // n + 1 leaves must be a power of two
    let target_n = (sc.n + 1).next_power_of_two() - 1;
    let (sc, pad) = pad_universe(sc, target_n.max(1));
    let n = sc.n;
    let leaves = n + 1;
    let h = leaves.trailing_zeros() as usize;
    let d = delta as usize;
    let m = sc.m();
    let total = 2 * leaves - 1;
    let vertices = total + 2 * leaves + 2 * total;
    check_size(vertices)?;
    let t_max = h + 2 * m * (d + 1) + 2;
    let wave = |j: usize| 2 * j * (d + 1);

    let leaf = |i: usize| total - leaves + i - 1;
    let y = |i: usize| total + i - 1;
    let w = |i: usize| total + leaves + i - 1;
    let z = |v: usize| total + 2 * leaves + v;
    let z2 = |v: usize| total + 2 * leaves + total + v;

    let mut b = TemporalGraph::builder(vertices, t_max, false);
    for v in 1..total {
        let l = level((v - 1) / 2);
        let labels: Vec<usize> = std::iter::once(l).chain((1..=m).map(|j| (l - 1) + wave(j))).collect();
        b.add_edge((v - 1) / 2, v, &labels)?;
    }
    for i in 1..=leaves {
        let labels: Vec<usize> = if i <= n {
            (1..=m).filter(|&j| sc.contains(j, i)).map(|j| h + wave(j)).collect()
        } else {
            vec![h + 1]
        };
        b.add_edge(leaf(i), y(i), &labels)?;
        b.add_labels_from(y(i), w(i), h + 2..=t_max)?;
    }
    for v in 0..total {
        let l = level(v);
        let labels: Vec<usize> = std::iter::once(l)
            .chain((1..).map(|i| (l - 1) + i * (d + 1)).take_while(|&t| t <= t_max))
            .collect();
        b.add_labels_from(v, z(v), labels)?;
        b.add_labels_from(z(v), z2(v), l + 1..=t_max)?;
    }
    let graph = b.build()?;

    let mut names = tree_names(leaves, |i| {
        if i <= n {
            mark(format!("x_{i}"), i > n - pad)
        } else {
            "x_a".to_string()
        }
    });
    let tail = |p: &str, i: usize| {
        if i <= n {
            mark(format!("{p}_{i}"), i > n - pad)
        } else {
            format!("{p}_a")
        }
    };
    names.extend((1..=leaves).map(|i| tail("y", i)));
    names.extend((1..=leaves).map(|i| tail("w", i)));
    let node_names: Vec<String> = names[..total].to_vec();
    names.extend(node_names.iter().map(|v| format!("z[{v}]")));
    names.extend(node_names.iter().map(|v| format!("z'[{v}]")));

    let cover = solve_setcover_exact(&sc)?;
    let answer = cover.as_ref().is_some_and(|c| c.len() <= sc.b);
    let witness = cover
        .as_ref()
        .filter(|_| answer)
        .map(|c| TransmissionSchedule::new(std::iter::once(1).chain(c.iter().map(|&j| wave(j))).collect()))
        .transpose()?;
    let k = vertices - 1;
    Ok(GeneratedInstance {
        problem: build_problem(
            graph,
            delta,
            sc.b + 1,
            k,
            Objective::MinNonViralTime { d_gap: 1 },
            ScheduleConstraint::Unconstrained,
        )?,
        names,
        certificate: Certificate {
            reduction: "minnonviral-tree".into(),
            answer,
            target_k: k,
            witness,
            checkpoint: None,
            cover,
        },
    })
}
