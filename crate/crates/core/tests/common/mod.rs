//! Structural checks on generated instances, shared by the reduction tests
//! and the acceptance harness.
#![allow(dead_code)]

use tempinf_core::reductions::{GeneratedInstance, SetCoverInstance};
use tempinf_core::TransmissionSchedule;

pub type Check = Result<(), String>;

fn heap_level(i: usize) -> usize {
    (usize::BITS - (i + 1).leading_zeros()) as usize
}

/// Spread tree: a lone transmission anywhere in `[t_j-(δ-1), t_j]` activates
/// each level-`l` vertex first at `(l-2)δ + t_j + 1`, for exactly δ steps, and
/// `y_i` follows at `hδ + t_j + 1` iff `i ∈ S_j`.
pub fn spread_tree_timing(sc: &SetCoverInstance, g: &GeneratedInstance) -> Check {
    let p = &g.problem;
    let d = p.delta as usize;
    let leaves = g.names.iter().filter(|n| n.starts_with("y_")).count();
    let total = 2 * leaves - 1;
    let h = leaves.trailing_zeros() as usize;
    for j in 1..=sc.m() {
        let t_j = (j - 1) * (d + 1) + 1;
        for tau in t_j.saturating_sub(d - 1).max(1)..=t_j {
            let tr = p
                .process()
                .simulate(&TransmissionSchedule::new(vec![tau]).unwrap(), p.graph.t_max())
                .map_err(|e| e.to_string())?;
            for v in 1..total {
                let l = heap_level(v);
                let want: Vec<usize> = ((l - 2) * d + t_j + 1..(l - 2) * d + t_j + 1 + d).collect();
                let got = tr.activation_list(v);
                if got != want {
                    return Err(format!("j={j} tau={tau}: {} active at {got:?}, expected {want:?}", g.names[v]));
                }
            }
            for i in 1..=leaves {
                let y = total + i - 1;
                let got = tr.activation_list(y);
                let hit = i <= sc.n && sc.contains(j, i);
                let ok = if hit { got.first() == Some(&(h * d + t_j + 1)) } else { got.is_empty() };
                if !ok {
                    return Err(format!("j={j} tau={tau}: {} active at {got:?}", g.names[y]));
                }
            }
        }
    }
    Ok(())
}

/// Viral tree under its witness: each lit `y_i`/`z_i` pair stays active
/// through the checkpoint (alternating when δ = 1), and every
/// vertex except the source is active at the checkpoint.
pub fn viral_tree_sync(g: &GeneratedInstance) -> Check {
    let Some(w) = &g.certificate.witness else { return Ok(()) };
    let p = &g.problem;
    let t_star = g.certificate.checkpoint.ok_or("viral tree without checkpoint")?;
    let tr = p.process().simulate(w, t_star).map_err(|e| e.to_string())?;
    for (y, name) in g.names.iter().enumerate().filter(|(_, n)| n.starts_with("y_")) {
        let z = g.id_of(&name.replacen('y', "z", 1)).ok_or("missing z partner")?;
        let Some(&first) = tr.activation_list(y).first() else { continue };
        for t in first..=t_star {
            let (ya, za) = (tr.active_at(t).contains(y), tr.active_at(t).contains(z));
            // δ = 1 pairs alternate; otherwise both stay up once z has started
            let ok = if p.delta == 1 { ya || za } else { ya && (za || t == first) };
            if !ok {
                return Err(format!("{name}/z pair drops out at {t}"));
            }
        }
    }
    let at = tr.active_at(t_star);
    let mut at = at.clone();
    at.remove(p.source);
    if at.count() < g.certificate.target_k {
        return Err(format!("{} active at t*={t_star}, k={}", at.count(), g.certificate.target_k));
    }
    Ok(())
}

/// Non-viral tree under its witness: once active, no tree vertex (`s`
/// excepted) is inactive for two consecutive steps.
pub fn minnonviral_tree_gaps(g: &GeneratedInstance) -> Check {
    let Some(w) = &g.certificate.witness else { return Ok(()) };
    let p = &g.problem;
    let t_max = p.graph.t_max();
    let tr = p.process().simulate(w, t_max).map_err(|e| e.to_string())?;
    for (v, name) in g.names.iter().enumerate().skip(1) {
        let tree = name.starts_with("p_") || name.starts_with("x_");
        if !tree {
            continue;
        }
        let acts = tr.activation_list(v);
        let first = *acts.first().ok_or(format!("{name} never active"))?;
        for t in first..t_max {
            if !tr.active_at(t).contains(v) && !tr.active_at(t + 1).contains(v) {
                return Err(format!("{name} inactive at {t} and {}", t + 1));
            }
        }
    }
    Ok(())
}

/// Window star: at most three edges live per step and two labels per edge.
pub fn window_star_sparsity(g: &GeneratedInstance) -> Check {
    let gr = &g.problem.graph;
    for t in 1..=gr.t_max() {
        if gr.edges_at(t).len() > 3 {
            return Err(format!("{} edges live at {t}", gr.edges_at(t).len()));
        }
    }
    for e in gr.labeled_edges() {
        if e.labels.len() > 2 {
            return Err(format!("edge {}-{} has labels {:?}", e.u, e.v, e.labels));
        }
    }
    Ok(())
}
