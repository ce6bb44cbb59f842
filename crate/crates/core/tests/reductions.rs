mod common;

use tempinf_core::objectives::evaluate;
use tempinf_core::{parse_graph, serialize_graph, TransmissionSchedule};
use tempinf_core::solvers::periodic_fpt_maxspread;
use tempinf_core::walk::restless_walk_active_oracle;
use tempinf_core::Objective;
use tempinf_core::random::{random_setcover, random_vertexcover, stream};
use tempinf_core::reductions::fixtures::*;
use tempinf_core::reductions::*;
use tempinf_core::solvers::{exact_solve, ExactOptions};

fn forward(g: &GeneratedInstance) {
    let c = &g.certificate;
    if let Some(w) = &c.witness {
        let v = evaluate(&g.problem, w).unwrap();
        assert!(v.feasible, "{}: witness {w} infeasible", c.reduction);
        assert!(
            v.value_excl_source >= c.target_k,
            "{}: witness {w} reaches {} < k={}",
            c.reduction,
            v.value_excl_source,
            c.target_k
        );
    }
}

fn backward(g: &GeneratedInstance) {
    let r = exact_solve(&g.problem, &ExactOptions::default()).unwrap();
    let reached = r.best.as_ref().is_some_and(|b| b.value.value_excl_source >= g.certificate.target_k);
    assert_eq!(
        reached, g.certificate.answer,
        "{}: exact {:?} vs certificate {:?}",
        g.certificate.reduction,
        r.best.map(|b| (b.schedule.to_string(), b.value.value_excl_source)),
        (g.certificate.answer, g.certificate.target_k)
    );
}

#[test]
fn spread_tree_cover8() {
    let g = gen_spread_tree(&cover8_setcover(), 3).unwrap();
    let x3 = g.id_of("x_3").unwrap();
    let y3 = g.id_of("y_3").unwrap();
    let e = g.problem.graph.labeled_edges().iter().find(|e| (e.u, e.v) == (x3, y3)).unwrap();
    // h = 3, δ = 3: labels hδ + t_j for j = 1, 2
    assert_eq!(e.labels, vec![10, 14]);
    assert!(g.certificate.answer);
    forward(&g);
    backward(&g);
}

#[test]
fn viral_and_minnonviral_fixtures() {
    for g in [gen_viral_tree(&cover8_setcover(), 3).unwrap(), gen_minnonviral_tree(&cover7_setcover(), 3).unwrap()] {
        assert!(g.certificate.answer);
        forward(&g);
        backward(&g);
    }
}

#[test]
fn random_setcover_corpus() {
    let mut rng = stream(11, "sc-corpus");
    for _ in 0..12 {
        let sc = random_setcover(&mut rng, 6, 4);
        for delta in 1..=3 {
            for g in [
                gen_spread_tree(&sc, delta).unwrap(),
                gen_viral_tree(&sc, delta).unwrap(),
                gen_minnonviral_tree(&sc, delta).unwrap(),
            ] {
                forward(&g);
                backward(&g);
                if let Some(t) = g.tstep_variant().filter(|_| g.certificate.reduction == "viral-tree") {
                    forward(&t);
                    backward(&t);
                }
            }
        }
        if sc.n <= 5 && sc.m() <= 3 {
            for (delta, t_max) in [(1, 2), (1, 3), (2, 3)] {
                let g = gen_periodic_path(&sc, delta, t_max).unwrap();
                forward(&g);
                backward(&g);
            }
        }
    }
}

#[test]
fn random_vertexcover_corpus() {
    let mut rng = stream(5, "vc-corpus");
    for _ in 0..15 {
        let vc = random_vertexcover(&mut rng, 5, 6);
        for delta in 1..=2 {
            for regime in [WindowRegime::Fixed, WindowRegime::Shifting] {
                let g = gen_window_star(&vc, delta, regime).unwrap();
                forward(&g);
                backward(&g);
            }
        }
    }
}

#[test]
fn cover8_tree_structure() {
    let sc = cover8_setcover();
    let g = gen_spread_tree(&sc, 3).unwrap();
    let gr = &g.problem.graph;
    let text = serialize_graph(gr);
    assert_eq!(&parse_graph(&text).unwrap(), gr);
    assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);

    // underlying graph is a tree: connected with |V|-1 edges
    let und = gr.underlying_graph();
    assert_eq!(und.len(), gr.n() - 1);
    let mut parent: Vec<usize> = (0..gr.n()).collect();
    fn root(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] == x { x } else { let r = root(p, p[x]); p[x] = r; r }
    }
    for &(u, v) in &und {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        assert_ne!(a, b, "cycle through {u}-{v}");
        parent[a] = b;
    }
    for i in 1..=8 {
        let x = g.id_of(&format!("x_{i}")).unwrap();
        assert!(gr.degree_in_underlying(x) <= 4);
    }

    // transmitting at 1 reaches exactly y_1..y_3 among the pendants
    let tr = g.problem.process().simulate(&"1".parse().unwrap(), gr.t_max()).unwrap();
    let ever = tr.ever_active();
    let ys: Vec<usize> = (1..=8).filter(|i| ever.contains(g.id_of(&format!("y_{i}")).unwrap())).collect();
    assert_eq!(ys, vec![1, 2, 3]);
    let mut oracle = tempinf_core::VertexSet::new(gr.n());
    for t in 1..=gr.t_max() {
        oracle.union_with(&restless_walk_active_oracle(&g.problem, 1, t));
    }
    assert_eq!(oracle, ever);

    // {t_1, t_3}: 14 tree vertices plus y_1..y_6
    let v = evaluate(&g.problem, &TransmissionSchedule::new(vec![1, 9]).unwrap()).unwrap();
    assert_eq!(v.value_excl_source, 20);
    let tr = g.problem.process().simulate(&"1,9".parse().unwrap(), gr.t_max()).unwrap();
    for i in 1..=8 {
        let y = g.id_of(&format!("y_{i}")).unwrap();
        assert_eq!(tr.ever_active().contains(y), i <= 6, "y_{i}");
    }
    common::spread_tree_timing(&sc, &g).unwrap();
}

#[test]
fn spread_tree_timing_all_deltas() {
    for delta in 1..=3 {
        for sc in [cover8_setcover(), cover7_setcover(), cover6_setcover()] {
            let g = gen_spread_tree(&sc, delta).unwrap();
            common::spread_tree_timing(&sc, &g).unwrap();
        }
    }
}

#[test]
fn single_set_instances() {
    let one = SetCoverInstance::new(2, vec![vec![1, 2]], 1).unwrap();
    let g = gen_spread_tree(&one, 2).unwrap();
    assert!(g.certificate.answer);
    assert_eq!(g.certificate.witness.as_ref().unwrap().times(), &[1]);
    forward(&g);

    for delta in 1..=3 {
        let g = gen_viral_tree(&one, delta).unwrap();
        assert!(g.certificate.answer);
        forward(&g);
        backward(&g);
        common::viral_tree_sync(&g).unwrap();
    }

    for delta in 1..=3 {
        let one = SetCoverInstance::new(3, vec![vec![1, 2, 3]], 1).unwrap();
        let g = gen_minnonviral_tree(&one, delta).unwrap();
        let d = delta as usize;
        assert_eq!(g.certificate.witness.as_ref().unwrap().times(), &[1, 2 * (d + 1)]);
        let v = evaluate(&g.problem, g.certificate.witness.as_ref().unwrap()).unwrap();
        assert!(v.feasible);
        assert_eq!(v.value_excl_source, g.certificate.target_k);
        common::minnonviral_tree_gaps(&g).unwrap();
    }
}

#[test]
fn nonviral_pendant_labels() {
    let sc = cover7_setcover();
    let g = gen_minnonviral_tree(&sc, 3).unwrap();
    let gr = &g.problem.graph;
    // 8 leaves, h = 3
    for i in 1..=7 {
        let y = g.id_of(&format!("y_{i}")).unwrap();
        let w = g.id_of(&format!("w_{i}")).unwrap();
        let e = gr.labeled_edges().iter().find(|e| (e.u.min(e.v), e.u.max(e.v)) == (y.min(w), y.max(w))).unwrap();
        assert_eq!(e.labels, (5..=gr.t_max()).collect::<Vec<_>>());
    }
    common::minnonviral_tree_gaps(&g).unwrap();
}

#[test]
fn viral_tree_checkpoints() {
    for delta in 1..=3 {
        for sc in [cover8_setcover(), cover7_setcover()] {
            common::viral_tree_sync(&gen_viral_tree(&sc, delta).unwrap()).unwrap();
        }
    }
}

#[test]
fn cover6_periodic_path() {
    let sc = cover6_setcover();
    let g = gen_periodic_path(&sc, 2, 4).unwrap();
    let gr = &g.problem.graph;
    let v1 = g.id_of("v_1").unwrap();
    for i in [1, 2] {
        let u = g.id_of(&format!("u_{i}")).unwrap();
        let e = gr.labeled_edges().iter().find(|e| (e.u, e.v) == (v1, u)).unwrap();
        assert_eq!(e.labels, vec![2]);
    }
    forward(&g);
    backward(&g);

    // after a pulse at 1 each path vertex is active for one window of δ steps
    let horizon = 5 * gr.t_max();
    let tr = g.problem.process().simulate(&"1".parse().unwrap(), horizon).unwrap();
    let p = g.problem.process().simulate_periodic(&"1".parse().unwrap(), 1 << 16).unwrap();
    for t in 1..=horizon {
        assert_eq!(p.active_at(t), tr.active_at(t), "t={t}");
    }
    let d = g.problem.delta as usize;
    for i in 1..=3 * gr.t_max() {
        let acts = tr.activation_list(g.id_of(&format!("v_{i}")).unwrap());
        assert_eq!(acts.len(), d, "v_{i}: {acts:?}");
        assert_eq!(acts[d - 1] - acts[0], d - 1, "v_{i}: {acts:?}");
    }
}

#[test]
fn periodic_path_single_set() {
    let one = SetCoverInstance::new(2, vec![vec![1, 2]], 1).unwrap();
    let g = gen_periodic_path(&one, 1, 2).unwrap();
    assert!(g.certificate.answer);
    let v = evaluate(&g.problem, g.certificate.witness.as_ref().unwrap()).unwrap();
    assert_eq!(v.value_excl_source, 2 + 1);
    backward(&g);
}

#[test]
fn periodic_fpt_matches_unrolled_exact() {
    let g = gen_periodic_path(&cover6_setcover(), 1, 2).unwrap();
    let p = g.problem.clone().with_objective(Objective::MaxSpread);
    let fpt = periodic_fpt_maxspread(&p, 22).unwrap();
    let n = p.graph.n();
    let life = p.graph.t_max() + (n + 1) * p.graph.t_max() * p.delta as usize;
    let mut flat = p.clone();
    flat.graph = p.graph.unrolled(life);
    let ex = exact_solve(&flat, &ExactOptions::default()).unwrap();
    assert_eq!(fpt.value.value_excl_source, ex.best.unwrap().value.value_excl_source);
}

#[test]
fn window_star_small() {
    let edge = VertexCoverInstance::new(2, vec![(1, 2)], 1).unwrap();
    let tri = VertexCoverInstance::new(3, vec![(1, 2), (2, 3), (1, 3)], 1).unwrap();
    for delta in 1..=2 {
        for regime in [WindowRegime::Fixed, WindowRegime::Shifting] {
            let g = gen_window_star(&edge, delta, regime).unwrap();
            assert!(g.certificate.answer);
            forward(&g);
            backward(&g);
            let g = gen_window_star(&tri, delta, regime).unwrap();
            assert!(!g.certificate.answer);
            backward(&g);
            common::window_star_sparsity(&g).unwrap();
        }
    }
    // triangle with ℓ = 2: 3 + 3 - 2
    let tri2 = VertexCoverInstance { ell: 2, ..tri };
    let g = gen_window_star(&tri2, 1, WindowRegime::Fixed).unwrap();
    let r = exact_solve(&g.problem, &ExactOptions::default()).unwrap();
    assert_eq!(r.best.unwrap().value.value_excl_source, 4);
}

#[test]
fn cover8_decision_via_solve() {
    use tempinf_core::solvers::{solve, Method, SolveOptions};
    let g = gen_spread_tree(&cover8_setcover(), 3).unwrap();
    let out = solve(&g.problem, Method::Exact, &SolveOptions::default(), Some(g.certificate.target_k)).unwrap();
    assert_eq!(out.answer, Some(true));
    let mut no = cover8_setcover();
    no.b = 2;
    let g = gen_spread_tree(&no, 3).unwrap();
    assert!(!g.certificate.answer);
    let out = solve(&g.problem, Method::Exact, &SolveOptions::default(), Some(g.certificate.target_k)).unwrap();
    assert_eq!(out.answer, Some(false));
}
