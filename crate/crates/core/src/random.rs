//! Seeded random instances. Every consumer draws from its own named
//! stream so adding draws in one place never shifts another.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphBuilder, TemporalGraph};
use crate::instance::{Objective, ProblemInstance};
use crate::reductions::{SetCoverInstance, VertexCoverInstance};

/// Independent generator for `(seed, name)`.
pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a over the name, mixed with the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h.rotate_left(17))
}

/// Each possible (edge, step) label is present with probability `density`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, t_max: usize, periodic: bool, density: f64) -> TemporalGraph {
    let mut b = GraphBuilder::new(n, t_max, periodic);
    for u in 0..n {
        for v in u + 1..n {
            for t in 1..=t_max {
                if rng.gen_bool(density) {
                    b.add_label(u, v, t).expect("fresh label");
                }
            }
        }
    }
    b.build().expect("valid by construction")
}

#[derive(Debug, Clone, Copy)]
pub struct RandomSpec {
    pub max_n: usize,
    pub max_t: usize,
    pub max_delta: u32,
    pub max_budget: usize,
    pub periodic: bool,
}

/// Graph with 2..=max_n vertices, 1..=max_t steps and a random density,
/// source 0, MaxSpread objective.
pub fn random_instance<R: Rng>(rng: &mut R, spec: RandomSpec) -> ProblemInstance {
    let n = rng.gen_range(2..=spec.max_n.max(2));
    let t_max = rng.gen_range(1..=spec.max_t.max(1));
    let delta = rng.gen_range(1..=spec.max_delta.max(1));
    let budget = rng.gen_range(0..=spec.max_budget);
    let density = rng.gen_range(0.05..0.45);
    let g = random_graph(rng, n, t_max, spec.periodic, density);
    ProblemInstance::new(g, 0, delta, budget, Objective::MaxSpread).expect("valid by construction")
}

/// Random SetCover with `1..=max_n` elements and `1..=max_m` nonempty sets.
pub fn random_setcover<R: Rng>(rng: &mut R, max_n: usize, max_m: usize) -> SetCoverInstance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let mut sets = Vec::with_capacity(m);
    for _ in 0..m {
        let size = rng.gen_range(1..=n.min(4));
        let mut elems: Vec<usize> = (1..=n).collect();
        elems.shuffle(rng);
        sets.push(elems[..size].to_vec());
    }
    let b = rng.gen_range(1..=m);
    SetCoverInstance::new(n, sets, b).expect("valid by construction")
}

/// Random graph with maximum degree 3 on `1..=max_n` vertices.
pub fn random_vertexcover<R: Rng>(rng: &mut R, max_n: usize, max_m: usize) -> VertexCoverInstance {
    let n = rng.gen_range(1..=max_n);
    let mut pairs: Vec<(usize, usize)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut deg = vec![0; n + 1];
    let mut edges = Vec::new();
    let want = rng.gen_range(0..=max_m);
    for (u, v) in pairs {
        if edges.len() == want {
            break;
        }
        if deg[u] < 3 && deg[v] < 3 {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    let ell = rng.gen_range(0..=n);
    VertexCoverInstance::new(n, edges, ell).expect("valid by construction")
}
