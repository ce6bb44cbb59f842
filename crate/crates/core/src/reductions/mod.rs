//! Instance generators from SetCover / VertexCover inputs. Each generated
//! instance carries a certificate (expected answer, target, and a witness
//! schedule built from a known cover) so solvers can be checked end to end.

mod periodic;
mod trees;
mod window;

pub mod fixtures;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::graph::{parse_graph, TemporalGraph};
use crate::instance::{DynamicsKind, Objective, ProblemInstance, ScheduleConstraint, TransmissionSchedule};

pub use periodic::gen_periodic_path;
pub use trees::{gen_minnonviral_tree, gen_spread_tree, gen_viral_tree};
pub use window::{gen_window_star, WindowRegime};

/// Largest vertex count a generator will produce.
pub const MAX_GENERATED_VERTICES: usize = 1 << 16;
/// Largest universe / vertex count the exact cover oracles accept.
pub const COVER_ORACLE_CAP: usize = 20;

/// Universe `1..=n`, sets `S_1..S_m`, cover budget `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverInstance {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
    pub b: usize,
}

impl SetCoverInstance {
    pub fn new(n: usize, mut sets: Vec<Vec<usize>>, b: usize) -> Result<Self> {
        for (j, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::InvalidInstance(format!("set {} is empty", j + 1)));
            }
            if s[0] == 0 || *s.last().unwrap() > n {
                return Err(Error::InvalidInstance(format!("set {} not within 1..={n}", j + 1)));
            }
        }
        Ok(SetCoverInstance { n, sets, b })
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn contains(&self, j: usize, i: usize) -> bool {
        self.sets[j - 1].binary_search(&i).is_ok()
    }

    /// `sc <n> <m> <b>` followed by one line of elements per set.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let h = header(ln, head, "sc")?;
        let (n, m, b) = (h[0], h[1], h[2]);
        let mut sets = Vec::with_capacity(m);
        for (ln, line) in lines {
            if sets.len() == m {
                return Err(parse_err(ln, format!("more than {m} set lines")));
            }
            let s = ints(ln, line)?;
            if s.is_empty() || s.iter().any(|&e| e == 0 || e > n) {
                return Err(parse_err(ln, format!("set must be nonempty within 1..={n}")));
            }
            sets.push(s);
        }
        if sets.len() != m {
            return Err(parse_err(text.lines().count().max(1), format!("expected {m} sets, found {}", sets.len())));
        }
        Self::new(n, sets, b)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sc {} {} {}\n", self.n, self.m(), self.b);
        for s in &self.sets {
            let parts: Vec<String> = s.iter().map(|e| e.to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Static graph on `1..=n` with cover budget `ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCoverInstance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub ell: usize,
}

impl VertexCoverInstance {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, ell: usize) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &edges {
            if u == 0 || v == 0 || u > n || v > n || u == v {
                return Err(Error::InvalidInstance(format!("bad edge ({u},{v}) for vertices 1..={n}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(VertexCoverInstance { n, edges, ell })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `vc <n> <m> <ell>` followed by one `u v` line per edge.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text);
        let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let h = header(ln, head, "vc")?;
        let (n, m, ell) = (h[0], h[1], h[2]);
        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            let e = ints(ln, line)?;
            if e.len() != 2 {
                return Err(parse_err(ln, "edge line needs `u v`"));
            }
            if e[0] == 0 || e[1] == 0 || e[0] > n || e[1] > n || e[0] == e[1] {
                return Err(parse_err(ln, format!("bad edge ({},{}) for vertices 1..={n}", e[0], e[1])));
            }
            edges.push((e[0], e[1]));
        }
        if edges.len() != m {
            return Err(parse_err(text.lines().count().max(1), format!("expected {m} edges, found {}", edges.len())));
        }
        Self::new(n, edges, ell)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vc {} {} {}\n", self.n, self.edges.len(), self.ell);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn ints(ln: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|s| s.parse().map_err(|_| parse_err(ln, format!("bad integer `{s}`"))))
        .collect()
}

fn header(ln: usize, line: &str, magic: &str) -> Result<Vec<usize>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != magic {
        return Err(parse_err(ln, format!("expected `{magic} <a> <b> <c>` header")));
    }
    ints(ln, &toks[1..].join(" "))
}

/// Minimum cover (1-based set indices), lexicographically first among the
/// smallest; `None` if the sets do not cover the universe.
pub fn solve_setcover_exact(sc: &SetCoverInstance) -> Result<Option<Vec<usize>>> {
    if sc.n > COVER_ORACLE_CAP {
        return Err(Error::SizeCap(format!("universe {} above {COVER_ORACLE_CAP}", sc.n)));
    }
    let full: u32 = if sc.n == 0 { 0 } else { (1u32 << sc.n) - 1 };
    let masks: Vec<u32> = sc
        .sets
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &e| m | 1 << (e - 1)))
        .collect();
    if masks.iter().fold(0, |a, m| a | m) != full {
        return Ok(None);
    }
    for r in 0..=masks.len() {
        let mut found = None;
        for_each_combination(masks.len(), r, &mut |c| {
            if c.iter().fold(0, |a, &j| a | masks[j]) == full {
                found = Some(c.iter().map(|j| j + 1).collect());
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    unreachable!("the union covers the universe")
}

/// Minimum vertex cover (1-based vertices), lexicographically first among
/// the smallest.
pub fn solve_vertexcover_exact(vc: &VertexCoverInstance) -> Result<Vec<usize>> {
    if vc.n > COVER_ORACLE_CAP {
        return Err(Error::SizeCap(format!("{} vertices above {COVER_ORACLE_CAP}", vc.n)));
    }
    for r in 0..=vc.n {
        let mut found = None;
        for_each_combination(vc.n, r, &mut |c| {
            let inside = |v: usize| c.contains(&(v - 1));
            if vc.edges.iter().all(|&(u, v)| inside(u) || inside(v)) {
                found = Some(c.iter().map(|v| v + 1).collect());
                true
            } else {
                false
            }
        });
        if let Some(f) = found {
            return Ok(f);
        }
    }
    unreachable!("all vertices form a cover")
}

/// Calls `f` on each `r`-subset of `0..n` in lexicographic order until it
/// returns true.
fn for_each_combination(n: usize, r: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        if f(&c) {
            return;
        }
        let mut i = r;
        while i > 0 && c[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        c[i - 1] += 1;
        for k in i..r {
            c[k] = c[k - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub reduction: String,
    /// Whether the source problem has a cover within budget.
    pub answer: bool,
    /// Target value, counted over non-source vertices.
    pub target_k: usize,
    /// Schedule derived from a cover; present for yes-instances.
    pub witness: Option<TransmissionSchedule>,
    /// Synchronisation step for the viral constructions.
    pub checkpoint: Option<usize>,
    /// Minimum cover of the (padded) source instance, 1-based.
    pub cover: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub problem: ProblemInstance,
    /// Display name per vertex id; padding vertices end in `*`.
    pub names: Vec<String>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Sidecar {
    schema: u32,
    reduction: String,
    source: usize,
    delta: u32,
    budget: usize,
    objective: Objective,
    constraint: ScheduleConstraint,
    answer: bool,
    target_k: usize,
    witness: Option<TransmissionSchedule>,
    checkpoint: Option<usize>,
    cover: Option<Vec<usize>>,
    names: Vec<String>,
}

impl GeneratedInstance {
    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same graph with the objective switched to the checkpoint variant.
    pub fn tstep_variant(&self) -> Option<GeneratedInstance> {
        let t_star = self.certificate.checkpoint?;
        let mut g = self.clone();
        g.problem.objective = Objective::MaxViralTstep { t_star };
        Some(g)
    }

    pub fn to_sidecar_json(&self) -> String {
        let c = &self.certificate;
        let p = &self.problem;
        let s = Sidecar {
            schema: 1,
            reduction: c.reduction.clone(),
            source: p.source,
            delta: p.delta,
            budget: p.budget,
            objective: p.objective,
            constraint: p.constraint,
            answer: c.answer,
            target_k: c.target_k,
            witness: c.witness.clone(),
            checkpoint: c.checkpoint,
            cover: c.cover.clone(),
            names: self.names.clone(),
        };
        serde_json::to_string_pretty(&s).expect("plain data serializes")
    }

    pub fn from_files(tgft: &str, sidecar_json: &str) -> Result<Self> {
        let graph = parse_graph(tgft)?;
        let s: Sidecar = serde_json::from_str(sidecar_json)
            .map_err(|e| Error::InvalidInstance(format!("certificate sidecar: {e}")))?;
        let problem = ProblemInstance {
            graph,
            source: s.source,
            delta: s.delta,
            budget: s.budget,
            target: s.target_k,
            objective: s.objective,
            constraint: s.constraint,
            dynamics: DynamicsKind::Renewal,
        };
        problem.validate()?;
        Ok(GeneratedInstance {
            problem,
            names: s.names,
            certificate: Certificate {
                reduction: s.reduction,
                answer: s.answer,
                target_k: s.target_k,
                witness: s.witness,
                checkpoint: s.checkpoint,
                cover: s.cover,
            },
        })
    }
}

/// Pads the universe with fresh elements gathered in one extra set, and
/// raises the budget by one when padding happened.
fn pad_universe(sc: &SetCoverInstance, n_target: usize) -> (SetCoverInstance, usize) {
    if n_target == sc.n {
        return (sc.clone(), 0);
    }
    let mut sets = sc.sets.clone();
    sets.push((sc.n + 1..=n_target).collect());
    (
        SetCoverInstance {
            n: n_target,
            sets,
            b: sc.b + 1,
        },
        n_target - sc.n,
    )
}

fn check_size(vertices: usize) -> Result<()> {
    if vertices > MAX_GENERATED_VERTICES {
        return Err(Error::SizeCap(format!(
            "{vertices} vertices above generator cap {MAX_GENERATED_VERTICES}"
        )));
    }
    Ok(())
}

fn build_problem(
    graph: TemporalGraph,
    delta: u32,
    budget: usize,
    target: usize,
    objective: Objective,
    constraint: ScheduleConstraint,
) -> Result<ProblemInstance> {
    let p = ProblemInstance {
        graph,
        source: 0,
        delta,
        budget,
        target,
        objective,
        constraint,
        dynamics: DynamicsKind::Renewal,
    };
    p.validate()?;
    Ok(p)
}

/// Level of heap-layout node `i` (root at level 1).
fn level(i: usize) -> usize {
    (usize::BITS - (i + 1).leading_zeros()) as usize
}
