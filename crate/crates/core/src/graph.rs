//! Temporal graphs and the TGF-T text format.
//!
//! ```text
//! tgf 1
//! <n> <t_max> [periodic]
//! e <u> <v> <t1> <t2> ...
//! # comment
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};

/// One undirected edge together with every time step it is present at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledEdge {
    pub u: usize,
    pub v: usize,
    pub labels: Vec<usize>,
}

/// Immutable temporal graph on vertices `0..n` with edge sets `E_1..E_{t_max}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: usize,
    t_max: usize,
    periodic: bool,
    edge_sets: Vec<Vec<(u32, u32)>>,
    edges: Vec<LabeledEdge>,
    incident: Vec<Vec<(u32, u32)>>,
}

#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    t_max: usize,
    periodic: bool,
    labels: BTreeMap<(usize, usize), BTreeSet<usize>>,
}

impl GraphBuilder {
    pub fn new(n: usize, t_max: usize, periodic: bool) -> Self {
        GraphBuilder {
            n,
            t_max,
            periodic,
            labels: BTreeMap::new(),
        }
    }

    pub fn add_label(&mut self, u: usize, v: usize, t: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "endpoint of edge ({u},{v}) out of range 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if t == 0 || t > self.t_max {
            return Err(Error::InvalidGraph(format!(
                "label {t} on edge ({u},{v}) outside [1, {}]",
                self.t_max
            )));
        }
        let key = (u.min(v), u.max(v));
        if !self.labels.entry(key).or_default().insert(t) {
            return Err(Error::InvalidGraph(format!(
                "duplicate label {t} on edge ({},{})",
                key.0, key.1
            )));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize, labels: &[usize]) -> Result<()> {
        for &t in labels {
            self.add_label(u, v, t)?;
        }
        Ok(())
    }

    /// Adds every label in `range` that is not already present.
    pub fn add_labels_from(&mut self, u: usize, v: usize, range: impl IntoIterator<Item = usize>) -> Result<()> {
        for t in range {
            let key = (u.min(v), u.max(v));
            if self.labels.get(&key).is_some_and(|s| s.contains(&t)) {
                continue;
            }
            self.add_label(u, v, t)?;
        }
        Ok(())
    }

    pub fn build(self) -> Result<TemporalGraph> {
        if self.t_max == 0 {
            return Err(Error::InvalidGraph("t_max must be at least 1".into()));
        }
        let edges = self
            .labels
            .into_iter()
            .filter(|(_, ls)| !ls.is_empty())
            .map(|((u, v), ls)| LabeledEdge {
                u,
                v,
                labels: ls.into_iter().collect(),
            })
            .collect();
        Ok(TemporalGraph::assemble(self.n, self.t_max, self.periodic, edges))
    }
}

impl TemporalGraph {
    pub fn builder(n: usize, t_max: usize, periodic: bool) -> GraphBuilder {
        GraphBuilder::new(n, t_max, periodic)
    }

    /// Builds from explicit per-step edge lists; `sets[t-1]` is `E_t`.
    pub fn from_edge_sets(n: usize, periodic: bool, sets: &[Vec<(usize, usize)>]) -> Result<Self> {
        let mut b = GraphBuilder::new(n, sets.len(), periodic);
        for (i, es) in sets.iter().enumerate() {
            for &(u, v) in es {
                b.add_label(u, v, i + 1)?;
            }
        }
        b.build()
    }

    fn assemble(n: usize, t_max: usize, periodic: bool, edges: Vec<LabeledEdge>) -> Self {
        let mut edge_sets = vec![Vec::new(); t_max];
        let mut incident = vec![Vec::new(); n];
        for e in &edges {
            for &t in &e.labels {
                edge_sets[t - 1].push((e.u as u32, e.v as u32));
                incident[e.u].push((e.v as u32, t as u32));
                incident[e.v].push((e.u as u32, t as u32));
            }
        }
        for es in &mut edge_sets {
            es.sort_unstable();
        }
        for inc in &mut incident {
            inc.sort_unstable_by_key(|&(w, t)| (t, w));
        }
        TemporalGraph {
            n,
            t_max,
            periodic,
            edge_sets,
            edges,
            incident,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Edge set live at step `t` (1-indexed). Periodic graphs repeat with
    /// period `t_max`; non-periodic graphs have no edges outside `[1, t_max]`.
    #[inline]
    pub fn edges_at(&self, t: usize) -> &[(u32, u32)] {
        if t == 0 {
            return &[];
        }
        if self.periodic {
            &self.edge_sets[(t - 1) % self.t_max]
        } else if t <= self.t_max {
            &self.edge_sets[t - 1]
        } else {
            &[]
        }
    }

    pub fn labeled_edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    /// `(neighbour, label)` pairs at `v`, sorted by label.
    pub fn incident(&self, v: usize) -> &[(u32, u32)] {
        &self.incident[v]
    }

    pub fn num_labels(&self) -> usize {
        self.edges.iter().map(|e| e.labels.len()).sum()
    }

    pub fn underlying_graph(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn degree_in_underlying(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    /// Copy of a periodic graph spelled out as a non-periodic graph with
    /// the given lifetime.
    pub fn unrolled(&self, lifetime: usize) -> TemporalGraph {
        let mut edge_sets = vec![Vec::new(); lifetime];
        for (t, es) in edge_sets.iter_mut().enumerate() {
            *es = self
                .edges_at(t + 1)
                .iter()
                .map(|&(u, v)| (u as usize, v as usize))
                .collect();
        }
        TemporalGraph::from_edge_sets(self.n, false, &edge_sets).expect("unrolling a valid graph")
    }
}

pub fn parse_graph(text: &str) -> Result<TemporalGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, magic) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let magic: Vec<&str> = magic.split_whitespace().collect();
    if magic != ["tgf", "1"] {
        return Err(parse_err(ln, "expected header `tgf 1`"));
    }
    let (ln, dims) = lines
        .next()
        .ok_or_else(|| parse_err(ln + 1, "missing `<n> <t_max> [periodic]` line"))?;
    let dims: Vec<&str> = dims.split_whitespace().collect();
    let periodic = match dims.as_slice() {
        [_, _] => false,
        [_, _, "periodic"] => true,
        _ => return Err(parse_err(ln, "expected `<n> <t_max> [periodic]`")),
    };
    let n: usize = dims[0]
        .parse()
        .map_err(|_| parse_err(ln, format!("bad vertex count `{}`", dims[0])))?;
    let t_max: usize = dims[1]
        .parse()
        .map_err(|_| parse_err(ln, format!("bad lifetime `{}`", dims[1])))?;
    if t_max == 0 {
        return Err(parse_err(ln, "t_max must be at least 1"));
    }

    let mut b = GraphBuilder::new(n, t_max, periodic);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] != "e" {
            return Err(parse_err(ln, format!("unknown record `{}`", toks[0])));
        }
        if toks.len() < 4 {
            return Err(parse_err(ln, "edge line needs `e <u> <v> <t1> ...`"));
        }
        let nums: Vec<usize> = toks[1..]
            .iter()
            .map(|s| s.parse::<usize>().map_err(|_| parse_err(ln, format!("bad integer `{s}`"))))
            .collect::<Result<_>>()?;
        for &t in &nums[2..] {
            b.add_label(nums[0], nums[1], t).map_err(|e| match e {
                Error::InvalidGraph(m) => parse_err(ln, m),
                other => other,
            })?;
        }
    }
    b.build()
}

/// Canonical text: one line per edge with ascending labels, lines ordered
/// by (first label, smaller endpoint, larger endpoint).
pub fn serialize_graph(g: &TemporalGraph) -> String {
    let mut out = String::new();
    out.push_str("tgf 1\n");
    let _ = writeln!(
        out,
        "{} {}{}",
        g.n,
        g.t_max,
        if g.periodic { " periodic" } else { "" }
    );
    let mut edges: Vec<&LabeledEdge> = g.edges.iter().collect();
    edges.sort_by_key(|e| (e.labels[0], e.u, e.v));
    for e in edges {
        let _ = write!(out, "e {} {}", e.u, e.v);
        for t in &e.labels {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    out
}
