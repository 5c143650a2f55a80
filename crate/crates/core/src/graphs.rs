//! Weighted undirected graphs: the input to every construction.
//!
//! Edge weights are exact rationals. The random walk matrix follows the
//! column-stochastic convention `W = M D^{-1}`; spectra are computed on the
//! similar symmetric matrix `D^{-1/2} M D^{-1/2}`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{self, Rational};

/// Number of pairing-model attempts before `random_regular` gives up.
pub const RANDOM_REGULAR_RETRIES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    /// Per vertex: (neighbor, edge index).
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    /// Builds a simple graph with positive weights. Endpoints are normalized
    /// so that `u < v`. Connectivity is not required here; see
    /// [`WeightedGraph::require_connected`].
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, Rational)>) -> Result<Self> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for (line, (a, b, weight)) in edges.into_iter().enumerate() {
            let line = line + 1;
            if a >= n || b >= n {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex id out of range for {n} vertices"),
                });
            }
            if a == b {
                return Err(Error::SelfLoop { line, vertex: a });
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge { line, u, v });
            }
            if !rational::is_positive(&weight) {
                return Err(Error::NonPositiveWeight { u, v, weight: weight.to_string() });
            }
            let idx = out.len();
            adjacency[u].push((v, idx));
            adjacency[v].push((u, idx));
            out.push(Edge { u, v, weight });
        }
        Ok(WeightedGraph { n, edges: out, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `u` with the index of the connecting edge.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adjacency[u]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency
            .get(a)?
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, idx)| idx)
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<&Rational> {
        self.edge_index(a, b).map(|idx| &self.edges[idx].weight)
    }

    pub fn weighted_degree(&self, u: usize) -> Rational {
        self.adjacency[u]
            .iter()
            .fold(Rational::zero(), |acc, &(_, idx)| acc + &self.edges[idx].weight)
    }

    pub fn has_unit_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_one())
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut components = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn require_connected(self) -> Result<Self> {
        match self.component_count() {
            1 => Ok(self),
            components => Err(Error::Disconnected { components }),
        }
    }

    /// Multiplies every edge weight by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        WeightedGraph::new(
            self.n,
            self.edges.iter().map(|e| (e.u, e.v, &e.weight * factor)),
        )
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let degrees: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let weighted: Vec<f64> = (0..self.n)
            .map(|u| rational::to_f64(&self.weighted_degree(u)))
            .collect();
        let fold = |xs: &[f64]| {
            xs.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
        };
        let (min_weighted, max_weighted) = fold(&weighted);
        DegreeStats {
            min_degree: degrees.iter().copied().min().unwrap_or(0),
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            min_weighted_degree: min_weighted,
            max_weighted_degree: max_weighted,
        }
    }

    /// `W_G = M_G D_G^{-1}`; columns sum to one.
    pub fn random_walk_matrix(&self) -> DMatrix<f64> {
        let degrees: Vec<f64> = (0..self.n)
            .map(|u| rational::to_f64(&self.weighted_degree(u)))
            .collect();
        let mut w = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            let x = rational::to_f64(&e.weight);
            w[(e.u, e.v)] = x / degrees[e.v];
            w[(e.v, e.u)] = x / degrees[e.u];
        }
        w
    }

    /// `D^{-1/2} M D^{-1/2}`, similar to the random walk matrix.
    pub fn normalized_adjacency(&self) -> Result<DMatrix<f64>> {
        let mut inv_sqrt = Vec::with_capacity(self.n);
        for u in 0..self.n {
            let d = rational::to_f64(&self.weighted_degree(u));
            if d <= 0.0 {
                return Err(Error::InvalidParameter(format!("vertex {u} has zero degree")));
            }
            inv_sqrt.push(1.0 / d.sqrt());
        }
        let mut s = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            let x = rational::to_f64(&e.weight) * inv_sqrt[e.u] * inv_sqrt[e.v];
            s[(e.u, e.v)] = x;
            s[(e.v, e.u)] = x;
        }
        Ok(s)
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            if e.weight.is_one() {
                out.push_str(&format!("{} {}\n", e.u, e.v));
            } else {
                out.push_str(&format!("{} {} {}\n", e.u, e.v, rational::format(&e.weight)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeStats {
    pub min_degree: usize,
    pub max_degree: usize,
    pub min_weighted_degree: f64,
    pub max_weighted_degree: f64,
}

/// Parses the edge-list format: `u v [w]` per line, `#` comments, weight
/// given as an integer, decimal or `p/q`, defaulting to 1. The vertex count
/// is one more than the largest id, and the graph must be connected.
pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    let mut max_id = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected `u v [w]`, found {} fields", fields.len()),
            });
        }
        let id = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid vertex id `{s}`"),
            })
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let weight = match fields.get(2) {
            Some(w) => rational::parse(w).ok_or_else(|| Error::Parse {
                line,
                message: format!("invalid weight `{w}`"),
            })?,
            None => Rational::one(),
        };
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        edges.push((u, v, weight));
        lines.push(line);
    }
    let n = max_id.map_or(0, |m| m + 1);
    // Re-map positional error lines back to file lines.
    let graph = WeightedGraph::new(n, edges).map_err(|err| match err {
        Error::SelfLoop { line, vertex } => Error::SelfLoop { line: lines[line - 1], vertex },
        Error::DuplicateEdge { line, u, v } => Error::DuplicateEdge { line: lines[line - 1], u, v },
        other => other,
    })?;
    if n == 0 {
        return Err(Error::Parse { line: 0, message: "no edges".into() });
    }
    graph.require_connected()
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    Cycle,
    Complete,
    RandomRegular,
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(GraphKind::Cycle),
            "complete" => Ok(GraphKind::Complete),
            "random-regular" | "random_regular" => Ok(GraphKind::RandomRegular),
            other => Err(Error::InvalidParameter(format!("unknown graph kind `{other}`"))),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Cycle => "cycle",
            GraphKind::Complete => "complete",
            GraphKind::RandomRegular => "random-regular",
        })
    }
}

/// Deterministic unit-weight generators. `degree` is only read for
/// `RandomRegular`; `seed` fixes its output.
pub fn gen_graph(kind: GraphKind, n: usize, degree: Option<usize>, seed: u64) -> Result<WeightedGraph> {
    let unit = |pairs: Vec<(usize, usize)>| {
        WeightedGraph::new(n, pairs.into_iter().map(|(u, v)| (u, v, Rational::one())))
    };
    match kind {
        GraphKind::Cycle => {
            if n < 3 {
                return Err(Error::Infeasible(format!("cycle needs n >= 3, got {n}")));
            }
            unit((0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        GraphKind::Complete => {
            if n < 2 {
                return Err(Error::Infeasible(format!("complete graph needs n >= 2, got {n}")));
            }
            unit((0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect())
        }
        GraphKind::RandomRegular => {
            let d = degree.ok_or_else(|| Error::Infeasible("random-regular needs a degree".into()))?;
            random_regular(n, d, seed)
        }
    }
}

fn random_regular(n: usize, d: usize, seed: u64) -> Result<WeightedGraph> {
    if n < 3 || d == 0 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::Infeasible(format!(
            "random-regular needs n >= 3, 0 < d < n and n*d even (n={n}, d={d})"
        )));
    }
    if d == 1 {
        return Err(Error::Infeasible("a 1-regular graph on n >= 3 vertices is disconnected".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat_n(u, d)).collect();
    'attempt: for _ in 0..RANDOM_REGULAR_RETRIES {
        stubs.shuffle(&mut rng);
        let mut seen = HashSet::new();
        let mut pairs = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            pairs.push((u, v));
        }
        pairs.sort_unstable();
        let graph = WeightedGraph::new(n, pairs.into_iter().map(|(u, v)| (u, v, Rational::one())))?;
        if graph.is_connected() {
            return Ok(graph);
        }
    }
    Err(Error::Infeasible(format!(
        "no connected simple {d}-regular graph on {n} vertices after {RANDOM_REGULAR_RETRIES} attempts"
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphSpectrum {
    /// Eigenvalues of `W_G`, descending.
    pub eigenvalues: Vec<f64>,
    /// `1 - omega_2`.
    pub gap: f64,
}

impl GraphSpectrum {
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Self {
        let gap = 1.0 - eigenvalues.get(1).copied().unwrap_or(f64::NAN);
        GraphSpectrum { eigenvalues, gap }
    }

    pub fn omega2(&self) -> f64 {
        self.eigenvalues[1]
    }

    pub fn omega_min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

pub fn graph_spectrum(g: &WeightedGraph) -> Result<GraphSpectrum> {
    graph_spectrum_capped(g, linalg::DEFAULT_EIGEN_CAP)
}

pub fn graph_spectrum_capped(g: &WeightedGraph, cap: usize) -> Result<GraphSpectrum> {
    let s = g.normalized_adjacency()?;
    Ok(GraphSpectrum::from_eigenvalues(linalg::symmetric_eigenvalues(s, cap)?))
}
