//! Colored weighted graphs, the `mcc` text format, and instance generators.
//!
//! Vertices are `0..n` internally. The text format is 1-indexed:
//!
//! ```text
//! c optional comment
//! p mcc <n> <m>
//! e <u> <v> <weight> <r|b>
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeColor {
    Red,
    Blue,
}

impl EdgeColor {
    pub fn code(self) -> char {
        match self {
            EdgeColor::Red => 'r',
            EdgeColor::Blue => 'b',
        }
    }
}

impl FromStr for EdgeColor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "r" | "R" | "red" => Ok(EdgeColor::Red),
            "b" | "B" | "blue" => Ok(EdgeColor::Blue),
            other => Err(format!("unknown edge color {other:?} (expected r or b)")),
        }
    }
}

/// An edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub color: EdgeColor,
}

impl Edge {
    /// The endpoint of this edge that is not `x`.
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    fn key(&self) -> (usize, usize, EdgeColor) {
        (self.u, self.v, self.color)
    }
}

/// An immutable instance of Maximum Colored Cut.
///
/// Edges are stored in canonical order `(min endpoint, max endpoint, color)`
/// with parallel edges of the same color merged. A red and a blue edge may
/// share the same pair of endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl ColoredGraph {
    /// Validates and canonicalizes a raw edge list.
    pub fn build<I>(n: usize, raw_edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64, EdgeColor)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges = Vec::new();
        for (u, v, weight, color) in raw_edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::InvalidWeight { u, v, weight });
            }
            edges.push(Edge {
                u: u.min(v),
                v: u.max(v),
                weight,
                color,
            });
        }
        edges.sort_by_key(Edge::key);

        let mut merged: Vec<Edge> = Vec::with_capacity(edges.len());
        for e in edges {
            match merged.last_mut() {
                Some(last) if last.key() == e.key() => last.weight += e.weight,
                _ => merged.push(e),
            }
        }
        Ok(Self { n, edges: merged })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `w(E)`.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn has_positive_weight(&self) -> bool {
        self.edges.iter().any(|e| e.weight > 0.0)
    }

    /// Weighted degree of every vertex, i.e. the diagonal of `D`.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.u] += e.weight;
            deg[e.v] += e.weight;
        }
        deg
    }

    /// Incident edge indices per vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (k, e) in self.edges.iter().enumerate() {
            inc[e.u].push(k);
            inc[e.v].push(k);
        }
        inc
    }

    /// The subgraph `E[s]`, relabelled to `0..|s|`, plus the map from new ids
    /// back to ids of `self` (`mapping[new] = old`).
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(ColoredGraph, Vec<usize>)> {
        if s.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        if let Some(&last) = s.as_slice().last() {
            if last >= self.n {
                return Err(Error::VertexOutOfRange { vertex: last, n: self.n });
            }
        }
        let mut new_id = vec![usize::MAX; self.n];
        for (k, &v) in s.as_slice().iter().enumerate() {
            new_id[v] = k;
        }
        // Relabelling is monotone, so canonical order is preserved.
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.u] != usize::MAX && new_id[e.v] != usize::MAX)
            .map(|e| Edge {
                u: new_id[e.u],
                v: new_id[e.v],
                ..*e
            })
            .collect();
        Ok((
            ColoredGraph { n: s.len(), edges },
            s.as_slice().to_vec(),
        ))
    }

    /// Parses the `mcc` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut raw = Vec::new();
        let mut edge_lines = Vec::new();

        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let mut tokens = line.split_whitespace();
            let Some(tag) = tokens.next() else { continue };
            match tag {
                "c" => continue,
                "p" => {
                    if header.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    let fields: Vec<&str> = tokens.collect();
                    if fields.len() != 3 || fields[0] != "mcc" {
                        return Err(err("expected `p mcc <n> <m>`".into()));
                    }
                    let n = fields[1]
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad vertex count {:?}", fields[1])))?;
                    let m = fields[2]
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad edge count {:?}", fields[2])))?;
                    if n == 0 {
                        return Err(err("vertex count must be at least 1".into()));
                    }
                    header = Some((n, m));
                }
                "e" => {
                    let Some((n, _)) = header else {
                        return Err(err("edge line before header".into()));
                    };
                    let fields: Vec<&str> = tokens.collect();
                    if fields.len() != 4 {
                        return Err(err("expected `e <u> <v> <weight> <r|b>`".into()));
                    }
                    let endpoint = |s: &str| -> Result<usize> {
                        let id = s
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad vertex id {s:?}")))?;
                        if id == 0 || id > n {
                            return Err(err(format!("vertex {id} out of range 1..={n}")));
                        }
                        Ok(id - 1)
                    };
                    let u = endpoint(fields[0])?;
                    let v = endpoint(fields[1])?;
                    let weight = fields[2]
                        .parse::<f64>()
                        .map_err(|_| err(format!("bad weight {:?}", fields[2])))?;
                    if !weight.is_finite() || weight < 0.0 {
                        return Err(err(format!("weight {weight} must be finite and nonnegative")));
                    }
                    if u == v {
                        return Err(err(format!("self-loop on vertex {}", u + 1)));
                    }
                    let color = fields[3].parse::<EdgeColor>().map_err(err)?;
                    raw.push((u, v, weight, color));
                    edge_lines.push(line_no);
                }
                other => return Err(err(format!("unknown line type {other:?}"))),
            }
        }

        let Some((n, m)) = header else {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: "missing `p mcc` header".into(),
            });
        };
        if raw.len() != m {
            return Err(Error::Parse {
                line: edge_lines.last().copied().unwrap_or(1),
                message: format!("header declares {m} edges, found {}", raw.len()),
            });
        }
        Self::build(n, raw)
    }

    /// Writes the canonical `mcc` text. Weights use the shortest decimal
    /// representation that round-trips.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(16 * (self.edges.len() + 1));
        let _ = writeln!(out, "p mcc {} {}", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {:?} {}", e.u + 1, e.v + 1, e.weight, e.color.code());
        }
        out
    }
}

/// Sorted set of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut ids: Vec<usize>) -> Result<Self> {
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(Self(ids))
    }

    pub fn all(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Erdős–Rényi G(n, p).
    Gnp,
    Cycle,
    Complete,
    /// Random bipartite graph between the first `ceil(n/2)` and the remaining
    /// vertices, each cross pair present with probability `p`.
    Bipartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WeightDist {
    /// Every edge has weight 1.
    #[default]
    Unit,
    /// Weights drawn uniformly from (0, 1].
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub model: Model,
    pub n: usize,
    /// Edge probability; ignored by `cycle` and `complete`.
    pub p: f64,
    pub red_fraction: f64,
    pub weights: WeightDist,
}

impl GeneratorParams {
    pub fn new(model: Model, n: usize) -> Self {
        Self {
            model,
            n,
            p: 1.0,
            red_fraction: 1.0,
            weights: WeightDist::Unit,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_red_fraction(mut self, red_fraction: f64) -> Self {
        self.red_fraction = red_fraction;
        self
    }

    pub fn with_weights(mut self, weights: WeightDist) -> Self {
        self.weights = weights;
        self
    }
}

/// Generates an instance; identical `(params, seed)` give identical graphs.
pub fn generate(params: &GeneratorParams, seed: u64) -> Result<ColoredGraph> {
    let GeneratorParams { model, n, p, red_fraction, weights } = *params;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [0, 1]")));
    }
    if !(0.0..=1.0).contains(&red_fraction) {
        return Err(Error::InvalidParameter(format!(
            "red fraction {red_fraction} must lie in [0, 1]"
        )));
    }
    if model == Model::Cycle && n < 3 {
        return Err(Error::InvalidParameter("a cycle needs at least 3 vertices".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    match model {
        Model::Cycle => pairs.extend((0..n).map(|i| (i, (i + 1) % n))),
        Model::Complete => {
            for u in 0..n {
                pairs.extend((u + 1..n).map(|v| (u, v)));
            }
        }
        Model::Gnp => {
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        pairs.push((u, v));
                    }
                }
            }
        }
        Model::Bipartite => {
            let left = n.div_ceil(2);
            for u in 0..left {
                for v in left..n {
                    if rng.gen_bool(p) {
                        pairs.push((u, v));
                    }
                }
            }
        }
    }

    let raw: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| {
            let color = if rng.gen_bool(red_fraction) {
                EdgeColor::Red
            } else {
                EdgeColor::Blue
            };
            let weight = match weights {
                WeightDist::Unit => 1.0,
                // gen() is in [0, 1); flip it into (0, 1].
                WeightDist::Uniform => 1.0 - rng.gen::<f64>(),
            };
            (u, v, weight, color)
        })
        .collect();
    ColoredGraph::build(n, raw)
}
