//! The recursive spectral algorithm.
//!
//! At each level the residual graph is split by the best threshold of its
//! leading relaxation vector. If the recoverable ratio of that split is below
//! 1/2 the whole residual graph is finished with a half cut. Otherwise the
//! decided vertices are fixed, the undecided set `V0` is solved recursively,
//! and the sub-solution is glued back in whichever orientation has more good
//! weight.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeColor, VertexSet};
use crate::rounding::{best_tripartition, PartitionStats};
use crate::spectral::{leading_relaxation_vector, EigenParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum HalfCutStrategy {
    /// Deterministic greedy placement; always at least half the weight.
    #[default]
    Greedy,
    /// Uniformly random sides; half the weight only in expectation.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    pub eig_tol: f64,
    /// `None` selects `10 n ln n + 1000` per level.
    pub eig_max_iter: Option<usize>,
    pub seed: u64,
    /// `None` means the vertex count.
    pub max_depth: Option<usize>,
    pub half_cut: HalfCutStrategy,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            eig_tol: 1e-9,
            eig_max_iter: None,
            seed: 0,
            max_depth: None,
            half_cut: HalfCutStrategy::Greedy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelOutcome {
    /// Split accepted; `V0` was empty or handed to the next level.
    Split,
    /// Recoverable ratio below 1/2: the level was finished by a half cut.
    Fallback,
    /// No positive-weight edge left; every vertex was put on `+1`.
    Edgeless,
    /// Depth limit reached; finished by a half cut.
    DepthLimit,
}

/// One recursion level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub depth: usize,
    pub vertices: usize,
    /// Vertices fixed at this level (`|V+| + |V-|`, or all of them when the
    /// level was finished outright).
    pub decided: usize,
    pub plus: usize,
    pub minus: usize,
    pub weight: f64,
    pub rho: Option<f64>,
    pub eig_iterations: Option<usize>,
    pub eig_residual: Option<f64>,
    pub stats: Option<PartitionStats>,
    pub recoverable_ratio: Option<f64>,
    pub outcome: LevelOutcome,
}

impl LevelRecord {
    pub fn fell_back(&self) -> bool {
        matches!(self.outcome, LevelOutcome::Fallback | LevelOutcome::DepthLimit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// Side of every vertex, `+1` or `-1`.
    pub y: Vec<i8>,
    pub good_weight: f64,
    pub total_weight: f64,
    pub trace: Vec<LevelRecord>,
}

impl SolveReport {
    /// `good_weight / w(E)`, taken as 1 for a graph without weight.
    pub fn ratio(&self) -> f64 {
        if self.total_weight > 0.0 {
            self.good_weight / self.total_weight
        } else {
            1.0
        }
    }
}

fn check_bipartition(g: &ColoredGraph, y: &[i8]) -> Result<()> {
    if y.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: y.len() });
    }
    if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| v.abs() != 1) {
        return Err(Error::NotBipartition { index, value });
    }
    Ok(())
}

/// Weight of red edges cut by `y` plus blue edges left uncut.
pub fn good_weight(g: &ColoredGraph, y: &[i8]) -> Result<f64> {
    check_bipartition(g, y)?;
    Ok(good_weight_unchecked(g, y))
}

fn good_weight_unchecked(g: &ColoredGraph, y: &[i8]) -> f64 {
    g.edges()
        .iter()
        .filter(|e| match e.color {
            EdgeColor::Red => y[e.u] != y[e.v],
            EdgeColor::Blue => y[e.u] == y[e.v],
        })
        .map(|e| e.weight)
        .sum()
}

/// Greedy half cut: vertices are placed in id order on the side that makes
/// more of their edges to already-placed vertices good (ties to `+1`). Every
/// edge is settled at its later endpoint with at least half its weight good,
/// so the result has good weight at least `w(E)/2`.
pub fn half_cut(g: &ColoredGraph) -> Vec<i8> {
    let incidence = g.incidence();
    let mut y = vec![0_i8; g.num_vertices()];
    for v in 0..g.num_vertices() {
        let (mut gain_plus, mut gain_minus) = (0.0, 0.0);
        for &ei in &incidence[v] {
            let e = &g.edges()[ei];
            let side = y[e.other(v)];
            if side == 0 {
                continue;
            }
            // Side of `v` that makes this edge good.
            let good_side = match e.color {
                EdgeColor::Red => -side,
                EdgeColor::Blue => side,
            };
            if good_side == 1 {
                gain_plus += e.weight;
            } else {
                gain_minus += e.weight;
            }
        }
        y[v] = if gain_minus > gain_plus { -1 } else { 1 };
    }
    y
}

/// Uniformly random bipartition; good weight `w(E)/2` in expectation only.
pub fn random_cut(g: &ColoredGraph, seed: u64) -> Vec<i8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.num_vertices())
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect()
}

struct Level {
    /// Decisions for this level's vertices; `0` on `V0`.
    z: Vec<i8>,
    /// Ids in this level's graph of the vertices handed down (`V0`).
    undecided: Vec<usize>,
    graph: ColoredGraph,
}

/// Runs the recursive algorithm on `g`.
pub fn solve(g: &ColoredGraph, params: &SolveParams) -> Result<SolveReport> {
    if params.eig_tol.is_nan() || params.eig_tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eigen tolerance {} must be positive",
            params.eig_tol
        )));
    }
    let max_depth = params.max_depth.unwrap_or(g.num_vertices());
    let mut trace = Vec::new();
    let mut levels: Vec<Level> = Vec::new();
    let mut current = g.clone();

    // Descend.
    let mut leaf: Vec<i8> = loop {
        let depth = levels.len();
        let n = current.num_vertices();
        let weight = current.total_weight();
        let mut record = LevelRecord {
            depth,
            vertices: n,
            decided: n,
            plus: 0,
            minus: 0,
            weight,
            rho: None,
            eig_iterations: None,
            eig_residual: None,
            stats: None,
            recoverable_ratio: None,
            outcome: LevelOutcome::Edgeless,
        };

        if !current.has_positive_weight() {
            record.plus = n;
            trace.push(record);
            break vec![1; n];
        }
        if depth >= max_depth {
            let y = finish_with_half_cut(&current, params, depth);
            record.outcome = LevelOutcome::DepthLimit;
            count_sides(&mut record, &y);
            trace.push(record);
            break y;
        }

        let eig = EigenParams {
            tol: params.eig_tol,
            max_iter: params.eig_max_iter,
            seed: params.seed.wrapping_add(depth as u64),
        };
        let spectral = leading_relaxation_vector(&current, &eig)?;
        let (z, stats) = best_tripartition(&current, &spectral.x)?;
        let ratio = stats.recoverable_ratio();
        record.rho = Some(spectral.rho);
        record.eig_iterations = Some(spectral.iterations);
        record.eig_residual = Some(spectral.residual);
        record.stats = Some(stats);
        record.recoverable_ratio = ratio;

        if ratio.is_none_or(|r| r < 0.5) {
            let y = finish_with_half_cut(&current, params, depth);
            record.outcome = LevelOutcome::Fallback;
            count_sides(&mut record, &y);
            trace.push(record);
            break y;
        }

        record.outcome = LevelOutcome::Split;
        let undecided = z.undecided();
        let z = z.into_inner();
        count_sides(&mut record, &z);
        record.decided = record.plus + record.minus;
        trace.push(record);

        if undecided.is_empty() {
            break z;
        }
        // z != 0 guarantees progress: |V0| < n.
        let (sub, _) = current.induced_subgraph(&VertexSet::new(undecided.clone())?)?;
        levels.push(Level { z, undecided, graph: current });
        current = sub;
    };

    // Ascend, gluing each sub-solution in its better orientation.
    while let Some(level) = levels.pop() {
        let mut keep = level.z.clone();
        let mut flip = level.z;
        for (&v, &side) in level.undecided.iter().zip(&leaf) {
            keep[v] = side;
            flip[v] = -side;
        }
        leaf = if good_weight_unchecked(&level.graph, &flip)
            > good_weight_unchecked(&level.graph, &keep)
        {
            flip
        } else {
            keep
        };
    }

    // Vertices without positive-weight edges never matter; pin them to +1.
    let mut touched = vec![false; g.num_vertices()];
    for e in g.edges().iter().filter(|e| e.weight > 0.0) {
        touched[e.u] = true;
        touched[e.v] = true;
    }
    for (side, &t) in leaf.iter_mut().zip(&touched) {
        if !t {
            *side = 1;
        }
    }

    Ok(SolveReport {
        good_weight: good_weight(g, &leaf)?,
        total_weight: g.total_weight(),
        y: leaf,
        trace,
    })
}

fn finish_with_half_cut(g: &ColoredGraph, params: &SolveParams, depth: usize) -> Vec<i8> {
    match params.half_cut {
        HalfCutStrategy::Greedy => half_cut(g),
        HalfCutStrategy::Random => random_cut(g, params.seed.wrapping_add(depth as u64)),
    }
}

fn count_sides(record: &mut LevelRecord, y: &[i8]) {
    record.plus = y.iter().filter(|&&s| s == 1).count();
    record.minus = y.iter().filter(|&&s| s == -1).count();
}
