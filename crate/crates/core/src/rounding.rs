//! Threshold rounding of a relaxation vector into a tripartition.
//!
//! For a threshold `t` in `(0, 1]`, vertex `i` goes to `V+` when
//! `x_i >= sqrt(t)`, to `V-` when `x_i <= -sqrt(t)` and to `V0` otherwise.
//! Equality is decided (sent to `V+` or `V-`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeColor};

/// Relative slack used when comparing recoverable ratios during the sweep.
pub const RATIO_TIE_TOL: f64 = 1e-12;

/// Indicator vector over `{-1, 0, +1}` of `(V-, V0, V+)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Tripartition(Vec<i8>);

impl Tripartition {
    pub fn new(z: Vec<i8>) -> Result<Self> {
        if let Some((index, &value)) = z.iter().enumerate().find(|(_, v)| !(-1..=1).contains(*v)) {
            return Err(Error::InvalidParameter(format!(
                "tripartition entry {index} is {value}, expected -1, 0 or 1"
            )));
        }
        Ok(Self(z))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&z| z == 0)
    }

    fn members(&self, side: i8) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &z)| (z == side).then_some(i))
            .collect()
    }

    pub fn plus(&self) -> Vec<usize> {
        self.members(1)
    }

    pub fn minus(&self) -> Vec<usize> {
        self.members(-1)
    }

    pub fn undecided(&self) -> Vec<usize> {
        self.members(0)
    }
}

/// Weights of the edges classified by a tripartition.
///
/// `good + bad + cross == inc` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PartitionStats {
    pub good: f64,
    pub bad: f64,
    pub cross: f64,
    pub inc: f64,
}

impl PartitionStats {
    /// `(good + cross/2) / inc`, undefined when nothing is incident.
    pub fn recoverable_ratio(&self) -> Option<f64> {
        recoverable_ratio(self)
    }

    /// `good + cross/2`.
    pub fn recoverable_weight(&self) -> f64 {
        self.good + 0.5 * self.cross
    }
}

pub fn recoverable_ratio(s: &PartitionStats) -> Option<f64> {
    (s.inc > 0.0).then(|| (s.good + 0.5 * s.cross) / s.inc)
}

/// Expected edge weights over a uniform threshold `t ~ U[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ExpectedStats {
    pub e_good: f64,
    pub e_bad: f64,
    pub e_cross: f64,
    pub e_inc: f64,
}

/// Probabilities, over a uniform threshold, that an edge ends up cut
/// (`y_i y_j = -1`), uncut (`y_i y_j = +1`), or crossing (exactly one endpoint
/// undecided).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EdgeProbabilities {
    pub cut: f64,
    pub uncut: f64,
    pub cross: f64,
}

/// Closed form for an edge with endpoint values `xi, xj` in `[-1, 1]`.
///
/// Endpoint `k` is decided exactly when `t <= x_k^2`, so with
/// `a = min(x_i^2, x_j^2)` and `b = max(x_i^2, x_j^2)` both are decided with
/// probability `a` and exactly one with probability `b - a`.
pub fn edge_probabilities(xi: f64, xj: f64) -> EdgeProbabilities {
    let (si, sj) = (xi * xi, xj * xj);
    let (a, b) = (si.min(sj), si.max(sj));
    let product = xi * xj;
    if product > 0.0 {
        EdgeProbabilities { cut: 0.0, uncut: a, cross: b - a }
    } else if product < 0.0 {
        EdgeProbabilities { cut: a, uncut: 0.0, cross: b - a }
    } else {
        EdgeProbabilities { cut: 0.0, uncut: 0.0, cross: b }
    }
}

pub fn threshold_round(x: &[f64], t: f64) -> Result<Tripartition> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::OutOfDomain { name: "t", value: t, lo: 0.0, hi: 1.0 });
    }
    let r = t.sqrt();
    Ok(Tripartition(
        x.iter()
            .map(|&v| {
                if v >= r {
                    1
                } else if v <= -r {
                    -1
                } else {
                    0
                }
            })
            .collect(),
    ))
}

pub fn partition_stats(g: &ColoredGraph, z: &Tripartition) -> Result<PartitionStats> {
    let z = z.as_slice();
    if z.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: z.len() });
    }
    let mut s = PartitionStats::default();
    for e in g.edges() {
        let (a, b) = (z[e.u], z[e.v]);
        if a == 0 && b == 0 {
            continue;
        }
        s.inc += e.weight;
        if a == 0 || b == 0 {
            s.cross += e.weight;
            continue;
        }
        let cut = a != b;
        let good = match e.color {
            EdgeColor::Red => cut,
            EdgeColor::Blue => !cut,
        };
        if good {
            s.good += e.weight;
        } else {
            s.bad += e.weight;
        }
    }
    Ok(s)
}

/// Copy of `x` scaled to unit infinity-norm.
pub fn normalize_inf(x: &[f64]) -> Result<Vec<f64>> {
    let max = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !max.is_finite() {
        return Err(Error::NotNormalized(max));
    }
    Ok(x.iter().map(|v| v / max).collect())
}

/// Distinct thresholds `x_i^2` over nonzero entries, largest first.
pub fn thresholds(x: &[f64]) -> Vec<f64> {
    let mut ts: Vec<f64> = x.iter().filter(|v| **v != 0.0).map(|v| v * v).collect();
    ts.sort_by(|a, b| b.total_cmp(a));
    ts.dedup();
    ts
}

/// The tripartition with the best recoverable ratio among all thresholds
/// `t = x_i^2`.
///
/// `x` is rescaled to unit infinity-norm first. Thresholds whose incident
/// weight is zero are skipped. Ties (within [`RATIO_TIE_TOL`]) go to the
/// smaller threshold, i.e. the larger decided set. The returned vector is
/// never zero: the vertex attaining `max |x_i|` is decided at every threshold.
/// When every threshold has zero incident weight, the `t = 1` rounding is
/// returned with all-zero stats.
pub fn best_tripartition(g: &ColoredGraph, x: &[f64]) -> Result<(Tripartition, PartitionStats)> {
    if x.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: x.len() });
    }
    let x = normalize_inf(x)?;

    // Vertices in decreasing |x_i|; each threshold decides a prefix.
    let mut order: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0.0).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));

    let incidence = g.incidence();
    let edges = g.edges();
    let mut z = vec![0_i8; x.len()];
    let mut running = PartitionStats::default();
    let mut best: Option<(f64, usize)> = None; // (ratio, decided prefix length)

    let mut k = 0;
    while k < order.len() {
        let t = x[order[k]] * x[order[k]];
        while k < order.len() && x[order[k]] * x[order[k]] == t {
            let i = order[k];
            z[i] = if x[i] > 0.0 { 1 } else { -1 };
            for &ei in &incidence[i] {
                let e = &edges[ei];
                let other = z[e.other(i)];
                if other == 0 {
                    running.cross += e.weight;
                    running.inc += e.weight;
                } else {
                    running.cross -= e.weight;
                    let cut = other != z[i];
                    let good = match e.color {
                        EdgeColor::Red => cut,
                        EdgeColor::Blue => !cut,
                    };
                    if good {
                        running.good += e.weight;
                    } else {
                        running.bad += e.weight;
                    }
                }
            }
            k += 1;
        }
        if let Some(ratio) = running.recoverable_ratio() {
            let better = match best {
                None => true,
                Some((r, _)) => ratio >= r - RATIO_TIE_TOL * r.abs().max(1.0),
            };
            if better {
                best = Some((ratio, k));
            }
        }
    }

    // Without any usable threshold, keep the t = 1 rounding.
    let prefix = best.map(|(_, k)| k).unwrap_or_else(|| {
        let top = x[order[0]].abs();
        order.iter().take_while(|&&i| x[i].abs() == top).count()
    });
    let mut z = vec![0_i8; x.len()];
    for &i in &order[..prefix] {
        z[i] = if x[i] > 0.0 { 1 } else { -1 };
    }
    let z = Tripartition(z);
    let stats = partition_stats(g, &z)?;
    Ok((z, stats))
}

/// Exact expectations of the tripartition stats over `t ~ U[0, 1]`.
///
/// Requires `max |x_i| = 1`.
pub fn exact_rounding_expectations(g: &ColoredGraph, x: &[f64]) -> Result<ExpectedStats> {
    if x.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch { expected: g.num_vertices(), got: x.len() });
    }
    let max = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if (max - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(max));
    }
    let mut s = ExpectedStats::default();
    for e in g.edges() {
        let p = edge_probabilities(x[e.u], x[e.v]);
        let (good, bad) = match e.color {
            EdgeColor::Red => (p.cut, p.uncut),
            EdgeColor::Blue => (p.uncut, p.cut),
        };
        s.e_good += e.weight * good;
        s.e_bad += e.weight * bad;
        s.e_cross += e.weight * p.cross;
        s.e_inc += e.weight * (p.cut + p.uncut + p.cross);
    }
    Ok(s)
}
