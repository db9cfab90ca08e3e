//! Exhaustive MaxCC for small graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeColor};
use crate::guarantee;
use crate::solver::{good_weight, SolveReport};

/// Largest vertex count accepted by [`brute_force`].
pub const MAX_ORACLE_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub opt_value: f64,
    pub witness: Vec<i8>,
    /// `1 - opt / w(E)`, or 0 for a weightless graph.
    pub epsilon: f64,
}

/// Enumerates every bipartition with vertex 0 on `+1` (both colors are
/// invariant under a global sign flip) in Gray-code order, updating the good
/// weight incrementally. The reported optimum is recomputed from the witness.
pub fn brute_force(g: &ColoredGraph) -> Result<OracleResult> {
    let n = g.num_vertices();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge { n, limit: MAX_ORACLE_VERTICES });
    }
    let incidence = g.incidence();
    let edges = g.edges();
    let mut y = vec![1_i8; n];
    let mut value = good_weight(g, &y)?;
    let mut best_value = value;
    let mut best_mask: u64 = 0;

    let free = n - 1;
    let mut gray: u64 = 0;
    for step in 1..(1_u64 << free) {
        // Bit that differs between gray(step - 1) and gray(step).
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let v = bit + 1;
        for &ei in &incidence[v] {
            let e = &edges[ei];
            let was_good = is_good(e.color, y[e.u], y[e.v]);
            value += if was_good { -e.weight } else { e.weight };
        }
        y[v] = -y[v];
        if value > best_value {
            best_value = value;
            best_mask = gray;
        }
    }

    let witness: Vec<i8> = (0..n)
        .map(|v| if v > 0 && best_mask >> (v - 1) & 1 == 1 { -1 } else { 1 })
        .collect();
    let opt_value = good_weight(g, &witness)?;
    let total = g.total_weight();
    let epsilon = if total > 0.0 {
        (1.0 - opt_value / total).clamp(0.0, 0.5)
    } else {
        0.0
    };
    Ok(OracleResult { opt_value, witness, epsilon })
}

#[inline]
fn is_good(color: EdgeColor, a: i8, b: i8) -> bool {
    match color {
        EdgeColor::Red => a != b,
        EdgeColor::Blue => a == b,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub opt_value: f64,
    pub alg_value: f64,
    pub total_weight: f64,
    pub epsilon: f64,
    /// `F(epsilon)`, the certified good-weight fraction.
    pub integral_bound: f64,
    /// `alg / opt`, 1 when `opt = 0`.
    pub ratio: f64,
    /// `alg >= F(eps) w(E) - tol`
    pub meets_integral_bound: bool,
    /// `alg / opt >= g_min - tol`
    pub meets_ratio_bound: bool,
    /// `alg >= w(E)/2 - tol`
    pub meets_half: bool,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.meets_integral_bound && self.meets_ratio_bound && self.meets_half
    }
}

/// Checks a solver report against the exact optimum. `tol` is absolute for
/// the weight comparisons and for the ratio comparison.
pub fn verify_report(g: &ColoredGraph, report: &SolveReport, tol: f64) -> Result<Verdict> {
    let oracle = brute_force(g)?;
    let total = g.total_weight();
    let alg = report.good_weight;
    let integral_bound = guarantee::f_integral(oracle.epsilon, guarantee::DEFAULT_PANELS)?;
    let ratio = if oracle.opt_value > 0.0 { alg / oracle.opt_value } else { 1.0 };
    Ok(Verdict {
        opt_value: oracle.opt_value,
        alg_value: alg,
        total_weight: total,
        epsilon: oracle.epsilon,
        integral_bound,
        ratio,
        meets_integral_bound: alg >= integral_bound * total - tol,
        meets_ratio_bound: ratio >= guarantee::constants().g_min - tol,
        meets_half: alg >= 0.5 * total - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorParams, Model, WeightDist};
    use crate::solver::{solve, SolveParams};

    /// Straight enumeration of all 2^n sign vectors.
    fn naive_opt(g: &ColoredGraph) -> f64 {
        let n = g.num_vertices();
        (0..1_u32 << n)
            .map(|mask| {
                let y: Vec<i8> = (0..n).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect();
                good_weight(g, &y).unwrap()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn triangle_and_cycle() {
        let k3 = generate(&GeneratorParams::new(Model::Complete, 3), 0).unwrap();
        let r = brute_force(&k3).unwrap();
        assert_eq!(r.opt_value, 2.0);
        assert!((r.epsilon - 1.0 / 3.0).abs() < 1e-15);

        let c5 = generate(&GeneratorParams::new(Model::Cycle, 5), 0).unwrap();
        let r = brute_force(&c5).unwrap();
        assert_eq!(r.opt_value, 4.0);
        assert!((r.epsilon - 0.2).abs() < 1e-15);
        assert_eq!(good_weight(&c5, &r.witness).unwrap(), 4.0);
    }

    #[test]
    fn all_blue_is_all_plus() {
        let g = generate(
            &GeneratorParams::new(Model::Gnp, 8).with_p(0.5).with_red_fraction(0.0),
            2,
        )
        .unwrap();
        let r = brute_force(&g).unwrap();
        assert_eq!(r.opt_value, g.total_weight());
        assert_eq!(r.witness, vec![1; 8]);
        assert_eq!(r.epsilon, 0.0);
    }

    #[test]
    fn single_vertex_and_edgeless() {
        let r = brute_force(&ColoredGraph::build(1, []).unwrap()).unwrap();
        assert_eq!((r.opt_value, r.epsilon), (0.0, 0.0));
        assert_eq!(r.witness, vec![1]);
    }

    #[test]
    fn refuses_large_graphs() {
        let g = ColoredGraph::build(25, []).unwrap();
        assert_eq!(brute_force(&g), Err(Error::TooLarge { n: 25, limit: 24 }));
    }

    #[test]
    fn gray_code_matches_naive_enumeration() {
        for seed in 0..40 {
            let g = generate(
                &GeneratorParams::new(Model::Gnp, 9)
                    .with_p(0.5)
                    .with_red_fraction(0.6)
                    .with_weights(WeightDist::Uniform),
                seed,
            )
            .unwrap();
            let r = brute_force(&g).unwrap();
            assert!((r.opt_value - naive_opt(&g)).abs() < 1e-12, "seed {seed}");
            assert_eq!(r.witness[0], 1);
            assert!(r.opt_value >= 0.5 * g.total_weight());
        }
    }

    #[test]
    fn sign_symmetry() {
        let g = generate(
            &GeneratorParams::new(Model::Gnp, 10).with_p(0.4).with_red_fraction(0.5),
            7,
        )
        .unwrap();
        let r = brute_force(&g).unwrap();
        let flipped: Vec<i8> = r.witness.iter().map(|s| -s).collect();
        assert_eq!(good_weight(&g, &flipped).unwrap(), r.opt_value);
    }

    #[test]
    fn verify_small_cases() {
        for (model, n) in [(Model::Complete, 2), (Model::Cycle, 5), (Model::Complete, 3)] {
            let g = generate(&GeneratorParams::new(model, n), 0).unwrap();
            let report = solve(&g, &SolveParams::default()).unwrap();
            let v = verify_report(&g, &report, 1e-9).unwrap();
            assert!(v.passed(), "{model:?} {n}: {v:?}");
            assert!(v.ratio >= 0.614247 - 1e-9);
        }
    }
}
