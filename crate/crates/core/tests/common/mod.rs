#![allow(dead_code)]

use maxcc::{ColoredGraph, EdgeColor};
use rand::Rng;

/// All vertex pairs `(u, v)` with `u < v` on `n` vertices.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(u, v) in edges {
            let y = if u == x { v } else if v == x { u } else { continue };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative per isomorphism class of connected simple graphs on
/// `n` vertices, as all-red unit-weight instances.
pub fn connected_graphs(n: usize) -> Vec<ColoredGraph> {
    let all_pairs = pairs(n);
    let index = |u: usize, v: usize| all_pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    // Pair index under each permutation.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| all_pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();

    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << all_pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..all_pairs.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| all_pairs[k])
            .collect();
        if !is_connected(n, &edges) {
            continue;
        }
        let canonical = images
            .iter()
            .map(|img| {
                (0..all_pairs.len())
                    .filter(|&k| mask >> k & 1 == 1)
                    .fold(0u32, |m, k| m | 1 << img[k])
            })
            .min()
            .unwrap();
        if seen.insert(canonical) {
            out.push(
                ColoredGraph::build(n, edges.into_iter().map(|(u, v)| (u, v, 1.0, EdgeColor::Red)))
                    .unwrap(),
            );
        }
    }
    out
}

/// Random instance with `2..=n_max` vertices, mixed colors and weights in
/// (0, 1]; always has at least one edge.
pub fn random_instance<R: Rng>(rng: &mut R, n_max: usize) -> ColoredGraph {
    loop {
        let n = rng.gen_range(2..=n_max);
        let p = rng.gen_range(0.2..0.9);
        let red = rng.gen_range(0.0..=1.0);
        let mut edges = Vec::new();
        for (u, v) in pairs(n) {
            if rng.gen_bool(p) {
                let color = if rng.gen_bool(red) { EdgeColor::Red } else { EdgeColor::Blue };
                edges.push((u, v, 1.0 - rng.gen::<f64>(), color));
            }
        }
        if !edges.is_empty() {
            return ColoredGraph::build(n, edges).unwrap();
        }
    }
}

/// Random vector in `[-1, 1]^n` with one entry of magnitude exactly 1.
pub fn random_unit_inf_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let k = rng.gen_range(0..n);
    x[k] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    x
}

/// Dense `D^{-1/2} M D^{-1/2}` over vertices of positive degree, built from
/// `M = Deg(R) - Adj(R) + Deg(B) + Adj(B)` and `D = Deg(R) + Deg(B)`.
pub fn dense_normalized_operator(g: &ColoredGraph) -> nalgebra::DMatrix<f64> {
    let n = g.num_vertices();
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut deg = vec![0.0; n];
    for e in g.edges() {
        let sign = match e.color {
            EdgeColor::Red => -1.0,
            EdgeColor::Blue => 1.0,
        };
        m[(e.u, e.u)] += e.weight;
        m[(e.v, e.v)] += e.weight;
        m[(e.u, e.v)] += sign * e.weight;
        m[(e.v, e.u)] += sign * e.weight;
        deg[e.u] += e.weight;
        deg[e.v] += e.weight;
    }
    let active: Vec<usize> = (0..n).filter(|&i| deg[i] > 0.0).collect();
    nalgebra::DMatrix::from_fn(active.len(), active.len(), |a, b| {
        let (i, j) = (active[a], active[b]);
        m[(i, j)] / (deg[i] * deg[j]).sqrt()
    })
}

pub fn top_eigenvalue(g: &ColoredGraph) -> f64 {
    let a = dense_normalized_operator(g);
    a.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}
