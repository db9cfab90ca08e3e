//! Quadratic forms of `M` and `D`, and the leading vector of the relaxation
//! `max x^T M x / x^T D x`.
//!
//! For a red edge `{i,j}` of weight `w`, `M` contributes `w (x_i - x_j)^2`; for
//! a blue edge it contributes `w (x_i + x_j)^2`. `D` contributes
//! `w (x_i^2 + x_j^2)` for either color. Neither matrix is materialized: every
//! product streams over the edge list.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeColor};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForms {
    /// `x^T M x`
    pub m_form: f64,
    /// `x^T D x`
    pub d_form: f64,
}

impl QuadraticForms {
    /// `x^T M x / x^T D x`, or `None` when `x^T D x = 0`.
    pub fn rayleigh(&self) -> Option<f64> {
        (self.d_form > 0.0).then(|| self.m_form / self.d_form)
    }
}

pub fn quadratic_forms(g: &ColoredGraph, x: &[f64]) -> Result<QuadraticForms> {
    if x.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            got: x.len(),
        });
    }
    let mut m_form = 0.0;
    let mut d_form = 0.0;
    for e in g.edges() {
        let (a, b) = (x[e.u], x[e.v]);
        let s = match e.color {
            EdgeColor::Red => a - b,
            EdgeColor::Blue => a + b,
        };
        m_form += e.weight * s * s;
        d_form += e.weight * (a * a + b * b);
    }
    Ok(QuadraticForms { m_form, d_form })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenParams {
    pub tol: f64,
    /// `None` selects `10 n ln n + 1000`.
    pub max_iter: Option<usize>,
    pub seed: u64,
}

impl Default for EigenParams {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: None,
            seed: 0,
        }
    }
}

pub fn default_max_iter(n: usize) -> usize {
    let n = n as f64;
    (10.0 * n * n.max(1.0).ln()).ceil() as usize + 1000
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    /// Relaxation vector scaled to `max |x_i| = 1`; zero on isolated vertices.
    pub x: Vec<f64>,
    /// `x^T M x / x^T D x`, in `[0, 2]`.
    pub rho: f64,
    /// `1 - rho / 2` clamped to `[0, 1/2]`.
    pub epsilon: f64,
    pub iterations: usize,
    /// `||A v - rho v||` for the normalized operator at the returned iterate.
    pub residual: f64,
    pub converged: bool,
}

/// Power iteration on `A = D^{-1/2} M D^{-1/2}` restricted to vertices of
/// positive weighted degree.
///
/// `A` is positive semidefinite, so the Rayleigh quotient of successive
/// iterates never decreases.
pub struct PowerIteration<'g> {
    graph: &'g ColoredGraph,
    /// `1 / sqrt(deg)` on active vertices, 0 on isolated ones.
    inv_sqrt_deg: Vec<f64>,
    v: Vec<f64>,
    scratch: Vec<f64>,
    av: Vec<f64>,
    rho: f64,
    residual: f64,
    iterations: usize,
}

impl<'g> PowerIteration<'g> {
    pub fn new(graph: &'g ColoredGraph, seed: u64) -> Result<Self> {
        if !graph.has_positive_weight() {
            return Err(Error::NoPositiveWeight);
        }
        let n = graph.num_vertices();
        let inv_sqrt_deg: Vec<f64> = graph
            .weighted_degrees()
            .into_iter()
            .map(|d| if d > 0.0 { d.sqrt().recip() } else { 0.0 })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<f64> = inv_sqrt_deg
            .iter()
            .map(|&s| if s > 0.0 { rng.gen_range(-1.0..1.0) } else { 0.0 })
            .collect();
        if normalize(&mut v) == 0.0 {
            // Astronomically unlikely; any active coordinate works.
            let i = inv_sqrt_deg.iter().position(|&s| s > 0.0).unwrap_or(0);
            v[i] = 1.0;
        }

        let mut it = Self {
            graph,
            inv_sqrt_deg,
            v,
            scratch: vec![0.0; n],
            av: vec![0.0; n],
            rho: 0.0,
            residual: f64::INFINITY,
            iterations: 0,
        };
        it.evaluate();
        Ok(it)
    }

    /// Computes `A v`, the Rayleigh quotient and the residual of the current
    /// unit vector `v`.
    fn evaluate(&mut self) {
        for ((s, &v), &d) in self.scratch.iter_mut().zip(&self.v).zip(&self.inv_sqrt_deg) {
            *s = v * d;
        }
        self.av.iter_mut().for_each(|a| *a = 0.0);
        for e in self.graph.edges() {
            let (a, b) = (self.scratch[e.u], self.scratch[e.v]);
            match e.color {
                EdgeColor::Red => {
                    let t = e.weight * (a - b);
                    self.av[e.u] += t;
                    self.av[e.v] -= t;
                }
                EdgeColor::Blue => {
                    let t = e.weight * (a + b);
                    self.av[e.u] += t;
                    self.av[e.v] += t;
                }
            }
        }
        for (a, &d) in self.av.iter_mut().zip(&self.inv_sqrt_deg) {
            *a *= d;
        }
        self.rho = dot(&self.v, &self.av);
        self.residual = self
            .av
            .iter()
            .zip(&self.v)
            .map(|(a, v)| (a - self.rho * v).powi(2))
            .sum::<f64>()
            .sqrt();
    }

    /// Replaces `v` by `A v / ||A v||`. Returns the new Rayleigh quotient.
    pub fn step(&mut self) -> f64 {
        let norm = dot(&self.av, &self.av).sqrt();
        if norm > 0.0 {
            self.v.iter_mut().zip(&self.av).for_each(|(v, a)| *v = a / norm);
            self.evaluate();
        }
        self.iterations += 1;
        self.rho
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// The current iterate mapped back to `x = D^{-1/2} v`.
    pub fn relaxation_vector(&self) -> Vec<f64> {
        self.v.iter().zip(&self.inv_sqrt_deg).map(|(v, d)| v * d).collect()
    }
}

/// Leading vector of the generalized problem `M x = rho D x`.
///
/// Stops once the relative change of the Rayleigh quotient and the operator
/// residual are both below `tol`. Hitting `max_iter` is not an error; the
/// result then has `converged == false` and carries the last residual.
pub fn leading_relaxation_vector(g: &ColoredGraph, params: &EigenParams) -> Result<SpectralResult> {
    if params.tol.is_nan() || params.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eigen tolerance {} must be positive",
            params.tol
        )));
    }
    let max_iter = params
        .max_iter
        .unwrap_or_else(|| default_max_iter(g.num_vertices()));
    let mut power = PowerIteration::new(g, params.seed)?;

    let mut converged = false;
    while power.iterations() < max_iter {
        let previous = power.rho();
        let rho = power.step();
        let change = (rho - previous).abs() / rho.abs().max(f64::MIN_POSITIVE);
        if change < params.tol && power.residual() < params.tol {
            converged = true;
            break;
        }
    }

    let mut x = power.relaxation_vector();
    scale_to_unit_max(&mut x);
    let forms = quadratic_forms(g, &x)?;
    let rho = forms.rayleigh().unwrap_or(0.0).clamp(0.0, 2.0);
    Ok(SpectralResult {
        x,
        rho,
        epsilon: (1.0 - rho / 2.0).clamp(0.0, 0.5),
        iterations: power.iterations(),
        residual: power.residual(),
        converged,
    })
}

/// Scales `x` so that its largest-magnitude entry is exactly `+1` (the first
/// such entry, when several tie).
fn scale_to_unit_max(x: &mut [f64]) {
    let mut pivot = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[pivot].abs() {
            pivot = i;
        }
    }
    let scale = x[pivot];
    if scale != 0.0 {
        x.iter_mut().for_each(|v| *v /= scale);
        x[pivot] = 1.0;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorParams, Model, WeightDist};
    use EdgeColor::{Blue, Red};

    fn k2(color: EdgeColor) -> ColoredGraph {
        ColoredGraph::build(2, [(0, 1, 1.0, color)]).unwrap()
    }

    #[test]
    fn forms_on_small_cases() {
        let f = quadratic_forms(&k2(Red), &[1.0, -1.0]).unwrap();
        assert_eq!((f.m_form, f.d_form), (4.0, 2.0));
        let f = quadratic_forms(&k2(Blue), &[1.0, 1.0]).unwrap();
        assert_eq!((f.m_form, f.d_form), (4.0, 2.0));
        let c5 = generate(&GeneratorParams::new(Model::Cycle, 5), 0).unwrap();
        let f = quadratic_forms(&c5, &[1.0; 5]).unwrap();
        assert_eq!((f.m_form, f.d_form), (0.0, 10.0));
    }

    #[test]
    fn forms_dimension_mismatch() {
        assert_eq!(
            quadratic_forms(&k2(Red), &[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn k2_eigenvectors() {
        for (color, sign) in [(Red, -1.0), (Blue, 1.0)] {
            let r = leading_relaxation_vector(&k2(color), &EigenParams::default()).unwrap();
            assert!((r.rho - 2.0).abs() < 1e-9, "{color:?}: rho = {}", r.rho);
            assert_eq!(r.epsilon, 0.0);
            assert_eq!(r.x[0], 1.0);
            assert!((r.x[1] - sign).abs() < 1e-9);
        }
    }

    #[test]
    fn c5_top_eigenvalue() {
        let c5 = generate(&GeneratorParams::new(Model::Cycle, 5), 0).unwrap();
        let r = leading_relaxation_vector(&c5, &EigenParams::default()).unwrap();
        let expected = 1.0 + (std::f64::consts::PI / 5.0).cos();
        assert!((r.rho - expected).abs() < 1e-9);
        assert!((r.epsilon - (1.0 - expected / 2.0)).abs() < 1e-9);
        assert!(r.converged);
    }

    #[test]
    fn isolated_vertices_get_zero() {
        let g = ColoredGraph::build(4, [(0, 2, 1.0, Red), (1, 3, 0.0, Blue)]).unwrap();
        let r = leading_relaxation_vector(&g, &EigenParams::default()).unwrap();
        assert_eq!(r.x[1], 0.0);
        assert_eq!(r.x[3], 0.0);
        assert!((r.rho - 2.0).abs() < 1e-9);
    }

    #[test]
    fn edgeless_graph_is_rejected() {
        let g = ColoredGraph::build(3, [(0, 1, 0.0, Red)]).unwrap();
        assert_eq!(
            leading_relaxation_vector(&g, &EigenParams::default()),
            Err(Error::NoPositiveWeight)
        );
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let g = generate(
            &GeneratorParams::new(Model::Gnp, 40)
                .with_p(0.2)
                .with_red_fraction(0.5)
                .with_weights(WeightDist::Uniform),
            9,
        )
        .unwrap();
        let params = EigenParams { max_iter: Some(2), ..EigenParams::default() };
        let r = leading_relaxation_vector(&g, &params).unwrap();
        assert_eq!(r.iterations, 2);
        assert!(!r.converged);
        assert!(r.residual.is_finite());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let g = generate(
            &GeneratorParams::new(Model::Gnp, 30).with_p(0.3).with_red_fraction(0.7),
            1,
        )
        .unwrap();
        let params = EigenParams { seed: 5, ..EigenParams::default() };
        let a = leading_relaxation_vector(&g, &params).unwrap();
        let b = leading_relaxation_vector(&g, &params).unwrap();
        assert_eq!(a, b);
    }
}
