//! Approximation-guarantee curves.
//!
//! * `f(eps)`: recoverable ratio certified for one level when the residual
//!   graph has a bipartition with a `1 - eps` fraction of good weight.
//! * `f_prev(eps) = 1 - 2 sqrt(eps)`: the earlier per-level bound.
//! * `F(eps) = int_0^1 max(1/2, f(eps/r)) dr`: good-weight fraction certified
//!   for the whole recursion.
//! * `G(eps) = F(eps) / (1 - eps)`: the resulting approximation ratio, whose
//!   minimum over `[0, 1/2]` is about 0.614247.
//! * `H(eps)`: the earlier end-to-end ratio, with minimum about 0.531.
//!
//! `eps0`, where `f` switches branch, is computed by root finding; the
//! location and value of the minimum of `G` by golden-section search.

use std::io::Write;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of Gauss–Legendre panels per smooth piece in [`f_integral`].
pub const DEFAULT_PANELS: usize = 8;

const GL_ORDER: usize = 20;
const THIRD: f64 = 1.0 / 3.0;

fn check_domain(name: &'static str, eps: f64) -> Result<()> {
    if (0.0..=0.5).contains(&eps) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { name, value: eps, lo: 0.0, hi: 0.5 })
    }
}

/// Branch of `f` used for `eps >= eps0`, valid for every `eps` in `[0, 1/2]`.
pub fn f_high(eps: f64) -> f64 {
    (-1.0 + (4.0 * eps * eps - 8.0 * eps + 5.0).sqrt()) / (2.0 * (1.0 - eps))
}

/// Branch of `f` used for `eps <= eps0`.
pub fn f_low(eps: f64) -> f64 {
    1.0 / (1.0 + 2.0 * (eps * (1.0 - eps)).sqrt())
}

pub fn f(eps: f64) -> Result<f64> {
    check_domain("eps", eps)?;
    Ok(f_unchecked(eps))
}

fn f_unchecked(eps: f64) -> f64 {
    if eps >= epsilon0() {
        f_high(eps)
    } else {
        f_low(eps)
    }
}

pub fn f_prev(eps: f64) -> Result<f64> {
    check_domain("eps", eps)?;
    Ok(1.0 - 2.0 * eps.sqrt())
}

/// The `beta` in `[0, 1/2]` with `beta + 2 (1 - eps) beta (1 - beta) = 1/2`.
pub fn beta0(eps: f64) -> Result<f64> {
    check_domain("eps", eps)?;
    Ok(beta0_unchecked(eps))
}

fn beta0_unchecked(eps: f64) -> f64 {
    (3.0 - 2.0 * eps - (4.0 * eps * eps - 8.0 * eps + 5.0).sqrt()) / (4.0 * (1.0 - eps))
}

/// Maximizer of [`beta_bound`] over `beta <= 1/2`.
pub fn beta_star(eps: f64) -> Result<f64> {
    check_domain("eps", eps)?;
    Ok(beta_star_unchecked(eps))
}

fn beta_star_unchecked(eps: f64) -> f64 {
    0.5 - 0.5 * (eps / (1.0 - eps)).sqrt()
}

/// Recoverable ratio certified by choosing `beta` in the second argument,
/// `(1 - 2 beta) / (2 (1 - beta) (1 - 2 (1 - eps) beta))`.
pub fn beta_bound(beta: f64, eps: f64) -> f64 {
    (1.0 - 2.0 * beta) / (2.0 * (1.0 - beta) * (1.0 - 2.0 * (1.0 - eps) * beta))
}

/// Root of `beta0(eps) = beta_star(eps)` by bisection on `[0.1, 0.3]`.
///
/// The two branches of `f` touch at this point without crossing, so their
/// difference is useless for bracketing; `beta0 - beta_star` changes sign.
pub fn find_epsilon0(tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let gap = |e: f64| beta0_unchecked(e) - beta_star_unchecked(e);
    let (mut lo, mut hi) = (0.1_f64, 0.3_f64);
    debug_assert!(gap(lo) < 0.0 && gap(hi) > 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `eps0`, computed once to machine precision.
pub fn epsilon0() -> f64 {
    static EPS0: OnceLock<f64> = OnceLock::new();
    *EPS0.get_or_init(|| find_epsilon0(1e-16).expect("positive tolerance"))
}

/// Integrand of `F`: `max(1/2, f(eps/r))` for `r` in `(0, 1]`.
fn integrand(eps: f64, r: f64) -> f64 {
    let u = eps / r;
    if u >= THIRD {
        0.5
    } else {
        f_unchecked(u).max(0.5)
    }
}

/// `F(eps)` by composite Gauss–Legendre quadrature.
///
/// The interval is split where the integrand is not smooth: at `r = 3 eps`
/// (below which it is constantly 1/2) and at `r = eps / eps0` (branch switch
/// of `f`). Each remaining piece is integrated in `s = ln r`, which removes
/// the `sqrt` behaviour of `f` near zero, using `panels` panels of a 20-point
/// rule.
pub fn f_integral(eps: f64, panels: usize) -> Result<f64> {
    check_domain("eps", eps)?;
    if panels == 0 {
        return Err(Error::InvalidParameter("panels must be positive".into()));
    }
    if eps == 0.0 {
        return Ok(1.0);
    }
    if eps >= THIRD {
        return Ok(0.5);
    }
    let switch = (eps / epsilon0()).min(1.0);
    let start = 3.0 * eps;
    let mut total = 0.5 * start;
    for (a, b) in [(start, switch), (switch, 1.0)] {
        if b > a {
            total += integrate_log(|r| integrand(eps, r), a, b, panels);
        }
    }
    Ok(total)
}

/// `int_a^b h(r) dr = int_{ln a}^{ln b} h(e^s) e^s ds` with `0 < a < b`.
fn integrate_log(h: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let (sa, sb) = (a.ln(), b.ln());
    let width = (sb - sa) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = sa + width * p as f64;
        let mid = lo + 0.5 * width;
        for (x, w) in nodes.iter().zip(weights) {
            let r = (mid + 0.5 * width * x).exp();
            sum += w * h(r) * r;
        }
    }
    0.5 * width * sum
}

/// Nodes and weights of the `GL_ORDER`-point Gauss–Legendre rule on [-1, 1].
fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            // Chebyshev initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// `G(eps) = F(eps) / (1 - eps)` in closed form, with `G(0) = 1`.
pub fn g_closed(eps: f64) -> Result<f64> {
    check_domain("eps", eps)?;
    if eps == 0.0 {
        return Ok(1.0);
    }
    let e0 = epsilon0();
    let sqrt5 = 5.0_f64.sqrt();
    let q = |e: f64| (4.0 * e * e - 8.0 * e + 5.0).sqrt();
    let lead = 1.0 / (2.0 * (1.0 - eps));

    if eps >= THIRD {
        return Ok(lead);
    }
    if eps >= e0 {
        let qe = q(eps);
        let body = eps - 1.0 + qe - eps * ((1.0 + qe) / (8.0 * eps)).ln()
            + sqrt5 / 5.0
                * eps
                * ((5.0 - 4.0 * eps + (5.0 * qe * qe).sqrt()) / ((11.0 + 5.0 * sqrt5) * eps)).ln();
        return Ok(lead * body);
    }

    let q0 = q(e0);
    let root = (e0 * (1.0 - e0)).sqrt();
    let (se, s1e) = (eps.sqrt(), (1.0 - eps).sqrt());
    let body = eps * (1.0 - 3.0 / e0) + 2.0 + eps / e0 * q0 - eps * ((1.0 + q0) / (8.0 * e0)).ln()
        + sqrt5 / 5.0
            * eps
            * ((5.0 - 4.0 * e0 + (5.0 * q0 * q0).sqrt()) / ((11.0 + 5.0 * sqrt5) * e0)).ln()
        + 16.0 * eps * ((se + s1e) / (se + (eps / e0 - eps).sqrt())).ln()
        + 8.0 * eps * (root + 1.0 - 2.0 * e0) / (e0 + root)
        - 8.0 * se * ((eps * (1.0 - eps)).sqrt() + 1.0 - 2.0 * eps) / (se + s1e);
    Ok(lead * body)
}

/// `G` through quadrature, for cross-checking [`g_closed`].
pub fn g_integral(eps: f64, panels: usize) -> Result<f64> {
    Ok(f_integral(eps, panels)? / (1.0 - eps))
}

/// The earlier end-to-end guarantee.
pub fn h_prev(eps: f64) -> Result<f64> {
    check_domain("eps", eps)?;
    Ok(if eps <= 1.0 / 16.0 {
        (1.0 - 4.0 * eps.sqrt() + 8.0 * eps) / (1.0 - eps)
    } else {
        1.0 / (2.0 * (1.0 - eps))
    })
}

/// Golden-section search for the minimum of a unimodal function on `[lo, hi]`.
pub fn golden_section_min(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut hc, mut hd) = (h(c), h(d));
    while hi - lo > tol {
        if hc < hd {
            hi = d;
            d = c;
            hd = hc;
            c = hi - inv_phi * (hi - lo);
            hc = h(c);
        } else {
            lo = c;
            c = d;
            hc = hd;
            d = lo + inv_phi * (hi - lo);
            hd = h(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, h(x))
}

/// Location and value of the minimum of [`g_closed`] on `[1e-6, 1/2]`.
pub fn minimize_g(tol: f64) -> Result<(f64, f64)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    Ok(golden_section_min(
        |e| g_closed(e).expect("search stays in domain"),
        1e-6,
        0.5,
        tol,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuaranteeConstants {
    pub epsilon0: f64,
    pub epsilon_star: f64,
    pub g_min: f64,
}

/// Constants reproduced by this module, computed once.
pub fn constants() -> GuaranteeConstants {
    static CONSTANTS: OnceLock<GuaranteeConstants> = OnceLock::new();
    *CONSTANTS.get_or_init(|| {
        let (epsilon_star, g_min) = minimize_g(1e-10).expect("positive tolerance");
        GuaranteeConstants {
            epsilon0: epsilon0(),
            epsilon_star,
            g_min,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub eps: f64,
    pub f: f64,
    pub f_prev: f64,
    #[serde(rename = "F")]
    pub big_f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

/// All curves on a uniform grid of `grid_size` points over `[0, 1/2]`.
pub fn curve_table(grid_size: usize) -> Result<Vec<CurveRow>> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid size {grid_size} must be at least 2"
        )));
    }
    (0..grid_size)
        .map(|k| {
            let eps = if k + 1 == grid_size {
                0.5
            } else {
                0.5 * k as f64 / (grid_size - 1) as f64
            };
            Ok(CurveRow {
                eps,
                f: f(eps)?,
                f_prev: f_prev(eps)?,
                big_f: f_integral(eps, DEFAULT_PANELS)?,
                g: g_closed(eps)?,
                h: h_prev(eps)?,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "eps,f,f_prev,F,G,H";

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{:.15},{:.15},{:.15},{:.15},{:.15},{:.15}",
            r.eps, r.f, r.f_prev, r.big_f, r.g, r.h
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn f_values() {
        assert_eq!(f(0.0).unwrap(), 1.0);
        assert!(close(f(THIRD).unwrap(), 0.5, 1e-12));
        assert!(close(f(0.5).unwrap(), 2.0_f64.sqrt() - 1.0, 1e-15));
        assert!(f(-0.1).is_err());
        assert!(f(0.6).is_err());
    }

    #[test]
    fn f_prev_values() {
        assert_eq!(f_prev(0.0).unwrap(), 1.0);
        assert_eq!(f_prev(1.0 / 16.0).unwrap(), 0.5);
        assert_eq!(f_prev(0.25).unwrap(), 0.0);
        assert!(f_prev(0.51).is_err());
    }

    #[test]
    fn beta_values() {
        assert!(close(beta0(0.0).unwrap(), (3.0 - 5.0_f64.sqrt()) / 4.0, 1e-15));
        assert_eq!(beta_star(0.0).unwrap(), 0.5);
        let e0 = epsilon0();
        assert!(close(beta0(e0).unwrap(), beta_star(e0).unwrap(), 1e-8));
        assert!(beta0(0.7).is_err());
    }

    #[test]
    fn beta_identities() {
        for k in 0..=500 {
            let eps = 0.5 * k as f64 / 500.0;
            let b0 = beta0(eps).unwrap();
            assert!((0.0..=0.5).contains(&b0));
            assert!(close(b0 + 2.0 * (1.0 - eps) * b0 * (1.0 - b0), 0.5, 1e-12));
            let bs = beta_star(eps).unwrap();
            assert!((0.0..=0.5).contains(&bs));
            if eps > 0.0 && eps < 0.5 {
                assert!(close(beta_bound(bs, eps), f_low(eps), 1e-12), "eps = {eps}");
            }
        }
    }

    #[test]
    fn epsilon0_root() {
        let e0 = find_epsilon0(1e-10).unwrap();
        assert!(close(e0, 0.228155, 1e-5));
        // Tangency: the branches agree at the root and f_high <= f_low elsewhere.
        assert!(close(f_high(e0), f_low(e0), 1e-10));
        for k in 1..100 {
            let e = 0.5 * k as f64 / 100.0;
            assert!(f_high(e) <= f_low(e) + 1e-15);
        }
        let gap = |e: f64| beta0_unchecked(e) - beta_star_unchecked(e);
        assert!(gap(0.1) < 0.0 && gap(0.3) > 0.0);
        assert!(find_epsilon0(0.0).is_err());
    }

    #[test]
    fn gauss_legendre_rule_is_exact_for_polynomials() {
        let (nodes, weights) = gauss_legendre();
        assert!(close(weights.iter().sum::<f64>(), 2.0, 1e-14));
        for degree in [2, 10, 38] {
            let approx: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x.powi(degree)).sum();
            assert!(close(approx, 2.0 / (degree as f64 + 1.0), 1e-14), "degree {degree}");
        }
    }

    #[test]
    fn f_integral_values() {
        assert_eq!(f_integral(0.0, DEFAULT_PANELS).unwrap(), 1.0);
        assert_eq!(f_integral(0.4, DEFAULT_PANELS).unwrap(), 0.5);
        assert_eq!(f_integral(THIRD, DEFAULT_PANELS).unwrap(), 0.5);
        let g = g_integral(0.11089, DEFAULT_PANELS).unwrap();
        assert!(close(g, 0.614247, 1e-6));
        assert!(f_integral(0.1, 0).is_err());
    }

    #[test]
    fn f_integral_converges_in_panels() {
        for eps in [1e-6, 0.01, 0.11089, 0.2, 0.25, 0.3] {
            let coarse = f_integral(eps, DEFAULT_PANELS).unwrap();
            let fine = f_integral(eps, 64).unwrap();
            assert!(close(coarse, fine, 1e-12), "eps = {eps}");
        }
    }

    #[test]
    fn g_closed_values() {
        assert!(close(g_closed(THIRD).unwrap(), 0.75, 1e-12));
        assert!(close(g_closed(0.45).unwrap(), 1.0 / 1.1, 1e-15));
        assert!(close(g_closed(0.11089).unwrap(), 0.614247, 1e-6));
        assert_eq!(g_closed(0.0).unwrap(), 1.0);
        assert!(close(g_closed(1e-12).unwrap(), 1.0, 1e-4));
    }

    #[test]
    fn h_values() {
        assert_eq!(h_prev(0.0).unwrap(), 1.0);
        let below = (1.0 - 4.0 * 0.25 + 8.0 / 16.0) / (15.0 / 16.0);
        assert!(close(h_prev(1.0 / 16.0).unwrap(), 8.0 / 15.0, 1e-15));
        assert!(close(below, 8.0 / 15.0, 1e-15));
    }

    #[test]
    fn minimum_of_g() {
        let (eps_star, g_min) = minimize_g(1e-10).unwrap();
        assert!(close(eps_star, 0.11089, 1e-3));
        assert!(close(g_min, 0.614247, 1e-6));
        assert!(g_min < g_closed(0.05).unwrap());
        assert!(g_min < g_closed(0.3).unwrap());
        let (_, h_min) = golden_section_min(|e| h_prev(e).unwrap(), 0.0, 0.5, 1e-12);
        assert!(g_min > h_min);
    }

    #[test]
    fn g_is_unimodal_on_grid() {
        let g: Vec<f64> = (1..=1000).map(|k| g_closed(0.5 * k as f64 / 1000.0).unwrap()).collect();
        let argmin = (0..g.len()).min_by(|&a, &b| g[a].total_cmp(&g[b])).unwrap();
        assert!(g[..=argmin].windows(2).all(|w| w[1] <= w[0]));
        assert!(g[argmin..].windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn curve_rows() {
        let rows = curve_table(2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], CurveRow { eps: 0.0, f: 1.0, f_prev: 1.0, big_f: 1.0, g: 1.0, h: 1.0 });
        assert_eq!(rows[1].eps, 0.5);
        assert!(curve_table(1).is_err());

        let rows = curve_table(7).unwrap();
        assert!(close(rows[4].eps, THIRD, 1e-15));
        assert!(close(rows[4].f, 0.5, 1e-12));
        assert!(rows.iter().all(|r| r.f >= r.f_prev));

        let mut buf = Vec::new();
        write_curve_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.count(), 7);
    }
}
