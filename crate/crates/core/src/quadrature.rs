//! Adaptive composite Gauss–Legendre quadrature.
//!
//! Each panel is integrated with a fixed 15-point rule and compared against
//! the sum over its two halves; panels whose difference exceeds their share of
//! the tolerance are bisected, up to [`MAX_DEPTH`] levels. The reported error
//! never drops below a rounding floor of `50 ε ∫|f|`, which keeps the estimate
//! honest for integrands that are polynomials (where the coarse/fine
//! difference is pure rounding noise).

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub const ORDER: usize = 15;
pub const MAX_DEPTH: u32 = 24;
pub const DEFAULT_TOL: f64 = 1e-10;

const ROUNDOFF_FACTOR: f64 = 50.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the Legendre polynomial P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-17 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        // Nudge the central weight until the weights sum to exactly 2 in
        // summation order, so constants integrate without rounding drift.
        for _ in 0..8 {
            let total: f64 = weights.iter().sum();
            if total == 2.0 {
                break;
            }
            weights[n / 2] += 2.0 - total;
        }
        Self { nodes, weights }
    }

    /// Nodes mapped affinely onto [a, b].
    pub fn nodes_on(&self, a: f64, b: f64) -> Vec<f64> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().map(|x| mid + half * x).collect()
    }

    /// Single-panel integral of `f` over [a, b].
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x)?;
        }
        Ok(half * sum)
    }

    fn panel<F>(&self, f: &mut F, a: f64, b: f64, evals: &mut usize) -> Result<(f64, f64)>
    where
        F: FnMut(f64) -> Result<(f64, f64)>,
    {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let (mut sum, mut mag) = (0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let (v, m) = f(mid + half * x)?;
            sum += w * v;
            mag += w * m.abs();
        }
        *evals += self.nodes.len();
        Ok((half * sum, half.abs() * mag))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 15-point rule.
pub fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

/// The 15 Gauss–Legendre nodes of a single panel on [a, b].
pub fn nodes_on(a: f64, b: f64) -> Vec<f64> {
    rule().nodes_on(a, b)
}

/// Integrates `f` over [alpha, beta] to absolute tolerance `tol`.
pub fn integrate<F>(mut f: F, alpha: f64, beta: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_scaled(
        |t| {
            let v = f(t)?;
            Ok((v, v))
        },
        alpha,
        beta,
        tol,
    )
}

/// Like [`integrate`], but the integrand also reports the magnitude of the
/// terms it summed, so cancellation inside the integrand widens the rounding
/// floor of the error estimate.
pub fn integrate_scaled<F>(mut f: F, alpha: f64, beta: f64, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !alpha.is_finite() || !beta.is_finite() || alpha >= beta {
        return Err(Error::Invalid(format!(
            "integration interval [{alpha}, {beta}] must satisfy alpha < beta"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance {tol} must be positive")));
    }

    let gl = rule();
    let mut evals = 0usize;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut exceeded = false;

    struct Panel {
        a: f64,
        b: f64,
        coarse: f64,
        depth: u32,
    }

    let (coarse, _) = gl.panel(&mut f, alpha, beta, &mut evals)?;
    let width = beta - alpha;
    let mut stack = vec![Panel {
        a: alpha,
        b: beta,
        coarse,
        depth: 0,
    }];
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let (left, lmag) = gl.panel(&mut f, p.a, m, &mut evals)?;
        let (right, rmag) = gl.panel(&mut f, m, p.b, &mut evals)?;
        let fine = left + right;
        let diff = (fine - p.coarse).abs();
        let floor = ROUNDOFF_FACTOR * (lmag + rmag);
        let local_tol = tol * (p.b - p.a) / width;
        if diff <= local_tol.max(floor) || p.depth >= MAX_DEPTH {
            if diff > local_tol.max(floor) {
                exceeded = true;
            }
            value += fine;
            error += diff.max(floor);
        } else {
            stack.push(Panel {
                a: m,
                b: p.b,
                coarse: right,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: p.a,
                b: m,
                coarse: left,
                depth: p.depth + 1,
            });
        }
    }

    let result = QuadResult {
        value,
        error_estimate: error,
        nodes_used: evals,
    };
    if exceeded && error > tol {
        return Err(Error::DepthExceeded { result, tol });
    }
    Ok(result)
}
