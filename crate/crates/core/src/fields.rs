//! Force fields and parametric curves in the orthonormal Q-basis.
//!
//! A force field is three expressions P, R, S over (x, y, z); a curve is
//! three expressions x(t), y(t), z(t) over [alpha, beta]. Tangents come from
//! dual-number evaluation, so they carry no truncation error.
//!
//! Both objects can be completed to isotropic ones from two components:
//! S = -PR/(P+R) for fields and z' = -x'y'/(x'+y') for curves.

use serde::Serialize;

use crate::algebra::Vec3Q;
use crate::error::{Error, Result};
use crate::expr::{eval, eval_dual, parse, Bindings, DualValue, Expr, Var};
use crate::quadrature;

/// Sample count used to decide that a quantity vanishes identically.
pub const SAMPLE_COUNT: usize = 64;
/// Scale-aware tolerance for "identically zero" and collinearity decisions.
pub const ZERO_TOL: f64 = 1e-9;
/// |x'+y'| below this (times max(1,|x'|,|y'|)) cannot be divided by.
pub const DEGENERATE_TANGENT_TOL: f64 = 1e-12;
/// Absolute tolerance for reconstructing a completed z-coordinate.
const Z_QUAD_TOL: f64 = 1e-13;

const FIELD_VARS: [Var; 3] = [Var::X, Var::Y, Var::Z];

fn check_vars(e: &Expr, allowed: &[Var], role: &str) -> Result<()> {
    match e.variables().into_iter().find(|v| !allowed.contains(v)) {
        Some(v) => Err(Error::UnexpectedVariable(format!(
            "{} (in {role})",
            v.name()
        ))),
        None => Ok(()),
    }
}

/// F = P·i + R·Qi + S·Q²i.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceField {
    p: Expr,
    r: Expr,
    s: Expr,
}

impl ForceField {
    pub fn new(p: Expr, r: Expr, s: Expr) -> Result<Self> {
        check_vars(&p, &FIELD_VARS, "P")?;
        check_vars(&r, &FIELD_VARS, "R")?;
        check_vars(&s, &FIELD_VARS, "S")?;
        Ok(Self { p, r, s })
    }

    pub fn parse(p: &str, r: &str, s: &str) -> Result<Self> {
        Self::new(parse(p)?, parse(r)?, parse(s)?)
    }

    pub fn p(&self) -> &Expr {
        &self.p
    }

    pub fn r(&self) -> &Expr {
        &self.r
    }

    pub fn s(&self) -> &Expr {
        &self.s
    }

    pub fn at(&self, pt: Vec3Q) -> Result<Vec3Q> {
        let env = Bindings::xyz(pt.u, pt.v, pt.q);
        Ok(Vec3Q::new(
            eval(&self.p, &env)?,
            eval(&self.r, &env)?,
            eval(&self.s, &env)?,
        ))
    }

    /// Multiplies every component by `factor`.
    pub fn scaled(&self, factor: &Expr) -> Result<Self> {
        Self::new(
            factor.clone() * self.p.clone(),
            factor.clone() * self.r.clone(),
            factor.clone() * self.s.clone(),
        )
    }
}

/// How the z-coordinate of a curve is given.
#[derive(Debug, Clone, PartialEq)]
pub enum ZCoord {
    Expr(Expr),
    /// z' = -x'y'/(x'+y') with z(alpha) = z0.
    Completed {
        z0: f64,
    },
}

/// r(t) = x(t)·i + y(t)·Qi + z(t)·Q²i for t ∈ [alpha, beta].
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    x: Expr,
    y: Expr,
    z: ZCoord,
    alpha: f64,
    beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub position: Vec3Q,
    pub tangent: Vec3Q,
}

impl ParamCurve {
    pub fn new(x: Expr, y: Expr, z: ZCoord, alpha: f64, beta: f64) -> Result<Self> {
        check_vars(&x, &[Var::T], "x(t)")?;
        check_vars(&y, &[Var::T], "y(t)")?;
        if let ZCoord::Expr(z) = &z {
            check_vars(z, &[Var::T], "z(t)")?;
        }
        if !alpha.is_finite() || !beta.is_finite() || alpha >= beta {
            return Err(Error::Invalid(format!(
                "curve interval [{alpha}, {beta}] must satisfy alpha < beta"
            )));
        }
        Ok(Self {
            x,
            y,
            z,
            alpha,
            beta,
        })
    }

    pub fn from_exprs(x: Expr, y: Expr, z: Expr, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(x, y, ZCoord::Expr(z), alpha, beta)
    }

    pub fn parse(x: &str, y: &str, z: &str, alpha: f64, beta: f64) -> Result<Self> {
        Self::from_exprs(parse(x)?, parse(y)?, parse(z)?, alpha, beta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn x(&self) -> &Expr {
        &self.x
    }

    pub fn y(&self) -> &Expr {
        &self.y
    }

    pub fn z(&self) -> &ZCoord {
        &self.z
    }

    fn planar_duals(&self, t: f64) -> Result<(DualValue, DualValue)> {
        let env = Bindings::t(DualValue::variable(t));
        Ok((eval_dual(&self.x, &env)?, eval_dual(&self.y, &env)?))
    }

    /// z' of a completed curve from the planar tangent.
    fn completed_dz(t: f64, dx: f64, dy: f64) -> Result<f64> {
        let sum = dx + dy;
        if sum.abs() < DEGENERATE_TANGENT_TOL * dx.abs().max(dy.abs()).max(1.0) {
            return Err(Error::DegenerateTangent { t, sum });
        }
        Ok(-dx * dy / sum)
    }

    fn completed_z(&self, z0: f64, t: f64) -> Result<f64> {
        if t == self.alpha {
            return Ok(z0);
        }
        let (lo, hi, sign) = if t > self.alpha {
            (self.alpha, t, 1.0)
        } else {
            (t, self.alpha, -1.0)
        };
        let dz = |s: f64| {
            let (x, y) = self.planar_duals(s)?;
            Self::completed_dz(s, x.deriv, y.deriv)
        };
        let r = quadrature::integrate(dz, lo, hi, Z_QUAD_TOL)?;
        Ok(z0 + sign * r.value)
    }

    /// Position and tangent at `t`.
    pub fn point(&self, t: f64) -> Result<CurvePoint> {
        let (x, y) = self.planar_duals(t)?;
        let (z, dz) = match &self.z {
            ZCoord::Expr(e) => {
                let d = eval_dual(e, &Bindings::t(DualValue::variable(t)))?;
                (d.value, d.deriv)
            }
            ZCoord::Completed { z0 } => {
                let dz = Self::completed_dz(t, x.deriv, y.deriv)?;
                (self.completed_z(*z0, t)?, dz)
            }
        };
        Ok(CurvePoint {
            t,
            position: Vec3Q::new(x.value, y.value, z),
            tangent: Vec3Q::new(x.deriv, y.deriv, dz),
        })
    }

    /// Tangent only; skips the z reconstruction of completed curves.
    pub fn tangent(&self, t: f64) -> Result<Vec3Q> {
        match &self.z {
            ZCoord::Expr(_) => Ok(self.point(t)?.tangent),
            ZCoord::Completed { .. } => {
                let (x, y) = self.planar_duals(t)?;
                let dz = Self::completed_dz(t, x.deriv, y.deriv)?;
                Ok(Vec3Q::new(x.deriv, y.deriv, dz))
            }
        }
    }

    pub fn sample(&self, ts: &[f64]) -> Result<Vec<CurvePoint>> {
        ts.iter().map(|&t| self.point(t)).collect()
    }

    /// The same trace run backwards: t ↦ alpha + beta - t.
    pub fn reversed(&self) -> Result<Self> {
        let flip = Expr::num(self.alpha + self.beta) - Expr::var(Var::T);
        let z = match &self.z {
            ZCoord::Expr(e) => ZCoord::Expr(e.substitute(Var::T, &flip)),
            ZCoord::Completed { z0 } => ZCoord::Completed {
                z0: self.completed_z(*z0, self.beta)?,
            },
        };
        Self::new(
            self.x.substitute(Var::T, &flip),
            self.y.substitute(Var::T, &flip),
            z,
            self.alpha,
            self.beta,
        )
    }
}

/// `n` Chebyshev points of the first kind mapped into (a, b), ascending.
pub fn chebyshev_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    (0..n)
        .rev()
        .map(|k| {
            let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64;
            mid + half * theta.cos()
        })
        .collect()
}

/// x'y' + y'z' + x'z' at `t0`; zero exactly when the tangent is isotropic.
pub fn curve_isotropy_residual(c: &ParamCurve, t0: f64) -> Result<f64> {
    if !(t0 >= c.alpha && t0 <= c.beta) {
        return Err(Error::Invalid(format!(
            "t0 = {t0} outside [{}, {}]",
            c.alpha, c.beta
        )));
    }
    let d = c.tangent(t0)?;
    Ok(d.u * d.v + d.v * d.q + d.u * d.q)
}

/// PR + RS + SP at `pt`.
pub fn force_isotropy_residual(f: &ForceField, pt: Vec3Q) -> Result<f64> {
    let v = f.at(pt)?;
    Ok(v.u * v.v + v.v * v.q + v.q * v.u)
}

/// Curve with the given x(t), y(t) and z' = -x'y'/(x'+y'), z(alpha) = z0.
///
/// Fails with `DegenerateTangent` if x' + y' vanishes at any node of `grid`.
pub fn complete_isotropic_curve(
    x: Expr,
    y: Expr,
    z0: f64,
    alpha: f64,
    beta: f64,
    grid: &[f64],
) -> Result<ParamCurve> {
    let c = ParamCurve::new(x, y, ZCoord::Completed { z0 }, alpha, beta)?;
    for &t in grid {
        c.tangent(t)?;
    }
    Ok(c)
}

/// Field with the given P, R and S = -PR/(P+R).
///
/// The quotient is built symbolically; where P + R = 0 evaluation raises a
/// domain error.
pub fn complete_isotropic_force(p: Expr, r: Expr) -> Result<ForceField> {
    let s = -(p.clone() * r.clone() / (p.clone() + r.clone()));
    ForceField::new(p, r, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KSample {
    pub t: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollinearityReport {
    pub collinear: bool,
    pub max_minor: f64,
    /// Signed ratio |F| / |r'| at samples where the tangent is nonzero.
    pub k_samples: Vec<KSample>,
}

fn norm(v: Vec3Q) -> f64 {
    v.coord_norm()
}

/// Scale-normalized largest 2×2 minor of the pair (F, r'), i.e. how far F and
/// the tangent are from being parallel.
pub fn parallel_defect(force: Vec3Q, tangent: Vec3Q) -> f64 {
    let (f, d) = (force, tangent);
    let minors = [
        f.u * d.v - f.v * d.u,
        f.v * d.q - f.q * d.v,
        f.u * d.q - f.q * d.u,
    ];
    let scale = norm(f).max(1.0) * norm(d).max(1.0);
    minors.iter().fold(0.0f64, |m, x| m.max(x.abs())) / scale
}

/// Checks whether F along `c` is everywhere parallel to the tangent.
pub fn collinearity_check(
    f: &ForceField,
    c: &ParamCurve,
    n_samples: usize,
) -> Result<CollinearityReport> {
    if n_samples < 2 {
        return Err(Error::Invalid(
            "collinearity check needs at least 2 samples".into(),
        ));
    }
    let mut max_minor = 0.0f64;
    let mut k_samples = Vec::new();
    for t in chebyshev_points(c.alpha, c.beta, n_samples) {
        let pt = c.point(t)?;
        let force = f.at(pt.position)?;
        max_minor = max_minor.max(parallel_defect(force, pt.tangent));
        let dn = norm(pt.tangent);
        if dn > 0.0 {
            let dot = force.u * pt.tangent.u + force.v * pt.tangent.v + force.q * pt.tangent.q;
            let k = norm(force) / dn;
            k_samples.push(KSample {
                t,
                k: if dot < 0.0 { -k } else { k },
            });
        }
    }
    Ok(CollinearityReport {
        collinear: max_minor <= ZERO_TOL,
        max_minor,
        k_samples,
    })
}
