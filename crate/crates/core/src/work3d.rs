//! Work of an isotropic force field along an isotropic curve in the
//! orthonormal Q-basis.
//!
//! The pairing is the associated metric, so along r(t) the integrand is
//!
//! ```text
//! f(F, r') = P(y' + z') + R(x' + z') + S(x' + y')
//! ```
//!
//! When F and r' are parallel the integrand is k·f(r', r') = 0. Otherwise
//! three closed forms apply, selected by which of x' + y' and P + R vanishes
//! identically along the curve:
//!
//! | case | condition            | integrand                               |
//! |------|----------------------|-----------------------------------------|
//! | I    | F ∥ r'               | 0                                       |
//! | II   | x' + y' ≡ 0          | (P + R)·z'                              |
//! | III  | P + R ≡ 0            | S·(x' + y')                             |
//! | IV   | neither              | (P y' − R x')² / ((P + R)(x' + y'))     |
//!
//! [`work`] dispatches on the case and always re-derives the value by direct
//! quadrature of the general integrand; a disagreement is an error.

use serde::Serialize;

use crate::algebra::Vec3Q;
use crate::error::{Error, Result};
use crate::fields::{
    chebyshev_points, collinearity_check, CollinearityReport, CurvePoint, ForceField, ParamCurve,
    SAMPLE_COUNT, ZERO_TOL,
};
use crate::quadrature::{self, QuadResult};

/// Max scale-normalized isotropy residual admitted before dispatch.
pub const ISOTROPY_ADMISSION_TOL: f64 = 1e-8;
/// Case formula and direct route must agree within this multiple of the
/// summed error estimates.
pub const CROSS_CHECK_FACTOR: f64 = 10.0;
/// |(P+R)(x'+y')| below this (scale-normalized) counts as singular.
pub const NEAR_SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WorkMethod {
    #[serde(rename = "case_i")]
    CaseICollinear,
    #[serde(rename = "case_ii")]
    CaseIIDxDyZero,
    #[serde(rename = "case_iii")]
    CaseIIIPRZero,
    #[serde(rename = "case_iv")]
    CaseIVGeneral,
    #[serde(rename = "direct")]
    DirectQuadrature,
    #[serde(rename = "plane_same_direction")]
    PlaneSameDirection,
    #[serde(rename = "plane_cross")]
    PlaneCross,
    #[serde(rename = "plane_right_angle")]
    PlaneRightAngle,
}

impl WorkMethod {
    pub fn label(self) -> &'static str {
        match self {
            WorkMethod::CaseICollinear => "case_i",
            WorkMethod::CaseIIDxDyZero => "case_ii",
            WorkMethod::CaseIIIPRZero => "case_iii",
            WorkMethod::CaseIVGeneral => "case_iv",
            WorkMethod::DirectQuadrature => "direct",
            WorkMethod::PlaneSameDirection => "plane_same_direction",
            WorkMethod::PlaneCross => "plane_cross",
            WorkMethod::PlaneRightAngle => "plane_right_angle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkResult {
    pub value: f64,
    pub method: WorkMethod,
    pub error_estimate: f64,
    /// Largest violation of the chosen case's defining condition over the
    /// sample points (scale-normalized). Zero for direct quadrature.
    pub case_assumption_residual: f64,
    /// |case formula − direct quadrature| when the cross-check ran.
    pub cross_check_delta: Option<f64>,
    /// Set when the case formula was singular and the direct route was used.
    pub fell_back: bool,
}

impl WorkResult {
    fn from_quad(q: QuadResult, method: WorkMethod, residual: f64) -> Self {
        Self {
            value: q.value,
            method,
            error_estimate: q.error_estimate,
            case_assumption_residual: residual,
            cross_check_delta: None,
            fell_back: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WorkCase {
    #[serde(rename = "case_i")]
    CaseI,
    #[serde(rename = "case_ii")]
    CaseII,
    #[serde(rename = "case_iii")]
    CaseIII,
    #[serde(rename = "case_iv")]
    CaseIV,
}

impl WorkCase {
    pub fn method(self) -> WorkMethod {
        match self {
            WorkCase::CaseI => WorkMethod::CaseICollinear,
            WorkCase::CaseII => WorkMethod::CaseIIDxDyZero,
            WorkCase::CaseIII => WorkMethod::CaseIIIPRZero,
            WorkCase::CaseIV => WorkMethod::CaseIVGeneral,
        }
    }

    pub fn label(self) -> &'static str {
        self.method().label()
    }
}

/// Everything the classifier measured along the curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseDiagnostics {
    /// max |PR + RS + SP| / max(1, |F|²)
    pub force_residual: f64,
    /// max |x'y' + y'z' + x'z'| / max(1, |r'|²)
    pub curve_residual: f64,
    /// max |x' + y'| / max(1, |r'|)
    pub max_dx_plus_dy: f64,
    /// max |P + R| / max(1, |F|)
    pub max_p_plus_r: f64,
    pub collinearity: CollinearityReport,
    /// `None` when either isotropy check fails.
    pub case: Option<WorkCase>,
}

struct Sample {
    point: CurvePoint,
    force: Vec3Q,
}

fn samples(f: &ForceField, c: &ParamCurve) -> Result<Vec<Sample>> {
    chebyshev_points(c.alpha(), c.beta(), SAMPLE_COUNT)
        .into_iter()
        .map(|t| {
            let point = c.point(t)?;
            let force = f.at(point.position)?;
            Ok(Sample { point, force })
        })
        .collect()
}

fn sq_scale(v: Vec3Q) -> f64 {
    v.coord_norm().max(1.0)
}

/// Measures isotropy and the case conditions without judging them.
pub fn diagnose(f: &ForceField, c: &ParamCurve) -> Result<CaseDiagnostics> {
    let pts = samples(f, c)?;
    let mut d = CaseDiagnostics {
        force_residual: 0.0,
        curve_residual: 0.0,
        max_dx_plus_dy: 0.0,
        max_p_plus_r: 0.0,
        collinearity: collinearity_check(f, c, SAMPLE_COUNT)?,
        case: None,
    };
    for s in &pts {
        let (fv, dr) = (s.force, s.point.tangent);
        let fres = fv.u * fv.v + fv.v * fv.q + fv.q * fv.u;
        let cres = dr.u * dr.v + dr.v * dr.q + dr.u * dr.q;
        d.force_residual = d.force_residual.max(fres.abs() / sq_scale(fv).powi(2));
        d.curve_residual = d.curve_residual.max(cres.abs() / sq_scale(dr).powi(2));
        d.max_dx_plus_dy = d.max_dx_plus_dy.max((dr.u + dr.v).abs() / sq_scale(dr));
        d.max_p_plus_r = d.max_p_plus_r.max((fv.u + fv.v).abs() / sq_scale(fv));
    }
    let isotropic =
        d.force_residual <= ISOTROPY_ADMISSION_TOL && d.curve_residual <= ISOTROPY_ADMISSION_TOL;
    let case = if d.collinearity.collinear {
        WorkCase::CaseI
    } else if d.max_dx_plus_dy <= ZERO_TOL {
        WorkCase::CaseII
    } else if d.max_p_plus_r <= ZERO_TOL {
        WorkCase::CaseIII
    } else {
        WorkCase::CaseIV
    };
    d.case = isotropic.then_some(case);
    Ok(d)
}

/// Selects the closed form that applies to (F, c). Precedence on overlapping
/// hypotheses is I > II > III > IV.
pub fn classify_case(f: &ForceField, c: &ParamCurve) -> Result<(WorkCase, CaseDiagnostics)> {
    let d = diagnose(f, c)?;
    match d.case {
        Some(case) => Ok((case, d)),
        None if d.force_residual > ISOTROPY_ADMISSION_TOL => Err(Error::NotIsotropic {
            what: "force field",
            residual: d.force_residual,
        }),
        None => Err(Error::NotIsotropic {
            what: "curve",
            residual: d.curve_residual,
        }),
    }
}

/// Direct quadrature of P(y'+z') + R(x'+z') + S(x'+y').
pub fn work_direct(f: &ForceField, c: &ParamCurve, tol: f64) -> Result<WorkResult> {
    let q = quadrature::integrate_scaled(
        |t| {
            let pt = c.point(t)?;
            let fv = f.at(pt.position)?;
            let d = pt.tangent;
            let value = fv.u * (d.v + d.q) + fv.v * (d.u + d.q) + fv.q * (d.u + d.v);
            let magnitude = fv.u.abs() * (d.v.abs() + d.q.abs())
                + fv.v.abs() * (d.u.abs() + d.q.abs())
                + fv.q.abs() * (d.u.abs() + d.v.abs());
            Ok((value, magnitude))
        },
        c.alpha(),
        c.beta(),
        tol,
    )?;
    Ok(WorkResult::from_quad(q, WorkMethod::DirectQuadrature, 0.0))
}

fn max_over_samples(
    f: &ForceField,
    c: &ParamCurve,
    measure: impl Fn(Vec3Q, Vec3Q) -> f64,
) -> Result<f64> {
    Ok(samples(f, c)?
        .iter()
        .map(|s| measure(s.force, s.point.tangent))
        .fold(0.0, f64::max))
}

/// x and y are constant along the curve (x = k₁, y = k₂): integrates
/// (P + R)(k₁, k₂, z(t))·z'(t).
pub fn work_case_ii(f: &ForceField, c: &ParamCurve, tol: f64) -> Result<WorkResult> {
    let residual = max_over_samples(f, c, |_, d| d.u.abs().max(d.v.abs()) / sq_scale(d))?;
    let q = quadrature::integrate_scaled(
        |t| {
            let pt = c.point(t)?;
            let fv = f.at(pt.position)?;
            let dz = pt.tangent.q;
            Ok(((fv.u + fv.v) * dz, (fv.u.abs() + fv.v.abs()) * dz.abs()))
        },
        c.alpha(),
        c.beta(),
        tol,
    )?;
    Ok(WorkResult::from_quad(
        q,
        WorkMethod::CaseIIDxDyZero,
        residual,
    ))
}

/// P = R = 0 along the curve: integrates S·(x' + y').
pub fn work_case_iii(f: &ForceField, c: &ParamCurve, tol: f64) -> Result<WorkResult> {
    let residual = max_over_samples(f, c, |fv, _| fv.u.abs().max(fv.v.abs()) / sq_scale(fv))?;
    let q = quadrature::integrate_scaled(
        |t| {
            let pt = c.point(t)?;
            let fv = f.at(pt.position)?;
            let d = pt.tangent;
            Ok((fv.q * (d.u + d.v), fv.q.abs() * (d.u.abs() + d.v.abs())))
        },
        c.alpha(),
        c.beta(),
        tol,
    )?;
    Ok(WorkResult::from_quad(
        q,
        WorkMethod::CaseIIIPRZero,
        residual,
    ))
}

/// General isotropic pair: integrates (P y' − R x')² / ((P + R)(x' + y')).
///
/// Raises `NearSingularDenominator` if the denominator nearly vanishes at a
/// quadrature node.
pub fn work_case_iv(f: &ForceField, c: &ParamCurve, tol: f64) -> Result<WorkResult> {
    let residual = max_over_samples(f, c, |fv, d| {
        let fres = (fv.u * fv.v + fv.v * fv.q + fv.q * fv.u).abs() / sq_scale(fv).powi(2);
        let cres = (d.u * d.v + d.v * d.q + d.u * d.q).abs() / sq_scale(d).powi(2);
        fres.max(cres)
    })?;
    let q = quadrature::integrate_scaled(
        |t| {
            let pt = c.point(t)?;
            let fv = f.at(pt.position)?;
            let d = pt.tangent;
            let den = (fv.u + fv.v) * (d.u + d.v);
            if den.abs() < NEAR_SINGULAR_TOL * sq_scale(fv) * sq_scale(d) {
                return Err(Error::NearSingularDenominator { t, value: den });
            }
            let num = fv.u * d.v - fv.v * d.u;
            let num_mag = fv.u.abs() * d.v.abs() + fv.v.abs() * d.u.abs();
            Ok((num * num / den, num_mag * num_mag / den.abs()))
        },
        c.alpha(),
        c.beta(),
        tol,
    )?;
    Ok(WorkResult::from_quad(
        q,
        WorkMethod::CaseIVGeneral,
        residual,
    ))
}

/// Classifies (F, c), evaluates the matching closed form and cross-checks it
/// against [`work_direct`].
pub fn work(f: &ForceField, c: &ParamCurve, tol: f64) -> Result<WorkResult> {
    let (case, diag) = classify_case(f, c)?;
    let formula = match case {
        WorkCase::CaseI => {
            return Ok(WorkResult {
                value: 0.0,
                method: WorkMethod::CaseICollinear,
                error_estimate: 0.0,
                case_assumption_residual: diag.collinearity.max_minor,
                cross_check_delta: None,
                fell_back: false,
            })
        }
        WorkCase::CaseII => work_case_ii(f, c, tol),
        WorkCase::CaseIII => work_case_iii(f, c, tol),
        WorkCase::CaseIV => work_case_iv(f, c, tol),
    };
    let direct = work_direct(f, c, tol)?;
    let mut result = match formula {
        Ok(r) => r,
        Err(Error::NearSingularDenominator { .. }) => {
            return Ok(WorkResult {
                fell_back: true,
                ..direct
            })
        }
        Err(e) => return Err(e),
    };
    let delta = (result.value - direct.value).abs();
    let allowed = CROSS_CHECK_FACTOR * (result.error_estimate + direct.error_estimate);
    if delta > allowed {
        return Err(Error::CrossCheckFailure {
            case: case.label(),
            case_value: result.value,
            direct_value: direct.value,
            delta,
            allowed,
        });
    }
    result.cross_check_delta = Some(delta);
    Ok(result)
}
