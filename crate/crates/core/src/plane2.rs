//! Isotropic lines and work in the 2-plane spanned by i and Qi.
//!
//! With ‖i‖ = 1 and φ = ∠(i, Qi), the plane gets the orthonormal frame
//! {i, j} where j = (Qi − cos φ·i)/sin φ. Writing c = cos φ, s = sin φ, the
//! values of g that enter f on this frame are
//!
//! ```text
//! g(i, Qi) = c            g(i, Qj) = (c − c²)/s
//! g(j, Qi) = s            g(j, Qj) = −c²/(1 + c)
//! ```
//!
//! so f(w, w) for w = x·i + y·j equals
//! 2c·x² + 2(1 − c)(1 + 2c)/s·xy − 2c²/(1 + c)·y². Setting it to zero and
//! dividing by x² gives the slope equation
//!
//! ```text
//! c²k² − s(1 + 2c)k − (1 + c)c = 0,    D = (1 + c)(1 + 3c)
//! ```
//!
//! which has no real root (case A), a double root √2 at c = −1/3 (case B),
//! two roots k₁ < k₂ (case C), or degenerates at φ = π/2 where the isotropic
//! lines are the axes themselves (case D).

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::algebra::PHI_MAX;
use crate::error::{Error, Result};
use crate::expr::{eval, Bindings, Expr, Var};
use crate::quadrature;
use crate::work3d::{WorkMethod, WorkResult};

/// |cos φ| at or below this is treated as φ = π/2.
pub const RIGHT_ANGLE_TOL: f64 = 1e-9;
/// |D| at or below this is treated as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-9;
/// f(Qi, i) = g(Qi, Qi) + g(Q²i, i) = 1 + cos φ, which is 1 at φ = π/2.
const RIGHT_ANGLE_PAIRING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlaneCase {
    #[serde(rename = "A")]
    NoIsotropic,
    #[serde(rename = "B")]
    DoubleRoot,
    #[serde(rename = "C")]
    TwoDirections,
    #[serde(rename = "D")]
    RightAngle,
}

impl PlaneCase {
    pub fn letter(self) -> &'static str {
        match self {
            PlaneCase::NoIsotropic => "A",
            PlaneCase::DoubleRoot => "B",
            PlaneCase::TwoDirections => "C",
            PlaneCase::RightAngle => "D",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            PlaneCase::NoIsotropic => "no isotropic directions",
            PlaneCase::DoubleRoot => "one isotropic line",
            PlaneCase::TwoDirections => "two isotropic lines",
            PlaneCase::RightAngle => "the coordinate axes are isotropic",
        }
    }
}

/// The four values of g that determine f on the frame {i, j}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerProductTable {
    pub g_i_qi: f64,
    pub g_i_qj: f64,
    pub g_j_qi: f64,
    pub g_j_qj: f64,
}

impl InnerProductTable {
    pub fn new(c: f64, s: f64) -> Self {
        Self {
            g_i_qi: c,
            g_i_qj: (c - c * c) / s,
            g_j_qi: s,
            g_j_qj: -c * c / (1.0 + c),
        }
    }

    /// (f(i,i), f(i,j), f(j,j)) with f(a, b) = g(a, Qb) + g(Qa, b).
    pub fn f_values(&self) -> (f64, f64, f64) {
        (
            2.0 * self.g_i_qi,
            self.g_i_qj + self.g_j_qi,
            2.0 * self.g_j_qj,
        )
    }
}

/// One of the two isotropic lines through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    C1,
    C2,
}

/// An isotropic line y = k·x, or the line x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoLine {
    Slope(f64),
    VerticalAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneContext {
    pub phi: f64,
    pub c: f64,
    pub s: f64,
    pub f_ii: f64,
    pub f_ij: f64,
    pub f_jj: f64,
    pub case: PlaneCase,
    pub discriminant: f64,
    /// Smaller root; present in cases B and C.
    pub k1: Option<f64>,
    /// Larger root; present in cases B and C.
    pub k2: Option<f64>,
}

/// f(w, w) = a² written as coeff_xx·x² + coeff_xy·xy + coeff_yy·y² = a²/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleSpec {
    pub a: f64,
    pub coeff_xx: f64,
    pub coeff_xy: f64,
    pub coeff_yy: f64,
    pub rhs: f64,
}

pub fn discriminant(c: f64) -> f64 {
    (1.0 + c) * (1.0 + 3.0 * c)
}

/// b² − 4ac of the slope quadratic, expanded as s²(1 + 2c)² + 4c³(1 + c).
pub fn quadratic_discriminant(c: f64, s: f64) -> f64 {
    s * s * (1.0 + 2.0 * c).powi(2) + 4.0 * c.powi(3) * (1.0 + c)
}

/// Residual of the slope quadratic at k, divided by the magnitude of its terms.
pub fn root_residual(c: f64, s: f64, k: f64) -> f64 {
    let (a, b, c0) = slope_quadratic(c, s);
    let terms = [a * k * k, b * k, c0];
    let scale = terms
        .iter()
        .map(|t| t.abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    terms.iter().sum::<f64>().abs() / scale
}

/// Coefficients (a, b, c₀) of a·k² + b·k + c₀ = 0 for the isotropic slope.
pub fn slope_quadratic(c: f64, s: f64) -> (f64, f64, f64) {
    (c * c, -s * (1.0 + 2.0 * c), -(1.0 + c) * c)
}

/// Real roots of a·k² + b·k + c₀ given a nonnegative discriminant, ascending.
fn real_roots(a: f64, b: f64, c0: f64, disc: f64) -> (f64, f64) {
    // q = -(b + sign(b)√D)/2 avoids cancellation in the small root.
    let root = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * root);
    let (r1, r2) = if disc <= 0.0 {
        let k = -b / (2.0 * a);
        (k, k)
    } else {
        (q / a, c0 / q)
    };
    if r1 <= r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Builds the plane state for φ ∈ (0, 2π/3].
pub fn build_plane(phi: f64) -> Result<PlaneContext> {
    if !(phi > 0.0 && phi <= PHI_MAX) {
        return Err(Error::OutOfRange {
            phi,
            domain: "(0, 2π/3]",
        });
    }
    let (c, s) = (phi.cos(), phi.sin());
    let (f_ii, f_ij, f_jj) = InnerProductTable::new(c, s).f_values();
    let (a, b, c0) = slope_quadratic(c, s);
    let disc = discriminant(c);
    let case = if c.abs() <= RIGHT_ANGLE_TOL {
        PlaneCase::RightAngle
    } else if disc.abs() <= DOUBLE_ROOT_TOL {
        PlaneCase::DoubleRoot
    } else if disc < 0.0 {
        PlaneCase::NoIsotropic
    } else {
        PlaneCase::TwoDirections
    };
    let (k1, k2) = match case {
        PlaneCase::DoubleRoot | PlaneCase::TwoDirections => {
            let d = if case == PlaneCase::DoubleRoot {
                0.0
            } else {
                quadratic_discriminant(c, s)
            };
            let (r1, r2) = real_roots(a, b, c0, d);
            (Some(r1), Some(r2))
        }
        _ => (None, None),
    };
    Ok(PlaneContext {
        phi,
        c,
        s,
        f_ii,
        f_ij,
        f_jj,
        case,
        discriminant: disc,
        k1,
        k2,
    })
}

impl PlaneContext {
    pub fn circle(&self, a: f64) -> CircleSpec {
        let c = self.c;
        CircleSpec {
            a,
            coeff_xx: c,
            coeff_xy: (1.0 - c) * (1.0 + 2.0 * c) / self.s,
            coeff_yy: -c * c / (1.0 + c),
            rhs: a * a / 2.0,
        }
    }

    /// f(w, w) for w = x·i + y·j.
    pub fn f_norm(&self, x: f64, y: f64) -> f64 {
        self.f_ii * x * x + 2.0 * self.f_ij * x * y + self.f_jj * y * y
    }

    /// f(i + ka·j, i + kb·j).
    pub fn pairing(&self, ka: f64, kb: f64) -> f64 {
        self.f_ii + (ka + kb) * self.f_ij + ka * kb * self.f_jj
    }

    /// (1 + 3c)/c², the value of f between the two isotropic directions
    /// normalized to unit x-component.
    pub fn cross_coefficient(&self) -> f64 {
        (1.0 + 3.0 * self.c) / (self.c * self.c)
    }

    pub fn slope(&self, line: Line) -> Option<f64> {
        match line {
            Line::C1 => self.k1,
            Line::C2 => self.k2,
        }
    }
}

/// coeff_xx·x² + coeff_xy·xy + coeff_yy·y² − a²/2.
pub fn circle_residual(ctx: &PlaneContext, a: f64, x: f64, y: f64) -> f64 {
    let k = ctx.circle(a);
    k.coeff_xx * x * x + k.coeff_xy * x * y + k.coeff_yy * y * y - k.rhs
}

pub fn iso_directions(ctx: &PlaneContext) -> Vec<IsoLine> {
    match ctx.case {
        PlaneCase::NoIsotropic => Vec::new(),
        PlaneCase::DoubleRoot => ctx.k1.map(IsoLine::Slope).into_iter().collect(),
        PlaneCase::TwoDirections => [ctx.k1, ctx.k2]
            .into_iter()
            .flatten()
            .map(IsoLine::Slope)
            .collect(),
        PlaneCase::RightAngle => vec![IsoLine::Slope(0.0), IsoLine::VerticalAxis],
    }
}

fn check_plane_expr(p: &Expr) -> Result<()> {
    match p
        .variables()
        .into_iter()
        .find(|v| !matches!(v, Var::X | Var::Y))
    {
        Some(v) => Err(Error::UnexpectedVariable(format!(
            "{} (plane force uses x, y)",
            v.name()
        ))),
        None => Ok(()),
    }
}

fn zero_work(method: WorkMethod) -> WorkResult {
    WorkResult {
        value: 0.0,
        method,
        error_estimate: 0.0,
        case_assumption_residual: 0.0,
        cross_check_delta: None,
        fell_back: false,
    }
}

fn integrate_along(
    p: &Expr,
    point: impl Fn(f64) -> (f64, f64),
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<quadrature::QuadResult> {
    quadrature::integrate(
        |t| {
            let (x, y) = point(t);
            eval(p, &Bindings::xy(x, y))
        },
        alpha,
        beta,
        tol,
    )
}

/// Work of F = P·(i + k_source·j) moving along the line y = k_target·x,
/// parameterized as (t, k_target·t) for t ∈ [alpha, beta].
///
/// Same-direction motion, and the single line of case B, give zero work.
pub fn work_cross(
    ctx: &PlaneContext,
    p: &Expr,
    source: Line,
    target: Line,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<WorkResult> {
    check_plane_expr(p)?;
    match ctx.case {
        PlaneCase::DoubleRoot => return Ok(zero_work(WorkMethod::PlaneSameDirection)),
        PlaneCase::TwoDirections => {}
        other => {
            return Err(Error::CaseMismatch {
                expected: "C (or B)",
                actual: other.letter(),
            })
        }
    }
    if source == target {
        return Ok(zero_work(WorkMethod::PlaneSameDirection));
    }
    let k = ctx.slope(target).expect("case C has both slopes");
    let coef = ctx.cross_coefficient();
    let q = integrate_along(p, |t| (t, k * t), alpha, beta, tol / coef.abs().max(1.0))?;
    Ok(WorkResult {
        value: coef * q.value,
        method: WorkMethod::PlaneCross,
        error_estimate: coef.abs() * q.error_estimate,
        case_assumption_residual: 0.0,
        cross_check_delta: None,
        fell_back: false,
    })
}

/// Which axis carries the force at φ = π/2, where j = Qi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RightAngleOrientation {
    /// F = P(t, 0)·Qi moving along i (the line y = 0).
    ForceAlongQi,
    /// F = P(0, t)·i moving along Qi (the line x = 0).
    ForceAlongI,
}

/// Work at φ = π/2: ∫P(t, 0)dt or ∫P(0, t)dt.
pub fn work_right_angle(
    p: &Expr,
    orientation: RightAngleOrientation,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<WorkResult> {
    check_plane_expr(p)?;
    let q = match orientation {
        RightAngleOrientation::ForceAlongQi => integrate_along(p, |t| (t, 0.0), alpha, beta, tol)?,
        RightAngleOrientation::ForceAlongI => integrate_along(p, |t| (0.0, t), alpha, beta, tol)?,
    };
    Ok(WorkResult {
        value: RIGHT_ANGLE_PAIRING * q.value,
        method: WorkMethod::PlaneRightAngle,
        error_estimate: q.error_estimate,
        case_assumption_residual: 0.0,
        cross_check_delta: None,
        fell_back: false,
    })
}

/// Work along `target` of a force lying on `source`, for any plane case.
///
/// At φ = π/2, c1 is the line x = 0 (direction Qi) and c2 the line y = 0
/// (direction i); the lines are parameterized as (0, t) and (t, 0).
pub fn work_between(
    ctx: &PlaneContext,
    p: &Expr,
    source: Line,
    target: Line,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<WorkResult> {
    match ctx.case {
        PlaneCase::RightAngle => {
            check_plane_expr(p)?;
            match (source, target) {
                (Line::C1, Line::C2) => {
                    work_right_angle(p, RightAngleOrientation::ForceAlongQi, alpha, beta, tol)
                }
                (Line::C2, Line::C1) => {
                    work_right_angle(p, RightAngleOrientation::ForceAlongI, alpha, beta, tol)
                }
                _ => Ok(zero_work(WorkMethod::PlaneSameDirection)),
            }
        }
        _ => work_cross(ctx, p, source, target, alpha, beta, tol),
    }
}

/// Representative angles for the four regimes of the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeAngles {
    pub no_isotropic: f64,
    pub double_root: f64,
    pub two_directions: f64,
    pub right_angle: f64,
}

impl Default for RegimeAngles {
    fn default() -> Self {
        let b = (-1.0f64 / 3.0).acos();
        Self {
            no_isotropic: 0.5 * (b + PHI_MAX),
            double_root: b,
            two_directions: std::f64::consts::FRAC_PI_3,
            right_angle: FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TableEntry {
    /// No isotropic curves exist.
    Absent,
    Zero,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub regime: &'static str,
    pub phi: f64,
    pub case: PlaneCase,
    pub acts_on: &'static str,
    pub trajectory: &'static str,
    pub formula: &'static str,
    pub work: TableEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1 {
    pub angles: RegimeAngles,
    pub rows: Vec<TableRow>,
}

const REGIME_A: &str = "(arccos(-1/3), 2pi/3)";
const REGIME_B: &str = "arccos(-1/3)";
const REGIME_C: &str = "(0, pi/2) U (pi/2, arccos(-1/3))";
const REGIME_D: &str = "pi/2";

/// The summary table of work along isotropic lines, evaluated for the force
/// magnitude `p` over [alpha, beta] at one representative angle per regime.
pub fn table1_report(
    p: &Expr,
    alpha: f64,
    beta: f64,
    tol: f64,
    angles: RegimeAngles,
) -> Result<Table1> {
    check_plane_expr(p)?;
    let a = build_plane(angles.no_isotropic)?;
    let b = build_plane(angles.double_root)?;
    let c = build_plane(angles.two_directions)?;
    let d = build_plane(angles.right_angle)?;
    let expect = |ctx: &PlaneContext, case: PlaneCase| {
        if ctx.case == case {
            Ok(())
        } else {
            Err(Error::CaseMismatch {
                expected: case.letter(),
                actual: ctx.case.letter(),
            })
        }
    };
    expect(&a, PlaneCase::NoIsotropic)?;
    expect(&b, PlaneCase::DoubleRoot)?;
    expect(&c, PlaneCase::TwoDirections)?;
    expect(&d, PlaneCase::RightAngle)?;

    let entry = |r: WorkResult| match r.method {
        WorkMethod::PlaneSameDirection => TableEntry::Zero,
        _ => TableEntry::Value(r.value),
    };
    let row = |regime, ctx: &PlaneContext, acts_on, trajectory, formula, work| TableRow {
        regime,
        phi: ctx.phi,
        case: ctx.case,
        acts_on,
        trajectory,
        formula,
        work,
    };
    // "acts on" is the line the force moves along; "trajectory" is the line
    // the force vector lies on.
    let rows = vec![
        row(REGIME_A, &a, "-", "no is. curves", "-", TableEntry::Absent),
        row(
            REGIME_B,
            &b,
            "c: y=sqrt(2)x",
            "c: y=sqrt(2)x",
            "0",
            entry(work_cross(&b, p, Line::C1, Line::C1, alpha, beta, tol)?),
        ),
        row(
            REGIME_C,
            &c,
            "c1: y=k1x",
            "c1: y=k1x",
            "0",
            entry(work_cross(&c, p, Line::C1, Line::C1, alpha, beta, tol)?),
        ),
        row(
            REGIME_C,
            &c,
            "c2: y=k2x",
            "c2: y=k2x",
            "0",
            entry(work_cross(&c, p, Line::C2, Line::C2, alpha, beta, tol)?),
        ),
        row(
            REGIME_C,
            &c,
            "c1: y=k1x",
            "c2: y=k2x",
            "(1+3cos(phi))/cos(phi)^2 * int P(t,k1 t) dt",
            entry(work_cross(&c, p, Line::C2, Line::C1, alpha, beta, tol)?),
        ),
        row(
            REGIME_C,
            &c,
            "c2: y=k2x",
            "c1: y=k1x",
            "(1+3cos(phi))/cos(phi)^2 * int P(t,k2 t) dt",
            entry(work_cross(&c, p, Line::C1, Line::C2, alpha, beta, tol)?),
        ),
        row(
            REGIME_D,
            &d,
            "c1: x=0",
            "c2: y=0",
            "int P(t,0) dt",
            entry(work_right_angle(
                p,
                RightAngleOrientation::ForceAlongQi,
                alpha,
                beta,
                tol,
            )?),
        ),
        row(
            REGIME_D,
            &d,
            "c1: y=0",
            "c2: x=0",
            "int P(0,t) dt",
            entry(work_right_angle(
                p,
                RightAngleOrientation::ForceAlongI,
                alpha,
                beta,
                tol,
            )?),
        ),
    ];
    Ok(Table1 { angles, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{apply_q, QFrame, Vec3Q};
    use crate::expr::parse;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1.0)
    }

    fn case_b_phi() -> f64 {
        (-1.0f64 / 3.0).acos()
    }

    #[test]
    fn case_b_has_slope_sqrt2() {
        let ctx = build_plane(case_b_phi()).unwrap();
        assert_eq!(ctx.case, PlaneCase::DoubleRoot);
        assert!((ctx.k1.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(ctx.k1, ctx.k2);
        assert_eq!(iso_directions(&ctx).len(), 1);
    }

    #[test]
    fn right_angle_case() {
        let ctx = build_plane(FRAC_PI_2).unwrap();
        assert_eq!(ctx.case, PlaneCase::RightAngle);
        assert!((ctx.discriminant - 1.0).abs() < 1e-15);
        assert_eq!(
            iso_directions(&ctx),
            vec![IsoLine::Slope(0.0), IsoLine::VerticalAxis]
        );
    }

    #[test]
    fn third_pi_vieta() {
        let ctx = build_plane(FRAC_PI_3).unwrap();
        assert_eq!(ctx.case, PlaneCase::TwoDirections);
        let (k1, k2) = (ctx.k1.unwrap(), ctx.k2.unwrap());
        assert!(rel(k1 + k2, 4.0 * 3f64.sqrt()) < 1e-14);
        assert!(rel(k1 * k2, -3.0) < 1e-14);
        // Oracle: the textbook quadratic formula on 1/4 k² − (√3)k − 3/4 = 0.
        let (a, b, c0) = (0.25, -3f64.sqrt(), -0.75);
        let d = (b * b - 4.0 * a * c0).sqrt();
        assert!(rel(k1, (-b - d) / (2.0 * a)) < 1e-14);
        assert!(rel(k2, (-b + d) / (2.0 * a)) < 1e-14);
    }

    #[test]
    fn no_isotropic_regime() {
        let ctx = build_plane(RegimeAngles::default().no_isotropic).unwrap();
        assert_eq!(ctx.case, PlaneCase::NoIsotropic);
        assert!(iso_directions(&ctx).is_empty());
        // The right endpoint 2π/3 belongs to the plane domain and to case A.
        assert_eq!(build_plane(PHI_MAX).unwrap().case, PlaneCase::NoIsotropic);
        // 108° lies below arccos(-1/3) ≈ 109.47°, hence still two directions.
        assert_eq!(
            build_plane(0.6 * PI).unwrap().case,
            PlaneCase::TwoDirections
        );
    }

    #[test]
    fn domain_is_half_open() {
        assert!(matches!(build_plane(0.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            build_plane(PHI_MAX + 1e-12),
            Err(Error::OutOfRange { .. })
        ));
        assert!(build_plane(1e-6).is_ok());
    }

    #[test]
    fn case_boundaries() {
        let b = case_b_phi();
        assert_eq!(build_plane(b + 1e-6).unwrap().case, PlaneCase::NoIsotropic);
        assert_eq!(
            build_plane(b - 1e-6).unwrap().case,
            PlaneCase::TwoDirections
        );
        assert_eq!(build_plane(b + 1e-12).unwrap().case, PlaneCase::DoubleRoot);
        assert_eq!(
            build_plane(FRAC_PI_2 + 1e-10).unwrap().case,
            PlaneCase::RightAngle
        );
        assert_eq!(
            build_plane(FRAC_PI_2 + 1e-6).unwrap().case,
            PlaneCase::TwoDirections
        );
        assert_eq!(
            build_plane(FRAC_PI_2 - 1e-6).unwrap().case,
            PlaneCase::TwoDirections
        );
    }

    #[test]
    fn f_values_match_closed_forms() {
        for k in 1..=200 {
            let phi = PHI_MAX * k as f64 / 200.0;
            let ctx = build_plane(phi).unwrap();
            let (c, s) = (phi.cos(), phi.sin());
            assert!(rel(ctx.f_ii, 2.0 * c) < 1e-14);
            assert!(rel(ctx.f_jj, -2.0 * c * c / (1.0 + c)) < 1e-14);
            assert!(rel(ctx.f_ij, (1.0 - c) * (1.0 + 2.0 * c) / s) < 1e-13);
        }
    }

    /// j in Q-basis coordinates and its image under Q.
    fn j_vectors(phi: f64) -> (Vec3Q, Vec3Q) {
        let (c, s) = (phi.cos(), phi.sin());
        let j = Vec3Q::new(-c / s, 1.0 / s, 0.0);
        (j, apply_q(j))
    }

    #[test]
    fn inner_product_table_matches_three_dimensional_gram() {
        // Independent route: evaluate g with the 3-D circulant Gram matrix.
        for k in 1..120 {
            let phi = PHI_MAX * k as f64 / 120.0;
            let frame = QFrame::new(phi).unwrap();
            let ctx = build_plane(phi).unwrap();
            let table = InnerProductTable::new(ctx.c, ctx.s);
            let i = Vec3Q::new(1.0, 0.0, 0.0);
            let (j, qj) = j_vectors(phi);
            let qi = apply_q(i);
            assert!(rel(frame.g_inner(j, j), 1.0) < 1e-12);
            assert!(frame.g_inner(i, j).abs() < 1e-12);
            assert!(rel(table.g_i_qi, frame.g_inner(i, qi)) < 1e-12);
            assert!(rel(table.g_i_qj, frame.g_inner(i, qj)) < 1e-12);
            assert!(rel(table.g_j_qi, frame.g_inner(j, qi)) < 1e-12);
            assert!(rel(table.g_j_qj, frame.g_inner(j, qj)) < 1e-12);
            assert!(rel(ctx.f_ij, frame.f_inner(i, j)) < 1e-12);
            assert!(rel(ctx.f_jj, frame.f_inner(j, j)) < 1e-12);
        }
    }

    #[test]
    fn circle_examples() {
        let ctx = build_plane(FRAC_PI_3).unwrap();
        for scale in [1.0, -2.5, 1e3] {
            for k in [ctx.k1.unwrap(), ctx.k2.unwrap()] {
                let (x, y) = (scale, scale * k);
                let r = circle_residual(&ctx, 0.0, x, y);
                let mag = ctx.c * x * x + (ctx.f_ij * x * y).abs() + (ctx.f_jj * y * y).abs();
                assert!(r.abs() <= 1e-12 * mag.max(1.0), "{r}");
            }
        }
        assert_eq!(circle_residual(&ctx, 0.0, 0.0, 0.0), 0.0);
        assert!(circle_residual(&ctx, 1.0, 1.0, 0.0).abs() < 1e-15);
    }

    #[test]
    fn circle_matches_f_norm() {
        for phi in [0.3, FRAC_PI_3, 1.2, 1.8, 2.05] {
            let ctx = build_plane(phi).unwrap();
            for (x, y) in [(1.0, 0.5), (-0.3, 2.0), (4.0, -7.0)] {
                let lhs = 2.0 * circle_residual(&ctx, 0.0, x, y);
                assert!(rel(lhs, ctx.f_norm(x, y)) < 1e-12);
                // And a point with f(w,w) = a² sits on the a-circle.
                let a2 = ctx.f_norm(x, y);
                if a2 > 0.0 {
                    assert!(circle_residual(&ctx, a2.sqrt(), x, y).abs() < 1e-12 * a2.max(1.0));
                }
            }
        }
    }

    #[test]
    fn cross_coefficient_identity() {
        for k in 1..500 {
            let phi = 0.02 + (case_b_phi() - 0.04) * k as f64 / 500.0;
            let ctx = build_plane(phi).unwrap();
            if ctx.case != PlaneCase::TwoDirections {
                continue;
            }
            let (k1, k2) = (ctx.k1.unwrap(), ctx.k2.unwrap());
            assert!(
                rel(ctx.pairing(k2, k1), ctx.cross_coefficient()) < 1e-12,
                "phi {phi}"
            );
            // Same-direction pairings vanish.
            assert!(ctx.pairing(k1, k1).abs() < 1e-9 * ctx.pairing(k1, k2).abs().max(1.0));
        }
    }

    #[test]
    fn cross_work_examples() {
        let ctx = build_plane(FRAC_PI_3).unwrap();
        let one = parse("1").unwrap();
        let r = work_cross(&ctx, &one, Line::C2, Line::C1, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 10.0).abs() < 1e-12);
        assert_eq!(r.method, WorkMethod::PlaneCross);
        // Oracle: f(i + k2 j, i + k1 j) directly from the plane's f-values.
        assert!(rel(ctx.pairing(ctx.k2.unwrap(), ctx.k1.unwrap()), 10.0) < 1e-13);

        let r = work_cross(&ctx, &one, Line::C1, Line::C1, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!((r.value, r.method), (0.0, WorkMethod::PlaneSameDirection));

        let b = build_plane(case_b_phi()).unwrap();
        let r = work_cross(
            &b,
            &parse("x^2 + y").unwrap(),
            Line::C1,
            Line::C2,
            0.0,
            1.0,
            1e-12,
        )
        .unwrap();
        assert_eq!(r.value, 0.0);

        let d = build_plane(FRAC_PI_2).unwrap();
        assert!(matches!(
            work_cross(&d, &one, Line::C1, Line::C2, 0.0, 1.0, 1e-12),
            Err(Error::CaseMismatch { .. })
        ));
        assert!(matches!(
            work_cross(
                &ctx,
                &parse("z").unwrap(),
                Line::C1,
                Line::C2,
                0.0,
                1.0,
                1e-12
            ),
            Err(Error::UnexpectedVariable(_))
        ));
    }

    #[test]
    fn cross_work_integrates_along_the_target_line() {
        let ctx = build_plane(1.0).unwrap();
        let (k1, k2) = (ctx.k1.unwrap(), ctx.k2.unwrap());
        let p = parse("y").unwrap();
        // ∫₀² k·t dt = 2k
        let r = work_cross(&ctx, &p, Line::C2, Line::C1, 0.0, 2.0, 1e-12).unwrap();
        assert!(rel(r.value, ctx.cross_coefficient() * 2.0 * k1) < 1e-13);
        let r = work_cross(&ctx, &p, Line::C1, Line::C2, 0.0, 2.0, 1e-12).unwrap();
        assert!(rel(r.value, ctx.cross_coefficient() * 2.0 * k2) < 1e-13);
    }

    #[test]
    fn right_angle_examples() {
        let one = parse("1").unwrap();
        let sum = parse("x+y").unwrap();
        use RightAngleOrientation::*;
        assert_eq!(
            work_right_angle(&one, ForceAlongQi, 0.0, 1.0, 1e-12)
                .unwrap()
                .value,
            1.0
        );
        assert!(
            (work_right_angle(&sum, ForceAlongQi, 0.0, 1.0, 1e-12)
                .unwrap()
                .value
                - 0.5)
                .abs()
                < 1e-15
        );
        assert!(
            (work_right_angle(&sum, ForceAlongI, 0.0, 1.0, 1e-12)
                .unwrap()
                .value
                - 0.5)
                .abs()
                < 1e-15
        );
        let asym = parse("x^2").unwrap();
        assert!(
            (work_right_angle(&asym, ForceAlongQi, 0.0, 1.0, 1e-12)
                .unwrap()
                .value
                - 1.0 / 3.0)
                .abs()
                < 1e-15
        );
        assert_eq!(
            work_right_angle(&asym, ForceAlongI, 0.0, 1.0, 1e-12)
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn dispatch_covers_every_case() {
        let one = parse("1").unwrap();
        let x = parse("x").unwrap();
        let d = build_plane(FRAC_PI_2).unwrap();
        assert!(
            (work_between(&d, &x, Line::C1, Line::C2, 0.0, 2.0, 1e-12)
                .unwrap()
                .value
                - 2.0)
                .abs()
                < 1e-14
        );
        assert_eq!(
            work_between(&d, &x, Line::C2, Line::C1, 0.0, 2.0, 1e-12)
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(
            work_between(&d, &one, Line::C2, Line::C2, 0.0, 2.0, 1e-12)
                .unwrap()
                .method,
            WorkMethod::PlaneSameDirection
        );
        let c = build_plane(FRAC_PI_3).unwrap();
        assert!(
            (work_between(&c, &one, Line::C1, Line::C2, 0.0, 1.0, 1e-12)
                .unwrap()
                .value
                - 10.0)
                .abs()
                < 1e-12
        );
        let a = build_plane(2.0).unwrap();
        assert!(matches!(
            work_between(&a, &one, Line::C1, Line::C2, 0.0, 1.0, 1e-12),
            Err(Error::CaseMismatch { actual: "A", .. })
        ));
    }

    #[test]
    fn right_angle_pairing_is_unity() {
        let frame = QFrame::orthonormal();
        let i = Vec3Q::new(1.0, 0.0, 0.0);
        assert_eq!(frame.f_inner(apply_q(i), i), RIGHT_ANGLE_PAIRING);
    }

    #[test]
    fn table_pattern() {
        let t = table1_report(
            &parse("1").unwrap(),
            0.0,
            1.0,
            1e-12,
            RegimeAngles::default(),
        )
        .unwrap();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.rows[0].work, TableEntry::Absent);
        for r in &t.rows[1..4] {
            assert_eq!(r.work, TableEntry::Zero);
        }
        let values: Vec<f64> = t.rows[4..]
            .iter()
            .map(|r| match r.work {
                TableEntry::Value(v) => v,
                other => panic!("{other:?}"),
            })
            .collect();
        assert!((values[0] - 10.0).abs() < 1e-12);
        assert!((values[1] - 10.0).abs() < 1e-12);
        assert_eq!(&values[2..], &[1.0, 1.0]);
        assert_eq!(t.rows[1].case, PlaneCase::DoubleRoot);
        assert_eq!(t.rows[6].case, PlaneCase::RightAngle);
    }

    #[test]
    fn table_rejects_misplaced_angles() {
        let angles = RegimeAngles {
            no_isotropic: FRAC_PI_3,
            ..RegimeAngles::default()
        };
        assert!(table1_report(&parse("1").unwrap(), 0.0, 1.0, 1e-12, angles).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn phi_in_plane() -> impl Strategy<Value = f64> {
            (1e-3..PHI_MAX).prop_filter("away from pi/2", |p| (p - FRAC_PI_2).abs() > 1e-6)
        }

        proptest! {
            #[test]
            fn discriminant_expansion(phi in phi_in_plane()) {
                let (c, s) = (phi.cos(), phi.sin());
                let lhs = quadratic_discriminant(c, s);
                prop_assert!((lhs - discriminant(c)).abs() <= 1e-12 * lhs.abs().max(1.0));
            }

            #[test]
            fn roots_and_vieta(phi in phi_in_plane()) {
                let ctx = build_plane(phi).unwrap();
                if let (Some(k1), Some(k2)) = (ctx.k1, ctx.k2) {
                    let (c, s) = (ctx.c, ctx.s);
                    prop_assert!(k1 <= k2);
                    prop_assert!(root_residual(c, s, k1) <= 1e-12);
                    prop_assert!(root_residual(c, s, k2) <= 1e-12);
                    if ctx.case == PlaneCase::TwoDirections {
                        let sum = s * (1.0 + 2.0 * c) / (c * c);
                        let prod = -(1.0 + c) / c;
                        prop_assert!(rel(k1 + k2, sum) <= 1e-10);
                        prop_assert!(rel(k1 * k2, prod) <= 1e-10);
                    }
                } else {
                    prop_assert_eq!(ctx.case, PlaneCase::NoIsotropic);
                }
            }

            #[test]
            fn circle_is_half_the_f_norm(phi in phi_in_plane(), x in -10.0..10.0f64, y in -10.0..10.0f64) {
                let ctx = build_plane(phi).unwrap();
                let lhs = 2.0 * circle_residual(&ctx, 0.0, x, y);
                let mag = ctx.f_ii.abs() * x * x + 2.0 * (ctx.f_ij * x * y).abs() + ctx.f_jj.abs() * y * y;
                prop_assert!((lhs - ctx.f_norm(x, y)).abs() <= 1e-12 * mag.max(1.0));
            }
        }
    }
}
