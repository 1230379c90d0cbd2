//! Self-check suite behind `isowork verify`.
//!
//! Every check draws its random inputs from a fixed-seed generator, so a run
//! is reproducible. [`Suite`] holds the few formulas a check compares
//! against; replacing one with a perturbed version makes the corresponding
//! check fail, which is how the suite itself is tested.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{apply_q, isotropy_residual_orthonormal, QFrame, Vec3Q, PHI_MAX};
use crate::expr::{eval, eval_dual, parse, pretty_print, Bindings, DualValue, Expr, Func, Var};
use crate::fields::{
    chebyshev_points, complete_isotropic_curve, complete_isotropic_force, ForceField, ParamCurve,
};
use crate::plane2::{self, build_plane, PlaneCase, RegimeAngles, TableEntry};
use crate::quadrature;
use crate::work3d::{self, WorkCase};

const SEED: u64 = 0x1507_0c0d;

type CheckFn = fn(&Suite) -> Result<String, String>;

/// Reference formulas used by the checks.
#[derive(Debug, Clone, Copy)]
pub struct Suite {
    /// Closed form of the slope discriminant as a function of cos φ.
    pub discriminant: fn(f64) -> f64,
    /// Closed form of the cross-direction work coefficient.
    pub cross_coefficient: fn(f64) -> f64,
}

impl Default for Suite {
    fn default() -> Self {
        Self {
            discriminant: plane2::discriminant,
            cross_coefficient: |c| (1.0 + 3.0 * c) / (c * c),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub checks: Vec<CheckOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub seconds: f64,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const CHECKS: &[(&str, CheckFn)] = &[
    ("q has order three", q_order_three),
    ("q is a g-isometry", q_isometry),
    ("f is symmetric", f_symmetric),
    ("f matrix spectrum", f_spectrum),
    ("orthonormal f matrix", orthonormal_f),
    ("expression round trip", expr_round_trip),
    (
        "dual derivative vs finite difference",
        dual_vs_finite_difference,
    ),
    ("quadrature polynomial exactness", quadrature_polynomials),
    ("quadrature additivity", quadrature_additivity),
    ("completions are isotropic", completions_isotropic),
    ("collinear work vanishes", collinear_work),
    ("case iv formula vs direct quadrature", case_iv_oracle),
    (
        "case ii and iii formulas vs direct quadrature",
        case_ii_iii_oracle,
    ),
    ("work reverses with the curve", reversal),
    ("case b double root", case_b_slope),
    ("discriminant identity", discriminant_identity),
    ("root residual", root_residual),
    ("vieta relations", vieta),
    ("cross coefficient identity", cross_coefficient),
    ("plane case boundaries", case_boundaries),
    ("circle consistency", circle_consistency),
    ("table pattern", table_pattern),
];

pub fn run() -> Summary {
    run_with(&Suite::default())
}

pub fn run_with(suite: &Suite) -> Summary {
    let start = Instant::now();
    let checks: Vec<CheckOutcome> = CHECKS
        .iter()
        .map(|&(name, check)| {
            let t0 = Instant::now();
            let (passed, detail) = match check(suite) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                name,
                passed,
                detail,
                seconds: t0.elapsed().as_secs_f64(),
            }
        })
        .collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    Summary {
        passed: checks.len() - failed,
        failed,
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_vec(r: &mut ChaCha8Rng, scale: f64) -> Vec3Q {
    Vec3Q::new(
        r.gen_range(-scale..scale),
        r.gen_range(-scale..scale),
        r.gen_range(-scale..scale),
    )
}

fn random_frame(r: &mut ChaCha8Rng) -> QFrame {
    QFrame::new(r.gen_range(0.05..PHI_MAX - 0.05)).expect("inside the open domain")
}

fn q_order_three(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..200 {
        let v = random_vec(&mut r, 10.0);
        ensure(apply_q(apply_q(apply_q(v))) == v, || {
            format!("Q³ {v:?} ≠ {v:?}")
        })?;
    }
    Ok("200 vectors".into())
}

fn q_isometry(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let frame = random_frame(&mut r);
        let (a, b) = (random_vec(&mut r, 5.0), random_vec(&mut r, 5.0));
        worst = worst.max(rel(
            frame.g_inner(apply_q(a), apply_q(b)),
            frame.g_inner(a, b),
        ));
    }
    ensure(worst <= 1e-13, || format!("max relative defect {worst:e}"))?;
    Ok(format!("max relative defect {worst:.1e}"))
}

fn f_symmetric(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..200 {
        let frame = random_frame(&mut r);
        let (a, b) = (random_vec(&mut r, 5.0), random_vec(&mut r, 5.0));
        let (ab, ba) = (frame.f_inner(a, b), frame.f_inner(b, a));
        ensure(ab == ba, || format!("f(a,b) = {ab} but f(b,a) = {ba}"))?;
        let m = frame.f_inner_matrix(a, b);
        ensure(rel(ab, m) <= 1e-13, || {
            format!("f via Q {ab} vs via matrix {m}")
        })?;
    }
    Ok("200 pairs".into())
}

fn f_spectrum(_: &Suite) -> Result<String, String> {
    for k in 1..100 {
        let phi = PHI_MAX * k as f64 / 100.0;
        let frame = QFrame::new(phi).map_err(|e| e.to_string())?;
        let c = frame.cos_phi();
        // circulant(a, b, b) has eigenvalues a + 2b and a − b (twice)
        let mut expect = [c - 1.0, c - 1.0, 2.0 + 4.0 * c];
        expect.sort_by(f64::total_cmp);
        let got = frame.f_eigenvalues();
        for (g, e) in got.iter().zip(expect) {
            ensure((g - e).abs() <= 1e-12, || {
                format!("phi {phi}: eigenvalues {got:?}, expected {expect:?}")
            })?;
        }
        ensure(frame.f_signature() == (1, 2, 0), || {
            format!("phi {phi}: signature {:?}", frame.f_signature())
        })?;
    }
    Ok("99 angles".into())
}

fn orthonormal_f(_: &Suite) -> Result<String, String> {
    let frame = QFrame::orthonormal();
    let expect = [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]];
    ensure(*frame.mat_f() == expect, || {
        format!("mat_f = {:?}", frame.mat_f())
    })?;
    let mut r = rng();
    for _ in 0..100 {
        let v = random_vec(&mut r, 10.0);
        let direct = 2.0 * isotropy_residual_orthonormal(v);
        let f = frame.f_inner(v, v);
        ensure((f - direct).abs() <= 1e-14 * direct.abs().max(1.0), || {
            format!("{v:?}: f = {f}, 2(uv+vq+qu) = {direct}")
        })?;
    }
    Ok("exact matrix, 100 vectors".into())
}

/// A smooth expression in `vars` that evaluates safely on [-2, 2]³.
pub fn random_smooth_expr(r: &mut ChaCha8Rng, vars: &[Var], depth: u32) -> Expr {
    if depth == 0 || r.gen_bool(0.25) {
        return if r.gen_bool(0.6) {
            Expr::var(vars[r.gen_range(0..vars.len())])
        } else {
            Expr::num((r.gen_range(0.0..2.0f64) * 4.0).round() / 4.0)
        };
    }
    let mut sub = || random_smooth_expr(r, vars, depth - 1);
    let (a, b) = (sub(), sub());
    match r.gen_range(0..8) {
        0 => a + b,
        1 => a - b,
        2 => a * b,
        3 => a / (Expr::num(1.0) + b.clone() * b),
        4 => Expr::call(Func::Sin, a),
        5 => Expr::call(Func::Cos, a),
        6 => Expr::call(Func::Exp, Expr::call(Func::Sin, a)),
        _ => Expr::call(Func::Sqrt, Expr::num(1.0) + a.clone() * a),
    }
}

fn expr_round_trip(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..300 {
        let e = random_smooth_expr(&mut r, &[Var::X, Var::Y, Var::T], 5);
        let text = pretty_print(&e);
        let back = parse(&text).map_err(|err| format!("{text}: {err}"))?;
        ensure(back == e, || format!("{text} re-parsed differently"))?;
    }
    Ok("300 expressions".into())
}

/// Central-difference comparison of `eval_dual` at `t`; returns the relative
/// discrepancy (floored at unit scale).
pub fn dual_fd_discrepancy(e: &Expr, t: f64) -> crate::Result<f64> {
    let d = eval_dual(e, &Bindings::t(DualValue::variable(t)))?;
    let h = 1e-5 * t.abs().max(1.0);
    let fp = eval(e, &Bindings::t(t + h))?;
    let fm = eval(e, &Bindings::t(t - h))?;
    let fd = (fp - fm) / (2.0 * h);
    Ok((d.deriv - fd).abs() / d.deriv.abs().max(1.0))
}

fn dual_vs_finite_difference(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let e = random_smooth_expr(&mut r, &[Var::T], 4);
        let t = r.gen_range(-2.0..2.0);
        let err =
            dual_fd_discrepancy(&e, t).map_err(|err| format!("{}: {err}", pretty_print(&e)))?;
        ensure(err <= 1e-6, || {
            format!("{} at t = {t}: relative error {err:e}", pretty_print(&e))
        })?;
        worst = worst.max(err);
    }
    Ok(format!("500 pairs, worst {worst:.1e}"))
}

fn quadrature_polynomials(_: &Suite) -> Result<String, String> {
    let rule = quadrature::rule();
    let mut r = rng();
    for deg in 0..=29 {
        let k = deg as f64 + 1.0;
        let sym = if deg % 2 == 1 { 0.0 } else { 2.0 / k };
        for (a, b, exact) in [(-1.0, 1.0, sym), (0.0, 1.0, 1.0 / k)] {
            let got = rule
                .integrate(|t| Ok(t.powi(deg)), a, b)
                .map_err(|e| e.to_string())?;
            ensure((got - exact).abs() <= 1e-15, || {
                format!("t^{deg} on [{a}, {b}]: {got} vs {exact}")
            })?;
        }
        // Random combinations: rounding in the integrand itself grows with
        // the coefficients, so the bound scales with them.
        let coef: Vec<f64> = (0..=deg).map(|_| r.gen_range(-1.0..1.0)).collect();
        let exact: f64 = coef
            .iter()
            .enumerate()
            .map(|(k, a)| a / (k as f64 + 1.0))
            .sum();
        let size: f64 = coef.iter().map(|a| a.abs()).sum();
        let got = rule
            .integrate(
                |t| Ok(coef.iter().rev().fold(0.0, |acc, a| acc * t + a)),
                0.0,
                1.0,
            )
            .map_err(|e| e.to_string())?;
        ensure((got - exact).abs() <= 1e-15 * size.max(1.0), || {
            format!("degree {deg} polynomial: {got} vs {exact}")
        })?;
    }
    let half =
        quadrature::integrate(Ok, 0.0, 1.0, quadrature::DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure((half.value - 0.5).abs() <= 1e-15, || {
        format!("∫₀¹ t dt = {}", half.value)
    })?;
    Ok("degrees 0..=29".into())
}

fn quadrature_additivity(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..50 {
        let e = random_smooth_expr(&mut r, &[Var::T], 4);
        let (a, b) = (r.gen_range(-2.0..0.0), r.gen_range(0.5..2.0));
        let m = r.gen_range(a..b);
        let f = |t: f64| eval(&e, &Bindings::t(t));
        let q = |lo, hi| quadrature::integrate(f, lo, hi, 1e-11).map_err(|err| err.to_string());
        let (whole, left, right) = (q(a, b)?, q(a, m)?, q(m, b)?);
        let delta = (whole.value - left.value - right.value).abs();
        let allowed =
            10.0 * (whole.error_estimate + left.error_estimate + right.error_estimate) + 1e-13;
        ensure(delta <= allowed, || {
            format!("{}: split differs by {delta:e}", pretty_print(&e))
        })?;
    }
    Ok("50 integrands".into())
}

fn positive_expr(r: &mut ChaCha8Rng, vars: &[Var]) -> Expr {
    let e = random_smooth_expr(r, vars, 3);
    Expr::num(r.gen_range(1.0..3.0)) + Expr::call(Func::Sin, e)
}

/// A random pair that falls in Case IV: P, R > 0, S completed; x', y' > 0,
/// z completed from z0.
pub fn random_case_iv(r: &mut ChaCha8Rng) -> crate::Result<(ForceField, ParamCurve)> {
    let xyz = [Var::X, Var::Y, Var::Z];
    let f = complete_isotropic_force(positive_expr(r, &xyz), positive_expr(r, &xyz))?;
    let t = || Expr::var(Var::T);
    let a = r.gen_range(0.5..2.0);
    let b = r.gen_range(0.5..2.0);
    let w = r.gen_range(0.5..2.0);
    // x' = a + 0.3 cos(w t) > 0, y' = b + 2 t² > 0 on any interval
    let x = Expr::num(a) * t() + Expr::num(0.3 / w) * Expr::call(Func::Sin, Expr::num(w) * t());
    let y = Expr::num(b) * t() + Expr::num(2.0 / 3.0) * t().pow(Expr::num(3.0));
    let alpha = r.gen_range(-1.0..0.0);
    let beta = alpha + r.gen_range(0.5..1.5);
    let grid = chebyshev_points(alpha, beta, 16);
    let c = complete_isotropic_curve(x, y, r.gen_range(-1.0..1.0), alpha, beta, &grid)?;
    Ok((f, c))
}

/// A random isotropic direction in the orthonormal frame.
pub fn random_isotropic_direction(r: &mut ChaCha8Rng) -> Vec3Q {
    loop {
        let (u, v) = (r.gen_range(-2.0..2.0f64), r.gen_range(-2.0..2.0f64));
        if (u + v).abs() > 0.2 {
            return Vec3Q::new(u, v, -u * v / (u + v));
        }
    }
}

/// A force m(x,y,z)·d and the line r(t) = h(t)·d, with d isotropic.
pub fn random_collinear(r: &mut ChaCha8Rng) -> crate::Result<(ForceField, ParamCurve)> {
    let d = random_isotropic_direction(r);
    let m = positive_expr(r, &[Var::X, Var::Y, Var::Z]);
    let comp = |k: f64| Expr::num(k) * m.clone();
    let f = ForceField::new(comp(d.u), comp(d.v), comp(d.q))?;
    let h =
        random_smooth_expr(r, &[Var::T], 3) + Expr::num(r.gen_range(0.5..2.0)) * Expr::var(Var::T);
    let along = |k: f64| Expr::num(k) * h.clone();
    let alpha = r.gen_range(-1.5..0.0);
    let c = ParamCurve::from_exprs(
        along(d.u),
        along(d.v),
        along(d.q),
        alpha,
        alpha + r.gen_range(0.5..1.5),
    )?;
    Ok((f, c))
}

fn completions_isotropic(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..40 {
        let (f, c) = random_case_iv(&mut r).map_err(|e| e.to_string())?;
        let (case, _) = work3d::classify_case(&f, &c).map_err(|e| e.to_string())?;
        ensure(matches!(case, WorkCase::CaseIV | WorkCase::CaseI), || {
            format!("classified {case:?}")
        })?;
    }
    Ok("40 completed pairs".into())
}

fn collinear_work(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (f, c) = random_collinear(&mut r).map_err(|e| e.to_string())?;
        let w = work3d::work(&f, &c, quadrature::DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure(
            w.value == 0.0 && w.method == WorkCase::CaseI.method(),
            || format!("{w:?}"),
        )?;
        let direct =
            work3d::work_direct(&f, &c, quadrature::DEFAULT_TOL).map_err(|e| e.to_string())?;
        let scale = collinear_scale(&f, &c).map_err(|e| e.to_string())?;
        let normalized = direct.value.abs() / scale;
        ensure(normalized <= 1e-9, || {
            format!("direct work {} (scale {scale})", direct.value)
        })?;
        worst = worst.max(normalized);
    }
    Ok(format!("100 pairs, worst direct {worst:.1e}"))
}

/// ∫|F||r'| over the curve, the natural size of a work integral.
pub fn collinear_scale(f: &ForceField, c: &ParamCurve) -> crate::Result<f64> {
    let q = quadrature::integrate(
        |t| {
            let p = c.point(t)?;
            Ok(f.at(p.position)?.coord_norm() * p.tangent.coord_norm())
        },
        c.alpha(),
        c.beta(),
        1e-6,
    )?;
    Ok(q.value.max(1.0))
}

fn case_iv_oracle(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..40 {
        let (f, c) = random_case_iv(&mut r).map_err(|e| e.to_string())?;
        let tol = quadrature::DEFAULT_TOL;
        let formula = work3d::work_case_iv(&f, &c, tol).map_err(|e| e.to_string())?;
        let direct = work3d::work_direct(&f, &c, tol).map_err(|e| e.to_string())?;
        let delta = (formula.value - direct.value).abs();
        let allowed = 10.0 * (formula.error_estimate + direct.error_estimate);
        ensure(delta <= allowed, || {
            format!(
                "formula {} vs direct {}: {delta:e} > {allowed:e}",
                formula.value, direct.value
            )
        })?;
    }
    let f = ForceField::parse("1", "1", "-1/2").map_err(|e| e.to_string())?;
    let c = ParamCurve::parse("t", "2*t", "-2*t/3", 0.0, 1.0).map_err(|e| e.to_string())?;
    let w = work3d::work(&f, &c, quadrature::DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure(
        (w.value - 1.0 / 6.0).abs() <= 1e-10 && w.method == WorkCase::CaseIV.method(),
        || format!("fixed instance {w:?}"),
    )?;
    Ok("40 random pairs and the 1/6 instance".into())
}

fn case_ii_iii_oracle(_: &Suite) -> Result<String, String> {
    let tol = quadrature::DEFAULT_TOL;
    // constant x and y: the curve runs along Q²i
    let f = complete_isotropic_force(parse("2 + x").unwrap(), parse("1 + y^2").unwrap())
        .map_err(|e| e.to_string())?;
    let c = ParamCurve::parse("1", "2", "t^2", 0.0, 1.0).map_err(|e| e.to_string())?;
    check_case(&f, &c, WorkCase::CaseII, tol)?;
    // P = R = 0: the force lies along Q²i
    let f = ForceField::parse("0", "0", "1 + z").map_err(|e| e.to_string())?;
    let c = complete_isotropic_curve(
        parse("t").unwrap(),
        parse("t^2").unwrap(),
        0.0,
        0.0,
        1.0,
        &[],
    )
    .map_err(|e| e.to_string())?;
    check_case(&f, &c, WorkCase::CaseIII, tol)?;
    Ok("one instance each".into())
}

fn check_case(f: &ForceField, c: &ParamCurve, case: WorkCase, tol: f64) -> Result<(), String> {
    let w = work3d::work(f, c, tol).map_err(|e| e.to_string())?;
    ensure(w.method == case.method(), || {
        format!("expected {}, got {}", case.label(), w.method.label())
    })?;
    ensure(w.cross_check_delta.is_some(), || {
        "cross-check did not run".into()
    })
}

fn reversal(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..10 {
        let (f, c) = random_case_iv(&mut r).map_err(|e| e.to_string())?;
        let fwd = work3d::work_direct(&f, &c, 1e-11).map_err(|e| e.to_string())?;
        let back = work3d::work_direct(&f, &c.reversed().map_err(|e| e.to_string())?, 1e-11)
            .map_err(|e| e.to_string())?;
        ensure(
            (fwd.value + back.value).abs() <= 1e-9 * fwd.value.abs().max(1.0),
            || format!("forward {} backward {}", fwd.value, back.value),
        )?;
    }
    Ok("10 pairs".into())
}

fn case_b_slope(_: &Suite) -> Result<String, String> {
    let ctx = build_plane((-1.0f64 / 3.0).acos()).map_err(|e| e.to_string())?;
    ensure(ctx.case == PlaneCase::DoubleRoot, || {
        format!("case {:?}", ctx.case)
    })?;
    let k = ctx.k1.ok_or("no root")?;
    ensure(
        (k - 2f64.sqrt()).abs() <= 1e-12 && ctx.k2 == Some(k),
        || format!("roots {:?} {:?}", ctx.k1, ctx.k2),
    )?;
    Ok(format!("k = {k}"))
}

/// 1000 angles spread over (0, 2π/3].
pub fn plane_angles(n: usize) -> Vec<f64> {
    (1..=n).map(|k| PHI_MAX * k as f64 / n as f64).collect()
}

fn discriminant_identity(suite: &Suite) -> Result<String, String> {
    let mut worst = 0.0f64;
    for phi in plane_angles(1000) {
        let (c, s) = (phi.cos(), phi.sin());
        let expanded = plane2::quadratic_discriminant(c, s);
        let closed = (suite.discriminant)(c);
        let err = rel(expanded, closed);
        ensure(err <= 1e-12, || {
            format!("phi {phi}: s²(1+2c)² + 4c³(1+c) = {expanded}, closed form {closed}")
        })?;
        worst = worst.max(err);
    }
    Ok(format!("1000 angles, worst {worst:.1e}"))
}

fn case_bc_contexts() -> impl Iterator<Item = plane2::PlaneContext> {
    plane_angles(1000)
        .into_iter()
        .filter_map(|phi| build_plane(phi).ok())
        .filter(|ctx| matches!(ctx.case, PlaneCase::DoubleRoot | PlaneCase::TwoDirections))
}

fn root_residual(_: &Suite) -> Result<String, String> {
    let mut n = 0;
    for ctx in case_bc_contexts() {
        for k in [ctx.k1, ctx.k2].into_iter().flatten() {
            let res = plane2::root_residual(ctx.c, ctx.s, k);
            ensure(res <= 1e-12, || {
                format!("phi {}: root {k} residual {res:e}", ctx.phi)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} roots"))
}

fn vieta(_: &Suite) -> Result<String, String> {
    let mut n = 0;
    for ctx in case_bc_contexts() {
        let (c, s) = (ctx.c, ctx.s);
        let (k1, k2) = (ctx.k1.unwrap(), ctx.k2.unwrap());
        let (sum, prod) = (s * (1.0 + 2.0 * c) / (c * c), -(1.0 + c) / c);
        ensure(rel(k1 + k2, sum) <= 1e-10, || {
            format!("phi {}: k1 + k2 = {}, expected {sum}", ctx.phi, k1 + k2)
        })?;
        ensure(rel(k1 * k2, prod) <= 1e-10, || {
            format!("phi {}: k1 k2 = {}, expected {prod}", ctx.phi, k1 * k2)
        })?;
        n += 1;
    }
    Ok(format!("{n} angles"))
}

/// Case-C angles, evenly spread over both components of the regime.
pub fn case_c_angles(n: usize) -> Vec<f64> {
    let b = (-1.0f64 / 3.0).acos();
    let half = n / 2;
    let lo = (1..=half).map(|k| (FRAC_PI_2 - 1e-4) * k as f64 / half as f64);
    let hi = (1..=n - half)
        .map(|k| FRAC_PI_2 + 1e-4 + (b - 1e-4 - FRAC_PI_2 - 1e-4) * k as f64 / (n - half) as f64);
    lo.chain(hi).collect()
}

fn cross_coefficient(suite: &Suite) -> Result<String, String> {
    let mut worst = 0.0f64;
    for phi in case_c_angles(500) {
        let ctx = build_plane(phi).map_err(|e| e.to_string())?;
        ensure(ctx.case == PlaneCase::TwoDirections, || {
            format!("phi {phi} is case {:?}", ctx.case)
        })?;
        let table = plane2::InnerProductTable::new(ctx.c, ctx.s);
        let (fii, fij, fjj) = table.f_values();
        let (k1, k2) = (ctx.k1.unwrap(), ctx.k2.unwrap());
        let assembled = fii + (k1 + k2) * fij + k1 * k2 * fjj;
        let closed = (suite.cross_coefficient)(ctx.c);
        let err = (assembled - closed).abs() / closed.abs();
        ensure(err <= 1e-12, || {
            format!("phi {phi}: f(i+k2 j, i+k1 j) = {assembled}, closed form {closed}")
        })?;
        worst = worst.max(err);
    }
    Ok(format!("500 angles, worst {worst:.1e}"))
}

fn case_boundaries(_: &Suite) -> Result<String, String> {
    let b = (-1.0f64 / 3.0).acos();
    let expect = [
        (b + 1e-6, PlaneCase::NoIsotropic),
        (b, PlaneCase::DoubleRoot),
        (b + 1e-12, PlaneCase::DoubleRoot),
        (b - 1e-12, PlaneCase::DoubleRoot),
        (b - 1e-6, PlaneCase::TwoDirections),
        (FRAC_PI_2, PlaneCase::RightAngle),
        (FRAC_PI_2 + 1e-10, PlaneCase::RightAngle),
        (FRAC_PI_2 - 1e-6, PlaneCase::TwoDirections),
        (0.6 * PI, PlaneCase::TwoDirections),
        (PHI_MAX, PlaneCase::NoIsotropic),
    ];
    for (phi, case) in expect {
        let got = build_plane(phi).map_err(|e| e.to_string())?.case;
        ensure(got == case, || {
            format!("phi {phi}: {got:?}, expected {case:?}")
        })?;
    }
    Ok(format!("{} angles", expect.len()))
}

fn circle_consistency(_: &Suite) -> Result<String, String> {
    let mut r = rng();
    for _ in 0..500 {
        let phi = r.gen_range(0.01..PHI_MAX);
        if (phi - FRAC_PI_2).abs() < 1e-6 {
            continue;
        }
        let ctx = build_plane(phi).map_err(|e| e.to_string())?;
        let (x, y) = (r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
        let lhs = 2.0 * plane2::circle_residual(&ctx, 0.0, x, y);
        let direct = ctx.f_ii * x * x + 2.0 * ctx.f_ij * x * y + ctx.f_jj * y * y;
        let mag =
            (ctx.f_ii * x * x).abs() + (2.0 * ctx.f_ij * x * y).abs() + (ctx.f_jj * y * y).abs();
        ensure((lhs - direct).abs() <= 1e-12 * mag.max(1.0), || {
            format!("phi {phi} ({x}, {y}): {lhs} vs {direct}")
        })?;
    }
    Ok("500 points".into())
}

fn table_pattern(_: &Suite) -> Result<String, String> {
    let p = parse("1 + x*y").unwrap();
    let t = plane2::table1_report(
        &p,
        0.0,
        1.0,
        quadrature::DEFAULT_TOL,
        RegimeAngles::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(t.rows.len() == 8, || format!("{} rows", t.rows.len()))?;
    let pattern: Vec<&str> = t
        .rows
        .iter()
        .map(|r| match r.work {
            TableEntry::Absent => "absent",
            TableEntry::Zero => "zero",
            TableEntry::Value(_) => "value",
        })
        .collect();
    let expect = [
        "absent", "zero", "zero", "zero", "value", "value", "value", "value",
    ];
    ensure(pattern == expect, || format!("pattern {pattern:?}"))?;
    Ok("8 rows".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_suite_passes() {
        let s = run();
        let failures: Vec<_> = s
            .failures()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        assert!(s.all_passed(), "{failures:#?}");
        assert_eq!(s.passed, CHECKS.len());
    }

    #[test]
    fn perturbed_discriminant_is_caught() {
        let suite = Suite {
            discriminant: |c| (1.0 + c) * (1.0 + 3.0 * c) + 1e-9,
            ..Suite::default()
        };
        let s = run_with(&suite);
        let names: Vec<_> = s.failures().map(|c| c.name).collect();
        assert_eq!(names, vec!["discriminant identity"]);
    }

    #[test]
    fn perturbed_coefficient_is_caught() {
        let suite = Suite {
            cross_coefficient: |c| (1.0 + 3.0 * c) / (c * c) * (1.0 + 1e-9),
            ..Suite::default()
        };
        let names: Vec<_> = run_with(&suite).failures().map(|c| c.name).collect();
        assert_eq!(names, vec!["cross coefficient identity"]);
    }

    #[test]
    fn case_c_angles_stay_in_regime() {
        let angles = case_c_angles(500);
        assert_eq!(angles.len(), 500);
        assert!(angles
            .iter()
            .all(|&p| build_plane(p).unwrap().case == PlaneCase::TwoDirections));
    }
}
