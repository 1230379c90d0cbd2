//! Work along isotropic curves: case selection, closed forms and the
//! direct quadrature cross-check.
//!
//! Run with `cargo run --example work_in_tangent_space`.

use isowork::expr::parse;
use isowork::fields::{
    chebyshev_points, complete_isotropic_curve, complete_isotropic_force, ForceField, ParamCurve,
};
use isowork::quadrature::DEFAULT_TOL;
use isowork::work3d::{work, work_direct};

fn report(name: &str, f: &ForceField, c: &ParamCurve) -> isowork::Result<()> {
    let w = work(f, c, DEFAULT_TOL)?;
    let direct = work_direct(f, c, DEFAULT_TOL)?;
    println!(
        "{name:<10} {:<10} A = {:.12}  direct {:.12}  delta {}",
        w.method.label(),
        w.value,
        direct.value,
        w.cross_check_delta
            .map_or("-".into(), |d| format!("{d:.1e}"))
    );
    Ok(())
}

fn main() -> isowork::Result<()> {
    report(
        "collinear",
        &ForceField::parse("1 + x^2", "1 + x^2", "-(1 + x^2)/2")?,
        &ParamCurve::parse("t", "t", "-t/2", 0.0, 2.0)?,
    )?;
    report(
        "vertical",
        &complete_isotropic_force(parse("2 + x")?, parse("1 + y^2")?)?,
        &ParamCurve::parse("1", "2", "t^2", 0.0, 1.0)?,
    )?;
    let grid = chebyshev_points(0.0, 1.0, 16);
    report(
        "P + R = 0",
        &ForceField::parse("0", "0", "1 + z")?,
        &complete_isotropic_curve(parse("t")?, parse("t^2")?, 0.0, 0.0, 1.0, &grid)?,
    )?;
    report(
        "general",
        &ForceField::parse("1", "1", "-1/2")?,
        &ParamCurve::parse("t", "2*t", "-2*t/3", 0.0, 1.0)?,
    )?;

    let not_null = ForceField::parse("1", "1", "1")?;
    let c = ParamCurve::parse("t", "2*t", "-2*t/3", 0.0, 1.0)?;
    println!(
        "non-isotropic force: {}",
        work(&not_null, &c, DEFAULT_TOL).unwrap_err()
    );
    Ok(())
}
