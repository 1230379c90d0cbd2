//! Isotropic lines of the plane {i, Qi} as the angle φ varies, and the work
//! between them.
//!
//! Run with `cargo run --example plane_isotropic_lines`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use isowork::expr::parse;
use isowork::plane2::{build_plane, iso_directions, work_between, Line};

fn main() -> isowork::Result<()> {
    let b = (-1.0f64 / 3.0).acos();
    for phi in [0.4, FRAC_PI_3, FRAC_PI_2, 1.8, b, 2.0, 2.0 * FRAC_PI_3] {
        let ctx = build_plane(phi)?;
        println!(
            "phi {phi:.6}  case {}  D = {:+.6}  lines {:?}",
            ctx.case.letter(),
            ctx.discriminant,
            iso_directions(&ctx)
        );
    }

    let ctx = build_plane(FRAC_PI_3)?;
    let p = parse("1 + x*y")?;
    for (source, target) in [
        (Line::C2, Line::C1),
        (Line::C1, Line::C2),
        (Line::C1, Line::C1),
    ] {
        let w = work_between(&ctx, &p, source, target, 0.0, 1.0, 1e-12)?;
        println!(
            "phi = pi/3, F on {source:?} moving along {target:?}: A = {:.12} ({})",
            w.value,
            w.method.label()
        );
    }
    println!("coefficient (1 + 3c)/c^2 = {}", ctx.cross_coefficient());
    Ok(())
}
