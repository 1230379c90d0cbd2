//! Completing a force and a curve so that both are isotropic.
//!
//! Given P, R the third force component S = −PR/(P+R) makes F null; given
//! x(t), y(t) the third coordinate z' = −x'y'/(x'+y') makes the tangent null.
//!
//! Run with `cargo run --example isotropic_completion`.

use isowork::algebra::isotropy_residual_orthonormal;
use isowork::expr::parse;
use isowork::fields::{
    chebyshev_points, complete_isotropic_curve, complete_isotropic_force, curve_isotropy_residual,
};

fn main() -> isowork::Result<()> {
    let f = complete_isotropic_force(parse("2 + sin(x)")?, parse("1 + y^2")?)?;
    println!("S = {}", f.s());

    let grid = chebyshev_points(0.0, 1.0, 16);
    let c = complete_isotropic_curve(parse("t + t^2")?, parse("exp(t)")?, 0.0, 0.0, 1.0, &grid)?;
    for t in [0.0, 0.5, 1.0] {
        let p = c.point(t)?;
        let force = f.at(p.position)?;
        println!(
            "t = {t}: r = ({:.6}, {:.6}, {:.6}), F residual {:.1e}, r' residual {:.1e}",
            p.position.u,
            p.position.v,
            p.position.q,
            isotropy_residual_orthonormal(force),
            curve_isotropy_residual(&c, t)?
        );
    }

    let flat = complete_isotropic_curve(parse("t")?, parse("-t")?, 0.0, 0.0, 1.0, &grid);
    println!("x' + y' = 0 cannot be completed: {}", flat.unwrap_err());
    Ok(())
}
