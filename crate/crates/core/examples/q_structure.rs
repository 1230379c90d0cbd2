//! Gram matrices, the associated metric and vector classes for a few angles.
//!
//! Run with `cargo run --example q_structure`.

use isowork::algebra::{apply_q, QFrame, Vec3Q};

fn main() -> isowork::Result<()> {
    for phi in [0.6, std::f64::consts::FRAC_PI_2, 1.9] {
        let frame = if phi == std::f64::consts::FRAC_PI_2 {
            QFrame::orthonormal()
        } else {
            QFrame::new(phi)?
        };
        println!("phi = {phi:.4}, cos = {:.4}", frame.cos_phi());
        println!("  g eigenvalues {:?}", frame.g_eigenvalues());
        println!(
            "  f eigenvalues {:?}, signature {:?}",
            frame.f_eigenvalues(),
            frame.f_signature()
        );
    }

    let frame = QFrame::orthonormal();
    let r = Vec3Q::new(1.0, 2.0, -2.0 / 3.0);
    println!(
        "Q r = {:?}, Q³ r = {:?}",
        apply_q(r),
        apply_q(apply_q(apply_q(r)))
    );
    for v in [r, Vec3Q::new(1.0, 1.0, 1.0), Vec3Q::new(1.0, -1.0, 0.0)] {
        let class = frame.classify(v);
        println!("{v:?}: f(r, r) = {:.3}, {:?}", class.f_norm, class.tag);
    }
    Ok(())
}
