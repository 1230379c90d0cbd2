//! Adaptive Gauss–Legendre integration with error estimates.
//!
//! Run with `cargo run --example quadrature`.

use isowork::quadrature::{integrate, rule, DEFAULT_TOL};

fn main() -> isowork::Result<()> {
    let r = rule();
    println!(
        "{}-point rule, weights sum to {}",
        r.nodes.len(),
        r.weights.iter().sum::<f64>()
    );

    type Case = (&'static str, fn(f64) -> f64, f64, f64, f64);
    let cases: [Case; 3] = [
        ("t^29", |t| t.powi(29), 0.0, 1.0, 1.0 / 30.0),
        ("sin", f64::sin, 0.0, std::f64::consts::PI, 2.0),
        ("sqrt", f64::sqrt, 0.0, 1.0, 2.0 / 3.0),
    ];
    for (name, f, a, b, exact) in cases {
        let q = integrate(|t| Ok(f(t)), a, b, DEFAULT_TOL)?;
        println!(
            "∫ {name} over [{a}, {b:.4}] = {:.15} (error {:.1e}, estimate {:.1e}, {} nodes)",
            q.value,
            (q.value - exact).abs(),
            q.error_estimate,
            q.nodes_used
        );
    }

    match integrate(|t| Ok(t.powf(-0.9)), 0.0, 1.0, 1e-14) {
        Ok(q) => println!("singular integrand: {}", q.value),
        Err(e) => println!("singular integrand: {e}"),
    }
    Ok(())
}
