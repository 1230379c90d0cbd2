//! Loading a scenario document and running it through the library, the same
//! path the `isowork` binary takes.
//!
//! Run with `cargo run --example scenario_json`.

use isowork::cli::{prepare, Scenario};
use isowork::work3d::{classify_case, work};

const SCENARIO: &str = r#"{
  "force": { "P": "2 + sin(x)", "R": "1 + y^2" },
  "curve": { "x": "t + t^2", "y": "exp(t)", "alpha": 0, "beta": 1 },
  "tol": 1e-11
}"#;

fn main() {
    let scenario = Scenario::from_json(SCENARIO).expect("valid scenario");
    let p = match prepare(scenario, None) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.code);
        }
    };
    let (case, diag) = classify_case(&p.force, &p.curve).expect("isotropic");
    println!(
        "case {}, force residual {:.1e}, curve residual {:.1e}",
        case.label(),
        diag.force_residual,
        diag.curve_residual
    );
    let w = work(&p.force, &p.curve, p.tol).expect("work");
    println!("A = {:.12} via {}", w.value, w.method.label());
    println!("{}", serde_json::to_string_pretty(&p.scenario).unwrap());
}
