//! The summary table of work along isotropic lines for a chosen P.
//!
//! Run with `cargo run --example table1 -- "1 + x*y"`.

use isowork::expr::parse;
use isowork::plane2::{table1_report, RegimeAngles, TableEntry};

fn main() -> isowork::Result<()> {
    let src = std::env::args().nth(1).unwrap_or_else(|| "1".into());
    let table = table1_report(&parse(&src)?, 0.0, 1.0, 1e-12, RegimeAngles::default())?;
    println!("P = {src}, t in [0, 1]");
    for row in &table.rows {
        let value = match row.work {
            TableEntry::Absent => "no is. curves".to_string(),
            TableEntry::Zero => "0".to_string(),
            TableEntry::Value(v) => format!("{v:.12}"),
        };
        println!(
            "{:<34} {:<15} {:<15} {value}",
            row.regime, row.acts_on, row.trajectory
        );
    }
    Ok(())
}
