//! Runs the self-check suite and prints the slowest checks.
//!
//! Run with `cargo run --release --example verify_suite`.

fn main() {
    let summary = isowork::verify::run();
    let mut checks = summary.checks.clone();
    checks.sort_by(|a, b| b.seconds.total_cmp(&a.seconds));
    for c in checks.iter().take(5) {
        println!("{:<46} {:.3}s", c.name, c.seconds);
    }
    println!(
        "{}/{} passed in {:.3}s",
        summary.passed,
        summary.checks.len(),
        summary.seconds
    );
    if !summary.all_passed() {
        std::process::exit(1);
    }
}
