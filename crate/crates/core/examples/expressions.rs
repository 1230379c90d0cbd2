//! Parsing, printing, evaluating and differentiating field expressions.
//!
//! Run with `cargo run --example expressions`.

use isowork::expr::{eval, eval_dual, parse, pretty_print, Bindings, DualValue, Var};

fn main() -> isowork::Result<()> {
    let e = parse("-t^2 + sin(2*t) / (1 + t)")?;
    println!("parsed as {}", pretty_print(&e));

    let t = 0.75;
    let value = eval(&e, &Bindings::t(t))?;
    let d = eval_dual(&e, &Bindings::t(DualValue::variable(t)))?;
    println!("f({t}) = {value}, f'({t}) = {}", d.deriv);

    let field = parse("x*y + exp(z)")?;
    let env = Bindings::new()
        .with(Var::X, 2.0)
        .with(Var::Y, 3.0)
        .with(Var::Z, 0.0);
    println!("x*y + exp(z) at (2, 3, 0) = {}", eval(&field, &env)?);

    for bad in ["sin(", "2 * w", "log(0)"] {
        match parse(bad).and_then(|e| eval(&e, &Bindings::new())) {
            Ok(v) => println!("{bad:>8} -> {v}"),
            Err(err) => println!("{bad:>8} -> {err}"),
        }
    }
    Ok(())
}
