//! A small expression language for user-supplied scalar functions, with
//! exact forward-mode derivatives.
//!
//! Force components are written over `x`, `y`, `z`; curve coordinates over
//! `t`. Supported: `+ - * / ^`, unary minus, `sin cos tan exp log sqrt abs`,
//! and the constants `pi` and `e`.
//!
//! ```
//! use isowork::expr::{parse, eval_dual, Bindings, DualValue};
//!
//! let e = parse("t^2 + sin(t)").unwrap();
//! let d = eval_dual(&e, &Bindings::t(DualValue::variable(0.0))).unwrap();
//! assert_eq!((d.value, d.deriv), (0.0, 1.0));
//! ```

mod ast;
mod dual;
mod eval;
mod parser;

pub use ast::{pretty_print, BinaryOp, Expr, Func, UnaryOp, Var};
pub use dual::DualValue;
pub use eval::{eval, eval_dual, eval_generic, Bindings, Scalar};
pub use parser::parse;
