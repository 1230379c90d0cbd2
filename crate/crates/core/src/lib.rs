//! Work of isotropic force fields along isotropic curves.
//!
//! A three-dimensional tangent space carries a positive definite metric `g`
//! and an endomorphism `Q` with `Q³ = id` acting as a `g`-isometry. The
//! associated metric `f(r, w) = g(r, Qw) + g(Qr, w)` is indefinite, so it has
//! a cone of isotropic (null) directions. This crate computes the work
//! `A = ∫ f(F, dr)` of isotropic force fields along isotropic curves, both by
//! direct quadrature and through closed-form case formulas, and studies the
//! isotropic lines of the 2-plane spanned by `i` and `Qi`.
//!
//! Modules:
//! - [`algebra`]: Q-basis frames, the metrics `g` and `f`, vector classification
//! - [`expr`]: expression language with forward-mode derivatives
//! - [`quadrature`]: adaptive Gauss–Legendre integration
//! - [`fields`]: force fields, curves, isotropic completion, collinearity
//! - [`work3d`]: case classification and work in the tangent space
//! - [`plane2`]: isotropic lines and work in the 2-plane `{i, Qi}`
//! - [`cli`]: scenario files and reports behind the `isowork` binary
//! - [`verify`]: the self-check suite run by `isowork verify`
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod expr;
pub mod fields;
pub mod plane2;
pub mod quadrature;
pub mod verify;
pub mod work3d;

pub use error::{Error, Result};
