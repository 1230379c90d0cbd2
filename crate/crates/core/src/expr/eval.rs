use std::ops::{Add, Div, Mul, Neg, Sub};

use super::ast::{BinaryOp, Expr, Func, UnaryOp, Var};
use super::dual::DualValue;
use crate::error::{Error, Result};

/// Number types the evaluator can run over. Both `f64` and [`DualValue`]
/// share the same tree walk so their values agree bit for bit.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(v: f64) -> Self;
    fn value(self) -> f64;
    fn apply(self, func: Func) -> Self;
    fn powf(self, exponent: Self) -> Result<Self>;
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }

    fn value(self) -> f64 {
        self
    }

    fn apply(self, func: Func) -> Self {
        match func {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Abs => self.abs(),
        }
    }

    fn powf(self, exponent: Self) -> Result<Self> {
        Ok(pow_value(self, exponent))
    }
}

impl Scalar for DualValue {
    fn constant(v: f64) -> Self {
        DualValue::constant(v)
    }

    fn value(self) -> f64 {
        self.value
    }

    fn apply(self, func: Func) -> Self {
        match func {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Abs => self.abs(),
        }
    }

    fn powf(self, exponent: Self) -> Result<Self> {
        let (a, b) = (self.value, exponent.value);
        let value = pow_value(a, b);
        let mut deriv = 0.0;
        if self.deriv != 0.0 {
            deriv += b * pow_value(a, b - 1.0) * self.deriv;
        }
        if exponent.deriv != 0.0 {
            if a <= 0.0 {
                return Err(Error::Domain(format!(
                    "variable exponent needs a positive base, got {a}"
                )));
            }
            deriv += value * a.ln() * exponent.deriv;
        }
        Ok(DualValue::new(value, deriv))
    }
}

// Integer exponents go through powi so that e.g. (-2)^3 is exact.
fn pow_value(a: f64, b: f64) -> f64 {
    if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

/// Values bound to the coordinate symbols for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bindings<T> {
    slots: [Option<T>; 4],
}

impl<T: Copy> Bindings<T> {
    pub fn new() -> Self {
        Self { slots: [None; 4] }
    }

    pub fn with(mut self, var: Var, value: T) -> Self {
        self.set(var, value);
        self
    }

    pub fn set(&mut self, var: Var, value: T) {
        self.slots[var as usize] = Some(value);
    }

    pub fn get(&self, var: Var) -> Option<T> {
        self.slots[var as usize]
    }

    pub fn xyz(x: T, y: T, z: T) -> Self {
        Self::new().with(Var::X, x).with(Var::Y, y).with(Var::Z, z)
    }

    pub fn xy(x: T, y: T) -> Self {
        Self::new().with(Var::X, x).with(Var::Y, y)
    }

    pub fn t(t: T) -> Self {
        Self::new().with(Var::T, t)
    }
}

impl<T: Copy> FromIterator<(Var, T)> for Bindings<T> {
    fn from_iter<I: IntoIterator<Item = (Var, T)>>(iter: I) -> Self {
        let mut b = Bindings::new();
        for (v, x) in iter {
            b.set(v, x);
        }
        b
    }
}

/// Evaluates `e` over any [`Scalar`], raising `Domain` for division by zero,
/// logarithms of non-positive numbers, square roots of negatives and
/// non-integer powers of negative bases.
pub fn eval_generic<T: Scalar>(e: &Expr, env: &Bindings<T>) -> Result<T> {
    match e {
        Expr::Number(v) => Ok(T::constant(*v)),
        Expr::Var(v) => env
            .get(*v)
            .ok_or_else(|| Error::UnboundVariable(v.name().to_string())),
        Expr::Unary(UnaryOp::Neg, a) => Ok(-eval_generic(a, env)?),
        Expr::Binary(op, a, b) => {
            let a = eval_generic(a, env)?;
            let b = eval_generic(b, env)?;
            match op {
                BinaryOp::Add => Ok(a + b),
                BinaryOp::Sub => Ok(a - b),
                BinaryOp::Mul => Ok(a * b),
                BinaryOp::Div => {
                    if b.value() == 0.0 {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    Ok(a / b)
                }
                BinaryOp::Pow => {
                    let (base, exp) = (a.value(), b.value());
                    if base < 0.0 && exp.fract() != 0.0 {
                        return Err(Error::Domain(format!(
                            "non-integer power {exp} of negative base {base}"
                        )));
                    }
                    if base == 0.0 && exp < 0.0 {
                        return Err(Error::Domain("division by zero in 0^negative".into()));
                    }
                    a.powf(b)
                }
            }
        }
        Expr::Call(func, a) => {
            let a = eval_generic(a, env)?;
            let v = a.value();
            match func {
                Func::Log if v <= 0.0 => {
                    return Err(Error::Domain(format!("log of non-positive argument {v}")))
                }
                Func::Sqrt if v < 0.0 => {
                    return Err(Error::Domain(format!("sqrt of negative argument {v}")))
                }
                _ => {}
            }
            Ok(a.apply(*func))
        }
    }
}

pub fn eval(e: &Expr, env: &Bindings<f64>) -> Result<f64> {
    eval_generic(e, env)
}

/// Value and exact derivative. The derivative direction is set by the
/// caller through the `deriv` seeds of the bound variables.
pub fn eval_dual(e: &Expr, env: &Bindings<DualValue>) -> Result<DualValue> {
    eval_generic(e, env)
}
