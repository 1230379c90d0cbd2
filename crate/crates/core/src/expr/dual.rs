use std::ops::{Add, Div, Mul, Neg, Sub};

/// First-order dual number: a value and its derivative with respect to the
/// curve parameter.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualValue {
    pub value: f64,
    pub deriv: f64,
}

impl DualValue {
    pub const fn new(value: f64, deriv: f64) -> Self {
        Self { value, deriv }
    }

    pub const fn constant(value: f64) -> Self {
        Self { value, deriv: 0.0 }
    }

    /// The independent variable at `value` (derivative seed 1).
    pub const fn variable(value: f64) -> Self {
        Self { value, deriv: 1.0 }
    }

    // Chain rule helper; a zero inner derivative short-circuits so that an
    // infinite outer derivative (e.g. sqrt at 0) doesn't turn into NaN.
    fn chain(self, value: f64, outer: impl FnOnce() -> f64) -> Self {
        let deriv = if self.deriv == 0.0 {
            0.0
        } else {
            outer() * self.deriv
        };
        Self { value, deriv }
    }

    pub fn sin(self) -> Self {
        self.chain(self.value.sin(), || self.value.cos())
    }

    pub fn cos(self) -> Self {
        self.chain(self.value.cos(), || -self.value.sin())
    }

    pub fn tan(self) -> Self {
        let t = self.value.tan();
        self.chain(t, || 1.0 + t * t)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, || e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.value.ln(), || 1.0 / self.value)
    }

    pub fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        self.chain(r, || 0.5 / r)
    }

    pub fn abs(self) -> Self {
        let sign = if self.value > 0.0 {
            1.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            0.0
        };
        Self::new(self.value.abs(), sign * self.deriv)
    }
}

impl Add for DualValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.deriv + rhs.deriv)
    }
}

impl Sub for DualValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.deriv - rhs.deriv)
    }
}

impl Mul for DualValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.deriv * rhs.value + self.value * rhs.deriv,
        )
    }
}

impl Div for DualValue {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q = self.value / rhs.value;
        Self::new(q, (self.deriv - q * rhs.deriv) / rhs.value)
    }
}

impl Neg for DualValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.deriv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let a = DualValue::new(2.0, 3.0);
        let b = DualValue::new(5.0, 7.0);
        assert_eq!(a * b, DualValue::new(10.0, 3.0 * 5.0 + 2.0 * 7.0));
    }

    #[test]
    fn quotient_rule() {
        let a = DualValue::new(1.0, 0.0);
        let t = DualValue::variable(2.0);
        // d/dt 1/t = -1/t^2
        assert_eq!(a / t, DualValue::new(0.5, -0.25));
    }

    #[test]
    fn sqrt_of_constant_zero_has_zero_derivative() {
        let r = DualValue::constant(0.0).sqrt();
        assert_eq!(r, DualValue::new(0.0, 0.0));
    }

    #[test]
    fn abs_kink() {
        assert_eq!(DualValue::new(-2.0, 1.0).abs(), DualValue::new(2.0, -1.0));
        assert_eq!(DualValue::new(0.0, 1.0).abs(), DualValue::new(0.0, 0.0));
    }
}
