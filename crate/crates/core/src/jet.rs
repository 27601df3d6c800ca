//! Second-order forward-mode jets in one variable.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value together with its first and second derivative with respect to `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    /// The independent variable seeded at `u`.
    pub const fn variable(u: f64) -> Self {
        Self::new(u, 1.0, 0.0)
    }

    /// Jet of the derivative, truncated to first order.
    ///
    /// The second channel of the result is NaN: only `value` and `d1` of
    /// anything computed from it are meaningful.
    pub fn derivative(self) -> Self {
        Self::new(self.d1, self.d2, f64::NAN)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    pub fn compose(self, f: f64, df: f64, ddf: f64) -> Self {
        Self::new(f, df * self.d1, ddf * self.d1 * self.d1 + df * self.d2)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.value, k * self.d1, k * self.d2)
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.value;
        self.compose(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * self.value))
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => self,
            _ => {
                let x = self.value;
                let nf = f64::from(n);
                self.compose(x.powi(n), nf * x.powi(n - 1), nf * (nf - 1.0) * x.powi(n - 2))
            }
        }
    }

    pub fn powf(self, p: f64) -> Self {
        let x = self.value;
        self.compose(x.powf(p), p * x.powf(p - 1.0), p * (p - 1.0) * x.powf(p - 2.0))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn tan(self) -> Self {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        self.compose(t, sec2, 2.0 * t * sec2)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.value;
        self.compose(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sinh(self) -> Self {
        let x = self.value;
        self.compose(x.sinh(), x.cosh(), x.sinh())
    }

    pub fn cosh(self) -> Self {
        let x = self.value;
        self.compose(x.cosh(), x.sinh(), x.cosh())
    }

    pub fn asinh(self) -> Self {
        let x = self.value;
        let q = 1.0 + x * x;
        let s = q.sqrt();
        self.compose(x.asinh(), 1.0 / s, -x / (q * s))
    }

    pub fn acosh(self) -> Self {
        let x = self.value;
        let q = x * x - 1.0;
        let s = q.sqrt();
        self.compose(x.acosh(), 1.0 / s, -x / (q * s))
    }

    pub fn atan(self) -> Self {
        let x = self.value;
        let q = 1.0 + x * x;
        self.compose(x.atan(), 1.0 / q, -2.0 * x / (q * q))
    }
}

impl From<f64> for Jet2 {
    fn from(value: f64) -> Self {
        Self::constant(value)
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.d1 * rhs.value + self.value * rhs.d1,
            self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet2 {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        Self::new(self.value + rhs, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Self;
    fn sub(self, rhs: f64) -> Self {
        Self::new(self.value - rhs, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        rhs.scale(self)
    }
}
