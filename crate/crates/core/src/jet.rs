//! Second-order forward-mode jets over the complex numbers.
//!
//! A [`Jet`] carries `(f, f', f'')` at a point. Arithmetic and the elementary
//! functions propagate both derivatives by the chain rule, which is enough to
//! recover `h'`, `h''` (and hence `G' = -h''/h'^2`) from a single pass over an
//! expression tree.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Jet {
    pub fn constant(value: Complex64) -> Self {
        Jet {
            value,
            d1: ZERO,
            d2: ZERO,
        }
    }

    /// The independent variable `z` seeded at a point.
    pub fn variable(z: Complex64) -> Self {
        Jet {
            value: z,
            d1: ONE,
            d2: ZERO,
        }
    }

    /// Applies a scalar function given its value and first two derivatives at `self.value`.
    fn chain(self, f0: Complex64, f1: Complex64, f2: Complex64) -> Self {
        Jet {
            value: f0,
            d1: f1 * self.d1,
            d2: f2 * self.d1 * self.d1 + f1 * self.d2,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        let r = self.value.inv();
        self.chain(self.value.ln(), r, -r * r)
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        let f1 = 0.5 / s;
        let f2 = -0.25 / (s * self.value);
        self.chain(s, f1, f2)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet::constant(ONE),
            1 => self,
            _ => {
                let nf = n as f64;
                let f0 = self.value.powi(n);
                let f1 = nf * self.value.powi(n - 1);
                let f2 = nf * (nf - 1.0) * self.value.powi(n - 2);
                self.chain(f0, f1, f2)
            }
        }
    }

    /// Principal power `self^exponent = exp(exponent * Log self)`.
    pub fn pow(self, exponent: Jet) -> Self {
        (exponent * self.ln()).exp()
    }

    pub fn recip(self) -> Self {
        let r = self.value.inv();
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            value: self.value + o.value,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            value: self.value - o.value,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            value: -self.value,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_rule_second_order() {
        // (z^2) * exp(z) at z0: f' = (2z + z^2)e^z, f'' = (2 + 4z + z^2)e^z
        let z0 = c(0.3, -0.2);
        let z = Jet::variable(z0);
        let f = (z * z) * z.exp();
        let e = z0.exp();
        assert!((f.d1 - (2.0 * z0 + z0 * z0) * e).norm() < 1e-14);
        assert!((f.d2 - (2.0 + 4.0 * z0 + z0 * z0) * e).norm() < 1e-14);
    }

    #[test]
    fn log_and_sqrt_derivatives() {
        let z0 = c(0.4, 0.1);
        let z = Jet::variable(z0);
        let one = Jet::constant(c(1.0, 0.0));
        let l = (one + z).ln();
        assert!((l.d1 - 1.0 / (1.0 + z0)).norm() < 1e-14);
        assert!((l.d2 + 1.0 / ((1.0 + z0) * (1.0 + z0))).norm() < 1e-14);
        let s = z.sqrt();
        assert!((s.d1 - 0.5 / z0.sqrt()).norm() < 1e-13);
        assert!((s.d2 + 0.25 * z0.powf(-1.5)).norm() < 1e-12);
    }

    #[test]
    fn quotient_matches_recip() {
        let z0 = c(-0.2, 0.5);
        let z = Jet::variable(z0);
        let one = Jet::constant(c(1.0, 0.0));
        let q = one / (one - z);
        let w = 1.0 - z0;
        assert!((q.d1 - 1.0 / (w * w)).norm() < 1e-13);
        assert!((q.d2 - 2.0 / (w * w * w)).norm() < 1e-13);
    }

    #[test]
    fn complex_power_is_principal() {
        let z0 = c(0.25, 0.5);
        let z = Jet::variable(z0);
        let p = z.pow(Jet::constant(c(0.5, 0.25)));
        assert!((p.value - z0.powc(c(0.5, 0.25))).norm() < 1e-14);
    }
}
