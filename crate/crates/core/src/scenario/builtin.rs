//! Closed-form canonical models shipped with the crate.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;

use super::{ExtComplex, FixedPointDatum, Role, Weights};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltIn {
    /// `h(z) = log((1+z)/(1-z)) / a`: a hyperbolic automorphism group.
    StripFlow { a: f64 },
    /// `h(z) = asinh((1-z)/(1+z)) - asinh(1)`: image is a half-strip of height pi.
    HalfStrip,
    /// `h(z) = log(1+z^2)/2 - log(1+z)`: a strip with one slit, two repelling points.
    Trident,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `asinh(1) = log(1 + sqrt 2)`.
pub(crate) fn asinh_one() -> f64 {
    1f64.asinh()
}

impl BuiltIn {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltIn::StripFlow { .. } => "strip_flow",
            BuiltIn::HalfStrip => "half_strip",
            BuiltIn::Trident => "trident",
        }
    }

    /// Source of the Koenigs function in the expression language.
    pub(crate) fn h_source(&self) -> String {
        match self {
            BuiltIn::StripFlow { a } => format!("(1/({a:?}))*log((1+z)/(1-z))"),
            BuiltIn::HalfStrip => {
                "log((1-z)/(1+z) + sqrt(((1-z)/(1+z))^2 + 1)) - log(1 + sqrt(2))".to_string()
            }
            BuiltIn::Trident => "0.5*log(1+z^2) - log(1+z)".to_string(),
        }
    }

    /// A branch of `log h'` that is continuous on the disk, up to an additive constant.
    pub(crate) fn log_derivative_source(&self) -> String {
        match self {
            BuiltIn::StripFlow { a } => format!("log(2/({a:?})) - log(1-z^2)"),
            // h' = -2 / ((1+z)^2 sqrt(1 + xi^2)), xi = (1-z)/(1+z)
            BuiltIn::HalfStrip => {
                "log(2) - 2*log(1+z) - 0.5*log(1 + ((1-z)/(1+z))^2)".to_string()
            }
            // h' = -(1-z) / ((1+z^2)(1+z))
            BuiltIn::Trident => "log(1-z) - log(1+z^2) - log(1+z)".to_string(),
        }
    }

    /// Boundary point that carries the `(z - zeta)^d` weight factor, if any.
    pub fn weight_carrier(&self) -> Option<Complex64> {
        match self {
            BuiltIn::StripFlow { .. } => Some(c(-1.0, 0.0)),
            BuiltIn::HalfStrip => None,
            BuiltIn::Trident => Some(c(0.0, 1.0)),
        }
    }

    /// Fixed points with their spectral values; `beta` follows from the weight family:
    /// `beta_j = c - s*alpha_j - d*alpha_j*[zeta_j carries the factor]`.
    pub fn fixed_points(&self, w: &Weights) -> Vec<FixedPointDatum> {
        let raw: Vec<(Complex64, f64, Role)> = match self {
            BuiltIn::StripFlow { a } => vec![
                (c(1.0, 0.0), *a, Role::DenjoyWolff),
                (c(-1.0, 0.0), -*a, Role::Repelling),
            ],
            BuiltIn::HalfStrip => vec![(c(-1.0, 0.0), 1.0, Role::DenjoyWolff)],
            BuiltIn::Trident => vec![
                (c(-1.0, 0.0), 1.0, Role::DenjoyWolff),
                (c(0.0, 1.0), -2.0, Role::Repelling),
                (c(0.0, -1.0), -2.0, Role::Repelling),
            ],
        };
        let carrier = self.weight_carrier();
        raw.into_iter()
            .map(|(zeta, alpha, role)| {
                let carries = carrier.is_some_and(|q| (q - zeta).norm() < 1e-12);
                let d_shift = if carries { w.d * alpha } else { 0.0 };
                FixedPointDatum {
                    zeta,
                    alpha,
                    beta: ExtComplex::Finite(c(w.c - w.s * alpha - d_shift, 0.0)),
                    role,
                }
            })
            .collect()
    }

    /// Imaginary centre line of the petal strip `h(Delta_j)` for a repelling point.
    pub(crate) fn petal_midline(&self, zeta: Complex64) -> f64 {
        match self {
            BuiltIn::Trident if zeta.im > 0.5 => -FRAC_PI_4,
            BuiltIn::Trident => FRAC_PI_4,
            _ => 0.0,
        }
    }

    /// Whether `w` lies in `Omega = h(D)`.
    pub fn in_omega(&self, w: Complex64) -> bool {
        match self {
            BuiltIn::StripFlow { a } => w.im.abs() < FRAC_PI_2 / a,
            BuiltIn::HalfStrip => w.im.abs() < FRAC_PI_2 && w.re > -asinh_one(),
            BuiltIn::Trident => {
                w.im.abs() < FRAC_PI_2 && !(w.im == 0.0 && w.re <= -0.5 * LN_2)
            }
        }
    }

    /// Closed-form `h^{-1}(w)`; the caller checks membership in `Omega`.
    pub(crate) fn inverse(&self, w: Complex64) -> Complex64 {
        match self {
            BuiltIn::StripFlow { a } => stable_tanh(0.5 * a * w),
            BuiltIn::HalfStrip => {
                let xi = (w + asinh_one()).sinh();
                (1.0 - xi) / (1.0 + xi)
            }
            BuiltIn::Trident => {
                // e^{2w} (1+z)^2 = 1 + z^2, i.e. (q-1) z^2 + 2q z + (q-1) = 0.
                // The roots multiply to 1; take the one inside the disk in the
                // cancellation-free form z = (q-1) / (-q -+ sqrt(2q-1)).
                let q = (2.0 * w).exp();
                let s = (2.0 * q - 1.0).sqrt();
                let d1 = -q - s;
                let d2 = -q + s;
                let den = if d1.norm() >= d2.norm() { d1 } else { d2 };
                (q - 1.0) / den
            }
        }
    }

    /// Semiflow generator `G = 1/h'` as an explicit algebraic function.
    pub(crate) fn generator(&self, z: Complex64) -> Complex64 {
        match self {
            BuiltIn::StripFlow { a } => 0.5 * a * (1.0 - z * z),
            BuiltIn::HalfStrip => -0.5 * (1.0 + z) * (2.0 + 2.0 * z * z).sqrt(),
            BuiltIn::Trident => (1.0 + z * z) * (1.0 + z) / (z - 1.0),
        }
    }

    /// `G'` as an explicit algebraic function.
    pub(crate) fn generator_derivative(&self, z: Complex64) -> Complex64 {
        match self {
            BuiltIn::StripFlow { a } => -a * z,
            BuiltIn::HalfStrip => {
                let r = (2.0 + 2.0 * z * z).sqrt();
                -0.5 * (r + 2.0 * z * (1.0 + z) / r)
            }
            BuiltIn::Trident => {
                let n = (1.0 + z * z) * (1.0 + z);
                let dn = 1.0 + 2.0 * z + 3.0 * z * z;
                let d = z - 1.0;
                (dn * d - n) / (d * d)
            }
        }
    }

    /// `G(z) / (z - q)` for the weight carrier `q`, free of cancellation near `q`.
    fn generator_over_carrier(&self, z: Complex64) -> Complex64 {
        match self {
            BuiltIn::StripFlow { a } => 0.5 * a * (1.0 - z),
            BuiltIn::Trident => (z + c(0.0, 1.0)) * (1.0 + z) / (z - 1.0),
            BuiltIn::HalfStrip => c(0.0, 0.0),
        }
    }

    /// Cocycle generator `g = c + s G' + d G/(z - q)` of the weight family.
    ///
    /// Stays accurate where `z` is within rounding distance of a fixed point,
    /// where the quotient `v'/(v h')` of two large quantities does not.
    pub(crate) fn cocycle_generator(&self, w: &Weights, z: Complex64) -> Complex64 {
        let mut g = c(w.c, 0.0);
        if w.s != 0.0 {
            g += w.s * self.generator_derivative(z);
        }
        if w.d != 0.0 {
            g += w.d * self.generator_over_carrier(z);
        }
        g
    }

    pub fn omega_height(&self) -> f64 {
        match self {
            BuiltIn::StripFlow { a } => PI / a,
            _ => PI,
        }
    }
}

/// `tanh` that stays finite for large real parts.
fn stable_tanh(x: Complex64) -> Complex64 {
    if x.re.abs() < 20.0 {
        x.tanh()
    } else {
        // tanh x = sign * (1 - e^{-2|x|}) / (1 + e^{-2|x|}) with e^{-2|x|} small
        let sign = x.re.signum();
        let e = (-2.0 * sign * x).exp();
        sign * (1.0 - e) / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trident_inverse_picks_interior_root() {
        let t = BuiltIn::Trident;
        let h = crate::expr::AnalyticExpr::parse(&t.h_source()).unwrap();
        for z in [c(0.3, 0.2), c(-0.5, 0.1), c(0.0, -0.7), c(0.9, 0.0)] {
            let w = h.eval(z);
            assert!((t.inverse(w) - z).norm() < 1e-12, "{z}");
        }
        assert!(t.inverse(c(0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn half_strip_inverse() {
        let t = BuiltIn::HalfStrip;
        let h = crate::expr::AnalyticExpr::parse(&t.h_source()).unwrap();
        for z in [c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.8)] {
            let w = h.eval(z);
            assert!(t.in_omega(w));
            assert!((t.inverse(w) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn trident_slit_is_outside() {
        let t = BuiltIn::Trident;
        assert!(!t.in_omega(c(-1.0, 0.0)));
        assert!(t.in_omega(c(-1.0, 0.1)));
        assert!(t.in_omega(c(-0.2, 0.0)));
    }

    #[test]
    fn explicit_generators_match_derivative_propagation() {
        for kind in [BuiltIn::StripFlow { a: 1.5 }, BuiltIn::HalfStrip, BuiltIn::Trident] {
            let h = crate::expr::AnalyticExpr::parse(&kind.h_source()).unwrap();
            for z in [c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.8), c(0.0, 0.0)] {
                let j = h.jet(z);
                let g = 1.0 / j.d1;
                let dg = -j.d2 / (j.d1 * j.d1);
                assert!((kind.generator(z) - g).norm() < 1e-13, "{kind:?} {z}");
                assert!((kind.generator_derivative(z) - dg).norm() < 1e-12, "{kind:?} {z}");
            }
        }
    }

    #[test]
    fn stable_tanh_large_argument() {
        let x = stable_tanh(c(30.0, 0.1));
        assert!((x - c(1.0, 0.0)).norm() < 1e-20 + 1e-15);
        assert!(x.is_finite());
    }
}
