//! Integrals along semiflow orbits.
//!
//! The weight is never evaluated far along an orbit. Instead
//! `log v(φ_{±t} b) - log v(b) = ±∫_0^t g(φ_{±s} b) ds` is accumulated with a
//! spectral integration matrix, which stays accurate where the orbit has
//! reached rounding distance of its limiting fixed point.

use num_complex::Complex64;

use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Orbit direction: `Forward` follows `φ_t`, `Backward` follows `φ_{-t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// Nodes per orbit chunk.
const NODES: usize = 16;
/// Base chunk length in `t`.
pub const CHUNK: f64 = 0.5;
/// Deepest halving of a base chunk.
const MAX_DEPTH: usize = 10;
const LOG_TOL: f64 = 1e-12;

/// Point on an orbit, with `log v(z) - log v(b)` relative to the base point.
#[derive(Debug, Clone, Copy)]
pub struct OrbitNode {
    pub t: f64,
    pub z: Complex64,
    pub log_ratio: Complex64,
}

/// Result of advancing a walker by one chunk.
#[derive(Debug, Clone)]
pub struct Advance {
    pub integral: Complex64,
    pub error: f64,
    /// `(t, |q(t)|)` at every node used.
    pub samples: Vec<(f64, f64)>,
}

struct Segment {
    a: f64,
    b: f64,
    integral: Complex64,
    log_end: Complex64,
    samples: Vec<(f64, f64)>,
}

/// Walks one orbit in fixed chunks, integrating a user integrand
/// `q(node)` and the log-weight together.
pub struct OrbitWalker<'a> {
    s: &'a Scenario,
    w0: Complex64,
    sign: f64,
    rule: GaussLegendre,
    smat: Vec<Vec<f64>>,
    t: f64,
    log_ratio: Complex64,
}

impl<'a> OrbitWalker<'a> {
    pub fn new(s: &'a Scenario, base: Complex64, direction: Direction) -> Result<Self> {
        let rule = GaussLegendre::new(NODES);
        let smat = rule.integration_matrix();
        Ok(OrbitWalker {
            s,
            w0: s.h(base)?,
            sign: direction.sign(),
            rule,
            smat,
            t: 0.0,
            log_ratio: Complex64::new(0.0, 0.0),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `log v(φ_{±t} b) - log v(b)` at the current time.
    pub fn log_ratio(&self) -> Complex64 {
        self.log_ratio
    }

    fn segment<Q>(&self, a: f64, b: f64, log_a: Complex64, q: &mut Q) -> Result<Segment>
    where
        Q: FnMut(&OrbitNode) -> Result<Complex64>,
    {
        let half = 0.5 * (b - a);
        let mut zs = Vec::with_capacity(NODES);
        let mut gs = Vec::with_capacity(NODES);
        let mut ts = Vec::with_capacity(NODES);
        for &x in &self.rule.nodes {
            let t = a + half * (x + 1.0);
            let z = self.s.orbit_point(self.w0 + self.sign * t)?;
            gs.push(self.s.orbit_generator_g(z)?);
            zs.push(z);
            ts.push(t);
        }
        let scale = self.sign * half;
        let mut integral = Complex64::new(0.0, 0.0);
        let mut samples = Vec::with_capacity(NODES);
        for i in 0..NODES {
            let acc: Complex64 = self.smat[i].iter().zip(&gs).map(|(s, g)| *s * g).sum();
            let node = OrbitNode {
                t: ts[i],
                z: zs[i],
                log_ratio: log_a + scale * acc,
            };
            let v = q(&node)?;
            if !v.is_finite() {
                return Err(Error::Evaluation(format!("orbit integrand at t = {}", ts[i])));
            }
            samples.push((ts[i], v.norm()));
            integral += v * self.rule.weights[i];
        }
        let total: Complex64 = self.rule.weights.iter().zip(&gs).map(|(w, g)| *w * g).sum();
        Ok(Segment {
            a,
            b,
            integral: integral * half,
            log_end: log_a + scale * total,
            samples,
        })
    }

    fn refine<Q>(
        &self,
        whole: Segment,
        log_a: Complex64,
        q: &mut Q,
        tol_per_unit: f64,
        depth: usize,
    ) -> Result<(Segment, f64)>
    where
        Q: FnMut(&OrbitNode) -> Result<Complex64>,
    {
        let (a, b) = (whole.a, whole.b);
        let m = 0.5 * (a + b);
        let left = self.segment(a, m, log_a, q)?;
        let right = self.segment(m, b, left.log_end, q)?;
        let err = (whole.integral - left.integral - right.integral).norm();
        let log_err = (whole.log_end - right.log_end).norm();
        let ok = err <= tol_per_unit * (b - a) && log_err <= LOG_TOL * (1.0 + right.log_end.norm());
        if ok || depth >= MAX_DEPTH {
            let mut samples = left.samples;
            samples.extend(right.samples);
            return Ok((
                Segment {
                    a,
                    b,
                    integral: left.integral + right.integral,
                    log_end: right.log_end,
                    samples,
                },
                err,
            ));
        }
        let (l, el) = self.refine(left, log_a, q, tol_per_unit, depth + 1)?;
        // The right half restarts from the refined left end point.
        let right = self.segment(m, b, l.log_end, q)?;
        let (r, er) = self.refine(right, l.log_end, q, tol_per_unit, depth + 1)?;
        let mut samples = l.samples;
        samples.extend(r.samples);
        Ok((
            Segment {
                a,
                b,
                integral: l.integral + r.integral,
                log_end: r.log_end,
                samples,
            },
            el + er,
        ))
    }

    /// Advances by `dt`, integrating `q` to an absolute accuracy of about
    /// `tol_per_unit · dt`.
    pub fn advance<Q>(&mut self, dt: f64, q: &mut Q, tol_per_unit: f64) -> Result<Advance>
    where
        Q: FnMut(&OrbitNode) -> Result<Complex64>,
    {
        let (a, b) = (self.t, self.t + dt);
        let whole = self.segment(a, b, self.log_ratio, q)?;
        let (seg, error) = self.refine(whole, self.log_ratio, q, tol_per_unit, 0)?;
        self.t = b;
        self.log_ratio = seg.log_end;
        Ok(Advance {
            integral: seg.integral,
            error,
            samples: seg.samples,
        })
    }
}

/// Largest admissible orbit length.
pub const T_MAX: f64 = 200.0;
const T_MIN: f64 = 2.0;

/// Accuracy and step control for orbit integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    /// Target for the scaled tail bound; quadrature is held to a tenth of it.
    pub tol: f64,
    /// Base chunk length in `t` before adaptive halving.
    pub chunk: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            tol: 1e-10,
            chunk: CHUNK,
        }
    }
}

/// Truncated orbit integral `∫_0^T q(t) dt` with an exponential tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitIntegral {
    pub value: Complex64,
    pub t_end: f64,
    /// Bound on `scale · |∫_T^∞ q|`.
    pub tail_bound: f64,
    /// Estimated quadrature error of `scale · value`.
    pub quadrature_error: f64,
}

/// Integrates `q` along the orbit of `base` until the tail bound, scaled by
/// `scale`, drops below `tol`.
///
/// `rate < 0` is the assumed exponential decay rate of `|q|`. The tail
/// constant is ten times the largest observed `|q(t)| e^{-rate t}` over the last
/// tenth of the integrated range.
pub fn orbit_integral<Q>(
    s: &Scenario,
    base: Complex64,
    direction: Direction,
    rate: f64,
    scale: f64,
    opts: &OrbitOptions,
    mut q: Q,
) -> Result<OrbitIntegral>
where
    Q: FnMut(&OrbitNode) -> Result<Complex64>,
{
    if !(rate < 0.0) {
        return Err(Error::Precondition(format!(
            "orbit integrand must decay, got rate {rate}"
        )));
    }
    let tol = opts.tol;
    let mut walker = OrbitWalker::new(s, base, direction)?;
    let tol_per_unit = 0.1 * tol / (scale.max(f64::MIN_POSITIVE) * T_MAX);
    let mut value = Complex64::new(0.0, 0.0);
    let mut qerr = 0.0;
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut bound = f64::INFINITY;
    loop {
        match walker.advance(opts.chunk, &mut q, tol_per_unit) {
            Ok(step) => {
                value += step.integral;
                qerr += step.error;
                samples.extend(step.samples);
            }
            Err(Error::OutsideOmega) if direction == Direction::Backward => {
                return Err(Error::PetalExit)
            }
            Err(Error::BoundaryPrecision) => {
                return Err(Error::ToleranceFailure { achieved: bound })
            }
            Err(e) => return Err(e),
        }
        let t = walker.t();
        if t >= T_MIN - 1e-12 {
            let from = 0.9 * t;
            let c = samples
                .iter()
                .filter(|(ts, _)| *ts >= from)
                .map(|(ts, m)| m * (-rate * ts).exp())
                .fold(0.0, f64::max);
            bound = 10.0 * c * (rate * t).exp() / rate.abs() * scale;
            if bound < tol {
                return Ok(OrbitIntegral {
                    value,
                    t_end: t,
                    tail_bound: bound,
                    quadrature_error: qerr * scale,
                });
            }
        }
        if t >= T_MAX - 1e-12 {
            return Err(Error::ToleranceFailure { achieved: bound });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{BuiltIn, Weights};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn walker_log_ratio_matches_direct_weight() {
        let w = Weights { c: 0.3, s: 0.4, d: 0.5 };
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, w).unwrap();
        let b = c(0.1, 0.2);
        let mut walker = OrbitWalker::new(&s, b, Direction::Forward).unwrap();
        let mut zero = |_: &OrbitNode| Ok(c(0.0, 0.0));
        for _ in 0..4 {
            walker.advance(CHUNK, &mut zero, 1e-14).unwrap();
        }
        let direct = (s.v(s.flow(2.0, b).unwrap()).unwrap() / s.v(b).unwrap()).ln();
        assert!((walker.log_ratio() - direct).norm() < 1e-11);
    }

    #[test]
    fn backward_walk_reaches_deep_times() {
        // Strip, unweighted except s: log v ratio grows like -β t with β = -s·α.
        let w = Weights { c: 0.0, s: 1.0, d: 0.0 };
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, w).unwrap();
        let b = s.petal_anchor(1).unwrap();
        let mut walker = OrbitWalker::new(&s, b, Direction::Backward).unwrap();
        let mut zero = |_: &OrbitNode| Ok(c(0.0, 0.0));
        let mut prev = walker.log_ratio();
        for k in 0..200 {
            walker.advance(CHUNK, &mut zero, 1e-14).unwrap();
            if k > 40 {
                // β_1 = -s α_1 = 1, so log v decreases by β per unit backward time.
                let slope = (walker.log_ratio() - prev).re / CHUNK;
                assert!((slope + 1.0).abs() < 1e-9, "{slope}");
            }
            prev = walker.log_ratio();
        }
        assert_eq!(walker.t(), 100.0);
    }

    #[test]
    fn exponential_integral_with_tail() {
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap();
        let r = orbit_integral(&s, c(0.0, 0.0), Direction::Forward, -0.9, 1.0, &OrbitOptions::default(), |n| {
            Ok(c((-n.t).exp(), 0.0))
        })
        .unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-9, "{r:?}");
        assert!(r.tail_bound < 1e-10);
    }

    #[test]
    fn nondecaying_integrand_fails() {
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap();
        let r = orbit_integral(&s, c(0.0, 0.0), Direction::Forward, -0.1, 1.0, &OrbitOptions::default(), |_| {
            Ok(c(1.0, 0.0))
        });
        assert!(matches!(r, Err(Error::ToleranceFailure { .. })));
    }
}
