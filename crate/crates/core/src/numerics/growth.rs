//! Exponential growth rate of the weight along orbits into a fixed point.

use serde::{Deserialize, Serialize};

use super::membership::least_squares_slope;
use super::orbit::{Direction, OrbitNode, OrbitWalker, CHUNK};
use crate::error::{Error, Result};
use crate::number::Num;
use crate::scenario::{Role, Scenario};

/// Fit window in orbit time.
pub const FIT_FROM: f64 = 5.0;
pub const FIT_TO: f64 = 40.0;
const MIN_POINTS: usize = 10;

/// Slope of `log|v|` along an orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: Num,
    pub t_from: Num,
    pub t_to: Num,
    pub points: usize,
}

/// Least-squares slope of `log|v(φ_t(b))|` against `t` (forward, toward the
/// attracting point from `b = 0`) or against `-t` (backward from the petal
/// anchor of a repelling point), over `t ∈ [5, 40]`.
pub fn coboundary_growth_exponent(
    s: &Scenario,
    index: usize,
    direction: Direction,
) -> Result<GrowthFit> {
    let fp = s
        .fixed_points()
        .get(index)
        .ok_or_else(|| Error::Invalid(format!("no fixed point with index {index}")))?;
    if fp.beta.re() == f64::NEG_INFINITY {
        return Err(Error::Precondition(format!(
            "fixed point {index} has infinitely negative growth"
        )));
    }
    let base = match (direction, fp.role) {
        (Direction::Forward, Role::DenjoyWolff) => num_complex::Complex64::new(0.0, 0.0),
        (Direction::Backward, Role::Repelling) => s.petal_anchor(index).ok_or_else(|| {
            Error::Precondition(format!("fixed point {index} has no petal anchor"))
        })?,
        _ => {
            return Err(Error::Precondition(format!(
                "{direction:?} orbits do not approach fixed point {index}"
            )))
        }
    };
    let log_v0 = s.v(base)?.norm().ln();
    let mut walker = OrbitWalker::new(s, base, direction)?;
    let mut zero = |_: &OrbitNode| Ok(num_complex::Complex64::new(0.0, 0.0));
    let mut pts = Vec::new();
    while walker.t() < FIT_TO - 1e-12 {
        match walker.advance(CHUNK, &mut zero, f64::INFINITY) {
            Ok(_) => {}
            Err(Error::BoundaryPrecision) => break,
            Err(e) => return Err(e),
        }
        let t = walker.t();
        if t >= FIT_FROM - 1e-12 {
            let x = direction.sign() * t;
            pts.push((x, log_v0 + walker.log_ratio().re));
        }
    }
    if pts.len() < MIN_POINTS {
        return Err(Error::ToleranceFailure {
            achieved: walker.t(),
        });
    }
    let t_to = pts.last().map(|p| p.0.abs()).unwrap_or(FIT_FROM);
    Ok(GrowthFit {
        slope: Num::new(least_squares_slope(&pts)),
        t_from: Num::new(FIT_FROM),
        t_to: Num::new(t_to),
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{BuiltIn, Weights};

    #[test]
    fn strip_slopes() {
        let w = Weights { c: 0.4, s: 0.7, d: 0.0 };
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, w).unwrap();
        let f = coboundary_growth_exponent(&s, 0, Direction::Forward).unwrap();
        assert!((f.slope.get() + 0.3).abs() < 1e-3, "{f:?}");
        let b = coboundary_growth_exponent(&s, 1, Direction::Backward).unwrap();
        assert!((b.slope.get() - 1.1).abs() < 1e-3, "{b:?}");
    }

    #[test]
    fn unweighted_is_flat() {
        let s = Scenario::builtin(BuiltIn::Trident, 2.0, Weights::default()).unwrap();
        for (i, d) in [(0, Direction::Forward), (1, Direction::Backward), (2, Direction::Backward)] {
            let f = coboundary_growth_exponent(&s, i, d).unwrap();
            assert!(f.slope.get().abs() < 1e-6);
        }
    }

    #[test]
    fn wrong_direction_is_rejected() {
        let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap();
        assert!(matches!(
            coboundary_growth_exponent(&s, 0, Direction::Backward),
            Err(Error::Precondition(_))
        ));
    }
}
