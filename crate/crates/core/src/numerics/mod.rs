//! Quadrature, orbit integrals and the verification routines built on them.

use num_complex::Complex64;

use crate::error::Result;

pub mod eigen;
pub mod growth;
pub mod membership;
pub mod orbit;
pub mod quadrature;
pub mod resolvent;

/// A function on the disk, as supplied to the verification routines.
pub type Func<'a> = dyn Fn(Complex64) -> Result<Complex64> + Sync + 'a;
