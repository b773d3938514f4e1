//! Deterministic sample grids in the disk.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Radical inverse of `index` in `base` (van der Corput sequence).
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let step = 1.0 / base as f64;
    let mut f = step;
    let mut x = 0.0;
    while index > 0 {
        x += f * (index % base) as f64;
        index /= base;
        f *= step;
    }
    x
}

/// `n` Halton points (bases 2, 3) mapped area-uniformly onto `{|z| <= radius}`.
pub fn disk_grid(n: usize, radius: f64) -> Vec<Complex64> {
    (1..=n as u64)
        .map(|i| {
            let r = radius * radical_inverse(i, 2).sqrt();
            let th = 2.0 * PI * radical_inverse(i, 3);
            Complex64::from_polar(r, th)
        })
        .collect()
}

/// `n` equally spaced points on the circle `|z| = radius`, offset by half a step.
pub fn circle_grid(n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * (k as f64 + 0.5) / n as f64))
        .collect()
}
