//! Finite sections of `u_t C_{φ_t}` on `A^2` in the orthonormal monomial basis
//! `e_k = √((k+1)/π) z^k`.
//!
//! Truncation spectra of non-normal operators are indicative only: the
//! eigenvalues of a finite section need not approximate the operator spectrum.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::Num;
use crate::numerics::quadrature::GaussLegendre;
use crate::scenario::Scenario;

/// Largest supported dimension.
pub const MAX_DIMENSION: usize = 256;

/// Quadrature for the Taylor projections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationGrid {
    pub radial_nodes: usize,
    /// FFT length on each circle.
    pub angular_nodes: usize,
    /// Outer radius of the sampled disk.
    pub clip_radius: f64,
}

impl Default for TruncationGrid {
    fn default() -> Self {
        TruncationGrid {
            radial_nodes: 16,
            angular_nodes: 512,
            clip_radius: 0.95,
        }
    }
}

/// Quadrature bookkeeping attached to a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationMetadata {
    pub grid: TruncationGrid,
    /// Coarse bound on aliased Taylor mass: `max |u_t φ_t^k|` on the outer
    /// circle times `R^{L-N}` for FFT length `L`.
    pub aliasing_bound: Num,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationMatrix {
    pub n: usize,
    pub t: f64,
    pub scenario: String,
    pub entries: DMatrix<Complex64>,
    pub metadata: TruncationMetadata,
}

/// Finite section of `u_t C_{φ_t}`: entry `(j, k)` is
/// `√((k+1)/(j+1)) · [z^j](u_t φ_t^k)`.
///
/// Taylor coefficients come from FFTs on Gauss–Legendre circles in
/// `|z| ≤ R`, combined with the weights `r^{2j+1}` of the `A^2` inner product.
/// For analytic data every circle yields the same coefficient up to aliasing,
/// so the average is exact in exact arithmetic while large `j` is dominated
/// by the outer circles, where rounding is smallest relative to `r^j`.
pub fn build_matrix(
    s: &Scenario,
    t: f64,
    n: usize,
    grid: &TruncationGrid,
) -> Result<TruncationMatrix> {
    if s.p() != 2.0 {
        return Err(Error::Precondition(format!(
            "truncation works on A^2, scenario has p = {}",
            s.p()
        )));
    }
    if n == 0 || n > MAX_DIMENSION {
        return Err(Error::Precondition(format!("dimension {n} not in 1..={MAX_DIMENSION}")));
    }
    let l = grid.angular_nodes;
    if l < 2 * n || !(grid.clip_radius > 0.0 && grid.clip_radius < 1.0) || grid.radial_nodes == 0 {
        return Err(Error::Invalid(format!("bad truncation grid {grid:?} for N = {n}")));
    }
    if !s.is_evaluable() {
        return Err(Error::NotEvaluable);
    }
    let rule = GaussLegendre::new(grid.radial_nodes);
    let nodes: Vec<(f64, f64)> = rule.on(0.0, grid.clip_radius).collect();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(l);

    // Per radial node: w r^{2j+1} · c_j(r)/r^j = w r^{j+1} c_j(r), plus max |F|.
    let per_node = nodes
        .par_iter()
        .map(|&(r, w)| {
            let mut cols = vec![vec![Complex64::new(0.0, 0.0); l]; n];
            for m in 0..l {
                let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * m as f64 / l as f64);
                let (phi, u) = if t == 0.0 {
                    (z, Complex64::new(1.0, 0.0))
                } else {
                    (s.flow(t, z)?, s.cocycle(t, z)?)
                };
                let mut val = u;
                for col in cols.iter_mut() {
                    col[m] = val;
                    val *= phi;
                }
            }
            let mut biggest = 0.0f64;
            let mut coeffs = DMatrix::<Complex64>::zeros(n, n);
            for (k, col) in cols.iter_mut().enumerate() {
                biggest = col.iter().fold(biggest, |b, v| b.max(v.norm()));
                fft.process(col);
                let mut weight = w * r / l as f64;
                for j in 0..n {
                    coeffs[(j, k)] = col[j] * weight;
                    weight *= r;
                }
            }
            Ok((coeffs, biggest))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    let mut norms = vec![0.0; n];
    let mut biggest = 0.0f64;
    for ((r, w), (coeffs, big)) in nodes.iter().zip(&per_node) {
        biggest = biggest.max(*big);
        let mut weight = w * r;
        for j in 0..n {
            norms[j] += weight;
            for k in 0..n {
                entries[(j, k)] += coeffs[(j, k)];
            }
            weight *= r * r;
        }
    }
    for j in 0..n {
        for k in 0..n {
            let scale = ((k + 1) as f64 / (j + 1) as f64).sqrt() / norms[j];
            entries[(j, k)] *= scale;
        }
    }
    let rr = grid.clip_radius;
    let aliasing = biggest * rr.powi(l as i32 - n as i32);
    Ok(TruncationMatrix {
        n,
        t,
        scenario: s.model_name().to_string(),
        entries,
        metadata: TruncationMetadata {
            grid: *grid,
            aliasing_bound: Num::new(aliasing),
        },
    })
}

/// Power-iteration limits for operator 2-norms.
pub const POWER_ITERATIONS: usize = 50;
pub const POWER_STAGNATION: f64 = 1e-10;

/// `‖M^n‖_2^{1/n}` for `n = 1..=n_max` and their running minimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandEstimate {
    pub sequence: Vec<Num>,
    pub minimum: Num,
    /// Powers whose norm iteration hit the iteration cap before stagnating.
    pub unconverged: Vec<usize>,
}

/// Largest singular value of `a` by power iteration on `a* a`; the flag is
/// false when the iteration cap was reached first.
pub fn operator_norm(a: &DMatrix<Complex64>) -> (f64, bool) {
    let n = a.ncols();
    let mut x = DVector::<Complex64>::from_fn(n, |i, _| Complex64::new(1.0 / (i + 1) as f64, 0.0));
    x /= Complex64::new(x.norm(), 0.0);
    let mut sigma = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let y = a.ad_mul(&(a * &x));
        let ny = y.norm();
        if ny == 0.0 {
            return (0.0, true);
        }
        let next = ny.sqrt();
        x = y / Complex64::new(ny, 0.0);
        if (next - sigma).abs() <= POWER_STAGNATION * next {
            return (next, true);
        }
        sigma = next;
    }
    (sigma, false)
}

/// Gelfand-formula estimate `min_{n ≤ n_max} ‖M^n‖^{1/n}` of the spectral radius.
pub fn gelfand_radius(m: &TruncationMatrix, n_max: usize) -> Result<GelfandEstimate> {
    if n_max < 8 {
        return Err(Error::Precondition(format!("n_max = {n_max} must be at least 8")));
    }
    let mut power = m.entries.clone();
    let mut sequence = Vec::with_capacity(n_max);
    let mut unconverged = Vec::new();
    let mut minimum = f64::INFINITY;
    for k in 1..=n_max {
        if k > 1 {
            power = &power * &m.entries;
        }
        let (norm, ok) = operator_norm(&power);
        if !ok {
            unconverged.push(k);
        }
        let root = norm.powf(1.0 / k as f64);
        minimum = minimum.min(root);
        sequence.push(Num::new(root));
    }
    Ok(GelfandEstimate {
        sequence,
        minimum: Num::new(minimum),
        unconverged,
    })
}

/// Eigenvalues of the finite section sorted by decreasing modulus (then by
/// argument). Indicative only; see the module notes.
pub fn eigen_cloud(m: &TruncationMatrix) -> Result<Vec<Complex64>> {
    if m.n > MAX_DIMENSION {
        return Err(Error::Precondition(format!("dimension {} too large", m.n)));
    }
    let schur = Schur::try_new(m.entries.clone(), f64::EPSILON, 100 * m.n.max(10))
        .ok_or_else(|| Error::LinearAlgebra("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::LinearAlgebra("Schur form is not triangular".into()))?;
    let mut out: Vec<Complex64> = ev.iter().copied().collect();
    out.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
    Ok(out)
}
