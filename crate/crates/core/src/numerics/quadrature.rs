//! Gauss–Legendre rules, adaptive Gauss–Kronrod integration and spectral
//! integration matrices.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Values `P_0(x), …, P_n(x)`.
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0; n + 1];
    if n >= 1 {
        p[1] = x;
    }
    for k in 2..=n {
        let kf = k as f64;
        p[k] = ((2.0 * kf - 1.0) * x * p[k - 1] - (kf - 1.0) * p[k - 2]) / kf;
    }
    p
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// `S[i][j]` such that `∫_{-1}^{x_i} p = Σ_j S[i][j] p(x_j)` for every
    /// polynomial `p` of degree below the number of nodes.
    pub fn integration_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let at_nodes: Vec<Vec<f64>> = self.nodes.iter().map(|&x| legendre_all(n, x)).collect();
        (0..n)
            .map(|i| {
                let pi = &at_nodes[i];
                let xi = self.nodes[i];
                (0..n)
                    .map(|j| {
                        let pj = &at_nodes[j];
                        let mut s = 0.5 * (xi + 1.0);
                        for k in 1..n {
                            s += 0.5 * pj[k] * (pi[k + 1] - pi[k - 1]);
                        }
                        self.weights[j] * s
                    })
                    .collect()
            })
            .collect()
    }
}

// Gauss–Kronrod 7/15 abscissae and weights (nonnegative half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 15-point panel: `(estimate, error estimate)`.
pub fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(mid - dx)? + f(mid + dx)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * half;
    let err = ((kron - gauss) * half).norm();
    Ok((value, err))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs.max(self.rel * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err
            .total_cmp(&o.err)
            .then(o.a.total_cmp(&self.a))
    }
}

pub const MAX_PANELS: usize = 4000;

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`, starting
/// from the panels delimited by `breaks` (which must include `a` and `b`).
///
/// Panels are bisected in order of decreasing error estimate until the total
/// estimate meets `tol`; failure to converge within [`MAX_PANELS`] returns the
/// best estimate with its error, leaving the decision to the caller.
pub fn integrate_panels<F>(mut f: F, breaks: &[f64], tol: Tolerance) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut heap = BinaryHeap::new();
    let mut run_value = Complex64::new(0.0, 0.0);
    let mut run_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (value, err) = gk15(&mut f, w[0], w[1])?;
            run_value += value;
            run_err += err;
            heap.push(Panel {
                a: w[0],
                b: w[1],
                value,
                err,
            });
        }
    }
    let finish = |heap: &BinaryHeap<Panel>| {
        let (value, error) = totals(heap);
        Integral {
            value,
            error,
            panels: heap.len(),
        }
    };
    loop {
        if heap.len() >= MAX_PANELS || !run_err.is_finite() {
            return Ok(finish(&heap));
        }
        if run_err <= 1.01 * tol.target(run_value) {
            let (value, error) = totals(&heap);
            if error <= tol.target(value) {
                return Ok(finish(&heap));
            }
            run_value = value;
            run_err = error;
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            return Ok(finish(&heap));
        }
        run_value -= worst.value;
        run_err -= worst.err;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, err) = gk15(&mut f, a, b)?;
            run_value += value;
            run_err += err;
            heap.push(Panel { a, b, value, err });
        }
    }
}

/// Sum in a fixed order (by panel position) so results do not depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>) -> (Complex64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| {
        (v + p.value, e + p.err)
    })
}

/// Adaptive integration over `[a, b]` from `initial` equal panels.
pub fn integrate<F>(f: F, a: f64, b: f64, initial: usize, tol: Tolerance) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let n = initial.max(1);
    let breaks: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    integrate_panels(f, &breaks, tol)
}

/// Like [`integrate`] but fails when the requested tolerance is not met.
pub fn integrate_strict<F>(f: F, a: f64, b: f64, initial: usize, tol: Tolerance) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let r = integrate(f, a, b, initial, tol)?;
    if !(r.error <= tol.target(r.value)) {
        return Err(Error::ToleranceFailure { achieved: r.error });
    }
    Ok(r)
}
