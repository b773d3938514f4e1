use bergspec::classifier::operator_radius;
use bergspec::scenario::{BuiltIn, Scenario, Weights};
use bergspec::truncation::{build_matrix, eigen_cloud, gelfand_radius, TruncationGrid};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn strip() -> Scenario {
    Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap()
}

fn trident() -> Scenario {
    Scenario::builtin(BuiltIn::Trident, 2.0, Weights::default()).unwrap()
}

fn block(m: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    m.view((0, 0), (k, k)).into_owned()
}

/// Spectral norm of a small matrix via its singular values.
fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().singular_values().max()
}

#[test]
fn leading_block_obeys_the_semigroup_law() {
    let grid = TruncationGrid::default();
    for s in [strip(), trident()] {
        let (t, u) = (0.4, 0.7);
        let a = build_matrix(&s, t, 96, &grid).unwrap().entries;
        let b = build_matrix(&s, u, 96, &grid).unwrap().entries;
        let ab = build_matrix(&s, t + u, 96, &grid).unwrap().entries;
        let err = spectral_norm(&(block(&(&a * &b), 48) - block(&ab, 48)));
        assert!(err < 1e-3, "{}: {err:e}", s.model_name());
    }
}

#[test]
fn gelfand_estimate_stays_below_the_radius_bound() {
    let grid = TruncationGrid::default();
    for s in [strip(), trident()] {
        let t = 1.0;
        let m = build_matrix(&s, t, 60, &grid).unwrap();
        let est = gelfand_radius(&m, 24).unwrap();
        let bound = operator_radius(&s.gamma_profile(), t).unwrap().value.get();
        assert!(
            est.minimum.get() <= 1.05 * bound,
            "{}: {} vs {bound}",
            s.model_name(),
            est.minimum
        );
    }
}

#[test]
fn running_minimum_is_monotone_in_the_power_count() {
    let m = build_matrix(&strip(), 1.0, 40, &TruncationGrid::default()).unwrap();
    let mut last = f64::INFINITY;
    for n_max in [8, 12, 16, 24] {
        let g = gelfand_radius(&m, n_max).unwrap();
        assert!(g.minimum.get() <= last);
        assert_eq!(g.sequence.len(), n_max);
        last = g.minimum.get();
    }
}

#[test]
fn eigen_cloud_lies_inside_the_gelfand_disk() {
    let m = build_matrix(&trident(), 1.0, 40, &TruncationGrid::default()).unwrap();
    let est = gelfand_radius(&m, 24).unwrap();
    let cloud = eigen_cloud(&m).unwrap();
    assert_eq!(cloud.len(), 40);
    assert!(cloud[0].norm() <= est.minimum.get() * (1.0 + 1e-6));
    for w in cloud.windows(2) {
        assert!(w[0].norm() >= w[1].norm());
    }
}

/// Taylor coefficients of `φ_t^k` for the strip flow, where
/// `φ_t(z) = (z + T)/(1 + T z)` with `T = tanh(t/2)`, composed as series.
fn strip_columns(t: f64, n: usize) -> DMatrix<f64> {
    let tt = (t / 2.0).tanh();
    let mut phi = vec![0.0; n];
    phi[0] = tt;
    let mut q = 1.0 - tt * tt;
    for c in phi.iter_mut().skip(1) {
        *c = q;
        q *= -tt;
    }
    let mut out = DMatrix::<f64>::zeros(n, n);
    let mut power = vec![0.0; n];
    power[0] = 1.0;
    for k in 0..n {
        for j in 0..n {
            out[(j, k)] = ((k + 1) as f64 / (j + 1) as f64).sqrt() * power[j];
        }
        let mut next = vec![0.0; n];
        for (i, a) in power.iter().enumerate() {
            for (l, b) in phi.iter().enumerate().take(n - i) {
                next[i + l] += a * b;
            }
        }
        power = next;
    }
    out
}

#[test]
fn strip_matrix_matches_series_composition() {
    let m = build_matrix(&strip(), 1.0, 60, &TruncationGrid::default()).unwrap();
    let want = strip_columns(1.0, 60);
    let mut worst = 0.0f64;
    for j in 0..60 {
        for k in 0..60 {
            worst = worst.max((m.entries[(j, k)] - want[(j, k)]).norm());
        }
    }
    assert!(worst < 1e-8, "{worst:e}");
}
