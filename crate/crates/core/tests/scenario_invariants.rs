use bergspec::grid::disk_grid;
use bergspec::scenario::{alpha_at, beta_at, BuiltIn, ExtComplex, Scenario, Weights};
use bergspec::Error;
use num_complex::Complex64;

const TIMES: [f64; 2] = [0.3, 1.1];

fn kinds() -> [BuiltIn; 3] {
    [BuiltIn::StripFlow { a: 1.0 }, BuiltIn::HalfStrip, BuiltIn::Trident]
}

fn weight_sets() -> [Weights; 2] {
    [
        Weights { c: 0.4, s: 0.7, d: 0.0 },
        Weights { c: 0.0, s: 0.0, d: 0.5 },
    ]
}

/// Built-ins for both weight sets; the half-strip has no carrier for `d`.
fn scenarios() -> Vec<(String, Scenario)> {
    let mut out = Vec::new();
    for kind in kinds() {
        for w in weight_sets() {
            match Scenario::builtin(kind, 2.0, w) {
                Ok(s) => out.push((format!("{} {w:?}", kind.name()), s)),
                Err(Error::Invalid(_)) if kind == BuiltIn::HalfStrip && w.d != 0.0 => {}
                Err(e) => panic!("{}: {e}", kind.name()),
            }
        }
    }
    assert_eq!(out.len(), 5);
    out
}

fn grid() -> Vec<Complex64> {
    disk_grid(100, 0.95)
}

#[test]
fn semigroup_law() {
    for (name, s) in scenarios() {
        for t in TIMES {
            for u in TIMES {
                for z in grid() {
                    let a = s.flow(t + u, z).unwrap();
                    let b = s.flow(t, s.flow(u, z).unwrap()).unwrap();
                    assert!((a - b).norm() < 1e-9, "{name} t={t} s={u} z={z}: {}", (a - b).norm());
                }
            }
        }
    }
}

#[test]
fn cocycle_law() {
    for (name, s) in scenarios() {
        for t in TIMES {
            for u in TIMES {
                for z in grid() {
                    let a = s.cocycle(t + u, z).unwrap();
                    let b = s.cocycle(t, z).unwrap() * s.cocycle(u, s.flow(t, z).unwrap()).unwrap();
                    assert!((a - b).norm() < 1e-9, "{name} t={t} s={u} z={z}: {}", (a - b).norm());
                }
            }
        }
    }
}

#[test]
fn conjugacy_to_translation() {
    for (name, s) in scenarios() {
        for t in TIMES {
            for z in grid() {
                let d = s.h(s.flow(t, z).unwrap()).unwrap() - s.h(z).unwrap() - t;
                assert!(d.norm() < 1e-10, "{name} t={t} z={z}: {}", d.norm());
            }
        }
    }
}

#[test]
fn inverse_round_trip() {
    for (name, s) in scenarios() {
        for z in grid() {
            let w = s.h(z).unwrap();
            let back = s.h(s.h_inverse(w).unwrap()).unwrap();
            assert!((back - w).norm() < 1e-12, "{name} w={w}: {}", (back - w).norm());
        }
    }
}

#[test]
fn generator_times_derivative_is_one() {
    for (name, s) in scenarios() {
        for z in grid() {
            let e = s.generator_G(z).unwrap() * s.h_prime(z).unwrap() - 1.0;
            assert!(e.norm() < 1e-12, "{name} z={z}: {}", e.norm());
        }
    }
}

#[test]
fn derivative_matches_finite_differences() {
    let delta = 1e-5;
    for (name, s) in scenarios() {
        let central = |z: Complex64, d: f64| {
            (s.h(z + d).unwrap() - s.h(z - d).unwrap()) / (2.0 * d)
        };
        for z in grid() {
            let refined = (4.0 * central(z, delta / 2.0) - central(z, delta)) / 3.0;
            let exact = s.h_prime(z).unwrap();
            let rel = (exact - refined).norm() / exact.norm();
            assert!(rel < 1e-6, "{name} z={z}: {rel}");
        }
    }
}

#[test]
fn declared_boundary_data_is_recovered() {
    for (name, s) in scenarios() {
        for (j, fp) in s.fixed_points().iter().enumerate() {
            let a = alpha_at(&s, j).unwrap();
            assert!((a.value() - fp.alpha).abs() < 1e-4, "{name} #{j}: {a:?}");
            match (beta_at(&s, j).unwrap(), fp.beta) {
                (ExtComplex::Finite(got), ExtComplex::Finite(want)) => {
                    assert!((got.re - want.re).abs() < 1e-4, "{name} #{j}: {got} vs {want}")
                }
                (got, want) => assert_eq!(got, want, "{name} #{j}"),
            }
        }
    }
}

#[test]
fn spectral_values_of_the_built_ins() {
    let s = Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap();
    let alphas: Vec<f64> = s.fixed_points().iter().map(|fp| fp.alpha).collect();
    assert_eq!(alphas, vec![1.0, -1.0]);

    let w = Weights { c: 0.0, s: 0.0, d: 0.5 };
    let s = Scenario::builtin(BuiltIn::Trident, 2.0, w).unwrap();
    let g: Vec<f64> = s.gamma_profile().all().map(|g| g.value()).collect();
    for (got, want) in g.iter().zip([1.0, -1.0, -2.0]) {
        assert!((got - want).abs() < 1e-12, "{g:?}");
    }
}
