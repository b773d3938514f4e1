use bergspec::classifier::{membership_rule, Membership};
use bergspec::grid::disk_grid;
use bergspec::numerics::eigen::{eigen_identity_residual, eigenfunction};
use bergspec::numerics::membership::{
    ap_norm_rings, growth_envelope, local_membership, MembershipStatus, QuadratureGrid,
};
use bergspec::numerics::orbit::OrbitOptions;
use bergspec::numerics::resolvent::{
    choose_anchor, default_base, orbit_integral_k, residual_check, resolvent_apply,
};
use bergspec::scenario::{BuiltIn, Scenario, Weights};
use num_complex::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn one(_: Complex64) -> bergspec::Result<Complex64> {
    Ok(c(1.0))
}

fn zero(_: Complex64) -> bergspec::Result<Complex64> {
    Ok(c(0.0))
}

fn strip() -> Scenario {
    Scenario::builtin(BuiltIn::StripFlow { a: 1.0 }, 2.0, Weights::default()).unwrap()
}

fn trident_carrier() -> Scenario {
    Scenario::builtin(BuiltIn::Trident, 2.0, Weights { c: 0.0, s: 0.0, d: 0.5 }).unwrap()
}

#[test]
fn ring_integrals_are_stable_under_node_doubling() {
    let s = strip();
    let f = eigenfunction(&s, c(0.5)).unwrap();
    let grid = QuadratureGrid::default();
    let a = ap_norm_rings(&s, &f, 2.0, &grid).unwrap();
    let b = ap_norm_rings(&s, &f, 2.0, &grid.doubled()).unwrap();
    for (x, y) in a.ring_integrals.iter().zip(&b.ring_integrals) {
        let rel = (x.get() - y.get()).abs() / y.get().abs();
        assert!(rel < 1e-8, "{x} vs {y}: {rel:e}");
    }
    let (x, y) = (a.limit.unwrap().get(), b.limit.unwrap().get());
    assert!((x - y).abs() / y < 1e-8, "{x} vs {y}");
}

#[test]
fn local_membership_follows_the_threshold_rule() {
    let grid = QuadratureGrid::default();
    let scenarios = [
        strip(),
        Scenario::builtin(BuiltIn::HalfStrip, 2.0, Weights::default()).unwrap(),
        Scenario::builtin(BuiltIn::Trident, 2.0, Weights::default()).unwrap(),
    ];
    for s in &scenarios {
        for fp in s.fixed_points() {
            let threshold = 2.0 * fp.alpha / s.p();
            for offset in [-0.6, -0.3, 0.3, 0.6] {
                let mu = c(threshold + offset);
                let f = |z: Complex64| Ok((mu * s.h(z)?).exp());
                let v = local_membership(&f, fp.zeta, s.p(), &grid).unwrap();
                let want = match membership_rule(mu, fp, s.p()) {
                    Membership::Member => MembershipStatus::Convergent,
                    Membership::NonMember => MembershipStatus::Divergent,
                    Membership::Unresolved => unreachable!(),
                };
                assert_eq!(
                    v.status, want,
                    "{} at {} with mu = {}: tau = {}",
                    s.model_name(), fp.zeta, mu, v.fitted_exponent
                );
            }
        }
    }
}

#[test]
fn critical_exponent_is_never_contradicted() {
    let s = strip();
    let fp = s.fixed_points()[0];
    let f = |z: Complex64| Ok(s.h(z)?.exp());
    let v = local_membership(&f, fp.zeta, 2.0, &QuadratureGrid::default()).unwrap();
    assert_ne!(v.status, MembershipStatus::Convergent);
}

#[test]
fn resolvent_certificates_solve_the_equation() {
    let weighted =
        Scenario::builtin(BuiltIn::Trident, 2.0, Weights { c: 0.4, s: 0.7, d: 0.0 }).unwrap();
    let cases = [(strip(), 2.0), (strip(), 3.5), (trident_carrier(), -1.5), (weighted, 1.5)];
    let opts = OrbitOptions::default();
    for (s, lam) in &cases {
        let lambda = c(*lam);
        let anchor = choose_anchor(s, lambda).unwrap();
        let cert =
            orbit_integral_k(s, lambda, &one, anchor, default_base(s, anchor).unwrap(), &opts)
                .unwrap();
        let f = |z| resolvent_apply(s, &one, &cert, z);
        let r = residual_check(s, lambda, &one, &f, &disk_grid(20, 0.9)).unwrap();
        assert!(r <= 1e-5, "{} λ = {lam}: {r:e}", s.model_name());
    }
}

#[test]
fn eigenfunctions_inside_the_point_spectrum() {
    let grid = QuadratureGrid::default();
    for (s, lam) in [(strip(), 0.5), (strip(), -0.5), (trident_carrier(), 0.0)] {
        let lambda = c(lam);
        let r = eigen_identity_residual(&s, lambda, 1.0, &disk_grid(100, 0.95)).unwrap();
        assert!(r <= 1e-9, "{} λ = {lam}: {r:e}", s.model_name());
        let f = eigenfunction(&s, lambda).unwrap();
        let v = ap_norm_rings(&s, &f, 2.0, &grid).unwrap();
        assert_eq!(v.status, MembershipStatus::Convergent, "{} λ = {lam}", s.model_name());
        let norm = v.norm(2.0).unwrap();
        let env = growth_envelope(&f, 2.0, 0.99, 256).unwrap();
        assert!(env <= 1.05 * norm, "{env} vs {norm}");
        let r = residual_check(&s, lambda, &zero, &f, &disk_grid(20, 0.9)).unwrap();
        assert!(r <= 1e-8, "{r:e}");
    }
}

#[test]
fn eigenfunctions_right_of_the_attracting_exponent_diverge() {
    let grid = QuadratureGrid::default();
    for (s, lam) in [(strip(), 1.25), (strip(), 2.0), (trident_carrier(), 1.5)] {
        let f = eigenfunction(&s, c(lam)).unwrap();
        let v = ap_norm_rings(&s, &f, 2.0, &grid).unwrap();
        assert_eq!(v.status, MembershipStatus::Divergent, "{} λ = {lam}", s.model_name());
    }
}
