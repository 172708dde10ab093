use mvop::equilibrium::{solve_mrs, EquilibriumData};
use mvop::quadrature::{gauss_jacobi, gauss_legendre};
use mvop::weight::Potential;
use proptest::prelude::*;

/// Symmetric potentials: the right endpoint solves (1/2π)∫ v'(s) √((b+s)/(b−s)) ds = 1.
fn bisect_b(v: &Potential<f64>) -> f64 {
    let rule = gauss_jacobi::<f64>(40, -0.5, 0.5);
    let dv = v.derivative_coeffs();
    let i1 = |b: f64| {
        rule.integrate(|u| dv.iter().rev().fold(0.0, |acc, &c| acc * (b * u) + c)) * b / (2.0 * std::f64::consts::PI)
    };
    let (mut lo, mut hi) = (1e-3, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if i1(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `∫ log|x−s| ψ(s) ds` over `s = cos θ`, graded towards `θ = arccos x`.
fn log_potential(eq: &EquilibriumData<f64>, x: f64) -> f64 {
    let gl = gauss_legendre::<f64>(20);
    let tx = x.acos();
    let f = |t: f64| {
        let s = t.cos();
        if s == x {
            return 0.0;
        }
        (x - s).abs().ln() * eq.h_at(s) * t.sin().powi(2) / (2.0 * std::f64::consts::PI)
    };
    let mut acc = 0.0;
    for (far, sign) in [(0.0, -1.0), (std::f64::consts::PI, 1.0)] {
        let mut w = (far - tx) * sign;
        for _ in 0..60 {
            let (a, b) = (tx + sign * w / 2.0, tx + sign * w);
            for (&u, &q) in gl.nodes.iter().zip(&gl.weights) {
                acc += q * (b - a).abs() / 2.0 * f(a + (b - a) * (u + 1.0) / 2.0);
            }
            w /= 2.0;
        }
    }
    acc
}

#[test]
fn hermite_endpoints_match_bisection() {
    let v = Potential::monomial(2);
    let b = bisect_b(&v);
    let s = solve_mrs(&v, 1e-14).unwrap();
    assert!((s.b - b).abs() < 1e-12);
    assert!((b - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn quartic_endpoints_match_bisection() {
    let v = Potential::monomial(4);
    let s = solve_mrs(&v, 1e-14).unwrap();
    assert!((s.b - bisect_b(&v)).abs() < 1e-12);
    assert!((s.b.powi(4) - 4.0 / 3.0).abs() < 1e-12);
    let v = Potential::new(vec![0.0, 0.0, 1.5, 0.0, 1.0]).unwrap();
    assert!((solve_mrs(&v, 1e-14).unwrap().b - bisect_b(&v)).abs() < 1e-12);
}

#[test]
fn ell_matches_variational_equality_at_origin() {
    let eq = EquilibriumData::new(&Potential::monomial(2), 1e-14).unwrap();
    let oracle = 2.0 * log_potential(&eq, 0.0) - eq.v_of(mvop::scalar::cx(0.0, 0.0)).re;
    assert!((oracle - (-1.0 - 2.0 * 2f64.ln())).abs() < 1e-12);
    assert!((eq.ell - oracle).abs() < 1e-10);
    let eq = EquilibriumData::new(&Potential::new(vec![0.0, 0.0, 0.8, 0.0, 1.0]).unwrap(), 1e-14).unwrap();
    assert!((eq.ell - (2.0 * log_potential(&eq, 0.0) - eq.v_of(mvop::scalar::cx(0.0, 0.0)).re)).abs() < 1e-10);
}

#[test]
fn variational_equality_on_the_support() {
    let eq = EquilibriumData::new(&Potential::<f64>::new(vec![0.1, 0.4, 0.7, -0.2, 1.0]).unwrap(), 1e-14).unwrap();
    for &x in &[-0.6, -0.1, 0.35, 0.8] {
        let lhs = 2.0 * log_potential(&eq, x) - eq.v_of(mvop::scalar::cx(x, 0.0)).re - eq.ell;
        assert!(lhs.abs() < 1e-10, "x={x}: {lhs:e}");
    }
    // strict inequality off the support
    for &x in &[1.3, -1.5] {
        let lhs = 2.0 * eq.g(mvop::scalar::cx(x, 1e-12)).unwrap().re - eq.v_of(mvop::scalar::cx(x, 0.0)).re - eq.ell;
        assert!(lhs < 0.0, "x={x}: {lhs:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_quartics_are_normalized(s in -1.0f64..1.0, t in 0.5f64..2.0, u in -0.3f64..0.3) {
        let v = Potential::new(vec![0.0, s, t, u, 1.0]).unwrap();
        let eq = EquilibriumData::new(&v, 1e-13).unwrap();
        prop_assert!((eq.total_mass() - 1.0).abs() < 1e-10);
        prop_assert!(eq.mrs_residuals[0].abs() < 1e-12 && eq.mrs_residuals[1].abs() < 1e-12);
        prop_assert!(eq.ell_consistency < 1e-9);
        let shift = 0.4;
        let moved = EquilibriumData::new(&v.translated(shift), 1e-13).unwrap();
        prop_assert!((moved.support.a - eq.support.a - shift).abs() < 1e-9);
        prop_assert!((moved.ell - eq.ell).abs() < 1e-9);
    }
}
