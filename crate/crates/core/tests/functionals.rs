use sharpckn::battery::identity_battery;
use sharpckn::functionals::{
    ckn_radial_report, cknalpha_report, hpw_report, identity_crucial_literal_residual, identity_crucial_residual,
    identity_eq1_residual, identity_general_residual, identity_hessian1_residual, identity_radial_laplacian_residual,
    laplacian_radial, surface_area,
};
use sharpckn::profiles::{make_family, make_u0, make_u1, make_u2, InequalityParams};
use sharpckn::quad::QuadratureSpec;
use sharpckn::Error;

fn profile(spec: &str) -> sharpckn::profiles::RadialProfile {
    make_family(spec).unwrap()
}

/// `∫₀^∞ r^m e^{-s r²} dr = Γ((m+1)/2) / (2 s^{(m+1)/2})` for integer `m`,
/// from the half-integer recurrence written out independently.
fn gauss_moment(m: u32, s: f64) -> f64 {
    let k = m + 1;
    let mut g = if k % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut x = if k % 2 == 0 { 1.0 } else { 0.5 };
    while x + 0.5 < k as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g / (2.0 * s.powf(k as f64 / 2.0))
}

#[test]
fn moment_oracle_sanity() {
    let sp = std::f64::consts::PI.sqrt();
    assert!((gauss_moment(0, 1.0) - sp / 2.0).abs() < 1e-16);
    assert!((gauss_moment(1, 1.0) - 0.5).abs() < 1e-16);
    assert!((gauss_moment(4, 1.0) - 3.0 * sp / 8.0).abs() < 1e-15);
    assert!((gauss_moment(3, 2.0) - 1.0 / 8.0).abs() < 1e-16);
}

#[test]
fn hpw_against_moment_oracle() {
    // u = (1 + r) e^{-r²}, u' = (1 − 2r − 2r²) e^{-r²}, n = 3
    let u = profile("polygauss(1; 1, 1)");
    let w = surface_area(3);
    let poly_moment = |coeffs: &[f64], extra: u32| -> f64 {
        let mut sq = vec![0.0; 2 * coeffs.len() - 1];
        for (i, a) in coeffs.iter().enumerate() {
            for (j, b) in coeffs.iter().enumerate() {
                sq[i + j] += a * b;
            }
        }
        sq.iter().enumerate().map(|(j, c)| c * gauss_moment(j as u32 + extra, 2.0)).sum()
    };
    let grad = w * poly_moment(&[1.0, -2.0, -2.0], 2);
    let second = w * poly_moment(&[1.0, 1.0], 4);
    let mass = w * poly_moment(&[1.0, 1.0], 2);
    let expected = grad * second / (2.25 * mass * mass);
    let rep = hpw_report(3, &u, &QuadratureSpec::default()).unwrap();
    assert!((rep.ratio - expected).abs() <= 1e-10 * expected, "{} vs {expected}", rep.ratio);
    assert!(rep.ratio > 1.0);
}

#[test]
fn hpw_self_refinement() {
    let u = profile("polygauss(1; 1, 1)");
    let spec = QuadratureSpec::default();
    let a = hpw_report(3, &u, &spec).unwrap();
    let b = hpw_report(3, &u, &spec.tightened(0.1, 2)).unwrap();
    assert!((a.ratio - b.ratio).abs() <= 1e-9 * b.ratio);
}

#[test]
fn laplacian_examples() {
    let r2 = profile("polygauss(1e-300; 0, 0, 1)");
    for n in 1..=5 {
        let lap = laplacian_radial(&r2, n);
        assert!((lap.eval(0.7).unwrap() - 2.0 * n as f64).abs() < 1e-12);
        assert!((lap.eval(0.0).unwrap() - 2.0 * n as f64).abs() < 1e-12);
    }
    let g = profile("gauss(0.5)");
    let v = laplacian_radial(&g, 3).eval(1.0).unwrap();
    assert!((v + 2.0 * (-0.5f64).exp()).abs() < 1e-14);
}

#[test]
fn extremal_equalities() {
    let spec = QuadratureSpec::default();
    let hydrogen = InequalityParams::new(3, 0.0, 0.0, 0.5, 2.0);
    let rep = ckn_radial_report(&hydrogen, &make_u1(0.0, 0.0).unwrap(), &spec).unwrap();
    assert!((rep.ratio - 1.0).abs() < 1e-6);
    assert_eq!(rep.constant, 4.0);
    let gauss = ckn_radial_report(&hydrogen, &profile("gauss(1)"), &spec).unwrap();
    assert!(gauss.ratio >= 1.0);

    let cubic = InequalityParams::balanced(3, 0.0, -1.0, 3.0);
    let rep = ckn_radial_report(&cubic, &make_u2(3.0, 0.0, -1.0).unwrap(), &spec).unwrap();
    assert!((rep.ratio - 1.0).abs() < 1e-6, "{}", rep.ratio);

    let rep = cknalpha_report(3, 0.0, &make_u0(0.0).unwrap(), &spec).unwrap();
    assert!((rep.ratio - 1.0).abs() < 1e-8);
    let rep = cknalpha_report(2, 0.5, &make_u0(0.5).unwrap(), &spec).unwrap();
    assert!((rep.ratio - 1.0).abs() < 1e-6);
    let rep = cknalpha_report(3, 0.0, &profile("polygauss(1; 1, 0, 1)"), &spec).unwrap();
    assert!(rep.ratio >= 1.0);
}

#[test]
fn invalid_parameters_are_rejected() {
    let spec = QuadratureSpec::default();
    let bad = InequalityParams::new(1, 1.0, 0.0, 1.0, 2.0);
    assert!(matches!(
        ckn_radial_report(&bad, &profile("gauss(1)"), &spec),
        Err(Error::InvalidParameter(_))
    ));
    assert!(cknalpha_report(1, 0.6, &profile("gauss(1)"), &spec).is_err());
}

#[test]
fn listed_identity_cases() {
    let spec = QuadratureSpec::default();
    let eq1 = identity_eq1_residual(3, 0.0, &profile("gauss(1)"), &spec).unwrap();
    assert!(eq1.relative() <= 1e-9);
    let eq1 = identity_eq1_residual(2, 0.25, &profile("bump(1, 0.4)"), &spec).unwrap();
    assert!(eq1.relative() <= 1e-9);

    let general = identity_general_residual(3, 0.0, &make_u0(0.0).unwrap(), &spec).unwrap();
    assert!(general.relative() <= 1e-9);
    let general = identity_general_residual(3, 0.0, &profile("polygauss(1; 1, 0, 1)"), &spec).unwrap();
    assert!(general.relative() <= 1e-8);
    let general = identity_general_residual(1, 0.5, &make_u0(0.5).unwrap(), &spec).unwrap();
    assert!(general.relative() <= 1e-8);

    let crucial = identity_crucial_residual(2, &profile("gauss(0.5)"), &spec).unwrap();
    assert!(crucial.relative() <= 1e-10);
    let crucial = identity_crucial_residual(3, &profile("polygauss(0.5; 1, 0, 1)"), &spec).unwrap();
    assert!(crucial.relative() <= 1e-8);
    let crucial = identity_crucial_residual(1, &profile("hermmod(0.1, 2, 0.5)"), &spec).unwrap();
    assert!(crucial.relative() <= 1e-8);

    let hess = identity_hessian1_residual(3, &profile("bump(2, 0.7)"), &spec).unwrap();
    assert!(hess.relative() <= 1e-9);
    let hess = identity_hessian1_residual(4, &profile("polygauss(1; 0, 1)"), &spec).unwrap();
    assert!(hess.relative() <= 1e-9);
}

#[test]
fn hessian_identity_closed_form_at_gaussian() {
    // ∇²u + ∇u⊗x = −u·I for e^{-r²/2}, so the left side is n∫u² = n·|S|·Γ(n/2)/2
    let n = 2;
    let rep = identity_hessian1_residual(n, &profile("gauss(0.5)"), &QuadratureSpec::default()).unwrap();
    let mass = surface_area(n) * gauss_moment(n - 1, 1.0);
    assert!((rep.lhs - n as f64 * mass).abs() <= 1e-10 * rep.lhs);
    assert!(rep.relative() <= 1e-10);
}

#[test]
fn zero_profile_identity() {
    let zero = profile("polygauss(1; 0)");
    let rep = identity_eq1_residual(3, 0.0, &zero, &QuadratureSpec::default()).unwrap();
    assert_eq!(rep.lhs, 0.0);
    assert_eq!(rep.rhs, 0.0);
}

#[test]
fn literal_crucial_form_fails_at_gaussian() {
    let spec = QuadratureSpec::default();
    let u = profile("gauss(0.5)");
    let literal = identity_crucial_literal_residual(2, &u, &spec).unwrap();
    assert!(literal.relative() > 1e-3, "{literal:?}");
    assert!(identity_crucial_residual(2, &u, &spec).unwrap().relative() <= 1e-10);
}

#[test]
fn inequality_direction_on_battery() {
    let spec = QuadratureSpec::default();
    let hydrogen = InequalityParams::new(3, 0.0, 0.0, 0.5, 2.0);
    for u in identity_battery() {
        for n in [1, 3] {
            let rep = hpw_report(n, &u, &spec).unwrap();
            assert!(rep.ratio >= 1.0 - 1e-8, "hpw {} n={n}: {}", u.label(), rep.ratio);
        }
        for (n, alpha) in [(3, 0.0), (2, 0.5), (3, -0.25)] {
            let rep = cknalpha_report(n, alpha, &u, &spec).unwrap();
            assert!(rep.ratio >= 1.0 - 1e-8, "alpha {} ({n},{alpha}): {}", u.label(), rep.ratio);
        }
        let rep = ckn_radial_report(&hydrogen, &u, &spec).unwrap();
        assert!(rep.ratio >= 1.0 - 1e-8, "radial {}: {}", u.label(), rep.ratio);
    }
}

#[test]
fn alpha_ratio_is_dilation_invariant() {
    let spec = QuadratureSpec::default();
    for spec_str in ["polygauss(1; 1, 0, 1)", "bump(2, 0.5)", "hermmod(0.2, 4, 0.5)"] {
        let u = profile(spec_str);
        for (n, alpha) in [(3, 0.0), (2, 0.5)] {
            let base = cknalpha_report(n, alpha, &u, &spec).unwrap().ratio;
            for lambda in [0.5, 2.0] {
                let d = cknalpha_report(n, alpha, &u.dilated(lambda, n), &spec).unwrap().ratio;
                assert!((d - base).abs() <= 1e-7 * base, "{spec_str} λ={lambda}: {d} vs {base}");
            }
        }
    }
}

#[test]
fn radial_laplacian_identity_on_battery() {
    let spec = QuadratureSpec::default();
    for u in identity_battery().iter().take(20) {
        for (n, alpha) in [(3, 0.0), (2, 0.25), (5, 1.0)] {
            let rep = identity_radial_laplacian_residual(n, alpha, u, &spec).unwrap();
            assert!(rep.relative() <= 1e-8, "{} ({n},{alpha}): {:e}", u.label(), rep.relative());
        }
    }
}
