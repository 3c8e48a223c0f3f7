use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpckn::profiles::{
    make_family, make_gauss, make_u0, make_u1, make_u2, parse_call, validate_params, InequalityParams,
    RadialProfile,
};
use sharpckn::Error;

const FAMILIES: [&str; 14] = [
    "gauss(0.5)",
    "gauss(2)",
    "polygauss(1; 1, 0, 1)",
    "polygauss(0.3; 2, -1, 0.5, 0.1)",
    "bump(1, 0.5)",
    "bump(2.5, 2)",
    "u0(0)",
    "u0(0.5)",
    "u0(-0.25)",
    "u1(0, 0)",
    "u1(0, -1)",
    "u1(0.5, 0.4)",
    "u2(3, 0, -1)",
    "hermmod(0.05, 4, 0.5)",
];

/// Centered difference with steps `h` and `h/2`, Richardson-combined so that
/// steep bump edges do not dominate through the `h²` term.
fn centered(f: impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
    let d = |h: f64| (f(r + h) - f(r - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// Finite differences against the analytic derivatives. Near-zero
/// derivatives are compared on the scale of the profile.
fn check_derivatives(u: &RadialProfile, r: f64, h: f64) -> Result<(), String> {
    let scale = u.u(r).abs().max(u.du(r).abs()).max(1e-3);
    let fd1 = centered(|x| u.u(x), r, h);
    let fd2 = centered(|x| u.du(x), r, h);
    let e1 = (fd1 - u.du(r)).abs() / u.du(r).abs().max(1e-3 * scale);
    let e2 = (fd2 - u.d2u(r)).abs() / u.d2u(r).abs().max(1e-3 * scale);
    if e1 > 1e-6 || e2 > 1e-6 {
        return Err(format!("{} at r={r}: du err {e1:e}, d2u err {e2:e}", u.label()));
    }
    Ok(())
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in FAMILIES {
        let u = make_family(spec).unwrap();
        for _ in 0..50 {
            let r = rng.gen_range(0.1..5.0);
            check_derivatives(&u, r, 1e-5).unwrap();
        }
    }
}

#[test]
fn small_r_exponent_bounds_derivative() {
    for spec in FAMILIES {
        let u = make_family(spec).unwrap();
        let p = u.small_r_exponent();
        if !p.is_finite() {
            assert_eq!(u.du(1e-4), 0.0, "{spec}");
            continue;
        }
        let a = u.du(1e-4).abs() * 1e-4f64.powf(-p);
        let b = u.du(1e-6).abs() * 1e-6f64.powf(-p);
        assert!(a.is_finite() && b.is_finite() && b <= 2.0 * a + 1e-12, "{spec}: {a} {b}");
    }
}

#[test]
fn dilation_scales_derivative() {
    for (u, n) in [
        (make_gauss(0.7).unwrap(), 3),
        (make_u0(0.0).unwrap(), 2),
        (make_u0(0.5).unwrap(), 5),
    ] {
        for lambda in [0.5, 2.0, 3.7] {
            let d = u.dilated(lambda, n);
            for r in [0.1, 0.9, 2.3] {
                let expected = lambda.powf(n as f64 / 2.0) * u.du(lambda * r);
                assert!((d.du(r) - expected).abs() <= 1e-15 * expected.abs().max(1e-300));
                let value = lambda.powf((n as f64 - 2.0) / 2.0) * u.u(lambda * r);
                assert!((d.u(r) - value).abs() <= 1e-15 * value.abs().max(1e-300));
            }
        }
    }
}

#[test]
fn hydrogen_extremal_closed_form() {
    let u = make_u1(0.0, 0.0).unwrap();
    for i in 0..=200 {
        let r = 0.1 * i as f64;
        let exact = (1.0 + r) * (-r).exp();
        assert!((u.u(r) - exact).abs() <= 1e-10, "r={r}");
    }
    assert!((u.u(0.0) - 1.0).abs() < 1e-14);
}

#[test]
fn listed_extremal_values() {
    let u0 = make_u0(0.0).unwrap();
    assert_eq!(u0.u(0.0), 1.0);
    assert!((u0.du(1.0) + (-0.5f64).exp()).abs() < 1e-15);
    assert!((make_u0(0.5).unwrap().u(1.0) - (-1.0f64 / 3.0).exp()).abs() < 1e-15);
    assert!(matches!(make_u0(-1.0), Err(Error::InvalidParameter(_))));

    // reference values from 30-digit quadrature
    let u1 = make_u1(0.0, -1.0).unwrap();
    assert!((u1.u(1.0) - 0.674_911_940_166_416).abs() < 1e-11);

    let u2 = make_u2(3.0, 0.0, -1.0).unwrap();
    for r in [0.3f64, 1.0, 4.0] {
        let exact = -r / (1.0 + r.powf(2.5) / 2.5);
        assert!((u2.du(r) - exact).abs() <= 1e-15 * exact.abs());
    }
    assert!((u2.du(1e-7) / -1e-7 - 1.0).abs() < 1e-12);
    assert!((u2.u(2.0) - 3.323_565_931_802_26).abs() < 1e-10);
}

#[test]
fn dsl_builds_documented_shapes() {
    let pg = make_family("polygauss(1; 1,0,1)").unwrap();
    for r in [0.0, 0.5, 2.0] {
        assert!((pg.u(r) - (1.0 + r * r) * (-r * r).exp()).abs() < 1e-15);
    }
    let g = make_family("gauss(0.5)").unwrap();
    assert!((g.u(1.3) - (-0.5 * 1.69f64).exp()).abs() < 1e-15);
    let b = make_family("bump(1,0.5)").unwrap();
    assert_eq!(b.u(10.0), 0.0);
    assert!(b.u(1.0) > 0.0);
    let hm = make_family("hermmod(0.1, 2, 1)").unwrap();
    assert!((hm.u(2.0) - (1.0 + 0.1 * 3.0) * (-4.0f64).exp()).abs() < 1e-15);
}

#[test]
fn dsl_errors_carry_positions() {
    match parse_call("gauss(0.5") {
        Err(Error::Parse { position, .. }) => assert_eq!(position, 9),
        other => panic!("{other:?}"),
    }
    assert!(matches!(make_family("nosuch(1)"), Err(_)));
    assert!(matches!(make_family("gauss(-1)"), Err(Error::InvalidParameter(_))));
    assert!(matches!(make_family("bump(0.2, 0.5)"), Err(Error::InvalidParameter(_))));
}

#[test]
fn parameter_conditions() {
    let hydrogen = validate_params(&InequalityParams::new(3, 0.0, 0.0, 0.5, 2.0));
    assert!(hydrogen.basic_ok());

    let cubic = validate_params(&InequalityParams::new(3, 0.0, -1.0, 0.5, 3.0));
    assert!(cubic.get("extremal_bounded").unwrap().passed);
    assert!(cubic.get("extremal_energy").unwrap().passed);

    let bad = validate_params(&InequalityParams::new(1, 1.0, 0.0, 1.0, 2.0));
    assert!(!bad.basic_ok());
    assert!(bad.require_basic().unwrap_err().to_string().contains("n - 2*alpha"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polygauss_derivatives(a in 0.2f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, c3 in -1.0f64..1.0, r in 0.1f64..4.0) {
        let u = make_family(&format!("polygauss({a}; 1, {c1}, {c2}, {c3})")).unwrap();
        prop_assert!(check_derivatives(&u, r, 1e-5).is_ok(), "{:?}", check_derivatives(&u, r, 1e-5));
    }

    #[test]
    fn u1_derivatives(alpha in -0.4f64..1.0, beta in -2.0f64..0.5, r in 0.1f64..5.0) {
        prop_assume!(1.0 + alpha - beta / 2.0 > 0.2);
        let u = make_u1(alpha, beta).unwrap();
        prop_assert!(check_derivatives(&u, r, 1e-5).is_ok(), "{:?}", check_derivatives(&u, r, 1e-5));
    }

    #[test]
    fn scaling_is_linear(c in -5.0f64..5.0, r in 0.0f64..4.0) {
        let u = make_family("hermmod(0.2, 2, 0.5)").unwrap();
        let s = u.scaled(c);
        prop_assert_eq!(s.u(r), c * u.u(r));
        prop_assert_eq!(s.du(r), c * u.du(r));
        prop_assert_eq!(s.d2u(r), c * u.d2u(r));
    }
}
