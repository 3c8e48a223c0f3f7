mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpckn::modal::{
    a_func, b_func, c_func, certified_lower_bound, estimate_sharp_k, lower_bound, min_over_k, mode_identity_residual,
    monotone_from, rayleigh, EstimateBudget, ModeParams,
};
use sharpckn::profiles::{make_exponential, make_family, make_gauss, RadialProfile};
use sharpckn::quad::QuadratureSpec;
use sharpckn::Error;
use std::f64::consts::PI;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// `∫₀^∞ r^m e^{−2r} dr = m! / 2^{m+1}`.
fn exp_moment(m: u32) -> f64 {
    (1..=m).fold(1.0, |acc, j| acc * j as f64) / 2f64.powi(m as i32 + 1)
}

#[test]
fn functionals_at_gaussian() {
    let g = make_gauss(0.5).unwrap();
    let a = a_func(&g, 3, 0.0, 0, &spec()).unwrap();
    assert!((a - 15.0 * PI.sqrt() / 16.0).abs() < 1e-12);
    let b = b_func(&g, 3, -2.0, 0, &spec()).unwrap();
    assert!((b - 15.0 * PI.sqrt() / 16.0).abs() < 1e-12);
    let c = c_func(&g, 3, 0.0, 0, &spec()).unwrap();
    assert!((c - 3.0 * PI.sqrt() / 8.0).abs() < 1e-12);
    let q = rayleigh(&g, &ModeParams::new(3, 0.0, -2.0, 0.0), 0, &spec()).unwrap();
    assert!((q.value - 6.25).abs() < 1e-11);
}

#[test]
fn functionals_at_exponential() {
    let g = make_exponential(1.0).unwrap();
    let a = a_func(&g, 3, 0.0, 1, &spec()).unwrap();
    assert!((a - (exp_moment(4) + 4.0 * exp_moment(2))).abs() < 1e-12);
    assert!((a - 1.75).abs() < 1e-12);
    let b = b_func(&g, 3, 0.0, 1, &spec()).unwrap();
    assert!((b - exp_moment(4)).abs() < 1e-12);
    let c = c_func(&g, 3, 0.5, 1, &spec()).unwrap();
    assert!((c - (exp_moment(3) + exp_moment(1))).abs() < 1e-12);
    assert!((c - 0.625).abs() < 1e-12);
}

#[test]
fn mode_zero_drops_lower_order_terms() {
    let g = make_family("polygauss(0.7; 1, 0, 0.4)").unwrap();
    let b0 = b_func(&g, 4, -1.5, 0, &spec()).unwrap();
    let b_plain = b_func(&g, 4, 0.0, 0, &spec()).unwrap();
    // β only enters the weight at k = 0
    let weighted = sharpckn::quad::integrate_semi_infinite(|r| g.du(r).powi(2) * r.powf(4.0 + 1.5 - 1.0), &spec())
        .unwrap()
        .value;
    assert!((b0 - weighted).abs() <= 1e-10 * weighted);
    assert!(b_plain > 0.0);
}

#[test]
fn hydrogen_mode_zero_self_refinement() {
    let g = make_exponential(1.0).unwrap();
    let p = ModeParams::new(3, 0.0, 0.0, 0.5);
    let a = rayleigh(&g, &p, 0, &spec()).unwrap().value;
    let b = rayleigh(&g, &p, 0, &spec().tightened(0.1, 2)).unwrap().value;
    assert!((a - b).abs() <= 1e-9 * b);
}

#[test]
fn degenerate_denominator() {
    let zero = make_family("polygauss(1; 0)").unwrap();
    let err = rayleigh(&zero, &ModeParams::new(3, 0.0, 0.0, 0.5), 1, &spec()).unwrap_err();
    assert!(matches!(err, Error::DegenerateDenominator { .. }));
}

#[test]
fn listed_mode_identities() {
    let g = make_gauss(0.5).unwrap();
    let r = mode_identity_residual(&g, &ModeParams::new(3, 0.0, 0.0, 0.5), 0, &spec()).unwrap();
    assert!(r.max_relative() <= 1e-9);
    let r = mode_identity_residual(&g, &ModeParams::new(3, 0.0, -1.0, 0.25), 2, &spec()).unwrap();
    assert!(r.max_relative() <= 1e-8);
    let e = make_exponential(1.0).unwrap();
    let r = mode_identity_residual(&e, &ModeParams::new(2, 0.0, -1.0, 0.25), 1, &spec()).unwrap();
    assert!(r.max_relative() <= 1e-8, "{r:?}");
}

#[test]
fn lower_bound_closed_forms() {
    assert_eq!(lower_bound(&ModeParams::new(3, 0.0, -2.0, 0.0), 0).unwrap(), 6.25);
    let l = lower_bound(&ModeParams::new(3, 0.0, -2.0, 0.0), 1).unwrap();
    assert!((l - 17.0 / 25.0 * 3.5 * 3.5).abs() < 1e-13);
    for n in 1..5u32 {
        for alpha in [0.0, 0.3, 1.2] {
            let p = ModeParams::new(n, alpha, 0.0, 0.0);
            for k in 0..6u32 {
                let q = (n as f64 + 2.0 * k as f64 + 4.0 * alpha + 2.0) / 2.0;
                assert_eq!(lower_bound(&p, k).unwrap(), q * q);
                assert_eq!(certified_lower_bound(&p, k).unwrap(), q * q);
            }
        }
    }
    // the gradient correction vanishes: n + 2k − β − 2 = 0 at k = 1
    assert!(lower_bound(&ModeParams::new(1, 0.0, 1.0, 0.0), 1).is_err());
}

#[test]
fn bounds_agree_without_positive_gamma() {
    for p in common::random_mode_tuples(40, 3, 10) {
        for k in 0..=10 {
            let stated = lower_bound(&p, k).unwrap();
            let cert = certified_lower_bound(&p, k).unwrap();
            assert!(cert <= stated);
            if p.gamma <= 0.0 || k == 0 {
                assert_eq!(cert, stated);
            }
        }
    }
}

#[test]
fn bounds_increase_past_monotone_index() {
    for p in common::random_mode_tuples(60, 5, 10) {
        let k0 = monotone_from(&p);
        let mut prev = certified_lower_bound(&p, k0).unwrap();
        let mut prev_stated = lower_bound(&p, k0).unwrap();
        for k in k0 + 1..k0 + 40 {
            let cur = certified_lower_bound(&p, k).unwrap();
            let cur_stated = lower_bound(&p, k).unwrap();
            assert!(cur >= prev * (1.0 - 1e-14), "{p:?} k={k}");
            assert!(cur_stated >= prev_stated * (1.0 - 1e-14), "{p:?} k={k}");
            prev = cur;
            prev_stated = cur_stated;
        }
    }
}

fn trial(rng: &mut ChaCha8Rng) -> RadialProfile {
    let a: f64 = rng.gen_range(0.3..1.5);
    let c2: f64 = rng.gen_range(-1.0..1.0);
    let c3: f64 = rng.gen_range(-0.5..0.5);
    make_family(&format!("polygauss({a}; 1, 0, {c2}, {c3})")).unwrap()
}

#[test]
fn quotient_homogeneity_and_dilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for p in common::random_mode_tuples(12, 9, 3) {
        let g = trial(&mut rng);
        for k in 0..=3 {
            let base = rayleigh(&g, &p, k, &spec()).unwrap().value;
            for c in [-3.0, 0.1, 7.0] {
                let v = rayleigh(&g.scaled(c), &p, k, &spec()).unwrap().value;
                assert!((v - base).abs() <= 1e-12 * base, "{p:?} k={k} c={c}");
            }
            for lambda in [0.5, 2.0] {
                let v = rayleigh(&g.stretched(lambda), &p, k, &spec()).unwrap().value;
                assert!((v - base).abs() <= 1e-7 * base, "{p:?} k={k} λ={lambda}: {v} vs {base}");
            }
        }
    }
}

#[test]
fn minkowski_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for p in common::random_mode_tuples(20, 13, 4) {
        let k0 = rng.gen_range(0..=2u32);
        let k1 = k0 + rng.gen_range(1..=2u32);
        let (g0, g1) = (trial(&mut rng), trial(&mut rng));
        let q0 = rayleigh(&g0, &p, k0, &spec()).unwrap();
        let q1 = rayleigh(&g1, &p, k1, &spec()).unwrap();
        let product = (q0.a + q1.a) * (q0.b + q1.b);
        let cauchy = ((q0.a * q0.b).sqrt() + (q1.a * q1.b).sqrt()).powi(2);
        let floor = certified_lower_bound(&p, k0)
            .unwrap()
            .min(certified_lower_bound(&p, k1).unwrap());
        let mass = (q0.c + q1.c).powi(2);
        assert!(product >= cauchy * (1.0 - 1e-9), "{p:?}");
        assert!(cauchy >= floor * mass * (1.0 - 1e-9), "{p:?}: {cauchy} < {floor}·{mass}");
    }
}

#[test]
fn estimates_respect_certified_bound() {
    let budget = EstimateBudget {
        max_evaluations: 8,
        basis_size: 3,
        ..Default::default()
    };
    for p in common::random_mode_tuples(6, 17, 4) {
        for k in 0..=4 {
            let est = estimate_sharp_k(&p, k, &spec(), &budget).unwrap();
            let cert = certified_lower_bound(&p, k).unwrap();
            assert!(est.upper >= cert - 1e-9, "{p:?} k={k}: {} < {cert}", est.upper);
            let direct = rayleigh(&est.witness, &p, k, &spec()).unwrap().value;
            assert!((direct - est.upper).abs() <= 1e-9 * est.upper);
        }
    }
}

#[test]
fn known_mode_zero_constants() {
    let budget = EstimateBudget::default();
    let est = estimate_sharp_k(&ModeParams::new(3, 0.0, -2.0, 0.0), 0, &spec(), &budget).unwrap();
    assert!(est.upper <= 6.25 + 1e-6, "{}", est.upper);
    let est = estimate_sharp_k(&ModeParams::new(3, 0.0, 0.0, 0.5), 0, &spec(), &budget).unwrap();
    assert!(est.upper <= 4.0 + 1e-6, "{}", est.upper);
}

#[test]
fn bracket_for_gaussian_case() {
    let br = min_over_k(&ModeParams::new(3, 0.0, -2.0, 0.0), &spec(), &EstimateBudget::default()).unwrap();
    assert_eq!(br.k_star, 0);
    assert!(br.lower <= 6.25 && 6.25 <= br.upper + 1e-9);
    assert!(!br.exhausted);
    for e in &br.per_k {
        assert!(e.certified_lower <= e.upper + 1e-9);
    }
    let next = certified_lower_bound(&ModeParams::new(3, 0.0, -2.0, 0.0), br.truncation_k + 1).unwrap();
    assert!(next > br.upper);
}
