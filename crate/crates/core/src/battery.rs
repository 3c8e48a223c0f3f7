//! Fixed profile sets shared by the property checks, the acceptance suite
//! and the command-line tool.

use crate::profiles::{make_bump, make_family, make_u1, RadialProfile};

/// Hermite perturbations are restricted to even indices: an odd `H_i(|x|)`
/// has a kink at the origin and no square-integrable Laplacian for `n ≤ 2`.
const PERTURBATION_EPS: [f64; 3] = [0.01, 0.05, 0.2];
const PERTURBATION_SHAPES: [(u32, f64); 10] = [
    (0, 0.5),
    (2, 0.3),
    (2, 0.5),
    (2, 1.0),
    (4, 0.3),
    (4, 0.5),
    (4, 1.0),
    (6, 0.3),
    (6, 0.5),
    (6, 1.0),
];

fn build(spec: &str) -> RadialProfile {
    make_family(spec).unwrap_or_else(|e| panic!("battery profile {spec}: {e}"))
}

/// `hermmod(ε, i, a)` for every `ε ∈ {0.01, 0.05, 0.2}` and ten `(i, a)`.
pub fn perturbed_gaussians() -> Vec<RadialProfile> {
    let mut out = Vec::with_capacity(30);
    for eps in PERTURBATION_EPS {
        for (i, a) in PERTURBATION_SHAPES {
            out.push(build(&format!("hermmod({eps},{i},{a})")));
        }
    }
    out
}

/// The perturbed gaussians plus two bumps and `(1+r)e^{−r}`.
pub fn stability_battery() -> Vec<RadialProfile> {
    let mut out = perturbed_gaussians();
    out.push(make_bump(2.0, 0.5).expect("bump"));
    out.push(make_bump(1.5, 1.0).expect("bump"));
    out.push(make_u1(0.0, 0.0).expect("u1"));
    out
}

/// Fifty smooth profiles with at least stretched-exponential decay.
pub fn identity_battery() -> Vec<RadialProfile> {
    let mut out = stability_battery();
    for spec in [
        "gauss(0.3)",
        "gauss(0.5)",
        "gauss(1)",
        "gauss(2)",
        "polygauss(0.5; 1, 0, 0.1)",
        "polygauss(1; 1, 0, -0.5, 0, 0.2)",
        "polygauss(0.25; 0, 0, 1)",
        "polygauss(2; 1, 0, 3)",
        "polygauss(0.7; 2, 0, 0, 0, 1)",
        "u1(0, -1)",
        "u1(0, -2)",
        "u1(0.5, 0)",
        "u1(1, 0)",
        "bump(1, 0.5)",
        "bump(3, 1)",
        "hermmod(0.1, 8, 0.5)",
        "hermmod(0.3, 2, 2)",
    ] {
        out.push(build(spec));
    }
    out
}
