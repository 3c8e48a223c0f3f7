use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpckn::hermite::{
    basis_size, factorial, hermite_eval, multi_indices, poincare_residual, spectral_gap, x2_product_integral,
    HermiteConvention, HermiteExpansion,
};
use sharpckn::modal::{min_over_k, EstimateBudget, ModeParams};
use sharpckn::profiles::{validate_params, InequalityParams};
use sharpckn::quad::integrate_semi_infinite;
use sharpckn::stability::{stability_report_gradient, stability_report_l2};

use crate::config::RunConfig;
use crate::report::{Cell, Report};
use crate::verify;

const BALANCE_TOL: f64 = 1e-12;
const PRODUCT_TOL: f64 = 1e-10;
/// Hermite commands are limited to `n ≤ 4`.
const HERMITE_MAX_N: usize = 4;

pub fn sharp_constant(cfg: &RunConfig, seed: u64) -> Result<Report> {
    let n: u32 = cfg.require("n")?;
    let alpha = cfg.or("alpha", 0.0)?;
    let beta = cfg.or("beta", 0.0)?;
    let balanced = ModeParams::balanced(n, alpha, beta).gamma;
    let gamma = cfg.or("gamma", balanced)?;
    if (gamma - balanced).abs() > BALANCE_TOL {
        bail!("invalid parameter: gamma = {gamma} breaks the t = 2 balance gamma = (1+alpha)/2 + beta/4 = {balanced}");
    }
    validate_params(&InequalityParams::new(n, alpha, beta, gamma, 2.0)).require_basic()?;
    let defaults = EstimateBudget::default();
    let budget = EstimateBudget {
        max_evaluations: cfg.or("evals", defaults.max_evaluations)?,
        basis_size: cfg.or("basis", defaults.basis_size)?,
        ..defaults
    };
    let spec = cfg.quadrature()?;
    let bracket = min_over_k(&ModeParams::new(n, alpha, beta, gamma), &spec, &budget)?;

    let mut report = Report::new(
        "sharp-constant",
        seed,
        &["row", "k", "lower", "upper", "stated_lower", "witness", "exhausted"],
    );
    for e in &bracket.per_k {
        if e.certified_lower > e.upper * (1.0 + 1e-9) {
            report.finding = true;
        }
        report.push(vec![
            "mode".into(),
            e.k.into(),
            e.certified_lower.into(),
            e.upper.into(),
            e.lower_bound.into(),
            e.witness_label.clone().into(),
            e.exhausted.into(),
        ]);
    }
    report.push(vec![
        "summary".into(),
        bracket.k_star.into(),
        bracket.lower.into(),
        bracket.upper.into(),
        Cell::Text(String::new()),
        format!("k_star={} truncation_k={}", bracket.k_star, bracket.truncation_k).into(),
        bracket.exhausted.into(),
    ]);
    Ok(report)
}

pub fn stability(cfg: &RunConfig, seed: u64) -> Result<Report> {
    let n: u32 = cfg.require("n")?;
    if n == 0 {
        bail!("invalid parameter: n >= 1");
    }
    let spec = cfg.quadrature()?;
    let profiles = verify::profiles(cfg, Some("stability"))?;
    let mut report = Report::new(
        "stability",
        seed,
        &[
            "profile",
            "n",
            "delta",
            "literal_delta",
            "relative_distance_grad",
            "relative_distance_l2",
            "coefficient_grad",
            "coefficient_l2",
            "satisfied_grad",
            "satisfied_l2",
        ],
    );
    for u in &profiles {
        let grad = stability_report_gradient(u, n, &spec)?;
        let l2 = stability_report_l2(u, n, &spec)?;
        report.finding |= !(grad.satisfied && l2.satisfied);
        report.push(vec![
            u.label().into(),
            n.into(),
            grad.delta.into(),
            grad.literal_delta.into(),
            grad.relative_distance.into(),
            l2.relative_distance.into(),
            grad.theorem_coefficient.into(),
            l2.theorem_coefficient.into(),
            grad.satisfied.into(),
            l2.satisfied.into(),
        ]);
    }
    Ok(report)
}

fn hermite_n(cfg: &RunConfig, default: usize) -> Result<usize> {
    let n = cfg.or("n", default)?;
    if n == 0 || n > HERMITE_MAX_N {
        bail!("invalid parameter: hermite commands need 1 <= n <= {HERMITE_MAX_N}");
    }
    Ok(n)
}

/// Gap findings are data: this command never reports a finding.
pub fn hermite_gap(cfg: &RunConfig, seed: u64) -> Result<Report> {
    let n = hermite_n(cfg, 1)?;
    let dmax: u32 = cfg.or("dmax", 4)?;
    let gap = spectral_gap(n, dmax)?;
    let mut report = Report::new("hermite gap", seed, &["n", "d", "gap", "claimed", "meets_claim"]);
    for p in &gap.sequence {
        report.push(vec![n.into(), p.d.into(), p.gap.into(), gap.claimed.into(), p.meets_claim.into()]);
    }
    Ok(report)
}

/// Closed-form `∫ t² H_i H_j dγ₁` against adaptive quadrature of the
/// Gaussian-weighted integrand.
pub fn hermite_products(cfg: &RunConfig, seed: u64) -> Result<Report> {
    let imax: u32 = cfg.or("imax", 8)?;
    if imax > 20 {
        bail!("invalid parameter: imax <= 20");
    }
    let spec = cfg.quadrature()?;
    let norm = (2.0 * std::f64::consts::PI).sqrt();
    let mut report = Report::new(
        "hermite check-products",
        seed,
        &["i", "j", "convention", "closed_form", "quadrature", "abs_error", "passed"],
    );
    for i in 0..=imax {
        for j in 0..=imax {
            let raw = if (i + j) % 2 == 1 {
                0.0
            } else {
                let half = integrate_semi_infinite(
                    |t| {
                        t * t
                            * hermite_eval(i, t, HermiteConvention::ProbabilistUnnormalized)
                            * hermite_eval(j, t, HermiteConvention::ProbabilistUnnormalized)
                            * (-0.5 * t * t).exp()
                    },
                    &spec,
                )?;
                2.0 * half.value / norm
            };
            for (conv, name, numeric) in [
                (HermiteConvention::ProbabilistUnnormalized, "unnormalized", raw),
                (
                    HermiteConvention::ProbabilistNormalized,
                    "normalized",
                    raw / (factorial(i) * factorial(j)).sqrt(),
                ),
            ] {
                let closed = x2_product_integral(i, j, conv);
                let err = (numeric - closed).abs();
                let passed = err <= PRODUCT_TOL * closed.abs().max(1.0);
                report.finding |= !passed;
                report.push(vec![
                    i.into(),
                    j.into(),
                    name.into(),
                    closed.into(),
                    numeric.into(),
                    err.into(),
                    passed.into(),
                ]);
            }
        }
    }
    Ok(report)
}

/// Seeded random expansions: the Gaussian Poincaré pair and the `Q` form.
pub fn hermite_poincare(cfg: &RunConfig, seed: u64) -> Result<Report> {
    let n = hermite_n(cfg, 2)?;
    let d: u32 = cfg.or("dmax", 4)?;
    let samples: usize = cfg.or("samples", 20)?;
    if basis_size(n, d) > 2000 {
        bail!("invalid parameter: basis for n = {n}, D = {d} is too large");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = multi_indices(n, d);
    let mut report = Report::new(
        "hermite poincare",
        seed,
        &["sample", "n", "d", "gradient_energy", "variance_bound", "holds", "q_value", "norm_sq"],
    );
    for s in 0..samples {
        let mut w = HermiteExpansion::new(n, d);
        let mut norm_sq = 0.0;
        for idx in &basis {
            let a: f64 = rng.gen_range(-1.0..1.0);
            norm_sq += a * a;
            w.insert(idx.clone(), a)?;
        }
        let pair = poincare_residual(&w);
        let holds = pair.lhs >= pair.rhs * (1.0 - 1e-12);
        report.finding |= !holds;
        report.push(vec![
            s.into(),
            n.into(),
            d.into(),
            pair.lhs.into(),
            pair.rhs.into(),
            holds.into(),
            w.q_form()?.into(),
            norm_sq.into(),
        ]);
    }
    Ok(report)
}
