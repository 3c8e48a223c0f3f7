//! `verify` checks, dispatched by name through [`CHECKS`].

use anyhow::{bail, Result};
use sharpckn::battery::{identity_battery, perturbed_gaussians, stability_battery};
use sharpckn::functionals::{
    ckn_radial_report, cknalpha_report, hpw_report, identity_crucial_literal_residual, identity_crucial_residual,
    identity_eq1_residual, identity_general_residual, identity_hessian1_residual,
    identity_radial_laplacian_residual, DeficitReport, IdentityResidual,
};
use sharpckn::modal::{mode_identity_residual, ModeParams};
use sharpckn::profiles::{make_family, validate_params, InequalityParams, RadialProfile};
use sharpckn::quad::QuadratureSpec;

use crate::config::RunConfig;
use crate::report::{Cell, Report};

pub const DEFAULT_TOL: f64 = 1e-8;

pub const COLUMNS: &[&str] = &[
    "profile",
    "check",
    "lhs",
    "rhs",
    "metric",
    "value",
    "tolerance",
    "converged",
    "passed",
    "informational",
];

/// One evaluated check on one profile.
pub struct CheckRow {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub metric: &'static str,
    pub value: f64,
    pub converged: bool,
    pub passed: bool,
    /// Reported for comparison only; never a finding.
    pub informational: bool,
}

impl CheckRow {
    fn inequality(check: &str, r: &DeficitReport, tol: f64) -> Self {
        Self {
            check: check.into(),
            lhs: r.lhs,
            rhs: r.rhs,
            metric: "ratio",
            value: r.ratio,
            converged: r.converged,
            passed: r.ratio >= 1.0 - tol,
            informational: false,
        }
    }

    fn identity(check: impl Into<String>, r: &IdentityResidual, tol: f64) -> Self {
        Self {
            check: check.into(),
            lhs: r.lhs,
            rhs: r.rhs,
            metric: "relative_residual",
            value: r.relative(),
            converged: r.converged,
            passed: r.relative() <= tol,
            informational: false,
        }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub spec: &'a QuadratureSpec,
    pub tol: f64,
}

type RunCheck = fn(&Ctx, &RadialProfile) -> Result<Vec<CheckRow>>;

pub struct VerifyCheck {
    pub name: &'static str,
    pub about: &'static str,
    /// Validates the parameters once before any profile is evaluated.
    pub prepare: fn(&Ctx) -> Result<()>,
    pub run: RunCheck,
}

pub const CHECKS: &[VerifyCheck] = &[
    VerifyCheck {
        name: "ckn-radial",
        about: "weighted second-order inequality; needs n, alpha, beta, t (gamma defaults to the balance)",
        prepare: |c| radial_params(c).map(drop),
        run: |c, u| {
            let p = radial_params(c)?;
            Ok(vec![CheckRow::inequality("ckn_radial", &ckn_radial_report(&p, u, c.spec)?, c.tol)])
        },
    },
    VerifyCheck {
        name: "ckn-alpha",
        about: "weighted Rellich-type inequality; needs n, alpha",
        prepare: |c| alpha_params(c).map(drop),
        run: |c, u| {
            let (n, alpha) = alpha_params(c)?;
            Ok(vec![CheckRow::inequality("ckn_alpha", &cknalpha_report(n, alpha, u, c.spec)?, c.tol)])
        },
    },
    VerifyCheck {
        name: "hpw",
        about: "second-order uncertainty principle; needs n",
        prepare: |c| c.cfg.require::<u32>("n").map(drop),
        run: |c, u| {
            let n = c.cfg.require("n")?;
            Ok(vec![CheckRow::inequality("hpw", &hpw_report(n, u, c.spec)?, c.tol)])
        },
    },
    VerifyCheck {
        name: "identities",
        about: "integral identities; needs n, optional alpha",
        prepare: |c| c.cfg.require::<u32>("n").map(drop),
        run: identities,
    },
    VerifyCheck {
        name: "modal-identities",
        about: "mode functionals against their definitions; needs n, alpha, beta, optional gamma, kmax",
        prepare: |c| mode_params(c).map(drop),
        run: modal_identities,
    },
];

pub fn find(name: &str) -> Option<&'static VerifyCheck> {
    CHECKS.iter().find(|c| c.name == name)
}

pub fn possible_values() -> Vec<clap::builder::PossibleValue> {
    CHECKS
        .iter()
        .map(|c| clap::builder::PossibleValue::new(c.name).help(c.about))
        .collect()
}

fn gamma_or_balanced(cfg: &RunConfig, alpha: f64, beta: f64, t: f64) -> Result<f64> {
    Ok(cfg.get("gamma")?.unwrap_or_else(|| InequalityParams::balanced(1, alpha, beta, t).gamma))
}

fn radial_params(c: &Ctx) -> Result<InequalityParams> {
    let n = c.cfg.require("n")?;
    let alpha = c.cfg.or("alpha", 0.0)?;
    let beta = c.cfg.or("beta", 0.0)?;
    let t = c.cfg.or("t", 2.0)?;
    let gamma = gamma_or_balanced(c.cfg, alpha, beta, t)?;
    let p = InequalityParams::new(n, alpha, beta, gamma, t);
    validate_params(&p).require_basic()?;
    Ok(p)
}

fn alpha_params(c: &Ctx) -> Result<(u32, f64)> {
    let n: u32 = c.cfg.require("n")?;
    let alpha: f64 = c.cfg.or("alpha", 0.0)?;
    if !(n as f64 - 2.0 * alpha > 0.0 && 1.0 + alpha > 0.0) {
        bail!("invalid parameter: need n - 2*alpha > 0 and 1 + alpha > 0 (n = {n}, alpha = {alpha})");
    }
    Ok((n, alpha))
}

fn mode_params(c: &Ctx) -> Result<ModeParams> {
    let n: u32 = c.cfg.require("n")?;
    let alpha = c.cfg.or("alpha", 0.0)?;
    let beta = c.cfg.or("beta", 0.0)?;
    let gamma = gamma_or_balanced(c.cfg, alpha, beta, 2.0)?;
    if n == 0 {
        bail!("invalid parameter: n >= 1");
    }
    Ok(ModeParams::new(n, alpha, beta, gamma))
}

fn identities(c: &Ctx, u: &RadialProfile) -> Result<Vec<CheckRow>> {
    let n: u32 = c.cfg.require("n")?;
    let alpha: f64 = c.cfg.or("alpha", 0.0)?;
    let (s, tol) = (c.spec, c.tol);
    Ok(vec![
        CheckRow::identity("eq1", &identity_eq1_residual(n, alpha, u, s)?, tol),
        CheckRow::identity("general", &identity_general_residual(n, alpha, u, s)?, tol),
        CheckRow::identity("hessian", &identity_hessian1_residual(n, u, s)?, tol),
        CheckRow::identity("crucial", &identity_crucial_residual(n, u, s)?, tol),
        CheckRow::identity("crucial_literal", &identity_crucial_literal_residual(n, u, s)?, tol).informational(),
        CheckRow::identity("radial_laplacian", &identity_radial_laplacian_residual(n, alpha, u, s)?, tol),
    ])
}

fn modal_identities(c: &Ctx, u: &RadialProfile) -> Result<Vec<CheckRow>> {
    let p = mode_params(c)?;
    let kmax: u32 = c.cfg.or("kmax", 2)?;
    let mut rows = Vec::new();
    for k in 0..=kmax {
        let r = mode_identity_residual(u, &p, k, c.spec)?;
        rows.push(CheckRow::identity(format!("mode_a_k{k}"), &r.a, c.tol));
        rows.push(CheckRow::identity(format!("mode_b_k{k}"), &r.b, c.tol));
        rows.push(CheckRow::identity(format!("mode_c_k{k}"), &r.c, c.tol));
    }
    Ok(rows)
}

/// Profiles named by `--profile`, or a named battery.
pub fn profiles(cfg: &RunConfig, default_battery: Option<&str>) -> Result<Vec<RadialProfile>> {
    let mut out = Vec::new();
    for s in cfg.list("profile") {
        out.push(make_family(s)?);
    }
    let battery = cfg.raw("battery").or(if out.is_empty() { default_battery } else { None });
    if let Some(name) = battery {
        out.extend(match name {
            "identity" => identity_battery(),
            "stability" => stability_battery(),
            "perturbed" => perturbed_gaussians(),
            other => bail!("unknown battery '{other}' (identity, stability, perturbed)"),
        });
    }
    if out.is_empty() {
        bail!("no profiles: pass --profile or --battery");
    }
    Ok(out)
}

pub fn run(check: &VerifyCheck, cfg: &RunConfig, seed: u64) -> Result<Report> {
    let spec = cfg.quadrature()?;
    let tol = cfg.or("tol", DEFAULT_TOL)?;
    if !(tol >= 0.0) {
        bail!("invalid parameter: tol must be nonnegative");
    }
    let ctx = Ctx { cfg, spec: &spec, tol };
    (check.prepare)(&ctx)?;
    let profiles = profiles(cfg, None)?;
    let mut report = Report::new(format!("verify {}", check.name), seed, COLUMNS);
    for u in &profiles {
        for row in (check.run)(&ctx, u)? {
            if !row.passed && !row.informational {
                report.finding = true;
            }
            report.push(vec![
                Cell::from(u.label()),
                row.check.into(),
                row.lhs.into(),
                row.rhs.into(),
                row.metric.into(),
                row.value.into(),
                ctx.tol.into(),
                row.converged.into(),
                row.passed.into(),
                row.informational.into(),
            ]);
        }
    }
    Ok(report)
}
