//! Both sides of the weighted inequalities for radial profiles, and
//! integration-by-parts identities as numerical residuals.
//!
//! Every `n`-dimensional integral of a radial integrand is `|S^{n-1}|` times a
//! one-dimensional integral against `r^{n-1}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profiles::{validate_params, DecayClass, InequalityParams, RadialProfile};
use crate::quad::{gamma_half_integer, integrate_semi_infinite, QuadratureSpec};

/// `|S^{n-1}| = 2π^{n/2} / Γ(n/2)`.
pub fn surface_area(n: u32) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half_integer(n)
}

/// One named integral of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub name: String,
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficitReport {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    /// `lhs / (constant · rhs)`; at least 1 when the inequality holds.
    pub ratio: f64,
    pub components: Vec<Component>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub scale: f64,
    pub converged: bool,
}

impl IdentityResidual {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            scale: lhs.abs().max(rhs.abs()).max(1.0),
            converged: true,
        }
    }

    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

/// `r ↦ u''(r) + (n−1) u'(r)/r`.
#[derive(Debug, Clone)]
pub struct RadialLaplacian {
    u: RadialProfile,
    n: u32,
}

pub fn laplacian_radial(u: &RadialProfile, n: u32) -> RadialLaplacian {
    RadialLaplacian { u: u.clone(), n }
}

impl RadialLaplacian {
    /// At `r = 0` the limit `n u''(0)` is returned when `u' = O(r)`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            let p = self.u.small_r_exponent();
            if p >= 1.0 {
                Ok(self.n as f64 * self.u.d2u(0.0))
            } else {
                Err(Error::SingularAtOrigin { exponent: p })
            }
        } else {
            Ok(lap(&self.u, self.n, r))
        }
    }
}

pub(crate) fn lap(u: &RadialProfile, n: u32, r: f64) -> f64 {
    let d1 = u.du(r);
    let d2 = u.d2u(r);
    if d1 == 0.0 || n == 1 {
        d2
    } else {
        d2 + (n as f64 - 1.0) * d1 / r
    }
}

fn pw(r: f64, w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        r.powf(w)
    }
}

/// Evaluates named radial integrals for one profile.
pub(crate) struct Integrator<'a> {
    pub u: &'a RadialProfile,
    pub n: u32,
    spec: QuadratureSpec,
    pub components: Vec<Component>,
}

impl<'a> Integrator<'a> {
    pub fn new(u: &'a RadialProfile, n: u32, spec: &QuadratureSpec) -> Self {
        Self {
            u,
            n,
            spec: spec.with_split_points(&u.split_points()),
            components: Vec::new(),
        }
    }

    /// `|S^{n-1}| ∫ f(r) r^{n-1} dr`; `power` is the leading exponent of the
    /// whole integrand at the origin, when known.
    pub fn integral(&mut self, name: &str, power: Option<f64>, f: impl Fn(f64) -> f64) -> Result<f64> {
        let w = self.n as f64 - 1.0;
        let hint = power.filter(|p| p.is_finite());
        let spec = self.spec.with_origin_exponent(hint);
        let res = integrate_semi_infinite(
            |r| {
                let v = f(r);
                if v == 0.0 {
                    0.0
                } else {
                    v * pw(r, w)
                }
            },
            &spec,
        )
        .map_err(|e| Error::quadrature(name, e))?;
        let area = surface_area(self.n);
        self.components.push(Component {
            name: name.to_string(),
            value: area * res.value,
            error_estimate: area * res.error_estimate,
            converged: res.converged,
        });
        Ok(area * res.value)
    }

    /// Leading power of `u'` at the origin.
    pub fn p(&self) -> f64 {
        self.u.small_r_exponent()
    }

    fn finish(self, lhs: f64, rhs: f64, constant: f64) -> Result<DeficitReport> {
        if rhs == 0.0 {
            return Err(Error::ZeroFunction);
        }
        let converged = self.components.iter().all(|c| c.converged);
        Ok(DeficitReport {
            lhs,
            rhs,
            constant,
            ratio: lhs / (constant * rhs),
            components: self.components,
            converged,
        })
    }
}

/// Second-order weighted inequality for radial `u`:
/// `(∫|Δu|²|x|^{-2α})(∫|∇u|^{2(t-1)}|x|^{-β}) ≥ K (∫|∇u|^t |x|^{-tγ})²`,
/// `K = ((n + t(1 + 2α − γ))/t)²`.
pub fn ckn_radial_report(p: &InequalityParams, u: &RadialProfile, spec: &QuadratureSpec) -> Result<DeficitReport> {
    validate_params(p).require_basic()?;
    let n = p.n as f64;
    let (a, b, g, t) = (p.alpha, p.beta, p.gamma, p.t);
    let mut it = Integrator::new(u, p.n, spec);
    let e = it.p();
    let i_lap = it.integral("laplacian", Some(2.0 * (e - 1.0) + n - 2.0 * a - 1.0), |r| {
        let l = lap(u, p.n, r);
        l * l * pw(r, -2.0 * a)
    })?;
    let i_b = it.integral("gradient_power", Some(2.0 * (t - 1.0) * e + n - b - 1.0), |r| {
        u.du(r).abs().powf(2.0 * (t - 1.0)) * pw(r, -b)
    })?;
    let i_c = it.integral("mixed", Some(t * e + n - t * g - 1.0), |r| {
        u.du(r).abs().powf(t) * pw(r, -t * g)
    })?;
    it.finish(i_lap * i_b, i_c * i_c, p.sharp_constant())
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} is required")))
    }
}

/// `(∫|Δu|²|x|^{-2α})(∫|x|^{2α}|∇u·x|²) ≥ ((n+4α+2)/2)² (∫|∇u|²)²`.
pub fn cknalpha_report(n: u32, alpha: f64, u: &RadialProfile, spec: &QuadratureSpec) -> Result<DeficitReport> {
    let nf = n as f64;
    require(n >= 1, "n >= 1")?;
    require(nf - 2.0 * alpha > 0.0, "n - 2*alpha > 0")?;
    require(nf + 2.0 * alpha > 0.0, "n + 2*alpha > 0")?;
    require(nf + 2.0 + 4.0 * alpha > 0.0, "n + 2 + 4*alpha > 0")?;
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let i_lap = it.integral("laplacian", Some(2.0 * (e - 1.0) + nf - 2.0 * alpha - 1.0), |r| {
        let l = lap(u, n, r);
        l * l * pw(r, -2.0 * alpha)
    })?;
    let i_rad = it.integral("radial_gradient", Some(2.0 * e + 2.0 + 2.0 * alpha + nf - 1.0), |r| {
        let d = u.du(r);
        d * d * pw(r, 2.0 + 2.0 * alpha)
    })?;
    let i_grad = it.integral("gradient", Some(2.0 * e + nf - 1.0), |r| u.du(r).powi(2))?;
    let k = (nf + 4.0 * alpha + 2.0) / 2.0;
    it.finish(i_lap * i_rad, i_grad * i_grad, k * k)
}

/// `(∫|∇u|²)(∫|x|²u²) ≥ (n²/4)(∫u²)²`.
pub fn hpw_report(n: u32, u: &RadialProfile, spec: &QuadratureSpec) -> Result<DeficitReport> {
    require(n >= 1, "n >= 1")?;
    let nf = n as f64;
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let i_grad = it.integral("gradient", Some(2.0 * e + nf - 1.0), |r| u.du(r).powi(2))?;
    let i_mom = it.integral("second_moment", None, |r| (r * u.u(r)).powi(2))?;
    let i_mass = it.integral("mass", None, |r| u.u(r).powi(2))?;
    it.finish(i_grad * i_mom, i_mass * i_mass, nf * nf / 4.0)
}

fn residual(it: &Integrator<'_>, lhs: f64, rhs: f64) -> IdentityResidual {
    let mut r = IdentityResidual::new(lhs, rhs);
    r.converged = it.components.iter().all(|c| c.converged);
    r
}

/// `∫|Δu + ∇u·x|x|^{2α}|²|x|^{-2α} = ∫|Δu|²|x|^{-2α} + ∫|∇u·x/|x||²|x|^{2+2α} + (n−2)∫|∇u|²`.
pub fn identity_eq1_residual(n: u32, alpha: f64, u: &RadialProfile, spec: &QuadratureSpec) -> Result<IdentityResidual> {
    require(n >= 1, "n >= 1")?;
    let nf = n as f64;
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let lhs = it.integral("combined", Some(2.0 * (e - 1.0) + nf - 2.0 * alpha - 1.0), |r| {
        let s = lap(u, n, r) + u.du(r) * pw(r, 1.0 + 2.0 * alpha);
        s * s * pw(r, -2.0 * alpha)
    })?;
    let a = it.integral("laplacian", Some(2.0 * (e - 1.0) + nf - 2.0 * alpha - 1.0), |r| {
        let l = lap(u, n, r);
        l * l * pw(r, -2.0 * alpha)
    })?;
    let b = it.integral("radial_gradient", Some(2.0 * e + 2.0 + 2.0 * alpha + nf - 1.0), |r| {
        u.du(r).powi(2) * pw(r, 2.0 + 2.0 * alpha)
    })?;
    let c = it.integral("gradient", Some(2.0 * e + nf - 1.0), |r| u.du(r).powi(2))?;
    Ok(residual(&it, lhs, a + b + (nf - 2.0) * c))
}

/// With `u = v U0`, `U0 = exp(−|x|^{2+2α}/(2+2α))`:
/// `∫|Δu|²|x|^{-2α} + ∫|∇u·x/|x||²|x|^{2+2α}
///   = ∫|Δv − ∇v·x|x|^{2α}|²|x|^{-2α} U0² + (n+4α+2)∫|∇u|²`.
///
/// The `v` terms are formed as `v' U0` and `v'' U0` directly from `u`, so no
/// growing factor is ever evaluated.
pub fn identity_general_residual(
    n: u32,
    alpha: f64,
    u: &RadialProfile,
    spec: &QuadratureSpec,
) -> Result<IdentityResidual> {
    let nf = n as f64;
    require(n >= 1, "n >= 1")?;
    require(1.0 + alpha > 0.0, "1 + alpha > 0")?;
    require(nf + 2.0 * alpha > 0.0, "n + 2*alpha > 0")?;
    require(nf + 2.0 + 4.0 * alpha > 0.0, "n + 2 + 4*alpha > 0")?;
    if u.decay_class() == DecayClass::Polynomial {
        return Err(Error::DecayViolation(format!(
            "{} decays polynomially; u/U0 terms are not integrable",
            u.label()
        )));
    }
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let a = it.integral("laplacian", Some(2.0 * (e - 1.0) + nf - 2.0 * alpha - 1.0), |r| {
        let l = lap(u, n, r);
        l * l * pw(r, -2.0 * alpha)
    })?;
    let b = it.integral("radial_gradient", Some(2.0 * e + 2.0 + 2.0 * alpha + nf - 1.0), |r| {
        u.du(r).powi(2) * pw(r, 2.0 + 2.0 * alpha)
    })?;
    let grad = it.integral("gradient", Some(2.0 * e + nf - 1.0), |r| u.du(r).powi(2))?;
    let phi1 = |r: f64| pw(r, 1.0 + 2.0 * alpha);
    let d = it
        .integral("factored", None, |r| {
            let (u0, u1, u2) = (u.u(r), u.du(r), u.d2u(r));
            let p1 = phi1(r);
            let p2 = (1.0 + 2.0 * alpha) * pw(r, 2.0 * alpha);
            let v1 = u1 + u0 * p1;
            let v2 = u2 + 2.0 * u1 * p1 + u0 * (p2 + p1 * p1);
            let dv = if n == 1 { v2 - p1 * v1 } else { v2 + (nf - 1.0) * v1 / r - p1 * v1 };
            dv * dv * pw(r, -2.0 * alpha)
        })
        .map_err(decay_error)?;
    Ok(residual(&it, a + b, d + (nf + 4.0 * alpha + 2.0) * grad))
}

fn decay_error(e: Error) -> Error {
    if e.is_divergence() {
        Error::DecayViolation(e.to_string())
    } else {
        e
    }
}

/// `∫|Δu|² + ∫|x|²|∇u|² = (n+2)∫|∇u|² + ∫‖∇²v − x⊗∇v‖² e^{−|x|²}`,
/// `u = v e^{−|x|²/2}`.
pub fn identity_crucial_residual(n: u32, u: &RadialProfile, spec: &QuadratureSpec) -> Result<IdentityResidual> {
    crucial(n, u, spec, false)
}

/// The same identity with `∫|x|²u²` in place of `∫|x|²|∇u|²` on the left.
/// It does not balance in general (already not at the Gaussian); the
/// residual is reported as a diagnostic.
pub fn identity_crucial_literal_residual(n: u32, u: &RadialProfile, spec: &QuadratureSpec) -> Result<IdentityResidual> {
    crucial(n, u, spec, true)
}

fn crucial(n: u32, u: &RadialProfile, spec: &QuadratureSpec, literal: bool) -> Result<IdentityResidual> {
    require(n >= 1, "n >= 1")?;
    let nf = n as f64;
    if u.decay_class() == DecayClass::Polynomial {
        return Err(Error::DecayViolation(format!(
            "{} decays polynomially; the Gaussian-weighted terms are not integrable",
            u.label()
        )));
    }
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let a = it.integral("laplacian", Some(2.0 * (e - 1.0) + nf - 1.0), |r| lap(u, n, r).powi(2))?;
    let b = if literal {
        it.integral("second_moment", None, |r| (r * u.u(r)).powi(2))?
    } else {
        it.integral("weighted_gradient", Some(2.0 * e + 2.0 + nf - 1.0), |r| (r * u.du(r)).powi(2))?
    };
    let g = it.integral("gradient", Some(2.0 * e + nf - 1.0), |r| u.du(r).powi(2))?;
    let h = it
        .integral("hessian_defect", None, |r| {
            let (u0, u1, u2) = (u.u(r), u.du(r), u.d2u(r));
            let radial = u2 + r * u1 + u0;
            let tangential = (u1 + r * u0) / r;
            radial * radial + (nf - 1.0) * tangential * tangential
        })
        .map_err(decay_error)?;
    Ok(residual(&it, a + b, (nf + 2.0) * g + h))
}

/// `∫‖∇²u + ∇u⊗x‖² = ∫|Δu|² − n∫|∇u|² + ∫|∇u|²|x|²`.
pub fn identity_hessian1_residual(n: u32, u: &RadialProfile, spec: &QuadratureSpec) -> Result<IdentityResidual> {
    require(n >= 1, "n >= 1")?;
    let nf = n as f64;
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let lhs = it.integral("shifted_hessian", Some(2.0 * (e - 1.0) + nf - 1.0), |r| {
        let (u1, u2) = (u.du(r), u.d2u(r));
        let radial = u2 + r * u1;
        if u1 == 0.0 {
            radial * radial
        } else {
            radial * radial + (nf - 1.0) * (u1 / r).powi(2)
        }
    })?;
    let a = it.integral("laplacian", Some(2.0 * (e - 1.0) + nf - 1.0), |r| lap(u, n, r).powi(2))?;
    let g = it.integral("gradient", Some(2.0 * e + nf - 1.0), |r| u.du(r).powi(2))?;
    let w = it.integral("weighted_gradient", Some(2.0 * e + 2.0 + nf - 1.0), |r| (r * u.du(r)).powi(2))?;
    Ok(residual(&it, lhs, a - nf * g + w))
}

/// `∫(u'' + (n−1)u'/r − (n+2α)u'/r)² r^{n−2α−1} = ∫(Δu)² r^{n−2α−1}`.
pub fn identity_radial_laplacian_residual(
    n: u32,
    alpha: f64,
    u: &RadialProfile,
    spec: &QuadratureSpec,
) -> Result<IdentityResidual> {
    require(n >= 1, "n >= 1")?;
    let nf = n as f64;
    require(nf - 2.0 * alpha > 0.0, "n - 2*alpha > 0")?;
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let power = Some(2.0 * (e - 1.0) + nf - 2.0 * alpha - 1.0);
    let lhs = it.integral("shifted_laplacian", power, |r| {
        let d1 = u.du(r);
        let s = if d1 == 0.0 {
            u.d2u(r)
        } else {
            u.d2u(r) - (1.0 + 2.0 * alpha) * d1 / r
        };
        s * s * pw(r, -2.0 * alpha)
    })?;
    let rhs = it.integral("laplacian", power, |r| lap(u, n, r).powi(2) * pw(r, -2.0 * alpha))?;
    Ok(residual(&it, lhs, rhs))
}
