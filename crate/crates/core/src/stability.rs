//! Deficit of the second-order uncertainty principle
//! `(∫|Δu|²)(∫|x|²|∇u|²) ≥ ((n+2)/2)² (∫|∇u|²)²` and distances to the
//! gaussian extremals `E = {c e^{−a|x|²}}`.

use serde::Serialize;

use crate::eigen::minimize_1d_scan;
use crate::error::{Error, Result};
use crate::functionals::{lap, surface_area, Integrator};
use crate::profiles::{GaussianCandidate, RadialProfile};
use crate::quad::{integrate_semi_infinite, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deficit {
    /// `(∫|Δu|²)^{½}(∫|x|²|∇u|²)^{½} / (((n+2)/2)∫|∇u|²) − 1`.
    pub delta: f64,
    /// The same quotient with `∫|x|²u²` in place of `∫|x|²|∇u|²`.
    /// Not dilation invariant; `None` when its integral fails.
    pub literal_delta: Option<f64>,
    pub laplacian: f64,
    pub weighted_gradient: f64,
    pub gradient: f64,
    pub mass: Option<f64>,
    pub weighted_mass: Option<f64>,
    pub converged: bool,
}

/// The integrals after the dilation and scaling that make
/// `∫|∇u|² = 1` and `∫|Δu|² = ∫|x|²|∇u|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalized {
    pub lambda: f64,
    pub scale: f64,
    pub laplacian: f64,
    pub weighted_gradient: f64,
    pub mass: Option<f64>,
}

impl Deficit {
    pub fn normalized(&self, n: u32) -> Normalized {
        let nf = n as f64;
        // u(λx): ∫|Δ|² ~ λ^{4−n}, ∫|x|²|∇|² ~ λ^{−n}, ∫|∇|² ~ λ^{2−n}, ∫u² ~ λ^{−n}
        let lambda = (self.weighted_gradient / self.laplacian).powf(0.25);
        let grad = lambda.powf(2.0 - nf) * self.gradient;
        let s2 = 1.0 / grad;
        Normalized {
            lambda,
            scale: s2.sqrt(),
            laplacian: s2 * lambda.powf(4.0 - nf) * self.laplacian,
            weighted_gradient: s2 * lambda.powf(-nf) * self.weighted_gradient,
            mass: self.mass.map(|m| s2 * lambda.powf(-nf) * m),
        }
    }

    /// `∫|Δu|² + ∫|x|²|∇u|² − (n+2)∫|∇u|²` after normalization, which equals
    /// `(n+2) δ(u)`.
    pub fn normalized_sum_form(&self, n: u32) -> f64 {
        let z = self.normalized(n);
        z.laplacian + z.weighted_gradient - (n as f64 + 2.0)
    }
}

pub fn delta_deficit(u: &RadialProfile, n: u32, spec: &QuadratureSpec) -> Result<Deficit> {
    if n < 1 {
        return Err(Error::invalid("n >= 1"));
    }
    let nf = n as f64;
    let mut it = Integrator::new(u, n, spec);
    let e = it.p();
    let laplacian = it.integral("laplacian", Some(2.0 * (e - 1.0) + nf - 1.0), |r| lap(u, n, r).powi(2))?;
    let weighted_gradient = it.integral("weighted_gradient", Some(2.0 * e + nf + 1.0), |r| (r * u.du(r)).powi(2))?;
    let gradient = it.integral("gradient", Some(2.0 * e + nf - 1.0), |r| u.du(r).powi(2))?;
    if gradient == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let mass = it.integral("mass", Some(nf - 1.0), |r| u.u(r).powi(2)).ok();
    let weighted_mass = it.integral("weighted_mass", Some(nf + 1.0), |r| (r * u.u(r)).powi(2)).ok();
    let half = (nf + 2.0) / 2.0;
    let delta = (laplacian * weighted_gradient).sqrt() / (half * gradient) - 1.0;
    let literal_delta = weighted_mass.map(|w| (laplacian * w).sqrt() / (half * gradient) - 1.0);
    let converged = it.components.iter().all(|c| c.converged);
    Ok(Deficit {
        delta,
        literal_delta,
        laplacian,
        weighted_gradient,
        gradient,
        mass,
        weighted_mass,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// `∫|∇u − ∇v|²`
    GradientL2,
    /// `∫|u − v|²`
    PlainL2,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::GradientL2 => "gradient_l2",
            Metric::PlainL2 => "plain_l2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionResult {
    pub candidate: GaussianCandidate,
    pub distance_sq: f64,
    /// `distance_sq / ‖u‖²` in the same metric.
    pub relative_distance: f64,
    pub constrained: bool,
    pub metric: Metric,
    /// The best `ln a` lies on an end of `[−8, 8]`.
    pub at_boundary: bool,
    /// Moving `a` (and `c`, when free) by ±1% never lowered the distance.
    pub locally_optimal: bool,
    pub norm_sq: f64,
}

pub const LOG_A_RANGE: (f64, f64) = (-8.0, 8.0);

/// Distance from `u` to the gaussian extremals in one metric.
struct Distance<'a> {
    u: &'a RadialProfile,
    n: u32,
    metric: Metric,
    spec: QuadratureSpec,
    norm_sq: f64,
    area: f64,
}

impl<'a> Distance<'a> {
    fn new(u: &'a RadialProfile, n: u32, metric: Metric, spec: &QuadratureSpec) -> Result<Self> {
        let nf = n as f64;
        let spec = spec.with_split_points(&u.split_points());
        let area = surface_area(n);
        let e = u.small_r_exponent();
        let norm = match metric {
            Metric::GradientL2 => integrate_semi_infinite(
                |r| {
                    let d = u.du(r);
                    if d == 0.0 {
                        0.0
                    } else {
                        d * d * r.powf(nf - 1.0)
                    }
                },
                &spec.with_origin_exponent(Some(2.0 * e + nf - 1.0)),
            ),
            Metric::PlainL2 => integrate_semi_infinite(
                |r| {
                    let v = u.u(r);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * v * r.powf(nf - 1.0)
                    }
                },
                &spec.with_origin_exponent(Some(nf - 1.0)),
            ),
        }
        .map_err(|err| Error::quadrature("norm", err))?;
        let norm_sq = area * norm.value;
        if !(norm_sq > 0.0) {
            return Err(Error::ZeroFunction);
        }
        Ok(Self {
            u,
            n,
            metric,
            spec,
            norm_sq,
            area,
        })
    }

    /// `⟨u, e^{−ar²}⟩` in the metric.
    fn overlap(&self, a: f64) -> Result<f64> {
        let nf = self.n as f64;
        let u = self.u;
        let res = match self.metric {
            Metric::GradientL2 => {
                let e = u.small_r_exponent();
                integrate_semi_infinite(
                    |r| {
                        let d = u.du(r);
                        if d == 0.0 {
                            0.0
                        } else {
                            -2.0 * a * d * (-a * r * r).exp() * r.powf(nf)
                        }
                    },
                    &self.spec.with_origin_exponent(Some(e + nf)),
                )
            }
            Metric::PlainL2 => integrate_semi_infinite(
                |r| {
                    let v = u.u(r);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * (-a * r * r).exp() * r.powf(nf - 1.0)
                    }
                },
                &self.spec.with_origin_exponent(Some(nf - 1.0)),
            ),
        }
        .map_err(|err| Error::quadrature("overlap", err))?;
        Ok(self.area * res.value)
    }

    /// `‖e^{−ar²}‖²` in closed form.
    fn gauss_norm_sq(&self, a: f64) -> f64 {
        let nf = self.n as f64;
        let base = (std::f64::consts::PI / (2.0 * a)).powf(nf / 2.0);
        match self.metric {
            Metric::PlainL2 => base,
            Metric::GradientL2 => a * nf * base,
        }
    }

    fn at(&self, c: f64, a: f64) -> Result<f64> {
        let p = self.overlap(a)?;
        Ok(self.norm_sq - 2.0 * c * p + c * c * self.gauss_norm_sq(a))
    }

    /// Best `(c, distance)` for fixed `a`.
    fn best_c(&self, a: f64, constrained: bool) -> Result<(f64, f64)> {
        let p = self.overlap(a)?;
        let g = self.gauss_norm_sq(a);
        if constrained {
            let c0 = (self.norm_sq / g).sqrt();
            let plus = 2.0 * self.norm_sq - 2.0 * c0 * p;
            let minus = 2.0 * self.norm_sq + 2.0 * c0 * p;
            Ok(if plus <= minus { (c0, plus) } else { (-c0, minus) })
        } else {
            let c = p / g;
            Ok((c, self.norm_sq - p * c))
        }
    }
}

/// Projects `u` onto `E` by a log-spaced scan and golden-section refinement
/// of `ln a ∈ [−8, 8]`; `c` is closed form for each `a`.
pub fn project(
    u: &RadialProfile,
    n: u32,
    metric: Metric,
    constrained: bool,
    spec: &QuadratureSpec,
) -> Result<ProjectionResult> {
    if n < 1 {
        return Err(Error::invalid("n >= 1"));
    }
    let dist = Distance::new(u, n, metric, spec)?;
    let mut failure = None;
    let found = minimize_1d_scan(
        |t| match dist.best_c(t.exp(), constrained) {
            Ok((_, d)) => d,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        LOG_A_RANGE.0,
        LOG_A_RANGE.1,
        64,
    );
    if !found.fx.is_finite() {
        return Err(failure.unwrap_or(Error::invalid("projection search found no finite distance")));
    }
    let a = found.x.exp();
    let (c, d) = dist.best_c(a, constrained)?;
    let distance_sq = d.max(0.0);

    // Local certificate; under the norm constraint c follows a.
    let slack = 1e-12 * dist.norm_sq;
    let mut locally_optimal = true;
    for f in [0.99, 1.01] {
        let moved = if constrained {
            dist.best_c(a * f, true)?.1
        } else {
            dist.at(c, a * f)?.min(dist.at(c * f, a)?)
        };
        if moved < d - slack {
            locally_optimal = false;
        }
    }

    Ok(ProjectionResult {
        candidate: GaussianCandidate { c, a },
        distance_sq,
        relative_distance: distance_sq / dist.norm_sq,
        constrained,
        metric,
        at_boundary: found.at_boundary,
        locally_optimal,
        norm_sq: dist.norm_sq,
    })
}

/// `1 ≤ ((n+2)/C) δ + n m − (n²/4) m²` with `m = ∫u²` after normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HpwStep {
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub n: u32,
    pub delta: f64,
    pub literal_delta: Option<f64>,
    pub relative_distance: f64,
    pub theorem_coefficient: f64,
    /// `delta ≥ theorem_coefficient · relative_distance − 1e−10`.
    pub satisfied: bool,
    pub projection: ProjectionResult,
    pub hpw_step: Option<HpwStep>,
}

/// `min(n/4, 1)`.
pub fn stability_constant(n: u32) -> f64 {
    (n as f64 / 4.0).min(1.0)
}

fn report(
    u: &RadialProfile,
    n: u32,
    metric: Metric,
    coefficient: f64,
    spec: &QuadratureSpec,
) -> Result<StabilityReport> {
    let deficit = delta_deficit(u, n, spec)?;
    let projection = project(u, n, metric, true, spec)?;
    let hpw_step = match metric {
        Metric::PlainL2 => deficit.normalized(n).mass.map(|m| {
            let nf = n as f64;
            let rhs = (nf + 2.0) / stability_constant(n) * deficit.delta + nf * m - nf * nf / 4.0 * m * m;
            HpwStep {
                rhs,
                holds: rhs >= 1.0 - 1e-9,
            }
        }),
        Metric::GradientL2 => None,
    };
    Ok(StabilityReport {
        n,
        delta: deficit.delta,
        literal_delta: deficit.literal_delta,
        relative_distance: projection.relative_distance,
        theorem_coefficient: coefficient,
        satisfied: deficit.delta >= coefficient * projection.relative_distance - 1e-10,
        projection,
        hpw_step,
    })
}

/// Deficit against the constrained gradient distance, coefficient
/// `C / (16 (n+2)²)`.
pub fn stability_report_gradient(u: &RadialProfile, n: u32, spec: &QuadratureSpec) -> Result<StabilityReport> {
    let nf = n as f64;
    report(u, n, Metric::GradientL2, stability_constant(n) / (16.0 * (nf + 2.0).powi(2)), spec)
}

/// Deficit against the constrained L² distance, coefficient
/// `C / (16 n (n+2))`.
pub fn stability_report_l2(u: &RadialProfile, n: u32, spec: &QuadratureSpec) -> Result<StabilityReport> {
    let nf = n as f64;
    report(u, n, Metric::PlainL2, stability_constant(n) / (16.0 * nf * (nf + 2.0)), spec)
}
