//! Radial test profiles `u(r)` with exact first and second derivatives.

mod dsl;
mod families;
mod params;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use dsl::{make_family, parse_call, FamilyRegistry, ProfileFamily};
pub use families::{
    make_bump, make_exponential, make_gauss, make_hermmod, make_polygauss, make_power_law, make_u0, make_u1,
    make_u2, Bump, PolyEnvelope, PowerLaw, U0, U1, U2,
};
pub use params::{validate_params, ConditionCheck, InequalityParams, ValidityReport};

/// Coarse large-`r` behaviour of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayClass {
    GaussianLike,
    StretchedExp,
    Polynomial,
    Compact,
}

impl DecayClass {
    /// Decays at least like `e^{-c r^2}`.
    pub fn is_gaussian_or_faster(self) -> bool {
        matches!(self, DecayClass::GaussianLike | DecayClass::Compact)
    }
}

/// A radial function together with its analytic derivatives.
pub trait RadialShape: Send + Sync + fmt::Debug {
    fn u(&self, r: f64) -> f64;
    fn du(&self, r: f64) -> f64;
    fn d2u(&self, r: f64) -> f64;
    /// Leading power `p` of `u'(r) ~ r^p` as `r → 0`.
    fn small_r_exponent(&self) -> f64;
    fn decay_class(&self) -> DecayClass;
    /// Points where the profile is not smooth.
    fn split_points(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Shared, immutable handle to a radial shape.
#[derive(Clone)]
pub struct RadialProfile {
    shape: Arc<dyn RadialShape>,
    label: String,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("shape", &self.shape)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(shape: impl RadialShape + 'static, label: impl Into<String>) -> Self {
        Self {
            shape: Arc::new(shape),
            label: label.into(),
        }
    }

    pub fn from_arc(shape: Arc<dyn RadialShape>, label: impl Into<String>) -> Self {
        Self {
            shape,
            label: label.into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn u(&self, r: f64) -> f64 {
        self.shape.u(r)
    }

    pub fn du(&self, r: f64) -> f64 {
        self.shape.du(r)
    }

    pub fn d2u(&self, r: f64) -> f64 {
        self.shape.d2u(r)
    }

    pub fn small_r_exponent(&self) -> f64 {
        self.shape.small_r_exponent()
    }

    pub fn decay_class(&self) -> DecayClass {
        self.shape.decay_class()
    }

    pub fn split_points(&self) -> Vec<f64> {
        self.shape.split_points()
    }

    /// `c · u`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            shape: Arc::new(Scaled {
                inner: self.shape.clone(),
                c,
            }),
            label: format!("{}*{}", c, self.label),
        }
    }

    /// `u_λ(r) = λ^{(n-2)/2} u(λ r)`.
    pub fn dilated(&self, lambda: f64, n: u32) -> Self {
        Self {
            shape: Arc::new(Dilated {
                inner: self.shape.clone(),
                lambda,
                n,
            }),
            label: format!("dilate[{lambda}]({})", self.label),
        }
    }

    /// Plain rescaling of the argument, `u(λ r)`.
    pub fn stretched(&self, lambda: f64) -> Self {
        Self {
            shape: Arc::new(Dilated {
                inner: self.shape.clone(),
                lambda,
                n: 2,
            }),
            label: format!("{}(r*{lambda})", self.label),
        }
    }

    /// Sample of the profile on a grid, for plotting. Uses monotone cubic
    /// interpolation between cached nodes; never used by the functionals.
    pub fn plot_cache(&self, r_max: f64, nodes: usize) -> PlotCache {
        PlotCache::new(self, r_max, nodes)
    }
}

/// The profile whose values and derivatives are those of `c · e^{-a r²}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianCandidate {
    pub c: f64,
    pub a: f64,
}

impl GaussianCandidate {
    pub fn profile(&self) -> RadialProfile {
        let shape = PolyEnvelope::new(vec![self.c], self.a, 2.0);
        RadialProfile::new(shape, format!("{}*gauss({})", self.c, self.a))
    }
}

#[derive(Debug)]
struct Scaled {
    inner: Arc<dyn RadialShape>,
    c: f64,
}

impl RadialShape for Scaled {
    fn u(&self, r: f64) -> f64 {
        self.c * self.inner.u(r)
    }
    fn du(&self, r: f64) -> f64 {
        self.c * self.inner.du(r)
    }
    fn d2u(&self, r: f64) -> f64 {
        self.c * self.inner.d2u(r)
    }
    fn small_r_exponent(&self) -> f64 {
        self.inner.small_r_exponent()
    }
    fn decay_class(&self) -> DecayClass {
        self.inner.decay_class()
    }
    fn split_points(&self) -> Vec<f64> {
        self.inner.split_points()
    }
}

#[derive(Debug)]
struct Dilated {
    inner: Arc<dyn RadialShape>,
    lambda: f64,
    n: u32,
}

impl Dilated {
    fn weight(&self, extra: i32) -> f64 {
        self.lambda.powf((self.n as f64 - 2.0 + 2.0 * extra as f64) / 2.0)
    }
}

impl RadialShape for Dilated {
    fn u(&self, r: f64) -> f64 {
        self.weight(0) * self.inner.u(self.lambda * r)
    }
    fn du(&self, r: f64) -> f64 {
        self.weight(1) * self.inner.du(self.lambda * r)
    }
    fn d2u(&self, r: f64) -> f64 {
        self.weight(2) * self.inner.d2u(self.lambda * r)
    }
    fn small_r_exponent(&self) -> f64 {
        self.inner.small_r_exponent()
    }
    fn decay_class(&self) -> DecayClass {
        self.inner.decay_class()
    }
    fn split_points(&self) -> Vec<f64> {
        self.inner.split_points().into_iter().map(|p| p / self.lambda).collect()
    }
}

/// Grid samples with monotone (Fritsch–Carlson) cubic interpolation.
#[derive(Debug, Clone, Serialize)]
pub struct PlotCache {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    slopes: Vec<f64>,
}

impl PlotCache {
    fn new(profile: &RadialProfile, r_max: f64, nodes: usize) -> Self {
        let nodes = nodes.max(2);
        let r: Vec<f64> = (0..nodes)
            .map(|i| r_max * i as f64 / (nodes - 1) as f64)
            .collect();
        let u: Vec<f64> = r.iter().map(|&x| profile.u(x)).collect();
        let h = r[1] - r[0];
        let secant: Vec<f64> = u.windows(2).map(|w| (w[1] - w[0]) / h).collect();
        let mut slopes = vec![0.0; nodes];
        slopes[0] = secant[0];
        slopes[nodes - 1] = secant[nodes - 2];
        for i in 1..nodes - 1 {
            let (a, b) = (secant[i - 1], secant[i]);
            slopes[i] = if a * b <= 0.0 { 0.0 } else { 2.0 * a * b / (a + b) };
        }
        Self { r, u, slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.r.len();
        let h = self.r[1] - self.r[0];
        if x <= self.r[0] {
            return self.u[0];
        }
        if x >= self.r[n - 1] {
            return self.u[n - 1];
        }
        let i = (((x - self.r[0]) / h) as usize).min(n - 2);
        let s = (x - self.r[i]) / h;
        let (h00, h10) = (2.0 * s.powi(3) - 3.0 * s * s + 1.0, s.powi(3) - 2.0 * s * s + s);
        let (h01, h11) = (-2.0 * s.powi(3) + 3.0 * s * s, s.powi(3) - s * s);
        h00 * self.u[i] + h10 * h * self.slopes[i] + h01 * self.u[i + 1] + h11 * h * self.slopes[i + 1]
    }
}
