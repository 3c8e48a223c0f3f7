//! Built-in radial shapes.

use super::{DecayClass, RadialProfile, RadialShape};
use crate::error::{Error, Result};
use crate::hermite::hermite_coefficients;
use crate::quad::{integrate_interval, integrate_power_tail, integrate_semi_infinite, QuadratureSpec};

/// `u(r) = p(r) · exp(-s r^q)` with a polynomial `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyEnvelope {
    coeffs: Vec<f64>,
    rate: f64,
    power: f64,
}

fn horner(c: &[f64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * r + x)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(j, &x)| j as f64 * x).collect()
}

impl PolyEnvelope {
    pub fn new(coeffs: Vec<f64>, rate: f64, power: f64) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs, rate, power }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn envelope(&self, r: f64) -> f64 {
        if self.rate == 0.0 {
            1.0
        } else {
            (-self.rate * r.powf(self.power)).exp()
        }
    }

    /// `s q r^{q-1}` and `s q (q-1) r^{q-2}`, with vanishing terms kept at 0.
    fn envelope_logs(&self, r: f64) -> (f64, f64) {
        let (s, q) = (self.rate, self.power);
        if s == 0.0 {
            return (0.0, 0.0);
        }
        let a1 = s * q * r.powf(q - 1.0);
        let a2 = if q == 1.0 {
            0.0
        } else if q == 2.0 {
            2.0 * s
        } else {
            s * q * (q - 1.0) * r.powf(q - 2.0)
        };
        (a1, a2)
    }
}

impl RadialShape for PolyEnvelope {
    fn u(&self, r: f64) -> f64 {
        let e = self.envelope(r);
        if e == 0.0 {
            return 0.0;
        }
        horner(&self.coeffs, r) * e
    }

    fn du(&self, r: f64) -> f64 {
        let e = self.envelope(r);
        if e == 0.0 {
            return 0.0;
        }
        let p = horner(&self.coeffs, r);
        let dp = horner(&derivative(&self.coeffs), r);
        let (a1, _) = self.envelope_logs(r);
        let lead = if p == 0.0 { 0.0 } else { a1 * p };
        (dp - lead) * e
    }

    fn d2u(&self, r: f64) -> f64 {
        let e = self.envelope(r);
        if e == 0.0 {
            return 0.0;
        }
        let dc = derivative(&self.coeffs);
        let p = horner(&self.coeffs, r);
        let dp = horner(&dc, r);
        let d2p = horner(&derivative(&dc), r);
        let (a1, a2) = self.envelope_logs(r);
        let mut v = d2p;
        if dp != 0.0 {
            v -= 2.0 * a1 * dp;
        }
        if p != 0.0 {
            v += (a1 * a1 - a2) * p;
        }
        v * e
    }

    fn small_r_exponent(&self) -> f64 {
        let lowest = |c: &[f64]| c.iter().position(|&x| x != 0.0);
        let from_poly = lowest(&self.coeffs[1.min(self.coeffs.len())..]).map(|j| j as f64);
        let from_env = if self.rate != 0.0 {
            lowest(&self.coeffs).map(|j| j as f64 + self.power - 1.0)
        } else {
            None
        };
        match (from_poly, from_env) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => f64::INFINITY,
        }
    }

    fn decay_class(&self) -> DecayClass {
        if self.rate == 0.0 {
            DecayClass::Polynomial
        } else if self.power >= 2.0 {
            DecayClass::GaussianLike
        } else {
            DecayClass::StretchedExp
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `e^{-a r²}`.
pub fn make_gauss(a: f64) -> Result<RadialProfile> {
    positive("a", a)?;
    Ok(RadialProfile::new(PolyEnvelope::new(vec![1.0], a, 2.0), format!("gauss({a})")))
}

/// `(Σ c_j r^j) e^{-a r²}`.
pub fn make_polygauss(a: f64, coeffs: &[f64]) -> Result<RadialProfile> {
    positive("a", a)?;
    if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("polygauss needs at least one finite coefficient"));
    }
    let list = coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    Ok(RadialProfile::new(
        PolyEnvelope::new(coeffs.to_vec(), a, 2.0),
        format!("polygauss({a}; {list})"),
    ))
}

/// `(1 + ε H_i(r)) e^{-a r²}` with the probabilists' Hermite polynomial `H_i`.
pub fn make_hermmod(eps: f64, i: u32, a: f64) -> Result<RadialProfile> {
    positive("a", a)?;
    if !eps.is_finite() {
        return Err(Error::invalid("eps must be finite"));
    }
    if i > 30 {
        return Err(Error::invalid("hermite index must be at most 30"));
    }
    let mut coeffs: Vec<f64> = hermite_coefficients(i).iter().map(|&c| eps * c as f64).collect();
    coeffs[0] += 1.0;
    Ok(RadialProfile::new(
        PolyEnvelope::new(coeffs, a, 2.0),
        format!("hermmod({eps},{i},{a})"),
    ))
}

/// `e^{-a r}`.
pub fn make_exponential(a: f64) -> Result<RadialProfile> {
    positive("a", a)?;
    Ok(RadialProfile::new(PolyEnvelope::new(vec![1.0], a, 1.0), format!("exp({a})")))
}

/// Smooth bump `exp(-1/(1-s²))`, `s = (r - center)/width`, zero for `|s| ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    /// `(φ, φ_s, φ_ss)` in the scaled variable.
    fn phi(&self, r: f64) -> (f64, f64, f64) {
        let s = (r - self.center) / self.width;
        let q = 1.0 - s * s;
        if q <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let phi = (-1.0 / q).exp();
        if phi == 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let q2 = q * q;
        let d1 = -2.0 * s / q2 * phi;
        let d2 = phi * (4.0 * s * s / (q2 * q2) - 2.0 / q2 - 8.0 * s * s / (q2 * q));
        (phi, d1, d2)
    }
}

impl RadialShape for Bump {
    fn u(&self, r: f64) -> f64 {
        self.phi(r).0
    }
    fn du(&self, r: f64) -> f64 {
        self.phi(r).1 / self.width
    }
    fn d2u(&self, r: f64) -> f64 {
        self.phi(r).2 / (self.width * self.width)
    }
    fn small_r_exponent(&self) -> f64 {
        // flat to all orders at the edge of the support
        f64::INFINITY
    }
    fn decay_class(&self) -> DecayClass {
        DecayClass::Compact
    }
    fn split_points(&self) -> Vec<f64> {
        [self.center - self.width, self.center, self.center + self.width]
            .into_iter()
            .filter(|p| *p > 0.0)
            .collect()
    }
}

pub fn make_bump(center: f64, width: f64) -> Result<RadialProfile> {
    positive("width", width)?;
    if !center.is_finite() || center - width < 0.0 {
        return Err(Error::invalid(format!(
            "bump support [{}, {}] must lie in [0, inf)",
            center - width,
            center + width
        )));
    }
    Ok(RadialProfile::new(Bump { center, width }, format!("bump({center},{width})")))
}

/// `c · r^p`; a test profile with no decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub c: f64,
    pub p: f64,
}

impl RadialShape for PowerLaw {
    fn u(&self, r: f64) -> f64 {
        self.c * r.powf(self.p)
    }
    fn du(&self, r: f64) -> f64 {
        if self.p == 0.0 {
            0.0
        } else {
            self.c * self.p * r.powf(self.p - 1.0)
        }
    }
    fn d2u(&self, r: f64) -> f64 {
        if self.p == 0.0 || self.p == 1.0 {
            0.0
        } else {
            self.c * self.p * (self.p - 1.0) * r.powf(self.p - 2.0)
        }
    }
    fn small_r_exponent(&self) -> f64 {
        if self.p == 0.0 {
            f64::INFINITY
        } else {
            self.p - 1.0
        }
    }
    fn decay_class(&self) -> DecayClass {
        DecayClass::Polynomial
    }
}

pub fn make_power_law(c: f64, p: f64) -> RadialProfile {
    RadialProfile::new(PowerLaw { c, p }, format!("{c}*r^{p}"))
}

/// `U0(r) = exp(-r^{2+2α}/(2+2α))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U0 {
    pub alpha: f64,
}

impl U0 {
    fn m(&self) -> f64 {
        2.0 + 2.0 * self.alpha
    }
}

impl RadialShape for U0 {
    fn u(&self, r: f64) -> f64 {
        (-r.powf(self.m()) / self.m()).exp()
    }
    fn du(&self, r: f64) -> f64 {
        let u = self.u(r);
        if u == 0.0 {
            return 0.0;
        }
        -r.powf(1.0 + 2.0 * self.alpha) * u
    }
    fn d2u(&self, r: f64) -> f64 {
        let u = self.u(r);
        if u == 0.0 {
            return 0.0;
        }
        let a = self.alpha;
        let lead = if 1.0 + 2.0 * a == 0.0 {
            0.0
        } else {
            -(1.0 + 2.0 * a) * r.powf(2.0 * a)
        };
        (lead + r.powf(2.0 + 4.0 * a)) * u
    }
    fn small_r_exponent(&self) -> f64 {
        1.0 + 2.0 * self.alpha
    }
    fn decay_class(&self) -> DecayClass {
        if self.m() >= 2.0 {
            DecayClass::GaussianLike
        } else {
            DecayClass::StretchedExp
        }
    }
}

pub fn make_u0(alpha: f64) -> Result<RadialProfile> {
    if !(1.0 + alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("u0 requires 1 + alpha > 0, got alpha = {alpha}")));
    }
    Ok(RadialProfile::new(U0 { alpha }, format!("u0({alpha})")))
}

fn tail_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_subdivisions: 4000,
        ..QuadratureSpec::default()
    }
}

/// `u(r) = ∫_r^∞ (-u'(s)) ds` for a closed-form `u'`.
fn tail_integral(du: impl Fn(f64) -> f64, r: f64, exponent: f64) -> f64 {
    let spec = tail_spec().with_origin_exponent(if r == 0.0 { Some(exponent) } else { None });
    let spec = if r > 0.0 { spec.with_split_points(&[r.max(1.0)]) } else { spec };
    match integrate_semi_infinite(|y| -du(r + y), &spec) {
        Ok(res) => res.value,
        Err(_) => f64::NAN,
    }
}

/// As [`tail_integral`] for `u'(s) ~ s^{-p}`: a finite piece up to
/// `max(r, 1)` and an algebraic tail beyond.
fn algebraic_tail_integral(du: impl Fn(f64) -> f64, r: f64, p: f64) -> f64 {
    let spec = tail_spec();
    let knee = r.max(1.0);
    let head = if r < knee {
        match integrate_interval(|s| -du(s), r, knee, &spec) {
            Ok(res) => res.value,
            Err(_) => return f64::NAN,
        }
    } else {
        0.0
    };
    match integrate_power_tail(|s| -du(s), knee, p, &spec) {
        Ok(res) => head + res.value,
        Err(_) => f64::NAN,
    }
}

/// `U1(r) = ∫_r^∞ s^{1+2α} exp(-s^κ/κ) ds`, `κ = 1 + α - β/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U1 {
    pub alpha: f64,
    pub beta: f64,
}

impl U1 {
    fn kappa(&self) -> f64 {
        1.0 + self.alpha - self.beta / 2.0
    }
    fn envelope(&self, r: f64) -> f64 {
        let k = self.kappa();
        (-r.powf(k) / k).exp()
    }
}

impl RadialShape for U1 {
    fn u(&self, r: f64) -> f64 {
        tail_integral(|s| self.du(s), r, 1.0 + 2.0 * self.alpha)
    }
    fn du(&self, r: f64) -> f64 {
        let e = self.envelope(r);
        if e == 0.0 {
            return 0.0;
        }
        -r.powf(1.0 + 2.0 * self.alpha) * e
    }
    fn d2u(&self, r: f64) -> f64 {
        let e = self.envelope(r);
        if e == 0.0 {
            return 0.0;
        }
        let a = self.alpha;
        let lead = if 1.0 + 2.0 * a == 0.0 {
            0.0
        } else {
            -(1.0 + 2.0 * a) * r.powf(2.0 * a)
        };
        (lead + r.powf(2.0 * a + self.kappa())) * e
    }
    fn small_r_exponent(&self) -> f64 {
        1.0 + 2.0 * self.alpha
    }
    fn decay_class(&self) -> DecayClass {
        if self.kappa() >= 2.0 {
            DecayClass::GaussianLike
        } else {
            DecayClass::StretchedExp
        }
    }
}

pub fn make_u1(alpha: f64, beta: f64) -> Result<RadialProfile> {
    let shape = U1 { alpha, beta };
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::invalid("u1 parameters must be finite"));
    }
    if !(shape.kappa() > 0.0) {
        return Err(Error::invalid(format!(
            "u1 requires 1 + alpha - beta/2 > 0, got {}",
            shape.kappa()
        )));
    }
    if !(alpha > -1.0) {
        return Err(Error::invalid(format!("u1 requires alpha > -1, got {alpha}")));
    }
    check_origin_value(&shape)?;
    Ok(RadialProfile::new(shape, format!("u1({alpha},{beta})")))
}

/// `U2(r) = ∫_r^∞ s^{1+2α} (1 + (t-2) s^κ/κ)^{1/(2-t)} ds`,
/// `κ = (1+2α)(t-2) + 1 + α - β/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2 {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl U2 {
    fn kappa(&self) -> f64 {
        (1.0 + 2.0 * self.alpha) * (self.t - 2.0) + 1.0 + self.alpha - self.beta / 2.0
    }
    /// `u'(r) ~ r^{-p}` at infinity.
    fn tail_power(&self) -> f64 {
        self.kappa() / (self.t - 2.0) - (1.0 + 2.0 * self.alpha)
    }
    fn base(&self, r: f64) -> f64 {
        let k = self.kappa();
        1.0 + (self.t - 2.0) * r.powf(k) / k
    }
}

impl RadialShape for U2 {
    fn u(&self, r: f64) -> f64 {
        algebraic_tail_integral(|s| self.du(s), r, self.tail_power())
    }
    fn du(&self, r: f64) -> f64 {
        -r.powf(1.0 + 2.0 * self.alpha) * self.base(r).powf(1.0 / (2.0 - self.t))
    }
    fn d2u(&self, r: f64) -> f64 {
        let a = self.alpha;
        let b = self.base(r);
        let lead = if 1.0 + 2.0 * a == 0.0 {
            0.0
        } else {
            -(1.0 + 2.0 * a) * r.powf(2.0 * a) * b.powf(1.0 / (2.0 - self.t))
        };
        lead + r.powf(2.0 * a + self.kappa()) * b.powf((self.t - 1.0) / (2.0 - self.t))
    }
    fn small_r_exponent(&self) -> f64 {
        1.0 + 2.0 * self.alpha
    }
    fn decay_class(&self) -> DecayClass {
        DecayClass::Polynomial
    }
}

pub fn make_u2(t: f64, alpha: f64, beta: f64) -> Result<RadialProfile> {
    if !(t.is_finite() && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::invalid("u2 parameters must be finite"));
    }
    if !(t > 2.0) {
        return Err(Error::invalid(format!("u2 requires t > 2, got {t}")));
    }
    let shape = U2 { t, alpha, beta };
    if !(shape.kappa() > 0.0) {
        return Err(Error::invalid(format!(
            "u2 requires (1+2alpha)(t-2) + 1 + alpha - beta/2 > 0, got {}",
            shape.kappa()
        )));
    }
    if !(t < 3.0 + alpha - beta / 2.0) {
        return Err(Error::invalid(format!(
            "u2 requires t < 3 + alpha - beta/2 for a finite value at the origin, got t = {t}"
        )));
    }
    if !(alpha > -1.0) {
        return Err(Error::invalid(format!("u2 requires alpha > -1, got {alpha}")));
    }
    check_origin_value(&shape)?;
    Ok(RadialProfile::new(shape, format!("u2({t},{alpha},{beta})")))
}

fn check_origin_value(shape: &dyn RadialShape) -> Result<()> {
    let v = shape.u(0.0);
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::quadrature(
            "profile value at the origin",
            Error::DecayViolation("tail integral of u' does not converge".into()),
        ))
    }
}
