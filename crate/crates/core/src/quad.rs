//! Adaptive Gauss–Kronrod integration on the half line and on finite intervals.
//!
//! The half line `[0, ∞)` is mapped onto `[0, 1)` by a [`HalfLineMap`]; the
//! mapped integrand is then integrated by global adaptive bisection with the
//! 21-point Kronrod rule and its embedded 10-point Gauss rule. The error of a
//! panel is the plain difference of the two rules.
//!
//! Integrands may be vector valued ([`integrate_semi_infinite_vec`]); all
//! components then share one panel partition, which is how Gram matrices are
//! assembled in the modal search.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// A smooth increasing bijection `[0, 1) -> [0, ∞)`.
pub trait HalfLineMap: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    /// Returns `(r(x), r'(x))`.
    fn forward(&self, x: f64) -> (f64, f64);
    fn inverse(&self, r: f64) -> f64;
    /// Largest `r` reachable from a double below 1. Mass beyond it is
    /// invisible to the rule and is charged to the error estimate.
    fn horizon(&self) -> f64 {
        self.forward(1.0 - f64::EPSILON / 2.0).0
    }
}

/// `r = x / (1 - x)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalMap;

impl HalfLineMap for RationalMap {
    fn name(&self) -> &'static str {
        "rational"
    }

    fn forward(&self, x: f64) -> (f64, f64) {
        let s = 1.0 - x;
        (x / s, 1.0 / (s * s))
    }

    fn inverse(&self, r: f64) -> f64 {
        r / (1.0 + r)
    }
}

/// `r = -ln(1 - x)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialMap;

impl HalfLineMap for ExponentialMap {
    fn name(&self) -> &'static str {
        "exponential"
    }

    fn forward(&self, x: f64) -> (f64, f64) {
        (-(-x).ln_1p(), 1.0 / (1.0 - x))
    }

    fn inverse(&self, r: f64) -> f64 {
        -(-r).exp_m1()
    }
}

/// Looks up one of the built-in half-line maps by name.
pub fn map_by_name(name: &str) -> Option<Arc<dyn HalfLineMap>> {
    match name {
        "rational" => Some(Arc::new(RationalMap)),
        "exponential" => Some(Arc::new(ExponentialMap)),
        _ => None,
    }
}

pub fn map_names() -> &'static [&'static str] {
    &["rational", "exponential"]
}

#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Mandatory breakpoints in `r`; strictly increasing, finite and positive.
    pub split_points: Vec<f64>,
    /// Leading power of the integrand at `r = 0`, when known. A non-smooth
    /// power triggers a graded initial subdivision of the first panel.
    pub origin_exponent: Option<f64>,
    pub map: Arc<dyn HalfLineMap>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            split_points: Vec::new(),
            origin_exponent: None,
            map: Arc::new(RationalMap),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        if self
            .split_points
            .iter()
            .any(|p| !p.is_finite() || *p <= 0.0)
        {
            return Err(Error::invalid("split points must be finite and positive"));
        }
        if self.split_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("split points must be strictly increasing"));
        }
        Ok(())
    }

    /// Copy of the spec with extra breakpoints merged in. Non-positive or
    /// non-finite points are dropped.
    pub fn with_split_points(&self, extra: &[f64]) -> Self {
        let mut pts: Vec<f64> = self
            .split_points
            .iter()
            .chain(extra.iter())
            .copied()
            .filter(|p| p.is_finite() && *p > 0.0)
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
        Self {
            split_points: pts,
            ..self.clone()
        }
    }

    pub fn with_origin_exponent(&self, exponent: Option<f64>) -> Self {
        Self {
            origin_exponent: exponent,
            ..self.clone()
        }
    }

    pub fn with_map(&self, map: Arc<dyn HalfLineMap>) -> Self {
        Self {
            map,
            ..self.clone()
        }
    }

    /// Tolerances scaled by `factor` and the subdivision budget multiplied by
    /// `budget`; used for self-refinement reference values.
    pub fn tightened(&self, factor: f64, budget: usize) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_subdivisions: self.max_subdivisions * budget,
            ..self.clone()
        }
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VecQuadratureResult {
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Integrates `f` over `[0, ∞)`. Fails with [`Error::NonConvergence`] when the
/// subdivision budget runs out before the tolerance is met.
pub fn integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let res = integrate_semi_infinite_lenient(f, spec)?;
    if res.converged {
        Ok(res)
    } else {
        Err(Error::NonConvergence {
            value: res.value,
            error: res.error_estimate,
            tolerance: spec.tolerance(res.value),
            subdivisions: spec.max_subdivisions,
        })
    }
}

/// Like [`integrate_semi_infinite`] but returns the best estimate with
/// `converged = false` instead of failing on budget exhaustion. Divergence
/// and non-finite integrands are still errors.
pub fn integrate_semi_infinite_lenient<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let res = integrate_semi_infinite_vec(|r, out: &mut [f64]| out[0] = f(r), 1, spec)?;
    Ok(scalar(res))
}

/// Vector-valued integration over `[0, ∞)` with a shared panel partition.
/// Convergence requires every component to meet the tolerance.
pub fn integrate_semi_infinite_vec<F>(
    mut f: F,
    dim: usize,
    spec: &QuadratureSpec,
) -> Result<VecQuadratureResult>
where
    F: FnMut(f64, &mut [f64]),
{
    spec.validate()?;
    match spec.origin_exponent {
        Some(p) if p > -1.0 && p < 0.0 => origin_substituted(f, dim, spec, p),
        _ => mapped(&mut f, dim, spec),
    }
}

/// `∫_0^{r0}` through `r = r0 τ^m`, `m = 2/(p+1)`, which turns an `r^p`
/// singularity into `O(τ)`; the rest goes through the half-line map.
fn origin_substituted<F>(mut f: F, dim: usize, spec: &QuadratureSpec, p: f64) -> Result<VecQuadratureResult>
where
    F: FnMut(f64, &mut [f64]),
{
    let r0 = spec.split_points.first().copied().unwrap_or(1.0).min(1.0);
    let m = 2.0 / (p + 1.0);
    let head = adaptive(
        |tau: f64, out: &mut [f64]| -> std::result::Result<(), f64> {
            let r = r0 * tau.powf(m);
            // underflowed r: the τ-integrand is O(τ) there
            if tau <= 0.0 || r <= 0.0 {
                out.fill(0.0);
                return Ok(());
            }
            f(r, out);
            let jac = r0 * m * tau.powf(m - 1.0);
            for v in out.iter_mut() {
                if *v == 0.0 {
                    continue;
                }
                *v *= jac;
                if !v.is_finite() {
                    return Err(r);
                }
            }
            Ok(())
        },
        &[0.0, 0.5, 1.0],
        dim,
        spec,
    )?;
    let tail_spec = spec.with_origin_exponent(None).with_split_points(&[r0]);
    let tail = mapped(
        &mut |r: f64, out: &mut [f64]| {
            if r < r0 {
                out.fill(0.0);
            } else {
                f(r, out);
            }
        },
        dim,
        &tail_spec,
    )?;
    Ok(VecQuadratureResult {
        values: head.values.iter().zip(&tail.values).map(|(a, b)| a + b).collect(),
        error_estimates: head
            .error_estimates
            .iter()
            .zip(&tail.error_estimates)
            .map(|(a, b)| a + b)
            .collect(),
        evaluations: head.evaluations + tail.evaluations,
        converged: head.converged && tail.converged,
    })
}

fn mapped<F>(f: &mut F, dim: usize, spec: &QuadratureSpec) -> Result<VecQuadratureResult>
where
    F: FnMut(f64, &mut [f64]),
{
    let map = spec.map.clone();
    let mut breaks = vec![0.0];
    let first_split = spec.split_points.first().copied().unwrap_or(1.0);
    breaks.extend(graded_points(spec, map.inverse(first_split.min(1.0))));
    breaks.extend(spec.split_points.iter().map(|&r| map.inverse(r)));
    if spec.split_points.is_empty() {
        breaks.push(map.inverse(1.0));
    }
    breaks.push(1.0);
    let breaks = normalize_breaks(breaks, 0.0, 1.0);

    let g = |x: f64, out: &mut [f64]| -> std::result::Result<(), f64> {
        if x >= 1.0 {
            out.fill(0.0);
            return Ok(());
        }
        let (r, jac) = map.forward(x);
        if !r.is_finite() {
            out.fill(0.0);
            return Ok(());
        }
        f(r, out);
        for v in out.iter_mut() {
            if *v == 0.0 {
                continue;
            }
            if !v.is_finite() {
                return Err(r);
            }
            *v *= jac;
            if !v.is_finite() {
                return Err(r);
            }
        }
        Ok(())
    };
    let mut res = adaptive(g, &breaks, dim, spec)?;
    let horizon = map.horizon();
    let mut beyond = vec![0.0; dim];
    f(horizon, &mut beyond);
    for (i, b) in beyond.iter().enumerate() {
        // the tail of an r^-p integrand past R is about R·f(R)/(p − 1)
        let missed = (b * horizon).abs();
        if missed.is_finite() && missed > 0.0 {
            res.error_estimates[i] += missed;
            if res.error_estimates[i] > spec.tolerance(res.values[i]) {
                res.converged = false;
            }
        }
    }
    Ok(res)
}

/// Integrates `f` over the finite interval `[lo, hi]`; split points inside the
/// interval are honoured.
pub fn integrate_interval<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::invalid(format!("bad interval [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let mut breaks = vec![lo];
    breaks.extend(spec.split_points.iter().copied().filter(|&p| p > lo && p < hi));
    breaks.push(hi);
    let breaks = normalize_breaks(breaks, lo, hi);
    let g = |x: f64, out: &mut [f64]| -> std::result::Result<(), f64> {
        let v = f(x);
        if !v.is_finite() {
            return Err(x);
        }
        out[0] = v;
        Ok(())
    };
    let res = adaptive(g, &breaks, 1, spec)?;
    let res = scalar(res);
    if res.converged {
        Ok(res)
    } else {
        Err(Error::NonConvergence {
            value: res.value,
            error: res.error_estimate,
            tolerance: spec.tolerance(res.value),
            subdivisions: spec.max_subdivisions,
        })
    }
}

/// `∫_a^∞ f(s) ds` for `a > 0` and `f(s) ~ s^{-p}`, `p > 1`. The substitution
/// `s = a τ^{-k}` with `k = 2/(p − 1)` turns the algebraic tail into a
/// smooth integrand on `(0, 1]`.
pub fn integrate_power_tail<F>(f: F, a: f64, p: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::invalid("tail start must be positive and finite"));
    }
    if !(p > 1.0) {
        return Err(Error::invalid(format!("tail exponent must exceed 1, got {p}")));
    }
    let k = (2.0 / (p - 1.0)).clamp(0.25, 8.0);
    let inner = QuadratureSpec {
        split_points: Vec::new(),
        ..spec.clone()
    };
    integrate_interval(
        |tau| {
            if tau <= 0.0 {
                return 0.0;
            }
            let s = a * tau.powf(-k);
            if !s.is_finite() {
                return 0.0;
            }
            let v = f(s);
            if v == 0.0 {
                0.0
            } else {
                v * k * s / tau
            }
        },
        0.0,
        1.0,
        &inner,
    )
}

/// `∫₀^∞ r^{2m} e^{-r²} dr = Γ(m + ½) / 2`, by the half-integer recurrence.
pub fn gamma_half_moment(m: u32) -> f64 {
    gamma_half_integer(2 * m + 1) / 2.0
}

/// `Γ(k / 2)` for a positive integer `k`, exact up to rounding.
pub fn gamma_half_integer(k: u32) -> f64 {
    assert!(k >= 1, "Gamma(0) is undefined");
    let (mut x, mut acc) = if k % 2 == 0 {
        (1.0, 1.0)
    } else {
        (0.5, std::f64::consts::PI.sqrt())
    };
    while 2.0 * x < k as f64 {
        acc *= x;
        x += 1.0;
    }
    acc
}

fn scalar(res: VecQuadratureResult) -> QuadratureResult {
    QuadratureResult {
        value: res.values[0],
        error_estimate: res.error_estimates[0],
        evaluations: res.evaluations,
        converged: res.converged,
    }
}

fn normalize_breaks(mut breaks: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    breaks.retain(|x| x.is_finite() && *x >= lo && *x <= hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| *a - *b <= 1e-15 * (1.0 + b.abs()));
    breaks
}

/// Geometric points `x0 · 4^{-j}` towards the origin when the integrand has a
/// non-smooth power there.
fn graded_points(spec: &QuadratureSpec, x0: f64) -> Vec<f64> {
    let Some(p) = spec.origin_exponent else {
        return Vec::new();
    };
    let smooth = p >= 0.0 && (p - p.round()).abs() < 1e-12;
    if smooth || p <= -1.0 {
        return Vec::new();
    }
    let levels = ((-spec.abs_tol.ln() / 4f64.ln()) / (p + 1.0)).ceil();
    let levels = levels.clamp(1.0, 30.0) as i32;
    (1..=levels).map(|j| x0 * 4f64.powi(-j)).collect()
}

// 21-point Kronrod abscissae; odd indices are the 10-point Gauss abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

struct Panel {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
    priority: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.priority.total_cmp(&other.priority) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

struct Workspace {
    fx: Vec<f64>,
}

fn gk21<G>(g: &mut G, a: f64, b: f64, dim: usize, ws: &mut Workspace) -> Result<(Vec<f64>, Vec<f64>)>
where
    G: FnMut(f64, &mut [f64]) -> std::result::Result<(), f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    ws.fx.resize(dim, 0.0);
    g(c, &mut ws.fx).map_err(|r| Error::NonFinite { r })?;
    for i in 0..dim {
        kron[i] = WGK[10] * ws.fx[i];
    }
    for (j, &xk) in XGK.iter().enumerate().take(10) {
        let dx = h * xk;
        for x in [c - dx, c + dx] {
            g(x, &mut ws.fx).map_err(|r| Error::NonFinite { r })?;
            for i in 0..dim {
                kron[i] += WGK[j] * ws.fx[i];
                if j % 2 == 1 {
                    gauss[i] += WG[j / 2] * ws.fx[i];
                }
            }
        }
    }
    let mut err = vec![0.0; dim];
    for i in 0..dim {
        kron[i] *= h;
        gauss[i] *= h;
        err[i] = (kron[i] - gauss[i]).abs();
    }
    Ok((kron, err))
}

fn priority(errors: &[f64], totals: &[f64], spec: &QuadratureSpec) -> f64 {
    errors
        .iter()
        .zip(totals)
        .map(|(e, t)| e / spec.tolerance(*t))
        .fold(0.0, f64::max)
}

fn neumaier_sum<I: Iterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn adaptive<G>(mut g: G, breaks: &[f64], dim: usize, spec: &QuadratureSpec) -> Result<VecQuadratureResult>
where
    G: FnMut(f64, &mut [f64]) -> std::result::Result<(), f64>,
{
    let mut ws = Workspace { fx: vec![0.0; dim] };
    let mut evaluations = 0usize;
    let mut raw = Vec::new();
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk21(&mut g, w[0], w[1], dim, &mut ws)?;
        evaluations += 21;
        raw.push((w[0], w[1], v, e));
    }
    let mut totals = vec![0.0; dim];
    let mut errs = vec![0.0; dim];
    for (_, _, v, e) in &raw {
        for i in 0..dim {
            totals[i] += v[i];
            errs[i] += e[i];
        }
    }
    let mut heap = BinaryHeap::new();
    for (a, b, values, errors) in raw {
        let priority = priority(&errors, &totals, spec);
        heap.push(Panel {
            a,
            b,
            values,
            errors,
            priority,
        });
    }
    // panels too narrow to bisect further
    let mut frozen: Vec<Panel> = Vec::new();

    let done = |totals: &[f64], errs: &[f64]| {
        totals
            .iter()
            .zip(errs)
            .all(|(t, e)| *e <= spec.tolerance(*t))
    };

    let mut subdivisions = 0usize;
    let mut next_snapshot = 2usize;
    let mut snapshots: Vec<(f64, f64)> = vec![(
        totals.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        errs.iter().fold(0.0f64, |m, v| m.max(*v)),
    )];

    while !done(&totals, &errs) && subdivisions < spec.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            frozen.push(Panel {
                priority: 0.0,
                ..worst
            });
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (lv, le) = gk21(&mut g, worst.a, mid, dim, &mut ws)?;
        let (rv, re) = gk21(&mut g, mid, worst.b, dim, &mut ws)?;
        evaluations += 42;
        subdivisions += 1;
        for i in 0..dim {
            totals[i] += lv[i] + rv[i] - worst.values[i];
            errs[i] += le[i] + re[i] - worst.errors[i];
        }
        let lp = priority(&le, &totals, spec);
        let rp = priority(&re, &totals, spec);
        heap.push(Panel {
            a: worst.a,
            b: mid,
            values: lv,
            errors: le,
            priority: lp,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            values: rv,
            errors: re,
            priority: rp,
        });

        if subdivisions == next_snapshot {
            next_snapshot *= 2;
            let mag = totals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let err = errs.iter().fold(0.0f64, |m, v| m.max(*v));
            snapshots.push((mag, err));
            if let Some(e) = divergence_check(&snapshots) {
                return Err(e);
            }
        }
        if subdivisions % 64 == 0 {
            resum(&heap, &frozen, &mut totals, &mut errs);
        }
    }
    resum(&heap, &frozen, &mut totals, &mut errs);
    let converged = done(&totals, &errs);
    Ok(VecQuadratureResult {
        values: totals,
        error_estimates: errs,
        evaluations,
        converged,
    })
}

fn resum(heap: &BinaryHeap<Panel>, frozen: &[Panel], totals: &mut [f64], errs: &mut [f64]) {
    for i in 0..totals.len() {
        totals[i] = neumaier_sum(heap.iter().chain(frozen).map(|p| p.values[i]));
        errs[i] = heap.iter().chain(frozen).map(|p| p.errors[i]).sum();
    }
}

/// Flags a run whose estimate grew by more than 10x over the last three
/// refinement levels, doubling at every level, while the error estimate did
/// not shrink.
fn divergence_check(snapshots: &[(f64, f64)]) -> Option<Error> {
    if snapshots.len() < 4 {
        return None;
    }
    let w = &snapshots[snapshots.len() - 4..];
    let growing = w.windows(2).all(|p| p[1].0 > 2.0 * p[0].0);
    if growing && w[3].0 > 10.0 * w[0].0 && w[3].1 >= w[0].1 {
        Some(Error::DivergenceSuspected {
            from: w[0].0,
            to: w[3].0,
        })
    } else {
        None
    }
}
