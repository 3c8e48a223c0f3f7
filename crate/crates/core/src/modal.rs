//! Per-mode functionals of the spherical-harmonic reduction and bounds on the
//! per-mode sharp constants.
//!
//! A mode `f(x) = r^k g(r) φ_k(ω)` with `c_k = k(n+k−2)` contributes
//!
//! * `A = ∫(g'')² r^{n+2k−2α−1} + (1+2α)(n+2k−1) ∫(g')² r^{n+2k−2α−3}`
//! * `B = ∫(g')² r^{n+2k−β−1} + βk ∫g² r^{n+2k−β−3}`
//! * `C = ∫(g')² r^{n+2k−2γ−1} + 2γk ∫g² r^{n+2k−2γ−3}`
//!
//! and the per-mode constant is `inf_g AB/C²`.

use serde::Serialize;

use crate::eigen::{minimize_1d, minimize_multistart_with, sym_eig, sym_eig_min, MultistartOptions, SymMatrix};
use crate::error::{Error, Result};
use crate::functionals::IdentityResidual;
use crate::profiles::{make_u1, PolyEnvelope, RadialProfile};
use crate::quad::{integrate_semi_infinite, integrate_semi_infinite_vec, QuadratureSpec};

/// A one-dimensional mode profile `g` with its derivatives.
pub type ModalProfile = RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeParams {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ModeParams {
    pub fn new(n: u32, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { n, alpha, beta, gamma }
    }

    /// `γ = (1+α)/2 + β/4`, the `t = 2` balance.
    pub fn balanced(n: u32, alpha: f64, beta: f64) -> Self {
        Self::new(n, alpha, beta, (1.0 + alpha) / 2.0 + beta / 4.0)
    }

    fn check(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("n >= 1"));
        }
        if ![self.alpha, self.beta, self.gamma].iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("mode exponents must be finite"));
        }
        Ok(())
    }

    /// Weight exponents and lower-order coefficients for mode `k`.
    fn weights(&self, k: u32) -> Weights {
        let d = self.n as f64 + 2.0 * k as f64;
        let kf = k as f64;
        Weights {
            a2: d - 2.0 * self.alpha - 1.0,
            a1: d - 2.0 * self.alpha - 3.0,
            ca: (1.0 + 2.0 * self.alpha) * (d - 1.0),
            b1: d - self.beta - 1.0,
            b0: d - self.beta - 3.0,
            cb: self.beta * kf,
            c1: d - 2.0 * self.gamma - 1.0,
            c0: d - 2.0 * self.gamma - 3.0,
            cc: 2.0 * self.gamma * kf,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Weights {
    a2: f64,
    a1: f64,
    ca: f64,
    b1: f64,
    b0: f64,
    cb: f64,
    c1: f64,
    c0: f64,
    cc: f64,
}

fn pw(r: f64, w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        r.powf(w)
    }
}

fn sq_weighted(v: f64, r: f64, w: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v * pw(r, w)
    }
}

/// The modal integrands are squares, so only the relative tolerance is
/// applied; profiles such as `U1` with small `κ` have tiny but well-defined
/// integrals.
fn integral(name: &str, spec: &QuadratureSpec, hint: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut spec = spec.with_origin_exponent(Some(hint).filter(|p| p.is_finite()));
    spec.abs_tol = spec.abs_tol.min(f64::MIN_POSITIVE);
    integrate_semi_infinite(f, &spec)
        .map(|r| r.value)
        .map_err(|e| Error::quadrature(name, e))
}

/// `∫ (g')² r^{w1} + coef ∫ g² r^{w0}`; the second integral is skipped when
/// its coefficient vanishes.
fn gradient_mass(g: &ModalProfile, spec: &QuadratureSpec, w1: f64, coef: f64, w0: f64) -> Result<f64> {
    let spec = spec.with_split_points(&g.split_points());
    let e = g.small_r_exponent();
    let grad = integral("gradient", &spec, 2.0 * e + w1, |r| sq_weighted(g.du(r), r, w1))?;
    let mass = if coef == 0.0 {
        0.0
    } else {
        coef * integral("mass", &spec, w0, |r| sq_weighted(g.u(r), r, w0))?
    };
    Ok(grad + mass)
}

pub fn a_func(g: &ModalProfile, n: u32, alpha: f64, k: u32, spec: &QuadratureSpec) -> Result<f64> {
    let p = ModeParams::new(n, alpha, 0.0, 0.0);
    p.check()?;
    let w = p.weights(k);
    let spec = spec.with_split_points(&g.split_points());
    let e = g.small_r_exponent();
    let second = integral("second_derivative", &spec, 2.0 * (e - 1.0) + w.a2, |r| {
        sq_weighted(g.d2u(r), r, w.a2)
    })?;
    let first = if w.ca == 0.0 {
        0.0
    } else {
        w.ca * integral("first_derivative", &spec, 2.0 * e + w.a1, |r| sq_weighted(g.du(r), r, w.a1))?
    };
    Ok(second + first)
}

pub fn b_func(g: &ModalProfile, n: u32, beta: f64, k: u32, spec: &QuadratureSpec) -> Result<f64> {
    let p = ModeParams::new(n, 0.0, beta, 0.0);
    p.check()?;
    let w = p.weights(k);
    gradient_mass(g, spec, w.b1, w.cb, w.b0)
}

pub fn c_func(g: &ModalProfile, n: u32, gamma: f64, k: u32, spec: &QuadratureSpec) -> Result<f64> {
    let p = ModeParams::new(n, 0.0, 0.0, gamma);
    p.check()?;
    let w = p.weights(k);
    gradient_mass(g, spec, w.c1, w.cc, w.c0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeQuotient {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub value: f64,
}

/// `A·B/C²` for mode `k`. Fails with [`Error::DegenerateDenominator`] when
/// `C` is not above the absolute quadrature tolerance.
pub fn rayleigh(g: &ModalProfile, p: &ModeParams, k: u32, spec: &QuadratureSpec) -> Result<ModeQuotient> {
    let c = c_func(g, p.n, p.gamma, k, spec)?;
    if !(c > spec.abs_tol) {
        return Err(Error::DegenerateDenominator { value: c });
    }
    let a = a_func(g, p.n, p.alpha, k, spec)?;
    let b = b_func(g, p.n, p.beta, k, spec)?;
    Ok(ModeQuotient {
        a,
        b,
        c,
        value: a * b / (c * c),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeIdentity {
    pub a: IdentityResidual,
    pub b: IdentityResidual,
    pub c: IdentityResidual,
}

impl ModeIdentity {
    pub fn max_relative(&self) -> f64 {
        self.a.relative().max(self.b.relative()).max(self.c.relative())
    }
}

/// Compares `A`, `B`, `C` with the corresponding integrals of
/// `f = r^k g`: `∫(f'' + (n−1)f'/r − c_k f/r²)² r^{n−2α−1}` and
/// `∫((f')² + c_k f²/r²) r^{n−w−1}` for `w = β, 2γ`.
pub fn mode_identity_residual(g: &ModalProfile, p: &ModeParams, k: u32, spec: &QuadratureSpec) -> Result<ModeIdentity> {
    p.check()?;
    let nf = p.n as f64;
    let kf = k as f64;
    let ck = kf * (nf + kf - 2.0);
    let spec_g = spec.with_split_points(&g.split_points());
    let e = g.small_r_exponent();
    let w = p.weights(k);

    // f'' + (n−1)f'/r − c_k f/r² = r^k (g'' + (2k+n−1) g'/r + m g/r²) with m = 0
    // for integer k; m is kept so the grouping stays an identity in k.
    let m = kf * (kf - 1.0) + (nf - 1.0) * kf - ck;
    let wa = nf - 2.0 * p.alpha - 1.0;
    let lhs_a = integral("mode_laplacian", &spec_g, 2.0 * (e - 1.0) + w.a2, |r| {
        let mut s = g.d2u(r) + (2.0 * kf + nf - 1.0) * g.du(r) / r;
        if m != 0.0 {
            s += m * g.u(r) / (r * r);
        }
        sq_weighted(s, r, 2.0 * kf + wa)
    })?;
    let energy = |wexp: f64, name: &str| -> Result<f64> {
        let hint = if k == 0 { 2.0 * e + wexp } else { wexp + 2.0 * kf - 2.0 };
        integral(name, &spec_g, hint, |r| {
            let gu = g.u(r);
            let fp = g.du(r) + kf * gu / r;
            let v = fp * fp + if ck == 0.0 { 0.0 } else { ck * gu * gu / (r * r) };
            if v == 0.0 {
                0.0
            } else {
                v * pw(r, 2.0 * kf + wexp)
            }
        })
    };
    let lhs_b = energy(nf - p.beta - 1.0, "mode_gradient_b")?;
    let lhs_c = energy(nf - 2.0 * p.gamma - 1.0, "mode_gradient_c")?;

    Ok(ModeIdentity {
        a: IdentityResidual::new(lhs_a, a_func(g, p.n, p.alpha, k, spec)?),
        b: IdentityResidual::new(lhs_b, b_func(g, p.n, p.beta, k, spec)?),
        c: IdentityResidual::new(lhs_c, c_func(g, p.n, p.gamma, k, spec)?),
    })
}

/// Closed-form bound on the mode-`k` constant as stated:
/// `(1 + min(0, 4βk/(n+2k−β−2)²)) / (1 + max(0, 8γk/(n+2k−2γ−2)²))
/// · ((n+2k+4α−2γ+2)/2)²`. For `k = 0` both correction factors are 1.
///
/// The `C` correction enters the quotient squared, so for `γ > 0, k ≥ 1`
/// this can exceed the true constant; see [`certified_lower_bound`].
pub fn lower_bound(p: &ModeParams, k: u32) -> Result<f64> {
    bound_parts(p, k).map(|(num, den, q2)| num / den * q2)
}

/// Rigorous lower bound on the mode-`k` constant: the same Hardy corrections
/// with the `C` factor squared, `num / den² · ((n+2k+4α−2γ+2)/2)²`.
pub fn certified_lower_bound(p: &ModeParams, k: u32) -> Result<f64> {
    bound_parts(p, k).map(|(num, den, q2)| num / (den * den) * q2)
}

fn bound_parts(p: &ModeParams, k: u32) -> Result<(f64, f64, f64)> {
    p.check()?;
    let d = p.n as f64 + 2.0 * k as f64;
    let kf = k as f64;
    let q = (d + 4.0 * p.alpha - 2.0 * p.gamma + 2.0) / 2.0;
    if k == 0 {
        return Ok((1.0, 1.0, q * q));
    }
    let factor = |coef: f64, denom: f64, what: &str| -> Result<f64> {
        if coef == 0.0 {
            return Ok(0.0);
        }
        if denom == 0.0 {
            return Err(Error::invalid(format!("{what} vanishes at k = {k}")));
        }
        Ok(coef / (denom * denom))
    };
    let fb = factor(4.0 * p.beta * kf, d - p.beta - 2.0, "n + 2k - beta - 2")?;
    let fc = factor(8.0 * p.gamma * kf, d - 2.0 * p.gamma - 2.0, "n + 2k - 2*gamma - 2")?;
    let num = 1.0 + fb.min(0.0);
    if !(num > 0.0) {
        return Err(Error::invalid(format!(
            "gradient correction 1 + 4*beta*k/(n+2k-beta-2)^2 = {num} is not positive at k = {k}"
        )));
    }
    Ok((num, 1.0 + fc.max(0.0), q * q))
}

/// Smallest `K` from which both closed-form bounds are nondecreasing in `k`.
pub fn monotone_from(p: &ModeParams) -> u32 {
    let nf = p.n as f64;
    // 2k + c > 0 and 2k ≥ c keep k/(2k+c)² decreasing.
    let from_offset = |c: f64| -> f64 { (c / 2.0).ceil().max((-c / 2.0).floor() + 1.0) };
    let mut kmin: f64 = 0.0;
    if p.beta != 0.0 {
        kmin = kmin.max(from_offset(nf - p.beta - 2.0));
    }
    if p.gamma != 0.0 {
        kmin = kmin.max(from_offset(nf - 2.0 * p.gamma - 2.0));
    }
    kmin = kmin.max((-(nf + 4.0 * p.alpha - 2.0 * p.gamma + 2.0) / 2.0).floor() + 1.0);
    kmin.max(0.0) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateBudget {
    /// Outer objective evaluations (one Gram assembly each).
    pub max_evaluations: usize,
    /// Number of polynomial-envelope basis functions.
    pub basis_size: usize,
    /// Largest envelope power searched.
    pub q_max: f64,
    /// Also try the transplanted radial extremal.
    pub use_extremal_seed: bool,
}

impl Default for EstimateBudget {
    fn default() -> Self {
        Self {
            max_evaluations: 40,
            basis_size: 5,
            q_max: 6.0,
            use_extremal_seed: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpEstimate {
    pub k: u32,
    /// `A·B/C²` of the witness, recomputed by direct quadrature.
    pub upper: f64,
    pub quotient: ModeQuotient,
    #[serde(skip)]
    pub witness: ModalProfile,
    pub witness_label: String,
    pub evaluations: usize,
    /// The search stopped on its evaluation budget.
    pub exhausted: bool,
}

/// Upper bound on `inf_g A·B/C²` for mode `k`, from the transplanted radial
/// extremal and a Rayleigh–Ritz search over `r^j exp(−r^q/q)`.
pub fn estimate_sharp_k(p: &ModeParams, k: u32, spec: &QuadratureSpec, budget: &EstimateBudget) -> Result<SharpEstimate> {
    p.check()?;
    if budget.basis_size == 0 || budget.basis_size > 12 {
        return Err(Error::invalid("basis_size must be between 1 and 12"));
    }
    let mut best: Option<SharpEstimate> = None;
    let consider = |g: ModalProfile, evaluations: usize, exhausted: bool, best: &mut Option<SharpEstimate>| {
        if let Ok(qt) = rayleigh(&g, p, k, spec) {
            if qt.value.is_finite() && best.as_ref().map_or(true, |b| qt.value < b.upper) {
                *best = Some(SharpEstimate {
                    k,
                    upper: qt.value,
                    quotient: qt,
                    witness_label: g.label().to_string(),
                    witness: g,
                    evaluations,
                    exhausted,
                });
            }
        }
    };

    let kappa = 1.0 + p.alpha - p.beta / 2.0;
    if budget.use_extremal_seed {
        if let Ok(g) = make_u1(p.alpha, p.beta) {
            consider(g, 1, false, &mut best);
        }
    }

    let ritz = RitzSearch::new(p, k, spec, budget.basis_size);
    let (q_lo, q_hi) = (ritz.q_min + 0.02, budget.q_max);
    let mut evaluations = best.as_ref().map_or(0, |b| b.evaluations);
    let mut exhausted = false;
    if q_lo < q_hi {
        let to_q = |s: f64| q_lo + (q_hi - q_lo) / (1.0 + (-s).exp());
        let from_q = |q: f64| {
            let t = ((q - q_lo) / (q_hi - q_lo)).clamp(1e-3, 1.0 - 1e-3);
            (t / (1.0 - t)).ln()
        };
        let seeds: Vec<Vec<f64>> = [kappa, 2.0]
            .iter()
            .filter(|q| q.is_finite())
            .map(|&q| vec![from_q(q)])
            .collect();
        let opts = MultistartOptions {
            max_evaluations: budget.max_evaluations.max(1),
            initial_step: 1.0,
            f_tol: 1e-10,
            max_restarts: 2,
        };
        let found = minimize_multistart_with(
            |s| ritz.best_at(to_q(s[0])).map_or(f64::INFINITY, |w| w.value),
            &seeds,
            &opts,
        )?;
        evaluations += found.evaluations;
        exhausted = found.exhausted;
        if let Ok(w) = ritz.best_at(to_q(found.x[0])) {
            consider(w.profile, evaluations, exhausted, &mut best);
        }
    }

    let mut est = best.ok_or_else(|| {
        Error::invalid(format!("no admissible trial function for mode k = {k}"))
    })?;
    est.evaluations = evaluations;
    est.exhausted = exhausted;
    Ok(est)
}

struct RitzWitness {
    value: f64,
    profile: ModalProfile,
}

/// Gram matrices of the basis `r^j exp(−r^q/q)`, `j = j0, j0+2, ...`.
struct RitzSearch<'a> {
    w: Weights,
    spec: &'a QuadratureSpec,
    powers: Vec<u32>,
    q_min: f64,
}

impl<'a> RitzSearch<'a> {
    fn new(p: &'a ModeParams, k: u32, spec: &'a QuadratureSpec, size: usize) -> Self {
        let w = p.weights(k);
        // g(0) ≠ 0 needs the mass integrals to converge at the origin.
        let mass_ok = (w.cb == 0.0 || w.b0 > -1.0) && (w.cc == 0.0 || w.c0 > -1.0);
        let mut j0 = 0u32;
        if !mass_ok {
            j0 = 2;
            while !(2.0 * j0 as f64 + w.b0 > -1.0
                && 2.0 * j0 as f64 + w.c0 > -1.0
                && 2.0 * (j0 as f64 - 2.0) + w.a2 > -1.0)
            {
                j0 += 2;
            }
        }
        // With j0 = 0 the envelope sets the leading behaviour: g' ~ r^{q−1}.
        let q_min = if j0 == 0 {
            [(-1.0 - w.a2) / 2.0 + 2.0, (-1.0 - w.b1) / 2.0 + 1.0, (-1.0 - w.c1) / 2.0 + 1.0, 0.0]
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max)
        } else {
            0.0
        };
        let powers = (0..size as u32).map(|i| j0 + 2 * i).collect();
        Self {
            w,
            spec,
            powers,
            q_min,
        }
    }

    fn gram(&self, q: f64) -> Result<[SymMatrix; 3]> {
        let b = self.powers.len();
        let pairs = b * (b + 1) / 2;
        let w = self.w;
        let powers = &self.powers;
        let mut phi = vec![[0.0f64; 3]; b];
        let integrand = |r: f64, out: &mut [f64]| {
            let env = (-r.powf(q) / q).exp();
            if env == 0.0 {
                out.fill(0.0);
                return;
            }
            let rq = r.powf(q);
            for (slot, &j) in phi.iter_mut().zip(powers) {
                let jf = j as f64;
                let rj = pw(r, jf);
                // φ = r^j E, φ' = (j/r − r^{q−1}) r^j E,
                // φ'' = (j(j−1)/r² − (2j+q−1) r^{q−2} + r^{2q−2}) r^j E
                let v = rj * env;
                let d1 = if j == 0 { -rq / r * v } else { (jf - rq) / r * v };
                let d2 = (jf * (jf - 1.0) - (2.0 * jf + q - 1.0) * rq + rq * rq) / (r * r) * v;
                *slot = [v, d1, d2];
            }
            let (wa2, wa1, wb1, wb0, wc1, wc0) = (
                pw(r, w.a2),
                pw(r, w.a1),
                pw(r, w.b1),
                pw(r, w.b0),
                pw(r, w.c1),
                pw(r, w.c0),
            );
            let mut idx = 0;
            for i in 0..b {
                for j in i..b {
                    let (f, g) = (phi[i], phi[j]);
                    out[idx] = f[2] * g[2] * wa2 + w.ca * f[1] * g[1] * wa1;
                    out[pairs + idx] = f[1] * g[1] * wb1 + w.cb * f[0] * g[0] * wb0;
                    out[2 * pairs + idx] = f[1] * g[1] * wc1 + w.cc * f[0] * g[0] * wc0;
                    idx += 1;
                }
            }
        };
        let j0 = self.powers[0] as f64;
        let lead = if j0 == 0.0 {
            (2.0 * q - 4.0 + w.a2).min(2.0 * q - 2.0 + w.b1).min(2.0 * q - 2.0 + w.c1)
        } else {
            (2.0 * j0 - 4.0 + w.a2).min(2.0 * j0 + w.b0).min(2.0 * j0 + w.c0)
        };
        let spec = self.spec.with_origin_exponent(Some(lead));
        let res = integrate_semi_infinite_vec(integrand, 3 * pairs, &spec)?;
        let mut mats = [SymMatrix::zeros(b), SymMatrix::zeros(b), SymMatrix::zeros(b)];
        for (m, mat) in mats.iter_mut().enumerate() {
            let mut idx = 0;
            for i in 0..b {
                for j in i..b {
                    mat.set(i, j, res.values[m * pairs + idx]);
                    idx += 1;
                }
            }
        }
        Ok(mats)
    }

    /// `inf_c (cᵀAc)(cᵀBc)/(cᵀCc)² = inf_λ [μ_min(λA + B/λ; C)/2]²`.
    fn best_at(&self, q: f64) -> Result<RitzWitness> {
        let [a, b, c] = self.gram(q)?;
        let dim = a.dim();
        // Diagonal scaling, then whitening of C on its well-conditioned range.
        let s: Vec<f64> = (0..dim).map(|i| 1.0 / c.get(i, i).abs().max(1e-300).sqrt()).collect();
        let scale = |m: &SymMatrix| SymMatrix::from_fn(dim, |i, j| m.get(i, j) * s[i] * s[j]);
        let (a, b, c) = (scale(&a), scale(&b), scale(&c));
        let eig = sym_eig(&c)?;
        let top = eig.values.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..dim).filter(|&i| eig.values[i] > 1e-12 * top).collect();
        if keep.is_empty() {
            return Err(Error::DegenerateDenominator { value: top });
        }
        let t: Vec<Vec<f64>> = keep
            .iter()
            .map(|&i| eig.vectors[i].iter().map(|x| x / eig.values[i].sqrt()).collect())
            .collect();
        let project = |m: &SymMatrix| {
            SymMatrix::from_fn(t.len(), |i, j| {
                let mj = m.mul_vec(&t[j]);
                t[i].iter().zip(&mj).map(|(x, y)| x * y).sum()
            })
        };
        let (pa, pb) = (project(&a), project(&b));
        let m = t.len();
        let combo = |ln_l: f64| {
            let l = ln_l.exp();
            SymMatrix::from_fn(m, |i, j| l * pa.get(i, j) + pb.get(i, j) / l)
        };
        let objective = |ln_l: f64| match sym_eig_min(&combo(ln_l)) {
            Ok(e) if e.value > 0.0 => (e.value / 2.0).powi(2),
            _ => f64::INFINITY,
        };
        let found = minimize_1d(objective, -25.0, 25.0);
        if !found.fx.is_finite() {
            return Err(Error::invalid(format!("indefinite Gram pencil at q = {q}")));
        }
        let y = sym_eig_min(&combo(found.x))?.vector;
        let mut coef = vec![0.0; dim];
        for (yi, ti) in y.iter().zip(&t) {
            for (c, x) in coef.iter_mut().zip(ti) {
                *c += yi * x;
            }
        }
        let top_power = *self.powers.last().unwrap_or(&0) as usize;
        let mut dense = vec![0.0; top_power + 1];
        for ((&j, c), si) in self.powers.iter().zip(&coef).zip(&s) {
            dense[j as usize] = c * si;
        }
        let norm = dense.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm > 0.0 {
            dense.iter_mut().for_each(|x| *x /= norm);
        }
        let label = format!("ritz(q={q:.6}, basis={})", self.powers.len());
        Ok(RitzWitness {
            value: found.fx,
            profile: RadialProfile::new(PolyEnvelope::new(dense, 1.0 / q, q), label),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeEntry {
    pub k: u32,
    /// [`lower_bound`].
    pub lower_bound: f64,
    /// [`certified_lower_bound`].
    pub certified_lower: f64,
    pub upper: f64,
    pub witness_label: String,
    pub exhausted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeBracket {
    /// `min_k` of the certified lower bounds over the examined modes.
    pub lower: f64,
    /// `min_k` of the witnessed upper bounds.
    pub upper: f64,
    /// Smallest mode whose upper bound is within `1e−6` of `upper`.
    pub k_star: u32,
    /// Last mode examined; every higher mode has a certified lower bound
    /// above `upper`.
    pub truncation_k: u32,
    pub per_k: Vec<ModeEntry>,
    /// The mode cap was reached before the tail could be discarded.
    pub exhausted: bool,
}

pub const MAX_MODE: u32 = 200;

/// Brackets `min_k inf_g A·B/C²`. Modes are estimated in order until the
/// monotone part of the certified lower bound exceeds the best upper bound.
pub fn min_over_k(p: &ModeParams, spec: &QuadratureSpec, budget: &EstimateBudget) -> Result<ModeBracket> {
    p.check()?;
    let k_mono = monotone_from(p);
    let mut per_k: Vec<ModeEntry> = Vec::new();
    let mut best = f64::INFINITY;
    let mut exhausted = true;
    for k in 0..=MAX_MODE {
        let certified = certified_lower_bound(p, k)?;
        if k >= k_mono && certified > (1.0 + 1e-6) * best {
            exhausted = false;
            break;
        }
        let est = estimate_sharp_k(p, k, spec, budget)?;
        best = best.min(est.upper);
        per_k.push(ModeEntry {
            k,
            lower_bound: lower_bound(p, k)?,
            certified_lower: certified,
            upper: est.upper,
            witness_label: est.witness_label,
            exhausted: est.exhausted,
        });
    }
    let lower = per_k.iter().map(|e| e.certified_lower).fold(f64::INFINITY, f64::min);
    let k_star = per_k
        .iter()
        .find(|e| e.upper <= best * (1.0 + 1e-6))
        .map_or(0, |e| e.k);
    Ok(ModeBracket {
        lower,
        upper: best,
        k_star,
        truncation_k: per_k.last().map_or(0, |e| e.k),
        per_k,
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::make_gauss;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_mode_zero() {
        let g = make_gauss(0.5).unwrap();
        let s = QuadratureSpec::default();
        let a = a_func(&g, 3, 0.0, 0, &s).unwrap();
        assert!((a - 15.0 * PI.sqrt() / 16.0).abs() < 1e-12, "{a}");
    }

    #[test]
    fn lower_bound_examples() {
        let p = ModeParams::new(3, 0.0, -2.0, 0.0);
        let l = lower_bound(&p, 1).unwrap();
        assert!((l - 17.0 / 25.0 * 12.25).abs() < 1e-13);
        assert_eq!(lower_bound(&p, 0).unwrap(), 2.5 * 2.5);
        let h = ModeParams::new(5, 0.0, 0.0, 0.5);
        assert_eq!(lower_bound(&h, 1).unwrap(), 16.0 / 1.25);
        assert_eq!(certified_lower_bound(&h, 1).unwrap(), 16.0 / 1.5625);
    }

    #[test]
    fn mode_identities_for_gaussian() {
        let g = make_gauss(0.5).unwrap();
        let s = QuadratureSpec::default();
        for k in 0..4 {
            let id = mode_identity_residual(&g, &ModeParams::new(3, 0.3, -0.5, 0.4), k, &s).unwrap();
            assert!(id.max_relative() < 1e-9, "k={k} {id:?}");
        }
    }

    #[test]
    fn hydrogen_bracket() {
        let p = ModeParams::new(5, 0.0, 0.0, 0.5);
        let br = min_over_k(&p, &QuadratureSpec::default(), &EstimateBudget::default()).unwrap();
        assert_eq!(br.k_star, 0);
        assert!((br.upper - 9.0).abs() < 1e-8, "{br:?}");
        assert_eq!(br.lower, 9.0);
    }
}
