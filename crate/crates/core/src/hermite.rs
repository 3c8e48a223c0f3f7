//! Probabilists' Hermite polynomials, Gaussian-measure integrals and the
//! quadratic form
//! `Q(w) = ∫|∇w|² dμ + n∫w² dμ − ∫|x|² w² dμ`, `dμ = π^{-n/2} e^{-|x|²} dx`,
//! on the span of `𝓗_I(x) = ĥ_I(√2 x)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::eigen::{sym_eig_min, SymMatrix};
use crate::error::{Error, Result};
use crate::functionals::surface_area;
use crate::profiles::RadialProfile;
use crate::quad::{integrate_semi_infinite, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HermiteConvention {
    /// `H_i` with `∫ H_i² dγ₁ = i!`.
    ProbabilistUnnormalized,
    /// `ĥ_i = H_i / √(i!)`.
    ProbabilistNormalized,
}

pub type MultiIndex = Vec<u32>;

pub fn factorial(i: u32) -> f64 {
    (1..=i).fold(1.0, |acc, k| acc * k as f64)
}

/// Integer coefficients of `H_i`, lowest degree first.
pub fn hermite_coefficients(i: u32) -> Vec<i128> {
    let mut prev = vec![1i128];
    if i == 0 {
        return prev;
    }
    let mut cur = vec![0i128, 1];
    for k in 1..i {
        // H_{k+1} = t H_k − k H_{k−1}
        let mut next = vec![0i128; cur.len() + 1];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= k as i128 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_i(t)` by forward recurrence, optionally divided by `√(i!)`.
pub fn hermite_eval(i: u32, t: f64, conv: HermiteConvention) -> f64 {
    let h = hermite_raw(i, t);
    match conv {
        HermiteConvention::ProbabilistUnnormalized => h,
        HermiteConvention::ProbabilistNormalized => h / factorial(i).sqrt(),
    }
}

fn hermite_raw(i: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, t);
    if i == 0 {
        return prev;
    }
    for k in 1..i {
        let next = t * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(H_i, H_i', H_i'')` using `H_i' = i H_{i−1}`.
pub fn hermite_with_derivatives(i: u32, t: f64) -> (f64, f64, f64) {
    let h = hermite_raw(i, t);
    let d1 = if i >= 1 { i as f64 * hermite_raw(i - 1, t) } else { 0.0 };
    let d2 = if i >= 2 {
        (i * (i - 1)) as f64 * hermite_raw(i - 2, t)
    } else {
        0.0
    };
    (h, d1, d2)
}

/// `∫ t² H_i H_j dγ₁` in closed form, from `t H_i = H_{i+1} + i H_{i−1}`.
pub fn x2_product_integral(i: u32, j: u32, conv: HermiteConvention) -> f64 {
    let (lo, hi) = (i.min(j), i.max(j));
    match conv {
        HermiteConvention::ProbabilistUnnormalized => {
            if lo == hi {
                (2 * lo + 1) as f64 * factorial(lo)
            } else if hi - lo == 2 {
                factorial(hi)
            } else {
                0.0
            }
        }
        HermiteConvention::ProbabilistNormalized => {
            if lo == hi {
                (2 * lo + 1) as f64
            } else if hi - lo == 2 {
                (((lo + 1) * (lo + 2)) as f64).sqrt()
            } else {
                0.0
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionCheck {
    pub i: u32,
    /// Max over the grid of `|t² H_i − H_{i+2} − (2i+1) H_i − i(i−1) H_{i−2}|`.
    pub residual: f64,
    /// Same with coefficient `(i − 1)` on `H_{i−2}`.
    pub residual_alt: f64,
    /// The difference polynomial is identically zero in exact arithmetic.
    pub exact_zero: bool,
}

/// Checks `t² H_i = H_{i+2} + (2i+1) H_i + c H_{i−2}` for `c = i(i−1)` and for
/// the alternative `c = i − 1`, exactly in integer coefficients and on a grid
/// over `[−5, 5]`. For `i < 2` there is no `H_{i−2}` term.
pub fn t2_expansion_check(i: u32) -> Result<ExpansionCheck> {
    let diff = |c: i128| -> Vec<i128> {
        let hi = hermite_coefficients(i);
        let mut d = vec![0i128; hi.len() + 2];
        for (j, &x) in hi.iter().enumerate() {
            d[j + 2] += x;
            d[j] -= (2 * i as i128 + 1) * x;
        }
        for (j, &x) in hermite_coefficients(i + 2).iter().enumerate() {
            d[j] -= x;
        }
        if i >= 2 {
            for (j, &x) in hermite_coefficients(i - 2).iter().enumerate() {
                d[j] -= c * x;
            }
        }
        d
    };
    let grid_max = |d: &[i128]| {
        (0..=1000)
            .map(|k| {
                let t = -5.0 + 0.01 * k as f64;
                d.iter().rev().fold(0.0, |acc, &c| acc * t + c as f64).abs()
            })
            .fold(0.0, f64::max)
    };
    let derived = diff(i as i128 * (i as i128 - 1));
    let alt = diff(i as i128 - 1);
    Ok(ExpansionCheck {
        i,
        residual: grid_max(&derived),
        residual_alt: grid_max(&alt),
        exact_zero: derived.iter().all(|&c| c == 0),
    })
}

/// Scaled max-norm residual of `Δ𝓗_I − 2x·∇𝓗_I + 2|I| 𝓗_I` on a grid over
/// `[−2, 2]^n`. The residual is divided by `max(1, max |2|I| 𝓗_I|)`.
pub fn ou_eigen_residual(index: &[u32], n: usize) -> Result<f64> {
    if index.len() != n || n == 0 || n > 4 {
        return Err(Error::invalid("multi-index length must equal n, 1 <= n <= 4"));
    }
    let order: u32 = index.iter().sum();
    if order > 10 {
        return Err(Error::invalid("|I| must be at most 10"));
    }
    let pts = match n {
        1 => 401,
        2 => 61,
        3 => 21,
        _ => 11,
    };
    let coord = |k: usize| -2.0 + 4.0 * k as f64 / (pts - 1) as f64;
    let s2 = std::f64::consts::SQRT_2;
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<f64> = idx.iter().map(|&k| coord(k)).collect();
        let parts: Vec<(f64, f64, f64)> = index
            .iter()
            .zip(&x)
            .map(|(&i, &xk)| hermite_with_derivatives(i, s2 * xk))
            .collect();
        let value: f64 = parts.iter().map(|p| p.0).product();
        let mut lap = 0.0;
        let mut drift = 0.0;
        for k in 0..n {
            let others: f64 = (0..n).filter(|&m| m != k).map(|m| parts[m].0).product();
            lap += 2.0 * parts[k].2 * others;
            drift += 2.0 * x[k] * s2 * parts[k].1 * others;
        }
        let eig = 2.0 * order as f64 * value;
        worst = worst.max((lap - drift + eig).abs());
        scale = scale.max(eig.abs());
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return Ok(worst / scale);
            }
            idx[k] += 1;
            if idx[k] < pts {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// All multi-indices of length `n` with `|I| ≤ d`, ordered by total degree
/// and then lexicographically.
pub fn multi_indices(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for total in 0..=d {
        let mut cur = vec![0u32; n];
        compositions(total, 0, &mut cur, &mut out);
    }
    out
}

fn compositions(rem: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    let n = cur.len();
    if pos == n - 1 {
        cur[pos] = rem;
        out.push(cur.clone());
        return;
    }
    for v in (0..=rem).rev() {
        cur[pos] = v;
        compositions(rem - v, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// `binom(d + n, n)` without overflow for moderate arguments.
pub fn basis_size(n: usize, d: u32) -> u128 {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        acc = acc * (d as u128 + k) / k;
    }
    acc
}

pub const MAX_BASIS: usize = 20_000;

#[derive(Debug, Clone)]
pub struct QMatrix {
    pub matrix: SymMatrix,
    pub basis: Vec<MultiIndex>,
}

/// Entries of `Q` on the orthonormal basis of degree `≤ d`:
/// diagonal `2|I| + n − (2|I| + n)/2`, and `−√((m+1)(m+2))/2` between indices
/// differing by two in one coordinate (`m` the smaller entry).
pub fn assemble_q(n: usize, d: u32) -> Result<QMatrix> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let size = basis_size(n, d);
    if size > MAX_BASIS as u128 {
        return Err(Error::BudgetExceeded {
            size: size.min(usize::MAX as u128) as usize,
            limit: MAX_BASIS,
        });
    }
    let basis = multi_indices(n, d);
    let matrix = assemble_on(&basis, n);
    Ok(QMatrix { matrix, basis })
}

fn assemble_on(basis: &[MultiIndex], n: usize) -> SymMatrix {
    let pos: HashMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut m = SymMatrix::zeros(basis.len());
    for (a, idx) in basis.iter().enumerate() {
        let order: u32 = idx.iter().sum();
        let diag = (2 * order) as f64 + n as f64;
        m.set(a, a, diag - diag / 2.0);
        for k in 0..n {
            let mut up = idx.clone();
            up[k] += 2;
            if let Some(&b) = pos.get(&up) {
                let lo = idx[k] as f64;
                m.set(a, b, -((lo + 1.0) * (lo + 2.0)).sqrt() / 2.0);
            }
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapPoint {
    pub d: u32,
    pub gap: f64,
    pub meets_claim: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralGapReport {
    pub n: usize,
    pub d: u32,
    pub gap: f64,
    pub claimed: f64,
    pub meets_claim: bool,
    pub sequence: Vec<GapPoint>,
}

/// `min{1, n/4}`.
pub fn claimed_gap(n: usize) -> f64 {
    (n as f64 / 4.0).min(1.0)
}

/// Minimum eigenvalue of `Q` on degree `≤ d`, computed per parity class.
pub fn min_eigenvalue(n: usize, d: u32) -> Result<f64> {
    let q = assemble_q(n, d)?;
    let mut classes: BTreeMap<Vec<u32>, Vec<MultiIndex>> = BTreeMap::new();
    for b in q.basis {
        let parity: Vec<u32> = b.iter().map(|x| x % 2).collect();
        classes.entry(parity).or_default().push(b);
    }
    let mut gap = f64::INFINITY;
    for block in classes.values() {
        let m = assemble_on(block, n);
        gap = gap.min(sym_eig_min(&m)?.value);
    }
    Ok(gap)
}

/// Gap sequence for `D' = 0..=d` compared with `min{1, n/4}`.
pub fn spectral_gap(n: usize, d: u32) -> Result<SpectralGapReport> {
    let claimed = claimed_gap(n);
    let mut sequence = Vec::with_capacity(d as usize + 1);
    for dd in 0..=d {
        let gap = min_eigenvalue(n, dd)?;
        sequence.push(GapPoint {
            d: dd,
            gap,
            meets_claim: gap >= claimed - 1e-9,
        });
    }
    let last = *sequence.last().expect("nonempty");
    Ok(SpectralGapReport {
        n,
        d,
        gap: last.gap,
        claimed,
        meets_claim: last.meets_claim,
        sequence,
    })
}

/// Finite expansion `w = Σ a_I 𝓗_I` in the orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteExpansion {
    pub n: usize,
    pub degree_cutoff: u32,
    pub coeffs: BTreeMap<MultiIndex, f64>,
}

impl HermiteExpansion {
    pub fn new(n: usize, degree_cutoff: u32) -> Self {
        Self {
            n,
            degree_cutoff,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, index: MultiIndex, a: f64) -> Result<()> {
        if index.len() != self.n {
            return Err(Error::invalid("multi-index length must equal n"));
        }
        if index.iter().sum::<u32>() > self.degree_cutoff {
            return Err(Error::invalid("multi-index exceeds the degree cutoff"));
        }
        if !a.is_finite() {
            return Err(Error::invalid("coefficient must be finite"));
        }
        self.coeffs.insert(index, a);
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let s2 = std::f64::consts::SQRT_2;
        self.coeffs
            .iter()
            .map(|(idx, a)| {
                a * idx
                    .iter()
                    .zip(x)
                    .map(|(&i, &xk)| hermite_eval(i, s2 * xk, HermiteConvention::ProbabilistNormalized))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let s2 = std::f64::consts::SQRT_2;
        let mut g = vec![0.0; self.n];
        for (idx, a) in &self.coeffs {
            let norm: f64 = idx.iter().map(|&i| factorial(i).sqrt()).product();
            let parts: Vec<(f64, f64, f64)> = idx
                .iter()
                .zip(x)
                .map(|(&i, &xk)| hermite_with_derivatives(i, s2 * xk))
                .collect();
            for (k, gk) in g.iter_mut().enumerate() {
                let others: f64 = (0..self.n).filter(|&m| m != k).map(|m| parts[m].0).product();
                *gk += a / norm * s2 * parts[k].1 * others;
            }
        }
        g
    }

    /// `aᵀ Q a` from the assembled matrix.
    pub fn q_form(&self) -> Result<f64> {
        let q = assemble_q(self.n, self.degree_cutoff)?;
        let a: Vec<f64> = q
            .basis
            .iter()
            .map(|b| self.coeffs.get(b).copied().unwrap_or(0.0))
            .collect();
        Ok(q.matrix.quadratic_form(&a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincarePair {
    /// `∫|∇w|² dμ = Σ 2|I| a_I²`.
    pub lhs: f64,
    /// `2 ∫|w − mean|² dμ = 2 Σ_{|I|≥1} a_I²`.
    pub rhs: f64,
}

pub fn poincare_residual(w: &HermiteExpansion) -> PoincarePair {
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (idx, a) in &w.coeffs {
        let order: u32 = idx.iter().sum();
        lhs += 2.0 * order as f64 * a * a;
        if order >= 1 {
            rhs += 2.0 * a * a;
        }
    }
    PoincarePair { lhs, rhs }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftBound {
    /// `inf_c ∫|∇[(v − c) e^{−|x|²/2}]|² dx`.
    pub lhs: f64,
    /// `((n+2)/2) ∫|∇v|² e^{−|x|²} dx`.
    pub rhs: f64,
    /// Minimizing shift `c`.
    pub c: f64,
}

/// Compares the best constant shift of `v` against the weighted gradient
/// energy. The objective `P + 2cQ + c²R` is quadratic in `c`, so the infimum
/// is `P − Q²/R` exactly.
pub fn lemma_c1_check(v: &RadialProfile, n: u32, spec: &QuadratureSpec) -> Result<ShiftBound> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let w = n as f64 - 1.0;
    let spec = spec.with_split_points(&v.split_points());
    let weight = |r: f64| if w == 0.0 { 1.0 } else { r.powf(w) };
    let integral = |name: &str, f: &dyn Fn(f64) -> f64| {
        integrate_semi_infinite(f, &spec)
            .map(|r| r.value)
            .map_err(|e| Error::quadrature(name, e))
    };
    let shifted = |r: f64| v.du(r) - r * v.u(r);
    let p = integral("shift energy", &|r| {
        let s = shifted(r);
        s * s * (-r * r).exp() * weight(r)
    })?;
    let q = integral("shift cross term", &|r| shifted(r) * r * (-r * r).exp() * weight(r))?;
    let rr = integral("shift mass", &|r| r * r * (-r * r).exp() * weight(r))?;
    let g = integral("weighted gradient", &|r| {
        let d = v.du(r);
        d * d * (-r * r).exp() * weight(r)
    })?;
    let area = surface_area(n);
    Ok(ShiftBound {
        lhs: area * (p - q * q / rr),
        rhs: area * (n as f64 + 2.0) / 2.0 * g,
        c: -q / rr,
    })
}
