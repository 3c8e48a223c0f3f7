//! Dense symmetric eigensolver and derivative-free minimizers.

use serde::Serialize;

use crate::error::{Error, Result};

/// Symmetric matrix holding only its upper triangle, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from a dense row-major square matrix, reading the upper triangle.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        Self::from_fn(rows.len(), |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j);
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j);
        self.data[k] += v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j);
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// All eigenpairs, eigenvalues ascending; `vectors[k]` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenMin {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi iteration until the off-diagonal norm drops below
/// `1e-13 · ‖M‖_F`.
pub fn sym_eig(m: &SymMatrix) -> Result<Eigen> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    if m.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix entries must be finite"));
    }
    let mut a = m.to_dense();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let norm = m.frobenius_norm();
    let target = 1e-13 * norm;
    let off = |a: &Vec<Vec<f64>>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[i][j] * a[i][j];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off_norm = off(&a);
    while off_norm > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigensolveFailure { sweeps, off_norm });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
        off_norm = off(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i][k]).collect())
        .collect();
    Ok(Eigen {
        values,
        vectors,
        sweeps,
    })
}

/// Smallest eigenvalue with a unit eigenvector; the residual `‖Mv − λv‖` is
/// checked against `1e-10 · ‖M‖_F`.
pub fn sym_eig_min(m: &SymMatrix) -> Result<EigenMin> {
    let eig = sym_eig(m)?;
    let value = eig.values[0];
    let mut vector = eig.vectors[0].clone();
    let len = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    vector.iter_mut().for_each(|x| *x /= len);
    // deterministic sign: first nonzero component positive
    if let Some(first) = vector.iter().find(|x| x.abs() > 1e-300) {
        if *first < 0.0 {
            vector.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let mv = m.mul_vec(&vector);
    let residual = mv
        .iter()
        .zip(&vector)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm = m.frobenius_norm();
    if residual > 1e-10 * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::EigensolveFailure {
            sweeps: eig.sweeps,
            off_norm: residual,
        });
    }
    Ok(EigenMin {
        value,
        vector,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Min1d {
    pub x: f64,
    pub fx: f64,
    /// The minimizer sits on an end of the bracket.
    pub at_boundary: bool,
    pub evaluations: usize,
}

const SCAN_POINTS: usize = 256;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` on `[lo, hi]`: a uniform scan locates the best cell, golden
/// section shrinks it to width `1e-10 · (hi − lo)`, and a parabolic step
/// polishes. The best point ever evaluated is returned, so the result is
/// never worse than the scan. Non-finite values count as `+∞`.
pub fn minimize_1d<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64) -> Min1d {
    minimize_1d_scan(f, lo, hi, SCAN_POINTS)
}

/// [`minimize_1d`] with a caller-chosen number of scan cells (at least 2).
pub fn minimize_1d_scan<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, cells: usize) -> Min1d {
    assert!(lo < hi, "empty bracket");
    let cells = cells.max(2);
    let mut evals = 0usize;
    let mut best = (lo, f64::INFINITY);
    let mut eval = |x: f64, best: &mut (f64, f64), evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v < best.1 {
            *best = (x, v);
        }
        v
    };

    let step = (hi - lo) / cells as f64;
    let mut scan = Vec::with_capacity(cells + 1);
    for i in 0..=cells {
        let x = if i == cells { hi } else { lo + step * i as f64 };
        scan.push(eval(x, &mut best, &mut evals));
    }
    let imin = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut a = lo + step * imin.saturating_sub(1) as f64;
    let mut b = (lo + step * (imin + 1) as f64).min(hi);

    let width = 1e-10 * (hi - lo);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut best, &mut evals);
    let mut fd = eval(d, &mut best, &mut evals);
    while b - a > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut best, &mut evals);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut best, &mut evals);
        }
    }

    // parabola through three points around the current best
    let h = (b - a).max(width);
    let x1 = best.0;
    let (x0, x2) = ((x1 - h).max(lo), (x1 + h).min(hi));
    if x0 < x1 && x1 < x2 {
        let f0 = eval(x0, &mut best, &mut evals);
        let f1 = best.1;
        let f2 = eval(x2, &mut best, &mut evals);
        let num = (x1 - x0).powi(2) * (f1 - f2) - (x1 - x2).powi(2) * (f1 - f0);
        let den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
        if den != 0.0 {
            let xp = x1 - 0.5 * num / den;
            if xp > lo && xp < hi && xp.is_finite() {
                eval(xp, &mut best, &mut evals);
            }
        }
    }

    let tol = 1e-8 * (hi - lo);
    Min1d {
        x: best.0,
        fx: best.1,
        at_boundary: best.0 - lo <= tol || hi - best.0 <= tol,
        evaluations: evals,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultistartOptions {
    pub max_evaluations: usize,
    /// Initial simplex edge, relative to `max(|x_i|, 1)`.
    pub initial_step: f64,
    pub f_tol: f64,
    pub max_restarts: usize,
}

impl Default for MultistartOptions {
    fn default() -> Self {
        Self {
            max_evaluations: 20_000,
            initial_step: 0.1,
            f_tol: 1e-15,
            max_restarts: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiMin {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evaluations: usize,
    /// The evaluation budget ran out; `x` is the best point found so far.
    pub exhausted: bool,
}

/// Nelder–Mead from each seed with restarts; deterministic for fixed seeds.
pub fn minimize_multistart<F>(f: F, seeds: &[Vec<f64>], budget: usize) -> Result<MultiMin>
where
    F: FnMut(&[f64]) -> f64,
{
    minimize_multistart_with(
        f,
        seeds,
        &MultistartOptions {
            max_evaluations: budget,
            ..Default::default()
        },
    )
}

pub fn minimize_multistart_with<F>(mut f: F, seeds: &[Vec<f64>], opts: &MultistartOptions) -> Result<MultiMin>
where
    F: FnMut(&[f64]) -> f64,
{
    let Some(first) = seeds.first() else {
        return Err(Error::invalid("at least one seed is required"));
    };
    let m = first.len();
    if m == 0 || m > 32 || seeds.iter().any(|s| s.len() != m) {
        return Err(Error::invalid("seeds must share a dimension between 1 and 32"));
    }
    let mut evals = 0usize;
    let mut best = MultiMin {
        x: first.clone(),
        fx: f64::INFINITY,
        evaluations: 0,
        exhausted: false,
    };
    let mut eval = |x: &[f64], evals: &mut usize, best: &mut MultiMin| -> f64 {
        *evals += 1;
        let v = f(x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v < best.fx {
            best.fx = v;
            best.x = x.to_vec();
        }
        v
    };

    'seeds: for seed in seeds {
        let mut start = seed.clone();
        let mut last = f64::INFINITY;
        for _ in 0..=opts.max_restarts {
            if evals >= opts.max_evaluations {
                best.exhausted = true;
                break 'seeds;
            }
            let (x, fx, hit) = nelder_mead(&mut eval, &start, opts, &mut evals, &mut best);
            if hit {
                best.exhausted = true;
                break 'seeds;
            }
            let improved = last - fx > opts.f_tol * (1.0 + fx.abs());
            start = x;
            last = fx;
            if !improved {
                break;
            }
        }
    }
    best.evaluations = evals;
    Ok(best)
}

type Eval<'a> = dyn FnMut(&[f64], &mut usize, &mut MultiMin) -> f64 + 'a;

fn nelder_mead(
    eval: &mut Eval<'_>,
    start: &[f64],
    opts: &MultistartOptions,
    evals: &mut usize,
    best: &mut MultiMin,
) -> (Vec<f64>, f64, bool) {
    let m = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(m + 1);
    let f0 = eval(start, evals, best);
    simplex.push((start.to_vec(), f0));
    for i in 0..m {
        let mut x = start.to_vec();
        x[i] += opts.initial_step * x[i].abs().max(1.0);
        let fx = eval(&x, evals, best);
        simplex.push((x, fx));
    }
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let lo = simplex[0].1;
        let hi = simplex[m].1;
        let spread = (hi - lo).abs();
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (spread <= opts.f_tol * (1.0 + lo.abs()) && size < 1e-6) || size < 1e-13 {
            return (simplex[0].0.clone(), lo, false);
        }
        if *evals >= opts.max_evaluations {
            return (simplex[0].0.clone(), lo, true);
        }
        let mut centroid = vec![0.0; m];
        for (x, _) in &simplex[..m] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / m as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[m].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr, evals, best);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe, evals, best);
            simplex[m] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[m - 1].1 {
            simplex[m] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[m].1 {
                let xc = along(0.5);
                let fc = eval(&xc, evals, best);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc, evals, best);
                (xc, fc)
            };
            if fc < simplex[m].1.min(fr) {
                simplex[m] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = entry.0.iter().zip(&x0).map(|(v, b)| b + 0.5 * (v - b)).collect();
                    let fx = eval(&x, evals, best);
                    *entry = (x, fx);
                }
            }
        }
    }
}
