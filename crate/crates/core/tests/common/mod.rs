#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpckn::modal::{lower_bound, ModeParams};

/// Balanced (`t = 2`) mode parameters drawn from `n ∈ 1..=6`, `α ∈ (−0.9, 2)`,
/// `β ∈ (−3, 3)`, kept when the weights are integrable, the extremal is
/// well defined and the closed-form bound exists for every `k ≤ k_max`.
pub fn random_mode_tuples(count: usize, seed: u64, k_max: u32) -> Vec<ModeParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=6u32);
        let alpha: f64 = rng.gen_range(-0.9..2.0);
        let beta: f64 = rng.gen_range(-3.0..3.0);
        let p = ModeParams::balanced(n, alpha, beta);
        let nf = n as f64;
        let valid = nf - 2.0 * alpha > 0.0
            && nf - beta > 0.0
            && nf - 2.0 * p.gamma > 0.0
            && 1.0 + alpha - beta / 2.0 > 0.0
            && nf + 2.0 * alpha > 0.0;
        if valid && (0..=k_max).all(|k| lower_bound(&p, k).is_ok()) {
            out.push(p);
        }
    }
    out
}

/// Gauss rule for the standard normal measure: nodes are the roots of the
/// orthonormal polynomial of degree `m`, bracketed on a fine grid and
/// polished by Newton; weights are the Christoffel numbers.
pub fn gauss_normal_rule(m: usize) -> Vec<(f64, f64)> {
    // orthonormal recurrence, returns (p_m, p_{m−1}, Σ_{k<m} p_k²)
    let eval = |x: f64| {
        let (mut prev, mut cur, mut sum) = (0.0, 1.0, 0.0);
        for k in 0..m {
            sum += cur * cur;
            let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
            prev = cur;
            cur = next;
        }
        (cur, prev, sum)
    };
    let bound = (4.0 * m as f64 + 2.0).sqrt() + 1.0;
    let steps = 20_000;
    let mut nodes = Vec::with_capacity(m);
    let mut a = -bound;
    let mut fa = eval(a).0;
    for s in 1..=steps {
        let b = -bound + 2.0 * bound * s as f64 / steps as f64;
        let fb = eval(b).0;
        if fa.signum() != fb.signum() {
            let mut x = 0.5 * (a + b);
            for _ in 0..50 {
                let (p, q, _) = eval(x);
                let dx = p / ((m as f64).sqrt() * q);
                x -= dx;
                if dx.abs() < 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            nodes.push(x);
        }
        a = b;
        fa = fb;
    }
    assert_eq!(nodes.len(), m, "root bracketing missed a node");
    nodes.into_iter().map(|x| (x, 1.0 / eval(x).2)).collect()
}

/// Independent Hermite values `He_i(t)`.
pub fn he(i: u32, t: f64) -> f64 {
    let (mut a, mut b) = (1.0, t);
    if i == 0 {
        return a;
    }
    for k in 1..i {
        let c = t * b - k as f64 * a;
        a = b;
        b = c;
    }
    b
}

pub fn fact(i: u32) -> f64 {
    (1..=i).map(|k| k as f64).product()
}
