use serde::Serialize;

use crate::error::{Error, Result};

/// Exponents of a second-order weighted inequality in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityParams {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub t: f64,
}

impl InequalityParams {
    pub fn new(n: u32, alpha: f64, beta: f64, gamma: f64, t: f64) -> Self {
        Self {
            n,
            alpha,
            beta,
            gamma,
            t,
        }
    }

    /// Parameters with `γ` fixed by the dilation balance.
    pub fn balanced(n: u32, alpha: f64, beta: f64, t: f64) -> Self {
        Self::new(n, alpha, beta, balanced_gamma(alpha, beta, t), t)
    }

    /// `((n + t(1 + 2α − γ)) / t)²`.
    pub fn sharp_constant(&self) -> f64 {
        let k = (self.n as f64 + self.t * (1.0 + 2.0 * self.alpha - self.gamma)) / self.t;
        k * k
    }
}

pub fn balanced_gamma(alpha: f64, beta: f64, t: f64) -> f64 {
    (1.0 + alpha) / t + beta / (2.0 * t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub condition: &'static str,
    /// Signed slack; positive means satisfied.
    pub margin: f64,
    pub passed: bool,
    /// Needed for the inequality itself; otherwise it only governs whether
    /// the extremal profile exists.
    pub required: bool,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub params: InequalityParams,
    pub checks: Vec<ConditionCheck>,
}

impl ValidityReport {
    pub fn basic_ok(&self) -> bool {
        self.checks.iter().filter(|c| c.required).all(|c| c.passed)
    }

    pub fn sharpness_ok(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| !c.required && c.applicable)
            .all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `Err(InvalidParameter)` naming every failed required condition.
    pub fn require_basic(&self) -> Result<()> {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| c.required && !c.passed)
            .map(|c| format!("{} fails (margin {:.6e})", c.condition, c.margin))
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(failed.join("; ")))
        }
    }
}

const BALANCE_TOL: f64 = 1e-14;

/// Evaluates every integrability, balance and extremal-existence condition.
pub fn validate_params(p: &InequalityParams) -> ValidityReport {
    let n = p.n as f64;
    let (a, b, g, t) = (p.alpha, p.beta, p.gamma, p.t);
    let kappa = 1.0 + a - b / 2.0;
    let mut checks = Vec::new();
    let mut push = |name: &'static str, condition: &'static str, margin: f64, required: bool, applicable: bool| {
        checks.push(ConditionCheck {
            name,
            condition,
            margin,
            passed: !applicable || margin > 0.0,
            required,
            applicable,
        })
    };
    push("dimension", "n >= 1", n - 0.5, true, true);
    push("exponent_t", "t >= 2", t - 2.0 + 0.5 * f64::EPSILON, true, true);
    push("laplacian_weight", "n - 2*alpha > 0", n - 2.0 * a, true, true);
    push("gradient_weight", "n - beta > 0", n - b, true, true);
    push("mixed_weight", "n - t*gamma > 0", n - t * g, true, true);
    let dev = (g - balanced_gamma(a, b, t)).abs();
    push(
        "balance",
        "gamma = (1+alpha)/t + beta/(2t)",
        BALANCE_TOL - dev,
        true,
        true,
    );
    push(
        "extremal_exponent",
        "(1+2*alpha)(t-2) + 1 + alpha - beta/2 > 0",
        (1.0 + 2.0 * a) * (t - 2.0) + kappa,
        false,
        true,
    );
    push(
        "extremal_bounded",
        "t < 3 + alpha - beta/2",
        3.0 + a - b / 2.0 - t,
        false,
        true,
    );
    push("laplacian_admissible", "n + 2*alpha > 0", n + 2.0 * a, false, true);
    let tail = if t > 2.0 {
        2.0 * (t - 1.0) / (t - 2.0) * kappa - (n - b)
    } else {
        f64::INFINITY
    };
    push(
        "extremal_energy",
        "n - beta < 2(t-1)/(t-2) (1 + alpha - beta/2) for t > 2",
        tail,
        false,
        t > 2.0,
    );
    ValidityReport { params: *p, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hydrogen_parameters_pass() {
        let r = validate_params(&InequalityParams::new(3, 0.0, 0.0, 0.5, 2.0));
        assert!(r.basic_ok());
        assert!(r.sharpness_ok());
        assert_eq!(InequalityParams::new(3, 0.0, 0.0, 0.5, 2.0).sharp_constant(), 4.0);
    }

    #[test]
    fn cubic_extremal_conditions() {
        let r = validate_params(&InequalityParams::new(3, 0.0, -1.0, 0.5, 3.0));
        assert!(r.get("extremal_bounded").unwrap().passed);
        assert_eq!(r.get("extremal_bounded").unwrap().margin, 0.5);
        let tail = r.get("extremal_energy").unwrap();
        assert!(tail.passed);
        assert_eq!(tail.margin, 6.0 - 4.0);
        // gamma = 1/2 is off the balance line for these exponents
        assert!(!r.get("balance").unwrap().passed);
        assert!(validate_params(&InequalityParams::balanced(3, 0.0, -1.0, 3.0)).basic_ok());
    }

    #[test]
    fn weight_failure_is_named() {
        let r = validate_params(&InequalityParams::new(1, 1.0, 0.0, 1.0, 2.0));
        assert!(!r.get("laplacian_weight").unwrap().passed);
        let msg = r.require_basic().unwrap_err().to_string();
        assert!(msg.contains("n - 2*alpha > 0"), "{msg}");
    }
}
