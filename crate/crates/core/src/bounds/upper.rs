//! Upper bounds on PPT-decodable code sizes and on `C_A^ppt`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::golden_section_min;

/// Tag carried by bounds that assume superadditivity of the entanglement of
/// formation.
pub const CONDITIONAL_TAG: &str = "conditional-on-superadditivity";
/// Upper end of the γ search interval.
pub const GAMMA_MAX: f64 = 64.0;

/// Validated `(ε, δ, γ, Δ_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundParams {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub deltas: Vec<f64>,
}

impl BoundParams {
    pub fn new(epsilon: f64, delta: f64, gamma: f64, deltas: Vec<f64>) -> Result<Self> {
        check_epsilon(epsilon)?;
        check_deficit("delta", delta)?;
        check_gamma(epsilon, gamma)?;
        for (i, &d) in deltas.iter().enumerate() {
            check_deficit(&format!("deltas[{i}]"), d)?;
        }
        Ok(Self {
            epsilon,
            delta,
            gamma,
            deltas,
        })
    }

    /// `K_i = 2^{γ(Δ_i + 1)}`.
    pub fn k_factors(&self) -> Vec<f64> {
        self.deltas
            .iter()
            .map(|d| (self.gamma * (d + 1.0)).exp2())
            .collect()
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon {epsilon} outside [0, 1)")));
    }
    Ok(())
}

fn check_deficit(name: &str, value: f64) -> Result<()> {
    if !(value >= 0.0) {
        return Err(Error::Domain(format!("{name} = {value} must be nonnegative")));
    }
    Ok(())
}

fn check_gamma(epsilon: f64, gamma: f64) -> Result<f64> {
    let lo = 1.0 / (1.0 - epsilon).powi(2);
    if !(gamma > lo) {
        return Err(Error::Domain(format!(
            "requires gamma > 1/(1-epsilon)^2 = {lo}, got {gamma}"
        )));
    }
    Ok(lo)
}

/// `d_C / (1 − ε − √2·δ^{1/4})`.
pub fn upper_bound_thm4(d_b: usize, d_c: usize, epsilon: f64, delta: f64) -> Result<f64> {
    if d_b == 0 || d_b > d_c {
        return Err(Error::Dimension(format!("requires 1 ≤ d_B ≤ d_C, got {d_b}, {d_c}")));
    }
    check_epsilon(epsilon)?;
    check_deficit("delta", delta)?;
    let denom = 1.0 - epsilon - std::f64::consts::SQRT_2 * delta.powf(0.25);
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "requires epsilon + sqrt(2)*delta^(1/4) < 1, got {}",
            1.0 - denom
        )));
    }
    Ok(d_c as f64 / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thm5Bound {
    /// `(1−ε−γ^{−1/2})^{−1} (mean_i 2^{−γ(Δ_i+1)})^{−1} d_C`.
    pub harmonic: f64,
    /// `(1−ε−γ^{−1/2})^{−1} 2^{mean_i γ(Δ_i+1)} d_C`.
    pub relaxed: f64,
    pub log2_harmonic: f64,
    pub log2_relaxed: f64,
}

fn thm5_logs(d_c: usize, epsilon: f64, gamma: f64, deltas: &[f64]) -> (f64, f64) {
    let prefactor = -(1.0 - epsilon - gamma.powf(-0.5)).log2() + (d_c as f64).log2();
    let exps: Vec<f64> = deltas.iter().map(|d| gamma * (d + 1.0)).collect();
    let n = exps.len() as f64;
    // −log₂ mean 2^{−x_i}, shifted by the smallest exponent for stability
    let x_min = exps.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean_shifted = exps.iter().map(|x| (x_min - x).exp2()).sum::<f64>() / n;
    let log_harmonic = x_min - mean_shifted.log2();
    let log_relaxed = exps.iter().sum::<f64>() / n;
    (prefactor + log_harmonic, prefactor + log_relaxed)
}

/// Both code-size forms at a given `γ > 1/(1−ε)²`.
pub fn upper_bound_thm5(
    d_b: usize,
    d_c: usize,
    epsilon: f64,
    gamma: f64,
    deltas: &[f64],
) -> Result<Thm5Bound> {
    if d_b == 0 || d_b > d_c {
        return Err(Error::Dimension(format!("requires 1 ≤ d_B ≤ d_C, got {d_b}, {d_c}")));
    }
    if deltas.is_empty() {
        return Err(Error::Domain("needs at least one signal deficit".into()));
    }
    let params = BoundParams::new(epsilon, 0.0, gamma, deltas.to_vec())?;
    let (lh, lr) = thm5_logs(d_c, params.epsilon, params.gamma, &params.deltas);
    Ok(Thm5Bound {
        harmonic: lh.exp2(),
        relaxed: lr.exp2(),
        log2_harmonic: lh,
        log2_relaxed: lr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thm5Optimum {
    pub gamma: f64,
    pub bound: Thm5Bound,
}

/// Minimizes the harmonic form over `γ ∈ (1/(1−ε)², GAMMA_MAX]`.
pub fn optimize_thm5_gamma(
    d_b: usize,
    d_c: usize,
    epsilon: f64,
    deltas: &[f64],
) -> Result<Thm5Optimum> {
    check_epsilon(epsilon)?;
    let lo = 1.0 / (1.0 - epsilon).powi(2);
    if lo >= GAMMA_MAX {
        return Err(Error::Domain(format!(
            "gamma interval ({lo}, {GAMMA_MAX}] is empty"
        )));
    }
    // the objective diverges at the open end; start just inside it
    let lo_open = lo * (1.0 + 1e-12) + 1e-12;
    let f = |g: f64| {
        upper_bound_thm5(d_b, d_c, epsilon, g, deltas)
            .map(|b| b.log2_harmonic)
            .unwrap_or(f64::INFINITY)
    };
    let (gamma, _) = golden_section_min(f, lo_open, GAMMA_MAX, 1e-10, 500);
    Ok(Thm5Optimum {
        gamma,
        bound: upper_bound_thm5(d_b, d_c, epsilon, gamma, deltas)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalBound {
    pub value: f64,
    pub tags: Vec<String>,
}

/// `log d_C + δ`, valid only under the superadditivity hypothesis.
pub fn upper_bound_cor6(d_c: usize, delta: f64) -> Result<ConditionalBound> {
    if d_c == 0 {
        return Err(Error::Dimension("d_C must be positive".into()));
    }
    check_deficit("delta", delta)?;
    Ok(ConditionalBound {
        value: (d_c as f64).log2() + delta,
        tags: vec![CONDITIONAL_TAG.to_string()],
    })
}
