//! Entropies, distances and fidelities, all in bits.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{
    coefficient_matrix, eigh, eigvalsh, hermitian_part, BipartiteShape,
    DensityOperator, PureStateVector, Subsystem, CMat,
};
use crate::tolerance::{SUPPORT_THRESHOLD, TAU_ENT, TAU_TR};

const LN2: f64 = std::f64::consts::LN_2;

/// `-x log2 x`, zero at and below zero.
#[inline]
pub fn eta(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of a (possibly unnormalized) spectrum; negative entries
/// count as zero and the result is never negative.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().map(|&x| eta(x)).sum::<f64>().max(0.0)
}

/// `H(q, 1-q)`.
pub fn binary_entropy(q: f64) -> f64 {
    eta(q) + eta(1.0 - q)
}

pub(crate) fn matrix_entropy(m: &CMat) -> f64 {
    entropy_of_spectrum(&eigvalsh(m))
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    matrix_entropy(rho.matrix())
}

/// Entropies `S(A), S(B), S(C)` of a tripartite pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyTriple {
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
}

impl EntropyTriple {
    pub fn new(s_a: f64, s_b: f64, s_c: f64) -> Self {
        Self { s_a, s_b, s_c }
    }

    /// `I(A:B) = S(A) + S(B) - S(C)`.
    pub fn mutual_information(&self) -> f64 {
        self.s_a + self.s_b - self.s_c
    }

    /// Nonnegativity, subadditivity and the triangle inequality within `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let Self { s_a, s_b, s_c } = *self;
        s_a >= -tol
            && s_b >= -tol
            && s_c >= -tol
            && s_a <= s_b + s_c + tol
            && (s_b - s_c).abs() <= s_a + tol
    }
}

/// Entropy of the reduced state of a bipartite pure state, computed on the
/// smaller factor.
pub fn entanglement_e(psi: &PureStateVector) -> Result<f64> {
    let shape = psi.require_shape()?;
    let side = if shape.dim_b <= shape.dim_c {
        Subsystem::B
    } else {
        Subsystem::C
    };
    entanglement_from_side(psi, side)
}

pub fn entanglement_from_side(psi: &PureStateVector, side: Subsystem) -> Result<f64> {
    let shape = psi.require_shape()?;
    Ok(vector_entanglement(psi.amplitudes(), shape, side))
}

pub(crate) fn vector_entanglement(
    v: &crate::tensor::CVec,
    shape: BipartiteShape,
    side: Subsystem,
) -> f64 {
    let psi = coefficient_matrix(v, shape);
    let reduced = match side {
        Subsystem::B => &psi * psi.adjoint(),
        Subsystem::C => psi.adjoint() * &psi,
    };
    matrix_entropy(&reduced)
}

fn check_same_dim(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// `D(ρ‖σ) = tr ρ(log ρ − log σ)`, `+∞` when ρ has weight outside the support
/// of σ.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let (p, a) = eigh(rho.matrix());
    let (q, b) = eigh(sigma.matrix());
    let overlaps = a.adjoint() * &b;
    let mut cross = 0.0;
    let mut outside = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi <= 0.0 {
            continue;
        }
        for (j, &qj) in q.iter().enumerate() {
            let w = pi * overlaps[(i, j)].norm_sqr();
            if qj < SUPPORT_THRESHOLD {
                outside += w;
            } else {
                cross -= w * qj.log2();
            }
        }
    }
    if outside > SUPPORT_THRESHOLD {
        return Ok(f64::INFINITY);
    }
    let d = -entropy_of_spectrum(&p) + cross;
    Ok(d.max(0.0))
}

/// Eigenvalues below this are rounding noise for the square roots taken in
/// `fidelity` (a `1e-16` eigenvalue would otherwise contribute `1e-8`).
const SQRT_CUTOFF: f64 = 1e-14;

/// `F(ρ,σ) = ‖√ρ√σ‖₁²`, clamped into `[0, 1]`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let (p, a) = eigh(rho.matrix());
    let (q, b) = eigh(sigma.matrix());
    let root = |x: f64| if x > SQRT_CUTOFF { x.sqrt() } else { 0.0 };
    // √ρ√σ = A diag(√p) (A*B) diag(√q) B*, same singular values as the core.
    let mut core = a.adjoint() * b;
    for i in 0..p.len() {
        for j in 0..q.len() {
            core[(i, j)] *= root(p[i]) * root(q[j]);
        }
    }
    let nuclear: f64 = core.singular_values().iter().sum();
    Ok((nuclear * nuclear).clamp(0.0, 1.0))
}

/// `|⟨φ|ψ⟩|²`.
pub fn pure_fidelity(phi: &PureStateVector, psi: &PureStateVector) -> f64 {
    phi.overlap(psi).norm_sqr()
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    Ok(trace_distance_matrix(rho.matrix(), sigma.matrix()))
}

pub(crate) fn trace_distance_matrix(a: &CMat, b: &CMat) -> f64 {
    let diff = hermitian_part(&(a - b));
    0.5 * eigvalsh(&diff).iter().map(|x| x.abs()).sum::<f64>()
}

/// `½‖φ − ψ‖₁ = √(1 − |⟨φ|ψ⟩|²)` for pure states.
pub fn pure_trace_distance(phi: &PureStateVector, psi: &PureStateVector) -> f64 {
    (1.0 - pure_fidelity(phi, psi)).max(0.0).sqrt()
}

/// Slacks of the Fuchs–van de Graaf and Pinsker inequalities for one pair.
/// Each slack is `right side − left side`; the inequality holds when the
/// slack is at least `-TAU_ENT`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricInequalityReport {
    pub trace_distance: f64,
    pub fidelity: f64,
    pub relative_entropy: f64,
    /// `½‖ρ−σ‖₁ − (1 − √F)`
    pub fvdg_lower_slack: f64,
    /// `√(1−F) − ½‖ρ−σ‖₁`
    pub fvdg_upper_slack: f64,
    /// `D(ρ‖σ) − (½‖ρ−σ‖₁)²`; `+∞` when `D` is infinite
    pub pinsker_slack: f64,
    pub fvdg_lower_holds: bool,
    pub fvdg_upper_holds: bool,
    pub pinsker_holds: bool,
}

impl MetricInequalityReport {
    pub fn all_hold(&self) -> bool {
        self.fvdg_lower_holds && self.fvdg_upper_holds && self.pinsker_holds
    }
}

pub fn verify_metric_inequalities(
    rho: &DensityOperator,
    sigma: &DensityOperator,
) -> Result<MetricInequalityReport> {
    let t = trace_distance(rho, sigma)?;
    let f = fidelity(rho, sigma)?;
    let d = relative_entropy(rho, sigma)?;
    let fvdg_lower_slack = t - (1.0 - f.sqrt());
    let fvdg_upper_slack = (1.0 - f).max(0.0).sqrt() - t;
    let pinsker_slack = if d.is_infinite() { f64::INFINITY } else { d - t * t };
    Ok(MetricInequalityReport {
        trace_distance: t,
        fidelity: f,
        relative_entropy: d,
        fvdg_lower_slack,
        fvdg_upper_slack,
        pinsker_slack,
        fvdg_lower_holds: fvdg_lower_slack >= -TAU_ENT,
        fvdg_upper_holds: fvdg_upper_slack >= -TAU_ENT,
        pinsker_holds: pinsker_slack >= -TAU_ENT,
    })
}

/// Shannon entropy of a distribution given as a slice.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    entropy_of_spectrum(probs)
}

/// `I(X:Y) = H(X) + H(Y) − H(X,Y)` for a joint distribution with rows
/// indexed by `X`.
pub fn shannon_mutual_information(joint: &DMatrix<f64>) -> Result<f64> {
    if let Some(bad) = joint.iter().find(|&&p| !(p >= -1e-15) || !p.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {bad}")));
    }
    let total: f64 = joint.iter().sum();
    if (total - 1.0).abs() > TAU_TR {
        return Err(Error::InvalidDistribution(format!("total mass {total}")));
    }
    let px: Vec<f64> = joint.row_iter().map(|r| r.sum()).collect();
    let py: Vec<f64> = joint.column_iter().map(|c| c.sum()).collect();
    let hxy = entropy_of_spectrum(joint.as_slice());
    Ok((shannon_entropy(&px) + shannon_entropy(&py) - hxy).max(0.0))
}

/// Converts a natural-log quantity to bits.
pub fn nats_to_bits(x: f64) -> f64 {
    x / LN2
}
