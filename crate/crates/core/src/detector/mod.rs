//! PPT detector analysis: how small can the trace of a PPT POVM element be
//! if it must accept a highly entangled pure state?
//!
//! For a pure state `φ` on `d_B × d_C` (`d_B ≤ d_C`) with
//! `E(φ) ≥ log d_B − Δ` and a PPT element `M` with `tr(φM) ≥ 1 − ε`:
//!
//! - `tr M ≥ (1 − ε − √2·Δ^{1/4})·d_B`
//! - `tr M ≥ (1 − ε − √((Δ+1)/log K))·d_B/K` for every `K > 1`.

mod solver;

pub use solver::{
    min_trace_ppt_detector, DetectorSolution, FeasibilityResiduals, SolverConfig, MAX_SOLVER_DIM,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{entanglement_e, entropy_of_spectrum, pure_fidelity, relative_entropy};
use crate::optimize::golden_section_min;
use crate::tensor::{
    eigvalsh, expectation, hermitian_part, hermiticity_deviation, is_ppt, partial_trace,
    schmidt_decompose, trace_re, BipartiteShape, CMat, CVec, DensityOperator, PptCheck,
    PureStateVector, SchmidtDecomposition, Subsystem, C64,
};
use crate::tolerance::{TAU_ENT, TAU_HERM, TAU_PSD};

/// Operator with `0 ≤ M ≤ I`, optionally carrying `min eig(M^Γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmElement {
    matrix: CMat,
    shape: BipartiteShape,
    ppt_certificate: Option<f64>,
}

impl PovmElement {
    pub fn new(matrix: CMat, shape: BipartiteShape) -> Result<Self> {
        if matrix.nrows() != shape.total() || matrix.ncols() != shape.total() {
            return Err(Error::Dimension(format!(
                "element is {}x{}, shape needs {}",
                matrix.nrows(),
                matrix.ncols(),
                shape.total()
            )));
        }
        let herm = hermiticity_deviation(&matrix);
        if herm > TAU_HERM {
            return Err(Error::InvalidPovmElement(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let matrix = hermitian_part(&matrix);
        let eig = eigvalsh(&matrix);
        if eig[0] < -TAU_PSD || eig[eig.len() - 1] > 1.0 + TAU_PSD {
            return Err(Error::InvalidPovmElement(format!(
                "spectrum [{:e}, {}] outside [0, 1]",
                eig[0],
                eig[eig.len() - 1]
            )));
        }
        Ok(Self {
            matrix,
            shape,
            ppt_certificate: None,
        })
    }

    /// Attaches `min eig(M^Γ)`.
    pub fn certified(mut self) -> Self {
        let check = self.ppt_check(0.0);
        self.ppt_certificate = Some(check.min_eigenvalue);
        self
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn ppt_certificate(&self) -> Option<f64> {
        self.ppt_certificate
    }

    pub fn ppt_check(&self, tol: f64) -> PptCheck {
        is_ppt(&self.matrix, self.shape, tol).expect("shape checked at construction")
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.matrix)
    }

    /// `tr(ψM)`.
    pub fn acceptance(&self, psi: &PureStateVector) -> f64 {
        expectation(&self.matrix, psi.amplitudes())
    }
}

/// Parameters of a detection event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorParams {
    /// `1 − tr(φM)`.
    pub epsilon: f64,
    /// Entanglement deficit `log d_B − E(φ)`, in bits.
    pub delta_cap: f64,
    pub k_factor: f64,
    pub q_mass: f64,
}

impl DetectorParams {
    pub fn new(epsilon: f64, delta_cap: f64, k_factor: f64, q_mass: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Domain(format!("epsilon {epsilon} outside [0, 1]")));
        }
        if !(delta_cap >= 0.0) {
            return Err(Error::Domain(format!("negative deficit {delta_cap}")));
        }
        if !(k_factor > 1.0) {
            return Err(Error::Domain(format!("K = {k_factor} must exceed 1")));
        }
        if !(0.0..=1.0).contains(&q_mass) {
            return Err(Error::Domain(format!("tail mass {q_mass} outside [0, 1]")));
        }
        Ok(Self {
            epsilon,
            delta_cap,
            k_factor,
            q_mass,
        })
    }
}

/// `max(0, (1 − ε − √2·Δ^{1/4})·d_B)`.
pub fn detector_bound_small_delta(d_b: usize, epsilon: f64, delta_cap: f64) -> f64 {
    let factor = 1.0 - epsilon - std::f64::consts::SQRT_2 * delta_cap.max(0.0).powf(0.25);
    (factor * d_b as f64).max(0.0)
}

/// `(1 − ε − √((Δ+1)/log K))·d_B/K`, unclamped.
pub fn detector_bound_large_delta(
    d_b: usize,
    epsilon: f64,
    delta_cap: f64,
    k_factor: f64,
) -> Result<f64> {
    if !(k_factor > 1.0) {
        return Err(Error::Domain(format!("K = {k_factor} must exceed 1")));
    }
    let factor = 1.0 - epsilon - ((delta_cap + 1.0) / k_factor.log2()).sqrt();
    Ok(factor * d_b as f64 / k_factor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorBoundKind {
    SmallDelta,
    LargeDelta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorBoundChoice {
    pub small_delta: f64,
    /// Best value of the `K` family (clamped at zero).
    pub large_delta: f64,
    /// Maximizing `K`, absent when the whole family is vacuous.
    pub k_opt: Option<f64>,
    pub best: f64,
    pub chosen: DetectorBoundKind,
}

/// Maximizes the `K` family over `K > 1`. With `t = log K` the logarithm of
/// the bound is concave on the region where it is positive, `t > c/a²`
/// (`a = 1 − ε`, `c = Δ + 1`), so a golden-section search suffices.
pub fn optimal_large_delta(d_b: usize, epsilon: f64, delta_cap: f64) -> (Option<f64>, f64) {
    let a = 1.0 - epsilon;
    if a <= 0.0 {
        return (None, 0.0);
    }
    let c = delta_cap.max(0.0) + 1.0;
    let t0 = c / (a * a);
    let value_at = |t: f64| (a - (c / t).sqrt()) * d_b as f64 * (-t).exp2();
    let (t, _) = golden_section_min(|t| -value_at(t), t0, t0 + 64.0, 1e-12, 500);
    let v = value_at(t);
    if v > 0.0 {
        (Some(t.exp2()), v)
    } else {
        (None, 0.0)
    }
}

/// Larger of the two lemma bounds.
pub fn detector_bound_best(d_b: usize, epsilon: f64, delta_cap: f64) -> DetectorBoundChoice {
    let small_delta = detector_bound_small_delta(d_b, epsilon, delta_cap);
    let (k_opt, large_delta) = optimal_large_delta(d_b, epsilon, delta_cap);
    let (best, chosen) = if small_delta >= large_delta {
        (small_delta, DetectorBoundKind::SmallDelta)
    } else {
        (large_delta, DetectorBoundKind::LargeDelta)
    };
    DetectorBoundChoice {
        small_delta,
        large_delta,
        k_opt,
        best,
        chosen,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailMass {
    /// `Σ {λ_j : λ_j > K/d_B}`.
    pub q: f64,
    /// `log d_B − H(λ)`.
    pub delta_cap: f64,
    /// `(Δ + 1)/log K`.
    pub bound: f64,
    pub holds: bool,
}

/// Schmidt weight above the flat level `K/d_B` and its entropic bound.
pub fn schmidt_tail_mass(
    schmidt: &SchmidtDecomposition,
    d_b: usize,
    k_factor: f64,
) -> Result<TailMass> {
    if !(k_factor > 1.0) {
        return Err(Error::Domain(format!("K = {k_factor} must exceed 1")));
    }
    let threshold = k_factor / d_b as f64;
    // strict inequality: ties at the threshold are excluded
    let q: f64 = schmidt
        .coefficients
        .iter()
        .filter(|&&l| l > threshold)
        .sum();
    let delta_cap = ((d_b as f64).log2() - entropy_of_spectrum(&schmidt.coefficients)).max(0.0);
    let bound = (delta_cap + 1.0) / k_factor.log2();
    Ok(TailMass {
        q,
        delta_cap,
        bound,
        holds: q <= bound + TAU_ENT,
    })
}

#[derive(Debug, Clone)]
pub struct Truncation {
    pub state: PureStateVector,
    pub q: f64,
    /// `|⟨ψ|ψ̃⟩|²`, equal to `1 − q`.
    pub fidelity: f64,
    /// `½‖ψ − ψ̃‖₁`, at most `√q`.
    pub trace_distance: f64,
}

/// Removes the Schmidt coefficients above `K/d_B` and renormalizes.
pub fn truncate_state(psi: &PureStateVector, d_b: usize, k_factor: f64) -> Result<Truncation> {
    if !(k_factor > 1.0) {
        return Err(Error::Domain(format!("K = {k_factor} must exceed 1")));
    }
    let schmidt = schmidt_decompose(psi)?;
    let threshold = k_factor / d_b as f64;
    let mut v = CVec::zeros(psi.dim());
    let mut kept = 0.0;
    let mut q = 0.0;
    for ((&lam, u), w) in schmidt
        .coefficients
        .iter()
        .zip(&schmidt.left_vectors)
        .zip(&schmidt.right_vectors)
    {
        if lam <= threshold {
            v += u.kronecker(w) * C64::from(lam.sqrt());
            kept += lam;
        } else {
            q += lam;
        }
    }
    if kept <= 0.0 || v.norm() == 0.0 {
        return Err(Error::DegenerateTruncation);
    }
    let state = PureStateVector::normalized(v)?.with_shape(schmidt.shape)?;
    let fidelity = pure_fidelity(psi, &state);
    let trace_distance = (1.0 - fidelity).max(0.0).sqrt();
    Ok(Truncation {
        state,
        q,
        fidelity,
        trace_distance,
    })
}

#[derive(Debug, Clone)]
pub struct NearestMaximallyEntangled {
    pub state: PureStateVector,
    /// `|⟨ψ|φ̂⟩|²`, equal to `(Σ_j √(λ_j/d_B))²`.
    pub fidelity: f64,
    /// `D(tr_C ψ ‖ I/d_B) = log d_B − E(ψ)`.
    pub relative_entropy_deficit: f64,
    /// `(1 − min(1, √D))²`.
    pub fidelity_floor: f64,
    pub holds: bool,
}

/// Maximally entangled state in the Schmidt bases of `psi`.
pub fn nearest_maximally_entangled(
    psi: &PureStateVector,
    d_b: usize,
) -> Result<NearestMaximallyEntangled> {
    let shape = psi.require_shape()?;
    if shape.dim_b != d_b || d_b > shape.dim_c {
        return Err(Error::Dimension(format!(
            "needs d_B = {d_b} to match the state and not exceed d_C = {}",
            shape.dim_c
        )));
    }
    let schmidt = schmidt_decompose(psi)?;
    let amp = C64::from(1.0 / (d_b as f64).sqrt());
    let mut v = CVec::zeros(shape.total());
    for (u, w) in schmidt.left_vectors.iter().zip(&schmidt.right_vectors) {
        v += u.kronecker(w) * amp;
    }
    let state = PureStateVector::normalized(v)?.with_shape(shape)?;
    let fidelity = pure_fidelity(psi, &state);

    let rho_b = partial_trace(&DensityOperator::from_pure(psi), Subsystem::B)?;
    let relative_entropy_deficit =
        relative_entropy(&rho_b, &DensityOperator::maximally_mixed(d_b))?;
    let fidelity_floor = (1.0 - relative_entropy_deficit.sqrt().min(1.0)).powi(2);
    Ok(NearestMaximallyEntangled {
        state,
        fidelity,
        relative_entropy_deficit,
        fidelity_floor,
        holds: fidelity >= fidelity_floor - TAU_ENT,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorLemmaReport {
    pub trace: f64,
    pub epsilon: f64,
    pub delta_cap: f64,
    pub bounds: DetectorBoundChoice,
    /// `tr M` minus the small-Δ bound.
    pub slack_small_delta: f64,
    /// `tr M` minus the optimized `K` bound.
    pub slack_large_delta: f64,
    pub holds: bool,
}

/// Checks both lemma bounds for the pair `(ψ, M)`. The smaller tensor factor
/// plays the role of `B`.
pub fn verify_detector_lemma(psi: &PureStateVector, m: &PovmElement) -> Result<DetectorLemmaReport> {
    let shape = psi.require_shape()?;
    if shape != m.shape() {
        return Err(Error::Dimension("state and element shapes differ".into()));
    }
    let min_pt = match m.ppt_certificate() {
        Some(v) => v,
        None => m.ppt_check(0.0).min_eigenvalue,
    };
    if min_pt < -TAU_PSD {
        return Err(Error::Inapplicable(format!(
            "element is not PPT (min eigenvalue of partial transpose {min_pt:e})"
        )));
    }
    let d = shape.min_dim();
    let epsilon = 1.0 - m.acceptance(psi);
    let delta_cap = ((d as f64).log2() - entanglement_e(psi)?).max(0.0);
    let bounds = detector_bound_best(d, epsilon.max(0.0), delta_cap);
    let trace = m.trace();
    let slack_small_delta = trace - bounds.small_delta;
    let slack_large_delta = trace - bounds.large_delta;
    Ok(DetectorLemmaReport {
        trace,
        epsilon,
        delta_cap,
        bounds,
        slack_small_delta,
        slack_large_delta,
        holds: slack_small_delta >= -TAU_ENT && slack_large_delta >= -TAU_ENT,
    })
}
