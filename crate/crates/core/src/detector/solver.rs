//! Minimum-trace PPT detector:
//!
//! minimize `tr M` subject to `0 ≤ M ≤ I`, `M^Γ ≥ 0`, `tr(ψM) ≥ 1 − ε`.
//!
//! Consensus ADMM over three copies of `M`. The trace term sits in the box
//! prox, which becomes a shifted eigenvalue clip. The PT cone and the
//! fidelity half-space have closed-form projections. The final iterate is
//! repaired: a fidelity deficit is closed by moving toward `P + QMQ`
//! (`Q = I − P`), then PT negativity is removed by mixing with `I`.

use serde::Serialize;

use super::PovmElement;
use crate::error::{Error, Result};
use crate::optimize::clip_spectrum;
use crate::tensor::{
    eigvalsh, expectation, hermitian_part, partial_transpose, trace_re, CMat, PureStateVector,
    C64,
};

/// Largest `d_B·d_C` the solver accepts.
pub const MAX_SOLVER_DIM: usize = 16;
/// Fidelity deficit the repair step tolerates.
const FIDELITY_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Primal and dual residual target (Frobenius).
    pub tolerance: f64,
    /// Initial penalty; adapted by residual balancing.
    pub rho: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 20_000,
            tolerance: 1e-8,
            rho: 1.0,
        }
    }
}

/// Constraint violations of the returned element, all nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityResiduals {
    /// `max(0, −λ_min(M))`.
    pub negativity: f64,
    /// `max(0, λ_max(M) − 1)`.
    pub excess: f64,
    /// `max(0, −λ_min(M^Γ))`.
    pub pt_negativity: f64,
    /// `max(0, 1 − ε − tr(ψM))`.
    pub fidelity_deficit: f64,
}

impl FeasibilityResiduals {
    pub fn max(&self) -> f64 {
        self.negativity
            .max(self.excess)
            .max(self.pt_negativity)
            .max(self.fidelity_deficit)
    }
}

#[derive(Debug, Clone)]
pub struct DetectorSolution {
    pub element: PovmElement,
    pub trace: f64,
    pub residuals: FeasibilityResiduals,
    pub iterations: usize,
    pub converged: bool,
    /// Weight `s` of the final mix `(1 − s)M + sI`.
    pub repair_weight: f64,
}

fn residuals(m: &CMat, psi: &PureStateVector, epsilon: f64) -> Result<FeasibilityResiduals> {
    let shape = psi.require_shape()?;
    let eig = eigvalsh(m);
    let pt = eigvalsh(&partial_transpose(m, shape)?);
    Ok(FeasibilityResiduals {
        negativity: (-eig[0]).max(0.0),
        excess: (eig[eig.len() - 1] - 1.0).max(0.0),
        pt_negativity: (-pt[0]).max(0.0),
        fidelity_deficit: (1.0 - epsilon - expectation(m, psi.amplitudes())).max(0.0),
    })
}

/// Solves the detector program for `psi` at error `epsilon`.
pub fn min_trace_ppt_detector(
    psi: &PureStateVector,
    epsilon: f64,
    cfg: &SolverConfig,
) -> Result<DetectorSolution> {
    let shape = psi.require_shape()?;
    let n = shape.total();
    if n > MAX_SOLVER_DIM {
        return Err(Error::Scale(format!(
            "detector solver limited to d_B·d_C ≤ {MAX_SOLVER_DIM}, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon {epsilon} outside [0, 1]")));
    }
    let target = 1.0 - epsilon;
    let proj = psi.projector();
    let v = psi.amplitudes();
    let ident = CMat::identity(n, n);

    let q = &ident - &proj;
    // at ε = 0 feasibility forces Mψ = ψ, so the box is replaced by {P + QNQ : 0 ≤ N ≤ I}
    let exact = epsilon == 0.0;
    let prox_box = |m: &CMat, rho: f64| {
        let shifted = m - &ident * C64::from(1.0 / rho);
        if exact {
            &proj + clip_spectrum(&hermitian_part(&(&q * shifted * &q)), 0.0, 1.0)
        } else {
            clip_spectrum(&shifted, 0.0, 1.0)
        }
    };
    let proj_pt = |m: &CMat| -> CMat {
        let pt = partial_transpose(m, shape).expect("shape fixed");
        let clipped = clip_spectrum(&pt, 0.0, f64::INFINITY);
        partial_transpose(&clipped, shape).expect("shape fixed")
    };
    let proj_fid = |m: &CMat| -> CMat {
        let f = expectation(m, v);
        if f >= target {
            m.clone()
        } else {
            m + &proj * C64::from(target - f)
        }
    };

    let mut rho = cfg.rho;
    let mut z = &ident * C64::from(0.5);
    let mut us = [CMat::zeros(n, n), CMat::zeros(n, n), CMat::zeros(n, n)];
    let mut iterations = 0;
    let mut converged = false;
    for it in 1..=cfg.max_iters {
        iterations = it;
        let xs = [
            prox_box(&(&z - &us[0]), rho),
            proj_pt(&(&z - &us[1])),
            proj_fid(&(&z - &us[2])),
        ];
        let z_prev = z;
        z = hermitian_part(
            &((&xs[0] + &us[0] + &xs[1] + &us[1] + &xs[2] + &us[2]) * C64::from(1.0 / 3.0)),
        );
        let mut primal = 0.0;
        for (u, x) in us.iter_mut().zip(&xs) {
            let r = x - &z;
            primal += r.norm_squared();
            *u += r;
        }
        let primal = primal.sqrt();
        let dual = rho * 3f64.sqrt() * (&z - &z_prev).norm();
        if primal < cfg.tolerance && dual < cfg.tolerance {
            converged = true;
            break;
        }
        if it % 10 == 0 {
            let scale = if primal > 10.0 * dual {
                2.0
            } else if dual > 10.0 * primal {
                0.5
            } else {
                1.0
            };
            if scale != 1.0 {
                rho *= scale;
                for u in us.iter_mut() {
                    *u /= C64::from(scale);
                }
            }
        }
    }

    // exact box and PT feasibility, fidelity up to FIDELITY_SLACK
    let m0 = clip_spectrum(&z, 0.0, 1.0);
    let fid = expectation(&m0, v);
    let m1 = if fid < target && fid < 1.0 {
        // P + QMQ has fidelity one and spectrum in [0, 1]
        let lifted = &proj + &q * &m0 * &q;
        let t = ((target - fid) / (1.0 - fid)).min(1.0);
        hermitian_part(&(&m0 * C64::from(1.0 - t) + lifted * C64::from(t)))
    } else {
        m0
    };
    let lam = eigvalsh(&partial_transpose(&m1, shape)?)[0];
    let mut s: f64 = 0.0;
    if lam < 0.0 {
        s = -lam / (1.0 - lam);
    }
    let fid1 = expectation(&m1, v);
    if fid1 < target - FIDELITY_SLACK {
        s = s.max((target - FIDELITY_SLACK - fid1) / (1.0 - fid1));
    }
    let s = s.min(1.0);
    let m = hermitian_part(&(&m1 * C64::from(1.0 - s) + &ident * C64::from(s)));
    let res = residuals(&m, psi, epsilon)?;
    let trace = trace_re(&m);
    let element = PovmElement::new(m, shape)?.certified();
    Ok(DetectorSolution {
        element,
        trace,
        residuals: res,
        iterations,
        converged,
        repair_weight: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::tensor::{random_bipartite_pure, random_pure_state, schmidt_decompose, BipartiteShape};

    #[test]
    fn product_target_needs_trace_one() {
        let mut rng = stream_rng(10, 0);
        let psi = PureStateVector::product(&random_pure_state(&mut rng, 2), &random_pure_state(&mut rng, 2));
        let sol = min_trace_ppt_detector(&psi, 0.0, &SolverConfig::default()).unwrap();
        assert!((sol.trace - 1.0).abs() < 1e-4, "{}", sol.trace);
        assert!(sol.residuals.max() <= 1e-6);
    }

    #[test]
    fn maximally_entangled_target_needs_schmidt_rank() {
        let psi = PureStateVector::maximally_entangled(2);
        let sol = min_trace_ppt_detector(&psi, 0.0, &SolverConfig::default()).unwrap();
        assert!((sol.trace - 2.0).abs() < 1e-6, "{}", sol.trace);
        assert!(sol.residuals.max() <= 1e-6);
    }

    #[test]
    fn value_nonincreasing_in_epsilon() {
        let mut rng = stream_rng(11, 0);
        let psi = random_bipartite_pure(&mut rng, BipartiteShape::new(2, 3).unwrap());
        let mut last = f64::INFINITY;
        for eps in [0.0, 0.05, 0.1, 0.2] {
            let sol = min_trace_ppt_detector(&psi, eps, &SolverConfig::default()).unwrap();
            assert!(sol.trace <= last + 1e-5, "eps {eps}: {} > {last}", sol.trace);
            last = sol.trace;
        }
    }

    #[test]
    fn rejects_large_systems() {
        let psi = PureStateVector::maximally_entangled(5);
        assert!(matches!(
            min_trace_ppt_detector(&psi, 0.0, &SolverConfig::default()),
            Err(Error::Scale(_))
        ));
    }

    #[test]
    fn zero_error_optimum_is_squared_root_fidelity_sum() {
        // oracle: at ε = 0 the optimum is (Σ_j √λ_j)²
        for (b, c) in [(2, 2), (2, 3), (3, 3), (2, 4)] {
            for i in 0..3 {
                let mut rng = stream_rng(99, i);
                let psi = random_bipartite_pure(&mut rng, BipartiteShape::new(b, c).unwrap());
                let sol = min_trace_ppt_detector(&psi, 0.0, &SolverConfig::default()).unwrap();
                let lam = schmidt_decompose(&psi).unwrap().coefficients;
                let oracle = lam.iter().map(|l| l.sqrt()).sum::<f64>().powi(2);
                assert!(sol.converged, "{b}x{c} #{i}");
                assert!((sol.trace - oracle).abs() < 1e-6, "{b}x{c} #{i}: {} vs {oracle}", sol.trace);
            }
        }
    }
}
