//! Environment-assisted quantum capacity `Q_A(N) = max_ρ min{S(ρ), S(N(ρ))}`.
//!
//! The objective is a minimum of two concave functions, so it is concave but
//! not smooth where the branches cross. It is maximized by projected
//! supergradient ascent over density operators with normalized steps of
//! length `c/√t`, from several random starts.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{adjoint_channel, StinespringIsometry};
use crate::error::Result;
use crate::metrics::matrix_entropy;
use crate::optimize::project_to_density;
use crate::rng::stream_rng;
use crate::tensor::{
    eigh, from_spectrum, random_density, random_pure_state, trace_re, CMat, DensityOperator,
    Subsystem, C64,
};
use crate::tolerance::TAU_OPT;

/// Eigenvalue floor inside `log ρ` for supergradients.
const LOG_FLOOR: f64 = 1e-12;
/// Branches closer than this are treated as tied.
const TIE_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityOptimizerConfig {
    pub starts: usize,
    pub max_iters: usize,
    /// Step length at iteration `t` is `step_scale / √t` (Frobenius norm).
    pub step_scale: f64,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for CapacityOptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 20,
            max_iters: 5000,
            step_scale: 0.1,
            seed: 0,
            tolerance: TAU_OPT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// `min{S(ρ*), S(N(ρ*))}` re-evaluated at the returned state.
    pub value: f64,
    pub state: DensityOperator,
    pub input_entropy: f64,
    pub output_entropy: f64,
    /// Best value reached by each start, in start order.
    pub start_values: Vec<f64>,
    /// At least two starts agree with the best value within the tolerance.
    pub converged: bool,
}

/// The two branches `S(ρ)` and `S(N(ρ))`.
pub fn objective_branches(u: &StinespringIsometry, rho: &CMat) -> Result<(f64, f64)> {
    let out = u.output_matrix(rho, Subsystem::B)?;
    Ok((matrix_entropy(rho), matrix_entropy(&out)))
}

/// `∇S(σ) = −log₂σ − I/ln2`, with the spectrum floored at `LOG_FLOOR`.
pub fn entropy_gradient(sigma: &CMat) -> CMat {
    let (vals, vecs) = eigh(sigma);
    let g: Vec<f64> = vals
        .iter()
        .map(|&x| -x.max(LOG_FLOOR).log2() - std::f64::consts::LOG2_E)
        .collect();
    from_spectrum(&g, &vecs)
}

/// Gradients of the input branch and of the output branch `N†(∇S(N(ρ)))`.
pub fn branch_gradients(u: &StinespringIsometry, rho: &CMat) -> Result<(CMat, CMat)> {
    let out = u.output_matrix(rho, Subsystem::B)?;
    let g_in = entropy_gradient(rho);
    let g_out = adjoint_channel(u, &entropy_gradient(&out))?;
    Ok((g_in, g_out))
}

fn traceless(mut g: CMat) -> CMat {
    let n = g.nrows();
    let shift = C64::from(trace_re(&g) / n as f64);
    for i in 0..n {
        g[(i, i)] -= shift;
    }
    g
}

fn ascend(
    u: &StinespringIsometry,
    start: CMat,
    cfg: &CapacityOptimizerConfig,
) -> Result<(f64, CMat)> {
    let mut rho = start;
    let (sa, sb) = objective_branches(u, &rho)?;
    let mut best = (sa.min(sb), rho.clone());
    for t in 1..=cfg.max_iters {
        let (sa, sb) = objective_branches(u, &rho)?;
        let value = sa.min(sb);
        if value > best.0 {
            best = (value, rho.clone());
        }
        let (g_in, g_out) = branch_gradients(u, &rho)?;
        let g = if (sa - sb).abs() <= TIE_BAND {
            (g_in + g_out) * C64::from(0.5)
        } else if sa < sb {
            g_in
        } else {
            g_out
        };
        let g = traceless(g);
        let norm = g.norm();
        if norm < 1e-14 {
            break;
        }
        let step = cfg.step_scale / (t as f64).sqrt();
        rho = project_to_density(&(rho + g * C64::from(step / norm)));
    }
    let (sa, sb) = objective_branches(u, &rho)?;
    if sa.min(sb) > best.0 {
        best = (sa.min(sb), rho);
    }
    Ok(best)
}

/// Maximizes `min{S(ρ), S(N(ρ))}` with independent multistarts. Start `k`
/// draws from stream `k` of `cfg.seed`: even starts are Haar-random pure
/// states, odd starts are random full-rank mixed states.
pub fn q_capacity(u: &StinespringIsometry, cfg: &CapacityOptimizerConfig) -> Result<CapacityResult> {
    let d = u.dims().a;
    let starts = cfg.starts.max(1);
    let runs: Vec<(f64, CMat)> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(cfg.seed, k as u64);
            let start = if k % 2 == 0 {
                DensityOperator::from_pure(&random_pure_state(&mut rng, d)).into_matrix()
            } else {
                random_density(&mut rng, d, d).into_matrix()
            };
            ascend(u, start, cfg)
        })
        .collect::<Result<_>>()?;

    let start_values: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let best_idx = (0..runs.len())
        .max_by(|&a, &b| start_values[a].total_cmp(&start_values[b]).then(b.cmp(&a)))
        .expect("at least one start");
    let best_state = runs[best_idx].1.clone();
    let (sa, sb) = objective_branches(u, &best_state)?;
    let value = sa.min(sb);
    debug_assert!((value - start_values[best_idx]).abs() <= cfg.tolerance);

    let agreeing = start_values
        .iter()
        .filter(|&&v| value - v <= cfg.tolerance)
        .count();
    Ok(CapacityResult {
        value,
        state: DensityOperator::from_matrix_unchecked(best_state),
        input_entropy: sa,
        output_entropy: sb,
        start_values,
        converged: starts == 1 || agreeing >= 2,
    })
}
