//! Subspaces of `B ⊗ C`: sampling, minimum entanglement over the unit
//! sphere of a subspace, and an exhaustive-net oracle for small cases.

mod net;
mod probe;
mod prop7;

pub use net::{net_min_entanglement, NetConfig, NetResult};
pub use probe::{two_copy_subspace, two_copy_superadditivity_probe, SuperadditivityProbe, ESTIMATE_TAG};
pub use prop7::{
    build_example_channel, example_metadata, prop7_coefficient, prop7_dimension,
    prop7_entanglement_floor, EntanglementFloor, ExampleChannel, ExampleMetadata,
    Prop7Dimension, SubspaceParams, EXAMPLE_ALPHA, EXAMPLE_UPPER_EXPRESSION, GAMMA_CONST,
    MAX_MATERIALIZED_ENTRIES, QUOTED_DEFICIT,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{make_subspace_embedding_channel, StinespringIsometry};
use crate::error::{Error, Result};
use crate::metrics::entropy_of_spectrum;
use crate::rng::stream_rng;
use crate::tensor::{
    coefficient_matrix, eigh, from_spectrum, haar_isometry, BipartiteShape, CMat, CVec,
    PureStateVector, C64,
};
use crate::tolerance::{TAU_OPT, TAU_UNIT};

/// Orthonormal family spanning a subspace of `B ⊗ C`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSpec {
    /// Columns are the basis vectors.
    matrix: CMat,
    shape: BipartiteShape,
}

impl SubspaceSpec {
    pub fn new(basis: &[CVec], shape: BipartiteShape) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Dimension("empty basis".into()));
        }
        if basis.iter().any(|v| v.len() != shape.total()) {
            return Err(Error::Dimension(format!(
                "basis vectors must have length {}",
                shape.total()
            )));
        }
        Self::from_matrix(CMat::from_columns(basis), shape)
    }

    pub fn from_matrix(matrix: CMat, shape: BipartiteShape) -> Result<Self> {
        let k = matrix.ncols();
        if matrix.nrows() != shape.total() || k == 0 || k > shape.total() {
            return Err(Error::Dimension(format!(
                "{}x{} basis matrix for total dimension {}",
                matrix.nrows(),
                k,
                shape.total()
            )));
        }
        let dev = (matrix.adjoint() * &matrix - CMat::identity(k, k)).norm();
        if dev > TAU_UNIT * (k as f64).max(1.0) {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { matrix, shape })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    /// Subspace dimension `d_A`.
    pub fn k(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn basis(&self) -> Vec<CVec> {
        self.matrix.column_iter().map(|c| c.into_owned()).collect()
    }

    /// `V x` as a bipartite state; `x` must be a unit vector.
    pub fn state(&self, x: &CVec) -> Result<PureStateVector> {
        PureStateVector::bipartite(&self.matrix * x, self.shape)
    }

    /// Embedding channel `A ≅ S → B ⊗ C`.
    pub fn channel(&self) -> Result<StinespringIsometry> {
        make_subspace_embedding_channel(&self.basis(), self.shape)
    }

    /// Applies `V ⊗ W` to every basis vector.
    pub fn local_transform(&self, v: &CMat, w: &CMat) -> Result<Self> {
        let local = crate::tensor::kron(v, w);
        Self::from_matrix(local * &self.matrix, self.shape)
    }
}

/// First `k` columns of a Haar unitary on `B ⊗ C`.
pub fn sample_random_subspace(d_b: usize, d_c: usize, k: usize, seed: u64) -> Result<SubspaceSpec> {
    let shape = BipartiteShape::new(d_b, d_c)?;
    if k == 0 || k > shape.total() {
        return Err(Error::Dimension(format!(
            "subspace dimension {k} outside [1, {}]",
            shape.total()
        )));
    }
    let mut rng = stream_rng(seed, 0);
    SubspaceSpec::from_matrix(haar_isometry(&mut rng, shape.total(), k), shape)
}

/// Antisymmetric subspace of `d × d`, basis `(|ij⟩ − |ji⟩)/√2` for `i < j`.
pub fn antisymmetric_subspace(d: usize) -> Result<SubspaceSpec> {
    let shape = BipartiteShape::new(d, d)?;
    let h = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let mut basis = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut v = CVec::zeros(d * d);
            v[shape.index(i, j)] = h;
            v[shape.index(j, i)] = -h;
            basis.push(v);
        }
    }
    SubspaceSpec::new(&basis, shape)
}

/// Principal angles between two subspaces of the same space, ascending.
pub fn principal_angles(a: &SubspaceSpec, b: &SubspaceSpec) -> Result<Vec<f64>> {
    if a.shape != b.shape {
        return Err(Error::Dimension("subspaces live in different spaces".into()));
    }
    let overlap = a.matrix.adjoint() * &b.matrix;
    let mut angles: Vec<f64> = overlap
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0).acos())
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Eigenvalue floor inside `log ρ_B` for gradients.
const LOG_FLOOR: f64 = 1e-300;

/// Entanglement of the vector `φ` and its Euclidean gradient
/// `2·vec(G C)` with `G = −log₂ρ`, where `C` is the coefficient matrix and
/// `ρ` the reduced state on the smaller factor.
pub(crate) fn entanglement_and_gradient(phi: &CVec, shape: BipartiteShape) -> (f64, CVec) {
    let c = coefficient_matrix(phi, shape);
    let left = shape.dim_b <= shape.dim_c;
    let rho = if left { &c * c.adjoint() } else { c.adjoint() * &c };
    let (vals, vecs) = eigh(&rho);
    let e = entropy_of_spectrum(&vals);
    let g: Vec<f64> = vals.iter().map(|&x| -x.max(LOG_FLOOR).log2()).collect();
    let gm = from_spectrum(&g, &vecs);
    let gc = if left { gm * &c } else { &c * gm };
    let mut out = CVec::zeros(shape.total());
    for b in 0..shape.dim_b {
        for cc in 0..shape.dim_c {
            out[shape.index(b, cc)] = gc[(b, cc)] * C64::from(2.0);
        }
    }
    (e, out)
}

pub(crate) fn entanglement_of(phi: &CVec, shape: BipartiteShape) -> f64 {
    let c = coefficient_matrix(phi, shape);
    let rho = if shape.dim_b <= shape.dim_c {
        &c * c.adjoint()
    } else {
        c.adjoint() * &c
    };
    entropy_of_spectrum(&crate::tensor::eigvalsh(&rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinEntanglementConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop once the Riemannian gradient norm falls below this.
    pub gradient_tolerance: f64,
    /// Starts within this of the best count as agreeing.
    pub agreement: f64,
}

impl Default for MinEntanglementConfig {
    fn default() -> Self {
        Self {
            starts: 50,
            max_iters: 2000,
            seed: 0,
            gradient_tolerance: 1e-10,
            agreement: TAU_OPT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinEntanglementResult {
    /// Smallest entanglement found; an upper bound on the true minimum.
    pub value: f64,
    pub coordinates: CVec,
    pub state: PureStateVector,
    pub start_values: Vec<f64>,
    /// At least two starts agree with the best value.
    pub converged: bool,
}

fn random_unit(rng: &mut impl rand::Rng, k: usize) -> CVec {
    let v = CVec::from_fn(k, |_, _| crate::tensor::complex_gaussian(rng));
    let n = v.norm();
    v / C64::from(n)
}

/// Riemannian gradient descent on the unit sphere of subspace coordinates
/// with backtracking along the normalized descent direction.
fn descend(sub: &SubspaceSpec, mut x: CVec, cfg: &MinEntanglementConfig) -> (f64, CVec) {
    let v = &sub.matrix;
    let eval = |x: &CVec| entanglement_of(&(v * x), sub.shape);
    let (mut f, _) = entanglement_and_gradient(&(v * &x), sub.shape);
    let mut step: f64 = 0.25;
    for _ in 0..cfg.max_iters {
        let (_, g_phi) = entanglement_and_gradient(&(v * &x), sub.shape);
        let mut g = v.adjoint() * g_phi;
        let radial = x.dotc(&g).re;
        g -= &x * C64::from(radial);
        let gnorm = g.norm();
        if gnorm < cfg.gradient_tolerance {
            break;
        }
        let dir = g / C64::from(gnorm);
        step = (step * 2.0).min(1.0);
        let mut accepted = false;
        while step > 1e-15 {
            let cand = &x - &dir * C64::from(step);
            let cand = &cand / C64::from(cand.norm());
            let fc = eval(&cand);
            if fc <= f - 1e-4 * step * gnorm {
                x = cand;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f, x)
}

/// Estimates `min_{φ ∈ S, ‖φ‖=1} E(φ)` from `cfg.starts` random starts; start
/// `i` draws from stream `i` of `cfg.seed`. Ties resolve to the lowest start.
pub fn min_entanglement(sub: &SubspaceSpec, cfg: &MinEntanglementConfig) -> Result<MinEntanglementResult> {
    let k = sub.k();
    let starts = cfg.starts.max(1);
    let runs: Vec<(f64, CVec)> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(cfg.seed, i as u64);
            descend(sub, random_unit(&mut rng, k), cfg)
        })
        .collect();
    let start_values: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let best = (0..starts)
        .min_by(|&a, &b| start_values[a].total_cmp(&start_values[b]).then(a.cmp(&b)))
        .expect("at least one start");
    let coordinates = runs[best].1.clone();
    let value = start_values[best];
    let agreeing = start_values
        .iter()
        .filter(|&&v| v - value <= cfg.agreement)
        .count();
    Ok(MinEntanglementResult {
        value,
        state: PureStateVector::normalized(&sub.matrix * &coordinates)?.with_shape(sub.shape)?,
        coordinates,
        start_values,
        converged: starts == 1 || agreeing >= 2,
    })
}
