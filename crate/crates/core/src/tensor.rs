//! Complex linear algebra on bipartite spaces `H_B ⊗ H_C`.
//!
//! Product-basis index convention: `|b⟩ ⊗ |c⟩` sits at position
//! `b * dim_c + c`. The partial transpose acts on the `C` factor.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::tolerance::{TAU_HERM, TAU_NORM, TAU_PSD, TAU_TR};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteShape {
    pub dim_b: usize,
    pub dim_c: usize,
}

impl BipartiteShape {
    pub fn new(dim_b: usize, dim_c: usize) -> Result<Self> {
        if dim_b == 0 || dim_c == 0 {
            return Err(Error::Dimension(format!(
                "bipartite factors must be positive, got {dim_b}x{dim_c}"
            )));
        }
        Ok(Self { dim_b, dim_c })
    }

    pub fn total(&self) -> usize {
        self.dim_b * self.dim_c
    }

    pub fn min_dim(&self) -> usize {
        self.dim_b.min(self.dim_c)
    }

    pub fn swapped(&self) -> Self {
        Self {
            dim_b: self.dim_c,
            dim_c: self.dim_b,
        }
    }

    #[inline]
    pub fn index(&self, b: usize, c: usize) -> usize {
        b * self.dim_c + c
    }

    fn check_matrix(&self, m: &CMat) -> Result<()> {
        let n = self.total();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, shape {}x{} needs {n}x{n}",
                m.nrows(),
                m.ncols(),
                self.dim_b,
                self.dim_c
            )));
        }
        Ok(())
    }
}

/// Which tensor factor an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    B,
    C,
}

/// Trace-one positive operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMat,
    shape: Option<BipartiteShape>,
}

impl DensityOperator {
    /// Validates Hermiticity, positivity and unit trace.
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidState(format!(
                "matrix must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_deviation(&matrix);
        if herm > TAU_HERM {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let matrix = hermitian_part(&matrix);
        let tr = trace_re(&matrix);
        if (tr - 1.0).abs() > TAU_TR {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let (eig, _) = eigh(&matrix);
        if eig[0] < -TAU_PSD {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                eig[0]
            )));
        }
        Ok(Self {
            matrix,
            shape: None,
        })
    }

    pub fn bipartite(matrix: CMat, shape: BipartiteShape) -> Result<Self> {
        Self::new(matrix)?.with_shape(shape)
    }

    pub fn with_shape(mut self, shape: BipartiteShape) -> Result<Self> {
        shape.check_matrix(&self.matrix)?;
        self.shape = Some(shape);
        Ok(self)
    }

    /// Wraps a matrix known to be a state up to rounding (channel outputs,
    /// partial traces). The Hermitian part is kept.
    pub(crate) fn from_matrix_unchecked(matrix: CMat) -> Self {
        Self {
            matrix: hermitian_part(&matrix),
            shape: None,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMat::identity(dim, dim) * C64::from(1.0 / dim as f64),
            shape: None,
        }
    }

    pub fn from_pure(psi: &PureStateVector) -> Self {
        Self {
            matrix: outer(&psi.amplitudes),
            shape: psi.shape,
        }
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let d = CVec::from_iterator(probs.len(), probs.iter().map(|&p| C64::from(p)));
        Self::new(CMat::from_diagonal(&d))
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn shape(&self) -> Option<BipartiteShape> {
        self.shape
    }

    /// Ascending eigenvalues with rounding noise in `[-TAU_PSD, 0]` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (mut eig, _) = eigh(&self.matrix);
        for e in eig.iter_mut() {
            if *e < 0.0 {
                *e = 0.0;
            }
        }
        eig
    }

    fn require_shape(&self) -> Result<BipartiteShape> {
        self.shape
            .ok_or_else(|| Error::Dimension("state has no bipartite shape".into()))
    }
}

/// Unit vector, optionally with a bipartite shape.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: CVec,
    shape: Option<BipartiteShape>,
}

impl PureStateVector {
    pub fn new(amplitudes: CVec) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > TAU_NORM {
            return Err(Error::Normalization(norm));
        }
        Ok(Self {
            amplitudes,
            shape: None,
        })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVec) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Normalization(norm));
        }
        Ok(Self {
            amplitudes: amplitudes / C64::from(norm),
            shape: None,
        })
    }

    pub fn bipartite(amplitudes: CVec, shape: BipartiteShape) -> Result<Self> {
        Self::new(amplitudes)?.with_shape(shape)
    }

    pub fn with_shape(mut self, shape: BipartiteShape) -> Result<Self> {
        if self.amplitudes.len() != shape.total() {
            return Err(Error::Dimension(format!(
                "vector of length {} does not fit shape {}x{}",
                self.amplitudes.len(),
                shape.dim_b,
                shape.dim_c
            )));
        }
        self.shape = Some(shape);
        Ok(self)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVec::zeros(dim);
        v[index] = ONE;
        Self {
            amplitudes: v,
            shape: None,
        }
    }

    pub fn product(b: &PureStateVector, c: &PureStateVector) -> Self {
        let shape = BipartiteShape {
            dim_b: b.dim(),
            dim_c: c.dim(),
        };
        Self {
            amplitudes: b.amplitudes.kronecker(&c.amplitudes),
            shape: Some(shape),
        }
    }

    /// `Σ_j |j⟩|j⟩ / √d` on `d x d`.
    pub fn maximally_entangled(d: usize) -> Self {
        let shape = BipartiteShape { dim_b: d, dim_c: d };
        let mut v = CVec::zeros(d * d);
        let amp = C64::from(1.0 / (d as f64).sqrt());
        for j in 0..d {
            v[shape.index(j, j)] = amp;
        }
        Self {
            amplitudes: v,
            shape: Some(shape),
        }
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn shape(&self) -> Option<BipartiteShape> {
        self.shape
    }

    pub fn require_shape(&self) -> Result<BipartiteShape> {
        self.shape
            .ok_or_else(|| Error::Dimension("state vector has no bipartite shape".into()))
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureStateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn projector(&self) -> CMat {
        outer(&self.amplitudes)
    }

    /// Coefficient matrix `Ψ[b, c] = ⟨bc|ψ⟩`.
    pub fn coefficient_matrix(&self) -> Result<CMat> {
        let shape = self.require_shape()?;
        Ok(coefficient_matrix(&self.amplitudes, shape))
    }
}

pub(crate) fn coefficient_matrix(v: &CVec, shape: BipartiteShape) -> CMat {
    CMat::from_fn(shape.dim_b, shape.dim_c, |b, c| v[shape.index(b, c)])
}

/// `ψ = Σ_j √λ_j |u_j⟩|v_j⟩` with `λ` nonincreasing.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<CVec>,
    pub right_vectors: Vec<CVec>,
    pub shape: BipartiteShape,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> CVec {
        let mut v = CVec::zeros(self.shape.total());
        for ((lam, u), w) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            v += u.kronecker(w) * C64::from(lam.sqrt());
        }
        v
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > tol).count()
    }
}

// ---------------------------------------------------------------------------
// Matrix helpers

/// Hermitian eigendecomposition with eigenvalues sorted ascending; columns of
/// the returned matrix are the matching eigenvectors.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `V f(Λ) V*` for Hermitian `m = V Λ V*`.
pub fn hermitian_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(m);
    from_spectrum(&vals.iter().map(|&x| f(x)).collect::<Vec<_>>(), &vecs)
}

/// `V diag(vals) V*`.
pub fn from_spectrum(vals: &[f64], vecs: &CMat) -> CMat {
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    scaled * vecs.adjoint()
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::from(0.5)
}

pub fn hermiticity_deviation(m: &CMat) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace_re(m: &CMat) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// `|v⟩⟨v|`.
pub fn outer(v: &CVec) -> CMat {
    v * v.adjoint()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Real part of `tr(A B)` for Hermitian arguments.
pub fn trace_product(a: &CMat, b: &CMat) -> f64 {
    // tr(AB) = Σ_ij A_ij B_ji
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// `⟨v|M|v⟩` (real part).
pub fn expectation(m: &CMat, v: &CVec) -> f64 {
    v.dotc(&(m * v)).re
}

/// `Σ |eig|` of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

/// Largest entry of `|U*U − I|`.
pub fn isometry_deviation(u: &CMat) -> f64 {
    let g = u.adjoint() * u;
    let n = g.nrows();
    (g - CMat::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Bipartite operations

/// Partial trace of a raw operator on `H_B ⊗ H_C`, keeping `keep`.
pub fn partial_trace_matrix(m: &CMat, shape: BipartiteShape, keep: Subsystem) -> Result<CMat> {
    shape.check_matrix(m)?;
    let (db, dc) = (shape.dim_b, shape.dim_c);
    Ok(match keep {
        Subsystem::B => CMat::from_fn(db, db, |b, bp| {
            (0..dc)
                .map(|c| m[(shape.index(b, c), shape.index(bp, c))])
                .sum()
        }),
        Subsystem::C => CMat::from_fn(dc, dc, |c, cp| {
            (0..db)
                .map(|b| m[(shape.index(b, c), shape.index(b, cp))])
                .sum()
        }),
    })
}

/// Reduced state on the kept factor.
pub fn partial_trace(state: &DensityOperator, keep: Subsystem) -> Result<DensityOperator> {
    let shape = state.require_shape()?;
    let m = partial_trace_matrix(&state.matrix, shape, keep)?;
    Ok(DensityOperator::from_matrix_unchecked(m))
}

/// Reduced state of a pure bipartite vector, computed from its coefficient
/// matrix (`ΨΨ*` for `B`, `(Ψ*Ψ)ᵀ` for `C`).
pub fn reduced_pure(v: &CVec, shape: BipartiteShape, keep: Subsystem) -> CMat {
    let psi = coefficient_matrix(v, shape);
    match keep {
        Subsystem::B => &psi * psi.adjoint(),
        Subsystem::C => (psi.adjoint() * &psi).transpose(),
    }
}

/// Partial transpose on the `C` factor:
/// `⟨b c|M^Γ|b' c'⟩ = ⟨b c'|M|b' c⟩`.
pub fn partial_transpose(m: &CMat, shape: BipartiteShape) -> Result<CMat> {
    shape.check_matrix(m)?;
    let (db, dc) = (shape.dim_b, shape.dim_c);
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for b in 0..db {
        for bp in 0..db {
            for c in 0..dc {
                for cp in 0..dc {
                    out[(shape.index(b, c), shape.index(bp, cp))] =
                        m[(shape.index(b, cp), shape.index(bp, c))];
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptCheck {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

/// PPT test: `min eig(M^Γ) ≥ −tol`.
pub fn is_ppt(op: &CMat, shape: BipartiteShape, tol: f64) -> Result<PptCheck> {
    let pt = partial_transpose(op, shape)?;
    let min_eigenvalue = eigvalsh(&hermitian_part(&pt))[0];
    Ok(PptCheck {
        is_ppt: min_eigenvalue >= -tol,
        min_eigenvalue,
    })
}

pub fn schmidt_decompose(psi: &PureStateVector) -> Result<SchmidtDecomposition> {
    let shape = psi.require_shape()?;
    let norm = psi.amplitudes.norm();
    if (norm - 1.0).abs() > TAU_NORM {
        return Err(Error::Normalization(norm));
    }
    let svd = coefficient_matrix(&psi.amplitudes, shape).svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let r = shape.min_dim();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let coefficients = order
        .iter()
        .map(|&j| svd.singular_values[j].powi(2))
        .collect();
    let left_vectors = order.iter().map(|&j| u.column(j).into_owned()).collect();
    // Ψ = Σ σ_j u_j (row j of V*), so row j of V* is the right Schmidt vector.
    let right_vectors = order
        .iter()
        .map(|&j| v_t.row(j).transpose().into_owned())
        .collect();
    Ok(SchmidtDecomposition {
        coefficients,
        left_vectors,
        right_vectors,
        shape,
    })
}

// ---------------------------------------------------------------------------
// Sampling

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed isometry `C^cols → C^rows` (the first `cols` columns of a
/// Haar unitary): QR of a Ginibre matrix with the phases of `diag(R)` moved
/// into `Q`.
pub fn haar_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    assert!(cols <= rows && cols >= 1, "isometry needs 1 <= cols <= rows");
    let qr = ginibre(rng, rows, cols).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / C64::from(d.norm()) } else { ONE };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMat {
    haar_isometry(rng, dim, dim)
}

/// Haar-random unitary from a seed.
pub fn haar_random_unitary(dim: usize, seed: u64) -> CMat {
    haar_unitary(&mut stream_rng(seed, 0), dim)
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureStateVector {
    let v = CVec::from_fn(dim, |_, _| complex_gaussian(rng));
    PureStateVector::normalized(v).expect("gaussian vector is nonzero")
}

pub fn random_bipartite_pure<R: Rng + ?Sized>(
    rng: &mut R,
    shape: BipartiteShape,
) -> PureStateVector {
    random_pure_state(rng, shape.total())
        .with_shape(shape)
        .expect("length matches shape")
}

/// Random density operator of the given rank (induced measure: `GG*/tr`).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator {
    let g = ginibre(rng, dim, rank.max(1));
    let m = &g * g.adjoint();
    let tr = trace_re(&m);
    DensityOperator::from_matrix_unchecked(m / C64::from(tr))
}

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE-like).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMat {
    hermitian_part(&ginibre(rng, dim, dim))
}
