//! Channels `N: A → B` represented by a Stinespring isometry
//! `U: H_A → H_B ⊗ H_C`, with `N(ρ) = tr_C UρU*` and the complementary
//! channel `N̄(ρ) = tr_B UρU*`.

mod document;

pub use document::{load_channel_spec, subspace_document, ChannelKind, ChannelSpec};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::tensor::{
    haar_unitary, isometry_deviation, partial_trace_matrix, BipartiteShape, DensityOperator,
    PureStateVector, Subsystem, C64, CMat, CVec, ONE,
};
use crate::tolerance::{TAU_TR, TAU_UNIT};

/// Largest input dimension for tensor powers and compositions.
pub const MAX_POWER_INPUT_DIM: usize = 4;
/// Largest number of tensor factors.
pub const MAX_POWER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChannelDims {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StinespringIsometry {
    matrix: CMat,
    dims: ChannelDims,
}

impl StinespringIsometry {
    /// `matrix` is `(dim_b·dim_c) × d_A`; rows follow the `b·dim_c + c` order.
    pub fn new(matrix: CMat, dim_b: usize, dim_c: usize) -> Result<Self> {
        let shape = BipartiteShape::new(dim_b, dim_c)?;
        if matrix.nrows() != shape.total() || matrix.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "isometry is {}x{}, expected {}x(d_A)",
                matrix.nrows(),
                matrix.ncols(),
                shape.total()
            )));
        }
        let dev = isometry_deviation(&matrix);
        if dev > TAU_UNIT {
            return Err(Error::NotIsometry(dev));
        }
        let dims = ChannelDims {
            a: matrix.ncols(),
            b: dim_b,
            c: dim_c,
        };
        Ok(Self { matrix, dims })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dims(&self) -> ChannelDims {
        self.dims
    }

    pub fn output_shape(&self) -> BipartiteShape {
        BipartiteShape {
            dim_b: self.dims.b,
            dim_c: self.dims.c,
        }
    }

    fn check_input(&self, rho: &CMat) -> Result<()> {
        if rho.nrows() != self.dims.a || rho.ncols() != self.dims.a {
            return Err(Error::Dimension(format!(
                "input operator is {}x{}, channel input dimension is {}",
                rho.nrows(),
                rho.ncols(),
                self.dims.a
            )));
        }
        Ok(())
    }

    /// `UρU*` on `B ⊗ C`.
    pub fn joint_output(&self, rho: &CMat) -> Result<CMat> {
        self.check_input(rho)?;
        Ok(&self.matrix * rho * self.matrix.adjoint())
    }

    pub(crate) fn output_matrix(&self, rho: &CMat, keep: Subsystem) -> Result<CMat> {
        let joint = self.joint_output(rho)?;
        partial_trace_matrix(&joint, self.output_shape(), keep)
    }

    /// `U|i⟩` as a bipartite state.
    pub fn image_state(&self, i: usize) -> PureStateVector {
        PureStateVector::normalized(self.matrix.column(i).into_owned())
            .expect("isometry columns are unit vectors")
            .with_shape(self.output_shape())
            .expect("column length matches output shape")
    }

    /// Orthonormal basis of the image subspace `U H_A`.
    pub fn image_basis(&self) -> Vec<CVec> {
        self.matrix.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Kraus operators `K_c = (I_B ⊗ ⟨c|) U`, one per environment basis vector.
    pub fn kraus(&self) -> KrausSet {
        let shape = self.output_shape();
        let operators = (0..self.dims.c)
            .map(|c| {
                CMat::from_fn(self.dims.b, self.dims.a, |b, a| {
                    self.matrix[(shape.index(b, c), a)]
                })
            })
            .collect();
        KrausSet { operators }
    }

    /// `U₁ ⊗ U₂` regrouped as `(B₁B₂) ⊗ (C₁C₂)`.
    pub fn tensor_product(&self, other: &StinespringIsometry) -> Result<StinespringIsometry> {
        let (d1, d2) = (self.dims, other.dims);
        if d1.a * d2.a > MAX_POWER_INPUT_DIM.pow(MAX_POWER as u32) {
            return Err(Error::Scale(format!(
                "tensor product input dimension {} too large",
                d1.a * d2.a
            )));
        }
        let raw = self.matrix.kronecker(&other.matrix);
        // raw rows are ((b1 c1) b2 c2); regroup to (b1 b2)(c1 c2)
        let b = d1.b * d2.b;
        let c = d1.c * d2.c;
        let mut m = CMat::zeros(b * c, d1.a * d2.a);
        for b1 in 0..d1.b {
            for c1 in 0..d1.c {
                for b2 in 0..d2.b {
                    for c2 in 0..d2.c {
                        let src = ((b1 * d1.c + c1) * d2.b + b2) * d2.c + c2;
                        let dst = (b1 * d2.b + b2) * c + (c1 * d2.c + c2);
                        m.row_mut(dst).copy_from(&raw.row(src));
                    }
                }
            }
        }
        StinespringIsometry::new(m, b, c)
    }

    /// `n`-fold tensor power, limited to `n ≤ 3` and `d_A ≤ 4`.
    pub fn tensor_power(&self, n: usize) -> Result<StinespringIsometry> {
        if n == 0 || n > MAX_POWER || self.dims.a > MAX_POWER_INPUT_DIM {
            return Err(Error::Scale(format!(
                "tensor power n={n} at d_A={} (supported: 1 <= n <= {MAX_POWER}, d_A <= {MAX_POWER_INPUT_DIM})",
                self.dims.a
            )));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor_product(self)?;
        }
        Ok(acc)
    }

    /// `next ∘ self`; the environment becomes `C_next ⊗ C_self`.
    pub fn then(&self, next: &StinespringIsometry) -> Result<StinespringIsometry> {
        if next.dims.a != self.dims.b {
            return Err(Error::Dimension(format!(
                "cannot compose: output dimension {} vs input dimension {}",
                self.dims.b, next.dims.a
            )));
        }
        if self.dims.a > MAX_POWER_INPUT_DIM || next.dims.a > MAX_POWER_INPUT_DIM {
            return Err(Error::Scale("composition limited to d <= 4".into()));
        }
        let lifted = next
            .matrix
            .kronecker(&CMat::identity(self.dims.c, self.dims.c));
        StinespringIsometry::new(lifted * &self.matrix, next.dims.b, next.dims.c * self.dims.c)
    }
}

/// `N(ρ) = tr_C UρU*`.
pub fn apply_channel(u: &StinespringIsometry, rho: &DensityOperator) -> Result<DensityOperator> {
    Ok(DensityOperator::from_matrix_unchecked(
        u.output_matrix(rho.matrix(), Subsystem::B)?,
    ))
}

/// `N̄(ρ) = tr_B UρU*`.
pub fn complementary_channel(
    u: &StinespringIsometry,
    rho: &DensityOperator,
) -> Result<DensityOperator> {
    Ok(DensityOperator::from_matrix_unchecked(
        u.output_matrix(rho.matrix(), Subsystem::C)?,
    ))
}

/// Heisenberg-picture map `N†(X) = U*(X ⊗ I_C)U`.
pub fn adjoint_channel(u: &StinespringIsometry, op: &CMat) -> Result<CMat> {
    let d = u.dims;
    if op.nrows() != d.b || op.ncols() != d.b {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, channel output dimension is {}",
            op.nrows(),
            op.ncols(),
            d.b
        )));
    }
    let lifted = op.kronecker(&CMat::identity(d.c, d.c));
    Ok(u.matrix.adjoint() * lifted * &u.matrix)
}

/// `N̄†(Y) = U*(I_B ⊗ Y)U`.
pub fn complementary_adjoint(u: &StinespringIsometry, op: &CMat) -> Result<CMat> {
    let d = u.dims;
    if op.nrows() != d.c || op.ncols() != d.c {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, environment dimension is {}",
            op.nrows(),
            op.ncols(),
            d.c
        )));
    }
    let lifted = CMat::identity(d.b, d.b).kronecker(op);
    Ok(u.matrix.adjoint() * lifted * &u.matrix)
}

/// Kraus presentation `N(ρ) = Σ K_i ρ K_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMat>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMat>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::Dimension("empty Kraus set".into()))?;
        let (b, a) = first.shape();
        if operators.iter().any(|k| k.shape() != (b, a)) {
            return Err(Error::Dimension("Kraus operators differ in shape".into()));
        }
        let sum = operators
            .iter()
            .fold(CMat::zeros(a, a), |acc, k| acc + k.adjoint() * k);
        let dev = (sum - CMat::identity(a, a))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > TAU_UNIT {
            return Err(Error::NotIsometry(dev));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[CMat] {
        &self.operators
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        self.operators
            .iter()
            .fold(CMat::zeros(self.operators[0].nrows(), self.operators[0].nrows()), |acc, k| {
                acc + k * rho * k.adjoint()
            })
    }

    /// Stacks the operators into `U = Σ_c K_c ⊗ |c⟩`; `d_C` equals the number
    /// of operators.
    pub fn to_stinespring(&self) -> Result<StinespringIsometry> {
        let (b, a) = self.operators[0].shape();
        let c = self.operators.len();
        let mut m = CMat::zeros(b * c, a);
        for (ci, k) in self.operators.iter().enumerate() {
            for bi in 0..b {
                m.row_mut(bi * c + ci).copy_from(&k.row(bi));
            }
        }
        StinespringIsometry::new(m, b, c)
    }
}

pub fn from_kraus(operators: Vec<CMat>) -> Result<StinespringIsometry> {
    KrausSet::new(operators)?.to_stinespring()
}

pub fn unitary_channel(v: &CMat) -> Result<StinespringIsometry> {
    StinespringIsometry::new(v.clone(), v.nrows(), 1)
}

pub fn identity_channel(d: usize) -> StinespringIsometry {
    StinespringIsometry::new(CMat::identity(d, d), d, 1).expect("identity is an isometry")
}

pub(crate) fn validate_distribution(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {p}")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > TAU_TR {
        return Err(Error::InvalidDistribution(format!("total mass {total}")));
    }
    Ok(())
}

/// `N(ρ) = Σ_k p_k U_k ρ U_k*` with Haar-random `U_k` drawn from `seed`.
pub fn make_random_mixture_of_unitaries(
    d: usize,
    num_terms: usize,
    probs: &[f64],
    seed: u64,
) -> Result<StinespringIsometry> {
    if probs.len() != num_terms {
        return Err(Error::InvalidDistribution(format!(
            "{} probabilities for {num_terms} terms",
            probs.len()
        )));
    }
    validate_distribution(probs)?;
    if d == 0 {
        return Err(Error::Dimension("d must be positive".into()));
    }
    let ops = probs
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let u = haar_unitary(&mut stream_rng(seed, k as u64), d);
            u * C64::from(p.sqrt())
        })
        .collect();
    from_kraus(ops)
}

/// Embedding of an abstract `k`-dimensional space onto `span(basis)`.
pub fn make_subspace_embedding_channel(
    basis: &[CVec],
    shape: BipartiteShape,
) -> Result<StinespringIsometry> {
    if basis.is_empty() {
        return Err(Error::Dimension("subspace basis is empty".into()));
    }
    if let Some(v) = basis.iter().find(|v| v.len() != shape.total()) {
        return Err(Error::Dimension(format!(
            "basis vector of length {} in a {}x{} space",
            v.len(),
            shape.dim_b,
            shape.dim_c
        )));
    }
    let m = CMat::from_columns(basis);
    let dev = isometry_deviation(&m);
    if dev > TAU_UNIT {
        return Err(Error::NotOrthonormal(dev));
    }
    StinespringIsometry::new(m, shape.dim_b, shape.dim_c)
}

/// Generalized Pauli (Weyl) operator `X^j Z^k` on `C^d`.
fn weyl(d: usize, j: usize, k: usize) -> CMat {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    let mut m = CMat::zeros(d, d);
    for col in 0..d {
        let row = (col + j) % d;
        m[(row, col)] = C64::from_polar(1.0, omega * (k * col) as f64);
    }
    m
}

/// `N(ρ) = (1−p)ρ + p·I/d` with `d²` Weyl Kraus operators.
pub fn depolarizing(d: usize, p: f64) -> Result<StinespringIsometry> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("depolarizing parameter {p} outside [0, 1]")));
    }
    if d == 0 {
        return Err(Error::Dimension("d must be positive".into()));
    }
    let n = (d * d) as f64;
    let mut ops = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let w = if j == 0 && k == 0 { 1.0 - p + p / n } else { p / n };
            ops.push(weyl(d, j, k) * C64::from(w.sqrt()));
        }
    }
    from_kraus(ops)
}

/// Qubit amplitude damping with decay probability `gamma`.
pub fn amplitude_damping(gamma: f64) -> Result<StinespringIsometry> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("damping {gamma} outside [0, 1]")));
    }
    let zero = C64::from(0.0);
    let k0 = CMat::from_row_slice(2, 2, &[ONE, zero, zero, C64::from((1.0 - gamma).sqrt())]);
    let k1 = CMat::from_row_slice(2, 2, &[zero, C64::from(gamma.sqrt()), zero, zero]);
    from_kraus(vec![k0, k1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{matrix_entropy, von_neumann_entropy};
    use crate::tensor::{
        haar_isometry, random_density, random_hermitian, trace_product, trace_re,
    };
    use crate::tolerance::TAU_ENT;

    fn max_diff(a: &CMat, b: &CMat) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn random_channel(seed: u64, a: usize, b: usize, c: usize) -> StinespringIsometry {
        let mut rng = stream_rng(seed, 99);
        StinespringIsometry::new(haar_isometry(&mut rng, b * c, a), b, c).unwrap()
    }

    #[test]
    fn trivial_environment_preserves_entropy() {
        let mut rng = stream_rng(1, 0);
        let v = haar_isometry(&mut rng, 5, 3);
        let u = StinespringIsometry::new(v.clone(), 5, 1).unwrap();
        let rho = random_density(&mut rng, 3, 2);
        let out = apply_channel(&u, &rho).unwrap();
        assert!(max_diff(out.matrix(), &(&v * rho.matrix() * v.adjoint())) < 1e-13);
        assert!((von_neumann_entropy(&out) - von_neumann_entropy(&rho)).abs() < 1e-9);
        let env = complementary_channel(&u, &rho).unwrap();
        assert_eq!(env.dim(), 1);
        assert!((env.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixture_of_unitaries_is_unital() {
        for terms in 1..5 {
            let probs = vec![1.0 / terms as f64; terms];
            let u = make_random_mixture_of_unitaries(3, terms, &probs, 17).unwrap();
            assert_eq!(u.dims().c, terms);
            let out = apply_channel(&u, &DensityOperator::maximally_mixed(3)).unwrap();
            let target = CMat::identity(3, 3) * C64::from(1.0 / 3.0);
            assert!(crate::metrics::trace_distance_matrix(out.matrix(), &target) * 2.0 <= 1e-9);
        }
    }

    #[test]
    fn mixture_output_entropy_bounded_by_label_entropy() {
        let probs = [0.5, 0.3, 0.2];
        let u = make_random_mixture_of_unitaries(4, 3, &probs, 5).unwrap();
        let h = crate::metrics::shannon_entropy(&probs);
        let mut rng = stream_rng(5, 1);
        for _ in 0..50 {
            let psi = crate::tensor::random_pure_state(&mut rng, 4);
            let out = apply_channel(&u, &DensityOperator::from_pure(&psi)).unwrap();
            assert!(von_neumann_entropy(&out) <= h + TAU_ENT);
        }
    }

    #[test]
    fn single_term_mixture_is_unitary() {
        let u = make_random_mixture_of_unitaries(3, 1, &[1.0], 8).unwrap();
        let mut rng = stream_rng(8, 1);
        let rho = random_density(&mut rng, 3, 2);
        let out = apply_channel(&u, &rho).unwrap();
        assert!((von_neumann_entropy(&out) - von_neumann_entropy(&rho)).abs() < 1e-9);
    }

    #[test]
    fn mixture_rejects_bad_distribution() {
        assert!(matches!(
            make_random_mixture_of_unitaries(2, 2, &[0.6, 0.6], 0),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(make_random_mixture_of_unitaries(2, 3, &[0.5, 0.5], 0).is_err());
        assert!(make_random_mixture_of_unitaries(2, 2, &[1.5, -0.5], 0).is_err());
    }

    #[test]
    fn kraus_and_stinespring_agree() {
        let mut rng = stream_rng(2, 0);
        for seed in 0..10 {
            let u = random_channel(seed, 3, 2, 4);
            let kraus = u.kraus();
            for _ in 0..5 {
                let rho = random_density(&mut rng, 3, 3);
                let a = apply_channel(&u, &rho).unwrap();
                assert!(max_diff(a.matrix(), &kraus.apply(rho.matrix())) < 1e-10);
            }
            let rebuilt = kraus.to_stinespring().unwrap();
            assert!(max_diff(rebuilt.matrix(), u.matrix()) < 1e-14);
        }
    }

    #[test]
    fn complementary_channel_properties() {
        let mut rng = stream_rng(3, 0);
        let u = random_channel(3, 3, 3, 2);
        for _ in 0..20 {
            let psi = crate::tensor::random_pure_state(&mut rng, 3);
            let rho = DensityOperator::from_pure(&psi);
            let sb = von_neumann_entropy(&apply_channel(&u, &rho).unwrap());
            let sc = von_neumann_entropy(&complementary_channel(&u, &rho).unwrap());
            assert!((sb - sc).abs() < 1e-9);
            let mixed = random_density(&mut rng, 3, 3);
            let env = complementary_channel(&u, &mixed).unwrap();
            assert!((trace_re(env.matrix()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_duality() {
        let mut rng = stream_rng(4, 0);
        let u = random_channel(4, 3, 2, 3);
        let id_b = CMat::identity(2, 2);
        assert!(max_diff(&adjoint_channel(&u, &id_b).unwrap(), &CMat::identity(3, 3)) < 1e-12);
        for _ in 0..100 {
            let rho = random_density(&mut rng, 3, 3);
            let x = random_hermitian(&mut rng, 2);
            let lhs = trace_product(apply_channel(&u, &rho).unwrap().matrix(), &x);
            let rhs = trace_product(rho.matrix(), &adjoint_channel(&u, &x).unwrap());
            assert!((lhs - rhs).abs() < 1e-10);

            let y = random_hermitian(&mut rng, 3);
            let lhs = trace_product(complementary_channel(&u, &rho).unwrap().matrix(), &y);
            let rhs = trace_product(rho.matrix(), &complementary_adjoint(&u, &y).unwrap());
            assert!((lhs - rhs).abs() < 1e-10);
        }
        let v = crate::tensor::haar_random_unitary(3, 1);
        let unitary = unitary_channel(&v).unwrap();
        let x = random_hermitian(&mut rng, 3);
        let expected = v.adjoint() * &x * &v;
        assert!(max_diff(&adjoint_channel(&unitary, &x).unwrap(), &expected) < 1e-12);
    }

    #[test]
    fn dimension_errors() {
        let u = random_channel(5, 2, 2, 2);
        let rho = DensityOperator::maximally_mixed(3);
        assert!(matches!(apply_channel(&u, &rho), Err(Error::Dimension(_))));
        assert!(complementary_channel(&u, &rho).is_err());
        assert!(adjoint_channel(&u, &CMat::identity(3, 3)).is_err());
        assert!(matches!(
            StinespringIsometry::new(CMat::identity(4, 2) * C64::from(2.0), 2, 2),
            Err(Error::NotIsometry(_))
        ));
    }

    #[test]
    fn subspace_embedding() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let shape = BipartiteShape::new(2, 2).unwrap();
        let phi_plus = CVec::from_vec(vec![C64::from(s), C64::from(0.0), C64::from(0.0), C64::from(s)]);
        let psi_plus = CVec::from_vec(vec![C64::from(0.0), C64::from(s), C64::from(s), C64::from(0.0)]);
        let u = make_subspace_embedding_channel(&[phi_plus.clone(), psi_plus.clone()], shape).unwrap();
        assert_eq!(u.dims(), ChannelDims { a: 2, b: 2, c: 2 });
        assert!(isometry_deviation(u.matrix()) < 1e-10);
        assert!((u.image_state(0).amplitudes() - &phi_plus).norm() < 1e-15);
        assert!((u.image_state(1).amplitudes() - &psi_plus).norm() < 1e-15);

        let not_orth = [phi_plus.clone(), phi_plus];
        assert!(matches!(
            make_subspace_embedding_channel(&not_orth, shape),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn presets() {
        let noiseless = depolarizing(2, 0.0).unwrap();
        let mut rng = stream_rng(6, 0);
        let rho = random_density(&mut rng, 2, 2);
        let out = apply_channel(&noiseless, &rho).unwrap();
        assert!(max_diff(out.matrix(), rho.matrix()) < 1e-12);

        let dep = depolarizing(3, 0.4).unwrap();
        let out = apply_channel(&dep, &rho_3(&mut rng)).unwrap();
        assert!((trace_re(out.matrix()) - 1.0).abs() < 1e-12);
        let full = depolarizing(2, 1.0).unwrap();
        let out = apply_channel(&full, &rho).unwrap();
        assert!(max_diff(out.matrix(), &(CMat::identity(2, 2) * C64::from(0.5))) < 1e-12);

        let ad = amplitude_damping(0.3).unwrap();
        let excited = DensityOperator::from_diagonal(&[0.0, 1.0]).unwrap();
        let out = apply_channel(&ad, &excited).unwrap();
        assert!((out.matrix()[(0, 0)].re - 0.3).abs() < 1e-12);
        assert!(amplitude_damping(1.5).is_err());
        assert!(depolarizing(2, -0.1).is_err());
    }

    fn rho_3(rng: &mut rand_chacha::ChaCha8Rng) -> DensityOperator {
        random_density(rng, 3, 3)
    }

    #[test]
    fn entropy_inequalities_hold_for_channel_outputs() {
        let mut rng = stream_rng(7, 0);
        for seed in 0..20 {
            let u = random_channel(seed, 1 + (seed as usize) % 4, 2, 3);
            let rho = random_density(&mut rng, u.dims().a, 2);
            let sa = von_neumann_entropy(&rho);
            let sb = matrix_entropy(apply_channel(&u, &rho).unwrap().matrix());
            let sc = matrix_entropy(complementary_channel(&u, &rho).unwrap().matrix());
            let t = crate::metrics::EntropyTriple::new(sa, sb, sc);
            assert!(t.is_consistent(TAU_ENT));
        }
    }

    #[test]
    fn tensor_power_and_composition() {
        let ad = amplitude_damping(0.2).unwrap();
        let two = ad.tensor_power(2).unwrap();
        assert_eq!(two.dims(), ChannelDims { a: 4, b: 4, c: 4 });
        let mut rng = stream_rng(8, 0);
        let r1 = random_density(&mut rng, 2, 2);
        let r2 = random_density(&mut rng, 2, 2);
        let joint = DensityOperator::new(r1.matrix().kronecker(r2.matrix())).unwrap();
        let out = apply_channel(&two, &joint).unwrap();
        let expected = apply_channel(&ad, &r1)
            .unwrap()
            .matrix()
            .kronecker(apply_channel(&ad, &r2).unwrap().matrix());
        assert!(max_diff(out.matrix(), &expected) < 1e-12);
        assert!(ad.tensor_power(4).is_err());
        assert!(depolarizing(5, 0.1).unwrap().tensor_power(2).is_err());

        // damping composes multiplicatively: (1-g1)(1-g2) survival
        let composed = ad.then(&amplitude_damping(0.5).unwrap()).unwrap();
        let excited = DensityOperator::from_diagonal(&[0.0, 1.0]).unwrap();
        let out = apply_channel(&composed, &excited).unwrap();
        assert!((out.matrix()[(1, 1)].re - 0.8 * 0.5).abs() < 1e-12);
    }
}
