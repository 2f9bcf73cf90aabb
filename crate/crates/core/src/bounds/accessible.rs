//! Accessible information of pure-state ensembles on `B ⊗ C` and the
//! entropic bound `I(X:Y) ≤ S(ρ_B) + S(ρ_C) − Ē` for PPT measurements.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::channel::validate_distribution;
use crate::detector::PovmElement;
use crate::error::{Error, Result};
use crate::metrics::{entanglement_e, matrix_entropy, shannon_mutual_information};
use crate::tensor::{
    partial_trace_matrix, BipartiteShape, CMat, PureStateVector, Subsystem, C64,
};
use crate::tolerance::{TAU_PSD, TAU_UNIT};

#[derive(Debug, Clone)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<PureStateVector>,
    shape: BipartiteShape,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<PureStateVector>) -> Result<Self> {
        if probs.len() != states.len() || states.is_empty() {
            return Err(Error::Dimension(format!(
                "{} probabilities for {} states",
                probs.len(),
                states.len()
            )));
        }
        validate_distribution(&probs)?;
        let shape = states[0].require_shape()?;
        for s in &states {
            if s.require_shape()? != shape {
                return Err(Error::Dimension("ensemble states differ in shape".into()));
            }
        }
        Ok(Self {
            probs,
            states,
            shape,
        })
    }

    /// Uniform weights.
    pub fn uniform(states: Vec<PureStateVector>) -> Result<Self> {
        let n = states.len().max(1);
        Self::new(vec![1.0 / n as f64; states.len()], states)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[PureStateVector] {
        &self.states
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    /// `ρ_BC = Σ p_i φ_i`.
    pub fn average(&self) -> CMat {
        let n = self.shape.total();
        self.probs
            .iter()
            .zip(&self.states)
            .fold(CMat::zeros(n, n), |acc, (&p, s)| acc + s.projector() * C64::from(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BadziagBound {
    pub value: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub mean_entanglement: f64,
}

/// `S(ρ_B) + S(ρ_C) − Σ p_i E(φ_i)`.
pub fn badziag_bound(ens: &Ensemble) -> Result<BadziagBound> {
    let avg = ens.average();
    let s_b = matrix_entropy(&partial_trace_matrix(&avg, ens.shape, Subsystem::B)?);
    let s_c = matrix_entropy(&partial_trace_matrix(&avg, ens.shape, Subsystem::C)?);
    let mut mean_entanglement = 0.0;
    for (&p, s) in ens.probs.iter().zip(&ens.states) {
        mean_entanglement += p * entanglement_e(s)?;
    }
    Ok(BadziagBound {
        value: s_b + s_c - mean_entanglement,
        s_b,
        s_c,
        mean_entanglement,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AccessibleInformation {
    pub value: f64,
    /// `joint[(i, j)] = p_i tr(φ_i M_j)`.
    #[serde(skip)]
    pub joint: DMatrix<f64>,
    /// Per element: `min eig(M_j^Γ) ≥ −τ_psd`.
    pub ppt_flags: Vec<bool>,
    pub all_ppt: bool,
}

/// Mutual information between the ensemble label and the outcome of `povm`.
pub fn accessible_information(ens: &Ensemble, povm: &[PovmElement]) -> Result<AccessibleInformation> {
    if povm.is_empty() {
        return Err(Error::PovmIncomplete(f64::INFINITY));
    }
    let n = ens.shape.total();
    let mut sum = CMat::zeros(n, n);
    for m in povm {
        if m.shape() != ens.shape {
            return Err(Error::Dimension("POVM and ensemble shapes differ".into()));
        }
        sum += m.matrix();
    }
    let dev = (sum - CMat::identity(n, n)).norm();
    if dev > TAU_UNIT.max(1e-9 * n as f64) {
        return Err(Error::PovmIncomplete(dev));
    }
    let mut joint = DMatrix::<f64>::zeros(ens.states.len(), povm.len());
    for (i, (&p, s)) in ens.probs.iter().zip(&ens.states).enumerate() {
        for (j, m) in povm.iter().enumerate() {
            joint[(i, j)] = (p * m.acceptance(s)).max(0.0);
        }
    }
    let total: f64 = joint.iter().sum();
    joint /= total;
    let ppt_flags: Vec<bool> = povm
        .iter()
        .map(|m| match m.ppt_certificate() {
            Some(v) => v >= -TAU_PSD,
            None => m.ppt_check(TAU_PSD).is_ppt,
        })
        .collect();
    Ok(AccessibleInformation {
        value: shannon_mutual_information(&joint)?,
        all_ppt: ppt_flags.iter().all(|&f| f),
        ppt_flags,
        joint,
    })
}

/// The four Bell vectors on `2 × 2`.
pub fn bell_states() -> Vec<PureStateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let shape = BipartiteShape::new(2, 2).expect("static shape");
    [[h, 0.0, 0.0, h], [h, 0.0, 0.0, -h], [0.0, h, h, 0.0], [0.0, h, -h, 0.0]]
        .iter()
        .map(|a| {
            let v = crate::tensor::CVec::from_iterator(4, a.iter().map(|&x| C64::from(x)));
            PureStateVector::bipartite(v, shape).expect("unit vector")
        })
        .collect()
}

/// Rank-one projectors onto an orthonormal basis, as POVM elements.
pub fn projective_povm(basis: &[PureStateVector]) -> Result<Vec<PovmElement>> {
    basis
        .iter()
        .map(|s| PovmElement::new(s.projector(), s.require_shape()?).map(PovmElement::certified))
        .collect()
}

/// Computational product basis of `shape`.
pub fn product_basis(shape: BipartiteShape) -> Vec<PureStateVector> {
    (0..shape.total())
        .map(|k| {
            PureStateVector::basis(shape.total(), k)
                .with_shape(shape)
                .expect("dimension matches")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::tensor::{haar_unitary, kron, random_bipartite_pure, CVec};
    use crate::tolerance::TAU_ENT;

    #[test]
    fn product_ensemble_attains_the_bound() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        let basis = product_basis(shape);
        let ens = Ensemble::uniform(basis.clone()).unwrap();
        let b = badziag_bound(&ens).unwrap();
        assert!((b.value - 2.0).abs() < 1e-9);
        let acc = accessible_information(&ens, &projective_povm(&basis).unwrap()).unwrap();
        assert!((acc.value - 2.0).abs() < 1e-9);
        assert!(acc.all_ppt);
    }

    #[test]
    fn bell_measurement_beats_the_bound_and_is_not_ppt() {
        let bell = bell_states();
        let ens = Ensemble::uniform(bell.clone()).unwrap();
        let b = badziag_bound(&ens).unwrap();
        assert!((b.value - 1.0).abs() < 1e-9);
        let acc = accessible_information(&ens, &projective_povm(&bell).unwrap()).unwrap();
        assert!((acc.value - 2.0).abs() < 1e-9);
        assert_eq!(acc.ppt_flags, vec![false; 4]);
    }

    #[test]
    fn trivial_povm_carries_no_information() {
        let ens = Ensemble::uniform(bell_states()).unwrap();
        let shape = ens.shape();
        let m = PovmElement::new(CMat::identity(4, 4), shape).unwrap();
        let acc = accessible_information(&ens, &[m]).unwrap();
        assert!(acc.value.abs() < 1e-12);
    }

    #[test]
    fn incomplete_povm_is_rejected() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        let ens = Ensemble::uniform(product_basis(shape)).unwrap();
        let m = PovmElement::new(CMat::identity(4, 4) * C64::from(0.5), shape).unwrap();
        assert!(matches!(accessible_information(&ens, &[m]), Err(Error::PovmIncomplete(_))));
    }

    #[test]
    fn single_state_bound_is_nonnegative() {
        let mut rng = stream_rng(8, 0);
        for _ in 0..50 {
            let psi = random_bipartite_pure(&mut rng, BipartiteShape::new(2, 3).unwrap());
            let b = badziag_bound(&Ensemble::uniform(vec![psi]).unwrap()).unwrap();
            assert!(b.value >= -TAU_ENT);
        }
    }

    #[test]
    fn local_product_measurements_respect_the_bound() {
        let mut rng = stream_rng(9, 0);
        for (db, dc) in [(2, 2), (2, 3)] {
            let shape = BipartiteShape::new(db, dc).unwrap();
            for _ in 0..30 {
                let states: Vec<_> = (0..4).map(|_| random_bipartite_pure(&mut rng, shape)).collect();
                let ens = Ensemble::uniform(states).unwrap();
                let local = kron(&haar_unitary(&mut rng, db), &haar_unitary(&mut rng, dc));
                let basis: Vec<_> = (0..shape.total())
                    .map(|k| {
                        let col: CVec = local.column(k).into_owned();
                        PureStateVector::bipartite(col, shape).unwrap()
                    })
                    .collect();
                let acc = accessible_information(&ens, &projective_povm(&basis).unwrap()).unwrap();
                assert!(acc.all_ppt);
                assert!(acc.value <= badziag_bound(&ens).unwrap().value + TAU_ENT);
            }
        }
    }
}
