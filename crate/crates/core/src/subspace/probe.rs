//! Two-copy probe of minimum-entanglement additivity on `S ⊗ S`.

use serde::Serialize;

use super::{min_entanglement, MinEntanglementConfig, SubspaceSpec};
use crate::error::{Error, Result};
use crate::tensor::{BipartiteShape, CMat};
use crate::tolerance::TAU_OPT;

/// Tag for values produced by a minimizer, hence upper bounds on minima.
pub const ESTIMATE_TAG: &str = "estimate-only";
/// Largest `(d_B·d_C)²` the probe accepts.
pub const MAX_PROBE_TOTAL: usize = 81;

/// `S ⊗ S` inside `(B₁B₂) ⊗ (C₁C₂)`.
pub fn two_copy_subspace(sub: &SubspaceSpec) -> Result<SubspaceSpec> {
    let s = sub.shape();
    let (db, dc) = (s.dim_b, s.dim_c);
    let n = s.total();
    let shape2 = BipartiteShape::new(db * db, dc * dc)?;
    let k = sub.k();
    let v = sub.matrix();
    let mut m = CMat::zeros(n * n, k * k);
    for i in 0..k {
        for j in 0..k {
            let col = i * k + j;
            for (b1, c1, b2, c2) in (0..db).flat_map(|b1| {
                (0..dc).flat_map(move |c1| {
                    (0..db).flat_map(move |b2| (0..dc).map(move |c2| (b1, c1, b2, c2)))
                })
            }) {
                let amp = v[(s.index(b1, c1), i)] * v[(s.index(b2, c2), j)];
                m[(shape2.index(b1 * db + b2, c1 * dc + c2), col)] = amp;
            }
        }
    }
    SubspaceSpec::from_matrix(m, shape2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperadditivityProbe {
    pub single_copy_min: f64,
    pub two_copy_min: f64,
    /// `two_copy_min / (2·single_copy_min)`; `1` when the single-copy
    /// minimum is below the optimizer tolerance.
    pub ratio: f64,
    pub tags: Vec<String>,
}

/// Estimates both minima with the same optimizer settings.
pub fn two_copy_superadditivity_probe(
    sub: &SubspaceSpec,
    cfg: &MinEntanglementConfig,
) -> Result<SuperadditivityProbe> {
    let total = sub.shape().total();
    if total * total > MAX_PROBE_TOTAL {
        return Err(Error::Scale(format!(
            "two-copy probe needs (d_B·d_C)² ≤ {MAX_PROBE_TOTAL}, got {}",
            total * total
        )));
    }
    let single = min_entanglement(sub, cfg)?.value;
    let double = min_entanglement(&two_copy_subspace(sub)?, cfg)?.value;
    let ratio = if 2.0 * single <= TAU_OPT {
        1.0
    } else {
        double / (2.0 * single)
    };
    Ok(SuperadditivityProbe {
        single_copy_min: single,
        two_copy_min: double,
        ratio,
        tags: vec![ESTIMATE_TAG.to_string()],
    })
}
