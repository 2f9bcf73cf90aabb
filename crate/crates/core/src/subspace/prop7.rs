//! Dimension and entanglement formulas for highly entangled random
//! subspaces, and the worked example built from them.

use serde::Serialize;

use super::{sample_random_subspace, SubspaceSpec};
use crate::channel::StinespringIsometry;
use crate::error::{Error, Result};

/// Absolute constant `Γ` of the dimension formula.
pub const GAMMA_CONST: f64 = 1.0 / 1753.0;
/// `α` of the worked example.
pub const EXAMPLE_ALPHA: f64 = 20.0;
/// Rounded entanglement deficit quoted for the worked example.
pub const QUOTED_DEFICIT: f64 = 21.5;
/// Closed form of the conditional upper bound of the worked example.
pub const EXAMPLE_UPPER_EXPRESSION: &str = "½ log d_A + 2.5 log log d_A + 27";
/// Largest `d_B·d_C·d_A` for which the example isometry is materialized.
pub const MAX_MATERIALIZED_ENTRIES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubspaceParams {
    pub alpha: f64,
    pub gamma_const: f64,
}

impl SubspaceParams {
    pub fn new(alpha: f64, gamma_const: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
        }
        if !(gamma_const > 0.0) {
            return Err(Error::Domain(format!("Gamma = {gamma_const} must be positive")));
        }
        Ok(Self { alpha, gamma_const })
    }

    /// `Γ = 1/1753`.
    pub fn with_alpha(alpha: f64) -> Result<Self> {
        Self::new(alpha, GAMMA_CONST)
    }
}

/// `Γ·α^{2.5}`.
pub fn prop7_coefficient(params: &SubspaceParams) -> f64 {
    params.gamma_const * params.alpha.powf(2.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop7Dimension {
    pub value: u64,
    /// Value before flooring.
    pub raw: f64,
    /// `α < log d_B`; outside this range the formula is evaluated but the
    /// guarantee does not apply.
    pub alpha_in_range: bool,
}

fn check_dims(d_b: usize, d_c: usize) -> Result<()> {
    if d_b < 3 || d_c < d_b {
        return Err(Error::Domain(format!(
            "requires d_C ≥ d_B ≥ 3, got d_B = {d_b}, d_C = {d_c}"
        )));
    }
    Ok(())
}

/// `⌊d_B d_C Γ α^{2.5} / (log d_B)^{2.5}⌋`.
pub fn prop7_dimension(d_b: usize, d_c: usize, params: &SubspaceParams) -> Result<Prop7Dimension> {
    check_dims(d_b, d_c)?;
    let log_db = (d_b as f64).log2();
    let raw = (d_b as f64) * (d_c as f64) * prop7_coefficient(params) / log_db.powf(2.5);
    Ok(Prop7Dimension {
        value: raw.floor() as u64,
        raw,
        alpha_in_range: params.alpha < log_db,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementFloor {
    /// `log d_B − (d_B/d_C)/ln 2 − α`.
    pub raw: f64,
    /// `max(0, raw)`.
    pub reported: f64,
    /// `(d_B/d_C)/ln 2 + α`.
    pub deficit: f64,
}

pub fn prop7_entanglement_floor(d_b: usize, d_c: usize, alpha: f64) -> Result<EntanglementFloor> {
    check_dims(d_b, d_c)?;
    SubspaceParams::with_alpha(alpha)?;
    let deficit = (d_b as f64 / d_c as f64) * std::f64::consts::LOG2_E + alpha;
    let raw = (d_b as f64).log2() - deficit;
    Ok(EntanglementFloor {
        raw,
        reported: raw.max(0.0),
        deficit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleMetadata {
    pub d: usize,
    pub d_a: u64,
    pub alpha: f64,
    pub coefficient: f64,
    pub entanglement_floor: EntanglementFloor,
    /// Rounded deficit quoted alongside the formula value.
    pub quoted_deficit: f64,
    /// `log d + 21.5`.
    pub conditional_upper: f64,
    /// `log d + deficit` from the unrounded formula.
    pub conditional_upper_formula: f64,
    pub upper_expression: String,
    /// The closed form evaluated at `d_A`.
    pub upper_expression_value: f64,
    /// `½ log d_A`, the matching lower bound.
    pub lower_bound: f64,
    /// `d_A ≤ d`: the channel is no better than a trivial one.
    pub trivial_regime: bool,
    pub alpha_in_range: bool,
}

/// Numbers of the worked example at `d_B = d_C = d`, `α = 20`.
pub fn example_metadata(d: usize) -> Result<ExampleMetadata> {
    let params = SubspaceParams::with_alpha(EXAMPLE_ALPHA)?;
    let dim = prop7_dimension(d, d, &params)?;
    if dim.value == 0 {
        return Err(Error::Domain(format!("dimension formula gives 0 at d = {d}")));
    }
    let floor = prop7_entanglement_floor(d, d, EXAMPLE_ALPHA)?;
    let log_d = (d as f64).log2();
    let log_da = (dim.value as f64).log2();
    let loglog = if log_da > 0.0 { log_da.log2() } else { f64::NEG_INFINITY };
    Ok(ExampleMetadata {
        d,
        d_a: dim.value,
        alpha: EXAMPLE_ALPHA,
        coefficient: prop7_coefficient(&params),
        entanglement_floor: floor,
        quoted_deficit: QUOTED_DEFICIT,
        conditional_upper: log_d + QUOTED_DEFICIT,
        conditional_upper_formula: log_d + floor.deficit,
        upper_expression: EXAMPLE_UPPER_EXPRESSION.to_string(),
        upper_expression_value: 0.5 * log_da + 2.5 * loglog + 27.0,
        lower_bound: 0.5 * log_da,
        trivial_regime: dim.value <= d as u64,
        alpha_in_range: dim.alpha_in_range,
    })
}

#[derive(Debug, Clone)]
pub struct ExampleChannel {
    pub metadata: ExampleMetadata,
    pub subspace: SubspaceSpec,
    pub channel: StinespringIsometry,
}

/// Samples the example subspace and its embedding channel. Refuses sizes
/// whose isometry would exceed `MAX_MATERIALIZED_ENTRIES` entries; the
/// metadata alone is available from [`example_metadata`] at any `d`.
pub fn build_example_channel(d: usize, seed: u64) -> Result<ExampleChannel> {
    let metadata = example_metadata(d)?;
    let entries = (d * d) as u128 * metadata.d_a as u128;
    if entries > MAX_MATERIALIZED_ENTRIES as u128 {
        return Err(Error::Scale(format!(
            "isometry with {entries} entries exceeds the cap {MAX_MATERIALIZED_ENTRIES}"
        )));
    }
    let subspace = sample_random_subspace(d, d, metadata.d_a as usize, seed)?;
    let channel = subspace.channel()?;
    Ok(ExampleChannel {
        metadata,
        subspace,
        channel,
    })
}
