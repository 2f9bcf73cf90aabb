//! Named bound values with provenance, and the capacity-chain consistency
//! check `Q_A ≤ C_A^→ ≤ C_A^↔ ≤ C_A^ppt ≤ log d_A`.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::channel::StinespringIsometry;
use crate::tolerance::TAU_ENT;

/// Position in the capacity chain, smallest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityLevel {
    /// `Q_A`.
    QuantumAssisted,
    /// `C_A^→`.
    OneWay,
    /// `C_A^↔`.
    TwoWay,
    /// `C_A^ppt`.
    Ppt,
    /// `log d_A`.
    InputDimension,
}

impl CapacityLevel {
    pub fn symbol(&self) -> &'static str {
        match self {
            CapacityLevel::QuantumAssisted => "Q_A",
            CapacityLevel::OneWay => "C_A^->",
            CapacityLevel::TwoWay => "C_A^<->",
            CapacityLevel::Ppt => "C_A^ppt",
            CapacityLevel::InputDimension => "log d_A",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundUnit {
    /// Rate in bits per channel use.
    Bits,
    /// Single-shot information in bits.
    OneShotBits,
    /// One-shot code size `N`.
    CodeSize,
    /// Trace of a POVM element.
    Trace,
    /// Subspace dimension.
    Dimension,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub bound_name: String,
    pub anchor: String,
    pub kind: BoundKind,
    pub level: CapacityLevel,
    pub unit: BoundUnit,
    pub value: f64,
    pub params: BTreeMap<String, f64>,
    pub tags: Vec<String>,
    pub inputs_digest: String,
}

impl BoundEntry {
    pub fn new(
        bound_name: impl Into<String>,
        anchor: impl Into<String>,
        kind: BoundKind,
        level: CapacityLevel,
        value: f64,
    ) -> Self {
        Self {
            bound_name: bound_name.into(),
            anchor: anchor.into(),
            kind,
            level,
            unit: BoundUnit::Bits,
            value,
            params: BTreeMap::new(),
            tags: Vec::new(),
            inputs_digest: String::new(),
        }
    }

    pub fn unit(mut self, unit: BoundUnit) -> Self {
        self.unit = unit;
        self
    }

    pub fn param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn tag(mut self, tag: impl Into<String>) -> Self {
        self.tags.push(tag.into());
        self
    }

    pub fn digest(mut self, digest: impl Into<String>) -> Self {
        self.inputs_digest = digest.into();
        self
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn push(&mut self, entry: BoundEntry) {
        self.entries.push(entry);
    }

    /// Lower bounds first, each group in chain order; stable otherwise.
    pub fn chain_ordered(&self) -> Vec<&BoundEntry> {
        let mut v: Vec<&BoundEntry> = self.entries.iter().collect();
        v.sort_by_key(|e| (e.kind, e.level));
        v
    }
}

/// Hex SHA-256 over length-prefixed parts.
pub fn digest_parts(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of the isometry's dimensions and entries.
pub fn channel_digest(u: &StinespringIsometry) -> String {
    let dims = u.dims();
    let mut bytes = Vec::with_capacity(24 + 16 * u.matrix().len());
    for d in [dims.a, dims.b, dims.c] {
        bytes.extend((d as u64).to_le_bytes());
    }
    for z in u.matrix().iter() {
        bytes.extend(z.re.to_le_bytes());
        bytes.extend(z.im.to_le_bytes());
    }
    digest_parts(&[&bytes])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainViolation {
    pub lower: String,
    pub lower_level: CapacityLevel,
    pub lower_value: f64,
    pub upper: String,
    pub upper_level: CapacityLevel,
    pub upper_value: f64,
    pub excess: f64,
}

/// Every rate lower bound on a capacity must sit below every rate upper
/// bound on the same or a larger capacity. The trivial upper bound `log d_A`
/// is always included. Conditional upper bounds take part only when they are
/// below `log d_A`.
pub fn chain_check(u: &StinespringIsometry, report: &BoundReport) -> Vec<ChainViolation> {
    chain_check_with(u, report, TAU_ENT)
}

/// [`chain_check`] with an explicit slack.
pub fn chain_check_with(
    u: &StinespringIsometry,
    report: &BoundReport,
    slack: f64,
) -> Vec<ChainViolation> {
    let log_da = (u.dims().a as f64).log2();
    let trivial = BoundEntry::new(
        "trivial_upper",
        "Sec. III, capacity chain",
        BoundKind::Upper,
        CapacityLevel::InputDimension,
        log_da,
    );
    let rates = || report.entries.iter().filter(|e| e.unit == BoundUnit::Bits);
    let uppers: Vec<&BoundEntry> = rates()
        .filter(|e| e.kind == BoundKind::Upper)
        .filter(|e| !e.has_tag(super::upper::CONDITIONAL_TAG) || e.value < log_da)
        .chain(std::iter::once(&trivial))
        .collect();
    let mut out = Vec::new();
    for lo in rates().filter(|e| e.kind == BoundKind::Lower) {
        for up in &uppers {
            if lo.level <= up.level && lo.value > up.value + slack {
                out.push(ChainViolation {
                    lower: lo.bound_name.clone(),
                    lower_level: lo.level,
                    lower_value: lo.value,
                    upper: up.bound_name.clone(),
                    upper_level: up.level,
                    upper_value: up.value,
                    excess: lo.value - up.value,
                });
            }
        }
    }
    out
}
