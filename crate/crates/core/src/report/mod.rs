//! Batch runs: load channel specs, evaluate the selected analyses and
//! assemble a deterministic report.

mod emit;
mod schema;

pub use emit::{emit, round_sig, round_value, EMIT_SIG_DIGITS};
pub use schema::{validate, SchemaViolation, CHANNEL_SPEC_SCHEMA, REPORT_SCHEMA};

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{
    accessible_information, badziag_bound, chain_check_with, channel_digest, digest_parts,
    lower_bound_aggregate, optimize_thm5_gamma, product_basis, projective_povm, q_capacity,
    upper_bound_cor6, upper_bound_thm4, BoundEntry, BoundKind, BoundReport, BoundUnit,
    CapacityLevel, CapacityOptimizerConfig, ChainViolation, Ensemble, LowerBoundBranch,
    CONDITIONAL_TAG,
};
use crate::channel::{ChannelDims, ChannelSpec, StinespringIsometry};
use crate::detector::{min_trace_ppt_detector, verify_detector_lemma, SolverConfig};
use crate::error::Error;
use crate::metrics::{entanglement_e, verify_metric_inequalities};
use crate::rng::stream_rng;
use crate::subspace::{
    example_metadata, min_entanglement, MinEntanglementConfig, SubspaceSpec, ESTIMATE_TAG,
};
use crate::tensor::{random_density, DensityOperator};
use crate::tolerance::{TAU_ENT, TAU_OPT, TAU_PSD};

/// Report format version.
pub const SCHEMA_VERSION: &str = "1.0.0";
/// Error levels at which the detector analysis is run.
pub const DETECTOR_EPSILONS: [f64; 3] = [0.0, 0.05, 0.1];
/// Random pairs in the metric suite.
pub const METRIC_SUITE_PAIRS: usize = 10_000;
/// Feasibility residual accepted from the detector solver.
pub const DETECTOR_RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    QCapacity,
    LowerBounds,
    Badziag,
    Detector,
    UpperBounds,
    SubspaceExample,
    MetricSuite,
}

impl Analysis {
    pub const ALL: [Analysis; 7] = [
        Analysis::QCapacity,
        Analysis::LowerBounds,
        Analysis::Badziag,
        Analysis::Detector,
        Analysis::UpperBounds,
        Analysis::SubspaceExample,
        Analysis::MetricSuite,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Analysis::QCapacity => "q_capacity",
            Analysis::LowerBounds => "lower_bounds",
            Analysis::Badziag => "badziag",
            Analysis::Detector => "detector",
            Analysis::UpperBounds => "upper_bounds",
            Analysis::SubspaceExample => "subspace_example",
            Analysis::MetricSuite => "metric_suite",
        }
    }
}

impl FromStr for Analysis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Analysis::ALL
            .iter()
            .find(|a| a.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown analysis '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => Err(format!("unknown format '{s}'")),
        }
    }
}

/// Tolerance overrides accepted by `--tol KEY=VAL`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Slack for entropic inequalities and the capacity chain.
    pub tau_ent: f64,
    /// Agreement between optimizer multistarts.
    pub tau_opt: f64,
    /// PPT membership tolerance.
    pub tau_psd: f64,
    /// Error probability fed to the code-size bounds.
    pub epsilon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau_ent: TAU_ENT,
            tau_opt: TAU_OPT,
            tau_psd: TAU_PSD,
            epsilon: 0.05,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 4] = ["tau_ent", "tau_opt", "tau_psd", "epsilon"];

    /// Applies one `KEY=VAL` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), String> {
        let (key, val) = assignment
            .split_once('=')
            .ok_or_else(|| format!("expected KEY=VAL, got '{assignment}'"))?;
        let x: f64 = val
            .trim()
            .parse()
            .map_err(|_| format!("tolerance '{key}' needs a number, got '{val}'"))?;
        if !x.is_finite() || x < 0.0 {
            return Err(format!("tolerance '{key}' must be a nonnegative number"));
        }
        match key.trim() {
            "tau_ent" => self.tau_ent = x,
            "tau_opt" => self.tau_opt = x,
            "tau_psd" => self.tau_psd = x,
            "epsilon" if x < 1.0 => self.epsilon = x,
            "epsilon" => return Err("epsilon must lie in [0, 1)".into()),
            other => {
                return Err(format!(
                    "unknown tolerance '{other}' (expected one of {})",
                    Self::KEYS.join(", ")
                ))
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub specs: Vec<PathBuf>,
    /// Deduplicated, in canonical order.
    pub analyses: Vec<Analysis>,
    pub seed: u64,
    pub format: OutputFormat,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(
        specs: Vec<PathBuf>,
        analyses: impl IntoIterator<Item = Analysis>,
        seed: u64,
        format: OutputFormat,
        tolerances: Tolerances,
    ) -> Result<Self, RunError> {
        let mut analyses: Vec<Analysis> = analyses.into_iter().collect();
        analyses.sort();
        analyses.dedup();
        if analyses.is_empty() {
            return Err(RunError::config("at least one analysis must be selected"));
        }
        Ok(Self {
            specs,
            analyses,
            seed,
            format,
            tolerances,
        })
    }

    /// Parses a comma-separated analysis list.
    pub fn parse_analyses(list: &str) -> Result<Vec<Analysis>, RunError> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(RunError::config))
            .collect()
    }

    fn has(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ExitStatus {
    Ok = 0,
    ConfigError = 2,
    InputError = 3,
    NonConvergence = 4,
    InvariantViolation = 5,
}

impl ExitStatus {
    pub fn code(&self) -> i32 {
        *self as i32
    }
}

/// Failure before any report exists.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub status: ExitStatus,
    pub message: String,
}

impl RunError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::ConfigError,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self {
            status: ExitStatus::InputError,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone, Serialize)]
pub struct ChannelSection {
    pub name: String,
    pub source: String,
    pub channel_type: String,
    pub dims: ChannelDims,
    pub inputs_digest: String,
    pub entries: Vec<BoundEntry>,
    pub chain_violations: Vec<ChainViolation>,
    pub details: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalSection {
    pub analysis: String,
    pub anchor: String,
    pub entries: Vec<BoundEntry>,
    pub details: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunStatus {
    pub exit_code: i32,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: String,
    pub seed: u64,
    pub analyses: Vec<Analysis>,
    pub tolerances: Tolerances,
    pub channels: Vec<ChannelSection>,
    pub global: Vec<GlobalSection>,
    pub status: RunStatus,
}

impl RunReport {
    /// Report with no sections, for header-only documents.
    pub fn empty(seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            seed,
            analyses: Vec::new(),
            tolerances: Tolerances::default(),
            channels: Vec::new(),
            global: Vec::new(),
            status: RunStatus {
                exit_code: 0,
                reasons: Vec::new(),
            },
        }
    }

    pub fn exit_status(&self) -> ExitStatus {
        match self.status.exit_code {
            0 => ExitStatus::Ok,
            4 => ExitStatus::NonConvergence,
            _ => ExitStatus::InvariantViolation,
        }
    }

    /// Every entry with the name of the section it belongs to.
    pub fn all_entries(&self) -> Vec<(&str, &BoundEntry)> {
        let mut out: Vec<(&str, &BoundEntry)> = Vec::new();
        for c in &self.channels {
            out.extend(c.entries.iter().map(|e| (c.name.as_str(), e)));
        }
        for g in &self.global {
            out.extend(g.entries.iter().map(|e| (g.analysis.as_str(), e)));
        }
        out
    }
}

/// Issues found while running analyses; the most severe sets the exit code.
#[derive(Debug, Default)]
struct Issues(Vec<(ExitStatus, String)>);

impl Issues {
    fn nonconverged(&mut self, what: String) {
        self.0.push((ExitStatus::NonConvergence, what));
    }

    fn violation(&mut self, what: String) {
        self.0.push((ExitStatus::InvariantViolation, what));
    }
}

struct LoadedSpec {
    source: String,
    spec: ChannelSpec,
    channel: StinespringIsometry,
}

fn load(path: &PathBuf) -> Result<LoadedSpec, RunError> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::input(format!("cannot read {source}: {e}")))?;
    let spec = ChannelSpec::parse(&text).map_err(|e| RunError::input(format!("{source}: {e}")))?;
    let channel = spec
        .build()
        .map_err(|e| RunError::input(format!("{source}: {e}")))?;
    Ok(LoadedSpec {
        source,
        spec,
        channel,
    })
}

/// Runs every selected analysis. Input problems abort with an error; analysis
/// problems are recorded in the report status.
pub fn run(config: &RunConfig) -> Result<RunReport, RunError> {
    let loaded = config.specs.iter().map(load).collect::<Result<Vec<_>, _>>()?;

    let per_channel: Vec<(ChannelSection, Issues)> = loaded
        .par_iter()
        .enumerate()
        .map(|(i, l)| analyze_channel(config, i, l))
        .collect();

    let mut issues = Issues::default();
    let mut channels = Vec::new();
    for (section, mut found) in per_channel {
        issues.0.append(&mut found.0);
        channels.push(section);
    }

    let mut global = Vec::new();
    if config.has(Analysis::SubspaceExample) {
        global.push(subspace_example_section(&mut issues));
    }
    if config.has(Analysis::MetricSuite) {
        global.push(metric_suite_section(config, &mut issues));
    }

    let worst = issues
        .0
        .iter()
        .map(|(s, _)| *s)
        .max()
        .unwrap_or(ExitStatus::Ok);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION.to_string(),
        seed: config.seed,
        analyses: config.analyses.clone(),
        tolerances: config.tolerances,
        channels,
        global,
        status: RunStatus {
            exit_code: worst.code(),
            reasons: issues.0.into_iter().map(|(_, r)| r).collect(),
        },
    })
}

fn analyze_channel(config: &RunConfig, index: usize, l: &LoadedSpec) -> (ChannelSection, Issues) {
    let u = &l.channel;
    let dims = u.dims();
    let name = l
        .spec
        .name
        .clone()
        .unwrap_or_else(|| format!("channel_{index}"));
    let digest = channel_digest(u);
    let tol = config.tolerances;
    let mut issues = Issues::default();
    let mut report = BoundReport::default();
    let mut details = BTreeMap::new();
    let mut notes = Vec::new();

    let entry = |e: BoundEntry| e.digest(digest.clone());

    let mut achiever: Option<DensityOperator> = None;
    if config.has(Analysis::QCapacity) || config.has(Analysis::LowerBounds) {
        let cfg = CapacityOptimizerConfig {
            seed: config.seed,
            tolerance: tol.tau_opt,
            ..Default::default()
        };
        match q_capacity(u, &cfg) {
            Ok(r) => {
                if config.has(Analysis::QCapacity) {
                    if !r.converged {
                        issues.nonconverged(format!("{name}: q_capacity multistarts disagree"));
                    }
                    report.push(entry(
                        BoundEntry::new(
                            "q_capacity",
                            "Thm 1",
                            BoundKind::Lower,
                            CapacityLevel::QuantumAssisted,
                            r.value,
                        )
                        .param("starts", cfg.starts as f64)
                        .param("max_iters", cfg.max_iters as f64)
                        .param("input_entropy", r.input_entropy)
                        .param("output_entropy", r.output_entropy)
                        .param("converged", if r.converged { 1.0 } else { 0.0 })
                        .tag("optimizer-estimate"),
                    ));
                }
                achiever = Some(r.state);
            }
            Err(e) => issues.violation(format!("{name}: q_capacity failed: {e}")),
        }
    }

    if config.has(Analysis::LowerBounds) {
        let extra: Vec<DensityOperator> = achiever.iter().cloned().collect();
        match lower_bound_aggregate(u, &extra) {
            Ok(agg) => {
                report.push(entry(
                    BoundEntry::new(
                        "lower_bound_aggregate",
                        agg.winner.branch.anchor(),
                        BoundKind::Lower,
                        CapacityLevel::OneWay,
                        agg.value,
                    )
                    .param("winner_state", agg.winner.state as f64)
                    .tag(branch_tag(agg.winner.branch)),
                ));
                let floor = 0.5 * (dims.a as f64).log2();
                report.push(entry(
                    BoundEntry::new(
                        "lower_bound_half_log_da",
                        "Cor 1, Eq. (6)",
                        BoundKind::Lower,
                        CapacityLevel::OneWay,
                        floor,
                    )
                    .param("d_a", dims.a as f64),
                ));
                if agg.value < floor - tol.tau_ent {
                    issues.violation(format!("{name}: aggregate lower bound below ½ log d_A"));
                }
                details.insert(
                    "lower_bound_triples".into(),
                    json!(agg
                        .triples
                        .iter()
                        .map(|t| json!({"s_a": t.s_a, "s_b": t.s_b, "s_c": t.s_c}))
                        .collect::<Vec<_>>()),
                );
            }
            Err(e) => issues.violation(format!("{name}: lower bounds failed: {e}")),
        }
    }

    if config.has(Analysis::Badziag) {
        if let Err(e) = badziag_analysis(u, &name, &mut report, &mut issues, tol, &digest) {
            issues.violation(format!("{name}: badziag analysis failed: {e}"));
        }
    }

    if config.has(Analysis::Detector) {
        let n = dims.b * dims.c;
        if n > crate::detector::MAX_SOLVER_DIM {
            notes.push(format!(
                "detector skipped: d_B·d_C = {n} exceeds {}",
                crate::detector::MAX_SOLVER_DIM
            ));
        } else if let Err(e) = detector_analysis(u, &name, &mut report, &mut issues, &digest) {
            issues.violation(format!("{name}: detector analysis failed: {e}"));
        }
    }

    if config.has(Analysis::UpperBounds) {
        if dims.b > dims.c {
            notes.push("upper bounds skipped: they require d_B ≤ d_C".into());
        } else if let Err(e) =
            upper_bounds_analysis(config, u, &name, &mut report, &mut issues, &mut notes, &digest)
        {
            issues.violation(format!("{name}: upper bounds failed: {e}"));
        }
    }

    let chain_violations = chain_check_with(u, &report, tol.tau_ent);
    for v in &chain_violations {
        issues.violation(format!(
            "{name}: chain violation {} ({}) > {} ({})",
            v.lower, v.lower_value, v.upper, v.upper_value
        ));
    }

    (
        ChannelSection {
            name,
            source: l.source.clone(),
            channel_type: l.spec.kind.type_name().to_string(),
            dims,
            inputs_digest: digest,
            entries: report.entries,
            chain_violations,
            details,
            notes,
        },
        issues,
    )
}

fn branch_tag(b: LowerBoundBranch) -> String {
    match serde_json::to_value(b) {
        Ok(Value::String(s)) => s,
        _ => format!("{b:?}"),
    }
}

fn image_states(u: &StinespringIsometry) -> Vec<crate::tensor::PureStateVector> {
    (0..u.dims().a).map(|i| u.image_state(i)).collect()
}

fn badziag_analysis(
    u: &StinespringIsometry,
    name: &str,
    report: &mut BoundReport,
    issues: &mut Issues,
    tol: Tolerances,
    digest: &str,
) -> crate::Result<()> {
    let ens = Ensemble::uniform(image_states(u))?;
    let bound = badziag_bound(&ens)?;
    let povm = projective_povm(&product_basis(ens.shape()))?;
    let acc = accessible_information(&ens, &povm)?;
    report.push(
        BoundEntry::new("badziag_bound", "Prop 3, Eq. (7)", BoundKind::Upper, CapacityLevel::Ppt, bound.value)
            .unit(BoundUnit::OneShotBits)
            .param("s_b", bound.s_b)
            .param("s_c", bound.s_c)
            .param("mean_entanglement", bound.mean_entanglement)
            .digest(digest),
    );
    report.push(
        BoundEntry::new(
            "accessible_information_local",
            "Prop 3",
            BoundKind::Lower,
            CapacityLevel::Ppt,
            acc.value,
        )
        .unit(BoundUnit::OneShotBits)
        .param("all_ppt", if acc.all_ppt { 1.0 } else { 0.0 })
        .tag("computational-product-measurement")
        .digest(digest),
    );
    if acc.all_ppt && acc.value > bound.value + tol.tau_ent {
        issues.violation(format!(
            "{name}: PPT accessible information {} exceeds bound {}",
            acc.value, bound.value
        ));
    }
    Ok(())
}

fn detector_analysis(
    u: &StinespringIsometry,
    name: &str,
    report: &mut BoundReport,
    issues: &mut Issues,
    digest: &str,
) -> crate::Result<()> {
    let psi = u.image_state(0);
    let cfg = SolverConfig::default();
    for eps in DETECTOR_EPSILONS {
        let sol = min_trace_ppt_detector(&psi, eps, &cfg)?;
        let lemma = verify_detector_lemma(&psi, &sol.element)?;
        let residual = sol.residuals.max();
        report.push(
            BoundEntry::new(
                "detector_min_trace",
                "Lemma 3 (solver)",
                BoundKind::Upper,
                CapacityLevel::Ppt,
                sol.trace,
            )
            .unit(BoundUnit::Trace)
            .param("epsilon", eps)
            .param("max_residual", residual)
            .param("iterations", sol.iterations as f64)
            .digest(digest),
        );
        report.push(
            BoundEntry::new(
                "detector_small_delta",
                "Lemma 3, Eq. (8)",
                BoundKind::Lower,
                CapacityLevel::Ppt,
                lemma.bounds.small_delta,
            )
            .unit(BoundUnit::Trace)
            .param("epsilon", lemma.epsilon)
            .param("delta_cap", lemma.delta_cap)
            .digest(digest),
        );
        let mut large = BoundEntry::new(
            "detector_large_delta",
            "Lemma 3, Eq. (9)",
            BoundKind::Lower,
            CapacityLevel::Ppt,
            lemma.bounds.large_delta,
        )
        .unit(BoundUnit::Trace)
        .param("epsilon", lemma.epsilon)
        .param("delta_cap", lemma.delta_cap)
        .digest(digest);
        if let Some(k) = lemma.bounds.k_opt {
            large = large.param("k_opt", k);
        }
        report.push(large);
        if residual > DETECTOR_RESIDUAL_TOL {
            issues.violation(format!("{name}: detector residual {residual:e} at epsilon {eps}"));
        }
        if !lemma.holds {
            issues.violation(format!("{name}: detector lemma violated at epsilon {eps}"));
        }
        if !sol.converged {
            issues.nonconverged(format!("{name}: detector solver hit its iteration cap at epsilon {eps}"));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn upper_bounds_analysis(
    config: &RunConfig,
    u: &StinespringIsometry,
    name: &str,
    report: &mut BoundReport,
    issues: &mut Issues,
    notes: &mut Vec<String>,
    digest: &str,
) -> crate::Result<()> {
    let dims = u.dims();
    let sub = SubspaceSpec::from_matrix(u.matrix().clone(), u.output_shape())?;
    let cfg = MinEntanglementConfig {
        seed: config.seed,
        agreement: config.tolerances.tau_opt,
        ..Default::default()
    };
    let min_e = min_entanglement(&sub, &cfg)?;
    if !min_e.converged {
        issues.nonconverged(format!("{name}: min_entanglement multistarts disagree"));
    }
    let log_db = (dims.b as f64).log2();
    let delta = (log_db - min_e.value).max(0.0);
    let cor6 = upper_bound_cor6(dims.c, delta)?;
    let mut e = BoundEntry::new("upper_bound_cor6", "Cor 6", BoundKind::Upper, CapacityLevel::Ppt, cor6.value)
        .param("delta", delta)
        .param("min_entanglement", min_e.value)
        .tag(ESTIMATE_TAG)
        .digest(digest);
    for t in &cor6.tags {
        e = e.tag(t.clone());
    }
    debug_assert!(e.has_tag(CONDITIONAL_TAG));
    report.push(e);

    let eps = config.tolerances.epsilon;
    match upper_bound_thm4(dims.b, dims.c, eps, delta) {
        Ok(v) => report.push(
            BoundEntry::new("upper_bound_thm4", "Thm 4", BoundKind::Upper, CapacityLevel::Ppt, v)
                .unit(BoundUnit::CodeSize)
                .param("epsilon", eps)
                .param("delta", delta)
                .tag(ESTIMATE_TAG)
                .digest(digest),
        ),
        Err(Error::Domain(m)) => notes.push(format!("upper_bound_thm4 not applicable: {m}")),
        Err(e) => return Err(e),
    }

    let deltas: Vec<f64> = image_states(u)
        .iter()
        .map(|s| entanglement_e(s).map(|x| (log_db - x).max(0.0)))
        .collect::<crate::Result<_>>()?;
    match optimize_thm5_gamma(dims.b, dims.c, eps, &deltas) {
        Ok(opt) => report.push(
            BoundEntry::new(
                "upper_bound_thm5",
                "Thm 5",
                BoundKind::Upper,
                CapacityLevel::Ppt,
                opt.bound.harmonic,
            )
            .unit(BoundUnit::CodeSize)
            .param("epsilon", eps)
            .param("gamma", opt.gamma)
            .param("relaxed", opt.bound.relaxed)
            .param("log2_harmonic", opt.bound.log2_harmonic)
            .tag("basis-signals")
            .digest(digest),
        ),
        Err(Error::Domain(m)) => notes.push(format!("upper_bound_thm5 not applicable: {m}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn subspace_example_section(issues: &mut Issues) -> GlobalSection {
    let mut entries = Vec::new();
    let mut details = BTreeMap::new();
    let mut notes = Vec::new();
    for d in [256usize, 8] {
        match example_metadata(d) {
            Ok(m) => {
                let digest = digest_parts(&[b"subspace_example", &(d as u64).to_le_bytes()]);
                entries.push(
                    BoundEntry::new(
                        format!("prop7_dimension_d{d}"),
                        "Prop 7",
                        BoundKind::Lower,
                        CapacityLevel::InputDimension,
                        m.d_a as f64,
                    )
                    .unit(BoundUnit::Dimension)
                    .param("d", d as f64)
                    .param("alpha", m.alpha)
                    .param("coefficient", m.coefficient)
                    .digest(digest.clone()),
                );
                entries.push(
                    BoundEntry::new(
                        format!("example_lower_bound_d{d}"),
                        "Cor 1, Eq. (6)",
                        BoundKind::Lower,
                        CapacityLevel::OneWay,
                        m.lower_bound,
                    )
                    .param("d_a", m.d_a as f64)
                    .digest(digest.clone()),
                );
                let mut upper = BoundEntry::new(
                    format!("example_conditional_upper_d{d}"),
                    "Sec. V, Cor 6",
                    BoundKind::Upper,
                    CapacityLevel::Ppt,
                    m.conditional_upper,
                )
                .param("deficit", m.quoted_deficit)
                .param("formula_deficit", m.entanglement_floor.deficit)
                .param("upper_expression_value", m.upper_expression_value)
                .tag(CONDITIONAL_TAG)
                .digest(digest);
                if m.trivial_regime {
                    upper = upper.tag("trivial-regime");
                }
                entries.push(upper);
                details.insert(format!("d{d}"), serde_json::to_value(&m).unwrap_or(Value::Null));
            }
            Err(e) => {
                issues.violation(format!("subspace_example d = {d}: {e}"));
                notes.push(format!("d = {d}: {e}"));
            }
        }
    }
    GlobalSection {
        analysis: Analysis::SubspaceExample.name().into(),
        anchor: "Prop 7, Sec. V".into(),
        entries,
        details,
        notes,
    }
}

fn metric_suite_section(config: &RunConfig, issues: &mut Issues) -> GlobalSection {
    let tau = config.tolerances.tau_ent;
    let results: Vec<(f64, f64, f64)> = (0..METRIC_SUITE_PAIRS)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(config.seed, i as u64);
            let dim = 2 + i % 7;
            let rho = random_density(&mut rng, dim, 1 + (i / 7) % dim);
            let sigma = random_density(&mut rng, dim, 1 + (i / 49) % dim);
            match verify_metric_inequalities(&rho, &sigma) {
                Ok(r) => (r.fvdg_lower_slack, r.fvdg_upper_slack, r.pinsker_slack),
                Err(_) => (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            }
        })
        .collect();
    let min_of = |f: fn(&(f64, f64, f64)) -> f64| results.iter().map(f).fold(f64::INFINITY, f64::min);
    let count = |f: fn(&(f64, f64, f64)) -> f64| results.iter().filter(|r| f(r) < -tau).count();
    let (lo, up, pin) = (min_of(|r| r.0), min_of(|r| r.1), min_of(|r| r.2));
    let violations = count(|r| r.0) + count(|r| r.1) + count(|r| r.2);
    if violations > 0 {
        issues.violation(format!("metric_suite: {violations} inequality violations"));
    }
    let mut details = BTreeMap::new();
    details.insert("pairs".into(), json!(METRIC_SUITE_PAIRS));
    details.insert("violations".into(), json!(violations));
    details.insert("min_slack_fuchs_van_de_graaf_lower".into(), json!(lo));
    details.insert("min_slack_fuchs_van_de_graaf_upper".into(), json!(up));
    details.insert("min_slack_pinsker".into(), json!(pin));
    GlobalSection {
        analysis: Analysis::MetricSuite.name().into(),
        anchor: "Lemma A1, Lemma A3".into(),
        entries: Vec::new(),
        details,
        notes: Vec::new(),
    }
}
