//! Scenario configs, the builtin catalog, and the check runner.
//!
//! A scenario is a versioned, human-editable TOML document: one norm, one
//! set (or a generated family of sets), a probe list, and a sequence of
//! checks. [`run_scenario`] executes the checks in dependency order and
//! returns a [`RunReport`] whose only nondeterministic field is
//! `wall_clock_ms` — everything else is reproducible byte for byte from
//! the config and its seed, because every random draw expands from that
//! seed through counter-based streams.
//!
//! Checks never abort the run: a failed invariant becomes a witness
//! string on the check outcome, an engine error becomes a diagnostic, and
//! the report records both. A scenario may declare `expect_witness = true`
//! on a check whose whole point is to exhibit a failure (a flat face, a
//! tie set, a projection jump); witnesses on any other check mark the run
//! as unexpectedly broken, which the CLI turns into a nonzero exit.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convexity::{
    modulus_of_convexity, strict_convexity_probe, ConvexityProbeConfig, ModulusPoint,
    StrictnessWitness,
};
use crate::diff::{
    assemble_gradient, convergence_case, exposure_check, frechet_uniformity, ray_alignment,
    AlignmentReport, ConvergenceCaseReport, DiffConfig, ExposureReport, FrechetVerdict,
};
use crate::norm::NormDescriptor;
use crate::par::ExecMode;
use crate::projection::{
    best_approximations, chebyshev_verdict, compactness_probe, lipschitz_audit,
    projection_continuity, seal_sequence, sequence_study, ApproxResult, ChebyshevReport,
    CompactnessReport, ContinuityReport, LipschitzReport, MultiplicityVerdict, SequenceStrategy,
    SequenceStudy, SubsequenceVerdict,
};
use crate::rng::{gaussian_vector, stream};
use crate::sets::{ClosedSetRep, ConvexFn, CurveFn};
use crate::solver::{solve_distance, SolveError, SolveMethod, SolverConfig};
use crate::vector::{sub, Vector};

pub const CONFIG_VERSION: u32 = 1;
pub const REPORT_VERSION: u32 = 1;

/// Membership slack used when deciding whether a sampled probe escaped
/// the set.
const PROBE_MEMBERSHIP_TOL: f64 = 1e-9;

/// Solver tolerance ceiling for checks built on finite differences; the
/// step schedule bottoms out at 1e-6 and needs value noise well below it.
const DIFF_TOLERANCE: f64 = 1e-10;

/// Lipschitz ratios above `1 + LIPSCHITZ_SLACK` count as violations.
const LIPSCHITZ_SLACK: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config does not parse: {0}")]
    Parse(String),
    #[error("{field}: {why}")]
    Invalid { field: String, why: String },
    #[error("unknown builtin scenario '{0}'")]
    UnknownBuiltin(String),
}

fn invalid(field: &str, why: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        why: why.into(),
    }
}

// ---------------------------------------------------------------------
// Config vocabulary
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget_scale")]
    pub budget_scale: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Report destination; the CLI falls back to `<name>_report.json`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub norm: NormDescriptor,
    pub set: SetSpec,
    #[serde(default)]
    pub probes: ProbeSpec,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

fn default_budget_scale() -> f64 {
    1.0
}

fn default_tolerance() -> f64 {
    1e-9
}

/// Set under study. The simple variants mirror the closed-set
/// representations one to one; the last two expand into several instances
/// so one scenario can sweep a truncation family or a randomized batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    FinitePointSet {
        points: Vec<Vector>,
    },
    Polytope {
        vertices: Vec<Vector>,
    },
    NormBall {
        center: Vector,
        radius: f64,
        norm: NormDescriptor,
    },
    SublevelSet {
        level: f64,
        anchor: Vector,
        f: ConvexFn,
    },
    ParametricCurve {
        curve: CurveFn,
    },
    ScaledBasisHull {
        dim: usize,
    },
    /// One `ScaledBasisHull` instance per listed dimension, labelled
    /// `dim{N}`.
    ScaledBasisHullFamily {
        dims: Vec<usize>,
    },
    /// `count` random polytopes labelled `poly00`, `poly01`, ...; instance
    /// `i` lives in `dims[i % dims.len()]` with a vertex count drawn
    /// uniformly from `min_vertices..=max_vertices` and Gaussian vertices
    /// scaled by `spread`.
    RandomPolytopes {
        count: usize,
        dims: Vec<usize>,
        min_vertices: usize,
        max_vertices: usize,
        spread: f64,
    },
}

impl SetSpec {
    pub fn is_family(&self) -> bool {
        matches!(
            self,
            SetSpec::ScaledBasisHullFamily { .. } | SetSpec::RandomPolytopes { .. }
        )
    }

    /// Expands into labelled set instances. Randomized batches
    /// draw from counter-based streams of `seed`, so the same config and
    /// seed always produce the same geometry.
    pub fn instances(&self, seed: u64) -> Result<Vec<(String, ClosedSetRep)>, ConfigError> {
        let single = |rep: ClosedSetRep| vec![("set".to_string(), rep)];
        let out = match self {
            SetSpec::FinitePointSet { points } => single(ClosedSetRep::FinitePointSet {
                points: points.clone(),
            }),
            SetSpec::Polytope { vertices } => single(ClosedSetRep::Polytope {
                vertices: vertices.clone(),
            }),
            SetSpec::NormBall {
                center,
                radius,
                norm,
            } => single(ClosedSetRep::NormBall {
                center: center.clone(),
                radius: *radius,
                norm: norm.clone(),
            }),
            SetSpec::SublevelSet { level, anchor, f } => single(ClosedSetRep::SublevelSet {
                f: f.clone(),
                level: *level,
                anchor: anchor.clone(),
            }),
            SetSpec::ParametricCurve { curve } => single(ClosedSetRep::ParametricCurve {
                curve: curve.clone(),
            }),
            SetSpec::ScaledBasisHull { dim } => single(ClosedSetRep::ScaledBasisHull { dim: *dim }),
            SetSpec::ScaledBasisHullFamily { dims } => dims
                .iter()
                .map(|&dim| (format!("dim{dim}"), ClosedSetRep::ScaledBasisHull { dim }))
                .collect(),
            SetSpec::RandomPolytopes {
                count,
                dims,
                min_vertices,
                max_vertices,
                spread,
            } => {
                let mut out = Vec::with_capacity(*count);
                for i in 0..*count {
                    let dim = dims[i % dims.len()];
                    let mut rng = stream(seed, "scenario-polytopes", i as u64);
                    let span = (*max_vertices - *min_vertices + 1) as u64;
                    let m = *min_vertices + (rng.next_u64_compat() % span) as usize;
                    let vertices: Vec<Vector> = (0..m)
                        .map(|_| {
                            gaussian_vector(&mut rng, dim)
                                .into_iter()
                                .map(|c| c * spread)
                                .collect()
                        })
                        .collect();
                    out.push((format!("poly{i:02}"), ClosedSetRep::Polytope { vertices }));
                }
                out
            }
        };
        for (label, rep) in &out {
            rep.validate()
                .map_err(|e| invalid("set", format!("instance {label}: {e}")))?;
        }
        Ok(out)
    }
}

/// Small shim so the instance expansion does not depend on the `Rng`
/// trait being in scope at the call site.
trait NextU64Compat {
    fn next_u64_compat(&mut self) -> u64;
}

impl NextU64Compat for rand_chacha::ChaCha8Rng {
    fn next_u64_compat(&mut self) -> u64 {
        rand::RngCore::next_u64(self)
    }
}

/// Where the probe points come from: an explicit list, the origin
/// shortcut, and/or an exterior sampler expanded per instance.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default)]
    pub origin: bool,
    #[serde(default)]
    pub points: Vec<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerSpec>,
}

/// Draws `count` exterior probes per instance: sample the set, estimate a
/// bounding radius around its centroid, and step outside along random
/// unit directions (doubling the step until membership fails).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    256
}

fn default_pairs() -> usize {
    1000
}

fn default_continuity_count() -> usize {
    200
}

/// One requested check. `expect_witness` flips the bookkeeping: the
/// scenario then treats an absent witness as the anomaly. `probe_limit`
/// truncates the probe list for expensive checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// Distance value per probe, with the solver's certificate.
    Distance {
        #[serde(default)]
        expect_witness: bool,
    },
    /// Full nearest-point multiplicity analysis per probe.
    BestApproximations {
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Batch uniqueness verdict over the whole probe list.
    Chebyshev {
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_limit: Option<usize>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Minimizing sequences by every applicable strategy, with
    /// convergent-subsequence verdicts.
    Sequences {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_limit: Option<usize>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Pairing of the distance gradient with normalized residual rays;
    /// must equal one at every minimizer.
    RayAlignment {
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_limit: Option<usize>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Direction-uniform differentiability of the distance at the probe.
    Frechet {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_limit: Option<usize>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Whether the distance gradient strongly exposes its attaining
    /// direction on the unit sphere.
    Exposure {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_limit: Option<usize>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// The full convergence experiment: hypothesis checks plus sequence
    /// strategies racing to a common limit. Runs after `frechet`.
    ExposureConvergence {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_limit: Option<usize>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Stability of the nearest-point map on a ball around each probe.
    Continuity {
        radius: f64,
        #[serde(default = "default_continuity_count")]
        count: usize,
        #[serde(default)]
        expect_witness: bool,
    },
    /// 1-Lipschitz audit of the distance function on random probe pairs.
    Lipschitz {
        #[serde(default = "default_pairs")]
        pairs: usize,
        /// Instance labels to audit; defaults to the first instance. The
        /// pair budget is split evenly across the selected instances.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        instances: Option<Vec<String>>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Strict-convexity witnesses and modulus estimates for a list of
    /// norms (independent of the scenario set).
    Convexity {
        norms: Vec<NormDescriptor>,
        epsilons: Vec<f64>,
        #[serde(default)]
        expect_witness: bool,
    },
    /// Truncation-family study: per-member distances from the origin,
    /// trend analysis, and a cross-member compactness probe.
    HullFamily {
        #[serde(default)]
        expect_witness: bool,
    },
}

impl CheckSpec {
    pub fn kind_label(&self) -> &'static str {
        match self {
            CheckSpec::Distance { .. } => "distance",
            CheckSpec::BestApproximations { .. } => "best_approximations",
            CheckSpec::Chebyshev { .. } => "chebyshev",
            CheckSpec::Sequences { .. } => "sequences",
            CheckSpec::RayAlignment { .. } => "ray_alignment",
            CheckSpec::Frechet { .. } => "frechet",
            CheckSpec::Exposure { .. } => "exposure",
            CheckSpec::ExposureConvergence { .. } => "exposure_convergence",
            CheckSpec::Continuity { .. } => "continuity",
            CheckSpec::Lipschitz { .. } => "lipschitz",
            CheckSpec::Convexity { .. } => "convexity",
            CheckSpec::HullFamily { .. } => "hull_family",
        }
    }

    pub fn expect_witness(&self) -> bool {
        match self {
            CheckSpec::Distance { expect_witness }
            | CheckSpec::BestApproximations { expect_witness, .. }
            | CheckSpec::Chebyshev { expect_witness, .. }
            | CheckSpec::Sequences { expect_witness, .. }
            | CheckSpec::RayAlignment { expect_witness, .. }
            | CheckSpec::Frechet { expect_witness, .. }
            | CheckSpec::Exposure { expect_witness, .. }
            | CheckSpec::ExposureConvergence { expect_witness, .. }
            | CheckSpec::Continuity { expect_witness, .. }
            | CheckSpec::Lipschitz { expect_witness, .. }
            | CheckSpec::Convexity { expect_witness, .. }
            | CheckSpec::HullFamily { expect_witness } => *expect_witness,
        }
    }

    fn needs_probes(&self) -> bool {
        !matches!(
            self,
            CheckSpec::Lipschitz { .. }
                | CheckSpec::Convexity { .. }
                | CheckSpec::HullFamily { .. }
        )
    }

    fn probe_limit(&self) -> Option<usize> {
        match self {
            CheckSpec::Chebyshev { probe_limit, .. }
            | CheckSpec::Sequences { probe_limit, .. }
            | CheckSpec::RayAlignment { probe_limit, .. }
            | CheckSpec::Frechet { probe_limit, .. }
            | CheckSpec::Exposure { probe_limit, .. }
            | CheckSpec::ExposureConvergence { probe_limit, .. } => *probe_limit,
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------
// Parsing, validation, normalization
// ---------------------------------------------------------------------

/// Parses and validates a TOML scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Serializes a config back to TOML; `parse_config` on the result yields
/// an equal config.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    toml::to_string_pretty(cfg).expect("scenario configs always serialize")
}

impl ScenarioConfig {
    /// Structural validation; every error names the offending field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.version != CONFIG_VERSION {
            return Err(invalid(
                "version",
                format!("expected {CONFIG_VERSION}, got {}", self.version),
            ));
        }
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(invalid(
                "name",
                "must be nonempty ASCII alphanumerics, '_' or '-'",
            ));
        }
        if !(self.budget_scale.is_finite() && self.budget_scale > 0.0) {
            return Err(invalid("budget_scale", "must be finite and positive"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(invalid("tolerance", "must be finite and positive"));
        }
        self.norm
            .validate()
            .map_err(|e| invalid("norm", e.to_string()))?;
        self.validate_set()?;
        let instances = self.set.instances(self.seed)?;
        self.validate_probes(&instances)?;
        self.validate_checks(&instances)?;
        if let Some(path) = &self.output {
            if path.is_empty() {
                return Err(invalid("output", "must be a nonempty path when present"));
            }
        }
        Ok(())
    }

    fn validate_set(&self) -> Result<(), ConfigError> {
        match &self.set {
            SetSpec::ScaledBasisHullFamily { dims } => {
                if dims.is_empty() {
                    return Err(invalid("set.dims", "family needs at least one dimension"));
                }
                if dims.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("set.dims", "dimensions must strictly increase"));
                }
            }
            SetSpec::RandomPolytopes {
                count,
                dims,
                min_vertices,
                max_vertices,
                spread,
            } => {
                if *count == 0 || *count > 512 {
                    return Err(invalid("set.count", "must be between 1 and 512"));
                }
                if dims.is_empty() || dims.iter().any(|&d| d == 0 || d > 8) {
                    return Err(invalid("set.dims", "dimensions must lie in 1..=8"));
                }
                if *min_vertices < 2 || *max_vertices < *min_vertices || *max_vertices > 64 {
                    return Err(invalid(
                        "set.min_vertices",
                        "need 2 <= min_vertices <= max_vertices <= 64",
                    ));
                }
                if !(spread.is_finite() && *spread > 0.0) {
                    return Err(invalid("set.spread", "must be finite and positive"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn validate_probes(&self, instances: &[(String, ClosedSetRep)]) -> Result<(), ConfigError> {
        if let Some(s) = &self.probes.sampler {
            if s.count == 0 || s.count > 10_000 {
                return Err(invalid(
                    "probes.sampler.count",
                    "must be between 1 and 10000",
                ));
            }
        }
        if self.probes.points.is_empty() {
            return Ok(());
        }
        let mut dims: Vec<usize> = instances.iter().map(|(_, s)| s.dim()).collect();
        dims.dedup();
        if dims.len() > 1 {
            return Err(invalid(
                "probes.points",
                "explicit points cannot serve instances of different dimensions; \
                 use the sampler instead",
            ));
        }
        let dim = dims[0];
        for (i, p) in self.probes.points.iter().enumerate() {
            if p.len() != dim {
                return Err(invalid(
                    "probes.points",
                    format!("point {i} has dimension {}, instances have {dim}", p.len()),
                ));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(invalid(
                    "probes.points",
                    format!("point {i} has a non-finite coordinate"),
                ));
            }
        }
        Ok(())
    }

    fn validate_checks(&self, instances: &[(String, ClosedSetRep)]) -> Result<(), ConfigError> {
        let has_probes = self.probes.origin
            || !self.probes.points.is_empty()
            || self.probes.sampler.as_ref().is_some_and(|s| s.count > 0);
        for (k, check) in self.checks.iter().enumerate() {
            let field = format!("checks[{k}]");
            if check.needs_probes() && !has_probes {
                return Err(invalid(
                    &field,
                    format!(
                        "{} needs probes, but the probe spec is empty",
                        check.kind_label()
                    ),
                ));
            }
            match check {
                CheckSpec::BestApproximations { samples, .. }
                | CheckSpec::Chebyshev { samples, .. }
                | CheckSpec::RayAlignment { samples, .. } => {
                    if *samples == 0 || *samples > 100_000 {
                        return Err(invalid(&field, "samples must lie in 1..=100000"));
                    }
                }
                CheckSpec::Continuity { radius, count, .. } => {
                    if !(radius.is_finite() && *radius > 0.0) {
                        return Err(invalid(&field, "radius must be finite and positive"));
                    }
                    if *count < 2 || *count > 10_000 {
                        return Err(invalid(&field, "count must lie in 2..=10000"));
                    }
                }
                CheckSpec::Lipschitz {
                    pairs,
                    instances: filter,
                    ..
                } => {
                    if *pairs == 0 || *pairs > 1_000_000 {
                        return Err(invalid(&field, "pairs must lie in 1..=1000000"));
                    }
                    if let Some(labels) = filter {
                        if labels.is_empty() {
                            return Err(invalid(&field, "instance filter cannot be empty"));
                        }
                        for l in labels {
                            if !instances.iter().any(|(name, _)| name == l) {
                                return Err(invalid(
                                    &field,
                                    format!("instance filter names unknown instance '{l}'"),
                                ));
                            }
                        }
                    }
                }
                CheckSpec::Convexity {
                    norms, epsilons, ..
                } => {
                    if norms.is_empty() {
                        return Err(invalid(&field, "norm list cannot be empty"));
                    }
                    for n in norms {
                        n.validate().map_err(|e| invalid(&field, e.to_string()))?;
                    }
                    if epsilons.is_empty()
                        || epsilons
                            .iter()
                            .any(|e| !e.is_finite() || *e <= 0.0 || *e >= 2.0)
                    {
                        return Err(invalid(
                            &field,
                            "epsilons must be a nonempty list inside (0, 2)",
                        ));
                    }
                }
                CheckSpec::HullFamily { .. } => {
                    if !matches!(self.set, SetSpec::ScaledBasisHullFamily { .. }) {
                        return Err(invalid(
                            &field,
                            "hull_family requires a scaled_basis_hull_family set",
                        ));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Inserts or reorders prerequisite checks: `exposure_convergence` reads
/// the uniformity verdict, so a `frechet` check must run before the first
/// one. Missing prerequisites are inserted with the same probe limit.
pub fn normalize(mut cfg: ScenarioConfig) -> ScenarioConfig {
    let first_ec = cfg
        .checks
        .iter()
        .position(|c| matches!(c, CheckSpec::ExposureConvergence { .. }));
    if let Some(pos) = first_ec {
        let frechet_pos = cfg
            .checks
            .iter()
            .position(|c| matches!(c, CheckSpec::Frechet { .. }));
        match frechet_pos {
            Some(f) if f < pos => {}
            Some(f) => {
                let moved = cfg.checks.remove(f);
                cfg.checks.insert(pos, moved);
            }
            None => {
                let probe_limit = cfg.checks[pos].probe_limit();
                cfg.checks.insert(
                    pos,
                    CheckSpec::Frechet {
                        probe_limit,
                        expect_witness: false,
                    },
                );
            }
        }
    }
    cfg
}

// ---------------------------------------------------------------------
// Probe resolution
// ---------------------------------------------------------------------

fn resolve_probes(cfg: &ScenarioConfig, set: &ClosedSetRep, instance_index: usize) -> Vec<Vector> {
    let dim = set.dim();
    let mut out: Vec<Vector> = Vec::new();
    if cfg.probes.origin {
        out.push(vec![0.0; dim]);
    }
    out.extend(cfg.probes.points.iter().cloned());
    if let Some(sampler) = &cfg.probes.sampler {
        let mut rng = stream(
            cfg.seed.wrapping_add(sampler.seed),
            "scenario-probes",
            instance_index as u64,
        );
        let anchors = set.sample_points(64, &mut rng);
        let mut center = vec![0.0; dim];
        for p in &anchors {
            for (c, v) in center.iter_mut().zip(p) {
                *c += v;
            }
        }
        if !anchors.is_empty() {
            for c in &mut center {
                *c /= anchors.len() as f64;
            }
        }
        let mut radius = anchors
            .iter()
            .map(|p| cfg.norm.eval(&sub(p, &center)))
            .fold(0.0, f64::max);
        if !(radius > 0.0) {
            radius = 1.0;
        }
        for _ in 0..sampler.count {
            let u = cfg.norm.unit_sample(&mut rng, dim);
            let mut scale = 1.5;
            loop {
                let x: Vector = center
                    .iter()
                    .zip(&u)
                    .map(|(c, ui)| c + scale * radius * ui)
                    .collect();
                if !set.contains(&x, PROBE_MEMBERSHIP_TOL) || scale > 24.0 {
                    out.push(x);
                    break;
                }
                scale *= 2.0;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------
// Report vocabulary
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub report_version: u32,
    pub scenario: String,
    pub seed: u64,
    pub budget_scale: f64,
    pub tolerance: f64,
    pub norm: NormDescriptor,
    pub instances: Vec<String>,
    pub checks: Vec<CheckOutcome>,
    /// Checks that produced a witness without declaring one expected;
    /// the CLI exits nonzero when this is positive.
    pub unexpected_witnesses: usize,
    /// The only field that varies between identical runs.
    pub wall_clock_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub kind: String,
    pub expect_witness: bool,
    pub instances: Vec<InstanceOutcome>,
    /// Human-readable failure witnesses; empty means every invariant the
    /// check audits held.
    pub witnesses: Vec<String>,
    /// Engine diagnostics (solver refusals, degenerate probes). Errors
    /// also count as witnesses so broken runs cannot pass silently.
    pub errors: Vec<String>,
    pub unexpected_witness: bool,
    pub missing_expected_witness: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub instance: String,
    pub detail: CheckDetail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceRow {
    pub probe: Vector,
    pub distance: f64,
    pub certified_gap: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub method: SolveMethod,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityEntry {
    pub norm: NormDescriptor,
    pub label: String,
    pub witness: Option<StrictnessWitness>,
    pub modulus: Vec<ModulusPoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HullMemberRow {
    pub label: String,
    pub dim: usize,
    pub distance: f64,
    pub converged: bool,
    pub method: SolveMethod,
    /// Ambient distance from this member's minimizer to the closest
    /// minimizer of any earlier member (in the common embedding); absent
    /// for the first member.
    pub min_gap_to_earlier: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HullFamilyReport {
    pub members: Vec<HullMemberRow>,
    pub strictly_decreasing: bool,
    pub min_distance: f64,
    /// Linear extrapolation of the distance trend under dimension
    /// doubling: `2 * d_last - d_prev`.
    pub infimum_estimate: f64,
    pub pairwise_min_gap: f64,
    /// Compactness probe over the cross-member minimizer sequence; a
    /// failure here is the family's defining signature, not an anomaly.
    pub sweep: CompactnessReport,
    /// Present when the trend is strictly decreasing, nothing attains the
    /// extrapolated infimum, and the minimizer sequence has no convergent
    /// subsequence.
    pub verdict: Option<MultiplicityVerdict>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckDetail {
    Distance {
        per_probe: Vec<DistanceRow>,
    },
    BestApproximations {
        per_probe: Vec<ApproxResult>,
    },
    Chebyshev {
        report: ChebyshevReport,
    },
    Sequences {
        per_probe: Vec<SequenceStudy>,
    },
    RayAlignment {
        per_probe: Vec<AlignmentReport>,
    },
    Frechet {
        per_probe: Vec<FrechetVerdict>,
    },
    Exposure {
        per_probe: Vec<ExposureReport>,
    },
    ExposureConvergence {
        per_probe: Vec<ConvergenceCaseReport>,
    },
    Continuity {
        per_probe: Vec<ContinuityReport>,
    },
    Lipschitz {
        report: LipschitzReport,
    },
    Convexity {
        entries: Vec<ConvexityEntry>,
    },
    HullFamily {
        report: HullFamilyReport,
    },
}

// ---------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------

/// Validates, normalizes, and runs a scenario. Check failures are folded
/// into the report; only config-level problems return an error.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport, ConfigError> {
    config.validate()?;
    let cfg = normalize(config.clone());
    let start = Instant::now();
    let instances = cfg.set.instances(cfg.seed)?;
    let probes: Vec<Vec<Vector>> = instances
        .iter()
        .enumerate()
        .map(|(i, (_, set))| resolve_probes(&cfg, set, i))
        .collect();
    let base = SolverConfig {
        tolerance: cfg.tolerance,
        budget_scale: cfg.budget_scale,
        seed: cfg.seed,
        method: SolveMethod::Auto,
        exec: ExecMode::default(),
        ..SolverConfig::default()
    };
    let mut checks = Vec::with_capacity(cfg.checks.len());
    for (k, spec) in cfg.checks.iter().enumerate() {
        checks.push(run_check(&cfg, k, spec, &instances, &probes, &base));
    }
    let unexpected_witnesses = checks.iter().filter(|c| c.unexpected_witness).count();
    Ok(RunReport {
        report_version: REPORT_VERSION,
        scenario: cfg.name.clone(),
        seed: cfg.seed,
        budget_scale: cfg.budget_scale,
        tolerance: cfg.tolerance,
        norm: cfg.norm.clone(),
        instances: instances.iter().map(|(l, _)| l.clone()).collect(),
        checks,
        unexpected_witnesses,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

/// Solver used by derivative-based checks: same budget, but the value
/// noise must sit far below the finest finite-difference step.
fn diff_solver(base: &SolverConfig) -> SolverConfig {
    SolverConfig {
        tolerance: base.tolerance.min(DIFF_TOLERANCE),
        ..base.clone()
    }
}

fn diff_config(cfg: &ScenarioConfig) -> DiffConfig {
    DiffConfig {
        seed: cfg.seed,
        ..DiffConfig::default()
    }
}

struct CheckAccumulator {
    instances: Vec<InstanceOutcome>,
    witnesses: Vec<String>,
    errors: Vec<String>,
}

impl CheckAccumulator {
    fn new() -> Self {
        CheckAccumulator {
            instances: Vec::new(),
            witnesses: Vec::new(),
            errors: Vec::new(),
        }
    }

    fn error(&mut self, context: &str, e: &SolveError) {
        self.errors.push(format!("{context}: {e}"));
        self.witnesses.push(format!("{context}: check error: {e}"));
    }

    fn finish(self, kind: &str, expect: bool) -> CheckOutcome {
        let unexpected_witness = !expect && !self.witnesses.is_empty();
        let missing_expected_witness = expect && self.witnesses.is_empty();
        CheckOutcome {
            kind: kind.to_string(),
            expect_witness: expect,
            instances: self.instances,
            witnesses: self.witnesses,
            errors: self.errors,
            unexpected_witness,
            missing_expected_witness,
        }
    }
}

fn limited<'a>(probes: &'a [Vector], limit: Option<usize>) -> &'a [Vector] {
    match limit {
        Some(n) => &probes[..n.min(probes.len())],
        None => probes,
    }
}

#[allow(clippy::too_many_lines)]
fn run_check(
    cfg: &ScenarioConfig,
    index: usize,
    spec: &CheckSpec,
    instances: &[(String, ClosedSetRep)],
    probes: &[Vec<Vector>],
    base: &SolverConfig,
) -> CheckOutcome {
    let mut acc = CheckAccumulator::new();
    let salt_base = (index as u64) * 1_000_000;
    match spec {
        CheckSpec::Distance { .. } => {
            for ((label, set), probe_list) in instances.iter().zip(probes) {
                let mut rows = Vec::with_capacity(probe_list.len());
                for (j, probe) in probe_list.iter().enumerate() {
                    match solve_distance(&cfg.norm, set, probe, base) {
                        Ok(out) => {
                            if !out.converged {
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): solver failed to certify the \
                                     distance within budget"
                                ));
                            }
                            rows.push(DistanceRow {
                                probe: probe.clone(),
                                distance: out.value,
                                certified_gap: out.certified_gap,
                                iterations: out.iterations,
                                converged: out.converged,
                                method: out.method,
                            });
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::Distance { per_probe: rows },
                });
            }
        }
        CheckSpec::BestApproximations { samples, .. } => {
            for (i, ((label, set), probe_list)) in instances.iter().zip(probes).enumerate() {
                let mut rows = Vec::with_capacity(probe_list.len());
                for (j, probe) in probe_list.iter().enumerate() {
                    let salt = salt_base + (i as u64) * 10_000 + j as u64;
                    match best_approximations(&cfg.norm, set, probe, base, *samples, None, salt) {
                        Ok(r) => {
                            if !r.unique {
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): {} nearest-point clusters, tie \
                                     diameter {:.6e}",
                                    r.cluster_count, r.cluster_diameter
                                ));
                            }
                            if !r.converged {
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): solver failed to certify the \
                                     distance within budget"
                                ));
                            }
                            rows.push(r);
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::BestApproximations { per_probe: rows },
                });
            }
        }
        CheckSpec::Chebyshev {
            samples,
            probe_limit,
            ..
        } => {
            for ((label, set), probe_list) in instances.iter().zip(probes) {
                let subset = limited(probe_list, *probe_limit);
                match chebyshev_verdict(&cfg.norm, set, subset, base, *samples) {
                    Ok(report) => {
                        match &report.verdict {
                            MultiplicityVerdict::ProximinalNotUnique {
                                cluster_diameter, ..
                            } => acc.witnesses.push(format!(
                                "({label}): nearest point is not unique; tie diameter \
                                 {cluster_diameter:.6e}"
                            )),
                            MultiplicityVerdict::NotProximinalEvidence { .. } => {
                                acc.witnesses.push(format!(
                                    "({label}): distance appears unattained on this set"
                                ));
                            }
                            MultiplicityVerdict::ChebyshevEvidence { .. } => {}
                        }
                        acc.instances.push(InstanceOutcome {
                            instance: label.clone(),
                            detail: CheckDetail::Chebyshev { report },
                        });
                    }
                    Err(e) => acc.error(&format!("({label})"), &e),
                }
            }
        }
        CheckSpec::Sequences { probe_limit, .. } => {
            for ((label, set), probe_list) in instances.iter().zip(probes) {
                let strategies = applicable_strategies(set);
                let mut rows = Vec::new();
                for (j, probe) in limited(probe_list, *probe_limit).iter().enumerate() {
                    match sequence_study(&cfg.norm, set, probe, &strategies, base) {
                        Ok(study) => {
                            for report in &study.reports {
                                // Tails shorter than eight points (tiny vertex
                                // sweeps, early solver stops) carry no
                                // compactness signal; their verdicts stay in
                                // the detail but are not witnessed.
                                if report.tail_len < 8 {
                                    continue;
                                }
                                if let SubsequenceVerdict::FailureWitness { tail_diameter } =
                                    &report.verdict
                                {
                                    acc.witnesses.push(format!(
                                        "({label}, probe {j}, {}): no convergent subsequence; \
                                         tail diameter {tail_diameter:.3}",
                                        report.strategy.label()
                                    ));
                                }
                            }
                            rows.push(study);
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::Sequences { per_probe: rows },
                });
            }
        }
        CheckSpec::RayAlignment {
            samples,
            probe_limit,
            ..
        } => {
            let solver = diff_solver(base);
            let diff = diff_config(cfg);
            for (i, ((label, set), probe_list)) in instances.iter().zip(probes).enumerate() {
                let mut rows = Vec::new();
                for (j, probe) in limited(probe_list, *probe_limit).iter().enumerate() {
                    let salt = salt_base + (i as u64) * 10_000 + j as u64;
                    match ray_alignment(&cfg.norm, set, probe, &solver, &diff, *samples, salt) {
                        Ok(r) => {
                            if !r.pass {
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): alignment residual {:.3e} exceeds \
                                     threshold {:.3e}",
                                    r.max_residual, r.threshold
                                ));
                            }
                            rows.push(r);
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::RayAlignment { per_probe: rows },
                });
            }
        }
        CheckSpec::Frechet { probe_limit, .. } => {
            let solver = diff_solver(base);
            let diff = diff_config(cfg);
            for ((label, set), probe_list) in instances.iter().zip(probes) {
                let mut rows = Vec::new();
                for (j, probe) in limited(probe_list, *probe_limit).iter().enumerate() {
                    match frechet_uniformity(&cfg.norm, set, probe, &solver, &diff) {
                        Ok(v) => {
                            if !v.uniform {
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): first-order defect is not \
                                     direction-uniform"
                                ));
                            }
                            rows.push(v);
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::Frechet { per_probe: rows },
                });
            }
        }
        CheckSpec::Exposure { probe_limit, .. } => {
            let solver = diff_solver(base);
            let diff = diff_config(cfg);
            for ((label, set), probe_list) in instances.iter().zip(probes) {
                let mut rows = Vec::new();
                for (j, probe) in limited(probe_list, *probe_limit).iter().enumerate() {
                    let result = assemble_gradient(&cfg.norm, set, probe, &solver, &diff).and_then(
                        |(gradient, _)| exposure_check(&cfg.norm, &gradient, set.dim(), &diff),
                    );
                    match result {
                        Ok(r) => {
                            if !r.exposes {
                                let final_diam =
                                    r.superlevel_diameters.last().copied().unwrap_or(f64::NAN);
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): gradient fails to strongly expose; \
                                     tightest superlevel diameter {final_diam:.3}"
                                ));
                            }
                            rows.push(r);
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::Exposure { per_probe: rows },
                });
            }
        }
        CheckSpec::ExposureConvergence { probe_limit, .. } => {
            let solver = diff_solver(base);
            let diff = diff_config(cfg);
            for ((label, set), probe_list) in instances.iter().zip(probes) {
                let mut rows = Vec::new();
                for (j, probe) in limited(probe_list, *probe_limit).iter().enumerate() {
                    match convergence_case(&cfg.norm, set, probe, &solver, &diff) {
                        Ok(r) => {
                            if let Some(h) = &r.failing_hypothesis {
                                acc.witnesses
                                    .push(format!("({label}, probe {j}): hypothesis '{h}' fails"));
                            }
                            if r.hypotheses_hold && !r.sequences_agree {
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): strategies disagree on the limit; \
                                     spread {:.3e}",
                                    r.final_spread
                                ));
                            }
                            rows.push(r);
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::ExposureConvergence { per_probe: rows },
                });
            }
        }
        CheckSpec::Continuity { radius, count, .. } => {
            for ((label, set), probe_list) in instances.iter().zip(probes) {
                let mut rows = Vec::new();
                for (j, probe) in probe_list.iter().enumerate() {
                    match projection_continuity(&cfg.norm, set, probe, *radius, *count, base) {
                        Ok(r) => {
                            if let Some(w) = &r.discontinuity_witness {
                                acc.witnesses.push(format!(
                                    "({label}, probe {j}): projection jumps {:.3} across a \
                                     probe gap of {:.3e} (ratio {:.1})",
                                    w.projection_jump, w.probe_gap, w.ratio
                                ));
                            }
                            rows.push(r);
                        }
                        Err(e) => acc.error(&format!("({label}, probe {j})"), &e),
                    }
                }
                acc.instances.push(InstanceOutcome {
                    instance: label.clone(),
                    detail: CheckDetail::Continuity { per_probe: rows },
                });
            }
        }
        CheckSpec::Lipschitz {
            pairs,
            instances: filter,
            ..
        } => {
            let selected: Vec<&(String, ClosedSetRep)> = match filter {
                Some(labels) => instances
                    .iter()
                    .filter(|(name, _)| labels.contains(name))
                    .collect(),
                None => instances.iter().take(1).collect(),
            };
            let per_instance = (pairs / selected.len().max(1)).max(1);
            for (label, set) in selected {
                match lipschitz_audit(&cfg.norm, set, base, per_instance) {
                    Ok(report) => {
                        if report.max_ratio > 1.0 + LIPSCHITZ_SLACK {
                            acc.witnesses.push(format!(
                                "({label}): distance ratio {:.9} exceeds the 1-Lipschitz bound",
                                report.max_ratio
                            ));
                        }
                        acc.instances.push(InstanceOutcome {
                            instance: label.clone(),
                            detail: CheckDetail::Lipschitz { report },
                        });
                    }
                    Err(e) => acc.error(&format!("({label})"), &e),
                }
            }
        }
        CheckSpec::Convexity {
            norms, epsilons, ..
        } => {
            let dim = instances.first().map_or(2, |(_, s)| s.dim());
            let probe_cfg = ConvexityProbeConfig {
                dim,
                seed: cfg.seed,
                exec: base.exec,
                ..ConvexityProbeConfig::default()
            };
            let mut entries = Vec::with_capacity(norms.len());
            for norm in norms {
                let label = norm.kind_label();
                let witness = strict_convexity_probe(norm, &probe_cfg);
                if let Some(w) = &witness {
                    acc.witnesses.push(format!(
                        "({label}): midpoint of a unit pair separated by {:.3} has norm \
                         {:.6} — the sphere contains a flat segment",
                        w.separation, w.midpoint_norm
                    ));
                }
                let modulus = modulus_of_convexity(norm, &probe_cfg, epsilons);
                entries.push(ConvexityEntry {
                    norm: norm.clone(),
                    label,
                    witness,
                    modulus,
                });
            }
            acc.instances.push(InstanceOutcome {
                instance: "norms".to_string(),
                detail: CheckDetail::Convexity { entries },
            });
        }
        CheckSpec::HullFamily { .. } => match run_hull_family(cfg, instances, base) {
            Ok((report, witnesses)) => {
                acc.witnesses.extend(witnesses);
                acc.instances.push(InstanceOutcome {
                    instance: "family".to_string(),
                    detail: CheckDetail::HullFamily { report },
                });
            }
            Err(e) => acc.error("(family)", &e),
        },
    }
    acc.finish(spec.kind_label(), spec.expect_witness())
}

/// Sequence strategies that make sense for a given set: the vertex sweep
/// needs an enumerable vertex list (explicit or implicit).
fn applicable_strategies(set: &ClosedSetRep) -> Vec<SequenceStrategy> {
    let mut out = vec![
        SequenceStrategy::SolverIterates,
        SequenceStrategy::RandomizedDescent,
    ];
    let vertex_backed = matches!(
        set,
        ClosedSetRep::Polytope { .. } | ClosedSetRep::FinitePointSet { .. }
    ) || matches!(set, ClosedSetRep::ScaledBasisHull { dim } if *dim <= 512);
    if vertex_backed {
        out.push(SequenceStrategy::VertexSweep);
    }
    out
}

/// Distance-from-origin study across a truncation family. The family is
/// evidence of non-attainment when the values fall strictly without any
/// member reaching the extrapolated infimum while the minimizers refuse
/// to cluster; only violations of that pattern become witnesses.
fn run_hull_family(
    cfg: &ScenarioConfig,
    instances: &[(String, ClosedSetRep)],
    base: &SolverConfig,
) -> Result<(HullFamilyReport, Vec<String>), SolveError> {
    let mut witnesses = Vec::new();
    let top_dim = instances.iter().map(|(_, s)| s.dim()).max().unwrap_or(0);
    let mut members = Vec::with_capacity(instances.len());
    let mut minimizers: Vec<Vector> = Vec::with_capacity(instances.len());
    let mut distances = Vec::with_capacity(instances.len());
    for (label, set) in instances {
        let dim = set.dim();
        let origin = vec![0.0; dim];
        let out = solve_distance(&cfg.norm, set, &origin, base)?;
        let mut padded = out.point.clone();
        padded.resize(top_dim, 0.0);
        let min_gap_to_earlier = minimizers
            .iter()
            .map(|earlier| cfg.norm.eval(&sub(&padded, earlier)))
            .fold(f64::INFINITY, f64::min);
        members.push(HullMemberRow {
            label: label.clone(),
            dim,
            distance: out.value,
            converged: out.converged,
            method: out.method,
            min_gap_to_earlier: if minimizers.is_empty() {
                None
            } else {
                Some(min_gap_to_earlier)
            },
        });
        if !out.converged {
            witnesses.push(format!(
                "({label}): solver failed to certify the member distance"
            ));
        }
        minimizers.push(padded);
        distances.push(out.value);
    }

    let strictly_decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    if !strictly_decreasing {
        witnesses.push("member distances are not strictly decreasing".to_string());
    }
    let min_distance = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let n = distances.len();
    let infimum_estimate = if n >= 2 {
        2.0 * distances[n - 1] - distances[n - 2]
    } else {
        distances.last().copied().unwrap_or(0.0)
    };
    if min_distance <= infimum_estimate + 1e-9 {
        witnesses.push(format!(
            "a member attains the extrapolated infimum {infimum_estimate:.9}"
        ));
    }
    let mut pairwise_min_gap = f64::INFINITY;
    for i in 0..minimizers.len() {
        for j in (i + 1)..minimizers.len() {
            pairwise_min_gap =
                pairwise_min_gap.min(cfg.norm.eval(&sub(&minimizers[i], &minimizers[j])));
        }
    }
    if minimizers.len() < 2 {
        pairwise_min_gap = 0.0;
    }

    let sweep_seq = seal_sequence(
        &cfg.norm,
        SequenceStrategy::VertexSweep,
        minimizers.clone(),
        distances.clone(),
        infimum_estimate,
    );
    let sweep = compactness_probe(&cfg.norm, &sweep_seq);
    if matches!(
        sweep.verdict,
        SubsequenceVerdict::SubsequenceConverges { .. }
    ) {
        witnesses.push(
            "cross-member minimizers admit a convergent subsequence — the family is not \
             evidence of non-attainment"
                .to_string(),
        );
    }

    let verdict = if witnesses.is_empty() {
        Some(MultiplicityVerdict::NotProximinalEvidence {
            witness: minimizers.last().cloned().unwrap_or_default(),
            distance_trend: distances,
        })
    } else {
        None
    };
    Ok((
        HullFamilyReport {
            members,
            strictly_decreasing,
            min_distance,
            infimum_estimate,
            pairwise_min_gap,
            sweep,
            verdict,
        },
        witnesses,
    ))
}

// ---------------------------------------------------------------------
// Builtin catalog
// ---------------------------------------------------------------------

const L1_HULL_FAMILY: &str = r#"
version = 1
name = "l1_hull_family"
seed = 11

[norm]
kind = "lp"
p = 1.0

[set]
kind = "scaled_basis_hull_family"
dims = [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096]

[probes]
origin = false

[[checks]]
kind = "hull_family"

[[checks]]
kind = "lipschitz"
pairs = 1000
instances = ["dim2", "dim16"]
"#;

const CIRCLE_CENTER: &str = r#"
version = 1
name = "circle_center"
seed = 3

[norm]
kind = "lp"
p = 2.0

[set]
kind = "parametric_curve"

[set.curve]
kind = "circle"
center = [0.0, 0.0]
radius = 1.0

[probes]
points = [[0.0, 0.0], [2.0, 0.0]]

[[checks]]
kind = "distance"

[[checks]]
kind = "best_approximations"
samples = 256
expect_witness = true

[[checks]]
kind = "chebyshev"
samples = 256
expect_witness = true

[[checks]]
kind = "lipschitz"
pairs = 1000
"#;

const THEOREM2_L2_POLYTOPE: &str = r#"
version = 1
name = "theorem2_l2_polytope"
seed = 7

[norm]
kind = "lp"
p = 2.0

[set]
kind = "polytope"
vertices = [
    [-1.2, -0.4],
    [0.8, -1.0],
    [1.4, 0.3],
    [0.5, 1.1],
    [-0.7, 0.9],
]

[probes]
points = [[0.4, 2.6]]

[probes.sampler]
count = 100
seed = 0

[[checks]]
kind = "distance"

[[checks]]
kind = "best_approximations"
samples = 256

[[checks]]
kind = "chebyshev"
samples = 256

[[checks]]
kind = "ray_alignment"
samples = 128
probe_limit = 8

[[checks]]
kind = "frechet"
probe_limit = 1

[[checks]]
kind = "exposure_convergence"
probe_limit = 1

[[checks]]
kind = "lipschitz"
pairs = 1000
"#;

const SUPNORM_FLAT_FACE: &str = r#"
version = 1
name = "supnorm_flat_face"
seed = 5

[norm]
kind = "sup"

[set]
kind = "polytope"
vertices = [
    [-1.0, -1.0],
    [1.0, -1.0],
    [1.0, 1.0],
    [-1.0, 1.0],
]

[probes]
points = [[0.0, 2.0]]

[[checks]]
kind = "distance"

[[checks]]
kind = "best_approximations"
samples = 256
expect_witness = true

[[checks]]
kind = "chebyshev"
samples = 256
expect_witness = true

[[checks]]
kind = "sequences"

[[checks]]
kind = "frechet"

[[checks]]
kind = "exposure"
expect_witness = true

[[checks]]
kind = "exposure_convergence"
expect_witness = true

[[checks]]
kind = "lipschitz"
pairs = 1000
"#;

const L1_SEGMENT: &str = r#"
version = 1
name = "l1_segment"
seed = 13

[norm]
kind = "lp"
p = 1.0

[set]
kind = "polytope"
vertices = [[0.0, 0.0], [1.0, -1.0]]

[probes]
points = [[1.0, 1.0]]

[[checks]]
kind = "distance"

[[checks]]
kind = "best_approximations"
samples = 256
expect_witness = true

[[checks]]
kind = "chebyshev"
samples = 256
expect_witness = true

[[checks]]
kind = "lipschitz"
pairs = 1000
"#;

const TWO_POINT_FLIP: &str = r#"
version = 1
name = "two_point_flip"
seed = 17

[norm]
kind = "lp"
p = 2.0

[set]
kind = "finite_point_set"
points = [[-1.0, 0.0], [1.0, 0.0]]

[probes]
points = [[0.0, 1.0]]

[[checks]]
kind = "distance"

[[checks]]
kind = "best_approximations"
samples = 64
expect_witness = true

[[checks]]
kind = "chebyshev"
samples = 64
expect_witness = true

[[checks]]
kind = "continuity"
radius = 0.15
count = 200
expect_witness = true

[[checks]]
kind = "lipschitz"
pairs = 1000
"#;

const CONVEXITY_GALLERY: &str = r#"
version = 1
name = "convexity_gallery"
seed = 19

[norm]
kind = "lp"
p = 2.0

[set]
kind = "norm_ball"
center = [0.0, 0.0]
radius = 1.0

[set.norm]
kind = "lp"
p = 2.0

[[checks]]
kind = "convexity"
epsilons = [0.5, 1.0, 1.5]
expect_witness = true
norms = [
    { kind = "lp", p = 1.0 },
    { kind = "sup" },
    { kind = "lp", p = 1.5 },
    { kind = "lp", p = 2.0 },
    { kind = "lp", p = 3.0 },
    { kind = "lp", p = 4.0 },
]

[[checks]]
kind = "lipschitz"
pairs = 1000
"#;

const ALIGNMENT_RANDOM_POLYTOPES: &str = r#"
version = 1
name = "alignment_random_polytopes"
seed = 23

[norm]
kind = "lp"
p = 2.0

[set]
kind = "random_polytopes"
count = 50
dims = [2, 3]
min_vertices = 4
max_vertices = 9
spread = 1.5

[probes.sampler]
count = 2
seed = 0

[[checks]]
kind = "ray_alignment"
samples = 128

[[checks]]
kind = "lipschitz"
pairs = 1000
instances = ["poly00", "poly01"]
"#;

const BUILTINS: [(&str, &str, &str); 8] = [
    (
        "l1_hull_family",
        L1_HULL_FAMILY,
        "Scaled-basis hulls under the l1 norm: distances fall toward one but no member attains it",
    ),
    (
        "circle_center",
        CIRCLE_CENTER,
        "Unit circle probed from its center, where every point ties for nearest",
    ),
    (
        "theorem2_l2_polytope",
        THEOREM2_L2_POLYTOPE,
        "Euclidean pentagon where every convergence hypothesis holds and all strategies meet",
    ),
    (
        "supnorm_flat_face",
        SUPNORM_FLAT_FACE,
        "Sup-norm square probed above a flat face: exposure fails and descent oscillates",
    ),
    (
        "l1_segment",
        L1_SEGMENT,
        "Diagonal segment under the l1 norm with a whole face of nearest points",
    ),
    (
        "two_point_flip",
        TWO_POINT_FLIP,
        "Two-point set whose nearest-point map jumps across the symmetry axis",
    ),
    (
        "convexity_gallery",
        CONVEXITY_GALLERY,
        "Strictness witnesses and modulus estimates across a gallery of lp and sup norms",
    ),
    (
        "alignment_random_polytopes",
        ALIGNMENT_RANDOM_POLYTOPES,
        "Gradient-ray alignment audited over a batch of random Euclidean polytopes",
    ),
];

/// Builtin scenario names and one-line descriptions, in stable order.
pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    BUILTINS
        .iter()
        .map(|(name, _, desc)| (*name, *desc))
        .collect()
}

/// Parses the named builtin config.
pub fn builtin_config(name: &str) -> Result<ScenarioConfig, ConfigError> {
    let (_, text, _) = BUILTINS
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| ConfigError::UnknownBuiltin(name.to_string()))?;
    parse_config(text)
}
