//! Nearest-point analysis built on the distance solvers: multiplicity of
//! best approximations, minimizing-sequence construction, approximative
//! compactness probes, projection continuity around a center, and a
//! Lipschitz audit of the distance function itself.
//!
//! Multiplicity is decided numerically: set points whose distance ties the
//! best value within `eps` are clustered by single linkage at radius
//! `10 * eps` (merging solver jitter while separating genuinely distinct
//! minimizers), and the projection counts as a singleton only when the
//! diameter of the whole tie set stays below `1e-4 * (1 + distance)`.
//! Reports always expose the raw diameter next to the verdict.

use serde::{Deserialize, Serialize};

use crate::norm::NormDescriptor;
use crate::par::indexed_map;
use crate::rng::stream;
use crate::sets::ClosedSetRep;
use crate::solver::{frank_wolfe, solve_distance, SolveError, SolveMethod, SolverConfig};
use crate::vector::{sub, Vector};

/// Default value slack (scaled by `1 + d`) for the tie filter.
const DEFAULT_EPS_SCALE: f64 = 1e-9;
/// Tie-set diameter (scaled by `1 + d`) below which the nearest point is
/// reported unique.
const UNIQUE_DIAMETER_SCALE: f64 = 1e-4;
/// Membership tolerance used when filtering probes and checking
/// attainment.
const MEMBERSHIP_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxResult {
    pub distance: f64,
    /// Nearest point reported by the solver.
    pub point: Vector,
    /// One representative per tie cluster (the member closest to optimal),
    /// ordered by value.
    pub minimizers: Vec<Vector>,
    pub cluster_count: usize,
    /// Max pairwise ambient distance across every tie found.
    pub cluster_diameter: f64,
    pub unique: bool,
    pub iterations: usize,
    /// Certified bound on how far `distance` sits above the true value,
    /// where the route can prove one.
    pub residual: Option<f64>,
    pub converged: bool,
    /// Whether a set member achieves the value (always expected for
    /// closed bounded sets in finite dimension).
    pub attained: bool,
    pub method: SolveMethod,
}

/// Distance plus multiplicity analysis for one probe.
///
/// `eps` is the tie slack (defaults to `1e-9 * (1 + d)` and must exceed
/// the solver tolerance); `samples` controls how much of the set is
/// examined for ties; `salt` decorrelates sampling between probes.
pub fn best_approximations(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
    samples: usize,
    eps: Option<f64>,
    salt: u64,
) -> Result<ApproxResult, SolveError> {
    let out = solve_distance(norm, set, x, cfg)?;
    let mut rng = stream(cfg.seed, "nearest-multiplicity", salt);
    let mut pool = set.sample_points(samples, &mut rng);
    pool.push(out.point.clone());
    let values: Vec<f64> = pool.iter().map(|p| norm.eval(&sub(x, p))).collect();
    let d = values.iter().copied().fold(f64::INFINITY, f64::min);
    let eps = eps
        .unwrap_or(DEFAULT_EPS_SCALE * (1.0 + d))
        .max(cfg.tolerance);

    let mut ties: Vec<(usize, f64)> = pool
        .iter()
        .zip(&values)
        .enumerate()
        .filter(|(_, (_, v))| **v <= d + eps)
        .map(|(i, (_, v))| (i, *v))
        .collect();
    ties.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut diameter = 0.0f64;
    for i in 0..ties.len() {
        for j in (i + 1)..ties.len() {
            diameter = diameter.max(norm.eval(&sub(&pool[ties[i].0], &pool[ties[j].0])));
        }
    }

    // Single-linkage clusters; ties is value-sorted, so scanning in order
    // makes each cluster's first member its best one. The radius matches
    // the uniqueness resolution (with a floor of 10 eps for wide custom
    // tie windows): minimizers closer than that count as one point, which
    // keeps `unique` and `cluster_count` mutually consistent.
    let radius = (UNIQUE_DIAMETER_SCALE * (1.0 + d)).max(10.0 * eps);
    let mut cluster_of: Vec<Option<usize>> = vec![None; ties.len()];
    let mut minimizers: Vec<Vector> = Vec::new();
    for i in 0..ties.len() {
        if cluster_of[i].is_some() {
            continue;
        }
        let id = minimizers.len();
        minimizers.push(pool[ties[i].0].clone());
        cluster_of[i] = Some(id);
        // Grow the cluster transitively.
        loop {
            let mut grew = false;
            for a in 0..ties.len() {
                if cluster_of[a] != Some(id) {
                    continue;
                }
                for b in 0..ties.len() {
                    if cluster_of[b].is_none()
                        && norm.eval(&sub(&pool[ties[a].0], &pool[ties[b].0])) <= radius
                    {
                        cluster_of[b] = Some(id);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }

    Ok(ApproxResult {
        distance: d,
        attained: set.contains(&out.point, MEMBERSHIP_TOL),
        point: out.point,
        cluster_count: minimizers.len(),
        minimizers,
        cluster_diameter: diameter,
        unique: diameter <= UNIQUE_DIAMETER_SCALE * (1.0 + d),
        iterations: out.iterations,
        residual: out.certified_gap,
        converged: out.converged,
        method: out.method,
    })
}

/// Per-probe summary kept in batch reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub probe: Vector,
    pub distance: f64,
    pub cluster_count: usize,
    pub cluster_diameter: f64,
    pub unique: bool,
}

/// Batch verdict vocabulary. `NotProximinalEvidence` is produced by
/// truncation-family studies, never by a single-set scan: non-attainment
/// cannot be certified at one truncation level.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MultiplicityVerdict {
    ChebyshevEvidence {
        probes: usize,
    },
    ProximinalNotUnique {
        witness: Vector,
        cluster_diameter: f64,
    },
    NotProximinalEvidence {
        witness: Vector,
        distance_trend: Vec<f64>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChebyshevReport {
    pub per_point: Vec<ProbeSummary>,
    pub verdict: MultiplicityVerdict,
}

/// Multiplicity analysis over a probe batch. Probes inside the set are
/// filtered out first (the notions under test concern exterior points);
/// an empty remainder is an error.
pub fn chebyshev_verdict(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    probes: &[Vector],
    cfg: &SolverConfig,
    samples: usize,
) -> Result<ChebyshevReport, SolveError> {
    let outside: Vec<&Vector> = probes
        .iter()
        .filter(|p| !set.contains(p, MEMBERSHIP_TOL))
        .collect();
    if outside.is_empty() {
        return Err(SolveError::Unsupported {
            method: SolveMethod::Auto,
            why: "every probe lies in the set".into(),
        });
    }
    let results = indexed_map(cfg.exec, outside.len(), |i| {
        best_approximations(norm, set, outside[i], cfg, samples, None, i as u64)
    });
    let mut per_point = Vec::with_capacity(results.len());
    for (probe, r) in outside.iter().zip(results) {
        let r = r?;
        per_point.push(ProbeSummary {
            probe: (*probe).clone(),
            distance: r.distance,
            cluster_count: r.cluster_count,
            cluster_diameter: r.cluster_diameter,
            unique: r.unique,
        });
    }
    let widest = per_point
        .iter()
        .filter(|s| !s.unique)
        .max_by(|a, b| a.cluster_diameter.total_cmp(&b.cluster_diameter));
    let verdict = match widest {
        Some(s) => MultiplicityVerdict::ProximinalNotUnique {
            witness: s.probe.clone(),
            cluster_diameter: s.cluster_diameter,
        },
        None => MultiplicityVerdict::ChebyshevEvidence {
            probes: per_point.len(),
        },
    };
    Ok(ChebyshevReport { per_point, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceStrategy {
    /// Best-so-far iterates of the Frank-Wolfe route.
    SolverIterates,
    /// Random set samples filtered by a tightening value schedule, always
    /// stepping to the qualifying candidate farthest from the previous
    /// iterate — deliberately adversarial, to expose oscillation.
    RandomizedDescent,
    /// Best approximation over growing vertex prefixes, farthest vertices
    /// first.
    VertexSweep,
}

impl SequenceStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            SequenceStrategy::SolverIterates => "solver_iterates",
            SequenceStrategy::RandomizedDescent => "randomized_descent",
            SequenceStrategy::VertexSweep => "vertex_sweep",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimizingSequence {
    pub strategy: SequenceStrategy,
    pub points: Vec<Vector>,
    pub values: Vec<f64>,
    /// The distance the values approach.
    pub target: f64,
    /// Max pairwise ambient distance over the last quartile of points.
    pub cauchy_tail_diameter: f64,
}

const DESCENT_STEPS: usize = 40;
const DESCENT_FLOOR: f64 = 1e-11;
const DESCENT_BATCH: usize = 64;
const TRACE_CAP: usize = 64;

pub fn minimizing_sequence(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    strategy: SequenceStrategy,
    cfg: &SolverConfig,
) -> Result<MinimizingSequence, SolveError> {
    if set.contains(x, MEMBERSHIP_TOL) {
        return Err(SolveError::Unsupported {
            method: SolveMethod::Auto,
            why: "probe lies in the set; minimizing sequences are trivial there".into(),
        });
    }
    let (points, values, target) = match strategy {
        SequenceStrategy::SolverIterates => solver_iterates(norm, set, x, cfg)?,
        SequenceStrategy::RandomizedDescent => randomized_descent(norm, set, x, cfg)?,
        SequenceStrategy::VertexSweep => vertex_sweep(norm, set, x, cfg)?,
    };
    Ok(seal_sequence(norm, strategy, points, values, target))
}

/// Computes the tail diameter and freezes the sequence record.
pub fn seal_sequence(
    norm: &NormDescriptor,
    strategy: SequenceStrategy,
    points: Vec<Vector>,
    values: Vec<f64>,
    target: f64,
) -> MinimizingSequence {
    let cauchy_tail_diameter = tail_diameter(norm, &points);
    MinimizingSequence {
        strategy,
        points,
        values,
        target,
        cauchy_tail_diameter,
    }
}

fn tail_diameter(norm: &NormDescriptor, points: &[Vector]) -> f64 {
    let n = points.len();
    if n == 0 {
        return 0.0;
    }
    let len = (n / 4).max(2).min(n);
    let tail = &points[n - len..];
    let mut diam = 0.0f64;
    for i in 0..tail.len() {
        for j in (i + 1)..tail.len() {
            diam = diam.max(norm.eval(&sub(&tail[i], &tail[j])));
        }
    }
    diam
}

fn solver_iterates(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<Vector>, Vec<f64>, f64), SolveError> {
    let mut trace = frank_wolfe::Trace::new();
    let out = frank_wolfe::solve(norm, set, x, cfg, Some(&mut trace))?;
    // Keep the incumbent (best-so-far) subsequence: raw Frank-Wolfe
    // iterates may wobble, the incumbents form a monotone minimizing
    // sequence.
    let stride = (trace.len() / TRACE_CAP).max(1);
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut best = f64::INFINITY;
    let mut best_point: Option<Vector> = None;
    for (i, (v, p)) in trace.iter().enumerate() {
        if *v < best {
            best = *v;
            best_point = Some(p.clone());
        }
        if i % stride == 0 {
            if let Some(bp) = &best_point {
                values.push(best);
                points.push(bp.clone());
            }
        }
    }
    values.push(out.value);
    points.push(out.point);
    Ok((points, values, out.value))
}

/// Last point of `[z, x]` still inside the set, found by bisection.
/// Flat parts of the boundary facing `x` are reached with the lateral
/// spread of `z` intact, which is what lets descent batches keep probing
/// the whole optimal face.
fn ray_exit(set: &ClosedSetRep, z: &[f64], x: &[f64]) -> Vector {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let at = |t: f64| -> Vector { z.iter().zip(x).map(|(zi, xi)| zi + t * (xi - zi)).collect() };
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if set.contains(&at(mid), 1e-12) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo)
}

fn randomized_descent(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<Vector>, Vec<f64>, f64), SolveError> {
    let solved = solve_distance(norm, set, x, cfg)?;
    let d = solved.value;
    let ratio = DESCENT_FLOOR.powf(1.0 / (DESCENT_STEPS as f64 - 1.0));
    let mut points: Vec<Vector> = Vec::with_capacity(DESCENT_STEPS);
    let mut values: Vec<f64> = Vec::with_capacity(DESCENT_STEPS);
    let mut current: Option<(Vector, f64)> = None;
    let mut delta = 1.0;
    for j in 0..DESCENT_STEPS {
        let mut rng = stream(cfg.seed, "randomized-descent", j as u64);
        let mut batch = set.sample_points(DESCENT_BATCH / 2, &mut rng);
        let exits: Vec<Vector> = batch.iter().map(|z| ray_exit(set, z, x)).collect();
        batch.extend(exits);
        batch.push(solved.point.clone());
        // The cutoff tightens with the schedule and never rises above the
        // previous value, so recorded values are nonincreasing.
        let cutoff = match &current {
            Some((_, pv)) => pv.min(d + delta),
            None => d + delta,
        };
        let qualifying = batch.into_iter().filter_map(|p| {
            let v = norm.eval(&sub(x, &p));
            (v <= cutoff).then_some((p, v))
        });
        let next = match &current {
            // Step to the qualifying candidate farthest from where we
            // stand; ties keep the earlier candidate.
            Some((prev, _)) => qualifying
                .map(|(p, v)| {
                    let away = norm.eval(&sub(&p, prev));
                    (p, v, away)
                })
                .fold(None::<(Vector, f64, f64)>, |acc, item| match acc {
                    Some(best) if best.2 >= item.2 => Some(best),
                    _ => Some(item),
                })
                .map(|(p, v, _)| (p, v)),
            // First step: start from the worst qualifying candidate.
            None => qualifying.fold(None::<(Vector, f64)>, |acc, item| match acc {
                Some(best) if best.1 >= item.1 => Some(best),
                _ => Some(item),
            }),
        };
        let (p, v) = next.unwrap_or_else(|| (solved.point.clone(), d));
        points.push(p.clone());
        values.push(v);
        current = Some((p, v));
        delta *= ratio;
    }
    Ok((points, values, d))
}

fn vertex_sweep(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<Vector>, Vec<f64>, f64), SolveError> {
    let vertices: Vec<Vector> = match set.vertices() {
        Some(v) => v.to_vec(),
        None => match set {
            ClosedSetRep::ScaledBasisHull { dim } if *dim <= 512 => (0..*dim)
                .map(|i| ClosedSetRep::hull_vertex(*dim, i))
                .collect(),
            _ => {
                return Err(SolveError::Unsupported {
                    method: SolveMethod::Auto,
                    why: "vertex sweep needs an explicit vertex list".into(),
                })
            }
        },
    };
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    let dist: Vec<f64> = vertices.iter().map(|v| norm.eval(&sub(x, v))).collect();
    order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut prefix: Vec<Vector> = Vec::new();
    for &i in &order {
        prefix.push(vertices[i].clone());
        let sub_set = ClosedSetRep::Polytope {
            vertices: prefix.clone(),
        };
        let out = solve_distance(norm, &sub_set, x, cfg)?;
        points.push(out.point);
        values.push(out.value);
    }
    let target = values.last().copied().unwrap_or(0.0);
    Ok((points, values, target))
}

/// Verdict vocabulary for the compactness probe.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SubsequenceVerdict {
    SubsequenceConverges { limit: Vector },
    FailureWitness { tail_diameter: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub strategy: SequenceStrategy,
    pub tail_len: usize,
    /// Tail diameter of the full sequence; large values expose
    /// oscillation even when a subsequence converges.
    pub tail_diameter: f64,
    pub verdict: SubsequenceVerdict,
}

/// Looks for a convergent subsequence in the tail (last quartile) of a
/// minimizing sequence by single-linkage clustering: the verdict is
/// `SubsequenceConverges` when some cluster of at least two tail points
/// stays tight, `FailureWitness` when every tail point keeps its distance
/// from every other (the scaled-basis-hull signature).
pub fn compactness_probe(norm: &NormDescriptor, seq: &MinimizingSequence) -> CompactnessReport {
    let n = seq.points.len();
    let tail_len = (n / 4).max(2).min(n);
    let tail = &seq.points[n - tail_len..];
    let tail_diameter = seq.cauchy_tail_diameter;
    let scale = 1.0 + seq.target.abs();
    let radius = 1e-2 * scale;

    // Single-linkage partition of the tail.
    let mut cluster_of: Vec<Option<usize>> = vec![None; tail.len()];
    let mut next_id = 0usize;
    for i in 0..tail.len() {
        if cluster_of[i].is_some() {
            continue;
        }
        let id = next_id;
        next_id += 1;
        cluster_of[i] = Some(id);
        loop {
            let mut grew = false;
            for a in 0..tail.len() {
                if cluster_of[a] != Some(id) {
                    continue;
                }
                for b in 0..tail.len() {
                    if cluster_of[b].is_none() && norm.eval(&sub(&tail[a], &tail[b])) <= radius {
                        cluster_of[b] = Some(id);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }
    // Largest cluster, earliest on ties.
    let mut best_id = 0usize;
    let mut best_size = 0usize;
    for id in 0..next_id {
        let size = cluster_of.iter().filter(|c| **c == Some(id)).count();
        if size > best_size {
            best_size = size;
            best_id = id;
        }
    }
    let members: Vec<&Vector> = tail
        .iter()
        .zip(&cluster_of)
        .filter(|(_, c)| **c == Some(best_id))
        .map(|(p, _)| p)
        .collect();
    let mut cluster_diameter = 0.0f64;
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            cluster_diameter = cluster_diameter.max(norm.eval(&sub(members[i], members[j])));
        }
    }
    let verdict = if members.len() >= 2 && cluster_diameter <= 1e-3 * scale {
        let dim = members[0].len();
        let mut limit = vec![0.0; dim];
        for m in &members {
            for k in 0..dim {
                limit[k] += m[k] / members.len() as f64;
            }
        }
        SubsequenceVerdict::SubsequenceConverges { limit }
    } else {
        SubsequenceVerdict::FailureWitness { tail_diameter }
    };
    CompactnessReport {
        strategy: seq.strategy,
        tail_len,
        tail_diameter,
        verdict,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceStudy {
    pub sequences: Vec<MinimizingSequence>,
    pub reports: Vec<CompactnessReport>,
    /// Max pairwise ambient distance among the final iterates of the
    /// strategies — small spread means they agree on a limit.
    pub final_spread: f64,
}

pub fn sequence_study(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    strategies: &[SequenceStrategy],
    cfg: &SolverConfig,
) -> Result<SequenceStudy, SolveError> {
    let mut sequences = Vec::with_capacity(strategies.len());
    for &s in strategies {
        sequences.push(minimizing_sequence(norm, set, x, s, cfg)?);
    }
    let reports: Vec<CompactnessReport> = sequences
        .iter()
        .map(|s| compactness_probe(norm, s))
        .collect();
    let mut final_spread = 0.0f64;
    for i in 0..sequences.len() {
        for j in (i + 1)..sequences.len() {
            let (a, b) = (
                sequences[i].points.last().expect("nonempty sequence"),
                sequences[j].points.last().expect("nonempty sequence"),
            );
            final_spread = final_spread.max(norm.eval(&sub(a, b)));
        }
    }
    Ok(SequenceStudy {
        sequences,
        reports,
        final_spread,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscontinuityWitness {
    pub a: Vector,
    pub b: Vector,
    pub probe_gap: f64,
    pub projection_jump: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub center: Vector,
    pub radius: f64,
    pub count: usize,
    pub center_distance: f64,
    /// Max `|P(x') - P(x)| / |x' - x|` over sampled probes around the
    /// center.
    pub modulus_estimate: f64,
    /// Probe pair whose projections jump more than ten times the probe
    /// gap, if any exists.
    pub discontinuity_witness: Option<DiscontinuityWitness>,
}

const JUMP_RATIO_THRESHOLD: f64 = 10.0;

/// Samples probes in the ball around `x` and measures how fast the
/// nearest point moves relative to the probe, both against the center and
/// across every probe pair.
pub fn projection_continuity(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    radius: f64,
    count: usize,
    cfg: &SolverConfig,
) -> Result<ContinuityReport, SolveError> {
    let dim = x.len();
    let center = solve_distance(norm, set, x, cfg)?;
    let mut rng = stream(cfg.seed, "continuity-ball", 0);
    let probes: Vec<Vector> = (0..count)
        .map(|_| {
            let u = norm.unit_sample(&mut rng, dim);
            let t: f64 = rand::Rng::gen::<f64>(&mut rng).powf(1.0 / dim as f64);
            x.iter()
                .zip(&u)
                .map(|(xi, ui)| xi + radius * t * ui)
                .collect()
        })
        .collect();
    let solved = indexed_map(cfg.exec, probes.len(), |i| {
        solve_distance(norm, set, &probes[i], cfg).map(|o| o.point)
    });
    let mut proj: Vec<Vector> = Vec::with_capacity(solved.len());
    for s in solved {
        proj.push(s?);
    }
    let mut modulus = 0.0f64;
    for (p, q) in probes.iter().zip(&proj) {
        let dx = norm.eval(&sub(p, x));
        if dx > 1e-12 {
            modulus = modulus.max(norm.eval(&sub(q, &center.point)) / dx);
        }
    }
    let mut witness: Option<DiscontinuityWitness> = None;
    for i in 0..probes.len() {
        for j in (i + 1)..probes.len() {
            let gap = norm.eval(&sub(&probes[i], &probes[j]));
            if gap <= 1e-12 {
                continue;
            }
            let jump = norm.eval(&sub(&proj[i], &proj[j]));
            let ratio = jump / gap;
            if ratio > JUMP_RATIO_THRESHOLD && witness.as_ref().map_or(true, |w| ratio > w.ratio) {
                witness = Some(DiscontinuityWitness {
                    a: probes[i].clone(),
                    b: probes[j].clone(),
                    probe_gap: gap,
                    projection_jump: jump,
                    ratio,
                });
            }
        }
    }
    Ok(ContinuityReport {
        center: x.to_vec(),
        radius,
        count,
        center_distance: center.value,
        modulus_estimate: modulus,
        discontinuity_witness: witness,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub pairs: usize,
    /// Max of `|d(u) - d(v)| / |u - v|`; the distance function promises
    /// this never exceeds one.
    pub max_ratio: f64,
    pub worst_pair: (Vector, Vector),
}

/// Checks the 1-Lipschitz bound of `d(., K)` on random probe pairs drawn
/// from an inflated box around the set. Pairs closer than a twentieth of
/// the box diagonal are re-drawn so solver noise cannot manufacture a
/// violation.
pub fn lipschitz_audit(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    cfg: &SolverConfig,
    pairs: usize,
) -> Result<LipschitzReport, SolveError> {
    let dim = set.dim();
    let (lo, hi) = bounding_box(set, dim, cfg);
    let mut rng = stream(cfg.seed, "lipschitz-pairs", 0);
    let diag = norm.eval(&sub(&hi, &lo));
    let min_sep = 0.05 * diag;
    let mut pts: Vec<(Vector, Vector)> = Vec::with_capacity(pairs);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vector {
        (0..dim)
            .map(|i| {
                let t: f64 = rand::Rng::gen(rng);
                lo[i] + t * (hi[i] - lo[i])
            })
            .collect()
    };
    while pts.len() < pairs {
        let u = draw(&mut rng);
        let mut v = draw(&mut rng);
        let mut tries = 0;
        while norm.eval(&sub(&u, &v)) < min_sep && tries < 64 {
            v = draw(&mut rng);
            tries += 1;
        }
        if norm.eval(&sub(&u, &v)) >= min_sep {
            pts.push((u, v));
        }
    }
    let ratios = indexed_map(cfg.exec, pts.len(), |i| {
        let (u, v) = &pts[i];
        let du = solve_distance(norm, set, u, cfg)?;
        let dv = solve_distance(norm, set, v, cfg)?;
        let sep = norm.eval(&sub(u, v));
        Ok::<f64, SolveError>((du.value - dv.value).abs() / sep)
    });
    let mut max_ratio = 0.0f64;
    let mut worst = 0usize;
    for (i, r) in ratios.into_iter().enumerate() {
        let r = r?;
        if r > max_ratio {
            max_ratio = r;
            worst = i;
        }
    }
    let worst_pair = pts.swap_remove(worst.min(pts.len() - 1));
    Ok(LipschitzReport {
        pairs,
        max_ratio,
        worst_pair,
    })
}

/// Box around the set, inflated by its own width plus one unit so probes
/// land both near and far.
fn bounding_box(set: &ClosedSetRep, dim: usize, cfg: &SolverConfig) -> (Vector, Vector) {
    let (mut lo, mut hi) = set.coordinate_bounds().unwrap_or_else(|| {
        let mut rng = stream(cfg.seed, "bounding-box", 0);
        let pts = set.sample_points(128, &mut rng);
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in &pts {
            for i in 0..dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        (lo, hi)
    });
    for i in 0..dim {
        let w = hi[i] - lo[i];
        lo[i] -= 0.5 * w + 1.0;
        hi[i] += 0.5 * w + 1.0;
    }
    (lo, hi)
}
