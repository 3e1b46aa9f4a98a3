//! Distance solvers: given an ambient norm, a closed set, and a probe
//! point, compute `d(x, K)` and a best-approximation candidate, together
//! with an honest certificate of how far the reported value can sit above
//! the true distance.
//!
//! Routes:
//! - closed form for finite point sets and norm balls measured in their own
//!   norm;
//! - a linear program for piecewise-linear ambient norms over small vertex
//!   sets (exact);
//! - away-step Frank-Wolfe for convex sets with a linear minimization
//!   oracle, with duality-gap certificates built from subgradient
//!   candidates;
//! - adaptive projected subgradient descent over simplex or ball
//!   parametrizations (cross-validation route);
//! - branch-and-bound over curve parameters and pattern search for
//!   sublevel sets.
//!
//! `certified_gap` is `Some(g)` only when the route can prove
//! `value - d(x,K) <= g`; heuristic routes report `None` rather than a
//! fabricated bound.

pub mod frank_wolfe;
pub mod grid;
pub mod lp_route;
pub mod subgradient;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norm::{NormDescriptor, NormError};
use crate::par::ExecMode;
use crate::sets::{ClosedSetRep, SetError};
use crate::vector::{pairing, sub, DualVector, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Auto,
    ClosedForm,
    FrankWolfe,
    Subgradient,
    Grid,
    LinearProgram,
}

impl SolveMethod {
    pub fn label(&self) -> &'static str {
        match self {
            SolveMethod::Auto => "auto",
            SolveMethod::ClosedForm => "closed_form",
            SolveMethod::FrankWolfe => "frank_wolfe",
            SolveMethod::Subgradient => "subgradient",
            SolveMethod::Grid => "grid",
            SolveMethod::LinearProgram => "linear_program",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Certified-gap target; a route reports `converged` once it can prove
    /// the value is within this of the true distance.
    pub tolerance: f64,
    pub max_iters: usize,
    /// Multiplies iteration/node budgets; tolerances are unaffected.
    pub budget_scale: f64,
    pub seed: u64,
    pub method: SolveMethod,
    pub exec: ExecMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-9,
            max_iters: 20_000,
            budget_scale: 1.0,
            seed: 0,
            method: SolveMethod::Auto,
            exec: ExecMode::default(),
        }
    }
}

impl SolverConfig {
    pub fn iter_budget(&self) -> usize {
        let scaled = (self.max_iters as f64 * self.budget_scale).round();
        scaled.clamp(16.0, 5e7) as usize
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveOutcome {
    /// Best feasible point found.
    pub point: Vector,
    /// `|x - point|` in the ambient norm, re-evaluated at the final point.
    pub value: f64,
    /// Proven bound on `value - d(x, K)`; `None` for heuristic routes.
    pub certified_gap: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub method: SolveMethod,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{} route cannot handle this instance: {why}", method.label())]
    Unsupported { method: SolveMethod, why: String },
    #[error("probe has dimension {probe}, set lives in dimension {set}")]
    ProbeDimension { probe: usize, set: usize },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Subgradients of the norm at `r`, for certificates and descent
/// directions. The first entry is the preferred direction choice. At kink
/// points several canonical completions are returned; each is a valid
/// subgradient, so each yields a valid lower bound.
pub fn subgradient_candidates(norm: &NormDescriptor, r: &[f64]) -> Vec<DualVector> {
    let n = norm.eval(r);
    if n == 0.0 {
        return Vec::new();
    }
    if let Ok(g) = norm.gradient(r) {
        return vec![g];
    }
    let mut out: Vec<DualVector> = Vec::new();
    match norm {
        NormDescriptor::Lp { .. } | NormDescriptor::WeightedLp { .. } => {
            // Only the p = 1 members are nonsmooth away from zero.
            let weights: Vec<f64> = match norm {
                NormDescriptor::WeightedLp { weights, .. } => weights.clone(),
                _ => vec![1.0; r.len()],
            };
            for fill in [0.0, 1.0, -1.0] {
                let g: DualVector = r
                    .iter()
                    .zip(&weights)
                    .map(|(ri, w)| {
                        if ri.abs() <= 1e-12 * n {
                            w * fill
                        } else if *ri > 0.0 {
                            *w
                        } else {
                            -*w
                        }
                    })
                    .collect();
                out.push(g);
            }
        }
        NormDescriptor::Sup => {
            let active: Vec<usize> = (0..r.len())
                .filter(|&i| r[i].abs() >= n * (1.0 - 1e-10))
                .collect();
            let mut avg = vec![0.0; r.len()];
            for &i in &active {
                avg[i] = r[i].signum() / active.len() as f64;
            }
            out.push(avg);
            for &i in active.iter().take(4) {
                let mut g = vec![0.0; r.len()];
                g[i] = r[i].signum();
                out.push(g);
            }
        }
        NormDescriptor::Polyhedral { functionals } => {
            let vals: Vec<f64> = functionals.iter().map(|f| pairing(f, r)).collect();
            let active: Vec<usize> = (0..vals.len())
                .filter(|&j| vals[j].abs() >= n * (1.0 - 1e-10))
                .collect();
            let dim = r.len();
            let mut avg = vec![0.0; dim];
            for &j in &active {
                let s = vals[j].signum() / active.len() as f64;
                for i in 0..dim {
                    avg[i] += s * functionals[j][i];
                }
            }
            out.push(avg);
            for &j in active.iter().take(4) {
                let s = vals[j].signum();
                out.push(functionals[j].iter().map(|t| s * t).collect());
            }
        }
    }
    out
}

/// The subgradient candidate whose induced lower bound is tightest at a
/// feasible `y`, together with that bound's gap: for `s = -g` with `g` a
/// subgradient of the norm at `x - y`, convexity gives
/// `d >= |x - y| - <s, y - argmin_K <s, .>>`. Requires an exact linear
/// minimization oracle on the set. The winning candidate is the
/// functional that best certifies the whole optimal face, not just the
/// particular minimizer found.
pub fn certifying_candidate(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    y: &[f64],
) -> Option<(DualVector, f64)> {
    let r = sub(x, y);
    if norm.eval(&r) == 0.0 {
        return None;
    }
    let mut best: Option<(DualVector, f64)> = None;
    for g in subgradient_candidates(norm, &r) {
        let s: DualVector = g.iter().map(|t| -t).collect();
        let a = set.lmo(&s)?;
        let gap = (pairing(&s, y) - pairing(&s, &a)).max(0.0);
        if best.as_ref().map_or(true, |(_, b)| gap < *b) {
            best = Some((g, gap));
        }
    }
    best
}

/// Certified upper bound on `|x - y| - d(x, K)` at a feasible `y`; see
/// `certifying_candidate`.
pub fn duality_gap(norm: &NormDescriptor, set: &ClosedSetRep, x: &[f64], y: &[f64]) -> Option<f64> {
    let r = sub(x, y);
    if norm.eval(&r) == 0.0 {
        return Some(0.0);
    }
    certifying_candidate(norm, set, x, y).map(|(_, gap)| gap)
}

/// Main entry: distance from `x` to `set` under `norm`, routed per
/// `cfg.method` (or automatically).
pub fn solve_distance(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    set.validate()?;
    norm.validate()?;
    let dim = set.dim();
    if x.len() != dim {
        return Err(SolveError::ProbeDimension {
            probe: x.len(),
            set: dim,
        });
    }
    norm.check_dim(dim)?;
    route(norm, set, x, cfg)
}

fn route(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    match cfg.method {
        SolveMethod::Auto => auto_route(norm, set, x, cfg),
        SolveMethod::ClosedForm => closed_form(norm, set, x, cfg),
        SolveMethod::FrankWolfe => frank_wolfe::solve(norm, set, x, cfg, None),
        SolveMethod::Subgradient => subgradient::solve(norm, set, x, cfg),
        SolveMethod::Grid => grid::solve(norm, set, x, cfg),
        SolveMethod::LinearProgram => lp_route::solve(norm, set, x, cfg),
    }
}

/// Number of variables the exact linear program would need; used to decide
/// whether that route is affordable.
fn lp_route_width(norm: &NormDescriptor, set: &ClosedSetRep) -> Option<usize> {
    let m = match set {
        ClosedSetRep::Polytope { vertices } => vertices.len(),
        ClosedSetRep::ScaledBasisHull { dim } => *dim,
        _ => return None,
    };
    let n = set.dim();
    match norm {
        NormDescriptor::Lp { p } | NormDescriptor::WeightedLp { p, .. } if *p == 1.0 => {
            Some(m + 2 * n)
        }
        NormDescriptor::Sup => Some(m + 1 + 2 * n),
        NormDescriptor::Polyhedral { functionals } => Some(m + 1 + 2 * functionals.len()),
        _ => None,
    }
}

const LP_WIDTH_CAP: usize = 600;

fn auto_route(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    match set {
        ClosedSetRep::FinitePointSet { .. } => closed_form(norm, set, x, cfg),
        ClosedSetRep::NormBall { norm: ball, .. } if ball == norm => closed_form(norm, set, x, cfg),
        ClosedSetRep::UnionOf { parts } => union_route(norm, parts, x, cfg),
        ClosedSetRep::Polytope { .. } | ClosedSetRep::ScaledBasisHull { .. } => {
            match lp_route_width(norm, set) {
                Some(width) if width <= LP_WIDTH_CAP => lp_route::solve(norm, set, x, cfg),
                _ => frank_wolfe::solve(norm, set, x, cfg, None),
            }
        }
        ClosedSetRep::NormBall { .. } => {
            if norm.smooth_away_from_zero() {
                frank_wolfe::solve(norm, set, x, cfg, None)
            } else {
                subgradient::solve(norm, set, x, cfg)
            }
        }
        ClosedSetRep::SublevelSet { .. } | ClosedSetRep::ParametricCurve { .. } => {
            grid::solve(norm, set, x, cfg)
        }
    }
}

fn union_route(
    norm: &NormDescriptor,
    parts: &[ClosedSetRep],
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let mut winner: Option<SolveOutcome> = None;
    let mut lower = f64::INFINITY;
    let mut lower_known = true;
    let mut total_iters = 0usize;
    let mut all_converged = true;
    for part in parts {
        let sub = route(norm, part, x, cfg)?;
        total_iters += sub.iterations;
        all_converged &= sub.converged;
        match sub.certified_gap {
            Some(g) => lower = lower.min(sub.value - g),
            None => lower_known = false,
        }
        let better = winner.as_ref().map_or(true, |w| sub.value < w.value);
        if better {
            winner = Some(sub);
        }
    }
    let mut out = winner.expect("validated unions are nonempty");
    out.iterations = total_iters;
    if lower_known {
        let gap = (out.value - lower).max(0.0);
        out.converged = all_converged && gap <= cfg.tolerance;
        out.certified_gap = Some(gap);
    } else {
        out.certified_gap = None;
        out.converged = all_converged;
    }
    Ok(out)
}

fn closed_form(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    match set {
        ClosedSetRep::FinitePointSet { points } => {
            let mut best = 0usize;
            let mut best_val = norm.eval(&sub(x, &points[0]));
            for (i, p) in points.iter().enumerate().skip(1) {
                let v = norm.eval(&sub(x, p));
                if v < best_val {
                    best_val = v;
                    best = i;
                }
            }
            Ok(SolveOutcome {
                point: points[best].clone(),
                value: best_val,
                certified_gap: Some(0.0),
                iterations: points.len(),
                converged: true,
                method: SolveMethod::ClosedForm,
            })
        }
        ClosedSetRep::NormBall {
            center,
            radius,
            norm: ball,
        } if ball == norm => {
            let offset = sub(x, center);
            let dist_center = norm.eval(&offset);
            if dist_center <= *radius {
                return Ok(SolveOutcome {
                    point: x.to_vec(),
                    value: 0.0,
                    certified_gap: Some(0.0),
                    iterations: 1,
                    converged: true,
                    method: SolveMethod::ClosedForm,
                });
            }
            let scale = radius / dist_center;
            let point: Vector = center
                .iter()
                .zip(&offset)
                .map(|(c, o)| c + scale * o)
                .collect();
            let value = norm.eval(&sub(x, &point));
            // Reverse triangle inequality: d(x, ball) >= |x-c| - r exactly.
            let gap = (value - (dist_center - radius)).max(0.0);
            Ok(SolveOutcome {
                point,
                value,
                certified_gap: Some(gap),
                iterations: 1,
                converged: gap <= cfg.tolerance,
                method: SolveMethod::ClosedForm,
            })
        }
        _ => Err(SolveError::Unsupported {
            method: SolveMethod::ClosedForm,
            why: "needs a finite point set or a ball measured in the ambient norm".into(),
        }),
    }
}
