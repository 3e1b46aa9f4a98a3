//! Derivative-free routes: certified branch-and-bound along parametric
//! curves, pattern search over sublevel sets, and a coarse lattice fallback
//! for low-dimensional sets with coordinate bounds.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::norm::NormDescriptor;
use crate::rng::{gaussian_vector, stream};
use crate::sets::{ClosedSetRep, ConvexFn, CurveFn};
use crate::solver::{SolveError, SolveMethod, SolveOutcome, SolverConfig};
use crate::vector::{lerp, sub, Vector};

pub fn solve(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    match set {
        ClosedSetRep::ParametricCurve { curve } => curve_branch_bound(norm, curve, x, cfg),
        ClosedSetRep::SublevelSet { f, level, anchor } => {
            pattern_search(norm, f, *level, anchor, x, cfg)
        }
        _ => lattice(norm, set, x, cfg),
    }
}

/// `|v|_ambient <= C |v|_2` with `C = sqrt(sum_i |e_i|_ambient^2)`
/// (Cauchy-Schwarz over the coordinate expansion).
fn euclidean_to_ambient(norm: &NormDescriptor, dim: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        let n = norm.eval(&e);
        sum += n * n;
    }
    sum.sqrt()
}

#[derive(Debug)]
struct Node {
    lower: f64,
    lo: f64,
    hi: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap; invert so the smallest lower bound pops
    // first, with the interval start as a deterministic tie-break.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lower
            .total_cmp(&self.lower)
            .then(other.lo.total_cmp(&self.lo))
    }
}

/// Exact projections onto curve pieces under the Euclidean norm: radial
/// for circles, foot-of-perpendicular per segment for polylines.
fn euclidean_curve_exact(curve: &CurveFn, x: &[f64]) -> (Vector, f64) {
    match curve {
        CurveFn::Circle { center, radius } => {
            let offset = sub(x, center);
            let d = crate::vector::norm2(&offset);
            if d < 1e-14 {
                // Every boundary point is nearest; pick the parametric start.
                return (curve.eval(0.0), *radius);
            }
            let s = radius / d;
            let point: Vector = center.iter().zip(&offset).map(|(c, o)| c + s * o).collect();
            (point, (d - radius).abs())
        }
        CurveFn::Polyline { points } => {
            let mut best: Option<(Vector, f64)> = None;
            for seg in points.windows(2) {
                let (a, b) = (&seg[0], &seg[1]);
                let ab = sub(b, a);
                let len2: f64 = ab.iter().map(|t| t * t).sum();
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    let num: f64 = sub(x, a).iter().zip(&ab).map(|(p, q)| p * q).sum();
                    (num / len2).clamp(0.0, 1.0)
                };
                let foot: Vector = a.iter().zip(&ab).map(|(ai, d)| ai + t * d).collect();
                let v = crate::vector::norm2(&sub(x, &foot));
                if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    best = Some((foot, v));
                }
            }
            best.expect("validated polylines have at least one segment")
        }
    }
}

/// Certified global minimum of `t -> |x - curve(t)|` over `[0, 1]` using
/// the curve's Lipschitz bound to prune. Euclidean ambient norms skip the
/// search: both curve families admit exact projections there.
fn curve_branch_bound(
    norm: &NormDescriptor,
    curve: &CurveFn,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    if norm.is_euclidean() {
        let (point, value) = euclidean_curve_exact(curve, x);
        return Ok(SolveOutcome {
            point,
            value,
            certified_gap: Some(0.0),
            iterations: 1,
            converged: true,
            method: SolveMethod::Grid,
        });
    }
    let lip = curve.lipschitz_bound() * euclidean_to_ambient(norm, x.len());
    let value_at = |t: f64| -> f64 { norm.eval(&sub(x, &curve.eval(t))) };

    let mut best_t = 0.0;
    let mut best_val = f64::INFINITY;
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let init = 64usize;
    for k in 0..init {
        let lo = k as f64 / init as f64;
        let hi = (k + 1) as f64 / init as f64;
        let mid = 0.5 * (lo + hi);
        let v = value_at(mid);
        if v < best_val {
            best_val = v;
            best_t = mid;
        }
        heap.push(Node {
            lower: v - lip * 0.5 * (hi - lo),
            lo,
            hi,
        });
    }

    let budget = cfg.iter_budget();
    let mut processed = init;
    let mut global_lower = f64::NEG_INFINITY;
    while let Some(node) = heap.pop() {
        global_lower = node.lower;
        if best_val - global_lower <= cfg.tolerance {
            break;
        }
        if processed >= budget || node.hi - node.lo < 1e-15 {
            // Push back so the exhausted-budget gap stays truthful.
            heap.push(node);
            break;
        }
        processed += 1;
        let mid = 0.5 * (node.lo + node.hi);
        for (lo, hi) in [(node.lo, mid), (mid, node.hi)] {
            let c = 0.5 * (lo + hi);
            let v = value_at(c);
            if v < best_val {
                best_val = v;
                best_t = c;
            }
            heap.push(Node {
                lower: v - lip * 0.5 * (hi - lo),
                lo,
                hi,
            });
        }
    }
    let heap_lower = heap
        .peek()
        .map_or(global_lower, |n| n.lower.min(global_lower));
    let gap = (best_val - heap_lower).max(0.0);
    Ok(SolveOutcome {
        point: curve.eval(best_t),
        value: best_val,
        certified_gap: Some(gap),
        iterations: processed,
        converged: gap <= cfg.tolerance,
        method: SolveMethod::Grid,
    })
}

/// Pattern search over `{ f <= level }`, kept feasible by bisecting back to
/// the boundary along each proposed segment. Heuristic: no certificate.
fn pattern_search(
    norm: &NormDescriptor,
    f: &ConvexFn,
    level: f64,
    anchor: &[f64],
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let dim = x.len();
    let feasible = |p: &[f64]| f.eval(p) <= level + 1e-12;

    // Starting point: the probe itself if feasible, else the boundary
    // point along the segment from the anchor to the probe.
    let mut y: Vector = if feasible(x) {
        x.to_vec()
    } else {
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..70 {
            let mid = 0.5 * (lo + hi);
            if feasible(&lerp(anchor, x, mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lerp(anchor, x, lo)
    };
    let mut val = norm.eval(&sub(x, &y));

    let mut dirs: Vec<Vector> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        dirs.push(e.clone());
        e[i] = -1.0;
        dirs.push(e);
    }
    let mut rng = stream(cfg.seed, "pattern-search", 0);
    for _ in 0..8 {
        let g = gaussian_vector(&mut rng, dim);
        let n2 = crate::vector::norm2(&g);
        if n2 > 1e-9 {
            dirs.push(g.iter().map(|t| t / n2).collect());
        }
    }

    let mut step = (val + 1.0).min(1e3);
    let mut evals = 0usize;
    let budget = cfg.iter_budget();
    while step > 1e-14 && evals < budget {
        let mut best_cand: Option<(Vector, f64)> = None;
        for d in &dirs {
            evals += 1;
            let raw: Vector = y.iter().zip(d).map(|(a, b)| a + step * b).collect();
            let cand = if feasible(&raw) {
                raw
            } else {
                let mut lo = 0.0;
                let mut hi = 1.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if feasible(&lerp(&y, &raw, mid)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lerp(&y, &raw, lo)
            };
            let v = norm.eval(&sub(x, &cand));
            if v < val - 1e-18 && best_cand.as_ref().map_or(true, |(_, bv)| v < *bv) {
                best_cand = Some((cand, v));
            }
        }
        match best_cand {
            Some((cand, v)) => {
                y = cand;
                val = v;
            }
            None => step *= 0.5,
        }
    }
    Ok(SolveOutcome {
        point: y,
        value: val,
        certified_gap: None,
        iterations: evals,
        converged: step <= 1e-12,
        method: SolveMethod::Grid,
    })
}

/// Coarse-to-fine lattice scan for dimensions up to three. Membership uses
/// a tolerance of half the cell diagonal so thin sets are not missed; the
/// result is a diagnostic approximation, never certified.
fn lattice(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let dim = set.dim();
    if dim > 3 {
        return Err(SolveError::Unsupported {
            method: SolveMethod::Grid,
            why: "lattice scan only covers dimensions 1 to 3".into(),
        });
    }
    let Some((mut lo, mut hi)) = set.coordinate_bounds() else {
        return Err(SolveError::Unsupported {
            method: SolveMethod::Grid,
            why: "set exposes no coordinate bounds".into(),
        });
    };
    let per_axis = 33usize;
    let rounds = (12.0 * cfg.budget_scale).clamp(4.0, 24.0) as usize;
    let mut best: Option<(Vector, f64)> = None;
    let mut evals = 0usize;
    for _ in 0..rounds {
        let widths: Vector = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
        let cell_diag = widths
            .iter()
            .map(|w| (w / (per_axis - 1) as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        let tol = (0.51 * cell_diag).max(1e-12);
        let mut round_best: Option<(Vector, f64)> = None;
        let mut idx = vec![0usize; dim];
        loop {
            let p: Vector = (0..dim)
                .map(|i| lo[i] + widths[i] * idx[i] as f64 / (per_axis - 1) as f64)
                .collect();
            evals += 1;
            if set.contains(&p, tol) {
                let v = norm.eval(&sub(x, &p));
                if round_best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    round_best = Some((p, v));
                }
            }
            // Odometer increment.
            let mut c = 0;
            loop {
                idx[c] += 1;
                if idx[c] < per_axis {
                    break;
                }
                idx[c] = 0;
                c += 1;
                if c == dim {
                    break;
                }
            }
            if c == dim {
                break;
            }
        }
        let Some((center, v)) = round_best else { break };
        if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
            best = Some((center.clone(), v));
        }
        // Shrink the box around the round's best cell.
        for i in 0..dim {
            let w = widths[i] * 0.25;
            lo[i] = (center[i] - w).max(lo[i]);
            hi[i] = (center[i] + w).min(hi[i]);
        }
    }
    let Some((point, value)) = best else {
        return Err(SolveError::Unsupported {
            method: SolveMethod::Grid,
            why: "lattice never intersected the set".into(),
        });
    };
    Ok(SolveOutcome {
        point,
        value,
        certified_gap: None,
        iterations: evals,
        converged: false,
        method: SolveMethod::Grid,
    })
}
