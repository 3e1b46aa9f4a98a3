//! Closed-set representations the projection engine can work against:
//! finite point sets, polytopes given by vertices, norm balls, sublevel
//! sets of convex functions, parametric curves, unions, and an implicit
//! hull of scaled basis vectors that stays cheap in high dimension.
//!
//! Each representation exposes the operations solvers lean on: membership
//! with tolerance, linear minimization (where exact), deterministic point
//! sampling, support values, and coordinate bounds for grid methods.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{solve_standard, LpOutcome};
use crate::norm::NormDescriptor;
use crate::vector::{pairing, Vector};

#[derive(Debug, Error)]
pub enum SetError {
    #[error("set has no points")]
    Empty,
    #[error("dimension mismatch inside set description: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("radius must be finite and positive, got {0}")]
    BadRadius(f64),
    #[error("scaled basis hull needs dimension >= 1")]
    BadHullDim,
    #[error("sublevel anchor violates the constraint: f(anchor) = {value} > level = {level}")]
    InfeasibleAnchor { value: f64, level: f64 },
    #[error("polyline needs at least two points")]
    ShortPolyline,
    #[error("quadratic coefficients must be nonnegative for convexity")]
    NonConvexQuadratic,
    #[error("max-affine pieces and offsets must match and be nonempty")]
    BadAffinePieces,
    #[error(transparent)]
    Norm(#[from] crate::norm::NormError),
}

/// Convex function families for sublevel-set models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexFn {
    /// `max_j (<rows[j], x> + offsets[j])`.
    MaxAffine {
        rows: Vec<Vector>,
        offsets: Vec<f64>,
    },
    /// `sum_i diag[i] x_i^2 + <lin, x> + constant`, `diag >= 0`.
    Quadratic {
        diag: Vector,
        lin: Vector,
        constant: f64,
    },
    /// Distance to a center under a chosen norm.
    DistanceTo {
        norm: NormDescriptor,
        center: Vector,
    },
}

impl ConvexFn {
    pub fn dim(&self) -> usize {
        match self {
            ConvexFn::MaxAffine { rows, .. } => rows.first().map_or(0, Vec::len),
            ConvexFn::Quadratic { diag, .. } => diag.len(),
            ConvexFn::DistanceTo { center, .. } => center.len(),
        }
    }

    pub fn validate(&self) -> Result<(), SetError> {
        match self {
            ConvexFn::MaxAffine { rows, offsets } => {
                if rows.is_empty() || rows.len() != offsets.len() {
                    return Err(SetError::BadAffinePieces);
                }
                let d = rows[0].len();
                for r in rows {
                    if r.len() != d {
                        return Err(SetError::DimensionMismatch {
                            expected: d,
                            got: r.len(),
                        });
                    }
                }
                Ok(())
            }
            ConvexFn::Quadratic { diag, lin, .. } => {
                if diag.iter().any(|d| *d < 0.0) {
                    return Err(SetError::NonConvexQuadratic);
                }
                if diag.len() != lin.len() {
                    return Err(SetError::DimensionMismatch {
                        expected: diag.len(),
                        got: lin.len(),
                    });
                }
                Ok(())
            }
            ConvexFn::DistanceTo { norm, center } => {
                norm.validate()?;
                norm.check_dim(center.len())?;
                Ok(())
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ConvexFn::MaxAffine { rows, offsets } => rows
                .iter()
                .zip(offsets)
                .map(|(r, b)| pairing(r, x) + b)
                .fold(f64::NEG_INFINITY, f64::max),
            ConvexFn::Quadratic {
                diag,
                lin,
                constant,
            } => {
                let quad: f64 = diag.iter().zip(x).map(|(d, xi)| d * xi * xi).sum();
                quad + pairing(lin, x) + constant
            }
            ConvexFn::DistanceTo { norm, center } => {
                let diff: Vector = x.iter().zip(center).map(|(a, b)| a - b).collect();
                norm.eval(&diff)
            }
        }
    }
}

/// One-parameter curve traced over `t` in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveFn {
    Circle { center: Vector, radius: f64 },
    Polyline { points: Vec<Vector> },
}

impl CurveFn {
    pub fn dim(&self) -> usize {
        match self {
            CurveFn::Circle { center, .. } => center.len(),
            CurveFn::Polyline { points } => points.first().map_or(0, Vec::len),
        }
    }

    pub fn validate(&self) -> Result<(), SetError> {
        match self {
            CurveFn::Circle { center, radius } => {
                if center.len() != 2 {
                    return Err(SetError::DimensionMismatch {
                        expected: 2,
                        got: center.len(),
                    });
                }
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(SetError::BadRadius(*radius));
                }
                Ok(())
            }
            CurveFn::Polyline { points } => {
                if points.len() < 2 {
                    return Err(SetError::ShortPolyline);
                }
                let d = points[0].len();
                for p in points {
                    if p.len() != d {
                        return Err(SetError::DimensionMismatch {
                            expected: d,
                            got: p.len(),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    pub fn closed(&self) -> bool {
        match self {
            CurveFn::Circle { .. } => true,
            CurveFn::Polyline { points } => {
                let (a, b) = (&points[0], &points[points.len() - 1]);
                a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
            }
        }
    }

    pub fn eval(&self, t: f64) -> Vector {
        let t = t.clamp(0.0, 1.0);
        match self {
            CurveFn::Circle { center, radius } => {
                let a = std::f64::consts::TAU * t;
                vec![center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
            CurveFn::Polyline { points } => {
                // Parametrized proportionally to Euclidean chord length.
                let lens: Vec<f64> = points
                    .windows(2)
                    .map(|w| crate::vector::norm2(&crate::vector::sub(&w[1], &w[0])))
                    .collect();
                let total: f64 = lens.iter().sum();
                if total == 0.0 {
                    return points[0].clone();
                }
                let mut target = t * total;
                for (i, len) in lens.iter().enumerate() {
                    if target <= *len || i == lens.len() - 1 {
                        let s = if *len > 0.0 { target / len } else { 0.0 };
                        return crate::vector::lerp(&points[i], &points[i + 1], s.clamp(0.0, 1.0));
                    }
                    target -= len;
                }
                points[points.len() - 1].clone()
            }
        }
    }

    /// Euclidean Lipschitz bound of `t -> eval(t)`, used by grid solvers to
    /// prune. Exact for both families.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            CurveFn::Circle { radius, .. } => std::f64::consts::TAU * radius,
            CurveFn::Polyline { points } => points
                .windows(2)
                .map(|w| crate::vector::norm2(&crate::vector::sub(&w[1], &w[0])))
                .sum(),
        }
    }
}

/// Closed subsets of R^n the engine can project onto.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedSetRep {
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
        f: ConvexFn,
        level: f64,
        /// A point known to satisfy the constraint; seeds searches.
        anchor: Vector,
    },
    ParametricCurve {
        curve: CurveFn,
    },
    /// Convex hull of `dim` scaled basis vectors, where vertex `n`
    /// (1-indexed) is `((n+1)/n) * e_n`. All vertices sit strictly outside
    /// the unit ball, pairwise l1 distances exceed 2, and the distance from
    /// the origin decreases with `dim` without a limiting nearest point —
    /// kept implicit so high dimensions stay cheap.
    ScaledBasisHull {
        dim: usize,
    },
    UnionOf {
        parts: Vec<ClosedSetRep>,
    },
}

/// Scale applied to basis vector `n` (0-indexed storage) in a
/// `ScaledBasisHull`.
pub fn basis_scale(index: usize) -> f64 {
    let n = (index + 1) as f64;
    (n + 1.0) / n
}

impl ClosedSetRep {
    pub fn dim(&self) -> usize {
        match self {
            ClosedSetRep::FinitePointSet { points } => points.first().map_or(0, Vec::len),
            ClosedSetRep::Polytope { vertices } => vertices.first().map_or(0, Vec::len),
            ClosedSetRep::NormBall { center, .. } => center.len(),
            ClosedSetRep::SublevelSet { anchor, .. } => anchor.len(),
            ClosedSetRep::ParametricCurve { curve } => curve.dim(),
            ClosedSetRep::ScaledBasisHull { dim } => *dim,
            ClosedSetRep::UnionOf { parts } => parts.first().map_or(0, ClosedSetRep::dim),
        }
    }

    pub fn validate(&self) -> Result<(), SetError> {
        let expect_dim = |pts: &[Vector]| -> Result<(), SetError> {
            if pts.is_empty() {
                return Err(SetError::Empty);
            }
            let d = pts[0].len();
            if d == 0 {
                return Err(SetError::Empty);
            }
            for p in pts {
                if p.len() != d {
                    return Err(SetError::DimensionMismatch {
                        expected: d,
                        got: p.len(),
                    });
                }
            }
            Ok(())
        };
        match self {
            ClosedSetRep::FinitePointSet { points } => expect_dim(points),
            ClosedSetRep::Polytope { vertices } => expect_dim(vertices),
            ClosedSetRep::NormBall {
                center,
                radius,
                norm,
            } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(SetError::BadRadius(*radius));
                }
                norm.validate()?;
                norm.check_dim(center.len())?;
                Ok(())
            }
            ClosedSetRep::SublevelSet { f, level, anchor } => {
                f.validate()?;
                if f.dim() != anchor.len() {
                    return Err(SetError::DimensionMismatch {
                        expected: f.dim(),
                        got: anchor.len(),
                    });
                }
                let value = f.eval(anchor);
                if value > *level + 1e-12 {
                    return Err(SetError::InfeasibleAnchor {
                        value,
                        level: *level,
                    });
                }
                Ok(())
            }
            ClosedSetRep::ParametricCurve { curve } => curve.validate(),
            ClosedSetRep::ScaledBasisHull { dim } => {
                if *dim == 0 {
                    Err(SetError::BadHullDim)
                } else {
                    Ok(())
                }
            }
            ClosedSetRep::UnionOf { parts } => {
                if parts.is_empty() {
                    return Err(SetError::Empty);
                }
                let d = parts[0].dim();
                for p in parts {
                    p.validate()?;
                    if p.dim() != d {
                        return Err(SetError::DimensionMismatch {
                            expected: d,
                            got: p.dim(),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// Convexity as a structural property of the representation.
    pub fn is_convex(&self) -> bool {
        match self {
            ClosedSetRep::FinitePointSet { points } => points.len() <= 1,
            ClosedSetRep::Polytope { .. }
            | ClosedSetRep::NormBall { .. }
            | ClosedSetRep::SublevelSet { .. }
            | ClosedSetRep::ScaledBasisHull { .. } => true,
            ClosedSetRep::ParametricCurve { .. } | ClosedSetRep::UnionOf { .. } => false,
        }
    }

    /// Vertex of a `ScaledBasisHull`, materialized densely.
    pub fn hull_vertex(dim: usize, index: usize) -> Vector {
        let mut v = vec![0.0; dim];
        v[index] = basis_scale(index);
        v
    }

    /// Membership test with absolute tolerance, measured coordinate-wise
    /// for point-like parts and as constraint slack elsewhere. Polytope
    /// membership solves a small feasibility program — intended for modest
    /// vertex counts.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            ClosedSetRep::FinitePointSet { points } => points
                .iter()
                .any(|p| p.iter().zip(x).all(|(a, b)| (a - b).abs() <= tol)),
            ClosedSetRep::Polytope { vertices } => {
                polytope_residual(vertices, x).map_or(false, |r| r <= tol)
            }
            ClosedSetRep::NormBall {
                center,
                radius,
                norm,
            } => {
                let diff: Vector = x.iter().zip(center).map(|(a, b)| a - b).collect();
                norm.eval(&diff) <= radius + tol
            }
            ClosedSetRep::SublevelSet { f, level, .. } => f.eval(x) <= level + tol,
            ClosedSetRep::ParametricCurve { curve } => {
                // Coarse scan plus golden-section refinement of the
                // coordinate gap.
                let gap = |t: f64| -> f64 {
                    let p = curve.eval(t);
                    p.iter()
                        .zip(x)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                };
                let steps = 512;
                let mut best_t = 0.0;
                let mut best = f64::INFINITY;
                for k in 0..=steps {
                    let t = k as f64 / steps as f64;
                    let g = gap(t);
                    if g < best {
                        best = g;
                        best_t = t;
                    }
                }
                let (mut lo, mut hi) = (
                    (best_t - 1.5 / steps as f64).max(0.0),
                    (best_t + 1.5 / steps as f64).min(1.0),
                );
                let phi = 0.5 * (3.0 - 5.0f64.sqrt());
                for _ in 0..60 {
                    let a = lo + phi * (hi - lo);
                    let b = hi - phi * (hi - lo);
                    if gap(a) <= gap(b) {
                        hi = b;
                    } else {
                        lo = a;
                    }
                }
                best.min(gap(0.5 * (lo + hi))) <= tol
            }
            ClosedSetRep::ScaledBasisHull { dim } => {
                if x.len() != *dim {
                    return false;
                }
                if x.iter().any(|xi| *xi < -tol) {
                    return false;
                }
                let coeff_sum: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, xi)| xi / basis_scale(i))
                    .sum();
                (coeff_sum - 1.0).abs() <= tol
            }
            ClosedSetRep::UnionOf { parts } => parts.iter().any(|p| p.contains(x, tol)),
        }
    }

    /// Exact linear minimization `argmin { <f, y> : y in set }` where the
    /// representation supports it. Ties break toward the lowest vertex
    /// index so runs are reproducible.
    pub fn lmo(&self, f: &[f64]) -> Option<Vector> {
        match self {
            ClosedSetRep::FinitePointSet { points } => {
                argmin_by_pairing(points, f).map(|i| points[i].clone())
            }
            ClosedSetRep::Polytope { vertices } => {
                argmin_by_pairing(vertices, f).map(|i| vertices[i].clone())
            }
            ClosedSetRep::NormBall {
                center,
                radius,
                norm,
            } => {
                if f.iter().all(|t| *t == 0.0) {
                    return Some(center.clone());
                }
                let u = norm.dual_attaining(f).ok()?;
                Some(
                    center
                        .iter()
                        .zip(&u)
                        .map(|(c, ui)| c - radius * ui)
                        .collect(),
                )
            }
            ClosedSetRep::ScaledBasisHull { dim } => {
                let mut best = 0usize;
                let mut best_val = f[0] * basis_scale(0);
                for i in 1..*dim {
                    let val = f[i] * basis_scale(i);
                    if val < best_val {
                        best_val = val;
                        best = i;
                    }
                }
                Some(Self::hull_vertex(*dim, best))
            }
            _ => None,
        }
    }

    /// Support value `max { <f, y> : y in set }` where exact.
    pub fn support(&self, f: &[f64]) -> Option<f64> {
        match self {
            ClosedSetRep::FinitePointSet { points }
            | ClosedSetRep::Polytope { vertices: points } => points
                .iter()
                .map(|p| pairing(f, p))
                .fold(None, |acc: Option<f64>, v| {
                    Some(acc.map_or(v, |a| a.max(v)))
                }),
            ClosedSetRep::NormBall {
                center,
                radius,
                norm,
            } => Some(pairing(f, center) + radius * norm.dual_norm(f).ok()?),
            ClosedSetRep::ScaledBasisHull { dim } => Some(
                (0..*dim)
                    .map(|i| f[i] * basis_scale(i))
                    .fold(f64::NEG_INFINITY, f64::max),
            ),
            _ => None,
        }
    }

    /// Explicit vertex list, if the representation carries one.
    pub fn vertices(&self) -> Option<&[Vector]> {
        match self {
            ClosedSetRep::FinitePointSet { points } => Some(points),
            ClosedSetRep::Polytope { vertices } => Some(vertices),
            _ => None,
        }
    }

    /// Per-coordinate bounds `[lo, hi]` containing the set, where cheap.
    pub fn coordinate_bounds(&self) -> Option<(Vector, Vector)> {
        match self {
            ClosedSetRep::FinitePointSet { points }
            | ClosedSetRep::Polytope { vertices: points } => {
                let d = points.first()?.len();
                let mut lo = vec![f64::INFINITY; d];
                let mut hi = vec![f64::NEG_INFINITY; d];
                for p in points {
                    for i in 0..d {
                        lo[i] = lo[i].min(p[i]);
                        hi[i] = hi[i].max(p[i]);
                    }
                }
                Some((lo, hi))
            }
            ClosedSetRep::NormBall {
                center,
                radius,
                norm,
            } => {
                let d = center.len();
                let mut lo = Vec::with_capacity(d);
                let mut hi = Vec::with_capacity(d);
                for i in 0..d {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    let reach = radius * norm.dual_norm(&e).ok()?;
                    lo.push(center[i] - reach);
                    hi.push(center[i] + reach);
                }
                Some((lo, hi))
            }
            ClosedSetRep::ParametricCurve { curve } => match curve {
                CurveFn::Circle { center, radius } => Some((
                    vec![center[0] - radius, center[1] - radius],
                    vec![center[0] + radius, center[1] + radius],
                )),
                CurveFn::Polyline { points } => ClosedSetRep::Polytope {
                    vertices: points.clone(),
                }
                .coordinate_bounds(),
            },
            ClosedSetRep::ScaledBasisHull { dim } => {
                Some((vec![0.0; *dim], (0..*dim).map(basis_scale).collect()))
            }
            ClosedSetRep::SublevelSet { .. } => None,
            ClosedSetRep::UnionOf { parts } => {
                let mut acc: Option<(Vector, Vector)> = None;
                for p in parts {
                    let (lo, hi) = p.coordinate_bounds()?;
                    acc = Some(match acc {
                        None => (lo, hi),
                        Some((alo, ahi)) => (
                            alo.iter().zip(&lo).map(|(a, b)| a.min(*b)).collect(),
                            ahi.iter().zip(&hi).map(|(a, b)| a.max(*b)).collect(),
                        ),
                    });
                }
                acc
            }
        }
    }

    /// Deterministic point sample of the set. Polytopes lead with their
    /// vertices and edge midpoints so flat faces are populated; closed
    /// curves get an equispaced sweep with a random phase (an even count
    /// then contains exact antipodal pairs); open curves include both
    /// endpoints; sublevel sets shoot rays from the anchor and bisect to
    /// the boundary.
    pub fn sample_points<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<Vector> {
        if count == 0 {
            return Vec::new();
        }
        match self {
            ClosedSetRep::FinitePointSet { points } => (0..count)
                .map(|i| points[i % points.len()].clone())
                .collect(),
            ClosedSetRep::Polytope { vertices } => sample_hull(
                &|i| vertices[i].clone(),
                vertices.len(),
                vertices[0].len(),
                count,
                rng,
            ),
            ClosedSetRep::ScaledBasisHull { dim } => {
                sample_hull(&|i| Self::hull_vertex(*dim, i), *dim, *dim, count, rng)
            }
            ClosedSetRep::NormBall {
                center,
                radius,
                norm,
            } => {
                let d = center.len();
                (0..count)
                    .map(|k| {
                        let u = norm.unit_sample(rng, d);
                        // Mostly boundary, some interior.
                        let r = if k % 4 == 3 {
                            radius * rng.gen::<f64>()
                        } else {
                            *radius
                        };
                        center.iter().zip(&u).map(|(c, ui)| c + r * ui).collect()
                    })
                    .collect()
            }
            ClosedSetRep::SublevelSet { f, level, anchor } => {
                let d = anchor.len();
                let mut out = vec![anchor.clone()];
                while out.len() < count {
                    let dir = crate::rng::gaussian_vector(rng, d);
                    // Find the boundary along anchor + t * dir.
                    let mut t_hi = 1.0;
                    let at = |t: f64| -> Vector {
                        anchor.iter().zip(&dir).map(|(a, g)| a + t * g).collect()
                    };
                    let mut grew = 0;
                    while f.eval(&at(t_hi)) <= *level && grew < 200 {
                        t_hi *= 2.0;
                        grew += 1;
                    }
                    if grew == 200 {
                        // Unbounded direction: take a far interior point.
                        out.push(at(t_hi.min(1e6)));
                        continue;
                    }
                    let mut lo = 0.0;
                    let mut hi = t_hi;
                    for _ in 0..70 {
                        let mid = 0.5 * (lo + hi);
                        if f.eval(&at(mid)) <= *level {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    out.push(at(lo));
                }
                out.truncate(count);
                out
            }
            ClosedSetRep::ParametricCurve { curve } => {
                if curve.closed() {
                    let offset = rng.gen::<f64>();
                    (0..count)
                        .map(|i| curve.eval(((i as f64 + offset) / count as f64).fract()))
                        .collect()
                } else if count == 1 {
                    vec![curve.eval(0.0)]
                } else {
                    (0..count)
                        .map(|i| curve.eval(i as f64 / (count - 1) as f64))
                        .collect()
                }
            }
            ClosedSetRep::UnionOf { parts } => {
                let mut out = Vec::with_capacity(count);
                let per = count / parts.len() + 1;
                for part in parts {
                    out.extend(part.sample_points(per, rng));
                }
                out.truncate(count);
                out
            }
        }
    }
}

/// l1 residual of the best convex-combination fit of `x` by `vertices`,
/// via a feasibility program. `None` when the program fails numerically.
pub fn polytope_residual(vertices: &[Vector], x: &[f64]) -> Option<f64> {
    let n = x.len();
    let m = vertices.len();
    // Variables: m hull weights, then n positive and n negative slacks.
    let nvars = m + 2 * n;
    let mut a = vec![vec![0.0; nvars]; n + 1];
    let mut b = vec![0.0; n + 1];
    for i in 0..n {
        for (j, v) in vertices.iter().enumerate() {
            a[i][j] = v[i];
        }
        a[i][m + i] = 1.0;
        a[i][m + n + i] = -1.0;
        b[i] = x[i];
    }
    for j in 0..m {
        a[n][j] = 1.0;
    }
    b[n] = 1.0;
    let mut c = vec![0.0; nvars];
    for k in m..nvars {
        c[k] = 1.0;
    }
    match solve_standard(&c, &a, &b, 1e-11) {
        LpOutcome::Optimal { value, .. } => Some(value.max(0.0)),
        _ => None,
    }
}

fn argmin_by_pairing(points: &[Vector], f: &[f64]) -> Option<usize> {
    if points.is_empty() {
        return None;
    }
    let mut best = 0usize;
    let mut best_val = pairing(f, &points[0]);
    for (i, p) in points.iter().enumerate().skip(1) {
        let val = pairing(f, p);
        if val < best_val {
            best_val = val;
            best = i;
        }
    }
    Some(best)
}

/// Vertices, then edge mixtures, then full random convex combinations.
fn sample_hull<R: Rng>(
    vertex: &dyn Fn(usize) -> Vector,
    nverts: usize,
    dim: usize,
    count: usize,
    rng: &mut R,
) -> Vec<Vector> {
    let mut out = Vec::with_capacity(count);
    for i in 0..nverts.min(count) {
        out.push(vertex(i));
    }
    while out.len() < count {
        if out.len() < count / 2 + nverts.min(count) && nverts >= 2 {
            let i = rng.gen_range(0..nverts);
            let mut j = rng.gen_range(0..nverts);
            if j == i {
                j = (j + 1) % nverts;
            }
            let t: f64 = rng.gen();
            out.push(crate::vector::lerp(&vertex(i), &vertex(j), t));
        } else {
            // Dirichlet-style interior mixture over a few vertices.
            let k = 3.min(nverts);
            let mut point = vec![0.0; dim];
            let mut weights = Vec::with_capacity(k);
            let mut total = 0.0;
            for _ in 0..k {
                let w = -(1.0 - rng.gen::<f64>()).ln();
                weights.push(w);
                total += w;
            }
            for w in &mut weights {
                *w /= total;
            }
            for w in weights {
                let v = vertex(rng.gen_range(0..nverts));
                for (pi, vi) in point.iter_mut().zip(&v) {
                    *pi += w * vi;
                }
            }
            out.push(point);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn scaled_basis_hull_vertices_and_membership() {
        // Vertex scales follow (n+1)/n: 2, 3/2, 4/3, ...
        assert_eq!(basis_scale(0), 2.0);
        assert_eq!(basis_scale(1), 1.5);
        assert!((basis_scale(2) - 4.0 / 3.0).abs() < 1e-15);
        let hull = ClosedSetRep::ScaledBasisHull { dim: 3 };
        assert!(hull.contains(&[0.0, 1.5, 0.0], 1e-9));
        assert!(hull.contains(&ClosedSetRep::hull_vertex(3, 2), 1e-9));
        // Midpoint of two vertices stays inside.
        assert!(hull.contains(&[1.0, 0.75, 0.0], 1e-9));
        assert!(!hull.contains(&[0.0, 0.0, 0.0], 1e-6));
        assert!(!hull.contains(&[2.0, 1.5, 0.0], 1e-6));
    }

    #[test]
    fn scaled_basis_hull_lmo_prefers_smallest_scaled_pairing() {
        let hull = ClosedSetRep::ScaledBasisHull { dim: 3 };
        // Scores against all-ones are the scales themselves; index 2 wins.
        let y = hull.lmo(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(y, vec![0.0, 0.0, basis_scale(2)]);
        // Ties resolve to the lowest index.
        let y = hull.lmo(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(y, ClosedSetRep::hull_vertex(3, 0));
    }

    #[test]
    fn polytope_membership_matches_geometry() {
        let square = ClosedSetRep::Polytope {
            vertices: vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
        };
        assert!(square.contains(&[0.5, 0.5], 1e-8));
        assert!(square.contains(&[1.0, 1.0], 1e-8));
        assert!(!square.contains(&[1.5, 0.5], 1e-6));
        assert!(!square.contains(&[-0.2, 0.5], 1e-6));
        let r = polytope_residual(square.vertices().unwrap(), &[2.0, 0.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-8, "residual {r}");
    }

    #[test]
    fn ball_lmo_touches_the_far_side() {
        let ball = ClosedSetRep::NormBall {
            center: vec![0.0, 0.0],
            radius: 2.0,
            norm: NormDescriptor::l2(),
        };
        let y = ball.lmo(&[1.0, 0.0]).unwrap();
        assert!((y[0] + 2.0).abs() < 1e-12 && y[1].abs() < 1e-12);
        let s = ball.support(&[1.0, 0.0]).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn closed_curve_samples_are_equispaced_with_antipodes() {
        let circle = ClosedSetRep::ParametricCurve {
            curve: CurveFn::Circle {
                center: vec![1.0, -1.0],
                radius: 1.0,
            },
        };
        let mut rng = stream(9, "circle", 0);
        let pts = circle.sample_points(8, &mut rng);
        assert_eq!(pts.len(), 8);
        for p in &pts {
            let r = ((p[0] - 1.0).powi(2) + (p[1] + 1.0).powi(2)).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
        // Even counts pair up antipodally: max pairwise distance is the
        // diameter exactly.
        let mut maxd = 0.0f64;
        for a in &pts {
            for b in &pts {
                let d = crate::vector::norm2(&crate::vector::sub(a, b));
                maxd = maxd.max(d);
            }
        }
        assert!((maxd - 2.0).abs() < 1e-12);
    }

    #[test]
    fn open_polyline_samples_include_endpoints() {
        let seg = ClosedSetRep::ParametricCurve {
            curve: CurveFn::Polyline {
                points: vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            },
        };
        let mut rng = stream(9, "segment", 0);
        let pts = seg.sample_points(5, &mut rng);
        assert_eq!(pts[0], vec![0.0, 0.0]);
        assert_eq!(pts[4], vec![1.0, 1.0]);
    }

    #[test]
    fn sublevel_anchor_is_validated_and_samples_stay_feasible() {
        let f = ConvexFn::Quadratic {
            diag: vec![1.0, 1.0],
            lin: vec![0.0, 0.0],
            constant: 0.0,
        };
        let bad = ClosedSetRep::SublevelSet {
            f: f.clone(),
            level: 1.0,
            anchor: vec![2.0, 2.0],
        };
        assert!(matches!(
            bad.validate(),
            Err(SetError::InfeasibleAnchor { .. })
        ));
        let good = ClosedSetRep::SublevelSet {
            f,
            level: 1.0,
            anchor: vec![0.0, 0.0],
        };
        good.validate().unwrap();
        let mut rng = stream(4, "sublevel", 0);
        for p in good.sample_points(30, &mut rng) {
            assert!(good.contains(&p, 1e-6));
        }
    }

    #[test]
    fn coordinate_bounds_cover_samples() {
        let sets = vec![
            ClosedSetRep::NormBall {
                center: vec![1.0, 2.0],
                radius: 0.5,
                norm: NormDescriptor::sup(),
            },
            ClosedSetRep::Polytope {
                vertices: vec![vec![0.0, 0.0], vec![2.0, 0.5], vec![-1.0, 1.0]],
            },
            ClosedSetRep::ScaledBasisHull { dim: 4 },
        ];
        let mut rng = stream(21, "bounds", 0);
        for set in &sets {
            let (lo, hi) = set.coordinate_bounds().unwrap();
            for p in set.sample_points(60, &mut rng) {
                for i in 0..p.len() {
                    assert!(p[i] >= lo[i] - 1e-9 && p[i] <= hi[i] + 1e-9);
                }
            }
        }
    }

    #[test]
    fn union_membership_and_validation() {
        let two = ClosedSetRep::UnionOf {
            parts: vec![
                ClosedSetRep::FinitePointSet {
                    points: vec![vec![-1.0, 0.0]],
                },
                ClosedSetRep::FinitePointSet {
                    points: vec![vec![1.0, 0.0]],
                },
            ],
        };
        two.validate().unwrap();
        assert!(two.contains(&[1.0, 0.0], 1e-9));
        assert!(!two.contains(&[0.0, 0.0], 1e-3));
        let bad = ClosedSetRep::UnionOf { parts: vec![] };
        assert!(matches!(bad.validate(), Err(SetError::Empty)));
    }

    #[test]
    fn set_serde_round_trip() {
        let sets = vec![
            ClosedSetRep::ScaledBasisHull { dim: 16 },
            ClosedSetRep::ParametricCurve {
                curve: CurveFn::Circle {
                    center: vec![0.0, 0.0],
                    radius: 1.0,
                },
            },
            ClosedSetRep::SublevelSet {
                f: ConvexFn::MaxAffine {
                    rows: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                    offsets: vec![0.0, 0.0],
                },
                level: 1.0,
                anchor: vec![0.0, 0.0],
            },
        ];
        for set in sets {
            let txt = serde_json::to_string(&set).unwrap();
            let back: ClosedSetRep = serde_json::from_str(&txt).unwrap();
            assert_eq!(set, back);
        }
    }
}
