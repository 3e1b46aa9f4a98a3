//! Projected subgradient descent. Polytopes (and materialized scaled-basis
//! hulls) are parametrized by simplex weights over their vertices; norm
//! balls by radial retraction of the ambient point. Both finish with a
//! compass sweep and report a duality-gap certificate at the final point,
//! so the route stays honest even when the descent itself stalls.

use crate::norm::NormDescriptor;
use crate::rng::{gaussian_vector, stream};
use crate::sets::ClosedSetRep;
use crate::solver::{
    duality_gap, subgradient_candidates, SolveError, SolveMethod, SolveOutcome, SolverConfig,
};
use crate::vector::{norm2, pairing, sub, Vector};

const HULL_MATERIALIZE_CAP: usize = 512;

pub fn solve(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    match set {
        ClosedSetRep::Polytope { vertices } => simplex_descent(norm, set, vertices, x, cfg),
        ClosedSetRep::ScaledBasisHull { dim } => {
            if *dim > HULL_MATERIALIZE_CAP {
                return Err(SolveError::Unsupported {
                    method: SolveMethod::Subgradient,
                    why: format!(
                        "materializing {dim} hull vertices exceeds the {HULL_MATERIALIZE_CAP} cap"
                    ),
                });
            }
            let vertices: Vec<Vector> = (0..*dim)
                .map(|i| ClosedSetRep::hull_vertex(*dim, i))
                .collect();
            simplex_descent(norm, set, &vertices, x, cfg)
        }
        ClosedSetRep::NormBall {
            center,
            radius,
            norm: ball,
        } => ball_descent(norm, set, center, *radius, ball, x, cfg),
        _ => Err(SolveError::Unsupported {
            method: SolveMethod::Subgradient,
            why: "needs a vertex-parametrized set or a norm ball".into(),
        }),
    }
}

/// Euclidean projection onto the probability simplex (sort-based, exact).
fn project_simplex(v: &[f64]) -> Vector {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut running = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        running += ui;
        let t = (running - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|vi| (vi - theta).max(0.0)).collect()
}

/// Compass sweep shared by both parametrizations: try every direction at
/// the current step, accept strict improvements, halve the step when the
/// whole sweep fails. Returns evaluations spent.
fn compass_finish(
    param: &mut Vector,
    val: &mut f64,
    dirs: &[Vector],
    project: impl Fn(&[f64]) -> Vector,
    value_of: impl Fn(&[f64]) -> f64,
    mut step: f64,
    budget: usize,
) -> usize {
    let mut evals = 0usize;
    while step > 1e-14 && evals < budget {
        let mut improved = false;
        for d in dirs {
            evals += 1;
            let raw: Vector = param.iter().zip(d).map(|(p, di)| p + step * di).collect();
            let cand = project(&raw);
            let v = value_of(&cand);
            if v < *val - 1e-16 {
                *param = cand;
                *val = v;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    evals
}

fn finish_outcome(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    point: Vector,
    iterations: usize,
    cfg: &SolverConfig,
) -> SolveOutcome {
    let value = norm.eval(&sub(x, &point));
    let certified_gap = duality_gap(norm, set, x, &point);
    let converged = certified_gap.is_some_and(|g| g <= cfg.tolerance);
    SolveOutcome {
        point,
        value,
        certified_gap,
        iterations,
        converged,
        method: SolveMethod::Subgradient,
    }
}

fn simplex_descent(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    vertices: &[Vector],
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let m = vertices.len();
    let combine = |lambda: &[f64]| -> Vector {
        let dim = x.len();
        let mut y = vec![0.0; dim];
        for (w, v) in lambda.iter().zip(vertices) {
            if *w != 0.0 {
                for i in 0..dim {
                    y[i] += w * v[i];
                }
            }
        }
        y
    };
    let value_of = |lambda: &[f64]| -> f64 { norm.eval(&sub(x, &combine(lambda))) };

    // Start from the nearest vertex; a uniform mix rarely beats it but is
    // cheap to check.
    let vertex_vals: Vec<f64> = vertices.iter().map(|v| norm.eval(&sub(x, v))).collect();
    let mut nearest: Vec<usize> = (0..m).collect();
    nearest.sort_by(|&a, &b| vertex_vals[a].total_cmp(&vertex_vals[b]).then(a.cmp(&b)));
    let mut lambda = vec![0.0; m];
    lambda[nearest[0]] = 1.0;
    let mut val = vertex_vals[nearest[0]];
    let uniform = vec![1.0 / m as f64; m];
    let uniform_val = value_of(&uniform);
    if uniform_val < val {
        lambda = uniform;
        val = uniform_val;
    }

    let budget = cfg.iter_budget();
    let mut evals = m + 1;
    let descent_budget = budget / 2 + evals;
    let mut alpha = 0.5;
    while evals < descent_budget && val > 0.0 {
        let r = sub(x, &combine(&lambda));
        let grads = subgradient_candidates(norm, &r);
        if grads.is_empty() {
            break; // residual vanished: the probe is in the set
        }
        let mut best_step: Option<(Vector, f64)> = None;
        for g in grads.iter().take(3) {
            evals += 1;
            // d h / d lambda_i = -<g, v_i>, so ascent of <g, v_.> descends.
            let moved: Vector = lambda
                .iter()
                .enumerate()
                .map(|(i, li)| li + alpha * pairing(g, &vertices[i]))
                .collect();
            let cand = project_simplex(&moved);
            let v = value_of(&cand);
            if v < val && best_step.as_ref().map_or(true, |(_, bv)| v < *bv) {
                best_step = Some((cand, v));
            }
        }
        match best_step {
            Some((cand, v)) => {
                lambda = cand;
                val = v;
                alpha = (alpha * 1.5).min(1e3);
            }
            None => {
                alpha *= 0.5;
                if alpha < 1e-14 {
                    break;
                }
            }
        }
    }

    // Compass directions: weight transfers between vertices, zero-sum
    // random blends, and snaps back to the nearest vertices.
    let mut active: Vec<usize> = (0..m).filter(|&i| lambda[i] > 1e-9).collect();
    if m <= 48 {
        active = (0..m).collect();
    } else {
        active.extend(nearest.iter().take(12).copied());
        active.sort_unstable();
        active.dedup();
        active.truncate(24);
    }
    let mut dirs: Vec<Vector> = Vec::new();
    for &i in &active {
        for &j in &active {
            if i != j {
                let mut d = vec![0.0; m];
                d[i] = 1.0;
                d[j] = -1.0;
                dirs.push(d);
            }
        }
    }
    let mut rng = stream(cfg.seed, "simplex-compass", 0);
    for _ in 0..16 {
        let g = gaussian_vector(&mut rng, m);
        let mean = g.iter().sum::<f64>() / m as f64;
        let d: Vector = g.iter().map(|t| t - mean).collect();
        let n2 = norm2(&d);
        if n2 > 1e-9 {
            dirs.push(d.iter().map(|t| t / n2).collect());
        }
    }
    for &i in nearest.iter().take(3) {
        if vertex_vals[i] < val {
            lambda = vec![0.0; m];
            lambda[i] = 1.0;
            val = vertex_vals[i];
        }
    }
    evals += compass_finish(
        &mut lambda,
        &mut val,
        &dirs,
        project_simplex,
        value_of,
        0.25,
        budget.saturating_sub(evals),
    );
    Ok(finish_outcome(norm, set, x, combine(&lambda), evals, cfg))
}

fn ball_descent(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    center: &[f64],
    radius: f64,
    ball: &NormDescriptor,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let dim = x.len();
    let retract = |z: &[f64]| -> Vector {
        let offset = sub(z, center);
        let b = ball.eval(&offset);
        if b <= radius {
            z.to_vec()
        } else {
            let s = radius / b;
            center.iter().zip(&offset).map(|(c, o)| c + s * o).collect()
        }
    };
    if ball.eval(&sub(x, center)) <= radius {
        return Ok(SolveOutcome {
            point: x.to_vec(),
            value: 0.0,
            certified_gap: Some(0.0),
            iterations: 1,
            converged: true,
            method: SolveMethod::Subgradient,
        });
    }

    let value_of = |z: &[f64]| -> f64 { norm.eval(&sub(x, z)) };
    let mut z = retract(x);
    let mut val = value_of(&z);
    let budget = cfg.iter_budget();
    let mut evals = 1usize;
    let descent_budget = budget / 2;
    let mut alpha = 0.5 * radius.max(1e-6);
    while evals < descent_budget && val > 0.0 {
        let r = sub(x, &z);
        let grads = subgradient_candidates(norm, &r);
        if grads.is_empty() {
            break;
        }
        let mut best_step: Option<(Vector, f64)> = None;
        for g in grads.iter().take(3) {
            evals += 1;
            let moved: Vector = z.iter().zip(g).map(|(zi, gi)| zi + alpha * gi).collect();
            let cand = retract(&moved);
            let v = value_of(&cand);
            if v < val && best_step.as_ref().map_or(true, |(_, bv)| v < *bv) {
                best_step = Some((cand, v));
            }
        }
        match best_step {
            Some((cand, v)) => {
                z = cand;
                val = v;
                alpha = (alpha * 1.5).min(1e6);
            }
            None => {
                alpha *= 0.5;
                if alpha < 1e-14 {
                    break;
                }
            }
        }
    }

    let mut dirs: Vec<Vector> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        dirs.push(e.clone());
        e[i] = -1.0;
        dirs.push(e);
    }
    let mut rng = stream(cfg.seed, "ball-compass", 0);
    for _ in 0..8 {
        let g = gaussian_vector(&mut rng, dim);
        let n2 = norm2(&g);
        if n2 > 1e-9 {
            dirs.push(g.iter().map(|t| t / n2).collect());
        }
    }
    evals += compass_finish(
        &mut z,
        &mut val,
        &dirs,
        |raw| retract(raw),
        value_of,
        0.5 * radius.max(1e-6),
        budget.saturating_sub(evals),
    );
    Ok(finish_outcome(norm, set, x, z, evals, cfg))
}
