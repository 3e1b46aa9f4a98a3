//! Exact distances to vertex-represented convex sets under piecewise-linear
//! ambient norms, by linear programming.
//!
//! For the l1 family the program minimizes the weighted residual of the
//! best convex-combination fit; for sup/polyhedral norms it minimizes the
//! epigraph variable `t` bounding every functional of the residual. Both
//! are exact up to simplex arithmetic, so the reported certificate is the
//! spread between the re-evaluated value and the program's optimum plus a
//! fixed numerical slack.

use crate::lp::{solve_standard, LpOutcome};
use crate::norm::NormDescriptor;
use crate::sets::ClosedSetRep;
use crate::solver::{SolveError, SolveMethod, SolveOutcome, SolverConfig};
use crate::vector::{pairing, sub, Vector};

const NUMERIC_SLACK: f64 = 1e-10;

fn unsupported(why: &str) -> SolveError {
    SolveError::Unsupported {
        method: SolveMethod::LinearProgram,
        why: why.into(),
    }
}

pub fn solve(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    let vertices: Vec<Vector> = match set {
        ClosedSetRep::Polytope { vertices } => vertices.clone(),
        ClosedSetRep::ScaledBasisHull { dim } => {
            if *dim > 2048 {
                return Err(unsupported("vertex set too large for the simplex tableau"));
            }
            (0..*dim)
                .map(|i| ClosedSetRep::hull_vertex(*dim, i))
                .collect()
        }
        _ => return Err(unsupported("needs an explicit vertex representation")),
    };
    let n = x.len();

    let (lambda, lp_value) = match norm {
        NormDescriptor::Lp { p } if *p == 1.0 => residual_program(&vertices, x, &vec![1.0; n])?,
        NormDescriptor::WeightedLp { p, weights } if *p == 1.0 => {
            residual_program(&vertices, x, weights)?
        }
        NormDescriptor::Sup => {
            let basis: Vec<Vector> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
            epigraph_program(&vertices, x, &basis)?
        }
        NormDescriptor::Polyhedral { functionals } => epigraph_program(&vertices, x, functionals)?,
        _ => {
            return Err(unsupported(
                "ambient norm is not piecewise linear; use the oracle routes",
            ))
        }
    };

    let mut point = vec![0.0; n];
    for (l, v) in lambda.iter().zip(&vertices) {
        for (pi, vi) in point.iter_mut().zip(v) {
            *pi += l * vi;
        }
    }
    let value = norm.eval(&sub(x, &point));
    let gap = (value - lp_value).max(0.0) + NUMERIC_SLACK;
    Ok(SolveOutcome {
        point,
        value,
        certified_gap: Some(gap),
        iterations: 0,
        converged: gap <= cfg.tolerance.max(2.0 * NUMERIC_SLACK),
        method: SolveMethod::LinearProgram,
    })
}

/// min sum_i w_i (s+_i + s-_i)  s.t.  V lambda + s+ - s- = x, sum lambda = 1.
fn residual_program(
    vertices: &[Vector],
    x: &[f64],
    weights: &[f64],
) -> Result<(Vec<f64>, f64), SolveError> {
    let n = x.len();
    let m = vertices.len();
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
    for i in 0..n {
        c[m + i] = weights[i];
        c[m + n + i] = weights[i];
    }
    match solve_standard(&c, &a, &b, 1e-11) {
        LpOutcome::Optimal { x: sol, value } => Ok((sol[..m].to_vec(), value)),
        _ => Err(unsupported("feasibility program did not reach an optimum")),
    }
}

/// min t  s.t.  |<f_j, x - V lambda>| <= t for all j, sum lambda = 1.
fn epigraph_program(
    vertices: &[Vector],
    x: &[f64],
    functionals: &[Vector],
) -> Result<(Vec<f64>, f64), SolveError> {
    let m = vertices.len();
    let jn = functionals.len();
    // Variables: lambda (m), t (1), upper slacks (jn), lower slacks (jn).
    let nvars = m + 1 + 2 * jn;
    let mut a = vec![vec![0.0; nvars]; 2 * jn + 1];
    let mut b = vec![0.0; 2 * jn + 1];
    for (j, f) in functionals.iter().enumerate() {
        let fx = pairing(f, x);
        for (i, v) in vertices.iter().enumerate() {
            let fv = pairing(f, v);
            a[j][i] = -fv;
            a[jn + j][i] = fv;
        }
        a[j][m] = -1.0;
        a[j][m + 1 + j] = 1.0;
        b[j] = -fx;
        a[jn + j][m] = -1.0;
        a[jn + j][m + 1 + jn + j] = 1.0;
        b[jn + j] = fx;
    }
    for i in 0..m {
        a[2 * jn][i] = 1.0;
    }
    b[2 * jn] = 1.0;
    let mut c = vec![0.0; nvars];
    c[m] = 1.0;
    match solve_standard(&c, &a, &b, 1e-11) {
        LpOutcome::Optimal { x: sol, value } => Ok((sol[..m].to_vec(), value)),
        _ => Err(unsupported("epigraph program did not reach an optimum")),
    }
}
