//! Away-step Frank-Wolfe over sets with an exact linear minimization
//! oracle.
//!
//! Smooth ambient norms minimize the squared objective `0.5 |x - y|^2`
//! (differentiable everywhere, including at the probe); piecewise-linear
//! norms run on the raw distance with canonical subgradient directions.
//! Every iteration re-certifies the current value via `duality_gap`, so a
//! run that stalls still reports exactly how much of the value is unproven.
//! Euclidean runs finish with an active-face polish: an exact least-squares
//! projection onto the affine hull of the active atoms, accepted only when
//! it stays a convex combination and does not worsen the value.

use crate::norm::NormDescriptor;
use crate::sets::ClosedSetRep;
use crate::solver::{
    duality_gap, subgradient_candidates, SolveError, SolveMethod, SolveOutcome, SolverConfig,
};
use crate::vector::{pairing, sub, Vector};

/// Iterate log: `(value, point)` per iteration, for sequence studies.
pub type Trace = Vec<(f64, Vector)>;

struct Best {
    point: Vector,
    value: f64,
    gap: f64,
}

impl Best {
    fn offer(&mut self, point: &[f64], value: f64, gap: f64) {
        if value < self.value - 1e-18 || (value <= self.value + 1e-18 && gap < self.gap) {
            self.point = point.to_vec();
            self.value = value;
            self.gap = gap;
        }
    }
}

fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> f64 {
    let phi = 0.5 * (3.0 - 5.0f64.sqrt());
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iters {
        let u = a + phi * (b - a);
        let v = b - phi * (b - a);
        if f(u) <= f(v) {
            b = v;
        } else {
            a = u;
        }
    }
    let mid = 0.5 * (a + b);
    // The minimizer may sit at an endpoint of the original interval.
    let candidates = [lo, mid, hi];
    let mut best = candidates[0];
    for &c in &candidates[1..] {
        if f(c) < f(best) {
            best = c;
        }
    }
    best
}

pub fn solve(
    norm: &NormDescriptor,
    set: &ClosedSetRep,
    x: &[f64],
    cfg: &SolverConfig,
    mut trace: Option<&mut Trace>,
) -> Result<SolveOutcome, SolveError> {
    let dim = x.len();
    let smooth = norm.smooth_away_from_zero();
    let euclidean = norm.is_euclidean();

    let start_dir: Vector = if norm.eval(x) > 0.0 {
        x.iter().map(|t| -t).collect()
    } else {
        vec![1.0; dim]
    };
    let Some(first) = set.lmo(&start_dir) else {
        return Err(SolveError::Unsupported {
            method: SolveMethod::FrankWolfe,
            why: "set provides no linear minimization oracle".into(),
        });
    };

    let mut atoms: Vec<Vector> = vec![first.clone()];
    let mut weights: Vec<f64> = vec![1.0];
    let mut y = first;
    let mut value = norm.eval(&sub(x, &y));
    let mut best = Best {
        point: y.clone(),
        value,
        gap: f64::INFINITY,
    };
    let budget = cfg.iter_budget();
    let mut iterations = 0usize;
    let mut stalls = 0usize;

    for k in 0..budget {
        iterations = k;
        let r = sub(x, &y);
        value = norm.eval(&r);
        if let Some(t) = trace.as_deref_mut() {
            t.push((value, y.clone()));
        }
        if value <= 1e-15 {
            best.offer(&y, 0.0, 0.0);
            break;
        }

        // Certify the current iterate before stepping.
        let mut gap = duality_gap(norm, set, x, &y).unwrap_or(f64::INFINITY);
        // Steepest direction for the step itself.
        let s: Vector = if smooth {
            // Gradient of the squared objective: -|r| * grad|.|(r).
            let g = norm.gradient(&r)?;
            g.iter().map(|t| -value * t).collect()
        } else {
            let cands = subgradient_candidates(norm, &r);
            cands[0].iter().map(|t| -t).collect()
        };
        if smooth {
            // Squared-objective certificate, mapped back to norm units.
            if let Some(a) = set.lmo(&s) {
                let gap_sq = (pairing(&s, &y) - pairing(&s, &a)).max(0.0);
                let lower = (value * value - 2.0 * gap_sq).max(0.0).sqrt();
                gap = gap.min(value - lower);
            }
        }
        best.offer(&y, value, gap);
        if best.gap <= cfg.tolerance {
            break;
        }

        let Some(fw_atom) = set.lmo(&s) else { break };
        let fw_gap = pairing(&s, &y) - pairing(&s, &fw_atom);

        // Away atom: active atom most aligned with the ascent direction.
        let mut away_idx = 0usize;
        let mut away_score = f64::NEG_INFINITY;
        for (i, a) in atoms.iter().enumerate() {
            let sc = pairing(&s, a);
            if sc > away_score {
                away_score = sc;
                away_idx = i;
            }
        }
        let away_gap = away_score - pairing(&s, &y);

        let use_away = atoms.len() >= 2 && away_gap > fw_gap && weights[away_idx] < 1.0 - 1e-12;
        let (dir, gamma_max): (Vector, f64) = if use_away {
            let d = sub(&y, &atoms[away_idx]);
            let w = weights[away_idx];
            (d, (w / (1.0 - w)).min(1e6))
        } else {
            (sub(&fw_atom, &y), 1.0)
        };

        let gamma = if euclidean {
            let num: f64 = r.iter().zip(&dir).map(|(a, b)| a * b).sum();
            let den: f64 = dir.iter().map(|d| d * d).sum();
            if den <= 0.0 {
                0.0
            } else {
                (num / den).clamp(0.0, gamma_max)
            }
        } else {
            let obj = |g: f64| {
                let cand: Vector = y.iter().zip(&dir).map(|(yi, di)| yi + g * di).collect();
                norm.eval(&sub(x, &cand))
            };
            golden_min(obj, 0.0, gamma_max, 80)
        };

        let new_value = {
            let cand: Vector = y.iter().zip(&dir).map(|(yi, di)| yi + gamma * di).collect();
            norm.eval(&sub(x, &cand))
        };
        if gamma <= 0.0 || new_value > value + 1e-18 {
            stalls += 1;
            if stalls > 50 {
                break;
            }
            continue;
        }
        stalls = 0;

        if use_away {
            for w in weights.iter_mut() {
                *w *= 1.0 + gamma;
            }
            weights[away_idx] -= gamma;
        } else {
            for w in weights.iter_mut() {
                *w *= 1.0 - gamma;
            }
            match atoms
                .iter()
                .position(|a| a.iter().zip(&fw_atom).all(|(p, q)| (p - q).abs() < 1e-13))
            {
                Some(i) => weights[i] += gamma,
                None => {
                    atoms.push(fw_atom);
                    weights.push(gamma);
                }
            }
        }

        // Prune dead atoms and renormalize against drift.
        let mut i = 0;
        while i < atoms.len() {
            if weights[i] <= 1e-14 {
                atoms.swap_remove(i);
                weights.swap_remove(i);
            } else {
                i += 1;
            }
        }
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        y = vec![0.0; dim];
        for (a, w) in atoms.iter().zip(&weights) {
            for (yi, ai) in y.iter_mut().zip(a) {
                *yi += w * ai;
            }
        }
    }

    if euclidean {
        if let Some(z) = face_polish(x, &atoms, &weights) {
            let val_z = norm.eval(&sub(x, &z));
            if val_z <= best.value + 1e-12 {
                let gap_z = duality_gap(norm, set, x, &z).unwrap_or(f64::INFINITY);
                best.offer(&z, val_z, gap_z);
            }
        }
    }

    let converged = best.gap <= cfg.tolerance;
    Ok(SolveOutcome {
        point: best.point,
        value: best.value,
        certified_gap: Some(best.gap),
        iterations,
        converged,
        method: SolveMethod::FrankWolfe,
    })
}

/// Exact Euclidean least-squares projection of `x` onto the affine hull of
/// the active atoms, returned only when it is a genuine convex combination.
fn face_polish(x: &[f64], atoms: &[Vector], weights: &[f64]) -> Option<Vector> {
    let dim = x.len();
    let mut active: Vec<usize> = (0..atoms.len()).filter(|&i| weights[i] > 1e-10).collect();
    if active.is_empty() {
        return None;
    }
    // Affine dimension caps the useful atom count.
    active.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap());
    active.truncate(dim + 1);
    active.sort_unstable();
    let base = &atoms[active[0]];
    let k = active.len() - 1;
    if k == 0 {
        return Some(base.clone());
    }

    // Normal equations for min_t |x - base - B t|_2, B columns a_i - base.
    let cols: Vec<Vector> = active[1..].iter().map(|&i| sub(&atoms[i], base)).collect();
    let rhs_vec = sub(x, base);
    let mut m = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = pairing(&cols[i], &cols[j]);
        }
        m[i][k] = pairing(&cols[i], &rhs_vec);
    }
    // Gaussian elimination with partial pivoting; a singular face is fine —
    // dependent columns get weight zero.
    let mut t = vec![0.0; k];
    let mut used = vec![false; k];
    let mut order = Vec::new();
    for col in 0..k {
        let mut piv = None;
        let mut piv_val = 1e-12;
        for (row, row_used) in used.iter().enumerate() {
            if !row_used && m[row][col].abs() > piv_val {
                piv_val = m[row][col].abs();
                piv = Some(row);
            }
        }
        let Some(p) = piv else { continue };
        used[p] = true;
        order.push((p, col));
        for row in 0..k {
            if row != p && m[row][col].abs() > 0.0 {
                let f = m[row][col] / m[p][col];
                for c in 0..=k {
                    m[row][c] -= f * m[p][c];
                }
            }
        }
    }
    for &(row, col) in &order {
        t[col] = m[row][k] / m[row][col];
    }

    let mut lambda = vec![0.0; k + 1];
    lambda[0] = 1.0 - t.iter().sum::<f64>();
    lambda[1..].copy_from_slice(&t);
    if lambda.iter().any(|l| *l < -1e-10) {
        return None;
    }
    for l in lambda.iter_mut() {
        *l = l.max(0.0);
    }
    let total: f64 = lambda.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut z = vec![0.0; dim];
    for (idx, l) in active.iter().zip(&lambda) {
        for (zi, ai) in z.iter_mut().zip(&atoms[*idx]) {
            *zi += (l / total) * ai;
        }
    }
    Some(z)
}
