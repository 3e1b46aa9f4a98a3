//! Rotundity probes for a norm: modulus-of-convexity estimation and a
//! search for strict-convexity failures (distinct unit vectors whose
//! midpoint still lies on the unit sphere).
//!
//! Both probes explore pairs of unit vectors at a *fixed* separation. The
//! separation is pinned because the interesting quantity — how far the
//! midpoint dips inside the ball — degrades monotonically as a pair drifts
//! apart, so letting the optimizer trade separation for midpoint norm turns
//! every search into a walk toward coincident points. After every proposal
//! the pair is re-separated exactly.

use serde::{Deserialize, Serialize};

use crate::norm::NormDescriptor;
use crate::par::{indexed_map, ExecMode};
use crate::rng::{gaussian_vector, stream};
use crate::vector::{lerp, sub, Vector};

/// A midpoint-norm failure: distinct unit vectors whose average has norm
/// one (up to `slack`), i.e. a flat spot on the unit sphere.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrictnessWitness {
    pub u: Vector,
    pub v: Vector,
    pub midpoint_norm: f64,
    pub separation: f64,
}

/// One estimated point of the modulus of convexity: the smallest observed
/// midpoint dip `delta` over unit pairs separated by at least `eps`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModulusPoint {
    pub eps: f64,
    pub delta: f64,
    pub u: Vector,
    pub v: Vector,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityProbeConfig {
    pub dim: usize,
    pub seed: u64,
    /// Independent restarts per separation value.
    pub restarts: usize,
    /// Hill-climb iterations per restart.
    pub iters: usize,
    /// Smallest pair separation the strictness search may use. Kept well
    /// above zero: as the separation shrinks, the true midpoint dip of a
    /// smooth strictly convex norm falls below floating-point resolution
    /// and every norm starts to look flat.
    pub min_separation: f64,
    /// Midpoint-norm slack below one that still counts as "on the sphere".
    pub slack: f64,
    pub exec: ExecMode,
}

impl Default for ConvexityProbeConfig {
    fn default() -> Self {
        ConvexityProbeConfig {
            dim: 2,
            seed: 0,
            restarts: 6,
            iters: 600,
            min_separation: 0.1,
            slack: 1e-9,
            exec: ExecMode::default(),
        }
    }
}

fn unit(norm: &NormDescriptor, x: &[f64]) -> Option<Vector> {
    let n = norm.eval(x);
    if n < 1e-12 {
        return None;
    }
    Some(x.iter().map(|t| t / n).collect())
}

fn separation(norm: &NormDescriptor, u: &[f64], v: &[f64]) -> f64 {
    norm.eval(&sub(u, v))
}

/// Moves `v` along the unit sphere until its distance from `u` equals
/// `target` (within 1e-10). Returns `None` when the path never reaches the
/// requested separation.
fn reseparate(norm: &NormDescriptor, u: &[f64], v: &[f64], target: f64) -> Option<Vector> {
    let cur = separation(norm, u, v);
    if (cur - target).abs() <= 1e-12 {
        return Some(v.to_vec());
    }

    // Path point at parameter t: toward u for shrinking, away (through the
    // far side of the sphere) for growing.
    let at = |t: f64| -> Option<Vector> {
        let raw: Vector = if cur > target {
            lerp(v, u, t)
        } else {
            v.iter().zip(u).map(|(a, b)| a - t * b).collect()
        };
        unit(norm, &raw)
    };

    // Bracket the crossing.
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    if cur > target {
        let steps = 256;
        let mut prev = 0.0;
        let mut found = false;
        for k in 1..=steps {
            let t = k as f64 / steps as f64;
            if let Some(p) = at(t) {
                if separation(norm, u, &p) <= target {
                    lo = prev;
                    hi = t;
                    found = true;
                    break;
                }
                prev = t;
            }
        }
        if !found {
            return None;
        }
    } else {
        let mut t = 1.0;
        let mut prev = 0.0;
        loop {
            match at(t) {
                Some(p) if separation(norm, u, &p) >= target => {
                    lo = prev;
                    hi = t;
                    break;
                }
                _ => {
                    prev = t;
                    t *= 2.0;
                    if t > 1e9 {
                        return None;
                    }
                }
            }
        }
    }

    let mut out = at(hi)?;
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        match at(mid) {
            Some(p) => {
                let s = separation(norm, u, &p);
                let crossed = if cur > target {
                    s <= target
                } else {
                    s >= target
                };
                if crossed {
                    hi = mid;
                    out = p;
                } else {
                    lo = mid;
                }
            }
            None => lo = mid,
        }
        if (separation(norm, u, &out) - target).abs() <= 1e-11 {
            break;
        }
    }
    if (separation(norm, u, &out) - target).abs() <= 1e-9 {
        Some(out)
    } else {
        None
    }
}

fn midpoint_norm(norm: &NormDescriptor, u: &[f64], v: &[f64]) -> f64 {
    let mid: Vector = u.iter().zip(v).map(|(a, b)| 0.5 * (a + b)).collect();
    norm.eval(&mid)
}

/// Flat-direction candidates worth seeding the search with: coordinate
/// vertices for l1, sign vertices for the sup norm.
fn vertex_candidates(norm: &NormDescriptor, dim: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    match norm {
        NormDescriptor::Lp { p } if *p == 1.0 => {
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; dim];
                    e[i] = s;
                    out.push(e);
                }
            }
        }
        NormDescriptor::WeightedLp { p, weights } if *p == 1.0 => {
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; dim];
                    e[i] = s / weights[i];
                    out.push(e);
                }
            }
        }
        NormDescriptor::Sup => {
            if dim <= 12 {
                for mask in 0..(1u32 << dim) {
                    let v: Vector = (0..dim)
                        .map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })
                        .collect();
                    out.push(v);
                }
            }
        }
        _ => {}
    }
    out
}

/// Best (largest) midpoint norm achievable by unit pairs at exactly the
/// given separation, by seeded multistart hill climbing.
fn max_midpoint_at_separation(
    norm: &NormDescriptor,
    cfg: &ConvexityProbeConfig,
    sep: f64,
    salt: u64,
) -> Option<(Vector, Vector, f64)> {
    let dim = cfg.dim;
    let mut rng = stream(cfg.seed, "convexity-pairs", salt);

    // Assemble starting pairs: flat-face vertices first, then random.
    let mut starts: Vec<(Vector, Vector)> = Vec::new();
    let verts = vertex_candidates(norm, dim);
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if separation(norm, &verts[i], &verts[j]) >= 1e-9 {
                if let Some(v) = reseparate(norm, &verts[i], &verts[j], sep) {
                    starts.push((verts[i].clone(), v));
                }
            }
        }
        if starts.len() >= 24 {
            break;
        }
    }
    for _ in 0..cfg.restarts {
        let u = norm.unit_sample(&mut rng, dim);
        let w = norm.unit_sample(&mut rng, dim);
        if let Some(v) = reseparate(norm, &u, &w, sep) {
            starts.push((u, v));
        }
    }
    if starts.is_empty() {
        return None;
    }

    starts.sort_by(|a, b| {
        midpoint_norm(norm, &b.0, &b.1)
            .partial_cmp(&midpoint_norm(norm, &a.0, &a.1))
            .unwrap()
    });
    starts.truncate(4.max(cfg.restarts / 2));

    let mut best: Option<(Vector, Vector, f64)> = None;
    for (mut u, mut v) in starts {
        let mut value = midpoint_norm(norm, &u, &v);
        let mut sigma = 0.3;
        let mut fails = 0;
        for _ in 0..cfg.iters {
            let du = gaussian_vector(&mut rng, dim);
            let dv = gaussian_vector(&mut rng, dim);
            let pu: Vector = u.iter().zip(&du).map(|(a, b)| a + sigma * b).collect();
            let pv: Vector = v.iter().zip(&dv).map(|(a, b)| a + sigma * b).collect();
            let (Some(cu), Some(cv_raw)) = (unit(norm, &pu), unit(norm, &pv)) else {
                continue;
            };
            let Some(cv) = reseparate(norm, &cu, &cv_raw, sep) else {
                continue;
            };
            let val = midpoint_norm(norm, &cu, &cv);
            if val > value {
                u = cu;
                v = cv;
                value = val;
                fails = 0;
            } else {
                fails += 1;
                if fails >= 10 {
                    sigma *= 0.6;
                    fails = 0;
                    if sigma < 1e-10 {
                        break;
                    }
                }
            }
        }
        if best.as_ref().map_or(true, |b| value > b.2) {
            best = Some((u, v, value));
        }
    }
    best
}

/// Estimates the modulus of convexity `delta(eps) = 1 - sup |(u+v)/2|` over
/// unit pairs with `|u - v| >= eps`, one grid value per entry. The supremum
/// is attained at separation exactly `eps` (midpoints only sink further as
/// pairs spread), so the search pins the separation there.
pub fn modulus_of_convexity(
    norm: &NormDescriptor,
    cfg: &ConvexityProbeConfig,
    eps_grid: &[f64],
) -> Vec<ModulusPoint> {
    let points = indexed_map(cfg.exec, eps_grid.len(), |k| {
        let eps = eps_grid[k];
        match max_midpoint_at_separation(norm, cfg, eps, 1000 + k as u64) {
            Some((u, v, value)) => ModulusPoint {
                eps,
                delta: (1.0 - value).max(0.0),
                u,
                v,
            },
            None => ModulusPoint {
                eps,
                delta: f64::NAN,
                u: Vec::new(),
                v: Vec::new(),
            },
        }
    });
    points
}

/// Searches for a strict-convexity failure at several fixed separations
/// (all at least `cfg.min_separation`). Returns the flattest pair found if
/// its midpoint reaches the unit sphere within `cfg.slack`.
pub fn strict_convexity_probe(
    norm: &NormDescriptor,
    cfg: &ConvexityProbeConfig,
) -> Option<StrictnessWitness> {
    let seps: Vec<f64> = [1.0, 0.5, 0.25, 0.1]
        .iter()
        .copied()
        .filter(|s| *s >= cfg.min_separation - 1e-12)
        .collect();
    let candidates = indexed_map(cfg.exec, seps.len(), |k| {
        max_midpoint_at_separation(norm, cfg, seps[k], 2000 + k as u64)
            .map(|(u, v, value)| (seps[k], u, v, value))
    });
    let mut best: Option<StrictnessWitness> = None;
    for cand in candidates.into_iter().flatten() {
        let (sep, u, v, value) = cand;
        let better = match &best {
            Some(b) => {
                value > b.midpoint_norm + 1e-15
                    || (value >= b.midpoint_norm - 1e-15 && sep > b.separation)
            }
            None => true,
        };
        if better {
            best = Some(StrictnessWitness {
                u,
                v,
                midpoint_norm: value,
                separation: sep,
            });
        }
    }
    match best {
        Some(w) if w.midpoint_norm >= 1.0 - cfg.slack => Some(w),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize) -> ConvexityProbeConfig {
        ConvexityProbeConfig {
            dim,
            seed: 11,
            ..ConvexityProbeConfig::default()
        }
    }

    #[test]
    fn reseparate_hits_requested_separation() {
        let norms = [
            NormDescriptor::l2(),
            NormDescriptor::l1(),
            NormDescriptor::sup(),
            NormDescriptor::lp(3.0).unwrap(),
        ];
        for (k, norm) in norms.iter().enumerate() {
            let mut rng = stream(5, "resep", k as u64);
            for &target in &[0.3, 1.0, 1.7] {
                for _ in 0..20 {
                    let u = norm.unit_sample(&mut rng, 3);
                    let v = norm.unit_sample(&mut rng, 3);
                    if separation(norm, &u, &v) < 1e-6 {
                        continue;
                    }
                    let w = reseparate(norm, &u, &v, target).expect("path reaches target");
                    assert!((norm.eval(&w) - 1.0).abs() < 1e-9);
                    assert!((separation(norm, &u, &w) - target).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn euclidean_modulus_matches_the_closed_form() {
        // For the Euclidean norm, delta(eps) = 1 - sqrt(1 - eps^2/4); in
        // fact every unit pair at separation eps attains it exactly.
        let norm = NormDescriptor::l2();
        let grid = [0.5, 1.0, 1.5];
        let points = modulus_of_convexity(&norm, &cfg(2), &grid);
        for pt in &points {
            let expected = 1.0 - (1.0 - pt.eps * pt.eps / 4.0).sqrt();
            assert!(
                (pt.delta - expected).abs() < 1e-3,
                "eps={} delta={} expected={expected}",
                pt.eps,
                pt.delta
            );
        }
    }

    #[test]
    fn l1_modulus_vanishes_below_the_flat_face_span() {
        let points = modulus_of_convexity(&NormDescriptor::l1(), &cfg(2), &[1.0]);
        assert!(points[0].delta <= 1e-9, "delta={}", points[0].delta);
    }

    #[test]
    fn flat_face_norms_yield_strictness_witnesses_in_dim_two() {
        for norm in [NormDescriptor::l1(), NormDescriptor::sup()] {
            let w = strict_convexity_probe(&norm, &cfg(2))
                .unwrap_or_else(|| panic!("no witness for {}", norm.kind_label()));
            assert!(w.midpoint_norm >= 1.0 - 1e-9);
            assert!(w.separation >= 0.1);
            assert!((norm.eval(&w.u) - 1.0).abs() < 1e-9);
            assert!((norm.eval(&w.v) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn round_norms_yield_no_strictness_witness() {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let norm = NormDescriptor::lp(p).unwrap();
            assert!(
                strict_convexity_probe(&norm, &cfg(2)).is_none(),
                "false witness for p={p}"
            );
        }
    }

    #[test]
    fn probes_are_deterministic_for_a_fixed_seed() {
        let norm = NormDescriptor::lp(1.5).unwrap();
        let a = modulus_of_convexity(&norm, &cfg(2), &[0.8]);
        let b = modulus_of_convexity(&norm, &cfg(2), &[0.8]);
        assert_eq!(a[0].delta.to_bits(), b[0].delta.to_bits());
        assert_eq!(a[0].u, b[0].u);
    }
}
