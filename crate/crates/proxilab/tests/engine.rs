//! Engine cross-checks on randomized geometry: independent solver routes
//! must agree with each other and with the test-side oracles on instances
//! nobody hand-picked. The random stream here is a local xorshift, not
//! the library's generator.

mod support;

use proxilab::norm::NormDescriptor;
use proxilab::sets::{ClosedSetRep, ConvexFn, CurveFn};
use proxilab::solver::{solve_distance, SolveError, SolveMethod, SolverConfig};

// -------------------------------------------------------------------
// Local randomness and convex-hull construction (test-side only).
// -------------------------------------------------------------------

struct XorShift(u64);

impl XorShift {
    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [0, 1).
    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Andrew's monotone chain; returns hull vertices in counterclockwise
/// boundary order.
fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| -> f64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * n);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn random_polygon(rng: &mut XorShift) -> Vec<(f64, f64)> {
    loop {
        let count = 6 + (rng.next_u64() % 7) as usize;
        let raw: Vec<(f64, f64)> = (0..count)
            .map(|_| (rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)))
            .collect();
        let hull = convex_hull(&raw);
        if hull.len() >= 3 {
            return hull;
        }
    }
}

fn centroid(polygon: &[(f64, f64)]) -> (f64, f64) {
    let n = polygon.len() as f64;
    let (sx, sy) = polygon
        .iter()
        .fold((0.0, 0.0), |(x, y), p| (x + p.0, y + p.1));
    (sx / n, sy / n)
}

// -------------------------------------------------------------------
// Route agreement on random convex polygons, three ambient norms.
// -------------------------------------------------------------------

#[test]
fn routes_agree_on_random_polygons_under_three_norms() {
    let norms = [
        NormDescriptor::Lp { p: 1.0 },
        NormDescriptor::Lp { p: 2.0 },
        NormDescriptor::Sup,
    ];
    let methods = [
        SolveMethod::Auto,
        SolveMethod::LinearProgram,
        SolveMethod::FrankWolfe,
        SolveMethod::Subgradient,
    ];
    let mut rng = XorShift(0x9e3779b97f4a7c15);
    let mut solved = 0usize;
    for instance in 0..20 {
        let polygon = random_polygon(&mut rng);
        let set = ClosedSetRep::Polytope {
            vertices: polygon.iter().map(|&(x, y)| vec![x, y]).collect(),
        };
        let (cx, cy) = centroid(&polygon);
        let radius = polygon
            .iter()
            .map(|p| support::l2(p.0 - cx, p.1 - cy))
            .fold(0.0, f64::max);
        let angle = rng.range(0.0, std::f64::consts::TAU);
        let reach = rng.range(1.3, 3.0) * radius;
        let probe = vec![cx + reach * angle.cos(), cy + reach * angle.sin()];

        for norm in &norms {
            let mut certified: Vec<(SolveMethod, f64)> = Vec::new();
            let mut heuristic: Vec<(SolveMethod, f64, Option<f64>)> = Vec::new();
            for method in methods {
                let cfg = SolverConfig {
                    method,
                    tolerance: 1e-10,
                    ..SolverConfig::default()
                };
                match solve_distance(norm, &set, &probe, &cfg) {
                    Ok(out) if out.converged => certified.push((method, out.value)),
                    Ok(out) => heuristic.push((method, out.value, out.certified_gap)),
                    Err(SolveError::Unsupported { .. }) => {}
                    Err(e) => panic!("polygon {instance} / {}: {e}", norm.kind_label()),
                }
            }
            assert!(
                !certified.is_empty(),
                "polygon {instance} / {}: no route certified a value",
                norm.kind_label()
            );
            assert!(
                certified
                    .iter()
                    .any(|(m, _)| matches!(m, SolveMethod::Auto)),
                "polygon {instance} / {}: the default route must pick a \
                 certifying method, got {certified:?} / {heuristic:?}",
                norm.kind_label()
            );
            let lo = certified
                .iter()
                .map(|(_, v)| *v)
                .fold(f64::INFINITY, f64::min);
            let hi = certified
                .iter()
                .map(|(_, v)| *v)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                hi - lo <= 1e-6,
                "polygon {instance} / {}: certified routes spread {:.3e}: {certified:?}",
                norm.kind_label(),
                hi - lo
            );
            // Euclidean case has an independent closed form.
            if matches!(norm, NormDescriptor::Lp { p } if *p == 2.0) {
                let exact = support::l2_distance_to_polygon(&polygon, (probe[0], probe[1]));
                assert!(
                    (lo - exact).abs() <= 1e-6 && (hi - exact).abs() <= 1e-6,
                    "polygon {instance}: certified [{lo}, {hi}] vs edge-projection {exact}"
                );
            }
            // Unconverged outcomes stay honest: every value is measured at
            // a feasible point (so it never undershoots), and a reported
            // certificate must genuinely bound the distance to optimal.
            for (method, value, gap) in &heuristic {
                assert!(
                    *value >= lo - 1e-9,
                    "polygon {instance} / {} via {}: heuristic {value} undershoots \
                     the certified distance {lo}",
                    norm.kind_label(),
                    method.label()
                );
                if let Some(gap) = gap {
                    assert!(
                        value - lo <= gap + 1e-9,
                        "polygon {instance} / {} via {}: error {:.3e} exceeds the \
                         claimed certificate {:.3e}",
                        norm.kind_label(),
                        method.label(),
                        value - lo,
                        gap
                    );
                }
            }
            solved += certified.len() + heuristic.len();
        }
    }
    assert!(solved >= 180, "only {solved} route evaluations ran");
}

// -------------------------------------------------------------------
// Linear minimization oracle vs brute force over vertices.
// -------------------------------------------------------------------

#[test]
fn polytope_lmo_matches_vertex_brute_force() {
    let mut rng = XorShift(0xdeadbeefcafef00d);
    for instance in 0..25 {
        let polygon = random_polygon(&mut rng);
        let vertices: Vec<Vec<f64>> = polygon.iter().map(|&(x, y)| vec![x, y]).collect();
        let set = ClosedSetRep::Polytope {
            vertices: vertices.clone(),
        };
        for _ in 0..8 {
            let dir = vec![rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)];
            let answer = set
                .lmo(&dir)
                .expect("polytopes always provide a linear minimization oracle");
            let pair = |v: &[f64]| dir[0] * v[0] + dir[1] * v[1];
            let best = vertices
                .iter()
                .map(|v| pair(v))
                .fold(f64::INFINITY, f64::min);
            assert!(
                (pair(&answer) - best).abs() <= 1e-12,
                "polygon {instance}: lmo pairing {} vs brute force {best}",
                pair(&answer)
            );
            assert!(
                vertices
                    .iter()
                    .any(|v| support::l2(v[0] - answer[0], v[1] - answer[1]) <= 1e-12),
                "polygon {instance}: lmo returned a non-vertex point {answer:?}"
            );
        }
    }
}

// -------------------------------------------------------------------
// Grid route vs lattice oracle and closed forms on non-polytope sets.
// -------------------------------------------------------------------

#[test]
fn pattern_search_matches_closed_forms_on_sublevel_sets() {
    // max(x + y, x - y, -x) <= 1 is the triangle (1,0), (-1,2), (-1,-2).
    let triangle_fn = ConvexFn::MaxAffine {
        rows: vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 0.0]],
        offsets: vec![0.0, 0.0, 0.0],
    };
    let set = ClosedSetRep::SublevelSet {
        f: triangle_fn,
        level: 1.0,
        anchor: vec![0.0, 0.0],
    };
    let norm = NormDescriptor::Lp { p: 2.0 };
    let probe = [2.5, 0.3];
    let out = solve_distance(&norm, &set, &probe, &SolverConfig::default()).unwrap();
    let triangle = [(1.0, -0.0), (-1.0, 2.0), (-1.0, -2.0)];
    let exact = support::l2_distance_to_polygon(&triangle, (probe[0], probe[1]));
    assert!(
        (out.value - exact).abs() <= 1e-5,
        "triangle sublevel: engine {} vs edge projection {exact}",
        out.value
    );

    // Lattice cross-check with hand-evaluated membership.
    let steps = 600usize;
    let window = (-1.0, 1.0, -2.0, 2.0);
    let hx = (window.1 - window.0) / steps as f64;
    let hy = (window.3 - window.2) / steps as f64;
    let lattice = support::grid_min_distance(
        |x, y| (x + y).max(x - y).max(-x) <= 1.0,
        window,
        steps,
        |x, y| support::l2(probe[0] - x, probe[1] - y),
    );
    assert!(
        (out.value - lattice).abs() <= 2.0 * support::l2(hx, hy),
        "triangle sublevel: engine {} vs lattice {lattice}",
        out.value
    );

    // x^2 + y^2 <= 1 is the unit disk; the distance is radial.
    let disk = ClosedSetRep::SublevelSet {
        f: ConvexFn::Quadratic {
            diag: vec![1.0, 1.0],
            lin: vec![0.0, 0.0],
            constant: 0.0,
        },
        level: 1.0,
        anchor: vec![0.0, 0.0],
    };
    let probe = [1.5, -0.75];
    let out = solve_distance(&norm, &disk, &probe, &SolverConfig::default()).unwrap();
    let exact = support::l2(probe[0], probe[1]) - 1.0;
    assert!(
        (out.value - exact).abs() <= 1e-5,
        "disk sublevel: engine {} vs radial {exact}",
        out.value
    );
}

#[test]
fn branch_and_bound_matches_edge_projection_on_curves() {
    // A closed polyline tracing the same triangle boundary.
    let path = vec![
        vec![1.0, 0.0],
        vec![-1.0, 2.0],
        vec![-1.0, -2.0],
        vec![1.0, 0.0],
    ];
    let set = ClosedSetRep::ParametricCurve {
        curve: CurveFn::Polyline { points: path },
    };
    let norm = NormDescriptor::Lp { p: 2.0 };
    let probe = [2.5, 0.3];
    let out = solve_distance(&norm, &set, &probe, &SolverConfig::default()).unwrap();
    let triangle = [(1.0, 0.0), (-1.0, 2.0), (-1.0, -2.0)];
    let exact = (0..3)
        .map(|i| {
            support::point_segment_l2(triangle[i], triangle[(i + 1) % 3], (probe[0], probe[1]))
        })
        .fold(f64::INFINITY, f64::min);
    assert!(
        (out.value - exact).abs() <= 1e-6,
        "triangle boundary: engine {} vs edge projection {exact}",
        out.value
    );

    // The same boundary seen from a point inside the triangle: the curve
    // is not convex, so the nearest boundary point is still positive.
    let inner = [0.0, 0.0];
    let out = solve_distance(&norm, &set, &inner, &SolverConfig::default()).unwrap();
    let exact = (0..3)
        .map(|i| support::point_segment_l2(triangle[i], triangle[(i + 1) % 3], (0.0, 0.0)))
        .fold(f64::INFINITY, f64::min);
    assert!(
        (out.value - exact).abs() <= 1e-6,
        "interior probe: engine {} vs edge projection {exact}",
        out.value
    );
    assert!(out.value > 0.5, "the origin is well inside the triangle");
}

// -------------------------------------------------------------------
// Union routing and route refusal contracts.
// -------------------------------------------------------------------

#[test]
fn union_route_takes_the_best_part() {
    let set = ClosedSetRep::UnionOf {
        parts: vec![
            ClosedSetRep::FinitePointSet {
                points: vec![vec![3.0, 0.0]],
            },
            ClosedSetRep::Polytope {
                vertices: vec![vec![-1.0, -1.0], vec![-1.0, 1.0]],
            },
        ],
    };
    let norm = NormDescriptor::Lp { p: 2.0 };
    let out = solve_distance(&norm, &set, &[0.0, 0.0], &SolverConfig::default()).unwrap();
    assert!(
        (out.value - 1.0).abs() <= 1e-9,
        "nearest part is the segment at distance 1, got {}",
        out.value
    );
    assert!((out.point[0] + 1.0).abs() <= 1e-6 && out.point[1].abs() <= 1e-6);
}

#[test]
fn routes_refuse_instances_they_cannot_certify() {
    let polygon = ClosedSetRep::Polytope {
        vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
    };
    let euclidean = NormDescriptor::Lp { p: 2.0 };
    let probe = [2.0, 2.0];

    // The closed-form route handles point sets and matched balls only.
    let cfg = SolverConfig {
        method: SolveMethod::ClosedForm,
        ..SolverConfig::default()
    };
    assert!(matches!(
        solve_distance(&euclidean, &polygon, &probe, &cfg),
        Err(SolveError::Unsupported { .. })
    ));

    // The exact linear program exists only for polyhedral-flavored norms.
    let cfg = SolverConfig {
        method: SolveMethod::LinearProgram,
        ..SolverConfig::default()
    };
    assert!(matches!(
        solve_distance(&euclidean, &polygon, &probe, &cfg),
        Err(SolveError::Unsupported { .. })
    ));

    // Subgradient descent needs a vertex parametrization or a ball.
    let curve = ClosedSetRep::ParametricCurve {
        curve: CurveFn::Circle {
            center: vec![0.0, 0.0],
            radius: 1.0,
        },
    };
    let cfg = SolverConfig {
        method: SolveMethod::Subgradient,
        ..SolverConfig::default()
    };
    assert!(matches!(
        solve_distance(&euclidean, &curve, &probe, &cfg),
        Err(SolveError::Unsupported { .. })
    ));
}
