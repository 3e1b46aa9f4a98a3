//! Test-side oracles, written independently of the library's numeric
//! kernels: a dense two-phase simplex solver, lattice brute force over
//! hand-rolled membership predicates, and closed-form plane geometry.
//! Agreement between these and the engine is what the integration suites
//! assert; nothing here shares code with `src/`.

#![allow(dead_code)]

// -------------------------------------------------------------------
// Dense two-phase simplex (Bland's rule): minimize c*z, A z = b, z >= 0.
// -------------------------------------------------------------------

const PIVOT_EPS: f64 = 1e-11;

struct Tableau {
    rows: usize,
    cols: usize,
    /// rows x (cols + 1); last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, cost: &mut [f64]) {
        let scale = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= scale;
        }
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let factor = self.t[i][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..=self.cols {
                let delta = factor * self.t[row][j];
                self.t[i][j] -= delta;
            }
        }
        let factor = cost[col];
        if factor != 0.0 {
            for j in 0..=self.cols {
                cost[j] -= factor * self.t[row][j];
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule loop over the given reduced-cost row; columns at or
    /// beyond `barred` may never enter the basis.
    fn run(&mut self, cost: &mut [f64], barred: usize) -> bool {
        for _ in 0..20_000 {
            let mut entering = None;
            for j in 0..barred {
                if cost[j] < -PIVOT_EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return true;
            };
            let mut leaving: Option<usize> = None;
            let mut best = f64::INFINITY;
            for i in 0..self.rows {
                if self.t[i][col] > PIVOT_EPS {
                    let ratio = self.t[i][self.cols] / self.t[i][col];
                    if ratio < best - PIVOT_EPS
                        || (ratio < best + PIVOT_EPS
                            && leaving.is_some_and(|l| self.basis[i] < self.basis[l]))
                    {
                        best = ratio;
                        leaving = Some(i);
                    }
                }
            }
            let Some(row) = leaving else {
                return false; // unbounded
            };
            self.pivot(row, col, cost);
        }
        false
    }
}

/// Minimizes `c * z` over `a z = b, z >= 0`. Returns the optimal value
/// and a primal solution, or `None` when infeasible/unbounded.
pub fn solve_lp_min(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<(f64, Vec<f64>)> {
    let rows = a.len();
    let n = c.len();
    let cols = n + rows; // artificials appended
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(rows);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n);
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut r: Vec<f64> = row.iter().map(|v| v * flip).collect();
        r.resize(cols, 0.0);
        r[n + i] = 1.0;
        r.push(b[i] * flip);
        t.push(r);
    }
    let mut tab = Tableau {
        rows,
        cols,
        t,
        basis: (n..n + rows).collect(),
    };

    // Phase 1: minimize the artificial sum. Reduced costs start at
    // -(column sums) for real columns, zero on the artificial basis.
    let mut cost = vec![0.0; cols + 1];
    for j in 0..cols {
        let mut s = 0.0;
        for i in 0..rows {
            s += tab.t[i][j];
        }
        cost[j] = if j < n { -s } else { 0.0 };
    }
    let mut rhs_sum = 0.0;
    for i in 0..rows {
        rhs_sum += tab.t[i][tab.cols];
    }
    cost[cols] = -rhs_sum;
    if !tab.run(&mut cost, cols) {
        return None;
    }
    if -cost[cols] > 1e-7 {
        return None; // infeasible
    }
    // Drive leftover zero-value artificials out of the basis if possible.
    for i in 0..rows {
        if tab.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| tab.t[i][j].abs() > 1e-9) {
                let mut dummy = vec![0.0; cols + 1];
                tab.pivot(i, col, &mut dummy);
            }
        }
    }

    // Phase 2 over the real objective; artificial columns are barred.
    let mut cost2 = vec![0.0; cols + 1];
    for (j, slot) in cost2.iter_mut().enumerate().take(n) {
        let mut through_basis = 0.0;
        for i in 0..rows {
            let bj = tab.basis[i];
            if bj < n {
                through_basis += c[bj] * tab.t[i][j];
            }
        }
        *slot = c[j] - through_basis;
    }
    let mut obj = 0.0;
    for i in 0..rows {
        if tab.basis[i] < n {
            obj += c[tab.basis[i]] * tab.t[i][tab.cols];
        }
    }
    cost2[cols] = -obj;
    if !tab.run(&mut cost2, n) {
        return None;
    }

    let mut z = vec![0.0; n];
    for i in 0..rows {
        if tab.basis[i] < n {
            z[tab.basis[i]] = tab.t[i][tab.cols];
        }
    }
    let value = c.iter().zip(&z).map(|(ci, zi)| ci * zi).sum();
    Some((value, z))
}

/// l1 distance from `x` to the convex hull of `vertices`, via the exact
/// linear program over hull weights and split residuals.
pub fn l1_distance_to_hull_lp(vertices: &[Vec<f64>], x: &[f64]) -> f64 {
    let m = vertices.len();
    let n = x.len();
    let mut a = vec![vec![0.0; m + 2 * n]; n + 1];
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
    let mut c = vec![0.0; m + 2 * n];
    for item in c.iter_mut().skip(m) {
        *item = 1.0;
    }
    solve_lp_min(&c, &a, &b)
        .expect("hull distance program is feasible and bounded")
        .0
}

// -------------------------------------------------------------------
// Hand-rolled plane geometry (independent membership and distances).
// -------------------------------------------------------------------

pub fn l2(dx: f64, dy: f64) -> f64 {
    dx.hypot(dy)
}

pub fn l1(dx: f64, dy: f64) -> f64 {
    dx.abs() + dy.abs()
}

pub fn sup(dx: f64, dy: f64) -> f64 {
    dx.abs().max(dy.abs())
}

pub fn lp(dx: f64, dy: f64, p: f64) -> f64 {
    (dx.abs().powf(p) + dy.abs().powf(p)).powf(1.0 / p)
}

/// Signed doubled area of the triangle (a, b, c); positive when the turn
/// is counterclockwise.
fn cross(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Membership in a convex polygon whose vertices are listed in boundary
/// order (either orientation); `tol` widens the boundary band.
pub fn in_convex_polygon(vertices: &[(f64, f64)], p: (f64, f64), tol: f64) -> bool {
    let n = vertices.len();
    assert!(n >= 3, "need a genuine polygon");
    let mut area = 0.0;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        area += a.0 * b.1 - b.0 * a.1;
    }
    let orient = if area >= 0.0 { 1.0 } else { -1.0 };
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        let edge = l2(b.0 - a.0, b.1 - a.1).max(1e-12);
        if orient * cross(a, b, p) < -tol * edge {
            return false;
        }
    }
    true
}

pub fn point_segment_l2(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    l2(p.0 - (a.0 + t * dx), p.1 - (a.1 + t * dy))
}

/// Euclidean distance from `p` to a convex polygon in boundary order:
/// zero inside, min edge distance outside.
pub fn l2_distance_to_polygon(vertices: &[(f64, f64)], p: (f64, f64)) -> f64 {
    if in_convex_polygon(vertices, p, 0.0) {
        return 0.0;
    }
    let n = vertices.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(point_segment_l2(vertices[i], vertices[(i + 1) % n], p));
    }
    best
}

/// l1 distance from `p` to the segment `a + t (b - a)`, `t` in [0, 1].
/// The objective is piecewise linear in `t`, so the minimum sits at an
/// endpoint or where a residual coordinate changes sign.
pub fn l1_distance_to_segment(a: &[f64], b: &[f64], p: &[f64]) -> f64 {
    let mut candidates = vec![0.0, 1.0];
    for i in 0..p.len() {
        let slope = b[i] - a[i];
        if slope.abs() > 1e-15 {
            let t = (p[i] - a[i]) / slope;
            if (0.0..=1.0).contains(&t) {
                candidates.push(t);
            }
        }
    }
    candidates
        .into_iter()
        .map(|t| {
            (0..p.len())
                .map(|i| (p[i] - a[i] - t * (b[i] - a[i])).abs())
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Sup-norm distance from `p` to the axis-aligned box `[lo, hi]^2`:
/// clamping is optimal coordinate-wise under the sup norm.
pub fn sup_distance_to_box(lo: f64, hi: f64, p: (f64, f64)) -> f64 {
    let ex = (lo - p.0).max(p.0 - hi).max(0.0);
    let ey = (lo - p.1).max(p.1 - hi).max(0.0);
    ex.max(ey)
}

pub fn near_circle(center: (f64, f64), radius: f64, p: (f64, f64), tol: f64) -> bool {
    (l2(p.0 - center.0, p.1 - center.1) - radius).abs() <= tol
}

pub fn near_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64), tol: f64) -> bool {
    point_segment_l2(a, b, p) <= tol
}

/// Brute-force distance: scan an `(steps+1)^2` lattice over `window`
/// (x0, x1, y0, y1), keep points passing `inside`, and return the best
/// `dist` value. `f64::INFINITY` when the lattice misses the set.
pub fn grid_min_distance(
    inside: impl Fn(f64, f64) -> bool,
    window: (f64, f64, f64, f64),
    steps: usize,
    dist: impl Fn(f64, f64) -> f64,
) -> f64 {
    let (x0, x1, y0, y1) = window;
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let x = x0 + (x1 - x0) * i as f64 / steps as f64;
        for j in 0..=steps {
            let y = y0 + (y1 - y0) * j as f64 / steps as f64;
            if inside(x, y) {
                best = best.min(dist(x, y));
            }
        }
    }
    best
}

// -------------------------------------------------------------------
// Convexity oracles for the Euclidean plane norm.
// -------------------------------------------------------------------

/// Closed-form modulus of convexity of the Euclidean norm.
pub fn modulus_l2_closed_form(eps: f64) -> f64 {
    1.0 - (1.0 - eps * eps / 4.0).sqrt()
}

/// Dense angular brute force for the same quantity: minimum midpoint dip
/// over unit pairs at least `eps` apart.
pub fn modulus_l2_grid(eps: f64, steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..steps {
        let a = 2.0 * std::f64::consts::PI * i as f64 / steps as f64;
        let (ua, va) = (a.cos(), a.sin());
        for j in (i + 1)..steps {
            let b = 2.0 * std::f64::consts::PI * j as f64 / steps as f64;
            let (ub, vb) = (b.cos(), b.sin());
            if l2(ua - ub, va - vb) + 1e-12 < eps {
                continue;
            }
            let mid = l2((ua + ub) / 2.0, (va + vb) / 2.0);
            best = best.min(1.0 - mid);
        }
    }
    best
}
