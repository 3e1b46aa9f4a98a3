//! Dense two-phase simplex for the small linear programs that show up in
//! norm and set computations: dual norms of polyhedral norms, polytope
//! membership, and exact distances under piecewise-linear ambient norms.
//!
//! Problems here have tens of variables, so a dense tableau with Bland's
//! anti-cycling rule is plenty. Bland's rule also makes the pivot sequence
//! (and therefore the reported vertex) deterministic.

/// Outcome of `solve_standard`.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    tol: f64,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rhs[r] *= inv;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c];
            if factor != 0.0 {
                let (pr, rest) = if i < r {
                    let (a, b) = self.rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = self.rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, p) in rest.iter_mut().zip(pr.iter()) {
                    *x -= factor * p;
                }
                self.rhs[i] -= factor * self.rhs[r];
            }
        }
        let factor = self.cost[c];
        if factor != 0.0 {
            let pr = self.rows[r].clone();
            for (x, p) in self.cost.iter_mut().zip(pr.iter()) {
                *x -= factor * p;
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule simplex on the current cost row.
    /// Returns false when an unbounded ray is detected.
    fn run(&mut self) -> bool {
        let ncols = self.cost.len();
        loop {
            let mut entering = None;
            for j in 0..ncols {
                if self.cost[j] < -self.tol {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][j];
                if a > self.tol {
                    let ratio = self.rhs[r] / a;
                    let better = match leaving {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - self.tol
                                || (ratio < lratio + self.tol && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return false;
            };
            self.pivot(r, j);
        }
    }
}

/// Minimizes `c . x` subject to `a x = b`, `x >= 0`.
///
/// `a` is row-major with one inner vec per constraint. Rows with negative
/// right-hand sides are flipped internally, so `b` may have any sign.
pub fn solve_standard(c: &[f64], a: &[Vec<f64>], b: &[f64], tol: f64) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, &bi) in a.iter().zip(b) {
        if bi < 0.0 {
            rows.push(row.iter().map(|v| -v).collect());
            rhs.push(-bi);
        } else {
            rows.push(row.clone());
            rhs.push(bi);
        }
    }

    // Phase 1: artificial columns n..n+m, minimize their sum.
    for (i, row) in rows.iter_mut().enumerate() {
        row.extend((0..m).map(|j| if i == j { 1.0 } else { 0.0 }));
    }
    let mut cost = vec![0.0; n + m];
    for j in n..n + m {
        cost[j] = 1.0;
    }
    for row in &rows {
        for (cj, v) in cost.iter_mut().zip(row) {
            *cj -= v;
        }
    }
    let mut t = Tableau {
        rows,
        rhs,
        cost,
        basis: (n..n + m).collect(),
        tol,
    };
    if !t.run() {
        // The artificial objective is bounded below by zero; a ray here
        // means numerical trouble, which we report as infeasible.
        return LpOutcome::Infeasible;
    }
    let phase1: f64 = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, &r)| r)
        .sum();
    if phase1 > tol.max(1e-9) {
        return LpOutcome::Infeasible;
    }

    // Drive leftover artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            let piv_col = (0..n).find(|&j| t.rows[r][j].abs() > tol.max(1e-9));
            match piv_col {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2 over the original columns.
    for row in t.rows.iter_mut() {
        row.truncate(n);
    }
    let mut cost = c.to_vec();
    for (r, &bv) in t.basis.iter().enumerate() {
        let cb = cost[bv];
        if cb != 0.0 {
            let row = t.rows[r].clone();
            for (cj, v) in cost.iter_mut().zip(&row) {
                *cj -= cb * v;
            }
        }
    }
    t.cost = cost;
    if !t.run() {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![0.0; n];
    for (r, &bv) in t.basis.iter().enumerate() {
        x[bv] = t.rhs[r].max(0.0);
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}
