//! Plain `Vec<f64>` vector arithmetic.
//!
//! Points and dual functionals are both stored as `Vec<f64>`; the pairing
//! between them is the ordinary dot product. Dimensions here are small
//! (typically 2..=4096), so there is no reason for anything heavier.

/// A point in R^n.
pub type Vector = Vec<f64>;

/// A linear functional on R^n, identified with its coefficient vector.
pub type DualVector = Vec<f64>;

/// Dual pairing `<f, v>`.
pub fn pairing(f: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(f.len(), v.len());
    f.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn add(u: &[f64], v: &[f64]) -> Vector {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub(u: &[f64], v: &[f64]) -> Vector {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale(u: &[f64], s: f64) -> Vector {
    u.iter().map(|a| a * s).collect()
}

/// `u + s * v`.
pub fn axpy(u: &[f64], s: f64, v: &[f64]) -> Vector {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a + s * b).collect()
}

/// Convex combination `(1 - t) * u + t * v`.
pub fn lerp(u: &[f64], v: &[f64], t: f64) -> Vector {
    debug_assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .map(|(a, b)| (1.0 - t) * a + t * b)
        .collect()
}

/// Euclidean norm, used internally for clustering scales and least squares.
pub fn norm2(u: &[f64]) -> f64 {
    u.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Mean of a nonempty slice of equal-length vectors.
pub fn mean(points: &[Vector]) -> Vector {
    assert!(!points.is_empty());
    let dim = points[0].len();
    let mut out = vec![0.0; dim];
    for p in points {
        for (o, x) in out.iter_mut().zip(p) {
            *o += x;
        }
    }
    let inv = 1.0 / points.len() as f64;
    out.iter_mut().for_each(|o| *o *= inv);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_is_bilinear() {
        let f = vec![1.0, -2.0, 0.5];
        let g = vec![0.0, 1.0, 3.0];
        let v = vec![2.0, 1.0, -1.0];
        let lhs = pairing(&add(&scale(&f, 2.0), &g), &v);
        let rhs = 2.0 * pairing(&f, &v) + pairing(&g, &v);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn lerp_endpoints() {
        let u = vec![1.0, 2.0];
        let v = vec![-3.0, 5.0];
        assert_eq!(lerp(&u, &v, 0.0), u);
        assert_eq!(lerp(&u, &v, 1.0), v);
    }

    #[test]
    fn mean_of_two() {
        let m = mean(&[vec![1.0, 0.0], vec![3.0, 4.0]]);
        assert_eq!(m, vec![2.0, 2.0]);
    }
}
