//! Spectral radius of non-negative branching matrices.
//!
//! The matrix is first divided by its largest entry. Power iteration then
//! runs on the shifted matrix `B + I`: for `B >= 0` its Perron root
//! `ρ(B) + 1` strictly dominates every other eigenvalue in modulus, so
//! periodic matrices such as `[[0,1],[1,0]]` still converge.
//! Convergence is certified by the Collatz–Wielandt bracket
//! `min_i (Ax)_i/x_i <= ρ(A) <= max_i (Ax)_i/x_i` on positive iterates.

use nalgebra::DMatrix;

const TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 200_000;
const DENSE_LIMIT: usize = 8;

/// Largest absolute eigenvalue of the row-major `k×k` non-negative matrix.
pub fn spectral_radius(matrix: &[f64], k: usize) -> f64 {
    assert_eq!(matrix.len(), k * k, "matrix must be k×k");
    let scale = matrix.iter().copied().fold(0.0, f64::max);
    if k == 0 || scale == 0.0 {
        return 0.0;
    }
    let unit: Vec<f64> = matrix.iter().map(|x| x / scale).collect();
    let r = match power_iteration(&unit, k, TOLERANCE, MAX_ITERATIONS) {
        Some(r) => r,
        None if k <= DENSE_LIMIT => dense_spectral_radius(&unit, k),
        None => {
            log::warn!("power iteration did not certify the spectral radius of a {k}×{k} matrix");
            rayleigh_estimate(&unit, k)
        }
    };
    r * scale
}

/// Power iteration with a relative bracket tolerance. `None` if the
/// bracket never closed (e.g. reducible matrices whose iterate decays to
/// zero on some coordinates).
pub fn power_iteration(matrix: &[f64], k: usize, tol: f64, max_iter: usize) -> Option<f64> {
    let mut x = vec![1.0 / k as f64; k];
    let mut y = vec![0.0; k];
    for _ in 0..max_iter {
        shifted_mul(matrix, k, &x, &mut y);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut positive = true;
        for i in 0..k {
            if x[i] <= f64::MIN_POSITIVE {
                positive = false;
                break;
            }
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if positive && hi - lo <= tol * hi {
            return Some((0.5 * (lo + hi) - 1.0).max(0.0));
        }
        let norm: f64 = y.iter().sum();
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        for i in 0..k {
            x[i] = y[i] / norm;
        }
    }
    None
}

/// Spectral radius from the full complex eigen-decomposition.
pub fn dense_spectral_radius(matrix: &[f64], k: usize) -> f64 {
    let m = DMatrix::from_row_slice(k, k, matrix);
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

fn rayleigh_estimate(matrix: &[f64], k: usize) -> f64 {
    let mut x = vec![1.0 / k as f64; k];
    let mut y = vec![0.0; k];
    let mut est = 0.0;
    for _ in 0..MAX_ITERATIONS {
        shifted_mul(matrix, k, &x, &mut y);
        let norm: f64 = y.iter().sum();
        est = norm - 1.0;
        x.iter_mut().zip(&y).for_each(|(a, b)| *a = b / norm);
    }
    est.max(0.0)
}

fn shifted_mul(matrix: &[f64], k: usize, x: &[f64], y: &mut [f64]) {
    for i in 0..k {
        let row = &matrix[i * k..(i + 1) * k];
        y[i] = x[i] + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        assert!((spectral_radius(&[1.0, 0.0, 0.0, 1.0], 2) - 1.0).abs() < 1e-10);
        assert!((spectral_radius(&[0.5, 0.5, 0.5, 0.5], 2) - 1.0).abs() < 1e-10);
        assert_eq!(spectral_radius(&[0.0; 9], 3), 0.0);
        assert_eq!(spectral_radius(&[], 0), 0.0);
    }

    #[test]
    fn periodic_matrix_converges() {
        let r = power_iteration(&[0.0, 1.0, 1.0, 0.0], 2, 1e-10, 10_000).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reducible_matrix_falls_back() {
        // upper triangular: eigenvalues 0.9 and 0.2
        let m = [0.2, 0.7, 0.0, 0.9];
        assert!((spectral_radius(&m, 2) - 0.9).abs() < 1e-10);
    }

    #[test]
    fn tiny_entries_keep_relative_precision() {
        let m = [3e-20, 1e-22, 5e-20, 2e-20];
        let r = spectral_radius(&m, 2);
        let d = dense_spectral_radius(&m, 2);
        assert!((r / d - 1.0).abs() < 1e-9, "{r} vs {d}");
    }

    #[test]
    fn homogeneous() {
        let m = [0.1, 0.4, 0.3, 0.2];
        let scaled: Vec<f64> = m.iter().map(|x| 7.5 * x).collect();
        assert!((spectral_radius(&scaled, 2) - 7.5 * spectral_radius(&m, 2)).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_dense_solver() {
        let m = [0.1, 0.4, 0.3, 0.2, 0.0, 0.5, 0.6, 0.1, 0.3];
        let a = spectral_radius(&m, 3);
        let b = dense_spectral_radius(&m, 3);
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}
