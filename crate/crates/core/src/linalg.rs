//! Dense linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::boundary_core::{inner_product, BoundaryFunction, ZERO};

/// Singular values in ascending order with matching right singular vectors
/// (columns of the returned matrix).
pub fn svd_ascending(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
    let n = a.ncols();
    let mut v = DMatrix::zeros(n, order.len());
    for (col, &i) in order.iter().enumerate() {
        for r in 0..n {
            v[(r, col)] = vt[(i, r)].conj();
        }
    }
    // A tall-or-square matrix yields one singular value per column; a wide
    // one has extra null directions that the thin SVD does not return.
    (order.iter().map(|&i| s[i]).collect(), v)
}

/// Gram matrix `G[j][k] = ⟨f_k, f_j⟩`.
pub fn gram(fs: &[BoundaryFunction]) -> DMatrix<Complex64> {
    let n = fs.len();
    DMatrix::from_fn(n, n, |j, k| inner_product(&fs[k], &fs[j]))
}

/// 2-norm condition number.
pub fn condition_number(a: &DMatrix<Complex64>) -> f64 {
    let s = a.clone().singular_values();
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves a Hermitian positive definite system, falling back to LU.
pub fn solve_hpd(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> Option<DVector<Complex64>> {
    if let Some(ch) = a.clone().cholesky() {
        return Some(ch.solve(b));
    }
    a.clone().lu().solve(b)
}

/// Orthonormalises functions (modified Gram–Schmidt, two passes) and drops
/// directions whose remaining norm falls below `drop_tol` times the input.
pub fn orthonormalize(fs: &[BoundaryFunction], drop_tol: f64) -> Vec<BoundaryFunction> {
    let mut out: Vec<BoundaryFunction> = Vec::new();
    for f in fs {
        let n0 = f.norm();
        if n0 == 0.0 {
            continue;
        }
        let mut v = f.clone();
        for _ in 0..2 {
            for q in &out {
                let c = inner_product(&v, q);
                v = &v - &q.scale(c);
            }
        }
        let n = v.norm();
        if n > drop_tol * n0 {
            out.push(v.scale(Complex64::new(1.0 / n, 0.0)));
        }
    }
    out
}

/// Sines of the principal angles between two subspaces, largest first.
///
/// Subspaces of different dimension report a sine of one for every
/// unmatched direction.
pub fn principal_angle_sines(a: &[BoundaryFunction], b: &[BoundaryFunction]) -> Vec<f64> {
    let qa = orthonormalize(a, 1e-12);
    let qb = orthonormalize(b, 1e-12);
    let (small, big) = if qa.len() <= qb.len() { (&qa, &qb) } else { (&qb, &qa) };
    let mut sines = vec![1.0; big.len() - small.len()];
    if small.is_empty() {
        return sines;
    }
    // Residual of each small-basis vector after projection onto the big one.
    let resid: Vec<BoundaryFunction> = small
        .iter()
        .map(|v| {
            let mut r = v.clone();
            for q in big.iter() {
                let c = inner_product(v, q);
                r = &r - &q.scale(c);
            }
            r
        })
        .collect();
    let g = gram(&resid);
    let mut eig: Vec<f64> = g.symmetric_eigenvalues().iter().map(|&e| e.max(0.0).sqrt()).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    let mut out = eig;
    out.extend(sines.drain(..));
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

/// Roots of `Σ c_j z^j` via the companion matrix, polished by Newton steps.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().map(|v| v.norm() == 0.0).unwrap_or(false) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let mut comp = DMatrix::from_element(deg, deg, ZERO);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    // Complex Schur form is upper triangular; its diagonal holds the roots.
    let (_, t) = Schur::new(comp).unpack();
    let roots: Vec<Complex64> = t.diagonal().iter().cloned().collect();
    roots
        .into_iter()
        .map(|mut r| {
            for _ in 0..3 {
                let (p, dp) = horner_with_derivative(&c, r);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                r -= step;
            }
            r
        })
        .collect()
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_core::GridConfig;

    #[test]
    fn roots_of_quadratic() {
        // (z − 2)(z − i) = z² − (2 + i)z + 2i
        let c = [Complex64::new(0.0, 2.0), Complex64::new(-2.0, -1.0), Complex64::new(1.0, 0.0)];
        let mut r = polynomial_roots(&c);
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn svd_ascending_order() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(1e-9, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        let (s, v) = svd_ascending(&a);
        assert!(s[0] < s[1] && s[1] < s[2]);
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn principal_angles_detect_equal_and_orthogonal_spans() {
        let cfg = GridConfig::default();
        let z = |n| BoundaryFunction::monomial(cfg, n);
        let a = vec![z(0), z(1)];
        let b = vec![&z(0) + &z(1), &z(0) - &z(1)];
        assert!(principal_angle_sines(&a, &b)[0] < 1e-12);
        let c = vec![z(2)];
        assert!((principal_angle_sines(&a, &c)[0] - 1.0).abs() < 1e-12);
    }
}
