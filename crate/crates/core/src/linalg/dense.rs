//! Dense symmetric eigendecomposition.

use nalgebra::DMatrix;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: DMatrix<f64>,
}

/// Full eigendecomposition of the symmetric matrix `a` (lower triangle read).
pub fn symmetric_eigen(a: &DMatrix<f64>) -> SymEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix expected");
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)]);
    let evd = m.selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = evd.s().column_vector();
    let u = evd.u();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s.read(i).total_cmp(&s.read(j)));
    let values = order.iter().map(|&i| s.read(i)).collect();
    let vectors = DMatrix::from_fn(n, n, |i, k| u.read(i, order[k]));
    SymEigen { values, vectors }
}

/// Eigenvalues of the symmetric matrix `a`, ascending.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)]);
    let mut v = m.selfadjoint_eigenvalues(faer::Side::Lower);
    v.sort_by(f64::total_cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reconstructs_random_symmetric_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 5, 40, 90] {
            let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let a = &b + b.transpose();
            let e = symmetric_eigen(&a);
            let rec = &e.vectors
                * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()))
                * e.vectors.transpose();
            assert!((rec - &a).amax() < 1e-12 * n as f64);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let v = symmetric_eigenvalues(&a);
            for (x, y) in v.iter().zip(&e.values) {
                assert!((x - y).abs() < 1e-12 * n as f64);
            }
        }
    }

    #[test]
    fn block_diagonal_with_exact_zeros() {
        // many exactly-zero couplings, as in broken Gram matrices
        let mut a = DMatrix::zeros(6, 6);
        for k in 0..3 {
            a[(2 * k, 2 * k)] = 2.0 + k as f64;
            a[(2 * k + 1, 2 * k + 1)] = 2.0 + k as f64;
            a[(2 * k, 2 * k + 1)] = 1.0;
            a[(2 * k + 1, 2 * k)] = 1.0;
        }
        let v = symmetric_eigenvalues(&a);
        let expect = [1.0, 2.0, 3.0, 3.0, 4.0, 5.0];
        for (x, y) in v.iter().zip(expect) {
            assert!((x - y).abs() < 1e-13);
        }
    }
}
