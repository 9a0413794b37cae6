use nalgebra::DMatrix;

use super::{
    dot, norm, symmetric_eigen, symmetric_eigenvalues, Factorization, SolveError, SparseSym,
};

const MAX_LANCZOS: usize = 300;

/// Extreme eigenvalues and their ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CondReport {
    /// Largest eigenvalue magnitude.
    pub lambda_max: f64,
    /// Smallest eigenvalue magnitude.
    pub lambda_min: f64,
    pub kappa: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Eigenvalue of largest magnitude of the symmetric operator `op` by Lanczos
/// with full reorthogonalization. Returns `(theta, iterations, converged)`.
pub fn lanczos_extreme<F: FnMut(&[f64]) -> Vec<f64>>(
    n: usize,
    mut op: F,
    tol: f64,
) -> (f64, usize, bool) {
    let mut v: Vec<f64> = (0..n)
        .map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5 + 1e-3)
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let max_iter = n.min(MAX_LANCZOS);
    let mut theta = 0.0;
    for k in 0..max_iter {
        let mut w = op(&basis[k]);
        let a = dot(&w, &basis[k]);
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let b = norm(&w);
        let m = alpha.len();
        if !m.is_multiple_of(4) && m < max_iter && b > 1e-14 * alpha[0].abs() {
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
            continue;
        }
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i.abs_diff(j) == 1 {
                beta[i.min(j)]
            } else {
                0.0
            }
        });
        let eig = symmetric_eigen(&t);
        let (idx, th) = eig
            .values
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .map(|(i, t)| (i, *t))
            .unwrap();
        theta = th;
        let resid = b * eig.vectors[(m - 1, idx)].abs();
        if resid <= tol * theta.abs() || b <= 1e-14 * theta.abs() || m == n {
            return (theta, k + 1, theta.is_finite());
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    (theta, max_iter, false)
}

/// Spectral condition number `|lambda|_max / |lambda|_min` to relative tolerance `tol`.
pub fn condition_number(a: &SparseSym, tol: f64) -> Result<CondReport, SolveError> {
    let n = a.n();
    let (lmax, it1, c1) = lanczos_extreme(n, |x| a.mul_vec(x), tol);
    let f = Factorization::new(a)?;
    let (inv, it2, c2) = lanczos_extreme(
        n,
        |x| {
            let mut y = x.to_vec();
            f.solve_in_place(&mut y);
            y
        },
        tol,
    );
    let lambda_max = lmax.abs();
    let lambda_min = if inv.is_finite() && inv != 0.0 {
        1.0 / inv.abs()
    } else {
        0.0
    };
    let kappa = if lambda_min > 0.0 {
        lambda_max / lambda_min
    } else {
        f64::INFINITY
    };
    Ok(CondReport {
        lambda_max,
        lambda_min,
        kappa,
        iterations: it1 + it2,
        converged: c1 && c2 && kappa.is_finite(),
    })
}

/// Dense reference: full symmetric eigendecomposition.
pub fn condition_number_dense(a: &DMatrix<f64>) -> CondReport {
    let abs: Vec<f64> = symmetric_eigenvalues(a).iter().map(|l| l.abs()).collect();
    let lambda_max = abs.iter().cloned().fold(0.0, f64::max);
    let lambda_min = abs.iter().cloned().fold(f64::INFINITY, f64::min);
    CondReport {
        lambda_max,
        lambda_min,
        kappa: lambda_max / lambda_min,
        iterations: 0,
        converged: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_examples() {
        let d = SparseSym::from_dense(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0, 10.0,
        ])));
        let r = condition_number(&d, 1e-8).unwrap();
        assert!((r.kappa - 10.0).abs() < 1e-10 && r.converged);
        let r = condition_number(&SparseSym::identity(7), 1e-8).unwrap();
        assert!((r.kappa - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_spd_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = DMatrix::from_fn(50, 50, |_, _| rng.gen_range(-1.0..1.0));
        let a = b.transpose() * &b + DMatrix::identity(50, 50);
        let oracle = condition_number_dense(&a);
        let r = condition_number(&SparseSym::from_dense(&a), 1e-6).unwrap();
        assert!(
            ((r.kappa - oracle.kappa) / oracle.kappa).abs() < 1e-3,
            "{} vs {}",
            r.kappa,
            oracle.kappa
        );
    }

    #[test]
    fn scaling_invariance() {
        let a = DMatrix::from_fn(30, 30, |i, j| {
            if i == j {
                2.0 + i as f64 * 0.1
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let s = SparseSym::from_dense(&a);
        let k1 = condition_number(&s, 1e-10).unwrap().kappa;
        let k2 = condition_number(&s.scaled(1e4), 1e-10).unwrap().kappa;
        assert!(((k1 - k2) / k1).abs() < 1e-6);
        let oracle = condition_number_dense(&a).kappa;
        assert!(((k1 - oracle) / oracle).abs() < 1e-6);
    }

    #[test]
    fn larger_laplacian_within_one_percent() {
        let n = 400;
        let a = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let oracle = condition_number_dense(&a).kappa;
        let r = condition_number(&SparseSym::from_dense(&a), 1e-4).unwrap();
        assert!(
            ((r.kappa - oracle) / oracle).abs() < 1e-2,
            "{} vs {oracle}",
            r.kappa
        );
    }
}
