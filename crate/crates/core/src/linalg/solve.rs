use faer::sparse::linalg::solvers::{Cholesky, Lu, SpSolver};
use faer::sparse::{SparseColMat, SymbolicSparseColMat};
use thiserror::Error;

use super::{dot, norm, SparseSym};

/// Above this dimension [`solve`] switches from factorization to PCG.
pub const DIRECT_LIMIT: usize = 200_000;

const TARGET: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("factorization failed ({0})")]
    Breakdown(String),
    #[error("no convergence: relative residual {residual:.3e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Cholesky,
    Lu,
    Pcg,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Vec<f64>,
    /// `|A x - b| / |b|`
    pub residual: f64,
    pub method: SolveMethod,
    pub iterations: usize,
}

/// Sparse Cholesky, or LU when the matrix is not numerically positive definite.
pub enum Factorization {
    Cholesky(Cholesky<usize, f64>),
    Lu(Lu<usize, f64>),
}

impl Factorization {
    pub fn new(a: &SparseSym) -> Result<Self, SolveError> {
        let csr = a.csr();
        // symmetric, so the row-compressed arrays are also valid column-compressed ones
        let symbolic = SymbolicSparseColMat::new_checked(
            a.n(),
            a.n(),
            csr.row_offsets().to_vec(),
            None,
            csr.col_indices().to_vec(),
        );
        let m = SparseColMat::<usize, f64>::new(symbolic, csr.values().to_vec());
        match m.as_ref().sp_cholesky(faer::Side::Lower) {
            Ok(c) => Ok(Factorization::Cholesky(c)),
            Err(_) => m
                .as_ref()
                .sp_lu()
                .map(Factorization::Lu)
                .map_err(|e| SolveError::Breakdown(format!("{e:?}"))),
        }
    }

    pub fn method(&self) -> SolveMethod {
        match self {
            Factorization::Cholesky(_) => SolveMethod::Cholesky,
            Factorization::Lu(_) => SolveMethod::Lu,
        }
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let col = faer::col::from_slice_mut::<f64>(x);
        match self {
            Factorization::Cholesky(c) => c.solve_in_place(col),
            Factorization::Lu(l) => l.solve_in_place(col),
        }
    }
}

fn residual(a: &SparseSym, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.mul_vec(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

/// Solve `A x = b` to relative residual `1e-10`.
pub fn solve(a: &SparseSym, b: &[f64]) -> Result<Solution, SolveError> {
    assert_eq!(a.n(), b.len());
    let bn = norm(b);
    if bn == 0.0 {
        return Ok(Solution {
            x: vec![0.0; b.len()],
            residual: 0.0,
            method: SolveMethod::Cholesky,
            iterations: 0,
        });
    }
    if a.n() > DIRECT_LIMIT {
        return pcg(a, b, TARGET, 50 * (a.n() as f64).sqrt() as usize);
    }
    let f = Factorization::new(a)?;
    let mut x = b.to_vec();
    f.solve_in_place(&mut x);
    let mut rel = norm(&residual(a, &x, b)) / bn;
    let mut steps = 0;
    // iterative refinement
    while !(rel <= TARGET) && steps < 5 {
        let mut d = residual(a, &x, b);
        f.solve_in_place(&mut d);
        let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + di).collect();
        let r = norm(&residual(a, &trial, b)) / bn;
        steps += 1;
        if !(r < rel) {
            break;
        }
        x = trial;
        rel = r;
    }
    if !rel.is_finite() || rel > TARGET {
        return Err(SolveError::NotConverged {
            residual: rel,
            iterations: steps,
        });
    }
    Ok(Solution {
        x,
        residual: rel,
        method: f.method(),
        iterations: steps,
    })
}

/// Conjugate gradients with diagonal preconditioning.
pub fn pcg(a: &SparseSym, b: &[f64], tol: f64, max_iter: usize) -> Result<Solution, SolveError> {
    let n = a.n();
    let bn = norm(b);
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        let rel = norm(&r) / bn;
        if rel <= tol {
            return Ok(Solution {
                x,
                residual: rel,
                method: SolveMethod::Pcg,
                iterations: it,
            });
        }
        let ap = a.mul_vec(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rel = norm(&residual(a, &x, b)) / bn;
    if rel <= tol {
        Ok(Solution {
            x,
            residual: rel,
            method: SolveMethod::Pcg,
            iterations: max_iter,
        })
    } else {
        Err(SolveError::NotConverged {
            residual: rel,
            iterations: max_iter,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    fn laplacian_1d(n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 3.5];
        let s = solve(&SparseSym::identity(3), &b).unwrap();
        assert_eq!(s.x, b);
    }

    #[test]
    fn tridiagonal_matches_dense_elimination() {
        let a = laplacian_1d(5);
        let b = DVector::from_vec(vec![1.0, 0.0, 2.0, -1.0, 0.5]);
        let oracle = a.clone().lu().solve(&b).unwrap();
        let s = solve(&SparseSym::from_dense(&a), b.as_slice()).unwrap();
        assert_eq!(s.method, SolveMethod::Cholesky);
        for (x, y) in s.x.iter().zip(oracle.iter()) {
            assert!((x - y).abs() < 1e-13);
        }
        let p = pcg(&SparseSym::from_dense(&a), b.as_slice(), 1e-12, 100).unwrap();
        for (x, y) in p.x.iter().zip(oracle.iter()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn indefinite_falls_back_to_lu() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, -3.0]);
        let b = vec![1.0, 1.0, 1.0];
        let s = solve(&SparseSym::from_dense(&a), &b).unwrap();
        assert_eq!(s.method, SolveMethod::Lu);
        assert!(s.residual < 1e-14);
    }
}
