//! Sparse symmetric matrices, direct and iterative solves, and spectral
//! condition numbers.

mod cond;
mod dense;
mod solve;

pub use cond::{condition_number, condition_number_dense, lanczos_extreme, CondReport};
pub use dense::{symmetric_eigen, symmetric_eigenvalues, SymEigen};
pub use solve::{pcg, solve, Factorization, Solution, SolveError, SolveMethod, DIRECT_LIMIT};

use std::io::{self, Write};

use nalgebra::DMatrix;
use nalgebra_sparse::CsrMatrix;
use rayon::prelude::*;

/// Symmetric matrix in row-compressed storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSym {
    csr: CsrMatrix<f64>,
}

impl SparseSym {
    pub fn identity(n: usize) -> Self {
        SparseSym {
            csr: CsrMatrix::identity(n),
        }
    }

    pub fn from_dense(a: &DMatrix<f64>) -> Self {
        let mut b = TripletBuilder::new(a.nrows());
        for i in 0..a.nrows() {
            for j in i..a.ncols() {
                b.push(i, j, a[(i, j)]);
            }
        }
        b.finish()
    }

    pub fn n(&self) -> usize {
        self.csr.nrows()
    }

    pub fn nnz(&self) -> usize {
        self.csr.nnz()
    }

    pub fn csr(&self) -> &CsrMatrix<f64> {
        &self.csr
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = self.csr.row(i);
        match row.col_indices().binary_search(&j) {
            Ok(k) => row.values()[k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`, parallel over rows.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let (ptr, idx, val) = (
            self.csr.row_offsets(),
            self.csr.col_indices(),
            self.csr.values(),
        );
        (0..self.n())
            .into_par_iter()
            .with_min_len(1024)
            .map(|i| (ptr[i]..ptr[i + 1]).map(|k| val[k] * x[idx[k]]).sum())
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        SparseSym { csr: &self.csr * c }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n(), self.n());
        for (i, j, v) in self.csr.triplet_iter() {
            a[(i, j)] = *v;
        }
        a
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        self.csr
            .triplet_iter()
            .map(|(i, j, v)| (v - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// Coordinate dump, one `i j value` line per stored entry, 0-based.
    pub fn write_coordinates<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (i, j, v) in self.csr.triplet_iter() {
            writeln!(w, "{i} {j} {v:.17e}")?;
        }
        Ok(())
    }

    /// Sorted `(i, j)` pattern of stored entries.
    pub fn pattern(&self) -> Vec<(usize, usize)> {
        self.csr.triplet_iter().map(|(i, j, _)| (i, j)).collect()
    }
}

/// Accumulates upper-triangle entries; [`finish`](Self::finish) mirrors them,
/// so the result is symmetric bit for bit.
#[derive(Clone, Debug, Default)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        TripletBuilder {
            n,
            entries: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Add `v` at `(i, j)`; entries below the diagonal are ignored, their
    /// value is taken from the mirrored upper entry.
    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            i < self.n && j < self.n,
            "entry ({i}, {j}) outside {}x{}",
            self.n,
            self.n
        );
        if i <= j {
            self.entries.push((i, j, v));
        }
    }

    /// Add a dense local block with global row indices `rows` and columns `cols`.
    pub fn push_block(&mut self, rows: &[usize], cols: &[usize], block: &DMatrix<f64>) {
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                self.push(i, j, block[(a, b)]);
            }
        }
    }

    pub fn append(&mut self, other: TripletBuilder) {
        assert_eq!(self.n, other.n);
        self.entries.extend(other.entries);
    }

    pub fn finish(mut self) -> SparseSym {
        self.entries.sort_by_key(|e| (e.0, e.1));
        let mut upper: Vec<(usize, usize, f64)> = Vec::with_capacity(self.entries.len());
        for (i, j, v) in self.entries {
            match upper.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => upper.push((i, j, v)),
            }
        }
        upper.retain(|e| e.2 != 0.0);
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n];
        for &(i, j, v) in &upper {
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        let mut ptr = Vec::with_capacity(self.n + 1);
        let mut idx = Vec::with_capacity(2 * upper.len());
        let mut val = Vec::with_capacity(2 * upper.len());
        ptr.push(0);
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            for (j, v) in r {
                idx.push(j);
                val.push(v);
            }
            ptr.push(idx.len());
        }
        let csr = CsrMatrix::try_from_csr_data(self.n, self.n, ptr, idx, val).expect("valid csr");
        SparseSym { csr }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
