//! Explicit `2^N × 2^N` density matrices.
//!
//! Qubit `q` is bit `N-1-q` of a basis index, so qubit 0 is the most
//! significant bit. Storage is row-major.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::channels::Mat2;
use crate::error::{Error, Result};

pub const DEFAULT_DENSE_LIMIT: usize = 10;
pub const MAX_DENSE_LIMIT: usize = 12;
pub const DENSE_LIMIT_ENV: &str = "GHZ_DECAY_DENSE_LIMIT";

/// Qubit ceiling for dense work: `GHZ_DECAY_DENSE_LIMIT` if set, capped at 12.
pub fn dense_limit() -> usize {
    std::env::var(DENSE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_DENSE_LIMIT)
        .min(MAX_DENSE_LIMIT)
}

pub fn check_capacity(n: usize) -> Result<()> {
    let limit = dense_limit();
    if n > limit {
        Err(Error::Capacity { n, limit })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    entries: Vec<Complex64>,
}

impl DenseState {
    pub fn zeros(n: usize) -> Self {
        let dim = 1usize << n;
        DenseState {
            n,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let dim = 1usize << n;
        let entries = (0..dim * dim).map(|e| f(e / dim, e % dim)).collect();
        DenseState { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let dim = self.dim();
        self.entries[i * dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &DenseState) -> f64 {
        assert_eq!(self.n, other.n);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Tr(self† other)`.
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scaled(&self, s: f64) -> DenseState {
        DenseState {
            n: self.n,
            entries: self.entries.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sub(&self, other: &DenseState) -> DenseState {
        DenseState {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &DenseState) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    pub fn matmul(&self, other: &DenseState) -> DenseState {
        let dim = self.dim();
        let mut out = DenseState::zeros(self.n);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    out.entries[i * dim + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    /// `op · ρ · op†` with `op` acting on one qubit, via stride arithmetic on
    /// the row and column legs.
    pub fn conjugate_qubit(&self, op: &Mat2, qubit: usize) -> DenseState {
        let dim = self.dim();
        let bit = self.bit(qubit);
        let mut left = self.clone();
        // rows
        for i0 in (0..dim).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            for j in 0..dim {
                let (r0, r1) = (self.get(i0, j), self.get(i1, j));
                left.entries[i0 * dim + j] = op[(0, 0)] * r0 + op[(0, 1)] * r1;
                left.entries[i1 * dim + j] = op[(1, 0)] * r0 + op[(1, 1)] * r1;
            }
        }
        // columns, multiplied by op† on the right
        let mut out = left.clone();
        for i in 0..dim {
            for j0 in (0..dim).filter(|j| j & bit == 0) {
                let j1 = j0 | bit;
                let (c0, c1) = (left.get(i, j0), left.get(i, j1));
                out.entries[i * dim + j0] = c0 * op[(0, 0)].conj() + c1 * op[(0, 1)].conj();
                out.entries[i * dim + j1] = c0 * op[(1, 0)].conj() + c1 * op[(1, 1)].conj();
            }
        }
        out
    }

    /// Sum of `E ρ E†` over a Kraus set acting on one qubit.
    pub fn apply_kraus_qubit(&self, ops: &[Mat2], qubit: usize) -> DenseState {
        let mut acc = DenseState::zeros(self.n);
        for op in ops {
            acc.add_assign(&self.conjugate_qubit(op, qubit));
        }
        acc
    }

    fn to_nalgebra(&self, indices: &[usize]) -> DMatrix<Complex64> {
        DMatrix::from_fn(indices.len(), indices.len(), |r, c| self.get(indices[r], indices[c]))
    }
}

/// Groups basis indices into connected components of the nonzero pattern.
fn components(m: &DenseState) -> Vec<Vec<usize>> {
    let dim = m.dim();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..dim {
        for j in i + 1..dim {
            if m.get(i, j) != Complex64::new(0.0, 0.0) || m.get(j, i) != Complex64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for i in 0..dim {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

fn eigen_block(m: &DenseState, indices: &[usize]) -> Result<Vec<f64>> {
    if indices.len() == 1 {
        let i = indices[0];
        return Ok(vec![m.get(i, i).re]);
    }
    let a = m.to_nalgebra(indices);
    let norm = a.norm();
    SymmetricEigen::try_new(a, f64::EPSILON, 100_000)
        .map(|e| e.eigenvalues.iter().copied().collect())
        .ok_or_else(|| {
            Error::Numerical(format!(
                "Hermitian eigensolver did not converge on a {0}x{0} block (Frobenius norm {norm:e})",
                indices.len()
            ))
        })
}

/// Spectrum of a Hermitian matrix, ascending.
///
/// The matrix is first split into the connected components of its nonzero
/// pattern (a permutation similarity), and each block goes through the
/// dense solver.
pub fn hermitian_eigenvalues(m: &DenseState) -> Result<Vec<f64>> {
    let mut eig = Vec::with_capacity(m.dim());
    for block in components(m) {
        eig.extend(eigen_block(m, &block)?);
    }
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Same spectrum from one dense solve of the whole matrix.
pub fn hermitian_eigenvalues_full(m: &DenseState) -> Result<Vec<f64>> {
    let all: Vec<usize> = (0..m.dim()).collect();
    let mut eig = eigen_block(m, &all)?;
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}
