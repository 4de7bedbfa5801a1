use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SdpError;
use crate::linalg::ComplexMatrix;

/// Hermitian coefficient matrix stored as its nonzero entries (both
/// triangles).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    pub dim: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHermitian {
    pub fn new(dim: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        Self { dim, entries }
    }

    /// Keeps entries with modulus above `drop_tol`.
    pub fn from_dense(m: &ComplexMatrix, drop_tol: f64) -> Self {
        let n = m.n_rows();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let z = m.get(i, j);
                if z.norm() > drop_tol {
                    entries.push((i, j, z));
                }
            }
        }
        Self { dim: n, entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, z) in &self.entries {
            m[(i, j)] += z;
        }
        m
    }

    pub fn to_complex_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_nalgebra(self.to_dense())
    }

    /// Re tr[A X].
    pub fn inner(&self, x: &DMatrix<Complex64>) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, a)| {
                let b = x[(j, i)];
                a.re * b.re - a.im * b.im
            })
            .sum()
    }

    /// out += s·A.
    pub fn add_scaled_to(&self, out: &mut DMatrix<Complex64>, s: f64) {
        for &(i, j, z) in &self.entries {
            out[(i, j)] += z * s;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.to_dense().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&(i, j, z)| (i, j, z * s)).collect() }
    }
}

/// One linear equality Σ_b ⟨A_b, X_b⟩ = rhs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRow {
    pub terms: Vec<(usize, SparseHermitian)>,
    pub rhs: f64,
}

/// Block-diagonal SDP in standard form.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub blocks: Vec<usize>,
    pub objective: Vec<ComplexMatrix>,
    pub constraints: Vec<ConstraintRow>,
}

impl SdpProblem {
    /// Problem with zero objective and no constraints yet.
    pub fn with_blocks(blocks: Vec<usize>) -> Self {
        let objective = blocks.iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        Self { blocks, objective, constraints: Vec::new() }
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Checks sizes and Hermiticity (1e-12) of all coefficient data.
    pub fn validate(&self) -> Result<(), SdpError> {
        if self.blocks.is_empty() || self.blocks.contains(&0) {
            return Err(SdpError::InvalidProblem("blocks must be non-empty".into()));
        }
        if self.objective.len() != self.blocks.len() {
            return Err(SdpError::InvalidProblem("one objective matrix per block".into()));
        }
        for (c, &n) in self.objective.iter().zip(&self.blocks) {
            if c.n_rows() != n || c.n_cols() != n {
                return Err(SdpError::InvalidProblem("objective block size".into()));
            }
            if !c.is_hermitian(1e-12 * c.max_abs().max(1.0)) {
                return Err(SdpError::InvalidProblem("objective not Hermitian".into()));
            }
            if !c.is_finite() {
                return Err(SdpError::InvalidProblem("objective not finite".into()));
            }
        }
        for (k, row) in self.constraints.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(SdpError::InvalidProblem(format!("constraint {k} rhs not finite")));
            }
            for (b, a) in &row.terms {
                if *b >= self.blocks.len() || a.dim != self.blocks[*b] {
                    return Err(SdpError::InvalidProblem(format!("constraint {k} block mismatch")));
                }
                if a.entries.iter().any(|&(i, j, _)| i >= a.dim || j >= a.dim) {
                    return Err(SdpError::InvalidProblem(format!("constraint {k} index out of range")));
                }
                let d = a.to_complex_matrix();
                if !d.is_hermitian(1e-12 * d.max_abs().max(1.0)) {
                    return Err(SdpError::InvalidProblem(format!("constraint {k} not Hermitian")));
                }
            }
        }
        Ok(())
    }

    /// Scales the objective by `c`, leaving constraints alone.
    pub fn scale_objective(&mut self, c: f64) {
        for m in &mut self.objective {
            *m = m.scale(c);
        }
    }

    /// Σ_b ⟨A_kb, X_b⟩ for every row.
    pub fn apply_constraints(&self, x: &[ComplexMatrix]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|row| row.terms.iter().map(|(b, a)| a.inner(x[*b].as_nalgebra())).sum())
            .collect()
    }
}
