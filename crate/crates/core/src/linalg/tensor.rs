//! Tensor-product bookkeeping for bipartite operators.
//!
//! Basis ordering: index `a * d_b + b` for |a⟩_A ⊗ |b⟩_B, i.e. the first
//! Kronecker factor is the outer index.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_nalgebra(a.as_nalgebra().kronecker(b.as_nalgebra()))
}

fn check_bipartite(m: &ComplexMatrix, dims: (usize, usize)) -> Result<()> {
    let (da, db) = dims;
    if da == 0 || db == 0 {
        return Err(Error::DimensionMismatch("local dimensions must be positive".into()));
    }
    if !m.is_square() || m.n_rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not ({da}*{db})-square",
            m.n_rows(),
            m.n_cols()
        )));
    }
    Ok(())
}

/// Reduction of a bipartite operator onto the kept subsystem.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |a, a2| {
            (0..db).fold(Complex64::new(0.0, 0.0), |acc, b| acc + m.get(a * db + b, a2 * db + b))
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |b, b2| {
            (0..da).fold(Complex64::new(0.0, 0.0), |acc, a| acc + m.get(a * db + b, a * db + b2))
        }),
    };
    Ok(out)
}

/// Transpose of one tensor factor. An entry permutation, hence an exact
/// involution.
pub fn partial_transpose(m: &ComplexMatrix, dims: (usize, usize), which: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (_, db) = dims;
    let n = m.n_rows();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        match which {
            Subsystem::B => m.get(a * db + b2, a2 * db + b),
            Subsystem::A => m.get(a2 * db + b, a * db + b2),
        }
    }))
}

/// Relabels A ↔ B: the returned operator lives on (d_b, d_a).
pub fn swap_subsystems(m: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = dims;
    let n = m.n_rows();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (b, a) = (r / da, r % da);
        let (b2, a2) = (c / da, c % da);
        m.get(a * db + b, a2 * db + b2)
    }))
}

/// Embeds a local operator on A as `op ⊗ I_B`.
pub fn lift_a(op: &ComplexMatrix, db: usize) -> ComplexMatrix {
    kron(op, &ComplexMatrix::identity(db))
}

/// Embeds a local operator on B as `I_A ⊗ op`.
pub fn lift_b(op: &ComplexMatrix, da: usize) -> ComplexMatrix {
    kron(&ComplexMatrix::identity(da), op)
}

/// Regroups an operator on (A₁B₁)⊗(A₂B₂) into the bipartite cut
/// (A₁A₂)|(B₁B₂). Used for tensor products of bipartite states.
pub fn regroup_tensor_product(m: &ComplexMatrix, dims1: (usize, usize), dims2: (usize, usize)) -> Result<ComplexMatrix> {
    let (a1, b1) = dims1;
    let (a2, b2) = dims2;
    let n = a1 * b1 * a2 * b2;
    if !m.is_square() || m.n_rows() != n {
        return Err(Error::DimensionMismatch("tensor product size".into()));
    }
    // new index (x1, x2, y1, y2) -> old index (x1, y1, x2, y2)
    let old = |i: usize| {
        let y2 = i % b2;
        let y1 = (i / b2) % b1;
        let x2 = (i / (b2 * b1)) % a2;
        let x1 = i / (b2 * b1 * a2);
        ((x1 * b1 + y1) * a2 + x2) * b2 + y2
    };
    Ok(ComplexMatrix::from_fn(n, n, |r, c| m.get(old(r), old(c))))
}
