//! SDP formulations over D_σ and D.
//!
//! Block 0 always holds ρ (possibly compressed to a support, see
//! [`build_lmo_problem_on_support`]); block 1 holds Y = ρ^Γ, tied to ρ by one
//! equality per real parameter of a Hermitian matrix so that both blocks stay
//! plain PSD cones.

use num_complex::Complex64;

use super::problem::{ConstraintRow, SdpProblem, SparseHermitian};
use crate::linalg::spectral::SUPPORT_THRESHOLD;
use crate::linalg::{eig_hermitian, ComplexMatrix, Subsystem};
use crate::states::{DensityMatrix, FeasibleSetSpec};

pub const RHO_BLOCK: usize = 0;
const PT_BLOCK: usize = 1;

/// Entries below this are dropped when densifying compressed coefficients.
const DROP_TOL: f64 = 1e-15;

/// Orthonormal basis (w.r.t. Re tr[A B]) of n×n Hermitian matrices:
/// the n diagonal units first, then (E_kl + E_lk)/√2 and i(E_kl − E_lk)/√2
/// for k < l.
pub fn hermitian_basis(n: usize) -> Vec<SparseHermitian> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        out.push(SparseHermitian::new(n, vec![(k, k, Complex64::new(1.0, 0.0))]));
    }
    for k in 0..n {
        for l in (k + 1)..n {
            out.push(SparseHermitian::new(n, vec![(k, l, Complex64::new(s, 0.0)), (l, k, Complex64::new(s, 0.0))]));
            out.push(SparseHermitian::new(n, vec![(k, l, Complex64::new(0.0, s)), (l, k, Complex64::new(0.0, -s))]));
        }
    }
    out
}

/// F ⊗ I_B (keep = A) or I_A ⊗ F (keep = B).
fn lift(f: &SparseHermitian, dims: (usize, usize), which: Subsystem) -> SparseHermitian {
    let (da, db) = dims;
    let mut entries = Vec::new();
    for &(i, j, z) in &f.entries {
        match which {
            Subsystem::A => {
                for b in 0..db {
                    entries.push((i * db + b, j * db + b, z));
                }
            }
            Subsystem::B => {
                for a in 0..da {
                    entries.push((a * db + i, a * db + j, z));
                }
            }
        }
    }
    SparseHermitian::new(da * db, entries)
}

/// E^Γ, characterised by Re tr[E^Γ X] = Re tr[E X^Γ].
fn partial_transpose_sparse(e: &SparseHermitian, dims: (usize, usize)) -> SparseHermitian {
    let db = dims.1;
    let entries = e
        .entries
        .iter()
        .map(|&(r, c, z)| {
            let (a, b) = (r / db, r % db);
            let (a2, b2) = (c / db, c % db);
            (a * db + b2, a2 * db + b, z)
        })
        .collect();
    SparseHermitian::new(e.dim, entries)
}

/// Coefficient acting on ρ, compressed through `isometry` (ρ = V ρ' V†) when given.
fn on_rho(a: SparseHermitian, isometry: Option<&ComplexMatrix>) -> SparseHermitian {
    match isometry {
        None => a,
        Some(v) => {
            let full = a.to_complex_matrix();
            let small = &(&v.adjoint() * &full) * v;
            SparseHermitian::from_dense(&small.hermitian_part(), DROP_TOL)
        }
    }
}

/// Rows describing the region: marginals (or unit trace) on ρ and, if
/// requested, the ρ^Γ coupling.
fn region_rows(fs: &FeasibleSetSpec, isometry: Option<&ComplexMatrix>) -> Vec<ConstraintRow> {
    let dims = fs.dims();
    let (da, db) = dims;
    let d = da * db;
    let mut rows = Vec::new();
    if fs.constrain_marginals {
        let sa = fs.anchor.marginal(Subsystem::A);
        let sb = fs.anchor.marginal(Subsystem::B);
        for f in hermitian_basis(da) {
            let rhs = f.inner(sa.as_nalgebra());
            rows.push(ConstraintRow { terms: vec![(RHO_BLOCK, on_rho(lift(&f, dims, Subsystem::A), isometry))], rhs });
        }
        // the B-side trace is implied by the A-side diagonals; drop one diagonal
        for (k, f) in hermitian_basis(db).into_iter().enumerate() {
            if k == db - 1 {
                continue;
            }
            let rhs = f.inner(sb.as_nalgebra());
            rows.push(ConstraintRow { terms: vec![(RHO_BLOCK, on_rho(lift(&f, dims, Subsystem::B), isometry))], rhs });
        }
    } else {
        let id = SparseHermitian::new(d, (0..d).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect());
        rows.push(ConstraintRow { terms: vec![(RHO_BLOCK, on_rho(id, isometry))], rhs: 1.0 });
    }
    if fs.ppt {
        for e in hermitian_basis(d) {
            let pt = partial_transpose_sparse(&e, dims).scaled(-1.0);
            rows.push(ConstraintRow { terms: vec![(PT_BLOCK, e), (RHO_BLOCK, on_rho(pt, isometry))], rhs: 0.0 });
        }
    }
    rows
}

fn region_blocks(fs: &FeasibleSetSpec, rho_dim: usize) -> Vec<usize> {
    let d = fs.anchor.dim();
    if fs.ppt {
        vec![rho_dim, d]
    } else {
        vec![rho_dim]
    }
}

/// min tr[G ρ] over the feasible set.
///
/// With fixed marginals the set has an interior only when both marginals are
/// full rank; compress with [`LocalCompression`](crate::states::LocalCompression) first otherwise.
pub fn build_lmo_problem(gradient: &ComplexMatrix, fs: &FeasibleSetSpec) -> SdpProblem {
    let mut p = SdpProblem::with_blocks(region_blocks(fs, fs.anchor.dim()));
    p.objective[RHO_BLOCK] = gradient.hermitian_part();
    p.constraints = region_rows(fs, None);
    p
}

/// min tr[G ρ'] over ρ' with V ρ' V† in the feasible set, where V (d × k) is
/// an isometry; G is k × k.
pub fn build_lmo_problem_on_support(gradient: &ComplexMatrix, fs: &FeasibleSetSpec, isometry: &ComplexMatrix) -> SdpProblem {
    let k = isometry.n_cols();
    let mut p = SdpProblem::with_blocks(region_blocks(fs, k));
    p.objective[RHO_BLOCK] = gradient.hermitian_part();
    p.constraints = region_rows(fs, Some(isometry));
    p
}

/// min tr[(I − P_σ) ρ] over D_σ; a positive optimum means no member of D_σ
/// is supported inside supp(σ).
pub fn build_support_problem(sigma: &DensityMatrix) -> SdpProblem {
    let eig = eig_hermitian(sigma.matrix()).expect("validated state");
    let d = sigma.dim();
    let off_support = ComplexMatrix::identity(d) - eig.support_projector(SUPPORT_THRESHOLD);
    build_lmo_problem(&off_support, &FeasibleSetSpec::locally_identical(sigma.clone()))
}

/// min tr[P + Q] s.t. ρ + P − Q = σ with ρ in the feasible set; blocks are
/// (ρ, ρ^Γ, P, Q), or (ρ, P, Q) without the PPT coupling.
pub fn build_trace_norm_problem(sigma: &DensityMatrix, fs: &FeasibleSetSpec) -> SdpProblem {
    let d = sigma.dim();
    let mut blocks = region_blocks(fs, d);
    let p_block = blocks.len();
    let q_block = p_block + 1;
    blocks.extend([d, d]);
    let mut p = SdpProblem::with_blocks(blocks);
    p.objective[p_block] = ComplexMatrix::identity(d);
    p.objective[q_block] = ComplexMatrix::identity(d);
    p.constraints = region_rows(fs, None);
    for e in hermitian_basis(d) {
        let rhs = e.inner(sigma.matrix().as_nalgebra());
        p.constraints.push(ConstraintRow {
            terms: vec![(RHO_BLOCK, e.clone()), (p_block, e.clone()), (q_block, e.scaled(-1.0))],
            rhs,
        });
    }
    p
}

/// min tr[P + Q] s.t. P − Q = X; the optimum is ‖X‖₁.
pub fn build_fixed_trace_norm_problem(x: &ComplexMatrix) -> SdpProblem {
    let d = x.n_rows();
    let mut p = SdpProblem::with_blocks(vec![d, d]);
    p.objective[0] = ComplexMatrix::identity(d);
    p.objective[1] = ComplexMatrix::identity(d);
    let xh = x.hermitian_part();
    for e in hermitian_basis(d) {
        let rhs = e.inner(xh.as_nalgebra());
        p.constraints.push(ConstraintRow { terms: vec![(0, e.clone()), (1, e.scaled(-1.0))], rhs });
    }
    p
}
