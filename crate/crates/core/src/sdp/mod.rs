//! Dense primal-dual interior-point solver for complex Hermitian SDPs.
//!
//! Standard form, with real inner product ⟨A, X⟩ = Re tr[A X]:
//!
//! ```text
//! minimise   Σ_b ⟨C_b, X_b⟩
//! subject to Σ_b ⟨A_kb, X_b⟩ = b_k,   k = 1..m
//!            X_b ⪰ 0
//! ```
//!
//! and its dual `maximise bᵀy s.t. Z_b = C_b − Σ_k y_k A_kb ⪰ 0`.
//! The solver runs natively on complex blocks; the Schur complement is real
//! symmetric because every coefficient matrix is Hermitian.

mod builders;
mod problem;
mod solver;

pub use builders::{
    build_fixed_trace_norm_problem, build_lmo_problem, build_lmo_problem_on_support, build_support_problem,
    build_trace_norm_problem, hermitian_basis, RHO_BLOCK,
};
pub use problem::{ConstraintRow, SdpProblem, SparseHermitian};
pub use solver::{solve, SdpError, SdpSolution, SdpTolerances, SolveStatus};
