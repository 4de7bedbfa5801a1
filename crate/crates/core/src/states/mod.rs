//! Validated bipartite density matrices and the feasible sets built on them.

mod compression;
mod instrument;
pub mod io;
mod named;
pub mod random;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, partial_trace, partial_transpose, swap_subsystems, ComplexMatrix, Subsystem};

pub use compression::LocalCompression;
pub use instrument::{apply_instrument, LocalInstrument};
pub use named::{
    bell_state, example4_ppt_threshold, example4_psi, example4_state, maximally_mixed, pure_state, product_of_marginals,
};
pub use random::{random_density, random_instrument};

/// Drift tolerated (and repaired) by [`DensityMatrix::new`].
pub const VALIDATION_TOL: f64 = 1e-8;

/// Hermitian, positive semidefinite, unit-trace operator on C^dA ⊗ C^dB.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: (usize, usize),
}

impl DensityMatrix {
    /// Validates `m` as a state on `dims`.
    ///
    /// Drifts up to 1e-8 (asymmetry, trace, negative eigenvalues) are
    /// repaired by symmetrising, clipping and renormalising; anything larger
    /// is rejected.
    pub fn new(m: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        let (da, db) = dims;
        if da == 0 || db == 0 || !m.is_square() || m.n_rows() != da * db {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims ({da}, {db})",
                m.n_rows(),
                m.n_cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = m.hermitian_defect();
        if defect > VALIDATION_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let mut h = m.hermitian_part();
        let tr = h.trace().re;
        if (tr - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let eig = eig_hermitian(&h)?;
        let lmin = eig.min_eigenvalue();
        if lmin < -VALIDATION_TOL {
            return Err(Error::NotPsd(lmin));
        }
        if lmin < -1e-13 {
            let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
            h = eig.reconstruct_with_weights(&clipped).hermitian_part();
        }
        let tr = h.trace().re;
        // leave roundoff-level drift alone so that files round-trip exactly
        if (tr - 1.0).abs() > 1e-14 {
            h = h.scale(1.0 / tr);
        }
        Ok(Self { matrix: h, dims })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        partial_trace(&self.matrix, self.dims, keep).expect("dims validated at construction")
    }

    /// Partial transpose on B.
    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose(&self.matrix, self.dims, Subsystem::B).expect("dims validated at construction")
    }

    /// The same state with the roles of A and B exchanged.
    pub fn swapped(&self) -> DensityMatrix {
        let m = swap_subsystems(&self.matrix, self.dims).expect("dims validated at construction");
        DensityMatrix { matrix: m, dims: (self.dims.1, self.dims.0) }
    }

    /// Tensor product σ ⊗ τ regrouped on the cut (A₁A₂)|(B₁B₂).
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let k = crate::linalg::kron(&self.matrix, &other.matrix);
        let m = crate::linalg::tensor::regroup_tensor_product(&k, self.dims, other.dims).expect("consistent sizes");
        DensityMatrix { matrix: m, dims: (self.dims.0 * other.dims.0, self.dims.1 * other.dims.1) }
    }

    /// λ·self + (1 − λ)·other.
    pub fn mix(&self, other: &DensityMatrix, lambda: f64) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("mixing states of different dims".into()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!("mixing weight {lambda}")));
        }
        DensityMatrix::new(self.matrix.scale(lambda) + other.matrix.scale(1.0 - lambda), self.dims)
    }
}

/// PPT test: minimum eigenvalue of σ^Γ at least `-tol`.
pub fn is_ppt(s: &DensityMatrix, tol: f64) -> bool {
    match eig_hermitian(&s.partial_transpose()) {
        Ok(e) => e.min_eigenvalue() >= -tol,
        Err(_) => false,
    }
}

/// The set a measure optimises over: PPT states, optionally with the
/// anchor's marginals imposed.
#[derive(Debug, Clone)]
pub struct FeasibleSetSpec {
    pub anchor: DensityMatrix,
    pub constrain_marginals: bool,
    pub ppt: bool,
}

/// How far a candidate state is from membership.
#[derive(Debug, Clone, Copy)]
pub struct MembershipResiduals {
    pub min_eigenvalue: f64,
    pub min_pt_eigenvalue: f64,
    pub trace_error: f64,
    /// Max-entry deviation of both marginals (0 when unconstrained).
    pub marginal_error: f64,
}

impl MembershipResiduals {
    pub fn within(&self, tol: f64) -> bool {
        self.min_eigenvalue >= -tol
            && self.min_pt_eigenvalue >= -tol
            && self.trace_error <= tol
            && self.marginal_error <= tol
    }
}

impl FeasibleSetSpec {
    /// D_σ: PPT states with σ's marginals.
    pub fn locally_identical(anchor: DensityMatrix) -> Self {
        Self { anchor, constrain_marginals: true, ppt: true }
    }

    /// All PPT states on the anchor's space.
    pub fn unrestricted(anchor: DensityMatrix) -> Self {
        Self { anchor, constrain_marginals: false, ppt: true }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.anchor.dims()
    }

    /// A point that is always in the set: σ_A ⊗ σ_B, or I/d when unconstrained.
    pub fn canonical_member(&self) -> DensityMatrix {
        if self.constrain_marginals {
            product_of_marginals(&self.anchor)
        } else {
            maximally_mixed(self.anchor.dims())
        }
    }

    pub fn residuals(&self, rho: &ComplexMatrix) -> Result<MembershipResiduals> {
        let dims = self.dims();
        let min_eigenvalue = eig_hermitian(rho)?.min_eigenvalue();
        let min_pt_eigenvalue = eig_hermitian(&partial_transpose(rho, dims, Subsystem::B)?)?.min_eigenvalue();
        let trace_error = (rho.trace().re - 1.0).abs();
        let marginal_error = if self.constrain_marginals {
            let da = (partial_trace(rho, dims, Subsystem::A)? - self.anchor.marginal(Subsystem::A)).max_abs();
            let db = (partial_trace(rho, dims, Subsystem::B)? - self.anchor.marginal(Subsystem::B)).max_abs();
            da.max(db)
        } else {
            0.0
        };
        Ok(MembershipResiduals { min_eigenvalue, min_pt_eigenvalue, trace_error, marginal_error })
    }

    pub fn contains(&self, rho: &ComplexMatrix, tol: f64) -> bool {
        self.residuals(rho).map(|r| r.within(tol)).unwrap_or(false)
    }
}
