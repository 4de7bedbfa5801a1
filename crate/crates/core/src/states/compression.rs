use super::DensityMatrix;
use crate::error::Result;
use crate::linalg::spectral::SUPPORT_THRESHOLD;
use crate::linalg::{eig_hermitian, kron, ComplexMatrix, Subsystem};

/// Restriction to supp(σ_A) ⊗ supp(σ_B).
///
/// Every ρ with the same marginals as σ lives on this subspace, and local
/// isometries commute with positivity of the partial transpose, so the
/// measures can be evaluated on the compressed state without changing their
/// values.
#[derive(Debug, Clone)]
pub struct LocalCompression {
    isometry: ComplexMatrix,
    full_dims: (usize, usize),
    reduced_dims: (usize, usize),
}

impl LocalCompression {
    /// `None` when both marginals are already full rank.
    pub fn for_state(s: &DensityMatrix) -> Result<Option<Self>> {
        let ea = eig_hermitian(&s.marginal(Subsystem::A))?;
        let eb = eig_hermitian(&s.marginal(Subsystem::B))?;
        let (da, db) = s.dims();
        let ra = ea.rank(SUPPORT_THRESHOLD);
        let rb = eb.rank(SUPPORT_THRESHOLD);
        if ra == da && rb == db {
            return Ok(None);
        }
        let va = ea.support_isometry(SUPPORT_THRESHOLD);
        let vb = eb.support_isometry(SUPPORT_THRESHOLD);
        Ok(Some(Self { isometry: kron(&va, &vb), full_dims: (da, db), reduced_dims: (ra, rb) }))
    }

    pub fn reduced_dims(&self) -> (usize, usize) {
        self.reduced_dims
    }

    pub fn full_dims(&self) -> (usize, usize) {
        self.full_dims
    }

    /// V† M V.
    pub fn compress_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.isometry.adjoint() * m) * &self.isometry
    }

    /// V M V†.
    pub fn expand_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        m.conjugate_by(&self.isometry)
    }

    pub fn compress(&self, s: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.compress_matrix(s.matrix()), self.reduced_dims)
    }

    pub fn expand(&self, s: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.expand_matrix(s.matrix()), self.full_dims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{is_ppt, pure_state, random_density};
    use num_complex::Complex64;

    #[test]
    fn full_rank_marginals_need_no_compression() {
        let s = random_density((2, 2), 2, 3).unwrap();
        assert!(LocalCompression::for_state(&s).unwrap().is_none());
    }

    #[test]
    fn product_with_pure_factor_compresses() {
        let a = random_density((3, 1), 3, 1).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let b = pure_state(&[z, o], (2, 1)).unwrap();
        let m = kron(a.matrix(), b.matrix());
        let s = DensityMatrix::new(m, (3, 2)).unwrap();
        let c = LocalCompression::for_state(&s).unwrap().expect("B marginal is pure");
        assert_eq!(c.reduced_dims(), (3, 1));
        let small = c.compress(&s).unwrap();
        let back = c.expand(&small).unwrap();
        assert!((back.matrix() - s.matrix()).max_abs() < 1e-14);
        assert!(is_ppt(&small, 1e-12));
    }
}
