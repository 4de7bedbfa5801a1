//! Hermitian spectral calculus backed by nalgebra's symmetric eigensolver.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Eigenvalues at or below this magnitude are treated as zero when deciding
/// supports.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// U·diag(λ)·U† with ascending eigenvalues and unitary `U`.
///
/// Column phases are fixed so that the largest-modulus component of each
/// eigenvector is real and positive; together with the ordering this makes
/// the decomposition deterministic for a given input.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    /// Σ w_k |u_k⟩⟨u_k| for arbitrary real weights.
    pub fn reconstruct_with_weights(&self, weights: &[f64]) -> ComplexMatrix {
        let u = self.eigenvectors.as_nalgebra();
        let mut scaled = u.clone();
        for (k, w) in weights.iter().enumerate() {
            scaled.column_mut(k).scale_mut(*w);
        }
        ComplexMatrix::from_nalgebra(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with_weights(&self.eigenvalues)
    }

    /// U·diag(f(λ))·U†; fails if `f` is not finite somewhere on the spectrum.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let mut w = Vec::with_capacity(self.dim());
        for &l in &self.eigenvalues {
            let v = f(l);
            if !v.is_finite() {
                return Err(Error::UndefinedOnSpectrum(format!("f({l:e}) = {v}")));
            }
            w.push(v);
        }
        Ok(self.reconstruct_with_weights(&w))
    }

    /// Applies `f` on eigenvalues above `threshold` and zero elsewhere, so
    /// e.g. `log` acts on the support only.
    pub fn apply_on_support(&self, threshold: f64, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        self.apply(|l| if l > threshold { f(l) } else { 0.0 })
    }

    /// Projector onto the span of eigenvectors with eigenvalue above `threshold`.
    pub fn support_projector(&self, threshold: f64) -> ComplexMatrix {
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| if l > threshold { 1.0 } else { 0.0 }).collect();
        self.reconstruct_with_weights(&w)
    }

    /// Isometry (n × k) whose columns span the eigenvectors with eigenvalue
    /// above `threshold`.
    pub fn support_isometry(&self, threshold: f64) -> ComplexMatrix {
        let cols: Vec<usize> = (0..self.dim()).filter(|&k| self.eigenvalues[k] > threshold).collect();
        let u = self.eigenvectors.as_nalgebra();
        ComplexMatrix::from_fn(u.nrows(), cols.len(), |i, j| u[(i, cols[j])])
    }

    pub fn rank(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrised first; an asymmetry above 1e-10 (relative to the
/// largest entry, floor 1) is rejected.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.n_rows(), m.n_cols())));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = m.max_abs().max(1.0);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let h = m.hermitian_part().into_nalgebra();
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut vecs = DMatrix::<Complex64>::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[k]);
        let v = eig.eigenvectors.column(k);
        let mut best = 0;
        let mut best_mod = -1.0;
        for i in 0..n {
            // tie-break to the first index within a relative hair of the max
            let md = v[i].norm();
            if md > best_mod * (1.0 + 1e-12) {
                best = i;
                best_mod = md;
            }
        }
        let phase = if best_mod > 0.0 { v[best].conj() / best_mod } else { Complex64::new(1.0, 0.0) };
        let norm = v.norm();
        for i in 0..n {
            vecs[(i, col)] = v[i] * phase / norm;
        }
    }
    Ok(SpectralDecomposition { eigenvalues: vals, eigenvectors: ComplexMatrix::from_nalgebra(vecs) })
}

/// U·diag(f(λ))·U† for a Hermitian matrix.
pub fn matrix_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    eig_hermitian(m)?.apply(f)
}

/// Sum of singular values. Hermitian inputs take the eigenvalue path.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_square() && m.hermitian_defect() <= 1e-13 * m.max_abs().max(1.0) {
        if let Ok(eig) = eig_hermitian(m) {
            return eig.eigenvalues.iter().map(|l| l.abs()).sum();
        }
    }
    let svd = m.as_nalgebra().clone().svd(false, false);
    svd.singular_values.iter().sum()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.min_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_eigenvalues_ascending() {
        let d = eig_hermitian(&ComplexMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 2.0, 3.0]);
        // phase convention: largest component real positive
        for k in 0..3 {
            let col: Vec<Complex64> = (0..3).map(|i| d.eigenvectors.get(i, k)).collect();
            let big = col.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
            assert!(big.im.abs() < 1e-15 && big.re > 0.0);
        }
    }

    #[test]
    fn rank_one_projector_spectrum() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [Complex64::new(s, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(s, 0.0)];
        let d = eig_hermitian(&ComplexMatrix::outer(&v)).unwrap();
        for (a, b) in d.eigenvalues.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn abs_and_log_on_support() {
        let a = matrix_function(&ComplexMatrix::from_diagonal(&[1.0, -2.0]), f64::abs).unwrap();
        assert!((a - ComplexMatrix::from_diagonal(&[1.0, 2.0])).max_abs() < 1e-15);

        let d = eig_hermitian(&ComplexMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0])).unwrap();
        let l = d.apply_on_support(SUPPORT_THRESHOLD, f64::log2).unwrap();
        assert!((l - ComplexMatrix::from_diagonal(&[-1.0, -1.0, 0.0, 0.0])).max_abs() < 1e-14);
        assert!(d.apply(f64::ln).is_err());
    }

    #[test]
    fn trace_norm_of_bell_minus_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [Complex64::new(s, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(s, 0.0)];
        let x = ComplexMatrix::outer(&v) - ComplexMatrix::identity(4).scale(0.25);
        assert!((trace_norm(&x) - 1.5).abs() < 1e-13);
    }

    #[test]
    fn trace_norm_general_matrix_uses_singular_values() {
        // [[0, 2], [0, 0]] has singular values {2, 0}
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            &[Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        assert!((trace_norm(&m) - 2.0).abs() < 1e-14);
    }
}
