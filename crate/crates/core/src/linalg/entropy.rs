//! Quantum relative entropy and the derivative of ρ ↦ −tr[σ log ρ].
//!
//! Internal calculus is in natural-log units; only [`relative_entropy`]
//! converts to bits.

use std::f64::consts::LN_2;

use super::spectral::{eig_hermitian, SUPPORT_THRESHOLD};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::states::DensityMatrix;

/// Support inclusion supp(ρ) ⊆ supp(σ) is accepted when the weight of ρ
/// outside supp(σ) is at most this.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// Eigenvalue gaps below this use the derivative instead of the quotient
/// in divided differences.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// S(ρ‖σ) in bits; `+∞` when supp(ρ) ⊄ supp(σ).
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    Ok(relative_entropy_nats(rho.matrix(), sigma.matrix())? / LN_2)
}

/// S(ρ‖σ) in nats for Hermitian PSD matrices (not necessarily normalised).
pub fn relative_entropy_nats(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    let er = eig_hermitian(rho)?;
    let es = eig_hermitian(sigma)?;

    let u = es.eigenvectors.as_nalgebra();
    let r = rho.as_nalgebra();
    let mut cross = 0.0;
    let mut leak = 0.0;
    for (k, &mu) in es.eigenvalues.iter().enumerate() {
        let v = u.column(k);
        let w = (v.adjoint() * r * v)[(0, 0)].re;
        if mu > SUPPORT_THRESHOLD {
            cross += w * mu.ln();
        } else {
            leak += w;
        }
    }
    if leak > SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }
    let neg_entropy: f64 = er.eigenvalues.iter().filter(|&&l| l > SUPPORT_THRESHOLD).map(|&l| l * l.ln()).sum();
    // Klein's inequality; roundoff only below this
    Ok((neg_entropy - cross).max(0.0))
}

/// Fréchet derivative of ρ ↦ −tr[σ ln ρ] at a positive definite ρ.
///
/// With ρ = U diag(λ) U†, σ̃ = U†σU and Φ the first divided differences of
/// `ln` at λ, the gradient is G = −U (σ̃ ∘ Φ) U†, so that
/// d/dt[−tr σ ln(ρ + tH)] at t = 0 equals tr[G H].
pub fn log_gradient(sigma: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if sigma.n_rows() != rho.n_rows() || !sigma.is_square() {
        return Err(Error::DimensionMismatch("log_gradient operands".into()));
    }
    let eig = eig_hermitian(rho)?;
    let lmin = eig.min_eigenvalue();
    if !(lmin > 0.0) {
        return Err(Error::Singular(lmin));
    }
    let n = eig.dim();
    let u = eig.eigenvectors.as_nalgebra();
    let mut st = u.adjoint() * sigma.as_nalgebra() * u;
    let lam = &eig.eigenvalues;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (lam[i], lam[j]);
            let phi = if (a - b).abs() < DEGENERACY_TOL { 1.0 / a } else { ((a - b) / b).ln_1p() / (a - b) };
            st[(i, j)] *= -phi;
        }
    }
    Ok(ComplexMatrix::from_nalgebra(u * st * u.adjoint()))
}
