use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, partial_transpose, ComplexMatrix, Subsystem};

/// |v⟩⟨v| for a normalised vector on `dims`.
pub fn pure_state(v: &[Complex64], dims: (usize, usize)) -> Result<DensityMatrix> {
    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if norm2 <= 0.0 {
        return Err(Error::InvalidParameter("zero vector".into()));
    }
    let s = 1.0 / norm2.sqrt();
    let u: Vec<Complex64> = v.iter().map(|z| z * s).collect();
    DensityMatrix::new(ComplexMatrix::outer(&u), dims)
}

/// |φ⁺⟩⟨φ⁺| with |φ⁺⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> DensityMatrix {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    pure_state(&[one, zero, zero, one], (2, 2)).expect("static state")
}

pub fn maximally_mixed(dims: (usize, usize)) -> DensityMatrix {
    let d = dims.0 * dims.1;
    DensityMatrix::new(ComplexMatrix::identity(d).scale(1.0 / d as f64), dims).expect("static state")
}

/// (|0,0⟩ + (1+i)|0,1⟩ + (1−i)|1,0⟩)/√5.
pub fn example4_psi() -> [Complex64; 4] {
    let s = 1.0 / 5f64.sqrt();
    [
        Complex64::new(s, 0.0),
        Complex64::new(s, s),
        Complex64::new(s, -s),
        Complex64::new(0.0, 0.0),
    ]
}

/// ρ_p = p|ψ⟩⟨ψ| + (1 − p)·I/4 on C² ⊗ C².
pub fn example4_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let proj = ComplexMatrix::outer(&example4_psi());
    let m = proj.scale(p) + ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    DensityMatrix::new(m, (2, 2))
}

/// Mixing weight p* above which ρ_p stops being PPT.
///
/// λ_min(ρ_p^Γ) = p·λ + (1 − p)/4 with λ = λ_min(|ψ⟩⟨ψ|^Γ) < 0, so the root is
/// p* = 1/(1 − 4λ).
pub fn example4_ppt_threshold() -> f64 {
    let proj = ComplexMatrix::outer(&example4_psi());
    let pt = partial_transpose(&proj, (2, 2), Subsystem::B).expect("4x4");
    let lambda = eig_hermitian(&pt).expect("hermitian").min_eigenvalue();
    1.0 / (1.0 - 4.0 * lambda)
}

/// σ_A ⊗ σ_B, always a PPT member of D_σ.
pub fn product_of_marginals(s: &DensityMatrix) -> DensityMatrix {
    let m = kron(&s.marginal(Subsystem::A), &s.marginal(Subsystem::B));
    DensityMatrix::new(m, s.dims()).expect("product of states is a state")
}
