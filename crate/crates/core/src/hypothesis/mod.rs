//! Binary quantum hypothesis testing: ω (null) against ξ (alternative).
//!
//! A test is an operator 0 ⪯ E ⪯ I that decides for ω; α = tr[ω(I − E)] is the
//! type-I error and β = tr[ξE] the type-II error.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linalg::spectral::SUPPORT_THRESHOLD;
use crate::linalg::{eig_hermitian, kron, relative_entropy_nats, ComplexMatrix, SpectralDecomposition};
use crate::states::DensityMatrix;

/// Tensor powers are refused beyond this matrix dimension.
pub const MAX_TENSOR_DIM: usize = 4096;

/// Slack allowed on 0 ⪯ E ⪯ I.
pub const OPERATOR_TOL: f64 = 1e-10;

/// Eigenvalues of ω^⊗n − tξ^⊗n this close to zero form the boundary space
/// of a randomised test.
pub const BOUNDARY_TOL: f64 = 1e-11;

/// Overshoot used when pulling α back under ε after roundoff.
const ALPHA_MARGIN: f64 = 1e-14;

/// Pure-state formula and explicit evaluation must agree to this.
const EXPLICIT_CHECK_TOL: f64 = 1e-10;

/// Explicit tensor-power checks are skipped above this dimension.
const EXPLICIT_CHECK_MAX_DIM: usize = 256;

#[derive(Debug, Clone)]
pub struct HypothesisTestResult {
    pub test: ComplexMatrix,
    pub alpha: f64,
    pub beta: f64,
}

impl HypothesisTestResult {
    /// 1 − α − β.
    pub fn advantage(&self) -> f64 {
        1.0 - self.alpha - self.beta
    }
}

fn check_test_operator(e: &ComplexMatrix) -> Result<()> {
    let eig = eig_hermitian(e)?;
    let (lo, hi) = (eig.min_eigenvalue(), eig.max_eigenvalue());
    if lo < -OPERATOR_TOL || hi > 1.0 + OPERATOR_TOL {
        return Err(Error::InvalidParameter(format!("test operator spectrum [{lo:e}, {hi}] outside [0, 1]")));
    }
    Ok(())
}

fn errors_of(omega: &ComplexMatrix, xi: &ComplexMatrix, e: ComplexMatrix) -> HypothesisTestResult {
    let alpha = (1.0 - omega.real_trace_product(&e)).clamp(0.0, 1.0);
    let beta = xi.real_trace_product(&e).clamp(0.0, 1.0);
    HypothesisTestResult { test: e, alpha, beta }
}

/// α and β of the test `e`, which must satisfy 0 ⪯ E ⪯ I.
pub fn error_probabilities(omega: &DensityMatrix, xi: &DensityMatrix, e: &ComplexMatrix) -> Result<HypothesisTestResult> {
    if omega.dim() != xi.dim() || e.n_rows() != omega.dim() || !e.is_square() {
        return Err(Error::DimensionMismatch("test and states must act on the same space".into()));
    }
    check_test_operator(e)?;
    Ok(errors_of(omega.matrix(), xi.matrix(), e.hermitian_part()))
}

/// Projector onto the strictly positive part of ω − ξ; it maximises
/// 1 − α − β, reaching ‖ω − ξ‖₁/2.
pub fn helstrom_test(omega: &DensityMatrix, xi: &DensityMatrix) -> Result<HypothesisTestResult> {
    if omega.dim() != xi.dim() {
        return Err(Error::DimensionMismatch("Helstrom test needs equal dims".into()));
    }
    let eig = eig_hermitian(&(omega.matrix() - xi.matrix()))?;
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&l| if l > 0.0 { 1.0 } else { 0.0 }).collect();
    Ok(errors_of(omega.matrix(), xi.matrix(), eig.reconstruct_with_weights(&weights)))
}

/// m^⊗n, refusing dimensions above [`MAX_TENSOR_DIM`].
pub fn tensor_power(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one copy".into()));
    }
    let d = m.n_rows();
    let fits = (1..n).try_fold(d, |acc, _| acc.checked_mul(d).filter(|&v| v <= MAX_TENSOR_DIM));
    if d > MAX_TENSOR_DIM || fits.is_none() {
        return Err(Error::InvalidParameter(format!("{n} copies of dimension {d} exceed {MAX_TENSOR_DIM}")));
    }
    let mut out = m.clone();
    for _ in 1..n {
        out = kron(&out, m);
    }
    Ok(out)
}

/// Spectral data of ω^⊗n − tξ^⊗n split into positive and boundary parts.
struct Threshold {
    eig: SpectralDecomposition,
}

impl Threshold {
    fn at(omega: &ComplexMatrix, xi: &ComplexMatrix, t: f64) -> Result<Self> {
        Ok(Self { eig: eig_hermitian(&(omega - &xi.scale(t)))? })
    }

    fn weights(&self, q: f64) -> Vec<f64> {
        self.eig
            .eigenvalues
            .iter()
            .map(|&l| {
                if l > BOUNDARY_TOL {
                    1.0
                } else if l >= -BOUNDARY_TOL {
                    q
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// tr[ω P] for the projector with the given 0/1 weights.
    fn omega_mass(&self, omega: &ComplexMatrix, weights: &[f64]) -> f64 {
        omega.real_trace_product(&self.eig.reconstruct_with_weights(weights))
    }
}

/// Optimal randomised test on n copies with α ≤ ε.
///
/// The test is P₊(t) + q·P₀(t) for the spectral decomposition of
/// ω^⊗n − tξ^⊗n: t is bisected until the boundary space P₀ carries the jump
/// in α across ε, and q is then solved from a linear equation so that α = ε.
/// Where α crosses ε continuously the strict projector at the lower end of
/// the bracket is used.
/// When the kernel of ξ^⊗n alone already meets the level, β* = 0.
pub fn neyman_pearson(
    omega: &DensityMatrix,
    xi: &DensityMatrix,
    n: usize,
    epsilon: f64,
) -> Result<(f64, HypothesisTestResult)> {
    if omega.dim() != xi.dim() {
        return Err(Error::DimensionMismatch("Neyman-Pearson test needs equal dims".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    let om = tensor_power(omega.matrix(), n)?;
    let xm = tensor_power(xi.matrix(), n)?;

    let xi_eig = eig_hermitian(&xm)?;
    let kernel = ComplexMatrix::identity(xm.n_rows()) - xi_eig.support_projector(SUPPORT_THRESHOLD);
    let zero_beta = errors_of(&om, &xm, kernel);
    if zero_beta.alpha <= epsilon {
        return Ok((0.0, HypothesisTestResult { beta: 0.0, ..zero_beta }));
    }

    // α of the strict projector is nondecreasing in t; 0 at t = 0
    let alpha_strict = |th: &Threshold| 1.0 - th.omega_mass(&om, &th.weights(0.0));
    let mut hi = 1.0;
    let mut th_hi = Threshold::at(&om, &xm, hi)?;
    while alpha_strict(&th_hi) <= epsilon {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::InvalidParameter("threshold search diverged".into()));
        }
        th_hi = Threshold::at(&om, &xm, hi)?;
    }
    let mut lo = 0.0;
    let mut th_lo = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let th = Threshold::at(&om, &xm, mid)?;
        if alpha_strict(&th) <= epsilon {
            lo = mid;
            th_lo = Some(th);
        } else {
            hi = mid;
            th_hi = th;
        }
    }

    let strict_mass = th_hi.omega_mass(&om, &th_hi.weights(0.0));
    let boundary_mass = th_hi.omega_mass(&om, &th_hi.weights(1.0)) - strict_mass;
    let needed = (1.0 - epsilon) - strict_mass;
    let mut q = if boundary_mass > 0.0 { (needed / boundary_mass).clamp(0.0, 1.0) } else { 1.0 };
    let mut result = errors_of(&om, &xm, th_hi.eig.reconstruct_with_weights(&th_hi.weights(q)));
    // roundoff in the linear solve; α ≤ ε is a hard constraint
    for _ in 0..8 {
        if result.alpha <= epsilon || boundary_mass <= 0.0 || q >= 1.0 {
            break;
        }
        q = (q + (result.alpha - epsilon + ALPHA_MARGIN) / boundary_mass).min(1.0);
        result = errors_of(&om, &xm, th_hi.eig.reconstruct_with_weights(&th_hi.weights(q)));
    }
    if result.alpha > epsilon {
        // α crossed ε continuously, with no boundary space to randomise over
        let th_lo = match th_lo {
            Some(th) => th,
            None => Threshold::at(&om, &xm, lo)?,
        };
        result = errors_of(&om, &xm, th_lo.eig.reconstruct_with_weights(&th_lo.weights(0.0)));
    }
    Ok((result.beta, result))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinRow {
    pub n: usize,
    pub beta_star: f64,
    /// (1/n) log₂ β*_n; −∞ when β*_n = 0.
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct SteinTable {
    pub rows: Vec<SteinRow>,
    /// −S(ω‖ξ) in bits; −∞ when supp ω ⊄ supp ξ.
    pub target: f64,
    pub epsilon: f64,
}

/// β*_n for n = 1..=n_max next to the Stein limit −S(ω‖ξ).
pub fn stein_table(omega: &DensityMatrix, xi: &DensityMatrix, epsilon: f64, n_max: usize) -> Result<SteinTable> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    tensor_power(omega.matrix(), n_max)?;
    // + 0.0 turns −0 into 0 for ω = ξ
    let target = -relative_entropy_nats(omega.matrix(), xi.matrix())? / LN_2 + 0.0;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (beta_star, _) = neyman_pearson(omega, xi, n, epsilon)?;
        let rate = if beta_star > 0.0 { beta_star.log2() / n as f64 } else { f64::NEG_INFINITY };
        rows.push(SteinRow { n, beta_star, rate });
    }
    Ok(SteinTable { rows, target, epsilon })
}

/// For pure ξ the test E_n = I − ξ^⊗n has β_n = 0 and α_n = tr[ωξ]^n.
///
/// Returns (α_n, β_n); for small n the formula is checked against the
/// explicit n-copy operators.
pub fn pure_state_divergence(omega: &DensityMatrix, xi: &DensityMatrix, n: usize) -> Result<(f64, f64)> {
    if omega.dim() != xi.dim() {
        return Err(Error::DimensionMismatch("pure-state divergence needs equal dims".into()));
    }
    let top = eig_hermitian(xi.matrix())?.max_eigenvalue();
    if top < 1.0 - 1e-10 {
        return Err(Error::InvalidParameter(format!("xi is not pure (largest eigenvalue {top})")));
    }
    if (omega.matrix() - xi.matrix()).max_abs() <= 1e-12 {
        return Err(Error::InvalidParameter("omega equals xi".into()));
    }
    let overlap = omega.matrix().real_trace_product(xi.matrix());
    let alpha = overlap.powi(n as i32);
    let d = omega.dim();
    let small = (1..n).try_fold(d, |acc, _| acc.checked_mul(d).filter(|&v| v <= EXPLICIT_CHECK_MAX_DIM));
    if n >= 1 && small.is_some() {
        let om = tensor_power(omega.matrix(), n)?;
        let xm = tensor_power(xi.matrix(), n)?;
        let e = ComplexMatrix::identity(xm.n_rows()) - xm.clone();
        let explicit = errors_of(&om, &xm, e);
        if (explicit.alpha - alpha).abs() > EXPLICIT_CHECK_TOL || explicit.beta > EXPLICIT_CHECK_TOL {
            return Err(Error::InvalidParameter(format!(
                "explicit evaluation ({}, {}) disagrees with ({alpha}, 0)",
                explicit.alpha, explicit.beta
            )));
        }
    }
    Ok((alpha, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_norm;
    use crate::states::{pure_state, random_density};
    use num_complex::Complex64;

    fn diag(d: &[f64]) -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_diagonal(d), (d.len(), 1)).unwrap()
    }

    #[test]
    fn trivial_tests() {
        let w = diag(&[0.7, 0.3]);
        let x = diag(&[0.4, 0.6]);
        let all = error_probabilities(&w, &x, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!((all.alpha, all.beta), (0.0, 1.0));
        let none = error_probabilities(&w, &x, &ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!((none.alpha, none.beta), (1.0, 0.0));
        assert!(error_probabilities(&w, &x, &ComplexMatrix::identity(2).scale(1.1)).is_err());
    }

    #[test]
    fn helstrom_orthogonal_and_equal() {
        let h = helstrom_test(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap();
        assert_eq!((h.alpha, h.beta), (0.0, 0.0));
        let s = random_density((2, 2), 3, 4).unwrap();
        assert!(helstrom_test(&s, &s).unwrap().advantage().abs() < 1e-14);
        let t = random_density((2, 2), 2, 5).unwrap();
        let h = helstrom_test(&s, &t).unwrap();
        assert!((h.advantage() - 0.5 * trace_norm(&(s.matrix() - t.matrix()))).abs() < 1e-12);
    }

    #[test]
    fn neyman_pearson_equal_states_is_coin_flip() {
        let s = diag(&[0.6, 0.4]);
        let (b, r) = neyman_pearson(&s, &s, 3, 0.1).unwrap();
        assert!((b - 0.9).abs() < 1e-10);
        assert!(r.alpha <= 0.1 && r.alpha >= 0.1 - 1e-10);
    }

    #[test]
    fn neyman_pearson_orthogonal_is_perfect() {
        let (b, r) = neyman_pearson(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 2, 0.05).unwrap();
        assert_eq!(b, 0.0);
        assert_eq!(r.alpha, 0.0);
    }

    #[test]
    fn size_guard() {
        let s = diag(&[0.5, 0.5]);
        assert!(neyman_pearson(&s, &s, 13, 0.1).is_err());
        assert!(tensor_power(s.matrix(), 12).is_ok());
        assert!(neyman_pearson(&s, &s, 2, 0.0).is_err());
    }

    #[test]
    fn pure_divergence() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let xi = pure_state(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], (2, 1)).unwrap();
        let omega = pure_state(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)], (2, 1)).unwrap();
        let (a, b) = pure_state_divergence(&omega, &xi, 3).unwrap();
        assert!((a - 0.125).abs() < 1e-14 && b == 0.0);
        assert!(pure_state_divergence(&omega, &diag(&[0.5, 0.5]), 2).is_err());
    }

    #[test]
    fn stein_table_equal_states() {
        let s = diag(&[0.3, 0.7]);
        let t = stein_table(&s, &s, 0.2, 3).unwrap();
        assert_eq!(t.target, 0.0);
        for r in &t.rows {
            assert!(r.rate <= 0.0 && r.rate > -0.4);
        }
    }
}
