//! Brute-force oracles shared by the integration tests. Everything here is
//! written from the definitions with explicit index loops or a different
//! nalgebra decomposition than the library uses.

#![allow(dead_code)]

use entangle_core::{Complex64, ComplexMatrix};
use nalgebra::DMatrix;

pub fn mat(m: &ComplexMatrix) -> DMatrix<Complex64> {
    m.as_nalgebra().clone()
}

/// Sum of singular values.
pub fn svd_trace_norm(m: &ComplexMatrix) -> f64 {
    m.as_nalgebra().clone().svd(false, false).singular_values.sum()
}

/// Ascending eigenvalues of a Hermitian matrix via nalgebra's symmetric
/// eigensolver.
pub fn eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let h = (m.as_nalgebra() + m.as_nalgebra().adjoint()) * Complex64::new(0.5, 0.0);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    eigenvalues(m)[0]
}

/// tr_B by the defining sum ρ_A[i,k] = Σ_j ρ[(i,j),(k,j)].
pub fn trace_out_b(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(da, da, |i, k| (0..db).map(|j| m.get(i * db + j, k * db + j)).sum())
}

/// tr_A by ρ_B[j,l] = Σ_i ρ[(i,j),(i,l)].
pub fn trace_out_a(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(db, db, |j, l| (0..da).map(|i| m.get(i * db + j, i * db + l)).sum())
}

/// Transpose on B: ρ^Γ[(i,j),(k,l)] = ρ[(i,l),(k,j)].
pub fn transpose_b(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let d = da * db;
    ComplexMatrix::from_fn(d, d, |r, c| {
        let (i, j) = (r / db, r % db);
        let (k, l) = (c / db, c % db);
        m.get(i * db + l, k * db + j)
    })
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Optimal β for n copies of the commuting pair diag(a, 1−a) vs
/// diag(b, 1−b) at type-I level ε.
///
/// Outcomes are grouped by type class (all members share one likelihood
/// ratio), and every vertex of {φ ∈ [0,1]^{n+1} : Σ φ_k w_k ≥ 1 − ε} is
/// enumerated: a 0/1 pattern plus at most one fractional class.
pub fn classical_beta_star(a: f64, b: f64, n: usize, eps: f64) -> f64 {
    let w: Vec<f64> = (0..=n).map(|k| binomial(n, k) * a.powi(k as i32) * (1.0 - a).powi((n - k) as i32)).collect();
    let v: Vec<f64> = (0..=n).map(|k| binomial(n, k) * b.powi(k as i32) * (1.0 - b).powi((n - k) as i32)).collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << (n + 1)) {
        let inside = |k: usize| mask & (1 << k) != 0;
        let sw: f64 = (0..=n).filter(|&k| inside(k)).map(|k| w[k]).sum();
        let sv: f64 = (0..=n).filter(|&k| inside(k)).map(|k| v[k]).sum();
        if sw >= 1.0 - eps {
            best = best.min(sv);
        }
        for j in (0..=n).filter(|&k| !inside(k) && w[k] > 0.0) {
            let q = (1.0 - eps - sw) / w[j];
            if (0.0..=1.0).contains(&q) {
                best = best.min(sv + q * v[j]);
            }
        }
    }
    best
}

/// Classical relative entropy D(a‖b) of two Bernoulli laws, in bits.
pub fn bernoulli_divergence_bits(a: f64, b: f64) -> f64 {
    let term = |p: f64, q: f64| if p == 0.0 { 0.0 } else { p * (p / q).log2() };
    term(a, b) + term(1.0 - a, 1.0 - b)
}

/// f(M) for Hermitian M through nalgebra's symmetric eigendecomposition.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let h = (m.as_nalgebra() + m.as_nalgebra().adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(f(eig.eigenvalues[i]), 0.0) } else { Complex64::new(0.0, 0.0) });
    ComplexMatrix::from_nalgebra(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

/// tr[ρ(ln ρ − ln σ)] for positive definite arguments.
pub fn relative_entropy_pd_nats(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let diff = hermitian_function(rho, f64::ln) - hermitian_function(sigma, f64::ln);
    rho.real_trace_product(&diff)
}
