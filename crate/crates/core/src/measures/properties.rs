//! Certificate-aware checks of the monotone axioms.
//!
//! Each side of an inequality is only known up to its optimality gap, so a
//! check fails only when the certified intervals are incompatible.

use super::{evaluate, Measure, MeasureOptions, MeasureResult};
use crate::error::{Error, Result};
use crate::states::{apply_instrument, DensityMatrix, LocalInstrument};

/// Absolute slack added on top of the certified gaps.
pub const PROPERTY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub before: MeasureResult,
    /// (pᵢ, E(σᵢ)) for every retained outcome.
    pub outcomes: Vec<(f64, MeasureResult)>,
    /// Σ pᵢ E(σᵢ).
    pub average_after: f64,
    /// Σ pᵢ gapᵢ.
    pub average_gap_after: f64,
    pub passed: bool,
}

/// Checks E(σ) ≥ Σ pᵢ E(σᵢ) for a local instrument on A.
pub fn verify_monotonicity(
    measure: Measure,
    sigma: &DensityMatrix,
    instrument: &LocalInstrument,
    opts: &MeasureOptions,
) -> Result<MonotonicityReport> {
    let before = evaluate(measure, sigma, opts)?;
    let mut outcomes = Vec::new();
    for (p, s) in apply_instrument(sigma, instrument)? {
        outcomes.push((p, evaluate(measure, &s, opts)?));
    }
    let average_after: f64 = outcomes.iter().map(|(p, r)| p * r.value).sum();
    let average_gap_after: f64 = outcomes.iter().map(|(p, r)| p * r.gap).sum();
    let passed = if before.value.is_infinite() {
        true
    } else if average_after.is_infinite() {
        false
    } else {
        before.value + before.gap >= average_after - average_gap_after - PROPERTY_SLACK
    };
    Ok(MonotonicityReport { before, outcomes, average_after, average_gap_after, passed })
}

#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub mixture: MeasureResult,
    pub first: MeasureResult,
    pub second: MeasureResult,
    pub lambda: f64,
    /// λ E(σ₁) + (1 − λ) E(σ₂).
    pub bound: f64,
    pub passed: bool,
}

/// Checks E(λσ₁ + (1−λ)σ₂) ≤ λE(σ₁) + (1−λ)E(σ₂).
pub fn verify_convexity(
    measure: Measure,
    sigma1: &DensityMatrix,
    sigma2: &DensityMatrix,
    lambda: f64,
    opts: &MeasureOptions,
) -> Result<ConvexityReport> {
    if sigma1.dims() != sigma2.dims() {
        return Err(Error::DimensionMismatch("convexity check needs equal dims".into()));
    }
    let mixed = sigma1.mix(sigma2, lambda)?;
    let mixture = evaluate(measure, &mixed, opts)?;
    let first = evaluate(measure, sigma1, opts)?;
    let second = evaluate(measure, sigma2, opts)?;
    // a zero weight must not turn an infinite value into NaN
    let weighted = |w: f64, r: &MeasureResult| if w == 0.0 { 0.0 } else { w * r.value };
    let bound = weighted(lambda, &first) + weighted(1.0 - lambda, &second);
    let passed = if bound.is_infinite() {
        true
    } else if mixture.value.is_infinite() {
        false
    } else {
        mixture.value - mixture.gap <= bound + PROPERTY_SLACK
    };
    Ok(ConvexityReport { mixture, first, second, lambda, bound, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, example4_state};

    #[test]
    fn identity_instrument_is_equality() {
        let s = example4_state(0.8).unwrap();
        let r = verify_monotonicity(Measure::Et, &s, &LocalInstrument::identity(2), &MeasureOptions::default()).unwrap();
        assert!(r.passed);
        assert!((r.before.value - r.average_after).abs() < 1e-8);
    }

    #[test]
    fn bell_measured_locally() {
        let r = verify_monotonicity(
            Measure::Et,
            &bell_state(),
            &LocalInstrument::computational_basis(2),
            &MeasureOptions::default(),
        )
        .unwrap();
        assert!(r.passed);
        assert_eq!(r.average_after, 0.0);
    }

    #[test]
    fn convexity_endpoints() {
        let s1 = example4_state(0.7).unwrap();
        let s2 = bell_state();
        let opts = MeasureOptions::default();
        for lambda in [0.0, 1.0, 0.4] {
            assert!(verify_convexity(Measure::Et, &s1, &s2, lambda, &opts).unwrap().passed);
        }
        let same = verify_convexity(Measure::Et, &s1, &s1, 0.3, &opts).unwrap();
        assert!((same.mixture.value - same.bound).abs() < 1e-7);
    }
}
