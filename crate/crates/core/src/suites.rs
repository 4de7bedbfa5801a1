//! Seeded randomised property suites.
//!
//! Each suite draws its instances from its own ChaCha stream derived from the
//! caller's seed, so results are reproducible and independent of which other
//! suites run. A suite reports how many instances it checked, how many
//! violated the property, and the smallest margin seen (negative on
//! violation).

use rand::Rng;

use crate::error::Result;
use crate::hypothesis::{error_probabilities, helstrom_test};
use crate::linalg::{matrix_function, trace_norm, ComplexMatrix};
use crate::measures::properties::PROPERTY_SLACK;
use crate::measures::{evaluate, verify_convexity, verify_monotonicity, Measure, MeasureOptions};
use crate::states::random::{
    ginibre, random_density_with, random_hermitian, random_instrument_with, random_kraus, random_unitary, rng_from_seed,
};
use crate::states::{is_ppt, DensityMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub violations: usize,
    pub worst_margin: f64,
}

impl SuiteReport {
    fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), cases: 0, violations: 0, worst_margin: f64::INFINITY }
    }

    /// Records one instance whose property holds iff `margin ≥ 0`.
    fn record(&mut self, margin: f64) {
        self.cases += 1;
        if !(margin >= 0.0) {
            self.violations += 1;
        }
        self.worst_margin = self.worst_margin.min(margin);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn stream(seed: u64, suite: u64) -> rand_chacha::ChaCha8Rng {
    rng_from_seed(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(suite))
}

/// ‖ABA†‖₁ ≤ ‖A†A|B|‖₁ for complex A and Hermitian B up to 8×8.
pub fn sandwich_suite(seed: u64, count: usize) -> Result<SuiteReport> {
    let mut rng = stream(seed, 1);
    let mut report = SuiteReport::new("trace-norm sandwich");
    for _ in 0..count {
        let n = rng.random_range(1..=8);
        let a = ginibre(&mut rng, n, n);
        let b = random_hermitian(&mut rng, n);
        let lhs = trace_norm(&(&(&a * &b) * &a.adjoint()));
        let rhs = trace_norm(&(&(&a.adjoint() * &a) * &matrix_function(&b, f64::abs)?));
        report.record(rhs + 1e-10 * rhs.max(1.0) - lhs);
    }
    Ok(report)
}

/// ‖ℰ(σ) − ℰ(ρ)‖₁ ≤ ‖σ − ρ‖₁ for random channels ℰ in Kraus form.
pub fn contraction_suite(seed: u64, count: usize) -> Result<SuiteReport> {
    let mut rng = stream(seed, 2);
    let mut report = SuiteReport::new("trace-norm contraction");
    for _ in 0..count {
        let d_in: usize = rng.random_range(2..=4);
        let d_out = rng.random_range(1..=4);
        let min_ops = d_in.div_ceil(d_out);
        let count = rng.random_range(min_ops..=min_ops + 2);
        let ops = random_kraus(&mut rng, d_in, d_out, count)?;
        let rank_s = rng.random_range(1..=d_in);
        let rank_r = rng.random_range(1..=d_in);
        let s = random_density_with(&mut rng, (d_in, 1), rank_s)?;
        let r = random_density_with(&mut rng, (d_in, 1), rank_r)?;
        let apply = |m: &ComplexMatrix| {
            ops.iter().fold(ComplexMatrix::zeros(d_out, d_out), |acc, k| acc + m.conjugate_by(k))
        };
        let before = trace_norm(&(s.matrix() - r.matrix()));
        let after = trace_norm(&(apply(s.matrix()) - apply(r.matrix())));
        report.record(before + 1e-10 - after);
    }
    Ok(report)
}

/// E(σ) ≥ Σ pᵢ E(σᵢ) for random two-qubit states and instruments; every
/// second instance measures B instead of A (by swapping the parties).
pub fn monotonicity_suite(measure: Measure, seed: u64, count: usize, opts: &MeasureOptions) -> Result<SuiteReport> {
    let mut rng = stream(seed, 3 + measure as u64);
    let mut report = SuiteReport::new(format!("monotonicity {measure}"));
    for case in 0..count {
        let rank = rng.random_range(1..=4);
        let mut sigma = random_density_with(&mut rng, (2, 2), rank)?;
        if case % 2 == 1 {
            sigma = sigma.swapped();
        }
        let outcomes = rng.random_range(2..=3);
        let instrument = random_instrument_with(&mut rng, 2, outcomes)?;
        let r = verify_monotonicity(measure, &sigma, &instrument, opts)?;
        let margin = if r.before.value.is_infinite() {
            f64::INFINITY
        } else {
            r.before.value + r.before.gap - (r.average_after - r.average_gap_after) + PROPERTY_SLACK
        };
        report.record(if r.passed { margin.max(0.0) } else { margin.min(-f64::MIN_POSITIVE) });
    }
    Ok(report)
}

/// E(λσ₁ + (1−λ)σ₂) ≤ λE(σ₁) + (1−λ)E(σ₂) on random two-qubit triples.
pub fn convexity_suite(measure: Measure, seed: u64, count: usize, opts: &MeasureOptions) -> Result<SuiteReport> {
    let mut rng = stream(seed, 10 + measure as u64);
    let mut report = SuiteReport::new(format!("convexity {measure}"));
    for _ in 0..count {
        let r1 = rng.random_range(1..=4);
        let r2 = rng.random_range(1..=4);
        let s1 = random_density_with(&mut rng, (2, 2), r1)?;
        let s2 = random_density_with(&mut rng, (2, 2), r2)?;
        let lambda: f64 = rng.random();
        let r = verify_convexity(measure, &s1, &s2, lambda, opts)?;
        let margin = if r.bound.is_infinite() {
            f64::INFINITY
        } else {
            r.bound - (r.mixture.value - r.mixture.gap) + PROPERTY_SLACK
        };
        report.record(if r.passed { margin.max(0.0) } else { margin.min(-f64::MIN_POSITIVE) });
    }
    Ok(report)
}

/// Full-rank two-qubit state with a non-positive partial transpose.
pub fn random_npt_state<R: Rng + ?Sized>(rng: &mut R) -> Result<DensityMatrix> {
    loop {
        let s = random_density_with(rng, (2, 2), 4)?;
        if !is_ppt(&s, 0.0) {
            return Ok(s);
        }
    }
}

/// Which second factor the additivity suite pairs each σ with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdditivityPartner {
    /// σ ⊗ σ on the 16-dimensional cut (A₁A₂)|(B₁B₂).
    Square,
    /// σ ⊗ τ with τ a random full-rank state on C² ⊗ C¹ (8 dimensions).
    Ancilla,
}

/// E_A(σ ⊗ τ) = E_A(σ) + E_A(τ) within 1e-3 plus the certified gaps.
pub fn additivity_suite(seed: u64, count: usize, partner: AdditivityPartner, opts: &MeasureOptions) -> Result<SuiteReport> {
    let mut rng = stream(seed, 20);
    let mut report = SuiteReport::new(match partner {
        AdditivityPartner::Square => "strong additivity EA (sigma x sigma)",
        AdditivityPartner::Ancilla => "strong additivity EA (sigma x ancilla)",
    });
    for _ in 0..count {
        let sigma = random_npt_state(&mut rng)?;
        let tau = match partner {
            AdditivityPartner::Square => sigma.clone(),
            AdditivityPartner::Ancilla => random_density_with(&mut rng, (2, 1), 2)?,
        };
        let joint = evaluate(Measure::Ea, &sigma.tensor(&tau), opts)?;
        let first = evaluate(Measure::Ea, &sigma, opts)?;
        let second = evaluate(Measure::Ea, &tau, opts)?;
        let slack = 1e-3 + joint.gap + first.gap + second.gap;
        let deviation = (joint.value - first.value - second.value).abs();
        report.record(if deviation.is_nan() { -1.0 } else { slack - deviation });
    }
    Ok(report)
}

/// 1 − α − β ≤ ‖ω − ξ‖₁/2 for random tests, with equality at the Helstrom
/// projector.
pub fn helstrom_suite(seed: u64, pairs: usize, tests_per_pair: usize) -> Result<SuiteReport> {
    let mut rng = stream(seed, 30);
    let mut report = SuiteReport::new("helstrom optimality");
    for _ in 0..pairs {
        let d = rng.random_range(2..=4);
        let rw = rng.random_range(1..=d);
        let rx = rng.random_range(1..=d);
        let omega = random_density_with(&mut rng, (d, 1), rw)?;
        let xi = random_density_with(&mut rng, (d, 1), rx)?;
        let best = 0.5 * trace_norm(&(omega.matrix() - xi.matrix()));
        let h = helstrom_test(&omega, &xi)?;
        report.record(1e-10 - (h.advantage() - best).abs());
        for _ in 0..tests_per_pair {
            let u = random_unitary(&mut rng, d);
            let weights: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let e = ComplexMatrix::from_diagonal(&weights).conjugate_by(&u).hermitian_part();
            let r = error_probabilities(&omega, &xi, &e)?;
            report.record(best + 1e-10 - r.advantage());
        }
    }
    Ok(report)
}

/// Per-suite instance counts for [`run_all`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteSizes {
    pub sandwich: usize,
    pub contraction: usize,
    pub monotonicity_et: usize,
    pub monotonicity_em: usize,
    pub convexity_et: usize,
    pub convexity_em: usize,
    pub additivity: usize,
    pub helstrom_pairs: usize,
    pub helstrom_tests: usize,
}

impl SuiteSizes {
    /// Small enough for an interactive self-test.
    pub fn quick() -> Self {
        Self {
            sandwich: 200,
            contraction: 50,
            monotonicity_et: 10,
            monotonicity_em: 3,
            convexity_et: 10,
            convexity_em: 3,
            additivity: 1,
            helstrom_pairs: 10,
            helstrom_tests: 50,
        }
    }

    /// Every count multiplied by `factor`.
    pub fn scaled(self, factor: usize) -> Self {
        Self {
            sandwich: self.sandwich * factor,
            contraction: self.contraction * factor,
            monotonicity_et: self.monotonicity_et * factor,
            monotonicity_em: self.monotonicity_em * factor,
            convexity_et: self.convexity_et * factor,
            convexity_em: self.convexity_em * factor,
            additivity: self.additivity * factor,
            helstrom_pairs: self.helstrom_pairs * factor,
            helstrom_tests: self.helstrom_tests,
        }
    }
}

/// All suites in a fixed order.
pub fn run_all(seed: u64, sizes: &SuiteSizes, opts: &MeasureOptions) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        sandwich_suite(seed, sizes.sandwich)?,
        contraction_suite(seed, sizes.contraction)?,
        monotonicity_suite(Measure::Et, seed, sizes.monotonicity_et, opts)?,
        monotonicity_suite(Measure::Em, seed, sizes.monotonicity_em, opts)?,
        convexity_suite(Measure::Et, seed, sizes.convexity_et, opts)?,
        convexity_suite(Measure::Em, seed, sizes.convexity_em, opts)?,
        additivity_suite(seed, sizes.additivity, AdditivityPartner::Ancilla, opts)?,
        helstrom_suite(seed, sizes.helstrom_pairs, sizes.helstrom_tests)?,
    ])
}
