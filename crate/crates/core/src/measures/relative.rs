//! E_M, E_R and E_A by Frank–Wolfe.

use std::f64::consts::LN_2;

use super::frank_wolfe::{frank_wolfe, FrankWolfeOptions, FrankWolfeOutcome, LinearOracle, SmoothObjective};
use super::{trivially_zero, MeasureOptions, MeasureResult};
use crate::error::{Error, Result};
use crate::linalg::spectral::SUPPORT_THRESHOLD;
use crate::linalg::{eig_hermitian, log_gradient, matrix_function, relative_entropy_nats, ComplexMatrix};
use crate::sdp::{build_support_problem, solve};
use crate::states::{maximally_mixed, product_of_marginals, DensityMatrix, FeasibleSetSpec, LocalCompression};

/// ρ ↦ S(σ‖ρ).
struct DivergenceFromState(ComplexMatrix);

impl SmoothObjective for DivergenceFromState {
    fn value(&self, x: &ComplexMatrix) -> Result<f64> {
        relative_entropy_nats(&self.0, x)
    }

    fn gradient(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        log_gradient(&self.0, x)
    }
}

/// ρ' ↦ S(ρ'‖σ') with σ' positive definite; `log_sigma` = ln σ'.
struct DivergenceToState {
    sigma: ComplexMatrix,
    log_sigma: ComplexMatrix,
}

impl SmoothObjective for DivergenceToState {
    fn value(&self, x: &ComplexMatrix) -> Result<f64> {
        relative_entropy_nats(x, &self.sigma)
    }

    fn gradient(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let log_x = matrix_function(x, f64::ln)?;
        Ok(&(&log_x - &self.log_sigma) + &ComplexMatrix::identity(x.n_rows()))
    }
}

fn fw_options(opts: &MeasureOptions) -> FrankWolfeOptions {
    FrankWolfeOptions {
        gap_tol_bits: opts.fw_gap_tol,
        max_iterations: opts.fw_max_iterations,
        line_search_iterations: opts.line_search_iterations,
        endpoint_margin: 1e-9,
        inner_iterations: opts.inner_iterations,
    }
}

fn into_result(out: FrankWolfeOutcome, optimizer: DensityMatrix) -> MeasureResult {
    MeasureResult {
        value: out.value_nats / LN_2,
        optimizer: Some(optimizer),
        gap: out.gap_nats / LN_2,
        iterations: out.iterations,
        trace: out.trace,
        certificate: None,
    }
}

/// Runs `f` on σ restricted to its local supports and maps the optimizer back.
fn with_local_compression(
    sigma: &DensityMatrix,
    f: impl FnOnce(&DensityMatrix) -> Result<MeasureResult>,
) -> Result<MeasureResult> {
    match LocalCompression::for_state(sigma)? {
        None => f(sigma),
        Some(c) => {
            let mut r = f(&c.compress(sigma)?)?;
            r.optimizer = r.optimizer.map(|o| c.expand(&o)).transpose()?;
            Ok(r)
        }
    }
}

/// E_M(σ) = min S(σ‖ρ) over D_σ, in bits.
pub fn e_m(sigma: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureResult> {
    if let Some(r) = trivially_zero(sigma) {
        return Ok(r);
    }
    with_local_compression(sigma, |s| {
        let fs = FeasibleSetSpec::locally_identical(s.clone());
        let oracle = LinearOracle { set: &fs, isometry: None, tol: opts.sdp };
        let start = product_of_marginals(s).into_matrix();
        let out = frank_wolfe(&DivergenceFromState(s.matrix().clone()), &oracle, start, &fw_options(opts))?;
        let rho = DensityMatrix::new(out.x.clone(), s.dims())?;
        Ok(into_result(out, rho))
    })
}

/// E_R(σ) = min S(σ‖ρ) over all PPT states, in bits.
pub fn e_r(sigma: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureResult> {
    if let Some(r) = trivially_zero(sigma) {
        return Ok(r);
    }
    let fs = FeasibleSetSpec::unrestricted(sigma.clone());
    let oracle = LinearOracle { set: &fs, isometry: None, tol: opts.sdp };
    let start = maximally_mixed(sigma.dims()).into_matrix();
    let out = frank_wolfe(&DivergenceFromState(sigma.matrix().clone()), &oracle, start, &fw_options(opts))?;
    let rho = DensityMatrix::new(out.x.clone(), sigma.dims())?;
    Ok(into_result(out, rho))
}

/// E_A(σ) = min S(ρ‖σ) over D_σ, in bits; `+∞` when no member of D_σ fits
/// inside supp(σ).
///
/// For full-rank σ the support test is vacuous and skipped. Otherwise the
/// support SDP decides finiteness, and Frank–Wolfe runs in coordinates of
/// supp(σ) starting from the oracle's answer to a zero objective.
pub fn e_a(sigma: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureResult> {
    if let Some(r) = trivially_zero(sigma) {
        return Ok(r);
    }
    with_local_compression(sigma, |s| {
        let eig = eig_hermitian(s.matrix())?;
        let d = s.dim();
        let fs = FeasibleSetSpec::locally_identical(s.clone());
        if eig.rank(SUPPORT_THRESHOLD) == d {
            let objective = DivergenceToState {
                sigma: s.matrix().clone(),
                log_sigma: eig.apply(f64::ln)?,
            };
            let oracle = LinearOracle { set: &fs, isometry: None, tol: opts.sdp };
            let start = product_of_marginals(s).into_matrix();
            let out = frank_wolfe(&objective, &oracle, start, &fw_options(opts))?;
            let rho = DensityMatrix::new(out.x.clone(), s.dims())?;
            return Ok(into_result(out, rho));
        }

        let support = solve(&build_support_problem(s), &opts.sdp)?;
        let obstruction = support.primal_objective;
        if obstruction > opts.infinity_threshold {
            return Ok(MeasureResult {
                value: f64::INFINITY,
                optimizer: None,
                gap: 0.0,
                iterations: support.iterations,
                trace: Vec::new(),
                certificate: Some(obstruction),
            });
        }
        let v = eig.support_isometry(SUPPORT_THRESHOLD);
        let reduced_sigma = s.matrix().clone().conjugate_by(&v.adjoint()).hermitian_part();
        let objective = DivergenceToState {
            log_sigma: matrix_function(&reduced_sigma, f64::ln)?,
            sigma: reduced_sigma,
        };
        let oracle = LinearOracle { set: &fs, isometry: Some(&v), tol: opts.sdp };
        // an obstruction just under the threshold can leave this set empty
        let start = match oracle.minimize(&ComplexMatrix::zeros(v.n_cols(), v.n_cols())) {
            Ok(vertex) => vertex.vertex,
            Err(e) => {
                return Err(Error::FrankWolfe(format!(
                    "no feasible start on supp(σ) although the support obstruction {obstruction:.3e} is below {:e}: {e}",
                    opts.infinity_threshold
                )))
            }
        };
        let out = frank_wolfe(&objective, &oracle, start, &fw_options(opts))?;
        let rho = DensityMatrix::new(out.x.conjugate_by(&v), s.dims())?;
        let mut r = into_result(out, rho);
        r.certificate = Some(obstruction);
        Ok(r)
    })
}
