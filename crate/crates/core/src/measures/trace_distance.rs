use super::{trivially_zero, MeasureOptions, MeasureResult};
use crate::error::Result;
use crate::sdp::{build_trace_norm_problem, solve, RHO_BLOCK};
use crate::states::{DensityMatrix, FeasibleSetSpec, LocalCompression};

/// E_T(σ) = min ‖σ − ρ‖₁ over D_σ, in trace-norm units.
///
/// States with singular marginals are first compressed onto
/// supp(σ_A) ⊗ supp(σ_B), which contains every member of D_σ.
pub fn e_t(sigma: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureResult> {
    if let Some(r) = trivially_zero(sigma) {
        return Ok(r);
    }
    let compression = LocalCompression::for_state(sigma)?;
    let work = match &compression {
        Some(c) => c.compress(sigma)?,
        None => sigma.clone(),
    };
    let fs = FeasibleSetSpec::locally_identical(work.clone());
    let sol = solve(&build_trace_norm_problem(&work, &fs), &opts.sdp)?;
    let rho = DensityMatrix::new(sol.primal[RHO_BLOCK].clone(), work.dims())?;
    let optimizer = match &compression {
        Some(c) => c.expand(&rho)?,
        None => rho,
    };
    let value = sol.primal_objective.max(0.0);
    let gap = (sol.primal_objective - sol.dual_objective).max(0.0);
    Ok(MeasureResult {
        value,
        optimizer: Some(optimizer),
        gap,
        iterations: sol.iterations,
        trace: vec![(value, gap)],
        certificate: None,
    })
}
