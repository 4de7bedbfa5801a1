//! Frank–Wolfe over a spectrahedron with an SDP linear-minimisation oracle.
//!
//! Iterates stay in the convex hull of the start point and oracle vertices.
//! Each iteration yields the lower bound f(x) − ⟨∇f(x), x⟩ + min_v ⟨∇f(x), v⟩
//! on f*, with the minimum replaced by the oracle's dual bound when that is
//! smaller, so it holds by convexity even when the oracle is inexact. The
//! returned gap is f(x) minus the best such bound seen.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::sdp::{build_lmo_problem, build_lmo_problem_on_support, solve, SdpTolerances, RHO_BLOCK};
use crate::states::FeasibleSetSpec;

/// Convex objective on Hermitian matrices, natural-log units.
pub(crate) trait SmoothObjective {
    /// May be `+∞` off the domain.
    fn value(&self, x: &ComplexMatrix) -> Result<f64>;
    /// Errors where the gradient does not exist (e.g. singular x).
    fn gradient(&self, x: &ComplexMatrix) -> Result<ComplexMatrix>;
}

/// min ⟨G, ρ⟩ over the feasible set, optionally in compressed coordinates
/// ρ = V ρ' V†.
pub(crate) struct LinearOracle<'a> {
    pub set: &'a FeasibleSetSpec,
    pub isometry: Option<&'a ComplexMatrix>,
    pub tol: SdpTolerances,
}

pub(crate) struct OracleAnswer {
    pub vertex: ComplexMatrix,
    /// Certified lower bound on min ⟨G, ρ⟩.
    pub lower_bound: f64,
}

impl LinearOracle<'_> {
    pub fn minimize(&self, g: &ComplexMatrix) -> Result<OracleAnswer> {
        let norm = g.frobenius_norm();
        let scale = if norm > 0.0 { 1.0 / norm } else { 1.0 };
        let gs = g.scale(scale);
        let problem = match self.isometry {
            None => build_lmo_problem(&gs, self.set),
            Some(v) => build_lmo_problem_on_support(&gs, self.set, v),
        };
        let sol = solve(&problem, &self.tol)?;
        let vertex = sol.primal[RHO_BLOCK].clone();
        let at_vertex = g.real_trace_product(&vertex);
        Ok(OracleAnswer { vertex, lower_bound: at_vertex.min(sol.dual_objective / scale) })
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct FrankWolfeOptions {
    /// Stop when the gap (in bits) is at most this.
    pub gap_tol_bits: f64,
    pub max_iterations: usize,
    pub line_search_iterations: usize,
    /// Relative distance kept from a step bound where the objective is singular.
    pub endpoint_margin: f64,
    /// Pairwise steps per oracle call.
    pub inner_iterations: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct FrankWolfeOutcome {
    pub x: ComplexMatrix,
    pub value_nats: f64,
    pub gap_nats: f64,
    pub iterations: usize,
    /// (objective, gap) in bits per iteration.
    pub trace: Vec<(f64, f64)>,
}

/// Directional derivative along `d` at x + t·d; `+∞` where the gradient
/// does not exist.
fn slope(obj: &dyn SmoothObjective, x: &ComplexMatrix, d: &ComplexMatrix, t: f64) -> f64 {
    let xt = x + &d.scale(t);
    match obj.gradient(&xt) {
        Ok(g) => {
            let s = g.real_trace_product(d);
            if s.is_finite() {
                s
            } else {
                f64::INFINITY
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Exact line search on [0, t_max]: root of the directional derivative,
/// bracketed and located by Illinois regula falsi (plain bisection while an
/// end of the bracket has infinite slope). The full step is taken only where
/// the gradient exists; otherwise the search stays below
/// t_max·(1 − endpoint_margin). The returned point always has slope ≤ 0.
fn line_search(obj: &dyn SmoothObjective, x: &ComplexMatrix, d: &ComplexMatrix, t_max: f64, opts: &FrankWolfeOptions) -> f64 {
    let mut s_lo = slope(obj, x, d, 0.0);
    if !(s_lo < 0.0) {
        return 0.0;
    }
    if slope(obj, x, d, t_max) <= 0.0 {
        return t_max;
    }
    let upper = t_max * (1.0 - opts.endpoint_margin);
    let mut s_hi = slope(obj, x, d, upper);
    if s_hi <= 0.0 {
        return upper;
    }
    let scale = -s_lo * upper;
    let (mut lo, mut hi) = (0.0, upper);
    let mut last_side = 0i8;
    for _ in 0..opts.line_search_iterations {
        // remaining possible decrease is at most |s_lo|·(hi − lo)
        if -s_lo * (hi - lo) <= 1e-15 * scale {
            break;
        }
        let mid = if s_hi.is_finite() {
            let t = lo - s_lo * (hi - lo) / (s_hi - s_lo);
            t.clamp(lo + 1e-3 * (hi - lo), hi - 1e-3 * (hi - lo))
        } else {
            0.5 * (lo + hi)
        };
        let s = slope(obj, x, d, mid);
        if s <= 0.0 {
            lo = mid;
            s_lo = s;
            if last_side == -1 {
                s_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = mid;
            s_hi = s;
            if last_side == 1 {
                s_lo *= 0.5;
            }
            last_side = 1;
        }
        if s == 0.0 {
            break;
        }
    }
    lo
}

/// Convex combination of stored points; x = Σ wᵢ Aᵢ.
struct ActiveSet {
    atoms: Vec<ComplexMatrix>,
    weights: Vec<f64>,
}

impl ActiveSet {
    /// Pairwise steps (move weight from the worst atom to the best) until the
    /// gap restricted to the hull drops below `tol`. Returns the new value.
    fn reoptimize(
        &mut self,
        obj: &dyn SmoothObjective,
        x: &mut ComplexMatrix,
        mut value: f64,
        tol: f64,
        opts: &FrankWolfeOptions,
    ) -> Result<f64> {
        for _ in 0..opts.inner_iterations {
            let g = obj.gradient(x)?;
            let scores: Vec<f64> = self.atoms.iter().map(|a| g.real_trace_product(a)).collect();
            let toward = (0..scores.len()).min_by(|&i, &j| scores[i].total_cmp(&scores[j])).expect("non-empty");
            let away = (0..scores.len())
                .filter(|&i| self.weights[i] > 0.0)
                .max_by(|&i, &j| scores[i].total_cmp(&scores[j]))
                .expect("some atom carries weight");
            if scores[away] - scores[toward] <= tol {
                break;
            }
            let d = &self.atoms[toward] - &self.atoms[away];
            let t_max = self.weights[away];
            let t = line_search(obj, x, &d, t_max, opts);
            if t <= 0.0 {
                break;
            }
            let candidate = (&*x + &d.scale(t)).hermitian_part();
            let v = obj.value(&candidate)?;
            if !(v <= value) {
                break;
            }
            *x = candidate;
            value = v;
            self.weights[toward] += t;
            if t == t_max {
                self.weights[away] = 0.0;
                self.atoms.swap_remove(away);
                self.weights.swap_remove(away);
            } else {
                self.weights[away] -= t;
            }
        }
        Ok(value)
    }
}

/// Frank–Wolfe with simplicial decomposition: each oracle vertex joins an
/// active set, and the iterate is then re-optimised over the hull of that set
/// by pairwise steps that need no further oracle calls.
pub(crate) fn frank_wolfe(
    obj: &dyn SmoothObjective,
    oracle: &LinearOracle<'_>,
    start: ComplexMatrix,
    opts: &FrankWolfeOptions,
) -> Result<FrankWolfeOutcome> {
    let mut x = start;
    let mut value = obj.value(&x)?;
    if !value.is_finite() {
        return Err(Error::FrankWolfe("objective infinite at the starting point".into()));
    }
    let mut active = ActiveSet { atoms: vec![x.clone()], weights: vec![1.0] };
    let mut trace = Vec::new();
    let mut iterations = 0;
    // every f(xₖ) − gapₖ bounds f* from below; keep the best one
    let mut best_lower = f64::NEG_INFINITY;
    loop {
        let g = obj.gradient(&x)?;
        let answer = oracle.minimize(&g)?;
        let local_gap = (g.real_trace_product(&x) - answer.lower_bound).max(0.0);
        best_lower = best_lower.max(value - local_gap);
        let gap = (value - best_lower).max(0.0);
        trace.push((value / LN_2, gap / LN_2));
        if gap / LN_2 <= opts.gap_tol_bits || iterations >= opts.max_iterations {
            return Ok(FrankWolfeOutcome { x, value_nats: value, gap_nats: gap, iterations, trace });
        }
        active.atoms.push(answer.vertex);
        active.weights.push(0.0);
        value = active.reoptimize(obj, &mut x, value, 0.1 * gap, opts)?;
        iterations += 1;
    }
}
