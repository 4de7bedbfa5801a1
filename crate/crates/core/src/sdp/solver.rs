//! Infeasible-start path-following with the HKM search direction and a
//! Mehrotra predictor-corrector step.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use super::problem::{SdpProblem, SparseHermitian};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpTolerances {
    /// Relative duality gap: |p − d| ≤ gap_tol·(1 + |p|).
    pub gap_tol: f64,
    /// Relative primal and dual infeasibility.
    pub feas_tol: f64,
    pub max_iterations: usize,
    /// Fraction-to-boundary factor.
    pub step_fraction: f64,
}

impl Default for SdpTolerances {
    fn default() -> Self {
        Self { gap_tol: 1e-8, feas_tol: 1e-9, max_iterations: 200, step_fraction: 0.98 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    IterationLimit,
    NumericalFailure,
}

/// Primal-dual certificate.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub primal: Vec<ComplexMatrix>,
    pub dual: Vec<f64>,
    /// Dual slack blocks Z = C − Σ y_k A_k.
    pub slack: Vec<ComplexMatrix>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// |primal − dual| objective.
    pub gap: f64,
    /// Σ_b ⟨X_b, Z_b⟩.
    pub complementarity: f64,
    /// ‖b − A(X)‖₂ / (1 + ‖b‖₂).
    pub primal_residual: f64,
    /// ‖C − A*(y) − Z‖_F / (1 + ‖C‖_F).
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

impl SdpSolution {
    pub fn objective(&self) -> f64 {
        self.primal_objective
    }

    /// Relative gap as used by the stopping rule.
    pub fn relative_gap(&self) -> f64 {
        self.gap / (1.0 + self.primal_objective.abs())
    }

    pub fn meets(&self, tol: &SdpTolerances) -> bool {
        self.relative_gap() <= tol.gap_tol
            && self.complementarity / (1.0 + self.primal_objective.abs()) <= tol.gap_tol
            && self.primal_residual <= tol.feas_tol
            && self.dual_residual <= tol.feas_tol
    }
}

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error(
        "no convergence within {} iterations (rel. gap {:.3e}, residuals {:.3e}/{:.3e})",
        .0.iterations, .0.relative_gap(), .0.primal_residual, .0.dual_residual
    )]
    IterationLimit(Box<SdpSolution>),

    #[error("numerical failure at iteration {iteration}: {reason} (condition estimate {condition:.3e})")]
    NumericalFailure { reason: String, condition: f64, iteration: usize, last: Option<Box<SdpSolution>> },
}

impl SdpError {
    /// The last iterate, when one exists.
    pub fn last_iterate(&self) -> Option<&SdpSolution> {
        match self {
            SdpError::IterationLimit(s) => Some(s),
            SdpError::NumericalFailure { last, .. } => last.as_deref(),
            SdpError::InvalidProblem(_) => None,
        }
    }
}

type CMat = DMatrix<Complex64>;

/// Relative size below which a Gram pivot counts as zero.
const GRAM_PIVOT_TOL: f64 = 1e-12;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.transpose().iter()).map(|(x, y)| x.re * y.re - x.im * y.im).sum()
}

fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5)
}

fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

struct Workspace<'a> {
    blocks: &'a [usize],
    /// Per block: (constraint index, coefficient).
    by_block: Vec<Vec<(usize, &'a SparseHermitian)>>,
    dense: Vec<Vec<Option<CMat>>>,
    c: Vec<CMat>,
    b: DVector<f64>,
    m: usize,
}

impl<'a> Workspace<'a> {
    fn new(p: &'a SdpProblem) -> Self {
        let mut by_block: Vec<Vec<(usize, &SparseHermitian)>> = vec![Vec::new(); p.blocks.len()];
        for (k, row) in p.constraints.iter().enumerate() {
            for (b, a) in &row.terms {
                by_block[*b].push((k, a));
            }
        }
        // dense copies of coefficient matrices that are not really sparse
        let dense = by_block
            .iter()
            .zip(&p.blocks)
            .map(|(list, &n)| list.iter().map(|(_, a)| (a.nnz() > 2 * n).then(|| a.to_dense())).collect())
            .collect();
        let c = p.objective.iter().map(|m| m.as_nalgebra().clone()).collect();
        let b = DVector::from_iterator(p.constraints.len(), p.constraints.iter().map(|r| r.rhs));
        Self { blocks: &p.blocks, by_block, dense, c, b, m: p.constraints.len() }
    }

    /// A(X).
    fn apply(&self, x: &[CMat]) -> DVector<f64> {
        let mut out = DVector::zeros(self.m);
        for (bk, list) in self.by_block.iter().enumerate() {
            for (k, a) in list {
                out[*k] += a.inner(&x[bk]);
            }
        }
        out
    }

    /// A*(y).
    fn adjoint(&self, y: &DVector<f64>) -> Vec<CMat> {
        let mut out: Vec<CMat> = self.blocks.iter().map(|&n| CMat::zeros(n, n)).collect();
        for (bk, list) in self.by_block.iter().enumerate() {
            for (k, a) in list {
                a.add_scaled_to(&mut out[bk], y[*k]);
            }
        }
        out
    }

    /// Cholesky factor of the Gram matrix A A*, used to restore A(ΔX) = r_p
    /// exactly after an inaccurate Newton solve.
    fn gram(&self) -> Option<Cholesky<f64, nalgebra::Dyn>> {
        let mut g = DMatrix::<f64>::zeros(self.m, self.m);
        for list in &self.by_block {
            for (i, ai) in list {
                let di = ai.to_dense();
                for (j, aj) in list {
                    g[(*i, *j)] += aj.inner(&di);
                }
            }
        }
        let largest = (0..self.m).map(|i| g[(i, i)]).fold(0.0, f64::max);
        let chol = Cholesky::new(g)?;
        // a pivot at roundoff level means a dependent row slipped through
        let l = chol.l_dirty();
        (0..self.m).all(|i| l[(i, i)] * l[(i, i)] > GRAM_PIVOT_TOL * largest).then_some(chol)
    }

    /// M_ij = Σ_b Re tr[A_ib X_b A_jb W_b].
    fn schur(&self, x: &[CMat], w: &[CMat]) -> DMatrix<f64> {
        let mut m = DMatrix::<f64>::zeros(self.m, self.m);
        for (bk, list) in self.by_block.iter().enumerate() {
            let n = self.blocks[bk];
            let (xb, wb) = (&x[bk], &w[bk]);
            for (jj, (j, aj)) in list.iter().enumerate() {
                let g = match &self.dense[bk][jj] {
                    Some(d) => xb * d * wb,
                    None => {
                        let mut g = CMat::zeros(n, n);
                        for &(p, q, a) in &aj.entries {
                            for r in 0..n {
                                let xa = xb[(r, p)] * a;
                                if xa == c(0.0) {
                                    continue;
                                }
                                for s in 0..n {
                                    g[(r, s)] += xa * wb[(q, s)];
                                }
                            }
                        }
                        g
                    }
                };
                for (i, ai) in list {
                    m[(*i, *j)] += ai.inner(&g);
                }
            }
        }
        let mt = m.transpose();
        (m + mt) * 0.5
    }
}

/// Largest α with X + αΔX ⪰ 0 (∞ if unbounded).
fn max_step(x: &CMat, dx: &CMat) -> Option<f64> {
    let chol = Cholesky::new(x.clone())?;
    let l = chol.l();
    let w = l.solve_lower_triangular(dx)?;
    let v = l.solve_lower_triangular(&w.adjoint())?;
    let h = hermitize(&v);
    let lmin = h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    Some(if lmin >= 0.0 { f64::INFINITY } else { -1.0 / lmin })
}

fn factor_schur(m: &DMatrix<f64>) -> Option<(Cholesky<f64, nalgebra::Dyn>, f64)> {
    let scale = (0..m.nrows()).map(|i| m[(i, i)]).fold(0.0, f64::max).max(1e-300);
    let mut reg = 0.0;
    for _ in 0..6 {
        let mut mm = m.clone();
        if reg > 0.0 {
            for i in 0..mm.nrows() {
                mm[(i, i)] += reg;
            }
        }
        if let Some(ch) = Cholesky::new(mm) {
            let l = ch.l();
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for i in 0..l.nrows() {
                let d = l[(i, i)] * l[(i, i)];
                lo = lo.min(d);
                hi = hi.max(d);
            }
            return Some((ch, hi / lo.max(1e-300)));
        }
        reg = if reg == 0.0 { 1e-14 * scale } else { reg * 100.0 };
    }
    None
}

struct Iterate {
    x: Vec<CMat>,
    z: Vec<CMat>,
    y: DVector<f64>,
}

fn snapshot(ws: &Workspace<'_>, it: &Iterate, iterations: usize, status: SolveStatus) -> SdpSolution {
    let pobj: f64 = ws.c.iter().zip(&it.x).map(|(c, x)| inner(c, x)).sum();
    let dobj = ws.b.dot(&it.y);
    let ax = ws.apply(&it.x);
    let rp = (&ws.b - ax).norm() / (1.0 + ws.b.norm());
    let aty = ws.adjoint(&it.y);
    let cnorm = ws.c.iter().map(|m| fro(m).powi(2)).sum::<f64>().sqrt();
    let rd = ws
        .c
        .iter()
        .zip(&aty)
        .zip(&it.z)
        .map(|((c, a), z)| fro(&(c - a - z)).powi(2))
        .sum::<f64>()
        .sqrt()
        / (1.0 + cnorm);
    let compl: f64 = it.x.iter().zip(&it.z).map(|(x, z)| inner(x, z)).sum();
    SdpSolution {
        primal: it.x.iter().map(|m| ComplexMatrix::from_nalgebra(hermitize(m))).collect(),
        dual: it.y.iter().copied().collect(),
        slack: it.z.iter().map(|m| ComplexMatrix::from_nalgebra(hermitize(m))).collect(),
        primal_objective: pobj,
        dual_objective: dobj,
        gap: (pobj - dobj).abs(),
        complementarity: compl,
        primal_residual: rp,
        dual_residual: rd,
        iterations,
        status,
    }
}

fn initial_point(ws: &Workspace<'_>, p: &SdpProblem) -> Iterate {
    let mut x = Vec::new();
    let mut z = Vec::new();
    for (bk, &n) in p.blocks.iter().enumerate() {
        let nf = n as f64;
        let mut xi: f64 = 10f64.max(nf.sqrt());
        let mut amax: f64 = 0.0;
        for (k, a) in &ws.by_block[bk] {
            let an = a.frobenius_norm();
            amax = amax.max(an);
            xi = xi.max(nf * (1.0 + ws.b[*k].abs()) / (1.0 + an));
        }
        let eta = 10f64.max(nf.sqrt()).max((1.0 + amax.max(fro(&ws.c[bk]))) / nf.sqrt());
        x.push(CMat::identity(n, n) * c(xi));
        z.push(CMat::identity(n, n) * c(eta));
    }
    Iterate { x, z, y: DVector::zeros(ws.m) }
}

/// Solves the problem to the given tolerances.
pub fn solve(p: &SdpProblem, tol: &SdpTolerances) -> Result<SdpSolution, SdpError> {
    p.validate()?;
    let ws = Workspace::new(p);
    let n_total: f64 = p.blocks.iter().sum::<usize>() as f64;
    let mut it = initial_point(&ws, p);
    let gram = ws.gram().ok_or_else(|| SdpError::InvalidProblem("constraints are linearly dependent".into()))?;
    let mut stalls = 0;

    for iter in 0..=tol.max_iterations {
        let snap = snapshot(&ws, &it, iter, SolveStatus::Optimal);
        if snap.meets(tol) {
            return Ok(snap);
        }
        if iter == tol.max_iterations {
            return Err(SdpError::IterationLimit(Box::new(SdpSolution { status: SolveStatus::IterationLimit, ..snap })));
        }
        let fail = |reason: &str, condition: f64, snap: SdpSolution| SdpError::NumericalFailure {
            reason: reason.to_string(),
            condition,
            iteration: iter,
            last: Some(Box::new(SdpSolution { status: SolveStatus::NumericalFailure, ..snap })),
        };
        if it.x.iter().any(|m| fro(m) > 1e14) || it.z.iter().any(|m| fro(m) > 1e14) {
            return Err(fail("iterates diverging (problem may be infeasible)", f64::NAN, snap));
        }

        // residuals
        let rp = &ws.b - ws.apply(&it.x);
        let aty = ws.adjoint(&it.y);
        let rd: Vec<CMat> = ws.c.iter().zip(&aty).zip(&it.z).map(|((c, a), z)| c - a - z).collect();
        let mu: f64 = it.x.iter().zip(&it.z).map(|(x, z)| inner(x, z)).sum::<f64>() / n_total;

        let mut w = Vec::with_capacity(it.z.len());
        for z in &it.z {
            match Cholesky::new(hermitize(z)) {
                Some(ch) => w.push(hermitize(&ch.inverse())),
                None => return Err(fail("dual slack lost definiteness", f64::NAN, snap)),
            }
        }
        let m = ws.schur(&it.x, &w);
        let Some((chol, cond)) = factor_schur(&m) else {
            return Err(fail("Schur complement not positive definite", f64::INFINITY, snap));
        };

        // rhs for a given complementarity residual Rc: rp − A(Rc W − X Rd W)
        let direction = |rc: &[CMat]| -> (Vec<CMat>, DVector<f64>, Vec<CMat>) {
            let t: Vec<CMat> = (0..rc.len()).map(|b| &rc[b] * &w[b] - &it.x[b] * &rd[b] * &w[b]).collect();
            let rhs = &rp - ws.apply(&t);
            let mut dy = chol.solve(&rhs);
            // refinement against the unregularised matrix; M is often badly conditioned near the optimum
            for _ in 0..2 {
                let r = &rhs - &m * &dy;
                dy += chol.solve(&r);
            }
            let atdy = ws.adjoint(&dy);
            let dz: Vec<CMat> = rd.iter().zip(&atdy).map(|(r, a)| r - a).collect();
            let mut dx: Vec<CMat> = (0..rc.len()).map(|b| hermitize(&(&rc[b] * &w[b] - &it.x[b] * &dz[b] * &w[b]))).collect();
            // least-norm correction so that A(ΔX) = r_p holds to working precision
            let fix = ws.adjoint(&gram.solve(&(&rp - ws.apply(&dx))));
            for (d, f) in dx.iter_mut().zip(&fix) {
                *d += f;
            }
            (dx, dy, dz)
        };
        let steps = |dx: &[CMat], dz: &[CMat]| -> Option<(f64, f64)> {
            let mut ap = f64::INFINITY;
            let mut ad = f64::INFINITY;
            for b in 0..dx.len() {
                ap = ap.min(max_step(&it.x[b], &dx[b])?);
                ad = ad.min(max_step(&it.z[b], &dz[b])?);
            }
            Some((ap, ad))
        };

        // predictor
        let rc_aff: Vec<CMat> = it.x.iter().zip(&it.z).map(|(x, z)| -(x * z)).collect();
        let (dx_a, _, dz_a) = direction(&rc_aff);
        let Some((ap_a, ad_a)) = steps(&dx_a, &dz_a) else {
            return Err(fail("step-length factorisation failed", cond, snap));
        };
        let (ap_a, ad_a) = (ap_a.min(1.0), ad_a.min(1.0));
        let mu_aff: f64 = (0..dx_a.len())
            .map(|b| inner(&(&it.x[b] + &dx_a[b] * c(ap_a)), &(&it.z[b] + &dz_a[b] * c(ad_a))))
            .sum::<f64>()
            / n_total;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let rc: Vec<CMat> = (0..dx_a.len())
            .map(|b| {
                let n = p.blocks[b];
                CMat::identity(n, n) * c(sigma * mu) - &it.x[b] * &it.z[b] - &dx_a[b] * &dz_a[b]
            })
            .collect();
        let (dx, dy, dz) = direction(&rc);
        let Some((ap, ad)) = steps(&dx, &dz) else {
            return Err(fail("step-length factorisation failed", cond, snap));
        };
        // back off further from the boundary after a poor predictor
        let gamma = tol.step_fraction.min(0.9 + 0.09 * ap_a.min(ad_a));
        let ap = (gamma * ap).min(1.0);
        let ad = (gamma * ad).min(1.0);

        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                return Err(fail("step lengths collapsed", cond, snap));
            }
        } else {
            stalls = 0;
        }

        for b in 0..it.x.len() {
            it.x[b] = hermitize(&(&it.x[b] + &dx[b] * c(ap)));
            it.z[b] = hermitize(&(&it.z[b] + &dz[b] * c(ad)));
        }
        it.y += dy * ad;
    }
    unreachable!("loop returns on the final iteration")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::{ConstraintRow, SparseHermitian};

    fn trace_row(n: usize, rhs: f64) -> ConstraintRow {
        let entries = (0..n).map(|i| (i, i, c(1.0))).collect();
        ConstraintRow { terms: vec![(0, SparseHermitian::new(n, entries))], rhs }
    }

    #[test]
    fn eigenvalue_problem() {
        let mut p = SdpProblem::with_blocks(vec![2]);
        p.objective[0] = ComplexMatrix::from_diagonal(&[1.0, 2.0]);
        p.constraints.push(trace_row(2, 1.0));
        let s = solve(&p, &SdpTolerances::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective() - 1.0).abs() < 1e-8);
        assert!((s.primal[0].clone() - ComplexMatrix::from_diagonal(&[1.0, 0.0])).max_abs() < 1e-7);
        assert!(s.primal_residual <= 1e-9 && s.dual_residual <= 1e-9);
    }

    #[test]
    fn complex_objective_min_eigenvalue() {
        // min eigenvalue of [[1, i], [-i, 1]] is 0
        let mut p = SdpProblem::with_blocks(vec![2]);
        p.objective[0] = ComplexMatrix::from_row_major(2, 2, &[c(1.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), c(1.0)]).unwrap();
        p.constraints.push(trace_row(2, 1.0));
        let s = solve(&p, &SdpTolerances::default()).unwrap();
        assert!(s.objective().abs() < 1e-8, "{}", s.objective());
    }

    #[test]
    fn invalid_problem_rejected() {
        let mut p = SdpProblem::with_blocks(vec![2]);
        p.constraints.push(ConstraintRow { terms: vec![(3, SparseHermitian::new(2, vec![]))], rhs: 1.0 });
        assert!(matches!(solve(&p, &SdpTolerances::default()), Err(SdpError::InvalidProblem(_))));
        let mut q = SdpProblem::with_blocks(vec![2]);
        q.objective[0].set(0, 1, c(1.0));
        assert!(matches!(solve(&q, &SdpTolerances::default()), Err(SdpError::InvalidProblem(_))));
    }

    #[test]
    fn infeasible_problem_fails_loudly() {
        // tr X = -1 with X ⪰ 0
        let mut p = SdpProblem::with_blocks(vec![2]);
        p.objective[0] = ComplexMatrix::identity(2);
        p.constraints.push(trace_row(2, -1.0));
        assert!(solve(&p, &SdpTolerances::default()).is_err());
    }

    #[test]
    fn iteration_limit_reports_last_iterate() {
        let mut p = SdpProblem::with_blocks(vec![3]);
        p.objective[0] = ComplexMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        p.constraints.push(trace_row(3, 1.0));
        let tol = SdpTolerances { max_iterations: 2, ..Default::default() };
        match solve(&p, &tol) {
            Err(e @ SdpError::IterationLimit(_)) => {
                let last = e.last_iterate().unwrap();
                assert_eq!(last.status, SolveStatus::IterationLimit);
                assert_eq!(last.iterations, 2);
            }
            other => panic!("expected iteration limit, got {other:?}"),
        }
    }
}
