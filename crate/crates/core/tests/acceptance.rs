//! Acceptance run: one PASS/FAIL line per criterion, each against its
//! runtime budget. Exits nonzero if anything fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use entangle_core::hypothesis::{helstrom_test, neyman_pearson, stein_table};
use entangle_core::linalg::kron;
use entangle_core::linalg::tensor::regroup_tensor_product;
use entangle_core::measures::{e_a, e_m, e_r, e_t, Measure, MeasureOptions};
use entangle_core::sdp::{build_fixed_trace_norm_problem, build_lmo_problem, solve, SdpSolution, SdpTolerances};
use entangle_core::states::random::{
    ginibre, random_density_with, random_hermitian, random_kraus, rng_from_seed,
};
use entangle_core::states::{bell_state, example4_state, DensityMatrix, FeasibleSetSpec};
use entangle_core::suites::{monotonicity_suite, random_npt_state};
use entangle_core::ComplexMatrix;
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn run_parallel<T: Send, F: Fn(usize) -> T + Sync>(count: usize, f: F) -> Vec<T> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..count).map(|i| scope.spawn({ let f = &f; move || f(i) })).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// min ‖φ⁺ − ρ_F‖₁ over the PPT members of the isotropic family with
/// maximally mixed marginals, by grid search.
fn isotropic_reduction() -> f64 {
    let phi = bell_state().matrix().clone();
    let mut best = f64::INFINITY;
    for k in 0..=2000 {
        let f = k as f64 / 2000.0;
        let rho = phi.scale(f) + (ComplexMatrix::identity(4) - phi.clone()).scale((1.0 - f) / 3.0);
        if min_eigenvalue(&transpose_b(&rho, 2, 2)) >= -1e-12 {
            best = best.min(svd_trace_norm(&(&phi - &rho)));
        }
    }
    best
}

fn bell_anchors() -> Outcome {
    let opts = MeasureOptions::default();
    let bell = bell_state();
    let er = e_r(&bell, &opts).map_err(|e| e.to_string())?;
    let em = e_m(&bell, &opts).map_err(|e| e.to_string())?;
    let et = e_t(&bell, &opts).map_err(|e| e.to_string())?;
    let ea = e_a(&bell, &opts).map_err(|e| e.to_string())?;
    let reduction = isotropic_reduction();
    let cert = ea.certificate.unwrap_or(0.0);
    let ok = (er.value - 1.0).abs() <= 2e-4
        && er.gap <= 2e-4
        && (em.value - 1.0).abs() <= 2e-4
        && em.gap <= 2e-4
        && (et.value - 1.0).abs() <= 1e-7
        && (reduction - 1.0).abs() <= 1e-7
        && ea.value == f64::INFINITY
        && cert > 1e-7;
    check(
        ok,
        format!(
            "E_R {:.8} (gap {:.1e}), E_M {:.8} (gap {:.1e}), E_T {:.10} vs reduction {:.10}, E_A {} (certificate {:.3e})",
            er.value, er.gap, em.value, em.gap, et.value, reduction, ea.value, cert
        ),
    )
}

/// Smallest p with a negative partial transpose, by bisection on the
/// index-level transpose.
fn ppt_threshold() -> f64 {
    let pt_min = |p: f64| min_eigenvalue(&transpose_b(example4_state(p).unwrap().matrix(), 2, 2));
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pt_min(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn family_sweep() -> Outcome {
    let opts = MeasureOptions::default();
    let p_star = ppt_threshold();
    let rows = run_parallel(51, |i| {
        let p = i as f64 / 50.0;
        let s = example4_state(p)?;
        Ok::<_, entangle_core::Error>((p, e_r(&s, &opts)?, e_m(&s, &opts)?))
    });
    let mut max_diff = f64::NEG_INFINITY;
    let mut at = 0.0;
    let mut failures = Vec::new();
    for row in rows {
        let (p, r, m) = row.map_err(|e| e.to_string())?;
        let gaps = r.gap + m.gap;
        let diff = m.value - r.value;
        if diff < -gaps {
            failures.push(format!("(a) p={p}: diff {diff:e}"));
        }
        if p <= p_star && (r.value > gaps || m.value > gaps) {
            failures.push(format!("(d) p={p}: E_R {:e} E_M {:e}", r.value, m.value));
        }
        if diff > max_diff {
            max_diff = diff;
            at = p;
        }
    }
    if max_diff <= 1e-4 {
        failures.push(format!("(b) max difference {max_diff:e}"));
    }
    if max_diff >= 0.05 {
        failures.push(format!("(c) max difference {max_diff:e}"));
    }
    let detail = format!("p* = {p_star:.10}, max E_M − E_R = {max_diff:.6e} bits at p = {at:.2}");
    check(failures.is_empty(), if failures.is_empty() { detail } else { format!("{detail}; {}", failures.join("; ")) })
}

fn strong_additivity() -> Outcome {
    let opts = MeasureOptions::default();
    let mut rng = rng_from_seed(300);
    let states: Vec<DensityMatrix> = (0..5).map(|_| random_npt_state(&mut rng).unwrap()).collect();
    let results = run_parallel(states.len(), |i| {
        let s = &states[i];
        let single = e_a(s, &opts)?;
        // (A₁B₁)(A₂B₂) regrouped to the cut A₁A₂ | B₁B₂
        let joint = regroup_tensor_product(&kron(s.matrix(), s.matrix()), (2, 2), (2, 2))?;
        let double = e_a(&DensityMatrix::new(joint, (4, 4))?, &opts)?;
        Ok::<_, entangle_core::Error>((single, double))
    });
    let mut worst = f64::INFINITY;
    let mut lines = Vec::new();
    for r in results {
        let (single, double) = r.map_err(|e| e.to_string())?;
        let slack = 1e-3 + double.gap + 2.0 * single.gap;
        let dev = (double.value - 2.0 * single.value).abs();
        worst = worst.min(slack - dev);
        lines.push(format!("{:.6}/{:.6}", double.value, 2.0 * single.value));
    }
    check(worst >= 0.0, format!("E_A(σ⊗σ)/2E_A(σ): {}; worst margin {worst:.3e}", lines.join(" ")))
}

fn monotonicity() -> Outcome {
    let opts = MeasureOptions::default();
    let reports = run_parallel(2, |i| match i {
        0 => monotonicity_suite(Measure::Et, 400, 100, &opts),
        _ => monotonicity_suite(Measure::Em, 400, 20, &opts),
    });
    let mut ok = true;
    let mut parts = Vec::new();
    for r in reports {
        let r = r.map_err(|e| e.to_string())?;
        ok &= r.cases > 0 && r.violations == 0;
        parts.push(format!("{}: {} cases, {} violations, worst margin {:.3e}", r.name, r.cases, r.violations, r.worst_margin));
    }
    check(ok, parts.join("; "))
}

fn hermitian_abs(m: &ComplexMatrix) -> ComplexMatrix {
    hermitian_function(m, f64::abs)
}

fn sandwich() -> Outcome {
    let mut rng = rng_from_seed(500);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(1..=8);
        let a = ginibre(&mut rng, n, n);
        let b = random_hermitian(&mut rng, n);
        let lhs = svd_trace_norm(&(&(&a * &b) * &a.adjoint()));
        let rhs = svd_trace_norm(&(&(&a.adjoint() * &a) * &hermitian_abs(&b)));
        let scale = rhs.max(1.0);
        let margin = rhs + 1e-10 * scale - lhs;
        if margin < 0.0 {
            violations += 1;
        }
        worst = worst.min(margin / scale);
    }
    check(violations == 0, format!("1000 pairs, {violations} violations, worst relative margin {worst:.3e}"))
}

fn contraction() -> Outcome {
    let mut rng = rng_from_seed(600);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let d_in: usize = rng.random_range(2..=4);
        let d_out = rng.random_range(1..=4);
        let min_ops = d_in.div_ceil(d_out);
        let count = rng.random_range(min_ops..=min_ops + 2);
        let ops = random_kraus(&mut rng, d_in, d_out, count).map_err(|e| e.to_string())?;
        let completeness = ops.iter().fold(ComplexMatrix::zeros(d_in, d_in), |acc, k| acc + &k.adjoint() * k);
        if max_abs_diff(&completeness, &ComplexMatrix::identity(d_in)) > 1e-12 {
            return Err("random channel is not trace preserving".into());
        }
        let (rs, rr) = (rng.random_range(1..=d_in), rng.random_range(1..=d_in));
        let s = random_density_with(&mut rng, (d_in, 1), rs).unwrap();
        let r = random_density_with(&mut rng, (d_in, 1), rr).unwrap();
        let apply = |m: &ComplexMatrix| ops.iter().fold(ComplexMatrix::zeros(d_out, d_out), |acc, k| acc + &(k * m) * &k.adjoint());
        let before = svd_trace_norm(&(s.matrix() - r.matrix()));
        let after = svd_trace_norm(&(apply(s.matrix()) - apply(r.matrix())));
        let margin = before + 1e-10 - after;
        if margin < 0.0 {
            violations += 1;
        }
        worst = worst.min(margin);
    }
    check(violations == 0, format!("200 instances, {violations} violations, worst margin {worst:.3e}"))
}

fn helstrom_bridge() -> Outcome {
    let opts = MeasureOptions::default();
    let mut rng = rng_from_seed(700);
    let states: Vec<DensityMatrix> = (0..20)
        .map(|i| {
            let dims = if i % 2 == 0 { (2, 2) } else { (2, 3) };
            let rank = rng.random_range(1..=dims.0 * dims.1);
            random_density_with(&mut rng, dims, rank).unwrap()
        })
        .collect();
    let results = run_parallel(states.len(), |i| {
        let r = e_t(&states[i], &opts)?;
        let h = helstrom_test(&states[i], r.optimizer.as_ref().unwrap())?;
        Ok::<_, entangle_core::Error>((r, h))
    });
    let mut worst = f64::INFINITY;
    for r in results {
        let (et, h) = r.map_err(|e| e.to_string())?;
        worst = worst.min(1e-6 + et.gap - (2.0 * h.advantage() - et.value).abs());
    }
    check(worst >= 0.0, format!("20 states, worst margin {worst:.3e}"))
}

fn neyman_pearson_oracle() -> Outcome {
    let qubit = |p: f64| DensityMatrix::new(ComplexMatrix::from_diagonal(&[p, 1.0 - p]), (1, 2)).unwrap();
    let pairs = [(0.7, 0.4), (0.9, 0.2), (0.95, 0.05), (0.5, 0.8), (0.3, 0.6)];
    let mut worst = 0.0f64;
    for &(a, b) in &pairs {
        for eps in [0.05, 0.1, 0.3] {
            for n in 1..=6 {
                let (beta, _) = neyman_pearson(&qubit(a), &qubit(b), n, eps).map_err(|e| e.to_string())?;
                worst = worst.max((beta - classical_beta_star(a, b, n, eps)).abs());
            }
        }
    }
    let mut rates = Vec::new();
    let mut rate_ok = true;
    for eps in [0.05, 0.1, 0.3] {
        let table = stein_table(&qubit(0.95), &qubit(0.05), eps, 6).map_err(|e| e.to_string())?;
        let rate = table.rows[5].rate;
        let rel = (rate - table.target).abs() / table.target.abs();
        rate_ok &= rel <= 0.25;
        rates.push(format!("ε={eps}: {rate:.4} vs {:.4} ({:.1}%)", table.target, 100.0 * rel));
    }
    check(
        worst <= 1e-9 && rate_ok,
        format!("max |β* − oracle| = {worst:.2e} over {} cases; n = 6 rates {}", pairs.len() * 18, rates.join(", ")),
    )
}

fn sdp_health() -> Outcome {
    let tol = SdpTolerances::default();
    let mut rng = rng_from_seed(900);
    let mut worst_gap = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut track = |sol: &SdpSolution| {
        worst_gap = worst_gap.max(sol.relative_gap());
        worst_res = worst_res.max(sol.primal_residual.max(sol.dual_residual));
    };
    for _ in 0..100 {
        let n = rng.random_range(2..=8);
        let x = random_hermitian(&mut rng, n);
        let sol = solve(&build_fixed_trace_norm_problem(&x), &tol).map_err(|e| e.to_string())?;
        track(&sol);
        let reference = svd_trace_norm(&x);
        worst_norm = worst_norm.max((sol.primal_objective - reference).abs() / (1.0 + reference));
    }
    for i in 0..100 {
        let dims = if i % 2 == 0 { (2, 2) } else { (2, 3) };
        let s = random_density_with(&mut rng, dims, dims.0 * dims.1).unwrap();
        let g = random_hermitian(&mut rng, s.dim());
        let fs = if i % 4 < 2 { FeasibleSetSpec::locally_identical(s) } else { FeasibleSetSpec::unrestricted(s) };
        let sol = solve(&build_lmo_problem(&g, &fs), &tol).map_err(|e| e.to_string())?;
        track(&sol);
    }
    check(
        worst_gap <= 1e-8 && worst_res <= 1e-9 && worst_norm <= 1e-8,
        format!("200 problems: worst relative gap {worst_gap:.2e}, residual {worst_res:.2e}, trace-norm error {worst_norm:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("Bell-state anchors", bell_anchors, 10),
        ("fixed-marginal vs PPT relative entropy sweep", family_sweep, 15 * 60),
        ("strong additivity of E_A", strong_additivity, 10 * 60),
        ("monotonicity under local instruments", monotonicity, 20 * 60),
        ("trace-norm sandwich inequality", sandwich, 30),
        ("trace-norm contraction under channels", contraction, 60),
        ("Helstrom bridge to E_T", helstrom_bridge, 5 * 60),
        ("Neyman-Pearson vs classical oracle", neyman_pearson_oracle, 2 * 60),
        ("SDP engine health", sdp_health, 2 * 60),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        let timing = format!("{:.1} s of {} s", elapsed.as_secs_f64(), budget);
        println!("{} [{}] {name} ({timing}{}): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1, if in_time { "" } else { ", over budget" });
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
