use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use entangle_core::hypothesis::{pure_state_divergence, stein_table};
use entangle_core::linalg::eig_hermitian;
use entangle_core::measures::{e_m, e_r, evaluate, Measure, MeasureOptions, MeasureResult, PPT_TOL};
use entangle_core::states::io::{format_f64, parse_state_json, state_to_json};
use entangle_core::states::{example4_state, is_ppt, DensityMatrix};
use entangle_core::suites::{run_all, SuiteSizes};
use entangle_core::Error;

use crate::Tolerances;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self { code: EXIT_VALIDATION, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Solver(_) | Error::FrankWolfe(_) => EXIT_SOLVER,
            _ => EXIT_VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn read_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    parse_state_json(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// Writes to `out`, or to stdout when no path was given.
fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::validation(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::validation(format!("stdout: {e}")))
        }
    }
}

pub fn describe(measure: Measure, r: &MeasureResult, opts: &MeasureOptions) -> String {
    if r.value.is_infinite() {
        let cert = r.certificate.unwrap_or(f64::NAN);
        return format!(
            "{measure} = +inf (support obstruction, certificate {cert:.4e} ≥ {:e})",
            opts.infinity_threshold
        );
    }
    format!(
        "{measure} = {:.10} {} (gap ≤ {:.1e}, {} iterations)",
        r.value,
        measure.units(),
        r.gap,
        r.iterations
    )
}

pub fn measure(state: &Path, measure: Measure, optimizer: Option<&Path>, tol: Tolerances) -> Outcome {
    let sigma = read_state(state)?;
    let opts = tol.options();
    println!("# entangle measure {} measure={measure} {}", state.display(), tol.header());
    let r = evaluate(measure, &sigma, &opts)?;
    println!("{}", describe(measure, &r, &opts));
    if let Some(path) = optimizer {
        match &r.optimizer {
            Some(rho) => emit(Some(path), &state_to_json(rho))?,
            None => eprintln!("note: no optimizer to write, the value is infinite"),
        }
    }
    Ok(())
}

pub const SWEEP_HEADER: &str = "p,e_r,e_m,diff,gap_r,gap_m,ppt";

pub fn sweep(p_min: f64, p_max: f64, steps: usize, out: Option<&Path>, tol: Tolerances) -> Outcome {
    if !(0.0..=1.0).contains(&p_min) || !(0.0..=1.0).contains(&p_max) || p_min > p_max {
        return Err(Failure::validation("need 0 ≤ p-min ≤ p-max ≤ 1"));
    }
    if steps < 2 {
        return Err(Failure::validation("need at least 2 steps"));
    }
    let opts = tol.options();
    eprintln!("# entangle sweep p-min={p_min} p-max={p_max} steps={steps} {}", tol.header());
    let grid: Vec<f64> = (0..steps)
        .map(|i| if i + 1 == steps { p_max } else { p_min + (p_max - p_min) * i as f64 / (steps - 1) as f64 })
        .collect();
    // each row is independent; collect() keeps grid order
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&p| -> Result<String, Error> {
            let rho = example4_state(p)?;
            let er = e_r(&rho, &opts)?;
            let em = e_m(&rho, &opts)?;
            Ok(format!(
                "{},{},{},{},{},{},{}\n",
                format_f64(p),
                format_f64(er.value),
                format_f64(em.value),
                format_f64(em.value - er.value),
                format_f64(er.gap),
                format_f64(em.gap),
                is_ppt(&rho, PPT_TOL)
            ))
        })
        .collect::<Result<_, _>>()?;
    let mut csv = format!("{SWEEP_HEADER}\n");
    rows.iter().for_each(|r| csv.push_str(r));
    emit(out, &csv)
}

pub const HYPOTHESIS_HEADER: &str = "n,beta_star,rate_bits,target_bits";

fn is_pure(s: &DensityMatrix) -> Result<bool, Error> {
    Ok(eig_hermitian(s.matrix())?.max_eigenvalue() >= 1.0 - 1e-10)
}

pub fn hypothesis(omega: &Path, xi: &Path, epsilon: f64, n_max: usize, out: Option<&Path>) -> Outcome {
    let w = read_state(omega)?;
    let x = read_state(xi)?;
    if w.dims() != x.dims() {
        return Err(Failure::validation(format!("dims differ: {:?} vs {:?}", w.dims(), x.dims())));
    }
    eprintln!("# entangle hypothesis epsilon={epsilon} n-max={n_max}");
    let identical = (w.matrix() - x.matrix()).max_abs() <= 1e-12;
    if is_pure(&x)? && !identical {
        let mut msg = String::from(
            "xi is pure, so the Stein limit is -inf and beta*_n vanishes once alpha may reach tr[omega xi]^n; \
             use the pure-state divergence instead:\n  n,alpha_n,beta_n",
        );
        for n in 1..=n_max {
            let (a, b) = pure_state_divergence(&w, &x, n)?;
            msg.push_str(&format!("\n  {n},{},{}", format_f64(a), format_f64(b)));
        }
        return Err(Failure::validation(msg));
    }
    let table = stein_table(&w, &x, epsilon, n_max)?;
    let mut csv = format!("{HYPOTHESIS_HEADER}\n");
    for row in &table.rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            format_f64(row.beta_star),
            format_f64(row.rate),
            format_f64(table.target)
        ));
    }
    emit(out, &csv)
}

pub fn selftest(seed: u64, scale: usize, tol: Tolerances) -> Outcome {
    if scale == 0 {
        return Err(Failure::validation("scale must be at least 1"));
    }
    let opts = tol.options();
    println!("# entangle selftest seed={seed} scale={scale} {}", tol.header());
    let reports = run_all(seed, &SuiteSizes::quick().scaled(scale), &opts)?;
    let mut violations = 0;
    for r in &reports {
        println!(
            "{:<40} {:>6} cases {:>4} violations  worst margin {:.3e}",
            r.name, r.cases, r.violations, r.worst_margin
        );
        violations += r.violations;
    }
    if violations > 0 {
        return Err(Failure { code: EXIT_VIOLATION, message: format!("{violations} property violations") });
    }
    println!("all suites passed");
    Ok(())
}
