//! Entanglement measures over the locally identical PPT set D_σ (and over all
//! PPT states for E_R), each returned with an optimality certificate.
//!
//! | measure | objective            | algorithm                   | units      |
//! |---------|----------------------|-----------------------------|------------|
//! | E_T     | ‖σ − ρ‖₁             | one SDP                     | trace norm |
//! | E_M     | S(σ‖ρ)               | Frank–Wolfe, SDP oracle     | bits       |
//! | E_R     | S(σ‖ρ), ρ PPT only   | Frank–Wolfe, SDP oracle     | bits       |
//! | E_A     | S(ρ‖σ)               | support SDP, then FW        | bits       |

mod frank_wolfe;
pub mod properties;
mod relative;
mod trace_distance;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sdp::SdpTolerances;
use crate::states::{is_ppt, DensityMatrix};

pub use properties::{verify_convexity, verify_monotonicity, ConvexityReport, MonotonicityReport};
pub use relative::{e_a, e_m, e_r};
pub use trace_distance::e_t;

/// States whose partial transpose has no eigenvalue below −PPT_TOL are
/// treated as members of their own feasible set.
pub const PPT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Et,
    Em,
    Ea,
    Er,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Et, Measure::Em, Measure::Ea, Measure::Er];

    pub fn units(self) -> &'static str {
        match self {
            Measure::Et => "trace-norm units",
            _ => "bits",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Measure::Et => "ET",
            Measure::Em => "EM",
            Measure::Ea => "EA",
            Measure::Er => "ER",
        };
        f.write_str(s)
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ET" => Ok(Measure::Et),
            "EM" => Ok(Measure::Em),
            "EA" => Ok(Measure::Ea),
            "ER" => Ok(Measure::Er),
            _ => Err(Error::InvalidParameter(format!("unknown measure {s:?} (expected ET, EM, EA or ER)"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MeasureOptions {
    pub sdp: SdpTolerances,
    /// Frank–Wolfe stops once its gap drops to this many bits.
    pub fw_gap_tol: f64,
    pub fw_max_iterations: usize,
    pub line_search_iterations: usize,
    /// Pairwise re-optimisation steps over the active set per oracle call.
    pub inner_iterations: usize,
    /// Support-SDP optimum above which E_A is declared infinite.
    pub infinity_threshold: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            sdp: SdpTolerances::default(),
            fw_gap_tol: 1e-5,
            fw_max_iterations: 500,
            line_search_iterations: 60,
            inner_iterations: 100,
            infinity_threshold: 1e-7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeasureResult {
    /// Bits for E_M, E_R, E_A; trace-norm units for E_T. May be `+∞` for E_A.
    pub value: f64,
    /// The closest feasible state found; absent when the value is infinite.
    pub optimizer: Option<DensityMatrix>,
    /// Certified bound on `value − optimum`.
    pub gap: f64,
    pub iterations: usize,
    /// Per-iteration (objective, gap) pairs.
    pub trace: Vec<(f64, f64)>,
    /// Support-SDP optimum backing an infinite E_A.
    pub certificate: Option<f64>,
}

impl MeasureResult {
    fn exact_zero(sigma: &DensityMatrix) -> Self {
        Self {
            value: 0.0,
            optimizer: Some(sigma.clone()),
            gap: 0.0,
            iterations: 0,
            trace: vec![(0.0, 0.0)],
            certificate: None,
        }
    }

    /// Lower end of the certified interval [value − gap, value].
    pub fn lower_bound(&self) -> f64 {
        if self.value.is_infinite() {
            self.value
        } else {
            (self.value - self.gap).max(0.0)
        }
    }
}

/// PPT states lie in their own D_σ, so every measure vanishes there.
fn trivially_zero(sigma: &DensityMatrix) -> Option<MeasureResult> {
    is_ppt(sigma, PPT_TOL).then(|| MeasureResult::exact_zero(sigma))
}

pub fn evaluate(measure: Measure, sigma: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureResult> {
    match measure {
        Measure::Et => e_t(sigma, opts),
        Measure::Em => e_m(sigma, opts),
        Measure::Ea => e_a(sigma, opts),
        Measure::Er => e_r(sigma, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.to_string().parse::<Measure>().unwrap(), m);
        }
        assert!("EX".parse::<Measure>().is_err());
        assert_eq!("em".parse::<Measure>().unwrap(), Measure::Em);
    }
}
