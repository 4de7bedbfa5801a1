//! # entangle-core
//!
//! Entanglement measures defined as distances from a bipartite state to the
//! set of PPT states that share its reductions, together with the numerical
//! machinery they need.
//!
//! | Measure | Definition | Units |
//! |---------|------------|-------|
//! | [`Measure::Et`] | min ‖ρ − σ‖₁ over ρ ∈ D_σ | trace norm |
//! | [`Measure::Em`] | min S(σ‖ρ) over ρ ∈ D_σ | bits |
//! | [`Measure::Ea`] | min S(ρ‖σ) over ρ ∈ D_σ | bits |
//! | [`Measure::Er`] | min S(σ‖ρ) over all PPT ρ | bits |
//!
//! D_σ is the set of PPT states whose partial traces equal those of σ.
//!
//! ## Layout
//!
//! - [`linalg`]: dense complex matrices, tensor bookkeeping, Hermitian spectral
//!   calculus, trace norm, relative entropy and its gradient.
//! - [`states`]: validated density matrices, named states, local instruments,
//!   the JSON state-file format.
//! - [`sdp`]: a small primal-dual interior-point solver for complex
//!   Hermitian semidefinite programs, and builders for the problems above.
//! - [`measures`]: the four measures (SDP for the trace norm, Frank–Wolfe with
//!   an SDP oracle for the relative entropies) and certificate-aware property
//!   checks.
//! - [`hypothesis`]: error probabilities, Helstrom and Neyman–Pearson tests,
//!   finite-n Stein tables.
//! - [`suites`]: seeded property suites shared by the CLI self-test.

#![forbid(unsafe_code)]

pub mod error;
pub mod hypothesis;
pub mod linalg;
pub mod measures;
pub mod sdp;
pub mod states;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, SpectralDecomposition, Subsystem};
pub use measures::{Measure, MeasureOptions, MeasureResult};
pub use num_complex::Complex64;
pub use states::{DensityMatrix, FeasibleSetSpec, LocalInstrument};
