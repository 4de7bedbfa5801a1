//! Seeded random states, unitaries and Kraus families.
//!
//! States are reductions of Haar-random pure states on an enlarged space; the
//! `rank` parameter is the environment dimension. Unitaries come from the QR
//! decomposition of a complex Ginibre matrix with the phase correction that
//! makes the distribution Haar.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, LocalInstrument};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n_rows: usize, n_cols: usize) -> ComplexMatrix {
    let mut entries = Vec::with_capacity(n_rows * n_cols);
    for _ in 0..n_rows * n_cols {
        entries.push(gaussian(rng));
    }
    ComplexMatrix::from_nalgebra(DMatrix::from_row_slice(n_rows, n_cols, &entries))
}

/// Haar-random unitary of size `n`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n).into_nalgebra();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let col = q.column(k) * ph;
        q.set_column(k, &col);
    }
    ComplexMatrix::from_nalgebra(q)
}

/// Random Hermitian matrix (GUE-like, unnormalised).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n, n).hermitian_part()
}

/// Haar-induced mixed state of the given rank (environment dimension).
pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize), rank: usize) -> Result<DensityMatrix> {
    let d = dims.0 * dims.1;
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!("rank {rank} for dimension {d}")));
    }
    // columns of G are the environment-conditioned pure components
    let g = ginibre(rng, d, rank);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr), dims)
}

pub fn random_density(dims: (usize, usize), rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(&mut rng_from_seed(seed), dims, rank)
}

/// `count` Kraus operators d_in → d_out obtained by slicing a Haar isometry.
pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, d_in: usize, d_out: usize, count: usize) -> Result<Vec<ComplexMatrix>> {
    if d_in == 0 || d_out == 0 || count == 0 || count * d_out < d_in {
        return Err(Error::InvalidParameter(format!("{count} Kraus operators {d_in} -> {d_out}")));
    }
    let big = count * d_out;
    let u = random_unitary(rng, big);
    let ops = (0..count)
        .map(|i| ComplexMatrix::from_fn(d_out, d_in, |r, c| u.get(i * d_out + r, c)))
        .collect();
    Ok(ops)
}

/// Local instrument with `outcomes` Kraus operators on a `da`-dimensional A.
pub fn random_instrument_with<R: Rng + ?Sized>(rng: &mut R, da: usize, outcomes: usize) -> Result<LocalInstrument> {
    LocalInstrument::new(random_kraus(rng, da, da, outcomes)?)
}

pub fn random_instrument(da: usize, outcomes: usize, seed: u64) -> Result<LocalInstrument> {
    random_instrument_with(&mut rng_from_seed(seed), da, outcomes)
}
