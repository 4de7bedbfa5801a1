use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::tensor::lift_a;
use crate::linalg::ComplexMatrix;

/// Selective operation on subsystem A given by Kraus operators with
/// Σ Aᵢ†Aᵢ = I.
#[derive(Debug, Clone)]
pub struct LocalInstrument {
    kraus: Vec<ComplexMatrix>,
}

/// Completeness must hold to this accuracy.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Outcomes less likely than this are dropped.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

impl LocalInstrument {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(Error::InvalidParameter("instrument needs at least one Kraus operator".into()));
        };
        let d = first.n_cols();
        if kraus.iter().any(|k| !k.is_square() || k.n_rows() != d) {
            return Err(Error::DimensionMismatch("Kraus operators must be square of equal size".into()));
        }
        let inst = Self { kraus };
        let res = inst.completeness_residual();
        if res > COMPLETENESS_TOL {
            return Err(Error::InvalidParameter(format!("completeness residual {res:e}")));
        }
        Ok(inst)
    }

    /// Trivial instrument {I}.
    pub fn identity(da: usize) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(da)] }
    }

    /// Projective measurement in the computational basis of A.
    pub fn computational_basis(da: usize) -> Self {
        let kraus = (0..da)
            .map(|k| {
                let mut d = vec![0.0; da];
                d[k] = 1.0;
                ComplexMatrix::from_diagonal(&d)
            })
            .collect();
        Self { kraus }
    }

    pub fn kraus_operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn local_dim(&self) -> usize {
        self.kraus[0].n_rows()
    }

    /// max-entry norm of Σ Aᵢ†Aᵢ − I.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.local_dim();
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, k| acc + &k.adjoint() * k);
        (sum - ComplexMatrix::identity(d)).max_abs()
    }
}

/// Outcome probabilities pᵢ = tr[(Aᵢ⊗I)σ(Aᵢ⊗I)†] and normalised
/// post-measurement states. Negligible outcomes are dropped.
pub fn apply_instrument(s: &DensityMatrix, k: &LocalInstrument) -> Result<Vec<(f64, DensityMatrix)>> {
    let (da, db) = s.dims();
    if k.local_dim() != da {
        return Err(Error::DimensionMismatch(format!(
            "instrument acts on dimension {}, subsystem A has {da}",
            k.local_dim()
        )));
    }
    let mut out = Vec::new();
    for a in k.kraus_operators() {
        let lifted = lift_a(a, db);
        let m = s.matrix().conjugate_by(&lifted);
        let p = m.trace().re;
        if p < MIN_OUTCOME_PROBABILITY {
            continue;
        }
        out.push((p, DensityMatrix::new(m.scale(1.0 / p), (da, db))?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, Subsystem};
    use crate::states::{bell_state, is_ppt, random_density};

    #[test]
    fn identity_instrument_is_trivial() {
        let s = random_density((2, 2), 4, 1).unwrap();
        let out = apply_instrument(&s, &LocalInstrument::identity(2)).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out[0].0 - 1.0).abs() < 1e-14);
        assert!((out[0].1.matrix() - s.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn measuring_bell_gives_product_outcomes() {
        let out = apply_instrument(&bell_state(), &LocalInstrument::computational_basis(2)).unwrap();
        assert_eq!(out.len(), 2);
        let expected = [ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0]), ComplexMatrix::from_diagonal(&[0.0, 0.0, 0.0, 1.0])];
        for ((p, st), e) in out.iter().zip(expected.iter()) {
            assert!((p - 0.5).abs() < 1e-14);
            assert!((st.matrix() - e).max_abs() < 1e-14);
            assert!(is_ppt(st, 0.0));
        }
    }

    #[test]
    fn probabilities_depend_only_on_a_marginal() {
        let s = random_density((2, 3), 6, 4).unwrap();
        let prod = DensityMatrix::new(kron(&s.marginal(Subsystem::A), &s.marginal(Subsystem::B)), (2, 3)).unwrap();
        let k = crate::states::random_instrument(2, 3, 8).unwrap();
        let a = apply_instrument(&s, &k).unwrap();
        let b = apply_instrument(&prod, &k).unwrap();
        for ((p, _), (q, _)) in a.iter().zip(b.iter()) {
            assert!((p - q).abs() < 1e-13);
        }
        let total: f64 = a.iter().map(|(p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_incomplete_or_mismatched() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(LocalInstrument::new(vec![half]).is_err());
        let k = LocalInstrument::identity(3);
        assert!(apply_instrument(&bell_state(), &k).is_err());
    }
}
