//! Bipartite pure source states in Schmidt form `Σᵢ λᵢ|ii⟩`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::Real;

const NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SchmidtState {
    lambda: Vec<Real>,
}

impl SchmidtState {
    /// Validates positivity and normalization. Normalization is checked
    /// exactly when every coefficient is exact.
    pub fn new(lambda: Vec<Real>) -> Result<Self> {
        if lambda.len() < 2 {
            return Err(Error::Domain(format!(
                "a source needs at least 2 Schmidt coefficients, got {}",
                lambda.len()
            )));
        }
        if let Some(bad) = lambda.iter().find(|l| l.value() <= 0.0) {
            return Err(Error::Domain(format!(
                "Schmidt coefficients must be strictly positive, got {}",
                bad.value()
            )));
        }
        let sum_sq: Real = lambda.iter().map(Real::square).sum();
        let normalized = match sum_sq.exact() {
            Some(r) => r.as_rational().is_some_and(|q| q.is_one()),
            None => (sum_sq.value() - 1.0).abs() <= NORM_TOL,
        };
        if !normalized {
            return Err(Error::NotNormalized { sum_sq: sum_sq.value() });
        }
        Ok(Self { lambda })
    }

    /// `λ₀|00⟩ + λ₁|11⟩` from the squared weight `λ₀²`.
    pub fn qubit_from_square(lambda0_sq: &BigRational) -> Result<Self> {
        if !lambda0_sq.is_positive() || *lambda0_sq >= BigRational::one() {
            return Err(Error::Domain(format!("lambda0^2 must lie in (0,1), got {lambda0_sq}")));
        }
        let lambda1_sq = BigRational::one() - lambda0_sq;
        Self::new(vec![Real::sqrt_rational(lambda0_sq), Real::sqrt_rational(&lambda1_sq)])
    }

    /// `λ₀|00⟩ + λ₁|11⟩` with `λ₁ = √(1−λ₀²)`.
    pub fn qubit(lambda0: Real) -> Result<Self> {
        let x = lambda0.value();
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain(format!("lambda0 must lie in (0,1), got {x}")));
        }
        let lambda1 = (Real::one() - lambda0.square())
            .sqrt()
            .ok_or_else(|| Error::Domain("lambda0 too large".into()))?;
        Self::new(vec![lambda0, lambda1])
    }

    /// `(1/√d) Σᵢ |ii⟩`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {d}")));
        }
        let weight = BigRational::new(BigInt::one(), BigInt::from(d));
        Self::new(vec![Real::sqrt_rational(&weight); d])
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Real] {
        &self.lambda
    }

    /// Squared coefficients as exact rationals, if all are available.
    pub fn weights_exact(&self) -> Option<Vec<BigRational>> {
        self.lambda.iter().map(|l| l.square().to_rational()).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.lambda.iter().map(|l| l.square().value()).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.lambda.iter().all(Real::is_exact)
    }

    pub fn to_float(&self) -> Self {
        Self { lambda: self.lambda.iter().map(Real::to_float).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    #[test]
    fn maximally_entangled_weights() {
        let s = SchmidtState::maximally_entangled(2).unwrap();
        assert_eq!(s.weights_exact().unwrap(), vec![rational(1, 2); 2]);
        assert!((s.lambda()[0].value() - 0.5f64.sqrt()).abs() < 1e-15);
        let s = SchmidtState::maximally_entangled(3).unwrap();
        assert_eq!(s.weights_exact().unwrap(), vec![rational(1, 3); 3]);
        assert!(SchmidtState::maximally_entangled(1).is_err());
    }

    #[test]
    fn rejects_bad_coefficients() {
        assert!(SchmidtState::new(vec![Real::one(), Real::zero()]).is_err());
        assert!(matches!(
            SchmidtState::new(vec![Real::ratio(1, 2), Real::ratio(1, 2)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(SchmidtState::new(vec![Real::float(0.6), Real::float(0.8)]).is_ok());
        assert!(SchmidtState::qubit_from_square(&rational(1, 1)).is_err());
    }

    #[test]
    fn qubit_from_square_is_exact() {
        let s = SchmidtState::qubit_from_square(&rational(2, 3)).unwrap();
        assert_eq!(s.weights_exact().unwrap(), vec![rational(2, 3), rational(1, 3)]);
    }
}
