//! The coarse ↑/↓/χ structure shared by every classical model of the qubit
//! cycle.
//!
//! Each source emits a bit `t` with `P(t=0) = λ₀²`. A party outputs ↑ when
//! its left bit is 0 and its right bit is 1, ↓ for the reverse, and χ when
//! both bits agree.

use num_rational::BigRational;

use super::model::{PartyResponse, TrilocalModel};
use crate::error::{Error, Result};
use crate::exact::Real;
use crate::label::Label;

#[derive(Clone, Debug, PartialEq)]
pub struct CoarseSkeleton {
    /// `[P(t=0), P(t=1)]`, identical for every source.
    weights: [Real; 2],
}

/// Skeleton for sources `λ₀|00⟩ + λ₁|11⟩`.
pub fn coarse_skeleton(lambda0: &Real) -> Result<CoarseSkeleton> {
    let w0 = lambda0.square();
    if !(lambda0.value() > 0.0 && lambda0.value() < 1.0) {
        return Err(Error::Domain(format!("lambda0 must lie in (0,1), got {}", lambda0.value())));
    }
    let w1 = &Real::one() - &w0;
    Ok(CoarseSkeleton { weights: [w0, w1] })
}

impl CoarseSkeleton {
    /// Skeleton from `λ₀²` directly.
    pub fn from_square(lambda0_sq: &BigRational) -> Result<Self> {
        let w0 = Real::rational(lambda0_sq.clone());
        if !(w0.value() > 0.0 && w0.value() < 1.0) {
            return Err(Error::Domain(format!("lambda0^2 must lie in (0,1), got {lambda0_sq}")));
        }
        Ok(Self { weights: [w0.clone(), &Real::one() - &w0] })
    }

    pub fn weights(&self) -> &[Real; 2] {
        &self.weights
    }

    /// Output of a party receiving bit `left` and bit `right`.
    pub fn coarse_output(left: u8, right: u8) -> Label {
        match (left, right) {
            (0, 1) => Label::Up,
            (1, 0) => Label::Down,
            _ => Label::ChiAny,
        }
    }

    /// Outputs of all parties when source `k` emits `bits[k]`.
    pub fn outputs(bits: &[u8]) -> Vec<Label> {
        let n = bits.len();
        (0..n).map(|k| Self::coarse_output(bits[(k + n - 1) % n], bits[k])).collect()
    }

    /// The skeleton itself as a deterministic model on `n` parties with
    /// outputs ↑, ↓, χ.
    pub fn coarse_model(&self, n: usize) -> Result<TrilocalModel> {
        let outputs = vec![Label::Up, Label::Down, Label::ChiAny];
        let parties = (0..n)
            .map(|_| {
                PartyResponse::deterministic(outputs.clone(), 2, 2, |l, r| {
                    Self::coarse_output(l as u8, r as u8)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TrilocalModel::new(vec![self.weights.to_vec(); n], parties)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{coarse_grain, cycle_distribution, total_variation};
    use crate::exact::rational;
    use crate::network::CycleNetwork;

    #[test]
    fn mixed_bits_example() {
        // left to right: source 0 = 0, source 1 = 0, source 2 = 1
        assert_eq!(
            CoarseSkeleton::outputs(&[0, 0, 1]),
            vec![Label::Down, Label::ChiAny, Label::Up]
        );
    }

    #[test]
    fn half_gives_equal_weights() {
        let s = coarse_skeleton(&Real::sqrt_ratio(1, 2)).unwrap();
        assert_eq!(s.weights()[0], s.weights()[1]);
        assert!(coarse_skeleton(&Real::one()).is_err());
    }

    #[test]
    fn matches_coarse_quantum_distribution() {
        let net = CycleNetwork::qubit_triangle(&rational(1, 2), &rational(4, 5)).unwrap();
        let quantum = coarse_grain(&cycle_distribution(&net).unwrap(), &net).unwrap();
        let half = CoarseSkeleton::from_square(&rational(1, 2)).unwrap();
        assert_eq!(half.coarse_model(3).unwrap().evaluate().unwrap(), quantum);

        for (l, u) in [((1, 2), (4, 5)), ((1, 3), (3, 5)), ((2, 3), (9, 10))] {
            let l0 = rational(l.0, l.1);
            let net = CycleNetwork::qubit_triangle(&l0, &rational(u.0, u.1)).unwrap();
            let quantum = coarse_grain(&cycle_distribution(&net).unwrap(), &net).unwrap();
            let model = CoarseSkeleton::from_square(&l0).unwrap().coarse_model(3).unwrap();
            let d = model.evaluate().unwrap();
            assert!(total_variation(&d, &quantum).unwrap() < 1e-15);
            // λ₀⁴λ₁²
            let l1 = rational(1, 1) - &l0;
            assert_eq!(d.prob_exact(&[Label::Up, Label::Down, Label::ChiAny]), Some(&l0 * &l0 * &l1));
        }
    }
}
