//! Transfer matrices and amplitudes.
//!
//! For party `k` and outcome `a`, `T[i][j] = C_a[i][j]·λ⁽ᵏ⁾ⱼ`, where `i`
//! indexes the left leg (source `k−1`), `j` the right leg (source `k`) and
//! `λ⁽ᵏ⁾` are the Schmidt coefficients of source `k`. The amplitude of an
//! outcome tuple is `Tr(T⁽⁰⁾T⁽¹⁾⋯T⁽ᴺ⁻¹⁾)`.

use crate::error::{Error, Result};
use crate::exact::Real;
use crate::label::Label;
use crate::network::CycleNetwork;

pub type RealMatrix = Vec<Vec<Real>>;

#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub label: Label,
    pub matrix: RealMatrix,
}

/// One transfer matrix per outcome of `party`, in basis label order.
pub fn transfer_matrices(network: &CycleNetwork, party: usize) -> Vec<TransferMatrix> {
    let basis = network.measurement(party);
    let lambda = network.source(party).lambda();
    basis
        .labels()
        .iter()
        .zip(basis.eigenstates())
        .map(|(label, c)| TransferMatrix {
            label: *label,
            matrix: c
                .iter()
                .map(|row| row.iter().zip(lambda).map(|(x, l)| x * l).collect())
                .collect(),
        })
        .collect()
}

/// Largest entry of `Σₐ TₐᵀTₐ − d·diag(λ²)`; zero up to rounding for a
/// complete orthonormal basis.
pub fn completeness_defect(network: &CycleNetwork, party: usize) -> f64 {
    let ts = transfer_matrices(network, party);
    let d = network.measurement(party).dim();
    let weights = network.source(party).weights();
    let mut worst = 0.0f64;
    for j in 0..d {
        for jj in 0..d {
            let s: f64 = ts
                .iter()
                .map(|t| (0..d).map(|i| t.matrix[i][j].value() * t.matrix[i][jj].value()).sum::<f64>())
                .sum();
            let target = if j == jj { d as f64 * weights[j] } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

pub(crate) fn mat_mul_real(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub(crate) fn trace_real(a: &RealMatrix) -> Real {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// Looks up the label index of every party and checks the tuple length.
pub(crate) fn outcome_indices(network: &CycleNetwork, outcome: &[Label]) -> Result<Vec<usize>> {
    let n = network.n_parties();
    if outcome.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "outcome has {} labels for {n} parties",
            outcome.len()
        )));
    }
    outcome
        .iter()
        .enumerate()
        .map(|(k, l)| {
            network
                .measurement(k)
                .index_of(*l)
                .ok_or(Error::LabelMismatch { party: k, label: l.to_string() })
        })
        .collect()
}

/// `⟨φ_{a₀}|⋯⟨φ_{a_{N−1}}| ⊗ₖ|ψₖ⟩`, exact when the network is exact.
pub fn amplitude(network: &CycleNetwork, outcome: &[Label]) -> Result<Real> {
    let idx = outcome_indices(network, outcome)?;
    let mut acc: Option<RealMatrix> = None;
    for (k, a) in idx.iter().enumerate() {
        let t = transfer_matrices(network, k).swap_remove(*a).matrix;
        acc = Some(match acc {
            None => t,
            Some(m) => mat_mul_real(&m, &t),
        });
    }
    Ok(trace_real(&acc.expect("at least three parties")))
}

/// Row-major `f64` copies of every transfer matrix: `out[k][a]` is a flat
/// `d_left × d_right` block.
pub(crate) fn float_tables(network: &CycleNetwork) -> Vec<Vec<Vec<f64>>> {
    (0..network.n_parties())
        .map(|k| {
            transfer_matrices(network, k)
                .into_iter()
                .map(|t| t.matrix.iter().flatten().map(Real::value).collect())
                .collect()
        })
        .collect()
}

/// Float amplitude from precomputed tables; `dims[k]` is the dimension of
/// source `k`, `scratch` holds two buffers of at least `d²` entries.
pub(crate) fn float_amplitude(
    tables: &[Vec<Vec<f64>>],
    dims: &[usize],
    idx: &[usize],
    scratch: &mut (Vec<f64>, Vec<f64>),
) -> f64 {
    let n = idx.len();
    let d0 = dims[n - 1];
    let (acc, tmp) = scratch;
    let first = &tables[0][idx[0]];
    acc[..first.len()].copy_from_slice(first);
    let mut cols = dims[0];
    for k in 1..n {
        let t = &tables[k][idx[k]];
        let inner = dims[k - 1];
        let out_cols = dims[k];
        for i in 0..d0 {
            for j in 0..out_cols {
                let mut s = 0.0;
                for m in 0..inner {
                    s += acc[i * cols + m] * t[m * out_cols + j];
                }
                tmp[i * out_cols + j] = s;
            }
        }
        std::mem::swap(acc, tmp);
        cols = out_cols;
    }
    (0..d0).map(|i| acc[i * cols + i]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::JointBasis;
    use crate::exact::rational;

    #[test]
    fn completeness_holds() {
        let net = CycleNetwork::qubit_triangle(&rational(1, 3), &rational(4, 5)).unwrap();
        for k in 0..3 {
            assert!(completeness_defect(&net, k) < 1e-15);
        }
        let q = CycleNetwork::qutrit_triangle(JointBasis::qutrit_example()).unwrap();
        assert!(completeness_defect(&q, 1) < 1e-15);
    }

    #[test]
    fn amplitude_rejects_bad_outcomes() {
        let net = CycleNetwork::qubit_triangle(&rational(1, 2), &rational(4, 5)).unwrap();
        assert!(matches!(
            amplitude(&net, &[Label::Up, Label::Up]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            amplitude(&net, &[Label::Up, Label::Tilde(0), Label::Up]),
            Err(Error::LabelMismatch { party: 1, .. })
        ));
    }

    #[test]
    fn up_down_amplitude_in_general_state() {
        // (↑,↓,χ₀) = λ₀²λ₁u
        let net = CycleNetwork::qubit_triangle(&rational(1, 3), &rational(4, 5)).unwrap();
        let amp = amplitude(&net, &[Label::Up, Label::Down, Label::Chi(0)]).unwrap();
        let expect = (1.0 / 3.0) * (2.0f64 / 3.0).sqrt() * 0.8f64.sqrt();
        assert!((amp.value().abs() - expect).abs() < 1e-15);
        assert_eq!(amp.square().to_rational(), Some(rational(1, 9) * rational(2, 3) * rational(4, 5)));
    }
}
