//! Quantum outcome distributions of cycle networks.

pub mod distribution;
pub mod transfer;

use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Real;
use crate::label::Label;
use crate::network::CycleNetwork;

pub use distribution::{total_variation, total_variation_exact, OutcomeDistribution};
pub use transfer::{amplitude, completeness_defect, transfer_matrices, TransferMatrix};

use transfer::{float_amplitude, float_tables, mat_mul_real, trace_real};

pub const DEFAULT_CAP: u128 = 100_000_000;

#[derive(Clone, Debug)]
pub struct DistributionOptions {
    /// Largest outcome space that will be materialized.
    pub cap: u128,
    /// Compute in `f64` even when the network is exact.
    pub force_float: bool,
}

impl Default for DistributionOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP, force_float: false }
    }
}

fn label_sets(network: &CycleNetwork) -> Vec<Vec<Label>> {
    network.measurements().iter().map(|b| b.labels().to_vec()).collect()
}

fn digits(mut idx: usize, radices: &[usize], out: &mut [usize]) {
    for k in (0..radices.len()).rev() {
        out[k] = idx % radices[k];
        idx /= radices[k];
    }
}

/// Full distribution with default options.
pub fn cycle_distribution(network: &CycleNetwork) -> Result<OutcomeDistribution> {
    cycle_distribution_with(network, &DistributionOptions::default())
}

/// Every outcome probability `|Tr(∏ₖ Tₖ)|²`.
///
/// Exact networks produce exact rational probabilities when every squared
/// amplitude is rational; otherwise the `f64` values are rounded from the
/// exact amplitudes.
pub fn cycle_distribution_with(
    network: &CycleNetwork,
    options: &DistributionOptions,
) -> Result<OutcomeDistribution> {
    let entries = network.outcome_count();
    if entries > options.cap {
        return Err(Error::ResourceLimit { entries, cap: options.cap });
    }
    let labels = label_sets(network);
    if network.is_exact() && !options.force_float {
        if let Some(d) = exact_distribution(network, labels.clone())? {
            return Ok(d);
        }
    }
    let probs = float_probabilities(network);
    OutcomeDistribution::from_float(labels, probs)
}

fn float_probabilities(network: &CycleNetwork) -> Vec<f64> {
    let tables = float_tables(network);
    let dims: Vec<usize> = network.sources().iter().map(|s| s.dim()).collect();
    let radices: Vec<usize> = network.measurements().iter().map(|b| b.labels().len()).collect();
    let n = radices.len();
    let total = radices.iter().product::<usize>();
    let dmax = dims.iter().copied().max().unwrap_or(1);
    (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0usize; n], (vec![0.0; dmax * dmax], vec![0.0; dmax * dmax])),
            |(idx, scratch), i| {
                digits(i, &radices, idx);
                let a = float_amplitude(&tables, &dims, idx, scratch);
                a * a
            },
        )
        .collect()
}

/// `Ok(None)` when the exact arithmetic cannot finish (radicands too large).
fn exact_distribution(
    network: &CycleNetwork,
    labels: Vec<Vec<Label>>,
) -> Result<Option<OutcomeDistribution>> {
    let tables: Vec<Vec<Vec<Vec<Real>>>> = (0..network.n_parties())
        .map(|k| transfer_matrices(network, k).into_iter().map(|t| t.matrix).collect())
        .collect();
    let radices: Vec<usize> = labels.iter().map(Vec::len).collect();
    let n = radices.len();
    let total = radices.iter().product::<usize>();
    let squares: Vec<Real> = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0usize; n],
            |idx, i| {
                digits(i, &radices, idx);
                let mut acc = tables[0][idx[0]].clone();
                for k in 1..n {
                    acc = mat_mul_real(&acc, &tables[k][idx[k]]);
                }
                trace_real(&acc).square()
            },
        )
        .collect();
    if squares.iter().any(|s| !s.is_exact()) {
        return Ok(None);
    }
    let rational: Option<Vec<BigRational>> = squares.iter().map(Real::to_rational).collect();
    Ok(Some(match rational {
        Some(exact) => OutcomeDistribution::from_exact(labels, exact)?,
        None => OutcomeDistribution::from_float(labels, squares.iter().map(Real::value).collect())?,
    }))
}

/// Lazily yields `(outcome, probability)` in float arithmetic without
/// materializing the outcome space.
pub struct OutcomeStream {
    tables: Vec<Vec<Vec<f64>>>,
    dims: Vec<usize>,
    labels: Vec<Vec<Label>>,
    radices: Vec<usize>,
    next: usize,
    total: u128,
    idx: Vec<usize>,
    scratch: (Vec<f64>, Vec<f64>),
}

pub fn stream_outcomes(network: &CycleNetwork) -> OutcomeStream {
    let labels = label_sets(network);
    let dims: Vec<usize> = network.sources().iter().map(|s| s.dim()).collect();
    let dmax = dims.iter().copied().max().unwrap_or(1);
    OutcomeStream {
        tables: float_tables(network),
        radices: labels.iter().map(Vec::len).collect(),
        idx: vec![0; labels.len()],
        labels,
        dims,
        next: 0,
        total: network.outcome_count(),
        scratch: (vec![0.0; dmax * dmax], vec![0.0; dmax * dmax]),
    }
}

impl Iterator for OutcomeStream {
    type Item = (Vec<Label>, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next as u128 >= self.total {
            return None;
        }
        digits(self.next, &self.radices, &mut self.idx);
        self.next += 1;
        let a = float_amplitude(&self.tables, &self.dims, &self.idx, &mut self.scratch);
        let outcome = self.idx.iter().zip(&self.labels).map(|(i, set)| set[*i]).collect();
        Some((outcome, a * a))
    }
}

/// Merges fine labels into the coarse classes of each party's basis.
pub fn coarse_grain(
    dist: &OutcomeDistribution,
    network: &CycleNetwork,
) -> Result<OutcomeDistribution> {
    let maps: Vec<BTreeMap<Label, Label>> = (0..dist.arity())
        .map(|k| {
            let basis = network.measurement(k);
            dist.labels()[k].iter().map(|l| (*l, basis.coarse(*l))).collect()
        })
        .collect();
    dist.relabel(&maps)
}
