//! The Finner bound `P(a₁,…,a_N) ≤ ∏ₖ √Pₖ(aₖ)` for networks in which every
//! source reaches exactly two parties.

use num_rational::BigRational;
use serde::Serialize;

use crate::engine::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::label::Label;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinnerEntry {
    pub outcome: Vec<Label>,
    /// `√(∏ₖ Pₖ(aₖ)) − P(a)`; negative when the bound is violated.
    pub slack: f64,
    /// Exact sign of the slack for exact distributions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinnerReport {
    pub entries: Vec<FinnerEntry>,
}

impl FinnerReport {
    pub fn min_slack(&self) -> f64 {
        self.entries.iter().map(|e| e.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn get(&self, outcome: &[Label]) -> Option<&FinnerEntry> {
        self.entries.iter().find(|e| e.outcome == outcome)
    }

    /// True if no entry is violated: exactly for exact entries, beyond
    /// `tol` otherwise.
    pub fn holds(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| match e.sign {
            Some(s) => s >= 0,
            None => e.slack >= -tol,
        })
    }
}

/// Slack of the Finner bound at every outcome.
///
/// For exact distributions the sign is decided by comparing `P(a)²` with
/// `∏ₖ Pₖ(aₖ)`, and an exact equality reports a slack of exactly `0.0`.
pub fn finner_slack(dist: &OutcomeDistribution) -> Result<FinnerReport> {
    let n = dist.arity();
    if n < 2 {
        return Err(Error::Domain("the Finner bound needs at least two parties".into()));
    }
    let marginals: Vec<OutcomeDistribution> =
        (0..n).map(|k| dist.marginal(&[k])).collect::<Result<_>>()?;
    let entries = (0..dist.len())
        .map(|idx| {
            let outcome = dist.outcome(idx);
            let p = dist.probs()[idx];
            let product: f64 = marginals.iter().zip(&outcome).map(|(m, l)| m.prob(&[*l])).product();
            let mut slack = product.sqrt() - p;
            let sign = dist.exact_probs().map(|exact| {
                let prod: BigRational = marginals
                    .iter()
                    .zip(&outcome)
                    .map(|(m, l)| m.prob_exact(&[*l]).expect("exact marginal"))
                    .product();
                let p_sq = &exact[idx] * &exact[idx];
                match prod.cmp(&p_sq) {
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Less => -1,
                }
            });
            if sign == Some(0) {
                slack = 0.0;
            }
            FinnerEntry { outcome, slack, sign }
        })
        .collect();
    Ok(FinnerReport { entries })
}
