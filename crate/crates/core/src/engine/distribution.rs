//! Outcome distributions on a fixed, ordered outcome space.
//!
//! Outcomes are stored densely in lexicographic order of the per-party label
//! indices, party 0 most significant. Exact distributions carry a rational
//! per entry next to its `f64` value.

use std::collections::BTreeMap;
use std::io::Write;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, rational_to_f64};
use crate::label::Label;

/// Float entries within this distance below zero are clamped to zero.
pub const NEGATIVE_TOL: f64 = 1e-12;
/// Allowed deviation of the total mass from one in float mode.
pub const SUM_TOL: f64 = 1e-10;
/// Float entries at or below this value count as zero in support analysis.
pub const SUPPORT_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    labels: Vec<Vec<Label>>,
    probs: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl OutcomeDistribution {
    /// Float distribution. Entries in `[−1e-12, 0)` are clamped to zero.
    pub fn from_float(labels: Vec<Vec<Label>>, mut probs: Vec<f64>) -> Result<Self> {
        check_shape(&labels, probs.len())?;
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -NEGATIVE_TOL {
                return Err(Error::InvalidDistribution(format!("entry {p} is negative")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(Self { labels, probs, exact: None })
    }

    /// Exact distribution; entries must be non-negative and sum to one.
    pub fn from_exact(labels: Vec<Vec<Label>>, exact: Vec<BigRational>) -> Result<Self> {
        check_shape(&labels, exact.len())?;
        if let Some(p) = exact.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidDistribution(format!("entry {p} is negative")));
        }
        let total: BigRational = exact.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        let probs = exact.iter().map(rational_to_f64).collect();
        Ok(Self { labels, probs, exact: Some(exact) })
    }

    pub fn arity(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Vec<Label>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn exact_probs(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Drops the exact values.
    pub fn to_float(&self) -> Self {
        Self { exact: None, ..self.clone() }
    }

    pub fn index_of(&self, outcome: &[Label]) -> Option<usize> {
        if outcome.len() != self.arity() {
            return None;
        }
        let mut idx = 0;
        for (set, l) in self.labels.iter().zip(outcome) {
            idx = idx * set.len() + set.iter().position(|x| x == l)?;
        }
        Some(idx)
    }

    pub fn outcome(&self, mut idx: usize) -> Vec<Label> {
        let mut out = vec![Label::Up; self.arity()];
        for (k, set) in self.labels.iter().enumerate().rev() {
            out[k] = set[idx % set.len()];
            idx /= set.len();
        }
        out
    }

    /// Probability of `outcome`, or zero if it is not in the outcome space.
    pub fn prob(&self, outcome: &[Label]) -> f64 {
        self.index_of(outcome).map_or(0.0, |i| self.probs[i])
    }

    pub fn prob_exact(&self, outcome: &[Label]) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        Some(self.index_of(outcome).map_or_else(BigRational::zero, |i| exact[i].clone()))
    }

    /// True if the entry is zero: exactly in exact mode, at most `1e-14`
    /// in float mode.
    pub fn is_zero_at(&self, idx: usize) -> bool {
        match &self.exact {
            Some(e) => e[idx].is_zero(),
            None => self.probs[idx] <= SUPPORT_TOL,
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|i| !self.is_zero_at(*i)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<Label>, f64)> + '_ {
        self.probs.iter().enumerate().map(|(i, p)| (self.outcome(i), *p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Sums outcomes that share an image under `map`. `new_labels[k]` is the
    /// ordered label set of result position `k`.
    fn push_forward(&self, new_labels: Vec<Vec<Label>>, map: impl Fn(&[Label]) -> Vec<Label>) -> Self {
        let size: usize = new_labels.iter().map(Vec::len).product();
        let mut probs = vec![0.0; size];
        let mut exact = self.exact.as_ref().map(|_| vec![BigRational::zero(); size]);
        let target = Self { labels: new_labels, probs: Vec::new(), exact: None };
        for i in 0..self.len() {
            let image = map(&self.outcome(i));
            let j = target.index_of(&image).expect("image lies in the target space");
            probs[j] += self.probs[i];
            if let (Some(out), Some(src)) = (exact.as_mut(), self.exact.as_ref()) {
                out[j] += &src[i];
            }
        }
        if let Some(e) = &exact {
            probs = e.iter().map(rational_to_f64).collect();
        }
        Self { labels: target.labels, probs, exact }
    }

    /// Distribution of the listed parties, in the listed order.
    pub fn marginal(&self, parties: &[usize]) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::Domain("marginal over an empty party set".into()));
        }
        if let Some(p) = parties.iter().find(|p| **p >= self.arity()) {
            return Err(Error::Domain(format!("party {p} out of range")));
        }
        let mut sorted = parties.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != parties.len() {
            return Err(Error::Domain("repeated party in marginal".into()));
        }
        let labels = parties.iter().map(|p| self.labels[*p].clone()).collect();
        Ok(self.push_forward(labels, |o| parties.iter().map(|p| o[*p]).collect()))
    }

    /// Applies a per-party relabeling and merges outcomes that coincide.
    pub fn relabel(&self, maps: &[BTreeMap<Label, Label>]) -> Result<Self> {
        if maps.len() != self.arity() {
            return Err(Error::DimensionMismatch("one label map per party".into()));
        }
        let mut labels = Vec::with_capacity(self.arity());
        for (party, (set, map)) in self.labels.iter().zip(maps).enumerate() {
            let mut out: Vec<Label> = Vec::new();
            for l in set {
                let c = *map.get(l).ok_or(Error::LabelMismatch {
                    party,
                    label: l.to_string(),
                })?;
                if !out.contains(&c) {
                    out.push(c);
                }
            }
            labels.push(out);
        }
        Ok(self.push_forward(labels, |o| o.iter().zip(maps).map(|(l, m)| m[l]).collect()))
    }

    /// Mixture `(1−p)·self + p·uniform`. The result stays exact when `self`
    /// is exact, treating `p` as the exact binary value of the `f64`.
    pub fn white_noise_mix(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("noise weight must lie in [0,1], got {p}")));
        }
        let n = self.len();
        match &self.exact {
            Some(exact) => {
                let p = BigRational::from_float(p).expect("finite");
                let keep = BigRational::one() - &p;
                let flat = p / BigRational::from_integer(n.into());
                let mixed: Vec<BigRational> = exact.iter().map(|q| &keep * q + &flat).collect();
                Self::from_exact(self.labels.clone(), mixed)
            }
            None => {
                let flat = p / n as f64;
                let mixed = self.probs.iter().map(|q| (1.0 - p) * q + flat).collect();
                Self::from_float(self.labels.clone(), mixed)
            }
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.len() {
            for l in self.outcome(i) {
                write!(out, "{l},")?;
            }
            match &self.exact {
                Some(e) => writeln!(out, "{}", format_rational(&e[i]))?,
                None => writeln!(out, "{:.16e}", self.probs[i])?,
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            outcome: Vec<Label>,
            p: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            exact: Option<String>,
        }
        let entries: Vec<Entry> = (0..self.len())
            .map(|i| Entry {
                outcome: self.outcome(i),
                p: self.probs[i],
                exact: self.exact.as_ref().map(|e| format_rational(&e[i])),
            })
            .collect();
        serde_json::json!({
            "labels": self.labels,
            "exact": self.is_exact(),
            "entries": entries,
        })
    }
}

fn check_shape(labels: &[Vec<Label>], len: usize) -> Result<()> {
    if labels.is_empty() || labels.iter().any(Vec::is_empty) {
        return Err(Error::InvalidDistribution("empty label set".into()));
    }
    let size: usize = labels.iter().map(Vec::len).product();
    if size != len {
        return Err(Error::InvalidDistribution(format!(
            "{len} entries for an outcome space of size {size}"
        )));
    }
    Ok(())
}

/// `½ Σ |p₁ − p₂|`.
pub fn total_variation(a: &OutcomeDistribution, b: &OutcomeDistribution) -> Result<f64> {
    if a.labels != b.labels {
        return Err(Error::OutcomeSetMismatch);
    }
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        let tv: BigRational = x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum::<BigRational>()
            / BigRational::from_integer(2.into());
        return Ok(tv.to_f64().unwrap_or(f64::NAN));
    }
    Ok(0.5 * a.probs.iter().zip(&b.probs).map(|(p, q)| (p - q).abs()).sum::<f64>())
}

/// Exact total variation, when both sides are exact.
pub fn total_variation_exact(
    a: &OutcomeDistribution,
    b: &OutcomeDistribution,
) -> Result<Option<BigRational>> {
    if a.labels != b.labels {
        return Err(Error::OutcomeSetMismatch);
    }
    Ok(match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => Some(
            x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum::<BigRational>()
                / BigRational::from_integer(2.into()),
        ),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn two(p: f64) -> OutcomeDistribution {
        OutcomeDistribution::from_float(vec![vec![Label::Custom(0), Label::Custom(1)]], vec![p, 1.0 - p])
            .unwrap()
    }

    #[test]
    fn noise_mixing() {
        let d = two(1.0);
        assert_eq!(d.white_noise_mix(0.0).unwrap(), d);
        assert_eq!(d.white_noise_mix(1.0).unwrap().probs(), &[0.5, 0.5]);
        assert_eq!(d.white_noise_mix(0.5).unwrap().probs(), &[0.75, 0.25]);
        assert!(d.white_noise_mix(1.5).is_err());
        let e = OutcomeDistribution::from_exact(
            vec![vec![Label::Custom(0), Label::Custom(1)]],
            vec![rational(1, 1), rational(0, 1)],
        )
        .unwrap();
        let m = e.white_noise_mix(0.5).unwrap();
        assert_eq!(m.exact_probs().unwrap(), &[rational(3, 4), rational(1, 4)]);
    }

    #[test]
    fn total_variation_values() {
        assert_eq!(total_variation(&two(0.6), &two(0.6)).unwrap(), 0.0);
        assert_eq!(total_variation(&two(1.0), &two(0.0)).unwrap(), 1.0);
        assert!((total_variation(&two(0.6), &two(0.5)).unwrap() - 0.1).abs() < 1e-15);
        let other =
            OutcomeDistribution::from_float(vec![vec![Label::Up, Label::Down]], vec![0.5, 0.5]).unwrap();
        assert_eq!(total_variation(&two(0.5), &other), Err(Error::OutcomeSetMismatch));
    }

    #[test]
    fn validation_and_clamping() {
        let labels = vec![vec![Label::Up, Label::Down]];
        let d = OutcomeDistribution::from_float(labels.clone(), vec![1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(d.probs()[1], 0.0);
        assert!(OutcomeDistribution::from_float(labels.clone(), vec![1.1, -0.1]).is_err());
        assert!(OutcomeDistribution::from_float(labels.clone(), vec![0.5, 0.4]).is_err());
        assert!(OutcomeDistribution::from_exact(labels, vec![rational(1, 2), rational(1, 3)]).is_err());
    }

    #[test]
    fn indexing_is_lexicographic() {
        let labels = vec![vec![Label::Up, Label::Down], vec![Label::Custom(0), Label::Custom(1), Label::Custom(2)]];
        let d = OutcomeDistribution::from_float(labels, vec![1.0 / 6.0; 6]).unwrap();
        assert_eq!(d.outcome(4), vec![Label::Down, Label::Custom(1)]);
        assert_eq!(d.index_of(&[Label::Down, Label::Custom(1)]), Some(4));
        let m = d.marginal(&[1]).unwrap();
        assert!((m.probs()[2] - 1.0 / 3.0).abs() < 1e-15);
        let mut csv = Vec::new();
        m.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 3);
    }
}
