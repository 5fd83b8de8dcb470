//! Finite hidden-variable models on a cycle.
//!
//! Source `k` sits between party `k` and party `k+1`, the same convention as
//! [`CycleNetwork`](crate::network::CycleNetwork): party `k` reads source
//! `k−1` on its left and source `k` on its right.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::{AddAssign, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::engine::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_real, Real};
use crate::label::Label;

/// Largest number of hidden-value combinations [`TrilocalModel::evaluate`]
/// and [`TrilocalModel::purify`] will build.
pub const HIDDEN_CAP: u128 = 100_000_000;

const SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PartyResponse {
    outputs: Vec<Label>,
    /// Row `left * right_len + right` is a probability vector over `outputs`.
    table: Vec<Vec<Real>>,
}

impl PartyResponse {
    pub fn new(outputs: Vec<Label>, table: Vec<Vec<Real>>) -> Self {
        Self { outputs, table }
    }

    /// Deterministic response built from `f(left, right)`.
    pub fn deterministic(
        outputs: Vec<Label>,
        left_len: usize,
        right_len: usize,
        f: impl Fn(usize, usize) -> Label,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(left_len * right_len);
        for l in 0..left_len {
            for r in 0..right_len {
                let label = f(l, r);
                let pos = outputs.iter().position(|x| *x == label).ok_or_else(|| {
                    Error::InvalidModel(format!("response {label} is not a declared output"))
                })?;
                table.push(
                    (0..outputs.len())
                        .map(|i| if i == pos { Real::one() } else { Real::zero() })
                        .collect(),
                );
            }
        }
        Ok(Self { outputs, table })
    }

    pub fn outputs(&self) -> &[Label] {
        &self.outputs
    }

    pub fn row(&self, left: usize, right: usize, right_len: usize) -> &[Real] {
        &self.table[left * right_len + right]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrilocalModel {
    sources: Vec<Vec<Real>>,
    parties: Vec<PartyResponse>,
}

fn check_probability_vector(what: &str, p: &[Real]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidModel(format!("{what} is empty")));
    }
    if p.iter().any(|x| x.value() < 0.0 || !x.value().is_finite()) {
        return Err(Error::InvalidModel(format!("{what} has a negative entry")));
    }
    let exact: Option<Vec<BigRational>> = p.iter().map(Real::to_rational).collect();
    let ok = match exact {
        Some(q) => q.iter().sum::<BigRational>().is_one(),
        None => (p.iter().map(Real::value).sum::<f64>() - 1.0).abs() <= SUM_TOL,
    };
    if !ok {
        return Err(Error::InvalidModel(format!("{what} does not sum to 1")));
    }
    Ok(())
}

impl TrilocalModel {
    /// Validates alphabet sizes, non-negativity and normalization (exact for
    /// rational data, within `1e-12` otherwise).
    pub fn new(sources: Vec<Vec<Real>>, parties: Vec<PartyResponse>) -> Result<Self> {
        let n = sources.len();
        if n < 3 || parties.len() != n {
            return Err(Error::InvalidModel(format!(
                "{n} sources and {} parties; need N ≥ 3 of each",
                parties.len()
            )));
        }
        for (k, s) in sources.iter().enumerate() {
            check_probability_vector(&format!("source {k}"), s)?;
        }
        for (k, p) in parties.iter().enumerate() {
            let rows = sources[(k + n - 1) % n].len() * sources[k].len();
            if p.table.len() != rows {
                return Err(Error::InvalidModel(format!(
                    "party {k} has {} response rows, expected {rows}",
                    p.table.len()
                )));
            }
            for (r, row) in p.table.iter().enumerate() {
                if row.len() != p.outputs.len() {
                    return Err(Error::InvalidModel(format!("party {k} row {r} has wrong length")));
                }
                check_probability_vector(&format!("party {k} row {r}"), row)?;
            }
        }
        Ok(Self { sources, parties })
    }

    pub fn n_parties(&self) -> usize {
        self.sources.len()
    }

    pub fn sources(&self) -> &[Vec<Real>] {
        &self.sources
    }

    pub fn parties(&self) -> &[PartyResponse] {
        &self.parties
    }

    pub fn left_source(&self, party: usize) -> usize {
        (party + self.n_parties() - 1) % self.n_parties()
    }

    pub fn is_exact(&self) -> bool {
        self.sources.iter().flatten().all(|x| x.to_rational().is_some())
            && self.parties.iter().flat_map(|p| p.table.iter().flatten()).all(|x| x.to_rational().is_some())
    }

    pub fn output_labels(&self) -> Vec<Vec<Label>> {
        self.parties.iter().map(|p| p.outputs.clone()).collect()
    }

    pub fn hidden_count(&self) -> u128 {
        self.sources.iter().map(|s| s.len() as u128).product()
    }

    /// True if every response row is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.parties.iter().flat_map(|p| &p.table).all(|row| {
            row.iter().filter(|x| !x.is_zero()).count() == 1
        })
    }

    /// Output distribution: the sum over all hidden values of the source
    /// weights times the party responses. Exact when all data are rational.
    pub fn evaluate(&self) -> Result<OutcomeDistribution> {
        let hidden = self.hidden_count();
        if hidden > HIDDEN_CAP {
            return Err(Error::ResourceLimit { entries: hidden, cap: HIDDEN_CAP });
        }
        let labels = self.output_labels();
        if self.is_exact() {
            let src = self.sources.iter().map(|s| s.iter().map(|x| x.to_rational().unwrap()).collect()).collect();
            let tables = self
                .parties
                .iter()
                .map(|p| p.table.iter().map(|row| row.iter().map(|x| x.to_rational().unwrap()).collect()).collect())
                .collect();
            let probs = accumulate::<BigRational>(&src, &tables, &labels);
            OutcomeDistribution::from_exact(labels, probs)
        } else {
            let src = self.sources.iter().map(|s| s.iter().map(Real::value).collect()).collect();
            let tables = self
                .parties
                .iter()
                .map(|p| p.table.iter().map(|row| row.iter().map(Real::value).collect()).collect())
                .collect();
            let probs = accumulate::<f64>(&src, &tables, &labels);
            OutcomeDistribution::from_float(labels, probs)
        }
    }

    /// `n` i.i.d. outcomes: each source is sampled, then each party samples
    /// its response. The same seed always gives the same list.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<Vec<Label>>> {
        if n == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        let to_index = |w: &[Real]| {
            WeightedIndex::new(w.iter().map(Real::value))
                .map_err(|e| Error::InvalidModel(format!("bad weights: {e}")))
        };
        let sources: Vec<_> = self.sources.iter().map(|s| to_index(s)).collect::<Result<_>>()?;
        let responses: Vec<Vec<_>> = self
            .parties
            .iter()
            .map(|p| p.table.iter().map(|row| to_index(row)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_parties = self.n_parties();
        let mut hidden = vec![0usize; n_parties];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            for (h, dist) in hidden.iter_mut().zip(&sources) {
                *h = dist.sample(&mut rng);
            }
            let outcome = (0..n_parties)
                .map(|k| {
                    let (l, r) = (hidden[self.left_source(k)], hidden[k]);
                    let row = l * self.sources[k].len() + r;
                    self.parties[k].outputs[responses[k][row].sample(&mut rng)]
                })
                .collect();
            out.push(outcome);
        }
        Ok(out)
    }

    /// Equivalent model with deterministic responses.
    ///
    /// Party `k`'s randomness becomes a table of one output per
    /// `(left, right)` row, drawn independently, and is attached to source `k`.
    pub fn purify(&self) -> Result<Self> {
        let n = self.n_parties();
        let mut sources = Vec::with_capacity(n);
        // per source: (original value, party-k output table) for each new letter
        let mut letters: Vec<Vec<(usize, Vec<usize>)>> = Vec::with_capacity(n);
        for k in 0..n {
            let party = &self.parties[k];
            let mut tables: Vec<(Vec<usize>, Real)> = vec![(Vec::new(), Real::one())];
            for row in &party.table {
                let mut next = Vec::new();
                for (choices, w) in &tables {
                    for (o, p) in row.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                        let mut c = choices.clone();
                        c.push(o);
                        next.push((c, w * p));
                    }
                }
                if next.len() as u128 * self.sources[k].len() as u128 > HIDDEN_CAP {
                    return Err(Error::ResourceLimit {
                        entries: next.len() as u128 * self.sources[k].len() as u128,
                        cap: HIDDEN_CAP,
                    });
                }
                tables = next;
            }
            let mut weights = Vec::new();
            let mut lk = Vec::new();
            for (s, ws) in self.sources[k].iter().enumerate() {
                for (choices, w) in &tables {
                    weights.push(ws * w);
                    lk.push((s, choices.clone()));
                }
            }
            sources.push(weights);
            letters.push(lk);
        }
        let parties = (0..n)
            .map(|k| {
                let left = &letters[(k + n - 1) % n];
                let right = &letters[k];
                let right_len = self.sources[k].len();
                let outputs = self.parties[k].outputs.clone();
                PartyResponse::deterministic(outputs.clone(), left.len(), right.len(), |l, r| {
                    let (r_orig, choices) = &right[r];
                    outputs[choices[left[l].0 * right_len + r_orig]]
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sources, parties)
    }

    /// JSON form: weights and response probabilities as fraction strings
    /// when exact, numbers otherwise.
    pub fn to_json(&self) -> Value {
        let real = |x: &Real| match x.to_rational() {
            Some(q) => Value::String(format_rational(&q)),
            None => json!(x.value()),
        };
        json!({
            "n_parties": self.n_parties(),
            "sources": self.sources.iter().map(|s| s.iter().map(real).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "parties": self.parties.iter().map(|p| json!({
                "outputs": p.outputs.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "responses": p.table.iter().map(|row| row.iter().map(real).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let parse = |v: &Value| -> Result<Real> {
            match v {
                Value::String(s) => parse_real(s).ok_or_else(|| Error::Parse(format!("bad number {s:?}"))),
                Value::Number(x) => x
                    .as_f64()
                    .map(Real::float)
                    .ok_or_else(|| Error::Parse(format!("bad number {x}"))),
                other => Err(Error::Parse(format!("expected a number, got {other}"))),
            }
        };
        let array = |v: &Value, what: &str| -> Result<Vec<Value>> {
            v.as_array().cloned().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
        };
        let sources = array(&value["sources"], "sources")?
            .iter()
            .map(|s| array(s, "source")?.iter().map(parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let parties = array(&value["parties"], "parties")?
            .iter()
            .map(|p| {
                let outputs = array(&p["outputs"], "outputs")?
                    .iter()
                    .map(|l| {
                        l.as_str()
                            .ok_or_else(|| Error::Parse("labels must be strings".into()))?
                            .parse::<Label>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let table = array(&p["responses"], "responses")?
                    .iter()
                    .map(|row| array(row, "response row")?.iter().map(parse).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(PartyResponse::new(outputs, table))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sources, parties)
    }
}

fn accumulate<T>(sources: &Vec<Vec<T>>, tables: &Vec<Vec<Vec<T>>>, labels: &[Vec<Label>]) -> Vec<T>
where
    T: Clone + Send + Sync + Zero + One + AddAssign + for<'a> Mul<&'a T, Output = T>,
{
    let n = sources.len();
    let sizes: Vec<usize> = sources.iter().map(Vec::len).collect();
    let out_sizes: Vec<usize> = labels.iter().map(Vec::len).collect();
    let total_out: usize = out_sizes.iter().product();
    let hidden: usize = sizes.iter().product();
    // non-zero entries of every response row
    let support: Vec<Vec<Vec<(usize, T)>>> = tables
        .iter()
        .map(|t| {
            t.iter()
                .map(|row| row.iter().cloned().enumerate().filter(|(_, p)| !p.is_zero()).collect())
                .collect()
        })
        .collect();

    (0..hidden)
        .into_par_iter()
        .fold(
            || vec![T::zero(); total_out],
            |mut acc, mut h| {
                let mut values = vec![0usize; n];
                for k in (0..n).rev() {
                    values[k] = h % sizes[k];
                    h /= sizes[k];
                }
                let w = (0..n).fold(T::one(), |w, k| w * &sources[k][values[k]]);
                if w.is_zero() {
                    return acc;
                }
                let rows: Vec<&Vec<(usize, T)>> = (0..n)
                    .map(|k| &support[k][values[(k + n - 1) % n] * sizes[k] + values[k]])
                    .collect();
                spread(&rows, &out_sizes, 0, 0, w, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![T::zero(); total_out],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn spread<T>(rows: &[&Vec<(usize, T)>], sizes: &[usize], k: usize, idx: usize, w: T, acc: &mut [T])
where
    T: Clone + AddAssign + for<'a> Mul<&'a T, Output = T>,
{
    if k == rows.len() {
        acc[idx] += w;
        return;
    }
    for (o, p) in rows[k] {
        spread(rows, sizes, k + 1, idx * sizes[k] + o, w.clone() * p, acc);
    }
}

/// Empirical distribution of `samples` on the outcome space of `model`.
pub fn empirical_distribution(model: &TrilocalModel, samples: &[Vec<Label>]) -> Result<OutcomeDistribution> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    let labels = model.output_labels();
    let size: usize = labels.iter().map(Vec::len).product();
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    let lookup: Vec<BTreeMap<Label, usize>> =
        labels.iter().map(|set| set.iter().enumerate().map(|(i, l)| (*l, i)).collect()).collect();
    for s in samples {
        let mut idx = 0;
        for (k, l) in s.iter().enumerate() {
            let i = *lookup[k].get(l).ok_or_else(|| Error::LabelMismatch { party: k, label: l.to_string() })?;
            idx = idx * labels[k].len() + i;
        }
        *counts.entry(idx).or_default() += 1;
    }
    let n = BigRational::from_integer((samples.len() as u64).into());
    let mut probs = vec![BigRational::zero(); size];
    for (idx, c) in counts {
        probs[idx] = BigRational::from_integer(c.into()) / &n;
    }
    OutcomeDistribution::from_exact(labels, probs)
}

/// Writes one comma-separated label tuple per line.
pub fn write_samples_csv<W: Write>(samples: &[Vec<Label>], mut out: W) -> std::io::Result<()> {
    for s in samples {
        let line: Vec<String> = s.iter().map(|l| l.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn bits() -> Vec<Label> {
        vec![Label::Custom(0), Label::Custom(1)]
    }

    /// Each party outputs a fair coin of its own.
    fn coins(n: usize) -> TrilocalModel {
        let half = Real::ratio(1, 2);
        let parties = (0..n)
            .map(|_| PartyResponse::new(bits(), vec![vec![half.clone(), half.clone()]]))
            .collect();
        TrilocalModel::new(vec![vec![Real::one()]; n], parties).unwrap()
    }

    #[test]
    fn point_mass() {
        let parties = (0..3)
            .map(|_| PartyResponse::deterministic(bits(), 1, 1, |_, _| Label::Custom(1)).unwrap())
            .collect();
        let m = TrilocalModel::new(vec![vec![Real::one()]; 3], parties).unwrap();
        let d = m.evaluate().unwrap();
        assert_eq!(d.prob_exact(&[Label::Custom(1); 3]), Some(rational(1, 1)));
        let s = m.sample(50, 3).unwrap();
        assert!(s.iter().all(|o| o == &vec![Label::Custom(1); 3]));
    }

    #[test]
    fn independent_coins_give_product() {
        let d = coins(3).evaluate().unwrap();
        assert!(d.exact_probs().unwrap().iter().all(|p| *p == rational(1, 8)));
    }

    #[test]
    fn rejects_unnormalized() {
        let parties = (0..3)
            .map(|_| PartyResponse::deterministic(bits(), 1, 1, |_, _| Label::Custom(0)).unwrap())
            .collect();
        let err = TrilocalModel::new(vec![vec![Real::ratio(1, 2)]; 3], parties).unwrap_err();
        assert!(matches!(err, Error::InvalidModel(_)));
    }

    #[test]
    fn purification_keeps_distribution() {
        // parties copy a shared bit with noise
        let src = vec![Real::ratio(1, 3), Real::ratio(2, 3)];
        let parties = (0..3)
            .map(|_| {
                let table = (0..4)
                    .map(|row| {
                        if row % 3 == 0 {
                            vec![Real::ratio(3, 4), Real::ratio(1, 4)]
                        } else {
                            vec![Real::ratio(1, 5), Real::ratio(4, 5)]
                        }
                    })
                    .collect();
                PartyResponse::new(bits(), table)
            })
            .collect();
        let m = TrilocalModel::new(vec![src; 3], parties).unwrap();
        let p = m.purify().unwrap();
        assert!(p.is_deterministic());
        assert!(!m.is_deterministic());
        assert_eq!(m.evaluate().unwrap(), p.evaluate().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = coins(3);
        let back = TrilocalModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back.evaluate().unwrap(), m.evaluate().unwrap());
        assert_eq!(m.to_json()["sources"][0][0], json!("1"));
    }

    #[test]
    fn sampling_is_seeded() {
        let m = coins(3);
        assert_eq!(m.sample(100, 9).unwrap(), m.sample(100, 9).unwrap());
        assert_ne!(m.sample(100, 9).unwrap(), m.sample(100, 10).unwrap());
        assert!(m.sample(0, 1).is_err());
        let e = empirical_distribution(&m, &m.sample(20_000, 1).unwrap()).unwrap();
        let tv = crate::engine::total_variation(&e, &m.evaluate().unwrap()).unwrap();
        assert!(tv < 3.0 * (8.0f64 / 20_000.0).sqrt());
    }
}
