//! Cycle networks: `N` parties on a ring, one bipartite source between each
//! pair of neighbours.
//!
//! Source `k` sits between party `k` and party `k+1 (mod N)`. Party `k`
//! measures its left leg (half of source `k−1`) together with its right leg
//! (half of source `k`). For the triangle, parties 0, 1, 2 are Alice, Bob and
//! Charlie and sources 0, 1, 2 are γ, α and β.
//!
//! # JSON form
//!
//! ```json
//! {
//!   "n": 3,
//!   "sources": [["sqrt(1/2)", "sqrt(1/2)"]],
//!   "measurement": { "kind": "qubit", "u2": "4/5" }
//! }
//! ```
//!
//! `sources` holds either one entry per source or a single entry shared by
//! all. Scalars are JSON numbers (float mode) or strings: `"p/q"`,
//! decimals, `"sqrt(p/q)"` and `"-sqrt(p/q)"` stay exact. Measurement kinds:
//!
//! * `{"kind": "qubit", "u2": x}` or `{"kind": "qubit", "u": x}`
//! * `{"kind": "qutrit", "example": true}` or
//!   `{"kind": "qutrit", "eta_up": [[..];3], "eta_down": [[..];3]}`
//! * `{"kind": "custom", "dim": d, "states": [{"label": "o0", "coeffs": [[..]]}, ..],
//!   "coarse": {"o0": "o9"}}`

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;

use crate::basis::{CoeffMatrix, JointBasis};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, parse_real, Real};
use crate::label::Label;
use crate::state::SchmidtState;

#[derive(Clone, Debug)]
pub struct CycleNetwork {
    sources: Vec<SchmidtState>,
    measurements: Vec<JointBasis>,
}

impl CycleNetwork {
    pub fn new(sources: Vec<SchmidtState>, measurements: Vec<JointBasis>) -> Result<Self> {
        let n = sources.len();
        if n < 3 {
            return Err(Error::Domain(format!("a cycle needs at least 3 parties, got {n}")));
        }
        if measurements.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} sources but {} measurements",
                measurements.len()
            )));
        }
        for (k, basis) in measurements.iter().enumerate() {
            let left = sources[(k + n - 1) % n].dim();
            let right = sources[k].dim();
            if basis.dim() != left || basis.dim() != right {
                return Err(Error::DimensionMismatch(format!(
                    "party {k} measures dimension {} but its sources have dimensions {left} and {right}",
                    basis.dim()
                )));
            }
        }
        Ok(Self { sources, measurements })
    }

    /// Every source and every party identical.
    pub fn uniform(n: usize, source: SchmidtState, basis: JointBasis) -> Result<Self> {
        Self::new(vec![source; n], vec![basis; n])
    }

    /// Qubit triangle with sources `λ₀|00⟩+λ₁|11⟩` and qubit bases, from
    /// the squared parameters.
    pub fn qubit_triangle(lambda0_sq: &BigRational, u_sq: &BigRational) -> Result<Self> {
        Self::uniform(
            3,
            SchmidtState::qubit_from_square(lambda0_sq)?,
            JointBasis::qubit_from_square(u_sq)?,
        )
    }

    /// Odd or even `N`-cycle of maximally entangled qubits.
    pub fn qubit_cycle(n: usize, u_sq: &BigRational) -> Result<Self> {
        Self::uniform(n, SchmidtState::maximally_entangled(2)?, JointBasis::qubit_from_square(u_sq)?)
    }

    /// Triangle of maximally entangled qutrits measured in `basis`.
    pub fn qutrit_triangle(basis: JointBasis) -> Result<Self> {
        Self::uniform(3, SchmidtState::maximally_entangled(3)?, basis)
    }

    pub fn n_parties(&self) -> usize {
        self.sources.len()
    }

    pub fn sources(&self) -> &[SchmidtState] {
        &self.sources
    }

    pub fn measurements(&self) -> &[JointBasis] {
        &self.measurements
    }

    pub fn source(&self, k: usize) -> &SchmidtState {
        &self.sources[k % self.n_parties()]
    }

    pub fn measurement(&self, k: usize) -> &JointBasis {
        &self.measurements[k % self.n_parties()]
    }

    pub fn is_exact(&self) -> bool {
        self.sources.iter().all(SchmidtState::is_exact)
            && self.measurements.iter().all(JointBasis::is_exact)
    }

    /// Same network with every exact coefficient replaced by its `f64` value.
    pub fn to_float(&self) -> Self {
        Self {
            sources: self.sources.iter().map(SchmidtState::to_float).collect(),
            measurements: self.measurements.iter().map(JointBasis::to_float).collect(),
        }
    }

    /// Relabels parties so that party `k` of the result is party `k+shift`
    /// of `self`.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.n_parties();
        Self {
            sources: (0..n).map(|k| self.sources[(k + shift) % n].clone()).collect(),
            measurements: (0..n).map(|k| self.measurements[(k + shift) % n].clone()).collect(),
        }
    }

    /// Number of outcome tuples, `∏ₖ |labels of party k|`.
    pub fn outcome_count(&self) -> u128 {
        self.measurements.iter().map(|b| b.labels().len() as u128).product()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: NetworkJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }
}

#[derive(Deserialize)]
struct NetworkJson {
    n: usize,
    sources: Vec<Vec<Value>>,
    measurement: Value,
}

fn scalar(v: &Value) -> Result<Real> {
    match v {
        Value::Number(x) => x
            .as_f64()
            .map(Real::float)
            .ok_or_else(|| Error::Parse(format!("bad number {x}"))),
        Value::String(s) => parse_real(s).ok_or_else(|| Error::Parse(format!("bad scalar `{s}`"))),
        other => Err(Error::Parse(format!("expected a number or string, got {other}"))),
    }
}

fn rational_scalar(v: &Value) -> Result<Option<BigRational>> {
    Ok(match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => None,
        other => return Err(Error::Parse(format!("expected a number or string, got {other}"))),
    })
}

fn matrix(v: &Value, rows: usize) -> Result<Vec<Vec<Real>>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected a matrix".into()))?;
    if arr.len() != rows {
        return Err(Error::DimensionMismatch(format!("expected {rows} rows, got {}", arr.len())));
    }
    arr.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("expected a matrix row".into()))?
                .iter()
                .map(scalar)
                .collect()
        })
        .collect()
}

fn eta3(v: &Value) -> Result<[[Real; 3]; 3]> {
    let m = matrix(v, 3)?;
    let rows: Vec<[Real; 3]> = m
        .into_iter()
        .map(|r| {
            <[Real; 3]>::try_from(r)
                .map_err(|_| Error::DimensionMismatch("eta rows need 3 entries".into()))
        })
        .collect::<Result<_>>()?;
    Ok(rows.try_into().expect("three rows checked"))
}

fn parse_measurement(m: &Value) -> Result<JointBasis> {
    let field = |name: &str| m.get(name);
    let kind = field("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("measurement.kind missing".into()))?;
    match kind {
        "qubit" => {
            if let Some(u2) = field("u2") {
                match rational_scalar(u2)? {
                    Some(q) => JointBasis::qubit_from_square(&q),
                    None => {
                        let x = scalar(u2)?.value();
                        JointBasis::qubit(Real::float(x.max(0.0).sqrt()))
                    }
                }
            } else if let Some(u) = field("u") {
                JointBasis::qubit(scalar(u)?)
            } else {
                Err(Error::Parse("qubit measurement needs `u2` or `u`".into()))
            }
        }
        "qutrit" => {
            if field("example").and_then(Value::as_bool) == Some(true) {
                return Ok(JointBasis::qutrit_example());
            }
            let up = eta3(field("eta_up").ok_or_else(|| Error::Parse("eta_up missing".into()))?)?;
            let down =
                eta3(field("eta_down").ok_or_else(|| Error::Parse("eta_down missing".into()))?)?;
            JointBasis::qutrit(&up, &down)
        }
        "custom" => {
            let dim = field("dim")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("custom measurement needs `dim`".into()))?
                as usize;
            let states = field("states")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("custom measurement needs `states`".into()))?;
            let states: Vec<(Label, CoeffMatrix)> = states
                .iter()
                .map(|s| {
                    let label: Label = s
                        .get("label")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse("state without label".into()))?
                        .parse()?;
                    let coeffs = matrix(
                        s.get("coeffs").ok_or_else(|| Error::Parse("state without coeffs".into()))?,
                        dim,
                    )?;
                    Ok((label, coeffs))
                })
                .collect::<Result<_>>()?;
            let mut coarse = BTreeMap::new();
            if let Some(map) = field("coarse").and_then(Value::as_object) {
                for (fine, c) in map {
                    let c = c.as_str().ok_or_else(|| Error::Parse("coarse labels are strings".into()))?;
                    coarse.insert(fine.parse()?, c.parse()?);
                }
            }
            JointBasis::custom(dim, states, coarse)
        }
        other => Err(Error::Parse(format!("unknown measurement kind `{other}`"))),
    }
}

impl NetworkJson {
    fn build(self) -> Result<CycleNetwork> {
        let sources: Vec<SchmidtState> = self
            .sources
            .iter()
            .map(|s| SchmidtState::new(s.iter().map(scalar).collect::<Result<_>>()?))
            .collect::<Result<_>>()?;
        let sources = match sources.len() {
            1 => vec![sources[0].clone(); self.n],
            k if k == self.n => sources,
            k => {
                return Err(Error::DimensionMismatch(format!(
                    "n = {} but {k} sources given",
                    self.n
                )))
            }
        };
        let basis = parse_measurement(&self.measurement)?;
        CycleNetwork::new(sources, vec![basis; self.n])
    }
}
