//! Two-qudit projective measurements.
//!
//! Each eigenstate is stored as a real `d×d` coefficient matrix `C` with
//! `|φ⟩ = Σᵢⱼ C[i][j]|ij⟩`, where `i` is the left leg and `j` the right leg.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::Real;
use crate::label::Label;

const GRAM_TOL: f64 = 1e-12;
const ETA_TOL: f64 = 1e-10;

pub type CoeffMatrix = Vec<Vec<Real>>;

#[derive(Clone, Debug)]
pub struct JointBasis {
    dim: usize,
    labels: Vec<Label>,
    eigenstates: Vec<CoeffMatrix>,
    coarse: BTreeMap<Label, Label>,
}

fn zero_matrix(d: usize) -> CoeffMatrix {
    vec![vec![Real::zero(); d]; d]
}

fn product_state(d: usize, i: usize, j: usize) -> CoeffMatrix {
    let mut c = zero_matrix(d);
    c[i][j] = Real::one();
    c
}

fn dot(a: &CoeffMatrix, b: &CoeffMatrix) -> Real {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| x * y)
        .sum()
}

/// Largest deviation of the Gram matrix of `rows` from the identity. Exact
/// rows are compared exactly, so an exact orthonormal set returns `0.0`.
fn gram_deviation<'a, I>(rows: I) -> f64
where
    I: IntoIterator<Item = &'a CoeffMatrix>,
    I::IntoIter: Clone,
{
    let rows: Vec<&CoeffMatrix> = rows.into_iter().collect();
    let mut worst = 0.0f64;
    for (a, ra) in rows.iter().enumerate() {
        for (b, rb) in rows.iter().enumerate().skip(a) {
            let g = dot(ra, rb);
            let target = if a == b { Real::one() } else { Real::zero() };
            let dev = g - target;
            let dev = match dev.exact() {
                Some(r) if r.is_zero() => 0.0,
                _ => dev.value().abs(),
            };
            worst = worst.max(dev);
        }
    }
    worst
}

fn eta_deviation(eta: &[[Real; 3]; 3]) -> f64 {
    let rows: Vec<CoeffMatrix> = eta.iter().map(|r| vec![r.to_vec()]).collect();
    gram_deviation(&rows)
}

impl JointBasis {
    /// Builds a basis from labeled coefficient matrices and checks that the
    /// eigenstates are orthonormal and complete. Labels missing from
    /// `coarse` map to themselves.
    pub fn custom(
        dim: usize,
        states: Vec<(Label, CoeffMatrix)>,
        coarse: BTreeMap<Label, Label>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("local dimension must be at least 2, got {dim}")));
        }
        if states.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "a basis on {dim}x{dim} needs {} eigenstates, got {}",
                dim * dim,
                states.len()
            )));
        }
        for (label, c) in &states {
            if c.len() != dim || c.iter().any(|row| row.len() != dim) {
                return Err(Error::DimensionMismatch(format!(
                    "eigenstate `{label}` is not a {dim}x{dim} matrix"
                )));
            }
        }
        let (labels, eigenstates): (Vec<Label>, Vec<CoeffMatrix>) = states.into_iter().unzip();
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::Domain("duplicate eigenstate labels".into()));
        }
        let deviation = gram_deviation(&eigenstates);
        if deviation > GRAM_TOL {
            return Err(Error::NotOrthogonal { max_deviation: deviation });
        }
        let coarse = labels
            .iter()
            .map(|l| (*l, coarse.get(l).copied().unwrap_or(*l)))
            .collect();
        Ok(Self { dim, labels, eigenstates, coarse })
    }

    /// `{↑=|01⟩, ↓=|10⟩, χ₀=u|00⟩+v|11⟩, χ₁=v|00⟩−u|11⟩}` with `v=√(1−u²)`.
    pub fn qubit(u: Real) -> Result<Self> {
        let x = u.value();
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain(format!("u must lie in (0,1), got {x}")));
        }
        let v = (Real::one() - u.square())
            .sqrt()
            .ok_or_else(|| Error::Domain("u too large".into()))?;
        let chi0 = vec![vec![u.clone(), Real::zero()], vec![Real::zero(), v.clone()]];
        let chi1 = vec![vec![v, Real::zero()], vec![Real::zero(), -u]];
        let coarse = [(Label::Chi(0), Label::ChiAny), (Label::Chi(1), Label::ChiAny)]
            .into_iter()
            .collect();
        Self::custom(
            2,
            vec![
                (Label::Up, product_state(2, 0, 1)),
                (Label::Down, product_state(2, 1, 0)),
                (Label::Chi(0), chi0),
                (Label::Chi(1), chi1),
            ],
            coarse,
        )
    }

    /// Qubit basis from the squared parameter `u²`, exact when the square
    /// roots can be represented.
    pub fn qubit_from_square(u_sq: &BigRational) -> Result<Self> {
        if !u_sq.is_positive() || *u_sq >= BigRational::one() {
            return Err(Error::Domain(format!("u^2 must lie in (0,1), got {u_sq}")));
        }
        Self::qubit(Real::sqrt_rational(u_sq))
    }

    /// Nine-element qutrit basis:
    /// `ĩ = |ii⟩`,
    /// `χᵢ↑ = η↑[i][0]|01⟩ + η↑[i][1]|02⟩ + η↑[i][2]|12⟩`,
    /// `χᵢ↓ = η↓[i][0]|10⟩ + η↓[i][1]|20⟩ + η↓[i][2]|21⟩`.
    pub fn qutrit(eta_up: &[[Real; 3]; 3], eta_down: &[[Real; 3]; 3]) -> Result<Self> {
        for eta in [eta_up, eta_down] {
            let deviation = eta_deviation(eta);
            if deviation > ETA_TOL {
                return Err(Error::NotOrthogonal { max_deviation: deviation });
            }
        }
        let mut states = Vec::with_capacity(9);
        for i in 0..3 {
            states.push((Label::Tilde(i as u8), product_state(3, i, i)));
        }
        let up_slots = [(0, 1), (0, 2), (1, 2)];
        let down_slots = [(1, 0), (2, 0), (2, 1)];
        let mut coarse = BTreeMap::new();
        for (eta, slots, make, any) in [
            (eta_up, up_slots, Label::ChiUp as fn(u8) -> Label, Label::ChiUpAny),
            (eta_down, down_slots, Label::ChiDown as fn(u8) -> Label, Label::ChiDownAny),
        ] {
            for (i, row) in eta.iter().enumerate() {
                let mut c = zero_matrix(3);
                for (k, (a, b)) in slots.iter().enumerate() {
                    c[*a][*b] = row[k].clone();
                }
                states.push((make(i as u8), c));
                coarse.insert(make(i as u8), any);
            }
        }
        let basis = Self::custom(3, states, coarse)?;
        Ok(basis)
    }

    /// The η↑ and η↓ matrices of the worked qutrit example.
    pub fn qutrit_example_eta() -> ([[Real; 3]; 3], [[Real; 3]; 3]) {
        let s = Real::sqrt_ratio;
        let eta_up = [
            [s(1, 3), s(1, 2), s(1, 6)],
            [s(1, 3), -s(1, 2), s(1, 6)],
            [s(1, 3), Real::zero(), -s(2, 3)],
        ];
        let eta_down = [
            [s(2, 5), s(3, 5), Real::zero()],
            [s(3, 5), -s(2, 5), Real::zero()],
            [Real::zero(), Real::zero(), Real::one()],
        ];
        (eta_up, eta_down)
    }

    pub fn qutrit_example() -> Self {
        let (up, down) = Self::qutrit_example_eta();
        Self::qutrit(&up, &down).expect("example basis is orthonormal")
    }

    pub fn identity_eta() -> [[Real; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { Real::one() } else { Real::zero() })
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn eigenstates(&self) -> &[CoeffMatrix] {
        &self.eigenstates
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    pub fn coarse(&self, label: Label) -> Label {
        self.coarse.get(&label).copied().unwrap_or(label)
    }

    /// Distinct coarse labels in order of first appearance.
    pub fn coarse_labels(&self) -> Vec<Label> {
        let mut out: Vec<Label> = Vec::new();
        for l in &self.labels {
            let c = self.coarse(*l);
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.eigenstates.iter().flatten().flatten().all(Real::is_exact)
    }

    pub fn to_float(&self) -> Self {
        Self {
            eigenstates: self
                .eigenstates
                .iter()
                .map(|c| c.iter().map(|r| r.iter().map(Real::to_float).collect()).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// Largest deviation of the eigenstate Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        gram_deviation(&self.eigenstates)
    }
}
