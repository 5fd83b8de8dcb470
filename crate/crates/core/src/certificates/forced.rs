//! Zero propagation on the qutrit marginal problem.
//!
//! The unknowns `q(i,j,t)` are read as two 3×3 matrices `M₁, M₂`
//! (`Mₜ[i][j] = q(i,j,t)`). Every marginal equal to zero forces the entries
//! it sums to vanish, since all entries are non-negative. After that, any
//! marginal with a single undetermined entry fixes that entry. When every
//! entry gets fixed this way the candidate is unique, and a negative entry
//! proves infeasibility.

use serde::Serialize;

use super::problems::qutrit_marginals;
use crate::error::Result;
use crate::exact::{Real, Surd};

pub type Matrix3 = [[Surd; 3]; 3];

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ForcedSolution {
    Forced {
        m1: Matrix3,
        m2: Matrix3,
        /// Every marginal holds for the forced values.
        consistent: bool,
    },
    /// Propagation stalled with this many entries still free.
    NotForced { undetermined: usize },
}

impl ForcedSolution {
    /// Entries below zero, as `(t, i, j, value)`.
    pub fn negative_entries(&self) -> Vec<(usize, usize, usize, Surd)> {
        let ForcedSolution::Forced { m1, m2, .. } = self else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (t, m) in [(1, m1), (2, m2)] {
            for i in 0..3 {
                for j in 0..3 {
                    if m[i][j] < Surd::zero() {
                        out.push((t, i, j, m[i][j].clone()));
                    }
                }
            }
        }
        out
    }
}

/// A marginal: the cells it sums and its value.
struct Marginal {
    cells: Vec<(usize, usize, usize)>,
    value: Surd,
}

pub fn qutrit_forced_solution(
    eta_up: &[[Real; 3]; 3],
    eta_down: &[[Real; 3]; 3],
) -> Result<ForcedSolution> {
    let (pair, up, down) = qutrit_marginals(eta_up, eta_down)?;
    let mut marginals = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            marginals.push(Marginal { cells: vec![(0, i, j), (1, i, j)], value: pair[i][j].clone() });
        }
    }
    for x in 0..3 {
        for t in 0..2 {
            marginals.push(Marginal {
                cells: (0..3).map(|y| (t, x, y)).collect(),
                value: up[x][t].clone(),
            });
            marginals.push(Marginal {
                cells: (0..3).map(|y| (t, y, x)).collect(),
                value: down[x][t].clone(),
            });
        }
    }

    let mut value: [[[Option<Surd>; 3]; 3]; 2] = Default::default();
    for m in &marginals {
        if m.value.is_zero() {
            for &(t, i, j) in &m.cells {
                value[t][i][j] = Some(Surd::zero());
            }
        }
    }
    loop {
        let mut progress = false;
        for m in &marginals {
            let open: Vec<_> = m.cells.iter().filter(|(t, i, j)| value[*t][*i][*j].is_none()).collect();
            if let [&(t, i, j)] = open.as_slice() {
                let known = m
                    .cells
                    .iter()
                    .filter_map(|(a, b, c)| value[*a][*b][*c].as_ref())
                    .fold(Surd::zero(), |s, x| &s + x);
                value[t][i][j] = Some(&m.value - &known);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }

    let undetermined = value.iter().flatten().flatten().filter(|x| x.is_none()).count();
    if undetermined > 0 {
        return Ok(ForcedSolution::NotForced { undetermined });
    }
    let get = |t: usize| -> Matrix3 {
        std::array::from_fn(|i| std::array::from_fn(|j| value[t][i][j].clone().expect("determined")))
    };
    let (m1, m2) = (get(0), get(1));
    let consistent = marginals.iter().all(|m| {
        let s = m.cells.iter().fold(Surd::zero(), |s, &(t, i, j)| {
            &s + if t == 0 { &m1[i][j] } else { &m2[i][j] }
        });
        s == m.value
    });
    Ok(ForcedSolution::Forced { m1, m2, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::JointBasis;
    use crate::exact::rational;

    fn mat(rows: [[(i64, i64); 3]; 3]) -> Matrix3 {
        rows.map(|r| r.map(|(p, q)| Surd::from_rational(rational(p, q))))
    }

    #[test]
    fn example_basis_forces_negative_entry() {
        let (up, down) = JointBasis::qutrit_example_eta();
        let forced = qutrit_forced_solution(&up, &down).unwrap();
        let m1 = mat([[(1, 6), (0, 1), (0, 1)], [(-1, 30), (1, 5), (0, 1)], [(1, 15), (1, 10), (0, 1)]]);
        let m2 = mat([[(1, 4), (0, 1), (0, 1)], [(1, 20), (1, 5), (0, 1)], [(0, 1), (0, 1), (0, 1)]]);
        assert_eq!(forced, ForcedSolution::Forced { m1, m2, consistent: true });
        assert_eq!(
            forced.negative_entries(),
            vec![(1, 1, 0, Surd::from_rational(rational(-1, 30)))]
        );
    }

    #[test]
    fn identity_eta_is_forced_and_nonnegative() {
        let id = JointBasis::identity_eta();
        let forced = qutrit_forced_solution(&id, &id).unwrap();
        let ForcedSolution::Forced { m1, m2, consistent } = &forced else {
            panic!("identity should be forced");
        };
        assert!(consistent);
        assert_eq!(m1[0][0], Surd::from_rational(rational(1, 2)));
        assert_eq!(m2[1][1], Surd::from_rational(rational(1, 2)));
        assert!(forced.negative_entries().is_empty());
    }
}
