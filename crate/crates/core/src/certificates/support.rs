//! Structural zeros that every distribution in a scenario family must show.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::engine::OutcomeDistribution;
use crate::label::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportKind {
    /// Any cycle with the qubit basis.
    QubitCycle,
    /// Triangle with a qutrit basis.
    QutritTriangle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    /// True if every deviation is at most `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

/// Mass of the outcomes selected by `pred`, exact when possible.
fn mass(dist: &OutcomeDistribution, pred: impl Fn(&[Label]) -> bool) -> f64 {
    match dist.exact_probs() {
        Some(exact) => {
            let s: BigRational = (0..dist.len())
                .filter(|i| pred(&dist.outcome(*i)))
                .map(|i| exact[i].clone())
                .sum();
            s.to_f64().unwrap_or(f64::NAN)
        }
        None => (0..dist.len())
            .filter(|i| pred(&dist.outcome(*i)))
            .map(|i| dist.probs()[i])
            .sum(),
    }
}

fn push_zero(report: &mut ConstraintReport, name: String, observed: f64) {
    report.checks.push(ConstraintCheck { name, expected: 0.0, observed, deviation: observed.abs() });
}

fn is_chi_down(l: Label) -> bool {
    matches!(l, Label::ChiDown(_) | Label::ChiDownAny)
}

/// Checks pairwise zeros between neighbours and, for qubit cycles, that the
/// number of χ outputs has the parity of the cycle length. Violations are reported, not
/// raised.
pub fn check_support_constraints(dist: &OutcomeDistribution, kind: SupportKind) -> ConstraintReport {
    let n = dist.arity();
    let mut report = ConstraintReport::default();
    match kind {
        SupportKind::QubitCycle => {
            for k in 0..n {
                let next = (k + 1) % n;
                for (label, name) in [(Label::Up, "up"), (Label::Down, "down")] {
                    let observed = mass(dist, |o| o[k] == label && o[next] == label);
                    push_zero(&mut report, format!("P(a{k}={name}, a{next}={name})"), observed);
                }
            }
            // the number of χ outputs has the parity of N
            let observed = mass(dist, |o| o.iter().filter(|l| l.is_chi()).count() % 2 != n % 2);
            push_zero(&mut report, "P(wrong chi parity)".into(), observed);
        }
        SupportKind::QutritTriangle => {
            for k in 0..n {
                let next = (k + 1) % n;
                for i in 0..3u8 {
                    for j in (0..3u8).filter(|j| *j != i) {
                        let observed =
                            mass(dist, |o| o[k] == Label::Tilde(i) && o[next] == Label::Tilde(j));
                        push_zero(&mut report, format!("P(a{k}=t{i}, a{next}=t{j})"), observed);
                    }
                }
                let observed = mass(dist, |o| o[k] == Label::Tilde(0) && is_chi_down(o[next]));
                push_zero(&mut report, format!("P(a{k}=t0, a{next} in chid)"), observed);
                let observed = mass(dist, |o| is_chi_down(o[k]) && o[next] == Label::Tilde(2));
                push_zero(&mut report, format!("P(a{k} in chid, a{next}=t2)"), observed);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::JointBasis;
    use crate::engine::cycle_distribution;
    use crate::exact::rational;
    use crate::network::CycleNetwork;

    #[test]
    fn quantum_triangle_passes() {
        let net = CycleNetwork::qubit_triangle(&rational(1, 2), &rational(4, 5)).unwrap();
        let d = cycle_distribution(&net).unwrap();
        let r = check_support_constraints(&d, SupportKind::QubitCycle);
        assert_eq!(r.checks.len(), 7);
        assert_eq!(r.max_deviation(), 0.0);
    }

    #[test]
    fn uniform_violates_parity_by_half() {
        let labels = vec![vec![Label::Up, Label::Down, Label::Chi(0), Label::Chi(1)]; 3];
        let d = OutcomeDistribution::from_exact(labels, vec![rational(1, 64); 64]).unwrap();
        let r = check_support_constraints(&d, SupportKind::QubitCycle);
        let parity = r.checks.iter().find(|c| c.name.contains("parity")).unwrap();
        assert_eq!(parity.deviation, 0.5);
    }

    #[test]
    fn qutrit_triangle_passes() {
        let net = CycleNetwork::qutrit_triangle(JointBasis::qutrit_example()).unwrap();
        let d = cycle_distribution(&net).unwrap();
        let r = check_support_constraints(&d, SupportKind::QutritTriangle);
        assert_eq!(r.checks.len(), 3 * 8);
        assert_eq!(r.max_deviation(), 0.0);
    }
}
