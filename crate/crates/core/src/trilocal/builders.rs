//! Explicit classical models for the qubit triangle with maximally entangled
//! sources.

use serde::Serialize;

use super::model::{PartyResponse, TrilocalModel};
use super::skeleton::CoarseSkeleton;
use crate::certificates::threshold::{u_threshold_sq, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::exact::Real;
use crate::label::Label;

fn qubit_outputs() -> Vec<Label> {
    vec![Label::Up, Label::Down, Label::Chi(0), Label::Chi(1)]
}

/// Model for `u² = ½`: each source emits a skeleton bit and a fair coin, all
/// four pairs with weight ¼. A χ party outputs `χ_c` with `c` the XOR of its
/// two coins.
pub fn uniform_chi_model() -> Result<TrilocalModel> {
    // letter = 2·bit + coin
    let response = PartyResponse::deterministic(qubit_outputs(), 4, 4, |l, r| {
        match CoarseSkeleton::coarse_output((l / 2) as u8, (r / 2) as u8) {
            Label::ChiAny => Label::Chi(((l ^ r) & 1) as u8),
            other => other,
        }
    })?;
    TrilocalModel::new(vec![vec![Real::ratio(1, 4); 4]; 3], vec![response; 3])
}

/// Largest residual accepted by [`solve_boundary_params`].
pub const BOUNDARY_RESIDUAL_TOL: f64 = 1e-10;

/// Parameters of the model at the edge of the trilocal region. The `t=0`
/// side of each source carries a trit with weights `kappa`, the `t=1` side a
/// bit with weights `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryParams {
    pub u_sq: f64,
    pub kappa: [f64; 3],
    pub tau: [f64; 2],
}

impl BoundaryParams {
    /// Completes `κ₁ = (1−u²)/(2κ₀)`, `κ₂ = 1−κ₀−κ₁`, `τ₁ = 1−τ₀`.
    pub fn new(u_sq: f64, kappa0: f64, tau0: f64) -> Result<Self> {
        if !(u_sq > 0.5 && u_sq < 1.0) {
            return Err(Error::Domain(format!("u^2 must lie in (1/2,1), got {u_sq}")));
        }
        let kappa1 = (1.0 - u_sq) / (2.0 * kappa0);
        let kappa = [kappa0, kappa1, 1.0 - kappa0 - kappa1];
        let tau = [tau0, 1.0 - tau0];
        if kappa.iter().chain(&tau).any(|w| !(*w >= 0.0 && *w <= 1.0)) {
            return Err(Error::InvalidModel(format!(
                "weights out of range: kappa {kappa:?}, tau {tau:?}"
            )));
        }
        Ok(Self { u_sq, kappa, tau })
    }
}

/// Index `4i + 2j + k` for the output `(χᵢ, χⱼ, χₖ)` of the three parties.
fn chi_index(sub: [usize; 3]) -> usize {
    sub[0] * 4 + sub[1] * 2 + sub[2]
}

/// Sub-label of a χ party on the `t=0` side: χ₁ iff the trits are {0,1}.
fn trit_rule(left: usize, right: usize) -> usize {
    usize::from(matches!((left, right), (0, 1) | (1, 0)))
}

/// Sub-label of a χ party on the `t=1` side: χ₀ iff left is 0 and right is 1.
fn bit_rule(left: usize, right: usize) -> usize {
    usize::from((left, right) != (0, 1))
}

/// Distribution of `(χᵢ, χⱼ, χₖ)` when all three sources emit the same
/// skeleton bit, for the given sub-value weights and rule.
fn sub_distribution(weights: &[f64], rule: fn(usize, usize) -> usize) -> [f64; 8] {
    let m = weights.len();
    let mut p = [0.0; 8];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let s = [a, b, c];
                let sub: [usize; 3] = std::array::from_fn(|k| rule(s[(k + 2) % 3], s[k]));
                p[chi_index(sub)] += weights[a] * weights[b] * weights[c];
            }
        }
    }
    p
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryResiduals {
    /// `q(i,j,k) − ½(uᵢuⱼuₖ + vᵢvⱼvₖ)²`, indexed by `4i + 2j + k`.
    pub joint: [f64; 8],
    /// `q(party=x, χᵢ, t) − ½uᵢ²` (`t=0`) or `− ½vᵢ²` (`t=1`), indexed by
    /// `4x + 2t + i`.
    pub marginal: [f64; 12],
}

impl BoundaryResiduals {
    pub fn max_abs(&self) -> f64 {
        self.joint.iter().chain(&self.marginal).fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Residuals of the marginal system when `q(i,j,k,t)` is half the
/// all-agree distribution of side `t`.
pub fn boundary_residuals(params: &BoundaryParams) -> BoundaryResiduals {
    let u = params.u_sq.sqrt();
    let v = (1.0 - params.u_sq).sqrt();
    let (us, vs) = ([u, v], [v, -u]);
    let p = [sub_distribution(&params.kappa, trit_rule), sub_distribution(&params.tau, bit_rule)];
    let joint = std::array::from_fn(|idx| {
        let (i, j, k) = (idx >> 2, (idx >> 1) & 1, idx & 1);
        let target = (us[i] * us[j] * us[k] + vs[i] * vs[j] * vs[k]).powi(2);
        0.5 * (p[0][idx] + p[1][idx]) - 0.5 * target
    });
    let marginal = std::array::from_fn(|idx| {
        let (party, t, i) = (idx / 4, (idx / 2) % 2, idx % 2);
        let mass: f64 = (0..8).filter(|o| (o >> (2 - party)) & 1 == i).map(|o| p[t][o]).sum();
        let target = if t == 0 { us[i] * us[i] } else { vs[i] * vs[i] };
        0.5 * mass - 0.5 * target
    });
    BoundaryResiduals { joint, marginal }
}

/// `u²` at which the inequality is tight for maximally entangled sources.
pub fn boundary_u_sq() -> Result<f64> {
    u_threshold_sq(0.5, DEFAULT_TOL)?
        .u_sq()
        .ok_or_else(|| Error::NoSolution("no threshold at lambda0^2 = 1/2".into()))
}

/// Solves for `τ₀` from `τ₀τ₁ = 1−u²` and for `κ₀` by bisection on the
/// `(χ₀,χ₀,χ₀)` residual, then checks every residual against `1e-10`.
pub fn solve_boundary_params(u_sq: f64) -> Result<(BoundaryParams, BoundaryResiduals)> {
    if !(u_sq > 0.5 && u_sq < 1.0) {
        return Err(Error::Domain(format!("u^2 must lie in (1/2,1), got {u_sq}")));
    }
    let v_sq = 1.0 - u_sq;
    let disc = 1.0 - 4.0 * v_sq;
    if disc < 0.0 {
        return Err(Error::NoSolution(format!("no tau0 with tau0*tau1 = {v_sq}")));
    }
    let tau0 = 0.5 * (1.0 + disc.sqrt());
    // κ₂ ≥ 0 confines κ₀ between the roots of κ² − κ + v²/2; swapping trits
    // 0 and 1 maps solutions to solutions, so only κ₀ ≥ κ₁ is searched
    let root = (1.0 - 2.0 * v_sq).sqrt();
    let (lo, hi) = ((0.5 * v_sq).sqrt().max(0.5 * (1.0 - root)), 0.5 * (1.0 + root));
    let f = |k0: f64| -> Option<f64> {
        let p = BoundaryParams::new(u_sq, k0, tau0).ok()?;
        Some(boundary_residuals(&p).joint[0])
    };

    const SCAN: usize = 1000;
    let mut best: Option<(BoundaryParams, BoundaryResiduals)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for s in 1..SCAN {
        let k = lo + (hi - lo) * s as f64 / SCAN as f64;
        let Some(fk) = f(k) else { continue };
        if let Some((pk, pf)) = prev {
            if (pf < 0.0) != (fk < 0.0) {
                let (mut a, mut b, mut fa) = (pk, k, pf);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    let fm = f(mid).unwrap_or(f64::NAN);
                    if (fm < 0.0) == (fa < 0.0) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                let params = BoundaryParams::new(u_sq, 0.5 * (a + b), tau0)?;
                let res = boundary_residuals(&params);
                if best.as_ref().is_none_or(|(_, r)| res.max_abs() < r.max_abs()) {
                    best = Some((params, res));
                }
            }
        }
        prev = Some((k, fk));
    }
    match best {
        Some((p, r)) if r.max_abs() <= BOUNDARY_RESIDUAL_TOL => Ok((p, r)),
        Some((_, r)) => Err(Error::NoSolution(format!(
            "smallest marginal residual at u^2 = {u_sq} is {:.3e}",
            r.max_abs()
        ))),
        None => Err(Error::NoSolution(format!("no kappa0 root at u^2 = {u_sq}"))),
    }
}

/// Full model: each source emits `(t, s)` with weight `½κ_s` for `t=0` and
/// `½τ_s` for `t=1`. Parties with different bits answer ↑/↓ by the
/// skeleton; parties with equal bits use the trit rule (`t=0`) or the bit
/// rule (`t=1`) on their two sub-values.
pub fn boundary_model(params: &BoundaryParams) -> Result<TrilocalModel> {
    let checked = BoundaryParams::new(params.u_sq, params.kappa[0], params.tau[0])?;
    if (checked.kappa[2] - params.kappa[2]).abs() > 1e-12 {
        return Err(Error::InvalidModel("kappa weights are inconsistent".into()));
    }
    let mut letters = Vec::new();
    let mut weights = Vec::new();
    for (t, side) in [(0u8, &params.kappa[..]), (1u8, &params.tau[..])] {
        for (s, w) in side.iter().enumerate() {
            letters.push((t, s));
            weights.push(Real::float(0.5 * w));
        }
    }
    let response = PartyResponse::deterministic(qubit_outputs(), letters.len(), letters.len(), |l, r| {
        let ((tl, sl), (tr, sr)) = (letters[l], letters[r]);
        match (tl, tr) {
            (0, 0) => Label::Chi(trit_rule(sl, sr) as u8),
            (1, 1) => Label::Chi(bit_rule(sl, sr) as u8),
            _ => CoarseSkeleton::coarse_output(tl, tr),
        }
    })?;
    TrilocalModel::new(vec![weights; 3], vec![response; 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{coarse_grain, cycle_distribution, total_variation};
    use crate::exact::rational;
    use crate::network::CycleNetwork;
    use crate::basis::JointBasis;
    use crate::state::SchmidtState;

    #[test]
    fn uniform_chi_matches_quantum_exactly() {
        let net = CycleNetwork::qubit_triangle(&rational(1, 2), &rational(1, 2)).unwrap();
        let quantum = cycle_distribution(&net).unwrap();
        let model = uniform_chi_model().unwrap().evaluate().unwrap();
        assert!(model.is_exact() && quantum.is_exact());
        assert_eq!(model, quantum);
    }

    #[test]
    fn boundary_params_at_threshold() {
        let u_sq = boundary_u_sq().unwrap();
        let (p, r) = solve_boundary_params(u_sq).unwrap();
        assert!(r.max_abs() < BOUNDARY_RESIDUAL_TOL, "{r:?}");
        // τ₀τ₁ = v²
        assert!((p.tau[0] * p.tau[1] - (1.0 - u_sq)).abs() < 1e-15);
        assert!((p.kappa[0] - 0.7081948733752483).abs() < 1e-9, "{}", p.kappa[0]);
        let off = BoundaryParams::new(u_sq, p.kappa[0] + 1e-3, p.tau[0]).unwrap();
        assert!(boundary_residuals(&off).max_abs() > 1e-5);
    }

    #[test]
    fn boundary_model_reproduces_quantum() {
        let u_sq = boundary_u_sq().unwrap();
        let (p, _) = solve_boundary_params(u_sq).unwrap();
        let model = boundary_model(&p).unwrap().evaluate().unwrap();
        let basis = JointBasis::qubit(Real::float(u_sq.sqrt())).unwrap();
        let net = CycleNetwork::uniform(3, SchmidtState::maximally_entangled(2).unwrap(), basis).unwrap();
        let quantum = cycle_distribution(&net).unwrap();
        assert!(total_variation(&model, &quantum).unwrap() < 1e-6);
        let coarse = total_variation(
            &coarse_grain(&model, &net).unwrap(),
            &coarse_grain(&quantum, &net).unwrap(),
        )
        .unwrap();
        assert!(coarse < 1e-12);
    }

    #[test]
    fn no_solution_above_threshold() {
        assert!(matches!(solve_boundary_params(0.95), Err(Error::NoSolution(_))));
        assert!(matches!(solve_boundary_params(1.2), Err(Error::Domain(_))));
    }
}
