//! The inequality that every trilocal model of the qubit triangle with
//! sources `λ₀|00⟩+λ₁|11⟩` must satisfy, and the largest `u²` for which it
//! holds.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Real;

/// Default bisection tolerance on `u²`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Grid points scanned before bisection.
pub const GRID_POINTS: usize = 1000;
/// Smallest `1 − u²` on the scan grid.
const GRID_GAP_MIN: f64 = 1e-7;

fn check_open_unit(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("{name} must lie in (0,1), got {x}")));
    }
    Ok(())
}

/// `3(λ₀³u²v − λ₁³uv²)² − 3u²(λ₀⁶+λ₁⁶) + 2(λ₁⁶ + (λ₀³u³+λ₁³v³)²) + λ₀⁶ + (λ₀³v³−λ₁³u³)²`
/// with `λ₁ = √(1−λ₀²)` and `v = √(1−u²)`. Exact inputs give an exact value.
pub fn ineq_lhs(lambda0: &Real, u: &Real) -> Result<Real> {
    check_open_unit("lambda0", lambda0.value())?;
    check_open_unit("u", u.value())?;
    let one = Real::one();
    let lambda1 = (&one - &lambda0.square()).sqrt().expect("lambda0 < 1");
    let v = (&one - &u.square()).sqrt().expect("u < 1");
    let l0_3 = &lambda0.square() * lambda0;
    let l1_3 = &lambda1.square() * &lambda1;
    let l0_6 = l0_3.square();
    let l1_6 = l1_3.square();
    let u2 = u.square();
    let v2 = v.square();
    let u3 = &u2 * u;
    let v3 = &v2 * &v;
    let three = Real::from(3);
    let two = Real::from(2);

    let t1 = &three * &(&(&l0_3 * &(&u2 * &v)) - &(&l1_3 * &(u * &v2))).square();
    let t2 = &(&three * &u2) * &(&l0_6 + &l1_6);
    let t3 = &two * &(&l1_6 + &(&(&l0_3 * &u3) + &(&l1_3 * &v3)).square());
    let t5 = (&(&l0_3 * &v3) - &(&l1_3 * &u3)).square();
    Ok(&(&(&(&t1 - &t2) + &t3) + &l0_6) + &t5)
}

/// `f64` version of [`ineq_lhs`] on squared parameters.
///
/// Uses the equivalent form `2v³(λ₀⁶v³ − 2λ₀³λ₁³u³ + λ₁⁶v(3−v²))`, which
/// keeps its relative accuracy as `u → 1` where the expanded form cancels.
pub fn ineq_lhs_f64(lambda0_sq: f64, u_sq: f64) -> f64 {
    let a = lambda0_sq * lambda0_sq.sqrt();
    let b = (1.0 - lambda0_sq) * (1.0 - lambda0_sq).sqrt();
    let v_sq = 1.0 - u_sq;
    let u = u_sq.sqrt();
    let v = v_sq.sqrt();
    let v3 = v_sq * v;
    2.0 * v3 * (a * a * v3 - 2.0 * a * b * u_sq * u + b * b * v * (3.0 - v_sq))
}

/// Sign of the inequality's left side, exact when the value is exact and
/// involves at most one square root.
pub fn ineq_sign(lambda0: &Real, u: &Real) -> Result<Ordering> {
    let lhs = ineq_lhs(lambda0, u)?;
    Ok(match lhs.exact().and_then(|r| r.as_surd()) {
        Some(s) => s.signum(),
        None => lhs.value().partial_cmp(&0.0).unwrap_or(Ordering::Equal),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Threshold {
    /// Above `u_sq` the inequality fails.
    Root { u_sq: f64 },
    /// No sign change on the scanned range.
    NoThreshold,
}

impl Threshold {
    pub fn u_sq(self) -> Option<f64> {
        match self {
            Threshold::Root { u_sq } => Some(u_sq),
            Threshold::NoThreshold => None,
        }
    }
}

/// Scan grid in `u²` from `½` towards 1, with `1 − u²` spaced geometrically
/// from `½` down to `1e-7`.
fn scan_grid() -> Vec<f64> {
    let (hi, lo) = (0.5f64.ln(), GRID_GAP_MIN.ln());
    (0..GRID_POINTS)
        .map(|k| {
            let gap = (hi + (lo - hi) * k as f64 / (GRID_POINTS - 1) as f64).exp();
            1.0 - gap
        })
        .collect()
}

/// Largest `u² ∈ (½, 1)` at which [`ineq_lhs`] is still non-negative, found
/// by a grid scan followed by bisection to `tol`.
pub fn u_threshold_sq(lambda0_sq: f64, tol: f64) -> Result<Threshold> {
    check_open_unit("lambda0^2", lambda0_sq)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let f = |u_sq: f64| ineq_lhs_f64(lambda0_sq, u_sq);
    let grid = scan_grid();
    if f(grid[0]) < 0.0 {
        return Ok(Threshold::NoThreshold);
    }
    let Some(k) = (0..grid.len() - 1).rev().find(|&k| f(grid[k]) >= 0.0) else {
        return Ok(Threshold::NoThreshold);
    };
    if f(grid[k + 1]) >= 0.0 {
        return Ok(Threshold::NoThreshold);
    }
    let (mut lo, mut hi) = (grid[k], grid[k + 1]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Threshold::Root { u_sq: 0.5 * (lo + hi) })
}

/// [`u_threshold_sq`] taking `λ₀` itself.
pub fn u_threshold(lambda0: f64) -> Result<Threshold> {
    check_open_unit("lambda0", lambda0)?;
    u_threshold_sq(lambda0 * lambda0, DEFAULT_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub lambda0_sq: f64,
    pub threshold: Threshold,
}

/// Thresholds for many `λ₀²` values, computed in parallel and returned in
/// input order.
pub fn threshold_sweep(lambda0_sq: &[f64], tol: f64) -> Result<Vec<ThresholdPoint>> {
    lambda0_sq
        .par_iter()
        .map(|&l| Ok(ThresholdPoint { lambda0_sq: l, threshold: u_threshold_sq(l, tol)? }))
        .collect()
}

/// `(−3 + c^{2/3}) / (2 c^{1/3})` with `c = 9 + 6√3`: a closed form for the
/// threshold at `λ₀² = ½`.
pub fn symmetric_threshold_closed_form() -> f64 {
    let c = 9.0 + 6.0 * 3f64.sqrt();
    (-3.0 + c.powf(2.0 / 3.0)) / (2.0 * c.cbrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    #[test]
    fn expanded_and_factored_forms_agree() {
        for (l, u) in [(5, 50), (3, 80), (7, 95), (1, 99)] {
            let exact = ineq_lhs(
                &Real::sqrt_rational(&rational(l, 10)),
                &Real::sqrt_rational(&rational(u, 100)),
            )
            .unwrap();
            let float = ineq_lhs_f64(l as f64 / 10.0, u as f64 / 100.0);
            assert!((exact.value() - float).abs() < 1e-14, "{l} {u}");
        }
    }

    #[test]
    fn symmetric_point_signs() {
        let l0 = Real::sqrt_ratio(1, 2);
        assert_eq!(ineq_sign(&l0, &Real::sqrt_ratio(1, 2)).unwrap(), Ordering::Greater);
        assert_eq!(ineq_sign(&l0, &Real::sqrt_ratio(79, 100)).unwrap(), Ordering::Less);
        assert!(ineq_lhs(&Real::one(), &l0).is_err());
    }

    #[test]
    fn thresholds() {
        let t = u_threshold_sq(0.5, DEFAULT_TOL).unwrap().u_sq().unwrap();
        assert!((t - 0.785).abs() < 1e-3);
        assert!(ineq_lhs_f64(0.5, t).abs() < 1e-9);
        assert!((t - symmetric_threshold_closed_form()).abs() < 1e-9);
        let t = u_threshold_sq(2.0 / 3.0, DEFAULT_TOL).unwrap().u_sq().unwrap();
        assert!((t - 2.0 / 3.0).abs() < 1e-6);
        // the root approaches u² = 1 at both ends and leaves the scanned range
        let t = u_threshold_sq(0.01, DEFAULT_TOL).unwrap().u_sq().unwrap();
        assert!(t > 0.99999 && t < 1.0);
        assert_eq!(u_threshold_sq(1e-4, DEFAULT_TOL).unwrap(), Threshold::NoThreshold);
        assert_eq!(u_threshold_sq(1.0 - 1e-10, DEFAULT_TOL).unwrap(), Threshold::NoThreshold);
    }
}
