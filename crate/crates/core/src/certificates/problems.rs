//! Marginal feasibility problems whose infeasibility rules out a classical
//! model.
//!
//! Each builder takes squared parameters as exact rationals. Right-hand
//! sides may involve one square root and are stored as [`Surd`] values.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::lp::FeasibilityProblem;
use crate::error::{Error, Result};
use crate::exact::{Radical, Real, Surd};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn check_unit(name: &str, q: &BigRational) -> Result<()> {
    if !q.is_positive() || *q >= BigRational::one() {
        return Err(Error::Domain(format!("{name} must lie in (0,1), got {q}")));
    }
    Ok(())
}

fn surd(r: &Radical) -> Result<Surd> {
    r.as_surd()
        .ok_or_else(|| Error::InexactData(format!("{r} needs more than one square root")))
}

fn sqrt(q: &BigRational) -> Result<Radical> {
    Radical::sqrt_of(q).ok_or_else(|| Error::InexactData(format!("cannot factor {q}")))
}

fn mul(a: &Radical, b: &Radical) -> Result<Radical> {
    a.checked_mul(b).ok_or_else(|| Error::InexactData("radicand overflow".into()))
}

/// Flat index of `q(i,j,k,t)` in the triangle problem.
pub fn triangle_var(i: usize, j: usize, k: usize, t: usize) -> usize {
    i * 8 + j * 4 + k * 2 + t
}

/// `(λ₀³uᵢuⱼuₖ + λ₁³vᵢvⱼvₖ)² / (λ₀⁶+λ₁⁶)` with `u₀=u, u₁=v, v₀=v, v₁=−u`.
pub fn triangle_chi_weight(
    lambda0_sq: &BigRational,
    u_sq: &BigRational,
    pattern: [usize; 3],
) -> Result<Surd> {
    let lambda1_sq = BigRational::one() - lambda0_sq;
    let v_sq = BigRational::one() - u_sq;
    let l0_cubed = lambda0_sq * lambda0_sq * lambda0_sq;
    let l1_cubed = &lambda1_sq * &lambda1_sq * &lambda1_sq;
    let norm = &l0_cubed + &l1_cubed;
    let ones = pattern.iter().filter(|x| **x == 1).count() as i32;
    // ∏uᵢ² = u^{2(3−d)} v^{2d}, ∏vᵢ² = v^{2(3−d)} u^{2d}
    let u_prod_sq = num_traits::pow(u_sq.clone(), (3 - ones) as usize)
        * num_traits::pow(v_sq.clone(), ones as usize);
    let v_prod_sq = num_traits::pow(v_sq.clone(), (3 - ones) as usize)
        * num_traits::pow(u_sq.clone(), ones as usize);
    // ∏uᵢvᵢ = (uv)³ · (−1)^d
    // √(λ₀⁶λ₁⁶(uv)⁶) = b·√b with b = λ₀²λ₁²u²v²
    let base = lambda0_sq * &lambda1_sq * u_sq * &v_sq;
    let sign = if ones % 2 == 0 { int(2) } else { int(-2) };
    let cross = sqrt(&base)?.scale(&(&base * sign));
    let rational_part = Radical::from_rational(&l0_cubed * u_prod_sq + &l1_cubed * v_prod_sq);
    surd(&(&rational_part + &cross).scale(&norm.recip()))
}

/// Triangle marginal problem over `q(i,j,k,t)`, `i,j,k,t ∈ {0,1}`.
///
/// Rows: normalization, the eight χ-pattern weights `q(i,j,k)` and, for each
/// party, `q(i,t=0) = λ₀⁶/(λ₀⁶+λ₁⁶)·uᵢ²` and `q(i,t=1) = λ₁⁶/(λ₀⁶+λ₁⁶)·vᵢ²`.
pub fn triangle_marginal_problem(
    lambda0_sq: &BigRational,
    u_sq: &BigRational,
) -> Result<FeasibilityProblem> {
    check_unit("lambda0^2", lambda0_sq)?;
    check_unit("u^2", u_sq)?;
    let lambda1_sq = BigRational::one() - lambda0_sq;
    let v_sq = BigRational::one() - u_sq;
    let l0_cubed = lambda0_sq * lambda0_sq * lambda0_sq;
    let l1_cubed = &lambda1_sq * &lambda1_sq * &lambda1_sq;
    let norm = &l0_cubed + &l1_cubed;

    let mut names = vec![String::new(); 16];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for t in 0..2 {
                    names[triangle_var(i, j, k, t)] = format!("q({i},{j},{k},{t})");
                }
            }
        }
    }
    let mut p = FeasibilityProblem::new(names);
    p.add_row("sum", &(0..16).map(|x| (x, int(1))).collect::<Vec<_>>(), Surd::one());
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let rhs = triangle_chi_weight(lambda0_sq, u_sq, [i, j, k])?;
                p.add_row(
                    format!("q({i},{j},{k})"),
                    &[(triangle_var(i, j, k, 0), int(1)), (triangle_var(i, j, k, 1), int(1))],
                    rhs,
                );
            }
        }
    }
    let u_i_sq = [u_sq.clone(), v_sq.clone()];
    let v_i_sq = [v_sq.clone(), u_sq.clone()];
    for (party, pname) in ["a", "b", "c"].iter().enumerate() {
        for i in 0..2 {
            for t in 0..2 {
                let mut terms = Vec::new();
                for x in 0..2 {
                    for y in 0..2 {
                        let idx = match party {
                            0 => [i, x, y],
                            1 => [x, i, y],
                            _ => [x, y, i],
                        };
                        terms.push((triangle_var(idx[0], idx[1], idx[2], t), int(1)));
                    }
                }
                let rhs = if t == 0 {
                    &l0_cubed / &norm * &u_i_sq[i]
                } else {
                    &l1_cubed / &norm * &v_i_sq[i]
                };
                p.add_row(format!("q({pname}={i},t={t})"), &terms, Surd::from_rational(rhs));
            }
        }
    }
    Ok(p)
}

/// The triangle problem after averaging over permutations of `(i,j,k)`.
///
/// Variables `Q_d(t)` hold the total mass of the patterns with `d` ones.
/// A solution of the full problem symmetrizes to a solution of this one and
/// spreading `Q_d(t)` evenly over its patterns maps back, so both problems
/// have the same status.
pub fn triangle_symmetric_problem(
    lambda0_sq: &BigRational,
    u_sq: &BigRational,
) -> Result<FeasibilityProblem> {
    check_unit("lambda0^2", lambda0_sq)?;
    check_unit("u^2", u_sq)?;
    let lambda1_sq = BigRational::one() - lambda0_sq;
    let v_sq = BigRational::one() - u_sq;
    let l0_cubed = lambda0_sq * lambda0_sq * lambda0_sq;
    let l1_cubed = &lambda1_sq * &lambda1_sq * &lambda1_sq;
    let norm = &l0_cubed + &l1_cubed;
    let var = |d: usize, t: usize| d * 2 + t;
    let names = (0..4)
        .flat_map(|d| (0..2).map(move |t| format!("Q{d}({t})")))
        .collect();
    let mut p = FeasibilityProblem::new(names);
    p.add_row("sum", &(0..8).map(|x| (x, int(1))).collect::<Vec<_>>(), Surd::one());
    for d in 0..4usize {
        let pattern = [usize::from(d > 0), usize::from(d > 1), usize::from(d > 2)];
        let w = triangle_chi_weight(lambda0_sq, u_sq, pattern)?;
        let count = Surd::from_int(binomial(3, d) as i64);
        p.add_row(format!("Q{d}"), &[(var(d, 0), int(1)), (var(d, 1), int(1))], &w * &count);
    }
    // fraction of d-patterns with a given position equal to 1 is d/3
    let u_i_sq = [u_sq.clone(), v_sq.clone()];
    let v_i_sq = [v_sq, u_sq.clone()];
    for i in 0..2 {
        for t in 0..2 {
            let terms: Vec<(usize, BigRational)> = (0..4)
                .map(|d| {
                    let share = if i == 1 { d as i64 } else { 3 - d as i64 };
                    (var(d, t), BigRational::new(share.into(), 3.into()))
                })
                .collect();
            let rhs = if t == 0 {
                &l0_cubed / &norm * &u_i_sq[i]
            } else {
                &l1_cubed / &norm * &v_i_sq[i]
            };
            p.add_row(format!("q(i={i},t={t})"), &terms, Surd::from_rational(rhs));
        }
    }
    Ok(p)
}

/// Flat index of `q(i,j,t)`, `t ∈ {1,2}`, in the qutrit problem.
pub fn qutrit_var(i: usize, j: usize, t: usize) -> usize {
    (i * 3 + j) * 2 + (t - 1)
}

fn exact_entry(x: &Real) -> Result<Radical> {
    x.exact()
        .cloned()
        .ok_or_else(|| Error::InexactData("eta entries must be exact".into()))
}

/// Right-hand sides of the qutrit problem: `(q(i,j), q(i,t), q(j,t))`.
#[allow(clippy::type_complexity)]
pub fn qutrit_marginals(
    eta_up: &[[Real; 3]; 3],
    eta_down: &[[Real; 3]; 3],
) -> Result<([[Surd; 3]; 3], [[Surd; 2]; 3], [[Surd; 2]; 3])> {
    let half = BigRational::new(1.into(), 2.into());
    let mut pair: [[Surd; 3]; 3] = Default::default();
    let mut up: [[Surd; 2]; 3] = Default::default();
    let mut down: [[Surd; 2]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let a = mul(&exact_entry(&eta_up[i][0])?, &exact_entry(&eta_down[j][0])?)?;
            let b = mul(&exact_entry(&eta_up[i][1])?, &exact_entry(&eta_down[j][1])?)?;
            let s = &a + &b;
            pair[i][j] = surd(&mul(&s, &s)?.scale(&half))?;
        }
        for t in 0..2 {
            let x = exact_entry(&eta_up[i][t])?;
            up[i][t] = surd(&mul(&x, &x)?.scale(&half))?;
            let y = exact_entry(&eta_down[i][t])?;
            down[i][t] = surd(&mul(&y, &y)?.scale(&half))?;
        }
    }
    Ok((pair, up, down))
}

/// Qutrit marginal problem over `q(i,j,t)`, `i,j ∈ {0,1,2}`, `t ∈ {1,2}`:
/// `q(i,j) = ½(η↑ᵢ₀η↓ⱼ₀ + η↑ᵢ₁η↓ⱼ₁)²`, `q(i,t) = ½(η↑ᵢ,ₜ₋₁)²`,
/// `q(j,t) = ½(η↓ⱼ,ₜ₋₁)²` and normalization.
pub fn qutrit_marginal_problem(
    eta_up: &[[Real; 3]; 3],
    eta_down: &[[Real; 3]; 3],
) -> Result<FeasibilityProblem> {
    crate::basis::JointBasis::qutrit(eta_up, eta_down)?;
    let (pair, up, down) = qutrit_marginals(eta_up, eta_down)?;
    let mut names = vec![String::new(); 18];
    for i in 0..3 {
        for j in 0..3 {
            for t in 1..=2 {
                names[qutrit_var(i, j, t)] = format!("q({i},{j},{t})");
            }
        }
    }
    let mut p = FeasibilityProblem::new(names);
    p.add_row("sum", &(0..18).map(|x| (x, int(1))).collect::<Vec<_>>(), Surd::one());
    for i in 0..3 {
        for j in 0..3 {
            p.add_row(
                format!("q(i={i},j={j})"),
                &[(qutrit_var(i, j, 1), int(1)), (qutrit_var(i, j, 2), int(1))],
                pair[i][j].clone(),
            );
        }
    }
    for x in 0..3 {
        for t in 1..=2 {
            let row: Vec<_> = (0..3).map(|y| (qutrit_var(x, y, t), int(1))).collect();
            p.add_row(format!("q(i={x},t={t})"), &row, up[x][t - 1].clone());
            let col: Vec<_> = (0..3).map(|y| (qutrit_var(y, x, t), int(1))).collect();
            p.add_row(format!("q(j={x},t={t})"), &col, down[x][t - 1].clone());
        }
    }
    Ok(p)
}

/// Odd-cycle problem in `ξ₀..ξ_N` for maximally entangled qubit sources.
///
/// With `M = (N−1)/2` and `w = (uv)^N`, it asks for `ξ` with
/// `u^{2(N−d)}v^{2d} + (−1)^d w + ξ_d ≥ 0`,
/// `v^{2(N−d)}u^{2d} + (−1)^d w − ξ_d ≥ 0` for every `d`, and
/// `Σ_{d=0}^{2M} C(2M,d) ξ_d = 0 = Σ_{d=0}^{2M} C(2M,d) ξ_{d+1}`.
/// Each `ξ_d` is split as `ξ⁺_d − ξ⁻_d`; the inequalities get slacks.
pub fn cycle_xi_problem(n: usize, u_sq: &BigRational) -> Result<FeasibilityProblem> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Domain(format!("cycle length must be odd and at least 3, got {n}")));
    }
    check_unit("u^2", u_sq)?;
    let v_sq = BigRational::one() - u_sq;
    let m = (n - 1) / 2;
    // (uv)^N = (u²v²)^M · √(u²v²)
    let uv_sq = u_sq * &v_sq;
    let w = surd(&sqrt(&uv_sq)?.scale(&num_traits::pow(uv_sq.clone(), m)))?;
    let plus = |d: usize| d;
    let minus = |d: usize| (n + 1) + d;
    let slack0 = |d: usize| 2 * (n + 1) + d;
    let slack1 = |d: usize| 3 * (n + 1) + d;
    let mut names = Vec::with_capacity(4 * (n + 1));
    for prefix in ["xi+", "xi-", "s0_", "s1_"] {
        for d in 0..=n {
            names.push(format!("{prefix}{d}"));
        }
    }
    let mut p = FeasibilityProblem::new(names);
    for d in 0..=n {
        let a = num_traits::pow(u_sq.clone(), n - d) * num_traits::pow(v_sq.clone(), d);
        let b = num_traits::pow(v_sq.clone(), n - d) * num_traits::pow(u_sq.clone(), d);
        let signed_w = if d % 2 == 0 { w.clone() } else { -&w };
        // ξ_d − s = −(a + (−1)^d w)
        p.add_row(
            format!("Q{d}(0)"),
            &[(plus(d), int(1)), (minus(d), int(-1)), (slack0(d), int(-1))],
            -&(&Surd::from_rational(a) + &signed_w),
        );
        // −ξ_d − s = −(b + (−1)^d w)
        p.add_row(
            format!("Q{d}(1)"),
            &[(plus(d), int(-1)), (minus(d), int(1)), (slack1(d), int(-1))],
            -&(&Surd::from_rational(b) + &signed_w),
        );
    }
    for (name, offset) in [("Gamma0", 0), ("Gamma1", 1)] {
        let mut terms = Vec::new();
        for d in 0..=2 * m {
            let c = BigRational::from_integer(binomial(BigInt::from(2 * m), BigInt::from(d)));
            terms.push((plus(d + offset), c.clone()));
            terms.push((minus(d + offset), -c));
        }
        p.add_row(name, &terms, Surd::zero());
    }
    Ok(p)
}

/// Reads `ξ_d = ξ⁺_d − ξ⁻_d` back from a witness of [`cycle_xi_problem`].
pub fn cycle_xi_values(n: usize, witness: &[Surd]) -> Vec<Surd> {
    (0..=n).map(|d| &witness[d] - &witness[n + 1 + d]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AsymptoticSign {
    /// `(−1)^{M+1} C(2M, M)` with `M = (N−1)/2`.
    pub a: i64,
    /// True when the contradiction is reached in the regime `β > γ`.
    pub beta_gt_gamma: bool,
}

/// Leading coefficient of `βΓ₁ − γΓ₀` as `u → 1`, and the regime in which it
/// yields a contradiction: `β < γ` when it is positive, `β > γ` otherwise.
pub fn cycle_asymptotic_sign(n: usize) -> Result<AsymptoticSign> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Domain(format!("cycle length must be odd and at least 3, got {n}")));
    }
    let m = (n - 1) / 2;
    let magnitude = binomial(2 * m as i64, m as i64);
    let a = if m % 2 == 1 { magnitude } else { -magnitude };
    Ok(AsymptoticSign { a, beta_gt_gamma: a < 0 })
}
