//! Acceptance gate. Each criterion prints one PASS/FAIL line; any failure
//! exits non-zero.

use std::time::{Duration, Instant};

use qnet_core::basis::JointBasis;
use qnet_core::certificates::lp::verify_against;
use qnet_core::certificates::{
    cycle_asymptotic_sign, cycle_xi_problem, finner_slack, ineq_lhs_f64, lp_feasible,
    qutrit_forced_solution, qutrit_marginal_problem, triangle_marginal_problem, u_threshold_sq,
    FeasibilityStatus, ForcedSolution,
};
use qnet_core::engine::{cycle_distribution, cycle_distribution_with, total_variation, DistributionOptions};
use qnet_core::exact::rational;
use qnet_core::trilocal::{
    boundary_model, boundary_residuals, boundary_u_sq, empirical_distribution, solve_boundary_params,
    uniform_chi_model, write_samples_csv, BOUNDARY_RESIDUAL_TOL,
};
use qnet_core::{CycleNetwork, Label, OutcomeDistribution, Real, SchmidtState, Surd};

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> std::result::Result<(), String> {
    ensure(
        elapsed.as_secs_f64() < limit_s,
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64()),
    )
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

/// Brute-force probabilities: the full state of all 2N qudits as a dense
/// vector, projected onto the product of the parties' eigenvectors.
fn dense_oracle(net: &CycleNetwork) -> Vec<f64> {
    let n = net.n_parties();
    let d = net.source(0).dim();
    let qudits = 2 * n;
    let size = d.pow(qudits as u32);
    // qudit 2k is party k's left input, 2k+1 its right input
    let digits = |mut idx: usize| {
        let mut out = vec![0usize; qudits];
        for q in (0..qudits).rev() {
            out[q] = idx % d;
            idx /= d;
        }
        out
    };
    let mut psi = vec![0.0f64; size];
    for (idx, amp) in psi.iter_mut().enumerate() {
        let s = digits(idx);
        let mut a = 1.0;
        for k in 0..n {
            // source k joins party k's right input and party k+1's left input
            let (r, l_next) = (s[2 * k + 1], s[(2 * (k + 1)) % qudits]);
            if r != l_next {
                a = 0.0;
                break;
            }
            a *= net.source(k).lambda()[r].value();
        }
        *amp = a;
    }
    let bases: Vec<Vec<Vec<Vec<f64>>>> = (0..n)
        .map(|k| {
            net.measurement(k)
                .eigenstates()
                .iter()
                .map(|m| m.iter().map(|row| row.iter().map(Real::value).collect()).collect())
                .collect()
        })
        .collect();
    let counts: Vec<usize> = bases.iter().map(Vec::len).collect();
    let total: usize = counts.iter().product();
    (0..total)
        .map(|mut o| {
            let mut labels = vec![0usize; n];
            for k in (0..n).rev() {
                labels[k] = o % counts[k];
                o /= counts[k];
            }
            let mut overlap = 0.0;
            for (idx, amp) in psi.iter().enumerate() {
                if *amp == 0.0 {
                    continue;
                }
                let s = digits(idx);
                let mut m = *amp;
                for k in 0..n {
                    m *= bases[k][labels[k]][s[2 * k]][s[2 * k + 1]];
                }
                overlap += m;
            }
            overlap * overlap
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let net = CycleNetwork::qubit_triangle(&rational(1, 2), &rational(4, 5)).map_err(e)?;
    let dist = cycle_distribution(&net).map_err(e)?;
    let elapsed = start.elapsed();
    let (u, v) = (0.8f64.sqrt(), 0.2f64.sqrt());
    let (us, vs) = ([u, v], [v, -u]);
    let mut worst = 0.0f64;
    for k in 0..3 {
        let next = (k + 1) % 3;
        for lab in [Label::Up, Label::Down] {
            let p: f64 = dist.iter().filter(|(o, _)| o[k] == lab && o[next] == lab).map(|(_, p)| p).sum();
            worst = worst.max(p.abs());
        }
    }
    for i in 0..2u8 {
        let p = dist.prob(&[Label::Chi(i), Label::Up, Label::Down]);
        worst = worst.max((p - us[i as usize].powi(2) / 8.0).abs());
    }
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let p = dist.prob(&[Label::Chi(i as u8), Label::Chi(j as u8), Label::Chi(k as u8)]);
                let target = (us[i] * us[j] * us[k] + vs[i] * vs[j] * vs[k]).powi(2) / 8.0;
                worst = worst.max((p - target).abs());
            }
        }
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    within(elapsed, 1.0)?;
    Ok(format!("max deviation {worst:.1e}, {:.3}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let float = DistributionOptions { force_float: true, ..Default::default() };
    let cases = [
        CycleNetwork::qubit_triangle(&rational(1, 3), &rational(4, 5)).map_err(e)?,
        CycleNetwork::uniform(
            3,
            SchmidtState::new(vec![Real::sqrt_ratio(1, 2), Real::sqrt_ratio(1, 3), Real::sqrt_ratio(1, 6)])
                .map_err(e)?,
            JointBasis::qutrit_example(),
        )
        .map_err(e)?,
        CycleNetwork::qubit_cycle(5, &rational(7, 10)).map_err(e)?,
    ];
    let mut worst = 0.0f64;
    for net in &cases {
        let fast = cycle_distribution_with(net, &float).map_err(e)?;
        let slow = dense_oracle(net);
        ensure(fast.len() == slow.len(), "outcome count differs")?;
        for (a, b) in fast.probs().iter().zip(&slow) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    within(start.elapsed(), 10.0)?;
    Ok(format!("max deviation {worst:.1e}, {:.3}s", start.elapsed().as_secs_f64()))
}

fn criterion_3() -> Outcome {
    let root = |l: f64, tol: f64| -> std::result::Result<f64, String> {
        u_threshold_sq(l, tol).map_err(e)?.u_sq().ok_or_else(|| format!("no threshold at {l}"))
    };
    let half = root(0.5, 1e-12)?;
    let two_thirds = root(2.0 / 3.0, 1e-12)?;
    ensure((half - 0.785).abs() <= 1e-3, format!("u_max^2(1/2) = {half}"))?;
    ensure((two_thirds - 2.0 / 3.0).abs() <= 1e-4, format!("u_max^2(2/3) = {two_thirds}"))?;
    let mut drift = 0.0f64;
    for l in [0.5, 2.0 / 3.0] {
        let fine = root(l, 1e-12)?;
        for tol in [1e-9, 1e-10, 1e-11] {
            drift = drift.max((root(l, tol)? - fine).abs());
        }
    }
    ensure(drift <= 1e-9, format!("refinement drift {drift:e}"))?;
    Ok(format!("u_max^2(1/2) = {half:.10}, u_max^2(2/3) = {two_thirds:.10}, drift {drift:.1e}"))
}

fn criterion_4() -> Outcome {
    let half = rational(1, 2);
    let mut infeasible = 0;
    for i in 1..=50i64 {
        let u_sq = rational(51 + i, 102);
        let problem = triangle_marginal_problem(&half, &u_sq).map_err(e)?;
        let result = lp_feasible(&problem).map_err(e)?;
        verify_against(&problem, &result).map_err(e)?;
        let lp_says_infeasible = result.status == FeasibilityStatus::Infeasible;
        let lhs = ineq_lhs_f64(0.5, (51 + i) as f64 / 102.0);
        ensure(
            lp_says_infeasible == (lhs < 0.0),
            format!("disagreement at u^2 = {u_sq}: lhs = {lhs:e}, LP {:?}", result.status),
        )?;
        infeasible += usize::from(lp_says_infeasible);
    }
    Ok(format!("50/50 grid points agree ({infeasible} infeasible)"))
}

fn criterion_5() -> Outcome {
    let (up, down) = JointBasis::qutrit_example_eta();
    let problem = qutrit_marginal_problem(&up, &down).map_err(e)?;
    let result = lp_feasible(&problem).map_err(e)?;
    ensure(result.status == FeasibilityStatus::Infeasible, "qutrit problem is feasible")?;
    ensure(result.arithmetic == "exact", "solver did not run exactly")?;
    verify_against(&problem, &result).map_err(e)?;
    let q = |p: i64, d: i64| Surd::from_rational(rational(p, d));
    let m1 = [
        [q(1, 6), q(0, 1), q(0, 1)],
        [q(-1, 30), q(1, 5), q(0, 1)],
        [q(1, 15), q(1, 10), q(0, 1)],
    ];
    let m2 = [
        [q(1, 4), q(0, 1), q(0, 1)],
        [q(1, 20), q(1, 5), q(0, 1)],
        [q(0, 1), q(0, 1), q(0, 1)],
    ];
    match qutrit_forced_solution(&up, &down).map_err(e)? {
        ForcedSolution::Forced { m1: a, m2: b, consistent } => {
            ensure(consistent, "forced values break a marginal")?;
            ensure(a == m1, format!("M1 differs: {a:?}"))?;
            ensure(b == m2, format!("M2 differs: {b:?}"))?;
            ensure(a[1][0] == q(-1, 30), "M1[1,0] is not -1/30")?;
        }
        other => return Err(format!("not forced: {other:?}")),
    }
    Ok("exactly infeasible, Farkas vector verified, M1[1,0] = -1/30".into())
}

fn criterion_6() -> Outcome {
    let qutrit = cycle_distribution(&CycleNetwork::qutrit_triangle(JointBasis::qutrit_example()).map_err(e)?)
        .map_err(e)?;
    let origin = [Label::Tilde(0); 3];
    ensure(qutrit.prob_exact(&origin) == Some(rational(1, 27)), "P(0,0,0) is not 1/27")?;
    let report = finner_slack(&qutrit).map_err(e)?;
    let entry = report.get(&origin).ok_or("missing entry")?;
    ensure(entry.slack == 0.0 && entry.sign == Some(0), format!("slack at origin {entry:?}"))?;

    let mut nets = vec![
        CycleNetwork::qutrit_triangle(JointBasis::qutrit_example()).map_err(e)?,
        CycleNetwork::qubit_cycle(5, &rational(3, 4)).map_err(e)?,
        CycleNetwork::qubit_cycle(7, &rational(9, 10)).map_err(e)?,
    ];
    for (l, u) in [((1, 2), (1, 2)), ((1, 2), (4, 5)), ((1, 3), (9, 10)), ((4, 5), (3, 5)), ((1, 10), (99, 100))] {
        nets.push(CycleNetwork::qubit_triangle(&rational(l.0, l.1), &rational(u.0, u.1)).map_err(e)?);
    }
    let mut min_slack = f64::INFINITY;
    for net in &nets {
        let r = finner_slack(&cycle_distribution(net).map_err(e)?).map_err(e)?;
        min_slack = min_slack.min(r.min_slack());
        ensure(r.holds(1e-12), "Finner bound violated")?;
    }
    ensure(min_slack >= -1e-12, format!("min slack {min_slack:e}"))?;
    Ok(format!("slack at (t0,t0,t0) exactly 0; min slack over {} networks {min_slack:.1e}", nets.len()))
}

fn criterion_7() -> Outcome {
    let model = uniform_chi_model().map_err(e)?.evaluate().map_err(e)?;
    let quantum =
        cycle_distribution(&CycleNetwork::qubit_triangle(&rational(1, 2), &rational(1, 2)).map_err(e)?)
            .map_err(e)?;
    ensure(model.is_exact() && quantum.is_exact(), "a side is not exact")?;
    ensure(model.exact_probs() == quantum.exact_probs(), "distributions differ")?;
    Ok("rational equality on all 64 outcomes".into())
}

fn criterion_8() -> Outcome {
    let u_sq = boundary_u_sq().map_err(e)?;
    let (params, residuals) = solve_boundary_params(u_sq).map_err(e)?;
    ensure(
        residuals.max_abs() < BOUNDARY_RESIDUAL_TOL,
        format!("residual {:e}", residuals.max_abs()),
    )?;
    ensure(boundary_residuals(&params) == residuals, "residuals not reproducible")?;
    let model = boundary_model(&params).map_err(e)?.evaluate().map_err(e)?;
    let basis = JointBasis::qubit(Real::float(u_sq.sqrt())).map_err(e)?;
    let net = CycleNetwork::uniform(3, SchmidtState::maximally_entangled(2).map_err(e)?, basis).map_err(e)?;
    let quantum = cycle_distribution(&net).map_err(e)?;
    let tv = total_variation(&model, &quantum).map_err(e)?;
    ensure(tv < 1e-6, format!("TV {tv:e}"))?;
    Ok(format!(
        "u^2 = {u_sq:.12}, kappa0 = {:.15}, tau0 = {:.15}, residual {:.1e}, TV {tv:.1e}",
        params.kappa[0],
        params.tau[0],
        residuals.max_abs()
    ))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    for (n, u_sq) in [(3, rational(9, 10)), (5, rational(99, 100)), (7, rational(999, 1000))] {
        let problem = cycle_xi_problem(n, &u_sq).map_err(e)?;
        let result = lp_feasible(&problem).map_err(e)?;
        verify_against(&problem, &result).map_err(e)?;
        ensure(
            result.status == FeasibilityStatus::Infeasible,
            format!("N={n}, u^2={u_sq} is feasible"),
        )?;
    }
    let a3 = cycle_asymptotic_sign(3).map_err(e)?.a;
    let a5 = cycle_asymptotic_sign(5).map_err(e)?.a;
    ensure(a3 == 2 && a5 == -6, format!("A(3) = {a3}, A(5) = {a5}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("N=3,5,7 infeasible, A(3)={a3}, A(5)={a5}, {:.3}s", start.elapsed().as_secs_f64()))
}

fn criterion_10() -> Outcome {
    let model = uniform_chi_model().map_err(e)?;
    let exact = model.evaluate().map_err(e)?;
    let samples = model.sample(100_000, 7).map_err(e)?;
    let empirical: OutcomeDistribution = empirical_distribution(&model, &samples).map_err(e)?;
    let tv = total_variation(&empirical, &exact).map_err(e)?;
    ensure(tv < 0.012, format!("TV {tv}"))?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_samples_csv(&samples, &mut a).map_err(e)?;
    write_samples_csv(&model.sample(100_000, 7).map_err(e)?, &mut b).map_err(e)?;
    ensure(a == b, "same seed gave different output")?;
    Ok(format!("TV {tv:.4}, {} identical bytes on rerun", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("qubit triangle zeros and closed forms", criterion_1),
        ("transfer matrices match dense contraction", criterion_2),
        ("threshold anchors", criterion_3),
        ("LP agrees with the inequality on a 50-point grid", criterion_4),
        ("qutrit marginal problem infeasible", criterion_5),
        ("Finner equality and bound", criterion_6),
        ("uniform-chi model at u^2 = 1/2", criterion_7),
        ("boundary model at the threshold", criterion_8),
        ("odd cycles", criterion_9),
        ("seeded sampling", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] criterion {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
