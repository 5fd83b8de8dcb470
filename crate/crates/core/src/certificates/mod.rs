//! Certificates of network nonlocality and the tools to check them.

pub mod finner;
pub mod forced;
pub mod lp;
pub mod problems;
pub mod support;
pub mod threshold;

pub use finner::{finner_slack, FinnerEntry, FinnerReport};
pub use forced::{qutrit_forced_solution, ForcedSolution};
pub use lp::{
    lp_feasible, lp_feasible_float, FeasibilityProblem, FeasibilityResult, FeasibilityStatus,
    LpScalar,
};
pub use problems::{
    cycle_asymptotic_sign, cycle_xi_problem, qutrit_marginal_problem, triangle_marginal_problem,
    triangle_symmetric_problem, AsymptoticSign,
};
pub use support::{check_support_constraints, ConstraintCheck, ConstraintReport, SupportKind};
pub use threshold::{ineq_lhs, ineq_lhs_f64, ineq_sign, u_threshold, u_threshold_sq, Threshold};
