//! Feasibility of `A x = b, x ≥ 0` by a two-phase simplex method.
//!
//! Only the first phase is needed: the auxiliary problem `min Σ aᵢ` over
//! `D A x + a = D b` (with `D` flipping rows so that `D b ≥ 0`) reaches zero
//! exactly when the system is feasible. Otherwise its optimal dual `π`
//! gives the Farkas certificate `y = D π` with `yᵀA ≤ 0` and `yᵀb > 0`.
//! Pivoting follows Bland's rule, so the method terminates.
//!
//! The solver is generic over [`LpScalar`]. [`Surd`] gives exact answers;
//! `f64` is available for sweeps over irrational parameters and compares
//! against a fixed tolerance.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, rational_to_f64, Surd};

/// Zero threshold for the floating-point solver.
pub const FLOAT_TOL: f64 = 1e-9;

pub trait LpScalar: Clone + Debug + Display + Serialize + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn from_surd(s: &Surd) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    /// Sign, treating values within the scalar's tolerance as zero.
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;
    /// True for exact scalar types.
    fn is_exact() -> bool;

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }
    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }
    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }
    fn cmp_value(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

impl LpScalar for Surd {
    fn zero() -> Self {
        Surd::zero()
    }
    fn one() -> Self {
        Surd::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        Surd::from_rational(q.clone())
    }
    fn from_surd(s: &Surd) -> Self {
        s.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn sign(&self) -> Ordering {
        self.signum()
    }
    fn to_f64(&self) -> f64 {
        Surd::to_f64(self)
    }
    fn is_exact() -> bool {
        true
    }
}

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn from_surd(s: &Surd) -> Self {
        s.to_f64()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_TOL {
            Ordering::Greater
        } else if *self < -FLOAT_TOL {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

/// One equality row `Σ coeffs[j]·x[j] = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<BigRational>,
    pub rhs: Surd,
}

/// `A x = b`, `x ≥ 0`, with rational `A` and `b` in a quadratic field.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityProblem {
    pub var_names: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl FeasibilityProblem {
    pub fn new(var_names: Vec<String>) -> Self {
        Self { var_names, constraints: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    /// Adds `Σ_{(j,c) ∈ terms} c·x[j] = rhs`.
    pub fn add_row(&mut self, name: impl Into<String>, terms: &[(usize, BigRational)], rhs: Surd) {
        let mut coeffs = vec![BigRational::from_integer(0.into()); self.n_vars()];
        for (j, c) in terms {
            coeffs[*j] += c;
        }
        self.constraints.push(Constraint { name: name.into(), coeffs, rhs });
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    /// The single irrational radicand used by the right-hand sides, if any.
    /// Fails when two different radicands occur.
    pub fn radicand(&self) -> Result<Option<u64>> {
        let mut found = None;
        for c in &self.constraints {
            if let Some(r) = c.rhs.radicand() {
                match found {
                    None => found = Some(r),
                    Some(s) if s == r => {}
                    Some(s) => {
                        return Err(Error::InexactData(format!(
                            "right-hand sides mix sqrt({s}) and sqrt({r})"
                        )))
                    }
                }
            }
        }
        Ok(found)
    }

    /// Plain-text listing: one line per row, `name: c*x + ... = rhs`.
    pub fn to_lp_string(&self) -> String {
        self.to_string()
    }
}

impl Display for FeasibilityProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.var_names.join(" "))?;
        writeln!(f, "nonneg all")?;
        for c in &self.constraints {
            write!(f, "{}:", c.name)?;
            let mut first = true;
            for (j, a) in c.coeffs.iter().enumerate() {
                if *a == BigRational::from_integer(0.into()) {
                    continue;
                }
                let sep = if first { " " } else { " + " };
                write!(f, "{sep}{} {}", format_rational(a), self.var_names[j])?;
                first = false;
            }
            if first {
                write!(f, " 0")?;
            }
            writeln!(f, " = {}", c.rhs)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityResult<T: LpScalar> {
    pub status: FeasibilityStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farkas: Option<Vec<T>>,
    /// `"exact"` or `"float"`.
    pub arithmetic: &'static str,
}

impl<T: LpScalar> FeasibilityResult<T> {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }
}

fn row_data<T: LpScalar>(problem: &FeasibilityProblem) -> (Vec<Vec<T>>, Vec<T>) {
    let a = problem
        .constraints
        .iter()
        .map(|c| c.coeffs.iter().map(T::from_rational).collect())
        .collect();
    let b = problem.constraints.iter().map(|c| T::from_surd(&c.rhs)).collect();
    (a, b)
}

/// Decides feasibility in exact arithmetic.
pub fn lp_feasible(problem: &FeasibilityProblem) -> Result<FeasibilityResult<Surd>> {
    problem.radicand()?;
    solve::<Surd>(problem)
}

/// Decides feasibility in `f64` with tolerance [`FLOAT_TOL`].
pub fn lp_feasible_float(problem: &FeasibilityProblem) -> Result<FeasibilityResult<f64>> {
    solve::<f64>(problem)
}

/// Runs phase one and verifies the returned certificate.
pub fn solve<T: LpScalar>(problem: &FeasibilityProblem) -> Result<FeasibilityResult<T>> {
    let (a, b) = row_data::<T>(problem);
    let result = phase_one(&a, &b, problem.n_vars());
    verify(&a, &b, &result)?;
    Ok(result)
}

fn phase_one<T: LpScalar>(a: &[Vec<T>], b: &[T], n: usize) -> FeasibilityResult<T> {
    let m = a.len();
    let arithmetic = if T::is_exact() { "exact" } else { "float" };
    let width = n + m + 1;
    let rhs = width - 1;
    // row signs making the right-hand side non-negative
    let flip: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();
    let mut tab: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row = vec![T::zero(); width];
            for j in 0..n {
                row[j] = if flip[i] { T::zero().sub(&a[i][j]) } else { a[i][j].clone() };
            }
            row[n + i] = T::one();
            row[rhs] = if flip[i] { T::zero().sub(&b[i]) } else { b[i].clone() };
            row
        })
        .collect();
    // reduced costs of min Σ a_i, and −(objective value) in the last slot
    let mut cost = vec![T::zero(); width];
    for row in &tab {
        for j in 0..n {
            cost[j] = cost[j].sub(&row[j]);
        }
        cost[rhs] = cost[rhs].sub(&row[rhs]);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: lowest-index improving column; artificials never re-enter
        let Some(enter) = (0..n).find(|j| cost[*j].is_negative()) else { break };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = tab[i][rhs].div(&tab[i][enter]);
            let better = match &leave {
                None => true,
                Some((k, best)) => match ratio.cmp_value(best) {
                    Ordering::Less => true,
                    Ordering::Equal => basis[i] < basis[*k],
                    Ordering::Greater => false,
                },
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            // the auxiliary objective is bounded below by zero
            unreachable!("phase-one problem cannot be unbounded");
        };
        let pivot = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x = x.div(&pivot);
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || (T::is_exact() && row[enter].is_zero()) {
                continue;
            }
            let factor = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub(&factor.mul(p));
            }
        }
        let factor = cost[enter].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_row) {
            *x = x.sub(&factor.mul(p));
        }
        basis[r] = enter;
    }

    let infeasibility = T::zero().sub(&cost[rhs]);
    if infeasibility.is_positive() {
        // π_i = 1 − (reduced cost of artificial i); y = D π
        let farkas = (0..m)
            .map(|i| {
                let pi = T::one().sub(&cost[n + i]);
                if flip[i] { T::zero().sub(&pi) } else { pi }
            })
            .collect();
        FeasibilityResult {
            status: FeasibilityStatus::Infeasible,
            witness: None,
            farkas: Some(farkas),
            arithmetic,
        }
    } else {
        let mut x = vec![T::zero(); n];
        for (i, &var) in basis.iter().enumerate() {
            if var < n {
                x[var] = tab[i][rhs].clone();
            }
        }
        FeasibilityResult {
            status: FeasibilityStatus::Feasible,
            witness: Some(x),
            farkas: None,
            arithmetic,
        }
    }
}

/// Re-checks a result by substitution: `A x = b, x ≥ 0` for a witness,
/// `yᵀA ≤ 0, yᵀb > 0` for a Farkas vector.
pub fn verify<T: LpScalar>(a: &[Vec<T>], b: &[T], result: &FeasibilityResult<T>) -> Result<()> {
    match result.status {
        FeasibilityStatus::Feasible => {
            let x = result
                .witness
                .as_ref()
                .ok_or_else(|| Error::CertificateRejected("missing witness".into()))?;
            if let Some(j) = x.iter().position(LpScalar::is_negative) {
                return Err(Error::CertificateRejected(format!("x[{j}] = {} is negative", x[j])));
            }
            for (i, (row, bi)) in a.iter().zip(b).enumerate() {
                let lhs = row.iter().zip(x).fold(T::zero(), |s, (c, v)| s.add(&c.mul(v)));
                if !lhs.sub(bi).is_zero() {
                    return Err(Error::CertificateRejected(format!(
                        "row {i}: {lhs} differs from {bi}"
                    )));
                }
            }
        }
        FeasibilityStatus::Infeasible => {
            let y = result
                .farkas
                .as_ref()
                .ok_or_else(|| Error::CertificateRejected("missing Farkas vector".into()))?;
            let n = a.first().map_or(0, Vec::len);
            for j in 0..n {
                let col = a.iter().zip(y).fold(T::zero(), |s, (row, yi)| s.add(&row[j].mul(yi)));
                if col.is_positive() {
                    return Err(Error::CertificateRejected(format!("(yᵀA)[{j}] = {col} > 0")));
                }
            }
            let yb = b.iter().zip(y).fold(T::zero(), |s, (bi, yi)| s.add(&bi.mul(yi)));
            if !yb.is_positive() {
                return Err(Error::CertificateRejected(format!("yᵀb = {yb} is not positive")));
            }
        }
    }
    Ok(())
}

/// Verifies a result against the problem it claims to solve.
pub fn verify_against<T: LpScalar>(
    problem: &FeasibilityProblem,
    result: &FeasibilityResult<T>,
) -> Result<()> {
    let (a, b) = row_data::<T>(problem);
    verify(&a, &b, result)
}
