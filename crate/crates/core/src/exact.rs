//! Exact arithmetic for the numbers that appear in cycle networks.
//!
//! Every state and measurement coefficient used here is a signed square root
//! of a rational number. Products and sums of such numbers live in a
//! multi-quadratic field, represented by [`Radical`] as a finite sum
//! `Σ cₙ·√n` over squarefree integers `n`. [`Real`] pairs an `f64`
//! approximation with an optional exact [`Radical`], so the same code path
//! serves exact and floating inputs. [`Surd`] is the ordered field
//! `Q(√r)` used by the exact linear-programming solver.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Largest numerator or denominator that is factored exactly.
const MAX_RADICAND: u128 = 1_000_000_000_000_000_000;
/// Trial division bound; cofactors above it have at most two prime factors.
const TRIAL_LIMIT: u64 = 1_000_000;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-2/5"`, `"0.785"` or `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Splits `n` into `(s, f)` with `n = s²·f` and `f` squarefree.
fn square_free_split(mut n: u128) -> (u128, u128) {
    let mut square = 1u128;
    let mut free = 1u128;
    let mut p = 2u128;
    while p <= TRIAL_LIMIT as u128 && p * p <= n {
        let mut count = 0;
        while n % p == 0 {
            n /= p;
            count += 1;
        }
        for _ in 0..count / 2 {
            square *= p;
        }
        if count % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        // every prime factor left exceeds TRIAL_LIMIT, so n is p, p·q or p²
        let root = n.sqrt();
        if root * root == n {
            square *= root;
        } else {
            free *= n;
        }
    }
    (square, free)
}

/// An exact element of a multi-quadratic field: `Σ cₙ·√n`, `n` squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Radical {
    terms: BTreeMap<u64, BigRational>,
}

impl Radical {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// Non-negative square root of `q`. `None` for negative `q` or when the
    /// radicand is too large to factor.
    pub fn sqrt_of(q: &BigRational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Self::zero());
        }
        // √(p/d) = sp·√fp / (sd·√fd) = sp·√(fp·fd) / (sd·fd)
        let split = |n: &BigInt| -> Option<(u128, u128)> {
            let n = n.to_u128()?;
            (n <= MAX_RADICAND).then(|| square_free_split(n))
        };
        let (sp, fp) = split(q.numer())?;
        let (sd, fd) = split(q.denom())?;
        let free = u64::try_from(fp.checked_mul(fd)?).ok()?;
        let coeff = BigRational::new(BigInt::from(sp), BigInt::from(sd) * BigInt::from(fd));
        let mut terms = BTreeMap::new();
        terms.insert(free, coeff);
        Some(Self { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// Decomposes into `a + b·√r` when at most one irrational radicand occurs.
    pub fn as_surd(&self) -> Option<Surd> {
        let a = self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero);
        let mut irrational = self.terms.iter().filter(|(n, _)| **n != 1);
        match (irrational.next(), irrational.next()) {
            (None, _) => Some(Surd::from_rational(a)),
            (Some((r, b)), None) => Some(Surd::new(a, b.clone(), *r)),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(n, c)| rational_to_f64(c) * (*n as f64).sqrt())
            .sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    fn add_term(&mut self, radicand: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(radicand).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let g = m.gcd(n);
                let radicand = (*m as u128 / g as u128) * (*n as u128 / g as u128);
                let radicand = u64::try_from(radicand).ok()?;
                out.add_term(radicand, a * b * BigRational::from_integer(BigInt::from(g)));
            }
        }
        Some(out)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero();
        for (n, c) in &self.terms {
            out.add_term(*n, c * q);
        }
        out
    }
}

impl Add for &Radical {
    type Output = Radical;
    fn add(self, rhs: &Radical) -> Radical {
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            out.add_term(*n, c.clone());
        }
        out
    }
}

impl Neg for &Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        Radical {
            terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect(),
        }
    }
}

impl Sub for &Radical {
    type Output = Radical;
    fn sub(self, rhs: &Radical) -> Radical {
        self + &(-rhs)
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match *n {
                1 => write!(f, "{}", format_rational(c))?,
                _ => write!(f, "{}*sqrt({})", format_rational(c), n)?,
            }
        }
        Ok(())
    }
}

/// A real number carried as an `f64` plus, when available, its exact value.
///
/// Arithmetic keeps the exact part only while both operands have one, so a
/// single floating input turns a whole computation into float mode.
#[derive(Clone, Debug)]
pub struct Real {
    approx: f64,
    exact: Option<Radical>,
}

impl Real {
    pub fn float(x: f64) -> Self {
        Self { approx: x, exact: None }
    }

    pub fn rational(q: BigRational) -> Self {
        Self {
            approx: rational_to_f64(&q),
            exact: Some(Radical::from_rational(q)),
        }
    }

    pub fn from_radical(r: Radical) -> Self {
        Self { approx: r.to_f64(), exact: Some(r) }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(rational(num, den))
    }

    /// The non-negative square root of a non-negative rational, exact when
    /// the radicand can be factored.
    pub fn sqrt_rational(q: &BigRational) -> Self {
        match Radical::sqrt_of(q) {
            Some(r) => Self::from_radical(r),
            None => Self::float(rational_to_f64(q).sqrt()),
        }
    }

    /// `√(num/den)`.
    pub fn sqrt_ratio(num: i64, den: i64) -> Self {
        Self::sqrt_rational(&rational(num, den))
    }

    /// Non-negative square root, exact when `self` is an exact rational.
    /// `None` for negative input.
    pub fn sqrt(&self) -> Option<Self> {
        if self.value() < 0.0 {
            return None;
        }
        Some(match self.to_rational() {
            Some(q) if !q.is_negative() => Self::sqrt_rational(&q),
            _ => Self::float(self.value().max(0.0).sqrt()),
        })
    }

    /// Best available `f64` value (rounded from the exact value if present).
    pub fn value(&self) -> f64 {
        match &self.exact {
            Some(r) => r.to_f64(),
            None => self.approx,
        }
    }

    pub fn exact(&self) -> Option<&Radical> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.exact.as_ref().and_then(Radical::as_rational)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Drops the exact part.
    pub fn to_float(&self) -> Self {
        Self::float(self.value())
    }

    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(r) => r.is_zero(),
            None => self.approx == 0.0,
        }
    }

    /// Compares exactly when both sides are exact rationals, otherwise by
    /// `f64` value.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.to_rational(), other.to_rational()) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.value().total_cmp(&other.value()),
        }
    }

    /// Divides by a non-zero rational.
    pub fn div_rational(&self, q: &BigRational) -> Self {
        let inv = q.recip();
        Self {
            approx: self.approx / rational_to_f64(q),
            exact: self.exact.as_ref().map(|r| r.scale(&inv)),
        }
    }

    /// Division; exact only when the divisor is an exact rational.
    pub fn div(&self, other: &Self) -> Self {
        match other.to_rational() {
            Some(q) if !q.is_zero() => self.div_rational(&q),
            _ => Self::float(self.value() / other.value()),
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Self::float(x)
    }
}

impl From<BigRational> for Real {
    fn from(q: BigRational) -> Self {
        Self::rational(q)
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl PartialEq for Real {
    /// Exact equality when both sides are exact, `f64` equality otherwise.
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.value() == other.value(),
        }
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        Real {
            approx: self.approx + rhs.approx,
            exact: match (&self.exact, &rhs.exact) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        Real {
            approx: self.approx - rhs.approx,
            exact: match (&self.exact, &rhs.exact) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            },
        }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        Real {
            approx: self.approx * rhs.approx,
            exact: match (&self.exact, &rhs.exact) {
                (Some(a), Some(b)) => a.checked_mul(b),
                _ => None,
            },
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            approx: -self.approx,
            exact: self.exact.as_ref().map(|r| -r),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{:.16e}", self.approx),
        }
    }
}

impl Serialize for Real {
    /// Exact values serialize as strings (`"1/4"`, `"1/2*sqrt(2)"`), floats
    /// as JSON numbers.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.exact {
            Some(r) => serializer.serialize_str(&r.to_string()),
            None => serializer.serialize_f64(self.approx),
        }
    }
}

/// Parses a scalar written as a rational (`"2/5"`, `"0.8"`), a signed square
/// root of one (`"sqrt(2/5)"`, `"-sqrt(1/6)"`), or falls back to a float.
pub fn parse_real(text: &str) -> Option<Real> {
    let text = text.trim();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, text),
    };
    if let Some(inner) = body.strip_prefix("sqrt(").and_then(|s| s.strip_suffix(')')) {
        let q = parse_rational(inner)?;
        if q.is_negative() {
            return None;
        }
        let root = Real::sqrt_rational(&q);
        return Some(if negative { -root } else { root });
    }
    if let Some(q) = parse_rational(text) {
        return Some(Real::rational(q));
    }
    text.parse::<f64>().ok().filter(|x| x.is_finite()).map(Real::float)
}

/// An element `a + b·√r` of the real quadratic field `Q(√r)`.
///
/// `r` is a squarefree integer ≥ 2, or 0 when `b = 0`. Mixing two different
/// non-zero radicands in one operation panics: callers build all values of a
/// problem in a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: BigRational,
    b: BigRational,
    r: u64,
}

impl Surd {
    pub fn new(a: BigRational, b: BigRational, r: u64) -> Self {
        if b.is_zero() || r == 0 {
            return Self::from_rational(a);
        }
        if r == 1 {
            return Self::from_rational(a + b);
        }
        Self { a, b, r }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero(), r: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> (&BigRational, u64) {
        (&self.b, self.r)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn radicand(&self) -> Option<u64> {
        (!self.is_rational()).then_some(self.r)
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.r, other.r) {
            (0, r) | (r, 0) => r,
            (r, s) if r == s => r,
            (r, s) => panic!("cannot combine Q(sqrt({r})) with Q(sqrt({s}))"),
        }
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // opposite signs: compare a² with b²·r
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.r));
                match lhs.cmp(&rhs) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (self.r as f64).sqrt()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        if self.is_rational() {
            return Self::from_rational(self.a.recip());
        }
        let norm = &self.a * &self.a
            - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.r));
        Self::new(&self.a / &norm, -&self.b / &norm, self.r)
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let r = self.common_radicand(rhs);
        Surd::new(&self.a + &rhs.a, &self.b + &rhs.b, r)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let r = self.common_radicand(rhs);
        Surd::new(&self.a - &rhs.a, &self.b - &rhs.b, r)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let r = self.common_radicand(rhs);
        let rr = BigRational::from_integer(BigInt::from(r));
        Surd::new(
            &self.a * &rhs.a + &self.b * &rhs.b * rr,
            &self.a * &rhs.b + &self.b * &rhs.a,
            r,
        )
    }
}

impl Div for &Surd {
    type Output = Surd;
    fn div(self, rhs: &Surd) -> Surd {
        self * &rhs.recip()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.a, -&self.b, self.r)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Default for Surd {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<BigRational> for Surd {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.a));
        }
        if self.a.is_zero() {
            write!(f, "{}*sqrt({})", format_rational(&self.b), self.r)
        } else {
            write!(f, "{}+{}*sqrt({})", format_rational(&self.a), format_rational(&self.b), self.r)
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.8"), Some(rational(4, 5)));
        assert_eq!(parse_rational("-2/6"), Some(rational(-1, 3)));
        assert_eq!(parse_rational("1e-3"), Some(rational(1, 1000)));
        assert_eq!(parse_rational(".5"), Some(rational(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn sqrt_extracts_square_factors() {
        let r = Radical::sqrt_of(&rational(4, 5)).unwrap();
        // √(4/5) = 2√5/5
        assert_eq!(r.terms().collect::<Vec<_>>(), vec![(5, &rational(2, 5))]);
        let one_third = Radical::sqrt_of(&rational(1, 3)).unwrap();
        let sq = one_third.checked_mul(&one_third).unwrap();
        assert_eq!(sq.as_rational(), Some(rational(1, 3)));
    }

    #[test]
    fn products_of_roots_reduce() {
        let a = Radical::sqrt_of(&rational(1, 3)).unwrap();
        let b = Radical::sqrt_of(&rational(1, 2)).unwrap();
        let c = Radical::sqrt_of(&rational(2, 5)).unwrap();
        let d = Radical::sqrt_of(&rational(3, 5)).unwrap();
        // (1/√3)(√(2/5)) + (1/√2)(√(3/5)) = 5/√30
        let sum = &a.checked_mul(&c).unwrap() + &b.checked_mul(&d).unwrap();
        let sq = sum.checked_mul(&sum).unwrap();
        assert_eq!(sq.as_rational(), Some(rational(5, 6)));
    }

    #[test]
    fn large_prime_cofactors() {
        let p: u128 = 1_000_003;
        assert_eq!(square_free_split(p * p * 6), (p, 6));
        assert_eq!(square_free_split(p * 1_000_033), (1, p * 1_000_033));
    }

    #[test]
    fn real_keeps_exactness_only_for_exact_operands() {
        let u = Real::sqrt_ratio(4, 5);
        let v = (Real::one() - u.square()).sqrt().unwrap();
        assert_eq!(v.square().to_rational(), Some(rational(1, 5)));
        let mixed = &u * &Real::float(0.5);
        assert!(!mixed.is_exact());
        assert!((mixed.value() - 0.5 * 0.8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn surd_sign_and_division() {
        let r2 = Surd::new(rational(0, 1), rational(1, 1), 2);
        let x = &Surd::from_int(3) - &(&r2 * &Surd::from_int(2)); // 3 - 2√2 > 0
        assert_eq!(x.signum(), Ordering::Greater);
        let y = &Surd::from_int(1) - &r2; // 1 - √2 < 0
        assert_eq!(y.signum(), Ordering::Less);
        let q = &x / &y;
        assert!((q.to_f64() - (3.0 - 2.0 * 2f64.sqrt()) / (1.0 - 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(&(&q * &y) - &x, Surd::zero());
    }

    #[test]
    #[should_panic(expected = "cannot combine")]
    fn surd_rejects_mixed_fields() {
        let a = Surd::new(rational(0, 1), rational(1, 1), 2);
        let b = Surd::new(rational(0, 1), rational(1, 1), 3);
        let _ = &a + &b;
    }

    #[test]
    fn parse_real_forms() {
        let x = parse_real("-sqrt(1/6)").unwrap();
        assert!(x.is_exact());
        assert!((x.value() + (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
        assert_eq!(parse_real("0.25").unwrap().to_rational(), Some(rational(1, 4)));
        assert!(parse_real("sqrt(-1)").is_none());
    }
}
