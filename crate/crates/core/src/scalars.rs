//! Exact arithmetic in ℚ and in the quadratic field ℚ(√−3).
//!
//! Every structure constant and every coefficient handled by the crate lives
//! in ℚ(√−3). [`QuadScalar`] stores `a + b·√−3` with two reduced big
//! rationals, so equality is componentwise and no rounding ever happens.
//!
//! The [`Ring`] trait abstracts over the coefficient types the mode calculus
//! runs on: plain [`QuadScalar`] values and the multivariate polynomials of
//! [`crate::poly`], which carry symbolic module parameters.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Reduced fraction with arbitrary-precision numerator and positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Build a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Element `a + b·√−3` of ℚ(√−3).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadScalar { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadScalar { a, b: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    /// `(a_num/a_den) + (b_num/b_den)·√−3`.
    pub fn from_parts(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        QuadScalar { a: rat(a_num, a_den), b: rat(b_num, b_den) }
    }

    /// The generator √−3.
    pub fn sqrt_m3() -> Self {
        QuadScalar { a: Rational::zero(), b: Rational::one() }
    }

    /// Primitive cube root of unity ξ = (−1 + √−3)/2.
    pub fn xi() -> Self {
        Self::from_parts(-1, 2, 1, 2)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt_m3_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b·√−3` (complex conjugation on the embedding in ℂ).
    pub fn conj(&self) -> Self {
        QuadScalar { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² + 3b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + Rational::from_integer(BigInt::from(3)) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadScalar { a: &self.a / &n, b: -(&self.b / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Approximate complex value, used only to seed numerical root searches.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        num_complex::Complex64::new(a, b * 3f64.sqrt())
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_s3_coeff(b: &Rational) -> String {
    if b.is_one() {
        "s3".to_string()
    } else if b.is_integer() {
        format!("{}*s3", b.numer())
    } else {
        format!("({}/{})*s3", b.numer(), b.denom())
    }
}

impl fmt::Display for QuadScalar {
    /// Renders as `p/q + (r/s)*s3`, dropping zero parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => {
                if self.b.is_negative() {
                    write!(f, "-{}", fmt_s3_coeff(&-self.b.clone()))
                } else {
                    write!(f, "{}", fmt_s3_coeff(&self.b))
                }
            }
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}", fmt_rational(&self.a), sign, fmt_s3_coeff(&self.b.abs()))
            }
        }
    }
}

impl FromStr for QuadScalar {
    type Err = ScalarError;

    /// Accepts `p/q`, `(r/s)*s3`, `r*s3`, `s3` and sums/differences of one
    /// rational part and one `s3` part, in either order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

fn parse_scalar(text: &str) -> Result<QuadScalar, ScalarError> {
    let err = |reason: &str| ScalarError::Parse { text: text.to_string(), reason: reason.to_string() };
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty input"));
    }
    let mut pos = 0;
    let mut acc = QuadScalar::zero();
    let mut terms = 0;
    while pos < chars.len() {
        let mut negative = false;
        if chars[pos] == '+' || chars[pos] == '-' {
            negative = chars[pos] == '-';
            pos += 1;
        } else if terms > 0 {
            return Err(err("expected '+' or '-' between terms"));
        }
        let term = parse_scalar_term(&chars, &mut pos).map_err(|r| err(&r))?;
        acc = if negative { &acc - &term } else { &acc + &term };
        terms += 1;
    }
    Ok(acc)
}

fn parse_unsigned_rational(chars: &[char], pos: &mut usize) -> Result<Rational, String> {
    let parse_int = |pos: &mut usize| -> Result<BigInt, String> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(format!("expected digits at offset {start}"));
        }
        let digits: String = chars[start..*pos].iter().collect();
        digits.parse::<BigInt>().map_err(|e| e.to_string())
    };
    let num = parse_int(pos)?;
    if *pos < chars.len() && chars[*pos] == '/' {
        *pos += 1;
        let den = parse_int(pos)?;
        if den.is_zero() {
            return Err("zero denominator".to_string());
        }
        Ok(Rational::new(num, den))
    } else {
        Ok(Rational::from_integer(num))
    }
}

fn parse_scalar_term(chars: &[char], pos: &mut usize) -> Result<QuadScalar, String> {
    let starts_with_s3 = |p: usize| chars.len() >= p + 2 && chars[p] == 's' && chars[p + 1] == '3';
    if starts_with_s3(*pos) {
        *pos += 2;
        return Ok(QuadScalar::sqrt_m3());
    }
    let value = if *pos < chars.len() && chars[*pos] == '(' {
        *pos += 1;
        let mut sign = false;
        if *pos < chars.len() && (chars[*pos] == '-' || chars[*pos] == '+') {
            sign = chars[*pos] == '-';
            *pos += 1;
        }
        let r = parse_unsigned_rational(chars, pos)?;
        if *pos >= chars.len() || chars[*pos] != ')' {
            return Err("unbalanced parenthesis".to_string());
        }
        *pos += 1;
        if sign {
            -r
        } else {
            r
        }
    } else {
        parse_unsigned_rational(chars, pos)?
    };
    if *pos < chars.len() && chars[*pos] == '*' {
        *pos += 1;
        if !starts_with_s3(*pos) {
            return Err(format!("expected 's3' after '*' at offset {}", *pos));
        }
        *pos += 2;
        return Ok(QuadScalar::new(Rational::zero(), value));
    }
    Ok(QuadScalar::from_rational(value))
}

// --- operator impls -------------------------------------------------------

impl<'a> Add<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        QuadScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        QuadScalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        // (a + b s)(c + d s) with s² = −3
        let three = Rational::from_integer(BigInt::from(3));
        QuadScalar {
            a: &self.a * &rhs.a - three * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { a: -self.a, b: -self.b }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadScalar {
            type Output = QuadScalar;
            fn $m(self, rhs: QuadScalar) -> QuadScalar {
                $tr::$m(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $m(self, rhs: &QuadScalar) -> QuadScalar {
                $tr::$m(&self, rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Div for QuadScalar {
    type Output = QuadScalar;
    /// Panics on division by zero; use [`QuadScalar::checked_div`] for a `Result`.
    fn div(self, rhs: QuadScalar) -> QuadScalar {
        self.checked_div(&rhs).expect("division by zero in ℚ(√−3)")
    }
}

impl AddAssign<&QuadScalar> for QuadScalar {
    fn add_assign(&mut self, rhs: &QuadScalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QuadScalar> for QuadScalar {
    fn sub_assign(&mut self, rhs: &QuadScalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl From<i64> for QuadScalar {
    fn from(n: i64) -> Self {
        QuadScalar::from_int(n)
    }
}

impl From<Rational> for QuadScalar {
    fn from(r: Rational) -> Self {
        QuadScalar::from_rational(r)
    }
}

/// Commutative ring of coefficients used by the mode calculus.
///
/// Implemented by [`QuadScalar`] and by [`crate::poly::Poly`].
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(q: &QuadScalar) -> Self;

    fn scale(&self, q: &QuadScalar) -> Self {
        self.mul(&Self::from_scalar(q))
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = Ring::add(self, rhs);
    }
}

impl Ring for QuadScalar {
    fn zero() -> Self {
        QuadScalar::zero()
    }
    fn one() -> Self {
        QuadScalar::one()
    }
    fn is_zero(&self) -> bool {
        QuadScalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(q: &QuadScalar) -> Self {
        q.clone()
    }
    fn scale(&self, q: &QuadScalar) -> Self {
        self * q
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
}
