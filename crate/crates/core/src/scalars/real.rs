//! Binary floating-point reals at an explicit precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::quad::{forward_owned_binop, QuadExt};
use super::rational::Rational;
use crate::error::{Error, Result};

pub const MIN_PRECISION: usize = 64;
pub const DEFAULT_PRECISION: usize = 512;

const RM: RoundingMode = RoundingMode::ToEven;

/// Guard bits carried by intermediate steps of composite conversions.
/// Extra bits carried by intermediate computations.
pub const GUARD_BITS: usize = 64;
const GUARD: usize = GUARD_BITS;

pub fn check_precision(prec: usize) -> Result<usize> {
    if prec < MIN_PRECISION {
        Err(Error::InvalidPrecision(prec))
    } else {
        Ok(prec)
    }
}

/// A real number rounded to `prec` bits.
///
/// Binary operations run at the larger of the two operand precisions.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    prec: usize,
}

impl BigReal {
    fn wrap(value: BigFloat, prec: usize) -> Self {
        Self { value, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::from_bigint(&BigInt::from(n), prec)
    }

    /// Correctly rounded image of an integer.
    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        Self::wrap(bigint_to_float(n, prec), prec)
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        let work = prec + GUARD;
        let num = bigint_to_float(r.numer(), work);
        let den = bigint_to_float(r.denom(), work);
        Self::wrap(num.div(&den, prec, RM), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.value
    }

    /// Re-rounds to a new precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut value = self.value.clone();
        // Only fails on NaN/Inf, which this type never holds.
        let _ = value.set_precision(prec, RM);
        Self::wrap(value, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.value.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.value.is_positive()
    }

    /// Binary exponent `e` with `2^(e−1) ≤ |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.value.exponent().map(i64::from)
        }
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.prec, RM), self.prec)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.value.powi(n, self.prec, RM), self.prec)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec.max(rhs.prec);
        Ok(Self::wrap(self.value.div(&rhs.value, p, RM), p))
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::wrap(self.value.reciprocal(self.prec, RM), self.prec))
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self * &Self::from_i64(n, self.prec)
    }

    pub fn div_int(&self, n: i64) -> Result<Self> {
        self.checked_div(&Self::from_i64(n, self.prec))
    }

    /// The exact dyadic rational this value holds.
    pub fn to_rational(&self) -> Rational {
        let Some((words, _, sign, exp, _)) = self.value.as_raw_parts() else {
            return Rational::zero();
        };
        if self.is_zero() {
            return Rational::zero();
        }
        let mut mantissa = BigUint::zero();
        for &w in words.iter().rev() {
            mantissa = (mantissa << 64u32) + BigUint::from(w);
        }
        let shift = i64::from(exp) - 64 * words.len() as i64;
        let int_sign = if sign == Sign::Neg { IntSign::Minus } else { IntSign::Plus };
        let m = BigInt::from_biguint(int_sign, mantissa);
        if shift >= 0 {
            Rational::from_integer(m << shift as usize)
        } else {
            Rational::new(m, BigInt::one() << (-shift) as usize)
        }
    }

    /// Nearest `f64` (saturating to ±∞ / 0 outside its range).
    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, exp, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        if self.is_zero() {
            return 0.0;
        }
        let top = *words.last().unwrap_or(&0) as f64;
        let magnitude = top * 2f64.powi((exp - 64).clamp(-1200, 1200));
        if sign == Sign::Neg {
            -magnitude
        } else {
            magnitude
        }
    }

    /// Scientific notation `d.ddd…e±E` with `digits` significant digits,
    /// rounded half-to-even from the exact binary value.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_scientific(&self.to_rational(), digits.max(1))
    }

    /// `|self − other| ≤ tol`.
    pub fn abs_diff_le(&self, other: &Self, tol: &Self) -> bool {
        (self - other).abs() <= *tol
    }

    /// `2^k` at the given precision.
    pub fn pow2(k: i64, prec: usize) -> Self {
        if k >= 0 {
            Self::from_bigint(&(BigInt::one() << k as usize), prec)
        } else {
            Self::from_rational(&Rational::new(BigInt::one(), BigInt::one() << (-k) as usize), prec)
        }
    }
}

fn bigint_to_float(n: &BigInt, prec: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_word(0, prec);
    }
    let words = n.magnitude().to_u64_digits();
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let mut value = BigFloat::from_words(&words, sign, 64 * words.len() as i32);
    let _ = value.set_precision(prec, RM);
    value
}

fn format_scientific(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return format!("{}e+0", pad_mantissa("0", digits));
    }
    let negative = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);
    // Decimal exponent estimate from bit lengths, corrected below.
    let bits = a.numer().bits() as f64 - a.denom().bits() as f64;
    let mut e10 = (bits * std::f64::consts::LOG10_2).floor() as i64;
    let lower = num_traits::pow(ten.clone(), digits - 1);
    let upper = &lower * &ten;
    let scaled_int = |e10: i64| -> BigInt {
        let shift = digits as i64 - 1 - e10;
        let scaled = if shift >= 0 {
            &a * Rational::from_integer(num_traits::pow(ten.clone(), shift as usize))
        } else {
            &a / Rational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
        };
        round_half_even(&scaled)
    };
    let mut m = scaled_int(e10);
    loop {
        if m >= upper {
            e10 += 1;
        } else if m < lower {
            e10 -= 1;
        } else {
            break;
        }
        m = scaled_int(e10);
        // Rounding up to exactly 10^digits lands here; rescale once more.
        if m == upper {
            e10 += 1;
            m = scaled_int(e10);
            break;
        }
    }
    let text = pad_mantissa(&m.to_string(), digits);
    let sign = if negative { "-" } else { "" };
    let esign = if e10 < 0 { '-' } else { '+' };
    format!("{sign}{text}e{esign}{}", e10.abs())
}

fn pad_mantissa(int_digits: &str, digits: usize) -> String {
    let mut s = int_digits.to_string();
    while s.len() < digits {
        s.push('0');
    }
    if digits == 1 {
        s
    } else {
        format!("{}.{}", &s[..1], &s[1..])
    }
}

fn round_half_even(r: &Rational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    let twice: BigInt = &rem * 2;
    match twice.cmp(r.denom()) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| decimal_digits(self.prec));
        f.write_str(&self.to_decimal(digits))
    }
}

/// Decimal digits faithfully representable at `prec` bits.
pub fn decimal_digits(prec: usize) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize
}

impl<'a> Add<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn add(self, rhs: &BigReal) -> BigReal {
        let p = self.prec.max(rhs.prec);
        BigReal::wrap(self.value.add(&rhs.value, p, RM), p)
    }
}

impl<'a> Sub<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        let p = self.prec.max(rhs.prec);
        BigReal::wrap(self.value.sub(&rhs.value, p, RM), p)
    }
}

impl<'a> Mul<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        let p = self.prec.max(rhs.prec);
        BigReal::wrap(self.value.mul(&rhs.value, p, RM), p)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.value), self.prec)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

forward_owned_binop!(BigReal, Add, add);
forward_owned_binop!(BigReal, Sub, sub);
forward_owned_binop!(BigReal, Mul, mul);

/// Precision plus the constant cache that transcendental functions need.
pub struct RealContext {
    prec: usize,
    consts: Consts,
}

impl fmt::Debug for RealContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealContext").field("prec", &self.prec).finish()
    }
}

impl RealContext {
    pub fn new(prec: usize) -> Result<Self> {
        check_precision(prec)?;
        let consts = Consts::new().map_err(|e| Error::InvalidArgument(format!("constant cache: {e:?}")))?;
        Ok(Self { prec, consts })
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn int(&self, n: i64) -> BigReal {
        BigReal::from_i64(n, self.prec)
    }

    pub fn rational(&self, r: &Rational) -> BigReal {
        BigReal::from_rational(r, self.prec)
    }

    pub fn quad(&self, x: &QuadExt) -> BigReal {
        to_real_unchecked(x, self.prec)
    }

    pub fn pi(&mut self) -> BigReal {
        BigReal::wrap(self.consts.pi(self.prec, RM), self.prec)
    }

    pub fn exp(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.value.exp(self.prec, RM, &mut self.consts), self.prec)
    }

    pub fn ln(&mut self, x: &BigReal) -> Result<BigReal> {
        if !x.is_positive() {
            return Err(Error::InvalidArgument("logarithm of a non-positive number".into()));
        }
        Ok(BigReal::wrap(x.value.ln(self.prec, RM, &mut self.consts), self.prec))
    }

    pub fn sinh(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.value.sinh(self.prec, RM, &mut self.consts), self.prec)
    }

    pub fn cosh(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.value.cosh(self.prec, RM, &mut self.consts), self.prec)
    }

    pub fn asinh(&mut self, x: &BigReal) -> BigReal {
        BigReal::wrap(x.value.asinh(self.prec, RM, &mut self.consts), self.prec)
    }

    /// `x^y` for `x > 0`.
    pub fn pow(&mut self, x: &BigReal, y: &BigReal) -> Result<BigReal> {
        if !x.is_positive() {
            return Err(Error::InvalidArgument("real power of a non-positive base".into()));
        }
        Ok(BigReal::wrap(x.value.pow(&y.value, self.prec, RM, &mut self.consts), self.prec))
    }
}

/// `u + v√2` rounded to `prec` bits, with relative error below `2^(1−prec)`.
pub fn to_real(x: &QuadExt, prec: usize) -> Result<BigReal> {
    check_precision(prec)?;
    Ok(to_real_unchecked(x, prec))
}

fn to_real_unchecked(x: &QuadExt, prec: usize) -> BigReal {
    let work = prec + GUARD;
    let sqrt2 = BigReal::from_i64(2, work).sqrt();
    let u = BigReal::from_rational(x.u(), work);
    let v = BigReal::from_rational(x.v(), work);
    let v_sqrt2 = &v * &sqrt2;
    let opposite = (x.u().is_positive() && x.v().is_negative()) || (x.u().is_negative() && x.v().is_positive());
    let value = if opposite {
        // u + v√2 = (u² − 2v²)/(u − v√2); the denominator has no cancellation.
        let norm = BigReal::from_rational(&x.norm(), work);
        let den = &u - &v_sqrt2;
        norm.checked_div(&den).unwrap_or_else(|_| BigReal::zero(work))
    } else {
        &u + &v_sqrt2
    };
    value.with_precision(prec)
}

impl ToPrimitive for BigReal {
    fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational();
        r.is_integer().then(|| r.numer().to_i64()).flatten()
    }

    fn to_u64(&self) -> Option<u64> {
        let r = self.to_rational();
        r.is_integer().then(|| r.numer().to_u64()).flatten()
    }

    fn to_f64(&self) -> Option<f64> {
        Some(BigReal::to_f64(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::{int, rat};

    #[test]
    fn sqrt2_at_128_bits() {
        let r = to_real(&QuadExt::sqrt2(), 128).unwrap();
        assert_eq!(r.precision(), 128);
        assert!(r.to_decimal(20).starts_with("1.4142135623730950488"));
    }

    #[test]
    fn zero_is_zero() {
        assert!(to_real(&QuadExt::zero(), 64).unwrap().is_zero());
        assert_eq!(BigReal::zero(64).to_decimal(3), "0.00e+0");
    }

    #[test]
    fn rejects_low_precision() {
        assert_eq!(to_real(&QuadExt::one(), 63).unwrap_err(), Error::InvalidPrecision(63));
    }

    #[test]
    fn one_minus_sqrt2_has_full_relative_accuracy() {
        let x = QuadExt::new(int(1), int(-1));
        let r = to_real(&x, 256).unwrap();
        // Oracle: √2 at 1024 bits, subtract, compare.
        let oracle = &BigReal::from_i64(1, 1024) - &BigReal::from_i64(2, 1024).sqrt();
        let err = (&r.with_precision(1024) - &oracle).abs();
        let bound = &BigReal::pow2(1 - 256, 1024) * &oracle.abs();
        assert!(err <= bound);
        assert!(r.to_decimal(12).starts_with("-4.14213562373"));
    }

    #[test]
    fn exact_round_trip_through_rational() {
        let x = BigReal::from_rational(&rat(3, 8), 64);
        assert_eq!(x.to_rational(), rat(3, 8));
        let y = BigReal::from_i64(-123456789, 64);
        assert_eq!(y.to_rational(), int(-123456789));
        assert_eq!(y.to_f64(), -123456789.0);
    }

    #[test]
    fn scientific_formatting_rounds() {
        assert_eq!(BigReal::from_rational(&rat(1, 8), 128).to_decimal(2), "1.2e-1");
        assert_eq!(BigReal::from_rational(&rat(3, 8), 128).to_decimal(2), "3.8e-1");
        assert_eq!(BigReal::from_i64(999, 128).to_decimal(2), "1.0e+3");
        assert_eq!(BigReal::from_i64(-5, 128).to_decimal(1), "-5e+0");
    }

    #[test]
    fn transcendentals() {
        let mut cx = RealContext::new(256).unwrap();
        let pi = cx.pi();
        assert!(pi.to_decimal(30).starts_with("3.1415926535897932384626433832"));
        let one = cx.int(1);
        let e = cx.exp(&one);
        let back = cx.ln(&e).unwrap();
        assert!((&back - &one).abs() < BigReal::pow2(-250, 256));
    }
}
