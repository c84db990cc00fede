//! The quadratic field ℚ(√2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, int, Rational};
use crate::error::{Error, Result};

/// `u + v·√2` with rational `u`, `v`.
///
/// Both parts are kept in lowest terms, so structural equality is value
/// equality and the element is zero exactly when `u = v = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadExt {
    u: Rational,
    v: Rational,
}

impl QuadExt {
    pub fn new(u: Rational, v: Rational) -> Self {
        Self { u, v }
    }

    pub fn from_rational(u: Rational) -> Self {
        Self { u, v: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt2() -> Self {
        Self { u: Rational::zero(), v: Rational::one() }
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// Galois conjugate `u − v√2`.
    pub fn conj(&self) -> Self {
        Self { u: self.u.clone(), v: -self.v.clone() }
    }

    /// Field norm `u² − 2v²`; nonzero for every nonzero element.
    pub fn norm(&self) -> Rational {
        &self.u * &self.u - int(2) * &self.v * &self.v
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self { u: &self.u / &n, v: -(&self.v / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { u: &self.u * r, v: &self.v * r }
    }

    /// Sign of the real number `u + v√2`, decided exactly.
    pub fn signum(&self) -> i32 {
        let su = sign_of(&self.u);
        let sv = sign_of(&self.v);
        if su == 0 || sv == 0 || su == sv {
            return if su != 0 { su } else { sv };
        }
        // Opposite signs: compare u² with 2v².
        let lhs = &self.u * &self.u;
        let rhs = int(2) * &self.v * &self.v;
        if lhs > rhs {
            su
        } else {
            sv
        }
    }
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadExt {
    /// `u`, `v*sqrt(2)` or `u+v*sqrt(2)` with `p/q` rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u.is_zero(), self.v.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.u)),
            (true, false) => write!(f, "{}*sqrt(2)", format_rational(&self.v)),
            (false, false) => {
                let sign = if self.v.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}*sqrt(2)", format_rational(&self.u), sign, format_rational(&self.v.abs()))
            }
        }
    }
}

impl From<Rational> for QuadExt {
    fn from(u: Rational) -> Self {
        Self::from_rational(u)
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt { u: &self.u + &rhs.u, v: &self.v + &rhs.v }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt { u: &self.u - &rhs.u, v: &self.v - &rhs.v }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        QuadExt {
            u: &self.u * &rhs.u + int(2) * &self.v * &rhs.v,
            v: &self.u * &rhs.v + &self.v * &rhs.u,
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { u: -self.u.clone(), v: -self.v.clone() }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { u: -self.u, v: -self.v }
    }
}

macro_rules! forward_owned_binop {
    ($ty:ty, $tr:ident, $method:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}
pub(crate) use forward_owned_binop;

forward_owned_binop!(QuadExt, Add, add);
forward_owned_binop!(QuadExt, Sub, sub);
forward_owned_binop!(QuadExt, Mul, mul);

/// The four field operations, as a value for table-driven callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Applies `op`; binary operations require `rhs`.
pub fn quad_arith(op: QuadOp, lhs: &QuadExt, rhs: Option<&QuadExt>) -> Result<QuadExt> {
    let need_rhs = || rhs.ok_or_else(|| Error::InvalidArgument(format!("{op:?} needs a right operand")));
    match op {
        QuadOp::Add => Ok(lhs + need_rhs()?),
        QuadOp::Mul => Ok(lhs * need_rhs()?),
        QuadOp::Neg => Ok(-lhs),
        QuadOp::Inv => lhs.inv(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn q(u: (i64, i64), v: (i64, i64)) -> QuadExt {
        QuadExt::new(rat(u.0, u.1), rat(v.0, v.1))
    }

    #[test]
    fn conjugate_product_is_minus_one() {
        let a = q((1, 1), (1, 1));
        let b = q((1, 1), (-1, 1));
        assert_eq!(quad_arith(QuadOp::Mul, &a, Some(&b)).unwrap(), QuadExt::from_int(-1));
    }

    #[test]
    fn inverse_of_sqrt2() {
        assert_eq!(quad_arith(QuadOp::Inv, &QuadExt::sqrt2(), None).unwrap(), q((0, 1), (1, 2)));
    }

    #[test]
    fn componentwise_sum() {
        let a = q((3, 1), (2, 1));
        let b = q((-3, 1), (1, 1));
        assert_eq!(quad_arith(QuadOp::Add, &a, Some(&b)).unwrap(), q((0, 1), (3, 1)));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(QuadExt::zero().inv(), Err(Error::DivisionByZero));
        assert!(quad_arith(QuadOp::Add, &QuadExt::one(), None).is_err());
    }

    #[test]
    fn exact_sign() {
        assert_eq!(q((1, 1), (-1, 1)).signum(), -1);
        assert_eq!(q((-3, 2), (1, 1)).signum(), -1);
        assert_eq!(q((3, 2), (-1, 1)).signum(), 1);
        assert_eq!(QuadExt::zero().signum(), 0);
    }

    #[test]
    fn display_forms() {
        assert_eq!(q((1, 2), (0, 1)).to_string(), "1/2");
        assert_eq!(q((0, 1), (-1, 4)).to_string(), "-1/4*sqrt(2)");
        assert_eq!(q((3, 1), (-2, 1)).to_string(), "3-2*sqrt(2)");
    }
}
