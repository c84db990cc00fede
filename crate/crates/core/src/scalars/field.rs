//! Scalar fields the birational maps are evaluated over.

use std::fmt::{Debug, Display};

use super::probe::ProbeFraction;
use super::quad::QuadExt;
use super::rational::Rational;
use super::real::BigReal;
use crate::error::Result;

/// Field operations shared by exact (`QuadExt`) and numeric (`BigReal`) scalars.
///
/// Constants are produced "like" an existing value so numeric instances
/// inherit its precision.
pub trait Field: Clone + Debug + Display + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn rational_like(&self, r: &Rational) -> Self;
    fn sqrt2_like(&self) -> Self;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn checked_inv(&self) -> Result<Self>;

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.times(&rhs.checked_inv()?))
    }

    fn one_like(&self) -> Self {
        self.int_like(1)
    }

    fn square(&self) -> Self {
        self.times(self)
    }

    fn scale_int(&self, n: i64) -> Self {
        self.times(&self.int_like(n))
    }

    /// Equality: exact for `QuadExt`, within `2^(8−P)` relative-or-absolute for `BigReal`.
    fn same_value(&self, other: &Self) -> bool;
}

impl Field for QuadExt {
    fn zero_like(&self) -> Self {
        QuadExt::zero()
    }
    fn int_like(&self, n: i64) -> Self {
        QuadExt::from_int(n)
    }
    fn rational_like(&self, r: &Rational) -> Self {
        QuadExt::from_rational(r.clone())
    }
    fn sqrt2_like(&self) -> Self {
        QuadExt::sqrt2()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
    fn checked_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn same_value(&self, other: &Self) -> bool {
        self == other
    }
}

impl Field for BigReal {
    fn zero_like(&self) -> Self {
        BigReal::zero(self.precision())
    }
    fn int_like(&self, n: i64) -> Self {
        BigReal::from_i64(n, self.precision())
    }
    fn rational_like(&self, r: &Rational) -> Self {
        BigReal::from_rational(r, self.precision())
    }
    fn sqrt2_like(&self) -> Self {
        BigReal::from_i64(2, self.precision()).sqrt()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        BigReal::is_zero(self)
    }
    fn checked_inv(&self) -> Result<Self> {
        BigReal::checked_inv(self)
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        BigReal::checked_div(self, rhs)
    }
    fn same_value(&self, other: &Self) -> bool {
        let p = self.precision().max(other.precision());
        let scale = {
            let a = self.abs();
            let b = other.abs();
            let m = if a > b { a } else { b };
            let one = BigReal::from_i64(1, p);
            if m > one {
                m
            } else {
                one
            }
        };
        let tol = &BigReal::pow2(8 - p as i64, p) * &scale;
        (self - other).abs() <= tol
    }
}

/// Rational functions of ε, so the maps can be pushed along probe curves.
impl Field for ProbeFraction {
    fn zero_like(&self) -> Self {
        ProbeFraction::constant(QuadExt::zero())
    }
    fn int_like(&self, n: i64) -> Self {
        ProbeFraction::constant(QuadExt::from_int(n))
    }
    fn rational_like(&self, r: &Rational) -> Self {
        ProbeFraction::constant(QuadExt::from_rational(r.clone()))
    }
    fn sqrt2_like(&self) -> Self {
        ProbeFraction::constant(QuadExt::sqrt2())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn is_zero(&self) -> bool {
        self.numerator().is_zero()
    }
    fn checked_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn same_value(&self, other: &Self) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn ratio<F: Field>(x: &F) -> F {
        x.plus(&x.one_like()).checked_div(&x.sqrt2_like()).unwrap()
    }

    #[test]
    fn exact_and_numeric_agree() {
        let exact = ratio(&QuadExt::from_rational(rat(3, 7)));
        let numeric = ratio(&BigReal::from_rational(&rat(3, 7), 256));
        let converted = crate::scalars::to_real(&exact, 256).unwrap();
        assert!(numeric.same_value(&converted));
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert!(QuadExt::one().checked_div(&QuadExt::zero()).is_err());
        assert!(BigReal::from_i64(1, 64).checked_div(&BigReal::zero(64)).is_err());
    }
}
