//! Univariate rational functions in a probe variable ε, for limits ε → 0.

use std::fmt;

use serde::Serialize;

use super::quad::QuadExt;
use crate::error::{Error, Result};

/// Polynomial in ε with ℚ(√2) coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProbePoly {
    coeffs: Vec<QuadExt>,
}

impl ProbePoly {
    pub fn new(mut coeffs: Vec<QuadExt>) -> Self {
        while coeffs.last().is_some_and(QuadExt::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: QuadExt) -> Self {
        Self::new(vec![c])
    }

    /// The probe variable ε itself.
    pub fn eps() -> Self {
        Self::monomial(QuadExt::one(), 1)
    }

    pub fn monomial(c: QuadExt, degree: usize) -> Self {
        let mut coeffs = vec![QuadExt::zero(); degree];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[QuadExt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order of vanishing at ε = 0; `None` for the zero polynomial.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&QuadExt> {
        self.coeffs.last()
    }

    pub fn eval(&self, eps: &QuadExt) -> QuadExt {
        self.coeffs.iter().rev().fold(QuadExt::zero(), |acc, c| &(&acc * eps) + c)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = QuadExt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![QuadExt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &QuadExt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        let lead_inv = rhs.leading().ok_or(Error::DivisionByZero)?.inv()?;
        let d = rhs.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![QuadExt::zero(); rem.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1 - d;
            let c = rem.last().map(|l| l * &lead_inv).unwrap_or_default();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * b);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(QuadExt::is_zero) {
                rem.pop();
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl fmt::Display for ProbePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*eps"),
                _ => format!("({c})*eps^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `num/den` in lowest terms with a monic denominator.
///
/// The orders of vanishing of the numerator and denominator as first
/// supplied are kept, so 0/0 forms stay visible after cancellation.
/// Equality compares values only.
#[derive(Clone, Debug)]
pub struct ProbeFraction {
    num: ProbePoly,
    den: ProbePoly,
    raw_num_order: Option<usize>,
    raw_den_order: usize,
}

impl ProbeFraction {
    pub fn new(num: ProbePoly, den: ProbePoly) -> Result<Self> {
        let raw_den_order = den.order().ok_or(Error::DivisionByZero)?;
        let raw_num_order = num.order();
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lead = den.leading().cloned().ok_or(Error::DivisionByZero)?.inv()?;
        Ok(Self { num: num.scale(&lead), den: den.scale(&lead), raw_num_order, raw_den_order })
    }

    pub fn from_poly(p: ProbePoly) -> Self {
        Self::new(p, ProbePoly::constant(QuadExt::one())).expect("unit denominator")
    }

    pub fn constant(c: QuadExt) -> Self {
        Self::from_poly(ProbePoly::constant(c))
    }

    pub fn eps() -> Self {
        Self::from_poly(ProbePoly::eps())
    }

    pub fn numerator(&self) -> &ProbePoly {
        &self.num
    }

    pub fn denominator(&self) -> &ProbePoly {
        &self.den
    }

    pub fn raw_orders(&self) -> (Option<usize>, usize) {
        (self.raw_num_order, self.raw_den_order)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::new(num, self.den.mul(&rhs.den)).expect("product of nonzero denominators")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), ..self.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("product of nonzero denominators")
    }

    pub fn scale(&self, c: &QuadExt) -> Self {
        self.mul(&Self::constant(c.clone()))
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn eval(&self, eps: &QuadExt) -> Result<QuadExt> {
        self.num.eval(eps).checked_div(&self.den.eval(eps))
    }
}

impl PartialEq for ProbeFraction {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for ProbeFraction {}

impl fmt::Display for ProbeFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitOutcome {
    Finite {
        #[serde(serialize_with = "crate::scalars::serialize_display")]
        value: QuadExt,
    },
    Pole {
        order: usize,
    },
}

/// Limit at ε = 0 plus the orders of vanishing before cancellation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeLimit {
    pub outcome: LimitOutcome,
    pub num_order: Option<usize>,
    pub den_order: usize,
}

impl ProbeLimit {
    pub fn value(&self) -> Option<&QuadExt> {
        match &self.outcome {
            LimitOutcome::Finite { value } => Some(value),
            LimitOutcome::Pole { .. } => None,
        }
    }

    /// Both numerator and denominator vanished at ε = 0.
    pub fn was_indeterminate(&self) -> bool {
        self.num_order.is_none_or(|k| k > 0) && self.den_order > 0
    }
}

pub fn probe_limit(f: &ProbeFraction) -> ProbeLimit {
    let den_order = f.den.order().expect("denominator is nonzero");
    let outcome = match f.num.order() {
        None => LimitOutcome::Finite { value: QuadExt::zero() },
        Some(k) if k > den_order => LimitOutcome::Finite { value: QuadExt::zero() },
        Some(k) if k == den_order => {
            let value = f.num.coeffs()[k].checked_div(&f.den.coeffs()[k]).expect("nonzero low coefficient");
            LimitOutcome::Finite { value }
        }
        Some(k) => LimitOutcome::Pole { order: den_order - k },
    };
    ProbeLimit { outcome, num_order: f.raw_num_order, den_order: f.raw_den_order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn c(n: i64) -> QuadExt {
        QuadExt::from_int(n)
    }

    #[test]
    fn cancels_common_eps() {
        let f = ProbeFraction::new(ProbePoly::new(vec![c(0), c(1), c(1)]), ProbePoly::eps()).unwrap();
        let lim = probe_limit(&f);
        assert_eq!(lim.value(), Some(&c(1)));
        assert_eq!((lim.num_order, lim.den_order), (Some(1), 1));
        assert!(lim.was_indeterminate());
    }

    #[test]
    fn simple_pole() {
        let f = ProbeFraction::new(ProbePoly::constant(c(1)), ProbePoly::eps()).unwrap();
        assert_eq!(probe_limit(&f).outcome, LimitOutcome::Pole { order: 1 });
    }

    #[test]
    fn quadratic_coefficients() {
        let two_plus_root2 = QuadExt::new(rat(2, 1), rat(1, 1));
        let f = ProbeFraction::new(ProbePoly::monomial(two_plus_root2, 1), ProbePoly::monomial(c(2), 1)).unwrap();
        assert_eq!(probe_limit(&f).value(), Some(&QuadExt::new(rat(1, 1), rat(1, 2))));
    }

    #[test]
    fn stores_lowest_terms() {
        // (ε² − 1)/(ε − 1) = ε + 1
        let f = ProbeFraction::new(ProbePoly::new(vec![c(-1), c(0), c(1)]), ProbePoly::new(vec![c(-1), c(1)])).unwrap();
        assert_eq!(f.numerator(), &ProbePoly::new(vec![c(1), c(1)]));
        assert_eq!(f.denominator(), &ProbePoly::constant(c(1)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(ProbeFraction::new(ProbePoly::eps(), ProbePoly::zero()).is_err());
    }

    #[test]
    fn fraction_arithmetic() {
        let e = ProbeFraction::eps();
        let one = ProbeFraction::constant(c(1));
        // 1/ε − (1 − ε)/ε = 1
        let lhs = one.div(&e).unwrap().sub(&one.sub(&e).div(&e).unwrap());
        assert_eq!(lhs, one);
    }
}
