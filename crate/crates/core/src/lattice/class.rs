use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const RANK: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// `H_q, H_p, E_1 … E_8`
    Standard,
    /// `H_x, H_y, F_1 … F_8`
    Applied,
}

impl BasisTag {
    pub fn labels(self) -> [&'static str; RANK] {
        match self {
            BasisTag::Standard => ["H_q", "H_p", "E_1", "E_2", "E_3", "E_4", "E_5", "E_6", "E_7", "E_8"],
            BasisTag::Applied => ["H_x", "H_y", "F_1", "F_2", "F_3", "F_4", "F_5", "F_6", "F_7", "F_8"],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BasisTag::Standard => "STANDARD",
            BasisTag::Applied => "APPLIED",
        }
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for BasisTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A divisor class: integer coordinates over a tagged basis of Pic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PicClass {
    coeffs: Vec<BigInt>,
    basis: BasisTag,
}

impl PicClass {
    pub fn new(coeffs: Vec<BigInt>, basis: BasisTag) -> Result<Self> {
        if coeffs.len() != RANK {
            return Err(Error::InvalidArgument(format!("a class needs {RANK} coefficients, got {}", coeffs.len())));
        }
        Ok(Self { coeffs, basis })
    }

    pub fn from_i64s(coeffs: [i64; RANK], basis: BasisTag) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(), basis }
    }

    pub fn zero(basis: BasisTag) -> Self {
        Self { coeffs: vec![BigInt::zero(); RANK], basis }
    }

    /// The `i`-th basis element.
    pub fn unit(i: usize, basis: BasisTag) -> Self {
        let mut c = Self::zero(basis);
        c.coeffs[i] = BigInt::one();
        c
    }

    /// `−K = 2H₁ + 2H₂ − ΣE`.
    pub fn anticanonical(basis: BasisTag) -> Self {
        Self::from_i64s([2, 2, -1, -1, -1, -1, -1, -1, -1, -1], basis)
    }

    /// Parses strings such as `2H_x+H_y-F_4-F_5`; the labels fix the basis.
    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_tag(&self, other: &Self) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::TagMismatch { expected: self.basis, found: other.basis })
        }
    }

    /// Intersection number: `H₁·H₂ = 1`, `Hᵢ·Hᵢ = 0`, `Eᵢ·Eⱼ = −δᵢⱼ`.
    pub fn pair(&self, other: &Self) -> Result<BigInt> {
        self.same_tag(other)?;
        Ok(pair_coeffs(&self.coeffs, &other.coeffs))
    }

    pub fn self_pairing(&self) -> BigInt {
        pair_coeffs(&self.coeffs, &self.coeffs)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_tag(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(), basis: self.basis })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * k).collect(), basis: self.basis }
    }

    /// `c + (c·r) r` for a root `r` (`r·r = −2`).
    pub fn reflect(&self, root: &Self) -> Result<Self> {
        ensure_root(root)?;
        let k = self.pair(root)?;
        self.checked_add(&root.scale(&k))
    }
}

pub(crate) fn pair_coeffs(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = &a[0] * &b[1] + &a[1] * &b[0];
    for i in 2..RANK {
        s -= &a[i] * &b[i];
    }
    s
}

pub(crate) fn ensure_root(root: &PicClass) -> Result<()> {
    let sp = root.self_pairing();
    if sp != BigInt::from(-2) {
        return Err(Error::NotARoot { class: root.to_string(), self_pairing: sp.to_string() });
    }
    Ok(())
}

impl Neg for &PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        PicClass { coeffs: self.coeffs.iter().map(|a| -a).collect(), basis: self.basis }
    }
}

/// Panics on a tag mismatch; use `checked_add` where tags are not known statically.
impl Add for &PicClass {
    type Output = PicClass;
    fn add(self, rhs: &PicClass) -> PicClass {
        self.checked_add(rhs).expect("adding classes over different bases")
    }
}

impl Sub for &PicClass {
    type Output = PicClass;
    fn sub(self, rhs: &PicClass) -> PicClass {
        self.checked_sub(rhs).expect("subtracting classes over different bases")
    }
}

impl Mul<&PicClass> for i64 {
    type Output = PicClass;
    fn mul(self, rhs: &PicClass) -> PicClass {
        rhs.scale(&BigInt::from(self))
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let labels = self.basis.labels();
        let mut first = true;
        for (c, label) in self.coeffs.iter().zip(labels) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{label}")?;
            } else {
                write!(f, "{sign}{mag}{label}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for PicClass {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidArgument(format!("cannot parse class {text:?}: {why}"));
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace() && *c != '_' && *c != '{' && *c != '}').collect();
        if s.is_empty() {
            return Err(bad("empty"));
        }
        let mut coeffs = vec![BigInt::zero(); RANK];
        let mut basis: Option<BasisTag> = None;
        let mut set_basis = |b: BasisTag| -> Result<()> {
            match basis {
                Some(prev) if prev != b => Err(bad("mixes standard and applied labels")),
                _ => {
                    basis = Some(b);
                    Ok(())
                }
            }
        };
        let mut i = 0;
        while i < s.len() {
            let mut sign = BigInt::one();
            if s[i] == '+' || s[i] == '-' {
                if s[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("missing sign between terms"));
            }
            let start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let k: BigInt = if i > start {
                s[start..i].iter().collect::<String>().parse().map_err(|_| bad("coefficient"))?
            } else {
                BigInt::one()
            };
            let (index, tag) = match (s.get(i), s.get(i + 1)) {
                (Some('H'), Some('q')) => (0, BasisTag::Standard),
                (Some('H'), Some('p')) => (1, BasisTag::Standard),
                (Some('H'), Some('x')) => (0, BasisTag::Applied),
                (Some('H'), Some('y')) => (1, BasisTag::Applied),
                (Some(l @ ('E' | 'F')), Some(d)) if ('1'..='8').contains(d) => {
                    let tag = if *l == 'E' { BasisTag::Standard } else { BasisTag::Applied };
                    (1 + d.to_digit(10).unwrap_or(0) as usize, tag)
                }
                _ => return Err(bad("unknown label")),
            };
            set_basis(tag)?;
            coeffs[index] += sign * k;
            i += 2;
        }
        Ok(PicClass { coeffs, basis: basis.ok_or_else(|| bad("no labels"))? })
    }
}

pub(crate) fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.collect_str(n),
    }
}

pub(crate) struct IntSlice<'a>(pub &'a [BigInt]);

impl Serialize for IntSlice<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct One<'a>(&'a BigInt);
        impl Serialize for One<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigint(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for n in self.0 {
            seq.serialize_element(&One(n))?;
        }
        seq.end()
    }
}

impl Serialize for PicClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PicClass", 2)?;
        st.serialize_field("coeffs", &IntSlice(&self.coeffs))?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> PicClass {
        s.parse().unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(c("H_q").pair(&c("H_p")).unwrap(), BigInt::from(1));
        assert_eq!(c("E_3").pair(&c("E_3")).unwrap(), BigInt::from(-1));
        assert_eq!(c("H_x+H_y-F_1").pair(&c("F_1")).unwrap(), BigInt::from(1));
    }

    #[test]
    fn pairing_rejects_mixed_tags() {
        assert!(matches!(c("H_q").pair(&c("H_x")), Err(Error::TagMismatch { .. })));
    }

    #[test]
    fn reflection_examples() {
        let a1 = c("H_q-E_3-E_4");
        assert_eq!(c("H_p").reflect(&a1).unwrap(), c("H_q+H_p-E_3-E_4"));
        assert_eq!(c("E_1").reflect(&a1).unwrap(), c("E_1"));
        assert_eq!(a1.reflect(&a1).unwrap(), -&a1);
        assert!(matches!(c("H_p").reflect(&c("H_q")), Err(Error::NotARoot { .. })));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["2H_x+H_y-F_4-F_5-F_6-F_7", "-H_y+F_1+F_3", "4H_q+2H_p-E_2"] {
            assert_eq!(c(s).to_string(), s);
        }
        assert_eq!(c("Hq + Hp - E1"), c("H_q+H_p-E_1"));
        assert!("H_q+F_1".parse::<PicClass>().is_err());
        assert!("2X".parse::<PicClass>().is_err());
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&c("H_x-F_8")).unwrap();
        assert_eq!(j, r#"{"coeffs":[1,0,0,0,0,0,0,0,0,-1],"basis":"APPLIED"}"#);
    }
}
