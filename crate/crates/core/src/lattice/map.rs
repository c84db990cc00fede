use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::class::{ensure_root, pair_coeffs, BasisTag, IntSlice, PicClass, RANK};
use crate::error::{Error, Result};

/// Integer endomorphism of Pic; column `j` is the image of basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    /// Row-major `RANK × RANK`.
    matrix: Vec<BigInt>,
    source: BasisTag,
    target: BasisTag,
}

impl LatticeMap {
    pub fn identity(basis: BasisTag) -> Self {
        let mut matrix = vec![BigInt::zero(); RANK * RANK];
        for i in 0..RANK {
            matrix[i * RANK + i] = BigInt::one();
        }
        Self { matrix, source: basis, target: basis }
    }

    /// Builds a map from the images of the source basis elements.
    pub fn from_columns(source: BasisTag, columns: &[PicClass]) -> Result<Self> {
        if columns.len() != RANK {
            return Err(Error::InvalidArgument(format!("need {RANK} columns, got {}", columns.len())));
        }
        let target = columns[0].basis();
        let mut matrix = vec![BigInt::zero(); RANK * RANK];
        for (j, col) in columns.iter().enumerate() {
            if col.basis() != target {
                return Err(Error::TagMismatch { expected: target, found: col.basis() });
            }
            for (i, v) in col.coeffs().iter().enumerate() {
                matrix[i * RANK + j] = v.clone();
            }
        }
        Ok(Self { matrix, source, target })
    }

    /// Reflection in a root of the given basis.
    pub fn reflection(root: &PicClass) -> Result<Self> {
        ensure_root(root)?;
        let basis = root.basis();
        let columns: Vec<PicClass> =
            (0..RANK).map(|j| PicClass::unit(j, basis).reflect(root)).collect::<Result<_>>()?;
        Self::from_columns(basis, &columns)
    }

    pub fn source(&self) -> BasisTag {
        self.source
    }

    pub fn target(&self) -> BasisTag {
        self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.matrix[i * RANK + j]
    }

    pub fn column(&self, j: usize) -> PicClass {
        let coeffs = (0..RANK).map(|i| self.entry(i, j).clone()).collect();
        PicClass::new(coeffs, self.target).expect("rank-sized column")
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.matrix.chunks(RANK).map(<[BigInt]>::to_vec).collect()
    }

    pub fn apply(&self, c: &PicClass) -> Result<PicClass> {
        if c.basis() != self.source {
            return Err(Error::TagMismatch { expected: self.source, found: c.basis() });
        }
        let coeffs = (0..RANK)
            .map(|i| (0..RANK).map(|j| self.entry(i, j) * &c.coeffs()[j]).sum::<BigInt>())
            .collect();
        PicClass::new(coeffs, self.target)
    }

    /// `m2 ∘ m1`: applies `m1` first.
    pub fn compose(m2: &LatticeMap, m1: &LatticeMap) -> Result<LatticeMap> {
        if m1.target != m2.source {
            return Err(Error::TagMismatch { expected: m2.source, found: m1.target });
        }
        let mut matrix = vec![BigInt::zero(); RANK * RANK];
        for i in 0..RANK {
            for k in 0..RANK {
                let a = m2.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..RANK {
                    matrix[i * RANK + j] += a * m1.entry(k, j);
                }
            }
        }
        Ok(LatticeMap { matrix, source: m1.source, target: m2.target })
    }

    /// Preserves the intersection form and sends `−K` to `−K`.
    pub fn is_isometry(&self) -> bool {
        let cols: Vec<PicClass> = (0..RANK).map(|j| self.column(j)).collect();
        for a in 0..RANK {
            for b in 0..RANK {
                let expected = pair_coeffs(PicClass::unit(a, self.source).coeffs(), PicClass::unit(b, self.source).coeffs());
                if pair_coeffs(cols[a].coeffs(), cols[b].coeffs()) != expected {
                    return false;
                }
            }
        }
        self.apply(&PicClass::anticanonical(self.source)).ok() == Some(PicClass::anticanonical(self.target))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == Self::identity(self.source)
    }

}

impl fmt::Display for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = self.source.labels();
        for (j, label) in src.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{label} -> {}", self.column(j))?;
        }
        Ok(())
    }
}

impl Serialize for LatticeMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<IntSlice<'_>> = self.matrix.chunks(RANK).map(IntSlice).collect();
        let mut st = s.serialize_struct("LatticeMap", 3)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("target", &self.target)?;
        st.serialize_field("matrix", &rows)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_is_involutive_isometry() {
        let r = LatticeMap::reflection(&"H_q-E_3-E_4".parse().unwrap()).unwrap();
        assert!(r.is_isometry());
        assert!(LatticeMap::compose(&r, &r).unwrap().is_identity());
    }

    #[test]
    fn composition_checks_tags() {
        let id_s = LatticeMap::identity(BasisTag::Standard);
        let id_a = LatticeMap::identity(BasisTag::Applied);
        assert!(LatticeMap::compose(&id_s, &id_a).is_err());
        assert!(id_s.apply(&PicClass::unit(0, BasisTag::Applied)).is_err());
    }
}
