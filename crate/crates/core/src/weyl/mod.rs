//! Birational action of W̃(A₂⁽¹⁾) on point configurations `(a₀,a₁,a₂; t; q,p)`.

mod relations;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{Generator, Word, WordOrder, WORD_ORDER};
use crate::scalars::Field;

pub use relations::{relations_report, RelationOutcome, RelationsReport, Witness};

#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig<F> {
    pub a0: F,
    pub a1: F,
    pub a2: F,
    pub t: F,
    pub q: F,
    pub p: F,
}

impl<F: Field> PointConfig<F> {
    pub fn new(a0: F, a1: F, a2: F, t: F, q: F, p: F) -> Self {
        Self { a0, a1, a2, t, q, p }
    }

    pub fn root_sum(&self) -> F {
        self.a0.plus(&self.a1).plus(&self.a2)
    }

    pub fn is_normalized(&self) -> bool {
        self.root_sum().same_value(&self.a0.one_like())
    }

    pub fn same_value(&self, other: &Self) -> bool {
        self.fields().iter().zip(other.fields()).all(|(a, b)| a.same_value(b))
    }

    fn fields(&self) -> [&F; 6] {
        [&self.a0, &self.a1, &self.a2, &self.t, &self.q, &self.p]
    }
}

impl<F: fmt::Display> fmt::Display for PointConfig<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}; {}; {}, {})", self.a0, self.a1, self.a2, self.t, self.q, self.p)
    }
}

impl<F: fmt::Display> Serialize for PointConfig<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PointConfig", 6)?;
        st.serialize_field("a0", &self.a0.to_string())?;
        st.serialize_field("a1", &self.a1.to_string())?;
        st.serialize_field("a2", &self.a2.to_string())?;
        st.serialize_field("t", &self.t.to_string())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("p", &self.p.to_string())?;
        st.end()
    }
}

fn locus(map: &'static str, denominator: &'static str) -> Error {
    Error::ExceptionalLocus { map, step: None, denominator }
}

fn div_or_locus<F: Field>(num: &F, den: &F, map: &'static str, what: &'static str) -> Result<F> {
    if den.is_zero() {
        return Err(locus(map, what));
    }
    num.checked_div(den)
}

pub fn apply_generator<F: Field>(g: Generator, c: &PointConfig<F>) -> Result<PointConfig<F>> {
    let PointConfig { a0, a1, a2, t, q, p } = c;
    Ok(match g {
        Generator::W0 => {
            let shift = div_or_locus(a0, &q.minus(p).plus(t), g.as_str(), "q - p + t")?;
            PointConfig::new(a0.negate(), a1.plus(a0), a2.plus(a0), t.clone(), q.minus(&shift), p.minus(&shift))
        }
        Generator::W1 => {
            let shift = div_or_locus(a1, q, g.as_str(), "q")?;
            PointConfig::new(a0.plus(a1), a1.negate(), a2.plus(a1), t.clone(), q.clone(), p.minus(&shift))
        }
        Generator::W2 => {
            let shift = div_or_locus(a2, p, g.as_str(), "p")?;
            PointConfig::new(a0.plus(a2), a1.plus(a2), a2.negate(), t.clone(), q.plus(&shift), p.clone())
        }
        Generator::Sigma1 => PointConfig::new(a0.negate(), a2.negate(), a1.negate(), t.clone(), p.negate(), q.negate()),
        Generator::Sigma2 => {
            PointConfig::new(a2.negate(), a1.negate(), a0.negate(), t.clone(), q.clone(), q.minus(p).plus(t))
        }
    })
}

pub fn apply_word<F: Field>(word: &Word, c: &PointConfig<F>) -> Result<PointConfig<F>> {
    apply_word_with(word, c, WORD_ORDER)
}

/// Errors carry the written position of the generator that failed.
pub fn apply_word_with<F: Field>(word: &Word, c: &PointConfig<F>, order: WordOrder) -> Result<PointConfig<F>> {
    let mut cur = c.clone();
    for (i, g) in word.action_sequence(order) {
        cur = apply_generator(g, &cur).map_err(|e| match e {
            Error::ExceptionalLocus { map, denominator, .. } => Error::ExceptionalLocus { map, step: Some(i), denominator },
            other => other,
        })?;
    }
    Ok(cur)
}

/// One step of the standard equation on normalized configurations.
pub fn phi_step<F: Field>(c: &PointConfig<F>) -> Result<PointConfig<F>> {
    if !c.is_normalized() {
        return Err(Error::NotNormalized(c.root_sum().to_string()));
    }
    let PointConfig { a0, a1, a2, t, q, p } = c;
    let one = a0.one_like();
    let q_bar = p.minus(t).minus(&div_or_locus(a2, p, "phi", "p")?).minus(q);
    let a1_next = a1.minus(&one);
    let p_bar = q_bar.plus(t).plus(&div_or_locus(&a1_next, &q_bar, "phi", "q_bar")?).minus(p);
    Ok(PointConfig::new(a0.clone(), a1_next, a2.plus(&one), t.clone(), q_bar, p_bar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, QuadExt};

    fn q(n: i64, d: i64) -> QuadExt {
        QuadExt::from_rational(rat(n, d))
    }

    fn pc(v: [(i64, i64); 6]) -> PointConfig<QuadExt> {
        PointConfig::new(q(v[0].0, v[0].1), q(v[1].0, v[1].1), q(v[2].0, v[2].1), q(v[3].0, v[3].1), q(v[4].0, v[4].1), q(v[5].0, v[5].1))
    }

    #[test]
    fn w1_example() {
        let c = pc([(1, 2), (1, 4), (1, 4), (1, 1), (2, 1), (3, 1)]);
        let expected = pc([(3, 4), (-1, 4), (1, 2), (1, 1), (2, 1), (23, 8)]);
        assert_eq!(apply_generator(Generator::W1, &c).unwrap(), expected);
    }

    #[test]
    fn w0_with_zero_root_keeps_point() {
        let c = pc([(0, 1), (1, 3), (2, 3), (1, 1), (2, 1), (7, 1)]);
        assert_eq!(apply_generator(Generator::W0, &c).unwrap(), PointConfig { a0: q(0, 1), ..c.clone() });
    }

    #[test]
    fn sigma1_row() {
        let c = pc([(1, 2), (1, 3), (1, 6), (5, 1), (2, 1), (7, 1)]);
        let expected = pc([(-1, 2), (-1, 6), (-1, 3), (5, 1), (-7, 1), (-2, 1)]);
        assert_eq!(apply_generator(Generator::Sigma1, &c).unwrap(), expected);
    }

    #[test]
    fn phi_example() {
        let c = pc([(1, 1), (0, 1), (0, 1), (0, 1), (1, 1), (2, 1)]);
        let expected = pc([(1, 1), (-1, 1), (1, 1), (0, 1), (1, 1), (-2, 1)]);
        assert_eq!(phi_step(&c).unwrap(), expected);
    }

    #[test]
    fn phi_rejects_unnormalized_and_loci() {
        let c = pc([(1, 1), (1, 1), (0, 1), (0, 1), (1, 1), (2, 1)]);
        assert!(matches!(phi_step(&c), Err(Error::NotNormalized(_))));
        let c = pc([(1, 1), (0, 1), (0, 1), (0, 1), (1, 1), (0, 1)]);
        assert!(matches!(phi_step(&c), Err(Error::ExceptionalLocus { map: "phi", denominator: "p", .. })));
    }

    #[test]
    fn word_error_reports_position() {
        // w1 acts first (rightmost) and hits q = 0.
        let c = pc([(1, 2), (1, 4), (1, 4), (1, 1), (0, 1), (3, 1)]);
        let err = apply_word(&"w2 w1".parse().unwrap(), &c).unwrap_err();
        assert_eq!(err, Error::ExceptionalLocus { map: "w1", step: Some(1), denominator: "q" });
    }

    #[test]
    fn numeric_mode_matches_exact() {
        let c = pc([(1, 2), (1, 4), (1, 4), (1, 1), (2, 1), (3, 1)]);
        let exact = apply_word(&crate::lattice::psi_word(), &c).unwrap();
        let lift = |x: &QuadExt| crate::scalars::to_real(x, 128).unwrap();
        let cn = PointConfig::new(lift(&c.a0), lift(&c.a1), lift(&c.a2), lift(&c.t), lift(&c.q), lift(&c.p));
        let numeric = apply_word(&crate::lattice::psi_word(), &cn).unwrap();
        let exact_n = PointConfig::new(lift(&exact.a0), lift(&exact.a1), lift(&exact.a2), lift(&exact.t), lift(&exact.q), lift(&exact.p));
        assert!(numeric.same_value(&exact_n));
    }
}
