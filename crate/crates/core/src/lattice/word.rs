use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Serialize, Serializer};

use super::class::{BasisTag, PicClass};
use super::data::{psi_star, root_basis, transport, BasisChange, RootBasisId};
use super::map::LatticeMap;
use crate::error::{Error, Result};

/// Generators of the extended affine Weyl group W̃(A₂⁽¹⁾).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    W0,
    W1,
    W2,
    Sigma1,
    Sigma2,
}

impl Generator {
    pub const ALL: [Generator; 5] = [Generator::W0, Generator::W1, Generator::W2, Generator::Sigma1, Generator::Sigma2];

    pub fn as_str(self) -> &'static str {
        match self {
            Generator::W0 => "w0",
            Generator::W1 => "w1",
            Generator::W2 => "w2",
            Generator::Sigma1 => "s1",
            Generator::Sigma2 => "s2",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// How a written word `g₁ g₂ … gₖ` acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordOrder {
    /// `gₖ` acts first, as in composition of functions.
    RightToLeft,
    /// `g₁` acts first.
    LeftToRight,
}

/// The convention used throughout, for both lattice and birational actions.
pub const WORD_ORDER: WordOrder = WordOrder::RightToLeft;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn new(gens: impl Into<Vec<Generator>>) -> Self {
        Self(gens.into())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Written concatenation `self · other`.
    pub fn then(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn power(&self, k: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * k).collect())
    }

    /// Generators in the order they act under `order`.
    pub fn action_sequence(&self, order: WordOrder) -> Vec<(usize, Generator)> {
        let mut seq: Vec<(usize, Generator)> = self.0.iter().copied().enumerate().collect();
        if order == WordOrder::RightToLeft {
            seq.reverse();
        }
        seq
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|g| g.as_str()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `s1 s2 w0 w2`, `s1s2w0w2`, `σ1σ2w0w2` or `sigma1 …`.
    fn from_str(text: &str) -> Result<Self> {
        let cleaned: String = text
            .replace("sigma", "s")
            .replace('σ', "s")
            .replace('₀', "0")
            .replace('₁', "1")
            .replace('₂', "2")
            .chars()
            .filter(|c| !c.is_whitespace() && !matches!(c, ',' | '.' | '*' | '∘' | '·'))
            .collect();
        let chars: Vec<char> = cleaned.chars().collect();
        let mut gens = Vec::new();
        for pair in chars.chunks(2) {
            let g = match pair {
                ['w', '0'] => Generator::W0,
                ['w', '1'] => Generator::W1,
                ['w', '2'] => Generator::W2,
                ['s', '1'] => Generator::Sigma1,
                ['s', '2'] => Generator::Sigma2,
                _ => return Err(Error::InvalidArgument(format!("cannot parse word {text:?}"))),
            };
            gens.push(g);
        }
        if gens.is_empty() {
            return Err(Error::InvalidArgument("empty word".into()));
        }
        Ok(Word(gens))
    }
}

/// `σ₁σ₂w₀w₂`, the standard discrete Painlevé step φ.
pub fn phi_word() -> Word {
    Word::new([Generator::Sigma1, Generator::Sigma2, Generator::W0, Generator::W2])
}

/// `σ₁σ₂w₂w₁`, the map ψ of the recurrence.
pub fn psi_word() -> Word {
    Word::new([Generator::Sigma1, Generator::Sigma2, Generator::W2, Generator::W1])
}

fn reflection(s: &str) -> LatticeMap {
    let root: PicClass = s.parse().expect("built-in root");
    LatticeMap::reflection(&root).expect("built-in root")
}

fn product(maps: &[LatticeMap]) -> LatticeMap {
    maps.iter()
        .skip(1)
        .fold(maps[0].clone(), |acc, m| LatticeMap::compose(&acc, m).expect("same basis"))
}

static GENERATORS: LazyLock<Vec<LatticeMap>> = LazyLock::new(|| {
    let alphas = &root_basis(RootBasisId::StandardSymmetry).roots;
    let w: Vec<LatticeMap> = alphas.iter().map(|a| LatticeMap::reflection(a).expect("root")).collect();
    // The three reflections inside each σ are mutually orthogonal.
    let s1 = product(&[reflection("E_1-E_3"), reflection("E_2-E_4"), reflection("H_q-H_p")]);
    let s2 = product(&[reflection("E_1-E_7"), reflection("E_2-E_8"), reflection("H_q-E_5-E_6")]);
    vec![w[0].clone(), w[1].clone(), w[2].clone(), s1, s2]
});

/// Lattice action of one generator on the standard basis.
pub fn realize_generator(g: Generator) -> &'static LatticeMap {
    let i = Generator::ALL.iter().position(|h| *h == g).expect("listed generator");
    &GENERATORS[i]
}

pub fn realize_word(word: &Word) -> Result<LatticeMap> {
    realize_word_with(word, WORD_ORDER)
}

pub fn realize_word_with(word: &Word, order: WordOrder) -> Result<LatticeMap> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("cannot realize the empty word".into()));
    }
    let mut m = LatticeMap::identity(BasisTag::Standard);
    for (_, g) in word.action_sequence(order) {
        m = LatticeMap::compose(realize_generator(g), &m)?;
    }
    Ok(m)
}

/// φ* on the standard basis: ψ* carried through the corrected identification.
pub fn phi_star() -> LatticeMap {
    transport(psi_star(), BasisChange::Fin).expect("tags line up")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_parsing() {
        assert_eq!("s1 s2 w0 w2".parse::<Word>().unwrap(), phi_word());
        assert_eq!("σ₁σ₂w₂w₁".parse::<Word>().unwrap(), psi_word());
        assert_eq!("sigma1,sigma2,w2,w1".parse::<Word>().unwrap(), psi_word());
        assert!("w3".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert_eq!(phi_word().to_string(), "s1 s2 w0 w2");
    }

    #[test]
    fn involution_realizes_identity() {
        assert!(realize_word(&"w1 w1".parse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn order_flag_matters() {
        let rl = realize_word_with(&phi_word(), WordOrder::RightToLeft).unwrap();
        let lr = realize_word_with(&phi_word(), WordOrder::LeftToRight).unwrap();
        assert_ne!(rl, lr);
    }
}
