use thiserror::Error;

use crate::lattice::BasisTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("precision must be at least 64 bits, got {0}")]
    InvalidPrecision(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis tag mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: BasisTag, found: BasisTag },

    #[error("{class} is not a root (self-intersection {self_pairing}, expected -2)")]
    NotARoot { class: String, self_pairing: String },

    #[error("lattice map is not an isometry fixing the anti-canonical class")]
    NotAnIsometry,

    #[error("lattice map is not a translation: root {root} moves by a non-multiple of delta")]
    NotATranslation { root: usize },

    /// The point lies on a curve contracted by `map`.
    #[error("exceptional locus of {map}{}: {denominator} vanishes", step.map(|i| format!(" (word position {i})")).unwrap_or_default())]
    ExceptionalLocus {
        map: &'static str,
        step: Option<usize>,
        denominator: &'static str,
    },

    #[error("root variables are not normalized: a0 + a1 + a2 = {0}")]
    NotNormalized(String),

    #[error("singular point: {0}")]
    Singular(&'static str),

    #[error("singular point at n = {n}: {what}")]
    SingularAt { what: &'static str, n: usize },

    #[error("quadrature did not converge: {0}")]
    NonConverged(String),

    #[error("precision exhausted at n = {n} ({loss_bits:.1} bits lost of {precision})")]
    PrecisionExhausted {
        n: usize,
        loss_bits: f64,
        precision: usize,
    },
}
