//! Exact algebra on the Picard lattice `Pic ≅ ℤ¹⁰`.

mod class;
mod data;
mod map;
mod verify;
mod word;

pub use class::{BasisTag, PicClass, RANK};
pub use data::{
    applied_symmetry_basis, basis_change, change_basis, gram_matrix, psi_star, root_basis, root_permutation, transport,
    translation_vector, BasisChange, Direction, RootBasis, RootBasisId, RootKind, E6_AFFINE_GRAM, SURFACE_MARKS,
};
pub use map::LatticeMap;
pub use verify::{lattice_report, Check, LatticeReport, TranslationEntry};
pub use word::{
    phi_star, phi_word, psi_word, realize_generator, realize_word, realize_word_with, Generator, Word, WordOrder,
    WORD_ORDER,
};
