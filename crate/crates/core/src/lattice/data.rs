//! Constant lattice data: root bases, the induced map ψ*, and the two
//! identifications of the applied basis with the standard one.

use std::sync::LazyLock;

use num_bigint::BigInt;
use serde::Serialize;

use super::class::{BasisTag, PicClass};
use super::map::LatticeMap;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    Surface,
    Symmetry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootBasisId {
    StandardSurface,
    StandardSymmetry,
    AppliedSurface,
    /// Symmetry roots matched by the first identification.
    AppliedSymmetryPre,
    /// Symmetry roots after the corrected identification.
    AppliedSymmetryFin,
}

impl RootBasisId {
    pub const ALL: [RootBasisId; 5] = [
        RootBasisId::StandardSurface,
        RootBasisId::StandardSymmetry,
        RootBasisId::AppliedSurface,
        RootBasisId::AppliedSymmetryPre,
        RootBasisId::AppliedSymmetryFin,
    ];
}

/// Roots with self-intersection −2 and the null class `delta` they sum to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootBasis {
    pub id: RootBasisId,
    pub kind: RootKind,
    pub roots: Vec<PicClass>,
    /// Multiplicities of the roots in `delta`.
    pub marks: Vec<i64>,
    pub delta: PicClass,
}

impl RootBasis {
    pub fn new(id: RootBasisId, kind: RootKind, roots: Vec<PicClass>, marks: Vec<i64>) -> Result<Self> {
        if roots.len() != marks.len() || roots.is_empty() {
            return Err(Error::InvalidArgument("roots and marks differ in length".into()));
        }
        let basis = roots[0].basis();
        let mut delta = PicClass::zero(basis);
        for (r, &m) in roots.iter().zip(&marks) {
            super::class::ensure_root(r)?;
            delta = delta.checked_add(&r.scale(&BigInt::from(m)))?;
        }
        Ok(Self { id, kind, roots, marks, delta })
    }

    pub fn basis(&self) -> BasisTag {
        self.delta.basis()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BasisChange {
    /// First identification, matching surface roots only.
    Pre,
    /// Corrected identification under which ψ becomes the standard step.
    Fin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToStandard,
    ToApplied,
}

pub(crate) struct LatticeData {
    pub psi_star: LatticeMap,
    pub pre_to_standard: LatticeMap,
    pub pre_to_applied: LatticeMap,
    pub fin_to_standard: LatticeMap,
    pub fin_to_applied: LatticeMap,
    pub bases: Vec<RootBasis>,
}

/// E₆⁽¹⁾ Cartan matrix, sign convention δᵢ·δⱼ.
pub const E6_AFFINE_GRAM: [[i64; 7]; 7] = [
    [-2, 0, 0, 0, 0, 0, 1],
    [0, -2, 1, 0, 0, 0, 0],
    [0, 1, -2, 1, 0, 0, 0],
    [0, 0, 1, -2, 1, 0, 1],
    [0, 0, 0, 1, -2, 1, 0],
    [0, 0, 0, 0, 1, -2, 0],
    [1, 0, 0, 1, 0, 0, -2],
];

pub const SURFACE_MARKS: [i64; 7] = [1, 1, 2, 3, 2, 1, 2];

fn cls(s: &str) -> PicClass {
    s.parse().unwrap_or_else(|e| panic!("bad built-in class {s:?}: {e}"))
}

fn cols(source: BasisTag, images: [&str; 10]) -> LatticeMap {
    let columns: Vec<PicClass> = images.iter().map(|s| cls(s)).collect();
    LatticeMap::from_columns(source, &columns).expect("built-in map")
}

fn basis(id: RootBasisId, kind: RootKind, roots: &[&str]) -> RootBasis {
    let marks = match kind {
        RootKind::Surface => SURFACE_MARKS.to_vec(),
        RootKind::Symmetry => vec![1; roots.len()],
    };
    RootBasis::new(id, kind, roots.iter().map(|s| cls(s)).collect(), marks).expect("built-in root basis")
}

fn build() -> LatticeData {
    use BasisTag::{Applied, Standard};
    // Images of H_x, H_y, F_1 … F_8.
    let psi_star = cols(
        Applied,
        [
            "4H_x+2H_y-F_2-F_3-2F_4-2F_5-2F_6-F_7-F_8",
            "2H_x+H_y-F_4-F_5-F_6-F_7",
            "2H_x+H_y-F_4-F_5-F_6-F_7-F_8",
            "2H_x+H_y-F_3-F_4-F_5-F_6-F_7",
            "2H_x+H_y-F_2-F_4-F_5-F_6-F_7",
            "H_x+H_y-F_4-F_5-F_6",
            "H_x-F_6",
            "H_x-F_5",
            "H_x-F_4",
            "F_1",
        ],
    );
    let pre_to_standard = cols(
        Applied,
        ["H_p", "H_q+H_p-E_1-E_3", "E_4", "E_2", "H_p-E_1", "H_p-E_3", "E_5", "E_6", "E_7", "E_8"],
    );
    // Images of H_q, H_p, E_1 … E_8.
    let pre_to_applied = cols(
        Standard,
        ["H_x+H_y-F_3-F_4", "H_x", "H_x-F_3", "F_2", "H_x-F_4", "F_1", "F_5", "F_6", "F_7", "F_8"],
    );
    let fin_to_standard = cols(
        Applied,
        [
            "H_q+H_p-E_3-E_4",
            "H_q+H_p-E_1-E_3",
            "H_q-E_3",
            "E_2",
            "H_q+H_p-E_1-E_3-E_4",
            "H_p-E_3",
            "E_5",
            "E_6",
            "E_7",
            "E_8",
        ],
    );
    let fin_to_applied = cols(
        Standard,
        [
            "H_x+H_y-F_3-F_4",
            "H_x+H_y-F_1-F_3",
            "H_x-F_3",
            "F_2",
            "H_x+H_y-F_1-F_3-F_4",
            "H_y-F_3",
            "F_5",
            "F_6",
            "F_7",
            "F_8",
        ],
    );
    let bases = vec![
        basis(
            RootBasisId::StandardSurface,
            RootKind::Surface,
            &["E_7-E_8", "E_1-E_2", "H_q-E_1-E_5", "E_5-E_6", "H_p-E_3-E_5", "E_3-E_4", "E_6-E_7"],
        ),
        basis(
            RootBasisId::StandardSymmetry,
            RootKind::Symmetry,
            &["H_q+H_p-E_5-E_6-E_7-E_8", "H_q-E_3-E_4", "H_p-E_1-E_2"],
        ),
        basis(
            RootBasisId::AppliedSurface,
            RootKind::Surface,
            &["F_7-F_8", "H_x-F_2-F_3", "H_y-F_4-F_5", "F_5-F_6", "F_4-F_5", "H_x-F_1-F_4", "F_6-F_7"],
        ),
        basis(
            RootBasisId::AppliedSymmetryPre,
            RootKind::Symmetry,
            &["2H_x+H_y-F_3-F_4-F_5-F_6-F_7-F_8", "H_y-F_1-F_3", "F_3-F_2"],
        ),
        basis(
            RootBasisId::AppliedSymmetryFin,
            RootKind::Symmetry,
            &["2H_x+2H_y-F_1-2F_3-F_4-F_5-F_6-F_7-F_8", "-H_y+F_1+F_3", "H_y-F_1-F_2"],
        ),
    ];
    let data = LatticeData { psi_star, pre_to_standard, pre_to_applied, fin_to_standard, fin_to_applied, bases };
    if let Err(problem) = data.self_check() {
        panic!("lattice data failed its consistency check: {problem}");
    }
    data
}

impl LatticeData {
    /// Both columns of each identification must be mutually inverse.
    fn self_check(&self) -> std::result::Result<(), String> {
        for (name, to_std, to_app) in [
            ("PRE", &self.pre_to_standard, &self.pre_to_applied),
            ("FIN", &self.fin_to_standard, &self.fin_to_applied),
        ] {
            let round_a = LatticeMap::compose(to_app, to_std).map_err(|e| e.to_string())?;
            let round_s = LatticeMap::compose(to_std, to_app).map_err(|e| e.to_string())?;
            if !round_a.is_identity() || !round_s.is_identity() {
                return Err(format!("{name} columns are not mutually inverse"));
            }
        }
        Ok(())
    }
}

pub(crate) static DATA: LazyLock<LatticeData> = LazyLock::new(build);

/// The induced action of ψ on Pic (applied basis on both sides).
pub fn psi_star() -> &'static LatticeMap {
    &DATA.psi_star
}

pub fn root_basis(id: RootBasisId) -> &'static RootBasis {
    DATA.bases.iter().find(|b| b.id == id).expect("every id has a basis")
}

pub fn basis_change(which: BasisChange, direction: Direction) -> &'static LatticeMap {
    match (which, direction) {
        (BasisChange::Pre, Direction::ToStandard) => &DATA.pre_to_standard,
        (BasisChange::Pre, Direction::ToApplied) => &DATA.pre_to_applied,
        (BasisChange::Fin, Direction::ToStandard) => &DATA.fin_to_standard,
        (BasisChange::Fin, Direction::ToApplied) => &DATA.fin_to_applied,
    }
}

pub fn change_basis(c: &PicClass, which: BasisChange, direction: Direction) -> Result<PicClass> {
    basis_change(which, direction).apply(c)
}

/// `B ∘ m ∘ B⁻¹`: an applied-basis endomorphism read in the standard basis.
pub fn transport(m: &LatticeMap, which: BasisChange) -> Result<LatticeMap> {
    let inner = LatticeMap::compose(m, basis_change(which, Direction::ToApplied))?;
    LatticeMap::compose(basis_change(which, Direction::ToStandard), &inner)
}

/// Symmetry-root basis the identification sends onto the standard one.
pub fn applied_symmetry_basis(which: BasisChange) -> &'static RootBasis {
    match which {
        BasisChange::Pre => root_basis(RootBasisId::AppliedSymmetryPre),
        BasisChange::Fin => root_basis(RootBasisId::AppliedSymmetryFin),
    }
}

pub fn gram_matrix(basis: &RootBasis) -> Vec<Vec<BigInt>> {
    basis
        .roots
        .iter()
        .map(|a| basis.roots.iter().map(|b| a.pair(b).expect("one basis per root basis")).collect())
        .collect()
}

/// `kᵢ` with `m(αᵢ) = αᵢ + kᵢ δ`.
pub fn translation_vector(m: &LatticeMap, basis: &RootBasis) -> Result<Vec<BigInt>> {
    if m.source() != basis.basis() || m.target() != basis.basis() {
        return Err(Error::TagMismatch { expected: basis.basis(), found: m.source() });
    }
    if !m.is_isometry() {
        return Err(Error::NotAnIsometry);
    }
    let delta = &basis.delta;
    let pivot = delta.coeffs().iter().position(|c| c != &BigInt::from(0)).ok_or(Error::NotATranslation { root: 0 })?;
    basis
        .roots
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let moved = m.apply(a)?.checked_sub(a)?;
            let num = &moved.coeffs()[pivot];
            let den = &delta.coeffs()[pivot];
            if num % den != BigInt::from(0) {
                return Err(Error::NotATranslation { root: i });
            }
            let k = num / den;
            if moved != delta.scale(&k) {
                return Err(Error::NotATranslation { root: i });
            }
            Ok(k)
        })
        .collect()
}

/// Index of `m(rootᵢ)` within the same basis, or `None` when it leaves the set.
pub fn root_permutation(m: &LatticeMap, basis: &RootBasis) -> Result<Vec<Option<usize>>> {
    basis
        .roots
        .iter()
        .map(|r| {
            let image = m.apply(r)?;
            Ok(basis.roots.iter().position(|s| *s == image))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_passes_startup_check() {
        assert!(psi_star().is_isometry());
    }

    #[test]
    fn psi_star_examples() {
        let psi = psi_star();
        assert_eq!(psi.apply(&cls("F_8")).unwrap(), cls("F_1"));
        assert_eq!(psi.apply(&cls("H_y")).unwrap(), cls("2H_x+H_y-F_4-F_5-F_6-F_7"));
        let id = LatticeMap::identity(BasisTag::Applied);
        assert_eq!(&LatticeMap::compose(&id, psi).unwrap(), psi);
    }

    #[test]
    fn basis_change_examples() {
        assert_eq!(change_basis(&cls("H_x"), BasisChange::Fin, Direction::ToStandard).unwrap(), cls("H_q+H_p-E_3-E_4"));
        assert_eq!(change_basis(&cls("F_5"), BasisChange::Pre, Direction::ToStandard).unwrap(), cls("E_5"));
        assert!(change_basis(&cls("E_5"), BasisChange::Pre, Direction::ToStandard).is_err());
    }

    #[test]
    fn standard_symmetry_gram_is_triangle() {
        let g = gram_matrix(root_basis(RootBasisId::StandardSymmetry));
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, BigInt::from(if i == j { -2 } else { 1 }));
            }
        }
    }

    #[test]
    fn identity_translation_is_zero() {
        let b = root_basis(RootBasisId::StandardSymmetry);
        let k = translation_vector(&LatticeMap::identity(BasisTag::Standard), b).unwrap();
        assert!(k.iter().all(|x| *x == BigInt::from(0)));
    }

    #[test]
    fn non_translation_is_rejected() {
        let b = root_basis(RootBasisId::StandardSymmetry);
        let w1 = LatticeMap::reflection(&b.roots[1]).unwrap();
        assert!(matches!(translation_vector(&w1, b), Err(Error::NotATranslation { .. })));
    }
}
