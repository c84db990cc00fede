//! The full battery of lattice-level consistency checks.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::class::PicClass;
use super::data::{
    applied_symmetry_basis, basis_change, gram_matrix, psi_star, root_basis, root_permutation, transport,
    translation_vector, BasisChange, Direction, RootBasisId, E6_AFFINE_GRAM,
};
use super::map::LatticeMap;
use super::word::{phi_star, phi_word, psi_word, realize_generator, realize_word, Generator, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationEntry {
    pub map: String,
    pub basis: RootBasisId,
    pub vector: Option<Vec<i64>>,
    pub expected: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub checks: Vec<Check>,
    pub translation_vectors: Vec<TranslationEntry>,
    /// `ψ*(δᵢ) = δ_{perm[i]}` on the applied surface roots.
    pub surface_root_permutation: Vec<Option<usize>>,
    /// Informational comparisons that are not pass/fail criteria.
    pub diagnostics: Vec<Check>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()
}

fn word(s: &str) -> Word {
    s.parse().expect("built-in word")
}

fn realize(s: &str) -> LatticeMap {
    realize_word(&word(s)).expect("nonempty word")
}

pub fn lattice_report() -> LatticeReport {
    let mut checks = Vec::new();
    let mut diagnostics = Vec::new();

    let reference: Vec<Vec<BigInt>> =
        E6_AFFINE_GRAM.iter().map(|row| row.iter().map(|&v| BigInt::from(v)).collect()).collect();
    for id in [RootBasisId::AppliedSurface, RootBasisId::StandardSurface] {
        let g = gram_matrix(root_basis(id));
        checks.push(Check::new(format!("gram({id:?}) = E6(1) Cartan matrix"), g == reference, format!("{:?}", small_rows(&g))));
    }
    let triangle: Vec<Vec<BigInt>> =
        (0..3).map(|i| (0..3).map(|j| BigInt::from(if i == j { -2 } else { 1 })).collect()).collect();
    for id in [RootBasisId::StandardSymmetry, RootBasisId::AppliedSymmetryPre, RootBasisId::AppliedSymmetryFin] {
        let g = gram_matrix(root_basis(id));
        checks.push(Check::new(format!("gram({id:?}) = A2(1) matrix"), g == triangle, format!("{:?}", small_rows(&g))));
    }
    for id in RootBasisId::ALL {
        let b = root_basis(id);
        let minus_k = PicClass::anticanonical(b.basis());
        checks.push(Check::new(format!("delta({id:?}) = -K"), b.delta == minus_k, b.delta.to_string()));
    }

    let psi = psi_star();
    checks.push(Check::new("psi* is an isometry fixing -K", psi.is_isometry(), ""));
    for g in Generator::ALL {
        checks.push(Check::new(format!("{g} is an isometry fixing -K"), realize_generator(g).is_isometry(), ""));
    }

    for which in [BasisChange::Pre, BasisChange::Fin] {
        let round = LatticeMap::compose(basis_change(which, Direction::ToApplied), basis_change(which, Direction::ToStandard))
            .expect("tags");
        checks.push(Check::new(format!("{which:?} columns are mutually inverse"), round.is_identity(), ""));
        let to_std = basis_change(which, Direction::ToStandard);
        let surface_ok = root_basis(RootBasisId::AppliedSurface)
            .roots
            .iter()
            .zip(&root_basis(RootBasisId::StandardSurface).roots)
            .all(|(a, s)| to_std.apply(a).as_ref() == Ok(s));
        checks.push(Check::new(format!("{which:?} sends applied surface roots to standard ones"), surface_ok, ""));
        let symmetry_ok = applied_symmetry_basis(which)
            .roots
            .iter()
            .zip(&root_basis(RootBasisId::StandardSymmetry).roots)
            .all(|(a, s)| to_std.apply(a).as_ref() == Ok(s));
        checks.push(Check::new(format!("{which:?} sends its applied symmetry roots to standard ones"), symmetry_ok, ""));
    }

    let phi = phi_star();
    let psi_pre = transport(psi, BasisChange::Pre).expect("tags");
    let psi_fin = transport(psi, BasisChange::Fin).expect("tags");
    let mut translation_vectors = Vec::new();
    let mut tv = |label: &str, m: &LatticeMap, basis: RootBasisId, expected: [i64; 3], checks: &mut Vec<Check>| {
        let got = translation_vector(m, root_basis(basis)).ok().map(|v| small(&v));
        let pass = got.as_deref() == Some(&expected[..]);
        checks.push(Check::new(format!("translation({label}, {basis:?}) = {expected:?}"), pass, format!("{got:?}")));
        translation_vectors.push(TranslationEntry { map: label.to_string(), basis, vector: got, expected: expected.to_vec() });
    };
    tv("psi*", psi, RootBasisId::AppliedSymmetryPre, [1, -1, 0], &mut checks);
    tv("phi*", &phi, RootBasisId::StandardSymmetry, [0, 1, -1], &mut checks);
    tv("realize(s1 s2 w0 w2)", &realize("s1 s2 w0 w2"), RootBasisId::StandardSymmetry, [0, 1, -1], &mut checks);
    tv("realize(s1 s2 w2 w1)", &realize("s1 s2 w2 w1"), RootBasisId::StandardSymmetry, [1, -1, 0], &mut checks);
    tv("psi*", psi, RootBasisId::AppliedSymmetryFin, [0, 1, -1], &mut checks);

    let phi_w = realize_word(&phi_word()).expect("nonempty");
    let psi_w = realize_word(&psi_word()).expect("nonempty");
    checks.push(Check::new("realize(s1 s2 w0 w2) = phi*", phi_w == phi, ""));
    checks.push(Check::new("realize(s1 s2 w2 w1) = psi* read through PRE", psi_w == psi_pre, ""));
    let w1 = realize_generator(Generator::W1);
    let conj = LatticeMap::compose(w1, &LatticeMap::compose(&phi, w1).expect("tags")).expect("tags");
    checks.push(Check::new("w1 phi* w1 = psi* read through PRE", conj == psi_pre, ""));
    checks.push(Check::new("realize(w1 . s1 s2 w0 w2 . w1) = realize(s1 s2 w2 w1)", realize("w1 s1 s2 w0 w2 w1") == psi_w, ""));
    let fin_pre = LatticeMap::compose(basis_change(BasisChange::Fin, Direction::ToStandard), basis_change(BasisChange::Pre, Direction::ToApplied))
        .expect("tags");
    checks.push(Check::new("FIN . PRE^-1 = w1", &fin_pre == w1, ""));

    for g in Generator::ALL {
        checks.push(Check::new(format!("{g}{g} = e"), realize(&format!("{g} {g}")).is_identity(), ""));
    }
    for (i, j) in [("w0", "w1"), ("w0", "w2"), ("w1", "w2")] {
        let lhs = realize(&format!("{i} {j} {i}"));
        let rhs = realize(&format!("{j} {i} {j}"));
        checks.push(Check::new(format!("{i}{j}{i} = {j}{i}{j}"), lhs == rhs, ""));
    }
    checks.push(Check::new("(s1 s2)^3 = e", realize("s1 s2 s1 s2 s1 s2").is_identity(), ""));

    let surface = root_basis(RootBasisId::AppliedSurface);
    let perm = root_permutation(psi, surface).expect("tags");
    let is_perm = {
        let mut seen = [false; 7];
        perm.iter().all(|p| p.is_some_and(|k| !std::mem::replace(&mut seen[k], true)))
    };
    checks.push(Check::new("psi* permutes the applied surface roots", is_perm, format!("{perm:?}")));
    checks.push(Check::new("psi*(delta_1) = delta_0", perm[1] == Some(0), ""));

    // The literal "FIN-conjugated psi-word" reading; FIN carries psi* to the phi-word instead.
    diagnostics.push(Check::new("realize(s1 s2 w2 w1) = psi* read through FIN", psi_w == psi_fin, "expected unequal"));
    diagnostics.push(Check::new("realize(s1 s2 w0 w2) = psi* read through FIN", phi_w == psi_fin, ""));

    LatticeReport { checks, translation_vectors, surface_root_permutation: perm, diagnostics }
}

fn small_rows(g: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    g.iter().map(|r| small(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let r = lattice_report();
        let failed: Vec<_> = r.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(!r.diagnostics[0].pass);
        assert!(r.diagnostics[1].pass);
    }
}
