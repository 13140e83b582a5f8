//! Abstract structure of H and of the Galois group.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{GenImages, SymElem};
use crate::group::{cyclic, dihedral, product_of, symmetric3, Concrete, FiniteGroup, Mask};
use crate::surface::{galois_generators, h_generators, Psi};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub h_order: usize,
    pub sigma_order: usize,
    pub n_order: usize,
    pub n_invariants: Vec<u64>,
    pub n_normal: bool,
    pub semidirect: bool,
    pub gal_order: usize,
    pub gal_abelianization: Vec<u64>,
    pub gal_is_s3_c2_d4: bool,
}

pub fn h_group() -> Result<Concrete<Psi>> {
    Concrete::generate(Psi::identity(), &h_generators(), |a, b| a.compose(b), 100_000)
}

/// ζ₁₂ᵏ (k a unit mod 12), ±βᵢ and c₀, c₁, c₂: a Galois-stable set
/// generating L, so the Galois group acts faithfully on it.
pub fn galois_roots() -> &'static [SymElem] {
    static ROOTS: OnceLock<Vec<SymElem>> = OnceLock::new();
    ROOTS.get_or_init(|| {
        let mut v: Vec<SymElem> = [1, 5, 7, 11].iter().map(|&k| SymElem::zeta(12, k)).collect();
        for i in 0..3 {
            v.push(SymElem::beta(i));
            v.push(SymElem::beta(i).neg());
        }
        v.extend((0..3).map(SymElem::c));
        v
    })
}

/// The permutation of [`galois_roots`] induced by an automorphism.
pub fn galois_perm(g: &GenImages) -> Result<Vec<u8>> {
    let roots = galois_roots();
    roots
        .iter()
        .map(|r| {
            let img = r.apply_automorphism(g);
            roots
                .iter()
                .position(|x| *x == img)
                .map(|i| i as u8)
                .ok_or_else(|| Error::StructureMismatch("root set is not Galois-stable".into()))
        })
        .collect()
}

/// The Galois group as permutations of [`galois_roots`]; products compose
/// as functions, matching [`GenImages::compose`].
pub fn galois_group() -> Result<Concrete<Vec<u8>>> {
    let gens = galois_generators().iter().map(galois_perm).collect::<Result<Vec<_>>>()?;
    let id: Vec<u8> = (0..galois_roots().len() as u8).collect();
    Concrete::generate(id, &gens, |a, b| b.iter().map(|&i| a[i as usize]).collect(), 100_000)
}

/// The automorphism with the given word in τ₁…τ₅.
pub fn galois_element(word: &[usize]) -> GenImages {
    word.iter().fold(GenImages::identity(), |acc, &k| acc.compose(&galois_generators()[k]))
}

/// S₃ × ℤ/2 × D₄.
pub fn galois_model() -> FiniteGroup {
    product_of(&[symmetric3(), cyclic(2), dihedral(4)])
}

fn mask_of(h: &Concrete<Psi>, pred: impl Fn(&Psi) -> bool) -> Mask {
    let mut m = Mask::empty(h.elements.len());
    for (i, p) in h.elements.iter().enumerate() {
        if pred(p) {
            m.insert(i);
        }
    }
    m
}

pub fn group_abstract_check() -> Result<StructureReport> {
    let h = h_group()?;
    let g = &h.group;
    let sigma = mask_of(&h, |p| p.diagonal_part().is_identity());
    let n = mask_of(&h, |p| p.perm_part().is_identity());
    if g.closure(sigma.iter()) != sigma || g.closure(n.iter()) != n {
        return Err(Error::StructureMismatch("Σ or N is not a subgroup".into()));
    }
    if g.restrict(&sigma).isomorphism(&symmetric3()).is_none() {
        return Err(Error::StructureMismatch("Σ is not S₃".into()));
    }
    let ng = g.restrict(&n);
    let n_invariants = ng.abelian_invariants()?;
    let n_normal = g.is_normal(&n);
    let meet = sigma.iter().filter(|&x| n.contains(x)).count();
    let semidirect = n_normal && meet == 1 && sigma.len() * n.len() == g.order();
    let gal = galois_group()?;
    let gal_is = gal.group.isomorphism(&galois_model()).is_some();
    let rep = StructureReport {
        h_order: g.order(),
        sigma_order: sigma.len(),
        n_order: n.len(),
        n_invariants,
        n_normal,
        semidirect,
        gal_order: gal.group.order(),
        gal_abelianization: gal.group.abelianization()?,
        gal_is_s3_c2_d4: gal_is,
    };
    if rep.h_order != 144 || rep.n_invariants != vec![2, 2, 6] || !rep.semidirect {
        return Err(Error::StructureMismatch(format!("H: {rep:?}")));
    }
    if rep.gal_order != 96 || !rep.gal_is_s3_c2_d4 {
        return Err(Error::StructureMismatch(format!("Gal: {rep:?}")));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let t = std::time::Instant::now();
        let rep = group_abstract_check().unwrap();
        eprintln!("{rep:?} in {:?}", t.elapsed());
        assert_eq!(rep.gal_abelianization, galois_model().abelianization().unwrap());
    }

    #[test]
    fn permutations_match_composition() {
        let gal = galois_group().unwrap();
        for w in [vec![0, 1], vec![2, 3, 4], vec![1, 1, 3, 0]] {
            let g = galois_element(&w);
            let p = galois_perm(&g).unwrap();
            let idx = gal.index_of(&p).unwrap();
            let expected = w.iter().fold(0, |acc, &k| gal.group.mul(acc, gal.group.gens[k] as usize));
            assert_eq!(idx, expected);
        }
    }
}
