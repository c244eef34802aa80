use super::{DiffMorphism, DiffStructure};
use crate::error::{Error, Result};

/// Σ₁ ×_T Σ₂ with its two projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub structure: DiffStructure,
    /// element i of the product is the pair `pairs[i]`
    pub pairs: Vec<(usize, usize)>,
    pub pi1: DiffMorphism,
    pub pi2: DiffMorphism,
    /// set when no pair maps to a common element
    pub empty: bool,
}

/// `quandle_fiber_product`: pairs agreeing over T, conjugated componentwise.
pub fn quandle_fiber_product(psi1: &DiffMorphism, psi2: &DiffMorphism) -> Result<FiberProduct> {
    if psi1.target() != psi2.target() {
        return Err(Error::StructureMismatch);
    }
    let (s1, s2) = (psi1.source(), psi2.source());
    let pairs: Vec<(usize, usize)> = (0..s1.len())
        .flat_map(|a| (0..s2.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| psi1.apply(a) == psi2.apply(b))
        .collect();
    let index = |p: (usize, usize)| pairs.binary_search(&p).expect("pair closed under conjugation");
    let conj = pairs
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .map(|&(c, d)| index((s1.conj(a, c), s2.conj(b, d))))
                .collect()
        })
        .collect();
    let structure = super::build_structure(conj)?;
    let pi1 = DiffMorphism::new(structure.clone(), s1.clone(), pairs.iter().map(|p| p.0).collect())?;
    let pi2 = DiffMorphism::new(structure.clone(), s2.clone(), pairs.iter().map(|p| p.1).collect())?;
    Ok(FiberProduct {
        empty: pairs.is_empty(),
        structure,
        pairs,
        pi1,
        pi2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::families;

    #[test]
    fn identity_square_is_diagonal() {
        let t = families::dihedral(5);
        let id = DiffMorphism::identity(&t);
        let fp = quandle_fiber_product(&id, &id).unwrap();
        assert_eq!(fp.structure, t);
        assert!(fp.pairs.iter().all(|&(a, b)| a == b));
    }

    #[test]
    fn two_surjections_onto_a_point() {
        let point = DiffStructure::trivial(1);
        let a = DiffMorphism::new(DiffStructure::trivial(2), point.clone(), vec![0, 0]).unwrap();
        let d3 = families::dihedral(3);
        let b = DiffMorphism::new(d3.clone(), point, vec![0, 0, 0]).unwrap();
        let fp = quandle_fiber_product(&a, &a).unwrap();
        assert_eq!(fp.structure.len(), 4);
        let fp2 = quandle_fiber_product(&a, &b).unwrap();
        assert_eq!(fp2.structure, DiffStructure::trivial(2).product(&d3));
    }

    #[test]
    fn base_change_by_identity() {
        let t = DiffStructure::trivial(2);
        let s2 = families::dihedral(4);
        let psi2 = DiffMorphism::new(s2.clone(), t.clone(), vec![0, 1, 0, 1]).unwrap();
        let fp = quandle_fiber_product(&DiffMorphism::identity(&t), &psi2).unwrap();
        assert_eq!(fp.structure.len(), 4);
        assert!(fp.pi2.is_injective() && fp.pi2.is_surjective());
    }
}
