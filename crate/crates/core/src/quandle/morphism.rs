use super::DiffStructure;
use crate::error::{Error, Result};

/// A structure-preserving map: (σ^τ)ψ = (σψ)^(τψ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffMorphism {
    source: DiffStructure,
    target: DiffStructure,
    map: Vec<usize>,
}

impl DiffMorphism {
    pub fn new(source: DiffStructure, target: DiffStructure, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Quandle(format!(
                "map has {} entries for a source of size {}",
                map.len(),
                source.len()
            )));
        }
        if map.iter().any(|&v| v >= target.len()) {
            return Err(Error::Quandle("map value out of range of the target".into()));
        }
        for s in 0..source.len() {
            for t in 0..source.len() {
                if map[source.conj(s, t)] != target.conj(map[s], map[t]) {
                    return Err(Error::Axiom {
                        axiom: "(σ^τ)^φ=(σ^φ)^(τ^φ)",
                        at: vec![s, t],
                    });
                }
            }
        }
        Ok(DiffMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(s: &DiffStructure) -> Self {
        DiffMorphism {
            source: s.clone(),
            target: s.clone(),
            map: (0..s.len()).collect(),
        }
    }

    pub fn source(&self) -> &DiffStructure {
        &self.source
    }

    pub fn target(&self) -> &DiffStructure {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, s: usize) -> usize {
        self.map[s]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &DiffMorphism) -> Result<DiffMorphism> {
        if self.target != next.source {
            return Err(Error::StructureMismatch);
        }
        Ok(DiffMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&s| next.map[s]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        self.fiber_sizes().iter().all(|&c| c <= 1)
    }

    pub fn is_surjective(&self) -> bool {
        self.fiber_sizes().iter().all(|&c| c >= 1)
    }

    /// |ψ⁻¹(τ)| for every τ in the target.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target.len()];
        for &t in &self.map {
            sizes[t] += 1;
        }
        sizes
    }

    /// The common fiber size when the map is onto with equal fibers.
    pub fn constant_fiber_size(&self) -> Option<usize> {
        let sizes = self.fiber_sizes();
        let first = *sizes.first()?;
        (first > 0 && sizes.iter().all(|&c| c == first)).then_some(first)
    }

    /// Sorted image in the target.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// ψ = inclusion ∘ surjection through the image substructure.
    pub fn factor(&self) -> Result<(DiffMorphism, DiffMorphism)> {
        let img = self.image();
        let sub = self.target.restrict(&img)?;
        let pos = |t: usize| img.binary_search(&t).expect("value lies in the image");
        let surj = DiffMorphism {
            source: self.source.clone(),
            target: sub.clone(),
            map: self.map.iter().map(|&t| pos(t)).collect(),
        };
        let incl = DiffMorphism {
            source: sub,
            target: self.target.clone(),
            map: img,
        };
        Ok((surj, incl))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::families;

    #[test]
    fn rejects_non_morphism() {
        let d3 = families::dihedral(3);
        let t3 = DiffStructure::trivial(3);
        // the identity labeling does not intertwine the two operations
        assert!(DiffMorphism::new(d3.clone(), t3.clone(), vec![0, 1, 2]).is_err());
        assert!(DiffMorphism::new(d3, t3, vec![0, 0, 0]).is_ok());
    }

    #[test]
    fn factorization_recomposes() {
        let t = DiffStructure::trivial(4);
        let s = DiffStructure::trivial(3);
        let psi = DiffMorphism::new(s, t, vec![3, 1, 3]).unwrap();
        let (a, b) = psi.factor().unwrap();
        assert!(a.is_surjective());
        assert!(b.is_injective());
        assert_eq!(a.then(&b).unwrap(), psi);
    }
}
