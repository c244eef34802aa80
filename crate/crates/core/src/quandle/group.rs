use super::{build_structure, DiffStructure};
use crate::error::{Error, Result};

/// A finite group given by its Cayley table, with named endomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupWithOperators {
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    operators: Vec<(String, Vec<usize>)>,
}

impl GroupWithOperators {
    /// Validate a Cayley table, `cayley[g][h] = g·h`.
    pub fn new(cayley: Vec<Vec<usize>>) -> Result<Self> {
        let n = cayley.len();
        if n == 0 || cayley.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::Quandle("malformed Cayley table".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| Error::Quandle("Cayley table has no identity".into()))?;
        let inverse = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| cayley[g][h] == identity)
                    .ok_or_else(|| Error::Quandle(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                        return Err(Error::Quandle(format!(
                            "Cayley table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupWithOperators {
            cayley,
            identity,
            inverse,
            operators: Vec::new(),
        })
    }

    /// Attach an endomorphism, checked to be a homomorphism.
    pub fn with_operator(mut self, name: &str, map: Vec<usize>) -> Result<Self> {
        let n = self.order();
        if map.len() != n || map.iter().any(|&v| v >= n) {
            return Err(Error::Quandle(format!("operator {name} is not a map on the group")));
        }
        for a in 0..n {
            for b in 0..n {
                if map[self.cayley[a][b]] != self.cayley[map[a]][map[b]] {
                    return Err(Error::Quandle(format!(
                        "operator {name} is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        self.operators.push((name.to_string(), map));
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn operator(&self, name: &str) -> Option<&[usize]> {
        self.operators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m.as_slice())
    }

    pub fn operators(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.operators.iter().map(|(n, m)| (n.as_str(), m.as_slice()))
    }
}

/// `coset_quandle`: Σ = {gσ̃} with (gσ̃)^(hσ̃) = kσ̃, k = O⁻¹(h⁻¹·g·O(h)),
/// where O is the named operator. Element `g` of Σ is labelled by `g`.
pub fn coset_quandle(group: &GroupWithOperators, operator: &str) -> Result<DiffStructure> {
    let op = group
        .operator(operator)
        .ok_or_else(|| Error::Quandle(format!("no operator named {operator}")))?;
    let n = group.order();
    let mut op_inv = vec![usize::MAX; n];
    for (g, &v) in op.iter().enumerate() {
        if op_inv[v] != usize::MAX {
            return Err(Error::Quandle(format!(
                "operator {operator} is not bijective: {} and {g} collide",
                op_inv[v]
            )));
        }
        op_inv[v] = g;
    }
    let conj = (0..n)
        .map(|g| {
            (0..n)
                .map(|h| op_inv[group.mul(group.mul(group.inv(h), g), op[h])])
                .collect()
        })
        .collect();
    build_structure(conj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::families::cyclic_group;

    #[test]
    fn abelian_identity_operator_is_trivial() {
        let z2 = cyclic_group(2).with_operator("id", vec![0, 1]).unwrap();
        assert_eq!(coset_quandle(&z2, "id").unwrap(), DiffStructure::trivial(2));
    }

    #[test]
    fn squaring_on_mu3_collapses_to_one_domain() {
        let mu3 = cyclic_group(3).with_operator("sq", vec![0, 2, 1]).unwrap();
        let s = coset_quandle(&mu3, "sq").unwrap();
        // additively g^h = 2g + 2h
        for g in 0..3 {
            for h in 0..3 {
                assert_eq!(s.conj(g, h), (2 * g + 2 * h) % 3);
            }
        }
        assert_eq!(s.conjugacy_domains().sizes(), vec![3]);
        assert!(s.is_full().unwrap().is_some());
    }

    #[test]
    fn collapsing_operator_rejected() {
        let z3 = cyclic_group(3).with_operator("zero", vec![0, 0, 0]).unwrap();
        assert!(coset_quandle(&z3, "zero").is_err());
    }
}
