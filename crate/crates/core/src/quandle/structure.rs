use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite difference structure: a set `0..n` with `conj[s][t] = s^t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStructure")]
pub struct DiffStructure {
    n: usize,
    conj: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawStructure {
    n: usize,
    conj: Vec<Vec<usize>>,
}

impl TryFrom<RawStructure> for DiffStructure {
    type Error = Error;

    fn try_from(raw: RawStructure) -> Result<Self> {
        if raw.conj.len() != raw.n {
            return Err(Error::Quandle(format!(
                "declared n = {} but table has {} rows",
                raw.n,
                raw.conj.len()
            )));
        }
        build_structure(raw.conj)
    }
}

/// `build_structure`: validate a conjugation table.
pub fn build_structure(conj: Vec<Vec<usize>>) -> Result<DiffStructure> {
    let n = conj.len();
    for (s, row) in conj.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Quandle(format!(
                "row {s} has length {} in a table of size {n}",
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= n) {
            return Err(Error::Quandle(format!("entry {bad} out of range in row {s}")));
        }
    }
    for s in 0..n {
        if conj[s][s] != s {
            return Err(Error::Axiom {
                axiom: "σ^σ=σ",
                at: vec![s],
            });
        }
    }
    for s in 0..n {
        for r in 0..n {
            for t in 0..n {
                if conj[conj[s][r]][t] != conj[conj[s][t]][conj[r][t]] {
                    return Err(Error::Axiom {
                        axiom: "(σ^ρ)^τ=(σ^τ)^(ρ^τ)",
                        at: vec![s, r, t],
                    });
                }
            }
        }
    }
    Ok(DiffStructure { n, conj })
}

/// Blocks of a set partition, ordered by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub domain_of: Vec<usize>,
    pub domains: Vec<Vec<usize>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.domains.iter().map(Vec::len).collect()
    }
}

impl DiffStructure {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// s^t
    pub fn conj(&self, s: usize, t: usize) -> usize {
        self.conj[s][t]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.conj
    }

    /// The right translation x ↦ x^t.
    pub fn translation(&self, t: usize) -> Vec<usize> {
        (0..self.n).map(|x| self.conj[x][t]).collect()
    }

    pub fn trivial(n: usize) -> Self {
        DiffStructure {
            n,
            conj: (0..n).map(|s| vec![s; n]).collect(),
        }
    }

    /// `is_regular`: every translation is a bijection.
    pub fn is_regular(&self) -> bool {
        (0..self.n).all(|t| {
            let mut seen = vec![false; self.n];
            (0..self.n).all(|x| !std::mem::replace(&mut seen[self.conj[x][t]], true))
        })
    }

    /// `is_full`: for every pair (τ, τ') a bijection σ ↦ ρ of Σ with
    /// ()^σ∘()^τ' = ()^τ∘()^ρ. Returns `witness[τ][τ'][σ] = ρ`, or `None`
    /// when some pair admits no such bijection.
    pub fn is_full(&self) -> Result<Option<Vec<Vec<Vec<usize>>>>> {
        if !self.is_regular() {
            return Err(Error::Quandle("fullness requires a regular structure".into()));
        }
        let r: Vec<Vec<usize>> = (0..self.n).map(|t| self.translation(t)).collect();
        // (f∘g)(x) = f(g(x))
        let compose = |f: &[usize], g: &[usize]| -> Vec<usize> { g.iter().map(|&x| f[x]).collect() };
        let mut witness = vec![vec![Vec::new(); self.n]; self.n];
        for tau in 0..self.n {
            for tau2 in 0..self.n {
                let mut left: Vec<(Vec<usize>, usize)> =
                    (0..self.n).map(|s| (compose(&r[s], &r[tau2]), s)).collect();
                let mut right: Vec<(Vec<usize>, usize)> =
                    (0..self.n).map(|p| (compose(&r[tau], &r[p]), p)).collect();
                left.sort();
                right.sort();
                if left.iter().zip(&right).any(|(a, b)| a.0 != b.0) {
                    return Ok(None);
                }
                let mut w = vec![0; self.n];
                for (a, b) in left.iter().zip(&right) {
                    w[a.1] = b.1;
                }
                witness[tau][tau2] = w;
            }
        }
        Ok(Some(witness))
    }

    /// `conjugacy_domains`: components of the relation σ ∼ σ^τ.
    pub fn conjugacy_domains(&self) -> Partition {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for s in 0..self.n {
            for t in 0..self.n {
                let a = find(&mut parent, s);
                let b = find(&mut parent, self.conj[s][t]);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        partition_from_roots((0..self.n).map(|x| find(&mut parent, x)).collect())
    }

    /// Whether `subset` is closed under conjugation by every element.
    pub fn is_closed(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &s in subset {
            member[s] = true;
        }
        subset
            .iter()
            .all(|&s| (0..self.n).all(|t| member[self.conj[s][t]]))
    }

    /// The substructure on `elements` (sorted, closed under internal conjugation).
    pub fn restrict(&self, elements: &[usize]) -> Result<DiffStructure> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &e) in elements.iter().enumerate() {
            index[e] = i;
        }
        let mut conj = Vec::with_capacity(elements.len());
        for &s in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &t in elements {
                let v = index[self.conj[s][t]];
                if v == usize::MAX {
                    return Err(Error::Quandle(
                        "subset is not closed under its own conjugation".into(),
                    ));
                }
                row.push(v);
            }
            conj.push(row);
        }
        Ok(DiffStructure {
            n: elements.len(),
            conj,
        })
    }

    /// Componentwise structure on Σ₁ × Σ₂, indexed `a * |Σ₂| + b`.
    pub fn product(&self, other: &DiffStructure) -> DiffStructure {
        let m = other.n;
        let n = self.n * m;
        let conj = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| self.conj[s / m][t / m] * m + other.conj[s % m][t % m])
                    .collect()
            })
            .collect();
        DiffStructure { n, conj }
    }
}

pub(crate) fn partition_from_roots(roots: Vec<usize>) -> Partition {
    let mut id_of_root = std::collections::HashMap::new();
    let mut domains: Vec<Vec<usize>> = Vec::new();
    let mut domain_of = Vec::with_capacity(roots.len());
    for (x, r) in roots.into_iter().enumerate() {
        let id = *id_of_root.entry(r).or_insert_with(|| {
            domains.push(Vec::new());
            domains.len() - 1
        });
        domains[id].push(x);
        domain_of.push(id);
    }
    Partition { domain_of, domains }
}
