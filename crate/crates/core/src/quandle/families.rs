//! Standard families of difference structures and random generators used by
//! the law suites.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{coset_quandle, CentralFunction, DiffMorphism, DiffStructure, GroupWithOperators};
use crate::gauss::Gauss;
use num_complex::Complex;
use num_rational::BigRational;

/// Closure of a set of permutations under composition; `g·h` applies `g`
/// first. Elements are sorted, so the identity is element 0.
pub fn permutation_group(gens: &[Vec<usize>]) -> GroupWithOperators {
    let degree = gens.first().map_or(0, Vec::len);
    let id: Vec<usize> = (0..degree).collect();
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let prod: Vec<usize> = (0..degree).map(|x| g[elems[i][x]]).collect();
            if !elems.contains(&prod) {
                elems.push(prod);
            }
        }
        i += 1;
    }
    elems.sort();
    let index = |p: &Vec<usize>| elems.binary_search(p).expect("group is closed");
    let cayley = elems
        .iter()
        .map(|g| {
            elems
                .iter()
                .map(|h| index(&(0..degree).map(|x| h[g[x]]).collect()))
                .collect()
        })
        .collect();
    GroupWithOperators::new(cayley).expect("permutations form a group")
}

pub fn cyclic_group(m: usize) -> GroupWithOperators {
    let cayley = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
    GroupWithOperators::new(cayley).expect("cyclic group table")
}

pub fn symmetric_group(k: usize) -> GroupWithOperators {
    let mut gens = Vec::new();
    if k >= 2 {
        let mut swap: Vec<usize> = (0..k).collect();
        swap.swap(0, 1);
        gens.push(swap);
        gens.push((0..k).map(|x| (x + 1) % k).collect());
    } else {
        gens.push((0..k).collect());
    }
    permutation_group(&gens)
}

/// The dihedral group of order 2m acting on an m-gon.
pub fn dihedral_group(m: usize) -> GroupWithOperators {
    permutation_group(&[
        (0..m).map(|x| (x + 1) % m).collect(),
        (0..m).map(|x| (m - x) % m).collect(),
    ])
}

/// The quaternion group as permutations of its regular representation.
pub fn quaternion_group() -> GroupWithOperators {
    // elements ±1, ±i, ±j, ±k encoded as 0..8: (sign, unit) -> 2*unit + sign
    let mul_unit = |a: usize, b: usize| -> (usize, usize) {
        // unit indices 0=1, 1=i, 2=j, 3=k; returns (sign, unit)
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        T[a][b]
    };
    let cayley = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (s, u) = mul_unit(x / 2, y / 2);
                    2 * u + (s + x % 2 + y % 2) % 2
                })
                .collect()
        })
        .collect();
    GroupWithOperators::new(cayley).expect("quaternion table")
}

/// The conjugation quandle s^t = t⁻¹ s t on the whole group.
pub fn group_conjugation(g: &GroupWithOperators) -> DiffStructure {
    let n = g.order();
    let conj = (0..n)
        .map(|s| (0..n).map(|t| g.mul(g.mul(g.inv(t), s), t)).collect())
        .collect();
    super::build_structure(conj).expect("conjugation satisfies the axioms")
}

/// Takasaki quandle on ℤ/m: i^j = 2j - i.
pub fn dihedral(m: usize) -> DiffStructure {
    let conj = (0..m)
        .map(|i| (0..m).map(|j| (2 * j + m - i) % m).collect())
        .collect();
    super::build_structure(conj).expect("Takasaki quandle")
}

/// Alexander quandle on ℤ/m: x^y = t x + (1 - t) y with t a unit.
pub fn alexander(m: usize, t: usize) -> DiffStructure {
    let conj = (0..m)
        .map(|x| (0..m).map(|y| (t * x + (m + 1 - t % m) * y) % m).collect())
        .collect();
    super::build_structure(conj).expect("Alexander quandle")
}

/// A catalogue of valid structures of size at most 8.
pub fn catalogue() -> Vec<DiffStructure> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(DiffStructure::trivial(n));
    }
    for m in 3..=8 {
        out.push(dihedral(m));
    }
    for (m, t) in [(5, 2), (5, 3), (7, 2), (7, 3), (8, 3), (8, 5), (4, 3)] {
        out.push(alexander(m, t));
    }
    out.push(group_conjugation(&symmetric_group(3)));
    out.push(group_conjugation(&dihedral_group(4)));
    out.push(group_conjugation(&quaternion_group()));
    out.push(group_conjugation(&cyclic_group(4)));
    for (m, u) in [(3usize, 2usize), (4, 3), (5, 2), (7, 3)] {
        let g = cyclic_group(m)
            .with_operator("mul", (0..m).map(|x| x * u % m).collect())
            .expect("multiplication by a unit");
        out.push(coset_quandle(&g, "mul").expect("bijective operator"));
    }
    // S3 with conjugation by a transposition as operator
    let s3 = symmetric_group(3);
    let t = 1;
    let op = (0..6).map(|g| s3.mul(s3.mul(s3.inv(t), g), t)).collect();
    out.push(coset_quandle(&s3.with_operator("inner", op).unwrap(), "inner").unwrap());
    out.push(DiffStructure::trivial(2).product(&dihedral(3)));
    out.push(dihedral(3).product(&DiffStructure::trivial(2)));
    out.push(DiffStructure::trivial(2).product(&dihedral(4)));
    out.push(
        super::build_structure(vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).unwrap(),
    );
    out.push(
        super::build_structure(vec![
            vec![0, 0, 0, 0],
            vec![1, 1, 1, 2],
            vec![2, 2, 2, 1],
            vec![3, 3, 3, 3],
        ])
        .unwrap(),
    );
    out
}

pub fn random_structure<R: Rng + ?Sized>(rng: &mut R) -> DiffStructure {
    let cat = catalogue();
    cat.choose(rng).expect("catalogue is nonempty").clone()
}

/// Search for a morphism by randomized backtracking, forcing values through
/// f(s^t) = f(s)^f(t). Gives up after `budget` assignments.
pub fn random_morphism<R: Rng + ?Sized>(
    rng: &mut R,
    source: &DiffStructure,
    target: &DiffStructure,
    budget: usize,
) -> Option<DiffMorphism> {
    if target.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..source.len()).collect();
    order.shuffle(rng);
    let mut assignment = vec![None; source.len()];
    let mut steps = 0;
    if search(rng, source, target, &order, 0, &mut assignment, &mut steps, budget) {
        let map = assignment.into_iter().map(|v| v.expect("complete")).collect();
        DiffMorphism::new(source.clone(), target.clone(), map).ok()
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search<R: Rng + ?Sized>(
    rng: &mut R,
    source: &DiffStructure,
    target: &DiffStructure,
    order: &[usize],
    pos: usize,
    assignment: &mut Vec<Option<usize>>,
    steps: &mut usize,
    budget: usize,
) -> bool {
    let Some(&s) = order[pos..].iter().find(|&&s| assignment[s].is_none()) else {
        return true;
    };
    let mut candidates: Vec<usize> = (0..target.len()).collect();
    candidates.shuffle(rng);
    for c in candidates {
        *steps += 1;
        if *steps > budget {
            return false;
        }
        let saved = assignment.clone();
        assignment[s] = Some(c);
        if propagate(source, target, assignment)
            && search(rng, source, target, order, pos, assignment, steps, budget)
        {
            return true;
        }
        *assignment = saved;
    }
    false
}

fn propagate(source: &DiffStructure, target: &DiffStructure, a: &mut [Option<usize>]) -> bool {
    loop {
        let mut changed = false;
        for s in 0..source.len() {
            let Some(fs) = a[s] else { continue };
            for t in 0..source.len() {
                let Some(ft) = a[t] else { continue };
                let want = target.conj(fs, ft);
                let st = source.conj(s, t);
                match a[st] {
                    Some(v) if v != want => return false,
                    Some(_) => {}
                    None => {
                        a[st] = Some(want);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

/// A small random Gaussian rational.
pub fn random_gauss<R: Rng + ?Sized>(rng: &mut R) -> Gauss {
    let part = |rng: &mut R| {
        BigRational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=5).into())
    };
    Complex::new(part(rng), part(rng))
}

/// A random central function: one random value per conjugacy domain.
pub fn random_central<R: Rng + ?Sized>(rng: &mut R, s: &DiffStructure) -> CentralFunction {
    let part = s.conjugacy_domains();
    let per_domain: Vec<Gauss> = (0..part.len()).map(|_| random_gauss(rng)).collect();
    let values = part.domain_of.iter().map(|&d| per_domain[d].clone()).collect();
    CentralFunction::new(s.clone(), values).expect("constant on domains")
}

/// Projection Σ × T → T with Σ regular, which has all fibers of size |Σ|
/// and keeps averages over fibers central.
pub fn random_constant_fiber_surjection<R: Rng + ?Sized>(
    rng: &mut R,
    target: &DiffStructure,
) -> DiffMorphism {
    let small: Vec<DiffStructure> = catalogue()
        .into_iter()
        .filter(|s| s.is_regular() && s.len() * target.len() <= 16)
        .collect();
    let other = small
        .choose(rng)
        .cloned()
        .unwrap_or_else(|| DiffStructure::trivial(1));
    let m = target.len();
    let prod = other.product(target);
    let map = (0..prod.len()).map(|i| i % m).collect();
    DiffMorphism::new(prod, target.clone(), map).expect("projection is a morphism")
}

/// Inclusion of a random nonempty union of conjugacy domains.
pub fn random_closed_inclusion<R: Rng + ?Sized>(rng: &mut R, target: &DiffStructure) -> DiffMorphism {
    let part = target.conjugacy_domains();
    let mut chosen: Vec<usize> = Vec::new();
    for d in &part.domains {
        if rng.gen_bool(0.5) {
            chosen.extend(d);
        }
    }
    if chosen.is_empty() {
        chosen.extend(&part.domains[rng.gen_range(0..part.len())]);
    }
    chosen.sort_unstable();
    let sub = target.restrict(&chosen).expect("domains are closed");
    DiffMorphism::new(sub, target.clone(), chosen).expect("inclusion is a morphism")
}
