use std::collections::HashMap;

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DiffSystem;
use crate::diffpoly::{DifferencePolynomial, VarShift};
use crate::error::{Error, Result};
use crate::field::poly::{distinct_root_count, roots_in_field};
use crate::field::{Embedding, FieldCtx, FqElement, Poly};

/// Outcome of `limit_degree_estimate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitDegree {
    /// min over levels of d_k, or None when the last two levels disagree
    pub estimate: Option<u64>,
    /// d_1, d_2, ...
    pub per_level: Vec<u64>,
}

const ROOT_RETRIES: usize = 24;

/// `limit_degree_estimate`: generic number of solutions for the level-k
/// unknowns given random values for all lower levels.
pub fn limit_degree_estimate(
    sys: &DiffSystem,
    trials: usize,
    levels: u32,
    seed: u64,
) -> Result<LimitDegree> {
    if trials == 0 || levels == 0 {
        return Err(Error::invalid("diffvar", "trials and levels must be positive"));
    }
    let base = sys.ring().field.clone();
    let maxdeg = sys
        .equations()
        .iter()
        .map(|e| e.total_degree())
        .max()
        .unwrap_or(1)
        .clamp(1, 6);
    let mut m = base.degree() as u64 * (1..=maxdeg).fold(1u64, |a, k| a.lcm(&k));
    // large enough that random points avoid special fibres
    while (m as f64) * (base.p() as f64).log2() < 24.0 {
        m *= 2;
    }
    let field = FieldCtx::cached(base.p(), m as usize)?;
    let emb = Embedding::cached(&base, &field)?;

    let mut eqs: Vec<DifferencePolynomial> = sys.equations().to_vec();
    for (v, plain) in sys.plain_vars().into_iter().enumerate() {
        if plain {
            eqs.push(sys.ring().var(v, 1).sub(&sys.ring().var(v, 0)));
        }
    }
    let twist = sys.base().b();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = vec![0u64; levels as usize];
    for _ in 0..trials {
        let mut attempt = 0;
        loop {
            attempt += 1;
            match one_trial(sys, &eqs, &field, &emb, twist, levels, &mut rng)? {
                Some(d) => {
                    for (b, x) in best.iter_mut().zip(d) {
                        *b = (*b).max(x);
                    }
                    break;
                }
                None if attempt < ROOT_RETRIES => continue,
                None => {
                    return Err(Error::invalid(
                        "diffvar",
                        "could not find a generic point: level equations have no roots",
                    ))
                }
            }
        }
    }
    let stable = best.len() < 2 || best[best.len() - 1] == best[best.len() - 2];
    let estimate = if stable { best.iter().copied().min() } else { None };
    Ok(LimitDegree {
        estimate,
        per_level: best,
    })
}

/// Solve level by level; None when some chosen branch has no root.
fn one_trial(
    sys: &DiffSystem,
    eqs: &[DifferencePolynomial],
    field: &FieldCtx,
    emb: &Embedding,
    twist: u64,
    levels: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<u64>>> {
    let nv = sys.num_vars();
    let mut known: HashMap<VarShift, FqElement> = HashMap::new();
    let mut per_level = Vec::with_capacity(levels as usize);
    for k in 0..=levels {
        let level_eqs: Vec<DifferencePolynomial> = eqs
            .iter()
            .filter_map(|e| {
                let s = e.max_shift().unwrap_or(0);
                (s <= k).then(|| e.shift_by(k - s, twist))
            })
            .collect();
        let mut unassigned: Vec<usize> = (0..nv).collect();
        let mut degree = 1u64;
        while !unassigned.is_empty() {
            // equations whose only unknown at this level is a single variable
            let mut pick: Option<(usize, Poly)> = None;
            for &v in &unassigned {
                let mut h = Poly::zero();
                for e in &level_eqs {
                    let unknown: Vec<usize> = e
                        .support()
                        .into_iter()
                        .filter(|s| !known.contains_key(s))
                        .map(|s| s.var)
                        .collect();
                    if !unknown.is_empty() && unknown.iter().all(|&u| u == v) {
                        h = Poly::gcd(field, &h, &specialize(e, field, emb, &known, VarShift { var: v, shift: k }));
                    }
                }
                if !h.is_zero() {
                    pick = Some((v, h));
                    break;
                }
            }
            let v = match pick {
                Some((v, h)) => {
                    if h.degree() == Some(0) {
                        return Ok(None);
                    }
                    let mut roots = roots_in_field(field, &h)?;
                    let zero_root = h.coeffs()[0].is_zero();
                    let unit = sys.is_unit(v);
                    if unit {
                        roots.retain(|r| !r.is_zero());
                    }
                    if roots.is_empty() {
                        return Ok(None);
                    }
                    let n = distinct_root_count(field, &h)? - u64::from(unit && zero_root);
                    degree *= n;
                    let r = roots[rand::Rng::gen_range(rng, 0..roots.len())].clone();
                    known.insert(VarShift { var: v, shift: k }, r);
                    v
                }
                None => {
                    let v = unassigned[0];
                    let mut r = field.random(rng);
                    while sys.is_unit(v) && r.is_zero() {
                        r = field.random(rng);
                    }
                    known.insert(VarShift { var: v, shift: k }, r);
                    v
                }
            };
            unassigned.retain(|&u| u != v);
        }
        if k > 0 {
            per_level.push(degree);
        }
    }
    Ok(Some(per_level))
}

/// Univariate polynomial in `var` after plugging in every known value.
fn specialize(
    e: &DifferencePolynomial,
    field: &FieldCtx,
    emb: &Embedding,
    known: &HashMap<VarShift, FqElement>,
    var: VarShift,
) -> Poly {
    let mut dense: Vec<FqElement> = Vec::new();
    for (m, c) in e.terms() {
        let mut t = emb.apply(field, c);
        let mut deg = 0usize;
        for &(v, x) in m.factors() {
            if v == var {
                deg = x as usize;
            } else {
                t = field.mul(&t, &field.pow_u64(&known[&v], x));
            }
        }
        if dense.len() <= deg {
            dense.resize(deg + 1, field.zero());
        }
        dense[deg] = field.add(&dense[deg], &t);
    }
    Poly::from_coeffs(dense)
}
