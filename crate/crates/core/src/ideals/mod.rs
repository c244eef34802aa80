//! Bounded-depth difference ideals: shift closures, Gröbner membership in
//! truncated rings and perfect-closure membership with witness search.

mod fuzz;
mod groebner;
mod perfect;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use smallvec::SmallVec;

use crate::diffpoly::{DifferencePolynomial, PolyRing};
use crate::error::{Error, Result};
use crate::field::FieldCtx;

pub use fuzz::{corpus, run_corpus, CaseResult, CorpusCase, CorpusReport};
pub use groebner::GroebnerLimits;
use groebner::{buchberger, reduce, MPoly, Mono};
pub use perfect::{
    perfect_intersection_check, perfect_membership_bounded, perfect_point_check, verify_witness,
    Counterexample, IdealBounds, IntersectionCandidate, IntersectionCheck, Membership, PointCheck, PointCheckOptions,
};

/// Ideal generated by shifted polynomials, living in the ring of x_j@i with i ≤ k.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    ring: PolyRing,
    gens: Vec<DifferencePolynomial>,
    k: u32,
}

impl TruncatedIdeal {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[DifferencePolynomial] {
        &self.gens
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn width(&self) -> usize {
        self.ring.vars.len() * (self.k as usize + 1)
    }

    /// Reduced grevlex basis, shared between callers with equal generators.
    fn basis(&self, limits: GroebnerLimits) -> Result<Arc<Vec<MPoly>>> {
        let key = CacheKey {
            p: self.ring.field.p(),
            degree: self.ring.field.degree(),
            nv: self.ring.vars.len(),
            k: self.k,
            gens: self.gens.iter().map(|g| g.to_string()).collect(),
        };
        let cache = BASIS_CACHE.get_or_init(Default::default);
        if let Some(b) = cache.read().expect("basis cache poisoned").get(&key) {
            return Ok(b.clone());
        }
        let b = Arc::new(self.fresh_basis(limits)?);
        cache
            .write()
            .expect("basis cache poisoned")
            .entry(key)
            .or_insert_with(|| b.clone());
        Ok(b)
    }

    fn fresh_basis(&self, limits: GroebnerLimits) -> Result<Vec<MPoly>> {
        let w = self.width();
        let gens = self.gens.iter().map(|g| to_mpoly(&self.ring.field, g, w)).collect::<Result<_>>()?;
        buchberger(&self.ring.field, gens, limits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct CacheKey {
    p: u64,
    degree: usize,
    nv: usize,
    k: u32,
    gens: Vec<String>,
}

static BASIS_CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<Vec<MPoly>>>>> = OnceLock::new();

/// Generators together with every shift σ^j g whose shifts stay ≤ k.
/// Coefficients are twisted by p^twist per shift.
pub fn shift_closure(
    ring: &PolyRing,
    gens: &[DifferencePolynomial],
    k: u32,
    twist: u64,
) -> Result<TruncatedIdeal> {
    let mut out = Vec::new();
    for g in gens {
        if g.ring() != ring {
            return Err(Error::invalid("ideals", "generator over a different ring"));
        }
        let s = g.max_shift().unwrap_or(0);
        if s > k {
            return Err(Error::invalid(
                "ideals",
                format!("truncation order k = {k} is below the generator shift {s}"),
            ));
        }
        for j in 0..=(k - s) {
            let h = g.shift_by(j, twist);
            if !h.is_zero() && !out.contains(&h) {
                out.push(h);
            }
        }
    }
    Ok(TruncatedIdeal {
        ring: ring.clone(),
        gens: out,
        k,
    })
}

/// Exact membership of f in the ideal generated by `ideal.gens()`. f may
/// involve shifts beyond k; the generators stay as they are.
pub fn groebner_membership(f: &DifferencePolynomial, ideal: &TruncatedIdeal, limits: GroebnerLimits) -> Result<bool> {
    let basis = ideal.basis(limits)?;
    reduces_to_zero(f, ideal, &basis)
}

fn reduces_to_zero(f: &DifferencePolynomial, ideal: &TruncatedIdeal, basis: &[MPoly]) -> Result<bool> {
    if f.ring() != &ideal.ring {
        return Err(Error::invalid("ideals", "polynomial over a different ring"));
    }
    let nv = ideal.ring.vars.len();
    let s = f.max_shift().unwrap_or(0).max(ideal.k);
    let w = nv * (s as usize + 1);
    let fm = to_mpoly(&ideal.ring.field, f, w)?;
    let r = if w == ideal.width() {
        reduce(&ideal.ring.field, &fm, basis)
    } else {
        let padded: Vec<MPoly> = basis.iter().map(|g| pad(g, w)).collect();
        reduce(&ideal.ring.field, &fm, &padded)
    };
    Ok(r.is_zero())
}

fn to_mpoly(field: &FieldCtx, f: &DifferencePolynomial, width: usize) -> Result<MPoly> {
    let nv = f.ring().vars.len();
    let terms = f
        .terms()
        .map(|(m, c)| {
            let mut e: SmallVec<[u32; 8]> = SmallVec::from_elem(0, width);
            for &(v, exp) in m.factors() {
                let i = v.shift as usize * nv + v.var;
                if i >= width {
                    return Err(Error::invalid("ideals", "shift beyond the truncation order"));
                }
                e[i] = u32::try_from(exp).map_err(|_| Error::invalid("ideals", "exponent too large"))?;
            }
            Ok((Mono(e), c.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MPoly::from_terms(field, terms))
}

fn pad(g: &MPoly, width: usize) -> MPoly {
    MPoly {
        terms: g
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(width, 0);
                (Mono(e), c.clone())
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests;
