use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{groebner_membership, reduces_to_zero, shift_closure, GroebnerLimits, TruncatedIdeal};
use crate::diffpoly::{DifferencePolynomial, PolyRing, ShiftOperator};
use crate::diffvar::{satisfies, DiffSystem};
use crate::error::{Error, Result};
use crate::field::{Embedding, FieldCtx, FqElement};

/// Search bounds: truncation order k, support length L of ν and weight M = |ν|.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealBounds {
    pub k: u32,
    pub l: u32,
    pub m: u32,
    #[serde(skip, default)]
    pub limits: GroebnerLimits,
}

impl IdealBounds {
    pub fn new(k: u32, l: u32, m: u32) -> Self {
        IdealBounds {
            k,
            l,
            m,
            limits: GroebnerLimits::default(),
        }
    }

    /// Every bound raised by one.
    pub fn enlarged(&self) -> Self {
        IdealBounds {
            k: self.k + 1,
            l: self.l + 1,
            m: self.m + 1,
            limits: self.limits,
        }
    }
}

/// Outcome of a bounded perfect-closure search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes(ShiftOperator),
    NoWithinBounds,
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }

    pub fn witness(&self) -> Option<&ShiftOperator> {
        match self {
            Membership::Yes(nu) => Some(nu),
            Membership::NoWithinBounds => None,
        }
    }
}

/// Nonzero ν with at most `l` coefficients and weight at most `m`, by weight
/// ascending, then lexicographically descending (larger n_0 first).
fn operators(l: u32, m: u32) -> Vec<ShiftOperator> {
    fn compositions(w: u32, parts: u32, prefix: &mut Vec<u32>, out: &mut Vec<ShiftOperator>) {
        if parts == 1 {
            prefix.push(w);
            out.push(ShiftOperator::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=w).rev() {
            prefix.push(first);
            compositions(w - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if l == 0 {
        return out;
    }
    for w in 1..=m {
        compositions(w, l, &mut Vec::new(), &mut out);
    }
    out
}

/// Search for ν with f^ν in the shift closure of `gens` truncated at k.
pub fn perfect_membership_bounded(
    f: &DifferencePolynomial,
    gens: &[DifferencePolynomial],
    bounds: &IdealBounds,
    twist: u64,
) -> Result<Membership> {
    let ideal = shift_closure(f.ring(), gens, bounds.k, twist)?;
    for nu in operators(bounds.l, bounds.m) {
        if groebner_membership(&nu.apply(f, twist), &ideal, bounds.limits)? {
            return Ok(Membership::Yes(nu));
        }
    }
    Ok(Membership::NoWithinBounds)
}

/// Re-check a witness against a basis computed from scratch.
pub fn verify_witness(
    f: &DifferencePolynomial,
    gens: &[DifferencePolynomial],
    k: u32,
    nu: &ShiftOperator,
    twist: u64,
    limits: GroebnerLimits,
) -> Result<bool> {
    if nu.is_zero() {
        return Ok(false);
    }
    let ideal = shift_closure(f.ring(), gens, k, twist)?;
    let basis = ideal.fresh_basis(limits)?;
    reduces_to_zero(&nu.apply(f, twist), &ideal, &basis)
}

/// Levels and coordinate fields for the point cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheckOptions {
    /// Frobenius levels n
    pub ns: Vec<u64>,
    /// coordinates range over F_{p^lcm(a, ext)}
    pub exts: Vec<u64>,
    /// cap on enumerated tuples per (n, ext)
    pub budget: u64,
}

impl Default for PointCheckOptions {
    fn default() -> Self {
        PointCheckOptions {
            ns: vec![1, 2],
            exts: vec![1, 2, 3],
            budget: 1 << 16,
        }
    }
}

/// A point of the system where a claimed member does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub ext: u64,
    /// coordinates as coefficient vectors over F_p
    pub point: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCheck {
    pub membership: Membership,
    pub tuples: u64,
    pub solutions: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl PointCheck {
    pub fn consistent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Membership witnesses must make f vanish at every twisted point of the
/// system. Points are enumerated directly over small coordinate fields.
pub fn perfect_point_check(
    sys: &DiffSystem,
    f: &DifferencePolynomial,
    bounds: &IdealBounds,
    opts: &PointCheckOptions,
) -> Result<PointCheck> {
    let base = sys.base();
    let membership = perfect_membership_bounded(f, sys.equations(), bounds, base.b())?;
    let constants = base.field()?;
    let nv = sys.num_vars();
    let mut check = PointCheck {
        membership,
        tuples: 0,
        solutions: 0,
        counterexamples: Vec::new(),
    };
    for &ext in &opts.exts {
        if ext == 0 {
            return Err(Error::invalid("ideals", "coordinate extension must be at least 1"));
        }
        let field = FieldCtx::cached(base.p, base.a().lcm(&ext) as usize)?;
        let emb = Embedding::cached(&constants, &field)?;
        let size = field
            .order_u64()
            .and_then(|s| s.checked_pow(nv as u32))
            .filter(|&t| t <= opts.budget)
            .ok_or_else(|| {
                Error::budget(
                    "ideals",
                    format!("point check over F_{}^{} exceeds {} tuples", base.p, field.degree(), opts.budget),
                )
            })?;
        let q = field.order_u64().expect("checked above");
        for &n in &opts.ns {
            let e = base.a() * n + base.b();
            for idx in 0..size {
                let z = tuple(&field, idx, q, nv);
                check.tuples += 1;
                if sys.units().iter().any(|&u| z[u].is_zero()) || !satisfies(sys.equations(), &field, &emb, e, &z) {
                    continue;
                }
                check.solutions += 1;
                if check.membership.is_yes() && !satisfies(std::slice::from_ref(f), &field, &emb, e, &z) {
                    check.counterexamples.push(Counterexample {
                        n,
                        ext,
                        point: z.iter().map(|c| c.coeffs().to_vec()).collect(),
                    });
                }
            }
        }
    }
    Ok(check)
}

fn tuple(field: &FieldCtx, mut idx: u64, q: u64, nv: usize) -> Vec<FqElement> {
    (0..nv)
        .map(|_| {
            let c = field.element_from_index(idx % q);
            idx /= q;
            c
        })
        .collect()
}

/// Outcome for one candidate element of the intersection check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCandidate {
    pub f: DifferencePolynomial,
    pub in_s: Membership,
    pub in_t: Membership,
    /// one-step search in the closure of the products
    pub in_st: Membership,
    /// reached through the second perfection stage when the one-step search fails
    pub second_stage: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCheck {
    pub candidates: Vec<IntersectionCandidate>,
    /// descriptions of violated implications
    pub violations: Vec<String>,
}

impl IntersectionCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks {S} ∩ {T} = {ST} on candidates built from the generators.
///
/// Membership in both closures must give membership in the product closure
/// after one more perfection stage: every cross product σ^i s·σ^j t is shown
/// to lie in the first stage, and f^(ν₁+ν₂) must lie in the ideal they
/// generate. A product witness must also witness both factors.
pub fn perfect_intersection_check(
    ring: &PolyRing,
    s: &[DifferencePolynomial],
    t: &[DifferencePolynomial],
    bounds: &IdealBounds,
    twist: u64,
) -> Result<IntersectionCheck> {
    let st: Vec<DifferencePolynomial> = s.iter().flat_map(|a| t.iter().map(move |b| a.mul(b))).collect();
    let mut fs: Vec<DifferencePolynomial> = Vec::new();
    let mut push = |f: DifferencePolynomial| {
        if !f.is_zero() && !fs.contains(&f) {
            fs.push(f);
        }
    };
    for a in s.iter().chain(t) {
        push(a.clone());
    }
    for a in s {
        for b in t {
            push(a.mul(b));
            push(a.add(b));
        }
    }
    let mut out = IntersectionCheck {
        candidates: Vec::new(),
        violations: Vec::new(),
    };
    let mut cross: Option<TruncatedIdeal> = None;
    for f in fs {
        let in_s = perfect_membership_bounded(&f, s, bounds, twist)?;
        let in_t = perfect_membership_bounded(&f, t, bounds, twist)?;
        let in_st = perfect_membership_bounded(&f, &st, bounds, twist)?;
        let mut second_stage = false;
        if let (Membership::Yes(n1), Membership::Yes(n2)) = (&in_s, &in_t) {
            if !in_st.is_yes() {
                if cross.is_none() {
                    cross = Some(cross_products(ring, s, t, &st, bounds, twist, &mut out.violations)?);
                }
                let ideal = cross.as_ref().expect("built above");
                second_stage = groebner_membership(&n1.add(n2).apply(&f, twist), ideal, bounds.limits)?;
                if !second_stage {
                    out.violations.push(format!(
                        "{f} lies in both closures (ν = {n1}, {n2}) but not in the product closure"
                    ));
                }
            }
        }
        if let Membership::Yes(nu) = &in_st {
            for (name, gens) in [("S", s), ("T", t)] {
                if !verify_witness(&f, gens, bounds.k, nu, twist, bounds.limits)? {
                    out.violations.push(format!("product witness ν = {nu} for {f} does not witness {name}"));
                }
            }
        }
        out.candidates.push(IntersectionCandidate {
            f,
            in_s,
            in_t,
            in_st,
            second_stage,
        });
    }
    Ok(out)
}

/// Ideal of all σ^i s·σ^j t with shifts ≤ k. Each one is checked to lie in
/// the first perfection stage of {ST} via u^(1+σ^d) with d = |i − j|.
fn cross_products(
    ring: &PolyRing,
    s: &[DifferencePolynomial],
    t: &[DifferencePolynomial],
    st: &[DifferencePolynomial],
    bounds: &IdealBounds,
    twist: u64,
    violations: &mut Vec<String>,
) -> Result<TruncatedIdeal> {
    let shifts = |g: &DifferencePolynomial| 0..=bounds.k.saturating_sub(g.max_shift().unwrap_or(0));
    let mut products = Vec::new();
    for a in s {
        for b in t {
            for i in shifts(a) {
                for j in shifts(b) {
                    let d = i.abs_diff(j);
                    let u = a.shift_by(i, twist).mul(&b.shift_by(j, twist));
                    let mut nu = vec![0; d as usize + 1];
                    nu[0] += 1;
                    nu[d as usize] += 1;
                    let nu = ShiftOperator::new(nu);
                    let stage_one = shift_closure(ring, st, bounds.k + d, twist)?;
                    if !groebner_membership(&nu.apply(&u, twist), &stage_one, bounds.limits)? {
                        violations.push(format!("cross product {u} is not witnessed by ν = {nu}"));
                    }
                    products.push(u);
                }
            }
        }
    }
    shift_closure(ring, &products, bounds.k, twist)
}
