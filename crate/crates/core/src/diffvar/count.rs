use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;

use super::DiffSystem;
use crate::diffpoly::{DifferencePolynomial, VarShift};
use crate::error::{Error, Result};
use crate::field::poly::{distinct_root_count, roots_in_field, twisted_pow_mod};
use crate::field::{Embedding, FieldCtx, FqElement, FrobeniusTwist, Poly};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// maximum number of coordinate tuples to enumerate
    pub budget: u64,
    /// search bound B: multivariate enumeration happens in F_{p^M} with
    /// lcm(1..B) | M
    pub bound: u32,
    /// cap on the degree of a twist-substituted univariate polynomial
    pub max_dense_degree: u64,
    pub exec: Exec,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: 2_000_000,
            bound: 4,
            max_dense_degree: 1 << 22,
            exec: Exec::default(),
        }
    }
}

/// Points of a system at one Frobenius level.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub twist: FrobeniusTwist,
    /// field holding the coordinates
    pub field: Arc<FieldCtx>,
    /// embedding of the constants F_q into `field`
    pub embedding: Arc<Embedding>,
    /// coordinate tuples in enumeration order
    pub points: Vec<Vec<FqElement>>,
    /// number of points, exact or as enumerated
    pub count: u128,
    /// false when the count comes from a stabilized search
    pub exact: bool,
    /// whether `points` lists all `count` points
    pub materialized: bool,
}

/// a_n for a range of n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSequence {
    pub p: u64,
    pub q: u64,
    pub q0: u64,
    pub ns: Vec<u64>,
    pub big_q: Vec<BigUint>,
    pub counts: Vec<u128>,
    pub exact: Vec<bool>,
}

impl CountSequence {
    pub fn len(&self) -> usize {
        self.ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ns.is_empty()
    }

    /// CSV with columns n, Q, count, exact.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,Q,count,exact\n");
        for i in 0..self.ns.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.ns[i], self.big_q[i], self.counts[i], self.exact[i]
            ));
        }
        out
    }
}

/// `count_sequence`: a_n = |X(F̄, φ_n)| for each n.
pub fn count_sequence(sys: &DiffSystem, ns: &[u64], opts: &CountOptions) -> Result<CountSequence> {
    if ns.is_empty() {
        return Err(Error::invalid("diffvar", "empty n range"));
    }
    let results = opts.exec.map(ns, |&n| count_points(sys, n, opts));
    let mut counts = Vec::with_capacity(ns.len());
    let mut exact = Vec::with_capacity(ns.len());
    for r in results {
        let (c, e) = r?;
        counts.push(c);
        exact.push(e);
    }
    let base = sys.base();
    Ok(CountSequence {
        p: base.p,
        q: base.q,
        q0: base.q0,
        ns: ns.to_vec(),
        big_q: ns.iter().map(|&n| base.twist(n).big_q()).collect(),
        counts,
        exact,
    })
}

fn big_to_u128(v: &BigUint) -> Result<u128> {
    u128::try_from(v).map_err(|_| Error::budget("diffvar", "count exceeds 128 bits"))
}

/// Q or Q - 1 for every variable that occurs in no equation.
fn free_factor(sys: &DiffSystem, q: &BigUint) -> BigUint {
    let used = sys.constrained_vars();
    let mut f = BigUint::from(1u32);
    for v in 0..sys.num_vars() {
        if !used[v] {
            f *= if sys.is_unit(v) { q - 1u32 } else { q.clone() };
        }
    }
    f
}

/// Number of points at level n, with its exactness flag.
pub fn count_points(sys: &DiffSystem, n: u64, opts: &CountOptions) -> Result<(u128, bool)> {
    if n < 1 {
        return Err(Error::invalid("diffvar", "n must be at least 1"));
    }
    let twist = sys.base().twist(n);
    let q = twist.big_q();
    let free = free_factor(sys, &q);
    let used = sys.constrained_vars();
    let constrained: Vec<usize> = (0..sys.num_vars()).filter(|&v| used[v]).collect();
    let nonzero_eqs: Vec<&DifferencePolynomial> =
        sys.equations().iter().filter(|e| !e.is_zero()).collect();
    if nonzero_eqs.iter().any(|e| e.support().is_empty()) {
        // a nonzero constant equation has no solutions
        return Ok((0, true));
    }
    match constrained.as_slice() {
        [] => Ok((big_to_u128(&free)?, true)),
        [v] => {
            let c = univariate_count(sys, *v, &twist, opts)?;
            Ok((big_to_u128(&(free * BigUint::from(c)))?, true))
        }
        _ => {
            let sub = restrict_to(sys, &constrained)?;
            let (c, exact) = enumerate_count(&sub, &twist, opts)?;
            Ok((big_to_u128(&(free * BigUint::from(c)))?, exact))
        }
    }
}

/// Subsystem on the given variables only (equations must not mention others).
fn restrict_to(sys: &DiffSystem, vars: &[usize]) -> Result<DiffSystem> {
    let names: Vec<String> = vars.iter().map(|&v| sys.ring().vars[v].clone()).collect();
    let mut ring = crate::diffpoly::PolyRing::new(sys.ring().field.clone(), names);
    ring.generator = sys.ring().generator.clone();
    let eqs = sys
        .equations()
        .iter()
        .map(|e| e.rebase_partial(&ring))
        .collect::<Result<Vec<_>>>()?;
    let units = vars
        .iter()
        .enumerate()
        .filter(|(_, &v)| sys.is_unit(v))
        .map(|(i, _)| i)
        .collect();
    DiffSystem::new(sys.base(), ring, eqs, units)
}

fn univariate_count(
    sys: &DiffSystem,
    var: usize,
    twist: &FrobeniusTwist,
    opts: &CountOptions,
) -> Result<u64> {
    let field = sys.ring().field.clone();
    let id = Embedding::identity(&field);
    let plain = sys.plain_vars()[var];
    let mut h = Poly::zero();
    for eq in sys.equations() {
        let g = if plain {
            eq.to_univariate(var, &field, &id)?
        } else {
            let deg = twisted_degree(eq, twist.exponent(), field.p())?;
            if deg > opts.max_dense_degree {
                return Err(Error::budget(
                    "diffvar",
                    format!("twisted polynomial of degree {deg} exceeds the dense cap"),
                ));
            }
            eq.twist_substitute(twist.exponent())?
                .to_univariate(var, &field, &id)?
        };
        h = Poly::gcd(&field, &h, &g);
    }
    if h.is_zero() {
        if plain {
            let q = twist.big_q();
            let c = if sys.is_unit(var) { q - 1u32 } else { q };
            return u64::try_from(&c).map_err(|_| Error::budget("diffvar", "count exceeds 64 bits"));
        }
        return Err(Error::invalid(
            "diffvar",
            "equations vanish identically after twisting: apparent positive σ-dimension",
        ));
    }
    if h.degree() == Some(0) {
        return Ok(0);
    }
    let zero_is_root = h.coeffs()[0].is_zero();
    let count = if plain {
        let r = twisted_pow_mod(&field, &h, &twist.big_q())?;
        let g = Poly::gcd(&field, &h, &r.sub(&field, &Poly::x(&field)));
        g.degree().unwrap_or(0) as u64
    } else {
        distinct_root_count(&field, &h)?
    };
    Ok(count - u64::from(zero_is_root && sys.is_unit(var)))
}

/// Degree of the univariate twist substitution, computed without building it.
fn twisted_degree(eq: &DifferencePolynomial, e: u64, p: u64) -> Result<u64> {
    let mut best = 0u64;
    for (m, _) in eq.terms() {
        let mut d = 0u64;
        for &(v, exp) in m.factors() {
            let qi = u32::try_from(e * v.shift as u64)
                .ok()
                .and_then(|k| p.checked_pow(k))
                .and_then(|qi| qi.checked_mul(exp))
                .ok_or_else(|| Error::budget("diffvar", "twisted degree overflows"))?;
            d = d.saturating_add(qi);
        }
        best = best.max(d);
    }
    Ok(best)
}

/// Degree over F_p of the enumeration field at search bound `b`.
fn search_degree(sys: &DiffSystem, twist: &FrobeniusTwist, b: u32) -> u64 {
    let all_plain = sys.plain_vars().iter().all(|&p| p);
    let base = twist.point_field_degree();
    if all_plain {
        return base;
    }
    let l = (1..=b as u64).fold(1u64, |acc, k| acc.lcm(&k));
    base.lcm(&l)
}

/// Whether `z` satisfies every equation under x@i ↦ x^{Q^i}.
pub(crate) fn satisfies(
    eqs: &[DifferencePolynomial],
    field: &FieldCtx,
    emb: &Embedding,
    e: u64,
    z: &[FqElement],
) -> bool {
    let value = |v: VarShift| twisted_coordinate(field, z, v, e);
    eqs.iter().all(|eq| eq.eval(field, emb, &value).is_zero())
}

pub(crate) fn twisted_coordinate(field: &FieldCtx, z: &[FqElement], v: VarShift, e: u64) -> FqElement {
    if v.shift == 0 {
        z[v.var].clone()
    } else {
        field.frobenius(&z[v.var], e * v.shift as u64)
    }
}

/// Depth-first solver over a fixed enumeration field. A variable that is the
/// only unknown of some equation is solved for; otherwise it is scanned.
struct Search<'a> {
    sys: &'a DiffSystem,
    field: &'a FieldCtx,
    emb: &'a Embedding,
    e: u64,
    plain: Vec<bool>,
    /// variables occurring in each equation
    eq_vars: Vec<Vec<usize>>,
    budget: u64,
    max_dense_degree: u64,
    visited: &'a AtomicU64,
}

impl Search<'_> {
    fn admissible(&self, v: usize, a: &FqElement) -> bool {
        if self.sys.is_unit(v) && a.is_zero() {
            return false;
        }
        !self.plain[v] || self.field.frobenius(a, self.e) == *a
    }

    fn scan(&self, v: usize) -> Result<Vec<FqElement>> {
        let size = if self.plain[v] {
            self.field.subfield_size(self.e)
        } else {
            self.field.order_u64()
        };
        if size.is_none_or(|s| s > self.budget) {
            return Err(self.over_budget());
        }
        let deg = if self.plain[v] { self.e } else { self.field.degree() as u64 };
        Ok(self
            .field
            .subfield_elements(deg)
            .filter(|a| !(self.sys.is_unit(v) && a.is_zero()))
            .collect())
    }

    fn over_budget(&self) -> Error {
        Error::budget(
            "diffvar",
            format!(
                "enumerating {} variables over F_{}^{} exceeds the budget of {} points",
                self.sys.num_vars(),
                self.field.p(),
                self.field.degree(),
                self.budget
            ),
        )
    }

    /// Twisted univariate form of `eq` in `v` once all other variables are set.
    fn specialize(&self, eq: &DifferencePolynomial, v: usize, z: &[Option<FqElement>]) -> Option<Poly> {
        let p = self.field.p();
        let mut dense: std::collections::BTreeMap<u64, FqElement> = Default::default();
        for (m, c) in eq.terms() {
            let mut t = self.emb.apply(self.field, c);
            let mut deg = 0u64;
            for &(w, x) in m.factors() {
                if w.var == v {
                    let qi = u32::try_from(self.e * w.shift as u64).ok().and_then(|k| p.checked_pow(k))?;
                    deg = deg.checked_add(qi.checked_mul(x)?)?;
                } else {
                    let a = z[w.var].as_ref().expect("assigned");
                    let val = if w.shift == 0 {
                        a.clone()
                    } else {
                        self.field.frobenius(a, self.e * w.shift as u64)
                    };
                    t = self.field.mul(&t, &self.field.pow_u64(&val, x));
                }
            }
            if deg > self.max_dense_degree {
                return None;
            }
            let slot = dense.entry(deg).or_insert_with(|| self.field.zero());
            *slot = self.field.add(slot, &t);
        }
        let top = dense.keys().next_back().copied().unwrap_or(0) as usize;
        let mut coeffs = vec![self.field.zero(); top + 1];
        for (d, c) in dense {
            coeffs[d as usize] = c;
        }
        Some(Poly::from_coeffs(coeffs))
    }

    /// Next variable to assign and its candidate values.
    fn branch(&self, z: &[Option<FqElement>]) -> Result<Option<(usize, Vec<FqElement>)>> {
        let unassigned: Vec<usize> = (0..z.len()).filter(|&v| z[v].is_none()).collect();
        let Some(&first) = unassigned.first() else {
            return Ok(None);
        };
        for &v in &unassigned {
            let mut h = Poly::zero();
            for (eq, vars) in self.sys.equations().iter().zip(&self.eq_vars) {
                if vars.contains(&v) && vars.iter().all(|&w| w == v || z[w].is_some()) {
                    if let Some(g) = self.specialize(eq, v, z) {
                        h = Poly::gcd(self.field, &h, &g);
                    }
                }
            }
            if !h.is_zero() {
                let roots = if h.degree() == Some(0) {
                    Vec::new()
                } else {
                    roots_in_field(self.field, &h)?
                };
                let roots = roots.into_iter().filter(|a| self.admissible(v, a)).collect();
                return Ok(Some((v, roots)));
            }
        }
        Ok(Some((first, self.scan(first)?)))
    }

    fn run(&self, z: &mut Vec<Option<FqElement>>, keep: bool, out: &mut Vec<Vec<FqElement>>) -> Result<u64> {
        match self.branch(z)? {
            None => {
                if self.visited.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
                    return Err(self.over_budget());
                }
                let full: Vec<FqElement> = z.iter().map(|a| a.clone().expect("assigned")).collect();
                if satisfies(self.sys.equations(), self.field, self.emb, self.e, &full) {
                    if keep {
                        out.push(full);
                    }
                    return Ok(1);
                }
                Ok(0)
            }
            Some((v, cands)) => {
                let mut total = 0;
                for a in cands {
                    z[v] = Some(a);
                    total += self.run(z, keep, out)?;
                }
                z[v] = None;
                Ok(total)
            }
        }
    }
}

fn enumerate_at(
    sys: &DiffSystem,
    twist: &FrobeniusTwist,
    degree: u64,
    opts: &CountOptions,
    keep: bool,
) -> Result<(Arc<FieldCtx>, Arc<Embedding>, u64, Vec<Vec<FqElement>>)> {
    let base_field = sys.ring().field.clone();
    let field = FieldCtx::cached(base_field.p(), degree as usize)?;
    let emb = Embedding::cached(&base_field, &field)?;
    let visited = AtomicU64::new(0);
    let eq_vars = sys
        .equations()
        .iter()
        .map(|eq| {
            let mut vs: Vec<usize> = eq.support().into_iter().map(|v| v.var).collect();
            vs.dedup();
            vs
        })
        .collect();
    let search = Search {
        sys,
        field: &field,
        emb: &emb,
        e: twist.exponent(),
        plain: sys.plain_vars(),
        eq_vars,
        budget: opts.budget,
        max_dense_degree: opts.max_dense_degree,
        visited: &visited,
    };
    let mut z = vec![None; sys.num_vars()];
    let Some((v, cands)) = search.branch(&z)? else {
        return Ok((field.clone(), emb.clone(), 0, Vec::new()));
    };
    z[v] = None;
    let chunks = opts.exec.map(&cands, |a| {
        let mut z = z.clone();
        z[v] = Some(a.clone());
        let mut found = Vec::new();
        search.run(&mut z, keep, &mut found).map(|c| (c, found))
    });
    let mut total = 0;
    let mut pts = Vec::new();
    for chunk in chunks {
        let (c, f) = chunk?;
        total += c;
        pts.extend(f);
    }
    Ok((field.clone(), emb.clone(), total, pts))
}

fn enumerate_count(sys: &DiffSystem, twist: &FrobeniusTwist, opts: &CountOptions) -> Result<(u64, bool)> {
    if sys.plain_vars().iter().all(|&p| p) {
        let (_, _, c, _) = enumerate_at(sys, twist, twist.point_field_degree(), opts, false)?;
        return Ok((c, true));
    }
    let b = opts.bound.max(2);
    let (_, _, lo, _) = enumerate_at(sys, twist, search_degree(sys, twist, b - 1), opts, false)?;
    let (_, _, hi, _) = enumerate_at(sys, twist, search_degree(sys, twist, b), opts, false)?;
    if lo != hi {
        return Err(Error::invalid(
            "diffvar",
            format!(
                "counts did not stabilize ({lo} at bound {}, {hi} at bound {b}): apparent positive σ-dimension or solutions outside the search field",
                b - 1
            ),
        ));
    }
    Ok((hi, false))
}

/// `points`: the solutions of the twist-substituted system at level n.
pub fn points(sys: &DiffSystem, n: u64, opts: &CountOptions) -> Result<PointSet> {
    if n < 1 {
        return Err(Error::invalid("diffvar", "n must be at least 1"));
    }
    let twist = sys.base().twist(n);
    let plain = sys.plain_vars();
    let used = sys.constrained_vars();
    let constrained: Vec<usize> = (0..sys.num_vars()).filter(|&v| used[v]).collect();
    if let [v] = constrained.as_slice() {
        if !plain[*v] && sys.num_vars() == 1 {
            return univariate_points(sys, &twist, opts);
        }
    }
    if plain.iter().all(|&p| p) {
        let (field, emb, count, pts) =
            enumerate_at(sys, &twist, twist.point_field_degree(), opts, true)?;
        return Ok(PointSet {
            twist,
            field,
            embedding: emb,
            points: pts,
            count: count as u128,
            exact: true,
            materialized: true,
        });
    }
    let (exact_count, _) = count_points(sys, n, opts)?;
    let (field, emb, count, pts) =
        enumerate_at(sys, &twist, search_degree(sys, &twist, opts.bound.max(2)), opts, true)?;
    Ok(PointSet {
        twist,
        field,
        embedding: emb,
        points: pts,
        count: count as u128,
        exact: count as u128 == exact_count,
        materialized: true,
    })
}

fn univariate_points(sys: &DiffSystem, twist: &FrobeniusTwist, opts: &CountOptions) -> Result<PointSet> {
    let (count, _) = count_points(sys, twist.n, opts)?;
    let base_field = sys.ring().field.clone();
    let field = FieldCtx::cached(base_field.p(), search_degree(sys, twist, opts.bound.max(2)) as usize)?;
    let emb = Embedding::cached(&base_field, &field)?;
    let mut h = Poly::zero();
    for eq in sys.equations() {
        let g = eq.twist_substitute(twist.exponent())?.to_univariate(0, &field, &emb)?;
        h = Poly::gcd(&field, &h, &g);
    }
    let mut roots = roots_in_field(&field, &h)?;
    if sys.is_unit(0) {
        roots.retain(|r| !r.is_zero());
    }
    let points: Vec<Vec<FqElement>> = roots.into_iter().map(|r| vec![r]).collect();
    let materialized = points.len() as u128 == count;
    Ok(PointSet {
        twist: twist.clone(),
        field,
        embedding: emb,
        points,
        count,
        exact: true,
        materialized,
    })
}
