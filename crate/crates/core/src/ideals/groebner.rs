use std::cmp::Ordering;
use std::collections::BTreeSet;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqElement};

/// Exponent vector over the truncated variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mono(pub SmallVec<[u32; 8]>);

impl Mono {
    fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn lcm(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Graded reverse lexicographic order.
fn grevlex(a: &Mono, b: &Mono) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.0.iter().zip(&b.0).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Sparse polynomial, terms sorted by decreasing grevlex, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MPoly {
    pub terms: Vec<(Mono, FqElement)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn from_terms(ctx: &FieldCtx, mut terms: Vec<(Mono, FqElement)>) -> Self {
        terms.sort_by(|a, b| grevlex(&b.0, &a.0));
        let mut out: Vec<(Mono, FqElement)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = ctx.add(lc, &c),
                _ => out.push((m, c)),
            }
            if out.last().is_some_and(|(_, c)| c.is_zero()) {
                out.pop();
            }
        }
        MPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &(Mono, FqElement) {
        &self.terms[0]
    }

    fn monic(&self, ctx: &FieldCtx) -> Result<Self> {
        let inv = ctx.inv(&self.lead().1)?;
        Ok(MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), ctx.mul(c, &inv))).collect(),
        })
    }

    /// self − c·x^m·g
    fn sub_scaled(&self, ctx: &FieldCtx, c: &FqElement, m: &Mono, g: &MPoly) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let shifted = g.terms.iter().map(|(gm, gc)| (gm.mul(m), ctx.neg(&ctx.mul(gc, c))));
        let mut j = shifted.peekable();
        while i < self.terms.len() || j.peek().is_some() {
            let ord = match (self.terms.get(i), j.peek()) {
                (Some(a), Some(b)) => grevlex(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => out.push(j.next().expect("peeked")),
                Ordering::Equal => {
                    let (m, b) = j.next().expect("peeked");
                    let s = ctx.add(&self.terms[i].1, &b);
                    if !s.is_zero() {
                        out.push((m, s));
                    }
                    i += 1;
                }
            }
        }
        MPoly { terms: out }
    }
}

/// Full remainder of p on division by a monic basis.
pub(crate) fn reduce(ctx: &FieldCtx, p: &MPoly, basis: &[MPoly]) -> MPoly {
    let mut p = p.clone();
    let mut rem = Vec::new();
    while !p.is_zero() {
        let (lm, lc) = p.lead().clone();
        match basis.iter().find(|g| g.lead().0.divides(&lm)) {
            Some(g) => p = p.sub_scaled(ctx, &lc, &lm.div(&g.lead().0), g),
            None => {
                rem.push((lm, lc));
                p.terms.remove(0);
            }
        }
    }
    MPoly { terms: rem }
}

/// Caps on the Buchberger run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerLimits {
    pub max_basis: usize,
    pub max_pairs: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_basis: 256,
            max_pairs: 50_000,
        }
    }
}

/// Reduced Gröbner basis. Pairs are taken by degree of their lcm, then by
/// index, so the run is deterministic.
pub(crate) fn buchberger(ctx: &FieldCtx, gens: Vec<MPoly>, limits: GroebnerLimits) -> Result<Vec<MPoly>> {
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        let r = reduce(ctx, &g, &basis);
        if !r.is_zero() {
            if basis.len() == limits.max_basis {
                return Err(basis_budget(limits));
            }
            basis.push(r.monic(ctx)?);
        }
    }
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((basis[i].lead().0.lcm(&basis[j].lead().0).degree(), i, j));
        }
    }
    let mut processed = 0;
    while let Some(pair) = pairs.pop_first() {
        let (_, i, j) = pair;
        processed += 1;
        if processed > limits.max_pairs {
            return Err(Error::budget("ideals", format!("Buchberger exceeded {} pairs", limits.max_pairs)));
        }
        let (mi, mj) = (&basis[i].lead().0, &basis[j].lead().0);
        if mi.coprime(mj) {
            continue;
        }
        let l = mi.lcm(mj);
        let one = ctx.one();
        let s = MPoly::zero()
            .sub_scaled(ctx, &ctx.neg(&one), &l.div(mi), &basis[i])
            .sub_scaled(ctx, &one, &l.div(mj), &basis[j]);
        let r = reduce(ctx, &s, &basis);
        if r.is_zero() {
            continue;
        }
        if basis.len() == limits.max_basis {
            return Err(basis_budget(limits));
        }
        let r = r.monic(ctx)?;
        let k = basis.len();
        for i in 0..k {
            pairs.insert((basis[i].lead().0.lcm(&r.lead().0).degree(), i, k));
        }
        basis.push(r);
    }
    Ok(interreduce(ctx, basis))
}

fn basis_budget(limits: GroebnerLimits) -> Error {
    Error::budget("ideals", format!("Gröbner basis exceeded {} elements", limits.max_basis))
}

fn interreduce(ctx: &FieldCtx, basis: Vec<MPoly>) -> Vec<MPoly> {
    // drop elements whose leading monomial is divisible by another's
    let mut min: Vec<MPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lead().0.divides(&g.lead().0) && (h.lead().0 != g.lead().0 || j < i)
        });
        if !redundant {
            min.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(min.len());
    for i in 0..min.len() {
        let others: Vec<MPoly> = min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let lead = MPoly { terms: vec![min[i].lead().clone()] };
        let tail = MPoly { terms: min[i].terms[1..].to_vec() };
        let mut terms = lead.terms;
        terms.extend(reduce(ctx, &tail, &others).terms);
        out.push(MPoly::from_terms(ctx, terms));
    }
    out.sort_by(|a, b| grevlex(&a.lead().0, &b.lead().0));
    out
}
