use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldCtx, FqElement, Poly};

/// The variable `x_j@i`: variable index `j` shifted `i` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarShift {
    pub var: usize,
    pub shift: u32,
}

/// A power product of shifted variables, factors sorted by [`VarShift`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(VarShift, u64); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarShift) -> Self {
        Monomial(SmallVec::from_slice(&[(v, 1)]))
    }

    pub fn from_factors(mut f: Vec<(VarShift, u64)>) -> Self {
        f.retain(|&(_, e)| e > 0);
        f.sort_by_key(|&(v, _)| v);
        let mut out: SmallVec<[(VarShift, u64); 4]> = SmallVec::new();
        for (v, e) in f {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(VarShift, u64)] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: VarShift) -> u64 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut f: Vec<(VarShift, u64)> = self.0.to_vec();
        f.extend_from_slice(&other.0);
        Monomial::from_factors(f)
    }

    pub fn max_shift(&self) -> Option<u32> {
        self.0.iter().map(|(v, _)| v.shift).max()
    }
}

/// Graded lexicographic: total degree first, then the larger exponent at
/// the first differing variable in (index, shift) order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(&eb) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            ord => return ord,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ring of difference polynomials: coefficient field plus variable names.
#[derive(Clone, Debug)]
pub struct PolyRing {
    pub field: Arc<FieldCtx>,
    pub vars: Arc<Vec<String>>,
    /// identifier denoting the generator of the coefficient field
    pub generator: Option<String>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars
    }
}

impl PolyRing {
    pub fn new(field: Arc<FieldCtx>, vars: Vec<String>) -> Self {
        PolyRing {
            field,
            vars: Arc::new(vars),
            generator: None,
        }
    }

    pub fn with_generator(mut self, name: &str) -> Self {
        self.generator = Some(name.to_string());
        self
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> DifferencePolynomial {
        DifferencePolynomial {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: FqElement) -> DifferencePolynomial {
        let mut p = self.zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(&self) -> DifferencePolynomial {
        self.constant(self.field.one())
    }

    pub fn var(&self, var: usize, shift: u32) -> DifferencePolynomial {
        let mut p = self.zero();
        p.terms
            .insert(Monomial::var(VarShift { var, shift }), self.field.one());
        p
    }
}

/// Sparse polynomial in the shifted variables with coefficients in F_q.
#[derive(Clone, Debug)]
pub struct DifferencePolynomial {
    ring: PolyRing,
    terms: BTreeMap<Monomial, FqElement>,
}

impl PartialEq for DifferencePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for DifferencePolynomial {}

impl std::hash::Hash for DifferencePolynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl DifferencePolynomial {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &FieldCtx {
        &self.ring.field
    }

    /// Terms from the leading monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FqElement)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(ring: &PolyRing, terms: impl IntoIterator<Item = (Monomial, FqElement)>) -> Self {
        let mut p = ring.zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FqElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.ring.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = f.add(v, &c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = &self.ring.field;
        DifferencePolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FqElement) -> Self {
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), f.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), f.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Largest shift order appearing, `None` for constants.
    pub fn max_shift(&self) -> Option<u32> {
        self.terms.keys().filter_map(Monomial::max_shift).max()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Every shifted variable that occurs.
    pub fn support(&self) -> Vec<VarShift> {
        let mut s: Vec<VarShift> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn constant_term(&self) -> FqElement {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Apply u ↦ u^{p^e} to every coefficient.
    pub fn twist_coeffs(&self, e: u64) -> Self {
        if e % self.ring.field.degree() as u64 == 0 {
            return self.clone();
        }
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f.frobenius(c, e));
        }
        out
    }

    /// σ^k: raise every shift by `k`, twisting coefficients by p^{k·twist}.
    pub fn shift_by(&self, k: u32, twist: u64) -> Self {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let f = m
                .factors()
                .iter()
                .map(|&(v, e)| (VarShift { var: v.var, shift: v.shift + k }, e))
                .collect();
            out.add_term(Monomial::from_factors(f), c.clone());
        }
        out.twist_coeffs(twist * k as u64)
    }

    /// Replace every variable `x@i` by `image(x, i)`.
    pub fn substitute(
        &self,
        target_ring: &PolyRing,
        image: &dyn Fn(VarShift) -> DifferencePolynomial,
    ) -> Self {
        let mut out = target_ring.zero();
        for (m, c) in &self.terms {
            let mut t = target_ring.constant(c.clone());
            for &(v, e) in m.factors() {
                t = t.mul(&image(v).pow(e));
            }
            out = out.add(&t);
        }
        out
    }

    /// `twist_substitute`: x_j@i ↦ x_j^{Q^i} with Q = p^e, coefficients kept.
    pub fn twist_substitute(&self, e: u64) -> Result<Self> {
        let p = self.ring.field.p();
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let mut f = Vec::with_capacity(m.factors().len());
            for &(v, exp) in m.factors() {
                let q_pow = p
                    .checked_pow(
                        u32::try_from(e * v.shift as u64)
                            .map_err(|_| Error::Poly("exponent overflow".into()))?,
                    )
                    .and_then(|qi| qi.checked_mul(exp))
                    .ok_or_else(|| Error::Poly("exponent overflow in twisted substitution".into()))?;
                f.push((VarShift { var: v.var, shift: 0 }, q_pow));
            }
            out.add_term(Monomial::from_factors(f), c.clone());
        }
        Ok(out)
    }

    /// Dense univariate form when only `var@0` occurs; coefficients embedded
    /// into `target`.
    pub fn to_univariate(&self, var: usize, target: &FieldCtx, emb: &Embedding) -> Result<Poly> {
        let mut dense: BTreeMap<u64, FqElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = match m.factors() {
                [] => 0,
                [(v, e)] if v.var == var && v.shift == 0 => *e,
                _ => return Err(Error::Poly("polynomial is not univariate".into())),
            };
            dense.insert(e, emb.apply(target, c));
        }
        let deg = dense.keys().next_back().copied().unwrap_or(0);
        let deg = usize::try_from(deg).map_err(|_| Error::Poly("degree too large".into()))?;
        let mut coeffs = vec![target.zero(); deg + 1];
        for (e, c) in dense {
            coeffs[e as usize] = c;
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Evaluate in `target`, coefficients sent through `emb`.
    pub fn eval(
        &self,
        target: &FieldCtx,
        emb: &Embedding,
        value: &dyn Fn(VarShift) -> FqElement,
    ) -> FqElement {
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = emb.apply(target, c);
            for &(v, e) in m.factors() {
                t = target.mul(&t, &target.pow_u64(&value(v), e));
                if t.is_zero() {
                    break;
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Like `rebase`, but only the variables that actually occur need to
    /// exist in `ring`.
    pub fn rebase_partial(&self, ring: &PolyRing) -> Result<Self> {
        let mut out = ring.zero();
        for (m, c) in &self.terms {
            let f = m
                .factors()
                .iter()
                .map(|&(v, e)| {
                    let name = &self.ring.vars[v.var];
                    ring.var_index(name)
                        .map(|var| (VarShift { var, shift: v.shift }, e))
                        .ok_or_else(|| Error::UnknownVariable(name.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            out.add_term(Monomial::from_factors(f), c.clone());
        }
        Ok(out)
    }

    /// Same polynomial over a different variable list (names must map).
    pub fn rebase(&self, ring: &PolyRing) -> Result<Self> {
        let map: Vec<usize> = self
            .ring
            .vars
            .iter()
            .map(|n| ring.var_index(n).ok_or_else(|| Error::UnknownVariable(n.clone())))
            .collect::<Result<_>>()?;
        let mut out = ring.zero();
        for (m, c) in &self.terms {
            let f = m
                .factors()
                .iter()
                .map(|&(v, e)| (VarShift { var: map[v.var], shift: v.shift }, e))
                .collect();
            out.add_term(Monomial::from_factors(f), c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for DifferencePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = &self.ring.field;
        let gen = self.ring.generator.as_deref().unwrap_or("w");
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let coeff = format_coeff(c, gen);
            let is_one = *c == field.one();
            let mono: Vec<String> = m
                .factors()
                .iter()
                .map(|&(v, e)| {
                    let name = &self.ring.vars[v.var];
                    let base = if v.shift == 0 {
                        name.clone()
                    } else {
                        format!("{name}@{}", v.shift)
                    };
                    if e == 1 {
                        base
                    } else {
                        format!("{base}^{e}")
                    }
                })
                .collect();
            match (m.is_one(), is_one) {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{coeff}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

fn format_coeff(c: &FqElement, gen: &str) -> String {
    let parts: Vec<String> = c
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| match (i, v) {
            (0, v) => v.to_string(),
            (1, 1) => gen.to_string(),
            (1, v) => format!("{v}*{gen}"),
            (i, 1) => format!("{gen}^{i}"),
            (i, v) => format!("{v}*{gen}^{i}"),
        })
        .collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(" + "))
    }
}
