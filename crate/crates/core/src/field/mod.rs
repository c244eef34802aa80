//! Exact arithmetic in F_{p^N} in a polynomial basis.
//!
//! Every field is presented as F_p[T]/(f) with f the smallest monic
//! irreducible of degree N (coefficient lists compared from the leading term
//! down), so `(p, N)` determines the field and its elements bit-for-bit.

mod prime;
pub mod poly;
mod twist;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use poly::Poly;
pub use twist::FrobeniusTwist;

/// Coefficient vector of a field element in the basis 1, T, ..., T^{N-1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElement(SmallVec<[u32; 8]>);

impl FqElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

pub struct FieldCtx {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
    /// frob[i] = (T^i)^p
    frob: Vec<FqElement>,
    lazy: bool,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree
    }
}

impl Eq for FieldCtx {}

/// `make_field`: the deterministic presentation of F_{p^N}.
pub fn make_field(p: u64, degree: usize) -> Result<FieldCtx> {
    FieldCtx::new(p, degree)
}

impl FieldCtx {
    pub fn new(p: u64, degree: usize) -> Result<Self> {
        if !prime::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(Error::invalid(
                "field_tower",
                format!("characteristic {p} exceeds 31 bits"),
            ));
        }
        if degree < 1 {
            return Err(Error::ZeroDegree);
        }
        let modulus = prime::smallest_irreducible(p, degree);
        let mut ctx = FieldCtx {
            p,
            degree,
            modulus,
            frob: Vec::new(),
            lazy: p < (1 << 16),
        };
        // (T^i)^p = (T^p)^i
        let tp = ctx.pow_u64(&ctx.generator(), p);
        let mut acc = ctx.one();
        let mut frob = Vec::with_capacity(degree);
        for _ in 0..degree {
            frob.push(acc.clone());
            acc = ctx.mul(&acc, &tp);
        }
        ctx.frob = frob;
        Ok(ctx)
    }

    /// Shared instance from a process-wide cache.
    pub fn cached(p: u64, degree: usize) -> Result<Arc<FieldCtx>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FieldCtx>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(ctx) = cache.lock().unwrap().get(&(p, degree)) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(FieldCtx::new(p, degree)?);
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry((p, degree)).or_insert(ctx).clone())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree as u32)
    }

    /// Field size as u64 when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for _ in 0..self.degree {
            acc = acc.checked_mul(self.p)?;
        }
        Some(acc)
    }

    pub fn zero(&self) -> FqElement {
        FqElement(SmallVec::from_elem(0, self.degree))
    }

    pub fn one(&self) -> FqElement {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> FqElement {
        let mut e = self.zero();
        e.0[0] = (v % self.p) as u32;
        e
    }

    pub fn from_i64(&self, v: i64) -> FqElement {
        let r = v.rem_euclid(self.p as i64) as u64;
        self.from_u64(r)
    }

    pub fn from_biguint(&self, v: &BigUint) -> FqElement {
        let r = v % BigUint::from(self.p);
        self.from_u64(r.try_into().unwrap_or(0))
    }

    /// Element with the given basis coefficients (reduced mod p, zero padded).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElement> {
        if coeffs.len() > self.degree {
            return Err(Error::FieldMismatch);
        }
        let mut e = self.zero();
        for (slot, &c) in e.0.iter_mut().zip(coeffs) {
            *slot = (c % self.p) as u32;
        }
        Ok(e)
    }

    /// The class of T, a root of the modulus.
    pub fn generator(&self) -> FqElement {
        if self.degree == 1 {
            // F_p = F_p[T]/(T - c); the class of T is c = -modulus[0]
            return self.from_u64((self.p - self.modulus[0]) % self.p);
        }
        let mut e = self.zero();
        e.0[1] = 1;
        e
    }

    pub fn belongs(&self, a: &FqElement) -> bool {
        a.0.len() == self.degree && a.0.iter().all(|&c| (c as u64) < self.p)
    }

    /// Base-p digits of `index`, constant coefficient least significant.
    pub fn element_from_index(&self, mut index: u64) -> FqElement {
        let mut e = self.zero();
        for slot in e.0.iter_mut() {
            *slot = (index % self.p) as u32;
            index /= self.p;
        }
        e
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElement {
        let mut e = self.zero();
        for slot in e.0.iter_mut() {
            *slot = rng.gen_range(0..self.p) as u32;
        }
        e
    }

    pub fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let p = self.p as u32;
        FqElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    pub fn sub(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let p = self.p as u32;
        FqElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
                .collect(),
        )
    }

    pub fn neg(&self, a: &FqElement) -> FqElement {
        let p = self.p as u32;
        FqElement(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }

    /// Multiply by an element of the prime field.
    pub fn scale(&self, a: &FqElement, c: u64) -> FqElement {
        let c = c % self.p;
        FqElement(
            a.0.iter()
                .map(|&x| ((x as u64 * c) % self.p) as u32)
                .collect(),
        )
    }

    pub fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let n = self.degree;
        let p = self.p;
        if n == 1 {
            return FqElement(SmallVec::from_elem(
                ((a.0[0] as u64 * b.0[0] as u64) % p) as u32,
                1,
            ));
        }
        let mut buf: SmallVec<[u64; 32]> = SmallVec::from_elem(0, 2 * n - 1);
        if self.lazy {
            for (i, &x) in a.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u64;
                for (j, &y) in b.0.iter().enumerate() {
                    buf[i + j] += x * y as u64;
                }
            }
            for v in buf.iter_mut() {
                *v %= p;
            }
        } else {
            for (i, &x) in a.0.iter().enumerate() {
                for (j, &y) in b.0.iter().enumerate() {
                    buf[i + j] = (buf[i + j] + x as u64 * y as u64) % p;
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = buf[k];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                let m = self.modulus[j];
                if m != 0 {
                    buf[k - n + j] = (buf[k - n + j] + c * (p - m)) % p;
                }
            }
        }
        FqElement(buf[..n].iter().map(|&v| v as u32).collect())
    }

    pub fn square(&self, a: &FqElement) -> FqElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &FqElement) -> Result<FqElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let coeffs: Vec<u64> = a.0.iter().map(|&c| c as u64).collect();
        if self.degree == 1 {
            return Ok(self.from_u64(prime::inv_scalar(coeffs[0], self.p)));
        }
        let inv = prime::inv_mod(&coeffs, &self.modulus, self.p).ok_or(Error::ZeroInverse)?;
        self.from_coeffs(&inv)
    }

    pub fn pow(&self, a: &FqElement, e: &BigUint) -> FqElement {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.square(&result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    pub fn pow_u64(&self, a: &FqElement, mut e: u64) -> FqElement {
        let mut base = a.clone();
        let mut result = self.one();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        result
    }

    fn frob_once(&self, a: &FqElement) -> FqElement {
        if self.degree == 1 {
            return a.clone();
        }
        let p = self.p;
        let mut acc: SmallVec<[u64; 16]> = SmallVec::from_elem(0, self.degree);
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &f) in acc.iter_mut().zip(&self.frob[i].0) {
                *slot = (*slot + c as u64 * f as u64) % p;
            }
        }
        FqElement(acc.iter().map(|&v| v as u32).collect())
    }

    /// `frobenius`: a^{p^e}.
    pub fn frobenius(&self, a: &FqElement, e: u64) -> FqElement {
        let steps = e % self.degree as u64;
        let mut x = a.clone();
        for _ in 0..steps {
            x = self.frob_once(&x);
        }
        x
    }

    /// Precomputed matrix of x -> x^{p^e}.
    pub fn frobenius_map(&self, e: u64) -> FrobeniusMap {
        let cols = (0..self.degree)
            .map(|i| {
                let mut t = self.zero();
                t.0[i] = 1;
                self.frobenius(&t, e)
            })
            .collect();
        FrobeniusMap {
            p: self.p,
            cols,
            identity: e % self.degree as u64 == 0,
        }
    }

    /// `subfield_degree`: the smallest d | N with a^{p^d} = a.
    pub fn subfield_degree(&self, a: &FqElement) -> usize {
        let n = self.degree;
        let mut x = a.clone();
        for d in 1..=n {
            x = self.frob_once(&x);
            if n % d == 0 && &x == a {
                return d;
            }
        }
        n
    }

    /// F_p-basis of the fixed field of x -> x^{p^e}, i.e. F_{p^gcd(e,N)}.
    pub fn subfield_basis(&self, e: u64) -> Vec<FqElement> {
        let n = self.degree;
        let map = self.frobenius_map(e);
        let p = self.p;
        // rows of (F - I)^T: solve sum_i c_i (col_i - e_i) = 0
        let mut m: Vec<Vec<u64>> = (0..n)
            .map(|row| {
                (0..n)
                    .map(|col| {
                        let v = map.cols[col].0[row] as u64;
                        if row == col {
                            (v + p - 1) % p
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let pivots = row_reduce(&mut m, p);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m[r][f]) % p;
                }
                self.from_coeffs(&v).expect("basis vector has length N")
            })
            .collect()
    }

    /// All elements of the subfield fixed by x -> x^{p^e}, in a fixed order.
    pub fn subfield_elements(&self, e: u64) -> SubfieldIter<'_> {
        let basis = if e % self.degree as u64 == 0 {
            (0..self.degree)
                .map(|i| {
                    let mut t = self.zero();
                    t.0[i] = 1;
                    t
                })
                .collect()
        } else {
            self.subfield_basis(e)
        };
        SubfieldIter {
            ctx: self,
            digits: vec![0; basis.len()],
            basis,
            done: false,
        }
    }

    /// Number of elements of the fixed field of x -> x^{p^e}, if it fits.
    pub fn subfield_size(&self, e: u64) -> Option<u64> {
        let d = num_integer::gcd(e.max(1), self.degree as u64);
        let d = if e % self.degree as u64 == 0 {
            self.degree as u64
        } else {
            d
        };
        self.p.checked_pow(d as u32)
    }
}

/// Gaussian elimination over F_p; returns pivot columns per row.
fn row_reduce(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = prime::inv_scalar(m[r][c], p);
        for v in m[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Precomputed F_p-linear map x -> x^{p^e}.
#[derive(Clone, Debug)]
pub struct FrobeniusMap {
    p: u64,
    cols: Vec<FqElement>,
    identity: bool,
}

impl FrobeniusMap {
    pub fn apply(&self, a: &FqElement) -> FqElement {
        if self.identity {
            return a.clone();
        }
        let mut acc: SmallVec<[u64; 16]> = SmallVec::from_elem(0, self.cols.len());
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &f) in acc.iter_mut().zip(&self.cols[i].0) {
                *slot = (*slot + c as u64 * f as u64) % self.p;
            }
        }
        FqElement(acc.iter().map(|&v| v as u32).collect())
    }
}

pub struct SubfieldIter<'a> {
    ctx: &'a FieldCtx,
    basis: Vec<FqElement>,
    digits: Vec<u64>,
    done: bool,
}

impl Iterator for SubfieldIter<'_> {
    type Item = FqElement;

    fn next(&mut self) -> Option<FqElement> {
        if self.done {
            return None;
        }
        let mut e = self.ctx.zero();
        for (b, &d) in self.basis.iter().zip(&self.digits) {
            if d != 0 {
                e = self.ctx.add(&e, &self.ctx.scale(b, d));
            }
        }
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.ctx.p {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(e)
    }
}

/// Operation selector for [`gf_arith`].
#[derive(Clone, Debug)]
pub enum ArithOp {
    Add(FqElement),
    Mul(FqElement),
    Inv,
    Pow(BigUint),
}

/// Checked arithmetic entry point: validates membership before operating.
pub fn gf_arith(ctx: &FieldCtx, a: &FqElement, op: ArithOp) -> Result<FqElement> {
    if !ctx.belongs(a) {
        return Err(Error::FieldMismatch);
    }
    match op {
        ArithOp::Add(b) => {
            if !ctx.belongs(&b) {
                return Err(Error::FieldMismatch);
            }
            Ok(ctx.add(a, &b))
        }
        ArithOp::Mul(b) => {
            if !ctx.belongs(&b) {
                return Err(Error::FieldMismatch);
            }
            Ok(ctx.mul(a, &b))
        }
        ArithOp::Inv => ctx.inv(a),
        ArithOp::Pow(e) => Ok(ctx.pow(a, &e)),
    }
}

/// Ring embedding of a smaller field into a larger one of the same
/// characteristic, sending the small field's generator to a fixed root of its
/// modulus (the first root in the large field's canonical order).
#[derive(Clone, Debug)]
pub struct Embedding {
    powers: Vec<FqElement>,
}

impl Embedding {
    pub fn new(small: &FieldCtx, large: &FieldCtx) -> Result<Self> {
        if small.p != large.p || large.degree % small.degree != 0 {
            return Err(Error::FieldMismatch);
        }
        let image = if small.degree == 1 {
            large.from_u64(small.generator().0[0] as u64)
        } else {
            let f = Poly::from_coeffs(
                small
                    .modulus
                    .iter()
                    .map(|&c| large.from_u64(c))
                    .collect(),
            );
            let roots = poly::roots_in_field(large, &f)?;
            roots.into_iter().next().ok_or(Error::FieldMismatch)?
        };
        let mut powers = Vec::with_capacity(small.degree);
        let mut acc = large.one();
        for _ in 0..small.degree {
            powers.push(acc.clone());
            acc = large.mul(&acc, &image);
        }
        Ok(Embedding { powers })
    }

    /// Shared instance from a process-wide cache; the choice of root is
    /// deterministic, so cached and fresh embeddings agree.
    pub fn cached(small: &FieldCtx, large: &FieldCtx) -> Result<Arc<Embedding>> {
        type Key = (u64, usize, usize);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Embedding>>>> = OnceLock::new();
        let key = (small.p, small.degree, large.degree);
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(e) = cache.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let emb = Arc::new(Embedding::new(small, large)?);
        Ok(cache.lock().unwrap().entry(key).or_insert(emb).clone())
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        let powers = (0..ctx.degree)
            .map(|i| {
                let mut t = ctx.zero();
                t.0[i] = 1;
                t
            })
            .collect();
        Embedding { powers }
    }

    /// The composite `next ∘ self`; `large` is the target of `next`.
    pub fn then(&self, next: &Embedding, large: &FieldCtx) -> Embedding {
        Embedding {
            powers: self.powers.iter().map(|b| next.apply(large, b)).collect(),
        }
    }

    pub fn apply(&self, large: &FieldCtx, a: &FqElement) -> FqElement {
        let mut out = large.zero();
        for (&c, b) in a.0.iter().zip(&self.powers) {
            if c != 0 {
                out = large.add(&out, &large.scale(b, c as u64));
            }
        }
        out
    }
}

pub(crate) fn biguint_pow(base: u64, e: u64) -> BigUint {
    let mut r = BigUint::one();
    let b = BigUint::from(base);
    for _ in 0..e {
        r *= &b;
    }
    r
}
