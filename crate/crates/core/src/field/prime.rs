//! Dense polynomials over the prime field, used to pick and validate moduli.

use num_bigint::BigUint;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn inv_scalar(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_scalar(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        if c != 0 {
            for j in 0..=dm {
                let idx = k - dm + j;
                r[idx] = (r[idx] + c * (p - m[j])) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let base = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        result = mulmod(&result, &result, m, p);
        if e.bit(i) {
            result = mulmod(&result, &base, m, p);
        }
    }
    result
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Irreducibility of a monic `f` of degree `n` over F_p: no factor of degree
/// k <= n/2 (gcd(T^{p^k} - T, f) = 1) and f divides T^{p^n} - T.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let t = vec![0u64, 1];
    let pb = BigUint::from(p);
    let mut x = t.clone();
    for k in 1..=n {
        x = powmod(&x, &pb, f, p);
        if k <= n / 2 {
            let g = gcd(f, &sub(&x, &t, p), p);
            if g.len() > 1 {
                return false;
            }
        }
    }
    sub(&x, &t, p).is_empty()
}

/// The smallest monic irreducible of degree `n`, ordering candidates by
/// their coefficient list read from the leading term down.
pub(crate) fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut digits = vec![0u64; n];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment the base-p counter, least significant digit = constant term
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < n, "an irreducible polynomial of every degree exists");
        }
    }
}

pub(crate) fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        r0 = r1;
        r1 = r;
        let qt = mul(&q, &t1, p);
        let nt = sub(&t0, &qt, p);
        t0 = t1;
        t1 = nt;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_scalar(r0[0], p);
    let mut out: Vec<u64> = t0.iter().map(|&x| x * c % p).collect();
    trim(&mut out);
    Some(rem(&out, m, p))
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    let lead_inv = inv_scalar(b[db], p);
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        q[k - db] = c;
        if c != 0 {
            for j in 0..=db {
                let idx = k - db + j;
                r[idx] = (r[idx] + c * (p - b[j])) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}
