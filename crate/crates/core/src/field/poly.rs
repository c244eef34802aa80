//! Dense univariate polynomials with coefficients in a [`FieldCtx`].

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FieldCtx, FqElement};
use crate::error::{Error, Result};

/// Coefficients from the constant term up; never carries trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<FqElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn from_coeffs(mut c: Vec<FqElement>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn constant(a: FqElement) -> Self {
        Self::from_coeffs(vec![a])
    }

    /// c * T^deg
    pub fn monomial(ctx: &FieldCtx, c: FqElement, deg: usize) -> Self {
        let mut v = vec![ctx.zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    pub fn x(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 1)
    }

    pub fn coeffs(&self) -> &[FqElement] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FqElement> {
        self.c.last()
    }

    pub fn coeff(&self, ctx: &FieldCtx, i: usize) -> FqElement {
        self.c.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let v = (0..n)
            .map(|i| match (self.c.get(i), other.c.get(i)) {
                (Some(a), Some(b)) => ctx.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(v)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        Poly {
            c: self.c.iter().map(|a| ctx.neg(a)).collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn scale(&self, ctx: &FieldCtx, s: &FqElement) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|a| ctx.mul(a, s)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ctx.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = ctx.add(&v[i + j], &ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn divrem(&self, ctx: &FieldCtx, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(ds) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if ds < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = ctx.inv(d.lead().unwrap())?;
        let mut r = self.c.clone();
        let mut q = vec![ctx.zero(); ds - dd + 1];
        for k in (dd..=ds).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = ctx.mul(&r[k], &lead_inv);
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k - dd + j] = ctx.sub(&r[k - dd + j], &ctx.mul(&c, dj));
                }
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, ctx: &FieldCtx, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(ctx, d)?.1)
    }

    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => {
                let inv = ctx.inv(l).expect("leading coefficient is nonzero");
                self.scale(ctx, &inv)
            }
        }
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(ctx: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = if a.c.len() >= b.c.len() {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        while !b.is_zero() {
            let r = a.rem(ctx, &b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| ctx.scale(a, i as u64))
                .collect(),
        )
    }

    /// For h with vanishing derivative, the g with g^p = h.
    pub fn pth_root(&self, ctx: &FieldCtx) -> Poly {
        let p = ctx.p() as usize;
        let back = ctx.degree() as u64 - 1;
        Poly::from_coeffs(
            self.c
                .iter()
                .step_by(p)
                .map(|a| ctx.frobenius(a, back))
                .collect(),
        )
    }

    pub fn eval(&self, ctx: &FieldCtx, x: &FqElement) -> FqElement {
        let mut acc = ctx.zero();
        for a in self.c.iter().rev() {
            acc = ctx.add(&ctx.mul(&acc, x), a);
        }
        acc
    }

    pub fn mulmod(&self, ctx: &FieldCtx, other: &Poly, m: &Poly) -> Poly {
        self.mul(ctx, other).rem(ctx, m).expect("modulus is nonzero")
    }

    /// Apply a field automorphism coefficientwise.
    pub fn map_coeffs(&self, f: impl Fn(&FqElement) -> FqElement) -> Poly {
        Poly::from_coeffs(self.c.iter().map(f).collect())
    }
}

/// `twisted_pow_mod`: T^Q mod h by square-and-multiply.
pub fn twisted_pow_mod(ctx: &FieldCtx, h: &Poly, q: &BigUint) -> Result<Poly> {
    let deg = h.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let t = Poly::x(ctx).rem(ctx, h)?;
    let mut result = Poly::constant(ctx.one()).rem(ctx, h)?;
    for i in (0..q.bits()).rev() {
        result = result.mulmod(ctx, &result, h);
        if q.bit(i) {
            result = result.mulmod(ctx, &t, h);
        }
    }
    Ok(result)
}

/// `distinct_root_count`: number of distinct roots of h in the algebraic
/// closure, i.e. the degree of its radical.
pub fn distinct_root_count(ctx: &FieldCtx, h: &Poly) -> Result<u64> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(radical_degree(ctx, &h.monic(ctx)))
}

fn radical_degree(ctx: &FieldCtx, h: &Poly) -> u64 {
    let deg = h.degree().unwrap_or(0);
    if deg == 0 {
        return 0;
    }
    let d = h.derivative(ctx);
    if d.is_zero() {
        return radical_degree(ctx, &h.pth_root(ctx));
    }
    let c = Poly::gcd(ctx, h, &d);
    // w carries each root whose multiplicity is prime to p exactly once
    let w = h.divrem(ctx, &c).expect("gcd is nonzero").0;
    let mut rest = c;
    loop {
        let y = Poly::gcd(ctx, &rest, &w);
        if y.degree().unwrap_or(0) == 0 {
            break;
        }
        rest = rest.divrem(ctx, &y).expect("gcd is nonzero").0;
    }
    // every remaining root has multiplicity divisible by p
    w.degree().unwrap_or(0) as u64 + radical_degree(ctx, &rest.monic(ctx))
}

/// Precomputation for raising polynomials to the p-th power modulo g.
struct FrobMod<'a> {
    ctx: &'a FieldCtx,
    g: &'a Poly,
    /// T^{ip} mod g
    powers: Vec<Poly>,
}

impl<'a> FrobMod<'a> {
    fn new(ctx: &'a FieldCtx, g: &'a Poly) -> Self {
        let deg = g.degree().unwrap();
        let tp = twisted_pow_mod(ctx, g, &BigUint::from(ctx.p())).expect("deg g >= 1");
        let mut powers = Vec::with_capacity(deg);
        let mut acc = Poly::constant(ctx.one());
        for _ in 0..deg {
            powers.push(acc.clone());
            acc = acc.mulmod(ctx, &tp, g);
        }
        FrobMod { ctx, g, powers }
    }

    fn apply(&self, a: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (c, pw) in a.c.iter().zip(&self.powers) {
            if c.is_zero() {
                continue;
            }
            let fc = self.ctx.frobenius(c, 1);
            acc = acc.add(self.ctx, &pw.scale(self.ctx, &fc));
        }
        acc.rem(self.ctx, self.g).expect("g nonzero")
    }
}

/// All roots of h lying in the field itself, sorted.
pub fn roots_in_field(ctx: &FieldCtx, h: &Poly) -> Result<Vec<FqElement>> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let h = h.monic(ctx);
    if h.degree() == Some(0) {
        return Ok(Vec::new());
    }
    if let Some(order) = ctx.order_u64().filter(|&o| o <= 256) {
        let mut roots: Vec<FqElement> = (0..order)
            .map(|i| ctx.element_from_index(i))
            .filter(|a| h.eval(ctx, a).is_zero())
            .collect();
        roots.sort();
        return Ok(roots);
    }
    // g = gcd(h, T^{p^N} - T): product of the distinct linear factors
    let frob = FrobMod::new(ctx, &h);
    let mut x = Poly::x(ctx).rem(ctx, &h)?;
    for _ in 0..ctx.degree() {
        x = frob.apply(&x);
    }
    let g = Poly::gcd(ctx, &h, &x.sub(ctx, &Poly::x(ctx)));
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1FF);
    let mut roots = Vec::new();
    split_linear(ctx, &g, &mut rng, &mut roots)?;
    roots.sort();
    Ok(roots)
}

fn split_linear(
    ctx: &FieldCtx,
    g: &Poly,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<FqElement>,
) -> Result<()> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let g = g.monic(ctx);
            out.push(ctx.neg(&g.coeffs()[0]));
            return Ok(());
        }
        _ => {}
    }
    let frob = FrobMod::new(ctx, g);
    let deg = g.degree().unwrap();
    for _ in 0..128 {
        let delta = ctx.random(rng);
        let w = if ctx.p() == 2 {
            // absolute trace of delta*T
            let mut acc = Poly::monomial(ctx, delta, 1).rem(ctx, g)?;
            let mut w = acc.clone();
            for _ in 1..ctx.degree() {
                acc = frob.apply(&acc);
                w = w.add(ctx, &acc);
            }
            w
        } else {
            // (T + delta)^{(p^N - 1)/2} = (prod_i (T+delta)^{p^i})^{(p-1)/2}
            let u = Poly::from_coeffs(vec![delta, ctx.one()]).rem(ctx, g)?;
            let mut acc = u.clone();
            let mut norm = u;
            for _ in 1..ctx.degree() {
                acc = frob.apply(&acc);
                norm = norm.mulmod(ctx, &acc, g);
            }
            let mut w = Poly::constant(ctx.one());
            let e = (ctx.p() - 1) / 2;
            for i in (0..64 - e.leading_zeros()).rev() {
                w = w.mulmod(ctx, &w, g);
                if (e >> i) & 1 == 1 {
                    w = w.mulmod(ctx, &norm, g);
                }
            }
            w.sub(ctx, &Poly::constant(ctx.one()))
        };
        let d = Poly::gcd(ctx, g, &w);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < deg {
            let other = g.divrem(ctx, &d)?.0;
            split_linear(ctx, &d, rng, out)?;
            split_linear(ctx, &other, rng, out)?;
            return Ok(());
        }
    }
    Err(Error::invalid(
        "field_tower",
        "equal-degree splitting did not separate the roots",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn poly(ctx: &FieldCtx, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    #[test]
    fn distinct_root_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(distinct_root_count(&f2, &poly(&f2, &[0, 1, 1])).unwrap(), 2);
        // T^4 + T^2 + 1 = (T^2+T+1)^2
        assert_eq!(
            distinct_root_count(&f2, &poly(&f2, &[1, 0, 1, 0, 1])).unwrap(),
            2
        );
        let f4 = make_field(2, 2).unwrap();
        // T^4 - T over F_4
        assert_eq!(
            distinct_root_count(&f4, &poly(&f4, &[0, -1, 0, 0, 1])).unwrap(),
            4
        );
        assert_eq!(
            distinct_root_count(&f2, &Poly::zero()).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn pow_mod_examples() {
        let f7 = make_field(7, 1).unwrap();
        let h = poly(&f7, &[1, 0, 1]);
        assert_eq!(
            twisted_pow_mod(&f7, &h, &BigUint::from(49u32)).unwrap(),
            Poly::x(&f7)
        );
        assert!(twisted_pow_mod(&f7, &Poly::x(&f7), &BigUint::from(13u32))
            .unwrap()
            .is_zero());
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(
            twisted_pow_mod(&f2, &poly(&f2, &[1, 1, 1]), &BigUint::from(4u32)).unwrap(),
            Poly::x(&f2)
        );
        assert_eq!(
            twisted_pow_mod(&f2, &poly(&f2, &[1]), &BigUint::from(4u32)).unwrap_err(),
            Error::ConstantPolynomial
        );
    }

    #[test]
    fn roots_of_cubes_in_f7_cubed() {
        let f = make_field(7, 3).unwrap();
        // y^3 - 2: 2 is a non-cube in F_7, so all three roots live in F_343
        let h = poly(&f, &[-2, 0, 0, 1]);
        let roots = roots_in_field(&f, &h).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(h.eval(&f, r).is_zero());
            assert_eq!(f.subfield_degree(r), 3);
        }
    }

    #[test]
    fn roots_in_characteristic_two() {
        let f = make_field(2, 10).unwrap();
        // T^4 + T, roots are F_4, which sits inside F_{2^10}
        let h = poly(&f, &[0, 1, 0, 0, 1]);
        let roots = roots_in_field(&f, &h).unwrap();
        assert_eq!(roots.len(), 4);
        // T^3 + T + 1 has its roots in F_8, not in F_{2^10}
        assert!(roots_in_field(&f, &poly(&f, &[1, 1, 0, 1])).unwrap().is_empty());
    }
}
