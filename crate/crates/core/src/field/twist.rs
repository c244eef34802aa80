use num_bigint::BigUint;

use crate::error::{Error, Result};

/// The Frobenius phi_n = phi_k^n phi_0 acting as x -> x^Q with Q = q^n * q0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusTwist {
    pub p: u64,
    /// q = p^a
    pub a: u64,
    /// q0 = p^b
    pub b: u64,
    pub n: u64,
}

impl FrobeniusTwist {
    /// Build from field sizes, checking q = p^a and q0 | q.
    pub fn from_sizes(p: u64, q: u64, q0: u64, n: u64) -> Result<Self> {
        let a = log_p(p, q).ok_or_else(|| Error::invalid("field_tower", format!("q = {q} is not a power of p = {p}")))?;
        if a == 0 {
            return Err(Error::invalid("field_tower", "q must be at least p"));
        }
        let b = log_p(p, q0).ok_or_else(|| Error::invalid("field_tower", "q0 must divide q"))?;
        if b > a {
            return Err(Error::invalid("field_tower", "q0 must divide q"));
        }
        Ok(FrobeniusTwist { p, a, b, n })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.a as u32)
    }

    pub fn q0(&self) -> u64 {
        self.p.pow(self.b as u32)
    }

    /// log_p Q = a*n + b.
    pub fn exponent(&self) -> u64 {
        self.a * self.n + self.b
    }

    /// Q = q^n * q0.
    pub fn big_q(&self) -> BigUint {
        super::biguint_pow(self.p, self.exponent())
    }

    /// Degree over F_p of the smallest field holding F_q and Fix(phi_n).
    pub fn point_field_degree(&self) -> u64 {
        num_integer::lcm(self.a, self.exponent().max(1))
    }

    pub fn with_n(&self, n: u64) -> Self {
        FrobeniusTwist { n, ..self.clone() }
    }
}

pub(crate) fn log_p(p: u64, mut v: u64) -> Option<u64> {
    if v == 0 {
        return None;
    }
    let mut k = 0;
    while v % p == 0 {
        v /= p;
        k += 1;
    }
    (v == 1).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_exponent() {
        let t = FrobeniusTwist::from_sizes(2, 4, 2, 3).unwrap();
        assert_eq!(t.exponent(), 7);
        assert_eq!(t.big_q(), BigUint::from(128u32));
        assert_eq!(t.point_field_degree(), 14);
    }

    #[test]
    fn rejects_non_divisor_twist() {
        assert!(FrobeniusTwist::from_sizes(7, 7, 3, 1).is_err());
        assert!(FrobeniusTwist::from_sizes(2, 4, 8, 1).is_err());
        assert!(FrobeniusTwist::from_sizes(2, 6, 1, 1).is_err());
    }
}
