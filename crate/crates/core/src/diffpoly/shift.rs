use std::fmt;

use super::DifferencePolynomial;

/// A difference operator ν = Σ nᵢ σ^i with natural coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftOperator(Vec<u32>);

impl ShiftOperator {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ShiftOperator(coeffs)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    /// |ν| = Σ nᵢ
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&n| n as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// One more than the highest power of σ with nonzero coefficient.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        ShiftOperator::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    /// Product in ℕ[σ] (strict σ, so the rig is commutative).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ShiftOperator(Vec::new());
        }
        let mut out = vec![0u32; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ShiftOperator::new(out)
    }

    /// f^ν = Π (σ^i f)^{nᵢ}, with coefficients twisted by p^{twist} per shift.
    pub fn apply(&self, f: &DifferencePolynomial, twist: u64) -> DifferencePolynomial {
        let mut acc = f.ring().one();
        for (i, &n) in self.0.iter().enumerate() {
            if n > 0 {
                acc = acc.mul(&f.shift_by(i as u32, twist).pow(n as u64));
            }
        }
        acc
    }
}

impl fmt::Display for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| match (i, n) {
                (0, n) => n.to_string(),
                (1, 1) => "σ".to_string(),
                (1, n) => format!("{n}σ"),
                (i, 1) => format!("σ^{i}"),
                (i, n) => format!("{n}σ^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}
