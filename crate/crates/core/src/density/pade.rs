use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::diffvar::CountSequence;
use crate::error::{Error, Result};

/// A rational function P/Q, Q(0) = 1, matching every available coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadeFit {
    pub num_degree: usize,
    pub den_degree: usize,
    pub numerator: Vec<BigRational>,
    pub denominator: Vec<BigRational>,
    /// (u, v) pairs whose systems were consistent but not uniquely solvable
    pub degenerate: Vec<(usize, usize)>,
}

enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

/// Exact Gaussian elimination on an overdetermined system A·x = b.
fn solve(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Solution {
    // each row holds the coefficients followed by the right-hand side
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(&pivot_row) {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return Solution::Inconsistent;
    }
    if pivots.len() < unknowns {
        return Solution::Underdetermined;
    }
    Solution::Unique((0..unknowns).map(|i| rows[i][unknowns].clone()).collect())
}

/// `near_rationality_probe`: the smallest (deg P, deg Q), ordered by total
/// degree then deg Q, with P/Q = ∑ a_n t^{n−1} on every known coefficient.
/// Fits leave at least two equations unused by the unknowns.
pub fn near_rationality_probe(cs: &CountSequence, max_deg: usize) -> Result<Option<PadeFit>> {
    let b: Vec<BigRational> = cs
        .counts
        .iter()
        .map(|&a| BigRational::from_integer(BigInt::from(a)))
        .collect();
    if b.len() < 2 * max_deg + 1 {
        return Err(Error::invalid(
            "density",
            format!("{} coefficients are too few for degree {max_deg}", b.len()),
        ));
    }
    let n = b.len();
    let mut degenerate = Vec::new();
    for total in 0..=2 * max_deg {
        for v in 0..=total.min(max_deg) {
            let u = total - v;
            if u > max_deg || u + 1 + v + 2 > n {
                continue;
            }
            // unknowns p_0..p_u, q_1..q_v; row k: ∑_{i≤v} q_i b_{k−i} − p_k = 0
            let unknowns = u + 1 + v;
            let rows: Vec<Vec<BigRational>> = (0..n)
                .map(|k| {
                    let mut row = vec![BigRational::zero(); unknowns + 1];
                    if k <= u {
                        row[k] = -BigRational::one();
                    }
                    for i in 1..=v.min(k) {
                        row[u + i] = b[k - i].clone();
                    }
                    row[unknowns] = -b[k].clone();
                    row
                })
                .collect();
            match solve(rows, unknowns) {
                Solution::Unique(x) => {
                    let mut den = vec![BigRational::one()];
                    den.extend_from_slice(&x[u + 1..]);
                    return Ok(Some(PadeFit {
                        num_degree: u,
                        den_degree: v,
                        numerator: x[..=u].to_vec(),
                        denominator: den,
                        degenerate,
                    }));
                }
                Solution::Underdetermined => degenerate.push((u, v)),
                Solution::Inconsistent => {}
            }
        }
    }
    Ok(None)
}
