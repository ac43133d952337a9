//! Exact real-root counting and isolation with Sturm sequences.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, serde_rat, Rational};
use crate::series::{poly_divmod, poly_gcd, poly_div_exact, ps_derivative, PowerSeries};

/// `p, p', -rem(p, p'), ...` down to the last nonzero remainder.
pub fn sturm_sequence(p: &PowerSeries) -> Result<Vec<PowerSeries>> {
    if !p.is_polynomial() {
        return Err(Error::DomainError("Sturm sequences need exact polynomials".into()));
    }
    if p.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let mut seq = vec![p.clone()];
    let mut next = ps_derivative(p);
    while !next.is_zero() {
        let (_, r) = poly_divmod(seq.last().unwrap(), &next)?;
        seq.push(next);
        next = -&r;
    }
    Ok(seq)
}

fn sign_changes(values: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in values.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn changes_at(seq: &[PowerSeries], x: &Rational) -> usize {
    sign_changes(seq.iter().map(|p| sign(&p.eval(x))))
}

fn changes_at_infinity(seq: &[PowerSeries], positive: bool) -> usize {
    sign_changes(seq.iter().map(|p| {
        let s = sign(p.leading_coeff());
        let odd = p.degree().unwrap_or(0) % 2 == 1;
        if !positive && odd {
            -s
        } else {
            s
        }
    }))
}

/// Distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_in(seq: &[PowerSeries], a: &Rational, b: &Rational) -> usize {
    changes_at(seq, a).saturating_sub(changes_at(seq, b))
}

/// Number of distinct real roots.
pub fn distinct_real_roots(p: &PowerSeries) -> Result<usize> {
    let seq = sturm_sequence(p)?;
    Ok(changes_at_infinity(&seq, false) - changes_at_infinity(&seq, true))
}

/// Every real root lies strictly inside `(-bound, bound)`.
pub fn root_bound(p: &PowerSeries) -> Rational {
    let lead = p.leading_coeff().abs();
    let n = p.degree().unwrap_or(0);
    let m = p.coeffs()[..n].iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Rational::zero);
    m + int(1)
}

/// `p / gcd(p, p')`, the product of the distinct irreducible factors.
pub fn squarefree_part(p: &PowerSeries) -> Result<PowerSeries> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(p.clone());
    }
    let g = poly_gcd(p, &ps_derivative(p))?;
    poly_div_exact(p, &g)
}

pub fn is_squarefree(p: &PowerSeries) -> Result<bool> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(true);
    }
    Ok(poly_gcd(p, &ps_derivative(p))?.degree() == Some(0))
}

/// All roots of `p` are real (multiplicities allowed).
pub fn is_real_rooted(p: &PowerSeries) -> Result<bool> {
    let d = squarefree_part(p)?.degree().unwrap_or(0);
    Ok(distinct_real_roots(p)? == d)
}

/// Half-open interval `(lo, hi]` holding exactly one distinct real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "serde_rat")]
    pub lo: Rational,
    #[serde(with = "serde_rat")]
    pub hi: Rational,
}

impl RootInterval {
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

/// Disjoint intervals isolating each distinct real root, in increasing order,
/// each no wider than `width`.
pub fn isolate_roots(p: &PowerSeries, width: &Rational) -> Result<Vec<RootInterval>> {
    let seq = sturm_sequence(p)?;
    let b = root_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match count_roots_in(&seq, &lo, &hi) {
            0 => {}
            1 if &hi - &lo <= *width => out.push(RootInterval { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / int(2);
                // right half first so the left half is processed next
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    Ok(out)
}

/// Distinct real roots as isolating intervals of width at most `1/2^20`.
pub fn real_roots(p: &PowerSeries) -> Result<Vec<RootInterval>> {
    isolate_roots(p, &Rational::new(One::one(), num_bigint::BigInt::from(1u64 << 20)))
}

/// Which polynomial owns each root of `p q` in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootOwner {
    P,
    Q,
}

/// Roots of a coprime pair, merged in increasing order.
pub fn merged_roots(p: &PowerSeries, q: &PowerSeries) -> Result<Vec<(RootOwner, RootInterval)>> {
    let pq = crate::series::ps_mul(p, q);
    let seq_p = sturm_sequence(p)?;
    let intervals = isolate_roots(&pq, &Rational::one())?;
    Ok(intervals
        .into_iter()
        .map(|iv| {
            let owner = if count_roots_in(&seq_p, &iv.lo, &iv.hi) == 1 { RootOwner::P } else { RootOwner::Q };
            (owner, iv)
        })
        .collect())
}
