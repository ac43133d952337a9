//! The Routh/Stieltjes recurrence on a pair of power series.
//!
//! Starting from `p_{-1} = q` and `p_0 = p` with `p(0) = 1`, each step reads
//! `beta_j = p_{j-1}[1] - p_{j-1}[0] * p_j[1]` and, when it is nonzero, forms
//! `p_{j+1} = (p_{j-1} - p_{j-1}(0) p_j) / (beta_j z)`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::MatrixSpec;
use crate::minors::{minor, principal_minor_k, MinorIndex, MinorWitness};
use crate::rational::{format_rational, pow, serde_rat, serde_rat_vec, Rational};
use crate::series::{common_order, ps_add, PowerSeries};

/// One step of the recurrence on `(p_prev, p_cur)`.
pub fn routh_step(p_prev: &PowerSeries, p_cur: &PowerSeries) -> Result<(Rational, Option<PowerSeries>)> {
    if !p_cur.constant_term().is_one() {
        return Err(Error::NormalizationError(format!(
            "current series has constant term {}, expected 1",
            format_rational(p_cur.constant_term())
        )));
    }
    let d0 = p_prev.constant_term().clone();
    let beta = p_prev.coeff(1)? - &d0 * p_cur.coeff(1)?;
    if beta.is_zero() {
        return Ok((beta, None));
    }
    let diff = ps_add(p_prev, &p_cur.scale(&-&d0));
    let next = diff.shift_down(1)?.scale(&beta.recip());
    Ok((beta, Some(next)))
}

/// `prev == prev(0) * cur` on every coefficient both series know.
pub fn is_proportional(prev: &PowerSeries, cur: &PowerSeries) -> bool {
    let d0 = prev.constant_term();
    let n = common_order(prev, cur).unwrap_or_else(|| prev.order().max(cur.order()));
    (0..=n).all(|k| match (prev.coeff(k), cur.coeff(k)) {
        (Ok(a), Ok(b)) => a == d0 * b,
        _ => true,
    })
}

fn working_order(a: &PowerSeries, b: &PowerSeries) -> Option<usize> {
    common_order(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RouthStatus {
    Terminated,
    BudgetExhausted,
    NegativeBeta { index: usize },
    ZeroBetaNonproportional { index: usize },
}

/// Output of [`routh_run`].
///
/// `betas` holds the nonzero values `beta_0, beta_1, ...` that were computed;
/// on termination `beta_omega = 0` is implied and not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouthResult {
    #[serde(with = "serde_rat")]
    pub b0: Rational,
    #[serde(with = "serde_rat_vec")]
    pub betas: Vec<Rational>,
    #[serde(with = "serde_omega")]
    pub omega: Option<usize>,
    /// `p_{-1} = q, p_0 = p, p_1, ...`
    pub chain: Vec<PowerSeries>,
    pub status: RouthStatus,
    /// Both inputs were exact polynomials.
    pub exact: bool,
}

impl RouthResult {
    /// The series `p_j`, for `j >= -1`.
    pub fn p(&self, j: isize) -> Option<&PowerSeries> {
        usize::try_from(j + 1).ok().and_then(|k| self.chain.get(k))
    }

    /// The terminal remainder `p_omega` of a terminated run.
    pub fn terminal(&self) -> Option<&PowerSeries> {
        self.omega.and_then(|w| self.p(w as isize))
    }

    pub fn is_terminated(&self) -> bool {
        self.status == RouthStatus::Terminated
    }

    /// `beta_j`, with zeros past termination; `None` where the run has no value.
    pub fn beta(&self, j: usize) -> Option<Rational> {
        match (self.betas.get(j), self.omega) {
            (Some(b), _) => Some(b.clone()),
            (None, Some(w)) if j >= w => Some(Rational::zero()),
            _ => None,
        }
    }

    /// A negative minor of `H(p, q)` certifying the failure recorded in `status`.
    pub fn witness(&self) -> Option<MinorWitness> {
        let spec = MatrixSpec::hurwitz_pair(self.chain[1].clone(), self.chain[0].clone());
        let index = match self.status {
            RouthStatus::NegativeBeta { index } => MinorIndex::principal(index + 3).ok()?,
            RouthStatus::ZeroBetaNonproportional { index } => {
                nonproportional_index(self.p(index as isize - 1)?, self.p(index as isize)?, index)?
            }
            _ => return None,
        };
        let value = minor(&spec, &index).ok()?;
        value.is_negative().then_some(MinorWitness { index, value })
    }
}

/// Index of a negative minor of `H_0` when `beta_j = 0` but `p_{j-1}` and `p_j`
/// are not proportional. Rows `2..=K`, columns `2..=K-1` then `c` on `H_j`
/// lift through the earlier steps to rows `2..=K+j`, columns `2..=K+j-1` then `c+j`.
fn nonproportional_index(prev: &PowerSeries, cur: &PowerSeries, j: usize) -> Option<MinorIndex> {
    let d0 = prev.constant_term();
    let n = common_order(prev, cur).unwrap_or_else(|| prev.order().max(cur.order()));
    let (i, delta) = (2..=n).find_map(|i| {
        let delta = prev.coeff(i).ok()? - d0 * cur.coeff(i).ok()?;
        (!delta.is_zero()).then_some((i, delta))
    })?;
    let big_k = if delta.is_negative() { 3 } else { 4 };
    let mut cols: Vec<usize> = (2..big_k + j).collect();
    cols.push(i + 2 + j);
    MinorIndex::new((2..=big_k + j).collect(), cols).ok()
}

mod serde_omega {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Finite(usize),
        Word(String),
    }

    pub fn serialize<S: Serializer>(w: &Option<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match w {
            Some(n) => Repr::Finite(*n),
            None => Repr::Word("truncated".into()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<usize>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Finite(n) => Ok(Some(n)),
            Repr::Word(w) if w == "truncated" => Ok(None),
            Repr::Word(w) => Err(serde::de::Error::custom(format!("unexpected omega {w:?}"))),
        }
    }
}

fn check_pair(p: &PowerSeries, q: &PowerSeries) -> Result<()> {
    if !p.constant_term().is_one() {
        return Err(Error::NormalizationError(format!(
            "p(0) = {}, expected 1",
            format_rational(p.constant_term())
        )));
    }
    if q.constant_term().is_negative() {
        return Err(Error::NormalizationError(format!(
            "q(0) = {} is negative",
            format_rational(q.constant_term())
        )));
    }
    Ok(())
}

/// Runs the recurrence for at most `max_steps` steps, stopping at the first
/// zero or (when `stop_on_negative`) negative beta.
fn iterate(p: &PowerSeries, q: &PowerSeries, max_steps: usize, stop_on_negative: bool) -> Result<RouthResult> {
    check_pair(p, q)?;
    let mut chain = vec![q.clone(), p.clone()];
    let mut betas = Vec::new();
    let mut status = RouthStatus::BudgetExhausted;
    let mut omega = None;
    for j in 0..max_steps {
        let (prev, cur) = (&chain[j], &chain[j + 1]);
        if working_order(prev, cur).is_some_and(|n| n < 1) {
            break;
        }
        let (beta, next) = routh_step(prev, cur)?;
        match next {
            None if is_proportional(prev, cur) => {
                status = RouthStatus::Terminated;
                omega = Some(j);
                break;
            }
            None => {
                status = RouthStatus::ZeroBetaNonproportional { index: j };
                break;
            }
            Some(next) => {
                let negative = beta.is_negative();
                betas.push(beta);
                chain.push(next);
                if negative && stop_on_negative {
                    status = RouthStatus::NegativeBeta { index: j };
                    break;
                }
            }
        }
    }
    Ok(RouthResult {
        b0: q.constant_term().clone(),
        betas,
        omega,
        chain,
        status,
        exact: p.is_polynomial() && q.is_polynomial(),
    })
}

/// Runs the recurrence until termination, a negative beta, a zero beta with
/// non-proportional series, exhaustion of known coefficients, or `max_steps`.
pub fn routh_run(p: &PowerSeries, q: &PowerSeries, max_steps: usize) -> Result<RouthResult> {
    iterate(p, q, max_steps, true)
}

/// Both sides of the identity relating a minor of `H(p_0, p_{-1})` on rows
/// `2..=k+1`, columns `2..=k` then `i+1` to `beta_0^{floor(k/2)}` times the
/// minor of `H(p_1, p_0)` on rows `2..=k`, columns `2..=k-1` then `i`.
pub fn verify_hlpm(p: &PowerSeries, q: &PowerSeries, k: usize, i: usize) -> Result<(Rational, Rational)> {
    if k < 2 || i < k {
        return Err(Error::IndexError(format!("need 2 <= k <= i, got k={k}, i={i}")));
    }
    if !p.constant_term().is_one() {
        return Err(Error::NormalizationError("p(0) must be 1".into()));
    }
    let (beta, next) = routh_step(q, p)?;
    let p1 = next.ok_or(Error::ChainTooShort { index: 0 })?;
    let mut lhs_cols: Vec<usize> = (2..=k).collect();
    lhs_cols.push(i + 1);
    let lhs = minor(&MatrixSpec::hurwitz_pair(p.clone(), q.clone()), &MinorIndex::new((2..=k + 1).collect(), lhs_cols)?)?;
    let mut rhs_cols: Vec<usize> = (2..k).collect();
    rhs_cols.push(i);
    let sub = minor(&MatrixSpec::hurwitz_pair(p1, p.clone()), &MinorIndex::new((2..=k).collect(), rhs_cols)?)?;
    Ok((lhs, pow(&beta, k / 2) * sub))
}

/// `H^{(k)}` of `H(p, q)` next to the product of betas it should equal.
pub fn verify_minor_product(p: &PowerSeries, q: &PowerSeries, k: usize) -> Result<(Rational, Rational)> {
    if k < 2 {
        return Err(Error::IndexError(format!("principal minor order {k} below 2")));
    }
    let run = iterate(p, q, k.saturating_sub(2), false)?;
    let mut rhs = Rational::one();
    for i in 1..=k.saturating_sub(2) {
        let beta = match run.beta(i - 1) {
            Some(b) => b,
            None => return Err(Error::ChainTooShort { index: i - 1 }),
        };
        rhs *= pow(&beta, (k - i) / 2);
    }
    let lhs = principal_minor_k(&MatrixSpec::hurwitz_pair(p.clone(), q.clone()), k)?;
    Ok((lhs, rhs))
}
