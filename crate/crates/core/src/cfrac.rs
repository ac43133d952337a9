//! Continued fractions `c_0 + c_1 z^{r_1} / (1 + c_2 z^{r_2} / (1 + ...))`.
//!
//! The regular case (every `r_j = 1`, every `c_j > 0`) is the Stieltjes
//! fraction whose partial numerators are the Routh betas.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, pow, to_f64, Rational};
use crate::series::{ps_add, ps_div, ps_mul, PowerSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FractionStatus {
    /// The fraction is exactly the listed terms.
    #[default]
    Finite,
    /// The expanded series became constant on all of its known coefficients.
    Terminated,
    /// Expansion stopped at the requested number of terms.
    MaxTerms,
    /// Expansion ran out of known coefficients.
    OrderExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFraction {
    pub c0: Rational,
    /// Pairs `(c_j, r_j)` with `c_j != 0` and `r_j >= 1`.
    pub terms: Vec<(Rational, usize)>,
    pub status: FractionStatus,
}

impl CFraction {
    pub fn new(c0: Rational, terms: Vec<(Rational, usize)>) -> Result<Self> {
        if let Some(j) = terms.iter().position(|(c, r)| c.is_zero() || *r == 0) {
            return Err(Error::DomainError(format!(
                "term {} needs a nonzero coefficient and a positive power",
                j + 1
            )));
        }
        Ok(CFraction { c0, terms, status: FractionStatus::Finite })
    }

    /// Stieltjes fraction `b0 + beta_0 z / (1 + beta_1 z / (1 + ...))`.
    pub fn regular(b0: Rational, betas: &[Rational]) -> Result<Self> {
        Self::new(b0, betas.iter().map(|b| (b.clone(), 1)).collect())
    }

    pub fn is_regular(&self) -> bool {
        self.terms.iter().all(|(c, r)| *r == 1 && c.is_positive())
    }

    /// The terms describe the whole fraction rather than a prefix.
    pub fn is_complete(&self) -> bool {
        matches!(self.status, FractionStatus::Finite | FractionStatus::Terminated)
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.terms.iter().map(|(c, _)| c.clone()).collect()
    }

    /// Highest coefficient index the terms pin down.
    pub fn determined_order(&self) -> usize {
        self.terms.iter().map(|(_, r)| r).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct FractionWire {
    c0: String,
    terms: Vec<(String, usize)>,
    #[serde(default)]
    status: FractionStatus,
    #[serde(default, skip_deserializing)]
    regular: bool,
}

impl Serialize for CFraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FractionWire {
            c0: format_rational(&self.c0),
            terms: self.terms.iter().map(|(c, r)| (format_rational(c), *r)).collect(),
            status: self.status,
            regular: self.is_regular(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CFraction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FractionWire::deserialize(d)?;
        let c0 = parse_rational(&w.c0).map_err(D::Error::custom)?;
        let terms = w
            .terms
            .iter()
            .map(|(c, r)| parse_rational(c).map(|c| (c, *r)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let mut cf = CFraction::new(c0, terms).map_err(D::Error::custom)?;
        cf.status = w.status;
        Ok(cf)
    }
}

/// Expands a power series into its C-fraction, term by term: subtract the
/// constant, read off the lowest remaining power `c z^r`, and invert the rest.
pub fn correspond(f: &PowerSeries, max_terms: usize) -> CFraction {
    let c0 = f.constant_term().clone();
    let mut terms = Vec::new();
    let mut current = f.clone();
    let mut head = c0.clone();
    let status = loop {
        let g = ps_add(&current, &PowerSeries::constant(-head.clone()));
        let Some(r) = g.valuation() else {
            if current.is_polynomial() || current.order() >= 1 {
                break FractionStatus::Terminated;
            }
            break FractionStatus::OrderExhausted;
        };
        if terms.len() == max_terms {
            break FractionStatus::MaxTerms;
        }
        let c = g.coeffs()[r].clone();
        let rest = g.shift_down(r).expect("lowest power divides").scale(&c.recip());
        let n = rest.known_order().unwrap_or(rest.order());
        current = ps_div(&PowerSeries::one(), &rest, n).expect("unit constant term");
        terms.push((c, r));
        head = Rational::one();
    };
    CFraction { c0, terms, status }
}

/// Exact C-fraction of the rational function `q / p`.
pub fn correspond_rational(q: &PowerSeries, p: &PowerSeries, max_terms: usize) -> Result<CFraction> {
    if !q.is_polynomial() || !p.is_polynomial() {
        return Err(Error::DomainError("exact expansion needs polynomial numerator and denominator".into()));
    }
    if p.constant_term().is_zero() {
        return Err(Error::DivisionByNonUnit);
    }
    let (mut num, mut den) = (q.clone(), p.clone());
    let c0 = num.constant_term() / den.constant_term();
    let mut head = c0.clone();
    let mut terms = Vec::new();
    let status = loop {
        let rem = ps_add(&num, &den.scale(&-head.clone()));
        let Some(r) = rem.valuation().filter(|_| !rem.is_zero()) else {
            break FractionStatus::Finite;
        };
        if terms.len() == max_terms {
            break FractionStatus::MaxTerms;
        }
        let c = &rem.coeffs()[r] / den.constant_term();
        let shifted = rem.shift_down(r)?;
        let lead = shifted.constant_term().clone();
        // next function is c z^r den / rem = (c den / lead) / (rem / (lead z^r))
        num = den.scale(&(&c / &lead));
        den = shifted.scale(&lead.recip());
        terms.push((c, r));
        head = Rational::one();
    };
    Ok(CFraction { c0, terms, status })
}

/// Numerator `Q_j` and denominator `P_j` of a convergent, with `P_j(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub numerator: PowerSeries,
    pub denominator: PowerSeries,
}

/// Convergents of depths `0..=depth`.
pub fn convergents(cf: &CFraction, depth: usize) -> Result<Vec<Convergent>> {
    if depth > cf.terms.len() {
        return Err(Error::DepthError { requested: depth, available: cf.terms.len() });
    }
    let (mut q_prev, mut q_cur) = (PowerSeries::one(), PowerSeries::constant(cf.c0.clone()));
    let (mut p_prev, mut p_cur) = (PowerSeries::zero(), PowerSeries::one());
    let mut out = vec![Convergent { numerator: q_cur.clone(), denominator: p_cur.clone() }];
    for (c, r) in &cf.terms[..depth] {
        let step = PowerSeries::monomial(c.clone(), *r);
        let q_next = ps_add(&q_cur, &ps_mul(&step, &q_prev));
        let p_next = ps_add(&p_cur, &ps_mul(&step, &p_prev));
        (q_prev, q_cur) = (q_cur, q_next);
        (p_prev, p_cur) = (p_cur, p_next);
        out.push(Convergent { numerator: q_cur.clone(), denominator: p_cur.clone() });
    }
    Ok(out)
}

/// Taylor series of the fraction to `order`.
pub fn to_series(cf: &CFraction, order: usize) -> Result<PowerSeries> {
    if !cf.is_complete() && order > cf.determined_order() {
        return Err(Error::InsufficientDepth { requested: order, determined: cf.determined_order() });
    }
    let last = convergents(cf, cf.terms.len())?.pop().expect("depth zero always present");
    ps_div(&last.numerator, &last.denominator, order)
}

/// Backward evaluation of the depth-`depth` convergent in double precision.
pub fn eval(cf: &CFraction, z: Complex64, depth: usize) -> Result<Complex64> {
    if depth > cf.terms.len() {
        return Err(Error::DepthError { requested: depth, available: cf.terms.len() });
    }
    let c0 = Complex64::new(to_f64(&cf.c0), 0.0);
    let term = |j: usize| {
        let (c, r) = &cf.terms[j - 1];
        z.powu(*r as u32) * to_f64(c)
    };
    let mut tail = Complex64::new(1.0, 0.0);
    for j in (2..=depth).rev() {
        if tail.norm() == 0.0 {
            return Err(Error::EvaluationPole { depth: j });
        }
        tail = Complex64::new(1.0, 0.0) + term(j) / tail;
    }
    if depth == 0 {
        return Ok(c0);
    }
    if tail.norm() == 0.0 {
        return Err(Error::EvaluationPole { depth: 1 });
    }
    let v = c0 + term(1) / tail;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::EvaluationPole { depth: 1 })
    }
}

/// Exact backward evaluation at a rational point.
pub fn eval_exact(cf: &CFraction, z: &Rational, depth: usize) -> Result<Rational> {
    if depth > cf.terms.len() {
        return Err(Error::DepthError { requested: depth, available: cf.terms.len() });
    }
    let term = |j: usize| {
        let (c, r) = &cf.terms[j - 1];
        c * pow(z, *r)
    };
    let mut tail = Rational::one();
    for j in (2..=depth).rev() {
        if tail.is_zero() {
            return Err(Error::EvaluationPole { depth: j });
        }
        tail = Rational::one() + term(j) / tail;
    }
    if depth == 0 {
        return Ok(cf.c0.clone());
    }
    if tail.is_zero() {
        return Err(Error::EvaluationPole { depth: 1 });
    }
    Ok(&cf.c0 + term(1) / tail)
}

/// `1 / (4 max_{j >= j0} beta_j)` over the listed betas, the radius inside which
/// every tail `beta_j R < 1/4` holds for the known terms.
pub fn worpitzky_radius(betas: &[Rational], j0: usize) -> Result<Rational> {
    let tail = betas.get(j0..).filter(|t| !t.is_empty()).ok_or_else(|| {
        Error::DomainError(format!("no betas at or beyond index {j0}"))
    })?;
    if let Some(b) = tail.iter().find(|b| !b.is_positive()) {
        return Err(Error::DomainError(format!("tail beta {} is not positive", format_rational(b))));
    }
    let max = tail.iter().max().expect("nonempty");
    Ok((max * Rational::from_integer(4.into())).recip())
}
