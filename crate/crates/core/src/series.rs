//! Exact formal power series and polynomials over the rationals.
//!
//! A [`PowerSeries`] is either an exact polynomial (every coefficient past the
//! stored list is zero) or a truncated series whose coefficients are known up
//! to its order `N` and unknown beyond. Binary operations keep the smaller of
//! the two known orders, where an exact polynomial counts as known to every
//! order. Nothing here ever invents a coefficient it was not given.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, serde_rat_vec, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
    polynomial: bool,
}

impl PowerSeries {
    /// Exact polynomial with ascending coefficients. Trailing zeros are dropped.
    pub fn polynomial(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        PowerSeries { coeffs, polynomial: true }
    }

    /// Series known to order `coeffs.len() - 1`.
    ///
    /// # Panics
    /// When `coeffs` is empty: a series must know at least its constant term.
    pub fn truncated(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        PowerSeries { coeffs, polynomial: false }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::polynomial(vec![])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(vec![c])
    }

    /// `c * z^k` as an exact polynomial.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::polynomial(coeffs)
    }

    /// Index of the last stored coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// Highest index with a known coefficient; `None` for exact polynomials.
    pub fn known_order(&self) -> Option<usize> {
        if self.polynomial {
            None
        } else {
            Some(self.order())
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<Rational> {
        match self.coeffs.get(k) {
            Some(c) => Ok(c.clone()),
            None if self.polynomial => Ok(Rational::zero()),
            None => Err(Error::InsufficientOrder { needed: k, known: self.order() }),
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Degree of an exact polynomial; `None` for the zero polynomial or truncated series.
    pub fn degree(&self) -> Option<usize> {
        if !self.polynomial || self.is_zero() {
            None
        } else {
            Some(self.order())
        }
    }

    /// All known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// The series viewed as known to order `n`: truncates, or extends an
    /// exact polynomial with its zero coefficients. The result is never
    /// flagged polynomial unless nothing was cut and `self` was exact.
    pub fn to_order(&self, n: usize) -> Result<Self> {
        if !self.polynomial && n > self.order() {
            return Err(Error::InsufficientOrder { needed: n, known: self.order() });
        }
        let coeffs = (0..=n).map(|k| self.coeff(k)).collect::<Result<Vec<_>>>()?;
        Ok(PowerSeries::truncated(coeffs))
    }

    /// Coefficient vector of length `n + 1` (zeros beyond an exact polynomial).
    fn padded(&self, n: usize) -> Vec<Rational> {
        (0..=n)
            .map(|k| self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    fn combine(a: &Self, b: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        match common_order(a, b) {
            None => {
                let n = a.order().max(b.order());
                let (x, y) = (a.padded(n), b.padded(n));
                Self::polynomial(x.iter().zip(&y).map(|(u, v)| f(u, v)).collect())
            }
            Some(n) => {
                let (x, y) = (a.padded(n), b.padded(n));
                Self::truncated(x.iter().zip(&y).map(|(u, v)| f(u, v)).collect())
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        if self.polynomial {
            Self::polynomial(coeffs)
        } else {
            Self::truncated(coeffs)
        }
    }

    /// Multiplies by `z^r`; the known order grows by `r`.
    pub fn shift_up(&self, r: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); r];
        coeffs.extend(self.coeffs.iter().cloned());
        if self.polynomial {
            Self::polynomial(coeffs)
        } else {
            Self::truncated(coeffs)
        }
    }

    /// Divides by `z^r`. The first `r` coefficients must be zero and known.
    pub fn shift_down(&self, r: usize) -> Result<Self> {
        if r == 0 {
            return Ok(self.clone());
        }
        if self.polynomial {
            if self.coeffs.iter().take(r).any(|c| !c.is_zero()) {
                return Err(Error::DomainError(format!("series is not divisible by z^{r}")));
            }
            let rest = self.coeffs.get(r..).map(<[_]>::to_vec).unwrap_or_default();
            return Ok(Self::polynomial(rest));
        }
        if self.order() < r {
            return Err(Error::InsufficientOrder { needed: r, known: self.order() });
        }
        if self.coeffs[..r].iter().any(|c| !c.is_zero()) {
            return Err(Error::DomainError(format!("series is not divisible by z^{r}")));
        }
        Ok(Self::truncated(self.coeffs[r..].to_vec()))
    }

    /// `f(z^2)`.
    pub fn compose_square(&self) -> Self {
        let mut coeffs = vec![Rational::zero(); 2 * self.order() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = c.clone();
        }
        if self.polynomial {
            Self::polynomial(coeffs)
        } else {
            // f is known to order N, so f(z^2) is known through z^{2N+1}
            coeffs.push(Rational::zero());
            Self::truncated(coeffs)
        }
    }

    /// Horner evaluation over the known coefficients (the exact value for polynomials).
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::rational::to_f64(c))
    }

    pub fn leading_coeff(&self) -> &Rational {
        self.coeffs.last().expect("nonempty")
    }
}

/// Known order shared by two operands; `None` when both are exact polynomials.
pub fn common_order(a: &PowerSeries, b: &PowerSeries) -> Option<usize> {
    match (a.known_order(), b.known_order()) {
        (None, None) => None,
        (Some(n), None) | (None, Some(n)) => Some(n),
        (Some(n), Some(m)) => Some(n.min(m)),
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&a))?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{}z", format_rational(&a))?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{}z^{k}", format_rational(&a))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.polynomial {
            write!(f, " + O(z^{})", self.order() + 1)?;
        }
        Ok(())
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        ps_add(self, rhs)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::combine(self, rhs, |a, b| a - b)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(&-Rational::one())
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        ps_mul(self, rhs)
    }
}

/// Coefficient-wise sum to the common known order.
pub fn ps_add(a: &PowerSeries, b: &PowerSeries) -> PowerSeries {
    PowerSeries::combine(a, b, |x, y| x + y)
}

/// Cauchy product, truncated to the common known order.
pub fn ps_mul(a: &PowerSeries, b: &PowerSeries) -> PowerSeries {
    let n = match common_order(a, b) {
        None => a.order() + b.order(),
        Some(n) => n,
    };
    let mut out = vec![Rational::zero(); n + 1];
    for (i, x) in a.coeffs.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    if a.polynomial && b.polynomial {
        PowerSeries::polynomial(out)
    } else {
        PowerSeries::truncated(out)
    }
}

/// Power series quotient `num / den` to order `order`, capped by what the
/// operands know.
pub fn ps_div(num: &PowerSeries, den: &PowerSeries, order: usize) -> Result<PowerSeries> {
    let d0 = den.constant_term().clone();
    if d0.is_zero() {
        return Err(Error::DivisionByNonUnit);
    }
    let n = common_order(num, den).map_or(order, |k| k.min(order));
    let inv_d0 = d0.recip();
    let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = num.coeff(k)?;
        for (i, s) in out.iter().enumerate() {
            let d = den.coeff(k - i)?;
            if !d.is_zero() {
                acc -= s * d;
            }
        }
        out.push(acc * &inv_d0);
    }
    Ok(PowerSeries::truncated(out))
}

/// Formal derivative; a truncated series loses one order.
pub fn ps_derivative(f: &PowerSeries) -> PowerSeries {
    let coeffs: Vec<Rational> = f
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * int(k as i64))
        .collect();
    if f.polynomial {
        PowerSeries::polynomial(coeffs)
    } else if coeffs.is_empty() {
        // the derivative of a series known only at z^0 has nothing known; keep a
        // placeholder zero so the order bookkeeping stays total
        PowerSeries::truncated(vec![Rational::zero()])
    } else {
        PowerSeries::truncated(coeffs)
    }
}

/// `f = f0 * z^j * (q_even(z^2) + z * p_odd(z^2))` with `q_even(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenOddSplit {
    pub j: usize,
    #[serde(with = "crate::rational::serde_rat")]
    pub f0: Rational,
    pub q_even: PowerSeries,
    pub p_odd: PowerSeries,
}

impl EvenOddSplit {
    pub fn reconstruct(&self) -> PowerSeries {
        let even = self.q_even.compose_square();
        let odd = self.p_odd.compose_square().shift_up(1);
        ps_add(&even, &odd).scale(&self.f0).shift_up(self.j)
    }
}

pub fn even_odd_split(f: &PowerSeries) -> Result<EvenOddSplit> {
    let j = f.valuation().ok_or(Error::ZeroSeries)?;
    let f0 = f.coeffs[j].clone();
    if f0.is_negative() {
        return Err(Error::SignError(format!(
            "leading coefficient {} is negative",
            format_rational(&f0)
        )));
    }
    let g = f.shift_down(j)?.scale(&f0.recip());
    let pick = |start: usize| -> Vec<Rational> { g.coeffs.iter().skip(start).step_by(2).cloned().collect() };
    let (q_even, p_odd) = if g.polynomial {
        (PowerSeries::polynomial(pick(0)), PowerSeries::polynomial(pick(1)))
    } else {
        if g.order() < 1 {
            return Err(Error::InsufficientOrder { needed: j + 1, known: f.order() });
        }
        (PowerSeries::truncated(pick(0)), PowerSeries::truncated(pick(1)))
    };
    Ok(EvenOddSplit { j, f0, q_even, p_odd })
}

/// `z^n p(1/z)` for an exact polynomial of degree at most `n`.
pub fn poly_reverse(p: &PowerSeries, n: usize) -> Result<PowerSeries> {
    if !p.polynomial {
        return Err(Error::DomainError("reversal needs an exact polynomial".into()));
    }
    let deg = p.degree().unwrap_or(0);
    if deg > n {
        return Err(Error::DegreeError { degree: deg, bound: n });
    }
    let coeffs = (0..=n).map(|k| p.coeff(n - k)).collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries::polynomial(coeffs))
}

fn require_polynomial(p: &PowerSeries, what: &str) -> Result<()> {
    if p.polynomial {
        Ok(())
    } else {
        Err(Error::DomainError(format!("{what} needs exact polynomials")))
    }
}

/// Euclidean division of exact polynomials: `a = quotient * b + remainder`.
pub fn poly_divmod(a: &PowerSeries, b: &PowerSeries) -> Result<(PowerSeries, PowerSeries)> {
    require_polynomial(a, "polynomial division")?;
    require_polynomial(b, "polynomial division")?;
    let db = b.degree().ok_or(Error::DivisionByNonUnit)?;
    let lead = b.coeffs[db].clone();
    let mut rem = a.coeffs.clone();
    let qlen = rem.len().saturating_sub(db).max(1);
    let mut quot = vec![Rational::zero(); qlen];
    while rem.len() > db && rem.iter().any(|c| !c.is_zero()) {
        let k = rem.len() - 1;
        if rem[k].is_zero() {
            rem.pop();
            continue;
        }
        let c = &rem[k] / &lead;
        for (i, bc) in b.coeffs.iter().enumerate() {
            rem[k - db + i] -= &c * bc;
        }
        quot[k - db] = c;
        rem.pop();
    }
    Ok((PowerSeries::polynomial(quot), PowerSeries::polynomial(rem)))
}

/// Scales a nonzero polynomial to leading coefficient one.
pub fn poly_monic(p: &PowerSeries) -> PowerSeries {
    if p.is_zero() {
        return p.clone();
    }
    p.scale(&p.leading_coeff().recip())
}

/// Monic greatest common divisor of two exact polynomials.
pub fn poly_gcd(a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    require_polynomial(a, "gcd")?;
    require_polynomial(b, "gcd")?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = poly_divmod(&x, &y)?;
        x = y;
        // keep coefficients small between steps
        y = poly_monic(&r);
    }
    Ok(poly_monic(&x))
}

/// Exact quotient of polynomials; errors when the division leaves a remainder.
pub fn poly_div_exact(a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    let (q, r) = poly_divmod(a, b)?;
    if !r.is_zero() {
        return Err(Error::DomainError("polynomial division is not exact".into()));
    }
    Ok(q)
}

/// A pair `(p, q)` rescaled so that `p(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPair {
    pub p: PowerSeries,
    pub q: PowerSeries,
    /// The original `p(0)`; the input pair equals `scale * (p, q)`.
    pub scale: Rational,
}

pub fn normalize_pair(p: &PowerSeries, q: &PowerSeries) -> Result<NormalizedPair> {
    let a0 = p.constant_term().clone();
    if !a0.is_positive() {
        return Err(Error::NormalizationError(format!(
            "p(0) = {} must be positive",
            format_rational(&a0)
        )));
    }
    let inv = a0.recip();
    Ok(NormalizedPair { p: p.scale(&inv), q: q.scale(&inv), scale: a0 })
}

#[derive(Serialize)]
struct SeriesWire<'a> {
    #[serde(with = "serde_rat_vec")]
    coeffs: &'a [Rational],
    order: usize,
    polynomial: bool,
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire { coeffs: &self.coeffs, order: self.order(), polynomial: self.polynomial }
            .serialize(s)
    }
}

#[derive(Deserialize)]
struct SeriesObject {
    #[serde(with = "serde_rat_vec")]
    coeffs: Vec<Rational>,
    order: Option<usize>,
    #[serde(default)]
    polynomial: bool,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeriesRepr {
    Shorthand(#[serde(with = "serde_rat_vec")] Vec<Rational>),
    Object(SeriesObject),
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match SeriesRepr::deserialize(d)? {
            SeriesRepr::Shorthand(c) => Ok(PowerSeries::polynomial(c)),
            SeriesRepr::Object(o) if o.polynomial => Ok(PowerSeries::polynomial(o.coeffs)),
            SeriesRepr::Object(o) => {
                let n = o.order.unwrap_or(o.coeffs.len().saturating_sub(1));
                let mut c = o.coeffs;
                // listed coefficients followed by zeros known through `order`
                c.resize(n + 1, Rational::zero());
                Ok(PowerSeries::truncated(c))
            }
        }
    }
}
