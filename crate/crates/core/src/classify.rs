//! Class-membership predicates on series and pairs of series, and fixture generators.
//!
//! Every predicate returns a [`ClassReport`]. A `certified_yes` verdict is only
//! issued for exact polynomial input; refutations carry a witness that can be
//! recomputed independently.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{is_negative_real_rooted, tnn_certificate, Budget, FactorizationResult, TnnCertificate};
use crate::matrix::MatrixSpec;
use crate::minors::{minor, principal_minor_k, tnn_scan, MinorIndex, MinorWitness, TnnReport};
use crate::rational::{format_rational, int, rat, serde_rat, serde_rat_vec, Rational};
use crate::routh::routh_run;
use crate::series::{even_odd_split, poly_gcd, ps_add, ps_derivative, ps_div, ps_mul, PowerSeries};
use crate::sturm::{distinct_real_roots, is_squarefree, merged_roots, squarefree_part, RootInterval, RootOwner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedYes,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Exact factorization of the associated Hurwitz-type matrix.
    Factorization { factorization: Box<FactorizationResult>, toeplitz_scan: TnnReport },
    /// Principal minors positive for `k = 2..=omega`, zero afterwards.
    MinorProfile { omega: usize, poles: usize },
    /// Odd principal minors positive for `m = 1..=l`, zero afterwards.
    OddMinorProfile { l: usize },
    /// Hurwitz minors positive for `k = 2..=omega`, zero afterwards.
    HurwitzProfile { omega: usize, zeros: usize },
    /// All roots real and nonpositive.
    NegativeRealRoots { polynomial: PowerSeries, window_scan: Option<TnnReport> },
    /// Real, simple, strictly alternating roots.
    Interlacing { roots: Vec<(RootOwner, RootInterval)> },
    /// The relevant matrix reduces to a constant or a Toeplitz matrix of a
    /// negative-real-rooted polynomial.
    DegenerateBranch { series: PowerSeries },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    NegativeMinor {
        matrix: MatrixSpec,
        index: MinorIndex,
        #[serde(with = "serde_rat")]
        value: Rational,
    },
    /// A vanishing principal minor followed by a nonzero one.
    ProfileBreak {
        matrix: MatrixSpec,
        zero_at: usize,
        nonzero_at: usize,
        #[serde(with = "serde_rat")]
        value: Rational,
    },
    NonSimpleRoot { polynomial: String, repeated_factor: PowerSeries },
    NonRealRoots { polynomial: String, real_roots: usize, degree: usize },
    /// Two consecutive roots of the same polynomial with no root of the other between them.
    NonInterlacing { owner: RootOwner, first: RootInterval, second: RootInterval },
}

impl Witness {
    fn negative_minor(matrix: &MatrixSpec, index: MinorIndex) -> Result<Self> {
        let value = minor(matrix, &index)?;
        if !value.is_negative() {
            return Err(Error::DomainError(format!(
                "expected a negative minor at {index:?}, found {}",
                format_rational(&value)
            )));
        }
        Ok(Witness::NegativeMinor { matrix: matrix.clone(), index, value })
    }

    /// Recomputes matrix-based witnesses; root-based witnesses are checked by construction.
    pub fn recheck(&self) -> Result<bool> {
        match self {
            Witness::NegativeMinor { matrix, index, value } => Ok(value.is_negative() && minor(matrix, index)? == *value),
            Witness::ProfileBreak { matrix, zero_at, nonzero_at, value } => Ok(principal_minor_k(matrix, *zero_at)?.is_zero()
                && principal_minor_k(matrix, *nonzero_at)? == *value
                && !value.is_zero()),
            _ => Ok(true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub k: usize,
    #[serde(with = "serde_rat")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub predicate: String,
    pub verdict: Verdict,
    pub evidence: Option<Evidence>,
    pub witness: Option<Witness>,
    pub minor_profile: Option<Vec<ProfileEntry>>,
    pub notes: Vec<String>,
}

impl ClassReport {
    fn new(predicate: &str, verdict: Verdict) -> Self {
        ClassReport { predicate: predicate.into(), verdict, evidence: None, witness: None, minor_profile: None, notes: vec![] }
    }

    fn certified(predicate: &str, evidence: Evidence) -> Self {
        ClassReport { evidence: Some(evidence), ..Self::new(predicate, Verdict::CertifiedYes) }
    }

    fn refuted(predicate: &str, witness: Witness) -> Self {
        ClassReport { witness: Some(witness), ..Self::new(predicate, Verdict::Refuted) }
    }

    fn inconclusive(predicate: &str, note: impl Into<String>) -> Self {
        ClassReport { notes: vec![note.into()], ..Self::new(predicate, Verdict::Inconclusive) }
    }

    fn with_profile(mut self, profile: Vec<ProfileEntry>) -> Self {
        self.minor_profile = Some(profile);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn check_pair(p: &PowerSeries, q: &PowerSeries, allow_negative_q0: bool) -> Result<()> {
    if !p.constant_term().is_one() {
        return Err(Error::NormalizationError(format!(
            "p(0) = {}, expected 1",
            format_rational(p.constant_term())
        )));
    }
    if !allow_negative_q0 && q.constant_term().is_negative() {
        return Err(Error::NormalizationError("q(0) must be nonnegative".into()));
    }
    Ok(())
}

fn max_degree(p: &PowerSeries, q: &PowerSeries) -> Option<usize> {
    match (p.is_polynomial(), q.is_polynomial()) {
        (true, true) => Some(p.degree().unwrap_or(0).max(q.degree().unwrap_or(0))),
        _ => None,
    }
}

/// Principal minors `k = 2..=k_max`, stopping early when coefficients run out.
fn principal_profile(spec: &MatrixSpec, ks: impl Iterator<Item = usize>) -> Result<Vec<ProfileEntry>> {
    let mut out = Vec::new();
    for k in ks {
        match principal_minor_k(spec, k) {
            Ok(value) => out.push(ProfileEntry { k, value }),
            Err(Error::InsufficientOrder { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Shape of a minor sequence.
enum ProfileShape {
    /// Positive through the index, zero afterwards (index 0 when empty).
    PositiveThenZero(usize),
    Negative(usize),
    Break { zero_at: usize, nonzero_at: usize },
}

fn profile_shape(profile: &[ProfileEntry]) -> ProfileShape {
    let mut last_positive = 0;
    let mut first_zero = None;
    for e in profile {
        if e.value.is_negative() {
            return ProfileShape::Negative(e.k);
        }
        match (e.value.is_zero(), first_zero) {
            (true, None) => first_zero = Some(e.k),
            (false, Some(z)) => return ProfileShape::Break { zero_at: z, nonzero_at: e.k },
            (false, None) => last_positive = e.k,
            _ => {}
        }
    }
    ProfileShape::PositiveThenZero(last_positive)
}

/// For polynomials of degree at most `n`, `H^{(k)} = 0` once `k >= 2n + 3`: the
/// rows then contain both shifts of the syzygy `q * p - p * q = 0`.
fn profile_limit(n: usize) -> usize {
    2 * n + 3
}

fn break_witness(spec: &MatrixSpec, profile: &[ProfileEntry], zero_at: usize, nonzero_at: usize) -> Witness {
    let value = profile.iter().find(|e| e.k == nonzero_at).map(|e| e.value.clone()).unwrap_or_default();
    Witness::ProfileBreak { matrix: spec.clone(), zero_at, nonzero_at, value }
}

/// Membership of `q / p` in the Stieltjes class through the principal-minor profile.
pub fn is_s_profile(p: &PowerSeries, q: &PowerSeries, k_max: usize) -> Result<ClassReport> {
    const NAME: &str = "s";
    check_pair(p, q, false)?;
    let spec = MatrixSpec::hurwitz_pair(p.clone(), q.clone());
    let limit = max_degree(p, q).map_or(k_max, |n| k_max.max(profile_limit(n)));
    let profile = principal_profile(&spec, 2..=limit)?;
    let report = match profile_shape(&profile) {
        ProfileShape::Negative(k) => ClassReport::refuted(NAME, Witness::negative_minor(&spec, MinorIndex::principal(k)?)?),
        ProfileShape::Break { zero_at, nonzero_at } => {
            // a failed recurrence supplies a negative minor; otherwise report the break itself
            let run = routh_run(p, q, limit)?;
            let witness = match run.witness() {
                Some(w) => Witness::NegativeMinor { matrix: spec.clone(), index: w.index, value: w.value },
                None => break_witness(&spec, &profile, zero_at, nonzero_at),
            };
            ClassReport::refuted(NAME, witness)
        }
        ProfileShape::PositiveThenZero(omega) if max_degree(p, q).is_some() => {
            ClassReport::certified(NAME, Evidence::MinorProfile { omega, poles: (omega - 1) / 2 })
        }
        ProfileShape::PositiveThenZero(omega) => {
            let last = profile.last().map_or(1, |e| e.k);
            ClassReport::inconclusive(
                NAME,
                format!("truncated input: minors positive through k = {omega}, profile known through k = {last}"),
            )
        }
    };
    Ok(report.with_profile(profile))
}

/// Membership of `q / p` in the class of real functions mapping the upper
/// half-plane into itself, through the odd principal minors.
pub fn is_r_profile(p: &PowerSeries, q: &PowerSeries, m_max: usize) -> Result<ClassReport> {
    const NAME: &str = "r";
    check_pair(p, q, true)?;
    let spec = MatrixSpec::hurwitz_pair(p.clone(), q.clone());
    let m_limit = max_degree(p, q).map_or(m_max, |n| m_max.max(n + 1));
    let profile = principal_profile(&spec, (1..=m_limit).map(|m| 2 * m + 1))?;
    let report = match profile_shape(&profile) {
        ProfileShape::Negative(k) => ClassReport::refuted(NAME, Witness::negative_minor(&spec, MinorIndex::principal(k)?)?),
        ProfileShape::Break { zero_at, nonzero_at } => {
            ClassReport::refuted(NAME, break_witness(&spec, &profile, zero_at, nonzero_at))
        }
        ProfileShape::PositiveThenZero(k) if max_degree(p, q).is_some() => {
            let l = k.saturating_sub(1) / 2;
            ClassReport::certified(NAME, Evidence::OddMinorProfile { l })
        }
        ProfileShape::PositiveThenZero(k) => ClassReport::inconclusive(
            NAME,
            format!("truncated input: odd minors positive through k = {k}"),
        ),
    };
    Ok(report.with_profile(profile))
}

/// Total nonnegativity of the Toeplitz matrix of `f` on an `n x n` window.
pub fn is_pf_window(f: &PowerSeries, n: usize, k: usize) -> Result<ClassReport> {
    const NAME: &str = "pf";
    if !f.constant_term().is_positive() {
        return Err(Error::SignError("f(0) must be positive".into()));
    }
    let spec = MatrixSpec::toeplitz(f.clone());
    let scan = tnn_scan(&spec, n, n, k)?;
    if let Some(w) = &scan.witness {
        return Ok(ClassReport::refuted(
            NAME,
            Witness::NegativeMinor { matrix: spec, index: w.index.clone(), value: w.value.clone() },
        ));
    }
    if !f.is_polynomial() {
        return Ok(ClassReport::inconclusive(
            NAME,
            format!("truncated series: no negative minor up to order {k} in the {n}x{n} window"),
        ));
    }
    if is_negative_real_rooted(f)? {
        return Ok(ClassReport::certified(
            NAME,
            Evidence::NegativeRealRoots { polynomial: f.clone(), window_scan: Some(scan) },
        )
        .note("exact polynomial with only real nonpositive roots"));
    }
    Ok(ClassReport::inconclusive(
        NAME,
        format!("polynomial has non-real or positive roots, but no negative minor up to order {k} in the {n}x{n} window"),
    ))
}

/// `H(p, q)` with `p(0) = 0 < q(0)`: totally nonnegative exactly when `p` vanishes
/// and `q` generates a Polya frequency sequence.
fn degenerate_pair(name: &str, spec: &MatrixSpec, p: &PowerSeries, q: &PowerSeries, budget: &Budget) -> Result<ClassReport> {
    if let Some(i) = (1..=p.order()).find(|&i| p.coeff(i).is_ok_and(|c| !c.is_zero())) {
        let a_i = p.coeff(i)?;
        // -a_i q(0) on rows {2, 3}, or the entry a_i itself when it is negative
        let index = if a_i.is_positive() {
            MinorIndex::new(vec![2, 3], vec![2, i + 2])?
        } else {
            MinorIndex::new(vec![2], vec![i + 2])?
        };
        return Ok(ClassReport::refuted(name, Witness::negative_minor(spec, index)?));
    }
    if !p.is_polynomial() {
        return Ok(ClassReport::inconclusive(name, "odd part vanishes on its known coefficients only"));
    }
    let pf = is_pf_window(q, budget.window, budget.max_order)?;
    let report = match pf.verdict {
        Verdict::CertifiedYes => ClassReport::certified(name, Evidence::DegenerateBranch { series: q.clone() }),
        Verdict::Refuted => {
            // Toeplitz row r sits in row 2r - 1 when p vanishes
            let Some(Witness::NegativeMinor { index, .. }) = pf.witness else { unreachable!() };
            let rows = index.rows.iter().map(|r| 2 * r - 1).collect();
            ClassReport::refuted(name, Witness::negative_minor(spec, MinorIndex::new(rows, index.cols)?)?)
        }
        Verdict::Inconclusive => ClassReport { predicate: name.into(), ..pf },
    };
    Ok(report)
}

/// Maps a certificate for `H(p / s, q / s)` onto `spec`, a positive multiple of it.
fn from_certificate(name: &str, spec: &MatrixSpec, cert: TnnCertificate) -> Result<ClassReport> {
    Ok(match cert {
        TnnCertificate::CertifiedTnn { factorization, toeplitz_scan } => ClassReport::certified(
            name,
            Evidence::Factorization { factorization: Box::new(factorization), toeplitz_scan },
        ),
        TnnCertificate::Refuted { witness: MinorWitness { index, .. } } => {
            ClassReport::refuted(name, Witness::negative_minor(spec, index)?)
        }
        TnnCertificate::Inconclusive { reason, .. } => ClassReport::inconclusive(name, reason),
    })
}

/// Total nonnegativity of the Hurwitz matrix of `f`, which holds exactly for
/// quasi-stable generators.
pub fn quasi_stable_check(f: &PowerSeries, budget: &Budget) -> Result<ClassReport> {
    const NAME: &str = "quasi-stable";
    budget.validate()?;
    let split = even_odd_split(f)?;
    let spec = MatrixSpec::hurwitz_f(f.clone());
    let (p, q) = (&split.p_odd, &split.q_even);
    let a0 = p.constant_term().clone();
    if a0.is_negative() {
        return Ok(ClassReport::refuted(NAME, Witness::negative_minor(&spec, MinorIndex::new(vec![2], vec![2])?)?));
    }
    if a0.is_zero() {
        return degenerate_pair(NAME, &spec, p, q, budget);
    }
    let s = a0.recip();
    let cert = tnn_certificate(&p.scale(&s), &q.scale(&s), budget)?;
    from_certificate(NAME, &spec, cert)
}

/// Total nonnegativity of `H(f', f)`, which holds exactly for entire generators
/// with only negative zeros.
pub fn entire_neg_zeros_check(f: &PowerSeries, budget: &Budget) -> Result<ClassReport> {
    const NAME: &str = "neg-zeros";
    budget.validate()?;
    if !f.constant_term().is_positive() {
        return Err(Error::SignError("f(0) must be positive".into()));
    }
    let spec = MatrixSpec::d_matrix(f.clone());
    let d = ps_derivative(f);
    let a0 = d.constant_term().clone();
    if a0.is_negative() {
        return Ok(ClassReport::refuted(NAME, Witness::negative_minor(&spec, MinorIndex::new(vec![2], vec![2])?)?));
    }
    if a0.is_zero() {
        return degenerate_pair(NAME, &spec, &d, f, budget);
    }
    let s = a0.recip();
    let cert = tnn_certificate(&d.scale(&s), &f.scale(&s), budget)?;
    from_certificate(NAME, &spec, cert)
}

/// Run length of positive Hurwitz minors of a polynomial whose even and odd
/// parts have no common zeros.
pub fn hurwitz_profile(f: &PowerSeries, k_max: usize) -> Result<ClassReport> {
    const NAME: &str = "hurwitz-profile";
    if !f.is_polynomial() {
        return Err(Error::DomainError("the Hurwitz profile needs an exact polynomial".into()));
    }
    let split = even_odd_split(f)?;
    let spec = MatrixSpec::hurwitz_f(f.clone());
    let (p, q) = (&split.p_odd, &split.q_even);
    let n = p.degree().unwrap_or(0).max(q.degree().unwrap_or(0));
    let profile = principal_profile(&spec, 2..=k_max.max(profile_limit(n)))?;
    if p.is_zero() {
        if q.degree().unwrap_or(0) > 0 {
            return Ok(ClassReport::inconclusive(NAME, "odd part vanishes: every zero of the even part is a common zero")
                .with_profile(profile));
        }
    } else {
        let g = poly_gcd(p, q)?;
        if g.degree().unwrap_or(0) > 0 {
            return Ok(ClassReport::inconclusive(
                NAME,
                format!("even and odd parts share the factor {g} (in z^2); the profile criterion does not apply"),
            )
            .with_profile(profile));
        }
    }
    let report = match profile_shape(&profile) {
        ProfileShape::Negative(k) => ClassReport::refuted(NAME, Witness::negative_minor(&spec, MinorIndex::principal(k)?)?),
        ProfileShape::Break { zero_at, nonzero_at } => {
            ClassReport::refuted(NAME, break_witness(&spec, &profile, zero_at, nonzero_at))
        }
        ProfileShape::PositiveThenZero(omega) => {
            let omega = omega.max(1);
            ClassReport::certified(NAME, Evidence::HurwitzProfile { omega, zeros: omega - 1 })
        }
    };
    Ok(report.with_profile(profile))
}

/// Real, simple and interlacing roots of a coprime polynomial pair.
pub fn interlacing_check(p: &PowerSeries, q: &PowerSeries) -> Result<ClassReport> {
    const NAME: &str = "interlacing";
    if !p.is_polynomial() || !q.is_polynomial() {
        return Err(Error::DomainError("interlacing needs exact polynomials".into()));
    }
    for (name, f) in [("p", p), ("q", q)] {
        if f.is_zero() {
            return Err(Error::ZeroSeries);
        }
        if !is_squarefree(f)? {
            let sq = squarefree_part(f)?;
            let repeated = crate::series::poly_div_exact(f, &sq)?;
            return Ok(ClassReport::refuted(NAME, Witness::NonSimpleRoot { polynomial: name.into(), repeated_factor: repeated }));
        }
    }
    let g = poly_gcd(p, q)?;
    if g.degree().unwrap_or(0) > 0 {
        return Err(Error::CoprimeError { degree: g.degree().unwrap_or(0) });
    }
    for (name, f) in [("p", p), ("q", q)] {
        let degree = f.degree().unwrap_or(0);
        let real = if degree == 0 { 0 } else { distinct_real_roots(f)? };
        if real != degree {
            return Ok(ClassReport::refuted(NAME, Witness::NonRealRoots { polynomial: name.into(), real_roots: real, degree }));
        }
    }
    let roots = if p.degree().unwrap_or(0) + q.degree().unwrap_or(0) == 0 { vec![] } else { merged_roots(p, q)? };
    if let Some(w) = roots.windows(2).find(|w| w[0].0 == w[1].0) {
        return Ok(ClassReport::refuted(
            NAME,
            Witness::NonInterlacing { owner: w[0].0, first: w[0].1.clone(), second: w[1].1.clone() },
        ));
    }
    Ok(ClassReport::certified(NAME, Evidence::Interlacing { roots }))
}

/// Partial-fraction data `B0 + B1 z + sum A/(z + s) - A/s` with `A < 0 < s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SPoleData {
    #[serde(with = "serde_rat")]
    pub b0: Rational,
    #[serde(with = "serde_rat")]
    pub b1: Rational,
    pub poles: Vec<Pole>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pole {
    /// Residue, negative.
    #[serde(with = "serde_rat")]
    pub residue: Rational,
    /// The pole sits at `-location`.
    #[serde(with = "serde_rat")]
    pub location: Rational,
}

impl SPoleData {
    pub fn validate(&self) -> Result<()> {
        if self.b0.is_negative() || self.b1.is_negative() {
            return Err(Error::DomainError("B0 and B1 must be nonnegative".into()));
        }
        for (k, pole) in self.poles.iter().enumerate() {
            if !pole.residue.is_negative() || !pole.location.is_positive() {
                return Err(Error::DomainError(format!("pole {k} needs a negative residue and a positive location")));
            }
            if self.poles[..k].iter().any(|o| o.location == pole.location) {
                return Err(Error::DomainError(format!("pole location {} repeats", format_rational(&pole.location))));
            }
        }
        Ok(())
    }

    /// Finite poles plus the pole at infinity when `B1 > 0`.
    pub fn pole_count(&self) -> usize {
        self.poles.len() + usize::from(self.b1.is_positive())
    }
}

fn linear(root_scale: &Rational) -> PowerSeries {
    // 1 + z / s
    PowerSeries::polynomial(vec![Rational::one(), root_scale.recip()])
}

/// Numerator and denominator `(p, q)` of the partial-fraction form, with `p(0) = 1`.
pub fn s_from_poles(data: &SPoleData) -> Result<(PowerSeries, PowerSeries)> {
    data.validate()?;
    let p = data.poles.iter().fold(PowerSeries::one(), |acc, pole| ps_mul(&acc, &linear(&pole.location)));
    let mut q = ps_mul(&PowerSeries::polynomial(vec![data.b0.clone(), data.b1.clone()]), &p);
    for (nu, pole) in data.poles.iter().enumerate() {
        let weight = -&pole.residue / (&pole.location * &pole.location);
        let others = data
            .poles
            .iter()
            .enumerate()
            .filter(|(mu, _)| *mu != nu)
            .fold(PowerSeries::monomial(weight, 1), |acc, (_, o)| ps_mul(&acc, &linear(&o.location)));
        q = ps_add(&q, &others);
    }
    Ok((p, q))
}

/// `re + i im` with `re >= 0`, `im > 0`; contributes the zeros `-(re +- i im)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexPair {
    #[serde(with = "serde_rat")]
    pub re: Rational,
    #[serde(with = "serde_rat")]
    pub im: Rational,
}

/// Product form
/// `C z^j exp(gamma1 z + gamma2 z^2) prod(1 + z/x) prod(1 + z/a)(1 + z/conj a) prod(1 + z/s)
///  / (prod(1 - z^2/y^2) prod(1 - z/b))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroPoleSpec {
    #[serde(with = "serde_rat")]
    pub c: Rational,
    #[serde(with = "serde_rat", default)]
    pub gamma1: Rational,
    #[serde(with = "serde_rat", default)]
    pub gamma2: Rational,
    #[serde(default)]
    pub j: usize,
    /// Zeros at `-x`.
    #[serde(with = "serde_rat_vec", default)]
    pub neg_zeros: Vec<Rational>,
    #[serde(default)]
    pub complex_pairs: Vec<ComplexPair>,
    /// Poles at `+-y`.
    #[serde(with = "serde_rat_vec", default)]
    pub sym_pole_pairs: Vec<Rational>,
    /// Poles at `+b`.
    #[serde(with = "serde_rat_vec", default)]
    pub pos_poles: Vec<Rational>,
    /// Further zeros at `-s`.
    #[serde(with = "serde_rat_vec", default)]
    pub neg_zeros_simple: Vec<Rational>,
}

impl ZeroPoleSpec {
    pub fn constant(c: Rational) -> Self {
        ZeroPoleSpec {
            c,
            gamma1: Rational::zero(),
            gamma2: Rational::zero(),
            j: 0,
            neg_zeros: vec![],
            complex_pairs: vec![],
            sym_pole_pairs: vec![],
            pos_poles: vec![],
            neg_zeros_simple: vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.c.is_positive() {
            return Err(Error::DomainError("C must be positive".into()));
        }
        if self.gamma1.is_negative() || self.gamma2.is_negative() {
            return Err(Error::DomainError("exponential rates must be nonnegative".into()));
        }
        let lists = [&self.neg_zeros, &self.sym_pole_pairs, &self.pos_poles, &self.neg_zeros_simple];
        if lists.iter().any(|l| l.iter().any(|x| !x.is_positive())) {
            return Err(Error::DomainError("zero and pole locations must be positive".into()));
        }
        if self.complex_pairs.iter().any(|a| a.re.is_negative() || !a.im.is_positive()) {
            return Err(Error::DomainError("complex pairs need re >= 0 and im > 0".into()));
        }
        Ok(())
    }

    /// Degree of the numerator after cancellation, including `z^j`.
    pub fn degree(&self) -> usize {
        self.j + self.neg_zeros.len() + 2 * self.complex_pairs.len() + self.neg_zeros_simple.len()
    }
}

/// `exp(h)` for `h(0) = 0`, to `order`.
fn exp_series(h: &PowerSeries, order: usize) -> Result<PowerSeries> {
    let mut e = vec![Rational::one()];
    for k in 1..=order {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let hi = h.coeff(i)?;
            if !hi.is_zero() {
                acc += hi * int(i as i64) * &e[k - i];
            }
        }
        e.push(acc / int(k as i64));
    }
    Ok(PowerSeries::truncated(e))
}

/// Taylor expansion of the product form; exact when no exponential or pole survives.
pub fn fixture_from_form(spec: &ZeroPoleSpec, order: usize) -> Result<PowerSeries> {
    spec.validate()?;
    let mut zeros = spec.neg_zeros.clone();
    let mut simple = spec.neg_zeros_simple.clone();
    let mut den = PowerSeries::one();
    for y in &spec.sym_pole_pairs {
        // a zero at -y cancels the pole at -y, leaving only 1 - z/y
        let cancelled = if let Some(k) = zeros.iter().position(|x| x == y) {
            zeros.remove(k);
            true
        } else if let Some(k) = simple.iter().position(|x| x == y) {
            simple.remove(k);
            true
        } else {
            false
        };
        let factor = if cancelled {
            PowerSeries::polynomial(vec![Rational::one(), -y.recip()])
        } else {
            PowerSeries::polynomial(vec![Rational::one(), Rational::zero(), -(y * y).recip()])
        };
        den = ps_mul(&den, &factor);
    }
    for b in &spec.pos_poles {
        den = ps_mul(&den, &PowerSeries::polynomial(vec![Rational::one(), -b.recip()]));
    }
    let mut num = PowerSeries::constant(spec.c.clone());
    for x in zeros.iter().chain(&simple) {
        num = ps_mul(&num, &linear(x));
    }
    for a in &spec.complex_pairs {
        let norm = &a.re * &a.re + &a.im * &a.im;
        let quad = PowerSeries::polynomial(vec![Rational::one(), int(2) * &a.re / &norm, norm.recip()]);
        num = ps_mul(&num, &quad);
    }
    let exponent = PowerSeries::polynomial(vec![Rational::zero(), spec.gamma1.clone(), spec.gamma2.clone()]);
    if exponent.is_zero() && den.degree() == Some(0) {
        return Ok(num.shift_up(spec.j));
    }
    if order < spec.j {
        return Err(Error::InsufficientOrder { needed: spec.j, known: order });
    }
    let n = order - spec.j;
    let body = ps_mul(&exp_series(&exponent, n)?, &num);
    Ok(ps_div(&body, &den, n)?.shift_up(spec.j))
}

fn small_positive(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(1..=6), rng.gen_range(1..=3))
}

/// Quasi-stable polynomial data: negative real zeros and complex pairs in the
/// closed left half-plane, total degree at most `max_degree`.
pub fn random_quasi_stable(rng: &mut impl Rng, max_degree: usize) -> ZeroPoleSpec {
    let mut spec = ZeroPoleSpec::constant(small_positive(rng));
    let target = rng.gen_range(1..=max_degree.max(1));
    if rng.gen_bool(0.15) && target > 1 {
        spec.j = 1;
    }
    while spec.degree() < target {
        if target - spec.degree() >= 2 && rng.gen_bool(0.5) {
            let re = if rng.gen_bool(0.2) { Rational::zero() } else { small_positive(rng) };
            spec.complex_pairs.push(ComplexPair { re, im: small_positive(rng) });
        } else {
            spec.neg_zeros.push(small_positive(rng));
        }
    }
    spec
}

/// Polynomial data with only negative real zeros.
pub fn random_negative_real(rng: &mut impl Rng, max_degree: usize) -> ZeroPoleSpec {
    let mut spec = ZeroPoleSpec::constant(small_positive(rng));
    for _ in 0..rng.gen_range(1..=max_degree.max(1)) {
        spec.neg_zeros.push(small_positive(rng));
    }
    spec
}

/// Polynomial data with at least one non-real pair of zeros.
pub fn random_with_complex_pair(rng: &mut impl Rng, max_degree: usize) -> ZeroPoleSpec {
    let mut spec = random_negative_real(rng, max_degree.saturating_sub(2).max(1));
    spec.neg_zeros.truncate(max_degree.saturating_sub(2));
    let re = if rng.gen_bool(0.3) { Rational::zero() } else { small_positive(rng) };
    spec.complex_pairs.push(ComplexPair { re, im: small_positive(rng) });
    spec
}

/// Partial-fraction data with `poles` distinct finite poles and, optionally, a pole at infinity.
pub fn random_s_pole_data(rng: &mut impl Rng, poles: usize, at_infinity: bool) -> SPoleData {
    let mut list: Vec<Pole> = Vec::with_capacity(poles);
    while list.len() < poles {
        let location = small_positive(rng);
        if list.iter().all(|p| p.location != location) {
            list.push(Pole { residue: -small_positive(rng), location });
        }
    }
    let b0 = if rng.gen_bool(0.25) { Rational::zero() } else { small_positive(rng) };
    let b1 = if at_infinity { small_positive(rng) } else { Rational::zero() };
    SPoleData { b0, b1, poles: list }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[i64]) -> PowerSeries {
        PowerSeries::from_ints(c)
    }

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn s_profile_examples() {
        let r = is_s_profile(&poly(&[1, 1]), &poly(&[1, 2]), 6).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedYes);
        let values: Vec<Rational> = r.minor_profile.as_ref().unwrap().iter().take(5).map(|e| e.value.clone()).collect();
        assert_eq!(values, vec![int(1), int(1), int(1), int(0), int(0)]);
        assert_eq!(r.evidence, Some(Evidence::MinorProfile { omega: 4, poles: 1 }));

        let r = is_s_profile(&poly(&[1, 1]), &poly(&[1]), 6).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        match r.witness.unwrap() {
            Witness::NegativeMinor { index, value, .. } => {
                assert_eq!((index, value), (MinorIndex::principal(3).unwrap(), int(-1)))
            }
            w => panic!("unexpected {w:?}"),
        }
    }

    #[test]
    fn r_profile_examples() {
        let r = is_r_profile(&PowerSeries::one(), &poly(&[0, 1]), 4).unwrap();
        assert_eq!(r.evidence, Some(Evidence::OddMinorProfile { l: 1 }));
        let r = is_r_profile(&poly(&[1, 1]), &poly(&[1]), 4).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let r = is_r_profile(&poly(&[1, 2]), &poly(&[3, 6]), 4).unwrap();
        assert_eq!(r.evidence, Some(Evidence::OddMinorProfile { l: 0 }));
        let r = is_s_profile(&poly(&[1, 2]), &poly(&[3, 6]), 4).unwrap();
        assert_eq!(r.evidence, Some(Evidence::MinorProfile { omega: 2, poles: 0 }));
    }

    #[test]
    fn pf_examples() {
        let r = is_pf_window(&poly(&[1, -1]), 6, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let exp = fixture_from_form(&ZeroPoleSpec { gamma1: int(1), ..ZeroPoleSpec::constant(int(1)) }, 23).unwrap();
        let r = is_pf_window(&exp, 12, 4).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let r = is_pf_window(&poly(&[1, 3, 2]), 12, 4).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedYes);
        assert!(matches!(is_pf_window(&poly(&[0, 1]), 4, 2), Err(Error::SignError(_))));
    }

    #[test]
    fn quasi_stable_examples() {
        let r = quasi_stable_check(&poly(&[1, 1, 1]), &budget()).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedYes);
        let r = quasi_stable_check(&poly(&[1, -1, 1]), &budget()).unwrap();
        match r.witness.unwrap() {
            Witness::NegativeMinor { index, value, .. } => assert_eq!((index.rows, index.cols, value), (vec![2], vec![2], int(-1))),
            w => panic!("unexpected {w:?}"),
        }
        let f = ps_mul(&poly(&[1, 2, 1]), &poly(&[1, 0, 1]));
        let r = quasi_stable_check(&f, &budget()).unwrap();
        match r.evidence.unwrap() {
            Evidence::Factorization { factorization, .. } => assert_eq!(factorization.g, Some(poly(&[1, 1]))),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn quasi_stable_degenerate_branch() {
        // odd part vanishes, even part 1 + 3w + 2w^2 is a Polya frequency generator
        let r = quasi_stable_check(&poly(&[1, 0, 3, 0, 2]), &budget()).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedYes);
        // odd part starts at z^3: the 2x2 pattern with value -a_i b_0
        let f = poly(&[1, 0, 1, 2]);
        let r = quasi_stable_check(&f, &budget()).unwrap();
        let w = r.witness.unwrap();
        assert!(w.recheck().unwrap());
        match w {
            Witness::NegativeMinor { index, value, .. } => {
                assert_eq!((index.rows, index.cols), (vec![2, 3], vec![2, 3]));
                assert_eq!(value, int(-2));
            }
            w => panic!("unexpected {w:?}"),
        }
        // even part with complex zeros is refuted through its Toeplitz rows
        let r = quasi_stable_check(&poly(&[1, 0, 1, 0, 1]), &budget()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert!(r.witness.unwrap().recheck().unwrap());
    }

    #[test]
    fn neg_zeros_examples() {
        assert_eq!(entire_neg_zeros_check(&poly(&[1, 3, 2]), &budget()).unwrap().verdict, Verdict::CertifiedYes);
        let r = entire_neg_zeros_check(&poly(&[1, 1, 1]), &budget()).unwrap();
        match r.witness.unwrap() {
            Witness::NegativeMinor { index, value, .. } => {
                assert_eq!((index.rows, index.cols, value), (vec![2, 3], vec![2, 3], int(-1)))
            }
            w => panic!("unexpected {w:?}"),
        }
        let r = entire_neg_zeros_check(&poly(&[5]), &budget()).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedYes);
        let r = entire_neg_zeros_check(&poly(&[1, 0, 1]), &budget()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
    }

    #[test]
    fn hurwitz_profile_examples() {
        let r = hurwitz_profile(&poly(&[1, 3, 3, 1]), 8).unwrap();
        assert_eq!(r.evidence, Some(Evidence::HurwitzProfile { omega: 4, zeros: 3 }));
        let r = hurwitz_profile(&poly(&[1, 0, 1]), 8).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let r = hurwitz_profile(&poly(&[1, -1, 1]), 8).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
    }

    #[test]
    fn interlacing_examples() {
        assert_eq!(interlacing_check(&poly(&[1, 1]), &poly(&[1, 2])).unwrap().verdict, Verdict::CertifiedYes);
        let r = interlacing_check(&poly(&[1, 2, 1]), &poly(&[1, 5])).unwrap();
        assert!(matches!(r.witness, Some(Witness::NonSimpleRoot { .. })));
        assert!(matches!(interlacing_check(&poly(&[1, 3, 2]), &poly(&[1, 1])), Err(Error::CoprimeError { degree: 1 })));
    }

    #[test]
    fn s_from_poles_examples() {
        let data = SPoleData { b0: int(1), b1: int(1), poles: vec![Pole { residue: int(-1), location: int(1) }] };
        assert_eq!(s_from_poles(&data).unwrap(), (poly(&[1, 1]), poly(&[1, 3, 1])));
        let data = SPoleData { b0: int(0), b1: int(1), poles: vec![] };
        assert_eq!(s_from_poles(&data).unwrap(), (poly(&[1]), poly(&[0, 1])));
        let bad = SPoleData { b0: int(0), b1: int(1), poles: vec![Pole { residue: int(1), location: int(1) }] };
        assert!(matches!(s_from_poles(&bad), Err(Error::DomainError(_))));
    }

    #[test]
    fn fixture_examples() {
        let spec = ZeroPoleSpec { neg_zeros: vec![int(1), rat(1, 2)], ..ZeroPoleSpec::constant(int(1)) };
        assert_eq!(fixture_from_form(&spec, 0).unwrap(), poly(&[1, 3, 2]));
        assert_eq!(fixture_from_form(&ZeroPoleSpec::constant(int(1)), 3).unwrap(), poly(&[1]));
        let spec = ZeroPoleSpec { gamma1: int(1), ..ZeroPoleSpec::constant(int(1)) };
        let e = fixture_from_form(&spec, 4).unwrap();
        assert_eq!(e.coeffs(), &[int(1), int(1), rat(1, 2), rat(1, 6), rat(1, 24)]);
        // a zero at -1 cancels one half of the symmetric pole pair
        let spec = ZeroPoleSpec { neg_zeros: vec![int(1)], sym_pole_pairs: vec![int(1)], ..ZeroPoleSpec::constant(int(1)) };
        assert_eq!(fixture_from_form(&spec, 5).unwrap(), PowerSeries::truncated(vec![int(1); 6]));
        let spec = ZeroPoleSpec { j: 3, pos_poles: vec![int(1)], ..ZeroPoleSpec::constant(int(1)) };
        assert!(matches!(fixture_from_form(&spec, 2), Err(Error::InsufficientOrder { .. })));
    }

    #[test]
    fn s_fixtures_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let poles = rng.gen_range(1..=3);
            let at_infinity = rng.gen_bool(0.5);
            let data = random_s_pole_data(&mut rng, poles, at_infinity);
            let (p, q) = s_from_poles(&data).unwrap();
            let r = is_s_profile(&p, &q, 4).unwrap();
            match r.evidence.unwrap() {
                Evidence::MinorProfile { poles, .. } => assert_eq!(poles, data.pole_count()),
                e => panic!("unexpected {e:?}"),
            }
            assert_eq!(interlacing_check(&p, &q).unwrap().verdict, Verdict::CertifiedYes);
            let run = routh_run(&p, &q, 64).unwrap();
            assert!(run.is_terminated() && run.betas.iter().all(|b| b.is_positive()));
        }
    }

    #[test]
    fn json_round_trip() {
        let r = quasi_stable_check(&poly(&[1, 1, 1]), &budget()).unwrap();
        let back: ClassReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let spec: ZeroPoleSpec = serde_json::from_str(r#"{"c": "1", "neg_zeros": ["1", "1/2"]}"#).unwrap();
        assert_eq!(spec.neg_zeros, vec![int(1), rat(1, 2)]);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn quasi_stable_fixtures_certify(seed in 0u64..1_000_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = fixture_from_form(&random_quasi_stable(&mut rng, 8), 0).unwrap();
            let r = quasi_stable_check(&f, &budget()).unwrap();
            proptest::prop_assert_eq!(r.verdict, Verdict::CertifiedYes, "{}", f);
        }

        #[test]
        fn neg_zero_fixtures_split_by_root_type(seed in 0u64..1_000_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let good = fixture_from_form(&random_negative_real(&mut rng, 6), 0).unwrap();
            proptest::prop_assert_eq!(entire_neg_zeros_check(&good, &budget()).unwrap().verdict, Verdict::CertifiedYes);
            let bad = fixture_from_form(&random_with_complex_pair(&mut rng, 6), 0).unwrap();
            let r = entire_neg_zeros_check(&bad, &budget()).unwrap();
            proptest::prop_assert_eq!(r.verdict, Verdict::Refuted, "{}", bad);
            proptest::prop_assert!(r.witness.unwrap().recheck().unwrap());
        }
    }
}
