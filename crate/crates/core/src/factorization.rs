//! J-factor factorization of Hurwitz-type matrices and total-nonnegativity certificates.
//!
//! A terminating run of the recurrence with positive betas gives
//! `H(p, q) = J(b0, beta_0) J(1, beta_1) ... J(1, beta_{w-1}) H(1, 1) T(g)`,
//! where `g` is the last series of the chain. Every factor except `T(g)` is
//! totally nonnegative by construction, so certification reduces to `g`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{window, window_norm, MatrixSpec, RhoNorm};
use crate::minors::{tnn_scan, MinorWitness, TnnReport};
use crate::rational::{format_rational, rat, serde_rat, serde_rat_vec, Rational};
use crate::routh::{routh_run, RouthStatus};
use crate::series::PowerSeries;
use crate::sturm::{count_roots_in, is_real_rooted, root_bound, sturm_sequence};

/// Limits shared by the scanning and certification routines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Side of the square window used by scans and reconstruction checks.
    pub window: usize,
    /// Largest minor order scanned.
    pub max_order: usize,
    /// Maximum number of recurrence steps.
    pub max_steps: usize,
    #[serde(with = "serde_rat")]
    pub rho: Rational,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { window: 12, max_order: 4, max_steps: 32, rho: rat(1, 2) }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.max_order == 0 || self.max_steps == 0 {
            return Err(Error::DomainError("budget sizes must be positive".into()));
        }
        if self.max_order > self.window {
            return Err(Error::DomainError(format!(
                "scan order {} exceeds window {}",
                self.max_order, self.window
            )));
        }
        if !self.rho.is_positive() || self.rho > Rational::one() {
            return Err(Error::DomainError("rho must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationResult {
    #[serde(with = "serde_rat")]
    pub b0: Rational,
    #[serde(with = "serde_rat_vec")]
    pub betas: Vec<Rational>,
    /// Terminal series of a terminated run, normalized so `g(0) = 1`.
    pub g: Option<PowerSeries>,
    pub terminated: bool,
    pub status: RouthStatus,
    /// Reconstruction error on the default window when `g` is known.
    pub residual: Option<RhoNorm>,
    /// Both inputs were exact polynomials.
    pub exact: bool,
}

/// `J(b0, beta_0) J(1, beta_1) ... J(1, beta_{n-1}) H(1, 1) T(g)`; a missing `g` means `g = 1`.
pub fn factor_spec(b0: &Rational, betas: &[Rational], g: Option<&PowerSeries>) -> MatrixSpec {
    let mut factors = Vec::with_capacity(betas.len() + 3);
    if betas.is_empty() {
        factors.push(MatrixSpec::j_factor(b0.clone(), Rational::zero()));
    }
    for (j, beta) in betas.iter().enumerate() {
        let c = if j == 0 { b0.clone() } else { Rational::one() };
        factors.push(MatrixSpec::j_factor(c, beta.clone()));
    }
    factors.push(MatrixSpec::HOneOne);
    if let Some(g) = g {
        factors.push(MatrixSpec::toeplitz(g.clone()));
    }
    MatrixSpec::product(factors)
}

/// `||H(p, q) - J(b0, beta_0) ... H(1, 1) T(g)||` on the `n x n` window.
pub fn partial_residual(
    p: &PowerSeries,
    q: &PowerSeries,
    b0: &Rational,
    betas: &[Rational],
    g: Option<&PowerSeries>,
    n: usize,
    rho: &Rational,
) -> Result<RhoNorm> {
    let target = MatrixSpec::hurwitz_pair(p.clone(), q.clone());
    let built = factor_spec(b0, betas, g);
    let diff = window(&target, n, n)?.sub(&window(&built, n, n)?);
    let value = window_norm(&diff, rho)?;
    let beyond = |s: &MatrixSpec| s.max_col_upto_row(n).is_none_or(|c| c > n);
    Ok(RhoNorm {
        rho: rho.clone(),
        value,
        cols_used: n,
        truncated: beyond(&target) || beyond(&built),
        closed_form: None,
    })
}

/// Window residual of a computed factorization; zero for a correct terminated one.
pub fn verify_reconstruction(
    p: &PowerSeries,
    q: &PowerSeries,
    fr: &FactorizationResult,
    n: usize,
    rho: &Rational,
) -> Result<RhoNorm> {
    let g = fr
        .g
        .as_ref()
        .ok_or_else(|| Error::DomainError("factorization did not terminate; g is unknown".into()))?;
    partial_residual(p, q, &fr.b0, &fr.betas, Some(g), n, rho)
}

/// Runs the recurrence and assembles the factorization it describes.
pub fn factorize(p: &PowerSeries, q: &PowerSeries, max_factors: usize) -> Result<FactorizationResult> {
    let run = routh_run(p, q, max_factors.saturating_add(1))?;
    let g = run.terminal().cloned();
    let mut fr = FactorizationResult {
        b0: run.b0.clone(),
        betas: run.betas.clone(),
        terminated: run.is_terminated(),
        status: run.status,
        g,
        residual: None,
        exact: run.exact,
    };
    if let Some(g) = &fr.g {
        let budget = Budget::default();
        fr.residual = partial_residual(p, q, &fr.b0, &fr.betas, Some(g), budget.window, &budget.rho).ok();
    }
    Ok(fr)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TnnCertificate {
    /// `H(p, q)` is totally nonnegative: an exact factorization into totally
    /// nonnegative factors was found.
    CertifiedTnn { factorization: FactorizationResult, toeplitz_scan: TnnReport },
    /// A negative minor of `H(p, q)`.
    Refuted { witness: MinorWitness },
    /// Neither a proof nor a counterexample within the budget.
    Inconclusive { reason: String, factorization: Option<FactorizationResult>, scan: Option<TnnReport> },
}

impl TnnCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, TnnCertificate::CertifiedTnn { .. })
    }

    pub fn witness(&self) -> Option<&MinorWitness> {
        match self {
            TnnCertificate::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Polynomial with all roots real and nonpositive, so its coefficients form a
/// Polya frequency sequence.
pub fn is_negative_real_rooted(g: &PowerSeries) -> Result<bool> {
    if !g.is_polynomial() || g.is_zero() {
        return Ok(false);
    }
    if g.degree().unwrap_or(0) == 0 {
        return Ok(g.constant_term().is_positive());
    }
    if !is_real_rooted(g)? {
        return Ok(false);
    }
    let seq = sturm_sequence(g)?;
    Ok(count_roots_in(&seq, &Rational::zero(), &root_bound(g)) == 0)
}

fn scan_pair(p: &PowerSeries, q: &PowerSeries, budget: &Budget) -> Result<TnnReport> {
    let spec = MatrixSpec::hurwitz_pair(p.clone(), q.clone());
    tnn_scan(&spec, budget.window, budget.window, budget.max_order)
}

/// Decides total nonnegativity of `H(p, q)` by factorization, or refutes it with
/// a negative minor.
pub fn tnn_certificate(p: &PowerSeries, q: &PowerSeries, budget: &Budget) -> Result<TnnCertificate> {
    budget.validate()?;
    let fr = factorize(p, q, budget.max_steps)?;
    let run_witness = match fr.status {
        RouthStatus::NegativeBeta { .. } | RouthStatus::ZeroBetaNonproportional { .. } => {
            routh_run(p, q, budget.max_steps.saturating_add(1))?.witness()
        }
        _ => None,
    };
    if let Some(witness) = run_witness {
        return Ok(TnnCertificate::Refuted { witness });
    }
    let fallback = |reason: String, fr: FactorizationResult| -> Result<TnnCertificate> {
        let scan = scan_pair(p, q, budget)?;
        Ok(match scan.witness.clone() {
            Some(witness) => TnnCertificate::Refuted { witness },
            None => TnnCertificate::Inconclusive { reason, factorization: Some(fr), scan: Some(scan) },
        })
    };
    let g = match (&fr.g, fr.terminated) {
        (Some(g), true) => g.clone(),
        _ => return fallback("recurrence did not terminate within the budget".into(), fr),
    };
    let tg = MatrixSpec::toeplitz(g.clone());
    let toeplitz_scan = tnn_scan(&tg, budget.window, budget.window, budget.max_order)?;
    if toeplitz_scan.is_violated() {
        return fallback(format!("terminal series {g} fails its Toeplitz scan"), fr);
    }
    if !fr.exact {
        return fallback("terminal series is truncated; consistent up to the scanned window".into(), fr);
    }
    if !is_negative_real_rooted(&g)? {
        return fallback(format!("terminal polynomial {g} has roots off the nonpositive real axis"), fr);
    }
    if let Some(r) = &fr.residual {
        if !r.value.is_zero() {
            return Err(Error::DomainError(format!(
                "factorization residual {} is nonzero",
                format_rational(&r.value)
            )));
        }
    }
    Ok(TnnCertificate::CertifiedTnn { factorization: fr, toeplitz_scan })
}
