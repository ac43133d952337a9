//! Lazy infinite structured matrices and their finite windows.
//!
//! Indices are 1-based throughout, matching the usual matrix notation. A
//! [`MatrixSpec`] never stores the infinite matrix; [`entry`] computes single
//! entries on demand and [`window`] materializes a finite top-left corner.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, pow, serde_rat, serde_rat_grid, serde_rat_opt, Rational};
use crate::series::PowerSeries;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixSpec {
    /// Rows alternate between the coefficients of `q` and `p`, each pair shifted one column right.
    HurwitzPair { p: PowerSeries, q: PowerSeries },
    /// Upper triangular Toeplitz matrix with first row `f_0, f_1, f_2, ...`.
    Toeplitz { f: PowerSeries },
    /// Hurwitz matrix of `f`: rows of even and odd coefficients of `z^{-j} f`.
    HurwitzF { f: PowerSeries },
    /// The Hurwitz-type matrix of the pair `(f', f)`.
    DMatrix { f: PowerSeries },
    /// Sparse bidiagonal factor with `c` on odd diagonal positions, `beta`
    /// beside them and ones two columns right on even rows.
    JFactor {
        #[serde(with = "serde_rat")]
        c: Rational,
        #[serde(with = "serde_rat")]
        beta: Rational,
    },
    /// The Hurwitz-type matrix of the constant pair `(1, 1)`.
    HOneOne,
    /// `diag(1, beta, 1, beta, ...)`.
    DiagTrim {
        #[serde(with = "serde_rat")]
        beta: Rational,
    },
    /// Ordered product of factors, leftmost first. The empty product is the identity.
    Product { factors: Vec<MatrixSpec> },
}

impl MatrixSpec {
    pub fn hurwitz_pair(p: PowerSeries, q: PowerSeries) -> Self {
        MatrixSpec::HurwitzPair { p, q }
    }

    pub fn toeplitz(f: PowerSeries) -> Self {
        MatrixSpec::Toeplitz { f }
    }

    pub fn hurwitz_f(f: PowerSeries) -> Self {
        MatrixSpec::HurwitzF { f }
    }

    pub fn d_matrix(f: PowerSeries) -> Self {
        MatrixSpec::DMatrix { f }
    }

    pub fn j_factor(c: Rational, beta: Rational) -> Self {
        MatrixSpec::JFactor { c, beta }
    }

    pub fn diag_trim(beta: Rational) -> Self {
        MatrixSpec::DiagTrim { beta }
    }

    pub fn product(factors: Vec<MatrixSpec>) -> Self {
        MatrixSpec::Product { factors }
    }

    /// True when every entry is exactly determined (no truncated series involved).
    pub fn is_exact(&self) -> bool {
        match self {
            MatrixSpec::HurwitzPair { p, q } => p.is_polynomial() && q.is_polynomial(),
            MatrixSpec::Toeplitz { f } | MatrixSpec::HurwitzF { f } | MatrixSpec::DMatrix { f } => {
                f.is_polynomial()
            }
            MatrixSpec::Product { factors } => factors.iter().all(MatrixSpec::is_exact),
            _ => true,
        }
    }

    /// Every row index beyond the returned bound is zero in columns `1..=col`.
    pub fn max_row_upto_col(&self, col: usize) -> usize {
        match self {
            MatrixSpec::HurwitzPair { .. }
            | MatrixSpec::HurwitzF { .. }
            | MatrixSpec::DMatrix { .. }
            | MatrixSpec::HOneOne => 2 * col - 1,
            MatrixSpec::Toeplitz { .. } | MatrixSpec::JFactor { .. } | MatrixSpec::DiagTrim { .. } => col,
            MatrixSpec::Product { factors } => factors
                .iter()
                .rev()
                .fold(col, |c, f| f.max_row_upto_col(c).max(1)),
        }
    }

    /// Every column beyond the returned bound is zero in rows `1..=row`;
    /// `None` when some row has unboundedly many (or unknown) nonzeros.
    pub fn max_col_upto_row(&self, row: usize) -> Option<usize> {
        let half = row / 2 + 1;
        match self {
            MatrixSpec::HurwitzPair { p, q } => Some(half + p.degree_bound()?.max(q.degree_bound()?)),
            MatrixSpec::HurwitzF { f } => {
                let d = f.degree_bound()? - f.valuation().unwrap_or(0);
                Some(half + d / 2)
            }
            MatrixSpec::DMatrix { f } => Some(half + f.degree_bound()?),
            MatrixSpec::Toeplitz { f } => Some(row + f.degree_bound()?),
            MatrixSpec::JFactor { .. } => Some(row + 1),
            MatrixSpec::HOneOne => Some(half),
            MatrixSpec::DiagTrim { .. } => Some(row),
            MatrixSpec::Product { factors } => factors
                .iter()
                .try_fold(row, |r, f| f.max_col_upto_row(r).map(|c| c.max(1))),
        }
    }
}

impl PowerSeries {
    /// Degree of an exact polynomial (zero for the zero polynomial); `None` when truncated.
    fn degree_bound(&self) -> Option<usize> {
        if self.is_polynomial() {
            Some(self.degree().unwrap_or(0))
        } else {
            None
        }
    }
}

/// Entry of the Hurwitz-type layout: row 1 and odd rows carry `b`, even rows carry `a`.
fn hurwitz_entry(
    a: impl Fn(usize) -> Result<Rational>,
    b: impl Fn(usize) -> Result<Rational>,
    i: usize,
    j: usize,
) -> Result<Rational> {
    let m = i / 2;
    if j <= m {
        return Ok(Rational::zero());
    }
    let k = j - m - 1;
    if i % 2 == 0 {
        a(k)
    } else {
        b(k)
    }
}

pub fn entry(spec: &MatrixSpec, i: usize, j: usize) -> Result<Rational> {
    if i == 0 || j == 0 {
        return Err(Error::IndexError(format!("matrix indices start at 1, got ({i}, {j})")));
    }
    match spec {
        MatrixSpec::HurwitzPair { p, q } => hurwitz_entry(|k| p.coeff(k), |k| q.coeff(k), i, j),
        MatrixSpec::Toeplitz { f } => {
            if j < i {
                Ok(Rational::zero())
            } else {
                f.coeff(j - i)
            }
        }
        MatrixSpec::HurwitzF { f } => {
            let s = f.valuation().unwrap_or(0);
            hurwitz_entry(|k| f.coeff(s + 2 * k + 1), |k| f.coeff(s + 2 * k), i, j)
        }
        MatrixSpec::DMatrix { f } => hurwitz_entry(
            |k| Ok(f.coeff(k + 1)? * int(k as i64 + 1)),
            |k| f.coeff(k),
            i,
            j,
        ),
        MatrixSpec::JFactor { c, beta } => Ok(if i % 2 == 1 {
            if j == i {
                c.clone()
            } else if j == i + 1 {
                beta.clone()
            } else {
                Rational::zero()
            }
        } else if j == i + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }),
        MatrixSpec::HOneOne => Ok(if j == i / 2 + 1 { Rational::one() } else { Rational::zero() }),
        MatrixSpec::DiagTrim { beta } => Ok(match (i == j, i % 2) {
            (false, _) => Rational::zero(),
            (true, 1) => Rational::one(),
            (true, _) => beta.clone(),
        }),
        MatrixSpec::Product { .. } => {
            let w = window(spec, i, j)?;
            Ok(w.entries[i - 1][j - 1].clone())
        }
    }
}

/// Dense top-left corner of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub n_rows: usize,
    pub n_cols: usize,
    #[serde(with = "serde_rat_grid")]
    pub entries: Vec<Vec<Rational>>,
}

impl Window {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Window { n_rows, n_cols, entries: vec![vec![Rational::zero(); n_cols]; n_rows] }
    }

    pub fn identity(n_rows: usize, n_cols: usize) -> Self {
        let mut w = Self::zeros(n_rows, n_cols);
        for k in 0..n_rows.min(n_cols) {
            w.entries[k][k] = Rational::one();
        }
        w
    }

    /// Entry at 1-based position `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i - 1][j - 1]
    }

    pub fn mul(&self, rhs: &Window) -> Window {
        assert_eq!(self.n_cols, rhs.n_rows, "inner dimensions differ");
        let entries = self
            .entries
            .par_iter()
            .map(|row| {
                let mut out = vec![Rational::zero(); rhs.n_cols];
                for (k, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (o, b) in out.iter_mut().zip(&rhs.entries[k]) {
                        if !b.is_zero() {
                            *o += a * b;
                        }
                    }
                }
                out
            })
            .collect();
        Window { n_rows: self.n_rows, n_cols: rhs.n_cols, entries }
    }

    pub fn sub(&self, rhs: &Window) -> Window {
        assert_eq!((self.n_rows, self.n_cols), (rhs.n_rows, rhs.n_cols), "shapes differ");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Window { n_rows: self.n_rows, n_cols: self.n_cols, entries }
    }

    pub fn scale(&self, c: &Rational) -> Window {
        let entries = self.entries.iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        Window { n_rows: self.n_rows, n_cols: self.n_cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }
}

fn direct_window(spec: &MatrixSpec, n_rows: usize, n_cols: usize) -> Result<Window> {
    let entries = (1..=n_rows)
        .into_par_iter()
        .map(|i| (1..=n_cols).map(|j| entry(spec, i, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Window { n_rows, n_cols, entries })
}

fn product_window(factors: &[MatrixSpec], n_rows: usize, n_cols: usize, pad: usize) -> Result<Window> {
    match factors {
        [] => Ok(Window::identity(n_rows, n_cols)),
        [only] => window_padded(only, n_rows, n_cols, pad),
        [first, rest @ ..] => {
            let rest_spec = MatrixSpec::Product { factors: rest.to_vec() };
            let mut inner = rest_spec.max_row_upto_col(n_cols);
            if let Some(c) = first.max_col_upto_row(n_rows) {
                inner = inner.min(c);
            }
            let inner = inner.max(1) + pad;
            let left = window_padded(first, n_rows, inner, pad)?;
            let right = product_window(rest, inner, n_cols, pad)?;
            Ok(left.mul(&right))
        }
    }
}

/// The `n_rows x n_cols` top-left corner.
///
/// Products are evaluated exactly: the inner dimension of each multiplication
/// is cut where one side is provably zero.
pub fn window(spec: &MatrixSpec, n_rows: usize, n_cols: usize) -> Result<Window> {
    window_padded(spec, n_rows, n_cols, 0)
}

/// As [`window`], with `pad` extra inner rows and columns in every product step.
/// The result must not depend on `pad`.
pub fn window_padded(spec: &MatrixSpec, n_rows: usize, n_cols: usize, pad: usize) -> Result<Window> {
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::IndexError("window dimensions must be positive".into()));
    }
    match spec {
        MatrixSpec::Product { factors } => product_window(factors, n_rows, n_cols, pad),
        _ => direct_window(spec, n_rows, n_cols),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoNorm {
    #[serde(with = "serde_rat")]
    pub rho: Rational,
    #[serde(with = "serde_rat")]
    pub value: Rational,
    pub cols_used: usize,
    /// Some scanned row has nonzero or unknown entries beyond `cols_used`.
    pub truncated: bool,
    /// Exact norm of the infinite matrix when it is known in closed form.
    #[serde(with = "serde_rat_opt", default)]
    pub closed_form: Option<Rational>,
}

fn check_rho(rho: &Rational) -> Result<()> {
    if !rho.is_positive() || *rho > Rational::one() {
        return Err(Error::DomainError("rho must lie in (0, 1]".into()));
    }
    Ok(())
}

/// Maximum weighted absolute row sum of a window.
pub fn window_norm(w: &Window, rho: &Rational) -> Result<Rational> {
    check_rho(rho)?;
    let weights: Vec<Rational> = (0..w.n_cols).map(|k| pow(rho, k)).collect();
    Ok(w.entries
        .iter()
        .map(|row| row.iter().zip(&weights).map(|(a, r)| a.abs() * r).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero))
}

pub fn norm_rho(spec: &MatrixSpec, rho: &Rational, n_rows: usize, n_cols: usize) -> Result<RhoNorm> {
    check_rho(rho)?;
    let w = window(spec, n_rows, n_cols)?;
    let value = window_norm(&w, rho)?;
    let truncated = spec.max_col_upto_row(n_rows).is_none_or(|c| c > n_cols);
    let closed_form = match spec {
        MatrixSpec::Toeplitz { f } if f.is_polynomial() && f.coeffs().iter().all(|c| !c.is_negative()) => {
            Some(f.eval(rho))
        }
        _ => None,
    };
    Ok(RhoNorm { rho: rho.clone(), value, cols_used: n_cols, truncated, closed_form })
}
