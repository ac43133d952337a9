//! Exact minors and windowed total-nonnegativity scans.

use std::cmp::Ordering;
use std::ops::IndexMut;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{window, MatrixSpec, Window};
use crate::rational::{serde_rat, Rational};

/// Row and column selection of a square minor, 1-based and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        let idx = MinorIndex { rows, cols };
        idx.validate()?;
        Ok(idx)
    }

    /// Rows and columns `2..=k`.
    pub fn principal(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::IndexError(format!("principal minor order {k} below 2")));
        }
        Self::new((2..=k).collect(), (2..=k).collect())
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() || self.rows.len() != self.cols.len() {
            return Err(Error::IndexError(format!(
                "{} rows and {} columns do not form a nonempty square minor",
                self.rows.len(),
                self.cols.len()
            )));
        }
        for (name, v) in [("row", &self.rows), ("column", &self.cols)] {
            if v.contains(&0) {
                return Err(Error::IndexError(format!("{name} indices start at 1")));
            }
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::IndexError(format!("{name} indices {v:?} are not strictly increasing")));
            }
        }
        Ok(())
    }
}

/// Bareiss elimination with row swaps on machine integers; `None` on overflow.
fn bareiss_i128<R: IndexMut<usize, Output = i128>>(m: &mut [R]) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return Some(0);
            };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, s);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of an integer matrix, trying machine arithmetic first.
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let small: Option<Vec<Vec<i128>>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect())
        .collect();
    if let Some(d) = small.and_then(|mut m: Vec<Vec<i128>>| bareiss_i128(&mut m)) {
        return BigInt::from(d);
    }
    bareiss_big(m.to_vec())
}

/// Least common multiple of the denominators in a row.
fn row_denominator(row: &[Rational]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Exact determinant of a square rational matrix.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let ints: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let d = row_denominator(row);
            let r = row.iter().map(|x| (x * &d).to_integer()).collect();
            scale *= d;
            r
        })
        .collect();
    Rational::new(det_int(&ints), scale)
}

fn submatrix(w: &Window, idx: &MinorIndex) -> Vec<Vec<Rational>> {
    idx.rows
        .iter()
        .map(|&i| idx.cols.iter().map(|&j| w.at(i, j).clone()).collect())
        .collect()
}

/// Minor of an already materialized window.
pub fn window_minor(w: &Window, idx: &MinorIndex) -> Result<Rational> {
    idx.validate()?;
    let (r, c) = (*idx.rows.last().unwrap(), *idx.cols.last().unwrap());
    if r > w.n_rows || c > w.n_cols {
        return Err(Error::IndexError(format!("minor reaches ({r}, {c}) outside a {}x{} window", w.n_rows, w.n_cols)));
    }
    Ok(det(&submatrix(w, idx)))
}

pub fn minor(spec: &MatrixSpec, idx: &MinorIndex) -> Result<Rational> {
    idx.validate()?;
    let w = window(spec, *idx.rows.last().unwrap(), *idx.cols.last().unwrap())?;
    window_minor(&w, idx)
}

/// The minor on rows and columns `2..=k`.
pub fn principal_minor_k(spec: &MatrixSpec, k: usize) -> Result<Rational> {
    minor(spec, &MinorIndex::principal(k)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TnnVerdict {
    AllNonneg,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub index: MinorIndex,
    #[serde(with = "serde_rat")]
    pub value: Rational,
}

/// Outcome of a windowed scan. A violation refutes total nonnegativity of the
/// infinite matrix; `all_nonneg` only covers the scanned minors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TnnReport {
    pub verdict: TnnVerdict,
    pub witness: Option<MinorWitness>,
    pub window: (usize, usize),
    pub max_order: usize,
}

impl TnnReport {
    pub fn is_violated(&self) -> bool {
        self.verdict == TnnVerdict::Violated
    }
}

/// Strictly increasing `k`-subsets of `1..=n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&p| cur[p] < n - k + p + 1) else {
            return out;
        };
        cur[pos] += 1;
        for q in pos + 1..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

/// Largest minor order evaluated in a stack buffer.
const SMALL: usize = 8;

/// Window rows scaled to integers by positive factors; minor signs are unchanged.
struct IntegerGrid {
    big: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i128>>>,
    /// Nonzero pattern of each row and column as bitmasks; empty for windows wider than 128.
    row_support: Vec<u128>,
    col_support: Vec<u128>,
}

impl IntegerGrid {
    fn new(w: &Window) -> Self {
        let big: Vec<Vec<BigInt>> = w
            .entries
            .iter()
            .map(|row| {
                let d = row_denominator(row);
                row.iter().map(|x| (x * &d).to_integer()).collect()
            })
            .collect();
        let small = big
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect())
            .collect();
        let (n_rows, n_cols) = (big.len(), big.first().map_or(0, Vec::len));
        let (mut row_support, mut col_support) = (vec![], vec![]);
        if n_rows <= 128 && n_cols <= 128 {
            row_support = vec![0u128; n_rows];
            col_support = vec![0u128; n_cols];
            for (i, row) in big.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        row_support[i] |= 1 << j;
                        col_support[j] |= 1 << i;
                    }
                }
            }
        }
        IntegerGrid { big, small, row_support, col_support }
    }

    /// Some chosen row or column vanishes on the chosen columns or rows.
    fn has_zero_line(&self, rows: &[usize], cols: &[usize]) -> bool {
        if self.row_support.is_empty() {
            return false;
        }
        let mask = |set: &[usize]| set.iter().fold(0u128, |m, &x| m | 1 << (x - 1));
        let (row_mask, col_mask) = (mask(rows), mask(cols));
        rows.iter().any(|&i| self.row_support[i - 1] & col_mask == 0)
            || cols.iter().any(|&j| self.col_support[j - 1] & row_mask == 0)
    }

    fn sign(&self, rows: &[usize], cols: &[usize]) -> Ordering {
        if self.has_zero_line(rows, cols) {
            return Ordering::Equal;
        }
        if let Some(s) = self.small.as_ref().filter(|_| rows.len() <= SMALL) {
            let mut buf = [[0i128; SMALL]; SMALL];
            for (r, &i) in rows.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    buf[r][c] = s[i - 1][j - 1];
                }
            }
            if let Some(d) = bareiss_i128(&mut buf[..rows.len()]) {
                return d.cmp(&0);
            }
        }
        let m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.big[i - 1][j - 1].clone()).collect())
            .collect();
        bareiss_big(m).cmp(&BigInt::zero())
    }
}

/// First negative minor of `w` among the given candidates, in candidate order.
fn first_negative(w: &Window, candidates: &[MinorIndex]) -> Option<MinorWitness> {
    let grid = IntegerGrid::new(w);
    let idx = candidates
        .par_iter()
        .find_first(|idx| grid.sign(&idx.rows, &idx.cols) == Ordering::Less)?
        .clone();
    let value = det(&submatrix(w, &idx));
    debug_assert!(value.is_negative());
    Some(MinorWitness { index: idx, value })
}

/// Scans every minor of order at most `max_order` in a window.
pub fn tnn_scan_window(w: &Window, max_order: usize) -> Result<TnnReport> {
    if max_order == 0 || max_order > w.n_rows.min(w.n_cols) {
        return Err(Error::DomainError(format!(
            "scan order {max_order} must lie in 1..={}",
            w.n_rows.min(w.n_cols)
        )));
    }
    let grid = IntegerGrid::new(w);
    for k in 1..=max_order {
        let row_sets = combinations(w.n_rows, k);
        let col_sets = combinations(w.n_cols, k);
        let hit = row_sets.par_iter().find_map_first(|rows| {
            col_sets
                .iter()
                .find(|cols| grid.sign(rows, cols) == Ordering::Less)
                .map(|cols| MinorIndex { rows: rows.clone(), cols: cols.clone() })
        });
        if let Some(index) = hit {
            let value = det(&submatrix(w, &index));
            return Ok(TnnReport {
                verdict: TnnVerdict::Violated,
                witness: Some(MinorWitness { index, value }),
                window: (w.n_rows, w.n_cols),
                max_order,
            });
        }
    }
    Ok(TnnReport { verdict: TnnVerdict::AllNonneg, witness: None, window: (w.n_rows, w.n_cols), max_order })
}

/// Scans every minor of order at most `max_order` inside the `n_rows x n_cols` corner.
/// The first violation in the order (size, rows, columns) is reported.
pub fn tnn_scan(spec: &MatrixSpec, n_rows: usize, n_cols: usize, max_order: usize) -> Result<TnnReport> {
    let w = window(spec, n_rows, n_cols)?;
    tnn_scan_window(&w, max_order)
}

/// Minors on rows `2..=k` and columns `2..=k-1` followed by `i`.
pub fn part_pos_index(k: usize, i: usize) -> Result<MinorIndex> {
    let mut cols: Vec<usize> = (2..k).collect();
    cols.push(i);
    MinorIndex::new((2..=k).collect(), cols)
}

/// Scans the partial-positivity pattern for `2 <= k <= k_max`, `k <= i <= i_max`.
pub fn part_pos_scan(spec: &MatrixSpec, k_max: usize, i_max: usize) -> Result<TnnReport> {
    if k_max < 2 || i_max < k_max {
        return Err(Error::DomainError(format!("need 2 <= k_max <= i_max, got k_max={k_max}, i_max={i_max}")));
    }
    let candidates = (2..=k_max)
        .flat_map(|k| (k..=i_max).map(move |i| part_pos_index(k, i)))
        .collect::<Result<Vec<_>>>()?;
    let w = window(spec, k_max, i_max)?;
    let witness = first_negative(&w, &candidates);
    Ok(TnnReport {
        verdict: if witness.is_some() { TnnVerdict::Violated } else { TnnVerdict::AllNonneg },
        witness,
        window: (k_max, i_max),
        max_order: k_max - 1,
    })
}
