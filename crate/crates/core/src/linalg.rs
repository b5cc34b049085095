//! Exact linear algebra over the rationals.
//!
//! Matrices are stored as sparse triplet lists. Elimination clears
//! denominators row by row, runs integer Gauss-Jordan with content reduction
//! after every row operation, and only divides by pivots at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A `rows x cols` matrix held as `(row, col, value)` triplets with no zero
/// entries and no duplicate positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Builds a matrix from triplets, summing repeated positions.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut acc: std::collections::BTreeMap<(usize, usize), Rational> =
            std::collections::BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "entry ({r}, {c}) outside {rows}x{cols}"
            );
            *acc.entry((r, c)).or_default() += &v;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Adds `value` at `(r, c)`, merging with any existing entry.
    pub fn add(&mut self, r: usize, c: usize, value: Rational) {
        assert!(
            r < self.rows && c < self.cols,
            "entry ({r}, {c}) outside {}x{}",
            self.rows,
            self.cols
        );
        if value.is_zero() {
            return;
        }
        if let Some(pos) = self
            .entries
            .iter()
            .position(|(er, ec, _)| *er == r && *ec == c)
        {
            let merged = &self.entries[pos].2 + &value;
            if merged.is_zero() {
                self.entries.swap_remove(pos);
            } else {
                self.entries[pos].2 = merged;
            }
        } else {
            self.entries.push((r, c, value));
        }
    }

    /// Sorts triplets row-major; called once construction is complete.
    pub fn finish(mut self) -> Self {
        self.entries.sort_by_key(|a| (a.0, a.1));
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    /// Columns as dense vectors of length `rows`.
    pub fn columns(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.rows]; self.cols];
        for (r, c, v) in &self.entries {
            out[*c][*r] = v.clone();
        }
        out
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (r, c, v) in &self.entries {
            if !x[*c].is_zero() {
                out[*r] += &(v * &x[*c]);
            }
        }
        out
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut dense = vec![vec![Rational::zero(); other.cols]; self.rows];
        for (r, k, a) in &self.entries {
            for (k2, c, b) in &other.entries {
                if k == k2 {
                    dense[*r][*c] += &(a * b);
                }
            }
        }
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (r, row) in dense.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    out.entries.push((r, c, v));
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_dense(), self.cols)
    }
}

/// Which end of a row supplies the pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// First nonzero column.
    Leading,
    /// Last nonzero column.
    Trailing,
}

/// Reduced row echelon form: each row has a unit pivot and is zero in every
/// other row's pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// `v` minus its component along the row space, measured on pivot columns.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o - &(&f * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Coefficients `a` with `v = sum a_i rows[i]`, if `v` lies in the span.
    pub fn express(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

fn to_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for v in row {
        if !v.is_zero() {
            l = l.lcm(v.denom());
        }
    }
    row.iter()
        .map(|v| {
            if v.is_zero() {
                BigInt::zero()
            } else {
                v.numer() * (&l / v.denom())
            }
        })
        .collect()
}

fn remove_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v /= &g;
        }
    }
}

/// Integer Gauss-Jordan on rows whose columns are visited in `order`.
fn gauss_jordan(mut rows: Vec<Vec<BigInt>>, order: &[usize]) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &col in order {
        if r == rows.len() {
            break;
        }
        // smallest nonzero entry in this column keeps growth down
        let pick = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)));
        let Some(pick) = pick else { continue };
        rows.swap(r, pick);
        remove_content(&mut rows[r]);
        let pivot_row = rows[r].clone();
        let p = pivot_row[col].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let g = p.gcd(&row[col]);
            let mp = &p / &g;
            let ma = &row[col] / &g;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &mp - &ma * y;
            }
            remove_content(row);
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Reduced row echelon form of `rows` (each of length `ncols`).
pub fn echelon(rows: &[Vec<Rational>], ncols: usize, order: PivotOrder) -> Echelon {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .inspect(|row| assert_eq!(row.len(), ncols))
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .map(|row| to_integer_row(row))
        .collect();
    let col_order: Vec<usize> = match order {
        PivotOrder::Leading => (0..ncols).collect(),
        PivotOrder::Trailing => (0..ncols).rev().collect(),
    };
    let (int_rows, pivots) = gauss_jordan(int_rows, &col_order);
    let rows: Vec<Vec<Rational>> = int_rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let d = row[p].clone();
            row.into_iter()
                .map(|v| Rational::new(v, d.clone()))
                .collect()
        })
        .collect();
    // present rows sorted by pivot column
    let mut paired: Vec<(usize, Vec<Rational>)> = pivots.into_iter().zip(rows).collect();
    paired.sort_by_key(|(p, _)| *p);
    let (pivots, rows) = paired.into_iter().unzip();
    Echelon {
        ncols,
        rows,
        pivots,
    }
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    echelon(rows, ncols, PivotOrder::Leading).rank()
}

/// Basis of `{ x : m x = 0 }`, one vector per free column, with a unit entry
/// at that column.
pub fn kernel(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let ech = echelon(&m.to_dense(), m.cols(), PivotOrder::Leading);
    let mut is_pivot = vec![false; m.cols()];
    for &p in ech.pivots() {
        is_pivot[p] = true;
    }
    (0..m.cols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Rational::zero(); m.cols()];
            x[f] = Rational::one();
            for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
                x[p] = -&row[f];
            }
            x
        })
        .collect()
}

/// Some `x` with `m x = b`, or `None` when `b` is outside the column space.
pub fn solve(m: &SparseMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows());
    let n = m.cols();
    let mut aug = m.to_dense();
    for (row, v) in aug.iter_mut().zip(b) {
        row.push(v.clone());
    }
    let ech = echelon(&aug, n + 1, PivotOrder::Leading);
    if ech.pivots().contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
        x[p] = row[n].clone();
    }
    Some(x)
}
