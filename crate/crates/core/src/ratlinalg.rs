//! Exact rational scalars, vectors and dense matrices.
//!
//! Every derivation in this crate runs through these types; nothing here ever
//! rounds. Elimination is fraction-free (Bareiss) over integer rows obtained by
//! clearing denominators, which keeps intermediate growth polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{BoxError, Result};

/// Exact arbitrary-precision rational. Always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"-7"` or a finite decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || BoxError::Parse(format!("not a rational literal: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, fracpart)) = t.split_once('.') {
        if fracpart.is_empty() || !fracpart.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{whole_digits}{fracpart}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fracpart.len());
        let value = Rational::new(digits, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales `v` to the primitive integer vector on the same ray
/// (gcd of entries 1, sign preserved). Zero vectors are returned unchanged.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Dense row-major rational matrix with immutable shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(BoxError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(BoxError::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(BoxError::Shape("ragged columns".into()));
            }
            for (i, x) in col.iter().enumerate() {
                m.data[i * c + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<Rational>> = idx.iter().map(|&j| self.column(j)).collect();
        let mut m = Self::from_columns(&cols).expect("equal length columns");
        if idx.is_empty() {
            m.rows = self.rows;
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: idx.len(), cols: self.cols, data }
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(BoxError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_f64).collect()).collect()
    }

    /// Rows with denominators cleared, plus the per-row scale used.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut scales = Vec::with_capacity(self.rows);
        let rows = (0..self.rows)
            .map(|i| {
                let den = common_denominator(self.row(i));
                let r = self.row(i).iter().map(|q| (q * &den).to_integer()).collect();
                scales.push(den);
                r
            })
            .collect();
        (rows, scales)
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss(&mut a, self.cols).0
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(BoxError::Shape("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (mut a, scales) = self.integer_rows();
        let (rank, det) = bareiss(&mut a, self.cols);
        if rank < self.rows {
            return Ok(Rational::zero());
        }
        let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(Rational::new(det, scale))
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(BoxError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut inv = Self::identity(n).row_vecs();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(BoxError::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
        Self::from_rows(inv)
    }

    /// Null-space basis in column echelon form: the columns are the
    /// Hermite-normal-form basis of the integer lattice `ker M ∩ Zⁿ`, so each
    /// column is primitive with a positive leading entry and leading row
    /// indices strictly increase from column to column.
    ///
    /// Requires full row rank.
    pub fn kernel_column_echelon(&self) -> Result<RatMatrix> {
        let rank = self.rank();
        if rank < self.rows {
            return Err(BoxError::DegenerateMatrix { rank, expected: self.rows });
        }
        Ok(self.kernel_basis())
    }

    /// As [`kernel_column_echelon`](Self::kernel_column_echelon) but without the
    /// full-rank precondition.
    pub fn kernel_basis(&self) -> RatMatrix {
        let basis = integer_kernel_hnf(self);
        let cols: Vec<Vec<Rational>> = basis
            .into_iter()
            .map(|v| v.into_iter().map(Rational::from_integer).collect())
            .collect();
        if cols.is_empty() {
            return Self::zeros(self.cols, 0);
        }
        Self::from_columns(&cols).expect("kernel columns share a length")
    }
}

/// Fraction-free elimination in place; returns (rank, determinant of the
/// leading square block when the matrix is square and nonsingular).
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if sign < 0 { -prev } else { prev };
    (r, det)
}

/// Integer kernel lattice of `m` (after clearing row denominators), as rows
/// in Hermite normal form.
fn integer_kernel_hnf(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    let (mut a, _) = m.integer_rows();
    let s = m.rows();
    let n = m.cols();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect()).collect();

    let col_axpy = |a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let t = q * &row[src];
            row[dst] -= t;
        }
        for row in u.iter_mut() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    };
    let col_swap = |a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in u.iter_mut() {
            row.swap(x, y);
        }
    };

    let mut piv = 0;
    for i in 0..s {
        loop {
            let nz: Vec<usize> = (piv..n).filter(|&j| !a[i][j].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let j0 = *nz.iter().min_by_key(|&&j| a[i][j].abs()).expect("nonempty");
            for &j in &nz {
                if j != j0 {
                    let q = a[i][j].div_floor(&a[i][j0]);
                    col_axpy(&mut a, &mut u, j, j0, &q);
                }
            }
        }
        if let Some(j) = (piv..n).find(|&j| !a[i][j].is_zero()) {
            col_swap(&mut a, &mut u, j, piv);
            piv += 1;
        }
    }

    let mut basis: Vec<Vec<BigInt>> =
        (piv..n).map(|j| (0..n).map(|r| u[r][j].clone()).collect()).collect();
    hermite_rows(&mut basis, n);
    basis
}

/// Row Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`.
fn hermite_rows(b: &mut [Vec<BigInt>], n: usize) {
    let m = b.len();
    let mut row = 0;
    for c in 0..n {
        if row >= m {
            break;
        }
        loop {
            let nz: Vec<usize> = (row..m).filter(|&i| !b[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let i0 = *nz.iter().min_by_key(|&&i| b[i][c].abs()).expect("nonempty");
            for &i in &nz {
                if i != i0 {
                    let q = b[i][c].div_floor(&b[i0][c]);
                    let src = b[i0].clone();
                    for (x, y) in b[i].iter_mut().zip(&src) {
                        *x -= &q * y;
                    }
                }
            }
        }
        let Some(i) = (row..m).find(|&i| !b[i][c].is_zero()) else {
            continue;
        };
        b.swap(i, row);
        if b[row][c].is_negative() {
            for x in b[row].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot_row = b[row].clone();
        for above in b.iter_mut().take(row) {
            let q = above[c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                for (x, y) in above.iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        row += 1;
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
