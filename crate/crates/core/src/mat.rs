//! Dense square matrices over `Scalar`, with both the ordinary and the
//! Schur (entrywise) algebra, plus the exact linear algebra used everywhere
//! else: inversion, RREF, rank and nullspaces.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Ctx, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum MatError {
    OrderMismatch { left: usize, right: usize },
    ZeroEntry { row: usize, col: usize },
    Singular,
    NotDiagonal,
    NotPermutation,
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::OrderMismatch { left, right } => {
                write!(f, "matrix order mismatch: {} vs {}", left, right)
            }
            MatError::ZeroEntry { row, col } => {
                write!(f, "zero entry at ({}, {}): Schur inverse undefined", row, col)
            }
            MatError::Singular => write!(f, "matrix is singular"),
            MatError::NotDiagonal => write!(f, "matrix is not diagonal"),
            MatError::NotPermutation => write!(f, "matrix is not a permutation matrix"),
        }
    }
}

impl std::error::Error for MatError {}

#[derive(Clone, PartialEq)]
pub struct Mat {
    n: usize,
    ctx: Ctx,
    entries: Vec<Scalar>,
}

impl Mat {
    pub fn from_fn(n: usize, ctx: Ctx, f: impl Fn(usize, usize) -> Scalar) -> Mat {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Mat { n, ctx, entries }
    }

    pub fn from_entries(n: usize, ctx: Ctx, entries: Vec<Scalar>) -> Mat {
        assert_eq!(entries.len(), n * n);
        Mat { n, ctx, entries }
    }

    pub fn zero(n: usize, ctx: Ctx) -> Mat {
        Mat::from_fn(n, ctx, |_, _| Scalar::zero(&ctx))
    }

    pub fn identity(n: usize, ctx: Ctx) -> Mat {
        Mat::from_fn(n, ctx, |i, j| {
            if i == j {
                Scalar::one(&ctx)
            } else {
                Scalar::zero(&ctx)
            }
        })
    }

    pub fn all_ones(n: usize, ctx: Ctx) -> Mat {
        Mat::from_fn(n, ctx, |_, _| Scalar::one(&ctx))
    }

    /// E_{i,j} = e_i e_j^T (zero-based indices).
    pub fn elementary(n: usize, ctx: Ctx, i: usize, j: usize) -> Mat {
        Mat::from_fn(n, ctx, |r, c| {
            if r == i && c == j {
                Scalar::one(&ctx)
            } else {
                Scalar::zero(&ctx)
            }
        })
    }

    pub fn diagonal(ctx: Ctx, d: &[Scalar]) -> Mat {
        let n = d.len();
        Mat::from_fn(n, ctx, |i, j| {
            if i == j {
                d[i].clone()
            } else {
                Scalar::zero(&ctx)
            }
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Row-major vectorization; index of entry (i,j) is i*n+j.
    pub fn vec(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    pub fn from_vec(n: usize, ctx: Ctx, v: Vec<Scalar>) -> Mat {
        Mat::from_entries(n, ctx, v)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, self.ctx, |i, j| self.at(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(&self.ctx);
        for i in 0..self.n {
            acc = &acc + self.at(i, i);
        }
        acc
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::from_fn(self.n, self.ctx, |i, j| self.at(i, j) * s)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.at(i, j).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_permutation(&self) -> bool {
        let one = Scalar::one(&self.ctx);
        for i in 0..self.n {
            let mut ones = 0;
            for j in 0..self.n {
                let e = self.at(i, j);
                if *e == one {
                    ones += 1;
                } else if !e.is_zero() {
                    return false;
                }
            }
            if ones != 1 {
                return false;
            }
        }
        for j in 0..self.n {
            let count = (0..self.n).filter(|&i| !self.at(i, j).is_zero()).count();
            if count != 1 {
                return false;
            }
        }
        true
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.n).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn check_same_order(&self, other: &Mat) -> Result<(), MatError> {
        if self.n != other.n {
            Err(MatError::OrderMismatch { left: self.n, right: other.n })
        } else {
            Ok(())
        }
    }

    pub fn schur(&self, other: &Mat) -> Result<Mat, MatError> {
        self.check_same_order(other)?;
        Ok(Mat::from_fn(self.n, self.ctx, |i, j| self.at(i, j) * other.at(i, j)))
    }

    pub fn schur_inverse(&self) -> Result<Mat, MatError> {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                match self.at(i, j).inv() {
                    Some(v) => entries.push(v),
                    None => return Err(MatError::ZeroEntry { row: i, col: j }),
                }
            }
        }
        Ok(Mat::from_entries(self.n, self.ctx, entries))
    }

    pub fn is_schur_invertible(&self) -> bool {
        self.entries.iter().all(|e| !e.is_zero())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Scalar::zero(&self.ctx);
                for j in 0..self.n {
                    if !v[j].is_zero() {
                        acc = &acc + &(self.at(i, j) * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Gauss-Jordan inverse over the scalar field.
    pub fn inverse(&self) -> Result<Mat, MatError> {
        let n = self.n;
        let mut work: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row: Vec<Scalar> = (0..n).map(|j| self.at(i, j).clone()).collect();
                for j in 0..n {
                    row.push(if i == j {
                        Scalar::one(&self.ctx)
                    } else {
                        Scalar::zero(&self.ctx)
                    });
                }
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !work[r][col].is_zero()).ok_or(MatError::Singular)?;
            work.swap(col, pivot);
            let inv = work[col][col].inv().ok_or(MatError::Singular)?;
            for j in 0..2 * n {
                work[col][j] = &work[col][j] * &inv;
            }
            for r in 0..n {
                if r != col && !work[r][col].is_zero() {
                    let factor = work[r][col].clone();
                    for j in 0..2 * n {
                        let t = &factor * &work[col][j];
                        work[r][j] = &work[r][j] - &t;
                    }
                }
            }
        }
        Ok(Mat::from_fn(n, self.ctx, |i, j| work[i][n + j].clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    /// A A^{(-)T} = nI.
    pub fn is_type_ii(&self) -> bool {
        let Ok(sinv) = self.schur_inverse() else { return false };
        let lhs = self * &sinv.transpose();
        let target = Mat::identity(self.n, self.ctx).scale(&Scalar::from_int(&self.ctx, self.n as i64));
        lhs == target
    }

    /// If M = D^{-1} J D for an invertible diagonal D, returns the diagonal
    /// of D normalized so its first entry is 1.
    pub fn dual_perm_check(&self) -> Option<Vec<Scalar>> {
        if !self.is_schur_invertible() {
            return None;
        }
        let one = Scalar::one(&self.ctx);
        for i in 0..self.n {
            if *self.at(i, i) != one {
                return None;
            }
        }
        // M_{ij} = d_j / d_i forces d_j = M_{0j} once d_0 = 1
        let d: Vec<Scalar> = (0..self.n).map(|j| self.at(0, j).clone()).collect();
        for i in 0..self.n {
            let di = d[i].inv()?;
            for j in 0..self.n {
                if *self.at(i, j) != &d[j] * &di {
                    return None;
                }
            }
        }
        Some(d)
    }

    /// 2n x 2n block matrix [[m11, m12], [m21, m22]].
    pub fn from_blocks(m11: &Mat, m12: &Mat, m21: &Mat, m22: &Mat) -> Mat {
        let n = m11.n;
        assert!(m12.n == n && m21.n == n && m22.n == n);
        Mat::from_fn(2 * n, m11.ctx, |i, j| match (i < n, j < n) {
            (true, true) => m11.at(i, j).clone(),
            (true, false) => m12.at(i, j - n).clone(),
            (false, true) => m21.at(i - n, j).clone(),
            (false, false) => m22.at(i - n, j - n).clone(),
        })
    }

    /// Splits an even-order matrix into its four n x n blocks.
    pub fn blocks(&self) -> (Mat, Mat, Mat, Mat) {
        assert!(self.n % 2 == 0);
        let n = self.n / 2;
        (
            Mat::from_fn(n, self.ctx, |i, j| self.at(i, j).clone()),
            Mat::from_fn(n, self.ctx, |i, j| self.at(i, j + n).clone()),
            Mat::from_fn(n, self.ctx, |i, j| self.at(i + n, j).clone()),
            Mat::from_fn(n, self.ctx, |i, j| self.at(i + n, j + n).clone()),
        )
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "matrix order mismatch in product");
        Mat::from_fn(self.n, self.ctx, |i, j| {
            let mut acc = Scalar::zero(&self.ctx);
            for k in 0..self.n {
                let a = self.at(i, k);
                if !a.is_zero() {
                    acc = &acc + &(a * rhs.at(k, j));
                }
            }
            acc
        })
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n);
        Mat::from_fn(self.n, self.ctx, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n);
        Mat::from_fn(self.n, self.ctx, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_fn(self.n, self.ctx, |i, j| -self.at(i, j))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{}", self.at(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// row echelon machinery over the scalar field
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns the pivot column of each
/// surviving nonzero row. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("pivot must be invertible");
        for j in col..ncols {
            rows[rank][j] = &rows[rank][j] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for j in col..ncols {
                    let t = &factor * &rows[rank][j];
                    rows[r][j] = &rows[r][j] - &t;
                }
                rows[r][col] = Scalar::zero(&rows[r][col].ctx());
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

pub fn rank_of(rows: Vec<Vec<Scalar>>) -> usize {
    let mut rows = rows;
    rref(&mut rows).len()
}

/// Basis of the right nullspace of the matrix given by `rows` (each of
/// length `ncols`), canonically ordered by free column.
pub fn nullspace(rows: Vec<Vec<Scalar>>, ncols: usize, ctx: Ctx) -> Vec<Vec<Scalar>> {
    let mut rows = rows;
    let pivots = rref(&mut rows);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Scalar::zero(&ctx); ncols];
        v[free] = Scalar::one(&ctx);
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&rows[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Expresses `target` in the span of `basis` (vectors of equal length);
/// returns the coefficients if it lies in the span.
pub fn in_span(basis: &[Vec<Scalar>], target: &[Scalar], ctx: Ctx) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return if target.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None };
    }
    let ncols = basis.len();
    // solve basis^T * c = target by eliminating the stacked system
    let mut rows: Vec<Vec<Scalar>> = (0..target.len())
        .map(|i| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    let mut coeffs = vec![Scalar::zero(&ctx); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        if p == ncols {
            return None; // inconsistent
        }
        coeffs[p] = rows[r][ncols].clone();
    }
    // verify (free columns force this to be exact when consistent)
    for (i, t) in target.iter().enumerate() {
        let mut acc = Scalar::zero(&ctx);
        for (b, c) in basis.iter().zip(coeffs.iter()) {
            acc = &acc + &(&b[i] * c);
        }
        if acc != *t {
            return None;
        }
    }
    Some(coeffs)
}
