//! Dense row-major matrices over [`Scalar`], LU with partial pivoting,
//! explicit inverse, infinity-norm condition number and binary powering.

use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative pivot threshold: a pivot below `PIVOT_TOLERANCE * ‖A‖∞` is treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Dense matrix with row-major storage. Entries are finite whenever a
/// constructor or arithmetic operation returns `Ok`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Scalar = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

fn all_finite<T: Scalar>(data: &[T]) -> bool {
    data.iter().all(|x| x.is_finite())
}

impl<T: Scalar> Matrix<T> {
    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::DimensionMismatch {
                op: "from_diagonal",
                left: (0, 0),
                right: (1, 1),
            });
        }
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m.checked("from_diagonal")
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_row_major",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Self { rows, cols, data }.checked("from_row_major")
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                left: (rows.len(), cols),
                right: (1, bad.len()),
            });
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m.checked("from_fn")
    }

    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    fn checked(self, op: &'static str) -> Result<Self> {
        if all_finite(&self.data) {
            Ok(self)
        } else {
            Err(Error::NonFiniteMatrix { op })
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Self::from_parts_unchecked(self.rows, self.cols, data).checked("add")
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Self::from_parts_unchecked(self.rows, self.cols, data).checked("sub")
    }

    pub fn scale(&self, c: T) -> Result<Self> {
        let data = self.data.iter().map(|&a| c * a).collect();
        Self::from_parts_unchecked(self.rows, self.cols, data).checked("scale")
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        T::gemm_acc(
            self.rows,
            self.cols,
            other.cols,
            &self.data,
            &other.data,
            &mut out.data,
        );
        out.checked("matmul")
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Row-vector product `xᵀ · self`.
    pub fn vec_mul(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                op: "vec_mul",
                left: (1, x.len()),
                right: self.shape(),
            });
        }
        let mut out = vec![T::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += xi * a;
            }
        }
        Ok(out)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other, "max_abs_diff")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max))
    }

    fn require_square(&self, op: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: (self.cols, self.rows),
            })
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

/// `P·A = L·U` with unit-lower `L` and upper `U` packed into one matrix.
///
/// Row `i` of `P·A` is row `perm[i]` of `A`.
#[derive(Clone, Debug)]
pub struct LuFactorization<T: Scalar = f64> {
    factors: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactorization<T> {
    pub fn factors(&self) -> &Matrix<T> {
        &self.factors
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn dim(&self) -> usize {
        self.factors.rows
    }

    /// Rebuilds `A = Pᵀ L U`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let n = self.dim();
        let lu = &self.factors;
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..=i.min(j) {
                    let l = if k == i { T::one() } else { lu[(i, k)] };
                    acc += l * lu[(k, j)];
                }
                a.data[self.perm[i] * n + j] = acc;
            }
        }
        a
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                op: "lu_solve",
                left: (n, n),
                right: (b.len(), 1),
            });
        }
        let lu = &self.factors;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = lu.row(i);
            let acc: T = row[..i].iter().zip(&x[..i]).map(|(&l, &y)| l * y).sum();
            x[i] -= acc;
        }
        for i in (0..n).rev() {
            let row = lu.row(i);
            let acc: T = row[i + 1..].iter().zip(&x[i + 1..]).map(|(&u, &y)| u * y).sum();
            x[i] = (x[i] - acc) / row[i];
        }
        Ok(x)
    }

    /// Solves `A X = B` for every column of `B` at once.
    pub fn solve_matrix(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.dim();
        if b.rows != n {
            return Err(Error::DimensionMismatch {
                op: "lu_solve_matrix",
                left: (n, n),
                right: b.shape(),
            });
        }
        let w = b.cols;
        let lu = &self.factors;
        let mut x = Vec::with_capacity(n * w);
        for &p in &self.perm {
            x.extend_from_slice(b.row(p));
        }
        for i in 0..n {
            let (done, rest) = x.split_at_mut(i * w);
            let xi = &mut rest[..w];
            for (k, &l) in lu.row(i)[..i].iter().enumerate() {
                if l == T::zero() {
                    continue;
                }
                for (a, &b) in xi.iter_mut().zip(&done[k * w..(k + 1) * w]) {
                    *a -= l * b;
                }
            }
        }
        for i in (0..n).rev() {
            let (head, tail) = x.split_at_mut((i + 1) * w);
            let xi = &mut head[i * w..];
            for (k, &u) in lu.row(i)[i + 1..].iter().enumerate() {
                if u == T::zero() {
                    continue;
                }
                for (a, &b) in xi.iter_mut().zip(&tail[k * w..(k + 1) * w]) {
                    *a -= u * b;
                }
            }
            let d = lu.row(i)[i];
            for a in xi.iter_mut() {
                *a = *a / d;
            }
        }
        Matrix::from_parts_unchecked(n, w, x).checked("lu_solve_matrix")
    }

    pub fn inverse(&self) -> Result<Matrix<T>> {
        self.solve_matrix(&Matrix::identity(self.dim()))
    }
}

/// LU factorization with partial (row) pivoting.
pub fn lu_factor<T: Scalar>(a: &Matrix<T>) -> Result<LuFactorization<T>> {
    a.require_square("lu_factor")?;
    let n = a.rows;
    let threshold = PIVOT_TOLERANCE * a.norm_inf();
    let mut lu = a.data.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (pivot_row, magnitude) = (k..n)
            .map(|i| (i, lu[i * n + k].modulus()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if magnitude <= threshold {
            return Err(Error::SingularMatrix {
                index: k,
                magnitude,
                threshold,
            });
        }
        if pivot_row != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot_row * n + j);
            }
            perm.swap(k, pivot_row);
        }
        let (upper, lower) = lu.split_at_mut((k + 1) * n);
        let pivot_tail = &upper[k * n + k..];
        let pivot = pivot_tail[0];
        for row in lower.chunks_exact_mut(n) {
            let l = row[k] / pivot;
            row[k] = l;
            if l == T::zero() {
                continue;
            }
            for (a, &u) in row[k + 1..].iter_mut().zip(&pivot_tail[1..]) {
                *a -= l * u;
            }
        }
    }

    Ok(LuFactorization {
        factors: Matrix::from_parts_unchecked(n, n, lu).checked("lu_factor")?,
        perm,
    })
}

pub fn lu_solve<T: Scalar>(factorization: &LuFactorization<T>, b: &[T]) -> Result<Vec<T>> {
    factorization.solve(b)
}

pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    lu_factor(a)?.inverse()
}

/// `‖A‖∞ ‖A⁻¹‖∞` from the explicit inverse.
pub fn cond_inf<T: Scalar>(a: &Matrix<T>) -> Result<f64> {
    Ok(a.norm_inf() * inverse(a)?.norm_inf())
}

pub fn norm_inf<T: Scalar>(a: &Matrix<T>) -> f64 {
    a.norm_inf()
}

/// `a^p` by repeated squaring; `a^0 = I`.
pub fn mat_power<T: Scalar>(a: &Matrix<T>, p: u64) -> Result<Matrix<T>> {
    a.require_square("mat_power")?;
    let mut result: Option<Matrix<T>> = None;
    let mut base = a.clone();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.matmul(&base)?,
            });
        }
        e >>= 1;
        if e > 0 {
            base = base.matmul(&base)?;
        }
    }
    Ok(result.unwrap_or_else(|| Matrix::identity(a.rows)))
}
