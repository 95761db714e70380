//! Bernstein basis on equispaced nodes and the generalized Bernstein (GB)
//! operators `B_{m,ℓ} = I − (I − B_m)^ℓ`.
//!
//! A GB operator is represented by two matrices of order `m + 1`: the
//! collocation matrix `A` with `A[i][j] = p_{m,j}(t_i)` and the basis-change
//! matrix `C = I + (I − A) + … + (I − A)^{ℓ−1}`, so that the fundamental GB
//! polynomials are `p^{(ℓ)}(x)ᵀ = p(x)ᵀ C`. `C` is always built from the
//! geometric sum; `A` is far too ill-conditioned to invert for large `m`.

use crate::error::{check_unit_interval, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Exponents below this underflow to zero in `f64::exp`.
const EXP_UNDERFLOW: f64 = -745.2;

/// Bernstein basis `p_{m,k}(x) = C(m,k) x^k (1−x)^{m−k}` on nodes `t_k = k/m`.
///
/// Evaluation runs in the log domain so it stays finite and accurate up to
/// `m = 1024` and beyond; entries that underflow are flushed to zero.
#[derive(Clone, Debug)]
pub struct BernsteinBasis {
    degree: usize,
    log_binomial: Vec<f64>,
}

impl BernsteinBasis {
    pub fn new(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DomainViolation {
                what: "degree m",
                value: 0.0,
                domain: "m >= 1",
            });
        }
        Ok(Self {
            degree,
            log_binomial: log_binomials(degree),
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        k as f64 / self.degree as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.degree).map(|k| self.node(k)).collect()
    }

    pub fn eval(&self, x: f64) -> Result<Vec<f64>> {
        check_unit_interval("x", x)?;
        let mut out = vec![0.0; self.degree + 1];
        self.eval_into(x, &mut out);
        Ok(out)
    }

    /// Writes the `m + 1` basis values at `x ∈ [0, 1]` into `out`.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let m = self.degree;
        debug_assert!((0.0..=1.0).contains(&x));
        debug_assert_eq!(out.len(), m + 1);
        if x == 0.0 || x == 1.0 {
            out.fill(0.0);
            out[if x == 0.0 { 0 } else { m }] = 1.0;
            return;
        }
        let ln_x = x.ln();
        let ln_1mx = (-x).ln_1p();
        for (k, (o, &lb)) in out.iter_mut().zip(&self.log_binomial).enumerate() {
            let e = lb + k as f64 * ln_x + (m - k) as f64 * ln_1mx;
            *o = if e < EXP_UNDERFLOW { 0.0 } else { e.exp() };
        }
    }
}

/// `ln C(m, k)` for `k = 0..=m`, accumulated from both ends with
/// compensated summation.
fn log_binomials(m: usize) -> Vec<f64> {
    let mut lb = vec![0.0; m + 1];
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 0..m / 2 {
        let term = ((m - k) as f64 / (k + 1) as f64).ln();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        lb[k + 1] = sum + comp;
    }
    for k in 0..=m / 2 {
        lb[m - k] = lb[k];
    }
    lb
}

pub fn bernstein_basis_at(m: usize, x: f64) -> Result<Vec<f64>> {
    BernsteinBasis::new(m)?.eval(x)
}

fn collocation_from(basis: &BernsteinBasis) -> Matrix {
    let n = basis.degree + 1;
    let mut data = vec![0.0; n * n];
    for (i, row) in data.chunks_exact_mut(n).enumerate() {
        basis.eval_into(basis.node(i), row);
    }
    Matrix::from_parts_unchecked(n, n, data)
}

/// `A[i][j] = p_{m,j}(t_i)`.
pub fn collocation_matrix(m: usize) -> Result<Matrix> {
    Ok(collocation_from(&BernsteinBasis::new(m)?))
}

/// `Σ_{i<ℓ} P^i` by binary decomposition of `ℓ`:
/// `S_{2k} = S_k + P^k S_k`, `S_{2k+1} = I + P S_{2k}`.
/// For `ℓ = 2^q` this is exactly the doubling recurrence.
fn geometric_sum(p: &Matrix, ell: usize) -> Result<Matrix> {
    let n = p.rows();
    let identity = Matrix::identity(n);
    let top = usize::BITS - 1 - ell.leading_zeros();
    let mut sum = identity.clone();
    let mut power = p.clone();
    for bit in (0..top).rev() {
        let last = bit == 0;
        sum = sum.add(&power.matmul(&sum)?)?;
        if !last {
            power = power.matmul(&power)?;
        }
        if (ell >> bit) & 1 == 1 {
            sum = identity.add(&p.matmul(&sum)?)?;
            if !last {
                power = power.matmul(p)?;
            }
        }
    }
    Ok(sum)
}

fn check_iterations(ell: usize) -> Result<()> {
    if ell == 0 {
        Err(Error::DomainViolation {
            what: "iteration parameter ell",
            value: 0.0,
            domain: "ell >= 1",
        })
    } else {
        Ok(())
    }
}

/// Basis-change matrix `C_{m,ℓ} = Σ_{i<ℓ} (I − A)^i` from a collocation matrix.
pub fn basis_change_matrix(collocation: &Matrix, ell: usize) -> Result<Matrix> {
    check_iterations(ell)?;
    let complement = Matrix::identity(collocation.rows()).sub(collocation)?;
    geometric_sum(&complement, ell)
}

pub fn gb_matrix(m: usize, ell: usize) -> Result<Matrix> {
    basis_change_matrix(&collocation_matrix(m)?, ell)
}

/// Generalized Bernstein operator `B_{m,ℓ}` with cached `A` and `C_{m,ℓ}`.
#[derive(Clone, Debug)]
pub struct GbOperator {
    basis: BernsteinBasis,
    ell: usize,
    collocation: Matrix,
    basis_change: Matrix,
}

impl GbOperator {
    pub fn new(m: usize, ell: usize) -> Result<Self> {
        check_iterations(ell)?;
        let basis = BernsteinBasis::new(m)?;
        let collocation = collocation_from(&basis);
        let basis_change = basis_change_matrix(&collocation, ell)?;
        Ok(Self {
            basis,
            ell,
            collocation,
            basis_change,
        })
    }

    /// Reassembles an operator from a previously computed `C_{m,ℓ}`
    /// (for example one loaded from disk).
    pub fn from_basis_change(m: usize, ell: usize, basis_change: Matrix) -> Result<Self> {
        check_iterations(ell)?;
        let basis = BernsteinBasis::new(m)?;
        if basis_change.shape() != (m + 1, m + 1) {
            return Err(Error::DimensionMismatch {
                op: "from_basis_change",
                left: (m + 1, m + 1),
                right: basis_change.shape(),
            });
        }
        let collocation = collocation_from(&basis);
        Ok(Self {
            basis,
            ell,
            collocation,
            basis_change,
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    #[inline]
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn bernstein(&self) -> &BernsteinBasis {
        &self.basis
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.basis.nodes()
    }

    pub fn collocation(&self) -> &Matrix {
        &self.collocation
    }

    pub fn basis_change(&self) -> &Matrix {
        &self.basis_change
    }

    /// Fundamental GB polynomials `p^{(ℓ)}_{m,j}(x)`, `j = 0..=m`.
    pub fn basis_at(&self, x: f64) -> Result<Vec<f64>> {
        let p = self.basis.eval(x)?;
        self.basis_change.vec_mul(&p)
    }

    /// `B_{m,ℓ}(f, x) = Σ_j p^{(ℓ)}_{m,j}(x) f(t_j)`.
    pub fn approximate<T: Scalar>(&self, samples: &[T], x: f64) -> Result<T> {
        if samples.len() != self.degree() + 1 {
            return Err(Error::DimensionMismatch {
                op: "gb_approximate",
                left: (self.degree() + 1, 1),
                right: (samples.len(), 1),
            });
        }
        let basis = self.basis_at(x)?;
        Ok(basis
            .iter()
            .zip(samples)
            .map(|(&p, &f)| T::from_real(p) * f)
            .sum())
    }
}

pub fn gb_basis_at(op: &GbOperator, x: f64) -> Result<Vec<f64>> {
    op.basis_at(x)
}

pub fn gb_approximate<T: Scalar>(op: &GbOperator, samples: &[T], x: f64) -> Result<T> {
    op.approximate(samples, x)
}
