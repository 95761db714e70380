//! Product quadrature for the weighted Volterra operator
//! `(Vf)(s) = ∫_0^s k(t,s) f(t) (s−t)^α t^β dt`.
//!
//! The integrand `k(·,s) f` is replaced by its GB approximant, which gives
//! `(V_m f)(s) = Σ_j Q_j(s) k(t_j,s) f(t_j)` with
//! `Q_j(s) = ∫_0^s p^{(ℓ)}_{m,j}(t) (s−t)^α t^β dt`. Substituting `t = s z`,
//!
//! ```text
//! Q_j(s) = s^{α+β+1} Σ_r C[r][j] Σ_k λ_k p_{m,r}(x_k s)
//! ```
//!
//! and the inner integral is computed exactly by an `⌊(m+2)/2⌋`-point
//! Gauss–Jacobi rule for the weight `(1−z)^α z^β`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::bernstein::GbOperator;
use crate::error::{check_unit_interval, Error, Result};
use crate::jacobi::{jacobi_rule, rule_size_for_degree, JacobiRule};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::special::beta;

/// Exponents of the weight `(s−t)^α t^β`, with `α, β > −1` and `α + β + 1 ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolterraWeights {
    alpha: f64,
    beta: f64,
}

impl VolterraWeights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok =
            alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0 && alpha + beta + 1.0 >= 0.0;
        if ok {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidExponent { alpha, beta })
        }
    }

    /// Lebesgue weight, `α = β = 0`.
    pub fn unweighted() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `α + β + 1`.
    pub fn exponent_sum(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }

    /// `∫_0^1 (1−z)^α z^β dz = B(β+1, α+1)`.
    pub fn total_mass(&self) -> f64 {
        beta(self.beta + 1.0, self.alpha + 1.0)
    }

    fn prefactor(&self, s: f64) -> f64 {
        // powf(0, 0) = 1 covers the α + β + 1 = 0 column at s = 0.
        s.powf(self.exponent_sum())
    }
}

/// `Q^{(ℓ)}_j(s_i)` for a set of evaluation points, one row per point.
#[derive(Clone, Debug)]
pub struct QCoefficientTable {
    points: Vec<f64>,
    values: Matrix,
    degree: usize,
    ell: usize,
    weights: VolterraWeights,
}

impl QCoefficientTable {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn weights(&self) -> VolterraWeights {
        self.weights
    }
}

/// The discretized operator `V^{(ℓ)}_m` for one weight pair.
#[derive(Clone, Debug)]
pub struct VolterraQuadrature {
    op: Arc<GbOperator>,
    weights: VolterraWeights,
    rule: JacobiRule,
}

impl VolterraQuadrature {
    pub fn new(op: Arc<GbOperator>, weights: VolterraWeights) -> Result<Self> {
        let n = rule_size_for_degree(op.degree());
        Self::with_rule_size(op, weights, n)
    }

    /// Uses an `n`-point rule instead of the minimal exact one.
    pub fn with_rule_size(op: Arc<GbOperator>, weights: VolterraWeights, n: usize) -> Result<Self> {
        let rule = jacobi_rule(weights.alpha, weights.beta, n)?;
        Ok(Self { op, weights, rule })
    }

    pub fn operator(&self) -> &Arc<GbOperator> {
        &self.op
    }

    pub fn weights(&self) -> VolterraWeights {
        self.weights
    }

    pub fn rule(&self) -> &JacobiRule {
        &self.rule
    }

    pub fn degree(&self) -> usize {
        self.op.degree()
    }

    /// `Σ_k λ_k p_{m,r}(x_k s)` for `r = 0..=m`, written into `out`.
    fn bernstein_moments_into(&self, s: f64, out: &mut [f64]) {
        let basis = self.op.bernstein();
        let mut scratch = vec![0.0; basis.degree() + 1];
        out.fill(0.0);
        for (&x, &lambda) in self.rule.nodes().iter().zip(self.rule.weights()) {
            basis.eval_into(x * s, &mut scratch);
            for (o, &p) in out.iter_mut().zip(&scratch) {
                *o += lambda * p;
            }
        }
    }

    /// `Q^{(ℓ)}_j(s)` for `j = 0..=m`.
    pub fn coefficients(&self, s: f64) -> Result<Vec<f64>> {
        check_unit_interval("s", s)?;
        let scale = self.weights.prefactor(s);
        if scale == 0.0 {
            return Ok(vec![0.0; self.degree() + 1]);
        }
        let mut moments = vec![0.0; self.degree() + 1];
        self.bernstein_moments_into(s, &mut moments);
        let mut q = self.op.basis_change().vec_mul(&moments)?;
        for v in &mut q {
            *v *= scale;
        }
        Ok(q)
    }

    /// Coefficient rows for every point at once: the Bernstein moments of
    /// all points are formed first, then multiplied by `C` in one product.
    pub fn table(&self, points: &[f64]) -> Result<QCoefficientTable> {
        for &s in points {
            check_unit_interval("s", s)?;
        }
        let width = self.degree() + 1;
        if points.is_empty() {
            return Err(Error::DimensionMismatch {
                op: "q_table",
                left: (0, width),
                right: (1, width),
            });
        }
        let mut moments = vec![0.0; points.len() * width];
        moments
            .par_chunks_mut(width)
            .zip(points.par_iter())
            .for_each(|(row, &s)| self.bernstein_moments_into(s, row));
        let moments = Matrix::from_row_major(points.len(), width, moments)?;
        let product = moments.matmul(self.op.basis_change())?;
        let mut data = product.into_vec();
        for (row, &s) in data.chunks_exact_mut(width).zip(points) {
            let scale = self.weights.prefactor(s);
            for v in row {
                *v *= scale;
            }
        }
        Ok(QCoefficientTable {
            points: points.to_vec(),
            values: Matrix::from_row_major(points.len(), width, data)?,
            degree: self.degree(),
            ell: self.op.ell(),
            weights: self.weights,
        })
    }

    /// `Σ_j q_j k(t_j, s) f_j` for precomputed coefficients `q`.
    pub fn apply_with<T: Scalar>(
        &self,
        q: &[f64],
        kernel: impl Fn(f64, f64) -> T,
        samples: &[T],
        s: f64,
    ) -> Result<T> {
        let width = self.degree() + 1;
        if samples.len() != width || q.len() != width {
            return Err(Error::DimensionMismatch {
                op: "apply_discrete_operator",
                left: (width, 1),
                right: (samples.len(), q.len()),
            });
        }
        let basis = self.op.bernstein();
        let mut acc = T::zero();
        for (j, (&qj, &fj)) in q.iter().zip(samples).enumerate() {
            let t = basis.node(j);
            let k = kernel(t, s);
            if !k.is_finite() {
                return Err(Error::NonFiniteEvaluation { what: "kernel", t, s });
            }
            acc += T::from_real(qj) * k * fj;
        }
        Ok(acc)
    }

    /// `(V^{(ℓ)}_m f)(s)` from nodal samples `f(t_j)`.
    pub fn apply<T: Scalar>(&self, kernel: impl Fn(f64, f64) -> T, samples: &[T], s: f64) -> Result<T> {
        let q = self.coefficients(s)?;
        self.apply_with(&q, kernel, samples, s)
    }
}

pub fn q_coefficients(op: &Arc<GbOperator>, weights: VolterraWeights, s: f64) -> Result<Vec<f64>> {
    VolterraQuadrature::new(Arc::clone(op), weights)?.coefficients(s)
}

pub fn apply_discrete_operator<T: Scalar>(
    op: &Arc<GbOperator>,
    weights: VolterraWeights,
    kernel: impl Fn(f64, f64) -> T,
    samples: &[T],
    s: f64,
) -> Result<T> {
    VolterraQuadrature::new(Arc::clone(op), weights)?.apply(kernel, samples, s)
}
