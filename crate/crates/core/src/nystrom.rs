//! Nyström method for `f(s) + μ ∫_0^s k(t,s) f(t) (s−t)^α t^β dt = g(s)`.
//!
//! Collocating `(I + μ V^{(ℓ)}_m) f_m = g` at `s_i = i/m` gives
//!
//! ```text
//! Σ_j [δ_ij + μ Q_j(s_i) k(t_j, s_i)] a_j = g(s_i),   i = 0..=m
//! ```
//!
//! and the solution extends to all of `[0, 1]` through the Nyström
//! interpolant `f_m(s) = g(s) − μ Σ_j Q_j(s) k(t_j, s) a_j`.

use std::fmt;
use std::sync::Arc;

use crate::bernstein::GbOperator;
use crate::error::{check_unit_interval, Error, Result};
use crate::linalg::{lu_factor, Matrix};
use crate::quadrature::{QCoefficientTable, VolterraQuadrature, VolterraWeights};
use crate::scalar::Scalar;

pub type Kernel<T> = Arc<dyn Fn(f64, f64) -> T + Send + Sync>;
pub type ScalarFn<T> = Arc<dyn Fn(f64) -> T + Send + Sync>;

/// A second-kind Volterra equation with weight `(s−t)^α t^β`.
#[derive(Clone)]
pub struct VolterraProblem<T: Scalar> {
    kernel: Kernel<T>,
    rhs: ScalarFn<T>,
    mu: T,
    weights: VolterraWeights,
    exact: Option<ScalarFn<T>>,
}

impl<T: Scalar> VolterraProblem<T> {
    /// `kernel` is called as `k(t, s)` with `0 ≤ t ≤ s ≤ 1`.
    pub fn new(
        weights: VolterraWeights,
        mu: T,
        kernel: impl Fn(f64, f64) -> T + Send + Sync + 'static,
        rhs: impl Fn(f64) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            kernel: Arc::new(kernel),
            rhs: Arc::new(rhs),
            mu,
            weights,
            exact: None,
        }
    }

    pub fn with_exact_solution(mut self, exact: impl Fn(f64) -> T + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(exact));
        self
    }

    #[inline]
    pub fn kernel(&self, t: f64, s: f64) -> T {
        (self.kernel)(t, s)
    }

    #[inline]
    pub fn rhs(&self, s: f64) -> T {
        (self.rhs)(s)
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn weights(&self) -> VolterraWeights {
        self.weights
    }

    pub fn exact(&self, s: f64) -> Option<T> {
        self.exact.as_ref().map(|f| f(s))
    }

    pub fn has_exact_solution(&self) -> bool {
        self.exact.is_some()
    }

    fn checked_rhs(&self, s: f64) -> Result<T> {
        let g = self.rhs(s);
        if g.is_finite() {
            Ok(g)
        } else {
            Err(Error::NonFiniteEvaluation {
                what: "right-hand side",
                t: f64::NAN,
                s,
            })
        }
    }
}

impl<T: Scalar> fmt::Debug for VolterraProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VolterraProblem")
            .field("mu", &self.mu)
            .field("weights", &self.weights)
            .field("has_exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

/// The collocation system together with the coefficient table it was built from.
#[derive(Clone, Debug)]
pub struct NystromSystem<T: Scalar> {
    pub matrix: Matrix<T>,
    pub rhs: Vec<T>,
    pub q_table: QCoefficientTable,
}

/// Builds `δ_ij + μ Q_j(s_i) k(t_j, s_i)` and `g(s_i)` at `s_i = i/m`.
pub fn assemble_system<T: Scalar>(
    problem: &VolterraProblem<T>,
    quadrature: &VolterraQuadrature,
) -> Result<NystromSystem<T>> {
    let nodes = quadrature.operator().nodes();
    let n = nodes.len();
    let q_table = quadrature.table(&nodes)?;
    let mu = problem.mu();
    let mut data = Vec::with_capacity(n * n);
    for (i, &s) in nodes.iter().enumerate() {
        for (j, (&t, &q)) in nodes.iter().zip(q_table.row(i)).enumerate() {
            let k = problem.kernel(t, s);
            if !k.is_finite() {
                return Err(Error::NonFiniteEvaluation { what: "kernel", t, s });
            }
            let delta = if i == j { T::one() } else { T::zero() };
            data.push(delta + mu * T::from_real(q) * k);
        }
    }
    let rhs = nodes
        .iter()
        .map(|&s| problem.checked_rhs(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(NystromSystem {
        matrix: Matrix::from_row_major(n, n, data)?,
        rhs,
        q_table,
    })
}

/// Solved nodal values plus everything needed to evaluate the interpolant.
#[derive(Clone, Debug)]
pub struct NystromSolution<T: Scalar> {
    quadrature: VolterraQuadrature,
    nodal: Vec<T>,
    cond_inf: f64,
    node_table: Option<QCoefficientTable>,
}

impl<T: Scalar> NystromSolution<T> {
    /// Rebuilds a solution from stored nodal values (e.g. a cached run).
    /// Node evaluations then go through single-point coefficients.
    pub fn from_parts(quadrature: VolterraQuadrature, nodal: Vec<T>, cond_inf: f64) -> Result<Self> {
        let nodes = quadrature.operator().nodes();
        if nodal.len() != nodes.len() {
            return Err(Error::DimensionMismatch {
                op: "NystromSolution::from_parts",
                left: (nodes.len(), 1),
                right: (nodal.len(), 1),
            });
        }
        Ok(Self {
            quadrature,
            nodal,
            cond_inf,
            node_table: None,
        })
    }

    pub fn degree(&self) -> usize {
        self.quadrature.degree()
    }

    pub fn ell(&self) -> usize {
        self.quadrature.operator().ell()
    }

    /// `a*_j ≈ f(j/m)`, `j = 0..=m`.
    pub fn nodal_values(&self) -> &[T] {
        &self.nodal
    }

    /// `‖A‖∞ ‖A⁻¹‖∞` of the collocation matrix.
    pub fn cond_inf(&self) -> f64 {
        self.cond_inf
    }

    pub fn quadrature(&self) -> &VolterraQuadrature {
        &self.quadrature
    }

    fn node_index(&self, s: f64) -> Option<usize> {
        let m = self.degree();
        let j = (s * m as f64).round();
        (j >= 0.0 && j <= m as f64 && j / m as f64 == s).then_some(j as usize)
    }

    /// `f_m(s) = g(s) − μ Σ_j Q_j(s) k(t_j, s) a*_j`.
    pub fn interpolant_at(&self, problem: &VolterraProblem<T>, s: f64) -> Result<T> {
        check_unit_interval("s", s)?;
        let g = problem.checked_rhs(s)?;
        let kernel = |t, s| problem.kernel(t, s);
        let row = self
            .node_table
            .as_ref()
            .zip(self.node_index(s))
            .map(|(t, i)| t.row(i));
        let integral = match row {
            Some(q) => self.quadrature.apply_with(q, kernel, &self.nodal, s)?,
            None => self.quadrature.apply(kernel, &self.nodal, s)?,
        };
        Ok(g - problem.mu() * integral)
    }

    /// Interpolant at many points, sharing one coefficient-table product.
    pub fn interpolant_many(&self, problem: &VolterraProblem<T>, points: &[f64]) -> Result<Vec<T>> {
        if points.is_empty() {
            return Ok(Vec::new());
        }
        let table = self.quadrature.table(points)?;
        points
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let g = problem.checked_rhs(s)?;
                let integral =
                    self.quadrature
                        .apply_with(table.row(i), |t, s| problem.kernel(t, s), &self.nodal, s)?;
                Ok(g - problem.mu() * integral)
            })
            .collect()
    }
}

/// Solves the collocation system with a prebuilt GB operator.
pub fn solve_with_operator<T: Scalar>(
    problem: &VolterraProblem<T>,
    op: Arc<GbOperator>,
) -> Result<NystromSolution<T>> {
    let (m, ell) = (op.degree(), op.ell());
    let quadrature = VolterraQuadrature::new(op, problem.weights())?;
    let system = assemble_system(problem, &quadrature)?;
    let ill_posed = |e: Error| match e {
        Error::SingularMatrix { index, .. } => Error::IllPosedDiscretization { m, ell, index },
        other => other,
    };
    let lu = lu_factor(&system.matrix).map_err(ill_posed)?;
    let nodal = lu.solve(&system.rhs)?;
    let cond_inf = system.matrix.norm_inf() * lu.inverse()?.norm_inf();
    Ok(NystromSolution {
        quadrature,
        nodal,
        cond_inf,
        node_table: Some(system.q_table),
    })
}

pub fn solve<T: Scalar>(problem: &VolterraProblem<T>, m: usize, ell: usize) -> Result<NystromSolution<T>> {
    solve_with_operator(problem, Arc::new(GbOperator::new(m, ell)?))
}

pub fn interpolant_at<T: Scalar>(
    solution: &NystromSolution<T>,
    problem: &VolterraProblem<T>,
    s: f64,
) -> Result<T> {
    solution.interpolant_at(problem, s)
}
