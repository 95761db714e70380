//! Nyström solver for second-kind Volterra integral equations
//!
//! ```text
//! f(s) + μ ∫_0^s k(t,s) f(t) (s−t)^α t^β dt = g(s),   s ∈ (0, 1]
//! ```
//!
//! using only samples of `k` and `g` on equispaced nodes `j/m`. The integral
//! operator is discretized by integrating the generalized Bernstein
//! approximant `B_{m,ℓ}(k_s f)` exactly against the weight with a
//! Gauss–Jacobi rule, and the resulting collocation system is solved densely.
//!
//! ```
//! use gbnystrom::{solve, VolterraProblem, VolterraWeights};
//!
//! // f(s) + ∫_0^s f(t) dt = 1 has solution e^{-s}.
//! let problem = VolterraProblem::new(VolterraWeights::unweighted(), 1.0, |_, _| 1.0, |_| 1.0);
//! let sol = solve(&problem, 32, 16)?;
//! let f = sol.interpolant_at(&problem, 0.5)?;
//! assert!((f - (-0.5f64).exp()).abs() < 1e-9);
//! # Ok::<(), gbnystrom::Error>(())
//! ```

pub mod bernstein;
pub mod error;
pub mod jacobi;
pub mod linalg;
pub mod nystrom;
pub mod quadrature;
pub mod scalar;
pub mod special;

pub use bernstein::{
    basis_change_matrix, bernstein_basis_at, collocation_matrix, gb_approximate, gb_basis_at, gb_matrix,
    BernsteinBasis, GbOperator,
};
pub use error::{Error, Result};
pub use jacobi::{integrate, jacobi_rule, rule_size_for_degree, JacobiRule};
pub use linalg::{cond_inf, inverse, lu_factor, lu_solve, mat_power, norm_inf, LuFactorization, Matrix};
pub use num_complex::Complex64;
pub use nystrom::{
    assemble_system, interpolant_at, solve, solve_with_operator, NystromSolution, NystromSystem,
    VolterraProblem,
};
pub use quadrature::{
    apply_discrete_operator, q_coefficients, QCoefficientTable, VolterraQuadrature, VolterraWeights,
};
pub use scalar::Scalar;
