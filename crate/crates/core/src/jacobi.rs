//! Gauss–Jacobi quadrature on `[0, 1]` for the weight `(1 − z)^α z^β`.
//!
//! Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix of
//! the three-term recurrence (Golub–Welsch); the Christoffel numbers are the
//! squared first components of the normalized eigenvectors times the zeroth
//! moment `B(β + 1, α + 1)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::beta;

const MAX_QL_SWEEPS: usize = 60;

/// An `n`-point Gauss–Jacobi rule, exact for polynomials of degree `2n − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiRule {
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl JacobiRule {
    pub fn new(alpha: f64, beta: f64, n: usize) -> Result<Self> {
        jacobi_rule(alpha, beta, n)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Strictly increasing, inside `(0, 1)`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_k λ_k f(x_k)`.
    pub fn integrate<T: Scalar>(&self, f: impl Fn(f64) -> T) -> Result<T> {
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteEvaluation {
                    what: "quadrature integrand",
                    t: x,
                    s: f64::NAN,
                });
            }
            acc += T::from_real(w) * v;
        }
        Ok(acc)
    }
}

pub fn integrate<T: Scalar>(rule: &JacobiRule, f: impl Fn(f64) -> T) -> Result<T> {
    rule.integrate(f)
}

/// Smallest Gauss–Jacobi rule exact for degree-`m` polynomials: `⌊(m + 2)/2⌋`.
pub fn rule_size_for_degree(m: usize) -> usize {
    (m + 2) / 2
}

pub fn jacobi_rule(alpha: f64, beta_exp: f64, n: usize) -> Result<JacobiRule> {
    if !(alpha > -1.0 && beta_exp > -1.0 && alpha.is_finite() && beta_exp.is_finite()) {
        return Err(Error::InvalidExponent {
            alpha,
            beta: beta_exp,
        });
    }
    if n == 0 {
        return Err(Error::DomainViolation {
            what: "rule size n",
            value: 0.0,
            domain: "n >= 1",
        });
    }
    let (a, b) = (alpha, beta_exp);
    let ab = a + b;

    // Recurrence for (1-x)^a (1+x)^b on [-1, 1], then mapped by z = (1 + x)/2.
    let mut diag = Vec::with_capacity(n);
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let ak = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        diag.push(0.5 * (1.0 + ak));
    }
    for k in 1..n {
        let kf = k as f64;
        let b2 = if k == 1 {
            // (k + a + b) cancels against (2k + a + b − 1) at k = 1.
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * kf + ab;
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[k - 1] = 0.5 * b2.sqrt();
    }

    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first)?;

    let moment = beta(b + 1.0, a + 1.0);
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first)
        .map(|(x, v)| (x, moment * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (nodes, weights) = pairs.into_iter().unzip();

    Ok(JacobiRule {
        alpha,
        beta: beta_exp,
        nodes,
        weights,
    })
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
///
/// `diag` becomes the eigenvalues; `off[i]` couples `i` and `i + 1` and is
/// destroyed. Only the first row of the eigenvector matrix is carried along,
/// in `first` (initialised to `e_0`).
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::DomainViolation {
                    what: "tridiagonal QL sweeps",
                    value: sweeps as f64,
                    domain: "convergence within 60 sweeps",
                });
            }
            // Wilkinson-type shift from the leading 2×2 block.
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let z = first[i + 1];
                first[i + 1] = s * first[i] + c * z;
                first[i] = c * first[i] - s * z;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
