//! Benchmark fixtures shared by the `solver` bench.

use gbnystrom::{VolterraProblem, VolterraWeights};

/// A smooth equation with a `√t` weight.
pub fn log_kernel_problem() -> VolterraProblem<f64> {
    let w = VolterraWeights::new(0.0, 0.5).expect("valid exponents");
    VolterraProblem::new(w, 0.5, |t, s| (t + s + 2.0).ln(), |s| s.cos() / (s * s + 2.0))
}

/// `m + 1` equispaced points in `[0, 1]`.
pub fn nodes(m: usize) -> Vec<f64> {
    (0..=m).map(|i| i as f64 / m as f64).collect()
}
