//! Built-in test problems and the registry that holds them.

use std::fmt;
use std::sync::Arc;

use gbnystrom::special::beta;
use gbnystrom::{Complex64, VolterraProblem, VolterraWeights};

use crate::error::{HarnessError, Result};

/// `∫_0^s k(t,s) f(t) (s−t)^α t^β dt` with a known value, used to test the
/// discrete operator on its own.
#[derive(Clone)]
pub struct QuadratureProblem {
    pub weights: VolterraWeights,
    pub kernel: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub integrand: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub exact: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for QuadratureProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadratureProblem")
            .field("weights", &self.weights)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum ProblemKind {
    Quadrature(QuadratureProblem),
    Real(VolterraProblem<f64>),
    Complex(VolterraProblem<Complex64>),
}

/// Where the "exact" values in an error table come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceMode {
    ClosedForm,
    /// The solver itself at `(m, ℓ) = (1024, 256)`.
    ReferenceRun,
}

impl ReferenceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReferenceMode::ClosedForm => "closed-form",
            ReferenceMode::ReferenceRun => "reference-run",
        }
    }
}

impl fmt::Display for ReferenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FigureSpec {
    /// Max error over `points` equispaced interior points for each ℓ.
    MaxErrorVsEll {
        m: usize,
        ells: Vec<usize>,
        points: usize,
    },
    /// Solutions for several m next to the reference, on `points + 1` nodes.
    SolutionOverlay {
        ms: Vec<usize>,
        ell: usize,
        points: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepDefaults {
    pub m_list: Vec<usize>,
    pub ell: usize,
    pub s_list: Vec<f64>,
    pub sweep_m: usize,
    pub ell_list: Vec<usize>,
    pub eoc: bool,
}

#[derive(Clone, Debug)]
pub struct ProblemRegistryEntry {
    pub id: String,
    pub description: String,
    /// The published table this entry's defaults reproduce.
    pub mirrors: String,
    pub problem: ProblemKind,
    pub defaults: SweepDefaults,
    pub figure: Option<FigureSpec>,
}

impl ProblemRegistryEntry {
    pub fn reference_mode(&self) -> ReferenceMode {
        let exact = match &self.problem {
            ProblemKind::Quadrature(_) => true,
            ProblemKind::Real(p) => p.has_exact_solution(),
            ProblemKind::Complex(p) => p.has_exact_solution(),
        };
        if exact {
            ReferenceMode::ClosedForm
        } else {
            ReferenceMode::ReferenceRun
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Registry {
    entries: Vec<ProblemRegistryEntry>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        for e in builtin_entries() {
            r.register(e).expect("built-in ids are unique");
        }
        r
    }

    /// Adds a custom problem. Ids must be unique.
    pub fn register(&mut self, entry: ProblemRegistryEntry) -> Result<()> {
        if self.get(&entry.id).is_some() {
            return Err(HarnessError::DuplicateId(entry.id));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&ProblemRegistryEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn lookup(&self, id: &str) -> Result<&ProblemRegistryEntry> {
        self.get(id)
            .ok_or_else(|| HarnessError::UnknownProblem(id.to_string(), self.ids().join(", ")))
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn entries(&self) -> &[ProblemRegistryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn doublings(from: usize, to: usize) -> Vec<usize> {
    std::iter::successors(Some(from), |&m| Some(2 * m))
        .take_while(|&m| m <= to)
        .collect()
}

fn weights(alpha: f64, beta: f64) -> VolterraWeights {
    VolterraWeights::new(alpha, beta).expect("built-in exponents are valid")
}

/// `∫_0^s sin(st) (s−t)^{1/4} t^{1/4} dt` by its power series
/// `Σ_n (−1)^n s^{4n+3.5} B(2n+2.25, 1.25) / (2n+1)!`.
pub fn sine_kernel_integral(s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let s2 = s * s;
    let mut b = beta(2.25, 1.25);
    let mut term = s.powf(3.5) * b;
    let mut sum = term;
    for n in 1..60 {
        // B(a+2, c) = B(a, c) a (a+1) / ((a+c)(a+c+1)) with a = 2n + 0.25
        let a = 2.0 * n as f64 + 0.25;
        let b_next = b * a * (a + 1.0) / ((a + 1.25) * (a + 2.25));
        let k = 2.0 * n as f64;
        term *= -s2 * s2 / (k * (k + 1.0)) * (b_next / b);
        b = b_next;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Exact solution of `f(s) − (1/(2iω²)) ∫_0^s (e^{2iω(s−t)} − 1) f(t) dt = 1`.
pub fn square_well_solution(omega: f64, s: f64) -> Complex64 {
    let i = Complex64::i();
    let root = Complex64::new(omega * omega - 1.0 / omega, 0.0).sqrt();
    let (p1, p2) = (i * (omega + root), i * (omega - root));
    let shift = 2.0 * i * omega;
    ((p1 - shift) * (p1 * s).exp() - (p2 - shift) * (p2 * s).exp()) / (p1 - p2)
}

/// The square-well scattering equation for frequency `ω`.
pub fn square_well_problem(omega: f64) -> VolterraProblem<Complex64> {
    let i = Complex64::i();
    let mu = -1.0 / (2.0 * i * omega * omega);
    VolterraProblem::new(
        VolterraWeights::unweighted(),
        mu,
        move |t, s| (2.0 * i * omega * (s - t)).exp() - 1.0,
        |_| Complex64::new(1.0, 0.0),
    )
    .with_exact_solution(move |s| square_well_solution(omega, s))
}

fn builtin_entries() -> Vec<ProblemRegistryEntry> {
    let nystrom_ms = doublings(4, 512);
    let eq = |ell_list: Vec<usize>| SweepDefaults {
        m_list: nystrom_ms.clone(),
        ell: 256,
        s_list: vec![],
        sweep_m: 64,
        ell_list,
        eoc: false,
    };
    let figure_ells = doublings(1, 256);

    vec![
        ProblemRegistryEntry {
            id: "ex3_1".into(),
            description: "∫ sin(st) (s−t)^{1/4} t^{1/4} dt, smooth kernel".into(),
            mirrors: "quadrature errors at s = 0.3, 0.6, 0.8 for m = 4..16, ℓ = 256; ℓ = 4..16 at m = 64"
                .into(),
            problem: ProblemKind::Quadrature(QuadratureProblem {
                weights: weights(0.25, 0.25),
                kernel: Arc::new(|t, s| (s * t).sin()),
                integrand: Arc::new(|_| 1.0),
                exact: Arc::new(sine_kernel_integral),
            }),
            defaults: SweepDefaults {
                m_list: vec![4, 8, 16],
                ell: 256,
                s_list: vec![0.3, 0.6, 0.8],
                sweep_m: 64,
                ell_list: vec![4, 8, 16],
                eoc: false,
            },
            figure: None,
        },
        ProblemRegistryEntry {
            id: "ex3_2".into(),
            description: "∫ e^{(s−t)^{3/2}} (s−t)^{1/2} dt, kernel of limited smoothness".into(),
            mirrors:
                "quadrature errors at s = 0.2, 0.5, 0.7 for m = 4..1024, ℓ = 256; ℓ = 4..4096 at m = 512"
                    .into(),
            problem: ProblemKind::Quadrature(QuadratureProblem {
                weights: weights(0.5, 0.0),
                // extended evenly to t > s, where the GB approximant also samples it
                kernel: Arc::new(|t, s| (s - t).abs().powf(1.5).exp()),
                integrand: Arc::new(|_| 1.0),
                exact: Arc::new(|s| 2.0 / 3.0 * (s.powf(1.5).exp() - 1.0)),
            }),
            defaults: SweepDefaults {
                m_list: doublings(4, 1024),
                ell: 256,
                s_list: vec![0.2, 0.5, 0.7],
                sweep_m: 512,
                ell_list: doublings(4, 4096),
                eoc: false,
            },
            figure: None,
        },
        ProblemRegistryEntry {
            id: "ex5_1".into(),
            description: "f + ½∫ log(t+s+2) f(t) √t dt = cos s/(s²+2)".into(),
            mirrors: "errors at s = 0.1, 0.3, 0.8 and cond for m = 4..512; max error vs ℓ".into(),
            problem: ProblemKind::Real(VolterraProblem::new(
                weights(0.0, 0.5),
                0.5,
                |t, s| (t + s + 2.0).ln(),
                |s| s.cos() / (s * s + 2.0),
            )),
            defaults: SweepDefaults {
                s_list: vec![0.1, 0.3, 0.8],
                ..eq(figure_ells.clone())
            },
            figure: Some(FigureSpec::MaxErrorVsEll {
                m: 64,
                ells: figure_ells.clone(),
                points: 512,
            }),
        },
        ProblemRegistryEntry {
            id: "ex5_2".into(),
            description: "f + ∫ (t sin s)^{3/2} f(t) dt = s² + 3 tanh(2s)".into(),
            mirrors: "errors and EOC at s = 0.4, 0.7, 0.99 and cond for m = 4..512".into(),
            problem: ProblemKind::Real(VolterraProblem::new(
                VolterraWeights::unweighted(),
                1.0,
                |t, s| (t * s.sin()).powf(1.5),
                |s| s * s + 3.0 * (2.0 * s).tanh(),
            )),
            defaults: SweepDefaults {
                s_list: vec![0.4, 0.7, 0.99],
                eoc: true,
                ..eq(figure_ells.clone())
            },
            figure: None,
        },
        ProblemRegistryEntry {
            id: "ex5_3".into(),
            description: "f + 2∫ (t+s+2) f(t) ((s−t)t)^{1/3} dt = s^{5/2}".into(),
            mirrors: "errors at s = 0.01, 0.5, 0.99 and cond for m = 4..512; solution overlays".into(),
            problem: ProblemKind::Real(VolterraProblem::new(
                weights(1.0 / 3.0, 1.0 / 3.0),
                2.0,
                |t, s| t + s + 2.0,
                |s| s.powf(2.5),
            )),
            defaults: SweepDefaults {
                s_list: vec![0.01, 0.5, 0.99],
                ..eq(figure_ells.clone())
            },
            figure: Some(FigureSpec::SolutionOverlay {
                ms: vec![8, 32, 128],
                ell: 256,
                points: 512,
            }),
        },
        ProblemRegistryEntry {
            id: "ex5_4".into(),
            description: "square-well scattering equation, ω = 10, complex μ = −1/(2iω²)".into(),
            mirrors: "errors at s = 0.01, 0.5, 0.99 and cond for m = 4..128".into(),
            problem: ProblemKind::Complex(square_well_problem(10.0)),
            defaults: SweepDefaults {
                m_list: doublings(4, 128),
                s_list: vec![0.01, 0.5, 0.99],
                ..eq(figure_ells)
            },
            figure: None,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_unique_entries() {
        let r = Registry::builtin();
        assert_eq!(r.ids(), ["ex3_1", "ex3_2", "ex5_1", "ex5_2", "ex5_3", "ex5_4"]);
        for e in r.entries() {
            assert!(!e.mirrors.is_empty());
            assert!(!e.defaults.s_list.is_empty());
        }
    }

    #[test]
    fn duplicate_and_unknown_ids() {
        let mut r = Registry::builtin();
        let copy = r.get("ex5_1").unwrap().clone();
        assert!(matches!(r.register(copy), Err(HarnessError::DuplicateId(_))));
        assert!(matches!(r.lookup("ex9_9"), Err(HarnessError::UnknownProblem(..))));
    }

    #[test]
    fn reference_modes() {
        let r = Registry::builtin();
        let mode = |id| r.get(id).unwrap().reference_mode();
        assert_eq!(mode("ex3_1"), ReferenceMode::ClosedForm);
        assert_eq!(mode("ex5_1"), ReferenceMode::ReferenceRun);
        assert_eq!(mode("ex5_4"), ReferenceMode::ClosedForm);
    }

    #[test]
    fn square_well_solution_satisfies_initial_conditions() {
        // f(0) = 1, and differentiating the equation gives f'(0) = 0.
        let f0 = square_well_solution(10.0, 0.0);
        assert!((f0 - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let h = 1e-6;
        let d = (square_well_solution(10.0, h) - square_well_solution(10.0, -h)) / (2.0 * h);
        assert!(d.norm() < 1e-6);
    }
}
