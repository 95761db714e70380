//! Sweeps over `(m, ℓ, s)` that produce error reports and figure data.

use std::time::{SystemTime, UNIX_EPOCH};

use gbnystrom::{solve_with_operator, NystromSolution, Scalar, VolterraProblem, VolterraQuadrature};
use rayon::prelude::*;

use crate::cache::{CacheScalar, ReferenceCache, REFERENCE_DEGREE};
use crate::error::{HarnessError, Result};
use crate::problems::{
    FigureSpec, ProblemKind, ProblemRegistryEntry, QuadratureProblem, ReferenceMode, Registry,
};
use crate::report::{fill_eoc, ExperimentReport, ReportKind, ReportMetadata, ReportRow};

/// How to obtain the values errors are measured against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReferencePolicy {
    /// Closed form when the problem has one, otherwise a reference run.
    #[default]
    Auto,
    ClosedForm,
    ReferenceRun,
}

/// Replacements for a registry entry's default sweep parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub m_list: Option<Vec<usize>>,
    /// Fixed ℓ of a by-m table.
    pub ell: Option<usize>,
    pub ell_list: Option<Vec<usize>>,
    /// Fixed m of an ℓ sweep.
    pub sweep_m: Option<usize>,
    pub s_list: Option<Vec<f64>>,
    pub eoc: Option<bool>,
    pub reference: ReferencePolicy,
}

struct Settings {
    m_list: Vec<usize>,
    ell: usize,
    ell_list: Vec<usize>,
    sweep_m: usize,
    s_list: Vec<f64>,
    eoc: bool,
}

impl Settings {
    fn resolve(entry: &ProblemRegistryEntry, ov: &Overrides) -> Result<Self> {
        let d = &entry.defaults;
        let s = Self {
            m_list: ov.m_list.clone().unwrap_or_else(|| d.m_list.clone()),
            ell: ov.ell.unwrap_or(d.ell),
            ell_list: ov.ell_list.clone().unwrap_or_else(|| d.ell_list.clone()),
            sweep_m: ov.sweep_m.unwrap_or(d.sweep_m),
            s_list: ov.s_list.clone().unwrap_or_else(|| d.s_list.clone()),
            eoc: ov.eoc.unwrap_or(d.eoc),
        };
        let bad = |what: &str| Err(HarnessError::InvalidSetting(what.to_string()));
        if s.m_list.is_empty() || s.m_list.contains(&0) || s.sweep_m == 0 {
            return bad("m values must be positive and the m list non-empty");
        }
        if s.ell == 0 || s.ell_list.is_empty() || s.ell_list.contains(&0) {
            return bad("ℓ values must be positive and the ℓ list non-empty");
        }
        if s.s_list.is_empty() || s.s_list.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return bad("s points must lie in [0, 1] and the s list be non-empty");
        }
        Ok(s)
    }
}

/// Values along a figure's horizontal axis and one column per curve.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureData {
    pub problem_id: String,
    pub name: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub log_y: bool,
    pub reference: ReferenceMode,
    pub timestamp: u64,
}

pub struct Harness {
    registry: Registry,
    cache: ReferenceCache,
}

impl Harness {
    pub fn new(registry: Registry, cache: ReferenceCache) -> Self {
        Self { registry, cache }
    }

    /// Built-in problems, cache directory from the environment.
    pub fn builtin() -> Self {
        Self::new(Registry::builtin(), ReferenceCache::from_env())
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn register(&mut self, entry: ProblemRegistryEntry) -> Result<()> {
        self.registry.register(entry)
    }

    pub fn cache(&self) -> &ReferenceCache {
        &self.cache
    }

    /// Error table by m at fixed ℓ, with cond∞ for equations.
    pub fn run_table(&self, id: &str, ov: &Overrides) -> Result<ExperimentReport> {
        let entry = self.registry.lookup(id)?;
        let set = Settings::resolve(entry, ov)?;
        let cells: Vec<_> = set.m_list.iter().map(|&m| (m, m, set.ell)).collect();
        let (rows, reference) = match &entry.problem {
            ProblemKind::Quadrature(_) => return self.quadrature_error_sweep(id, ov),
            ProblemKind::Real(p) => self.equation_rows(entry, p, ov.reference, &cells, &set.s_list)?,
            ProblemKind::Complex(p) => self.equation_rows(entry, p, ov.reference, &cells, &set.s_list)?,
        };
        Ok(report(
            entry,
            ReportKind::Table,
            set.ell,
            reference,
            set.s_list,
            rows,
            set.eoc,
        ))
    }

    /// Quadrature errors `|Vf(s) − V_m f(s)|` by m at fixed ℓ.
    pub fn quadrature_error_sweep(&self, id: &str, ov: &Overrides) -> Result<ExperimentReport> {
        let entry = self.registry.lookup(id)?;
        let set = Settings::resolve(entry, ov)?;
        let q = quadrature_problem(entry, "quadrature")?;
        if ov.reference == ReferencePolicy::ReferenceRun {
            return Err(HarnessError::Unsupported {
                op: "reference run",
                id: id.to_string(),
                reason: "quadrature problems are measured against their exact integral",
            });
        }
        let rows = set
            .m_list
            .par_iter()
            .map(|&m| self.quadrature_row(q, m, set.ell, m, &set.s_list))
            .collect::<Result<Vec<_>>>()?;
        Ok(report(
            entry,
            ReportKind::Quadrature,
            set.ell,
            ReferenceMode::ClosedForm,
            set.s_list,
            rows,
            set.eoc,
        ))
    }

    /// Errors by ℓ at fixed m.
    pub fn run_ell_sweep(&self, id: &str, ov: &Overrides) -> Result<ExperimentReport> {
        let entry = self.registry.lookup(id)?;
        let set = Settings::resolve(entry, ov)?;
        let m = set.sweep_m;
        let cells: Vec<_> = set.ell_list.iter().map(|&ell| (ell, m, ell)).collect();
        let (rows, reference) = match &entry.problem {
            ProblemKind::Quadrature(q) => {
                let rows = set
                    .ell_list
                    .par_iter()
                    .map(|&ell| self.quadrature_row(q, m, ell, ell, &set.s_list))
                    .collect::<Result<Vec<_>>>()?;
                (rows, ReferenceMode::ClosedForm)
            }
            ProblemKind::Real(p) => self.equation_rows(entry, p, ov.reference, &cells, &set.s_list)?,
            ProblemKind::Complex(p) => self.equation_rows(entry, p, ov.reference, &cells, &set.s_list)?,
        };
        Ok(report(
            entry,
            ReportKind::EllSweep,
            m,
            reference,
            set.s_list,
            rows,
            false,
        ))
    }

    /// Data behind the entry's figure.
    pub fn figure(&self, id: &str, ov: &Overrides) -> Result<FigureData> {
        let entry = self.registry.lookup(id)?;
        let spec = entry.figure.as_ref().ok_or_else(|| HarnessError::Unsupported {
            op: "figure",
            id: id.to_string(),
            reason: "no figure is defined for this problem",
        })?;
        match (spec, &entry.problem) {
            (FigureSpec::MaxErrorVsEll { m, ells, points }, ProblemKind::Real(p)) => {
                let m = ov.sweep_m.unwrap_or(*m);
                let ells = ov.ell_list.clone().unwrap_or_else(|| ells.clone());
                self.max_error_figure(entry, p, ov.reference, m, &ells, *points)
            }
            (FigureSpec::MaxErrorVsEll { m, ells, points }, ProblemKind::Complex(p)) => {
                let m = ov.sweep_m.unwrap_or(*m);
                let ells = ov.ell_list.clone().unwrap_or_else(|| ells.clone());
                self.max_error_figure(entry, p, ov.reference, m, &ells, *points)
            }
            (FigureSpec::SolutionOverlay { ms, ell, points }, ProblemKind::Real(p)) => {
                let ms = ov.m_list.clone().unwrap_or_else(|| ms.clone());
                self.overlay_figure(entry, p, ov.reference, &ms, ov.ell.unwrap_or(*ell), *points)
            }
            _ => Err(HarnessError::Unsupported {
                op: "figure",
                id: id.to_string(),
                reason: "figure kind does not match the problem type",
            }),
        }
    }

    fn solve<T: Scalar>(&self, p: &VolterraProblem<T>, m: usize, ell: usize) -> Result<NystromSolution<T>> {
        Ok(solve_with_operator(p, self.cache.operator(m, ell)?)?)
    }

    fn reference<T: CacheScalar>(
        &self,
        entry: &ProblemRegistryEntry,
        p: &VolterraProblem<T>,
        policy: ReferencePolicy,
        points: &[f64],
    ) -> Result<(Vec<T>, ReferenceMode)> {
        let closed = p.has_exact_solution() && policy != ReferencePolicy::ReferenceRun;
        if closed {
            let values = points
                .iter()
                .map(|&s| p.exact(s).expect("checked above"))
                .collect();
            return Ok((values, ReferenceMode::ClosedForm));
        }
        if policy == ReferencePolicy::ClosedForm {
            return Err(HarnessError::NoClosedForm(entry.id.clone()));
        }
        let sol = self.cache.reference_solution(&entry.id, p)?;
        Ok((sol.interpolant_many(p, points)?, ReferenceMode::ReferenceRun))
    }

    /// One row per `(param, m, ℓ)` cell.
    fn equation_rows<T: CacheScalar>(
        &self,
        entry: &ProblemRegistryEntry,
        p: &VolterraProblem<T>,
        policy: ReferencePolicy,
        cells: &[(usize, usize, usize)],
        s_list: &[f64],
    ) -> Result<(Vec<ReportRow>, ReferenceMode)> {
        let (want, mode) = self.reference(entry, p, policy, s_list)?;
        let rows = cells
            .par_iter()
            .map(|&(param, m, ell)| {
                let sol = self.solve(p, m, ell)?;
                let got = sol.interpolant_many(p, s_list)?;
                Ok(ReportRow {
                    param,
                    errors: got.iter().zip(&want).map(|(a, b)| (*a - *b).modulus()).collect(),
                    eoc: vec![],
                    cond: Some(sol.cond_inf()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((rows, mode))
    }

    fn quadrature_row(
        &self,
        q: &QuadratureProblem,
        m: usize,
        ell: usize,
        param: usize,
        s_list: &[f64],
    ) -> Result<ReportRow> {
        let vq = VolterraQuadrature::new(self.cache.operator(m, ell)?, q.weights)?;
        let samples: Vec<f64> = vq.operator().nodes().iter().map(|&t| (q.integrand)(t)).collect();
        let table = vq.table(s_list)?;
        let errors = s_list
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let v = vq.apply_with(table.row(i), |t, s| (q.kernel)(t, s), &samples, s)?;
                Ok(((q.exact)(s) - v).abs())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReportRow {
            param,
            errors,
            eoc: vec![],
            cond: None,
        })
    }

    fn max_error_figure<T: CacheScalar>(
        &self,
        entry: &ProblemRegistryEntry,
        p: &VolterraProblem<T>,
        policy: ReferencePolicy,
        m: usize,
        ells: &[usize],
        points: usize,
    ) -> Result<FigureData> {
        // equispaced points strictly inside (0, 1)
        let grid: Vec<f64> = (1..=points).map(|i| i as f64 / (points + 1) as f64).collect();
        let (want, reference) = self.reference(entry, p, policy, &grid)?;
        let rows = ells
            .par_iter()
            .map(|&ell| {
                let got = self.solve(p, m, ell)?.interpolant_many(p, &grid)?;
                let worst = got
                    .iter()
                    .zip(&want)
                    .map(|(a, b)| (*a - *b).modulus())
                    .fold(0.0, f64::max);
                Ok(vec![ell as f64, worst])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FigureData {
            problem_id: entry.id.clone(),
            name: "max-error-vs-ell",
            header: vec!["ell".into(), format!("max_error(m={m})")],
            rows,
            log_y: true,
            reference,
            timestamp: now(),
        })
    }

    fn overlay_figure(
        &self,
        entry: &ProblemRegistryEntry,
        p: &VolterraProblem<f64>,
        policy: ReferencePolicy,
        ms: &[usize],
        ell: usize,
        points: usize,
    ) -> Result<FigureData> {
        let grid: Vec<f64> = (0..=points).map(|i| i as f64 / points as f64).collect();
        let (reference_values, reference) = self.reference(entry, p, policy, &grid)?;
        let curves = ms
            .par_iter()
            .map(|&m| {
                self.solve(p, m, ell)?
                    .interpolant_many(p, &grid)
                    .map_err(Into::into)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut header = vec!["s".to_string()];
        header.push(match reference {
            ReferenceMode::ClosedForm => "exact".to_string(),
            ReferenceMode::ReferenceRun => format!("f_{REFERENCE_DEGREE}"),
        });
        header.extend(ms.iter().map(|m| format!("f_{m}")));
        let rows = grid
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let mut row = vec![s, reference_values[i]];
                row.extend(curves.iter().map(|c| c[i]));
                row
            })
            .collect();
        Ok(FigureData {
            problem_id: entry.id.clone(),
            name: "solutions",
            header,
            rows,
            log_y: false,
            reference,
            timestamp: now(),
        })
    }
}

fn quadrature_problem<'a>(
    entry: &'a ProblemRegistryEntry,
    op: &'static str,
) -> Result<&'a QuadratureProblem> {
    match &entry.problem {
        ProblemKind::Quadrature(q) => Ok(q),
        _ => Err(HarnessError::Unsupported {
            op,
            id: entry.id.clone(),
            reason: "only quadrature problems have a discrete-operator error sweep",
        }),
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

fn report(
    entry: &ProblemRegistryEntry,
    kind: ReportKind,
    fixed: usize,
    reference: ReferenceMode,
    s_points: Vec<f64>,
    mut rows: Vec<ReportRow>,
    show_eoc: bool,
) -> ExperimentReport {
    if kind == ReportKind::EllSweep {
        for r in &mut rows {
            r.eoc = vec![None; r.errors.len()];
        }
    } else {
        fill_eoc(&mut rows);
    }
    ExperimentReport {
        metadata: ReportMetadata {
            problem_id: entry.id.clone(),
            kind,
            fixed,
            reference,
            timestamp: now(),
        },
        s_points,
        rows,
        show_eoc,
    }
}
