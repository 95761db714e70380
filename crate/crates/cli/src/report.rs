//! Error tables and the estimated order of convergence.

use crate::problems::ReferenceMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportKind {
    /// Nyström errors by m at fixed ℓ.
    Table,
    /// Errors by ℓ at fixed m.
    EllSweep,
    /// Quadrature errors by m at fixed ℓ.
    Quadrature,
}

impl ReportKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportKind::Table => "table",
            ReportKind::EllSweep => "ell-sweep",
            ReportKind::Quadrature => "quadrature",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportMetadata {
    pub problem_id: String,
    pub kind: ReportKind,
    /// Fixed ℓ for by-m reports, fixed m for ℓ sweeps.
    pub fixed: usize,
    pub reference: ReferenceMode,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    /// m, or ℓ for a sweep.
    pub param: usize,
    pub errors: Vec<f64>,
    pub eoc: Vec<Option<f64>>,
    pub cond: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    /// Column labels, one per error column.
    pub s_points: Vec<f64>,
    pub rows: Vec<ReportRow>,
    pub show_eoc: bool,
}

impl ExperimentReport {
    pub fn param_name(&self) -> &'static str {
        match self.metadata.kind {
            ReportKind::EllSweep => "ell",
            ReportKind::Table | ReportKind::Quadrature => "m",
        }
    }

    pub fn has_cond(&self) -> bool {
        self.rows.iter().any(|r| r.cond.is_some())
    }

    pub fn row(&self, param: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.param == param)
    }

    /// Error at (`param`, column for `s`).
    pub fn error(&self, param: usize, s: f64) -> Option<f64> {
        let col = self.s_points.iter().position(|&x| x == s)?;
        self.row(param).map(|r| r.errors[col])
    }

    pub fn eoc(&self, param: usize, s: f64) -> Option<f64> {
        let col = self.s_points.iter().position(|&x| x == s)?;
        self.row(param).and_then(|r| r.eoc[col])
    }
}

/// `log(ε_m / ε_{2m}) / log 2`, or `None` unless both errors are positive
/// and finite.
pub fn compute_eoc(error_m: f64, error_2m: f64) -> Option<f64> {
    let ok = |e: f64| e > 0.0 && e.is_finite();
    (ok(error_m) && ok(error_2m)).then(|| (error_m / error_2m).log2())
}

/// Fills `eoc` on each row whose successor has twice its m.
pub(crate) fn fill_eoc(rows: &mut [ReportRow]) {
    let n = rows.len();
    for r in 0..n {
        let width = rows[r].errors.len();
        let next = rows.get(r + 1).filter(|next| next.param == 2 * rows[r].param);
        rows[r].eoc = match next {
            Some(next) => (0..width)
                .map(|c| compute_eoc(rows[r].errors[c], next.errors[c]))
                .collect(),
            None => vec![None; width],
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(param: usize, errors: Vec<f64>) -> ReportRow {
        ReportRow {
            param,
            eoc: vec![],
            errors,
            cond: None,
        }
    }

    #[test]
    fn eoc_examples() {
        assert!((compute_eoc(4e-4, 1e-4).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(compute_eoc(3e-7, 3e-7), Some(0.0));
        let e = compute_eoc(2.11e-9, 1.82e-10).unwrap();
        // the inputs are rounded to three digits, which moves the ratio slightly
        assert!((e - 3.53).abs() < 1e-2, "{e}");
        assert_eq!(compute_eoc(0.0, 1e-3), None);
        assert_eq!(compute_eoc(1e-3, -1.0), None);
        assert_eq!(compute_eoc(f64::NAN, 1.0), None);
    }

    #[test]
    fn eoc_only_between_doublings() {
        let mut rows = vec![
            row(4, vec![1e-2, 0.0]),
            row(8, vec![2.5e-3, 1e-5]),
            row(32, vec![1e-4, 1e-6]),
            row(64, vec![1e-4, 1e-6]),
        ];
        fill_eoc(&mut rows);
        assert!((rows[0].eoc[0].unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(rows[0].eoc[1], None);
        assert_eq!(rows[1].eoc, vec![None, None]);
        assert_eq!(rows[2].eoc, vec![Some(0.0), Some(0.0)]);
        assert_eq!(rows[3].eoc, vec![None, None]);
    }
}
