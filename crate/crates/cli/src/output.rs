//! CSV/TSV tables, metadata sidecars and plot scripts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{io_err, HarnessError, Result};
use crate::harness::FigureData;
use crate::report::ExperimentReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Tsv,
}

impl OutputFormat {
    pub fn delimiter(self) -> u8 {
        match self {
            OutputFormat::Csv => b',',
            OutputFormat::Tsv => b'\t',
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Tsv => "tsv",
        }
    }
}

/// C-style `%.2e`: `1.93e+00`, `5.27e-16`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("LowerExp output has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// `%.2f`.
pub fn format_fixed(x: f64) -> String {
    format!("{x:.2}")
}

fn s_label(s: f64) -> String {
    format!("{s}")
}

pub fn header(report: &ExperimentReport) -> Vec<String> {
    let prefix = match report.metadata.kind {
        crate::report::ReportKind::Quadrature => "e",
        _ => "eps",
    };
    let mut h = vec![report.param_name().to_string()];
    for &s in &report.s_points {
        h.push(format!("{prefix}({})", s_label(s)));
        if report.show_eoc {
            h.push(format!("eoc({})", s_label(s)));
        }
    }
    if report.has_cond() {
        h.push("cond".into());
    }
    h
}

/// Writes the table body; output depends only on the report's rows.
pub fn write_report<W: Write>(report: &ExperimentReport, out: W, format: OutputFormat) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(out);
    w.write_record(header(report))?;
    let with_cond = report.has_cond();
    for row in &report.rows {
        let mut rec = vec![row.param.to_string()];
        for (c, &e) in row.errors.iter().enumerate() {
            rec.push(format_sci(e));
            if report.show_eoc {
                rec.push(
                    row.eoc
                        .get(c)
                        .copied()
                        .flatten()
                        .map(format_fixed)
                        .unwrap_or_default(),
                );
            }
        }
        if with_cond {
            rec.push(row.cond.map(format_sci).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_figure<W: Write>(fig: &FigureData, out: W, format: OutputFormat) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(out);
    w.write_record(&fig.header)?;
    for row in &fig.rows {
        // full precision for plotted data
        w.write_record(row.iter().map(|v| format!("{v:.17e}")))?;
    }
    w.flush()?;
    Ok(())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn write_csv_file(path: &Path, body: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    body(&mut buf).map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    fs::write(path, buf).map_err(io_err(path))
}

fn write_meta(path: &Path, pairs: &[(&str, String)]) -> Result<()> {
    let mut text = String::new();
    for (k, v) in pairs {
        text.push_str(&format!("{k}={v}\n"));
    }
    fs::write(path, text).map_err(io_err(path))
}

/// Writes `<id>_<kind>.<ext>` and a `.meta` sidecar holding the timestamp.
pub fn emit_outputs(report: &ExperimentReport, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let md = &report.metadata;
    let stem = format!("{}_{}", md.problem_id, md.kind.as_str().replace('-', "_"));
    let table = dir.join(format!("{stem}.{}", format.extension()));
    write_csv_file(&table, |buf| write_report(report, buf, format))?;
    let meta = dir.join(format!("{stem}.meta"));
    let fixed_name = if report.param_name() == "ell" { "m" } else { "ell" };
    write_meta(
        &meta,
        &[
            ("problem", md.problem_id.clone()),
            ("kind", md.kind.as_str().to_string()),
            (fixed_name, md.fixed.to_string()),
            ("reference", md.reference.to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("timestamp", md.timestamp.to_string()),
        ],
    )?;
    Ok(vec![table, meta])
}

/// Writes the figure data, a `.meta` sidecar and a matplotlib script.
pub fn emit_figure(fig: &FigureData, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let stem = format!("{}_{}", fig.problem_id, fig.name.replace('-', "_"));
    let data_name = format!("{stem}.{}", format.extension());
    let data = dir.join(&data_name);
    write_csv_file(&data, |buf| write_figure(fig, buf, format))?;
    let meta = dir.join(format!("{stem}.meta"));
    write_meta(
        &meta,
        &[
            ("problem", fig.problem_id.clone()),
            ("figure", fig.name.to_string()),
            ("reference", fig.reference.to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("timestamp", fig.timestamp.to_string()),
        ],
    )?;
    let script = dir.join(format!("{stem}.py"));
    fs::write(
        &script,
        plot_script(&data_name, format, fig.log_y, &format!("{stem}.png")),
    )
    .map_err(io_err(&script))?;
    Ok(vec![data, meta, script])
}

fn plot_script(data: &str, format: OutputFormat, log_y: bool, image: &str) -> String {
    let delimiter = if format == OutputFormat::Tsv { "\\t" } else { "," };
    let py_bool = if log_y { "True" } else { "False" };
    format!(
        r#"# Plots the first column against every other column.
import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "{data}")
LOG_Y = {py_bool}

with open(DATA, newline="") as fh:
    rows = list(csv.reader(fh, delimiter="{delimiter}"))
header, body = rows[0], rows[1:]
x = [float(r[0]) for r in body]
fig, ax = plt.subplots()
for col, name in enumerate(header[1:], start=1):
    ax.plot(x, [float(r[col]) for r in body], marker="o" if LOG_Y else None, label=name)
if LOG_Y:
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
ax.set_xlabel(header[0])
ax.legend()
fig.savefig(os.path.join(HERE, "{image}"), dpi=150)
"#
    )
}
