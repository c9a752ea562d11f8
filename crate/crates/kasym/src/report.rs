//! CSV and JSON renderings of every subcommand's output.
//!
//! CSV columns are fixed per report; complex numbers occupy `re_*`/`im_*`
//! column pairs and JSON uses `{re, im}` objects. Floats are written in
//! shortest round-trip form, so equal inputs give byte-identical files. The
//! sweep's `runtime_ms` column is the only one that varies between runs.

use std::path::{Path, PathBuf};

use kasym_core::converge::{ConvergenceRecord, OrderFit, RowFailure, Variant};
use kasym_core::kernel::{DiscrepancyReport, FormMode};
use kasym_core::pairing::{Lemma1Check, PairingResult};
use kasym_core::quad::PrescriptionMode;
use kasym_core::wavesolve::PointSolution;
use kasym_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub trait Report: Serialize {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()>;

    fn to_csv(&self) -> String {
        csv_string(|w| self.write_csv(w))
    }

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn csv_string(body: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    body(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

/// Shortest round-trip text; exponent form outside `[1e-5, 1e16)`.
fn num(x: f64) -> String {
    let m = x.abs();
    if m != 0.0 && m.is_finite() && !(1e-5..1e16).contains(&m) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TknRow {
    pub k: u32,
    #[serde(rename = "N")]
    pub n_cut: f64,
    pub xi1: f64,
    pub mode: FormMode,
    #[serde(with = "kasym_core::serde_complex")]
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TknReport {
    pub rows: Vec<TknRow>,
}

impl Report for TknReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["k", "N", "xi1", "mode", "re", "im"])?;
        for r in &self.rows {
            w.write_record([r.k.to_string(), num(r.n_cut), num(r.xi1), r.mode.to_string(), num(r.value.re), num(r.value.im)])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub a: f64,
    pub mode: PrescriptionMode,
    #[serde(with = "kasym_core::serde_complex")]
    pub value: Complex64,
    pub error_estimate: f64,
    /// Truncation of the inner integral.
    #[serde(rename = "N")]
    pub cutoff: f64,
}

impl Report for PairReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["a", "mode", "re", "im", "error_estimate", "N"])?;
        w.write_record([
            num(self.a),
            self.mode.to_string(),
            num(self.value.re),
            num(self.value.im),
            num(self.error_estimate),
            num(self.cutoff),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub a: f64,
    pub order: usize,
    pub variant: Variant,
    /// Coefficient forms; only meaningful for the sharp expansion.
    pub mode: Option<FormMode>,
    pub result: PairingResult,
}

impl Report for ExpansionReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["term", "re", "im", "error_estimate"])?;
        for (label, z) in &self.result.terms {
            w.write_record([label.clone(), num(z.re), num(z.im), String::new()])?;
        }
        let v = self.result.value;
        w.write_record(["value".to_string(), num(v.re), num(v.im), num(self.result.error_estimate)])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub order: usize,
    pub mode: PrescriptionMode,
    pub fit: Option<OrderFit>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<ConvergenceRecord>,
    pub failures: Vec<RowFailure>,
    pub fits: Vec<FitRow>,
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "a",
    "mode",
    "order",
    "re_exact",
    "im_exact",
    "re_approx",
    "im_approx",
    "abs_error",
    "rel_error",
    "error_estimate",
    "error",
    "runtime_ms",
];

impl Report for SweepReport {
    /// Records (failed rows carry only `a`, `mode`, `order` and `error`),
    /// then, when any fits exist, a blank line and the fit table.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(SWEEP_COLUMNS)?;
        for r in &self.records {
            w.write_record([
                num(r.a),
                r.mode.to_string(),
                r.order.to_string(),
                num(r.exact.re),
                num(r.exact.im),
                num(r.approx.re),
                num(r.approx.im),
                num(r.abs_error),
                opt(r.rel_error),
                num(r.error_estimate),
                String::new(),
                num(r.runtime_ms),
            ])?;
        }
        for f in &self.failures {
            let mut row = vec![String::new(); SWEEP_COLUMNS.len()];
            row[0] = num(f.a);
            row[1] = f.mode.to_string();
            row[2] = f.order.map(|o| o.to_string()).unwrap_or_default();
            row[10] = f.message.clone();
            w.write_record(&row)?;
        }
        Ok(())
    }

    fn to_csv(&self) -> String {
        let mut text = csv_string(|w| self.write_csv(w));
        if !self.fits.is_empty() {
            text.push('\n');
            text.push_str(&csv_string(|w| self.write_fits(w)));
        }
        text
    }
}

impl SweepReport {
    fn write_fits(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["order", "mode", "fitted_power", "r_squared", "points_used", "error"])?;
        for f in &self.fits {
            let (p, r2, n) = match &f.fit {
                Some(fit) => (num(fit.fitted_power), num(fit.r_squared), fit.points_used.to_string()),
                None => Default::default(),
            };
            w.write_record([f.order.to_string(), f.mode.to_string(), p, r2, n, f.error.clone().unwrap_or_default()])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub k: usize,
    pub grid: usize,
    pub halfwidth: f64,
    pub check: Lemma1Check,
}

impl Report for Lemma1Report {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["k", "grid", "halfwidth", "direct", "re_dft", "im_dft", "discrepancy"])?;
        let c = &self.check;
        w.write_record([
            self.k.to_string(),
            self.grid.to_string(),
            num(self.halfwidth),
            num(c.direct),
            num(c.dft.re),
            num(c.dft.im),
            num(c.discrepancy),
        ])
    }
}

impl Report for DiscrepancyReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["k", "N", "xi1", "paper_literal", "derived", "oracle", "paper_gap", "derived_gap", "verdict", "error"])?;
        for r in &self.rows {
            w.write_record([
                r.k.to_string(),
                num(r.n_cut),
                num(r.xi1),
                num(r.paper_literal),
                num(r.derived),
                opt(r.oracle),
                opt(r.paper_gap),
                opt(r.derived_gap),
                r.verdict.name().to_string(),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub factorization: String,
    pub a: f64,
    pub order: usize,
    pub mode: FormMode,
    pub points: Vec<PointSolution>,
}

impl Report for SolveReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record([
            "xi1",
            "xi2",
            "re_principal",
            "im_principal",
            "re_correction",
            "im_correction",
            "re",
            "im",
            "error_estimate",
            "error",
        ])?;
        for p in &self.points {
            let fields = if p.error.is_some() {
                vec![String::new(); 7]
            } else {
                vec![
                    num(p.principal.re),
                    num(p.principal.im),
                    num(p.correction.re),
                    num(p.correction.im),
                    num(p.value.re),
                    num(p.value.im),
                    num(p.error_estimate),
                ]
            };
            let mut row = vec![num(p.xi.0), num(p.xi.1)];
            row.extend(fields);
            row.push(p.error.clone().unwrap_or_default());
            w.write_record(&row)?;
        }
        Ok(())
    }
}

/// Where a report goes: an explicit file, a file named after the subcommand
/// in the output directory, or standard output.
pub fn destination(out: Option<&Path>, output_dir: Option<&Path>, name: &str, format: Format) -> Option<PathBuf> {
    match (out, output_dir) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(format!("{name}.{}", format.extension()))),
        (None, None) => None,
    }
}

pub fn write_report(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
            }
            std::fs::write(p, text).map_err(|e| CliError::io(p, e))
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
