//! Parallel convergence sweep and per-(order, mode) fits.

use std::time::Instant;

use kasym_core::converge::{fit_order, select, sweep_cell, SweepGrid, SweepOutput};
use kasym_core::quad::QuadratureSpec;
use kasym_core::testfn::TestFunction;
use rayon::prelude::*;

use crate::error::{CliError, CliResult, FieldError};
use crate::report::{FitRow, SweepReport};

/// Runs every `(a, mode)` cell on the rayon pool. Rows are assembled and
/// sorted on the calling thread, so the output order never depends on
/// scheduling.
pub fn run_sweep(f: &TestFunction, grid: &SweepGrid, spec: &QuadratureSpec) -> CliResult<SweepReport> {
    let mut problems: Vec<FieldError> = grid
        .validation_errors()
        .into_iter()
        .chain(spec.validation_errors())
        .map(|e| FieldError::new("sweep", e.to_string()))
        .collect();
    if !problems.is_empty() {
        problems.dedup();
        return Err(CliError::Validation(problems));
    }

    let origin = Instant::now();
    let clock = move || origin.elapsed().as_secs_f64() * 1e3;
    let cells: Vec<SweepOutput> = grid
        .cells()
        .into_par_iter()
        .map(|(a, mode)| sweep_cell(f, a, mode, grid, spec, &clock))
        .collect();
    let mut out = SweepOutput::default();
    for cell in cells {
        out.extend(cell);
    }
    out.sort();
    let fits = fits(&out, grid);
    Ok(SweepReport {
        records: out.records,
        failures: out.failures,
        fits,
    })
}

/// One fit per `(order, mode)` with at least three rows.
pub fn fits(out: &SweepOutput, grid: &SweepGrid) -> Vec<FitRow> {
    let mut rows = Vec::new();
    for &order in &grid.orders {
        for &mode in &grid.modes {
            let recs = select(&out.records, order, mode);
            if recs.len() < 3 {
                continue;
            }
            let (fit, error) = match fit_order(&recs) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            rows.push(FitRow { order, mode, fit, error });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use kasym_core::converge::sweep;
    use kasym_core::quad::PrescriptionMode;

    use super::*;
    use crate::config::preset;

    #[test]
    fn parallel_matches_sequential() {
        let f = preset("xi1-gaussian").unwrap();
        let grid = SweepGrid {
            a_values: vec![10.0, 30.0, 100.0],
            orders: vec![0, 2],
            modes: vec![PrescriptionMode::Pv, PrescriptionMode::Paper],
            ..SweepGrid::default()
        };
        let spec = QuadratureSpec::default();
        let par = run_sweep(&f, &grid, &spec).unwrap();
        let seq = sweep(&f, &grid, &spec).unwrap();
        assert_eq!(par.records.len(), seq.records.len());
        for (p, s) in par.records.iter().zip(&seq.records) {
            assert_eq!((p.a, p.mode, p.order, p.exact, p.approx), (s.a, s.mode, s.order, s.exact, s.approx));
        }
        assert_eq!(par.fits.len(), 4);
    }

    #[test]
    fn invalid_grid_is_a_validation_error() {
        let grid = SweepGrid {
            a_values: vec![],
            orders: vec![],
            ..SweepGrid::default()
        };
        let err = run_sweep(&preset("gaussian").unwrap(), &grid, &QuadratureSpec::default()).unwrap_err();
        match err {
            CliError::Validation(v) => assert_eq!(v.len(), 2),
            e => panic!("{e}"),
        }
    }
}
