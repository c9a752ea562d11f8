//! Sweeps of expansion errors against the exact pairing over the cone
//! parameter, and least-squares fits of the empirical decay order.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::FormMode;
use crate::pairing::{rough_expansion, sharp_expansion};
use crate::quad::{pairing_exact, PrescriptionMode, QuadratureSpec};
use crate::testfn::TestFunction;
use crate::{Complex64, Error, Result};

/// Relative errors are reported only above this `|exact|`.
pub const REL_ERROR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Variant {
    Rough,
    #[default]
    Sharp,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Rough => "rough",
            Variant::Sharp => "sharp",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Variant::Rough, Variant::Sharp].into_iter().find(|v| v.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceRecord {
    pub a: f64,
    pub mode: PrescriptionMode,
    pub order: usize,
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub exact: Complex64,
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub approx: Complex64,
    pub abs_error: f64,
    pub rel_error: Option<f64>,
    /// Combined quadrature error estimate of `exact` and `approx`.
    pub error_estimate: f64,
    /// Wall time for the row; the only field that varies between runs.
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RowFailure {
    pub a: f64,
    pub mode: PrescriptionMode,
    pub order: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepOutput {
    pub records: Vec<ConvergenceRecord>,
    pub failures: Vec<RowFailure>,
}

impl SweepOutput {
    /// Stable order by `(a, order, mode)`.
    pub fn sort(&mut self) {
        self.records.sort_by(|x, y| {
            x.a.total_cmp(&y.a)
                .then(x.order.cmp(&y.order))
                .then(x.mode.cmp(&y.mode))
        });
        self.failures.sort_by(|x, y| {
            x.a.total_cmp(&y.a)
                .then(x.order.cmp(&y.order))
                .then(x.mode.cmp(&y.mode))
        });
    }

    pub fn extend(&mut self, other: SweepOutput) {
        self.records.extend(other.records);
        self.failures.extend(other.failures);
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SweepGrid {
    pub a_values: Vec<f64>,
    pub orders: Vec<usize>,
    pub modes: Vec<PrescriptionMode>,
    pub variant: Variant,
    /// Coefficient forms used by the sharp expansion.
    pub coeff_mode: FormMode,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            a_values: vec![10.0, 30.0, 100.0, 300.0],
            orders: vec![0, 2, 4],
            modes: PrescriptionMode::ALL.to_vec(),
            variant: Variant::Sharp,
            coeff_mode: FormMode::Derived,
        }
    }
}

impl SweepGrid {
    pub fn validation_errors(&self) -> Vec<Error> {
        let mut errors = Vec::new();
        if self.a_values.is_empty() || self.a_values.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            errors.push(Error::invalid("a_values", "must be a nonempty list of positive numbers"));
        }
        if self.orders.is_empty() {
            errors.push(Error::invalid("orders", "must be nonempty"));
        }
        if self.modes.is_empty() {
            errors.push(Error::invalid("modes", "must be nonempty"));
        }
        errors
    }

    /// `(a, mode)` cells in grid order; each cell covers every order.
    pub fn cells(&self) -> Vec<(f64, PrescriptionMode)> {
        self.a_values
            .iter()
            .flat_map(|&a| self.modes.iter().map(move |&m| (a, m)))
            .collect()
    }
}

/// Computes every record of one `(a, mode)` cell. `clock` returns
/// milliseconds from an arbitrary origin and is read around each row.
pub fn sweep_cell(
    f: &TestFunction,
    a: f64,
    mode: PrescriptionMode,
    grid: &SweepGrid,
    spec: &QuadratureSpec,
    clock: &dyn Fn() -> f64,
) -> SweepOutput {
    let mut out = SweepOutput::default();
    let start = clock();
    let exact = match pairing_exact(f, a, mode, spec) {
        Ok(e) => e,
        Err(e) => {
            out.failures.push(RowFailure {
                a,
                mode,
                order: None,
                message: e.to_string(),
            });
            return out;
        }
    };
    let exact_ms = clock() - start;
    for &order in &grid.orders {
        let t0 = clock();
        let approx = match grid.variant {
            Variant::Sharp => sharp_expansion(f, a, order, grid.coeff_mode, spec),
            Variant::Rough => rough_expansion(f, a, order, spec),
        };
        match approx {
            Ok(p) => {
                let abs_error = (exact.value - p.value).norm();
                let scale = exact.value.norm();
                out.records.push(ConvergenceRecord {
                    a,
                    mode,
                    order,
                    exact: exact.value,
                    approx: p.value,
                    abs_error,
                    rel_error: (scale > REL_ERROR_FLOOR).then(|| abs_error / scale),
                    error_estimate: exact.error + p.error_estimate,
                    runtime_ms: exact_ms + (clock() - t0),
                });
            }
            Err(e) => out.failures.push(RowFailure {
                a,
                mode,
                order: Some(order),
                message: e.to_string(),
            }),
        }
    }
    out
}

/// Sequential sweep without timing (every `runtime_ms` is zero).
pub fn sweep(f: &TestFunction, grid: &SweepGrid, spec: &QuadratureSpec) -> Result<SweepOutput> {
    sweep_timed(f, grid, spec, &|| 0.0)
}

pub fn sweep_timed(f: &TestFunction, grid: &SweepGrid, spec: &QuadratureSpec, clock: &dyn Fn() -> f64) -> Result<SweepOutput> {
    if let Some(e) = grid.validation_errors().into_iter().next() {
        return Err(e);
    }
    spec.validate()?;
    let mut out = SweepOutput::default();
    for (a, mode) in grid.cells() {
        out.extend(sweep_cell(f, a, mode, grid, spec, clock));
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderFit {
    pub fitted_power: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Least-squares slope of `ln(abs_error)` against `ln(1/a)`.
pub fn fit_order(records: &[ConvergenceRecord]) -> Result<OrderFit> {
    if records.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: records.len(),
        });
    }
    let first = &records[0];
    if records.iter().any(|r| r.order != first.order || r.mode != first.mode) {
        return Err(Error::invalid("records", "must share order and mode"));
    }
    let mut a_values: Vec<f64> = records.iter().map(|r| r.a).collect();
    a_values.sort_by(f64::total_cmp);
    if a_values.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("records", "a values must be distinct"));
    }
    if records.iter().any(|r| r.abs_error == 0.0) {
        return Err(Error::BelowNoiseFloor);
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (-libm::log(r.a), libm::log(r.abs_error)))
        .collect();
    if pts.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(Error::invalid("records", "a and abs_error must be positive and finite"));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(OrderFit {
        fitted_power: slope,
        r_squared,
        points_used: pts.len(),
    })
}

/// Records of `output` with the given order and mode, in `a` order.
pub fn select(records: &[ConvergenceRecord], order: usize, mode: PrescriptionMode) -> Vec<ConvergenceRecord> {
    records
        .iter()
        .filter(|r| r.order == order && r.mode == mode)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::{gaussian, make_gaussian_hermite, Monomial};

    fn synthetic(power: f64) -> Vec<ConvergenceRecord> {
        [10.0, 30.0, 100.0, 300.0]
            .into_iter()
            .map(|a: f64| ConvergenceRecord {
                a,
                mode: PrescriptionMode::Pv,
                order: 0,
                exact: Complex64::new(1.0, 0.0),
                approx: Complex64::new(1.0, 0.0),
                abs_error: 3.7 * libm::pow(a, -power),
                rel_error: None,
                error_estimate: 0.0,
                runtime_ms: 0.0,
            })
            .collect()
    }

    #[test]
    fn fits_exact_power_laws() {
        for p in [1.0, 2.0, 0.5] {
            let fit = fit_order(&synthetic(p)).unwrap();
            assert!((fit.fitted_power - p).abs() < 1e-12, "{fit:?}");
            assert!(fit.r_squared > 1.0 - 1e-12);
            assert_eq!(fit.points_used, 4);
        }
    }

    #[test]
    fn fit_preconditions() {
        let recs = synthetic(1.0);
        assert!(matches!(fit_order(&recs[..2]), Err(Error::TooFewPoints { .. })));
        let mut zero = recs.clone();
        zero[1].abs_error = 0.0;
        assert!(matches!(fit_order(&zero), Err(Error::BelowNoiseFloor)));
        let mut mixed = recs.clone();
        mixed[2].order = 2;
        assert!(fit_order(&mixed).is_err());
        let mut dup = recs;
        dup[1].a = dup[0].a;
        assert!(fit_order(&dup).is_err());
    }

    #[test]
    fn even_function_order_zero() {
        let grid = SweepGrid {
            a_values: vec![10.0, 20.0],
            orders: vec![0],
            modes: vec![PrescriptionMode::Pv, PrescriptionMode::Paper],
            ..SweepGrid::default()
        };
        let out = sweep(&gaussian(), &grid, &QuadratureSpec::default()).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.records.len(), 4);
        for r in &out.records {
            assert!(r.approx.norm() < 1e-14);
            assert!((r.abs_error - r.exact.norm()).abs() < 1e-14);
            assert_eq!(r.abs_error, (r.exact - r.approx).norm());
        }
    }

    #[test]
    fn doubling_a_reduces_order_zero_error() {
        let f = make_gaussian_hermite((0.0, 0.0), 1.0, &[Monomial::new(1, 0, 1.0)]).unwrap();
        let grid = SweepGrid {
            a_values: vec![10.0, 20.0, 10.0],
            orders: vec![0],
            modes: vec![PrescriptionMode::Paper],
            ..SweepGrid::default()
        };
        let out = sweep(&f, &grid, &QuadratureSpec::default()).unwrap();
        let r = &out.records;
        assert_eq!(r.len(), 3);
        // duplicate inputs give identical rows
        assert_eq!(r[0], r[1]);
        assert!(r[2].abs_error < r[0].abs_error);
    }

    #[test]
    fn failures_do_not_abort() {
        let f = crate::testfn::make_bump(1.0).unwrap();
        let grid = SweepGrid {
            a_values: vec![5.0],
            orders: vec![0, 8],
            modes: vec![PrescriptionMode::Pv],
            ..SweepGrid::default()
        };
        let out = sweep(&f, &grid, &QuadratureSpec::default()).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].order, Some(8));
    }
}
