//! Closed forms of `T_{k,N}(xi1) = int_{-N}^{N} t^k / (xi1^2 - t^2) dt`, their
//! polynomial parts, the coefficients `c_{m,n}(a)` of the sharp expansion,
//! and a report comparing the printed formulas with quadrature.

use core::f64::consts::PI;

use crate::math::powi;
use crate::quad::{integrate_pv, Estimate, Extent, QuadratureSpec};
use crate::{Complex64, Error, Result};

mod coeff;
mod discrepancy;
mod poly;

pub use coeff::{coeff_table, coeff_table_with_multiplier, CoeffBlock, CoeffEntry, CoeffTable};
pub use discrepancy::{discrepancy_report, standard_grid, DiscrepancyReport, DiscrepancyRow, Verdict};
pub use poly::{derived_coeff, harmonic_coeff, literal_xi_power, p_poly, PPoly, PTerm, MAX_POLY_INDEX};

/// Which set of closed forms to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FormMode {
    /// The printed displays, taken verbatim.
    PaperLiteral,
    /// Forms generated by the recurrence, checked against quadrature.
    Derived,
}

impl FormMode {
    pub const ALL: [FormMode; 2] = [FormMode::PaperLiteral, FormMode::Derived];

    pub fn name(self) -> &'static str {
        match self {
            FormMode::PaperLiteral => "paper_literal",
            FormMode::Derived => "derived",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl core::fmt::Display for FormMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TknForm {
    pub k: u32,
    pub n_cut: Extent,
    pub mode: FormMode,
}

impl TknForm {
    pub fn new(k: u32, n_cut: Extent, mode: FormMode) -> Self {
        TknForm { k, n_cut, mode }
    }

    pub fn eval(&self, xi1: f64) -> Result<Complex64> {
        tkn_eval(self, xi1)
    }
}

fn check_domain(n_cut: f64, xi1: f64) -> Result<()> {
    if !(xi1.is_finite() && xi1 != 0.0 && n_cut.is_finite() && xi1.abs() < n_cut) {
        return Err(Error::Domain(alloc::format!(
            "need 0 < |xi1| < N, got xi1 = {xi1}, N = {n_cut}"
        )));
    }
    Ok(())
}

/// `ln((N - xi1)/(N + xi1))`.
fn log_ratio(n_cut: f64, xi1: f64) -> f64 {
    libm::log((n_cut - xi1) / (n_cut + xi1))
}

/// Power of `xi1` multiplying the logarithm and the `pi i/2` term.
fn tail_power(k: u32, mode: FormMode) -> i32 {
    match (mode, k) {
        // the k = 2 display prints xi1^{-1}
        (FormMode::PaperLiteral, 2) => -1,
        _ => k as i32 - 1,
    }
}

fn log_coeff(mode: FormMode) -> f64 {
    match mode {
        FormMode::PaperLiteral => -0.5,
        FormMode::Derived => -1.0,
    }
}

/// Evaluates `T_{k,N}(xi1)`.
///
/// Odd `k` gives exactly zero. With infinite `N` only `k = 0` is defined
/// (`pi i / (2 xi1)`); larger even `k` diverge and are a domain error.
pub fn tkn_eval(form: &TknForm, xi1: f64) -> Result<Complex64> {
    let k = form.k;
    let n_cut = match form.n_cut {
        Extent::Infinite => {
            if !(xi1.is_finite() && xi1 != 0.0) {
                return Err(Error::Domain(alloc::format!("xi1 = {xi1} must be finite and nonzero")));
            }
            return match k {
                0 => Ok(Complex64::new(0.0, PI / (2.0 * xi1))),
                k if k % 2 == 1 => Ok(Complex64::new(0.0, 0.0)),
                _ => Err(Error::Domain(alloc::format!("T_{{{k},N}} diverges as N -> infinity"))),
            };
        }
        Extent::Finite(n) => n,
    };
    check_domain(n_cut, xi1)?;
    if k % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let poly = match k {
        0 => 0.0,
        _ => polynomial_part(k / 2, form.mode, n_cut, xi1)?,
    };
    let power = powi(xi1, tail_power(k, form.mode));
    Ok(Complex64::new(poly + log_part(k, form.mode, n_cut, xi1), 0.5 * PI * power))
}

fn polynomial_part(n: u32, mode: FormMode, n_cut: f64, xi1: f64) -> Result<f64> {
    match (mode, n) {
        // the k = 4 and k = 6 displays differ from the general pattern
        (FormMode::PaperLiteral, 2) => Ok(-2.0 / 3.0 * powi(n_cut, 3) - 2.0 * xi1 * xi1 * n_cut),
        (FormMode::PaperLiteral, 3) => Ok(-2.0 / 5.0 * powi(n_cut, 5)
            - 2.0 / 3.0 * xi1 * xi1 * powi(n_cut, 3)
            - 2.0 * powi(xi1, 5) * n_cut),
        _ => Ok(p_poly(n, mode)?.eval(n_cut, xi1)),
    }
}

/// The logarithmic part of the real part of `T_{k,N}(xi1)`; it tends to zero
/// as `N` grows.
pub fn log_term(form: &TknForm, xi1: f64) -> Result<f64> {
    let Extent::Finite(n_cut) = form.n_cut else {
        return Ok(0.0);
    };
    check_domain(n_cut, xi1)?;
    if form.k % 2 == 1 {
        return Ok(0.0);
    }
    Ok(log_part(form.k, form.mode, n_cut, xi1))
}

/// The odd power times the odd logarithm is even in `xi1`; evaluating at
/// `|xi1|` makes that exact in floating point.
fn log_part(k: u32, mode: FormMode, n_cut: f64, xi1: f64) -> f64 {
    let x = xi1.abs();
    log_coeff(mode) * powi(x, tail_power(k, mode)) * log_ratio(n_cut, x)
}

/// Principal value of `int_{-N}^{N} t^k / (xi1^2 - t^2) dt` by excision.
pub fn tkn_pv_oracle(k: u32, n_cut: f64, xi1: f64, spec: &QuadratureSpec) -> Result<Estimate<f64>> {
    check_domain(n_cut, xi1)?;
    let x = xi1.abs();
    let g = |t: f64| powi(t, k as i32) / (x * x - t * t);
    let r = integrate_pv(g, &[-x, x], (-n_cut, n_cut), spec)?;
    Ok(Estimate {
        value: r.value,
        error: r.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecurrenceResidual {
    /// `|T_{2n} - (-2 N^{2n-1}/(2n-1) + xi1^2 T_{2n-2})|` from the derived forms.
    pub derived: f64,
    /// The same residual with both sides computed by quadrature.
    pub quadrature: f64,
    /// `|T_{2n}|` from quadrature, for relative comparisons.
    pub magnitude: f64,
}

pub fn tkn_recurrence_check(n: u32, n_cut: f64, xi1: f64, spec: &QuadratureSpec) -> Result<RecurrenceResidual> {
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    check_domain(n_cut, xi1)?;
    let inhomogeneous = -2.0 * powi(n_cut, 2 * n as i32 - 1) / f64::from(2 * n - 1);
    let derived = |k| tkn_eval(&TknForm::new(k, Extent::Finite(n_cut), FormMode::Derived), xi1).map(|z| z.re);
    let lhs = derived(2 * n)?;
    let rhs = inhomogeneous + xi1 * xi1 * derived(2 * n - 2)?;
    let high = tkn_pv_oracle(2 * n, n_cut, xi1, spec)?.value;
    let low = tkn_pv_oracle(2 * n - 2, n_cut, xi1, spec)?.value;
    Ok(RecurrenceResidual {
        derived: (lhs - rhs).abs(),
        quadrature: (high - (inhomogeneous + xi1 * xi1 * low)).abs(),
        magnitude: high.abs(),
    })
}
