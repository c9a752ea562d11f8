//! Quadrature engine: adaptive Gauss-Kronrod integration, principal values
//! by symmetric excision, limit extrapolation, the inner `t`-integral of the
//! kernel `1/(xi1^2 - t^2)` under each boundary-value prescription, and the
//! exact pairing `(K_a, phi)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

mod adaptive;
mod exact;
mod extrapolate;
mod inner;
mod pv;

pub use adaptive::integrate_adaptive;
pub use exact::{pairing_exact, ExactPairing};
pub use extrapolate::limit_extrapolate;
pub use inner::{inner_t_integral, prescription_imag};
pub use pv::{integrate_pv, PvEstimate};

/// Tolerances, schedules and truncation sizes shared by every routine.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Excision radii for principal values, strictly decreasing.
    pub excision_schedule: Vec<f64>,
    /// Truncation radius for Schwartz-class tails, in units of the
    /// function's decay scale.
    pub truncation_radius: f64,
    /// Regularization parameters for the `tau -> 0+` oracles.
    pub tau_schedule: Vec<f64>,
    pub extrapolation_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
            excision_schedule: vec![1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4],
            truncation_radius: 9.0,
            tau_schedule: vec![4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3],
            extrapolation_order: 4,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let errors = self.validation_errors();
        match errors.into_iter().next() {
            None => Ok(()),
            Some(e) => Err(e),
        }
    }

    /// Every violated invariant, for callers that report all problems at once.
    pub fn validation_errors(&self) -> Vec<Error> {
        let mut errors = Vec::new();
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            errors.push(Error::invalid("abs_tol", "must be positive"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            errors.push(Error::invalid("rel_tol", "must be positive"));
        }
        if self.max_subdivisions == 0 {
            errors.push(Error::invalid("max_subdivisions", "must be positive"));
        }
        if !(self.truncation_radius > 0.0 && self.truncation_radius.is_finite()) {
            errors.push(Error::invalid("truncation_radius", "must be positive"));
        }
        if self.extrapolation_order == 0 {
            errors.push(Error::invalid("extrapolation_order", "must be positive"));
        }
        if !is_decreasing_schedule(&self.excision_schedule) {
            errors.push(Error::invalid(
                "excision_schedule",
                "needs at least 3 positive, strictly decreasing entries",
            ));
        }
        if !is_decreasing_schedule(&self.tau_schedule) {
            errors.push(Error::invalid(
                "tau_schedule",
                "needs at least 3 positive, strictly decreasing entries",
            ));
        }
        errors
    }

    pub fn max_excision(&self) -> f64 {
        self.excision_schedule.first().copied().unwrap_or(0.0)
    }

    /// Copy with the excision schedule shrunk (never enlarged) so that its
    /// largest radius is at most `limit`.
    pub fn with_excision_at_most(&self, limit: f64) -> QuadratureSpec {
        let max = self.max_excision();
        if max <= limit {
            return self.clone();
        }
        let k = limit / max;
        QuadratureSpec {
            excision_schedule: self.excision_schedule.iter().map(|e| e * k).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn tolerance(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

fn is_decreasing_schedule(s: &[f64]) -> bool {
    s.len() >= 3 && s.iter().all(|x| x.is_finite() && *x > 0.0) && s.windows(2).all(|w| w[1] < w[0])
}

/// Interpretation of `1/(xi1^2 - t^2)` on its singular lines `t = +-xi1`.
///
/// * `Pv`: principal value only.
/// * `PlusI0` / `MinusI0`: principal value `+-` the half residues
///   `i pi/(2 xi1) [phi(xi1, b xi1) - phi(xi1, -b xi1)]`.
/// * `Paper`: principal value plus `i pi/(2 xi1) [phi(xi1, b xi1) + phi(xi1, -b xi1)]`,
///   the boundary value of `1/((xi1 - i0)^2 - t^2)`. This is the prescription
///   whose `a -> infinity` limit is `(i/2 pi) P(1/xi1) x delta(xi2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PrescriptionMode {
    Pv,
    PlusI0,
    MinusI0,
    Paper,
}

impl PrescriptionMode {
    pub const ALL: [PrescriptionMode; 4] = [
        PrescriptionMode::Pv,
        PrescriptionMode::PlusI0,
        PrescriptionMode::MinusI0,
        PrescriptionMode::Paper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrescriptionMode::Pv => "pv",
            PrescriptionMode::PlusI0 => "plus_i0",
            PrescriptionMode::MinusI0 => "minus_i0",
            PrescriptionMode::Paper => "paper",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        PrescriptionMode::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl core::fmt::Display for PrescriptionMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Upper limit of a truncated integral: finite `N` or the whole line.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Extent {
    Finite(f64),
    Infinite,
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
}
