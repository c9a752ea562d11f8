//! Pairings of the distributions in the asymptotic expansion of `K_a` with
//! test functions: the leading term `(i/2 pi) PV(1/xi1) (x) delta(xi2)`,
//! moment functionals, the rough and sharp truncated expansions, and a
//! Fourier-side check of the moment identity.
//!
//! `delta^{(n)}(xi2)` pairs by taking the `n`-th axis derivative with no
//! `(-1)^n` factor, so the expansion sums reproduce the printed
//! coefficient displays term for term.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::kernel::{coeff_table_with_multiplier, CoeffBlock, FormMode};
use crate::math::{factorial, powi, INV_TWO_PI};
use crate::quad::{integrate_pv, QuadratureSpec};
use crate::testfn::{axis_moment, TestFunction};
use crate::{Complex64, Error, Result};

mod lemma1;

pub use lemma1::{lemma1_dft_check, Lemma1Check, Profile1d, STENCIL_HALF_WIDTH};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairingResult {
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub value: Complex64,
    pub error_estimate: f64,
    /// Per-term breakdown; `value` is the left-to-right sum of these.
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex::labelled"))]
    pub terms: Vec<(String, Complex64)>,
}

impl PairingResult {
    fn from_terms(terms: Vec<(String, Complex64)>, error_estimate: f64) -> Self {
        let value = terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (_, z)| acc + z);
        PairingResult {
            value,
            error_estimate,
            terms,
        }
    }
}

fn check_order(f: &TestFunction, n: usize) -> Result<()> {
    match f.max_exact_derivative_order() {
        Some(max) if n > max => Err(Error::DerivativeOrder { requested: n, max }),
        _ => Ok(()),
    }
}

fn check_cone(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("a", "cone parameter must be finite and positive"))
    }
}

/// `PV int d^n/dxi2^n phi(xi1, 0) / xi1 dxi1`.
fn axis_pv(f: &TestFunction, n: usize, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    check_order(f, n)?;
    let r = f.integration_radius(spec.truncation_radius);
    let g = |x: f64| f.axis_derivative(n, x).unwrap_or(f64::NAN) / x;
    let pv = integrate_pv(g, &[0.0], (-r, r), spec)?;
    Ok((pv.value, pv.error))
}

/// `(i/2 pi) PV int phi(xi1, 0) / xi1 dxi1`.
pub fn leading_pairing(f: &TestFunction, spec: &QuadratureSpec) -> Result<PairingResult> {
    let (pv, err) = axis_pv(f, 0, spec)?;
    let value = Complex64::new(0.0, INV_TWO_PI * pv);
    Ok(PairingResult::from_terms(alloc::vec![(String::from("leading"), value)], INV_TWO_PI * err))
}

/// `int xi1^m d^n/dxi2^n phi(xi1, 0) dxi1`.
pub fn moment_delta_pairing(f: &TestFunction, m: usize, n: usize, spec: &QuadratureSpec) -> Result<PairingResult> {
    let r = axis_moment(f, m, n, spec)?;
    Ok(PairingResult::from_terms(
        alloc::vec![(format!("moment m={m} n={n}"), Complex64::new(r.value, 0.0))],
        r.error,
    ))
}

/// `(i/2 pi) sum_{n <= order} (-1)^n / (n! a^n) PV int d^n phi(xi1, 0) / xi1`.
pub fn rough_expansion(f: &TestFunction, a: f64, order: usize, spec: &QuadratureSpec) -> Result<PairingResult> {
    check_cone(a)?;
    check_order(f, order)?;
    let mut terms = Vec::with_capacity(order + 1);
    let mut error = 0.0;
    for n in 0..=order {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let c = INV_TWO_PI * sign / (factorial(n) * powi(a, n as i32));
        let (pv, err) = axis_pv(f, n, spec)?;
        terms.push((format!("rough n={n}"), Complex64::new(0.0, c * pv)));
        error += c.abs() * err;
    }
    Ok(PairingResult::from_terms(terms, error))
}

/// Leading term plus `sum c_{m,n}(a) (tilde-delta^{(m)} (x) delta^{(n)}, phi)`
/// over the coefficient table up to `xi2`-derivative order `order`, with
/// `N = a`.
pub fn sharp_expansion(f: &TestFunction, a: f64, order: usize, mode: FormMode, spec: &QuadratureSpec) -> Result<PairingResult> {
    sharp_expansion_with_multiplier(f, a, order, mode, 1.0, spec)
}

/// As [`sharp_expansion`] with `N = multiplier * a`.
pub fn sharp_expansion_with_multiplier(
    f: &TestFunction,
    a: f64,
    order: usize,
    mode: FormMode,
    multiplier: f64,
    spec: &QuadratureSpec,
) -> Result<PairingResult> {
    check_cone(a)?;
    check_order(f, order)?;
    let order = u32::try_from(order).map_err(|_| Error::invalid("order", "too large"))?;
    let table = coeff_table_with_multiplier(a, order, mode, multiplier)?;
    let leading = leading_pairing(f, spec)?;
    let mut terms = leading.terms;
    let mut error = leading.error_estimate;
    for e in &table.entries {
        let moment = axis_moment(f, e.m as usize, e.n as usize, spec)?;
        let label = match e.block {
            CoeffBlock::Lemma => format!("lemma m={} n={}", e.m, e.n),
            CoeffBlock::Polynomial { k } => format!("poly k={k} m={} n={}", e.m, e.n),
        };
        terms.push((label, e.value * moment.value));
        error += e.value.norm() * moment.error;
    }
    Ok(PairingResult::from_terms(terms, error))
}
