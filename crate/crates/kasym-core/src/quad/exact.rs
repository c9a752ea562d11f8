use core::cell::{Cell, RefCell};

use super::inner::{inner_pv, prescription_imag};
use super::{integrate_adaptive, integrate_pv, PrescriptionMode, QuadratureSpec};
use crate::math::INV_TWO_PI_SQ;
use crate::testfn::{Decay, TestFunction};
use crate::{Complex64, Error, Result};

/// Half-width of the ball around `xi1 = 0` replaced by a midpoint rule in
/// the outer integral of the principal-value part.
pub const ORIGIN_EXCLUSION: f64 = 1e-4;
/// The outer integral's tolerances are this factor looser than the inner
/// ones, so inner rounding noise cannot stall the outer refinement.
const OUTER_TOLERANCE_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPairing {
    pub value: Complex64,
    pub error: f64,
    /// Truncation `N` of the inner `t`-integral.
    pub cutoff: f64,
    /// Half-width of the outer `xi1` range.
    pub outer_radius: f64,
}

/// `(K_a, phi) = (1/2 pi^2) int dxi1 int_{-N}^{N} phi(xi1, t/a) / (xi1^2 - t^2) dt`
/// under the given prescription.
///
/// The principal-value part is integrated over `xi1` adaptively outside a
/// ball of radius [`ORIGIN_EXCLUSION`] (midpoint rule inside it). The
/// prescription's imaginary part carries a `1/xi1` factor and is integrated as
/// a principal value at `xi1 = 0`. `N` is `1.01 max(a, 1) R` for a bump of
/// radius `R` (the complement of the square contributes nothing) and
/// `max(a, 1.01) R` for Schwartz functions truncated at `R`.
pub fn pairing_exact(f: &TestFunction, a: f64, mode: PrescriptionMode, spec: &QuadratureSpec) -> Result<ExactPairing> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::invalid("a", "cone parameter must be finite and positive"));
    }
    spec.validate()?;
    let b = 1.0 / a;
    let radius = f.integration_radius(spec.truncation_radius);
    let cutoff = match f.decay() {
        Decay::Compact { support_radius } => 1.01 * a.max(1.0) * support_radius,
        Decay::Schwartz { .. } => a.max(1.01) * radius,
    };

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let worst_inner = Cell::new(0.0f64);
    let inner_real = |x: f64| -> f64 {
        let local = spec.with_excision_at_most(0.5 * (cutoff - x.abs()));
        match inner_pv(f, x, b, cutoff, &local) {
            Ok(e) => {
                worst_inner.set(worst_inner.get().max(e.error));
                e.value
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    let outer_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * OUTER_TOLERANCE_FACTOR,
        rel_tol: spec.rel_tol * OUTER_TOLERANCE_FACTOR,
        ..spec.clone()
    };
    let left = integrate_adaptive(inner_real, (-radius, -ORIGIN_EXCLUSION), &outer_spec)?;
    let right = integrate_adaptive(inner_real, (ORIGIN_EXCLUSION, radius), &outer_spec)?;
    let middle = ORIGIN_EXCLUSION * (inner_real(-ORIGIN_EXCLUSION) + inner_real(ORIGIN_EXCLUSION));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let real = left.value + right.value + middle;
    let mut error = left.error + right.error + 2.0 * radius * worst_inner.get();

    let imag = if mode == PrescriptionMode::Pv {
        0.0
    } else {
        let w = |x: f64| prescription_imag(f, x, b, mode);
        let r = integrate_pv(w, &[0.0], (-radius, radius), spec)?;
        error += r.error;
        r.value
    };

    Ok(ExactPairing {
        value: Complex64::new(real, imag) * INV_TWO_PI_SQ,
        error: error * INV_TWO_PI_SQ,
        cutoff,
        outer_radius: radius,
    })
}

#[cfg(test)]
mod tests {
    use core::f64::consts::PI;

    use super::*;
    use crate::testfn::{gaussian, make_gaussian_hermite, Monomial};

    #[test]
    fn gaussian_real_part_matches_reference() {
        // (1/2 pi^2) int e^{-x^2} 2 sqrt(pi) D(x/a) / x dx, D the Dawson function
        let spec = QuadratureSpec::default();
        for (a, want) in [(10.0, 0.031725517430553569515), (2.0, 0.14758361765043327418)] {
            let r = pairing_exact(&gaussian(), a, PrescriptionMode::Paper, &spec).unwrap();
            assert!((r.value.re - want).abs() < 1e-8 * want, "a = {a}: {}", r.value);
            assert!(r.value.im.abs() < 1e-12, "{}", r.value);
        }
    }

    #[test]
    fn odd_profile_paper_mode_is_closed_form() {
        let f = make_gaussian_hermite((0.0, 0.0), 1.0, &[Monomial::new(1, 0, 1.0)]).unwrap();
        let spec = QuadratureSpec::default();
        for a in [3.0, 30.0] {
            let b: f64 = 1.0 / a;
            let r = pairing_exact(&f, a, PrescriptionMode::Paper, &spec).unwrap();
            let want = libm::sqrt(PI) / (2.0 * PI * libm::sqrt(1.0 + b * b));
            assert!((r.value.im - want).abs() < 1e-9, "{} vs {want}", r.value);
            assert!(r.value.re.abs() < 1e-12);
            let pv = pairing_exact(&f, a, PrescriptionMode::Pv, &spec).unwrap();
            assert_eq!(pv.value.im, 0.0);
            assert_eq!(pv.value.re, r.value.re);
        }
    }

    #[test]
    fn rejects_bad_cone_parameter() {
        let spec = QuadratureSpec::default();
        for a in [0.0, -1.0, f64::NAN] {
            assert!(pairing_exact(&gaussian(), a, PrescriptionMode::Pv, &spec).is_err());
        }
    }
}
