use core::f64::consts::PI;

use super::{integrate_pv, Estimate, Extent, PrescriptionMode, QuadratureSpec};
use crate::testfn::TestFunction;
use crate::{Complex64, Error, Result};

/// `int_{-N}^{N} phi(xi1, b t) / (xi1^2 - t^2) dt` under the given
/// prescription. `b = 1/a` is the rescaling from `a xi2 = t`.
///
/// For [`Extent::Infinite`] the range is cut where `phi(xi1, b t)` has
/// decayed (support radius, or the truncation radius of `spec`), and the
/// size of the integrand at the cut is added to the error estimate.
pub fn inner_t_integral(
    f: &TestFunction,
    xi1: f64,
    b: f64,
    n: Extent,
    mode: PrescriptionMode,
    spec: &QuadratureSpec,
) -> Result<Estimate<Complex64>> {
    if !(xi1.is_finite() && xi1 != 0.0) {
        return Err(Error::Domain(alloc::format!("xi1 = {xi1} must be finite and nonzero")));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::invalid("b", "must be finite and positive"));
    }
    let x = xi1.abs();
    let (cutoff, tail) = match n {
        Extent::Finite(n) => {
            if n <= x || n.is_nan() {
                return Err(Error::Domain(alloc::format!("N = {n} must exceed |xi1| = {x}")));
            }
            (n, 0.0)
        }
        Extent::Infinite => {
            let reach = f.integration_radius(spec.truncation_radius);
            let cutoff = (reach / b).max(2.0 * x + 1.0);
            let edge = f.eval(xi1, b * cutoff).abs().max(f.eval(xi1, -b * cutoff).abs());
            (cutoff, 2.0 * edge / cutoff)
        }
    };
    if x <= spec.max_excision() {
        return Err(Error::PoleSeparation {
            left: -x,
            right: x,
            max_excision: spec.max_excision(),
        });
    }
    let pv = inner_pv(f, xi1, b, cutoff, spec)?;
    let im = prescription_imag(f, xi1, b, mode);
    Ok(Estimate {
        value: Complex64::new(pv.value, im),
        error: pv.error + tail,
    })
}

/// Principal-value part of the inner integral over `(-cutoff, cutoff)`.
///
/// Only the even part `h` of `t -> phi(xi1, b t)` survives, and
/// `PV int h(t) / (x^2 - t^2) = (1/x) PV int h(t) / (x - t)` with `x = |xi1|`,
/// which leaves a single pole at `x` however small `x` is.
pub(crate) fn inner_pv(
    f: &TestFunction,
    xi1: f64,
    b: f64,
    cutoff: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>> {
    let x = xi1.abs();
    let g = |t: f64| 0.5 * (f.eval(xi1, b * t) + f.eval(xi1, -b * t)) / (x - t);
    let r = integrate_pv(g, &[x], (-cutoff, cutoff), spec)?;
    Ok(Estimate {
        value: r.value / x,
        error: r.error / x,
    })
}

/// Imaginary part the prescription adds to the inner integral: the half
/// residues at `t = +-xi1`.
pub fn prescription_imag(f: &TestFunction, xi1: f64, b: f64, mode: PrescriptionMode) -> f64 {
    if mode == PrescriptionMode::Pv {
        return 0.0;
    }
    let upper = f.eval(xi1, b * xi1);
    let lower = f.eval(xi1, -b * xi1);
    let k = PI / (2.0 * xi1);
    match mode {
        PrescriptionMode::Pv => 0.0,
        PrescriptionMode::PlusI0 => k * (upper - lower),
        PrescriptionMode::MinusI0 => -(k * (upper - lower)),
        PrescriptionMode::Paper => k * (upper + lower),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::{gaussian, make_bump, make_gaussian_hermite, Monomial};

    #[test]
    fn flat_function_paper_mode_limit() {
        // e * bump(R = 1e4) is 1 to within 1e-8 near the axis
        let flat = make_bump(1e4).unwrap().scaled(core::f64::consts::E);
        let spec = QuadratureSpec::default();
        let r = inner_t_integral(&flat, 2.0, 1e-6, Extent::Infinite, PrescriptionMode::Paper, &spec).unwrap();
        assert!((r.value.im - PI / 2.0).abs() < 1e-7, "{}", r.value);
        // real part tends to the whole-line PV of 1/(xi1^2 - t^2), which is 0
        assert!(r.value.re.abs() < 1e-3, "{}", r.value);
    }

    #[test]
    fn odd_in_xi2_has_vanishing_pv() {
        let f = make_gaussian_hermite((0.0, 0.0), 1.0, &[Monomial::new(0, 1, 1.0)]).unwrap();
        let spec = QuadratureSpec::default();
        for xi1 in [0.3, 1.0, -2.0] {
            let r = inner_t_integral(&f, xi1, 0.2, Extent::Finite(40.0), PrescriptionMode::Pv, &spec).unwrap();
            assert!(r.value.norm() < 1e-14, "{}", r.value);
        }
    }

    #[test]
    fn prescriptions_are_antisymmetric() {
        let f = make_gaussian_hermite((0.2, 0.4), 1.0, &[Monomial::new(0, 0, 1.0), Monomial::new(1, 1, 0.5)]).unwrap();
        for xi1 in [-1.5, 0.1, 0.7, 3.0] {
            let p = prescription_imag(&f, xi1, 0.3, PrescriptionMode::PlusI0);
            let m = prescription_imag(&f, xi1, 0.3, PrescriptionMode::MinusI0);
            assert_eq!(p, -m);
            assert_eq!(prescription_imag(&f, xi1, 0.3, PrescriptionMode::Pv), 0.0);
        }
    }

    #[test]
    fn single_pole_form_matches_two_pole_excision() {
        let f = make_gaussian_hermite((0.3, -0.2), 1.2, &[Monomial::new(0, 0, 1.0), Monomial::new(1, 2, 0.3)]).unwrap();
        let spec = QuadratureSpec::default();
        for xi1 in [0.4, -1.0, 2.5] {
            let x = f64::abs(xi1);
            let g = |t: f64| f.eval(xi1, 0.5 * t) / (x * x - t * t);
            let direct = integrate_pv(g, &[-x, x], (-30.0, 30.0), &spec).unwrap();
            let r = inner_pv(&f, xi1, 0.5, 30.0, &spec).unwrap();
            assert!((r.value - direct.value).abs() < 1e-11, "{} vs {}", r.value, direct.value);
        }
    }

    #[test]
    fn gaussian_matches_dawson_identity() {
        // PV int e^{-b^2 t^2} / (x^2 - t^2) dt = 2 sqrt(pi) D(b x) / x
        let spec = QuadratureSpec::default();
        let cases = [
            (1e-4, 0.3544907666125628036),
            (0.01, 0.3544550865730258028),
            (1.0, 0.12954393500758238164),
            (3.0, 0.000041214891147808344028),
        ];
        for (x, want) in cases {
            let r = inner_pv(&gaussian(), x, 0.1, 90.0, &spec).unwrap();
            assert!((r.value - want).abs() < 1e-10 * want.max(1e-3), "{x}: {} vs {want}", r.value);
        }
    }

    #[test]
    fn preconditions() {
        let f = gaussian();
        let spec = QuadratureSpec::default();
        let m = PrescriptionMode::Pv;
        assert!(matches!(inner_t_integral(&f, 0.0, 0.1, Extent::Finite(10.0), m, &spec), Err(Error::Domain(_))));
        assert!(matches!(inner_t_integral(&f, 2.0, 0.1, Extent::Finite(2.0), m, &spec), Err(Error::Domain(_))));
        assert!(matches!(
            inner_t_integral(&f, 0.005, 0.1, Extent::Finite(10.0), m, &spec),
            Err(Error::PoleSeparation { .. })
        ));
        assert!(inner_t_integral(&f, 1.0, 0.0, Extent::Finite(10.0), m, &spec).is_err());
    }
}
