//! Fourier-side solution formula for the model equation `A u = v` in the
//! cone `C^a_+ = {x2 > a |x1|}`, given a wave factorization
//! `A(xi) = A_ne(xi) A_eq(xi)` of the symbol, and grid checks of the
//! factorization's defining estimates.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::kernel::{coeff_table, FormMode};
use crate::math::{binomial, powi, INV_TWO_PI};
use crate::quad::{integrate_adaptive, integrate_pv, QuadratureSpec};
use crate::testfn::{fd_weights, TestFunction};
use crate::{Complex64, Error, Result};

/// Step of the difference stencil for `xi2`-derivatives of `A_eq^{-1} V`,
/// relative to the decay scale of `V`.
pub const FD_STEP: f64 = 1e-2;
/// Accuracy order of that stencil.
pub const FD_ACCURACY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConeSpec {
    pub a: f64,
}

impl ConeSpec {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(ConeSpec { a })
        } else {
            Err(Error::invalid("a", "cone parameter must be finite and positive"))
        }
    }

    /// `x2 > a |x1|`.
    pub fn contains(&self, x: (f64, f64)) -> bool {
        x.1 > self.a * x.0.abs()
    }

    /// The conjugate cone `a x2 > |x1|`.
    pub fn in_conjugate(&self, tau: (f64, f64)) -> bool {
        self.a * tau.1 > tau.0.abs()
    }
}

/// The two factors of a wave factorization, evaluated off the real plane.
/// Implementations must be stateless so points can be evaluated concurrently.
pub trait FactorPair: Debug + Send + Sync {
    /// `A_ne(xi + i tau)` for `tau` in the conjugate cone.
    fn plus(&self, xi: (f64, f64), tau: (f64, f64)) -> Complex64;
    /// `A_eq(xi - i tau)` for `tau` in the conjugate cone.
    fn minus(&self, xi: (f64, f64), tau: (f64, f64)) -> Complex64;
    /// `d^n/dxi2^n A_eq^{-1}(xi)` on the real plane, when known in closed form.
    fn minus_inverse_xi2_derivative(&self, _n: usize, _xi: (f64, f64)) -> Option<Complex64> {
        None
    }
}

/// `A_ne = A_eq = 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IdentityFactors;

impl FactorPair for IdentityFactors {
    fn plus(&self, _: (f64, f64), _: (f64, f64)) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn minus(&self, _: (f64, f64), _: (f64, f64)) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn minus_inverse_xi2_derivative(&self, n: usize, _: (f64, f64)) -> Option<Complex64> {
        Some(Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0))
    }
}

/// Constant nonzero factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantFactors {
    pub plus: Complex64,
    pub minus: Complex64,
}

impl FactorPair for ConstantFactors {
    fn plus(&self, _: (f64, f64), _: (f64, f64)) -> Complex64 {
        self.plus
    }

    fn minus(&self, _: (f64, f64), _: (f64, f64)) -> Complex64 {
        self.minus
    }

    fn minus_inverse_xi2_derivative(&self, n: usize, _: (f64, f64)) -> Option<Complex64> {
        Some(if n == 0 { self.minus.inv() } else { Complex64::new(0.0, 0.0) })
    }
}

#[derive(Debug, Clone)]
pub struct SymbolFactorization {
    pub alpha: f64,
    pub kappa: f64,
    pub cone: ConeSpec,
    pub factors: Arc<dyn FactorPair>,
}

impl SymbolFactorization {
    pub fn identity(a: f64) -> Result<Self> {
        Ok(SymbolFactorization {
            alpha: 0.0,
            kappa: 0.0,
            cone: ConeSpec::new(a)?,
            factors: Arc::new(IdentityFactors),
        })
    }

    /// `A(xi) = A_ne(xi) A_eq(xi)` on the real plane.
    pub fn symbol(&self, xi: (f64, f64)) -> Complex64 {
        self.factors.plus(xi, (0.0, 0.0)) * self.factors.minus(xi, (0.0, 0.0))
    }
}

/// The Fourier image `V~` of the right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct RightHandSide {
    pub f: TestFunction,
}

impl RightHandSide {
    pub fn new(f: TestFunction) -> Self {
        RightHandSide { f }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EllipticityCheck {
    pub c1_est: f64,
    pub c2_est: f64,
    pub pass: bool,
}

/// Extremes of `|A(xi)| (1 + |xi|)^{-alpha}` over the grid.
pub fn ellipticity_check(symbol: &dyn Fn((f64, f64)) -> Complex64, alpha: f64, grid: &[(f64, f64)]) -> Result<EllipticityCheck> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must be nonempty"));
    }
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for &xi in grid {
        let v = symbol(xi);
        if !(v.re.is_finite() && v.im.is_finite()) || !(xi.0.is_finite() && xi.1.is_finite()) {
            return Err(Error::NonFiniteSymbol(xi.0, xi.1));
        }
        let w = v.norm() * libm::pow(1.0 + libm::hypot(xi.0, xi.1), -alpha);
        c1 = c1.min(w);
        c2 = c2.max(w);
    }
    Ok(EllipticityCheck {
        c1_est: c1,
        c2_est: c2,
        pass: c1 > 0.0 && c1.is_finite() && c2.is_finite(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FactorEstimateCheck {
    /// Smallest constants for the `A_ne^{+-1}` and `A_eq^{+-1}` bounds.
    pub worst_constants: (f64, f64),
    pub pass: bool,
}

/// Smallest `c` with `|A_ne^{+-1}(xi + i tau)| <= c (1 + |xi| + |tau|)^{+-kappa}`
/// and `|A_eq^{+-1}(xi - i tau)| <= c (1 + |xi| + |tau|)^{+-(alpha - kappa)}` on
/// the sampled set.
pub fn factorization_estimate_check(
    fact: &SymbolFactorization,
    tau_samples: &[(f64, f64)],
    xi_grid: &[(f64, f64)],
) -> Result<FactorEstimateCheck> {
    if tau_samples.is_empty() || xi_grid.is_empty() {
        return Err(Error::invalid("samples", "tau samples and xi grid must be nonempty"));
    }
    if let Some(&(t1, t2)) = tau_samples.iter().find(|&&t| !fact.cone.in_conjugate(t)) {
        return Err(Error::OutsideConjugateCone(t1, t2));
    }
    let mut c_plus = 0.0f64;
    let mut c_minus = 0.0f64;
    for &tau in tau_samples {
        for &xi in xi_grid {
            let weight = 1.0 + libm::hypot(xi.0, xi.1) + libm::hypot(tau.0, tau.1);
            let p = fact.factors.plus(xi, tau).norm();
            let m = fact.factors.minus(xi, tau).norm();
            let kp = libm::pow(weight, fact.kappa);
            let km = libm::pow(weight, fact.alpha - fact.kappa);
            c_plus = c_plus.max(p / kp).max(kp / p);
            c_minus = c_minus.max(m / km).max(km / m);
        }
    }
    Ok(FactorEstimateCheck {
        worst_constants: (c_plus, c_minus),
        pass: c_plus.is_finite() && c_minus.is_finite(),
    })
}

/// `|kappa - s| < 1/2`.
pub fn sobolev_condition_check(kappa: f64, s: f64) -> bool {
    (kappa - s).abs() < 0.5
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointSolution {
    pub xi: (f64, f64),
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub principal: Complex64,
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub correction: Complex64,
    /// `principal + correction`.
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub value: Complex64,
    pub error_estimate: f64,
    /// Set when this point failed; the numeric fields are then NaN.
    pub error: Option<String>,
}

/// `d^n/dxi2^n (A_eq^{-1} V)(eta, xi2)`.
fn weighted_derivative(fact: &SymbolFactorization, rhs: &RightHandSide, n: usize, eta: f64, xi2: f64) -> Complex64 {
    let factors = &fact.factors;
    let exact: Option<Vec<Complex64>> = (0..=n)
        .map(|j| factors.minus_inverse_xi2_derivative(j, (eta, xi2)))
        .collect();
    match exact {
        Some(inv) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, d) in inv.iter().enumerate() {
                if *d == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let v = rhs.f.xi2_derivative(n - j, eta, xi2).unwrap_or(f64::NAN);
                acc += d * (binomial(n, j) * v);
            }
            acc
        }
        None => {
            let w = |y: f64| factors.minus((eta, y), (0.0, 0.0)).inv() * rhs.f.eval(eta, y);
            if n == 0 {
                return w(xi2);
            }
            let h = FD_STEP * decay_scale(&rhs.f);
            let half = (n.div_ceil(2) + FD_ACCURACY / 2 - 1) as isize;
            let nodes: Vec<f64> = (-half..=half).map(|k| k as f64).collect();
            let weights = fd_weights(&nodes, n);
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, c) in nodes.iter().zip(weights) {
                acc += w(xi2 + k * h) * c;
            }
            acc / powi(h, n as i32)
        }
    }
}

/// Rounding level of the difference stencil for `d^n/dxi2^n (A_eq^{-1} V)`,
/// or `None` when the product rule is exact.
fn stencil_noise(fact: &SymbolFactorization, rhs: &RightHandSide, n: usize, xi2: f64, r: f64) -> Option<f64> {
    if n == 0 || fact.factors.minus_inverse_xi2_derivative(0, (0.0, xi2)).is_some() {
        return None;
    }
    let h = FD_STEP * decay_scale(&rhs.f);
    let reach = h * (n.div_ceil(2) + FD_ACCURACY / 2 - 1) as f64;
    let peak = (0..=32)
        .flat_map(|j| [-reach, 0.0, reach].map(|dy| (-r + 2.0 * r * f64::from(j) / 32.0, xi2 + dy)))
        .map(|(eta, y)| weighted_derivative(fact, rhs, 0, eta, y).norm())
        .fold(0.0, f64::max);
    Some(1e3 * f64::EPSILON * peak / powi(h, n as i32))
}

fn decay_scale(f: &TestFunction) -> f64 {
    match f.decay() {
        crate::testfn::Decay::Compact { support_radius } => support_radius,
        crate::testfn::Decay::Schwartz { decay_scale } => decay_scale,
    }
}

/// Evaluates `u~(xi) = (i/2 pi) A_ne^{-1}(xi) PV int (A_eq^{-1} V~)(eta, xi2) / (xi1 - eta) deta
/// + A_ne^{-1}(xi) sum c_{m,n}(a) int (xi1 - eta)^m d^n/dxi2^n (A_eq^{-1} V~)(eta, xi2) deta`
/// at each point, the sum running over the coefficient table of the given
/// order. `s` only enters through the solvability condition.
pub fn solve_theorem2(
    fact: &SymbolFactorization,
    rhs: &RightHandSide,
    order: usize,
    points: &[(f64, f64)],
    mode: FormMode,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<PointSolution>> {
    if !sobolev_condition_check(fact.kappa, s) {
        return Err(Error::Solvability { kappa: fact.kappa, s });
    }
    spec.validate()?;
    let order_u32 = u32::try_from(order).map_err(|_| Error::invalid("order", "too large"))?;
    let table = coeff_table(fact.cone.a, order_u32, mode)?;
    Ok(points
        .iter()
        .map(|&xi| match solve_point(fact, rhs, &table.entries, xi, spec) {
            Ok(p) => p,
            Err(e) => PointSolution {
                xi,
                principal: Complex64::new(f64::NAN, f64::NAN),
                correction: Complex64::new(f64::NAN, f64::NAN),
                value: Complex64::new(f64::NAN, f64::NAN),
                error_estimate: f64::NAN,
                error: Some(e.to_string()),
            },
        })
        .collect())
}

fn solve_point(
    fact: &SymbolFactorization,
    rhs: &RightHandSide,
    entries: &[crate::kernel::CoeffEntry],
    xi: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<PointSolution> {
    let (xi1, xi2) = xi;
    if !(xi1.is_finite() && xi2.is_finite()) {
        return Err(Error::invalid("point", "coordinates must be finite"));
    }
    let a_plus = fact.factors.plus(xi, (0.0, 0.0));
    if !(a_plus.norm() > 0.0 && a_plus.norm().is_finite()) {
        return Err(Error::NonFiniteSymbol(xi1, xi2));
    }
    let a_plus_inv = a_plus.inv();
    let r = rhs.f.integration_radius(spec.truncation_radius);

    let span = r + xi1.abs() + 1.0;
    let w = |eta: f64| weighted_derivative(fact, rhs, 0, eta, xi2) / (xi1 - eta);
    let pv = integrate_pv(w, &[xi1], (-span, span), spec)?;
    let principal = a_plus_inv * pv.value * Complex64::new(0.0, INV_TWO_PI);
    let mut error = INV_TWO_PI * a_plus_inv.norm() * pv.error;

    let mut correction = Complex64::new(0.0, 0.0);
    for e in entries {
        let (m, n) = (e.m as i32, e.n as usize);
        let g = |eta: f64| weighted_derivative(fact, rhs, n, eta, xi2) * powi(xi1 - eta, m);
        let local = match stencil_noise(fact, rhs, n, xi2, r) {
            Some(noise) => QuadratureSpec {
                abs_tol: spec.abs_tol.max(2.0 * r * noise * powi(xi1.abs() + r, m)),
                ..spec.clone()
            },
            None => spec.clone(),
        };
        let integral = integrate_adaptive(g, (-r, r), &local)?;
        if !(integral.value.re.is_finite() && integral.value.im.is_finite()) {
            return Err(Error::Domain(format!("correction integral for (m, n) = ({m}, {n}) diverges")));
        }
        let tail = r * (g(r).norm() + g(-r).norm());
        correction += e.value * integral.value;
        error += e.value.norm() * (integral.error + tail);
    }
    let correction = a_plus_inv * correction;
    Ok(PointSolution {
        xi,
        principal,
        correction,
        value: principal + correction,
        error_estimate: error,
        error: None,
    })
}

#[cfg(test)]
mod tests {
    use core::f64::consts::PI;

    use super::*;
    use crate::testfn::{gaussian, make_gaussian_hermite, Monomial};

    fn eta_gaussian() -> TestFunction {
        make_gaussian_hermite((0.0, 0.0), 1.0, &[Monomial::new(1, 0, 1.0)]).unwrap()
    }

    #[derive(Debug)]
    struct Polynomial;

    // A_ne(z) = z2 + i, A_eq(z) = 1 + z1^2/4; only the values are exposed
    impl FactorPair for Polynomial {
        fn plus(&self, xi: (f64, f64), tau: (f64, f64)) -> Complex64 {
            Complex64::new(xi.1, tau.1 + 1.0)
        }
        fn minus(&self, xi: (f64, f64), tau: (f64, f64)) -> Complex64 {
            let z1 = Complex64::new(xi.0, -tau.0);
            z1 * z1 * 0.25 + 1.0
        }
    }

    #[test]
    fn sobolev_examples() {
        assert!(sobolev_condition_check(0.0, 0.0));
        assert!(!sobolev_condition_check(1.0, 0.5));
        assert!(sobolev_condition_check(0.3, 0.1));
    }

    #[test]
    fn ellipticity_examples() {
        let grid: Vec<(f64, f64)> = (-10..=10)
            .flat_map(|i| (-10..=10).map(move |j| (i as f64 * 0.7, j as f64 * 1.3)))
            .collect();
        let one = ellipticity_check(&|_| Complex64::new(1.0, 0.0), 0.0, &grid).unwrap();
        assert_eq!((one.c1_est, one.c2_est, one.pass), (1.0, 1.0, true));
        let quad = ellipticity_check(&|x| Complex64::new(1.0 + x.0 * x.0 + x.1 * x.1, 0.0), 2.0, &grid).unwrap();
        assert!(quad.c1_est >= 0.5 && quad.c2_est <= 2.0 && quad.pass);
        let lin = ellipticity_check(&|x| Complex64::new(x.0, 0.0), 1.0, &grid).unwrap();
        assert!(!lin.pass);
        assert!(matches!(
            ellipticity_check(&|_| Complex64::new(f64::NAN, 0.0), 0.0, &grid),
            Err(Error::NonFiniteSymbol(..))
        ));
    }

    #[test]
    fn factor_estimates() {
        let fact = SymbolFactorization::identity(1.0).unwrap();
        let taus = [(0.0, 1.0), (0.5, 2.0)];
        let grid = [(0.0, 0.0), (3.0, -1.0)];
        let r = factorization_estimate_check(&fact, &taus, &grid).unwrap();
        assert_eq!(r.worst_constants, (1.0, 1.0));
        assert!(r.pass);
        assert!(matches!(
            factorization_estimate_check(&fact, &[(1.0, 0.0)], &grid),
            Err(Error::OutsideConjugateCone(1.0, 0.0))
        ));
        let poly = SymbolFactorization {
            alpha: 3.0,
            kappa: 1.0,
            cone: ConeSpec::new(1.0).unwrap(),
            factors: Arc::new(Polynomial),
        };
        let r = factorization_estimate_check(&poly, &taus, &grid).unwrap();
        assert!(r.pass && r.worst_constants.0 >= 1.0);
    }

    #[test]
    fn identity_examples() {
        let spec = QuadratureSpec::default();
        let fact = SymbolFactorization::identity(10.0).unwrap();
        let sol = solve_theorem2(&fact, &RightHandSide::new(gaussian()), 0, &[(0.0, 0.0)], FormMode::Derived, 0.0, &spec).unwrap();
        assert!(sol[0].value.norm() < 1e-14);
        let sol = solve_theorem2(&fact, &RightHandSide::new(eta_gaussian()), 0, &[(0.0, 0.0)], FormMode::Derived, 0.0, &spec).unwrap();
        let want = -libm::sqrt(PI) / (2.0 * PI);
        assert!((sol[0].value.im - want).abs() < 1e-12 && sol[0].value.re.abs() < 1e-15, "{:?}", sol[0]);
        assert!(matches!(
            solve_theorem2(&fact, &RightHandSide::new(gaussian()), 0, &[], FormMode::Derived, 0.6, &spec),
            Err(Error::Solvability { .. })
        ));
    }

    #[test]
    fn corrections_shrink_with_a() {
        let spec = QuadratureSpec::default();
        let rhs = RightHandSide::new(make_gaussian_hermite((0.3, 0.0), 1.0, &[Monomial::new(0, 0, 1.0)]).unwrap());
        let at = |a| {
            let fact = SymbolFactorization::identity(a).unwrap();
            solve_theorem2(&fact, &rhs, 2, &[(0.5, 0.2)], FormMode::Derived, 0.0, &spec).unwrap()[0].correction
        };
        let (near, far) = (at(10.0), at(100.0));
        assert!(far.norm() < near.norm() && far.norm() > 0.0);
    }

    #[test]
    fn difference_stencil_matches_product_rule() {
        // same factors, once with closed-form derivatives and once without
        #[derive(Debug)]
        struct Opaque(ConstantFactors);
        impl FactorPair for Opaque {
            fn plus(&self, xi: (f64, f64), tau: (f64, f64)) -> Complex64 {
                self.0.plus(xi, tau)
            }
            fn minus(&self, xi: (f64, f64), tau: (f64, f64)) -> Complex64 {
                self.0.minus(xi, tau)
            }
        }
        let c = ConstantFactors {
            plus: Complex64::new(2.0, 1.0),
            minus: Complex64::new(0.5, -0.5),
        };
        let make = |factors: Arc<dyn FactorPair>| SymbolFactorization {
            alpha: 0.0,
            kappa: 0.0,
            cone: ConeSpec::new(5.0).unwrap(),
            factors,
        };
        let rhs = RightHandSide::new(make_gaussian_hermite((0.2, 0.1), 1.0, &[Monomial::new(1, 1, 1.0)]).unwrap());
        let spec = QuadratureSpec::default();
        let pts = [(0.4, 0.3), (-1.0, 0.0)];
        let exact = solve_theorem2(&make(Arc::new(c)), &rhs, 4, &pts, FormMode::Derived, 0.0, &spec).unwrap();
        let fd = solve_theorem2(&make(Arc::new(Opaque(c))), &rhs, 4, &pts, FormMode::Derived, 0.0, &spec).unwrap();
        for (x, y) in exact.iter().zip(&fd) {
            assert!((x.value - y.value).norm() < 1e-6 * x.value.norm(), "{x:?} {y:?}");
        }
    }

    #[test]
    fn linear_in_rhs() {
        let spec = QuadratureSpec::default();
        let fact = SymbolFactorization::identity(20.0).unwrap();
        let f1 = make_gaussian_hermite((0.5, 0.0), 1.0, &[Monomial::new(0, 0, 1.0)]).unwrap();
        let f2 = eta_gaussian();
        let both = TestFunction::combine(alloc::vec![(1.0, f1.clone()), (1.0, f2.clone())]);
        let pts = [(0.3, 0.1), (1.2, -0.4)];
        let solve = |f: TestFunction| solve_theorem2(&fact, &RightHandSide::new(f), 2, &pts, FormMode::Derived, 0.0, &spec).unwrap();
        let (s1, s2, s12) = (solve(f1), solve(f2), solve(both));
        for i in 0..pts.len() {
            let tol = 10.0 * (s1[i].error_estimate + s2[i].error_estimate + s12[i].error_estimate) + 1e-12;
            assert!((s12[i].value - s1[i].value - s2[i].value).norm() <= tol);
        }
    }
}
