//! Basic (test) functions `phi(xi1, xi2)` the distributions act on.
//!
//! Two families are provided: Gaussian times polynomial (Schwartz class,
//! analytic, exact axis derivatives of every order) and the standard smooth
//! bump (compact support, axis derivatives by order-8 central differences).
//! Linear combinations of either are also test functions.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{binomial, factorial, powi};
use crate::quad::{integrate_adaptive, Estimate, QuadratureSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Parity {
    Even,
    Odd,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Decay {
    Compact { support_radius: f64 },
    Schwartz { decay_scale: f64 },
}

/// `coeff * xi1^p1 * xi2^p2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Monomial {
    pub p1: u32,
    pub p2: u32,
    pub coeff: f64,
}

impl Monomial {
    pub const fn new(p1: u32, p2: u32, coeff: f64) -> Self {
        Monomial { p1, p2, coeff }
    }
}

/// `P(xi1, xi2) * exp(-((xi1 - c1)^2 + (xi2 - c2)^2) / s^2)`; the polynomial
/// is written in absolute coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianHermite {
    center: (f64, f64),
    scale: f64,
    poly: Vec<Monomial>,
}

/// `exp(-1 / (1 - r^2/R^2))` for `r < R`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    radius: f64,
    max_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    GaussianHermite(GaussianHermite),
    Bump(Bump),
    Combination(Vec<(f64, TestFunction)>),
}

pub const DEFAULT_BUMP_MAX_ORDER: usize = 6;
/// Relative step of the bump-family difference stencils, `h = R * BUMP_STEP`.
pub const BUMP_STEP: f64 = 1e-2;
/// Accuracy order of the bump-family difference stencils.
pub const BUMP_ACCURACY: usize = 8;

pub fn make_gaussian_hermite(center: (f64, f64), scale: f64, poly: &[Monomial]) -> Result<TestFunction> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::invalid("scale", "must be finite and positive"));
    }
    if !(center.0.is_finite() && center.1.is_finite()) {
        return Err(Error::invalid("center", "must be finite"));
    }
    if poly.iter().any(|m| !m.coeff.is_finite()) {
        return Err(Error::invalid("poly", "coefficients must be finite"));
    }
    Ok(TestFunction::GaussianHermite(GaussianHermite {
        center,
        scale,
        poly: poly.to_vec(),
    }))
}

/// `exp(-xi1^2 - xi2^2)`.
pub fn gaussian() -> TestFunction {
    make_gaussian_hermite((0.0, 0.0), 1.0, &[Monomial::new(0, 0, 1.0)]).expect("valid")
}

pub fn make_bump(support_radius: f64) -> Result<TestFunction> {
    make_bump_with_order(support_radius, DEFAULT_BUMP_MAX_ORDER)
}

pub fn make_bump_with_order(support_radius: f64, max_order: usize) -> Result<TestFunction> {
    if !(support_radius.is_finite() && support_radius > 0.0) {
        return Err(Error::invalid("support_radius", "must be finite and positive"));
    }
    Ok(TestFunction::Bump(Bump {
        radius: support_radius,
        max_order,
    }))
}

impl GaussianHermite {
    fn envelope_1d(&self, x: f64, c: f64) -> f64 {
        let w = (x - c) / self.scale;
        libm::exp(-w * w)
    }

    fn poly_eval(&self, x1: f64, x2: f64) -> f64 {
        self.poly
            .iter()
            .map(|m| m.coeff * powi(x1, m.p1 as i32) * powi(x2, m.p2 as i32))
            .sum()
    }

    /// `d^j/dxi2^j P(xi1, xi2)`.
    fn poly_xi2_derivative(&self, j: usize, x1: f64, x2: f64) -> f64 {
        self.poly
            .iter()
            .filter(|m| m.p2 as usize >= j)
            .map(|m| {
                let falling = (0..j).fold(1.0, |acc, i| acc * (m.p2 as usize - i) as f64);
                m.coeff * falling * powi(x1, m.p1 as i32) * powi(x2, (m.p2 as usize - j) as i32)
            })
            .sum()
    }

    /// Derivatives `d^k/dy^k exp(-((y - c)/s)^2)` at `y` for `k = 0..=n`,
    /// via `(-1)^k H_k(w) exp(-w^2) / s^k` and `H_{k+1} = 2w H_k - 2k H_{k-1}`.
    fn envelope_derivatives(&self, n: usize, y: f64) -> Vec<f64> {
        let w = (y - self.center.1) / self.scale;
        let g = libm::exp(-w * w);
        let mut out = Vec::with_capacity(n + 1);
        let (mut h_prev, mut h) = (0.0, 1.0);
        let mut sign_scale = 1.0;
        for k in 0..=n {
            out.push(sign_scale * h * g);
            let h_next = 2.0 * w * h - 2.0 * k as f64 * h_prev;
            h_prev = h;
            h = h_next;
            sign_scale *= -1.0 / self.scale;
        }
        out
    }

    fn xi2_derivative(&self, n: usize, x1: f64, x2: f64) -> f64 {
        let env = self.envelope_derivatives(n, x2);
        let g1 = self.envelope_1d(x1, self.center.0);
        let mut acc = 0.0;
        for j in 0..=n {
            let pj = self.poly_xi2_derivative(j, x1, x2);
            if pj != 0.0 {
                acc += binomial(n, j) * pj * env[n - j];
            }
        }
        g1 * acc
    }

    fn parity(&self) -> Parity {
        if self.center.0 != 0.0 {
            return Parity::None;
        }
        let even = self.poly.iter().all(|m| m.p1 % 2 == 0 || m.coeff == 0.0);
        let odd = self.poly.iter().all(|m| m.p1 % 2 == 1 || m.coeff == 0.0);
        match (even, odd) {
            (true, _) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::None,
        }
    }

    /// `int xi1^m d^n/dxi2^n phi(xi1, 0) dxi1` in closed form.
    fn exact_axis_moment(&self, m: usize, n: usize) -> f64 {
        let env = self.envelope_derivatives(n, 0.0);
        let (c, s) = (self.center.0, self.scale);
        // int x^q exp(-((x-c)/s)^2) dx = sum_i C(q,i) c^(q-i) s^(i+1) Gamma((i+1)/2) for even i
        let gauss_moment = |q: usize| -> f64 {
            let mut total = 0.0;
            for i in (0..=q).step_by(2) {
                let half_gamma = libm::sqrt(core::f64::consts::PI) * double_factorial_odd(i) / powi(2.0, (i / 2) as i32);
                total += binomial(q, i) * powi(c, (q - i) as i32) * powi(s, (i + 1) as i32) * half_gamma;
            }
            total
        };
        let mut acc = 0.0;
        for j in 0..=n {
            let coeff_sum: f64 = self
                .poly
                .iter()
                .filter(|mono| mono.p2 as usize == j)
                .map(|mono| mono.coeff * gauss_moment(m + mono.p1 as usize))
                .sum();
            acc += binomial(n, j) * factorial(j) * coeff_sum * env[n - j];
        }
        acc
    }
}

/// `(i - 1)!!` for even `i` (1 for `i = 0`).
fn double_factorial_odd(i: usize) -> f64 {
    let mut acc = 1.0;
    let mut k = 1;
    while k < i {
        acc *= k as f64;
        k += 2;
    }
    acc
}

impl Bump {
    fn eval(&self, x1: f64, x2: f64) -> f64 {
        let r2 = (x1 * x1 + x2 * x2) / (self.radius * self.radius);
        if r2 >= 1.0 {
            0.0
        } else {
            libm::exp(-1.0 / (1.0 - r2))
        }
    }

    fn xi2_derivative(&self, n: usize, x1: f64, x2: f64) -> Result<f64> {
        if n > self.max_order {
            return Err(Error::DerivativeOrder {
                requested: n,
                max: self.max_order,
            });
        }
        if n == 0 {
            return Ok(self.eval(x1, x2));
        }
        let h = self.radius * BUMP_STEP;
        // central stencil with 2*floor((n+1)/2) - 1 + BUMP_ACCURACY points
        let half = n.div_ceil(2) + BUMP_ACCURACY / 2 - 1;
        let nodes: Vec<f64> = (-(half as i64)..=half as i64).map(|k| k as f64).collect();
        let weights = fd_weights(&nodes, n);
        let sum: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&k, &w)| w * self.eval(x1, x2 + k * h))
            .sum();
        Ok(sum / powi(h, n as i32))
    }
}

/// Fornberg's weights for the `order`-th derivative at 0 on the given nodes.
pub(crate) fn fd_weights(nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

impl TestFunction {
    pub fn eval(&self, xi1: f64, xi2: f64) -> f64 {
        match self {
            TestFunction::GaussianHermite(g) => {
                g.poly_eval(xi1, xi2) * g.envelope_1d(xi1, g.center.0) * g.envelope_1d(xi2, g.center.1)
            }
            TestFunction::Bump(b) => b.eval(xi1, xi2),
            TestFunction::Combination(terms) => terms.iter().map(|(w, f)| w * f.eval(xi1, xi2)).sum(),
        }
    }

    /// `d^n/dxi2^n phi(xi1, 0)`.
    pub fn axis_derivative(&self, n: usize, xi1: f64) -> Result<f64> {
        self.xi2_derivative(n, xi1, 0.0)
    }

    /// `d^n/dxi2^n phi(xi1, xi2)`.
    pub fn xi2_derivative(&self, n: usize, xi1: f64, xi2: f64) -> Result<f64> {
        match self {
            TestFunction::GaussianHermite(g) => Ok(g.xi2_derivative(n, xi1, xi2)),
            TestFunction::Bump(b) => b.xi2_derivative(n, xi1, xi2),
            TestFunction::Combination(terms) => {
                let mut acc = 0.0;
                for (w, f) in terms {
                    acc += w * f.xi2_derivative(n, xi1, xi2)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn parity_xi1(&self) -> Parity {
        match self {
            TestFunction::GaussianHermite(g) => g.parity(),
            TestFunction::Bump(_) => Parity::Even,
            TestFunction::Combination(terms) => {
                let mut it = terms.iter().filter(|(w, _)| *w != 0.0).map(|(_, f)| f.parity_xi1());
                match it.next() {
                    None => Parity::Even,
                    Some(first) => {
                        if it.all(|p| p == first) {
                            first
                        } else {
                            Parity::None
                        }
                    }
                }
            }
        }
    }

    pub fn decay(&self) -> Decay {
        match self {
            TestFunction::GaussianHermite(g) => Decay::Schwartz { decay_scale: g.scale },
            TestFunction::Bump(b) => Decay::Compact {
                support_radius: b.radius,
            },
            TestFunction::Combination(terms) => {
                let mut compact = 0.0f64;
                let mut schwartz: Option<f64> = None;
                for (_, f) in terms {
                    match f.decay() {
                        Decay::Compact { support_radius } => compact = compact.max(support_radius),
                        Decay::Schwartz { decay_scale } => {
                            schwartz = Some(schwartz.map_or(decay_scale, |s| s.max(decay_scale)))
                        }
                    }
                }
                match schwartz {
                    Some(decay_scale) => Decay::Schwartz { decay_scale },
                    None => Decay::Compact {
                        support_radius: compact,
                    },
                }
            }
        }
    }

    /// `None` means every order is exact (analytic family).
    pub fn max_exact_derivative_order(&self) -> Option<usize> {
        match self {
            TestFunction::GaussianHermite(_) => None,
            TestFunction::Bump(b) => Some(b.max_order),
            TestFunction::Combination(terms) => terms
                .iter()
                .filter_map(|(_, f)| f.max_exact_derivative_order())
                .min(),
        }
    }

    pub fn supports_derivative(&self, n: usize) -> bool {
        self.max_exact_derivative_order().is_none_or(|max| n <= max)
    }

    /// Linear combination `sum w_i f_i`.
    pub fn combine(terms: Vec<(f64, TestFunction)>) -> TestFunction {
        TestFunction::Combination(terms)
    }

    pub fn scaled(self, k: f64) -> TestFunction {
        TestFunction::Combination(vec![(k, self)])
    }

    /// Half-width of the `xi1` range the quadrature routines integrate over:
    /// the support radius for compact functions, otherwise the spec's
    /// truncation radius widened by the envelope's offset from the origin.
    pub fn integration_radius(&self, truncation_radius: f64) -> f64 {
        match self {
            TestFunction::GaussianHermite(g) => truncation_radius * g.scale + g.center.0.abs().max(g.center.1.abs()),
            TestFunction::Bump(b) => b.radius,
            TestFunction::Combination(terms) => terms
                .iter()
                .map(|(_, f)| f.integration_radius(truncation_radius))
                .fold(0.0, f64::max),
        }
    }

    /// Closed-form moment for the Gaussian family (and combinations of it);
    /// `None` when any component is a bump.
    pub fn exact_axis_moment(&self, m: usize, n: usize) -> Option<f64> {
        match self {
            TestFunction::GaussianHermite(g) => Some(g.exact_axis_moment(m, n)),
            TestFunction::Bump(_) => None,
            TestFunction::Combination(terms) => {
                let mut acc = 0.0;
                for (w, f) in terms {
                    acc += w * f.exact_axis_moment(m, n)?;
                }
                Some(acc)
            }
        }
    }
}

/// `int xi1^m d^n/dxi2^n phi(xi1, 0) dxi1` by adaptive quadrature over the
/// function's integration radius.
pub fn axis_moment(f: &TestFunction, m: usize, n: usize, spec: &QuadratureSpec) -> Result<Estimate<f64>> {
    if let Some(max) = f.max_exact_derivative_order() {
        if n > max {
            return Err(Error::DerivativeOrder { requested: n, max });
        }
    }
    let r = f.integration_radius(spec.truncation_radius);
    let integrand = |x: f64| powi(x, m as i32) * f.axis_derivative(n, x).unwrap_or(f64::NAN);
    integrate_adaptive(integrand, (-r, r), spec)
}
