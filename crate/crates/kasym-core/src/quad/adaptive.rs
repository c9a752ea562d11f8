use alloc::vec::Vec;

use super::{Estimate, QuadratureSpec};
use crate::math::{compensated_sum, QuadValue};
use crate::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980923287,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
// Gauss weights for the odd-indexed XGK nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

fn gauss_kronrod<V: QuadValue, G: Fn(f64) -> V>(g: &G, a: f64, b: f64) -> Result<Segment<V>> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    if !fc.is_finite() {
        return Err(non_finite(center));
    }
    let mut kronrod = fc.scale(WGK[10]);
    let mut gauss = V::zero();
    for j in 0..10 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (g(x1), g(x2));
        if !f1.is_finite() {
            return Err(non_finite(x1));
        }
        if !f2.is_finite() {
            return Err(non_finite(x2));
        }
        let pair = f1.add(f2);
        kronrod = kronrod.add(pair.scale(WGK[j]));
        if j % 2 == 1 {
            gauss = gauss.add(pair.scale(WG[j / 2]));
        }
    }
    let value = kronrod.scale(half);
    let error = kronrod.sub(gauss).scale(half).magnitude();
    Ok(Segment { a, b, value, error })
}

fn non_finite(x: f64) -> Error {
    Error::Domain(alloc::format!("integrand is not finite at {x}"))
}

/// Globally adaptive 21-point Gauss-Kronrod quadrature over a finite interval.
///
/// Stops when the summed error estimate is below
/// `max(abs_tol, rel_tol * |result|)`; exhausting `max_subdivisions` yields
/// [`Error::NotConverged`] carrying the best estimate.
pub fn integrate_adaptive<V: QuadValue, G: Fn(f64) -> V>(
    g: G,
    interval: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Estimate<V>> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("interval", "endpoints must be finite"));
    }
    if a == b {
        return Ok(Estimate {
            value: V::zero(),
            error: 0.0,
        });
    }
    if a > b {
        let r = integrate_adaptive(g, (b, a), spec)?;
        return Ok(Estimate {
            value: r.value.scale(-1.0),
            error: r.error,
        });
    }

    let mut segments: Vec<Segment<V>> = Vec::with_capacity(64);
    let first = gauss_kronrod(&g, a, b)?;
    let mut total_error = first.error;
    let mut total = first.value;
    segments.push(first);

    loop {
        let tol = spec.tolerance(total.magnitude());
        if total_error <= tol {
            return Ok(finish(&mut segments));
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(not_converged(&mut segments));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, s)| if s.error > be { (i, s.error) } else { (bi, be) });
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            // interval can no longer be split in floating point
            return Err(not_converged(&mut segments));
        }
        let left = gauss_kronrod(&g, seg.a, mid)?;
        let right = gauss_kronrod(&g, mid, seg.b)?;
        total_error += left.error + right.error - seg.error;
        total = total.add(left.value).add(right.value).sub(seg.value);
        segments[worst] = left;
        segments.push(right);
        if segments.len().is_multiple_of(64) {
            // refresh the running sums against drift
            total_error = segments.iter().map(|s| s.error).sum();
            total = compensated_sum(segments.iter().map(|s| s.value));
        }
    }
}

fn finish<V: QuadValue>(segments: &mut [Segment<V>]) -> Estimate<V> {
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    Estimate {
        value: compensated_sum(segments.iter().map(|s| s.value)),
        error: segments.iter().map(|s| s.error).sum(),
    }
}

fn not_converged<V: QuadValue>(segments: &mut [Segment<V>]) -> Error {
    let best = finish(segments);
    let [re, im] = best.value.lanes();
    Error::NotConverged {
        estimate_re: re,
        estimate_im: im,
        error: best.error,
    }
}
