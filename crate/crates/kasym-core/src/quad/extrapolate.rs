use alloc::format;
use alloc::vec::Vec;

use super::Estimate;
use crate::math::QuadValue;
use crate::{Error, Result};

/// Upper bound on the ratio of successive value differences.
const STALL_RATIO: f64 = 0.75;

/// Polynomial (Richardson-type) extrapolation of `value(parameter)` to
/// `parameter = 0`.
///
/// Uses the `order + 1` points with the smallest parameters (all points when
/// fewer are given). The error estimate is the magnitude of the last
/// correction in the Neville tableau. Data whose successive differences do
/// not shrink, above rounding level, is reported as non-convergence.
pub fn limit_extrapolate<V: QuadValue>(points: &[(f64, V)], order: usize) -> Result<Estimate<V>> {
    let scale = points.iter().map(|(_, v)| v.magnitude()).fold(0.0, f64::max);
    extrapolate_with_floor(points, order, 64.0 * f64::EPSILON * scale)
}

pub(crate) fn extrapolate_with_floor<V: QuadValue>(points: &[(f64, V)], order: usize, floor: f64) -> Result<Estimate<V>> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    if order == 0 {
        return Err(Error::invalid("order", "must be positive"));
    }
    if !points.iter().all(|(x, v)| x.is_finite() && *x > 0.0 && v.is_finite()) {
        return Err(Error::invalid("values", "parameters must be positive and all values finite"));
    }
    if !points.windows(2).all(|w| w[1].0 < w[0].0) {
        return Err(Error::invalid("values", "parameters must be strictly decreasing"));
    }

    let used = &points[points.len().saturating_sub(order + 1)..];
    let xs: Vec<f64> = used.iter().map(|p| p.0).collect();
    let mut column: Vec<V> = used.iter().map(|p| p.1).collect();
    // diagonal[k] is the degree-k extrapolant through the k+1 smallest parameters
    let last = used.len() - 1;
    let mut diagonal = Vec::with_capacity(used.len());
    diagonal.push(column[last]);
    for k in 1..used.len() {
        let mut next = Vec::with_capacity(column.len() - 1);
        for i in k..used.len() {
            let (xi, xik) = (xs[i], xs[i - k]);
            let lo = column[i - k];
            let hi = column[i - k + 1];
            next.push(lo.scale(xi).sub(hi.scale(xik)).scale(1.0 / (xi - xik)));
        }
        column = next;
        diagonal.push(*column.last().expect("non-empty"));
    }

    let corrections: Vec<f64> = diagonal.windows(2).map(|w| w[1].sub(w[0]).magnitude()).collect();
    // for geometric parameter steps, the raw differences of a converging
    // sequence shrink by roughly the step ratio
    let steps: Vec<f64> = used.windows(2).map(|w| w[1].1.sub(w[0].1).magnitude()).collect();
    for w in steps.windows(2) {
        if w[1] > STALL_RATIO * w[0] && w[1] > floor {
            return Err(Error::Extrapolation(format!(
                "values are not settling: step {:e} follows step {:e}",
                w[1], w[0]
            )));
        }
    }
    Ok(Estimate {
        value: *diagonal.last().expect("non-empty"),
        error: corrections.last().copied().unwrap_or(0.0),
    })
}
