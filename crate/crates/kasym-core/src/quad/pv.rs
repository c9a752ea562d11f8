use alloc::vec::Vec;

use super::extrapolate::extrapolate_with_floor;
use super::{integrate_adaptive, QuadratureSpec};
use crate::math::{compensated_sum, QuadValue};
use crate::{Error, Result};

/// Principal value with the symmetric-excision sequence it was extrapolated from.
#[derive(Debug, Clone, PartialEq)]
pub struct PvEstimate<V> {
    pub value: V,
    pub error: f64,
    /// `(epsilon, integral with (p - epsilon, p + epsilon) removed around every pole)`.
    pub excision: Vec<(f64, V)>,
}

/// Principal value `v.p. int g` over `interval` for an integrand with simple
/// poles at `poles`.
///
/// For each excision radius `eps` of the schedule the integral over the
/// interval minus the balls `(p - eps, p + eps)` is computed, and the sequence
/// is extrapolated to `eps -> 0`. Around each pole the two sides are folded,
/// `int_eps^delta [g(p + s) + g(p - s)] ds`, so the adaptive rule sees a
/// bounded integrand; away from the poles the integral is computed once.
pub fn integrate_pv<V: QuadValue, G: Fn(f64) -> V>(
    g: G,
    poles: &[f64],
    interval: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<PvEstimate<V>> {
    spec.validate()?;
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid("interval", "must be finite with lo < hi"));
    }
    let mut poles: Vec<f64> = poles.to_vec();
    poles.sort_by(f64::total_cmp);
    let max_eps = spec.max_excision();
    for &p in &poles {
        if !(p.is_finite() && p - lo > max_eps && hi - p > max_eps) {
            return Err(Error::Domain(alloc::format!(
                "pole {p} must lie inside ({lo}, {hi}) by more than the largest excision radius {max_eps}"
            )));
        }
    }
    for w in poles.windows(2) {
        if w[1] - w[0] <= 2.0 * max_eps {
            return Err(Error::PoleSeparation {
                left: w[0],
                right: w[1],
                max_excision: max_eps,
            });
        }
    }

    // folding half-widths: up to half the gap to a neighbouring pole, or the endpoint
    let deltas: Vec<f64> = poles
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let left = if i == 0 { p - lo } else { 0.5 * (p - poles[i - 1]) };
            let right = if i + 1 == poles.len() { hi - p } else { 0.5 * (poles[i + 1] - p) };
            left.min(right)
        })
        .collect();

    let mut regular_parts = Vec::with_capacity(poles.len() + 1);
    let mut error = 0.0;
    let mut cursor = lo;
    for (&p, &d) in poles.iter().zip(&deltas) {
        if p - d > cursor {
            let r = integrate_adaptive(&g, (cursor, p - d), spec)?;
            regular_parts.push(r.value);
            error += r.error;
        }
        cursor = p + d;
    }
    if hi > cursor {
        let r = integrate_adaptive(&g, (cursor, hi), spec)?;
        regular_parts.push(r.value);
        error += r.error;
    }
    let regular = compensated_sum(regular_parts);

    let schedule = &spec.excision_schedule;
    // per pole: running folded integral from eps_j to delta
    let mut folded: Vec<V> = Vec::with_capacity(poles.len());
    let mut increments: Vec<Vec<f64>> = Vec::with_capacity(poles.len());
    for (&p, &d) in poles.iter().zip(&deltas) {
        let fold = |s: f64| g(p + s).add(g(p - s));
        let base = integrate_adaptive(fold, (schedule[0], d), spec)?;
        error += base.error;
        folded.push(base.value);
        increments.push(Vec::with_capacity(schedule.len() - 1));
    }
    let mut excision = Vec::with_capacity(schedule.len());
    excision.push((schedule[0], compensated_sum(core::iter::once(regular).chain(folded.iter().copied()))));
    for j in 1..schedule.len() {
        for (i, &p) in poles.iter().enumerate() {
            let fold = |s: f64| g(p + s).add(g(p - s));
            let step = integrate_adaptive(fold, (schedule[j], schedule[j - 1]), spec)?;
            error += step.error;
            folded[i] = folded[i].add(step.value);
            increments[i].push(step.value.magnitude() / (schedule[j - 1] - schedule[j]));
        }
        excision.push((schedule[j], compensated_sum(core::iter::once(regular).chain(folded.iter().copied()))));
    }

    let magnitude = excision.last().map_or(0.0, |(_, v)| v.magnitude());
    let noise = 10.0 * spec.tolerance(magnitude);
    let span = schedule[0] - schedule[schedule.len() - 1];
    for (i, rates) in increments.iter().enumerate() {
        // a PV-integrable pole has a bounded folded integrand, so the
        // increment per unit radius settles; 1/s or 1/s^2 growth does not
        let (first, last) = (rates[0], rates[rates.len() - 1]);
        if last > 4.0 * first && last * span > noise {
            return Err(Error::NotPvIntegrable { pole: poles[i] });
        }
    }

    let limit = extrapolate_with_floor(&excision, spec.extrapolation_order, noise)?;
    Ok(PvEstimate {
        value: limit.value,
        error: error + limit.error,
        excision,
    })
}
