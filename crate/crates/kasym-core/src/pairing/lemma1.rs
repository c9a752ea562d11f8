use alloc::vec::Vec;

use crate::math::{powi, CompensatedSum};
use crate::quad::{integrate_adaptive, QuadratureSpec};
use crate::testfn::fd_weights;
use crate::{Complex64, Error, Result};

/// The transform's `k`-th derivative at the origin uses `2 * STENCIL_HALF_WIDTH + 1`
/// DFT bins.
pub const STENCIL_HALF_WIDTH: usize = 12;

/// `p(xi) exp(-((xi - center)/scale)^2)` with `p = sum poly[j] xi^j`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Profile1d {
    pub center: f64,
    pub scale: f64,
    pub poly: Vec<f64>,
}

impl Profile1d {
    pub fn gaussian(center: f64, scale: f64) -> Self {
        Profile1d {
            center,
            scale,
            poly: alloc::vec![1.0],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let w = (x - self.center) / self.scale;
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
        p * libm::exp(-w * w)
    }

    fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::invalid("scale", "must be finite and positive"));
        }
        if !self.center.is_finite() || self.poly.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("f1d", "center and coefficients must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma1Check {
    /// `int xi^k phi(xi) dxi` by adaptive quadrature.
    pub direct: f64,
    /// `(-i)^k (F phi)^{(k)}(0)` from the DFT.
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub dft: Complex64,
    pub discrepancy: f64,
}

/// Computes the `k`-th moment directly and through the Fourier transform
/// `F phi(x) = int phi(xi) e^{i x xi} dxi` (so `F delta = 1`), whose `k`-th
/// derivative at the origin is `i^k` times the moment.
///
/// `phi` is sampled at `grid_size` points on `[-halfwidth, halfwidth)`; the
/// transform is evaluated at the DFT frequencies `2 pi l / (2 halfwidth)`
/// nearest the origin, and differentiated there by a central stencil.
pub fn lemma1_dft_check(k: usize, f1d: &Profile1d, grid_size: usize, halfwidth: f64) -> Result<Lemma1Check> {
    f1d.validate()?;
    if !(halfwidth.is_finite() && halfwidth >= f1d.center.abs() + 10.0 * f1d.scale) {
        return Err(Error::invalid("halfwidth", "must be at least |center| + 10 * scale"));
    }
    if k > 2 * STENCIL_HALF_WIDTH {
        return Err(Error::invalid("k", "exceeds the stencil's reach"));
    }
    let h = 2.0 * halfwidth / grid_size as f64;
    let limit = f1d.scale / 4.0;
    if grid_size < 4 * STENCIL_HALF_WIDTH || h > limit {
        return Err(Error::GridTooCoarse { spacing: h, limit });
    }

    let samples: Vec<(f64, f64)> = (0..grid_size)
        .map(|j| {
            let x = -halfwidth + j as f64 * h;
            (x, f1d.eval(x))
        })
        .collect();
    let dx = core::f64::consts::PI / halfwidth;
    let half = STENCIL_HALF_WIDTH as isize;
    let nodes: Vec<f64> = (-half..=half).map(|l| l as f64).collect();
    let weights = fd_weights(&nodes, k);
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for (l, w) in (-half..=half).zip(weights) {
        let z = dft_bin(&samples, l as f64 * dx) * h;
        re.add(w * z.re);
        im.add(w * z.im);
    }
    let derivative = Complex64::new(re.value(), im.value()) / powi(dx, k as i32);
    // (-i)^k
    let rotation = match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let dft = rotation * derivative;

    let spec = QuadratureSpec::default();
    let direct = integrate_adaptive(|x: f64| powi(x, k as i32) * f1d.eval(x), (-halfwidth, halfwidth), &spec)?.value;
    Ok(Lemma1Check {
        direct,
        dft,
        discrepancy: (dft - direct).norm(),
    })
}

fn dft_bin(samples: &[(f64, f64)], freq: f64) -> Complex64 {
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for &(x, v) in samples {
        let (s, c) = libm::sincos(freq * x);
        re.add(v * c);
        im.add(v * s);
    }
    Complex64::new(re.value(), im.value())
}

#[cfg(test)]
mod tests {
    use core::f64::consts::PI;

    use super::*;

    #[test]
    fn examples() {
        let g = Profile1d::gaussian(0.0, 1.0);
        let r = lemma1_dft_check(0, &g, 4096, 20.0).unwrap();
        assert!((r.direct - libm::sqrt(PI)).abs() < 1e-13);
        assert!(r.discrepancy <= 1e-6, "{r:?}");
        let r = lemma1_dft_check(1, &g, 4096, 20.0).unwrap();
        assert!(r.discrepancy <= 1e-8 && r.direct.abs() < 1e-15, "{r:?}");
        let shifted = Profile1d::gaussian(1.0, 1.0);
        let r = lemma1_dft_check(4, &shifted, 4096, 20.0).unwrap();
        assert!((r.direct - 8.419_155_791_801_2).abs() < 1e-11);
        assert!(r.discrepancy <= 1e-6, "{r:?}");
    }

    #[test]
    fn orders_up_to_six() {
        for f in [Profile1d::gaussian(0.0, 1.0), Profile1d::gaussian(1.0, 1.0), Profile1d::gaussian(-0.5, 0.7)] {
            for k in 0..=6 {
                let r = lemma1_dft_check(k, &f, 4096, 20.0).unwrap();
                assert!(r.discrepancy <= 1e-6 * f.scale, "k = {k}: {r:?}");
            }
        }
        let r = lemma1_dft_check(6, &Profile1d::gaussian(1.0, 1.0), 4096, 20.0).unwrap();
        assert!((r.direct - 38.32931452583178).abs() < 1e-10);
    }

    #[test]
    fn coarse_grids_are_rejected() {
        let g = Profile1d::gaussian(0.0, 1.0);
        assert!(matches!(lemma1_dft_check(2, &g, 64, 20.0), Err(Error::GridTooCoarse { .. })));
        assert!(lemma1_dft_check(2, &g, 4096, 5.0).is_err());
    }
}
