//! Small numeric helpers shared by the modules.

use core::f64::consts::PI;

use num_complex::Complex64;

/// `x^n` by binary powering; `powi` is not available without `std`.
pub fn powi(x: f64, n: i32) -> f64 {
    if n < 0 {
        return 1.0 / powi(x, -n);
    }
    let mut base = x;
    let mut exp = n as u32;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub const INV_TWO_PI: f64 = 1.0 / (2.0 * PI);
pub const INV_TWO_PI_SQ: f64 = 1.0 / (2.0 * PI * PI);

/// Neumaier-compensated accumulator. Sums of values whose exact negatives are
/// also present cancel to far below one ulp of the largest term.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Values the quadrature routines can integrate: real or complex.
pub trait QuadValue: Copy + core::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    fn magnitude(self) -> f64;
    fn lanes(self) -> [f64; 2];
    fn from_lanes(lanes: [f64; 2]) -> Self;
    fn is_finite(self) -> bool {
        let [a, b] = self.lanes();
        a.is_finite() && b.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        let [re, im] = self.lanes();
        Complex64::new(re, im)
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn lanes(self) -> [f64; 2] {
        [self, 0.0]
    }
    fn from_lanes(lanes: [f64; 2]) -> Self {
        lanes[0]
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn lanes(self) -> [f64; 2] {
        [self.re, self.im]
    }
    fn from_lanes(lanes: [f64; 2]) -> Self {
        Complex64::new(lanes[0], lanes[1])
    }
}

/// Compensated sum of quadrature values, lane by lane.
pub fn compensated_sum<V: QuadValue>(values: impl IntoIterator<Item = V>) -> V {
    let mut acc = [CompensatedSum::default(); 2];
    for v in values {
        let lanes = v.lanes();
        acc[0].add(lanes[0]);
        acc[1].add(lanes[1]);
    }
    V::from_lanes([acc[0].value(), acc[1].value()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(powi(2.0, 10), 1024.0);
        assert_eq!(powi(-3.0, 3), -27.0);
        assert_eq!(powi(2.0, -2), 0.25);
        assert_eq!(powi(7.0, 0), 1.0);
    }

    #[test]
    fn compensated_sum_cancels_mirrored_terms() {
        let xs = [1.0e8, 3.3, -7.1e-3, 0.1];
        let all = xs.iter().copied().chain(xs.iter().map(|x| -x));
        assert_eq!(compensated_sum::<f64>(all), 0.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(6, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
