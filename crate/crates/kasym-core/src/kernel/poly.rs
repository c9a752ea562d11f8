use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::Zero;

use super::FormMode;
use crate::math::{powi, CompensatedSum};
use crate::{Error, Result};

/// Largest `n` accepted by [`p_poly`]; keeps the harmonic-sum denominators
/// inside `i128`.
pub const MAX_POLY_INDEX: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PTerm {
    pub n_power: u32,
    pub xi_power: u32,
    pub coeff: Ratio<i128>,
}

impl PTerm {
    pub fn coeff_f64(&self) -> f64 {
        ratio_to_f64(self.coeff)
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The polynomial part `P_{2n-1}(N, xi1)` of `T_{2n,N}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPoly {
    pub n: u32,
    pub mode: FormMode,
    /// One term per odd power `N^{2k-1}`, ordered by `k = 1..=n`.
    pub terms: Vec<PTerm>,
}

impl PPoly {
    pub fn eval(&self, cutoff: f64, xi1: f64) -> f64 {
        let mut acc = CompensatedSum::default();
        for t in &self.terms {
            acc.add(t.coeff_f64() * powi(cutoff, t.n_power as i32) * powi(xi1, t.xi_power as i32));
        }
        acc.value()
    }

    pub fn leading_coeff(&self) -> Ratio<i128> {
        self.terms
            .iter()
            .find(|t| t.n_power == 2 * self.n - 1)
            .map_or_else(Ratio::zero, |t| t.coeff)
    }
}

/// `-2 (1 + 1/3 + ... + 1/(2k-1))`.
pub fn harmonic_coeff(k: u32) -> Ratio<i128> {
    let sum = (1..=k).fold(Ratio::zero(), |acc: Ratio<i128>, j| {
        acc + Ratio::new(1, i128::from(2 * j - 1))
    });
    sum * Ratio::from_integer(-2)
}

/// `-2/(2k-1)`, the coefficient generated by the recurrence
/// `T_{2n} = -2 N^{2n-1}/(2n-1) + xi1^2 T_{2n-2}`.
pub fn derived_coeff(k: u32) -> Ratio<i128> {
    Ratio::new(-2, i128::from(2 * k - 1))
}

/// Power of `xi1` carried by `N^{2k-1}` in the printed general form
/// `c_{2n-1} N^{2n-1} + c_{2n-3} N^{2n-3} xi1^2 + ... + c_1 N xi1^{2n-1}`.
pub fn literal_xi_power(k: u32, n: u32) -> u32 {
    if k == 1 && n > 1 {
        2 * n - 1
    } else {
        2 * (n - k)
    }
}

pub fn p_poly(n: u32, mode: FormMode) -> Result<PPoly> {
    if n == 0 || n > MAX_POLY_INDEX {
        return Err(Error::invalid("n", "must lie in 1..=32"));
    }
    let terms = (1..=n)
        .map(|k| match mode {
            FormMode::Derived => PTerm {
                n_power: 2 * k - 1,
                xi_power: 2 * (n - k),
                coeff: derived_coeff(k),
            },
            FormMode::PaperLiteral => PTerm {
                n_power: 2 * k - 1,
                xi_power: literal_xi_power(k, n),
                coeff: harmonic_coeff(k),
            },
        })
        .collect();
    Ok(PPoly { n, mode, terms })
}
