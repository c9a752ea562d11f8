use alloc::vec::Vec;

use num_rational::Ratio;

use super::poly::{derived_coeff, harmonic_coeff, ratio_to_f64};
use super::FormMode;
use crate::math::{factorial, powi, INV_TWO_PI_SQ};
use crate::{Complex64, Error, Result};

/// Which summand of the expansion an entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CoeffBlock {
    /// The `(i/4 pi) b^{2n}/(2n)!` block from the `pi i/2` parts of `T_{2n,N}`.
    Lemma,
    /// The polynomial part, indexed by the power `N^{2k-1}`.
    Polynomial { k: u32 },
}

/// `c_{m,n}(a)` multiplying `(tilde-delta^{(m)} (x) delta^{(n)}, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoeffEntry {
    pub m: u32,
    pub n: u32,
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_complex"))]
    pub value: Complex64,
    pub mode: FormMode,
    pub block: CoeffBlock,
    /// Exponent of `b = 1/a` in `value`; always positive.
    pub b_power: u32,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoeffTable {
    pub a: f64,
    pub truncation_order: u32,
    pub entries: Vec<CoeffEntry>,
}

/// Coefficients of the sharp expansion up to `xi2`-derivative order
/// `truncation_order`, with the cutoff tied to the cone parameter by `N = a`.
///
/// Entries are ordered by `n`, then the Lemma block, then `k = 1..=n`, so the
/// table at a lower order is a prefix of the table at a higher one.
pub fn coeff_table(a: f64, truncation_order: u32, mode: FormMode) -> Result<CoeffTable> {
    coeff_table_with_multiplier(a, truncation_order, mode, 1.0)
}

/// As [`coeff_table`] with `N = multiplier * a`.
pub fn coeff_table_with_multiplier(a: f64, truncation_order: u32, mode: FormMode, multiplier: f64) -> Result<CoeffTable> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::invalid("a", "cone parameter must be finite and positive"));
    }
    if !(multiplier.is_finite() && multiplier > 0.0) {
        return Err(Error::invalid("multiplier", "must be finite and positive"));
    }
    let b = 1.0 / a;
    let mut entries = Vec::new();
    for half in 1..=truncation_order / 2 {
        let n = 2 * half;
        let fact = factorial(n as usize);
        entries.push(CoeffEntry {
            m: n - 1,
            n,
            value: Complex64::new(0.0, powi(b, n as i32) / (fact * 4.0 * core::f64::consts::PI)),
            mode,
            block: CoeffBlock::Lemma,
            b_power: n,
        });
        for k in 1..=half {
            let (m, c): (u32, Ratio<i128>) = match mode {
                FormMode::Derived => (2 * (half - k), derived_coeff(k)),
                FormMode::PaperLiteral => (2 * k - 1, harmonic_coeff(k)),
            };
            let b_power = n - 2 * k + 1;
            let c = ratio_to_f64(c);
            let value = INV_TWO_PI_SQ * powi(b, b_power as i32) * c / fact * powi(multiplier, 2 * k as i32 - 1);
            entries.push(CoeffEntry {
                m,
                n,
                value: Complex64::new(value, 0.0),
                mode,
                block: CoeffBlock::Polynomial { k },
                b_power,
            });
        }
    }
    Ok(CoeffTable {
        a,
        truncation_order,
        entries,
    })
}
