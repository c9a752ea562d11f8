use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{tkn_eval, tkn_pv_oracle, FormMode, TknForm};
use crate::quad::{Extent, QuadratureSpec};
use crate::{Error, Result};

/// Relative agreement threshold between a closed form and the oracle.
pub const AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Derived,
    PaperLiteral,
    /// Both forms are within tolerance of the oracle.
    Agree,
    /// The oracle failed on this row.
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Derived => "derived",
            Verdict::PaperLiteral => "paper_literal",
            Verdict::Agree => "agree",
            Verdict::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscrepancyRow {
    pub k: u32,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub n_cut: f64,
    pub xi1: f64,
    /// Real parts of the two closed forms.
    pub paper_literal: f64,
    pub derived: f64,
    pub oracle: Option<f64>,
    pub paper_gap: Option<f64>,
    pub derived_gap: Option<f64>,
    pub verdict: Verdict,
    pub error: Option<String>,
}

impl DiscrepancyRow {
    /// Tolerance applied to this row's gaps.
    pub fn tolerance(&self) -> Option<f64> {
        self.oracle.map(|o| AGREEMENT_TOL * o.abs().max(1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscrepancyReport {
    pub rows: Vec<DiscrepancyRow>,
}

/// `N in {10, 100}` by `xi1 in {0.3, 1, 2}`.
pub fn standard_grid() -> Vec<(f64, f64)> {
    [10.0, 100.0]
        .into_iter()
        .flat_map(|n| [0.3, 1.0, 2.0].into_iter().map(move |x| (n, x)))
        .collect()
}

/// One row per `k = 1..=2 n_max` and grid point, in that order. Rows whose
/// oracle fails carry the error and verdict [`Verdict::Error`].
pub fn discrepancy_report(n_max: u32, grid: &[(f64, f64)], spec: &QuadratureSpec) -> Result<DiscrepancyReport> {
    if n_max == 0 {
        return Err(Error::invalid("n_max", "must be positive"));
    }
    spec.validate()?;
    let mut rows = Vec::with_capacity(grid.len() * 2 * n_max as usize);
    for k in 1..=2 * n_max {
        for &(n_cut, xi1) in grid {
            let form = |mode| TknForm::new(k, Extent::Finite(n_cut), mode);
            let literal = tkn_eval(&form(FormMode::PaperLiteral), xi1)?.re;
            let derived = tkn_eval(&form(FormMode::Derived), xi1)?.re;
            rows.push(match tkn_pv_oracle(k, n_cut, xi1, spec) {
                Ok(oracle) => judge(k, n_cut, xi1, literal, derived, oracle.value),
                Err(e) => DiscrepancyRow {
                    k,
                    n_cut,
                    xi1,
                    paper_literal: literal,
                    derived,
                    oracle: None,
                    paper_gap: None,
                    derived_gap: None,
                    verdict: Verdict::Error,
                    error: Some(e.to_string()),
                },
            });
        }
    }
    Ok(DiscrepancyReport { rows })
}

fn judge(k: u32, n_cut: f64, xi1: f64, literal: f64, derived: f64, oracle: f64) -> DiscrepancyRow {
    let tol = AGREEMENT_TOL * oracle.abs().max(1.0);
    let paper_gap = (literal - oracle).abs();
    let derived_gap = (derived - oracle).abs();
    let verdict = if paper_gap <= tol && derived_gap <= tol {
        Verdict::Agree
    } else if derived_gap <= paper_gap {
        Verdict::Derived
    } else {
        Verdict::PaperLiteral
    };
    DiscrepancyRow {
        k,
        n_cut,
        xi1,
        paper_literal: literal,
        derived,
        oracle: Some(oracle),
        paper_gap: Some(paper_gap),
        derived_gap: Some(derived_gap),
        verdict,
        error: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_report() {
        let spec = QuadratureSpec::default();
        let report = discrepancy_report(3, &standard_grid(), &spec).unwrap();
        assert_eq!(report.rows.len(), 36);
        let row = report.rows.iter().find(|r| r.k == 2 && r.n_cut == 10.0 && r.xi1 == 1.0).unwrap();
        assert_eq!(row.verdict, Verdict::Derived);
        assert!((row.derived - -19.799_329_304_537_85).abs() < 1e-12);
        assert!((row.paper_literal - -19.899664652268924).abs() < 1e-12);
        assert!(row.derived_gap.unwrap() <= row.tolerance().unwrap());
        for r in report.rows.iter().filter(|r| r.k % 2 == 1) {
            assert_eq!(r.verdict, Verdict::Agree, "{r:?}");
            assert_eq!((r.paper_literal, r.derived), (0.0, 0.0));
        }
        // even k: the derived forms always meet the tolerance; the printed
        // ones only where the logarithm is negligible
        for r in report.rows.iter().filter(|r| r.k % 2 == 0) {
            assert!(matches!(r.verdict, Verdict::Derived | Verdict::Agree), "{r:?}");
            assert!(r.derived_gap.unwrap() <= r.tolerance().unwrap(), "{r:?}");
        }
    }

    #[test]
    fn oracle_failures_stay_in_their_row() {
        let spec = QuadratureSpec::default();
        // |xi1| below the excision radius: the poles are too close together
        let report = discrepancy_report(1, &[(10.0, 0.001), (10.0, 1.0)], &spec).unwrap();
        assert_eq!(report.rows.len(), 4);
        let bad = &report.rows[0];
        assert_eq!(bad.verdict, Verdict::Error);
        assert!(bad.error.is_some() && bad.oracle.is_none());
        assert_eq!(report.rows[1].verdict, Verdict::Agree);
    }
}
