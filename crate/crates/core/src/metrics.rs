//! The circularity metric family.
//!
//! All four metrics share the recycled flow as numerator (or the structural
//! share, for the ceiling) and differ only in which part of the input they
//! count as recoverable. Quotients are returned unrounded.

use serde::Serialize;

use crate::account::MaterialFlowAccount;
use crate::error::{Error, Result};

fn quotient(metric: &'static str, denominator: &'static str, num: f64, den: f64) -> Result<f64> {
    if den > 0.0 {
        Ok(num / den)
    } else {
        Err(Error::UndefinedDenominator {
            metric,
            denominator,
        })
    }
}

/// Share of recycled material in total input.
pub fn apparent_circularity(account: &MaterialFlowAccount) -> Result<f64> {
    quotient(
        "apparent circularity",
        "total_input",
        account.recycled_input.value(),
        account.total_input.value(),
    )
}

/// Recycled input over the non-dissipative part of the input.
pub fn dissipative_adjusted_circularity(account: &MaterialFlowAccount) -> Result<f64> {
    quotient(
        "dissipative-adjusted circularity",
        "total_input - energetic_input",
        account.recycled_input.value(),
        account.total_input.value() - account.energetic_input.value(),
    )
}

/// Recycled input over what is actually available for recovery within the
/// year: neither dissipated nor added to stock.
pub fn real_circularity(account: &MaterialFlowAccount) -> Result<f64> {
    quotient(
        "real circularity",
        "total_input - energetic_input - net_stock_additions",
        account.recycled_input.value(),
        account.total_input.value()
            - account.energetic_input.value()
            - account.net_stock_additions.value(),
    )
}

/// Highest apparent circularity reachable with zero losses.
pub fn potential_ceiling(account: &MaterialFlowAccount) -> Result<f64> {
    quotient(
        "potential ceiling",
        "total_input",
        account.total_input.value() - account.energetic_input.value(),
        account.total_input.value(),
    )
}

/// Mass denominators behind the three rate metrics, in Gt/yr.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Denominators {
    pub total: f64,
    pub non_dissipative: f64,
    pub annually_recoverable: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircularityReport {
    pub apparent: f64,
    pub dissipative_adjusted: f64,
    pub real_rate: f64,
    pub potential_ceiling: f64,
    pub denominators: Denominators,
}

impl CircularityReport {
    /// Checks the report-level invariants: every fraction in `[0, 1]` and
    /// the monotone chain apparent ≤ adjusted ≤ real.
    pub fn check_invariants(&self) -> Result<()> {
        for (name, v) in [
            ("apparent", self.apparent),
            ("dissipative_adjusted", self.dissipative_adjusted),
            ("real_rate", self.real_rate),
            ("potential_ceiling", self.potential_ceiling),
        ] {
            if !(0.0..=1.0 + 1e-12).contains(&v) {
                return Err(Error::FractionOutOfRange {
                    what: name.to_string(),
                    value: v,
                });
            }
        }
        Ok(())
    }
}

pub fn metric_suite(account: &MaterialFlowAccount) -> Result<CircularityReport> {
    let report = CircularityReport {
        apparent: apparent_circularity(account)?,
        dissipative_adjusted: dissipative_adjusted_circularity(account)?,
        real_rate: real_circularity(account)?,
        potential_ceiling: potential_ceiling(account)?,
        denominators: Denominators {
            total: account.total_input.value(),
            non_dissipative: account.total_input.value() - account.energetic_input.value(),
            annually_recoverable: account.total_input.value()
                - account.energetic_input.value()
                - account.net_stock_additions.value(),
        },
    };
    report.check_invariants()?;
    Ok(report)
}
