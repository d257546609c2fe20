//! Material flow account for one year and its ingestion checks.
//!
//! Recycled input is treated as part of `total_input` and, being
//! non-energetic, as part of `structural_input`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantity::MassQuantity;

pub const DEFAULT_BALANCE_TOLERANCE: f64 = 0.05;

/// Relative slack used for identities that should hold exactly but are
/// evaluated in floating point (category sums, zero residual).
pub(crate) const IDENTITY_EPS: f64 = 1e-12;

/// One year of economy-wide mass flows, in Gt/yr.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialFlowAccount {
    pub year: i32,
    pub total_input: MassQuantity,
    pub energetic_input: MassQuantity,
    pub structural_input: MassQuantity,
    pub recycled_input: MassQuantity,
    pub emissions_output: MassQuantity,
    pub waste_output: MassQuantity,
    pub net_stock_additions: MassQuantity,
    /// Output mass redirected from waste into the reverse flow by a
    /// scenario. Zero for reported accounts.
    pub recovered_output: MassQuantity,
    pub balance_tolerance: f64,
}

/// Raw figures in Gt/yr, in the order inputs are usually tabulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowFigures {
    pub total_input: f64,
    pub energetic_input: f64,
    pub structural_input: f64,
    pub recycled_input: f64,
    pub emissions_output: f64,
    pub waste_output: f64,
    pub net_stock_additions: f64,
}

impl FlowFigures {
    pub fn new(
        total_input: f64,
        energetic_input: f64,
        structural_input: f64,
        recycled_input: f64,
        emissions_output: f64,
        waste_output: f64,
        net_stock_additions: f64,
    ) -> Self {
        FlowFigures {
            total_input,
            energetic_input,
            structural_input,
            recycled_input,
            emissions_output,
            waste_output,
            net_stock_additions,
        }
    }
}

impl MaterialFlowAccount {
    /// Builds an account from gigatonne figures with the default tolerance.
    ///
    /// Only per-field checks run here; cross-field invariants are left to
    /// [`MaterialFlowAccount::validate`].
    pub fn new(year: i32, f: FlowFigures) -> Result<Self> {
        let gt = |field: &str, v: f64| {
            MassQuantity::named(field, v, crate::quantity::MassUnit::Gigatonnes)
        };
        Ok(MaterialFlowAccount {
            year,
            total_input: gt("total_input", f.total_input)?,
            energetic_input: gt("energetic_input", f.energetic_input)?,
            structural_input: gt("structural_input", f.structural_input)?,
            recycled_input: gt("recycled_input", f.recycled_input)?,
            emissions_output: gt("emissions_output", f.emissions_output)?,
            waste_output: gt("waste_output", f.waste_output)?,
            net_stock_additions: gt("net_stock_additions", f.net_stock_additions)?,
            recovered_output: MassQuantity::ZERO,
            balance_tolerance: DEFAULT_BALANCE_TOLERANCE,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !tolerance.is_finite() || !(0.0..=1.0).contains(&tolerance) {
            return Err(Error::FractionOutOfRange {
                what: "balance_tolerance".into(),
                value: tolerance,
            });
        }
        self.balance_tolerance = tolerance;
        Ok(self)
    }

    /// `total_input − (emissions + waste + net stock additions + recovered)`.
    pub fn residual(&self) -> f64 {
        self.total_input.value()
            - (self.emissions_output.value()
                + self.waste_output.value()
                + self.net_stock_additions.value()
                + self.recovered_output.value())
    }

    /// Multiplies every mass field by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Ok(MaterialFlowAccount {
            year: self.year,
            total_input: self.total_input.scale(k)?,
            energetic_input: self.energetic_input.scale(k)?,
            structural_input: self.structural_input.scale(k)?,
            recycled_input: self.recycled_input.scale(k)?,
            emissions_output: self.emissions_output.scale(k)?,
            waste_output: self.waste_output.scale(k)?,
            net_stock_additions: self.net_stock_additions.scale(k)?,
            recovered_output: self.recovered_output.scale(k)?,
            balance_tolerance: self.balance_tolerance,
        })
    }

    pub fn validate(&self) -> ValidationOutcome {
        validate(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationStatus {
    Pass,
    PassWithWarning,
    Fail,
}

impl ValidationStatus {
    pub fn label(self) -> &'static str {
        match self {
            ValidationStatus::Pass => "pass",
            ValidationStatus::PassWithWarning => "pass-with-warning",
            ValidationStatus::Fail => "fail",
        }
    }
}

/// Identifies one of the account invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    PositiveTotalInput,
    CategorySum,
    RecycledWithinStructural,
    StockWithinStructural,
    RecycledWithinAnnualPool,
    MassBalance,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::PositiveTotalInput => "total_input > 0",
            Invariant::CategorySum => "energetic_input + structural_input = total_input",
            Invariant::RecycledWithinStructural => "recycled_input <= structural_input",
            Invariant::StockWithinStructural => "net_stock_additions <= structural_input",
            Invariant::RecycledWithinAnnualPool => {
                "recycled_input <= structural_input - net_stock_additions"
            }
            Invariant::MassBalance => "|residual| <= balance_tolerance * total_input",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub invariant: Invariant,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationOutcome {
    pub status: ValidationStatus,
    /// Signed residual mass in Gt/yr.
    pub residual: f64,
    /// Residual as a fraction of total input; NaN when total input is zero.
    pub residual_fraction: f64,
    pub tolerance: f64,
    pub checks: Vec<CheckResult>,
}

impl ValidationOutcome {
    pub fn is_ok(&self) -> bool {
        self.status != ValidationStatus::Fail
    }

    pub fn violations(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Converts a failing outcome into [`Error::InvalidAccount`].
    pub fn into_result(self) -> Result<ValidationOutcome> {
        if self.is_ok() {
            Ok(self)
        } else {
            let msg = self
                .violations()
                .map(|c| format!("{} ({})", c.invariant.name(), c.detail))
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::InvalidAccount(msg))
        }
    }
}

pub fn validate(account: &MaterialFlowAccount) -> ValidationOutcome {
    let total = account.total_input.value();
    let energetic = account.energetic_input.value();
    let structural = account.structural_input.value();
    let recycled = account.recycled_input.value();
    let nas = account.net_stock_additions.value();
    let eps = IDENTITY_EPS * total;

    let residual = account.residual();
    let residual_fraction = if total > 0.0 {
        residual / total
    } else {
        f64::NAN
    };
    let mut checks = Vec::with_capacity(6);
    let mut check = |invariant, passed, detail: String| {
        checks.push(CheckResult {
            invariant,
            passed,
            detail,
        })
    };

    check(
        Invariant::PositiveTotalInput,
        total > 0.0,
        format!("total_input = {total}"),
    );
    let category_gap = energetic + structural - total;
    check(
        Invariant::CategorySum,
        category_gap.abs() <= eps,
        format!("{energetic} + {structural} = {}", energetic + structural),
    );
    check(
        Invariant::RecycledWithinStructural,
        recycled <= structural + eps,
        format!("{recycled} vs {structural}"),
    );
    check(
        Invariant::StockWithinStructural,
        nas <= structural + eps,
        format!("{nas} vs {structural}"),
    );
    check(
        Invariant::RecycledWithinAnnualPool,
        recycled <= structural - nas + eps,
        format!("{recycled} vs {}", structural - nas),
    );
    check(
        Invariant::MassBalance,
        total > 0.0 && residual.abs() <= account.balance_tolerance * total + eps,
        format!(
            "residual {residual:.4} Gt vs allowed {:.4} Gt",
            account.balance_tolerance * total
        ),
    );

    let status = if checks.iter().any(|c| !c.passed) {
        ValidationStatus::Fail
    } else if residual.abs() > eps {
        ValidationStatus::PassWithWarning
    } else {
        ValidationStatus::Pass
    };

    ValidationOutcome {
        status,
        residual,
        residual_fraction,
        tolerance: account.balance_tolerance,
        checks,
    }
}

/// Input not dissipated by energetic use: `total − energetic`.
pub fn recoverable_input(account: &MaterialFlowAccount) -> MassQuantity {
    account.structural_input
}

/// Structural input not locked into stocks this year.
pub fn annually_recoverable_input(account: &MaterialFlowAccount) -> Result<MassQuantity> {
    account
        .structural_input
        .checked_sub(account.net_stock_additions)
        .ok_or(Error::NegativeRecoverable {
            value: account.structural_input.value() - account.net_stock_additions.value(),
        })
}

pub fn waste_share(account: &MaterialFlowAccount) -> Result<f64> {
    let total = account.total_input.value();
    if total == 0.0 {
        return Err(Error::UndefinedDenominator {
            metric: "waste share",
            denominator: "total_input",
        });
    }
    Ok(account.waste_output.value() / total)
}
