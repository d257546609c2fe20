//! Declarative what-if transformations over an account/economy pair.
//!
//! Each step moves mass between named bins of the account; none creates
//! mass. Steps run left to right, so order matters: diverting waste to
//! stock shrinks the recoverable pool that a later recovery step targets.

use serde::{Deserialize, Serialize};

use crate::account::{annually_recoverable_input, MaterialFlowAccount, IDENTITY_EPS};
use crate::error::{Error, Result};
use crate::metrics::{metric_suite, CircularityReport};
use crate::quantity::MassQuantity;
use crate::value::{
    attribute_value, reverse_flow_gdp_share, EconomicAccount, FlowCategory, ValueAttribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Transformation {
    /// Recycle `fraction` of the annually recoverable input. The extra
    /// recycled mass is taken out of waste output.
    SetRecoveryRate { fraction: f64 },
    /// Move `fraction` of waste output into net stock additions.
    DivertWasteToStock { fraction: f64 },
    /// Replace `fraction` of energetic input with structural material that
    /// is built into stock. Emissions are left as they are.
    ReplaceEnergeticWithStock { fraction: f64 },
    /// Scale reverse-flow sector value with the change in recycled mass.
    #[serde(rename = "scale_reverse_flow_value_proportionally")]
    ScaleReverseFlowValue { flag: bool },
}

impl Transformation {
    pub fn fraction(&self) -> Option<f64> {
        match *self {
            Transformation::SetRecoveryRate { fraction }
            | Transformation::DivertWasteToStock { fraction }
            | Transformation::ReplaceEnergeticWithStock { fraction } => Some(fraction),
            Transformation::ScaleReverseFlowValue { .. } => None,
        }
    }

    pub fn op_name(&self) -> &'static str {
        match self {
            Transformation::SetRecoveryRate { .. } => "set_recovery_rate",
            Transformation::DivertWasteToStock { .. } => "divert_waste_to_stock",
            Transformation::ReplaceEnergeticWithStock { .. } => "replace_energetic_with_stock",
            Transformation::ScaleReverseFlowValue { .. } => {
                "scale_reverse_flow_value_proportionally"
            }
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.fraction() {
            Some(f) if !(f.is_finite() && (0.0..=1.0).contains(&f)) => {
                Err(Error::FractionOutOfRange {
                    what: format!("{} fraction", self.op_name()),
                    value: f,
                })
            }
            _ => Ok(()),
        }
    }

    /// Applies a mass-moving step to `account`. The value-scaling flag is
    /// handled by [`apply_scenario`] and leaves the account untouched.
    pub fn apply(&self, account: &MaterialFlowAccount) -> Result<MaterialFlowAccount> {
        self.check()?;
        let mut next = account.clone();
        match *self {
            Transformation::SetRecoveryRate { fraction } => {
                let pool = annually_recoverable_input(account)?;
                let target = fraction * pool.value();
                let delta = target - account.recycled_input.value();
                let waste = account.waste_output.value();
                let recovered = account.recovered_output.value();
                let eps = IDENTITY_EPS * account.total_input.value();
                if delta >= 0.0 {
                    if delta > waste + eps {
                        return Err(Error::InsufficientWaste {
                            needed: delta,
                            available: waste,
                        });
                    }
                    next.waste_output = gt((waste - delta).max(0.0))?;
                    next.recovered_output = gt(recovered + delta)?;
                } else {
                    // Only mass recovered by earlier steps goes back to waste;
                    // below that, primary input stands in for the recyclate.
                    let released = (-delta).min(recovered);
                    next.waste_output = gt(waste + released)?;
                    next.recovered_output = gt(recovered - released)?;
                }
                next.recycled_input = gt(target)?;
            }
            Transformation::DivertWasteToStock { fraction } => {
                let moved = fraction * account.waste_output.value();
                next.waste_output = gt(account.waste_output.value() - moved)?;
                next.net_stock_additions = gt(account.net_stock_additions.value() + moved)?;
            }
            Transformation::ReplaceEnergeticWithStock { fraction } => {
                let moved = fraction * account.energetic_input.value();
                next.energetic_input = gt(account.energetic_input.value() - moved)?;
                next.structural_input = gt(account.structural_input.value() + moved)?;
                next.net_stock_additions = gt(account.net_stock_additions.value() + moved)?;
            }
            Transformation::ScaleReverseFlowValue { .. } => {}
        }
        Ok(next)
    }
}

fn gt(v: f64) -> Result<MassQuantity> {
    MassQuantity::gigatonnes(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default, rename = "step")]
    pub steps: Vec<Transformation>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, steps: Vec<Transformation>) -> Self {
        Scenario {
            name: name.into(),
            steps,
        }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self::new(name, Vec::new())
    }

    fn scales_value(&self) -> Option<usize> {
        self.steps
            .iter()
            .rposition(|s| matches!(s, Transformation::ScaleReverseFlowValue { .. }))
            .filter(|&i| {
                matches!(
                    self.steps[i],
                    Transformation::ScaleReverseFlowValue { flag: true }
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub account: MaterialFlowAccount,
    pub economy: EconomicAccount,
    pub report: CircularityReport,
    pub attribution: ValueAttribution,
    /// Caveats the caller should surface with the results.
    pub notes: Vec<String>,
}

/// Runs `scenario` over the pair and recomputes metrics and attribution.
///
/// Step indices in errors are 1-based. The value-scaling flag takes effect
/// once all mass steps have run, comparing final to starting recycled mass;
/// the last occurrence of the flag wins.
pub fn apply_scenario(
    account: &MaterialFlowAccount,
    economy: &EconomicAccount,
    scenario: &Scenario,
) -> Result<ScenarioOutcome> {
    let wrap = |e: Error| Error::ScenarioResult {
        scenario: scenario.name.clone(),
        source: Box::new(e),
    };
    account.validate().into_result().map_err(wrap)?;

    let mut current = account.clone();
    let mut notes = Vec::new();
    for (i, step) in scenario.steps.iter().enumerate() {
        let step_err = |e: Error| Error::ScenarioStep {
            scenario: scenario.name.clone(),
            step: i + 1,
            source: Box::new(e),
        };
        if matches!(step, Transformation::ScaleReverseFlowValue { flag: true })
            && account.recycled_input.value() == 0.0
        {
            return Err(step_err(Error::UndefinedDenominator {
                metric: "proportional reverse-flow value",
                denominator: "recycled_input",
            }));
        }
        let next = step.apply(&current).map_err(step_err)?;
        debug_assert!(
            next.total_input.value() <= current.total_input.value(),
            "transformations never add input mass"
        );
        if matches!(step, Transformation::ReplaceEnergeticWithStock { fraction } if *fraction > 0.0)
            && !notes.iter().any(|n: &String| n.starts_with("emissions"))
        {
            notes.push(
                "emissions_output is not adjusted when energetic input is replaced".to_string(),
            );
        }
        current = next;
    }

    let mut next_economy = economy.clone();
    if scenario.scales_value().is_some() {
        let ratio = current.recycled_input.value() / account.recycled_input.value();
        for s in next_economy
            .sectors
            .iter_mut()
            .filter(|s| s.category == FlowCategory::ReverseFlow)
        {
            s.value =
                crate::quantity::MonetaryQuantity::new(s.value.value() * ratio).map_err(wrap)?;
        }
        notes.push(format!(
            "reverse-flow sector value scaled by {ratio:.4} (proportional to recycled mass)"
        ));
    }

    current.validate().into_result().map_err(wrap)?;
    let report = metric_suite(&current).map_err(wrap)?;
    let attribution = attribute_value(&next_economy).map_err(wrap)?;
    Ok(ScenarioOutcome {
        account: current,
        economy: next_economy,
        report,
        attribution,
        notes,
    })
}

/// Share of GDP reverse flows would reach if the whole annually recoverable
/// input were recycled, with value proportional to recycled mass.
pub fn full_recovery_potential(
    account: &MaterialFlowAccount,
    economy: &EconomicAccount,
) -> Result<f64> {
    let recycled = account.recycled_input.value();
    if recycled == 0.0 {
        return Err(Error::UndefinedDenominator {
            metric: "full recovery potential",
            denominator: "recycled_input",
        });
    }
    let pool = annually_recoverable_input(account)?.value();
    Ok(pool / recycled * reverse_flow_gdp_share(economy)?)
}
