//! Text documents for accounts, economies and scenarios.
//!
//! All three are flat TOML documents; economies repeat `[[sector]]` tables
//! and scenarios repeat `[[step]]` tables. Unknown keys are rejected.
//! Rendering always writes canonical units, so `parse(render(x)) == x`.

use serde::{Deserialize, Serialize};

use crate::account::{FlowFigures, MaterialFlowAccount, DEFAULT_BALANCE_TOLERANCE};
use crate::error::{Error, Result};
use crate::quantity::{MassQuantity, MassUnit};
use crate::scenario::Scenario;
use crate::value::{EconomicAccount, FlowCategory, SectorValue};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AccountDoc {
    year: i32,
    total_input: f64,
    energetic_input: f64,
    structural_input: f64,
    recycled_input: f64,
    emissions_output: f64,
    waste_output: f64,
    net_stock_additions: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    recovered_output: f64,
    #[serde(default)]
    unit: MassUnit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    balance_tolerance: Option<f64>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EconomyDoc {
    year: i32,
    gdp: f64,
    gfcf_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cfc_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    services_share: Option<f64>,
    #[serde(default, rename = "sector", skip_serializing_if = "Vec::is_empty")]
    sectors: Vec<SectorDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectorDoc {
    name: String,
    value: f64,
    category: FlowCategory,
}

/// 1-based line number of byte offset `pos` in `src`.
fn line_of_offset(src: &str, pos: usize) -> usize {
    src[..pos.min(src.len())].matches('\n').count() + 1
}

/// First line assigning `key`, if any.
fn line_of_key(src: &str, key: &str) -> Option<usize> {
    src.lines()
        .position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

/// Line of the `n`-th (1-based) header `[[table]]`.
fn line_of_table(src: &str, table: &str, n: usize) -> Option<usize> {
    let header = format!("[[{table}]]");
    src.lines()
        .enumerate()
        .filter(|(_, l)| l.trim() == header)
        .nth(n.checked_sub(1)?)
        .map(|(i, _)| i + 1)
}

fn key_on_line(src: &str, line: usize) -> Option<String> {
    let text = src.lines().nth(line.checked_sub(1)?)?;
    let (key, _) = text.split_once('=')?;
    let key = key.trim();
    (!key.is_empty()).then(|| key.to_string())
}

fn backticked(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

fn from_toml<T: for<'de> Deserialize<'de>>(src: &str) -> Result<T> {
    toml::from_str(src).map_err(|e| {
        let message = e.message().trim().to_string();
        let line = e.span().map(|s| line_of_offset(src, s.start));
        let field = if message.starts_with("missing field") || message.starts_with("unknown field")
        {
            backticked(&message)
        } else {
            line.and_then(|l| key_on_line(src, l))
        };
        Error::Parse {
            line,
            field,
            message,
        }
    })
}

/// Re-labels a semantic error against the document line that caused it.
fn locate(src: &str, err: Error) -> Error {
    match err {
        Error::InvalidQuantity { field, reason } => Error::Parse {
            line: line_of_key(src, &field),
            field: Some(field),
            message: reason,
        },
        Error::FractionOutOfRange { what, value } => Error::Parse {
            line: line_of_key(src, &what),
            message: format!("must be within [0, 1], got {value}"),
            field: Some(what),
        },
        other => other,
    }
}

pub fn parse_account(src: &str) -> Result<MaterialFlowAccount> {
    parse_account_with_default_tolerance(src, DEFAULT_BALANCE_TOLERANCE)
}

/// Parses an account; `default_tolerance` applies only when the document
/// has no `balance_tolerance` key.
pub fn parse_account_with_default_tolerance(
    src: &str,
    default_tolerance: f64,
) -> Result<MaterialFlowAccount> {
    let doc: AccountDoc = from_toml(src)?;
    let unit = doc.unit;
    let mass = |field: &str, v: f64| MassQuantity::named(field, v, unit);
    let build = || -> Result<MaterialFlowAccount> {
        // Per-field checks in the unit the document was written in.
        let mut account = MaterialFlowAccount::new(
            doc.year,
            FlowFigures::new(
                mass("total_input", doc.total_input)?.value(),
                mass("energetic_input", doc.energetic_input)?.value(),
                mass("structural_input", doc.structural_input)?.value(),
                mass("recycled_input", doc.recycled_input)?.value(),
                mass("emissions_output", doc.emissions_output)?.value(),
                mass("waste_output", doc.waste_output)?.value(),
                mass("net_stock_additions", doc.net_stock_additions)?.value(),
            ),
        )?;
        account.recovered_output = mass("recovered_output", doc.recovered_output)?;
        account.with_tolerance(doc.balance_tolerance.unwrap_or(default_tolerance))
    };
    build().map_err(|e| locate(src, e))
}

pub fn render_account(account: &MaterialFlowAccount) -> String {
    let doc = AccountDoc {
        year: account.year,
        total_input: account.total_input.value(),
        energetic_input: account.energetic_input.value(),
        structural_input: account.structural_input.value(),
        recycled_input: account.recycled_input.value(),
        emissions_output: account.emissions_output.value(),
        waste_output: account.waste_output.value(),
        net_stock_additions: account.net_stock_additions.value(),
        recovered_output: account.recovered_output.value(),
        unit: MassUnit::Gigatonnes,
        balance_tolerance: Some(account.balance_tolerance),
    };
    toml::to_string(&doc).expect("account document serializes")
}

pub fn parse_economy(src: &str) -> Result<EconomicAccount> {
    let doc: EconomyDoc = from_toml(src)?;
    let sectors = doc
        .sectors
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            SectorValue::new(s.name, s.value, s.category).map_err(|e| Error::Parse {
                line: line_of_table(src, "sector", i + 1),
                field: Some("value".into()),
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    EconomicAccount::new(
        doc.year,
        doc.gdp,
        doc.gfcf_rate,
        doc.cfc_rate,
        sectors,
        doc.services_share,
    )
    .map_err(|e| locate(src, e))
}

pub fn render_economy(economy: &EconomicAccount) -> String {
    let doc = EconomyDoc {
        year: economy.year,
        gdp: economy.gdp.value(),
        gfcf_rate: economy.gfcf_rate,
        cfc_rate: (!economy.cfc_defaulted).then_some(economy.cfc_rate),
        services_share: economy.services_share,
        sectors: economy
            .sectors
            .iter()
            .map(|s| SectorDoc {
                name: s.name.clone(),
                value: s.value.value(),
                category: s.category,
            })
            .collect(),
    };
    toml::to_string(&doc).expect("economy document serializes")
}

/// Parses a scenario and rejects out-of-range step parameters up front.
pub fn parse_scenario(src: &str) -> Result<Scenario> {
    let scenario: Scenario = from_toml(src)?;
    for (i, step) in scenario.steps.iter().enumerate() {
        if let Err(e) = step.check() {
            return Err(Error::Parse {
                line: line_of_table(src, "step", i + 1),
                field: Some("fraction".into()),
                message: format!("step {}: {e}", i + 1),
            });
        }
    }
    Ok(scenario)
}

pub fn render_scenario(scenario: &Scenario) -> String {
    toml::to_string(scenario).expect("scenario document serializes")
}
