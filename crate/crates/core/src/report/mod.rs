//! Rendering of validation outcomes, metric reports, attributions and
//! scenario comparisons.
//!
//! Percentages are rounded half away from zero at the configured number of
//! decimals. Machine-readable output is TOML carrying unrounded values.

pub mod svg;

use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::account::{MaterialFlowAccount, ValidationOutcome};
use crate::error::Error;
use crate::metrics::CircularityReport;
use crate::scenario::ScenarioOutcome;
use crate::value::{EconomicAccount, ValueAttribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderFormat {
    #[default]
    Plain,
    Markdown,
    /// TOML key-value output with unrounded values.
    KeyValue,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "plain" | "table" => Ok(RenderFormat::Plain),
            "markdown" | "md" => Ok(RenderFormat::Markdown),
            "kv" | "key-value" | "toml" => Ok(RenderFormat::KeyValue),
            "svg" => Ok(RenderFormat::Svg),
            other => Err(Error::Parse {
                line: None,
                field: Some("format".into()),
                message: format!("unknown format `{other}` (expected plain, markdown, kv or svg)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: RenderFormat,
    /// Decimal places for percentages.
    pub rounding: u32,
    pub include_provenance_footnotes: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            format: RenderFormat::Plain,
            rounding: 1,
            include_provenance_footnotes: true,
        }
    }
}

impl RenderSpec {
    pub fn with_format(mut self, format: RenderFormat) -> Self {
        self.format = format;
        self
    }

    pub fn with_rounding(mut self, rounding: u32) -> Self {
        self.rounding = rounding;
        self
    }
}

/// Rounds half away from zero at `places` decimals.
pub fn round_half_away(value: f64, places: u32) -> f64 {
    let factor = 10f64.powi(places as i32);
    (value * factor).round() / factor
}

/// Formats a fraction as a percentage, e.g. `0.0865 -> "8.7%"` at one place.
pub fn format_percent(fraction: f64, places: u32) -> String {
    format!(
        "{:.*}%",
        places as usize,
        round_half_away(fraction * 100.0, places)
    )
}

fn fixed(value: f64, places: u32) -> String {
    format!("{:.*}", places as usize, round_half_away(value, places))
}

/// Signed fixed-point; values that round to zero print without a sign.
fn signed(value: f64, places: u32) -> String {
    let r = round_half_away(value, places);
    if r == 0.0 {
        format!("{:.*}", places as usize, 0.0)
    } else {
        format!("{:+.*}", places as usize, r)
    }
}

fn money(value: f64, places: u32) -> String {
    format!("${}T", fixed(value, places))
}

/// A simple table rendered either as aligned plain text or markdown.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, format: RenderFormat) -> String {
        let mut out = String::new();
        match format {
            RenderFormat::Markdown => {
                let _ = writeln!(out, "| {} |", self.header.join(" | "));
                let sep: Vec<_> = self
                    .header
                    .iter()
                    .enumerate()
                    .map(|(i, _)| if i == 0 { "---" } else { "---:" })
                    .collect();
                let _ = writeln!(out, "| {} |", sep.join(" | "));
                for r in &self.rows {
                    let _ = writeln!(out, "| {} |", r.join(" | "));
                }
            }
            _ => {
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|c| {
                        self.rows
                            .iter()
                            .map(|r| r[c].chars().count())
                            .chain(std::iter::once(self.header[c].chars().count()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: &[String]| {
                    cells
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            if i == 0 {
                                format!("{:<w$}", c, w = widths[i])
                            } else {
                                format!("{:>w$}", c, w = widths[i])
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                let _ = writeln!(out, "{}", line(&self.header));
                let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                let _ = writeln!(out, "{}", "-".repeat(total));
                for r in &self.rows {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
        }
        out
    }
}

fn append_notes(out: &mut String, notes: &[String], format: RenderFormat) {
    if notes.is_empty() {
        return;
    }
    out.push('\n');
    for (i, n) in notes.iter().enumerate() {
        match format {
            RenderFormat::Markdown => {
                let _ = writeln!(out, "{}. {n}", i + 1);
            }
            _ => {
                let _ = writeln!(out, "[{}] {n}", i + 1);
            }
        }
    }
}

fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("report serializes")
}

/// Human-readable validation report.
pub fn render_validation(outcome: &ValidationOutcome, account: &MaterialFlowAccount) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "account {}: {}", account.year, outcome.status.label());
    let pct = if outcome.residual_fraction.is_nan() {
        "n/a".to_string()
    } else {
        format_percent(outcome.residual_fraction, 1)
    };
    let _ = writeln!(
        out,
        "residual {} Gt ({pct}) of {} Gt input; tolerance {}",
        fixed(outcome.residual, 1),
        fixed(account.total_input.value(), 1),
        format_percent(outcome.tolerance, 1),
    );
    for c in &outcome.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "  [{mark}] {:<58} {}", c.invariant.name(), c.detail);
    }
    out
}

const ROUNDING_NOTE: &str =
    "Percentages are rounded half away from zero; kv output carries unrounded fractions.";

pub fn metric_notes(spec: &RenderSpec) -> Vec<String> {
    if !spec.include_provenance_footnotes {
        return Vec::new();
    }
    vec![
        ROUNDING_NOTE.to_string(),
        "Recycled input is counted inside total and structural input.".to_string(),
        "Apparent circularity stands in for the circular material use rate (recycled share of all material use).".to_string(),
    ]
}

pub fn render_metrics(report: &CircularityReport, spec: &RenderSpec) -> String {
    let p = spec.rounding;
    let notes = metric_notes(spec);
    match spec.format {
        RenderFormat::KeyValue => to_toml(report),
        RenderFormat::Svg => svg::waterfall(report, p, &notes),
        format => {
            let d = report.denominators;
            let mut t = Table::new(&["metric", "value", "denominator (Gt)"]);
            t.row(vec![
                "apparent circularity".into(),
                format_percent(report.apparent, p),
                fixed(d.total, 1),
            ]);
            t.row(vec![
                "dissipative-adjusted circularity".into(),
                format_percent(report.dissipative_adjusted, p),
                fixed(d.non_dissipative, 1),
            ]);
            t.row(vec![
                "real circularity".into(),
                format_percent(report.real_rate, p),
                fixed(d.annually_recoverable, 1),
            ]);
            t.row(vec![
                "potential ceiling".into(),
                format_percent(report.potential_ceiling, p),
                fixed(d.total, 1),
            ]);
            let mut out = t.render(format);
            append_notes(&mut out, &notes, format);
            out
        }
    }
}

pub fn attribution_notes(economy: &EconomicAccount, spec: &RenderSpec) -> Vec<String> {
    let mut notes: Vec<String> = economy.warnings().iter().map(|w| w.to_string()).collect();
    if spec.include_provenance_footnotes {
        notes.push("Reverse-flow value uses the whole waste-management sector; value created by recycled flows alone may be lower.".into());
        notes.push(
            "Waste is credited with zero value; legacy stocks receive the residual GDP.".into(),
        );
        if let Some(s) = economy.services_share {
            notes.push(format!(
                "Services share of GDP: {} (for comparison, not used in the attribution).",
                format_percent(s, spec.rounding)
            ));
        }
    }
    notes
}

#[derive(Serialize)]
struct AttributionDoc {
    gdp: f64,
    values: AttributionParts,
    shares: AttributionParts,
}

#[derive(Serialize)]
struct AttributionParts {
    reverse_flow: f64,
    dissipative_flow: f64,
    stock_addition: f64,
    waste: f64,
    legacy_stock: f64,
}

fn attribution_doc(a: &ValueAttribution) -> AttributionDoc {
    AttributionDoc {
        gdp: a.gdp.value(),
        values: AttributionParts {
            reverse_flow: a.reverse_flow_value.value(),
            dissipative_flow: a.dissipative_flow_value.value(),
            stock_addition: a.stock_addition_value.value(),
            waste: a.waste_value.value(),
            legacy_stock: a.legacy_stock_value.value(),
        },
        shares: AttributionParts {
            reverse_flow: a.reverse_flow_share(),
            dissipative_flow: a.dissipative_flow_share(),
            stock_addition: a.stock_addition_share(),
            waste: a.waste_share(),
            legacy_stock: a.legacy_stock_share(),
        },
    }
}

pub fn render_attribution(
    attribution: &ValueAttribution,
    economy: &EconomicAccount,
    spec: &RenderSpec,
) -> String {
    let p = spec.rounding;
    let notes = attribution_notes(economy, spec);
    match spec.format {
        RenderFormat::KeyValue => to_toml(&attribution_doc(attribution)),
        RenderFormat::Svg => svg::attribution_bar(attribution, p, &notes),
        format => {
            let mut t = Table::new(&["category", "value", "share of GDP"]);
            for (label, v) in attribution.parts() {
                t.row(vec![
                    label.to_string(),
                    money(v.value(), p),
                    format_percent(v.value() / attribution.gdp.value(), p),
                ]);
            }
            t.row(vec![
                "attributed to annual input".into(),
                money(attribution.attributed().value(), p),
                format_percent(
                    attribution.attributed().value() / attribution.gdp.value(),
                    p,
                ),
            ]);
            t.row(vec![
                "GDP".into(),
                money(attribution.gdp.value(), p),
                format_percent(1.0, p),
            ]);
            let mut out = t.render(format);
            append_notes(&mut out, &notes, format);
            out
        }
    }
}

/// What a scenario run is compared against.
pub struct Baseline<'a> {
    pub account: &'a MaterialFlowAccount,
    pub report: &'a CircularityReport,
    pub attribution: &'a ValueAttribution,
}

#[derive(Serialize)]
struct ComparisonSide {
    recycled_input: f64,
    waste_output: f64,
    net_stock_additions: f64,
    apparent: f64,
    dissipative_adjusted: f64,
    real_rate: f64,
    potential_ceiling: f64,
    reverse_flow_gdp_share: f64,
    dissipative_flow_gdp_share: f64,
    stock_addition_gdp_share: f64,
    legacy_stock_gdp_share: f64,
}

impl ComparisonSide {
    fn new(a: &MaterialFlowAccount, r: &CircularityReport, v: &ValueAttribution) -> Self {
        ComparisonSide {
            recycled_input: a.recycled_input.value(),
            waste_output: a.waste_output.value(),
            net_stock_additions: a.net_stock_additions.value(),
            apparent: r.apparent,
            dissipative_adjusted: r.dissipative_adjusted,
            real_rate: r.real_rate,
            potential_ceiling: r.potential_ceiling,
            reverse_flow_gdp_share: v.reverse_flow_share(),
            dissipative_flow_gdp_share: v.dissipative_flow_share(),
            stock_addition_gdp_share: v.stock_addition_share(),
            legacy_stock_gdp_share: v.legacy_stock_share(),
        }
    }

    fn delta(&self, before: &ComparisonSide) -> ComparisonSide {
        ComparisonSide {
            recycled_input: self.recycled_input - before.recycled_input,
            waste_output: self.waste_output - before.waste_output,
            net_stock_additions: self.net_stock_additions - before.net_stock_additions,
            apparent: self.apparent - before.apparent,
            dissipative_adjusted: self.dissipative_adjusted - before.dissipative_adjusted,
            real_rate: self.real_rate - before.real_rate,
            potential_ceiling: self.potential_ceiling - before.potential_ceiling,
            reverse_flow_gdp_share: self.reverse_flow_gdp_share - before.reverse_flow_gdp_share,
            dissipative_flow_gdp_share: self.dissipative_flow_gdp_share
                - before.dissipative_flow_gdp_share,
            stock_addition_gdp_share: self.stock_addition_gdp_share
                - before.stock_addition_gdp_share,
            legacy_stock_gdp_share: self.legacy_stock_gdp_share - before.legacy_stock_gdp_share,
        }
    }

    fn rows(&self) -> [(&'static str, f64, bool); 11] {
        [
            ("recycled input (Gt)", self.recycled_input, false),
            ("waste output (Gt)", self.waste_output, false),
            ("net stock additions (Gt)", self.net_stock_additions, false),
            ("apparent circularity", self.apparent, true),
            (
                "dissipative-adjusted circularity",
                self.dissipative_adjusted,
                true,
            ),
            ("real circularity", self.real_rate, true),
            ("potential ceiling", self.potential_ceiling, true),
            ("reverse-flow GDP share", self.reverse_flow_gdp_share, true),
            (
                "dissipative-flow GDP share",
                self.dissipative_flow_gdp_share,
                true,
            ),
            (
                "stock-addition GDP share",
                self.stock_addition_gdp_share,
                true,
            ),
            ("legacy-stock GDP share", self.legacy_stock_gdp_share, true),
        ]
    }
}

#[derive(Serialize)]
struct ComparisonDoc<'a> {
    scenario: &'a str,
    baseline: ComparisonSide,
    scenario_result: ComparisonSide,
    delta: ComparisonSide,
}

/// Side-by-side baseline and scenario figures with deltas. Percent deltas
/// are in percentage points.
pub fn render_comparison(
    scenario_name: &str,
    baseline: &Baseline<'_>,
    outcome: &ScenarioOutcome,
    spec: &RenderSpec,
) -> String {
    let p = spec.rounding;
    let before = ComparisonSide::new(baseline.account, baseline.report, baseline.attribution);
    let after = ComparisonSide::new(&outcome.account, &outcome.report, &outcome.attribution);
    let delta = after.delta(&before);
    if spec.format == RenderFormat::KeyValue {
        return to_toml(&ComparisonDoc {
            scenario: scenario_name,
            baseline: before,
            scenario_result: after,
            delta,
        });
    }

    let format = if spec.format == RenderFormat::Markdown {
        RenderFormat::Markdown
    } else {
        RenderFormat::Plain
    };
    let mut t = Table::new(&["quantity", "baseline", "scenario", "delta"]);
    for ((label, b, pct), ((_, a, _), (_, d, _))) in before
        .rows()
        .into_iter()
        .zip(after.rows().into_iter().zip(delta.rows()))
    {
        if pct {
            t.row(vec![
                label.into(),
                format_percent(b, p),
                format_percent(a, p),
                format!("{} pp", signed(d * 100.0, p)),
            ]);
        } else {
            let mp = p.max(1);
            t.row(vec![
                label.into(),
                fixed(b, mp),
                fixed(a, mp),
                signed(d, mp),
            ]);
        }
    }
    let mut out = format!("scenario: {scenario_name}\n\n");
    out.push_str(&t.render(format));
    let mut notes = outcome.notes.clone();
    if spec.include_provenance_footnotes {
        notes.push(ROUNDING_NOTE.to_string());
    }
    append_notes(&mut out, &notes, format);
    out
}
