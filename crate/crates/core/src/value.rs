//! Attribution of annual GDP to resource-flow categories.
//!
//! Reverse and dissipative flows are valued by the sectors tagged with
//! them, net stock additions by net fixed capital formation, and waste adds
//! nothing. Whatever GDP is left is credited to the legacy stock.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantity::MonetaryQuantity;

/// Consumption of fixed capital assumed when an economy does not give one.
pub const DEFAULT_CFC_RATE: f64 = 0.13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowCategory {
    ReverseFlow,
    DissipativeFlow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorValue {
    pub name: String,
    pub value: MonetaryQuantity,
    pub category: FlowCategory,
}

impl SectorValue {
    pub fn new(name: impl Into<String>, value: f64, category: FlowCategory) -> Result<Self> {
        let name = name.into();
        let value = MonetaryQuantity::named(&format!("sector `{name}` value"), value)?;
        Ok(SectorValue {
            name,
            value,
            category,
        })
    }
}

/// Monetary aggregates for one year, in T$/yr and fractions of GDP.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EconomicAccount {
    pub year: i32,
    pub gdp: MonetaryQuantity,
    pub gfcf_rate: f64,
    pub cfc_rate: f64,
    /// Set when `cfc_rate` was filled in from [`DEFAULT_CFC_RATE`].
    pub cfc_defaulted: bool,
    pub sectors: Vec<SectorValue>,
    /// Displayed alongside the attribution; not used in any formula.
    pub services_share: Option<f64>,
}

fn fraction(what: &str, v: f64) -> Result<f64> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::FractionOutOfRange {
            what: what.to_string(),
            value: v,
        })
    }
}

impl EconomicAccount {
    pub fn new(
        year: i32,
        gdp: f64,
        gfcf_rate: f64,
        cfc_rate: Option<f64>,
        sectors: Vec<SectorValue>,
        services_share: Option<f64>,
    ) -> Result<Self> {
        Ok(EconomicAccount {
            year,
            gdp: MonetaryQuantity::named("gdp", gdp)?,
            gfcf_rate: fraction("gfcf_rate", gfcf_rate)?,
            cfc_rate: fraction("cfc_rate", cfc_rate.unwrap_or(DEFAULT_CFC_RATE))?,
            cfc_defaulted: cfc_rate.is_none(),
            sectors,
            services_share: services_share
                .map(|s| fraction("services_share", s))
                .transpose()?,
        })
    }

    pub fn category_value(&self, category: FlowCategory) -> MonetaryQuantity {
        self.sectors
            .iter()
            .filter(|s| s.category == category)
            .map(|s| s.value)
            .sum()
    }

    /// Multiplies GDP and every sector value by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        let mut out = self.clone();
        out.gdp = MonetaryQuantity::named("gdp", self.gdp.value() * k)?;
        for s in &mut out.sectors {
            s.value = MonetaryQuantity::new(s.value.value() * k)?;
        }
        Ok(out)
    }

    pub fn warnings(&self) -> Vec<EconomyWarning> {
        let mut w = Vec::new();
        if self.cfc_defaulted {
            w.push(EconomyWarning::DefaultedCfc(self.cfc_rate));
        }
        let nfcf = nfcf_rate(self);
        if nfcf < 0.0 {
            w.push(EconomyWarning::StockDepletion(nfcf));
        }
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EconomyWarning {
    /// The CFC rate was not supplied and the default was used.
    DefaultedCfc(f64),
    /// Net fixed capital formation is negative.
    StockDepletion(f64),
}

impl std::fmt::Display for EconomyWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EconomyWarning::DefaultedCfc(r) => write!(
                f,
                "cfc_rate not given; using the estimated global average of {:.0}%",
                r * 100.0
            ),
            EconomyWarning::StockDepletion(r) => write!(
                f,
                "net fixed capital formation is negative ({:.2}% of GDP): net stock depletion",
                r * 100.0
            ),
        }
    }
}

/// Net fixed capital formation as a share of GDP, `gfcf − cfc`. Negative
/// values signal net stock depletion.
pub fn nfcf_rate(economy: &EconomicAccount) -> f64 {
    economy.gfcf_rate - economy.cfc_rate
}

/// GDP credited to this year's net stock additions.
pub fn stock_addition_value(economy: &EconomicAccount) -> MonetaryQuantity {
    // Finite by construction: both factors are validated.
    MonetaryQuantity::signed(nfcf_rate(economy) * economy.gdp.value())
        .unwrap_or(MonetaryQuantity::ZERO)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValueAttribution {
    pub gdp: MonetaryQuantity,
    pub reverse_flow_value: MonetaryQuantity,
    pub dissipative_flow_value: MonetaryQuantity,
    pub stock_addition_value: MonetaryQuantity,
    pub waste_value: MonetaryQuantity,
    pub legacy_stock_value: MonetaryQuantity,
}

impl ValueAttribution {
    fn share(&self, v: MonetaryQuantity) -> f64 {
        v.value() / self.gdp.value()
    }

    pub fn reverse_flow_share(&self) -> f64 {
        self.share(self.reverse_flow_value)
    }

    pub fn dissipative_flow_share(&self) -> f64 {
        self.share(self.dissipative_flow_value)
    }

    pub fn stock_addition_share(&self) -> f64 {
        self.share(self.stock_addition_value)
    }

    pub fn waste_share(&self) -> f64 {
        self.share(self.waste_value)
    }

    pub fn legacy_stock_share(&self) -> f64 {
        self.share(self.legacy_stock_value)
    }

    /// Value attributed to this year's resource input (everything except
    /// the legacy stock).
    pub fn attributed(&self) -> MonetaryQuantity {
        self.reverse_flow_value
            + self.dissipative_flow_value
            + self.stock_addition_value
            + self.waste_value
    }

    /// The five parts in display order with their labels.
    pub fn parts(&self) -> [(&'static str, MonetaryQuantity); 5] {
        [
            ("reverse flows", self.reverse_flow_value),
            ("dissipative flows", self.dissipative_flow_value),
            ("net stock additions", self.stock_addition_value),
            ("waste", self.waste_value),
            ("legacy stocks", self.legacy_stock_value),
        ]
    }
}

pub fn attribute_value(economy: &EconomicAccount) -> Result<ValueAttribution> {
    let gdp = economy.gdp;
    if gdp.value() == 0.0 {
        return Err(Error::UndefinedDenominator {
            metric: "value attribution",
            denominator: "gdp",
        });
    }
    let nfcf = nfcf_rate(economy);
    if nfcf < 0.0 {
        return Err(Error::NetStockDepletion { nfcf });
    }

    let reverse = economy.category_value(FlowCategory::ReverseFlow);
    let dissipative = economy.category_value(FlowCategory::DissipativeFlow);
    let stock = stock_addition_value(economy);
    let attributed = reverse + dissipative + stock;
    let excess = attributed.value() - gdp.value();
    if excess > crate::account::IDENTITY_EPS * gdp.value() {
        return Err(Error::OverAttribution { excess });
    }

    Ok(ValueAttribution {
        gdp,
        reverse_flow_value: reverse,
        dissipative_flow_value: dissipative,
        stock_addition_value: stock,
        waste_value: MonetaryQuantity::ZERO,
        legacy_stock_value: MonetaryQuantity::new((gdp - attributed).value().max(0.0))?,
    })
}

pub fn reverse_flow_gdp_share(economy: &EconomicAccount) -> Result<f64> {
    gdp_share(economy, economy.category_value(FlowCategory::ReverseFlow))
}

/// Share of GDP from reverse and dissipative flows together.
pub fn combined_flow_gdp_share(economy: &EconomicAccount) -> Result<f64> {
    gdp_share(
        economy,
        economy.category_value(FlowCategory::ReverseFlow)
            + economy.category_value(FlowCategory::DissipativeFlow),
    )
}

fn gdp_share(economy: &EconomicAccount, value: MonetaryQuantity) -> Result<f64> {
    if economy.gdp.value() == 0.0 {
        return Err(Error::UndefinedDenominator {
            metric: "GDP share",
            denominator: "gdp",
        });
    }
    Ok(value.value() / economy.gdp.value())
}

/// Mass used per unit of spending, in kg per currency unit.
pub fn material_intensity(mass_kg: f64, spend: f64) -> Result<f64> {
    if !mass_kg.is_finite() || mass_kg < 0.0 {
        return Err(Error::InvalidQuantity {
            field: "mass".into(),
            reason: format!("value must be non-negative and finite, got {mass_kg}"),
        });
    }
    if !spend.is_finite() || spend <= 0.0 {
        return Err(Error::ZeroSpend);
    }
    Ok(mass_kg / spend)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> EconomicAccount {
        EconomicAccount::new(
            2020,
            86.0,
            0.26,
            Some(0.13),
            vec![
                SectorValue::new("waste management", 1.2, FlowCategory::ReverseFlow).unwrap(),
                SectorValue::new("dissipative sectors", 15.0, FlowCategory::DissipativeFlow)
                    .unwrap(),
            ],
            Some(0.65),
        )
        .unwrap()
    }

    fn economy(gdp: f64, gfcf: f64, cfc: f64, sectors: &[(f64, FlowCategory)]) -> EconomicAccount {
        let sectors = sectors
            .iter()
            .enumerate()
            .map(|(i, &(v, c))| SectorValue::new(format!("s{i}"), v, c).unwrap())
            .collect();
        EconomicAccount::new(2020, gdp, gfcf, Some(cfc), sectors, None).unwrap()
    }

    #[test]
    fn nfcf_cases() {
        assert!((nfcf_rate(&reference()) - 0.13).abs() < 1e-15);
        assert_eq!(nfcf_rate(&economy(10.0, 0.2, 0.2, &[])), 0.0);
        let depleting = economy(10.0, 0.10, 0.13, &[]);
        assert!((nfcf_rate(&depleting) + 0.03).abs() < 1e-15);
        assert!(matches!(
            depleting.warnings()[..],
            [EconomyWarning::StockDepletion(_)]
        ));
    }

    #[test]
    fn stock_addition_value_cases() {
        assert!((stock_addition_value(&reference()).value() - 11.18).abs() < 1e-12);
        assert_eq!(
            stock_addition_value(&economy(0.0, 0.26, 0.13, &[])).value(),
            0.0
        );
        assert!(
            (stock_addition_value(&economy(100.0, 0.26, 0.13, &[])).value() - 13.0).abs() < 1e-12
        );
    }

    #[test]
    fn reference_attribution() {
        let a = attribute_value(&reference()).unwrap();
        assert_eq!(a.reverse_flow_value.value(), 1.2);
        assert_eq!(a.dissipative_flow_value.value(), 15.0);
        assert!((a.stock_addition_value.value() - 11.18).abs() < 1e-12);
        assert_eq!(a.waste_value.value(), 0.0);
        assert!((a.legacy_stock_value.value() - 58.62).abs() < 1e-12);
        assert!((a.legacy_stock_share() - 0.681_627_906_976_744).abs() < 1e-12);
        let sum: f64 = a.parts().iter().map(|(_, v)| v.value()).sum();
        assert!((sum - 86.0).abs() < 1e-9);
    }

    #[test]
    fn everything_residual_without_sectors() {
        let a = attribute_value(&economy(50.0, 0.2, 0.2, &[])).unwrap();
        assert_eq!(a.legacy_stock_share(), 1.0);
    }

    #[test]
    fn no_residual_when_sectors_fill_gdp() {
        let e = economy(
            10.0,
            0.1,
            0.1,
            &[
                (4.0, FlowCategory::ReverseFlow),
                (6.0, FlowCategory::DissipativeFlow),
            ],
        );
        assert_eq!(attribute_value(&e).unwrap().legacy_stock_value.value(), 0.0);
    }

    #[test]
    fn over_attribution_reports_excess() {
        let e = economy(10.0, 0.3, 0.1, &[(9.0, FlowCategory::DissipativeFlow)]);
        match attribute_value(&e) {
            Err(Error::OverAttribution { excess }) => assert!((excess - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_gdp_and_depletion_errors() {
        assert!(matches!(
            attribute_value(&economy(0.0, 0.2, 0.1, &[])),
            Err(Error::UndefinedDenominator { .. })
        ));
        assert!(reverse_flow_gdp_share(&economy(0.0, 0.2, 0.1, &[])).is_err());
        assert!(matches!(
            attribute_value(&economy(10.0, 0.1, 0.2, &[])),
            Err(Error::NetStockDepletion { .. })
        ));
    }

    #[test]
    fn gdp_shares() {
        let e = reference();
        assert!((reverse_flow_gdp_share(&e).unwrap() - 1.2 / 86.0).abs() < 1e-15);
        assert!((combined_flow_gdp_share(&e).unwrap() - 16.2 / 86.0).abs() < 1e-15);
        assert_eq!(
            reverse_flow_gdp_share(&economy(10.0, 0.1, 0.1, &[])).unwrap(),
            0.0
        );
    }

    #[test]
    fn cfc_defaults_with_warning() {
        let e = EconomicAccount::new(2020, 86.0, 0.26, None, vec![], None).unwrap();
        assert_eq!(e.cfc_rate, DEFAULT_CFC_RATE);
        assert!(matches!(
            e.warnings()[..],
            [EconomyWarning::DefaultedCfc(_)]
        ));
    }

    #[test]
    fn rates_must_be_fractions() {
        assert!(EconomicAccount::new(2020, 86.0, 1.2, None, vec![], None).is_err());
        assert!(EconomicAccount::new(2020, 86.0, 0.2, Some(-0.1), vec![], None).is_err());
        assert!(EconomicAccount::new(2020, -1.0, 0.2, None, vec![], None).is_err());
    }

    #[test]
    fn material_intensity_cases() {
        assert_eq!(material_intensity(0.0, 10.0).unwrap(), 0.0);
        assert_eq!(material_intensity(5.0, 20.0).unwrap(), 0.25);
        assert!(matches!(
            material_intensity(5.0, 0.0),
            Err(Error::ZeroSpend)
        ));
    }
}
