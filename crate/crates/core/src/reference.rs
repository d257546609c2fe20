//! Global 2020 reference figures.
//!
//! The same data ships as `data/global_2020.account` and
//! `data/global_2020.economy`; tests check that the two stay in sync.

use crate::account::{FlowFigures, MaterialFlowAccount};
use crate::value::{EconomicAccount, FlowCategory, SectorValue};

pub const REFERENCE_YEAR: i32 = 2020;

/// Material intensity of services spending in the EU, 2021 (upper bound).
pub const SERVICES_MATERIAL_INTENSITY_KG_PER_EUR: f64 = 0.25;

/// Housing uses roughly this many times more material per euro than services.
pub const HOUSING_TO_SERVICES_INTENSITY_RATIO: f64 = 11.0;

/// Share of services in global GDP, 2020.
pub const GLOBAL_SERVICES_SHARE_2020: f64 = 0.65;

/// Global circularity rate reported by the circularity gap reports.
pub const GLOBAL_CIRCULARITY_GAP_RATE: f64 = 0.072;

/// Global material flows, 2020, in Gt/yr.
pub fn global_2020_account() -> MaterialFlowAccount {
    MaterialFlowAccount::new(
        REFERENCE_YEAR,
        FlowFigures::new(104.0, 40.0, 64.0, 9.0, 45.0, 25.0, 31.0),
    )
    .expect("reference figures are non-negative")
}

/// Global economy, 2020, in T$/yr.
///
/// Dissipative-flow sectors use the midpoints of the reported ranges
/// (5-7, 4-5 and 4-5 T$), which sum to the consolidated 15 T$.
pub fn global_2020_economy() -> EconomicAccount {
    let sector = |name: &str, value, category| {
        SectorValue::new(name, value, category).expect("reference sector values are valid")
    };
    EconomicAccount::new(
        REFERENCE_YEAR,
        86.0,
        0.26,
        Some(0.13),
        vec![
            sector("waste management", 1.2, FlowCategory::ReverseFlow),
            sector("energy (fossil fuels)", 6.0, FlowCategory::DissipativeFlow),
            sector("agriculture and food", 4.5, FlowCategory::DissipativeFlow),
            sector(
                "chemicals and industrial materials",
                4.5,
                FlowCategory::DissipativeFlow,
            ),
        ],
        Some(GLOBAL_SERVICES_SHARE_2020),
    )
    .expect("reference economy is valid")
}
