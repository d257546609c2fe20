//! Economy-wide material flow accounting with corrected circularity
//! metrics, GDP value attribution and what-if scenarios.
//!
//! Masses are in Gt/yr and money in T$/yr throughout. Metrics return exact
//! quotients; rounding happens only when a report is rendered.

pub mod account;
pub mod document;
pub mod error;
pub mod metrics;
pub mod quantity;
pub mod reference;
pub mod report;
pub mod scenario;
pub mod value;

pub use account::{
    annually_recoverable_input, recoverable_input, validate, waste_share, FlowFigures,
    MaterialFlowAccount, ValidationOutcome, ValidationStatus,
};
pub use error::{Error, ErrorKind, Result};
pub use metrics::{metric_suite, CircularityReport};
pub use quantity::{MassQuantity, MassUnit, MonetaryQuantity};
pub use scenario::{
    apply_scenario, full_recovery_potential, Scenario, ScenarioOutcome, Transformation,
};
pub use value::{
    attribute_value, nfcf_rate, EconomicAccount, FlowCategory, SectorValue, ValueAttribution,
};
