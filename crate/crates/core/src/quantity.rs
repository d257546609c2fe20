//! Dimensional newtypes for the two canonical units used throughout the crate.
//!
//! Masses are held in gigatonnes per year and money in trillion currency
//! units per year. Other mass units are converted on construction so no
//! downstream formula ever sees a mixed unit.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass unit tags accepted on ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MassUnit {
    #[serde(rename = "t")]
    Tonnes,
    #[serde(rename = "kt")]
    Kilotonnes,
    #[serde(rename = "Mt")]
    Megatonnes,
    #[default]
    #[serde(rename = "Gt")]
    Gigatonnes,
}

impl MassUnit {
    /// Multiplier taking a value in this unit to gigatonnes.
    pub fn to_gigatonnes(self) -> f64 {
        match self {
            MassUnit::Tonnes => 1e-9,
            MassUnit::Kilotonnes => 1e-6,
            MassUnit::Megatonnes => 1e-3,
            MassUnit::Gigatonnes => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MassUnit::Tonnes => "t",
            MassUnit::Kilotonnes => "kt",
            MassUnit::Megatonnes => "Mt",
            MassUnit::Gigatonnes => "Gt",
        }
    }
}

impl FromStr for MassUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t" => Ok(MassUnit::Tonnes),
            "kt" => Ok(MassUnit::Kilotonnes),
            "Mt" => Ok(MassUnit::Megatonnes),
            "Gt" => Ok(MassUnit::Gigatonnes),
            other => Err(Error::InvalidQuantity {
                field: "unit".into(),
                reason: format!("unknown mass unit `{other}` (expected t, kt, Mt or Gt)"),
            }),
        }
    }
}

fn check_finite(field: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidQuantity {
            field: field.to_string(),
            reason: format!("value must be finite, got {value}"),
        })
    }
}

fn check_non_negative(field: &str, value: f64) -> Result<()> {
    check_finite(field, value)?;
    if value < 0.0 {
        return Err(Error::InvalidQuantity {
            field: field.to_string(),
            reason: format!("value must be non-negative, got {value}"),
        });
    }
    Ok(())
}

/// A non-negative, finite mass flow in Gt/yr.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct MassQuantity(f64);

impl MassQuantity {
    pub const ZERO: MassQuantity = MassQuantity(0.0);

    pub fn gigatonnes(value: f64) -> Result<Self> {
        check_non_negative("mass", value)?;
        Ok(MassQuantity(value))
    }

    pub fn new(value: f64, unit: MassUnit) -> Result<Self> {
        Self::gigatonnes(value * unit.to_gigatonnes())
    }

    /// Like [`MassQuantity::new`] but names the offending field on failure.
    pub fn named(field: &str, value: f64, unit: MassUnit) -> Result<Self> {
        check_non_negative(field, value)?;
        Ok(MassQuantity(value * unit.to_gigatonnes()))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn scale(self, k: f64) -> Result<Self> {
        Self::gigatonnes(self.0 * k)
    }

    /// Subtraction that refuses to go below zero.
    pub fn checked_sub(self, other: MassQuantity) -> Option<MassQuantity> {
        let v = self.0 - other.0;
        (v >= 0.0).then_some(MassQuantity(v))
    }
}

impl Add for MassQuantity {
    type Output = MassQuantity;

    fn add(self, rhs: MassQuantity) -> MassQuantity {
        MassQuantity(self.0 + rhs.0)
    }
}

impl fmt::Display for MassQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*} Gt", p, self.0),
            None => write!(f, "{} Gt", self.0),
        }
    }
}

/// A monetary flow in trillion currency units per year (T$/yr).
///
/// Values built with [`MonetaryQuantity::new`] are non-negative; the signed
/// constructor exists for net capital formation, which can be negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct MonetaryQuantity(f64);

impl MonetaryQuantity {
    pub const ZERO: MonetaryQuantity = MonetaryQuantity(0.0);

    pub fn new(value: f64) -> Result<Self> {
        Self::named("money", value)
    }

    pub fn named(field: &str, value: f64) -> Result<Self> {
        check_non_negative(field, value)?;
        Ok(MonetaryQuantity(value))
    }

    pub fn signed(value: f64) -> Result<Self> {
        check_finite("money", value)?;
        Ok(MonetaryQuantity(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0.0
    }
}

impl Add for MonetaryQuantity {
    type Output = MonetaryQuantity;

    fn add(self, rhs: MonetaryQuantity) -> MonetaryQuantity {
        MonetaryQuantity(self.0 + rhs.0)
    }
}

impl Sub for MonetaryQuantity {
    type Output = MonetaryQuantity;

    fn sub(self, rhs: MonetaryQuantity) -> MonetaryQuantity {
        MonetaryQuantity(self.0 - rhs.0)
    }
}

impl std::iter::Sum for MonetaryQuantity {
    fn sum<I: Iterator<Item = MonetaryQuantity>>(iter: I) -> Self {
        MonetaryQuantity(iter.map(|m| m.0).sum())
    }
}

impl fmt::Display for MonetaryQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*} T$", p, self.0),
            None => write!(f, "{} T$", self.0),
        }
    }
}
