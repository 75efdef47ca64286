//! Link margin against receiver sensitivity and new-AP flagging.
//!
//! A location is flagged when its worst RSSI sits less than
//! `margin_threshold_db` above the receiver sensitivity.

use rayon::prelude::*;

use crate::error::{finite, Error, Result};
use crate::units::{PowerDbm, Survey};

pub const DEFAULT_MARGIN_DB: f64 = 10.0;

pub fn link_margin_db(rssi: PowerDbm, sensitivity: PowerDbm) -> Result<f64> {
    finite("rssi", rssi.0)?;
    finite("sensitivity", sensitivity.0)?;
    Ok(rssi.0 - sensitivity.0)
}

/// True iff the margin above sensitivity is strictly below the threshold.
pub fn needs_new_ap(
    rssi: PowerDbm,
    sensitivity: PowerDbm,
    margin_threshold_db: f64,
) -> Result<bool> {
    if !(margin_threshold_db.is_finite() && margin_threshold_db >= 0.0) {
        return Err(Error::Domain {
            what: "margin threshold",
            value: margin_threshold_db,
        });
    }
    Ok(link_margin_db(rssi, sensitivity)? < margin_threshold_db)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanEntry {
    pub worst_rssi: PowerDbm,
    pub margin_db: f64,
    pub needs_new_ap: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanReport {
    /// One entry per input survey, in input order.
    pub entries: Vec<(String, Result<PlanEntry>)>,
    pub sensitivity: PowerDbm,
    pub margin_threshold_db: f64,
}

impl PlanReport {
    pub fn flagged(&self) -> impl Iterator<Item = &str> + '_ {
        self.entries
            .iter()
            .filter(|(_, e)| matches!(e, Ok(p) if p.needs_new_ap))
            .map(|(id, _)| id.as_str())
    }
}

fn plan_one(survey: &Survey, sensitivity: PowerDbm, margin_threshold_db: f64) -> Result<PlanEntry> {
    survey.validate()?;
    let worst_rssi = survey
        .samples
        .iter()
        .map(|s| s.rssi)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
    Ok(PlanEntry {
        worst_rssi,
        margin_db: link_margin_db(worst_rssi, sensitivity)?,
        needs_new_ap: needs_new_ap(worst_rssi, sensitivity, margin_threshold_db)?,
    })
}

pub fn plan_surveys(
    surveys: &[Survey],
    sensitivity: PowerDbm,
    margin_threshold_db: f64,
) -> Result<PlanReport> {
    if surveys.is_empty() {
        return Err(Error::NoSurveys);
    }
    finite("sensitivity", sensitivity.0)?;
    // reject a bad threshold once instead of once per entry
    needs_new_ap(sensitivity, sensitivity, margin_threshold_db)?;
    let entries = surveys
        .par_iter()
        .map(|s| {
            (
                s.location_id.clone(),
                plan_one(s, sensitivity, margin_threshold_db),
            )
        })
        .collect();
    Ok(PlanReport {
        entries,
        sensitivity,
        margin_threshold_db,
    })
}
