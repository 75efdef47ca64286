//! Closed-form propagation: Friis free space and the log-distance model.

use std::f64::consts::PI;

use crate::error::{finite, positive, Error, Result};
use crate::units::{dbm_to_mw, mw_to_dbm, ApConfig, DistanceMeters, PowerDbm};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default reference distance for fits and models.
pub const DEFAULT_D0: DistanceMeters = DistanceMeters(1.0);

/// Fitted or assumed log-distance model.
///
/// `pl_d0_db` is the mean path loss at `d0`; `n` is the path loss exponent
/// and `sigma_db` the standard deviation of the log-normal shadowing term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDistanceModel {
    pub pl_d0_db: f64,
    pub d0: DistanceMeters,
    pub n: f64,
    pub sigma_db: f64,
}

impl LogDistanceModel {
    pub fn new(pl_d0_db: f64, d0: DistanceMeters, n: f64, sigma_db: f64) -> Result<Self> {
        let m = LogDistanceModel {
            pl_d0_db,
            d0,
            n,
            sigma_db,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        finite("pl(d0)", self.pl_d0_db)?;
        positive("reference distance", self.d0.0)?;
        finite("path loss exponent", self.n)?;
        if !(self.sigma_db.is_finite() && self.sigma_db >= 0.0) {
            return Err(Error::Domain {
                what: "shadowing sigma",
                value: self.sigma_db,
            });
        }
        Ok(())
    }
}

/// Parameters of the Friis free-space equation, all carried by the AP config.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeSpaceParams {
    pub ap: ApConfig,
}

impl From<ApConfig> for FreeSpaceParams {
    fn from(ap: ApConfig) -> Self {
        FreeSpaceParams { ap }
    }
}

pub fn wavelength_m(frequency_mhz: f64) -> Result<f64> {
    positive("frequency", frequency_mhz)?;
    Ok(SPEED_OF_LIGHT / (frequency_mhz * 1e6))
}

/// Linear ratio Pr/Pt = Gt·Gr·λ² / ((4π)²·d²·L).
fn friis_gain(ap: &ApConfig, d: DistanceMeters) -> Result<f64> {
    ap.validate()?;
    positive("distance", d.0)?;
    let lambda = wavelength_m(ap.frequency_mhz)?;
    let four_pi_d = 4.0 * PI * d.0;
    Ok(ap.antenna_gain_tx * ap.antenna_gain_rx * lambda * lambda
        / (four_pi_d * four_pi_d * ap.system_loss))
}

/// Received power in free space at distance `d`.
pub fn friis_received_power(params: &FreeSpaceParams, d: DistanceMeters) -> Result<PowerDbm> {
    let gain = friis_gain(&params.ap, d)?;
    let pt_mw = dbm_to_mw(params.ap.tx_power)?;
    mw_to_dbm(pt_mw * gain)
}

pub fn free_space_path_loss_db(params: &FreeSpaceParams, d: DistanceMeters) -> Result<f64> {
    Ok(-10.0 * friis_gain(&params.ap, d)?.log10())
}

/// Mean log-distance path loss; the shadowing term is left out.
pub fn log_distance_path_loss_db(model: &LogDistanceModel, d: DistanceMeters) -> Result<f64> {
    positive("distance", d.0)?;
    Ok(model.pl_d0_db + 10.0 * model.n * (d.0 / model.d0.0).log10())
}

pub fn predict_rssi(model: &LogDistanceModel, tx: PowerDbm, d: DistanceMeters) -> Result<PowerDbm> {
    finite("tx power", tx.0)?;
    Ok(PowerDbm(tx.0 - log_distance_path_loss_db(model, d)?))
}

/// Distance at which the predicted RSSI drops to `threshold`.
pub fn coverage_radius(
    model: &LogDistanceModel,
    tx: PowerDbm,
    threshold: PowerDbm,
) -> Result<DistanceMeters> {
    model.validate()?;
    finite("tx power", tx.0)?;
    finite("threshold", threshold.0)?;
    if model.n <= 0.0 {
        return Err(Error::NotInvertible(model.n));
    }
    if threshold.0 >= tx.0 {
        return Err(Error::Invalid(format!(
            "threshold {} must be below tx power {}",
            threshold, tx
        )));
    }
    let excess = tx.0 - threshold.0 - model.pl_d0_db;
    Ok(DistanceMeters(
        model.d0.0 * 10f64.powf(excess / (10.0 * model.n)),
    ))
}
