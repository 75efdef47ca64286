//! Domain types and the dB/dBm arithmetic shared by every other module.
//!
//! Distances are always meters internally; feet only appear at ingestion.
//! All logarithms are base 10.

use crate::error::{finite, positive, Error, Result};

/// Power level in decibel-milliwatts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerDbm(pub f64);

/// Distance in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DistanceMeters(pub f64);

impl PowerDbm {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl DistanceMeters {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for PowerDbm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.2} dBm", self.0)
    }
}

impl std::fmt::Display for DistanceMeters {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} m", self.0)
    }
}

/// One field measurement: distance from the AP and the RSSI seen there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub distance: DistanceMeters,
    pub rssi: PowerDbm,
}

impl Sample {
    pub fn new(distance: DistanceMeters, rssi: PowerDbm) -> Result<Self> {
        let s = Sample { distance, rssi };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        positive("sample distance", self.distance.0)?;
        finite("sample rssi", self.rssi.0)?;
        Ok(())
    }
}

/// Access point configuration active during a survey.
///
/// Gains and `system_loss` are linear factors. `system_loss` is the `L`
/// divisor of the Friis equation and must be at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ApConfig {
    pub name: String,
    pub tx_power: PowerDbm,
    pub frequency_mhz: f64,
    /// Receiver sensitivity used by the planner. There is no sensible
    /// default, so it stays unset until the caller provides one.
    pub sensitivity: Option<PowerDbm>,
    pub antenna_gain_tx: f64,
    pub antenna_gain_rx: f64,
    pub system_loss: f64,
}

impl ApConfig {
    pub const DEFAULT_FREQUENCY_MHZ: f64 = 2432.0;

    /// Unity gains, no system loss, 2432 MHz.
    pub fn new(name: impl Into<String>, tx_power: PowerDbm) -> Self {
        ApConfig {
            name: name.into(),
            tx_power,
            frequency_mhz: Self::DEFAULT_FREQUENCY_MHZ,
            sensitivity: None,
            antenna_gain_tx: 1.0,
            antenna_gain_rx: 1.0,
            system_loss: 1.0,
        }
    }

    pub fn with_frequency_mhz(mut self, frequency_mhz: f64) -> Self {
        self.frequency_mhz = frequency_mhz;
        self
    }

    pub fn with_sensitivity(mut self, sensitivity: PowerDbm) -> Self {
        self.sensitivity = Some(sensitivity);
        self
    }

    pub fn with_gains(mut self, tx: f64, rx: f64) -> Self {
        self.antenna_gain_tx = tx;
        self.antenna_gain_rx = rx;
        self
    }

    pub fn with_system_loss(mut self, system_loss: f64) -> Self {
        self.system_loss = system_loss;
        self
    }

    pub fn validate(&self) -> Result<()> {
        finite("tx power", self.tx_power.0)?;
        positive("frequency", self.frequency_mhz)?;
        positive("tx antenna gain", self.antenna_gain_tx)?;
        positive("rx antenna gain", self.antenna_gain_rx)?;
        if !(self.system_loss.is_finite() && self.system_loss >= 1.0) {
            return Err(Error::Domain {
                what: "system loss",
                value: self.system_loss,
            });
        }
        if let Some(s) = self.sensitivity {
            finite("sensitivity", s.0)?;
        }
        Ok(())
    }
}

/// Samples gathered at one named location.
#[derive(Debug, Clone, PartialEq)]
pub struct Survey {
    pub location_id: String,
    pub samples: Vec<Sample>,
    pub ap: ApConfig,
}

impl Survey {
    pub fn new(location_id: impl Into<String>, samples: Vec<Sample>, ap: ApConfig) -> Result<Self> {
        let survey = Survey {
            location_id: location_id.into(),
            samples,
            ap,
        };
        survey.validate()?;
        Ok(survey)
    }

    pub fn validate(&self) -> Result<()> {
        if self.location_id.is_empty() {
            return Err(Error::Invalid("location id must not be empty".into()));
        }
        if self.samples.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        self.ap.validate()?;
        self.samples.iter().try_for_each(Sample::validate)
    }
}

pub fn mw_to_dbm(power_mw: f64) -> Result<PowerDbm> {
    positive("power in mW", power_mw)?;
    Ok(PowerDbm(10.0 * power_mw.log10()))
}

pub fn dbm_to_mw(p: PowerDbm) -> Result<f64> {
    finite("power in dBm", p.0)?;
    Ok(10f64.powf(p.0 / 10.0))
}

/// Path loss in dB between a transmit power and a received power.
pub fn path_loss_db(tx: PowerDbm, rx: PowerDbm) -> Result<f64> {
    finite("tx power", tx.0)?;
    finite("rx power", rx.0)?;
    Ok(tx.0 - rx.0)
}

pub const METERS_PER_FOOT: f64 = 0.3048;

pub fn feet_to_meters(d_feet: f64) -> Result<DistanceMeters> {
    if !(d_feet.is_finite() && d_feet >= 0.0) {
        return Err(Error::Domain {
            what: "distance in feet",
            value: d_feet,
        });
    }
    Ok(DistanceMeters(d_feet * METERS_PER_FOOT))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn mw_to_dbm_values() {
        assert_relative_eq!(mw_to_dbm(200.0).unwrap().0, 23.0103, epsilon = 1e-4);
        assert_eq!(mw_to_dbm(1.0).unwrap().0, 0.0);
        assert_eq!(mw_to_dbm(100.0).unwrap().0, 20.0);
        assert!(mw_to_dbm(0.0).is_err());
        assert!(mw_to_dbm(-3.0).is_err());
        assert!(mw_to_dbm(f64::NAN).is_err());
        assert!(mw_to_dbm(f64::INFINITY).is_err());
    }

    #[test]
    fn dbm_to_mw_values() {
        assert_eq!(dbm_to_mw(PowerDbm(0.0)).unwrap(), 1.0);
        assert_relative_eq!(
            dbm_to_mw(PowerDbm(23.0103)).unwrap(),
            200.0,
            max_relative = 1e-5
        );
        assert_relative_eq!(
            dbm_to_mw(PowerDbm(-30.0)).unwrap(),
            0.001,
            max_relative = 1e-12
        );
        assert!(dbm_to_mw(PowerDbm(f64::NAN)).is_err());
    }

    #[test]
    fn path_loss_values() {
        assert_eq!(path_loss_db(PowerDbm(23.0), PowerDbm(-60.0)).unwrap(), 83.0);
        assert_eq!(path_loss_db(PowerDbm(23.0), PowerDbm(23.0)).unwrap(), 0.0);
        assert_eq!(path_loss_db(PowerDbm(23.0), PowerDbm(-57.0)).unwrap(), 80.0);
        assert!(path_loss_db(PowerDbm(f64::INFINITY), PowerDbm(0.0)).is_err());
    }

    #[test]
    fn feet_values() {
        assert_eq!(feet_to_meters(0.0).unwrap().0, 0.0);
        assert_eq!(feet_to_meters(1.0).unwrap().0, 0.3048);
        assert_relative_eq!(feet_to_meters(16.0).unwrap().0, 4.8768, epsilon = 1e-12);
        assert!(feet_to_meters(-1.0).is_err());
    }

    #[test]
    fn survey_validation() {
        let ap = ApConfig::new("ap", PowerDbm(23.0));
        assert!(Survey::new("", vec![], ap.clone()).is_err());
        assert!(Survey::new("a", vec![], ap.clone()).is_err());
        let bad = Sample {
            distance: DistanceMeters(0.0),
            rssi: PowerDbm(-50.0),
        };
        assert!(Survey::new("a", vec![bad], ap.clone()).is_err());
        assert!(Sample::new(DistanceMeters(1.0), PowerDbm(f64::NAN)).is_err());
        assert!(ap.clone().with_system_loss(0.5).validate().is_err());
        assert!(ap.clone().with_frequency_mhz(0.0).validate().is_err());
        assert!(ap.with_gains(0.0, 1.0).validate().is_err());
    }

    proptest! {
        #[test]
        fn mw_round_trip(exp in -9.0f64..9.0) {
            let p = 10f64.powf(exp);
            let back = dbm_to_mw(mw_to_dbm(p).unwrap()).unwrap();
            prop_assert!(((back - p) / p).abs() < 1e-9);
        }

        #[test]
        fn decade_adds_ten_db(p in 1e-6f64..1e6, q in 1e-6f64..1e6) {
            let a = mw_to_dbm(p).unwrap().0;
            prop_assert!((mw_to_dbm(p * 10.0).unwrap().0 - a - 10.0).abs() < 1e-9);
            if p < q {
                prop_assert!(a < mw_to_dbm(q).unwrap().0);
            }
        }

        #[test]
        fn path_loss_antisymmetric(a in -150.0f64..50.0, b in -150.0f64..50.0) {
            let ab = path_loss_db(PowerDbm(a), PowerDbm(b)).unwrap();
            let ba = path_loss_db(PowerDbm(b), PowerDbm(a)).unwrap();
            prop_assert_eq!(ab, -ba);
        }

        #[test]
        fn feet_linear(a in 0.0f64..1e4, b in 0.0f64..1e4) {
            let sum = feet_to_meters(a + b).unwrap().0;
            let parts = feet_to_meters(a).unwrap().0 + feet_to_meters(b).unwrap().0;
            prop_assert!((sum - parts).abs() <= 1e-12 * sum.max(1.0));
        }
    }
}
