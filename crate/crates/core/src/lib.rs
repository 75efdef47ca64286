//! Path loss modelling for WLAN site surveys.
//!
//! Fit log-distance models to RSSI measurements, predict received power and
//! coverage regions around an access point, and flag locations whose signal
//! sits too close to receiver sensitivity.
//!
//! ```
//! use pathloss_core::*;
//!
//! let ap = ApConfig::new("ap", PowerDbm(23.0));
//! let samples = vec![
//!     Sample::new(DistanceMeters(1.0), PowerDbm(-17.0)).unwrap(),
//!     Sample::new(DistanceMeters(10.0), PowerDbm(-51.5)).unwrap(),
//! ];
//! let survey = Survey::new("room1", samples, ap).unwrap();
//! let fit = fit_log_distance(&survey, DEFAULT_D0).unwrap();
//! assert!((fit.model.n - 3.45).abs() < 1e-12);
//!
//! let rssi = predict_rssi(&fit.model, PowerDbm(23.0), DistanceMeters(20.0)).unwrap(); // -61.9 dBm
//! assert_eq!(classify_rssi(rssi, &RegionTable::default()).unwrap(), Region::B);
//! ```

pub mod coverage;
pub mod error;
pub mod fit;
pub mod planner;
pub mod propagation;
pub mod synthgen;
pub mod units;

pub use coverage::{
    classify_distance, classify_rssi, generate_heatmap, Cell, Extent, HeatmapGrid, Region,
    RegionTable,
};
pub use error::{Error, Result};
pub use fit::{fit_log_distance, fit_many, FitResult};
pub use planner::{
    link_margin_db, needs_new_ap, plan_surveys, PlanEntry, PlanReport, DEFAULT_MARGIN_DB,
};
pub use propagation::{
    coverage_radius, free_space_path_loss_db, friis_received_power, log_distance_path_loss_db,
    predict_rssi, wavelength_m, FreeSpaceParams, LogDistanceModel, DEFAULT_D0, SPEED_OF_LIGHT,
};
pub use synthgen::{gaussian_stream, generate_survey, SynthSpec};
pub use units::{
    dbm_to_mw, feet_to_meters, mw_to_dbm, path_loss_db, ApConfig, DistanceMeters, PowerDbm, Sample,
    Survey,
};
