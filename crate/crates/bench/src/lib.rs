//! Fixtures shared by the criterion benches.

use pathloss_core::{
    generate_survey, ApConfig, DistanceMeters, LogDistanceModel, PowerDbm, Survey, SynthSpec,
};

/// The Room1 indoor model: n = 3.45, sigma = 13.92 dB.
pub fn room1_model() -> LogDistanceModel {
    LogDistanceModel::new(40.0, DistanceMeters(1.0), 3.45, 13.92).expect("valid model")
}

pub fn room1_survey(samples: usize, seed: u64) -> Survey {
    let spec = SynthSpec {
        model: room1_model(),
        tx: PowerDbm(23.0),
        num_samples: samples,
        d_min: DistanceMeters(1.0),
        d_max: DistanceMeters(30.0),
        seed,
    };
    generate_survey(&spec, "room1", ApConfig::new("ap", PowerDbm(23.0))).expect("valid spec")
}
