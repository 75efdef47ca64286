//! File formats and command implementations behind the `pathloss` binary.

pub mod commands;
pub mod formats;
