//! Least-squares estimation of a log-distance model from a survey.
//!
//! Path loss `tx - rssi` is regressed on `log10(d / d0)`; the slope divided
//! by ten is the path loss exponent and the intercept is PL(d0).

use rayon::prelude::*;

use crate::error::{positive, Error, Result};
use crate::propagation::LogDistanceModel;
use crate::units::{path_loss_db, DistanceMeters, Survey};

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: LogDistanceModel,
    pub r_squared: f64,
    pub num_samples: usize,
    /// Measured minus predicted path loss, in input order.
    pub residuals: Vec<f64>,
}

/// Fit a log-distance model to `survey`, anchored at reference distance `d0`.
///
/// Shadowing sigma is the residual standard error with `N - 2` degrees of
/// freedom, reported as zero for two-sample fits.
pub fn fit_log_distance(survey: &Survey, d0: DistanceMeters) -> Result<FitResult> {
    positive("reference distance", d0.0)?;
    let n = survey.samples.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    survey.validate()?;

    let first = survey.samples[0].distance;
    if survey.samples.iter().all(|s| s.distance == first) {
        return Err(Error::DegenerateAbscissa);
    }

    let tx = survey.ap.tx_power;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for s in &survey.samples {
        xs.push((s.distance.0 / d0.0).log10());
        ys.push(path_loss_db(tx, s.rssi)?);
    }

    let count = n as f64;
    let x_mean = xs.iter().sum::<f64>() / count;
    let y_mean = ys.iter().sum::<f64>() / count;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let dx = x - x_mean;
        let dy = y - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateAbscissa);
    }

    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();

    let sigma_db = if n > 2 {
        (ss_res / (count - 2.0)).sqrt()
    } else {
        0.0
    };
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };

    Ok(FitResult {
        model: LogDistanceModel::new(intercept, d0, slope / 10.0, sigma_db)?,
        r_squared,
        num_samples: n,
        residuals,
    })
}

/// Fit every survey independently. A failing survey produces an error entry
/// for its location; the others are unaffected. Output order follows input.
pub fn fit_many(
    surveys: &[Survey],
    d0: DistanceMeters,
) -> Result<Vec<(String, Result<FitResult>)>> {
    if surveys.is_empty() {
        return Err(Error::NoSurveys);
    }
    Ok(surveys
        .par_iter()
        .map(|s| (s.location_id.clone(), fit_log_distance(s, d0)))
        .collect())
}
