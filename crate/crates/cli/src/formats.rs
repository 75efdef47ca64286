//! Survey CSV and model JSON formats.
//!
//! Survey files carry an explicit unit per row:
//!
//! ```text
//! # optional comments
//! location_id,distance,unit,rssi_dbm
//! room1,16,ft,-60
//! room1,1,m,-17
//! ```
//!
//! Feet are converted to meters on ingestion; everything downstream is metric.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context, Result};
use pathloss_core::{
    feet_to_meters, ApConfig, DistanceMeters, FitResult, LogDistanceModel, PowerDbm, Sample, Survey,
};
use serde::{Deserialize, Serialize};

pub const SURVEY_HEADER: [&str; 4] = ["location_id", "distance", "unit", "rssi_dbm"];

/// Parse a survey file into one survey per location, in first-appearance
/// order. Every survey gets a copy of `ap`.
pub fn parse_survey<R: Read>(reader: R, ap: &ApConfig) -> Result<Vec<Survey>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);

    let header = rdr.headers().context("unreadable header")?;
    if header.is_empty() {
        bail!("missing header `{}`", SURVEY_HEADER.join(","));
    }
    if header.iter().ne(SURVEY_HEADER) {
        let line = header.position().map_or(1, |p| p.line());
        bail!(
            "line {line}: expected header `{}`, found `{}`",
            SURVEY_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        );
    }

    let mut groups: Vec<(String, Vec<Sample>)> = Vec::new();
    for record in rdr.records() {
        let record = record.context("malformed CSV")?;
        let line = record.position().map_or(0, |p| p.line());
        let (id, sample) = parse_row(&record).map_err(|e| anyhow!("line {line}: {e}"))?;
        match groups.iter_mut().find(|(g, _)| g == id) {
            Some((_, samples)) => samples.push(sample),
            None => groups.push((id.to_string(), vec![sample])),
        }
    }

    if groups.is_empty() {
        bail!("no data rows");
    }
    groups
        .into_iter()
        .map(|(id, samples)| {
            Survey::new(id.clone(), samples, ap.clone()).with_context(|| format!("location {id}"))
        })
        .collect()
}

fn parse_row(record: &csv::StringRecord) -> Result<(&str, Sample)> {
    if record.len() != SURVEY_HEADER.len() {
        bail!("expected 4 fields, found {}", record.len());
    }
    let (id, distance, unit, rssi) = (&record[0], &record[1], &record[2], &record[3]);
    if id.is_empty() {
        bail!("empty location_id");
    }
    let distance: f64 = distance
        .parse()
        .map_err(|_| anyhow!("invalid distance {distance:?}"))?;
    let rssi: f64 = rssi.parse().map_err(|_| anyhow!("invalid rssi {rssi:?}"))?;
    if !(distance.is_finite() && distance > 0.0) {
        bail!("distance must be positive, got {distance}");
    }
    if !rssi.is_finite() {
        bail!("rssi must be finite, got {rssi}");
    }
    let distance = match unit {
        "m" => DistanceMeters(distance),
        "ft" => feet_to_meters(distance)?,
        other => bail!("unknown unit {other:?} (expected m or ft)"),
    };
    Ok((id, Sample::new(distance, PowerDbm(rssi))?))
}

/// Write surveys in metric units. Floats use the shortest representation
/// that reads back to the same value.
pub fn write_survey<W: Write>(out: W, surveys: &[Survey]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(SURVEY_HEADER)?;
    for survey in surveys {
        if survey.location_id.starts_with('#') || survey.location_id.trim() != survey.location_id {
            bail!(
                "location id {:?} cannot be written to CSV",
                survey.location_id
            );
        }
        for s in &survey.samples {
            wtr.write_record([
                survey.location_id.as_str(),
                &s.distance.0.to_string(),
                "m",
                &s.rssi.0.to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Serialized log-distance model plus the provenance of its fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub pl_d0_db: f64,
    pub d0_m: f64,
    pub n: f64,
    pub sigma_db: f64,
    pub tx_power_dbm: f64,
    pub frequency_mhz: f64,
    pub num_samples: usize,
    pub r_squared: f64,
}

impl ModelFile {
    pub fn from_fit(name: &str, ap: &ApConfig, fit: &FitResult) -> Self {
        ModelFile {
            name: name.to_string(),
            pl_d0_db: fit.model.pl_d0_db,
            d0_m: fit.model.d0.0,
            n: fit.model.n,
            sigma_db: fit.model.sigma_db,
            tx_power_dbm: ap.tx_power.0,
            frequency_mhz: ap.frequency_mhz,
            num_samples: fit.num_samples,
            r_squared: fit.r_squared,
        }
    }

    pub fn model(&self) -> Result<LogDistanceModel> {
        Ok(LogDistanceModel::new(
            self.pl_d0_db,
            DistanceMeters(self.d0_m),
            self.n,
            self.sigma_db,
        )?)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(ModelFile),
    Many(Vec<ModelFile>),
}

/// A single model is written as an object, several as an array.
pub fn write_models<W: Write>(mut out: W, models: &[ModelFile]) -> Result<()> {
    match models {
        [one] => serde_json::to_writer_pretty(&mut out, one)?,
        many => serde_json::to_writer_pretty(&mut out, many)?,
    }
    writeln!(out)?;
    Ok(())
}

pub fn read_models(text: &str) -> Result<Vec<ModelFile>> {
    Ok(
        match serde_json::from_str(text).context("invalid model file")? {
            OneOrMany::One(m) => vec![m],
            OneOrMany::Many(v) => v,
        },
    )
}

/// Pick the model named `name`, or the only model when no name is given.
pub fn select_model(models: Vec<ModelFile>, name: Option<&str>) -> Result<ModelFile> {
    match name {
        Some(name) => models
            .into_iter()
            .find(|m| m.name == name)
            .ok_or_else(|| anyhow!("no model named {name:?}")),
        None => {
            let count = models.len();
            let mut it = models.into_iter();
            match (it.next(), count) {
                (Some(m), 1) => Ok(m),
                (None, _) => bail!("model file is empty"),
                _ => bail!("model file holds {count} models; choose one with --location"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ap() -> ApConfig {
        ApConfig::new("ap", PowerDbm(23.0))
    }

    fn parse(text: &str) -> Result<Vec<Survey>> {
        parse_survey(text.as_bytes(), &ap())
    }

    #[test]
    fn parses_units_and_groups() {
        let text = "# campaign\nlocation_id,distance,unit,rssi_dbm\nroom1,16,ft,-60\nloc,1,m,-17\nroom1,2,m,-40\n";
        let surveys = parse(text).unwrap();
        assert_eq!(surveys.len(), 2);
        assert_eq!(surveys[0].location_id, "room1");
        assert!((surveys[0].samples[0].distance.0 - 4.8768).abs() < 1e-12);
        assert_eq!(surveys[0].samples[0].rssi.0, -60.0);
        assert_eq!(surveys[0].samples[1].distance.0, 2.0);
        assert_eq!(surveys[1].location_id, "loc");
        assert_eq!(surveys[1].samples[0].distance.0, 1.0);
        assert_eq!(surveys[1].samples[0].rssi.0, -17.0);
    }

    #[test]
    fn rejects_bad_rows() {
        let err = parse("location_id,distance,unit,rssi_dbm\nloc,0,m,-50\n").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("line 2") && msg.contains("distance must be positive"),
            "{msg}"
        );

        let err =
            parse("location_id,distance,unit,rssi_dbm\nloc,1,m,-50\nloc,3,yd,-50\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
        assert!(err.to_string().contains("unknown unit"));

        assert!(parse("location_id,distance,unit,rssi_dbm\nloc,1,m\n").is_err());
        assert!(parse("location_id,distance,unit,rssi_dbm\nloc,x,m,-3\n").is_err());
        assert!(parse("location_id,distance,unit,rssi_dbm\n# nothing\n").is_err());
        assert!(parse("").is_err());
        assert!(parse("loc,1,m,-50\n").is_err());
    }

    #[test]
    fn model_file_selection() {
        let m = |name: &str| ModelFile {
            name: name.into(),
            pl_d0_db: 40.0,
            d0_m: 1.0,
            n: 2.0,
            sigma_db: 0.0,
            tx_power_dbm: 23.0,
            frequency_mhz: 2432.0,
            num_samples: 4,
            r_squared: 1.0,
        };
        let mut buf = Vec::new();
        write_models(&mut buf, &[m("a")]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.trim_start().starts_with('{'));
        assert_eq!(
            select_model(read_models(&text).unwrap(), None).unwrap(),
            m("a")
        );

        let mut buf = Vec::new();
        write_models(&mut buf, &[m("a"), m("b")]).unwrap();
        let models = read_models(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert!(select_model(models.clone(), None).is_err());
        assert_eq!(select_model(models.clone(), Some("b")).unwrap(), m("b"));
        assert!(select_model(models, Some("c")).is_err());
        assert!(read_models("{").is_err());
    }

    fn arb_survey() -> impl Strategy<Value = Survey> {
        (
            "[a-z][a-z0-9_, ]{0,8}[a-z]",
            prop::collection::vec((1e-3f64..1e4, -150.0f64..40.0), 1..20),
        )
            .prop_map(|(id, pts)| {
                let samples = pts
                    .into_iter()
                    .map(|(d, r)| Sample::new(DistanceMeters(d), PowerDbm(r)).unwrap())
                    .collect();
                Survey::new(id, samples, ap()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn survey_round_trip(survey in arb_survey()) {
            let mut buf = Vec::new();
            write_survey(&mut buf, std::slice::from_ref(&survey)).unwrap();
            let back = parse_survey(&buf[..], &ap()).unwrap();
            prop_assert_eq!(back, vec![survey]);
        }

        #[test]
        fn model_round_trip(pl in -50.0f64..150.0, d0 in 0.01f64..100.0, n in -2.0f64..6.0,
                            sigma in 0.0f64..30.0, r2 in 0.0f64..1.0) {
            let m = ModelFile {
                name: "loc".into(), pl_d0_db: pl, d0_m: d0, n, sigma_db: sigma,
                tx_power_dbm: 23.0103, frequency_mhz: 2432.0, num_samples: 17, r_squared: r2,
            };
            let mut buf = Vec::new();
            write_models(&mut buf, std::slice::from_ref(&m)).unwrap();
            let back = read_models(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(back, vec![m]);
        }
    }
}
