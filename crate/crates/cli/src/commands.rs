use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pathloss_core::{
    classify_rssi, fit_many, generate_heatmap, generate_survey, plan_surveys, predict_rssi,
    ApConfig, DistanceMeters, Extent, LogDistanceModel, PowerDbm, RegionTable, Survey, SynthSpec,
    DEFAULT_MARGIN_DB,
};
use serde::Serialize;

use crate::formats::{
    parse_survey, read_models, select_model, write_models, write_survey, ModelFile,
};

#[derive(Debug, Parser)]
#[command(
    name = "pathloss",
    version,
    about = "Path loss fitting and coverage planning for WLAN site surveys"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a log-distance model per location of a survey file.
    Fit(FitArgs),
    /// Predict RSSI and coverage region at one distance.
    Predict(PredictArgs),
    /// Rasterize predicted coverage around an AP to CSV.
    Heatmap(HeatmapArgs),
    /// Flag locations whose worst RSSI is too close to receiver sensitivity.
    Plan(PlanArgs),
    /// Generate a synthetic survey from a log-distance model.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    #[arg(long)]
    pub survey: PathBuf,
    #[arg(long)]
    pub tx_power_dbm: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub d0_m: f64,
    #[arg(long, default_value_t = ApConfig::DEFAULT_FREQUENCY_MHZ, value_parser = positive_f64)]
    pub frequency_mhz: f64,
    /// Write fitted models as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Model to use when the file holds several.
    #[arg(long)]
    pub location: Option<String>,
    /// RSSI floors of regions A, B, C and D, strongest first.
    #[arg(long, value_parser = parse_thresholds, allow_hyphen_values = true)]
    pub region_thresholds: Option<[f64; 4]>,
}

impl ModelArgs {
    fn load(&self) -> Result<(ModelFile, LogDistanceModel, RegionTable)> {
        let text = fs::read_to_string(&self.model)
            .with_context(|| format!("reading {}", self.model.display()))?;
        let file = select_model(read_models(&text)?, self.location.as_deref())?;
        let model = file.model()?;
        let mut table = RegionTable::default();
        if let Some(floors) = self.region_thresholds {
            table = RegionTable::new(floors, table.range_bounds)?;
        }
        Ok((file, model, table))
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PredictArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub tx_power_dbm: f64,
    #[arg(long, value_parser = positive_f64)]
    pub distance_m: f64,
    /// Print a JSON object with full precision instead of the text line.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub tx_power_dbm: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ap_x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ap_y: f64,
    /// x_min,x_max,y_min,y_max in meters.
    #[arg(long, value_parser = parse_extent, allow_hyphen_values = true)]
    pub extent: Extent,
    #[arg(long, value_parser = positive_f64)]
    pub resolution: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PlanArgs {
    #[arg(long)]
    pub survey: PathBuf,
    #[arg(long)]
    pub tx_power_dbm: f64,
    #[arg(long)]
    pub sensitivity_dbm: f64,
    #[arg(long, default_value_t = DEFAULT_MARGIN_DB)]
    pub margin_db: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SynthArgs {
    /// Path loss exponent.
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long)]
    pub pl_d0: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub d0_m: f64,
    #[arg(long)]
    pub tx_power_dbm: f64,
    #[arg(long)]
    pub samples: usize,
    #[arg(long, value_parser = positive_f64)]
    pub dmin_m: f64,
    #[arg(long, value_parser = positive_f64)]
    pub dmax_m: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "synthetic")]
    pub location_id: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{p}` is not a number"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let values: [f64; N] = values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated values, got {}", v.len()))?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(values)
}

fn parse_thresholds(s: &str) -> Result<[f64; 4], String> {
    let floors = parse_floats::<4>(s)?;
    RegionTable::new(floors, RegionTable::default().range_bounds).map_err(|e| e.to_string())?;
    Ok(floors)
}

fn parse_extent(s: &str) -> Result<Extent, String> {
    let [x_min, x_max, y_min, y_max] = parse_floats::<4>(s)?;
    if !(x_min < x_max && y_min < y_max) {
        return Err("extent must satisfy x_min < x_max and y_min < y_max".into());
    }
    Ok(Extent {
        x_min,
        x_max,
        y_min,
        y_max,
    })
}

/// Result of a command that completed: `false` when some per-location work
/// failed and was reported on `err`.
pub type Success = bool;

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Success> {
    match cli.command {
        Command::Fit(args) => fit(args, out, err),
        Command::Predict(args) => predict(args, out),
        Command::Heatmap(args) => heatmap(args, out),
        Command::Plan(args) => plan(args, out, err),
        Command::Synth(args) => synth(args, out),
    }
}

fn load_surveys(path: &Path, ap: &ApConfig) -> Result<Vec<Survey>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_survey(BufReader::new(file), ap).with_context(|| format!("parsing {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn fit(args: FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Success> {
    let ap =
        ApConfig::new("ap", PowerDbm(args.tx_power_dbm)).with_frequency_mhz(args.frequency_mhz);
    ap.validate()?;
    let surveys = load_surveys(&args.survey, &ap)?;
    let results = fit_many(&surveys, DistanceMeters(args.d0_m))?;

    writeln!(
        out,
        "{:<16} {:>10} {:>10} {:>10} {:>10} {:>11}",
        "location_id", "n", "sigma_db", "pl_d0_db", "r_squared", "num_samples"
    )?;
    let mut models = Vec::new();
    let mut ok = true;
    for (id, result) in &results {
        match result {
            Ok(fit) => {
                writeln!(
                    out,
                    "{:<16} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>11}",
                    id,
                    fit.model.n,
                    fit.model.sigma_db,
                    fit.model.pl_d0_db,
                    fit.r_squared,
                    fit.num_samples
                )?;
                models.push(ModelFile::from_fit(id, &ap, fit));
            }
            Err(e) => {
                writeln!(err, "error: location {id}: {e}")?;
                ok = false;
            }
        }
    }
    if let Some(path) = &args.out {
        if models.is_empty() {
            bail!(
                "no location could be fitted; {} not written",
                path.display()
            );
        }
        let mut w = create(path)?;
        write_models(&mut w, &models)?;
        w.flush()?;
    }
    Ok(ok)
}

#[derive(Serialize)]
struct Prediction<'a> {
    location: &'a str,
    distance_m: f64,
    rssi_dbm: f64,
    region: &'static str,
}

fn predict(args: PredictArgs, out: &mut dyn Write) -> Result<Success> {
    let (file, model, table) = args.model.load()?;
    let rssi = predict_rssi(
        &model,
        PowerDbm(args.tx_power_dbm),
        DistanceMeters(args.distance_m),
    )?;
    let region = classify_rssi(rssi, &table)?;
    if args.json {
        let p = Prediction {
            location: &file.name,
            distance_m: args.distance_m,
            rssi_dbm: rssi.0,
            region: region.as_str(),
        };
        serde_json::to_writer(&mut *out, &p)?;
        writeln!(out)?;
    } else {
        writeln!(out, "{:.2} dBm, region {}", rssi.0, region)?;
    }
    Ok(true)
}

fn heatmap(args: HeatmapArgs, out: &mut dyn Write) -> Result<Success> {
    let (_, model, table) = args.model.load()?;
    let grid = generate_heatmap(
        &model,
        PowerDbm(args.tx_power_dbm),
        args.ap_x,
        args.ap_y,
        args.extent,
        args.resolution,
        &table,
    )?;
    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(&mut *out),
    };
    writeln!(sink, "x_m,y_m,rssi_dbm,region")?;
    for (x, y, cell) in grid.iter() {
        writeln!(
            sink,
            "{},{},{:.2},{}",
            x, y, cell.predicted_rssi.0, cell.region
        )?;
    }
    sink.flush()?;
    Ok(true)
}

fn plan(args: PlanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Success> {
    let ap = ApConfig::new("ap", PowerDbm(args.tx_power_dbm))
        .with_sensitivity(PowerDbm(args.sensitivity_dbm));
    ap.validate()?;
    let surveys = load_surveys(&args.survey, &ap)?;
    let report = plan_surveys(&surveys, PowerDbm(args.sensitivity_dbm), args.margin_db)?;

    writeln!(
        out,
        "{:<16} {:>14} {:>10} {:>12}",
        "location_id", "worst_rssi_dbm", "margin_db", "needs_new_ap"
    )?;
    let mut ok = true;
    for (id, entry) in &report.entries {
        match entry {
            Ok(e) => writeln!(
                out,
                "{:<16} {:>14.2} {:>10.2} {:>12}",
                id,
                e.worst_rssi.0,
                e.margin_db,
                if e.needs_new_ap { "yes" } else { "no" }
            )?,
            Err(e) => {
                writeln!(err, "error: location {id}: {e}")?;
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn synth(args: SynthArgs, out: &mut dyn Write) -> Result<Success> {
    let spec = SynthSpec {
        model: LogDistanceModel::new(args.pl_d0, DistanceMeters(args.d0_m), args.n, args.sigma)?,
        tx: PowerDbm(args.tx_power_dbm),
        num_samples: args.samples,
        d_min: DistanceMeters(args.dmin_m),
        d_max: DistanceMeters(args.dmax_m),
        seed: args.seed,
    };
    let survey = generate_survey(
        &spec,
        args.location_id.as_str(),
        ApConfig::new("ap", spec.tx),
    )?;
    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(&mut *out),
    };
    writeln!(
        sink,
        "# synthetic survey: n={} sigma={} pl_d0={} d0={} tx={} seed={}",
        args.n, args.sigma, args.pl_d0, args.d0_m, args.tx_power_dbm, args.seed
    )?;
    write_survey(&mut sink, std::slice::from_ref(&survey))?;
    sink.flush()?;
    Ok(true)
}
