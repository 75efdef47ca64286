//! Coverage regions A-D and a rasterized prediction around one AP.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{finite, positive, Error, Result};
use crate::propagation::{predict_rssi, LogDistanceModel};
use crate::units::{DistanceMeters, PowerDbm};

/// Signal quality band. Ordered weakest to strongest, so `A` compares greatest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    OutOfCoverage,
    D,
    C,
    B,
    A,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::A => "A",
            Region::B => "B",
            Region::C => "C",
            Region::D => "D",
            Region::OutOfCoverage => "OUT",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Region::A),
            "B" => Ok(Region::B),
            "C" => Ok(Region::C),
            "D" => Ok(Region::D),
            "OUT" => Ok(Region::OutOfCoverage),
            other => Err(Error::Invalid(format!("unknown region {other:?}"))),
        }
    }
}

/// Thresholds delimiting the four regions.
///
/// `rssi_floors` are the weakest RSSI (inclusive) of A, B, C and D; a region
/// owns its lower bound. Anything above the A floor is A, anything below the
/// D floor is out of coverage. `range_bounds` are the outer (exclusive)
/// distances of A, B and C; D is unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionTable {
    pub rssi_floors: [f64; 4],
    pub range_bounds: [f64; 3],
}

impl Default for RegionTable {
    fn default() -> Self {
        RegionTable {
            rssi_floors: [-56.0, -64.0, -72.0, -80.0],
            range_bounds: [4.0, 10.0, 25.0],
        }
    }
}

const BANDS: [Region; 4] = [Region::A, Region::B, Region::C, Region::D];

impl RegionTable {
    pub fn new(rssi_floors: [f64; 4], range_bounds: [f64; 3]) -> Result<Self> {
        let t = RegionTable {
            rssi_floors,
            range_bounds,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for v in self.rssi_floors.iter().chain(&self.range_bounds) {
            finite("region threshold", *v)?;
        }
        if !self.rssi_floors.windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::Invalid(
                "rssi thresholds must be strictly descending".into(),
            ));
        }
        if !self.range_bounds.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid(
                "range thresholds must be strictly ascending".into(),
            ));
        }
        Ok(())
    }
}

pub fn classify_rssi(rssi: PowerDbm, table: &RegionTable) -> Result<Region> {
    finite("rssi", rssi.0)?;
    Ok(BANDS
        .iter()
        .zip(&table.rssi_floors)
        .find(|(_, &floor)| rssi.0 >= floor)
        .map_or(Region::OutOfCoverage, |(r, _)| *r))
}

pub fn classify_distance(d: DistanceMeters, table: &RegionTable) -> Result<Region> {
    if !(d.0.is_finite() && d.0 >= 0.0) {
        return Err(Error::Domain {
            what: "distance",
            value: d.0,
        });
    }
    Ok(BANDS
        .iter()
        .zip(&table.range_bounds)
        .find(|(_, &bound)| d.0 < bound)
        .map_or(Region::D, |(r, _)| *r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub predicted_rssi: PowerDbm,
    pub region: Region,
}

/// Predicted RSSI and region on a regular raster. Cells are row-major with
/// rows running along +y from `y_min` and columns along +x from `x_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapGrid {
    pub ap_x: f64,
    pub ap_y: f64,
    pub extent: Extent,
    pub resolution: f64,
    pub cols: usize,
    pub rows: usize,
    pub cells: Vec<Cell>,
}

impl HeatmapGrid {
    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        cell_center(&self.extent, self.resolution, row, col)
    }

    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.cells[row * self.cols + col]
    }

    /// `(x, y, cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, &Cell)> + '_ {
        self.cells.iter().enumerate().map(move |(i, c)| {
            let (x, y) = self.cell_center(i / self.cols, i % self.cols);
            (x, y, c)
        })
    }
}

fn cell_center(extent: &Extent, resolution: f64, row: usize, col: usize) -> (f64, f64) {
    (
        extent.x_min + (col as f64 + 0.5) * resolution,
        extent.y_min + (row as f64 + 0.5) * resolution,
    )
}

fn cell_count(span: f64, resolution: f64) -> Result<usize> {
    let count = (span / resolution).ceil();
    if !(count.is_finite() && count <= u32::MAX as f64) {
        return Err(Error::Invalid(format!(
            "grid too large: {span} m at {resolution} m resolution"
        )));
    }
    Ok(count as usize)
}

/// Rasterize predicted coverage around an AP at `(ap_x, ap_y)`.
///
/// Each cell is evaluated at its center; distances inside the model's
/// reference distance are clamped to `d0`.
pub fn generate_heatmap(
    model: &LogDistanceModel,
    tx: PowerDbm,
    ap_x: f64,
    ap_y: f64,
    extent: Extent,
    resolution: f64,
    table: &RegionTable,
) -> Result<HeatmapGrid> {
    model.validate()?;
    table.validate()?;
    finite("tx power", tx.0)?;
    finite("ap x", ap_x)?;
    finite("ap y", ap_y)?;
    positive("resolution", resolution)?;
    for v in [extent.x_min, extent.x_max, extent.y_min, extent.y_max] {
        finite("extent", v)?;
    }
    if !(extent.x_min < extent.x_max && extent.y_min < extent.y_max) {
        return Err(Error::Invalid(format!("empty extent {extent:?}")));
    }
    let cols = cell_count(extent.x_max - extent.x_min, resolution)?;
    let rows = cell_count(extent.y_max - extent.y_min, resolution)?;

    let d_floor = model.d0.0;
    let cells = (0..rows * cols)
        .into_par_iter()
        .map(|i| {
            let (cx, cy) = cell_center(&extent, resolution, i / cols, i % cols);
            let d = (cx - ap_x).hypot(cy - ap_y).max(d_floor);
            let predicted_rssi = predict_rssi(model, tx, DistanceMeters(d))?;
            let region = classify_rssi(predicted_rssi, table)?;
            Ok(Cell {
                predicted_rssi,
                region,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(HeatmapGrid {
        ap_x,
        ap_y,
        extent,
        resolution,
        cols,
        rows,
        cells,
    })
}
