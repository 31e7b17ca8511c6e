//! Regular lat/lon grids: bilinear regridding, point sampling, cell areas.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::time::MonthStamp;

/// Mean Earth radius used for all spherical geometry in this crate.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Slack, in degrees, when deciding whether a point sits inside the grid hull
/// or exactly on a node. Roughly 0.1 mm on the ground.
const EPS_DEG: f64 = 1e-9;

/// Normalize a longitude into the [-180, 180) convention used throughout.
/// CMIP-style [0, 360) longitudes convert on ingestion.
pub fn normalize_lon(lon: f64) -> f64 {
    let mut l = (lon + 180.0).rem_euclid(360.0) - 180.0;
    if l >= 180.0 {
        l -= 360.0;
    }
    l
}

/// Great-circle distance between two points in km (haversine form).
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = (lat2 - lat1).to_radians();
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * a.sqrt().atan2((1.0 - a).sqrt())
}

/// Area in km² of a grid cell centred at `lat_center` spanning `dlat` × `dlon`
/// degrees: the spherical band formula R²·Δλ·(sin φ₂ − sin φ₁).
///
/// The caller must keep `lat_center ± dlat/2` within [-90, 90].
pub fn cell_area(lat_center: f64, dlat: f64, dlon: f64) -> f64 {
    debug_assert!(lat_center - dlat / 2.0 >= -90.0 - EPS_DEG);
    debug_assert!(lat_center + dlat / 2.0 <= 90.0 + EPS_DEG);
    let phi_lo = (lat_center - dlat / 2.0).to_radians();
    let phi_hi = (lat_center + dlat / 2.0).to_radians();
    EARTH_RADIUS_KM * EARTH_RADIUS_KM * dlon.to_radians() * (phi_hi.sin() - phi_lo.sin())
}

/// A regular latitude/longitude grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    lat_start: f64,
    lat_step: f64,
    lat_count: usize,
    lon_start: f64,
    lon_step: f64,
    lon_count: usize,
}

impl GridSpec {
    pub fn new(
        lat_start: f64,
        lat_step: f64,
        lat_count: usize,
        lon_start: f64,
        lon_step: f64,
        lon_count: usize,
    ) -> Result<Self> {
        if lat_step <= 0.0 || lon_step <= 0.0 {
            return Err(Error::Validation("grid steps must be positive".into()));
        }
        if lat_count < 2 || lon_count < 2 {
            return Err(Error::Validation("grid counts must be at least 2".into()));
        }
        let lat_max = lat_start + lat_step * (lat_count - 1) as f64;
        if lat_start < -90.0 || lat_max > 90.0 {
            return Err(Error::Validation(format!(
                "latitudes {lat_start}..{lat_max} outside [-90, 90]"
            )));
        }
        let lon_max = lon_start + lon_step * (lon_count - 1) as f64;
        if lon_start < -180.0 || lon_max >= 180.0 {
            return Err(Error::Validation(format!(
                "longitudes {lon_start}..{lon_max} outside [-180, 180)"
            )));
        }
        Ok(Self {
            lat_start,
            lat_step,
            lat_count,
            lon_start,
            lon_step,
            lon_count,
        })
    }

    pub fn lat_start(&self) -> f64 {
        self.lat_start
    }
    pub fn lat_step(&self) -> f64 {
        self.lat_step
    }
    pub fn lat_count(&self) -> usize {
        self.lat_count
    }
    pub fn lon_start(&self) -> f64 {
        self.lon_start
    }
    pub fn lon_step(&self) -> f64 {
        self.lon_step
    }
    pub fn lon_count(&self) -> usize {
        self.lon_count
    }

    pub fn lat(&self, i: usize) -> f64 {
        self.lat_start + self.lat_step * i as f64
    }

    pub fn lon(&self, j: usize) -> f64 {
        self.lon_start + self.lon_step * j as f64
    }

    pub fn lat_max(&self) -> f64 {
        self.lat(self.lat_count - 1)
    }

    pub fn lon_max(&self) -> f64 {
        self.lon(self.lon_count - 1)
    }

    pub fn node_count(&self) -> usize {
        self.lat_count * self.lon_count
    }

    /// Whether a point lies inside the grid hull (nodes included).
    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        lat >= self.lat_start - EPS_DEG
            && lat <= self.lat_max() + EPS_DEG
            && lon >= self.lon_start - EPS_DEG
            && lon <= self.lon_max() + EPS_DEG
    }

    /// Whether `other`'s hull is contained in this grid's hull.
    pub fn covers(&self, other: &GridSpec) -> bool {
        self.contains(other.lat_start, other.lon_start)
            && self.contains(other.lat_max(), other.lon_max())
    }

    /// Locate `x` along an axis: the lower cell index and the fractional
    /// offset within the cell. Offsets within `EPS` of a node snap to it so
    /// that sampling at a node reproduces the node value exactly.
    fn locate(start: f64, step: f64, count: usize, x: f64) -> Option<(usize, f64)> {
        let pos = (x - start) / step;
        let max = (count - 1) as f64;
        if pos < -EPS_DEG / step || pos > max + EPS_DEG / step {
            return None;
        }
        let mut i = pos.floor();
        if i < 0.0 {
            i = 0.0;
        }
        if i > max - 1.0 {
            i = max - 1.0;
        }
        let mut frac = pos - i;
        if frac.abs() < 1e-9 {
            frac = 0.0;
        } else if (frac - 1.0).abs() < 1e-9 {
            frac = 1.0;
        }
        Some((i as usize, frac.clamp(0.0, 1.0)))
    }
}

/// The climate variable a gridded field carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Precipitation,
    Evapotranspiration,
    AirTemperature,
    /// Derived P − E supply depth; never accepted from input files.
    Freshwater,
}

impl Variable {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "precipitation" => Ok(Self::Precipitation),
            "evapotranspiration" => Ok(Self::Evapotranspiration),
            "air_temperature" => Ok(Self::AirTemperature),
            other => Err(Error::Validation(format!(
                "unknown variable {other:?}; expected precipitation, evapotranspiration, or air_temperature"
            ))),
        }
    }

    pub fn units(&self) -> Units {
        match self {
            Self::Precipitation | Self::Evapotranspiration | Self::Freshwater => Units::MmPerMonth,
            Self::AirTemperature => Units::DegC,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Precipitation => "precipitation",
            Self::Evapotranspiration => "evapotranspiration",
            Self::AirTemperature => "air_temperature",
            Self::Freshwater => "freshwater",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    MmPerMonth,
    DegC,
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MmPerMonth => "mm/month",
            Self::DegC => "degC",
        })
    }
}

/// Which (model, scenario, initial-condition) member a field came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Provenance {
    pub model: String,
    pub scenario: String,
    pub run: String,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.model, self.scenario, self.run)
    }
}

/// One climate variable on a regular grid with a contiguous monthly time axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedField {
    spec: GridSpec,
    variable: Variable,
    units: Units,
    times: Vec<MonthStamp>,
    values: Vec<f64>,
    provenance: Provenance,
}

impl GriddedField {
    /// Validates that the value array is dense and finite, that precipitation
    /// is non-negative, and that the time axis is contiguous monthly.
    pub fn new(
        spec: GridSpec,
        variable: Variable,
        times: Vec<MonthStamp>,
        values: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Validation("field has no time steps".into()));
        }
        for w in times.windows(2) {
            if w[1].index() != w[0].index() + 1 {
                return Err(Error::Validation(format!(
                    "time axis not contiguous monthly: {} followed by {}",
                    w[0], w[1]
                )));
            }
        }
        let expected = times.len() * spec.node_count();
        if values.len() != expected {
            return Err(Error::Validation(format!(
                "value array length {} != time x lat x lon = {}",
                values.len(),
                expected
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Validation(format!(
                    "non-finite value at flat index {k} in {variable} field {provenance}"
                )));
            }
            if variable == Variable::Precipitation && *v < 0.0 {
                return Err(Error::Validation(format!(
                    "negative precipitation {v} at flat index {k} in field {provenance}"
                )));
            }
        }
        Ok(Self {
            units: variable.units(),
            spec,
            variable,
            times,
            values,
            provenance,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }
    pub fn variable(&self) -> Variable {
        self.variable
    }
    pub fn units(&self) -> Units {
        self.units
    }
    pub fn times(&self) -> &[MonthStamp] {
        &self.times
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn value(&self, t: usize, i_lat: usize, j_lon: usize) -> f64 {
        self.values[(t * self.spec.lat_count + i_lat) * self.spec.lon_count + j_lon]
    }

    /// Bilinear interpolation of every time step onto `target`.
    ///
    /// Each target node becomes the bilinear blend of the four enclosing
    /// source nodes; provenance is preserved. Targets reaching outside the
    /// source hull are refused (no extrapolation).
    pub fn regrid_bilinear(&self, target: &GridSpec) -> Result<GriddedField> {
        if *target == self.spec {
            return Ok(self.clone());
        }
        if !self.spec.covers(target) {
            return Err(Error::DomainCoverage(format!(
                "target grid [{}, {}] x [{}, {}] extends outside source [{}, {}] x [{}, {}]",
                target.lat_start,
                target.lat_max(),
                target.lon_start,
                target.lon_max(),
                self.spec.lat_start,
                self.spec.lat_max(),
                self.spec.lon_start,
                self.spec.lon_max(),
            )));
        }
        let nt = self.times.len();
        let mut values = Vec::with_capacity(nt * target.node_count());
        // Axis lookups depend only on the grids, not on time.
        let lat_loc: Vec<(usize, f64)> = (0..target.lat_count)
            .map(|i| {
                GridSpec::locate(
                    self.spec.lat_start,
                    self.spec.lat_step,
                    self.spec.lat_count,
                    target.lat(i),
                )
                .expect("containment checked")
            })
            .collect();
        let lon_loc: Vec<(usize, f64)> = (0..target.lon_count)
            .map(|j| {
                GridSpec::locate(
                    self.spec.lon_start,
                    self.spec.lon_step,
                    self.spec.lon_count,
                    target.lon(j),
                )
                .expect("containment checked")
            })
            .collect();
        for t in 0..nt {
            for &(i0, fy) in &lat_loc {
                for &(j0, fx) in &lon_loc {
                    let v00 = self.value(t, i0, j0);
                    let v01 = self.value(t, i0, j0 + 1);
                    let v10 = self.value(t, i0 + 1, j0);
                    let v11 = self.value(t, i0 + 1, j0 + 1);
                    values.push(
                        (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01)
                            + fy * ((1.0 - fx) * v10 + fx * v11),
                    );
                }
            }
        }
        GriddedField::new(
            target.clone(),
            self.variable,
            self.times.clone(),
            values,
            self.provenance.clone(),
        )
    }

    /// Bilinear sample at a point, one value per time step.
    pub fn sample_at_point(&self, lat: f64, lon: f64) -> Result<Vec<f64>> {
        let (i0, fy) = GridSpec::locate(
            self.spec.lat_start,
            self.spec.lat_step,
            self.spec.lat_count,
            lat,
        )
        .ok_or_else(|| {
            Error::DomainCoverage(format!(
                "latitude {lat} outside grid [{}, {}]",
                self.spec.lat_start,
                self.spec.lat_max()
            ))
        })?;
        let (j0, fx) = GridSpec::locate(
            self.spec.lon_start,
            self.spec.lon_step,
            self.spec.lon_count,
            lon,
        )
        .ok_or_else(|| {
            Error::DomainCoverage(format!(
                "longitude {lon} outside grid [{}, {}]",
                self.spec.lon_start,
                self.spec.lon_max()
            ))
        })?;
        Ok((0..self.times.len())
            .map(|t| {
                let v00 = self.value(t, i0, j0);
                let v01 = self.value(t, i0, j0 + 1);
                let v10 = self.value(t, i0 + 1, j0);
                let v11 = self.value(t, i0 + 1, j0 + 1);
                (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) + fy * ((1.0 - fx) * v10 + fx * v11)
            })
            .collect())
    }
}

#[derive(Debug, Deserialize)]
struct GridRow {
    model: String,
    scenario: String,
    run: String,
    variable: String,
    year: i32,
    month: u8,
    lat: f64,
    lon: f64,
    value: f64,
}

fn axis_key(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

/// Check that the sorted unique axis keys are evenly spaced and return
/// (start, step, count).
fn regular_axis(keys: &[i64], name: &str) -> Result<(f64, f64, usize)> {
    if keys.len() < 2 {
        return Err(Error::Validation(format!(
            "{name} axis needs at least 2 distinct values, found {}",
            keys.len()
        )));
    }
    let step = keys[1] - keys[0];
    if step <= 0 {
        return Err(Error::Validation(format!(
            "{name} axis step must be positive"
        )));
    }
    for w in keys.windows(2) {
        if w[1] - w[0] != step {
            return Err(Error::Validation(format!(
                "{name} axis is not regular: spacing {} then {}",
                step as f64 / 1e6,
                (w[1] - w[0]) as f64 / 1e6
            )));
        }
    }
    Ok((keys[0] as f64 / 1e6, step as f64 / 1e6, keys.len()))
}

/// Read long-format gridded CSV files
/// (`model,scenario,run,variable,year,month,lat,lon,value`) into dense fields,
/// one per (model, scenario, run, variable) group. Groups may span files;
/// longitudes are normalized to [-180, 180).
pub fn read_gridded_csv<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<GriddedField>> {
    type GroupKey = (String, String, String, String);
    let mut groups: BTreeMap<GroupKey, Vec<(MonthStamp, i64, i64, f64)>> = BTreeMap::new();
    for path in paths {
        let mut rdr = csv::Reader::from_path(path.as_ref())?;
        for (line, rec) in rdr.deserialize::<GridRow>().enumerate() {
            let row: GridRow = rec.map_err(|e| {
                Error::Validation(format!(
                    "{}: data row {}: {e}",
                    path.as_ref().display(),
                    line + 1
                ))
            })?;
            let stamp = MonthStamp::new(row.year, row.month).map_err(|e| {
                Error::Validation(format!(
                    "{}: data row {}: {e}",
                    path.as_ref().display(),
                    line + 1
                ))
            })?;
            let lon = normalize_lon(row.lon);
            groups
                .entry((row.model, row.scenario, row.run, row.variable))
                .or_default()
                .push((stamp, axis_key(row.lat), axis_key(lon), row.value));
        }
    }
    let mut fields = Vec::new();
    for ((model, scenario, run, variable), rows) in groups {
        let variable = Variable::parse(&variable)?;
        let provenance = Provenance {
            model,
            scenario,
            run,
        };
        let mut lat_keys: Vec<i64> = rows.iter().map(|r| r.1).collect();
        lat_keys.sort_unstable();
        lat_keys.dedup();
        let mut lon_keys: Vec<i64> = rows.iter().map(|r| r.2).collect();
        lon_keys.sort_unstable();
        lon_keys.dedup();
        let mut stamps: Vec<MonthStamp> = rows.iter().map(|r| r.0).collect();
        stamps.sort_unstable();
        stamps.dedup();

        let (lat0, dlat, nlat) = regular_axis(&lat_keys, "latitude")?;
        let (lon0, dlon, nlon) = regular_axis(&lon_keys, "longitude")?;
        let spec = GridSpec::new(lat0, dlat, nlat, lon0, dlon, nlon)?;

        let t0 = stamps[0].index();
        let nt = stamps.len();
        let mut values = vec![f64::NAN; nt * nlat * nlon];
        let mut filled = vec![false; values.len()];
        for (stamp, lat_k, lon_k, value) in rows {
            let t = (stamp.index() - t0) as usize;
            let i = lat_keys.binary_search(&lat_k).expect("key from set");
            let j = lon_keys.binary_search(&lon_k).expect("key from set");
            let idx = (t * nlat + i) * nlon + j;
            if filled[idx] {
                return Err(Error::Validation(format!(
                    "duplicate cell for {provenance} {variable} at {stamp} ({}, {})",
                    lat_keys[i] as f64 / 1e6,
                    lon_keys[j] as f64 / 1e6
                )));
            }
            filled[idx] = true;
            values[idx] = value;
        }
        if let Some(first_missing) = filled.iter().position(|f| !f) {
            let t = first_missing / (nlat * nlon);
            return Err(Error::Validation(format!(
                "incomplete grid for {provenance} {variable}: first gap in month {}",
                MonthStamp::from_index(t0 + t as i64)
            )));
        }
        fields.push(GriddedField::new(
            spec, variable, stamps, values, provenance,
        )?);
    }
    Ok(fields)
}
