//! Freshwater supply (P - E), climatologies, demand, and the WAACI index.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geogrid::{GriddedField, Units, Variable};
use crate::time::MonthStamp;

/// Mgal per (mm of depth over one km²): 1 mm over 1 km² = 1000 m³.
pub const MGAL_PER_MM_KM2: f64 = 0.264172;

/// US gallons per cubic metre.
pub const GALLONS_PER_CUBIC_METER: f64 = 264.172;

/// Municipal and domestic per-capita water use, m³/capita/year.
pub const DEFAULT_PER_CAPITA_M3_YR: f64 = 1700.0;

/// WAACI at or below this marks significant dry conditions.
pub const SEVERE_DRY_THRESHOLD_MGAL_YR: f64 = -3_000_000.0;

/// A labelled 5-year averaging window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClimatologyWindow {
    D2010s,
    D2020s,
    D2030s,
    D2040s,
}

impl ClimatologyWindow {
    pub const ALL: [Self; 4] = [Self::D2010s, Self::D2020s, Self::D2030s, Self::D2040s];

    pub fn label(&self) -> &'static str {
        match self {
            Self::D2010s => "2010s",
            Self::D2020s => "2020s",
            Self::D2030s => "2030s",
            Self::D2040s => "2040s",
        }
    }

    /// The five calendar years averaged by this window.
    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        match self {
            Self::D2010s => 2008..=2012,
            Self::D2020s => 2018..=2022,
            Self::D2030s => 2028..=2032,
            Self::D2040s => 2038..=2042,
        }
    }

    /// Census-style year whose projected population feeds the demand term.
    pub fn target_year(&self) -> i32 {
        match self {
            Self::D2010s => 2010,
            Self::D2020s => 2020,
            Self::D2030s => 2030,
            Self::D2040s => 2040,
        }
    }

    /// All 60 months of the window.
    pub fn months(&self) -> Vec<MonthStamp> {
        let mut out = Vec::with_capacity(60);
        for y in self.years() {
            for m in 1..=12 {
                out.push(MonthStamp::new(y, m).expect("month in range"));
            }
        }
        out
    }
}

impl fmt::Display for ClimatologyWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ClimatologyWindow {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2010s" => Ok(Self::D2010s),
            "2020s" => Ok(Self::D2020s),
            "2030s" => Ok(Self::D2030s),
            "2040s" => Ok(Self::D2040s),
            other => Err(Error::Validation(format!(
                "unknown window {other:?}; expected 2010s, 2020s, 2030s, or 2040s"
            ))),
        }
    }
}

/// Elementwise P - E freshwater supply depth (mm/month, may be negative).
///
/// Both fields must share grid, time axis, and provenance.
pub fn freshwater(p: &GriddedField, e: &GriddedField) -> Result<GriddedField> {
    if p.variable() != Variable::Precipitation || e.variable() != Variable::Evapotranspiration {
        return Err(Error::Alignment(format!(
            "freshwater expects precipitation and evapotranspiration, got {} and {}",
            p.variable(),
            e.variable()
        )));
    }
    if p.units() != Units::MmPerMonth || e.units() != Units::MmPerMonth {
        return Err(Error::Alignment("water fluxes must be in mm/month".into()));
    }
    if p.spec() != e.spec() {
        return Err(Error::Alignment("P and E grids differ".into()));
    }
    if p.times() != e.times() {
        return Err(Error::Alignment("P and E time axes differ".into()));
    }
    if p.provenance() != e.provenance() {
        return Err(Error::Alignment(format!(
            "P and E provenance differ: {} vs {}",
            p.provenance(),
            e.provenance()
        )));
    }
    let values: Vec<f64> = p
        .values()
        .iter()
        .zip(e.values())
        .map(|(pv, ev)| pv - ev)
        .collect();
    GriddedField::new(
        p.spec().clone(),
        Variable::Freshwater,
        p.times().to_vec(),
        values,
        p.provenance().clone(),
    )
}

fn month_lookup(times: &[MonthStamp], values: &[f64], stamp: MonthStamp) -> Option<f64> {
    let idx = times.binary_search(&stamp).ok()?;
    Some(values[idx])
}

/// Mean annual depth over a 5-year window: (sum of the window's 60 monthly
/// values) / 5, in mm/year.
pub fn climatology(times: &[MonthStamp], values: &[f64], window: ClimatologyWindow) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::Shape(format!(
            "times ({}) and values ({}) differ in length",
            times.len(),
            values.len()
        )));
    }
    let mut sum = 0.0;
    for stamp in window.months() {
        match month_lookup(times, values, stamp) {
            Some(v) => sum += v,
            None => {
                return Err(Error::DomainCoverage(format!(
                    "window {window} missing month {stamp}"
                )))
            }
        }
    }
    Ok(sum / 5.0)
}

/// Total depth for one calendar year (mm/year); all 12 months must exist.
pub fn annual_total(times: &[MonthStamp], values: &[f64], year: i32) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::Shape("times and values differ in length".into()));
    }
    let mut sum = 0.0;
    for m in 1..=12 {
        let stamp = MonthStamp::new(year, m)?;
        match month_lookup(times, values, stamp) {
            Some(v) => sum += v,
            None => {
                return Err(Error::DomainCoverage(format!(
                    "year {year} missing month {stamp}"
                )))
            }
        }
    }
    Ok(sum)
}

/// Depth (mm/year) over an area (km²) to a volume in Mgal/year.
pub fn to_volume(depth_mm_yr: f64, area_km2: f64) -> f64 {
    depth_mm_yr * area_km2 * MGAL_PER_MM_KM2
}

/// Municipal and domestic demand in Mgal/year from a population and a
/// per-capita use in m³/capita/year.
pub fn municipal_demand(population: f64, per_capita_m3_yr: f64) -> Result<f64> {
    if population < 0.0 {
        return Err(Error::Validation(format!(
            "population {population} must be non-negative"
        )));
    }
    Ok(population * per_capita_m3_yr * GALLONS_PER_CUBIC_METER / 1e6)
}

/// Water Availability Absolute Change Index: supply minus demand, Mgal/year.
/// Negative values mark a water-stressed county.
pub fn waaci(supply_mgal_yr: f64, demand_mgal_yr: f64) -> f64 {
    supply_mgal_yr - demand_mgal_yr
}

/// Change in WAACI of a projected window against the 2010s baseline.
/// Both values must describe the same county and the same member or
/// ensemble statistic.
pub fn waaci_change(window_value: &WaaciRecord, baseline_2010s: &WaaciRecord) -> Result<f64> {
    if window_value.fips != baseline_2010s.fips || window_value.tag != baseline_2010s.tag {
        return Err(Error::Alignment(format!(
            "waaci change requires matching county and member/statistic: {}/{} vs {}/{}",
            window_value.fips, window_value.tag, baseline_2010s.fips, baseline_2010s.tag
        )));
    }
    Ok(window_value.waaci_mgal_yr - baseline_2010s.waaci_mgal_yr)
}

/// One county x window x (member or statistic) WAACI result.
#[derive(Debug, Clone)]
pub struct WaaciRecord {
    pub fips: String,
    pub window: ClimatologyWindow,
    /// Member provenance ("member:<model>/<run>") or statistic name.
    pub tag: String,
    pub supply_mgal_yr: f64,
    pub demand_mgal_yr: f64,
    pub waaci_mgal_yr: f64,
}

impl WaaciRecord {
    pub fn new(
        fips: String,
        window: ClimatologyWindow,
        tag: String,
        supply_mgal_yr: f64,
        demand_mgal_yr: f64,
    ) -> Self {
        Self {
            fips,
            window,
            tag,
            supply_mgal_yr,
            demand_mgal_yr,
            waaci_mgal_yr: waaci(supply_mgal_yr, demand_mgal_yr),
        }
    }

    /// Water-stressed under the strict negative-WAACI rule.
    pub fn stressed(&self) -> bool {
        self.waaci_mgal_yr < 0.0
    }

    /// Significant dry conditions (WAACI at or below -3,000,000 Mgal/year).
    pub fn severe_dry(&self) -> bool {
        self.waaci_mgal_yr <= SEVERE_DRY_THRESHOLD_MGAL_YR
    }
}
