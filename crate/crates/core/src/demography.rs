//! County population growth rates and compound projection.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// A county with its identity, centroid, land area, and census populations.
#[derive(Debug, Clone)]
pub struct CountyRecord {
    pub fips: String,
    pub state: String,
    pub lat: f64,
    pub lon: f64,
    pub area_km2: f64,
    /// Absent for counties created after the 2000 census.
    pub pop2000: Option<f64>,
    pub pop2010: f64,
    /// Geometric mean annual growth rate over 2000-2010 (fraction/year).
    pub growth_rate: f64,
    /// True when the growth rate fell back to zero because pop2000 was
    /// missing or zero.
    pub rate_defaulted: bool,
}

impl CountyRecord {
    /// Projected population for a census-style target year (2010 baseline).
    /// Years before the baseline return the 2010 population unchanged.
    pub fn project_to(&self, target_year: i32) -> Result<f64> {
        let years = (target_year - 2010).max(0) as u32;
        project_population(self.pop2010, self.growth_rate, years)
    }
}

/// Geometric mean annual growth rate over a decade:
/// r = (pop2010/pop2000)^(1/10) - 1.
pub fn growth_rate(pop2000: f64, pop2010: f64) -> Result<f64> {
    if pop2000 <= 0.0 {
        return Err(Error::UndefinedRate(format!(
            "base population {pop2000} must be positive"
        )));
    }
    if pop2010 < 0.0 {
        return Err(Error::Validation(format!(
            "population {pop2010} must be non-negative"
        )));
    }
    Ok((pop2010 / pop2000).powf(0.1) - 1.0)
}

/// Compound projection pop2010 * (1 + rate)^years.
///
/// No rounding is applied here; person counts are rounded only when reports
/// are emitted.
pub fn project_population(pop2010: f64, rate: f64, years: u32) -> Result<f64> {
    if pop2010 < 0.0 {
        return Err(Error::Validation(format!(
            "population {pop2010} must be non-negative"
        )));
    }
    let base = 1.0 + rate;
    if base < 0.0 {
        return Err(Error::InvalidRate(format!(
            "growth rate {rate} implies negative multiplier"
        )));
    }
    Ok(pop2010 * base.powi(years as i32))
}

/// Percent difference between the summed county projections and a national
/// reference total: 100 * |sum - national| / national.
pub fn national_check(county_projections: &[f64], national_reference: f64) -> Result<f64> {
    if national_reference <= 0.0 {
        return Err(Error::InvalidReference(format!(
            "national reference {national_reference} must be positive"
        )));
    }
    let sum: f64 = county_projections.iter().sum();
    Ok(100.0 * (sum - national_reference).abs() / national_reference)
}

#[derive(Debug, Deserialize)]
struct CountyRow {
    fips: String,
    state: String,
    lat: f64,
    lon: f64,
    area_km2: f64,
    pop2000: Option<f64>,
    pop2010: f64,
}

/// Read the county table (`fips,state,lat,lon,area_km2,pop2000,pop2010`).
///
/// The growth rate is computed on load; counties without a usable 2000
/// population get rate 0 and are flagged rather than dropped.
pub fn read_counties_csv<P: AsRef<Path>>(path: P) -> Result<Vec<CountyRecord>> {
    let mut rdr = csv::Reader::from_path(path.as_ref())?;
    let mut seen = BTreeSet::new();
    let mut counties = Vec::new();
    for (line, rec) in rdr.deserialize::<CountyRow>().enumerate() {
        let row = rec.map_err(|e| {
            Error::Validation(format!(
                "{}: data row {}: {e}",
                path.as_ref().display(),
                line + 1
            ))
        })?;
        if row.fips.len() != 5 || !row.fips.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Validation(format!(
                "county fips {:?} is not a 5-digit code",
                row.fips
            )));
        }
        if !seen.insert(row.fips.clone()) {
            return Err(Error::Validation(format!(
                "duplicate county fips {}",
                row.fips
            )));
        }
        if row.pop2010 < 0.0 || row.pop2000.is_some_and(|p| p < 0.0) {
            return Err(Error::Validation(format!(
                "county {}: populations must be non-negative",
                row.fips
            )));
        }
        if row.area_km2 < 0.0 {
            return Err(Error::Validation(format!(
                "county {}: area must be non-negative",
                row.fips
            )));
        }
        let (rate, defaulted) = match row.pop2000 {
            Some(p2000) if p2000 > 0.0 => (growth_rate(p2000, row.pop2010)?, false),
            _ => (0.0, true),
        };
        counties.push(CountyRecord {
            fips: row.fips,
            state: row.state,
            lat: row.lat,
            lon: row.lon,
            area_km2: row.area_km2,
            pop2000: row.pop2000,
            pop2010: row.pop2010,
            growth_rate: rate,
            rate_defaulted: defaulted,
        });
    }
    counties.sort_by(|a, b| a.fips.cmp(&b.fips));
    Ok(counties)
}

#[derive(Debug, Deserialize)]
struct NationalRow {
    year: i32,
    population: f64,
}

/// Read the optional national reference table (`year,population`).
pub fn read_national_csv<P: AsRef<Path>>(path: P) -> Result<Vec<(i32, f64)>> {
    let mut rdr = csv::Reader::from_path(path.as_ref())?;
    let mut rows = Vec::new();
    for rec in rdr.deserialize::<NationalRow>() {
        let row = rec?;
        rows.push((row.year, row.population));
    }
    rows.sort_by_key(|r| r.0);
    Ok(rows)
}
