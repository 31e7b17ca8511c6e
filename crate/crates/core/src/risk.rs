//! County/gauge/plant joins, stress classification, and capacity aggregation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::ensemble::Statistic;
use crate::error::{Error, Result};
use crate::geogrid::haversine_km;
use crate::streamtemp::GaugeSeries;
use crate::thermal::CoolingClass;
use crate::watersupply::ClimatologyWindow;

/// Joules per BTU.
pub const JOULES_PER_BTU: f64 = 1055.0;

/// One power plant from the inventory.
#[derive(Debug, Clone)]
pub struct PlantRecord {
    pub plant_id: String,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    pub fips: String,
    pub state: String,
    pub cooling: CoolingClass,
    pub fuel: String,
    pub nameplate_mw: f64,
    pub annual_gen_quad: Option<f64>,
    pub capacity_factor: Option<f64>,
}

impl PlantRecord {
    /// Annual generation in quads: the inventory figure when present,
    /// otherwise nameplate at the plant's (or the given default) capacity
    /// factor.
    pub fn generation_quads(&self, default_capacity_factor: f64) -> Result<f64> {
        match self.annual_gen_quad {
            Some(q) => Ok(q),
            None => mw_to_quads(
                self.nameplate_mw,
                self.capacity_factor.unwrap_or(default_capacity_factor),
            ),
        }
    }
}

#[derive(Debug, Deserialize)]
struct PlantRow {
    plant_id: String,
    name: String,
    lat: f64,
    lon: f64,
    fips: String,
    state: String,
    cooling: String,
    fuel: String,
    nameplate_mw: f64,
    annual_gen_quad: Option<f64>,
    capacity_factor: Option<f64>,
}

/// Read the plant inventory
/// (`plant_id,name,lat,lon,fips,state,cooling,fuel,nameplate_mw,annual_gen_quad,capacity_factor`).
pub fn read_plants_csv<P: AsRef<Path>>(path: P) -> Result<Vec<PlantRecord>> {
    let mut rdr = csv::Reader::from_path(path.as_ref())?;
    let mut plants = Vec::new();
    for (line, rec) in rdr.deserialize::<PlantRow>().enumerate() {
        let row = rec.map_err(|e| {
            Error::Validation(format!(
                "{}: data row {}: {e}",
                path.as_ref().display(),
                line + 1
            ))
        })?;
        if row.nameplate_mw <= 0.0 {
            return Err(Error::Validation(format!(
                "plant {}: nameplate must be positive",
                row.plant_id
            )));
        }
        if let Some(cf) = row.capacity_factor {
            if !(cf > 0.0 && cf <= 1.0) {
                return Err(Error::Validation(format!(
                    "plant {}: capacity factor {cf} outside (0, 1]",
                    row.plant_id
                )));
            }
        }
        plants.push(PlantRecord {
            cooling: row.cooling.parse()?,
            plant_id: row.plant_id,
            name: row.name,
            lat: row.lat,
            lon: row.lon,
            fips: row.fips,
            state: row.state,
            fuel: row.fuel,
            nameplate_mw: row.nameplate_mw,
            annual_gen_quad: row.annual_gen_quad,
            capacity_factor: row.capacity_factor,
        });
    }
    plants.sort_by(|a, b| a.plant_id.cmp(&b.plant_id));
    Ok(plants)
}

/// Nameplate MW at a capacity factor to quads of annual generation:
/// MW * 8760 h * CF * (3.6e9 J/MWh / 1055 J/BTU) / 1e15 BTU/quad.
pub fn mw_to_quads(nameplate_mw: f64, capacity_factor: f64) -> Result<f64> {
    if !(capacity_factor > 0.0 && capacity_factor <= 1.0) {
        return Err(Error::Validation(format!(
            "capacity factor {capacity_factor} outside (0, 1]"
        )));
    }
    Ok(nameplate_mw * 8760.0 * capacity_factor * (3.6e9 / JOULES_PER_BTU) / 1e15)
}

/// The gauge closest to a plant within a search radius.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestGauge<'a> {
    pub gauge_id: &'a str,
    pub distance_km: f64,
}

/// Haversine nearest-gauge search; ties break toward the lexicographically
/// smaller gauge id. Absence within the radius is a valid result.
pub fn nearest_gauge<'a>(
    lat: f64,
    lon: f64,
    gauges: &'a [GaugeSeries],
    radius_km: f64,
) -> Option<NearestGauge<'a>> {
    let mut best: Option<NearestGauge<'a>> = None;
    for g in gauges {
        let d = haversine_km(lat, lon, g.lat, g.lon);
        if d > radius_km {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                d < b.distance_km || (d == b.distance_km && g.gauge_id.as_str() < b.gauge_id)
            }
        };
        if better {
            best = Some(NearestGauge {
                gauge_id: &g.gauge_id,
                distance_km: d,
            });
        }
    }
    best
}

/// County-level stress flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountyClassification {
    /// WAACI strictly negative.
    pub water_scarce: bool,
    /// Some linked gauge exceeded its state threshold.
    pub temp_stressed: bool,
    /// False marks the no-gauge case (temp_stressed is then vacuously false).
    pub has_gauges: bool,
}

/// Classify a county from its WAACI value and the WTSI flags of its linked
/// gauges.
pub fn classify_county(waaci_mgal_yr: f64, gauge_flags: &[u8]) -> CountyClassification {
    CountyClassification {
        water_scarce: waaci_mgal_yr < 0.0,
        temp_stressed: gauge_flags.contains(&1),
        has_gauges: !gauge_flags.is_empty(),
    }
}

/// Whether at-risk capacity requires scarcity AND heat, or either.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregationMode {
    Conjunctive,
    Disjunctive,
}

impl AggregationMode {
    pub fn matches(&self, c: &CountyClassification) -> bool {
        match self {
            Self::Conjunctive => c.water_scarce && c.temp_stressed,
            Self::Disjunctive => c.water_scarce || c.temp_stressed,
        }
    }
}

impl fmt::Display for AggregationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Conjunctive => "conjunctive",
            Self::Disjunctive => "disjunctive",
        })
    }
}

impl FromStr for AggregationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conjunctive" => Ok(Self::Conjunctive),
            "disjunctive" => Ok(Self::Disjunctive),
            other => Err(Error::Validation(format!(
                "unknown aggregation mode {other:?}"
            ))),
        }
    }
}

/// Total annual generation (quads) of wet-cooled plants in counties whose
/// flags satisfy the aggregation mode.
pub fn capacity_at_risk(
    county_flags: &BTreeMap<String, CountyClassification>,
    plants: &[PlantRecord],
    mode: AggregationMode,
    default_capacity_factor: f64,
) -> Result<f64> {
    let mut total = 0.0;
    for plant in plants {
        if !plant.cooling.is_wet() {
            continue;
        }
        if let Some(flags) = county_flags.get(&plant.fips) {
            if mode.matches(flags) {
                total += plant.generation_quads(default_capacity_factor)?;
            }
        }
    }
    Ok(total)
}

/// One year of the risk-trend series.
#[derive(Debug, Clone)]
pub struct YearRisk {
    pub year: i32,
    /// Member mean of at-risk capacity, quads/year.
    pub mean_quads: f64,
    /// Population standard deviation across members.
    pub sigma_quads: f64,
    /// Member count; 1 marks a dispersion-free single-member series.
    pub members: usize,
}

/// Yearly at-risk capacity with its cross-member dispersion band.
///
/// `yearly_waaci` maps year -> per-member county->WAACI values; scarcity uses
/// the strict WAACI < 0 threshold and only wet-cooled plants contribute.
pub fn risk_trend(
    yearly_waaci: &BTreeMap<i32, Vec<BTreeMap<String, f64>>>,
    plants: &[PlantRecord],
    default_capacity_factor: f64,
) -> Result<Vec<YearRisk>> {
    let mut out = Vec::with_capacity(yearly_waaci.len());
    for (year, members) in yearly_waaci {
        if members.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let mut totals = Vec::with_capacity(members.len());
        for waaci_by_county in members {
            let flags: BTreeMap<String, CountyClassification> = waaci_by_county
                .iter()
                .map(|(fips, w)| {
                    (
                        fips.clone(),
                        CountyClassification {
                            water_scarce: *w < 0.0,
                            temp_stressed: false,
                            has_gauges: false,
                        },
                    )
                })
                .collect();
            totals.push(capacity_at_risk(
                &flags,
                plants,
                AggregationMode::Disjunctive,
                default_capacity_factor,
            )?);
        }
        let n = totals.len() as f64;
        let mean = totals.iter().sum::<f64>() / n;
        let sigma = (totals.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n).sqrt();
        out.push(YearRisk {
            year: *year,
            mean_quads: mean,
            sigma_quads: sigma,
            members: totals.len(),
        });
    }
    Ok(out)
}

/// A gauge's window WTSI flag plus its county link.
#[derive(Debug, Clone)]
pub struct GaugeWindowFlag {
    pub gauge_id: String,
    pub fips: String,
    pub state: String,
    pub wtsi: u8,
}

/// Distinct counties with at least one exceeding gauge, sorted by state then
/// county.
pub fn exceedance_list(flags: &[GaugeWindowFlag]) -> Vec<(String, String)> {
    let mut counties: Vec<(String, String)> = flags
        .iter()
        .filter(|f| f.wtsi == 1)
        .map(|f| (f.state.clone(), f.fips.clone()))
        .collect();
    counties.sort();
    counties.dedup();
    counties
}

/// One county row of a risk report.
#[derive(Debug, Clone)]
pub struct RiskReportRow {
    pub fips: String,
    pub state: String,
    pub waaci_mgal_yr: f64,
    pub water_scarce: bool,
    pub temp_stressed: bool,
    pub has_gauges: bool,
    /// Total wet-cooled generation located in the county, quads/year.
    pub wet_capacity_quads: f64,
    /// The county's contribution under the report's aggregation mode.
    pub capacity_at_risk_quads: f64,
}

/// Counts surfaced alongside a report rather than silently dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReportWarnings {
    pub counties_outside_grid: usize,
    pub unknown_states: usize,
    pub counties_without_gauges: usize,
}

/// Per-window risk report: county rows plus totals recomputable from them.
#[derive(Debug, Clone)]
pub struct RiskReport {
    pub window: ClimatologyWindow,
    pub scenario: String,
    pub statistic: Statistic,
    pub mode: AggregationMode,
    /// Rows sorted by (state, fips); each county appears exactly once.
    pub rows: Vec<RiskReportRow>,
    pub scarce_county_count: usize,
    pub exceed_counties: Vec<(String, String)>,
    pub total_quads_at_risk_conjunctive: f64,
    pub total_quads_at_risk_disjunctive: f64,
    pub warnings: ReportWarnings,
    pub capacity_factor_default: f64,
}

impl RiskReport {
    /// Assemble a report; totals are derived from the rows so they cannot
    /// drift out of sync.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        window: ClimatologyWindow,
        scenario: String,
        statistic: Statistic,
        mode: AggregationMode,
        mut rows: Vec<RiskReportRow>,
        exceed_counties: Vec<(String, String)>,
        warnings: ReportWarnings,
        capacity_factor_default: f64,
    ) -> Result<Self> {
        rows.sort_by(|a, b| {
            (a.state.as_str(), a.fips.as_str()).cmp(&(b.state.as_str(), b.fips.as_str()))
        });
        for w in rows.windows(2) {
            if w[0].fips == w[1].fips {
                return Err(Error::Validation(format!(
                    "county {} appears twice in report rows",
                    w[0].fips
                )));
            }
        }
        let mut report = Self {
            window,
            scenario,
            statistic,
            mode,
            rows,
            scarce_county_count: 0,
            exceed_counties,
            total_quads_at_risk_conjunctive: 0.0,
            total_quads_at_risk_disjunctive: 0.0,
            warnings,
            capacity_factor_default,
        };
        let (scarce, conj, disj) = report.recompute_totals();
        report.scarce_county_count = scarce;
        report.total_quads_at_risk_conjunctive = conj;
        report.total_quads_at_risk_disjunctive = disj;
        Ok(report)
    }

    /// (scarce county count, conjunctive total, disjunctive total) derived
    /// from the rows.
    pub fn recompute_totals(&self) -> (usize, f64, f64) {
        let scarce = self.rows.iter().filter(|r| r.water_scarce).count();
        let conj = self
            .rows
            .iter()
            .filter(|r| r.water_scarce && r.temp_stressed)
            .map(|r| r.wet_capacity_quads)
            .sum();
        let disj = self
            .rows
            .iter()
            .filter(|r| r.water_scarce || r.temp_stressed)
            .map(|r| r.wet_capacity_quads)
            .sum();
        (scarce, conj, disj)
    }
}
