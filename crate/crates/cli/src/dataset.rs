//! Dataset loading and validation.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use aquarisk_core::demography::{read_counties_csv, read_national_csv, CountyRecord};
use aquarisk_core::ensemble::Scenario;
use aquarisk_core::geogrid::{read_gridded_csv, GriddedField, Variable};
use aquarisk_core::risk::{read_plants_csv, PlantRecord};
use aquarisk_core::streamtemp::{read_gauges_csv, GaugeSeries, MIN_RECORD_YEARS};
use aquarisk_core::thermal::StateThresholds;

/// Input file locations; optional pieces stay `None` for the single-step
/// commands that do not need them.
#[derive(Debug, Clone, Default)]
pub struct DataPaths {
    pub counties: Option<PathBuf>,
    pub gauges: Option<PathBuf>,
    pub plants: Option<PathBuf>,
    pub grids: Vec<PathBuf>,
    pub thresholds: Option<PathBuf>,
    pub national: Option<PathBuf>,
}

/// Everything a pipeline stage can ask for.
#[derive(Debug, Default)]
pub struct Dataset {
    pub counties: Vec<CountyRecord>,
    pub gauges: Vec<GaugeSeries>,
    pub plants: Vec<PlantRecord>,
    pub fields: Vec<GriddedField>,
    pub thresholds: StateThresholds,
    pub national: Vec<(i32, f64)>,
}

/// Which pipeline stage the dataset must be able to feed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Check whatever is present; nothing is required.
    Loaded,
    Waaci,
    Trend,
    Project,
    /// The full pipeline (risk reports need every input).
    Full,
}

impl Scope {
    fn needs_counties(self) -> bool {
        matches!(self, Self::Waaci | Self::Full)
    }
    fn needs_gauges(self) -> bool {
        matches!(self, Self::Trend | Self::Project | Self::Full)
    }
    fn needs_plants(self) -> bool {
        matches!(self, Self::Full)
    }
    fn needs_supply_fields(self) -> bool {
        matches!(self, Self::Waaci | Self::Full)
    }
    fn needs_air_fields(self) -> bool {
        matches!(self, Self::Project | Self::Full)
    }
}

/// Schema, range, and referential checks over a dataset.
#[derive(Debug, Default)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "validation: {} error(s), {} warning(s)",
            self.errors.len(),
            self.warnings.len()
        )?;
        for e in &self.errors {
            writeln!(f, "  error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        Ok(())
    }
}

fn exists(path: &Path) -> Result<(), String> {
    if path.is_file() {
        Ok(())
    } else {
        Err(format!("{} does not exist", path.display()))
    }
}

/// Load whatever the paths describe; parse failures become hard errors.
pub fn load(paths: &DataPaths) -> Result<Dataset, String> {
    let mut data = Dataset {
        thresholds: StateThresholds::builtin(),
        ..Default::default()
    };
    if let Some(p) = &paths.counties {
        exists(p)?;
        data.counties = read_counties_csv(p).map_err(|e| e.to_string())?;
    }
    if let Some(p) = &paths.gauges {
        exists(p)?;
        data.gauges = read_gauges_csv(p).map_err(|e| e.to_string())?;
    }
    if let Some(p) = &paths.plants {
        exists(p)?;
        data.plants = read_plants_csv(p).map_err(|e| e.to_string())?;
    }
    if !paths.grids.is_empty() {
        for g in &paths.grids {
            exists(g)?;
        }
        data.fields = read_gridded_csv(&paths.grids).map_err(|e| e.to_string())?;
    }
    if let Some(p) = &paths.thresholds {
        exists(p)?;
        data.thresholds = StateThresholds::from_csv(p).map_err(|e| e.to_string())?;
    }
    if let Some(p) = &paths.national {
        exists(p)?;
        data.national = read_national_csv(p).map_err(|e| e.to_string())?;
    }
    Ok(data)
}

/// Schema, range, and referential checks scoped to the requesting stage.
pub fn validate(data: &Dataset, scenario: Scenario, scope: Scope) -> ValidationReport {
    let mut report = ValidationReport::default();
    if scope.needs_counties() && data.counties.is_empty() {
        report.errors.push("a county table is required".into());
    }
    if scope.needs_gauges() && data.gauges.is_empty() {
        report.errors.push("a gauge table is required".into());
    }
    if scope.needs_plants() && data.plants.is_empty() {
        report.errors.push("a plant inventory is required".into());
    }
    let fips_set: BTreeSet<&str> = data.counties.iter().map(|c| c.fips.as_str()).collect();

    for c in &data.counties {
        if c.rate_defaulted {
            report.warnings.push(format!(
                "county {}: no usable 2000 population; growth rate defaulted to 0",
                c.fips
            ));
        }
    }

    for g in &data.gauges {
        if !data.counties.is_empty() && !fips_set.contains(g.fips.as_str()) {
            report.errors.push(format!(
                "gauge {}: fips {} not present in the county table",
                g.gauge_id, g.fips
            ));
        }
        if g.known_count() < 2 {
            report
                .errors
                .push(format!("gauge {}: fewer than 2 observations", g.gauge_id));
        } else if g.record_years() < MIN_RECORD_YEARS {
            report.warnings.push(format!(
                "gauge {}: {} record years < {MIN_RECORD_YEARS}; excluded from trend analysis",
                g.gauge_id,
                g.record_years()
            ));
        }
    }

    for p in &data.plants {
        if !data.counties.is_empty() && !fips_set.contains(p.fips.as_str()) {
            report.errors.push(format!(
                "plant {}: fips {} not present in the county table",
                p.plant_id, p.fips
            ));
        }
    }

    // Scenario strings must parse, and members need a complete P/E pair.
    let mut supply_members: BTreeSet<(String, String)> = BTreeSet::new();
    let mut air_members: BTreeSet<(String, String)> = BTreeSet::new();
    for f in &data.fields {
        match Scenario::parse(&f.provenance().scenario) {
            Ok(s) if s == scenario => {}
            Ok(_) => continue,
            Err(e) => {
                report.errors.push(format!("field {}: {e}", f.provenance()));
                continue;
            }
        }
        let key = (f.provenance().model.clone(), f.provenance().run.clone());
        match f.variable() {
            Variable::AirTemperature => {
                air_members.insert(key);
            }
            _ => {
                supply_members.insert(key);
            }
        }
    }
    for (model, run) in &supply_members {
        let has = |v: Variable| {
            data.fields.iter().any(|f| {
                f.variable() == v
                    && f.provenance().model == *model
                    && f.provenance().run == *run
                    && Scenario::parse(&f.provenance().scenario)
                        .map(|s| s == scenario)
                        .unwrap_or(false)
            })
        };
        if !has(Variable::Precipitation) {
            report
                .errors
                .push(format!("member {model}/{run}: missing precipitation field"));
        }
        if !has(Variable::Evapotranspiration) {
            report.errors.push(format!(
                "member {model}/{run}: missing evapotranspiration field"
            ));
        }
    }
    if supply_members.is_empty() {
        if scope.needs_supply_fields() {
            report.errors.push(format!(
                "no precipitation/evapotranspiration members found for scenario {scenario}"
            ));
        } else if scope == Scope::Loaded && !data.fields.is_empty() {
            report.warnings.push(format!(
                "no precipitation/evapotranspiration members for scenario {scenario}; WAACI unavailable"
            ));
        }
    }
    if air_members.is_empty() {
        if scope.needs_air_fields() {
            report.errors.push(format!(
                "no air-temperature members found for scenario {scenario}"
            ));
        } else if scope == Scope::Loaded && !data.fields.is_empty() {
            report.warnings.push(format!(
                "no air-temperature members for scenario {scenario}; stream projection unavailable"
            ));
        }
    }

    // County centroids against the supply hull.
    if let Some(first) = data
        .fields
        .iter()
        .find(|f| f.variable() == Variable::Precipitation)
    {
        let spec = first.spec();
        let outside = data
            .counties
            .iter()
            .filter(|c| !spec.contains(c.lat, c.lon))
            .count();
        if outside > 0 {
            report.warnings.push(format!(
                "{outside} county centroid(s) outside the grid hull; excluded from WAACI"
            ));
        }
        let gauges_outside = data
            .gauges
            .iter()
            .filter(|g| !spec.contains(g.lat, g.lon))
            .count();
        if gauges_outside > 0 {
            report.warnings.push(format!(
                "{gauges_outside} gauge(s) outside the grid hull; excluded from projection"
            ));
        }
    }

    for g in &data.gauges {
        let (_, known) = data.thresholds.lookup(&g.state);
        if !known {
            report.warnings.push(format!(
                "gauge {}: state {:?} not in the threshold table; default limit applies",
                g.gauge_id, g.state
            ));
        }
    }

    report
}
