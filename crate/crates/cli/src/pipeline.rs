//! Pipeline orchestration: WAACI, trends, projections, and risk reports.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use aquarisk_core::demography::CountyRecord;
use aquarisk_core::ensemble::{mme_median, MemberId, Scenario, Statistic};
use aquarisk_core::error::{Error, Result};
use aquarisk_core::geogrid::{GriddedField, Variable};
use aquarisk_core::risk::{
    capacity_at_risk, classify_county, exceedance_list, nearest_gauge, risk_trend, AggregationMode,
    CountyClassification, GaugeWindowFlag, ReportWarnings, RiskReport, RiskReportRow, YearRisk,
};
use aquarisk_core::streamtemp::{
    bias_correct, build_design, build_features, impute, lssvm_fit, lssvm_predict, max_monthly,
    mk_trend, nse, pearson_r, tune_hyperparams, validation_bias, validation_split, PredictorInputs,
    PredictorSpec, TrendResult, MIN_RECORD_YEARS,
};
use aquarisk_core::time::MonthStamp;
use aquarisk_core::watersupply::{
    annual_total, climatology, municipal_demand, to_volume, ClimatologyWindow, WaaciRecord,
};

use crate::dataset::Dataset;

/// How the demand term of the water budget reads the population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemandMode {
    /// Projected population level (default).
    Absolute,
    /// Change in population since 2010; 2010s demand is then zero.
    Delta,
}

impl std::str::FromStr for DemandMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" => Ok(Self::Absolute),
            "delta" => Ok(Self::Delta),
            other => Err(Error::Validation(format!(
                "unknown demand mode {other:?}; expected absolute or delta"
            ))),
        }
    }
}

impl std::fmt::Display for DemandMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Absolute => "absolute",
            Self::Delta => "delta",
        })
    }
}

/// Resolved knobs for a pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub scenario: Scenario,
    pub statistic: Statistic,
    pub windows: Vec<ClimatologyWindow>,
    pub per_capita_m3_yr: f64,
    pub alpha: f64,
    pub gauge_radius_km: f64,
    pub aggregation: AggregationMode,
    pub capacity_factor_default: f64,
    pub demand_mode: DemandMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Rcp85,
            statistic: Statistic::Median,
            windows: ClimatologyWindow::ALL.to_vec(),
            per_capita_m3_yr: 1700.0,
            alpha: 0.10,
            gauge_radius_km: 100.0,
            aggregation: AggregationMode::Disjunctive,
            capacity_factor_default: 0.6,
            demand_mode: DemandMode::Absolute,
        }
    }
}

fn scenario_matches(field: &GriddedField, scenario: Scenario) -> bool {
    Scenario::parse(&field.provenance().scenario)
        .map(|s| s == scenario)
        .unwrap_or(false)
}

fn member_fields(
    fields: &[GriddedField],
    scenario: Scenario,
    variable: Variable,
) -> BTreeMap<MemberId, &GriddedField> {
    fields
        .iter()
        .filter(|f| f.variable() == variable && scenario_matches(f, scenario))
        .map(|f| {
            (
                MemberId {
                    model: f.provenance().model.clone(),
                    run: f.provenance().run.clone(),
                },
                f,
            )
        })
        .collect()
}

/// WAACI stage output.
#[derive(Debug)]
pub struct WaaciStage {
    /// Per-member records, tagged `member:<model>/<run>`, then the
    /// ensemble-statistic record per (county, window).
    pub records: Vec<WaaciRecord>,
    /// Window -> county -> statistic WAACI.
    pub by_window: BTreeMap<ClimatologyWindow, BTreeMap<String, f64>>,
    /// Changes of projected windows against the 2010s baseline, same tag set.
    pub changes: Vec<(String, ClimatologyWindow, String, f64)>,
    /// Year -> member -> county -> WAACI, for the risk-trend series.
    pub yearly: BTreeMap<i32, Vec<BTreeMap<String, f64>>>,
    pub members: Vec<MemberId>,
    pub counties_outside_grid: usize,
}

/// Number of full calendar years shared by every member's time axis.
fn common_years(fields: &[&GriddedField]) -> Vec<i32> {
    let mut years: Option<BTreeSet<i32>> = None;
    for f in fields {
        let times = f.times();
        let mut set = BTreeSet::new();
        let first = times[0];
        let last = times[times.len() - 1];
        for y in first.year()..=last.year() {
            let jan = MonthStamp::new(y, 1).expect("valid");
            let dec = MonthStamp::new(y, 12).expect("valid");
            if jan >= first && dec <= last {
                set.insert(y);
            }
        }
        years = Some(match years {
            None => set,
            Some(prev) => prev.intersection(&set).copied().collect(),
        });
    }
    years.unwrap_or_default().into_iter().collect()
}

/// Demand for a county in a window under the configured mode.
fn window_demand(
    county: &CountyRecord,
    window: ClimatologyWindow,
    config: &PipelineConfig,
) -> Result<f64> {
    let projected = county.project_to(window.target_year())?;
    match config.demand_mode {
        DemandMode::Absolute => municipal_demand(projected, config.per_capita_m3_yr),
        DemandMode::Delta => {
            // Change in demand since 2010; may be negative for shrinking
            // counties and is passed through as-is.
            Ok(projected * config.per_capita_m3_yr * 264.172e-6
                - county.pop2010 * config.per_capita_m3_yr * 264.172e-6)
        }
    }
}

fn yearly_demand(county: &CountyRecord, year: i32, config: &PipelineConfig) -> Result<f64> {
    let projected = county.project_to(year)?;
    match config.demand_mode {
        DemandMode::Absolute => municipal_demand(projected, config.per_capita_m3_yr),
        DemandMode::Delta => {
            Ok((projected - county.pop2010) * config.per_capita_m3_yr * 264.172e-6)
        }
    }
}

/// Compute per-county WAACI for every member, window, and the configured
/// ensemble statistic, plus the yearly member series behind the risk trend.
pub fn compute_waaci(data: &Dataset, config: &PipelineConfig) -> Result<WaaciStage> {
    let p_fields = member_fields(&data.fields, config.scenario, Variable::Precipitation);
    let e_fields = member_fields(&data.fields, config.scenario, Variable::Evapotranspiration);
    if p_fields.is_empty() {
        return Err(Error::Validation(format!(
            "no precipitation fields for scenario {}",
            config.scenario
        )));
    }
    let members: Vec<MemberId> = p_fields.keys().cloned().collect();
    for m in &members {
        if !e_fields.contains_key(m) {
            return Err(Error::Validation(format!(
                "member {m} has precipitation but no evapotranspiration"
            )));
        }
    }

    // Common grid: the first member's precipitation grid; every other member
    // regrids onto it.
    let common = p_fields[&members[0]].spec().clone();
    let supply_fields: Vec<GriddedField> = members
        .par_iter()
        .map(|m| {
            let p = p_fields[m].regrid_bilinear(&common)?;
            let e = e_fields[m].regrid_bilinear(&common)?;
            aquarisk_core::watersupply::freshwater(&p, &e)
        })
        .collect::<Result<_>>()?;

    let inside: Vec<&CountyRecord> = data
        .counties
        .iter()
        .filter(|c| common.contains(c.lat, c.lon))
        .collect();
    let counties_outside_grid = data.counties.len() - inside.len();

    let years = common_years(&supply_fields.iter().collect::<Vec<_>>());

    // Per county: sample every member once, then fold windows and years.
    struct CountyOut {
        fips: String,
        // (window, member index, supply volume)
        window_supply: Vec<(ClimatologyWindow, usize, f64)>,
        // (year, member index, waaci)
        yearly: Vec<(i32, usize, f64)>,
        demands: Vec<(ClimatologyWindow, f64)>,
    }

    let county_outputs: Vec<CountyOut> = inside
        .par_iter()
        .map(|county| -> Result<CountyOut> {
            let mut window_supply = Vec::new();
            let mut yearly = Vec::new();
            let mut demands = Vec::new();
            let mut yearly_demands = Vec::new();
            for window in &config.windows {
                demands.push((*window, window_demand(county, *window, config)?));
            }
            for year in &years {
                yearly_demands.push((*year, yearly_demand(county, *year, config)?));
            }
            for (mi, field) in supply_fields.iter().enumerate() {
                let series = field.sample_at_point(county.lat, county.lon)?;
                for window in &config.windows {
                    let depth = climatology(field.times(), &series, *window)?;
                    let supply = to_volume(depth, county.area_km2);
                    window_supply.push((*window, mi, supply));
                }
                for year in &years {
                    let depth = annual_total(field.times(), &series, *year)?;
                    let supply = to_volume(depth, county.area_km2);
                    let demand = yearly_demands
                        .iter()
                        .find(|(y, _)| y == year)
                        .expect("computed above")
                        .1;
                    yearly.push((*year, mi, supply - demand));
                }
            }
            Ok(CountyOut {
                fips: county.fips.clone(),
                window_supply,
                yearly,
                demands,
            })
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut by_window: BTreeMap<ClimatologyWindow, BTreeMap<String, f64>> = BTreeMap::new();
    let mut yearly: BTreeMap<i32, Vec<BTreeMap<String, f64>>> = years
        .iter()
        .map(|y| (*y, vec![BTreeMap::new(); members.len()]))
        .collect();

    for out in &county_outputs {
        for window in &config.windows {
            let demand = out
                .demands
                .iter()
                .find(|(w, _)| w == window)
                .expect("computed")
                .1;
            let mut member_supplies = vec![0.0; members.len()];
            for (w, mi, supply) in &out.window_supply {
                if w == window {
                    member_supplies[*mi] = *supply;
                }
            }
            for (mi, supply) in member_supplies.iter().enumerate() {
                records.push(WaaciRecord::new(
                    out.fips.clone(),
                    *window,
                    format!("member:{}", members[mi]),
                    *supply,
                    demand,
                ));
            }
            let stat_supply = config.statistic.apply(&member_supplies)?;
            let rec = WaaciRecord::new(
                out.fips.clone(),
                *window,
                config.statistic.to_string(),
                stat_supply,
                demand,
            );
            by_window
                .entry(*window)
                .or_default()
                .insert(out.fips.clone(), rec.waaci_mgal_yr);
            records.push(rec);
        }
        for (year, mi, waaci) in &out.yearly {
            yearly
                .get_mut(year)
                .expect("year key")
                .get_mut(*mi)
                .expect("member index")
                .insert(out.fips.clone(), *waaci);
        }
    }

    // Changes against the 2010s baseline, for every tag present.
    let mut changes = Vec::new();
    if config.windows.contains(&ClimatologyWindow::D2010s) {
        let mut baseline: BTreeMap<(String, String), WaaciRecord> = BTreeMap::new();
        for r in &records {
            if r.window == ClimatologyWindow::D2010s {
                baseline.insert((r.fips.clone(), r.tag.clone()), r.clone());
            }
        }
        for r in &records {
            if r.window == ClimatologyWindow::D2010s {
                continue;
            }
            if let Some(base) = baseline.get(&(r.fips.clone(), r.tag.clone())) {
                changes.push((
                    r.fips.clone(),
                    r.window,
                    r.tag.clone(),
                    aquarisk_core::watersupply::waaci_change(r, base)?,
                ));
            }
        }
    }

    records.sort_by(|a, b| {
        (a.window, a.fips.as_str(), a.tag.as_str()).cmp(&(
            b.window,
            b.fips.as_str(),
            b.tag.as_str(),
        ))
    });
    changes
        .sort_by(|a, b| (a.1, a.0.as_str(), a.2.as_str()).cmp(&(b.1, b.0.as_str(), b.2.as_str())));

    Ok(WaaciStage {
        records,
        by_window,
        changes,
        yearly,
        members,
        counties_outside_grid,
    })
}

/// One gauge's trend-test outcome.
#[derive(Debug)]
pub struct TrendRow {
    pub gauge_id: String,
    pub result: TrendResult,
}

/// Trend stage output.
#[derive(Debug)]
pub struct TrendStage {
    pub rows: Vec<TrendRow>,
    /// Gauges left out for having fewer than the minimum record years.
    pub skipped_short_record: usize,
}

/// Impute each gauge's record and run the corrected Mann-Kendall test.
pub fn compute_trends(data: &Dataset, config: &PipelineConfig) -> Result<TrendStage> {
    let eligible: Vec<_> = data
        .gauges
        .iter()
        .filter(|g| g.record_years() >= MIN_RECORD_YEARS)
        .collect();
    let skipped = data.gauges.len() - eligible.len();
    let rows: Vec<TrendRow> = eligible
        .par_iter()
        .map(|g| -> Result<TrendRow> {
            let filled = impute(&g.temps)?;
            let result = mk_trend(&filled, config.alpha)?;
            Ok(TrendRow {
                gauge_id: g.gauge_id.clone(),
                result,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TrendStage {
        rows,
        skipped_short_record: skipped,
    })
}

/// One gauge's fitted projection.
#[derive(Debug)]
pub struct GaugeProjection {
    pub gauge_id: String,
    pub fips: String,
    pub state: String,
    pub bias_c: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub validation_nse: f64,
    pub validation_r: f64,
    /// Window -> bias-corrected maximum monthly stream temperature.
    pub max_temp_c: BTreeMap<ClimatologyWindow, f64>,
    /// Window -> WTSI flag.
    pub wtsi: BTreeMap<ClimatologyWindow, u8>,
}

/// Projection stage output.
#[derive(Debug)]
pub struct ProjectionStage {
    pub projections: Vec<GaugeProjection>,
    pub skipped: Vec<(String, String)>,
    pub unknown_states: usize,
}

/// Regress each gauge's record on the ensemble-median air temperature at its
/// location, bias-correct, and project window maxima.
pub fn compute_projections(data: &Dataset, config: &PipelineConfig) -> Result<ProjectionStage> {
    let air_fields = member_fields(&data.fields, config.scenario, Variable::AirTemperature);
    if air_fields.is_empty() {
        return Err(Error::Validation(format!(
            "no air-temperature fields for scenario {}",
            config.scenario
        )));
    }
    let fields: Vec<&GriddedField> = air_fields.values().copied().collect();

    let spec = PredictorSpec::model4();
    let results: Vec<std::result::Result<GaugeProjection, (String, String)>> = data
        .gauges
        .par_iter()
        .map(|gauge| {
            let skip = |why: String| Err((gauge.gauge_id.clone(), why));
            // Ensemble-median air temperature at the gauge, month by month.
            let mut per_month: BTreeMap<MonthStamp, Vec<f64>> = BTreeMap::new();
            for field in &fields {
                let series = match field.sample_at_point(gauge.lat, gauge.lon) {
                    Ok(s) => s,
                    Err(e) => return skip(format!("air sampling failed: {e}")),
                };
                for (t, v) in field.times().iter().zip(series) {
                    per_month.entry(*t).or_default().push(v);
                }
            }
            let n_members = fields.len();
            let mut air = BTreeMap::new();
            for (stamp, values) in per_month {
                if values.len() == n_members {
                    let median = mme_median(&values).expect("non-empty");
                    air.insert(stamp, median);
                }
            }
            let inputs = PredictorInputs {
                air,
                ..Default::default()
            };

            let filled = match impute(&gauge.temps) {
                Ok(f) => f,
                Err(e) => return skip(format!("imputation failed: {e}")),
            };
            let split = match validation_split(&gauge.times) {
                Ok(s) => s,
                Err(e) => return skip(format!("no train/validation coverage: {e}")),
            };
            let train_target: Vec<(MonthStamp, f64)> = split
                .train
                .iter()
                .map(|&i| (gauge.times[i], filled[i]))
                .collect();
            let test_target: Vec<(MonthStamp, f64)> = split
                .test
                .iter()
                .map(|&i| (gauge.times[i], filled[i]))
                .collect();

            let train = match build_design(&inputs, &train_target, &spec) {
                Ok(d) => d,
                Err(e) => return skip(format!("training design failed: {e}")),
            };
            if train.x.len() < 10 {
                return skip(format!(
                    "only {} complete training rows; need 10 to tune",
                    train.x.len()
                ));
            }
            let (sigma, gamma) = match tune_hyperparams(&train.x, &train.y) {
                Ok(t) => t,
                Err(e) => return skip(format!("tuning failed: {e}")),
            };
            let model = match lssvm_fit(&train.x, &train.y, sigma, gamma) {
                Ok(m) => m,
                Err(e) => return skip(format!("fit failed: {e}")),
            };

            let test = match build_design(&inputs, &test_target, &spec) {
                Ok(d) => d,
                Err(e) => return skip(format!("validation design failed: {e}")),
            };
            let predicted = match lssvm_predict(&model, &test.x) {
                Ok(p) => p,
                Err(e) => return skip(format!("validation prediction failed: {e}")),
            };
            let bias = match validation_bias(&test.y, &predicted) {
                Ok(b) => b,
                Err(e) => return skip(format!("bias computation failed: {e}")),
            };
            let validation_nse = nse(&test.y, &predicted).unwrap_or(f64::NEG_INFINITY);
            let validation_r = pearson_r(&test.y, &predicted).unwrap_or(0.0);

            let mut max_temp_c = BTreeMap::new();
            let mut wtsi = BTreeMap::new();
            for window in &config.windows {
                let months = window.months();
                let (x, times, dropped) = match build_features(&inputs, &months, &spec) {
                    Ok(f) => f,
                    Err(e) => return skip(format!("projection features failed: {e}")),
                };
                if dropped > 0 {
                    return skip(format!(
                        "air temperature does not cover window {window} ({dropped} months missing)"
                    ));
                }
                let raw = match lssvm_predict(&model, &x) {
                    Ok(p) => p,
                    Err(e) => return skip(format!("projection prediction failed: {e}")),
                };
                let corrected = bias_correct(&raw, bias);
                let max = match max_monthly(&times, &corrected, *window) {
                    Ok(m) => m,
                    Err(e) => return skip(format!("window maximum failed: {e}")),
                };
                max_temp_c.insert(*window, max);
                wtsi.insert(*window, data.thresholds.wtsi(max, &gauge.state));
            }

            Ok(GaugeProjection {
                gauge_id: gauge.gauge_id.clone(),
                fips: gauge.fips.clone(),
                state: gauge.state.clone(),
                bias_c: bias,
                sigma,
                gamma,
                validation_nse,
                validation_r,
                max_temp_c,
                wtsi,
            })
        })
        .collect();

    let mut projections = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(p) => projections.push(p),
            Err(s) => skipped.push(s),
        }
    }
    let unknown_states = data
        .gauges
        .iter()
        .filter(|g| !data.thresholds.lookup(&g.state).1)
        .count();
    Ok(ProjectionStage {
        projections,
        skipped,
        unknown_states,
    })
}

/// A plant's nearest-gauge link.
#[derive(Debug)]
pub struct PlantLink {
    pub plant_id: String,
    pub gauge_id: Option<String>,
    pub distance_km: Option<f64>,
}

/// Risk stage output.
#[derive(Debug)]
pub struct RiskStage {
    pub reports: Vec<RiskReport>,
    pub links: Vec<PlantLink>,
    pub trend: Vec<YearRisk>,
}

/// Join WAACI and projections into per-window reports, plant links, and the
/// yearly risk-trend series.
pub fn compute_risk(
    data: &Dataset,
    config: &PipelineConfig,
    waaci: &WaaciStage,
    projections: &ProjectionStage,
) -> Result<RiskStage> {
    // Wet-cooled generation per county.
    let mut wet_capacity: BTreeMap<String, f64> = BTreeMap::new();
    for p in &data.plants {
        if p.cooling.is_wet() {
            *wet_capacity.entry(p.fips.clone()).or_default() +=
                p.generation_quads(config.capacity_factor_default)?;
        }
    }

    let mut reports = Vec::new();
    for window in &config.windows {
        let waaci_by_county = waaci.by_window.get(window).ok_or_else(|| {
            Error::Validation(format!("window {window} missing from WAACI stage"))
        })?;

        let mut gauge_flags: BTreeMap<String, Vec<u8>> = BTreeMap::new();
        let mut exceed_inputs = Vec::new();
        for p in &projections.projections {
            if let Some(flag) = p.wtsi.get(window) {
                gauge_flags.entry(p.fips.clone()).or_default().push(*flag);
                exceed_inputs.push(GaugeWindowFlag {
                    gauge_id: p.gauge_id.clone(),
                    fips: p.fips.clone(),
                    state: p.state.clone(),
                    wtsi: *flag,
                });
            }
        }

        let mut rows = Vec::new();
        let mut flags_by_county: BTreeMap<String, CountyClassification> = BTreeMap::new();
        let mut counties_without_gauges = 0;
        for county in &data.counties {
            let Some(w) = waaci_by_county.get(&county.fips) else {
                continue; // outside the grid hull
            };
            let empty = Vec::new();
            let flags = gauge_flags.get(&county.fips).unwrap_or(&empty);
            let class = classify_county(*w, flags);
            if !class.has_gauges {
                counties_without_gauges += 1;
            }
            flags_by_county.insert(county.fips.clone(), class);
            let wet = wet_capacity.get(&county.fips).copied().unwrap_or(0.0);
            rows.push(RiskReportRow {
                fips: county.fips.clone(),
                state: county.state.clone(),
                waaci_mgal_yr: *w,
                water_scarce: class.water_scarce,
                temp_stressed: class.temp_stressed,
                has_gauges: class.has_gauges,
                wet_capacity_quads: wet,
                capacity_at_risk_quads: if config.aggregation.matches(&class) {
                    wet
                } else {
                    0.0
                },
            });
        }

        // Order-independence check: aggregating row contributions must equal
        // the direct county-flag aggregation.
        let direct = capacity_at_risk(
            &flags_by_county,
            &data.plants,
            config.aggregation,
            config.capacity_factor_default,
        )?;
        let from_rows: f64 = rows.iter().map(|r| r.capacity_at_risk_quads).sum();
        if (direct - from_rows).abs() > 1e-9 * direct.abs().max(1.0) {
            return Err(Error::Validation(format!(
                "inconsistent at-risk totals: {direct} direct vs {from_rows} from rows"
            )));
        }

        reports.push(RiskReport::assemble(
            *window,
            config.scenario.to_string(),
            config.statistic,
            config.aggregation,
            rows,
            exceedance_list(&exceed_inputs),
            ReportWarnings {
                counties_outside_grid: waaci.counties_outside_grid,
                unknown_states: projections.unknown_states,
                counties_without_gauges,
            },
            config.capacity_factor_default,
        )?);
    }

    let links: Vec<PlantLink> = data
        .plants
        .iter()
        .map(|p| {
            let hit = nearest_gauge(p.lat, p.lon, &data.gauges, config.gauge_radius_km);
            PlantLink {
                plant_id: p.plant_id.clone(),
                gauge_id: hit.as_ref().map(|h| h.gauge_id.to_string()),
                distance_km: hit.map(|h| h.distance_km),
            }
        })
        .collect();

    let trend = risk_trend(&waaci.yearly, &data.plants, config.capacity_factor_default)?;

    Ok(RiskStage {
        reports,
        links,
        trend,
    })
}

/// Everything `run` produces before artifact emission.
#[derive(Debug)]
pub struct PipelineOutput {
    pub waaci: WaaciStage,
    pub trends: TrendStage,
    pub projections: ProjectionStage,
    pub risk: RiskStage,
    /// (year, reference, percent difference) national projection checks.
    pub national_checks: Vec<(i32, f64, f64)>,
}

/// The full pipeline: WAACI, trends, projections, risk.
pub fn run_pipeline(data: &Dataset, config: &PipelineConfig) -> Result<PipelineOutput> {
    let waaci = compute_waaci(data, config)?;
    let trends = compute_trends(data, config)?;
    let projections = compute_projections(data, config)?;
    let risk = compute_risk(data, config, &waaci, &projections)?;

    let mut national_checks = Vec::new();
    for (year, reference) in &data.national {
        let projections: Result<Vec<f64>> =
            data.counties.iter().map(|c| c.project_to(*year)).collect();
        let pct = aquarisk_core::demography::national_check(&projections?, *reference)?;
        national_checks.push((*year, *reference, pct));
    }

    Ok(PipelineOutput {
        waaci,
        trends,
        projections,
        risk,
        national_checks,
    })
}
