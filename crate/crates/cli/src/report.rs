//! Artifact emission: CSV, GeoJSON, SVG, and the run summary.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use aquarisk_core::demography::CountyRecord;
use aquarisk_core::risk::{RiskReport, YearRisk};

use crate::pipeline::{PipelineConfig, PipelineOutput};

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

pub fn write_waaci_csv(out: &Path, output: &PipelineOutput) -> Result<()> {
    let mut s = String::from(
        "fips,window,scenario,statistic,supply_mgal_yr,demand_mgal_yr,waaci_mgal_yr,stressed\n",
    );
    let scenario = &output.risk.reports.first().map(|r| r.scenario.clone());
    let scenario = scenario.as_deref().unwrap_or("rcp85");
    for r in &output.waaci.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.fips,
            r.window,
            scenario,
            r.tag,
            r.supply_mgal_yr,
            r.demand_mgal_yr,
            r.waaci_mgal_yr,
            r.stressed()
        );
    }
    write_file(&out.join("waaci.csv"), &s)
}

pub fn write_waaci_change_csv(out: &Path, output: &PipelineOutput, scenario: &str) -> Result<()> {
    let mut s = String::from("fips,window,scenario,statistic,change_mgal_yr\n");
    for (fips, window, tag, change) in &output.waaci.changes {
        let _ = writeln!(s, "{fips},{window},{scenario},{tag},{change}");
    }
    write_file(&out.join("waaci_change.csv"), &s)
}

pub fn write_trend_csv(out: &Path, output: &PipelineOutput) -> Result<()> {
    let mut s = String::from("gauge_id,S,Z,p,direction,significant\n");
    for row in &output.trends.rows {
        let r = &row.result;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            row.gauge_id, r.s, r.z, r.p_value, r.direction, r.significant
        );
    }
    write_file(&out.join("trend.csv"), &s)
}

pub fn write_projection_csv(out: &Path, output: &PipelineOutput) -> Result<()> {
    let mut s = String::from("gauge_id,window,max_temp_c,bias_c\n");
    for p in &output.projections.projections {
        for (window, max) in &p.max_temp_c {
            let _ = writeln!(s, "{},{},{},{}", p.gauge_id, window, max, p.bias_c);
        }
    }
    write_file(&out.join("projection.csv"), &s)
}

pub fn write_plant_links_csv(out: &Path, output: &PipelineOutput) -> Result<()> {
    let mut s = String::from("plant_id,gauge_id,distance_km\n");
    for link in &output.risk.links {
        let _ = writeln!(
            s,
            "{},{},{}",
            link.plant_id,
            link.gauge_id.as_deref().unwrap_or(""),
            link.distance_km.map(|d| d.to_string()).unwrap_or_default()
        );
    }
    write_file(&out.join("plant_links.csv"), &s)
}

pub fn write_risk_csv(out: &Path, report: &RiskReport) -> Result<()> {
    let mut s = String::from(
        "fips,state,waaci_mgal_yr,water_scarce,temp_stressed,has_gauges,wet_capacity_quads,capacity_at_risk_quads\n",
    );
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.fips,
            r.state,
            r.waaci_mgal_yr,
            r.water_scarce,
            r.temp_stressed,
            r.has_gauges,
            r.wet_capacity_quads,
            r.capacity_at_risk_quads
        );
    }
    write_file(&out.join(format!("risk_{}.csv", report.window)), &s)
}

/// Point features at county centroids with the report row as properties.
pub fn write_risk_geojson(
    out: &Path,
    report: &RiskReport,
    counties: &[CountyRecord],
) -> Result<()> {
    let mut features = Vec::new();
    for row in &report.rows {
        let Some(county) = counties.iter().find(|c| c.fips == row.fips) else {
            continue;
        };
        features.push(serde_json::json!({
            "type": "Feature",
            "geometry": {
                "type": "Point",
                "coordinates": [county.lon, county.lat],
            },
            "properties": {
                "fips": row.fips,
                "state": row.state,
                "window": report.window.label(),
                "waaci_mgal_yr": row.waaci_mgal_yr,
                "water_scarce": row.water_scarce,
                "temp_stressed": row.temp_stressed,
                "capacity_at_risk_quads": row.capacity_at_risk_quads,
            },
        }));
    }
    let collection = serde_json::json!({
        "type": "FeatureCollection",
        "features": features,
    });
    write_file(
        &out.join(format!("risk_{}.geojson", report.window)),
        &(serde_json::to_string_pretty(&collection)? + "\n"),
    )
}

pub fn write_risk_trend_csv(out: &Path, trend: &[YearRisk]) -> Result<()> {
    let mut s = String::from("year,mean_quads,sigma_quads,members\n");
    for y in trend {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            y.year, y.mean_quads, y.sigma_quads, y.members
        );
    }
    write_file(&out.join("risk_trend.csv"), &s)
}

/// Self-contained SVG line chart of the yearly at-risk capacity with a
/// +/- one-standard-deviation band.
pub fn write_risk_trend_svg(out: &Path, trend: &[YearRisk]) -> Result<()> {
    const W: f64 = 800.0;
    const H: f64 = 420.0;
    const ML: f64 = 70.0; // margins
    const MR: f64 = 20.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(s, "  <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "  <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">Wet-cooled capacity at risk (quad/year)</text>",
        W / 2.0
    );

    if trend.is_empty() {
        let _ = writeln!(
            s,
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">no data</text>",
            W / 2.0,
            H / 2.0
        );
        let _ = writeln!(s, "</svg>");
        return write_file(&out.join("risk_trend.svg"), &s);
    }

    let x0 = trend.first().expect("non-empty").year as f64;
    let x1 = trend.last().expect("non-empty").year as f64;
    let y_hi = trend
        .iter()
        .map(|t| t.mean_quads + t.sigma_quads)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(1e-6);
    let sx = |year: f64| ML + (year - x0) / (x1 - x0).max(1.0) * (W - ML - MR);
    let sy = |v: f64| H - MB - (v / y_hi) * (H - MT - MB);

    // Dispersion band.
    let mut band = String::new();
    for t in trend {
        let _ = write!(
            band,
            "{:.2},{:.2} ",
            sx(t.year as f64),
            sy(t.mean_quads + t.sigma_quads)
        );
    }
    for t in trend.iter().rev() {
        let _ = write!(
            band,
            "{:.2},{:.2} ",
            sx(t.year as f64),
            sy((t.mean_quads - t.sigma_quads).max(0.0))
        );
    }
    let _ = writeln!(
        s,
        "  <polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\"/>",
        band.trim_end()
    );

    // Mean line.
    let mut line = String::new();
    for t in trend {
        let _ = write!(line, "{:.2},{:.2} ", sx(t.year as f64), sy(t.mean_quads));
    }
    let _ = writeln!(
        s,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\"/>",
        line.trim_end()
    );

    // Axes.
    let _ = writeln!(
        s,
        "  <line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );
    let _ = writeln!(
        s,
        "  <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB
    );
    let mut year = (x0 / 5.0).ceil() * 5.0;
    while year <= x1 {
        let _ = writeln!(
            s,
            "  <line x1=\"{0:.2}\" y1=\"{1}\" x2=\"{0:.2}\" y2=\"{2}\" stroke=\"black\"/>",
            sx(year),
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            s,
            "  <text x=\"{:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            sx(year),
            H - MB + 20.0,
            year as i32
        );
        year += 5.0;
    }
    for k in 0..=4 {
        let v = y_hi * k as f64 / 4.0;
        let _ = writeln!(
            s,
            "  <line x1=\"{}\" y1=\"{1:.2}\" x2=\"{ML}\" y2=\"{1:.2}\" stroke=\"black\"/>",
            ML - 5.0,
            sy(v)
        );
        let _ = writeln!(
            s,
            "  <text x=\"{}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.4}</text>",
            ML - 8.0,
            sy(v) + 4.0,
            v
        );
    }
    let _ = writeln!(s, "</svg>");
    write_file(&out.join("risk_trend.svg"), &s)
}

/// Totals, warnings, and configuration echo. Excludes anything that varies
/// with thread count or wall-clock time.
pub fn write_summary(out: &Path, output: &PipelineOutput, config: &PipelineConfig) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "run summary");
    let _ = writeln!(s, "===========");
    let _ = writeln!(s, "scenario: {}", config.scenario);
    let _ = writeln!(s, "statistic: {}", config.statistic);
    let _ = writeln!(s, "aggregation: {}", config.aggregation);
    let _ = writeln!(s, "demand mode: {}", config.demand_mode);
    let _ = writeln!(s, "per-capita use (m3/yr): {}", config.per_capita_m3_yr);
    let _ = writeln!(s, "trend alpha: {}", config.alpha);
    let _ = writeln!(s, "gauge radius (km): {}", config.gauge_radius_km);
    let _ = writeln!(
        s,
        "capacity factor default (plants without generation data): {}",
        config.capacity_factor_default
    );
    let _ = writeln!(s, "ensemble members: {}", output.waaci.members.len());
    for m in &output.waaci.members {
        let _ = writeln!(s, "  member {m}");
    }
    let _ = writeln!(s);
    for report in &output.risk.reports {
        let _ = writeln!(s, "window {}", report.window);
        let _ = writeln!(s, "  scarce counties: {}", report.scarce_county_count);
        let _ = writeln!(
            s,
            "  at risk (conjunctive: scarce AND hot): {} quad/yr",
            report.total_quads_at_risk_conjunctive
        );
        let _ = writeln!(
            s,
            "  at risk (disjunctive: scarce OR hot): {} quad/yr",
            report.total_quads_at_risk_disjunctive
        );
        if report.exceed_counties.is_empty() {
            let _ = writeln!(s, "  counties exceeding stream-temperature limits: none");
        } else {
            let _ = writeln!(s, "  counties exceeding stream-temperature limits:");
            for (state, fips) in &report.exceed_counties {
                let _ = writeln!(s, "    {state} {fips}");
            }
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "warnings");
    if let Some(r) = output.risk.reports.first() {
        let _ = writeln!(
            s,
            "  counties outside grid hull: {}",
            r.warnings.counties_outside_grid
        );
        let _ = writeln!(
            s,
            "  counties without projected gauges: {}",
            r.warnings.counties_without_gauges
        );
        let _ = writeln!(
            s,
            "  gauges in states outside the threshold table: {}",
            r.warnings.unknown_states
        );
    }
    let _ = writeln!(
        s,
        "  gauges skipped for short records (trend stage): {}",
        output.trends.skipped_short_record
    );
    if !output.projections.projections.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(s, "regression fits (validation window)");
        for p in &output.projections.projections {
            let _ = writeln!(
                s,
                "  {}: sigma {} gamma {} NSE {:.3} r {:.3} bias {:.3} degC",
                p.gauge_id, p.sigma, p.gamma, p.validation_nse, p.validation_r, p.bias_c
            );
        }
    }
    if !output.projections.skipped.is_empty() {
        let _ = writeln!(s, "  gauges skipped in projection stage:");
        for (gauge, why) in &output.projections.skipped {
            let _ = writeln!(s, "    {gauge}: {why}");
        }
    }
    if !output.national_checks.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(s, "national projection check");
        for (year, reference, pct) in &output.national_checks {
            let _ = writeln!(
                s,
                "  {year}: counties vs reference {reference:.0}: {pct:.2}% difference"
            );
        }
    }
    write_file(&out.join("summary.txt"), &s)
}

/// Emit every artifact of a full run.
pub fn write_all(
    out: &Path,
    output: &PipelineOutput,
    config: &PipelineConfig,
    counties: &[CountyRecord],
) -> Result<()> {
    fs::create_dir_all(out)?;
    write_waaci_csv(out, output)?;
    write_waaci_change_csv(out, output, &config.scenario.to_string())?;
    write_trend_csv(out, output)?;
    write_projection_csv(out, output)?;
    write_plant_links_csv(out, output)?;
    for report in &output.risk.reports {
        write_risk_csv(out, report)?;
        write_risk_geojson(out, report, counties)?;
    }
    write_risk_trend_csv(out, &output.risk.trend)?;
    write_risk_trend_svg(out, &output.risk.trend)?;
    write_summary(out, output, config)?;
    Ok(())
}
