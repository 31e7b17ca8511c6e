//! Stream-temperature analytics: gap imputation, trend tests, LS-SVM
//! regression on lagged air temperature, validation metrics, bias correction,
//! and projected window maxima.

mod design;
mod impute;
mod lssvm;
mod metrics;
mod trend;

pub use design::{
    build_design, build_features, Design, PredictorInputs, PredictorSpec, PredictorTerm,
    PredictorVar,
};
pub use impute::impute;
pub use lssvm::{kernel_matrix, lssvm_fit, lssvm_predict, tune_hyperparams, LssvmModel};
pub use metrics::{nse, pearson_r, standardize, Standardized};
pub use trend::{acf, mk_trend, Acf, Direction, TrendResult};

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::time::MonthStamp;
use crate::watersupply::ClimatologyWindow;

/// Valid stream temperature range after ingestion, in degC.
pub const TEMP_MIN_C: f64 = -5.0;
pub const TEMP_MAX_C: f64 = 50.0;

/// Minimum distinct years of record required for trend analysis.
pub const MIN_RECORD_YEARS: usize = 7;

/// Training years for the regression fit.
pub const TRAIN_YEARS: std::ops::RangeInclusive<i32> = 1998..=2007;
/// Held-out validation years.
pub const TEST_YEARS: std::ops::RangeInclusive<i32> = 2008..=2012;

/// A stream gauge's monthly temperature record, gaps included.
#[derive(Debug, Clone)]
pub struct GaugeSeries {
    pub gauge_id: String,
    pub lat: f64,
    pub lon: f64,
    pub fips: String,
    pub state: String,
    /// Contiguous monthly axis from the first to the last observed month.
    pub times: Vec<MonthStamp>,
    /// One entry per month, `None` where the record has a gap.
    pub temps: Vec<Option<f64>>,
}

impl GaugeSeries {
    /// Distinct calendar years holding at least one observation.
    pub fn record_years(&self) -> usize {
        let mut years: Vec<i32> = self
            .times
            .iter()
            .zip(&self.temps)
            .filter(|(_, t)| t.is_some())
            .map(|(s, _)| s.year())
            .collect();
        years.sort_unstable();
        years.dedup();
        years.len()
    }

    pub fn known_count(&self) -> usize {
        self.temps.iter().filter(|t| t.is_some()).count()
    }
}

#[derive(Debug, Deserialize)]
struct GaugeRow {
    gauge_id: String,
    lat: f64,
    lon: f64,
    fips: String,
    state: String,
    year: i32,
    month: u8,
    temp_c: Option<f64>,
}

/// Read the gauge table (`gauge_id,lat,lon,fips,state,year,month,temp_c`;
/// empty temperature marks a gap). Months absent from the file inside a
/// gauge's span also become gaps.
pub fn read_gauges_csv<P: AsRef<Path>>(path: P) -> Result<Vec<GaugeSeries>> {
    let mut rdr = csv::Reader::from_path(path.as_ref())?;
    struct Partial {
        lat: f64,
        lon: f64,
        fips: String,
        state: String,
        obs: BTreeMap<i64, f64>,
        span: (i64, i64),
    }
    let mut gauges: BTreeMap<String, Partial> = BTreeMap::new();
    for (line, rec) in rdr.deserialize::<GaugeRow>().enumerate() {
        let row = rec.map_err(|e| {
            Error::Validation(format!(
                "{}: data row {}: {e}",
                path.as_ref().display(),
                line + 1
            ))
        })?;
        let stamp = MonthStamp::new(row.year, row.month)?;
        if let Some(t) = row.temp_c {
            if !(TEMP_MIN_C..=TEMP_MAX_C).contains(&t) {
                return Err(Error::Validation(format!(
                    "gauge {} at {stamp}: temperature {t} outside [{TEMP_MIN_C}, {TEMP_MAX_C}] degC",
                    row.gauge_id
                )));
            }
        }
        let idx = stamp.index();
        let entry = gauges
            .entry(row.gauge_id.clone())
            .or_insert_with(|| Partial {
                lat: row.lat,
                lon: row.lon,
                fips: row.fips.clone(),
                state: row.state.clone(),
                obs: BTreeMap::new(),
                span: (idx, idx),
            });
        entry.span.0 = entry.span.0.min(idx);
        entry.span.1 = entry.span.1.max(idx);
        if let Some(t) = row.temp_c {
            if entry.obs.insert(idx, t).is_some() {
                return Err(Error::Validation(format!(
                    "gauge {}: duplicate observation at {stamp}",
                    row.gauge_id
                )));
            }
        }
    }
    Ok(gauges
        .into_iter()
        .map(|(gauge_id, p)| {
            let times: Vec<MonthStamp> =
                (p.span.0..=p.span.1).map(MonthStamp::from_index).collect();
            let temps = (p.span.0..=p.span.1)
                .map(|i| p.obs.get(&i).copied())
                .collect();
            GaugeSeries {
                gauge_id,
                lat: p.lat,
                lon: p.lon,
                fips: p.fips,
                state: p.state,
                times,
                temps,
            }
        })
        .collect())
}

/// Row indices split by calendar year into the training window (1998-2007)
/// and validation window (2008-2012); rows outside both are left out.
#[derive(Debug, Clone)]
pub struct ValidationSplit {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn validation_split(times: &[MonthStamp]) -> Result<ValidationSplit> {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, t) in times.iter().enumerate() {
        if TRAIN_YEARS.contains(&t.year()) {
            train.push(i);
        } else if TEST_YEARS.contains(&t.year()) {
            test.push(i);
        }
    }
    if train.is_empty() || test.is_empty() {
        return Err(Error::DomainCoverage(format!(
            "validation split needs rows in both {:?} and {:?}",
            TRAIN_YEARS, TEST_YEARS
        )));
    }
    Ok(ValidationSplit { train, test })
}

/// Mean prediction error (predicted - observed) over validation months.
pub fn validation_bias(observed: &[f64], predicted: &[f64]) -> Result<f64> {
    if observed.len() != predicted.len() || observed.is_empty() {
        return Err(Error::Shape(format!(
            "bias needs equal non-empty series, got {} and {}",
            observed.len(),
            predicted.len()
        )));
    }
    let n = observed.len() as f64;
    Ok(predicted
        .iter()
        .zip(observed)
        .map(|(p, o)| p - o)
        .sum::<f64>()
        / n)
}

/// Subtract a constant validation bias from every projected month.
pub fn bias_correct(projection: &[f64], bias: f64) -> Vec<f64> {
    projection.iter().map(|v| v - bias).collect()
}

/// Maximum of the projected monthly series over a window's 60 months.
pub fn max_monthly(times: &[MonthStamp], values: &[f64], window: ClimatologyWindow) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::Shape("times and values differ in length".into()));
    }
    let mut max = f64::NEG_INFINITY;
    for stamp in window.months() {
        match times.binary_search(&stamp) {
            Ok(idx) => max = max.max(values[idx]),
            Err(_) => {
                return Err(Error::DomainCoverage(format!(
                    "window {window} missing month {stamp}"
                )))
            }
        }
    }
    Ok(max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn stamp(y: i32, m: u8) -> MonthStamp {
        MonthStamp::new(y, m).unwrap()
    }

    #[test]
    fn split_boundaries() {
        let times = vec![stamp(2007, 12), stamp(2008, 1), stamp(2008, 2)];
        let split = validation_split(&times).unwrap();
        assert_eq!(split.train, vec![0]);
        assert_eq!(split.test, vec![1, 2]);
    }

    #[test]
    fn split_counts_add_up() {
        let mut times = Vec::new();
        for y in 1998..=2012 {
            for m in 1..=12 {
                times.push(stamp(y, m));
            }
        }
        let split = validation_split(&times).unwrap();
        assert_eq!(split.train.len() + split.test.len(), times.len());
        assert_eq!(split.train.len(), 120);
        assert_eq!(split.test.len(), 60);
    }

    #[test]
    fn split_requires_both_windows() {
        let times: Vec<MonthStamp> = (1..=12).map(|m| stamp(2005, m)).collect();
        assert!(matches!(
            validation_split(&times),
            Err(Error::DomainCoverage(_))
        ));
    }

    #[test]
    fn bias_zero_leaves_series_unchanged() {
        let s = vec![20.0, 21.5, 19.0];
        assert_eq!(bias_correct(&s, 0.0), s);
    }

    #[test]
    fn bias_extremes_shift_correctly() {
        // A +9.5 degC warm bias pulls a 35.0 degC projection to 25.5; a
        // -1.9 degC bias raises projections by 1.9.
        assert_abs_diff_eq!(bias_correct(&[35.0], 9.5)[0], 25.5);
        assert_abs_diff_eq!(bias_correct(&[20.0], -1.9)[0], 21.9);
    }

    #[test]
    fn bias_is_mean_of_differences() {
        let obs = vec![10.0, 12.0, 14.0];
        let pred = vec![11.0, 13.0, 18.0];
        assert_abs_diff_eq!(validation_bias(&obs, &pred).unwrap(), 2.0);
    }

    #[test]
    fn max_monthly_constant_and_spike() {
        let window = ClimatologyWindow::D2030s;
        let times = window.months();
        let constant = vec![21.0; 60];
        assert_eq!(max_monthly(&times, &constant, window).unwrap(), 21.0);
        let mut spike = vec![15.0; 60];
        spike[37] = 33.3;
        assert_eq!(max_monthly(&times, &spike, window).unwrap(), 33.3);
    }

    #[test]
    fn max_monthly_matches_scan_oracle() {
        let window = ClimatologyWindow::D2040s;
        let times = window.months();
        let values: Vec<f64> = (0..60).map(|i| ((i * 37 + 11) % 50) as f64 / 3.0).collect();
        let oracle = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(max_monthly(&times, &values, window).unwrap(), oracle);
    }

    #[test]
    fn max_monthly_missing_month_errors() {
        let window = ClimatologyWindow::D2030s;
        let mut times = window.months();
        times.pop();
        let values = vec![20.0; times.len()];
        assert!(matches!(
            max_monthly(&times, &values, window),
            Err(Error::DomainCoverage(_))
        ));
    }

    #[test]
    fn gauge_csv_fills_absent_months_as_gaps() {
        let dir = std::env::temp_dir().join("aquarisk_gauge_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("gauges.csv");
        std::fs::write(
            &path,
            "gauge_id,lat,lon,fips,state,year,month,temp_c\n\
             g01,33.0,-95.0,48001,Texas,2001,1,10.0\n\
             g01,33.0,-95.0,48001,Texas,2001,2,\n\
             g01,33.0,-95.0,48001,Texas,2001,4,16.0\n",
        )
        .unwrap();
        let gauges = read_gauges_csv(&path).unwrap();
        assert_eq!(gauges.len(), 1);
        let g = &gauges[0];
        assert_eq!(g.times.len(), 4);
        assert_eq!(g.temps, vec![Some(10.0), None, None, Some(16.0)]);
        assert_eq!(g.record_years(), 1);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn gauge_csv_rejects_out_of_range_temperature() {
        let dir = std::env::temp_dir().join("aquarisk_gauge_test2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("gauges.csv");
        std::fs::write(
            &path,
            "gauge_id,lat,lon,fips,state,year,month,temp_c\n\
             g01,33.0,-95.0,48001,Texas,2001,1,99.0\n",
        )
        .unwrap();
        assert!(read_gauges_csv(&path).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn record_years_counts_distinct_years_with_data() {
        let times: Vec<MonthStamp> = (0..36)
            .map(|i| MonthStamp::from_index(stamp(2000, 1).index() + i))
            .collect();
        let mut temps: Vec<Option<f64>> = vec![None; 36];
        temps[0] = Some(10.0); // 2000
        temps[13] = Some(11.0); // 2001
        temps[14] = Some(12.0); // 2001 again
        let g = GaugeSeries {
            gauge_id: "g".into(),
            lat: 0.0,
            lon: 0.0,
            fips: "00000".into(),
            state: "Texas".into(),
            times,
            temps,
        };
        assert_eq!(g.record_years(), 2);
        assert_eq!(g.known_count(), 3);
    }
}
