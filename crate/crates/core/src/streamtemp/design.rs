//! Predictor sets and design-matrix assembly for the regression models.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::time::MonthStamp;

/// A climate variable usable as a regression predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictorVar {
    /// Downscaled mean air temperature.
    AirTemp,
    /// Surface downwelling clear-sky longwave radiation.
    LongwaveClearSky,
    /// Surface downwelling clear-sky shortwave radiation.
    ShortwaveClearSky,
}

/// One predictor term: a variable at a monthly lag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictorTerm {
    pub var: PredictorVar,
    pub lag: u8,
}

/// The predictor set and forecast lead of a regression model.
///
/// The four stock sets:
/// 1. air(t, t-1, t-2) + longwave(t, t-1) + shortwave(t, t-1)
/// 2. air(t) + longwave(t) + shortwave(t)
/// 3. air(t, t-1) + longwave(t)
/// 4. air(t, t-1, t-2) — the production default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictorSpec {
    pub terms: Vec<PredictorTerm>,
    /// Forecast lead in months: the row for target month m reads predictors
    /// at m - lead - lag.
    pub lead: u32,
}

impl PredictorSpec {
    pub fn new(terms: Vec<PredictorTerm>, lead: u32) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Validation("predictor set must be non-empty".into()));
        }
        if terms.iter().any(|t| t.lag > 2) {
            return Err(Error::Validation(
                "predictor lags must be in {0, 1, 2}".into(),
            ));
        }
        Ok(Self { terms, lead })
    }

    pub fn model1() -> Self {
        let mut terms = Vec::new();
        for lag in 0..=2 {
            terms.push(PredictorTerm {
                var: PredictorVar::AirTemp,
                lag,
            });
        }
        for lag in 0..=1 {
            terms.push(PredictorTerm {
                var: PredictorVar::LongwaveClearSky,
                lag,
            });
        }
        for lag in 0..=1 {
            terms.push(PredictorTerm {
                var: PredictorVar::ShortwaveClearSky,
                lag,
            });
        }
        Self { terms, lead: 0 }
    }

    pub fn model2() -> Self {
        Self {
            terms: vec![
                PredictorTerm {
                    var: PredictorVar::AirTemp,
                    lag: 0,
                },
                PredictorTerm {
                    var: PredictorVar::LongwaveClearSky,
                    lag: 0,
                },
                PredictorTerm {
                    var: PredictorVar::ShortwaveClearSky,
                    lag: 0,
                },
            ],
            lead: 0,
        }
    }

    pub fn model3() -> Self {
        Self {
            terms: vec![
                PredictorTerm {
                    var: PredictorVar::AirTemp,
                    lag: 0,
                },
                PredictorTerm {
                    var: PredictorVar::AirTemp,
                    lag: 1,
                },
                PredictorTerm {
                    var: PredictorVar::LongwaveClearSky,
                    lag: 0,
                },
            ],
            lead: 0,
        }
    }

    /// Current and lagged air temperature only; the best-performing set.
    pub fn model4() -> Self {
        Self {
            terms: (0..=2)
                .map(|lag| PredictorTerm {
                    var: PredictorVar::AirTemp,
                    lag,
                })
                .collect(),
            lead: 0,
        }
    }
}

impl Default for PredictorSpec {
    fn default() -> Self {
        Self::model4()
    }
}

/// Monthly predictor series, one map per variable a predictor set may use.
#[derive(Debug, Clone, Default)]
pub struct PredictorInputs {
    pub air: BTreeMap<MonthStamp, f64>,
    pub longwave: BTreeMap<MonthStamp, f64>,
    pub shortwave: BTreeMap<MonthStamp, f64>,
}

impl PredictorInputs {
    pub fn air_only(series: impl IntoIterator<Item = (MonthStamp, f64)>) -> Self {
        Self {
            air: series.into_iter().collect(),
            ..Default::default()
        }
    }

    fn lookup(&self, var: PredictorVar, stamp: MonthStamp) -> Option<f64> {
        let map = match var {
            PredictorVar::AirTemp => &self.air,
            PredictorVar::LongwaveClearSky => &self.longwave,
            PredictorVar::ShortwaveClearSky => &self.shortwave,
        };
        map.get(&stamp).copied()
    }
}

/// A design matrix with its aligned target.
#[derive(Debug, Clone)]
pub struct Design {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    /// Target month of each retained row.
    pub times: Vec<MonthStamp>,
    /// Rows dropped because a predictor was missing.
    pub dropped: usize,
}

fn row_for(
    inputs: &PredictorInputs,
    spec: &PredictorSpec,
    target_month: MonthStamp,
) -> Option<Vec<f64>> {
    let base = target_month.index() - spec.lead as i64;
    spec.terms
        .iter()
        .map(|term| inputs.lookup(term.var, MonthStamp::from_index(base - term.lag as i64)))
        .collect()
}

/// Build feature rows for the given target months; rows with any missing
/// predictor are dropped and counted.
pub fn build_features(
    inputs: &PredictorInputs,
    months: &[MonthStamp],
    spec: &PredictorSpec,
) -> Result<(Vec<Vec<f64>>, Vec<MonthStamp>, usize)> {
    let mut x = Vec::new();
    let mut times = Vec::new();
    let mut dropped = 0;
    for &m in months {
        match row_for(inputs, spec, m) {
            Some(row) => {
                x.push(row);
                times.push(m);
            }
            None => dropped += 1,
        }
    }
    if x.is_empty() {
        return Err(Error::Alignment(format!(
            "no complete predictor rows for {} target months",
            months.len()
        )));
    }
    Ok((x, times, dropped))
}

/// Align predictors with a target series: the row for target month m holds
/// each predictor at m - lead - lag.
pub fn build_design(
    inputs: &PredictorInputs,
    target: &[(MonthStamp, f64)],
    spec: &PredictorSpec,
) -> Result<Design> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut times = Vec::new();
    let mut dropped = 0;
    for &(m, value) in target {
        match row_for(inputs, spec, m) {
            Some(row) => {
                x.push(row);
                y.push(value);
                times.push(m);
            }
            None => dropped += 1,
        }
    }
    if x.is_empty() {
        return Err(Error::Alignment(format!(
            "no complete rows aligning {} target months with the predictor set",
            target.len()
        )));
    }
    Ok(Design {
        x,
        y,
        times,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stamp(y: i32, m: u8) -> MonthStamp {
        MonthStamp::new(y, m).unwrap()
    }

    fn inputs_with_air(from: MonthStamp, values: &[f64]) -> PredictorInputs {
        PredictorInputs::air_only(
            values
                .iter()
                .enumerate()
                .map(|(i, v)| (MonthStamp::from_index(from.index() + i as i64), *v)),
        )
    }

    #[test]
    fn lag_zero_spec_is_identity_alignment() {
        let spec = PredictorSpec::new(
            vec![PredictorTerm {
                var: PredictorVar::AirTemp,
                lag: 0,
            }],
            0,
        )
        .unwrap();
        let air = inputs_with_air(stamp(2000, 1), &[1.0, 2.0, 3.0]);
        let target = vec![
            (stamp(2000, 1), 10.0),
            (stamp(2000, 2), 20.0),
            (stamp(2000, 3), 30.0),
        ];
        let d = build_design(&air, &target, &spec).unwrap();
        assert_eq!(d.dropped, 0);
        assert_eq!(d.x, vec![vec![1.0], vec![2.0], vec![3.0]]);
        assert_eq!(d.y, vec![10.0, 20.0, 30.0]);
    }

    #[test]
    fn six_month_series_hand_alignment() {
        // Air Jan..Jun = [1..6]; model-4 rows exist from Mar on.
        let air = inputs_with_air(stamp(2000, 1), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let target: Vec<(MonthStamp, f64)> = (1..=6)
            .map(|m| (stamp(2000, m), m as f64 * 100.0))
            .collect();
        let d = build_design(&air, &target, &PredictorSpec::model4()).unwrap();
        assert_eq!(d.dropped, 2);
        assert_eq!(
            d.x,
            vec![
                vec![3.0, 2.0, 1.0],
                vec![4.0, 3.0, 2.0],
                vec![5.0, 4.0, 3.0],
                vec![6.0, 5.0, 4.0],
            ]
        );
        assert_eq!(d.y, vec![300.0, 400.0, 500.0, 600.0]);
        assert_eq!(d.times[0], stamp(2000, 3));
    }

    #[test]
    fn stock_model_shapes() {
        assert_eq!(PredictorSpec::model1().terms.len(), 7);
        assert_eq!(PredictorSpec::model2().terms.len(), 3);
        assert_eq!(PredictorSpec::model3().terms.len(), 3);
        assert_eq!(PredictorSpec::model4().terms.len(), 3);
        assert!(PredictorSpec::model1()
            .terms
            .iter()
            .any(|t| t.var == PredictorVar::ShortwaveClearSky && t.lag == 1));
    }

    #[test]
    fn radiation_terms_fill_from_their_own_series() {
        let mut inputs = inputs_with_air(stamp(2000, 1), &[1.0, 2.0, 3.0]);
        for (i, v) in [30.0, 31.0, 32.0].iter().enumerate() {
            inputs.longwave.insert(
                MonthStamp::from_index(stamp(2000, 1).index() + i as i64),
                *v,
            );
            inputs.shortwave.insert(
                MonthStamp::from_index(stamp(2000, 1).index() + i as i64),
                v + 50.0,
            );
        }
        let target = vec![(stamp(2000, 3), 9.0)];
        let d = build_design(&inputs, &target, &PredictorSpec::model2()).unwrap();
        assert_eq!(d.x, vec![vec![3.0, 32.0, 82.0]]);
    }

    #[test]
    fn missing_variable_drops_all_rows() {
        let air = inputs_with_air(stamp(2000, 1), &[1.0, 2.0, 3.0]);
        let target = vec![(stamp(2000, 3), 9.0)];
        assert!(matches!(
            build_design(&air, &target, &PredictorSpec::model2()),
            Err(Error::Alignment(_))
        ));
    }

    #[test]
    fn lead_shifts_the_predictor_window() {
        let spec = PredictorSpec::new(
            vec![PredictorTerm {
                var: PredictorVar::AirTemp,
                lag: 0,
            }],
            2,
        )
        .unwrap();
        let air = inputs_with_air(stamp(2000, 1), &[1.0, 2.0, 3.0]);
        let (x, times, dropped) = build_features(&air, &[stamp(2000, 5)], &spec).unwrap();
        assert_eq!(x, vec![vec![3.0]]);
        assert_eq!(times, vec![stamp(2000, 5)]);
        assert_eq!(dropped, 0);
    }

    #[test]
    fn spec_validation() {
        assert!(PredictorSpec::new(vec![], 0).is_err());
        assert!(PredictorSpec::new(
            vec![PredictorTerm {
                var: PredictorVar::AirTemp,
                lag: 3,
            }],
            0,
        )
        .is_err());
    }
}
