//! Cross-member statistics over (model x initial-condition) ensembles.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Greenhouse-gas concentration pathway of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    Rcp26,
    Rcp85,
}

impl Scenario {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('.', "").as_str() {
            "rcp26" => Ok(Self::Rcp26),
            "rcp85" => Ok(Self::Rcp85),
            other => Err(Error::Validation(format!(
                "unknown scenario {other:?}; expected rcp26 or rcp85"
            ))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rcp26 => "rcp26",
            Self::Rcp85 => "rcp85",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// One ensemble member: a (model, initial-condition run) pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberId {
    pub model: String,
    pub run: String,
}

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.model, self.run)
    }
}

/// The members available for a fixed scenario.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub scenario: Scenario,
    pub members: Vec<MemberId>,
}

impl EnsembleSpec {
    pub fn new(scenario: Scenario, mut members: Vec<MemberId>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        members.sort();
        let before = members.len();
        members.dedup();
        if members.len() != before {
            return Err(Error::Validation("duplicate ensemble members".into()));
        }
        Ok(Self { scenario, members })
    }
}

/// The cross-member statistic selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// Multimodel ensemble median.
    Median,
    /// 2nd minimum over all (model, initial-condition) combinations.
    Min2,
    /// Nearest-rank 80th percentile ("2nd maximum" of a 6-member ensemble).
    P80,
}

impl Statistic {
    pub fn apply(&self, values: &[f64]) -> Result<f64> {
        match self {
            Self::Median => mme_median(values),
            Self::Min2 => mme_kth_min(values, 2),
            Self::P80 => mme_percentile(values, 80.0),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Median => "median",
            Self::Min2 => "min2",
            Self::P80 => "p80",
        })
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Self::Median),
            "min2" => Ok(Self::Min2),
            "p80" => Ok(Self::P80),
            other => Err(Error::Validation(format!(
                "unknown statistic {other:?}; expected median, min2, or p80"
            ))),
        }
    }
}

fn checked_sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("non-finite ensemble member value".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(sorted)
}

/// Standard median: mean of the two central order statistics for even counts.
pub fn mme_median(values: &[f64]) -> Result<f64> {
    let sorted = checked_sorted(values)?;
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    })
}

/// The k-th smallest member (k is 1-based).
pub fn mme_kth_min(values: &[f64], k: usize) -> Result<f64> {
    let sorted = checked_sorted(values)?;
    if k == 0 || k > sorted.len() {
        return Err(Error::RankOutOfRange { k, n: sorted.len() });
    }
    Ok(sorted[k - 1])
}

/// Nearest-rank percentile: the ceil(p/100 * count)-th smallest member.
///
/// With six members, p = 80 lands on the 5th smallest, i.e. the ensemble
/// 2nd maximum.
pub fn mme_percentile(values: &[f64], p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 100.0) {
        return Err(Error::Validation(format!(
            "percentile {p} outside (0, 100]"
        )));
    }
    let sorted = checked_sorted(values)?;
    let rank = ((p / 100.0 * sorted.len() as f64).ceil() as usize).max(1);
    Ok(sorted[rank - 1])
}
