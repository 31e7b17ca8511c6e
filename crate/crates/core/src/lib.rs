//! Batch analytics for assessing thermoelectric power production at risk from
//! water scarcity and rising stream temperatures.
//!
//! The crate turns four kinds of input data — gridded monthly climate ensembles
//! (precipitation, evapotranspiration, air temperature), county population
//! records, stream-gauge temperature records, and a power-plant inventory —
//! into county-level classifications and aggregated capacity-at-risk totals:
//!
//! * [`geogrid`] — regular lat/lon grids, bilinear regridding and point sampling,
//!   spherical cell areas.
//! * [`demography`] — county growth rates and compound population projection.
//! * [`watersupply`] — freshwater supply (P − E), 5-year climatologies, unit
//!   conversion, municipal demand, and the WAACI water-availability index.
//! * [`ensemble`] — multimodel ensemble statistics (median, k-th minimum,
//!   nearest-rank percentiles).
//! * [`streamtemp`] — gap imputation, autocorrelation diagnostics, Mann-Kendall
//!   trend tests with tie/autocorrelation corrections, LS-SVM regression of
//!   stream temperature on lagged air temperature, validation metrics, and
//!   additive bias correction.
//! * [`thermal`] — the WTSI stream-temperature stress indicator and cooling-water
//!   withdrawal/usable-capacity physics for once-through and recirculating plants.
//! * [`risk`] — county/gauge/plant joins, stress classification, capacity
//!   aggregation, and the yearly risk-trend series with its dispersion band.
//!
//! All operations are pure functions over immutable inputs; per-county,
//! per-gauge, and per-member work can be evaluated in parallel without
//! affecting results.

pub use crate::error::{Error, Result};

pub mod demography;
pub mod ensemble;
pub mod error;
pub mod geogrid;
pub mod risk;
pub mod streamtemp;
pub mod thermal;
pub mod time;
pub mod watersupply;
