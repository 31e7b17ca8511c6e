//! Stream-temperature stress classification and cooling-water physics.
//!
//! The withdrawal and usable-capacity formulas work in SI units throughout
//! (W, m³/s, K); inventory capacities in MW convert at ingestion.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};

pub const WATER_DENSITY_KG_M3: f64 = 1000.0;
pub const WATER_HEAT_CAPACITY_J_KG_K: f64 = 4186.0;

/// Allowable effluent temperature for states without a specific limit, degC.
pub const DEFAULT_THRESHOLD_C: f64 = 32.2;

/// How a plant rejects waste heat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoolingClass {
    OnceThrough,
    Recirculating,
    Dry,
    Hybrid,
}

impl CoolingClass {
    /// Once-through and recirculating systems are collectively wet cooled
    /// and subject to water vulnerability.
    pub fn is_wet(&self) -> bool {
        matches!(self, Self::OnceThrough | Self::Recirculating)
    }
}

impl fmt::Display for CoolingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OnceThrough => "once_through",
            Self::Recirculating => "recirculating",
            Self::Dry => "dry",
            Self::Hybrid => "hybrid",
        })
    }
}

impl FromStr for CoolingClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "once_through" => Ok(Self::OnceThrough),
            "recirculating" => Ok(Self::Recirculating),
            "dry" => Ok(Self::Dry),
            "hybrid" => Ok(Self::Hybrid),
            other => Err(Error::Validation(format!(
                "unknown cooling class {other:?}"
            ))),
        }
    }
}

/// State-by-state allowable stream temperature limits.
#[derive(Debug, Clone)]
pub struct StateThresholds {
    limits: BTreeMap<String, f64>,
    default_c: f64,
}

impl StateThresholds {
    /// The built-in regulatory table; every unlisted state takes 32.2 degC.
    pub fn builtin() -> Self {
        let rows = [
            ("Indiana", 35.0),
            ("Kentucky", 31.7),
            ("Louisiana", 34.4),
            ("North Carolina", 34.8),
            ("Pennsylvania", 30.5),
            ("Virginia", 33.7),
            ("Wisconsin", 31.7),
        ];
        Self {
            limits: rows
                .into_iter()
                .map(|(s, t)| (s.to_ascii_lowercase(), t))
                .collect(),
            default_c: DEFAULT_THRESHOLD_C,
        }
    }

    /// Load a `state,threshold_c` table.
    pub fn from_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            state: String,
            threshold_c: f64,
        }
        let mut rdr = csv::Reader::from_path(path.as_ref())?;
        let mut limits = BTreeMap::new();
        for rec in rdr.deserialize::<Row>() {
            let row = rec?;
            limits.insert(row.state.to_ascii_lowercase(), row.threshold_c);
        }
        Ok(Self {
            limits,
            default_c: DEFAULT_THRESHOLD_C,
        })
    }

    /// The limit for a state plus whether the state was actually listed;
    /// unknown states fall back to the default threshold so callers can
    /// count the warning.
    pub fn lookup(&self, state: &str) -> (f64, bool) {
        match self.limits.get(&state.to_ascii_lowercase()) {
            Some(t) => (*t, true),
            None => (self.default_c, false),
        }
    }

    /// Water Temperature Stress Index: 1 iff the maximum stream temperature
    /// strictly exceeds the state's allowable limit.
    pub fn wtsi(&self, t_stream_max_c: f64, state: &str) -> u8 {
        let (limit, _) = self.lookup(state);
        u8::from(t_stream_max_c > limit)
    }
}

impl Default for StateThresholds {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Thermal and cooling parameters of one plant, SI units.
#[derive(Debug, Clone)]
pub struct PlantThermalSpec {
    /// Installed capacity, W.
    pub capacity_w: f64,
    /// Net plant efficiency.
    pub eta_total: f64,
    /// Electrical efficiency.
    pub eta_elec: f64,
    /// Share of waste heat not discharged through cooling water.
    pub alpha: f64,
    /// Share of waste heat released to the air (recirculating systems).
    pub beta: f64,
    /// Air-temperature/humidity correction.
    pub omega: f64,
    /// Densification factor accounting for blowdown.
    pub epsilon: f64,
    /// Efficiency correction factor in the usable-capacity formulas.
    pub lambda: f64,
    /// Maximum permissible temperature rise of the cooling water, K.
    pub dt_max_k: f64,
    /// Maximum permissible intake temperature, degC.
    pub t_max_c: f64,
    /// Maximum fraction of streamflow available for power generation.
    pub gamma_flow: f64,
    pub cooling: CoolingClass,
}

impl PlantThermalSpec {
    /// Inventory capacities arrive in MW; convert on the way in so the
    /// factor chain stays in SI units.
    pub fn from_nameplate_mw(nameplate_mw: f64, cooling: CoolingClass) -> Self {
        Self::with_capacity_w(nameplate_mw * 1e6, cooling)
    }

    /// Engineering placeholder defaults for plants whose inventory rows lack
    /// thermal parameters; every field is overridable.
    pub fn with_capacity_w(capacity_w: f64, cooling: CoolingClass) -> Self {
        Self {
            capacity_w,
            eta_total: 0.40,
            eta_elec: 0.40,
            alpha: 0.1,
            beta: 0.2,
            omega: 1.0,
            epsilon: 1.0,
            lambda: 1.0,
            dt_max_k: 10.0,
            t_max_c: DEFAULT_THRESHOLD_C,
            gamma_flow: 0.3,
            cooling,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta_elec > 0.0 && self.eta_elec <= 1.0) {
            return Err(Error::Validation(format!(
                "electrical efficiency {} outside (0, 1]",
                self.eta_elec
            )));
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma_flow),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Validation(format!("{name} {v} outside [0, 1]")));
            }
        }
        if self.dt_max_k <= 0.0 {
            return Err(Error::Validation("dt_max must be positive".into()));
        }
        for (name, v) in [
            ("omega", self.omega),
            ("epsilon", self.epsilon),
            ("lambda", self.lambda),
        ] {
            if v <= 0.0 {
                return Err(Error::Validation(format!("{name} {v} must be positive")));
            }
        }
        if self.capacity_w <= 0.0 {
            return Err(Error::Validation(
                "installed capacity must be positive".into(),
            ));
        }
        Ok(())
    }

    /// (1 - eta_total)/eta_elec, the waste-heat-per-output ratio.
    fn heat_ratio(&self) -> f64 {
        (1.0 - self.eta_total) / self.eta_elec
    }

    /// Heat-share factor chain for the plant's cooling class: (1 - alpha)
    /// for once-through, (1 - alpha)(1 - beta) omega epsilon recirculating.
    fn share_factor(&self, cooling: CoolingClass) -> f64 {
        match cooling {
            CoolingClass::OnceThrough => 1.0 - self.alpha,
            CoolingClass::Recirculating => {
                (1.0 - self.alpha) * (1.0 - self.beta) * self.omega * self.epsilon
            }
            CoolingClass::Dry | CoolingClass::Hybrid => 0.0,
        }
    }
}

/// Allowable cooling-water temperature rise:
/// max(min(T_max - T_w, dT_max), 0) in K.
pub fn allowable_rise(t_max_c: f64, t_w_c: f64, dt_max_k: f64) -> f64 {
    (t_max_c - t_w_c).min(dt_max_k).max(0.0)
}

fn withdrawal(spec: &PlantThermalSpec, t_w_c: f64, cooling: CoolingClass) -> Result<f64> {
    let rise = allowable_rise(spec.t_max_c, t_w_c, spec.dt_max_k);
    if rise <= 0.0 {
        return Err(Error::ThermalShutdown);
    }
    Ok(
        spec.capacity_w * spec.heat_ratio() * spec.share_factor(cooling)
            / (WATER_DENSITY_KG_M3 * WATER_HEAT_CAPACITY_J_KG_K * rise),
    )
}

fn usable_capacity(
    spec: &PlantThermalSpec,
    t_w_c: f64,
    q_stream_m3_s: f64,
    cooling: CoolingClass,
) -> f64 {
    let rise = allowable_rise(spec.t_max_c, t_w_c, spec.dt_max_k);
    if rise <= 0.0 {
        return 0.0;
    }
    let q_required = withdrawal(spec, t_w_c, cooling).expect("rise is positive");
    let usable = (spec.gamma_flow * q_stream_m3_s).min(q_required)
        * WATER_DENSITY_KG_M3
        * WATER_HEAT_CAPACITY_J_KG_K
        * rise
        / (spec.heat_ratio() * spec.lambda * spec.share_factor(cooling));
    usable.min(spec.capacity_w)
}

/// Required withdrawal of an open-loop plant, m³/s.
pub fn once_through_withdrawal(spec: &PlantThermalSpec, t_w_c: f64) -> Result<f64> {
    withdrawal(spec, t_w_c, CoolingClass::OnceThrough)
}

/// Maximum usable capacity of an open-loop plant given streamflow Q, in W.
/// Zero allowable rise means full shutdown; the result is capped at the
/// installed capacity.
pub fn once_through_capacity(spec: &PlantThermalSpec, t_w_c: f64, q_stream_m3_s: f64) -> f64 {
    usable_capacity(spec, t_w_c, q_stream_m3_s, CoolingClass::OnceThrough)
}

/// Required withdrawal of a recirculating plant, m³/s.
pub fn recirc_withdrawal(spec: &PlantThermalSpec, t_w_c: f64) -> Result<f64> {
    withdrawal(spec, t_w_c, CoolingClass::Recirculating)
}

/// Maximum usable capacity of a recirculating plant, W.
pub fn recirc_capacity(spec: &PlantThermalSpec, t_w_c: f64, q_stream_m3_s: f64) -> f64 {
    usable_capacity(spec, t_w_c, q_stream_m3_s, CoolingClass::Recirculating)
}

/// Efficiency change, in percent, for air and stream temperature rises:
/// each 1 degC of air warming costs 0.01%, each 1 degC of stream warming
/// costs 0.02%.
pub fn efficiency_sensitivity(dt_air_k: f64, dt_stream_k: f64) -> f64 {
    -(0.01 * dt_air_k + 0.02 * dt_stream_k)
}
