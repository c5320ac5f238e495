//! Scenario configuration: physical and protocol constants plus the RNG seed.
//!
//! Configs load from TOML files whose keys mirror [`ScenarioConfig`] field
//! names exactly. Unknown keys are rejected so that typos in sweep scripts
//! fail loudly instead of silently running defaults.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::Error;
use crate::scenario::TimeGrid;
use crate::Result;

/// Where IoT devices may be placed.
///
/// `Annulus` (the default) puts all `num_devices` outside the TBS coverage
/// circle, so `N` counts NOMA-served devices. `Disk` spreads them over the
/// whole region; devices that land inside the coverage radius talk to the
/// TBS directly and are excluded from every NOMA computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PlacementRegion {
    #[default]
    Annulus,
    Disk,
}

/// All physical and protocol constants of one scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Radius of the circular region, meters.
    #[serde(default = "default_region_radius")]
    pub region_radius: f64,
    /// TBS coverage radius r0; also the AU orbit radius, meters.
    #[serde(default = "default_tbs_coverage_radius")]
    pub tbs_coverage_radius: f64,
    /// Common operating height of all UAVs, meters.
    #[serde(default = "default_uav_height")]
    pub uav_height: f64,
    /// Number of sectors M (one SU each).
    #[serde(default = "default_num_sectors")]
    pub num_sectors: usize,
    /// Slots per TDMA frame L.
    #[serde(default = "default_slots_per_frame")]
    pub slots_per_frame: usize,
    /// Number of IoT devices N.
    pub num_devices: usize,
    /// AU revolution period T, seconds.
    #[serde(default = "default_revolution_period")]
    pub revolution_period: f64,
    /// Channel power gain at the 1 m reference distance.
    #[serde(default = "default_beta0")]
    pub beta0: f64,
    /// AWGN noise power N0, watts.
    #[serde(default = "default_noise_power")]
    pub noise_power: f64,
    /// Maximum IoT transmit power, watts.
    #[serde(default = "default_p_u_max")]
    pub p_u_max: f64,
    /// Minimum SIC power difference, dB.
    #[serde(default = "default_eta_sic_db")]
    pub eta_sic_db: f64,
    /// Fixed SU relay transmit power, watts.
    #[serde(default = "default_relay_power")]
    pub p_su: f64,
    /// Fixed AU relay transmit power, watts.
    #[serde(default = "default_relay_power")]
    pub p_au: f64,
    /// Seed for all pseudo-random draws (ChaCha8, stream-separated).
    pub seed: u64,
    #[serde(default)]
    pub placement_region: PlacementRegion,
}

fn default_region_radius() -> f64 {
    500.0
}
fn default_tbs_coverage_radius() -> f64 {
    300.0
}
fn default_uav_height() -> f64 {
    100.0
}
fn default_num_sectors() -> usize {
    10
}
fn default_slots_per_frame() -> usize {
    8
}
fn default_revolution_period() -> f64 {
    80.0
}
fn default_beta0() -> f64 {
    1e-3
}
fn default_noise_power() -> f64 {
    1e-12
}
fn default_p_u_max() -> f64 {
    0.5
}
fn default_eta_sic_db() -> f64 {
    5.0
}
fn default_relay_power() -> f64 {
    1.0
}

impl ScenarioConfig {
    /// A ready-to-run configuration with the reference defaults and the
    /// given device count and seed.
    pub fn with_defaults(num_devices: usize, seed: u64) -> Self {
        Self {
            region_radius: default_region_radius(),
            tbs_coverage_radius: default_tbs_coverage_radius(),
            uav_height: default_uav_height(),
            num_sectors: default_num_sectors(),
            slots_per_frame: default_slots_per_frame(),
            num_devices,
            revolution_period: default_revolution_period(),
            beta0: default_beta0(),
            noise_power: default_noise_power(),
            p_u_max: default_p_u_max(),
            eta_sic_db: default_eta_sic_db(),
            p_su: default_relay_power(),
            p_au: default_relay_power(),
            seed,
            placement_region: PlacementRegion::Annulus,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|source| Error::TomlParse {
            path: "<string>".into(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = toml::from_str(&text).map_err(|source| Error::TomlParse {
            path: path.display().to_string(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the structural invariants of the configuration.
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Config(msg));
        if self.region_radius <= 0.0 || self.region_radius.is_nan() {
            return err(format!("region_radius must be > 0, got {}", self.region_radius));
        }
        if self.tbs_coverage_radius <= 0.0 || self.tbs_coverage_radius.is_nan() {
            return err(format!(
                "tbs_coverage_radius must be > 0, got {}",
                self.tbs_coverage_radius
            ));
        }
        if self.tbs_coverage_radius >= self.region_radius {
            return err(format!(
                "tbs_coverage_radius ({}) must be smaller than region_radius ({})",
                self.tbs_coverage_radius, self.region_radius
            ));
        }
        if self.uav_height <= 0.0 || self.uav_height.is_nan() {
            return err(format!("uav_height must be > 0, got {}", self.uav_height));
        }
        if self.num_sectors < 2 {
            return err(format!(
                "num_sectors must be >= 2 so the pre-log factor stays positive, got {}",
                self.num_sectors
            ));
        }
        if self.slots_per_frame == 0 {
            return err("slots_per_frame must be >= 1".into());
        }
        if self.revolution_period <= 0.0 || self.revolution_period.is_nan() {
            return err(format!(
                "revolution_period must be > 0, got {}",
                self.revolution_period
            ));
        }
        for (name, v) in [
            ("beta0", self.beta0),
            ("noise_power", self.noise_power),
            ("p_u_max", self.p_u_max),
            ("p_su", self.p_su),
            ("p_au", self.p_au),
        ] {
            if v.is_nan() || v <= 0.0 || !v.is_finite() {
                return err(format!("{name} must be strictly positive, got {v}"));
            }
        }
        if !self.eta_sic_db.is_finite() {
            return err(format!("eta_sic_db must be finite, got {}", self.eta_sic_db));
        }
        Ok(())
    }

    /// Linear SIC threshold 10^(eta_sic_db / 10).
    pub fn eta_sic_linear(&self) -> f64 {
        crate::power::sic_threshold_linear(self.eta_sic_db)
    }

    /// Pre-log factor m = (M - 1) / M.
    pub fn m_prelog(&self) -> f64 {
        (self.num_sectors as f64 - 1.0) / self.num_sectors as f64
    }

    /// Builds the cyclical TDMA time grid for this configuration.
    pub fn time_grid(&self) -> TimeGrid {
        crate::scenario::build_time_grid(self)
    }
}
