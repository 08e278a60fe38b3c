//! Scenario configuration: defaults, JSON loading, validation.
//!
//! Every field is optional in the config file; absent fields take the
//! default system parameters (100 km2 area; MBS/PBS/GUE/AUE intensities of
//! 4, 12, 100 and 1.8 per km2; 60 UABS; 46/30/26 dBm transmit powers;
//! heights 36/15/36/1.5/22.5 m; 763 MHz downlink). The master seed has no
//! default: reproducibility requires it to be stated explicitly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::deployment::{Placement, Tier, TierSpec};
use crate::error::{Error, Result};
use crate::geometry::SimArea;
use crate::kpi::UabsDutyNormalization;
use crate::linkbudget::{IcicState, TxPowers};
use crate::optimizer::{IcicMode, SearchGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AreaConfig {
    pub width_m: f64,
    pub height_m: f64,
}

impl Default for AreaConfig {
    fn default() -> Self {
        Self {
            width_m: 10_000.0,
            height_m: 10_000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Intensities {
    pub mbs: f64,
    pub pbs: f64,
    pub gue: f64,
    pub aue: f64,
}

impl Default for Intensities {
    fn default() -> Self {
        Self {
            mbs: 4.0,
            pbs: 12.0,
            gue: 100.0,
            aue: 1.8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Heights {
    pub mbs: f64,
    pub pbs: f64,
    /// UABS deployment height scenario; 36 m and 50 m are the studied
    /// values.
    pub uabs: f64,
    pub gue: f64,
    pub aue: f64,
}

impl Default for Heights {
    fn default() -> Self {
        Self {
            mbs: 36.0,
            pbs: 15.0,
            uabs: 36.0,
            gue: 1.5,
            aue: 22.5,
        }
    }
}

/// Full scenario configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Master seed; mandatory (no wall-clock fallback).
    pub seed: Option<u64>,
    pub trials: u32,
    pub area: AreaConfig,
    pub intensities_per_km2: Intensities,
    pub uabs_count: usize,
    pub tx_power_dbm: TxPowers,
    pub heights_m: Heights,
    pub channel: ChannelParams,
    /// The single ICIC state used by `simulate`.
    pub state: IcicState,
    /// ICIC preset for `optimize` and `surface`.
    pub icic_mode: IcicMode,
    /// Grid override for `optimize`/`surface`; defaults per mode when
    /// absent.
    pub grid: Option<SearchGrid>,
    /// Coverage SE threshold T_C_SE, bps/Hz.
    pub threshold_se: f64,
    /// Coverage probe grid resolution, meters.
    pub probe_resolution_m: f64,
    pub uabs_duty_normalization: UabsDutyNormalization,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: None,
            trials: 10,
            area: AreaConfig::default(),
            intensities_per_km2: Intensities::default(),
            uabs_count: 60,
            tx_power_dbm: TxPowers::default(),
            heights_m: Heights::default(),
            channel: ChannelParams::default(),
            state: IcicState::default(),
            icic_mode: IcicMode::None,
            grid: None,
            threshold_se: 0.1,
            probe_resolution_m: 200.0,
            uabs_duty_normalization: UabsDutyNormalization::Half,
        }
    }
}

/// Named bound check producing range errors that cite the documented bound.
pub(crate) fn check_range(name: &str, value: f64, lo: f64, hi: f64, bound: &str) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::Config(format!(
            "{name} = {value} outside the documented {bound} bound"
        )));
    }
    Ok(())
}

pub(crate) fn check_icic_ranges(state: &IcicState) -> Result<()> {
    check_range("alpha_mbs", state.alpha_mbs, 0.0, 1.0, "0 to 1")?;
    check_range("alpha_pbs", state.alpha_pbs, 0.0, 1.0, "0 to 1")?;
    check_range("beta_mbs", state.beta_mbs, 0.0, 1.0, "0 to 100%")?;
    check_range("beta_pbs", state.beta_pbs, 0.0, 1.0, "0 to 100%")?;
    check_range("rho_mbs_db", state.rho_mbs_db, 20.0, 40.0, "20 dB to 40 dB")?;
    check_range("rho_pbs_db", state.rho_pbs_db, -10.0, 10.0, "-10 dB to 10 dB")?;
    check_range("rho_uabs_db", state.rho_uabs_db, -5.0, 5.0, "-5 dB to 5 dB")?;
    check_range("tau_pbs_db", state.tau_pbs_db, 0.0, 12.0, "0 dB to 12 dB")?;
    check_range("tau_uabs_db", state.tau_uabs_db, 0.0, 12.0, "0 dB to 12 dB")?;
    Ok(())
}

impl SimConfig {
    pub fn sim_area(&self) -> Result<SimArea> {
        SimArea::new(self.area.width_m, self.area.height_m)
    }

    pub fn tx_powers(&self) -> TxPowers {
        self.tx_power_dbm
    }

    pub fn tier_specs(&self) -> Vec<TierSpec> {
        vec![
            TierSpec {
                tier: Tier::Mbs,
                placement: Placement::Ppp {
                    intensity_per_km2: self.intensities_per_km2.mbs,
                },
                tx_power_dbm: Some(self.tx_power_dbm.mbs_dbm),
                height_m: self.heights_m.mbs,
            },
            TierSpec {
                tier: Tier::Pbs,
                placement: Placement::Ppp {
                    intensity_per_km2: self.intensities_per_km2.pbs,
                },
                tx_power_dbm: Some(self.tx_power_dbm.pbs_dbm),
                height_m: self.heights_m.pbs,
            },
            TierSpec {
                tier: Tier::Uabs,
                placement: Placement::HexGrid {
                    count: self.uabs_count,
                },
                tx_power_dbm: Some(self.tx_power_dbm.uabs_dbm),
                height_m: self.heights_m.uabs,
            },
            TierSpec {
                tier: Tier::Gue,
                placement: Placement::Ppp {
                    intensity_per_km2: self.intensities_per_km2.gue,
                },
                tx_power_dbm: None,
                height_m: self.heights_m.gue,
            },
            TierSpec {
                tier: Tier::Aue,
                placement: Placement::Ppp {
                    intensity_per_km2: self.intensities_per_km2.aue,
                },
                tx_power_dbm: None,
                height_m: self.heights_m.aue,
            },
        ]
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| {
            Error::Config(
                "no seed given: set \"seed\" in the config file or pass --seed (runs never \
                 default to wall-clock seeds)"
                    .into(),
            )
        })
    }

    /// The search grid for the configured ICIC mode: the config override
    /// when present, otherwise the mode's defaults.
    pub fn search_grid(&self) -> Result<SearchGrid> {
        let grid = match &self.grid {
            Some(g) => g.clone().with_mode(self.icic_mode)?,
            None => SearchGrid::for_mode(self.icic_mode),
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        self.sim_area()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        for (name, v) in [
            ("intensities_per_km2.mbs", self.intensities_per_km2.mbs),
            ("intensities_per_km2.pbs", self.intensities_per_km2.pbs),
            ("intensities_per_km2.gue", self.intensities_per_km2.gue),
            ("intensities_per_km2.aue", self.intensities_per_km2.aue),
        ] {
            if v < 0.0 {
                return Err(Error::Config(format!("{name} must be non-negative, got {v}")));
            }
        }
        if self.uabs_count == 0 {
            return Err(Error::Config("uabs_count must be >= 1".into()));
        }
        for (name, v) in [
            ("heights_m.mbs", self.heights_m.mbs),
            ("heights_m.pbs", self.heights_m.pbs),
            ("heights_m.uabs", self.heights_m.uabs),
            ("heights_m.gue", self.heights_m.gue),
            ("heights_m.aue", self.heights_m.aue),
        ] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        self.channel.validate()?;
        check_icic_ranges(&self.state)?;
        if let Some(grid) = &self.grid {
            grid.validate()?;
        }
        if !(self.threshold_se >= 0.0) {
            return Err(Error::Config(format!(
                "threshold_se must be >= 0, got {}",
                self.threshold_se
            )));
        }
        if !(self.probe_resolution_m > 0.0) {
            return Err(Error::Config(format!(
                "probe_resolution_m must be positive, got {}",
                self.probe_resolution_m
            )));
        }
        Ok(())
    }
}

/// Loads a config file. Empty (or whitespace-only) files mean "all
/// defaults"; parse errors carry serde's line/column info.
pub fn load_config(path: impl AsRef<Path>) -> Result<SimConfig> {
    let raw = std::fs::read_to_string(path.as_ref())?;
    parse_config(&raw)
}

/// Parses config JSON (empty input = defaults) and validates it.
pub fn parse_config(raw: &str) -> Result<SimConfig> {
    let text = if raw.trim().is_empty() { "{}" } else { raw };
    let config: SimConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_yields_table_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c, SimConfig::default());
        assert_eq!(c.area.width_m * c.area.height_m, 100e6);
        assert_eq!(c.intensities_per_km2.mbs, 4.0);
        assert_eq!(c.intensities_per_km2.aue, 1.8);
        assert_eq!(c.uabs_count, 60);
        assert_eq!(c.tx_power_dbm.mbs_dbm, 46.0);
        assert_eq!(c.channel.carrier_mhz, 763.0);
        assert!(c.seed.is_none());
    }

    #[test]
    fn out_of_range_tau_names_the_bound() {
        let err = parse_config(r#"{"state": {"tau_pbs_db": 20.0}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("tau_pbs_db"), "message: {msg}");
        assert!(msg.contains("0 dB to 12 dB"), "message: {msg}");
    }

    #[test]
    fn missing_seed_is_an_explicit_error() {
        let c = parse_config("{}").unwrap();
        let err = c.require_seed().unwrap_err();
        assert!(err.to_string().contains("seed"));
        let c2 = parse_config(r#"{"seed": 7}"#).unwrap();
        assert_eq!(c2.require_seed().unwrap(), 7);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse_config(r#"{"sede": 7}"#).is_err());
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse_config("{\n  \"seed\": ?\n}").unwrap_err();
        assert!(err.to_string().contains("line"), "got: {err}");
    }

    #[test]
    fn effective_config_round_trips() {
        let mut c = SimConfig::default();
        c.seed = Some(99);
        c.trials = 3;
        c.heights_m.uabs = 50.0;
        c.state.tau_uabs_db = 6.0;
        c.icic_mode = IcicMode::Feicic;
        let echoed = serde_json::to_string_pretty(&c).unwrap();
        let back = parse_config(&echoed).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn rho_ranges_enforced() {
        assert!(parse_config(r#"{"state": {"rho_mbs_db": 10.0}}"#).is_err());
        assert!(parse_config(r#"{"state": {"rho_pbs_db": 11.0}}"#).is_err());
        assert!(parse_config(r#"{"state": {"rho_uabs_db": -6.0}}"#).is_err());
        assert!(parse_config(r#"{"state": {"rho_mbs_db": 40.0}}"#).is_ok());
    }
}
