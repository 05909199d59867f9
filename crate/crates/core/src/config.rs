//! TOML configuration in human units (dB, degrees, BSs per km²).
//!
//! ```toml
//! [scenario]
//! bs_density_per_km2 = 50.0
//! bs_height = 30.0
//! ue_height = 60.0
//! tx_power_db = -6.0
//! sir_threshold = 0.3
//! environment = "urban"
//!
//! [channel]
//! alpha_los = 2.09
//! alpha_nlos = 3.75
//! intercept_los_db = -41.1
//! intercept_nlos_db = -32.9
//! m_los = 3
//! m_nlos = 1
//!
//! [antenna]
//! beamwidth_deg = 40.0
//! downtilt_deg = 30.0
//! gain_main = 10.0
//! gain_side = 0.5
//!
//! [quadrature]
//! rel_tol = 1e-9
//! abs_tol = 1e-11
//! outer_trunc_prob = 1e-8
//! inner_radius_factor = 10.0
//! max_inner_radius = 1e6
//!
//! [simulation]
//! num_drops = 100000
//! disk_radius = 10000.0
//! seed = 1
//!
//! [environments.my_city]
//! building_fraction = 0.4
//! buildings_per_km2 = 400.0
//! height_scale = 25.0
//! ```
//!
//! Every key is optional and defaults to the reference scenario. Unknown keys
//! are errors. `scenario.environment` names a built-in preset or an entry of
//! `[environments]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analytic::QuadratureSpec;
use crate::channel::{AntennaPattern, ChannelParams, EnvironmentParams, EnvironmentPreset, LinkState};
use crate::error::{CoverageError, Result};
use crate::monte_carlo::{Conditioning, SimulationSpec};
use crate::scenario::NetworkScenario;
use crate::units::{db_to_linear, linear_to_db, per_km2_to_per_m2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub bs_density_per_km2: f64,
    pub bs_height: f64,
    pub ue_height: f64,
    pub tx_power_db: f64,
    pub sir_threshold: f64,
    pub environment: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub intercept_los_db: f64,
    pub intercept_nlos_db: f64,
    pub m_los: u32,
    pub m_nlos: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntennaSection {
    pub beamwidth_deg: f64,
    pub downtilt_deg: f64,
    pub gain_main: f64,
    pub gain_side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub outer_trunc_prob: f64,
    pub inner_radius_factor: f64,
    pub max_inner_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub num_drops: u64,
    pub disk_radius: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub serving_distance: Option<f64>,
    /// `"los"` or `"nlos"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub serving_state: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentEntry {
    pub building_fraction: f64,
    pub buildings_per_km2: f64,
    pub height_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: ScenarioSection,
    pub channel: ChannelSection,
    pub antenna: AntennaSection,
    pub quadrature: QuadratureSection,
    pub simulation: SimulationSection,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub environments: BTreeMap<String, EnvironmentEntry>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        let r = NetworkScenario::reference();
        Self {
            bs_density_per_km2: 50.0,
            bs_height: r.bs_height,
            ue_height: r.ue_height,
            tx_power_db: linear_to_db(r.tx_power),
            sir_threshold: r.sir_threshold,
            environment: EnvironmentPreset::Urban.name().to_string(),
        }
    }
}

impl Default for ChannelSection {
    fn default() -> Self {
        Self {
            alpha_los: 2.09,
            alpha_nlos: 3.75,
            intercept_los_db: -41.1,
            intercept_nlos_db: -32.9,
            m_los: 3,
            m_nlos: 1,
        }
    }
}

impl Default for AntennaSection {
    fn default() -> Self {
        Self {
            beamwidth_deg: 40.0,
            downtilt_deg: 30.0,
            gain_main: 10.0,
            gain_side: 0.5,
        }
    }
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            outer_trunc_prob: q.outer_trunc_prob,
            inner_radius_factor: q.inner_radius_factor,
            max_inner_radius: q.max_inner_radius,
            network_radius: q.network_radius,
        }
    }
}

impl Default for SimulationSection {
    fn default() -> Self {
        let s = SimulationSpec::default();
        Self {
            num_drops: s.num_drops,
            disk_radius: s.disk_radius,
            seed: s.seed,
            serving_distance: None,
            serving_state: None,
        }
    }
}

/// 1-based line of `key` inside `[section]`, if it is written there.
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(head) = t.strip_prefix('[') {
            current = head.trim_end_matches(']').trim().to_string();
            continue;
        }
        if current == section {
            if let Some((k, _)) = t.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

/// Maps a validation error back to the config key it came from.
fn key_of(section: &str, name: &str) -> (String, String) {
    let key = match (section, name) {
        ("scenario", "bs_density") => "bs_density_per_km2",
        ("scenario", "tx_power") => "tx_power_db",
        ("channel", "intercept_los") => "intercept_los_db",
        ("channel", "intercept_nlos") => "intercept_nlos_db",
        ("antenna", "beamwidth") => "beamwidth_deg",
        ("antenna", "downtilt") => "downtilt_deg",
        _ => name,
    };
    (section.to_string(), key.to_string())
}

impl ConfigFile {
    /// Parses and validates `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| CoverageError::Config(e.to_string().trim_end().to_string()))?;
        cfg.check(text)?;
        Ok(cfg)
    }

    /// TOML text that parses back to `self`.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    fn check(&self, text: &str) -> Result<()> {
        let wrap = |section: &str, err: CoverageError| -> CoverageError {
            let (section, key) = match &err {
                CoverageError::InvalidParameter { name, .. } => key_of(section, name),
                _ => (section.to_string(), String::new()),
            };
            let at = locate(text, &section, &key).map(|l| format!(" (line {l})")).unwrap_or_default();
            CoverageError::Config(format!("[{section}] {key}{at}: {err}"))
        };
        for (name, entry) in &self.environments {
            let section = format!("environments.{name}");
            EnvironmentParams::new(entry.building_fraction, entry.buildings_per_km2, entry.height_scale)
                .map_err(|e| wrap(&section, e))?;
        }
        self.environment()?;
        let scn = self.scenario()?;
        scn.channel.validate().map_err(|e| wrap("channel", e))?;
        scn.pattern.validate().map_err(|e| wrap("antenna", e))?;
        scn.validate().map_err(|e| wrap("scenario", e))?;
        self.quadrature_spec().validate().map_err(|e| wrap("quadrature", e))?;
        self.simulation_spec()?.validate().map_err(|e| wrap("simulation", e))?;
        Ok(())
    }

    pub fn environment(&self) -> Result<EnvironmentParams> {
        let name = &self.scenario.environment;
        if let Some(e) = self.environments.get(name) {
            return Ok(EnvironmentParams {
                building_fraction: e.building_fraction,
                buildings_per_km2: e.buildings_per_km2,
                height_scale: e.height_scale,
            });
        }
        EnvironmentPreset::from_name(name).map(EnvironmentPreset::params).ok_or_else(|| {
            CoverageError::Config(format!(
                "[scenario] environment: `{name}` is neither a built-in preset (suburban, urban, dense_urban, highrise_urban) nor defined under [environments]"
            ))
        })
    }

    /// Scenario in internal units. Values are not validated here.
    pub fn scenario(&self) -> Result<NetworkScenario> {
        let s = &self.scenario;
        let c = &self.channel;
        let a = &self.antenna;
        Ok(NetworkScenario {
            bs_density: per_km2_to_per_m2(s.bs_density_per_km2),
            bs_height: s.bs_height,
            ue_height: s.ue_height,
            tx_power: db_to_linear(s.tx_power_db),
            sir_threshold: s.sir_threshold,
            channel: ChannelParams {
                alpha_los: c.alpha_los,
                alpha_nlos: c.alpha_nlos,
                intercept_los: db_to_linear(c.intercept_los_db),
                intercept_nlos: db_to_linear(c.intercept_nlos_db),
                m_los: c.m_los,
                m_nlos: c.m_nlos,
            },
            env: self.environment()?,
            pattern: AntennaPattern {
                beamwidth: a.beamwidth_deg.to_radians(),
                downtilt: a.downtilt_deg.to_radians(),
                gain_main: a.gain_main,
                gain_side: a.gain_side,
            },
        })
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        let q = &self.quadrature;
        QuadratureSpec {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            outer_trunc_prob: q.outer_trunc_prob,
            inner_radius_factor: q.inner_radius_factor,
            max_inner_radius: q.max_inner_radius,
            network_radius: q.network_radius,
        }
    }

    pub fn simulation_spec(&self) -> Result<SimulationSpec> {
        let s = &self.simulation;
        let serving_state = match s.serving_state.as_deref() {
            None => None,
            Some("los") => Some(LinkState::Los),
            Some("nlos") => Some(LinkState::Nlos),
            Some(other) => {
                return Err(CoverageError::Config(format!(
                    "[simulation] serving_state: `{other}` must be \"los\" or \"nlos\""
                )))
            }
        };
        Ok(SimulationSpec {
            num_drops: s.num_drops,
            disk_radius: s.disk_radius,
            seed: s.seed,
            conditioning: Conditioning {
                serving_distance: s.serving_distance,
                serving_state,
            },
        })
    }
}

/// Parses a configuration text.
pub fn parse_config(text: &str) -> Result<ConfigFile> {
    ConfigFile::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_reference() {
        let cfg = parse_config("").unwrap();
        let scn = cfg.scenario().unwrap();
        let r = NetworkScenario::reference();
        assert!((scn.bs_density - 5e-5).abs() < 1e-18);
        assert_eq!(scn.sir_threshold, 0.3);
        assert_eq!((scn.channel.alpha_los, scn.channel.alpha_nlos), (2.09, 3.75));
        assert!((scn.channel.intercept_los / r.channel.intercept_los - 1.0).abs() < 1e-14);
        assert!((scn.tx_power / r.tx_power - 1.0).abs() < 1e-14);
        assert_eq!(scn.pattern, r.pattern);
        assert_eq!(scn.env, r.env);
        assert_eq!(scn.ue_height, 60.0);
        assert_eq!(cfg.quadrature_spec(), QuadratureSpec::default());
        assert_eq!(cfg.simulation_spec().unwrap(), SimulationSpec::default());
    }

    #[test]
    fn density_in_per_km2() {
        let cfg = parse_config("[scenario]\nbs_density_per_km2 = 50\n").unwrap();
        assert!((cfg.scenario().unwrap().bs_density - 5e-5).abs() < 1e-18);
    }

    #[test]
    fn unknown_keys_rejected_with_line() {
        let err = parse_config("[scenario]\nue_height = 50.0\nbs_hieght = 10.0\n").unwrap_err().to_string();
        assert!(err.contains("bs_hieght") && err.contains("line 3"), "{err}");
        let err = parse_config("[radio]\nx = 1\n").unwrap_err().to_string();
        assert!(err.contains("radio"), "{err}");
    }

    #[test]
    fn range_errors_name_key_and_line() {
        let text = "[scenario]\nenvironment = \"odd\"\n\n[environments.odd]\nbuilding_fraction = 1.5\nbuildings_per_km2 = 300.0\nheight_scale = 20.0\n";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("building_fraction") && err.contains("line 5"), "{err}");
        let err = parse_config("[antenna]\ndowntilt_deg = 120.0\n").unwrap_err().to_string();
        assert!(err.contains("downtilt_deg") && err.contains("line 2"), "{err}");
        let err = parse_config("[scenario]\nsir_threshold = -1\n").unwrap_err().to_string();
        assert!(err.contains("sir_threshold") && err.contains("line 2"), "{err}");
    }

    #[test]
    fn missing_environment_field_rejected() {
        let err = parse_config("[environments.x]\nbuilding_fraction = 0.2\n").unwrap_err().to_string();
        assert!(err.contains("buildings_per_km2"), "{err}");
    }

    #[test]
    fn custom_environment_and_conditioning() {
        let text = "[scenario]\nenvironment = \"town\"\n[environments.town]\nbuilding_fraction = 0.2\nbuildings_per_km2 = 600\nheight_scale = 10\n[simulation]\nserving_distance = 80.0\nserving_state = \"los\"\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.scenario().unwrap().env.height_scale, 10.0);
        let sim = cfg.simulation_spec().unwrap();
        assert_eq!(sim.conditioning.serving_distance, Some(80.0));
        assert_eq!(sim.conditioning.serving_state, Some(LinkState::Los));
        assert!(parse_config("[simulation]\nserving_state = \"maybe\"\n").is_err());
    }

    #[test]
    fn round_trip() {
        let text = "[scenario]\nue_height = 12.5\nenvironment = \"town\"\n[environments.town]\nbuilding_fraction = 0.2\nbuildings_per_km2 = 600\nheight_scale = 10\n[quadrature]\nnetwork_radius = 3000.0\n[simulation]\nseed = 7\nserving_state = \"nlos\"\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
        let d = ConfigFile::default();
        assert_eq!(parse_config(&d.to_toml()).unwrap(), d);
    }
}
