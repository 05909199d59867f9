use crate::channel::{AntennaPattern, ChannelParams, EnvironmentParams, EnvironmentPreset, LinkState};
use crate::error::{invalid, Result};
use crate::units::{db_to_linear, per_km2_to_per_m2};

/// Height used for terrestrial users when a scenario asks for a ground UE.
pub const GROUND_UE_HEIGHT: f64 = 1.5;

/// Complete input of a coverage query, in internal units (meters, BSs per m²,
/// linear power ratios, radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkScenario {
    pub bs_density: f64,
    pub bs_height: f64,
    pub ue_height: f64,
    pub tx_power: f64,
    pub sir_threshold: f64,
    pub channel: ChannelParams,
    pub env: EnvironmentParams,
    pub pattern: AntennaPattern,
}

impl NetworkScenario {
    /// Reference deployment: 50 BSs/km² at 30 m, drone at 60 m in the urban
    /// preset, fading orders (m_L, m_N) = (3, 1).
    pub fn reference() -> Self {
        Self {
            bs_density: per_km2_to_per_m2(50.0),
            bs_height: 30.0,
            ue_height: 60.0,
            tx_power: db_to_linear(-6.0),
            sir_threshold: 0.3,
            channel: ChannelParams {
                alpha_los: 2.09,
                alpha_nlos: 3.75,
                intercept_los: db_to_linear(-41.1),
                intercept_nlos: db_to_linear(-32.9),
                m_los: 3,
                m_nlos: 1,
            },
            env: EnvironmentPreset::Urban.params(),
            pattern: AntennaPattern {
                beamwidth: 40f64.to_radians(),
                downtilt: 30f64.to_radians(),
                gain_main: 10.0,
                gain_side: 0.5,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bs_density > 0.0 && self.bs_density.is_finite()) {
            return Err(invalid("bs_density", format!("{} must be > 0", self.bs_density)));
        }
        if !(self.bs_height > 0.0 && self.bs_height.is_finite()) {
            return Err(invalid("bs_height", format!("{} must be > 0", self.bs_height)));
        }
        if !(self.ue_height >= 0.0 && self.ue_height.is_finite()) {
            return Err(invalid("ue_height", format!("{} must be >= 0", self.ue_height)));
        }
        if !(self.tx_power > 0.0 && self.tx_power.is_finite()) {
            return Err(invalid("tx_power", format!("{} must be > 0", self.tx_power)));
        }
        if !(self.sir_threshold > 0.0 && self.sir_threshold.is_finite()) {
            return Err(invalid("sir_threshold", format!("{} must be > 0", self.sir_threshold)));
        }
        self.channel.validate()?;
        self.env.validate()?;
        self.pattern.validate()
    }

    pub fn with_fading(mut self, m_los: u32, m_nlos: u32) -> Self {
        self.channel.m_los = m_los;
        self.channel.m_nlos = m_nlos;
        self
    }

    pub fn with_ue_height(mut self, ue_height: f64) -> Self {
        self.ue_height = ue_height;
        self
    }

    pub fn fading_order(&self, state: LinkState) -> u32 {
        self.channel.fading_order(state)
    }
}

impl Default for NetworkScenario {
    fn default() -> Self {
        Self::reference()
    }
}
