//! Physical layer shared by the analytic and simulated evaluations: link
//! geometry, LoS/NLoS path loss, the building-grid LoS probability, the
//! two-level vertical antenna pattern and Nakagami-m power fading.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{invalid, CoverageError, Result};

/// Propagation state of a BS-to-UE link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub const BOTH: [LinkState; 2] = [LinkState::Los, LinkState::Nlos];

    pub fn name(self) -> &'static str {
        match self {
            LinkState::Los => "los",
            LinkState::Nlos => "nlos",
        }
    }
}

/// Building-grid statistics of an urban environment.
///
/// `building_fraction` is the share of land covered by buildings,
/// `buildings_per_km2` the mean building count per km² and `height_scale`
/// the Rayleigh scale of building heights in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    pub building_fraction: f64,
    pub buildings_per_km2: f64,
    pub height_scale: f64,
}

impl EnvironmentParams {
    pub fn new(building_fraction: f64, buildings_per_km2: f64, height_scale: f64) -> Result<Self> {
        let env = Self {
            building_fraction,
            buildings_per_km2,
            height_scale,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.building_fraction > 0.0 && self.building_fraction < 1.0) {
            return Err(invalid("building_fraction", format!("{} not in (0, 1)", self.building_fraction)));
        }
        if !(self.buildings_per_km2 > 0.0 && self.buildings_per_km2.is_finite()) {
            return Err(invalid("buildings_per_km2", format!("{} must be > 0", self.buildings_per_km2)));
        }
        if !(self.height_scale > 0.0 && self.height_scale.is_finite()) {
            return Err(invalid("height_scale", format!("{} must be > 0", self.height_scale)));
        }
        Ok(())
    }

    /// Ground distance between consecutive LoS-probability steps, meters.
    pub fn step_length(&self) -> f64 {
        1000.0 / (self.building_fraction * self.buildings_per_km2).sqrt()
    }

    /// Index `m = floor(r sqrt(ab) / 1000 - 1)` of the last building term in the
    /// LoS product; `-1` means no building lies between BS and UE.
    /// Edges are the exact values `k * step_length()` returned by
    /// [`los_breakpoints`].
    pub fn building_index(&self, ground_distance: f64) -> i64 {
        let step = self.step_length();
        let mut k = (ground_distance / step).floor();
        if k * step > ground_distance {
            k -= 1.0;
        } else if (k + 1.0) * step <= ground_distance {
            k += 1.0;
        }
        k as i64 - 1
    }
}

/// ITU-style environment presets. `Urban` is the reference setting; the
/// others carry conventional P.1410-derived values and can be overridden in
/// configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvironmentPreset {
    Suburban,
    Urban,
    DenseUrban,
    HighriseUrban,
}

impl EnvironmentPreset {
    pub const ALL: [EnvironmentPreset; 4] = [
        EnvironmentPreset::Suburban,
        EnvironmentPreset::Urban,
        EnvironmentPreset::DenseUrban,
        EnvironmentPreset::HighriseUrban,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvironmentPreset::Suburban => "suburban",
            EnvironmentPreset::Urban => "urban",
            EnvironmentPreset::DenseUrban => "dense_urban",
            EnvironmentPreset::HighriseUrban => "highrise_urban",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn params(self) -> EnvironmentParams {
        let (a, b, c) = match self {
            EnvironmentPreset::Suburban => (0.1, 750.0, 8.0),
            EnvironmentPreset::Urban => (0.3, 500.0, 15.0),
            EnvironmentPreset::DenseUrban => (0.5, 300.0, 20.0),
            EnvironmentPreset::HighriseUrban => (0.5, 300.0, 50.0),
        };
        EnvironmentParams {
            building_fraction: a,
            buildings_per_km2: b,
            height_scale: c,
        }
    }
}

/// Path-loss laws and fading orders of the two link states.
///
/// Intercepts are linear path losses at 1 m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub intercept_los: f64,
    pub intercept_nlos: f64,
    pub m_los: u32,
    pub m_nlos: u32,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_los > 0.0 && self.alpha_los.is_finite()) {
            return Err(invalid("alpha_los", format!("{} must be > 0", self.alpha_los)));
        }
        if !(self.alpha_nlos >= self.alpha_los && self.alpha_nlos.is_finite()) {
            return Err(invalid(
                "alpha_nlos",
                format!("{} must be >= alpha_los = {}", self.alpha_nlos, self.alpha_los),
            ));
        }
        if !(self.intercept_los > 0.0 && self.intercept_los.is_finite()) {
            return Err(invalid("intercept_los", "must be > 0"));
        }
        if !(self.intercept_nlos > 0.0 && self.intercept_nlos.is_finite()) {
            return Err(invalid("intercept_nlos", "must be > 0"));
        }
        if self.m_los == 0 {
            return Err(invalid("m_los", "fading order must be >= 1"));
        }
        if self.m_nlos == 0 {
            return Err(invalid("m_nlos", "fading order must be >= 1"));
        }
        Ok(())
    }

    pub fn exponent(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.alpha_los,
            LinkState::Nlos => self.alpha_nlos,
        }
    }

    pub fn intercept(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.intercept_los,
            LinkState::Nlos => self.intercept_nlos,
        }
    }

    pub fn fading_order(&self, state: LinkState) -> u32 {
        match state {
            LinkState::Los => self.m_los,
            LinkState::Nlos => self.m_nlos,
        }
    }

    /// `A_v * d2^(-alpha_v / 2)` for a squared 3-D distance `d2`.
    #[inline]
    pub(crate) fn attenuation_sq(&self, state: LinkState, d2: f64) -> f64 {
        self.intercept(state) * (-0.5 * self.exponent(state) * d2.ln()).exp()
    }
}

/// Two-level vertical antenna pattern. Angles are stored in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub beamwidth: f64,
    pub downtilt: f64,
    pub gain_main: f64,
    pub gain_side: f64,
}

impl AntennaPattern {
    pub fn from_degrees(beamwidth_deg: f64, downtilt_deg: f64, gain_main: f64, gain_side: f64) -> Result<Self> {
        let pattern = Self {
            beamwidth: beamwidth_deg.to_radians(),
            downtilt: downtilt_deg.to_radians(),
            gain_main,
            gain_side,
        };
        pattern.validate()?;
        Ok(pattern)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beamwidth > 0.0 && self.beamwidth < std::f64::consts::PI) {
            return Err(invalid(
                "beamwidth_deg",
                format!("{} not in (0, 180)", self.beamwidth.to_degrees()),
            ));
        }
        if !(self.downtilt.abs() <= 0.5 * std::f64::consts::PI) {
            return Err(invalid(
                "downtilt_deg",
                format!("{} not in [-90, 90]", self.downtilt.to_degrees()),
            ));
        }
        if !(self.gain_side > 0.0 && self.gain_main > self.gain_side && self.gain_main.is_finite()) {
            return Err(invalid(
                "gain_main",
                format!("need gain_main > gain_side > 0, got {} and {}", self.gain_main, self.gain_side),
            ));
        }
        Ok(())
    }

    /// Lower and upper edge of the main lobe as depression angles (radians).
    pub fn main_lobe(&self) -> (f64, f64) {
        (self.downtilt - 0.5 * self.beamwidth, self.downtilt + 0.5 * self.beamwidth)
    }
}

/// Ground distance and antenna heights of one BS-to-UE link, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub ground_distance: f64,
    pub bs_height: f64,
    pub ue_height: f64,
}

impl LinkGeometry {
    pub fn new(ground_distance: f64, bs_height: f64, ue_height: f64) -> Result<Self> {
        if !(ground_distance >= 0.0 && ground_distance.is_finite()) {
            return Err(invalid("ground_distance", format!("{ground_distance} must be >= 0")));
        }
        if !(bs_height > 0.0 && bs_height.is_finite()) {
            return Err(invalid("bs_height", format!("{bs_height} must be > 0")));
        }
        if !(ue_height >= 0.0 && ue_height.is_finite()) {
            return Err(invalid("ue_height", format!("{ue_height} must be >= 0")));
        }
        Ok(Self {
            ground_distance,
            bs_height,
            ue_height,
        })
    }

    /// `h_BS - h_D`; positive when the BS is above the UE.
    pub fn height_offset(&self) -> f64 {
        self.bs_height - self.ue_height
    }

    pub fn distance(&self) -> f64 {
        self.ground_distance.hypot(self.height_offset())
    }

    /// Angle from the BS antenna down to the UE, radians, positive below horizontal.
    pub fn depression_angle(&self) -> f64 {
        self.height_offset().atan2(self.ground_distance)
    }
}

/// Path loss `A_v d^(-alpha_v)` of a link in the given state.
pub fn path_loss(geom: &LinkGeometry, params: &ChannelParams, state: LinkState) -> Result<f64> {
    let d = geom.distance();
    if d == 0.0 {
        return Err(CoverageError::DegenerateGeometry);
    }
    Ok(params.intercept(state) * d.powf(-params.exponent(state)))
}

/// LoS probability for the `index`-th building count (`index < 0`: no
/// building in between, probability one).
pub fn los_probability_at_index(index: i64, bs_height: f64, ue_height: f64, env: &EnvironmentParams) -> f64 {
    if index < 0 {
        return 1.0;
    }
    let terms = (index + 1) as f64;
    let two_c2 = 2.0 * env.height_scale * env.height_scale;
    let drop = bs_height - ue_height;
    let mut log_p = 0.0;
    for n in 0..=index {
        let h = bs_height - (n as f64 + 0.5) * drop / terms;
        log_p += (-(-h * h / two_c2).exp()).ln_1p();
        if log_p == f64::NEG_INFINITY {
            return 0.0;
        }
    }
    log_p.exp()
}

/// Building-grid LoS probability at the link's ground distance.
pub fn los_probability(geom: &LinkGeometry, env: &EnvironmentParams) -> f64 {
    let index = env.building_index(geom.ground_distance);
    los_probability_at_index(index, geom.bs_height, geom.ue_height, env)
}

/// Radii in `(0, r_max]` where the LoS probability steps down.
pub fn los_breakpoints(env: &EnvironmentParams, r_max: f64) -> Vec<f64> {
    let step = env.step_length();
    (1..)
        .map(|k| k as f64 * step)
        .take_while(|&r| r <= r_max)
        .collect()
}

/// Lazily filled table of LoS probabilities per building index for fixed
/// heights, shared by every integrand evaluation of one scenario.
#[derive(Debug)]
pub struct LosTable {
    env: EnvironmentParams,
    bs_height: f64,
    ue_height: f64,
    cells: Vec<OnceLock<f64>>,
}

impl LosTable {
    /// Table able to serve ground distances up to `r_max`.
    pub fn new(env: EnvironmentParams, bs_height: f64, ue_height: f64, r_max: f64) -> Self {
        let len = (env.building_index(r_max).max(-1) + 2) as usize;
        Self {
            env,
            bs_height,
            ue_height,
            cells: (0..len).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn env(&self) -> &EnvironmentParams {
        &self.env
    }

    pub fn at_index(&self, index: i64) -> f64 {
        if index < 0 {
            return 1.0;
        }
        match self.cells.get(index as usize) {
            Some(cell) => *cell.get_or_init(|| los_probability_at_index(index, self.bs_height, self.ue_height, &self.env)),
            None => los_probability_at_index(index, self.bs_height, self.ue_height, &self.env),
        }
    }

    pub fn at(&self, ground_distance: f64) -> f64 {
        self.at_index(self.env.building_index(ground_distance))
    }
}

/// Gain towards a UE: main lobe when the depression angle lies inside
/// `[tilt - beamwidth/2, tilt + beamwidth/2]`, side lobe otherwise.
pub fn antenna_gain(geom: &LinkGeometry, pattern: &AntennaPattern) -> f64 {
    let psi = geom.depression_angle();
    let (lo, hi) = pattern.main_lobe();
    if lo <= psi && psi <= hi {
        pattern.gain_main
    } else {
        pattern.gain_side
    }
}

/// Ground distances where the antenna gain switches between lobes, ascending.
pub fn gain_switch_radii(bs_height: f64, ue_height: f64, pattern: &AntennaPattern) -> Vec<f64> {
    let offset = bs_height - ue_height;
    let (lo, hi) = pattern.main_lobe();
    let mut radii: Vec<f64> = [lo, hi]
        .into_iter()
        .filter(|edge| edge.abs() < FRAC_PI_2 && *edge != 0.0)
        .map(|edge| offset / edge.tan())
        .filter(|r| *r > 0.0 && r.is_finite())
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

/// Piecewise-constant gain as a function of ground distance for fixed heights.
#[derive(Debug, Clone)]
pub struct GainProfile {
    radii: Vec<f64>,
    gains: Vec<f64>,
}

impl GainProfile {
    pub fn new(bs_height: f64, ue_height: f64, pattern: &AntennaPattern) -> Self {
        let radii = gain_switch_radii(bs_height, ue_height, pattern);
        let mut probes = Vec::with_capacity(radii.len() + 1);
        let mut prev = 0.0;
        for &r in &radii {
            probes.push(0.5 * (prev + r));
            prev = r;
        }
        probes.push(if radii.is_empty() { 1.0 } else { 2.0 * prev });
        let gains = probes
            .into_iter()
            .map(|r| {
                let geom = LinkGeometry {
                    ground_distance: r,
                    bs_height,
                    ue_height,
                };
                antenna_gain(&geom, pattern)
            })
            .collect();
        Self { radii, gains }
    }

    pub fn switch_radii(&self) -> &[f64] {
        &self.radii
    }

    #[inline]
    pub fn gain_at(&self, ground_distance: f64) -> f64 {
        let idx = self.radii.iter().take_while(|&&r| r <= ground_distance).count();
        self.gains[idx]
    }

    /// Gain on the unbounded outermost interval.
    pub fn far_gain(&self) -> f64 {
        *self.gains.last().expect("profile has at least one interval")
    }

    pub fn max_gain(&self) -> f64 {
        self.gains.iter().copied().fold(f64::MIN, f64::max)
    }
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Unit-mean gamma density of the fading power (shape `m`, rate `m`).
pub fn fading_pdf(omega: f64, m: u32) -> f64 {
    assert!(m >= 1, "fading order must be >= 1");
    if omega < 0.0 {
        return 0.0;
    }
    let mf = m as f64;
    if omega == 0.0 {
        return if m == 1 { 1.0 } else { 0.0 };
    }
    (mf * mf.ln() + (mf - 1.0) * omega.ln() - mf * omega - ln_factorial(m - 1)).exp()
}

/// Draws a unit-mean gamma fading power of order `m`.
pub fn sample_fading<R: Rng + ?Sized>(m: u32, rng: &mut R) -> f64 {
    FadingSampler::new(m).sample(rng)
}

/// Reusable fading sampler for one order.
#[derive(Debug, Clone, Copy)]
pub enum FadingSampler {
    Exponential,
    Gamma { order: u32, dist: Gamma<f64> },
}

impl FadingSampler {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "fading order must be >= 1");
        if m == 1 {
            FadingSampler::Exponential
        } else {
            let mf = m as f64;
            FadingSampler::Gamma {
                order: m,
                dist: Gamma::new(mf, 1.0 / mf).expect("positive shape and scale"),
            }
        }
    }

    pub fn order(&self) -> u32 {
        match self {
            FadingSampler::Exponential => 1,
            FadingSampler::Gamma { order, .. } => *order,
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FadingSampler::Exponential => Exp1.sample(rng),
            FadingSampler::Gamma { dist, .. } => dist.sample(rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::Integrator;
    use crate::units::db_to_linear;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn urban() -> EnvironmentParams {
        EnvironmentPreset::Urban.params()
    }

    fn table1_channel() -> ChannelParams {
        ChannelParams {
            alpha_los: 2.09,
            alpha_nlos: 3.75,
            intercept_los: db_to_linear(-41.1),
            intercept_nlos: db_to_linear(-32.9),
            m_los: 3,
            m_nlos: 1,
        }
    }

    fn table1_pattern() -> AntennaPattern {
        AntennaPattern::from_degrees(40.0, 30.0, 10.0, 0.5).unwrap()
    }

    #[test]
    fn path_loss_directly_below() {
        let geom = LinkGeometry::new(0.0, 30.0, 60.0).unwrap();
        let got = path_loss(&geom, &table1_channel(), LinkState::Los).unwrap();
        let want = 10f64.powf(-4.11) * 30f64.powf(-2.09);
        assert!((got / want - 1.0).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn path_loss_equal_laws_give_equal_states() {
        let mut params = table1_channel();
        params.alpha_nlos = params.alpha_los;
        params.intercept_nlos = params.intercept_los;
        let geom = LinkGeometry::new(123.0, 30.0, 60.0).unwrap();
        assert_eq!(
            path_loss(&geom, &params, LinkState::Los).unwrap(),
            path_loss(&geom, &params, LinkState::Nlos).unwrap()
        );
    }

    #[test]
    fn path_loss_inverse_square() {
        let mut params = table1_channel();
        params.alpha_los = 2.0;
        let near = path_loss(&LinkGeometry::new(30.0, 10.0, 50.0).unwrap(), &params, LinkState::Los).unwrap();
        let far = path_loss(&LinkGeometry::new(60.0, 10.0, 90.0).unwrap(), &params, LinkState::Los).unwrap();
        assert!((near / far - 4.0).abs() < 1e-12);
    }

    #[test]
    fn path_loss_rejects_zero_length_link() {
        let geom = LinkGeometry::new(0.0, 30.0, 30.0).unwrap();
        assert_eq!(
            path_loss(&geom, &table1_channel(), LinkState::Nlos),
            Err(CoverageError::DegenerateGeometry)
        );
    }

    #[test]
    fn los_probability_examples() {
        let env = urban();
        let near = LinkGeometry::new(10.0, 30.0, 60.0).unwrap();
        assert_eq!(env.building_index(10.0), -1);
        assert_eq!(los_probability(&near, &env), 1.0);

        let geom = LinkGeometry::new(100.0, 30.0, 60.0).unwrap();
        assert_eq!(env.building_index(100.0), 0);
        let want = 1.0 - (-4.5f64).exp();
        assert!((los_probability(&geom, &env) - want).abs() < 1e-15);
        assert!((want - 0.98889).abs() < 1e-5);
    }

    #[test]
    fn los_probability_grows_with_altitude() {
        let env = urban();
        for r in [50.0, 120.0, 400.0, 1500.0, 5000.0] {
            let mut prev = 0.0;
            for k in 0..=60 {
                let h = 5.0 * k as f64;
                let p = los_probability(&LinkGeometry::new(r, 30.0, h).unwrap(), &env);
                assert!(p >= prev - 1e-15, "r={r} h={h}: {p} < {prev}");
                prev = p;
            }
        }
    }

    #[test]
    fn los_probability_equal_heights_is_finite() {
        let env = urban();
        for r in [0.0, 90.0, 1000.0] {
            let p = los_probability(&LinkGeometry::new(r, 30.0, 30.0).unwrap(), &env);
            let index = env.building_index(r);
            let single = 1.0 - (-(30.0f64 * 30.0) / 450.0).exp();
            let want = if index < 0 { 1.0 } else { single.powi(index as i32 + 1) };
            assert!(p.is_finite());
            assert!((p - want).abs() < 1e-14);
        }
    }

    #[test]
    fn breakpoints_urban() {
        let bps = los_breakpoints(&urban(), 200.0);
        assert_eq!(bps.len(), 2);
        assert!((bps[0] - 81.65).abs() < 0.01);
        assert!((bps[1] - 163.30).abs() < 0.01);
        assert!(los_breakpoints(&urban(), 50.0).is_empty());
        let many = los_breakpoints(&urban(), 5000.0);
        let step = urban().step_length();
        for w in many.windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - step).abs() < 1e-9);
        }
    }

    #[test]
    fn los_probability_is_constant_between_breakpoints() {
        let env = urban();
        let bps = los_breakpoints(&env, 2000.0);
        let mut edges = vec![0.0];
        edges.extend(&bps);
        for w in edges.windows(2) {
            let values: Vec<f64> = (1..10)
                .map(|i| w[0] + (w[1] - w[0]) * i as f64 / 10.0)
                .map(|r| los_probability(&LinkGeometry::new(r, 30.0, 60.0).unwrap(), &env))
                .collect();
            assert!(values.iter().all(|&v| v == values[0]));
        }
    }

    #[test]
    fn los_table_matches_direct_evaluation() {
        let env = urban();
        let table = LosTable::new(env, 30.0, 60.0, 3000.0);
        for r in [0.0, 10.0, 81.0, 100.0, 999.0, 2999.0, 8000.0] {
            let direct = los_probability(&LinkGeometry::new(r, 30.0, 60.0).unwrap(), &env);
            assert_eq!(table.at(r), direct);
        }
    }

    #[test]
    fn gain_examples() {
        let pattern = table1_pattern();
        let above = LinkGeometry::new(100.0, 30.0, 60.0).unwrap();
        assert!((above.depression_angle().to_degrees() + 16.7).abs() < 0.05);
        assert_eq!(antenna_gain(&above, &pattern), 0.5);

        let r = 30.0 / 30f64.to_radians().tan();
        assert!((r - 51.96).abs() < 0.01);
        let ground = LinkGeometry::new(r, 30.0, 0.0).unwrap();
        assert!((ground.depression_angle().to_degrees() - 30.0).abs() < 1e-9);
        assert_eq!(antenna_gain(&ground, &pattern), 10.0);
    }

    #[test]
    fn gain_full_hemisphere() {
        let pattern = AntennaPattern {
            beamwidth: std::f64::consts::PI,
            downtilt: 0.0,
            gain_main: 10.0,
            gain_side: 0.5,
        };
        for (r, hb, hu) in [(0.0, 30.0, 60.0), (0.0, 30.0, 0.0), (5.0, 30.0, 30.0), (1e4, 10.0, 300.0)] {
            assert_eq!(antenna_gain(&LinkGeometry::new(r, hb, hu).unwrap(), &pattern), 10.0);
        }
    }

    #[test]
    fn switch_radii_examples() {
        let pattern = table1_pattern();
        let radii = gain_switch_radii(30.0, 0.0, &pattern);
        assert_eq!(radii.len(), 2);
        assert!((radii[0] - 30.0 / 50f64.to_radians().tan()).abs() < 1e-9);
        assert!((radii[0] - 25.17).abs() < 0.01);
        assert!((radii[1] - 170.14).abs() < 0.01);
        assert!(gain_switch_radii(30.0, 60.0, &pattern).is_empty());
    }

    #[test]
    fn switch_radii_are_where_gain_changes() {
        let pattern = table1_pattern();
        for (hb, hu) in [(30.0, 0.0), (30.0, 1.5), (60.0, 10.0)] {
            for r in gain_switch_radii(hb, hu, &pattern) {
                let below = antenna_gain(&LinkGeometry::new(r * (1.0 - 1e-9), hb, hu).unwrap(), &pattern);
                let above = antenna_gain(&LinkGeometry::new(r * (1.0 + 1e-9), hb, hu).unwrap(), &pattern);
                assert_ne!(below, above);
            }
        }
    }

    #[test]
    fn gain_profile_agrees_with_pattern() {
        let pattern = AntennaPattern::from_degrees(40.0, 10.0, 10.0, 0.5).unwrap();
        for (hb, hu) in [(30.0, 0.0), (30.0, 60.0), (30.0, 30.0), (10.0, 300.0)] {
            let profile = GainProfile::new(hb, hu, &pattern);
            for i in 0..500 {
                let r = 0.37 + 3.1 * i as f64;
                let want = antenna_gain(&LinkGeometry::new(r, hb, hu).unwrap(), &pattern);
                assert_eq!(profile.gain_at(r), want, "hb={hb} hu={hu} r={r}");
            }
        }
    }

    #[test]
    fn fading_pdf_at_origin() {
        assert_eq!(fading_pdf(0.0, 1), 1.0);
        assert_eq!(fading_pdf(0.0, 3), 0.0);
    }

    #[test]
    fn fading_pdf_is_unit_mean_density() {
        let quad = Integrator::new(1e-12, 1e-14);
        for m in [1u32, 2, 3, 10, 100] {
            // Mass beyond 60 is below e^-60 even for m = 1.
            let breaks = [0.0, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0, 60.0];
            let mass = quad.integrate_breaks(|w| fading_pdf(w, m), &breaks).unwrap();
            let mean = quad.integrate_breaks(|w| w * fading_pdf(w, m), &breaks).unwrap();
            assert!((mass.value - 1.0).abs() < 1e-8, "m={m} mass {}", mass.value);
            assert!((mean.value - 1.0).abs() < 1e-8, "m={m} mean {}", mean.value);
        }
    }

    fn moments(m: u32, n: usize, seed: u64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampler = FadingSampler::new(m);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let x = sampler.sample(&mut rng);
            assert!(x >= 0.0);
            s += x;
            s2 += x * x;
        }
        let mean = s / n as f64;
        (mean, s2 / n as f64 - mean * mean)
    }

    #[test]
    fn fading_samples_match_moments() {
        let (mean3, _) = moments(3, 1_000_000, 1);
        assert!((mean3 - 1.0).abs() < 0.005, "{mean3}");
        let (_, var1) = moments(1, 1_000_000, 2);
        assert!((var1 - 1.0).abs() < 0.01, "{var1}");
        let (mean100, var100) = moments(100, 200_000, 3);
        assert!((mean100 - 1.0).abs() < 0.002);
        assert!((var100.sqrt() - 0.1).abs() < 0.003, "{}", var100.sqrt());
    }

    #[test]
    fn sample_fading_uses_requested_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = sample_fading(4, &mut rng);
        assert!(x > 0.0);
        assert_eq!(FadingSampler::new(4).order(), 4);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        assert!(EnvironmentParams::new(1.5, 500.0, 15.0).is_err());
        assert!(EnvironmentParams::new(0.3, 0.0, 15.0).is_err());
        assert!(AntennaPattern::from_degrees(180.0, 30.0, 10.0, 0.5).is_err());
        assert!(AntennaPattern::from_degrees(40.0, 30.0, 0.5, 10.0).is_err());
        let mut params = table1_channel();
        params.alpha_nlos = 2.0;
        assert!(params.validate().is_err());
        params = table1_channel();
        params.m_nlos = 0;
        assert!(params.validate().is_err());
        assert!(LinkGeometry::new(-1.0, 30.0, 0.0).is_err());
        assert!(LinkGeometry::new(1.0, 0.0, 0.0).is_err());
    }
}
