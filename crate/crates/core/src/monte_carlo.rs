//! Simulation oracle: drops of a PPP base-station field on a disk centred
//! under the UE.
//!
//! Each drop has its own ChaCha8 stream keyed by `(seed, drop)`, so results
//! do not depend on how drops are spread over threads. Floating-point sums
//! are reduced in fixed blocks of drops, in drop order.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::channel::{antenna_gain, path_loss, FadingSampler, GainProfile, LinkGeometry, LinkState, LosTable};
use crate::error::{invalid, CoverageError, Result};
use crate::scenario::NetworkScenario;

/// Default sampling disk. At the reference scenario the interference from
/// beyond 10 km moves coverage by about 5e-4.
pub const DEFAULT_DISK_RADIUS: f64 = 10_000.0;

const BLOCK: u64 = 1024;

/// Optional constraints on the serving (nearest) BS.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Conditioning {
    /// Fixed ground distance of the nearest BS; the others are drawn beyond it.
    pub serving_distance: Option<f64>,
    /// Forced link state of the nearest BS.
    pub serving_state: Option<LinkState>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSpec {
    pub num_drops: u64,
    pub disk_radius: f64,
    pub seed: u64,
    pub conditioning: Conditioning,
}

impl Default for SimulationSpec {
    fn default() -> Self {
        Self {
            num_drops: 100_000,
            disk_radius: DEFAULT_DISK_RADIUS,
            seed: 1,
            conditioning: Conditioning::default(),
        }
    }
}

impl SimulationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_drops == 0 {
            return Err(invalid("num_drops", "must be >= 1"));
        }
        if !(self.disk_radius > 0.0 && self.disk_radius.is_finite()) {
            return Err(invalid("disk_radius", format!("{} must be > 0", self.disk_radius)));
        }
        if let Some(r0) = self.conditioning.serving_distance {
            if !(r0 >= 0.0 && r0 < self.disk_radius) {
                return Err(invalid(
                    "serving_distance",
                    format!("{r0} must lie in [0, disk_radius = {})", self.disk_radius),
                ));
            }
        }
        Ok(())
    }
}

/// One drop. Index 0 is not special; the serving BS is the one closest to
/// the origin.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NetworkRealization {
    pub positions: Vec<[f64; 2]>,
    pub states: Vec<LinkState>,
    pub fading: Vec<f64>,
}

impl NetworkRealization {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn ground_distance(&self, i: usize) -> f64 {
        let [x, y] = self.positions[i];
        x.hypot(y)
    }

    pub fn serving_index(&self) -> Option<usize> {
        (0..self.len()).min_by(|&a, &b| self.ground_distance(a).total_cmp(&self.ground_distance(b)))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimDiagnostics {
    /// Drops redrawn because the disk held no BS.
    pub empty_resamples: u64,
    /// Drops with a lone BS, counted as covered.
    pub single_bs_drops: u64,
    pub mean_bs_count: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub probability: f64,
    pub std_error: f64,
    pub num_drops: u64,
    pub diagnostics: SimDiagnostics,
}

/// Empirical `E[exp(-s I)]` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEstimate {
    pub s: f64,
    pub mean: f64,
    pub std_error: f64,
}

/// Random stream of one drop.
pub fn drop_rng(seed: u64, drop: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(drop);
    rng
}

#[derive(Debug, Clone, Copy)]
struct Station {
    r: f64,
    angle: f64,
    state: LinkState,
    fading: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct DropOutcome {
    signal: f64,
    interference: f64,
    stations: u64,
    empty_resamples: u64,
}

impl DropOutcome {
    fn sir(&self) -> f64 {
        if self.stations == 1 {
            f64::INFINITY
        } else {
            self.signal / self.interference
        }
    }
}

/// Precomputed sampling state for one scenario and spec.
#[derive(Debug)]
pub struct Simulator {
    scn: NetworkScenario,
    spec: SimulationSpec,
    los: LosTable,
    gains: GainProfile,
    fading: [FadingSampler; 2],
    offset_sq: f64,
}

impl Simulator {
    pub fn new(scn: NetworkScenario, spec: SimulationSpec) -> Result<Self> {
        scn.validate()?;
        spec.validate()?;
        let offset_sq = (scn.bs_height - scn.ue_height).powi(2);
        if spec.conditioning.serving_distance == Some(0.0) && offset_sq == 0.0 {
            return Err(CoverageError::DegenerateGeometry);
        }
        Ok(Self {
            los: LosTable::new(scn.env, scn.bs_height, scn.ue_height, spec.disk_radius),
            gains: GainProfile::new(scn.bs_height, scn.ue_height, &scn.pattern),
            fading: [FadingSampler::new(scn.channel.m_los), FadingSampler::new(scn.channel.m_nlos)],
            offset_sq,
            scn,
            spec,
        })
    }

    pub fn scenario(&self) -> &NetworkScenario {
        &self.scn
    }

    pub fn spec(&self) -> &SimulationSpec {
        &self.spec
    }

    #[inline]
    fn power(&self, st: &Station) -> f64 {
        let d2 = st.r * st.r + self.offset_sq;
        self.scn.tx_power * self.gains.gain_at(st.r) * self.scn.channel.attenuation_sq(st.state, d2) * st.fading
    }

    #[inline]
    fn station<R: Rng>(&self, r: f64, forced: Option<LinkState>, rng: &mut R) -> Station {
        let angle = 2.0 * PI * rng.random::<f64>();
        let u: f64 = rng.random();
        let state = forced.unwrap_or(if u < self.los.at(r) { LinkState::Los } else { LinkState::Nlos });
        let fading = self.fading[state as usize].sample(rng);
        Station { r, angle, state, fading }
    }

    fn poisson<R: Rng>(mean: f64, rng: &mut R) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
    }

    /// Draws one drop, visiting the serving BS first. Returns the number of
    /// empty disks that were redrawn.
    fn draw<R: Rng>(&self, rng: &mut R, mut visit: impl FnMut(&Station)) -> u64 {
        let radius_sq = self.spec.disk_radius * self.spec.disk_radius;
        let density = self.scn.bs_density;
        let mut empty = 0;
        let (r_serv, others) = match self.spec.conditioning.serving_distance {
            Some(r0) => (r0, Self::poisson(density * PI * (radius_sq - r0 * r0), rng)),
            None => loop {
                let n = Self::poisson(density * PI * radius_sq, rng);
                if n == 0 {
                    empty += 1;
                    continue;
                }
                // Minimum of n uniform points: P(r1 > r) = (1 - r^2/R^2)^n.
                let v = 1.0 - rng.random::<f64>();
                let r1 = (-(v.ln() / n as f64).exp_m1() * radius_sq).sqrt();
                break (r1, n - 1);
            },
        };
        visit(&self.station(r_serv, self.spec.conditioning.serving_state, rng));
        let inner_sq = r_serv * r_serv;
        for _ in 0..others {
            let r = (inner_sq + rng.random::<f64>() * (radius_sq - inner_sq)).sqrt();
            visit(&self.station(r, None, rng));
        }
        empty
    }

    /// Full realization of drop `drop`.
    pub fn realization(&self, drop: u64) -> NetworkRealization {
        self.sample_with(&mut drop_rng(self.spec.seed, drop))
    }

    /// Realization drawn from an arbitrary stream.
    pub fn sample_with<R: Rng>(&self, rng: &mut R) -> NetworkRealization {
        let mut real = NetworkRealization::default();
        self.draw(rng, |st| {
            real.positions.push([st.r * st.angle.cos(), st.r * st.angle.sin()]);
            real.states.push(st.state);
            real.fading.push(st.fading);
        });
        real
    }

    fn run_drop(&self, drop: u64) -> DropOutcome {
        let mut rng = drop_rng(self.spec.seed, drop);
        let mut out = DropOutcome::default();
        out.empty_resamples = self.draw(&mut rng, |st| {
            let p = self.power(st);
            if out.stations == 0 {
                out.signal = p;
            } else {
                out.interference += p;
            }
            out.stations += 1;
        });
        out
    }

    /// SIR of drop `drop`, `inf` when it holds a single BS.
    pub fn drop_sir(&self, drop: u64) -> f64 {
        self.run_drop(drop).sir()
    }

    /// Fraction of drops with `SIR > T`.
    pub fn estimate_coverage(&self) -> CoverageEstimate {
        let threshold = self.scn.sir_threshold;
        let (covered, empty, single, stations) = (0..self.spec.num_drops)
            .into_par_iter()
            .map(|d| {
                let o = self.run_drop(d);
                (u64::from(o.sir() > threshold), o.empty_resamples, u64::from(o.stations == 1), o.stations)
            })
            .reduce(|| (0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3));
        let n = self.spec.num_drops as f64;
        let p = covered as f64 / n;
        CoverageEstimate {
            probability: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
            num_drops: self.spec.num_drops,
            diagnostics: SimDiagnostics {
                empty_resamples: empty,
                single_bs_drops: single,
                mean_bs_count: stations as f64 / n,
            },
        }
    }

    /// Empirical `E[exp(-s I)]` for each `s`, where `I` excludes the serving BS.
    pub fn estimate_laplace(&self, s_values: &[f64]) -> Result<Vec<LaplaceEstimate>> {
        if let Some(s) = s_values.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(invalid("s", format!("{s} must be finite and >= 0")));
        }
        let k = s_values.len();
        let drops = self.spec.num_drops;
        let blocks: Vec<Vec<(f64, f64)>> = (0..drops.div_ceil(BLOCK))
            .into_par_iter()
            .map(|b| {
                let mut acc = vec![(0.0, 0.0); k];
                for d in b * BLOCK..((b + 1) * BLOCK).min(drops) {
                    let interference = self.run_drop(d).interference;
                    for (slot, s) in acc.iter_mut().zip(s_values) {
                        let v = (-s * interference).exp();
                        slot.0 += v;
                        slot.1 += v * v;
                    }
                }
                acc
            })
            .collect();
        let n = drops as f64;
        Ok((0..k)
            .map(|j| {
                let (sum, sum_sq) = blocks.iter().fold((0.0, 0.0), |a, blk| (a.0 + blk[j].0, a.1 + blk[j].1));
                let mean = sum / n;
                let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
                LaplaceEstimate {
                    s: s_values[j],
                    mean,
                    std_error: (var / n).sqrt(),
                }
            })
            .collect())
    }
}

/// Draws one realization from `rng`.
pub fn sample_network<R: Rng>(scn: &NetworkScenario, spec: &SimulationSpec, rng: &mut R) -> Result<NetworkRealization> {
    Ok(Simulator::new(*scn, *spec)?.sample_with(rng))
}

/// SIR at the origin with nearest-BS association, `inf` for a lone BS.
pub fn compute_sir(real: &NetworkRealization, scn: &NetworkScenario) -> Result<f64> {
    let serving = real
        .serving_index()
        .ok_or_else(|| invalid("realization", "holds no base station"))?;
    let mut signal = 0.0;
    let mut interference = 0.0;
    for i in 0..real.len() {
        let geom = LinkGeometry::new(real.ground_distance(i), scn.bs_height, scn.ue_height)?;
        let p = scn.tx_power * antenna_gain(&geom, &scn.pattern) * path_loss(&geom, &scn.channel, real.states[i])? * real.fading[i];
        if i == serving {
            signal = p;
        } else {
            interference += p;
        }
    }
    Ok(if real.len() == 1 { f64::INFINITY } else { signal / interference })
}

pub fn estimate_coverage(scn: &NetworkScenario, spec: &SimulationSpec) -> Result<CoverageEstimate> {
    Ok(Simulator::new(*scn, *spec)?.estimate_coverage())
}

pub fn estimate_laplace(scn: &NetworkScenario, spec: &SimulationSpec, s_values: &[f64]) -> Result<Vec<LaplaceEstimate>> {
    Simulator::new(*scn, *spec)?.estimate_laplace(s_values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::los_probability;
    use crate::scenario::GROUND_UE_HEIGHT;

    fn spec(num_drops: u64, disk_radius: f64) -> SimulationSpec {
        SimulationSpec {
            num_drops,
            disk_radius,
            ..SimulationSpec::default()
        }
    }

    #[test]
    fn mean_station_count() {
        let sim = Simulator::new(NetworkScenario::reference(), spec(1000, 5000.0)).unwrap();
        let total: usize = (0..1000).map(|d| sim.realization(d).len()).sum();
        let mean = total as f64 / 1000.0;
        let want = 5e-5 * PI * 25e6;
        assert!((mean / want - 1.0).abs() < 0.02, "{mean} vs {want}");
    }

    #[test]
    fn positions_stay_in_disk() {
        let sim = Simulator::new(NetworkScenario::reference(), spec(10, 800.0)).unwrap();
        for d in 0..10 {
            let real = sim.realization(d);
            assert!(!real.is_empty());
            for i in 0..real.len() {
                assert!(real.ground_distance(i) <= 800.0);
                assert!(real.fading[i] > 0.0);
            }
        }
    }

    #[test]
    fn los_fraction_in_thin_annulus() {
        let scn = NetworkScenario::reference();
        let sim = Simulator::new(scn, spec(20_000, 200.0)).unwrap();
        let (mut los, mut n) = (0u64, 0u64);
        for d in 0..20_000 {
            let real = sim.realization(d);
            for i in 0..real.len() {
                let r = real.ground_distance(i);
                if (90.0..110.0).contains(&r) {
                    n += 1;
                    los += u64::from(real.states[i] == LinkState::Los);
                }
            }
        }
        let geom = LinkGeometry::new(100.0, scn.bs_height, scn.ue_height).unwrap();
        let p = los_probability(&geom, &scn.env);
        let frac = los as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!(n > 5000);
        assert!((frac - p).abs() < 3.0 * se, "{frac} vs {p} (se {se})");
    }

    #[test]
    fn conditioning_fixes_the_nearest_station() {
        let mut sp = spec(50, 2000.0);
        sp.conditioning = Conditioning {
            serving_distance: Some(150.0),
            serving_state: Some(LinkState::Nlos),
        };
        let sim = Simulator::new(NetworkScenario::reference(), sp).unwrap();
        for d in 0..50 {
            let real = sim.realization(d);
            let i = real.serving_index().unwrap();
            assert!((real.ground_distance(i) - 150.0).abs() < 1e-9);
            assert_eq!(real.states[i], LinkState::Nlos);
        }
    }

    #[test]
    fn symmetric_pair_has_unit_sir() {
        let scn = NetworkScenario::reference();
        let real = NetworkRealization {
            positions: vec![[70.0, 0.0], [0.0, -70.0]],
            states: vec![LinkState::Los; 2],
            fading: vec![1.3; 2],
        };
        assert_eq!(compute_sir(&real, &scn).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_three_stations() {
        let mut scn = NetworkScenario::reference().with_ue_height(GROUND_UE_HEIGHT);
        scn.tx_power = 0.25;
        let real = NetworkRealization {
            positions: vec![[0.0, 120.0], [30.0, 40.0], [-400.0, 0.0]],
            states: vec![LinkState::Nlos, LinkState::Los, LinkState::Los],
            fading: vec![0.5, 1.0, 2.0],
        };
        // Depression angles: 40 m -> 35.5 deg, 120 m -> 13.4 deg (main lobe), 400 m -> 4.1 deg (side lobe).
        let h: f64 = 28.5;
        let a_l = 10f64.powf(-4.11);
        let a_n = 10f64.powf(-3.29);
        let serving = 0.25 * 10.0 * a_l * (50f64.powi(2) + h * h).sqrt().powf(-2.09) * 1.0;
        let i1 = 0.25 * 10.0 * a_n * (120f64.powi(2) + h * h).sqrt().powf(-3.75) * 0.5;
        let i2 = 0.25 * 0.5 * a_l * (400f64.powi(2) + h * h).sqrt().powf(-2.09) * 2.0;
        let sir = compute_sir(&real, &scn).unwrap();
        assert!((sir / (serving / (i1 + i2)) - 1.0).abs() < 1e-12, "{sir}");
    }

    #[test]
    fn transmit_power_cancels_in_sir() {
        let scn = NetworkScenario::reference();
        let sim = Simulator::new(scn, spec(5, 1500.0)).unwrap();
        for d in 0..5 {
            let real = sim.realization(d);
            let base = compute_sir(&real, &scn).unwrap();
            let mut loud = scn;
            loud.tx_power *= 10.0;
            assert!((compute_sir(&real, &loud).unwrap() / base - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn fast_path_matches_realization() {
        let scn = NetworkScenario::reference().with_fading(3, 2);
        let sim = Simulator::new(scn, spec(20, 2500.0)).unwrap();
        for d in 0..20 {
            let a = sim.drop_sir(d);
            let b = compute_sir(&sim.realization(d), &scn).unwrap();
            assert!((a / b - 1.0).abs() < 1e-12, "drop {d}: {a} vs {b}");
        }
    }

    #[test]
    fn lone_stations_count_as_covered() {
        let mut scn = NetworkScenario::reference();
        scn.bs_density = 1e-8;
        scn.sir_threshold = 1e6;
        let est = Simulator::new(scn, spec(2000, 2000.0)).unwrap().estimate_coverage();
        assert!(est.diagnostics.empty_resamples > 0);
        assert!(est.diagnostics.single_bs_drops > 1500);
        assert!(est.probability * 2000.0 >= est.diagnostics.single_bs_drops as f64);
    }

    #[test]
    fn estimate_contract() {
        let mut scn = NetworkScenario::reference();
        let sp = spec(400, 1500.0);
        let a = estimate_coverage(&scn, &sp).unwrap();
        let b = estimate_coverage(&scn, &sp).unwrap();
        assert_eq!(a, b);
        assert!(a.std_error <= 0.5 / (a.num_drops as f64).sqrt() + 1e-15);
        scn.sir_threshold = 1e-12;
        assert_eq!(estimate_coverage(&scn, &sp).unwrap().probability, 1.0);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let scn = NetworkScenario::reference();
        let mut sp = spec(3000, 1500.0);
        sp.conditioning.serving_distance = Some(60.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    let sim = Simulator::new(scn, sp).unwrap();
                    (sim.estimate_coverage(), sim.estimate_laplace(&[1e6, 1e8]).unwrap())
                })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn laplace_at_zero_is_one() {
        let mut sp = spec(100, 1000.0);
        sp.conditioning.serving_distance = Some(40.0);
        let est = estimate_laplace(&NetworkScenario::reference(), &sp, &[0.0]).unwrap();
        assert_eq!(est[0].mean, 1.0);
        assert_eq!(est[0].std_error, 0.0);
    }

    #[test]
    fn invalid_specs_rejected() {
        let scn = NetworkScenario::reference();
        assert!(Simulator::new(scn, spec(0, 100.0)).is_err());
        assert!(Simulator::new(scn, spec(10, -1.0)).is_err());
        let mut sp = spec(10, 100.0);
        sp.conditioning.serving_distance = Some(150.0);
        assert!(Simulator::new(scn, sp).is_err());
        let mut level = scn;
        level.ue_height = level.bs_height;
        sp.conditioning.serving_distance = Some(0.0);
        assert!(matches!(Simulator::new(level, sp), Err(CoverageError::DegenerateGeometry)));
        assert!(estimate_laplace(&scn, &spec(10, 100.0), &[-1.0]).is_err());
    }
}
