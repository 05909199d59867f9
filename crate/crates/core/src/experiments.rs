//! Parameter sweeps, figure presets and the analytic/simulation
//! cross-validation matrix.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::analytic::{CoverageModel, Method, QuadratureSpec};
use crate::channel::{EnvironmentPreset, LinkState};
use crate::error::{CoverageError, Result};
use crate::monte_carlo::{Conditioning, SimulationSpec, Simulator};
use crate::scenario::{NetworkScenario, GROUND_UE_HEIGHT};
use crate::units::{db_to_linear, per_km2_to_per_m2};

/// CSV header of every sweep output.
pub const CSV_HEADER: [&str; 6] = ["param_1", "param_2", "method", "probability", "error_estimate", "wall_time_s"];

/// Scenario field addressed by a sweep axis, in configuration units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    /// Meters.
    UeHeight,
    /// Meters.
    BsHeight,
    /// BSs per km².
    BsDensity,
    /// Linear.
    SirThreshold,
    /// dB.
    TxPower,
    AlphaLos,
    AlphaNlos,
    /// dB.
    InterceptLos,
    /// dB.
    InterceptNlos,
    /// Degrees.
    Downtilt,
    /// Degrees.
    Beamwidth,
    GainMain,
    GainSide,
    BuildingFraction,
    BuildingsPerKm2,
    HeightScale,
    /// `(m_los, m_nlos)` pairs.
    Fading,
    Environment,
    /// Environment preset combined with a downtilt in degrees.
    EnvironmentTilt,
}

impl SweepParam {
    pub const ALL: [SweepParam; 19] = [
        SweepParam::UeHeight,
        SweepParam::BsHeight,
        SweepParam::BsDensity,
        SweepParam::SirThreshold,
        SweepParam::TxPower,
        SweepParam::AlphaLos,
        SweepParam::AlphaNlos,
        SweepParam::InterceptLos,
        SweepParam::InterceptNlos,
        SweepParam::Downtilt,
        SweepParam::Beamwidth,
        SweepParam::GainMain,
        SweepParam::GainSide,
        SweepParam::BuildingFraction,
        SweepParam::BuildingsPerKm2,
        SweepParam::HeightScale,
        SweepParam::Fading,
        SweepParam::Environment,
        SweepParam::EnvironmentTilt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::UeHeight => "ue_height",
            SweepParam::BsHeight => "bs_height",
            SweepParam::BsDensity => "bs_density",
            SweepParam::SirThreshold => "sir_threshold",
            SweepParam::TxPower => "tx_power_db",
            SweepParam::AlphaLos => "alpha_los",
            SweepParam::AlphaNlos => "alpha_nlos",
            SweepParam::InterceptLos => "intercept_los_db",
            SweepParam::InterceptNlos => "intercept_nlos_db",
            SweepParam::Downtilt => "downtilt_deg",
            SweepParam::Beamwidth => "beamwidth_deg",
            SweepParam::GainMain => "gain_main",
            SweepParam::GainSide => "gain_side",
            SweepParam::BuildingFraction => "building_fraction",
            SweepParam::BuildingsPerKm2 => "buildings_per_km2",
            SweepParam::HeightScale => "height_scale",
            SweepParam::Fading => "fading",
            SweepParam::Environment => "environment",
            SweepParam::EnvironmentTilt => "environment_tilt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    fn is_numeric(self) -> bool {
        !matches!(self, SweepParam::Fading | SweepParam::Environment | SweepParam::EnvironmentTilt)
    }

    /// Parses one grid value written as in the CSV output.
    pub fn parse_value(self, text: &str) -> Result<AxisValue> {
        let text = text.trim();
        let bad = || CoverageError::Config(format!("bad value `{text}` for sweep parameter `{}`", self.name()));
        match self {
            SweepParam::Fading => {
                let (l, n) = text.split_once(':').ok_or_else(bad)?;
                Ok(AxisValue::Fading(l.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
            }
            SweepParam::Environment => EnvironmentPreset::from_name(text).map(AxisValue::Environment).ok_or_else(bad),
            SweepParam::EnvironmentTilt => {
                let (env, tilt) = text.split_once('/').ok_or_else(bad)?;
                Ok(AxisValue::EnvironmentTilt(
                    EnvironmentPreset::from_name(env.trim()).ok_or_else(bad)?,
                    tilt.trim().parse().map_err(|_| bad())?,
                ))
            }
            _ => text.parse().map(AxisValue::Number).map_err(|_| bad()),
        }
    }

    /// Writes `value` into `scn`. The caller validates the result.
    pub fn apply(self, scn: &mut NetworkScenario, value: &AxisValue) -> Result<()> {
        let mismatch = || CoverageError::Config(format!("value {value} does not fit sweep parameter `{}`", self.name()));
        match (self, value) {
            (SweepParam::Fading, AxisValue::Fading(l, n)) => {
                scn.channel.m_los = *l;
                scn.channel.m_nlos = *n;
            }
            (SweepParam::Environment, AxisValue::Environment(env)) => scn.env = env.params(),
            (SweepParam::EnvironmentTilt, AxisValue::EnvironmentTilt(env, tilt)) => {
                scn.env = env.params();
                scn.pattern.downtilt = tilt.to_radians();
            }
            (_, AxisValue::Number(x)) if self.is_numeric() => {
                let x = *x;
                match self {
                    SweepParam::UeHeight => scn.ue_height = x,
                    SweepParam::BsHeight => scn.bs_height = x,
                    SweepParam::BsDensity => scn.bs_density = per_km2_to_per_m2(x),
                    SweepParam::SirThreshold => scn.sir_threshold = x,
                    SweepParam::TxPower => scn.tx_power = db_to_linear(x),
                    SweepParam::AlphaLos => scn.channel.alpha_los = x,
                    SweepParam::AlphaNlos => scn.channel.alpha_nlos = x,
                    SweepParam::InterceptLos => scn.channel.intercept_los = db_to_linear(x),
                    SweepParam::InterceptNlos => scn.channel.intercept_nlos = db_to_linear(x),
                    SweepParam::Downtilt => scn.pattern.downtilt = x.to_radians(),
                    SweepParam::Beamwidth => scn.pattern.beamwidth = x.to_radians(),
                    SweepParam::GainMain => scn.pattern.gain_main = x,
                    SweepParam::GainSide => scn.pattern.gain_side = x,
                    SweepParam::BuildingFraction => scn.env.building_fraction = x,
                    SweepParam::BuildingsPerKm2 => scn.env.buildings_per_km2 = x,
                    SweepParam::HeightScale => scn.env.height_scale = x,
                    _ => unreachable!(),
                }
            }
            _ => return Err(mismatch()),
        }
        Ok(())
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One grid value of an axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisValue {
    Number(f64),
    Fading(u32, u32),
    Environment(EnvironmentPreset),
    /// Environment and downtilt in degrees.
    EnvironmentTilt(EnvironmentPreset, f64),
}

impl AxisValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            AxisValue::Number(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValue::Number(x) => write!(f, "{x}"),
            AxisValue::Fading(l, n) => write!(f, "{l}:{n}"),
            AxisValue::Environment(env) => f.write_str(env.name()),
            AxisValue::EnvironmentTilt(env, tilt) => write!(f, "{}/{tilt}", env.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub values: Vec<AxisValue>,
}

impl Axis {
    pub fn new(param: SweepParam, values: Vec<AxisValue>) -> Self {
        Self { param, values }
    }

    pub fn numeric(param: SweepParam, values: impl IntoIterator<Item = f64>) -> Self {
        Self::new(param, values.into_iter().map(AxisValue::Number).collect())
    }

    /// `start, start + step, ...` up to and including `stop`.
    pub fn range(param: SweepParam, start: f64, stop: f64, step: f64) -> Self {
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Self::numeric(param, (0..n).map(|i| start + i as f64 * step))
    }

    fn validate(&self) -> Result<()> {
        let name = self.param.name();
        if self.values.is_empty() {
            return Err(CoverageError::Config(format!("grid of `{name}` is empty")));
        }
        for v in &self.values {
            let mut probe = NetworkScenario::reference();
            self.param.apply(&mut probe, v)?;
        }
        if self.param.is_numeric() {
            let xs: Vec<f64> = self.values.iter().filter_map(AxisValue::as_number).collect();
            let up = xs.windows(2).all(|w| w[1] > w[0]);
            let down = xs.windows(2).all(|w| w[1] < w[0]);
            if !(up || down) || xs.iter().any(|x| !x.is_finite()) {
                return Err(CoverageError::Config(format!("grid of `{name}` must be finite and strictly monotone")));
            }
        } else {
            for (i, a) in self.values.iter().enumerate() {
                if self.values[..i].contains(a) {
                    return Err(CoverageError::Config(format!("grid of `{name}` repeats {a}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub base: NetworkScenario,
    /// One or two axes; the first varies fastest in the output.
    pub axes: Vec<Axis>,
    pub methods: Vec<Method>,
    pub quadrature: QuadratureSpec,
    pub simulation: SimulationSpec,
    /// Record per-row wall time. Off gives byte-reproducible output.
    pub record_timing: bool,
}

impl SweepSpec {
    pub fn new(name: impl Into<String>, base: NetworkScenario, axes: Vec<Axis>, methods: Vec<Method>) -> Self {
        Self {
            name: name.into(),
            base,
            axes,
            methods,
            quadrature: QuadratureSpec::default(),
            simulation: SimulationSpec::default(),
            record_timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(CoverageError::Config(format!("a sweep needs 1 or 2 axes, got {}", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(CoverageError::Config(format!("both axes sweep `{}`", self.axes[0].param)));
        }
        if self.methods.is_empty() {
            return Err(CoverageError::Config("no methods requested".into()));
        }
        for a in &self.axes {
            a.validate()?;
        }
        self.quadrature.validate()?;
        self.simulation.validate()
    }

    /// Grid points in output order: axis 1 fastest.
    pub fn points(&self) -> Vec<(AxisValue, Option<AxisValue>)> {
        match self.axes.as_slice() {
            [a] => a.values.iter().map(|v| (*v, None)).collect(),
            [a, b] => b.values.iter().flat_map(|w| a.values.iter().map(move |v| (*v, Some(*w)))).collect(),
            _ => Vec::new(),
        }
    }

    fn scenario_at(&self, point: &(AxisValue, Option<AxisValue>)) -> Result<NetworkScenario> {
        let mut scn = self.base;
        self.axes[0].param.apply(&mut scn, &point.0)?;
        if let Some(v) = &point.1 {
            self.axes[1].param.apply(&mut scn, v)?;
        }
        scn.validate()?;
        Ok(scn)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param_1: AxisValue,
    pub param_2: Option<AxisValue>,
    pub method: Method,
    pub outcome: std::result::Result<Estimate, String>,
    pub wall_time_s: Option<f64>,
}

/// Probability with its error estimate (quadrature error or standard error).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub probability: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub name: String,
    pub params: Vec<SweepParam>,
    pub rows: Vec<SweepRow>,
}

/// Evaluates one scenario with one method.
pub fn evaluate(scn: &NetworkScenario, method: Method, quad: &QuadratureSpec, sim: &SimulationSpec) -> Result<Estimate> {
    match method {
        Method::Analytic | Method::RayleighClosedForm => {
            let model = CoverageModel::new(*scn, *quad)?;
            let res = if method == Method::Analytic {
                model.coverage()?
            } else {
                model.rayleigh_coverage()?
            };
            Ok(Estimate {
                probability: res.probability,
                error_estimate: res.error_estimate,
            })
        }
        Method::MonteCarlo => {
            let est = Simulator::new(*scn, *sim)?.estimate_coverage();
            Ok(Estimate {
                probability: est.probability,
                error_estimate: est.std_error,
            })
        }
    }
}

/// Runs every grid point with every method on the current rayon pool.
/// Rows come out in grid order and failures stay local to their row.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let jobs: Vec<_> = spec
        .points()
        .into_iter()
        .flat_map(|p| spec.methods.iter().map(move |m| (p, *m)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(point, method)| {
            let start = Instant::now();
            let outcome = spec
                .scenario_at(&point)
                .and_then(|scn| evaluate(&scn, method, &spec.quadrature, &spec.simulation))
                .map_err(|e| e.to_string());
            SweepRow {
                param_1: point.0,
                param_2: point.1,
                method,
                outcome,
                wall_time_s: spec.record_timing.then(|| start.elapsed().as_secs_f64()),
            }
        })
        .collect();
    Ok(SweepResult {
        name: spec.name.clone(),
        params: spec.axes.iter().map(|a| a.param).collect(),
        rows,
    })
}

/// One curve of a sweep: probability against a numeric first axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: Option<AxisValue>,
    pub method: Method,
    /// `(x, probability, error_estimate)`, failed rows skipped.
    pub points: Vec<(f64, f64, f64)>,
}

impl Curve {
    /// Display form of the label, empty for single-axis sweeps.
    pub fn name(&self) -> String {
        self.label.map(|l| l.to_string()).unwrap_or_default()
    }

    /// Point of highest probability.
    pub fn argmax(&self) -> Option<(f64, f64)> {
        self.points
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|p| (p.0, p.1))
    }

    pub fn value_at(&self, x: f64) -> Option<f64> {
        self.points.iter().find(|p| p.0 == x).map(|p| p.1)
    }

    pub fn max_error(&self) -> f64 {
        self.points.iter().map(|p| p.2).fold(0.0, f64::max)
    }
}

impl SweepResult {
    pub fn failures(&self) -> impl Iterator<Item = (&SweepRow, &str)> {
        self.rows.iter().filter_map(|r| r.outcome.as_ref().err().map(|e| (r, e.as_str())))
    }

    /// Curves of `method`, one per second-axis value.
    pub fn curves(&self, method: Method) -> Vec<Curve> {
        let mut out: Vec<Curve> = Vec::new();
        for row in self.rows.iter().filter(|r| r.method == method) {
            let (Some(x), Ok(est)) = (row.param_1.as_number(), &row.outcome) else {
                continue;
            };
            let idx = match out.iter().position(|c| c.label == row.param_2) {
                Some(i) => i,
                None => {
                    out.push(Curve {
                        label: row.param_2,
                        method,
                        points: Vec::new(),
                    });
                    out.len() - 1
                }
            };
            out[idx].points.push((x, est.probability, est.error_estimate));
        }
        out
    }

    /// Rows where analytic and simulated values agree within `sigmas`
    /// combined errors, out of the grid points having both.
    pub fn agreement(&self, sigmas: f64) -> (usize, usize) {
        let mut agree = 0;
        let mut total = 0;
        for a in self.rows.iter().filter(|r| r.method == Method::Analytic) {
            let Some(m) = self
                .rows
                .iter()
                .find(|r| r.method == Method::MonteCarlo && r.param_1 == a.param_1 && r.param_2 == a.param_2)
            else {
                continue;
            };
            if let (Ok(x), Ok(y)) = (&a.outcome, &m.outcome) {
                total += 1;
                let se = (x.error_estimate.powi(2) + y.error_estimate.powi(2)).sqrt();
                agree += usize::from((x.probability - y.probability).abs() <= sigmas * se);
            }
        }
        (agree, total)
    }

    /// CSV with the fixed header. Failed rows leave the numeric cells empty.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            let (p, e) = match &row.outcome {
                Ok(est) => (est.probability.to_string(), est.error_estimate.to_string()),
                Err(_) => (String::new(), String::new()),
            };
            w.write_record([
                row.param_1.to_string(),
                row.param_2.map(|v| v.to_string()).unwrap_or_default(),
                row.method.name().to_string(),
                p,
                e,
                row.wall_time_s.map(|t| t.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// UE altitudes of the altitude presets: ground level to 300 m in 10 m steps.
pub fn altitude_axis() -> Axis {
    Axis::range(SweepParam::UeHeight, 0.0, 300.0, 10.0)
}

/// Coverage against altitude for Rayleigh, mixed and near-deterministic fading.
pub fn figure2_preset() -> SweepSpec {
    let fading = Axis::new(
        SweepParam::Fading,
        vec![AxisValue::Fading(1, 1), AxisValue::Fading(3, 1), AxisValue::Fading(100, 100)],
    );
    SweepSpec::new("figure2", NetworkScenario::reference(), vec![altitude_axis(), fading], vec![Method::Analytic])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserKind {
    Ground,
    Aerial,
}

impl UserKind {
    pub fn height(self) -> f64 {
        match self {
            UserKind::Ground => GROUND_UE_HEIGHT,
            UserKind::Aerial => 60.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UserKind::Ground => "ground",
            UserKind::Aerial => "aerial",
        }
    }
}

/// BS heights of the BS-height preset: 10 m to 50 m in 5 m steps.
pub fn bs_height_axis() -> Axis {
    Axis::range(SweepParam::BsHeight, 10.0, 50.0, 5.0)
}

/// Coverage against BS height for two downtilts in all four environments.
pub fn figure3_preset(user: UserKind) -> SweepSpec {
    let variants = EnvironmentPreset::ALL
        .into_iter()
        .flat_map(|env| [15.0, 30.0].map(|tilt| AxisValue::EnvironmentTilt(env, tilt)))
        .collect();
    SweepSpec::new(
        format!("figure3-{}", user.name()),
        NetworkScenario::reference().with_ue_height(user.height()),
        vec![bs_height_axis(), Axis::new(SweepParam::EnvironmentTilt, variants)],
        vec![Method::Analytic],
    )
}

/// Downtilts of the tilt preset, degrees.
pub const FIGURE4_TILTS: [f64; 3] = [10.0, 20.0, 30.0];

/// Coverage against altitude for several downtilts.
pub fn figure4_preset() -> SweepSpec {
    SweepSpec::new(
        "figure4",
        NetworkScenario::reference(),
        vec![altitude_axis(), Axis::numeric(SweepParam::Downtilt, FIGURE4_TILTS)],
        vec![Method::Analytic],
    )
}

pub fn preset(name: &str) -> Option<SweepSpec> {
    match name {
        "figure2" => Some(figure2_preset()),
        "figure3-ground" => Some(figure3_preset(UserKind::Ground)),
        "figure3-aerial" => Some(figure3_preset(UserKind::Aerial)),
        "figure4" => Some(figure4_preset()),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 4] = ["figure2", "figure3-ground", "figure3-aerial", "figure4"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Numerical error too large to decide.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of a qualitative statement about sweep curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub claim: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl fmt::Display for Assessment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.verdict, self.claim, self.detail)
    }
}

/// Abscissae in `[lo, hi]` where `a - b` changes sign, by linear interpolation.
/// Differences within `noise` of zero count as undecided and make the
/// second value `true`.
pub fn crossings(a: &Curve, b: &Curve, lo: f64, hi: f64, noise: f64) -> (Vec<f64>, bool) {
    let diffs: Vec<(f64, f64)> = a
        .points
        .iter()
        .filter(|p| p.0 >= lo && p.0 <= hi)
        .filter_map(|p| b.value_at(p.0).map(|q| (p.0, p.1 - q)))
        .collect();
    let undecided = diffs.iter().any(|d| d.1.abs() <= noise);
    let mut out = Vec::new();
    for w in diffs.windows(2) {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        if d0 == 0.0 {
            out.push(x0);
        } else if d0 * d1 < 0.0 {
            out.push(x0 + (x1 - x0) * d0 / (d0 - d1));
        }
    }
    (out, undecided)
}

/// Statements read off the fading comparison: the Rayleigh curve sits below
/// the mixed one at low altitude and above it higher up, crossing once near
/// 80 m, and coverage first rises slightly with altitude then falls.
pub fn assess_figure2(result: &SweepResult) -> Vec<Assessment> {
    let curves = result.curves(Method::Analytic);
    let find = |l, n| curves.iter().find(|c| c.label == Some(AxisValue::Fading(l, n)));
    let (Some(rayleigh), Some(mixed)) = (find(1, 1), find(3, 1)) else {
        return vec![Assessment {
            claim: "fading curves present".into(),
            verdict: Verdict::Inconclusive,
            detail: "sweep lacks the 1:1 or 3:1 curve".into(),
        }];
    };
    let noise = 3.0 * rayleigh.max_error().max(mixed.max_error());
    let mut out = Vec::new();

    let (xs, undecided) = crossings(rayleigh, mixed, 30.0, 150.0, noise);
    let verdict = if undecided {
        Verdict::Inconclusive
    } else if xs.len() == 1 && (xs[0] - 80.0).abs() <= 30.0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    out.push(Assessment {
        claim: "1:1 and 3:1 curves cross once in [30, 150] m, at 80 +/- 30 m".into(),
        verdict,
        detail: format!("crossings at {xs:?} m (noise band {noise:.1e})"),
    });

    for (h, below) in [(60.0, true), (150.0, false)] {
        let (Some(r), Some(m)) = (rayleigh.value_at(h), mixed.value_at(h)) else {
            continue;
        };
        let ok = if below { r < m } else { r > m };
        out.push(Assessment {
            claim: format!("1:1 {} 3:1 at {h} m", if below { "below" } else { "above" }),
            verdict: if (r - m).abs() <= noise {
                Verdict::Inconclusive
            } else if ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            detail: format!("{r:.6} vs {m:.6}"),
        });
    }

    for c in [rayleigh, mixed] {
        let label = c.label.map(|v| v.to_string()).unwrap_or_default();
        let first = c.points.first().copied();
        let peak = c.argmax();
        let last = c.points.last().copied();
        let (Some(first), Some(peak), Some(last)) = (first, peak, last) else {
            continue;
        };
        let rises = peak.1 > first.1 + noise;
        let falls = last.1 < peak.1 - noise;
        let low_peak = peak.0 <= 100.0;
        out.push(Assessment {
            claim: format!("{label}: slight rise at modest altitude, then decrease"),
            verdict: if rises && falls && low_peak { Verdict::Pass } else { Verdict::Fail },
            detail: format!(
                "{:.4} at {} m, peak {:.4} at {} m, {:.4} at {} m",
                first.1, first.0, peak.1, peak.0, last.1, last.0
            ),
        });
    }
    out
}

/// The coverage-maximising altitude of each tilt curve lies in
/// `[0, 3 h_BS]`. Ties within the error band make the verdict inconclusive.
pub fn assess_figure4(result: &SweepResult, bs_height: f64) -> Vec<Assessment> {
    result
        .curves(Method::Analytic)
        .iter()
        .map(|c| {
            let label = c.label.map(|v| v.to_string()).unwrap_or_default();
            let claim = format!("tilt {label} deg: best altitude within [0, {}] m", 3.0 * bs_height);
            let Some((x, p)) = c.argmax() else {
                return Assessment {
                    claim,
                    verdict: Verdict::Inconclusive,
                    detail: "no successful rows".into(),
                };
            };
            let noise = 3.0 * c.max_error();
            let near_best: Vec<f64> = c.points.iter().filter(|q| q.1 >= p - noise).map(|q| q.0).collect();
            let inside = |h: f64| (0.0..=3.0 * bs_height).contains(&h);
            let verdict = if near_best.iter().all(|&h| inside(h)) {
                Verdict::Pass
            } else if near_best.iter().any(|&h| inside(h)) {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            };
            Assessment {
                claim,
                verdict,
                detail: format!("max {p:.6} at {x} m; within error band: {near_best:?}"),
            }
        })
        .collect()
}

/// For each curve, coverage stays flat (total variation below `tolerance`)
/// after its last step larger than `tolerance`.
pub fn assess_plateau(result: &SweepResult, tolerance: f64) -> Vec<Assessment> {
    result
        .curves(Method::Analytic)
        .iter()
        .map(|c| {
            let label = c.label.map(|v| v.to_string()).unwrap_or_default();
            let steps: Vec<f64> = c.points.windows(2).map(|w| w[1].1 - w[0].1).collect();
            let last_big = steps.iter().rposition(|d| d.abs() > tolerance);
            let tail = &steps[last_big.map_or(0, |i| i + 1)..];
            let variation = tail.iter().fold(0.0, |acc, d| acc + d.abs());
            let start = last_big.map_or(c.points.first().map(|p| p.0), |i| c.points.get(i + 1).map(|p| p.0));
            Assessment {
                claim: format!("{label}: flat after last significant change"),
                verdict: if variation <= tolerance { Verdict::Pass } else { Verdict::Fail },
                detail: format!("plateau from {:?} m, total variation {variation:.2e}", start),
            }
        })
        .collect()
}

/// Settings of the cross-validation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSpec {
    pub quadrature: QuadratureSpec,
    /// Unconditional simulation.
    pub simulation: SimulationSpec,
    /// Drops of each conditional and Laplace-transform simulation.
    pub conditional_drops: u64,
    /// Network radius shared by the analytic and simulated conditional checks.
    pub conditional_radius: f64,
    pub conditional_distances: Vec<f64>,
    pub laplace_distance: f64,
    /// Laplace arguments as multiples of `T / (P_t G(r0) zeta_L(r0))`.
    pub laplace_multipliers: Vec<f64>,
    pub grid_heights: Vec<f64>,
    pub grid_tilts: Vec<f64>,
    /// Serving distances of the derivative check, LoS arguments.
    pub derivative_distances: Vec<f64>,
    pub power_factors: Vec<f64>,
    pub power_drops: u64,
    pub sigmas: f64,
    pub identity_tol: f64,
    pub derivative_tol: f64,
}

impl Default for ValidationSpec {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::default(),
            simulation: SimulationSpec::default(),
            conditional_drops: 100_000,
            conditional_radius: 3000.0,
            conditional_distances: vec![50.0, 150.0, 400.0],
            laplace_distance: 100.0,
            laplace_multipliers: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            grid_heights: vec![10.0, 60.0, 150.0],
            grid_tilts: vec![10.0, 20.0, 30.0],
            derivative_distances: vec![20.0, 50.0, 80.0, 110.0, 150.0],
            power_factors: vec![0.1, 10.0],
            power_drops: 2000,
            sigmas: 3.0,
            identity_tol: 1e-9,
            derivative_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst relative error or worst z-score, depending on the check.
    pub measured: f64,
    pub tolerance: f64,
    pub cases: Vec<String>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {}  measured {:.3e}  tolerance {:.1e}",
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.measured,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
            for case in &c.cases {
                writeln!(f, "    {case}")?;
            }
        }
        Ok(())
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// z-score of a simulated probability against an analytic one. The binomial
/// variance is taken at whichever of the two values gives the larger spread,
/// so an empirical zero is still compared against a small analytic value.
pub fn probability_z(analytic: f64, analytic_err: f64, simulated: f64, drops: u64) -> f64 {
    let n = drops as f64;
    let var = (analytic * (1.0 - analytic)).max(simulated * (1.0 - simulated)) / n + analytic_err * analytic_err;
    let diff = (analytic - simulated).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / var.sqrt()
    }
}

fn outcome(name: &'static str, measured: f64, tolerance: f64, cases: Vec<String>) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: measured <= tolerance,
        measured,
        tolerance,
        cases,
    }
}

/// General fading sum with `m = (1, 1)` against the Rayleigh closed form
/// over an altitude and downtilt grid.
pub fn check_rayleigh_identity(scn: &NetworkScenario, spec: &ValidationSpec) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for &h in &spec.grid_heights {
        for &tilt in &spec.grid_tilts {
            let mut s = scn.with_fading(1, 1).with_ue_height(h);
            s.pattern.downtilt = tilt.to_radians();
            let model = CoverageModel::new(s, spec.quadrature)?;
            let general = model.coverage()?.probability;
            let closed = model.rayleigh_coverage()?.probability;
            let e = rel_err(general, closed);
            worst = worst.max(e);
            cases.push(format!("h_D={h} tilt={tilt}: {general:.12} vs {closed:.12} (rel {e:.1e})"));
        }
    }
    Ok(outcome("rayleigh-identity", worst, spec.identity_tol, cases))
}

/// Derivatives of orders 1 and 2 against five-point central differences.
pub fn check_derivatives(scn: &NetworkScenario, spec: &ValidationSpec) -> Result<CheckOutcome> {
    let quad = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        ..spec.quadrature
    };
    let model = CoverageModel::new(*scn, quad)?;
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for &r0 in &spec.derivative_distances {
        let s = model.serving_laplace_argument(r0, LinkState::Los) / scn.channel.m_los as f64;
        let d = model.laplace_derivatives(s, r0, 2)?;
        let h = 0.02 * s;
        let mut l = [0.0; 5];
        for (k, slot) in l.iter_mut().enumerate() {
            *slot = model.laplace(s + (k as f64 - 2.0) * h, r0)?;
        }
        let d1 = (l[0] - 8.0 * l[1] + 8.0 * l[3] - l[4]) / (12.0 * h);
        let d2 = (-l[0] + 16.0 * l[1] - 30.0 * l[2] + 16.0 * l[3] - l[4]) / (12.0 * h * h);
        let (e1, e2) = (rel_err(d[1], d1), rel_err(d[2], d2));
        worst = worst.max(e1).max(e2);
        cases.push(format!("r0={r0} s={s:.4e}: L'={:.6e} (rel {e1:.1e}), L''={:.6e} (rel {e2:.1e})", d[1], d[2]));
    }
    Ok(outcome("derivatives-vs-differences", worst, spec.derivative_tol, cases))
}

/// Total coverage against the unconditional simulation.
pub fn check_coverage_vs_simulation(scn: &NetworkScenario, spec: &ValidationSpec) -> Result<CheckOutcome> {
    let res = CoverageModel::new(*scn, spec.quadrature)?.coverage()?;
    let est = Simulator::new(*scn, spec.simulation)?.estimate_coverage();
    let z = probability_z(res.probability, res.error_estimate, est.probability, est.num_drops);
    let case = format!(
        "analytic {:.6} +/- {:.1e}, simulated {:.6} +/- {:.1e} ({} drops, {} m disk), diff {:.2e}",
        res.probability,
        res.error_estimate,
        est.probability,
        est.std_error,
        est.num_drops,
        spec.simulation.disk_radius,
        (res.probability - est.probability).abs()
    );
    Ok(outcome("coverage-vs-simulation", z, spec.sigmas, vec![case]))
}

fn conditional_sim(spec: &ValidationSpec, r0: f64, state: Option<LinkState>) -> SimulationSpec {
    SimulationSpec {
        num_drops: spec.conditional_drops,
        disk_radius: spec.conditional_radius,
        seed: spec.simulation.seed,
        conditioning: Conditioning {
            serving_distance: Some(r0),
            serving_state: state,
        },
    }
}

fn matched_quadrature(spec: &ValidationSpec) -> QuadratureSpec {
    QuadratureSpec {
        network_radius: Some(spec.conditional_radius),
        ..spec.quadrature
    }
}

/// Conditional coverage at fixed serving distances, each link state forced.
pub fn check_conditional(scn: &NetworkScenario, spec: &ValidationSpec) -> Result<CheckOutcome> {
    let model = CoverageModel::new(*scn, matched_quadrature(spec))?;
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for &r0 in &spec.conditional_distances {
        for state in LinkState::BOTH {
            let (p, series) = model.conditional_series(r0, state)?;
            let est = Simulator::new(*scn, conditional_sim(spec, r0, Some(state)))?.estimate_coverage();
            let z = probability_z(p, series.error, est.probability, est.num_drops);
            worst = worst.max(z);
            cases.push(format!(
                "r0={r0} {}: analytic {p:.6}, simulated {:.6} +/- {:.1e} (z {z:.2})",
                state.name(),
                est.probability,
                est.std_error
            ));
        }
    }
    Ok(outcome("conditional-vs-simulation", worst, spec.sigmas, cases))
}

/// Interference Laplace transform against the empirical `E[exp(-s I)]`.
pub fn check_laplace(scn: &NetworkScenario, spec: &ValidationSpec) -> Result<CheckOutcome> {
    let model = CoverageModel::new(*scn, matched_quadrature(spec))?;
    let r0 = spec.laplace_distance;
    let base = scn.sir_threshold / model.serving_scale(r0, LinkState::Los);
    let s_values: Vec<f64> = spec.laplace_multipliers.iter().map(|k| k * base).collect();
    let est = Simulator::new(*scn, conditional_sim(spec, r0, None))?.estimate_laplace(&s_values)?;
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for e in &est {
        let series = model.taylor_series(e.s, e.s, r0, 0)?;
        let l = series.coeffs[0];
        let se = (e.std_error.powi(2) + series.error.powi(2)).sqrt();
        let z = if l == e.mean { 0.0 } else { (l - e.mean).abs() / se };
        worst = worst.max(z);
        cases.push(format!(
            "s={:.4e}: analytic {l:.6}, simulated {:.6} +/- {:.1e} (z {z:.2})",
            e.s, e.mean, e.std_error
        ));
    }
    Ok(outcome("laplace-vs-simulation", worst, spec.sigmas, cases))
}

/// Transmit power scaling: analytic value unchanged to `identity_tol`, and
/// every simulated SIR decision unchanged for a shared seed.
pub fn check_power_invariance(scn: &NetworkScenario, spec: &ValidationSpec) -> Result<CheckOutcome> {
    let base = CoverageModel::new(*scn, spec.quadrature)?.coverage()?.probability;
    let sim_spec = SimulationSpec {
        num_drops: spec.power_drops,
        disk_radius: spec.conditional_radius,
        ..spec.simulation
    };
    let decisions = |s: &NetworkScenario| -> Result<Vec<bool>> {
        let sim = Simulator::new(*s, sim_spec)?;
        Ok((0..sim_spec.num_drops).map(|d| sim.drop_sir(d) > s.sir_threshold).collect())
    };
    let base_decisions = decisions(scn)?;
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for &k in &spec.power_factors {
        let mut s = *scn;
        s.tx_power *= k;
        let p = CoverageModel::new(s, spec.quadrature)?.coverage()?.probability;
        let e = rel_err(p, base);
        let flips = decisions(&s)?.iter().zip(&base_decisions).filter(|(a, b)| a != b).count();
        worst = worst.max(e);
        if flips > 0 {
            worst = f64::INFINITY;
        }
        cases.push(format!("P_t x {k}: analytic rel {e:.1e}, {flips} of {} SIR decisions changed", base_decisions.len()));
    }
    Ok(outcome("transmit-power-invariance", worst, spec.identity_tol, cases))
}

/// Number of checks run by [`validate`].
pub const VALIDATION_CHECKS: usize = 6;

/// Runs the full cross-check matrix. Failed checks are report content;
/// errors are reported only when a computation itself fails.
pub fn validate(scn: &NetworkScenario, spec: &ValidationSpec) -> Result<ValidationReport> {
    let checks: [fn(&NetworkScenario, &ValidationSpec) -> Result<CheckOutcome>; VALIDATION_CHECKS] = [
        check_rayleigh_identity,
        check_derivatives,
        check_coverage_vs_simulation,
        check_conditional,
        check_laplace,
        check_power_invariance,
    ];
    Ok(ValidationReport {
        checks: checks.iter().map(|c| c(scn, spec)).collect::<Result<_>>()?,
    })
}
