//! Numerical evaluation of the coverage probability of the nearest-BS
//! association rule.
//!
//! For a serving distance `r0` the interference Laplace transform is
//! `L(s) = exp(eta(s))` with
//! `eta(s) = -2 pi lambda * int_{r0}^inf [P_L (1 - U_L(r, s)) + P_N (1 - U_N(r, s))] r dr`
//! and `U_v(r, s) = (m_v / (m_v + s P_t G(r) zeta_v(r)))^{m_v}`. The
//! conditional coverage of a state-`v` serving link is
//! `sum_{k < m_v} (-s_v)^k / k! * L^(k)(s_v)`.
//!
//! All derivatives are carried as scaled Taylor coefficients
//! `b_j = L^(j)(s) (-rho)^j / j!`. The coefficients of `eta` are integrals
//! of non-negative negative-binomial weights, and `b` follows from the
//! exponential recursion `b_j = sum_{i<j} (j - i)/j * a_{j-i} b_i`. With
//! `rho = s` every term is non-negative, so the fading sum never cancels.
//!
//! The inner integral is extended by doubling until the interference beyond
//! the radius `R` is pinned down to `abs_tol`. Out there `1 - U_v ~ s c_v(r)`,
//! so the remainder is added in closed form from `P_L(r) <= P_L(R)` and the
//! power-law tails `int_R^inf r d^{-alpha} dr`. What is left uncertain is the
//! LoS share of the remainder and a quadratic linearisation term. Power-law
//! tails only close for exponents above 2.

use std::f64::consts::PI;

use crate::channel::{
    gain_switch_radii, los_breakpoints, GainProfile, LinkGeometry, LinkState, LosTable,
};
use crate::error::{invalid, CoverageError, Result};
use crate::quadrature::Integrator;
use crate::scenario::NetworkScenario;

/// Tolerances and truncation controls for the analytic evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Serving-distance probability mass left outside the outer integral.
    pub outer_trunc_prob: f64,
    /// First inner truncation radius as a multiple of the outer radius.
    pub inner_radius_factor: f64,
    /// Hard limit for the inner truncation radius, meters.
    pub max_inner_radius: f64,
    /// BSs exist only within this ground distance of the UE. `None` is the
    /// infinite plane.
    pub network_radius: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            outer_trunc_prob: 1e-8,
            inner_radius_factor: 10.0,
            max_inner_radius: 1e6,
            network_radius: None,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(invalid("rel_tol", "must be > 0"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(invalid("abs_tol", "must be > 0"));
        }
        if !(self.outer_trunc_prob > 0.0 && self.outer_trunc_prob < 1.0) {
            return Err(invalid("outer_trunc_prob", "must lie in (0, 1)"));
        }
        if !(self.inner_radius_factor >= 1.0) {
            return Err(invalid("inner_radius_factor", "must be >= 1"));
        }
        if !(self.max_inner_radius > 0.0) {
            return Err(invalid("max_inner_radius", "must be > 0"));
        }
        if let Some(r) = self.network_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(invalid("network_radius", "must be > 0"));
            }
        }
        Ok(())
    }

    /// Radius enclosing all but `outer_trunc_prob` of the serving-distance mass.
    pub fn outer_radius(&self, bs_density: f64) -> f64 {
        let r = ((1.0 / self.outer_trunc_prob).ln() / (PI * bs_density)).sqrt();
        match self.network_radius {
            Some(net) => r.min(net),
            None => r,
        }
    }
}

/// How a coverage value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Analytic,
    RayleighClosedForm,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::RayleighClosedForm => "rayleigh",
            Method::MonteCarlo => "monte-carlo",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "analytic" => Some(Method::Analytic),
            "rayleigh" | "rayleigh-closed-form" => Some(Method::RayleighClosedForm),
            "monte-carlo" | "mc" => Some(Method::MonteCarlo),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Bookkeeping of one analytic evaluation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub outer_evaluations: usize,
    pub inner_integrals: usize,
    pub inner_evaluations: usize,
    /// Upper limit of the outer (serving distance) integral.
    pub outer_radius: f64,
    /// Largest inner truncation radius used.
    pub inner_radius: f64,
    /// Largest error estimate of a conditional coverage value.
    pub inner_error: f64,
    /// An inner integral stopped at `max_inner_radius` with its tail bound
    /// above tolerance. The bound is included in `error_estimate`.
    pub truncation_capped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub probability: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub diagnostics: Diagnostics,
}

/// Density of the nearest-BS ground distance in a PPP of density `bs_density`.
pub fn serving_distance_pdf(r0: f64, bs_density: f64) -> f64 {
    if r0 < 0.0 {
        return 0.0;
    }
    2.0 * PI * bs_density * r0 * (-bs_density * PI * r0 * r0).exp()
}

fn received_scale(r: f64, scn: &NetworkScenario, state: LinkState) -> f64 {
    let geom = LinkGeometry {
        ground_distance: r,
        bs_height: scn.bs_height,
        ue_height: scn.ue_height,
    };
    let gain = crate::channel::antenna_gain(&geom, &scn.pattern);
    let d2 = r * r + geom.height_offset().powi(2);
    scn.tx_power * gain * scn.channel.attenuation_sq(state, d2)
}

/// `(m_v / (m_v + s P_t G(r) zeta_v(r)))^{m_v}` for an interferer at ground distance `r`.
pub fn upsilon(r: f64, s: f64, scn: &NetworkScenario, state: LinkState) -> f64 {
    let m = scn.fading_order(state);
    let mf = m as f64;
    let c = received_scale(r, scn, state);
    (mf / (mf + s * c)).powi(m as i32)
}

/// `order`-th derivative of [`upsilon`] with respect to `s`.
pub fn upsilon_derivative(r: f64, s: f64, scn: &NetworkScenario, state: LinkState, order: usize) -> Result<f64> {
    let m = scn.fading_order(state);
    let mf = m as f64;
    let c = received_scale(r, scn, state);
    let mut value = (mf / (mf + s * c)).powi(m as i32);
    let step = c / (mf + s * c);
    for i in 0..order {
        value *= -(mf + i as f64) * step;
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CoverageError::DerivativeOrder { order, fading_order: m })
    }
}

/// Scaled Taylor coefficients of `L` around one Laplace argument.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    /// `b_j = L^(j)(s) (-rho)^j / j!`.
    pub coeffs: Vec<f64>,
    pub rho: f64,
    pub error: f64,
    pub evaluations: usize,
    pub radius: f64,
    pub capped: bool,
}

/// Interference beyond the truncation radius per unit Laplace argument:
/// `mean` is the linearised estimate, `spread` its uncertainty from the
/// unknown LoS probability and `quadratic` bounds the linearisation error
/// (scaled by `s^2`).
#[derive(Debug, Clone, Copy)]
struct TailModel {
    mean: f64,
    spread: f64,
    quadratic: f64,
}

#[derive(Debug, Clone, Copy)]
struct LinkValues {
    p_los: f64,
    gain: f64,
    zeta: [f64; 2],
}

/// Precomputed per-scenario state for repeated analytic queries.
#[derive(Debug)]
pub struct CoverageModel {
    scn: NetworkScenario,
    quad: QuadratureSpec,
    los: LosTable,
    gains: GainProfile,
    offset_sq: f64,
    two_pi_lambda: f64,
}

impl CoverageModel {
    pub fn new(scn: NetworkScenario, quad: QuadratureSpec) -> Result<Self> {
        scn.validate()?;
        quad.validate()?;
        let reach = quad.network_radius.unwrap_or(quad.max_inner_radius);
        Ok(Self {
            los: LosTable::new(scn.env, scn.bs_height, scn.ue_height, reach),
            gains: GainProfile::new(scn.bs_height, scn.ue_height, &scn.pattern),
            offset_sq: (scn.bs_height - scn.ue_height).powi(2),
            two_pi_lambda: 2.0 * PI * scn.bs_density,
            scn,
            quad,
        })
    }

    pub fn scenario(&self) -> &NetworkScenario {
        &self.scn
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn los_probability(&self, r: f64) -> f64 {
        self.los.at(r)
    }

    #[inline]
    fn link(&self, r: f64) -> LinkValues {
        let ln_d2 = (r * r + self.offset_sq).ln();
        let ch = &self.scn.channel;
        LinkValues {
            p_los: self.los.at(r),
            gain: self.gains.gain_at(r),
            zeta: [
                ch.intercept_los * (-0.5 * ch.alpha_los * ln_d2).exp(),
                ch.intercept_nlos * (-0.5 * ch.alpha_nlos * ln_d2).exp(),
            ],
        }
    }

    /// Sorted panel edges for integrating over `[lo, hi]`.
    fn breaks(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut edges = vec![lo];
        let step = self.scn.env.step_length();
        let first = ((lo / step).floor() as i64 + 1).max(1);
        let mut k = first;
        loop {
            let r = k as f64 * step;
            if r >= hi {
                break;
            }
            if r > lo {
                edges.push(r);
            }
            k += 1;
        }
        edges.extend(self.gains.switch_radii().iter().copied().filter(|&r| r > lo && r < hi));
        edges.push(hi);
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        edges
    }

    /// Linearised contribution of interferers beyond `radius`.
    fn tail_model(&self, radius: f64) -> TailModel {
        let ch = &self.scn.channel;
        let settled = self.gains.switch_radii().last().is_none_or(|&last| radius >= last);
        let gain = if settled { self.gains.far_gain() } else { self.gains.max_gain() };
        let pref = self.two_pi_lambda * self.scn.tx_power * gain;
        let d2 = radius * radius + self.offset_sq;
        let first = |alpha: f64| {
            if alpha > 2.0 {
                d2.powf(1.0 - 0.5 * alpha) / (alpha - 2.0)
            } else {
                f64::INFINITY
            }
        };
        let second = |alpha: f64| {
            if alpha > 1.0 {
                d2.powf(1.0 - alpha) / (alpha - 1.0)
            } else {
                f64::INFINITY
            }
        };
        let p = self.los.at(radius);
        let los = if p == 0.0 { 0.0 } else { ch.intercept_los * first(ch.alpha_los) };
        let nlos = ch.intercept_nlos * first(ch.alpha_nlos);
        let (mean, spread) = if settled {
            // P_L(r) lies in [0, p] and P_N(r) in [1 - p, 1] beyond the radius.
            (
                pref * (0.5 * p * los + (1.0 - 0.5 * p) * nlos),
                pref * 0.5 * p * (los + nlos),
            )
        } else {
            (0.0, pref * (p * los + nlos))
        };
        let los_sq = if p == 0.0 { 0.0 } else { p * ch.intercept_los.powi(2) * second(ch.alpha_los) };
        let quadratic = 2.0
            * self.two_pi_lambda
            * (self.scn.tx_power * gain).powi(2)
            * (los_sq + ch.intercept_nlos.powi(2) * second(ch.alpha_nlos));
        TailModel {
            mean: if mean.is_finite() { mean } else { 0.0 },
            spread: if mean.is_finite() { spread } else { f64::INFINITY },
            quadratic,
        }
    }

    /// Exponent coefficients including the tail estimate.
    fn exponent_with_tail(&self, integrals: &[f64], s: f64, rho: f64, tail: &TailModel) -> Vec<f64> {
        let mut a = self.exponent_coeffs(integrals);
        a[0] -= s * tail.mean;
        if a.len() > 1 {
            a[1] += rho * tail.mean;
        }
        a
    }

    fn integrand(&self, r: f64, s: f64, rho: f64, out: &mut [f64]) {
        out.fill(0.0);
        let link = self.link(r);
        let order = out.len() - 1;
        for (idx, state) in LinkState::BOTH.into_iter().enumerate() {
            let weight = match state {
                LinkState::Los => link.p_los,
                LinkState::Nlos => 1.0 - link.p_los,
            };
            if weight == 0.0 {
                continue;
            }
            let m = self.scn.fading_order(state) as f64;
            let c = self.scn.tx_power * link.gain * link.zeta[idx];
            let log_base = (s * c / m).ln_1p();
            out[0] += weight * -(-m * log_base).exp_m1();
            if order > 0 {
                let q = rho * c / (m + s * c);
                let mut t = (-m * log_base).exp();
                for j in 1..=order {
                    t *= (m + (j - 1) as f64) / j as f64 * q;
                    if t < 1e-250 {
                        break;
                    }
                    out[j] += weight * t;
                }
            }
        }
        for v in out.iter_mut() {
            *v *= r;
        }
    }

    /// Scaled Taylor coefficients `b_0..=b_order` of the interference Laplace
    /// transform at `s`, for interferers beyond `r0`.
    pub fn taylor_series(&self, s: f64, rho: f64, r0: f64, order: usize) -> Result<TaylorSeries> {
        if !(s >= 0.0 && rho >= 0.0) {
            return Err(invalid("s", "Laplace argument must be >= 0"));
        }
        let dim = order + 1;
        let integrator = Integrator::new(self.quad.rel_tol, self.quad.abs_tol / self.two_pi_lambda);
        let mut sums = vec![0.0; dim];
        let mut errs = vec![0.0; dim];
        let mut evaluations = 0;
        let mut segment = |lo: f64, hi: f64, sums: &mut [f64], errs: &mut [f64]| -> Result<()> {
            if hi <= lo {
                return Ok(());
            }
            let est = integrator.integrate_vec(|r, out| self.integrand(r, s, rho, out), dim, &self.breaks(lo, hi))?;
            evaluations += est.evaluations;
            for j in 0..dim {
                sums[j] += est.values[j];
                errs[j] += est.errors[j];
            }
            Ok(())
        };

        let (radius, tail_error, capped, coeffs);
        match self.quad.network_radius {
            Some(net) => {
                segment(r0, net, &mut sums, &mut errs)?;
                radius = net;
                tail_error = 0.0;
                capped = false;
                coeffs = compose_exp(&self.exponent_coeffs(&sums));
            }
            None => {
                let cap = self.quad.max_inner_radius.max(r0);
                let first = self.quad.inner_radius_factor * self.quad.outer_radius(self.scn.bs_density);
                let s_eff = s.max(rho);
                let mut lo = r0;
                let mut hi = first.max(r0 + self.scn.env.step_length()).min(cap);
                loop {
                    segment(lo, hi, &mut sums, &mut errs)?;
                    let tail = self.tail_model(hi);
                    let candidate = compose_exp(&self.exponent_with_tail(&sums, s, rho, &tail));
                    // Dropping the tail can only raise the partial sums.
                    let weight: f64 = compose_exp(&self.exponent_coeffs(&sums)).iter().sum();
                    let uncertainty = 2.0 * (s_eff * tail.spread + s_eff * s_eff * tail.quadratic) * weight;
                    if uncertainty <= self.quad.abs_tol || hi >= cap {
                        radius = hi;
                        tail_error = uncertainty;
                        capped = uncertainty > self.quad.abs_tol;
                        coeffs = candidate;
                        break;
                    }
                    lo = hi;
                    hi = (2.0 * hi).min(cap);
                }
            }
        }

        let weight: f64 = coeffs.iter().sum();
        let quad_err: f64 = errs.iter().map(|e| e * self.two_pi_lambda).sum();
        Ok(TaylorSeries {
            coeffs,
            rho,
            error: weight * quad_err + tail_error,
            evaluations,
            radius,
            capped,
        })
    }

    fn exponent_coeffs(&self, integrals: &[f64]) -> Vec<f64> {
        let mut a: Vec<f64> = integrals.iter().map(|v| v * self.two_pi_lambda).collect();
        a[0] = -a[0];
        a
    }

    /// `L_{I|r0}(s)`.
    pub fn laplace(&self, s: f64, r0: f64) -> Result<f64> {
        Ok(self.taylor_series(s, s, r0, 0)?.coeffs[0])
    }

    /// `[L(s), L'(s), ..., L^(order)(s)]`.
    pub fn laplace_derivatives(&self, s: f64, r0: f64, order: usize) -> Result<Vec<f64>> {
        let rho = if s > 0.0 {
            s
        } else {
            // Any positive scale works; pick one that keeps coefficients O(1).
            1.0 / (self.scn.tx_power * self.scn.pattern.gain_main * self.scn.channel.intercept_los)
        };
        let series = self.taylor_series(s, rho, r0, order)?;
        let mut factor = 1.0;
        let mut out = Vec::with_capacity(order + 1);
        for (j, b) in series.coeffs.iter().enumerate() {
            if j > 0 {
                factor *= j as f64 / -rho;
            }
            let v = b * factor;
            if !v.is_finite() {
                return Err(CoverageError::DerivativeOrder {
                    order: j,
                    fading_order: self.scn.channel.m_los.max(self.scn.channel.m_nlos),
                });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// `P_t G(r0) zeta_v(r0)` of the serving link.
    pub fn serving_scale(&self, r0: f64, state: LinkState) -> f64 {
        let link = self.link(r0);
        let idx = match state {
            LinkState::Los => 0,
            LinkState::Nlos => 1,
        };
        self.scn.tx_power * link.gain * link.zeta[idx]
    }

    /// `s_v = m_v T / (P_t G(r0) zeta_v(r0))`.
    pub fn serving_laplace_argument(&self, r0: f64, state: LinkState) -> f64 {
        let m = self.scn.fading_order(state) as f64;
        m * self.scn.sir_threshold / self.serving_scale(r0, state)
    }

    /// Coverage given the serving BS at `r0` in the given state, with its series.
    pub fn conditional_series(&self, r0: f64, state: LinkState) -> Result<(f64, TaylorSeries)> {
        let s = self.serving_laplace_argument(r0, state);
        let order = self.scn.fading_order(state) as usize - 1;
        let series = self.taylor_series(s, s, r0, order)?;
        let value: f64 = series.coeffs.iter().sum();
        let value = checked_probability(value, series.error, "conditional coverage")?;
        Ok((value, series))
    }

    pub fn conditional_coverage(&self, r0: f64, state: LinkState) -> Result<f64> {
        Ok(self.conditional_series(r0, state)?.0)
    }

    /// Full coverage probability with fading sums.
    pub fn coverage(&self) -> Result<CoverageResult> {
        self.integrate_serving_distance(Method::Analytic, |r0, state| self.conditional_series(r0, state))
    }

    /// Coverage with both links treated as Rayleigh, straight from
    /// `L(s_L)` and `L(s_N)`.
    pub fn rayleigh_coverage(&self) -> Result<CoverageResult> {
        if self.scn.channel.m_los != 1 || self.scn.channel.m_nlos != 1 {
            let model = CoverageModel::new(self.scn.with_fading(1, 1), self.quad)?;
            return model.rayleigh_coverage();
        }
        self.integrate_serving_distance(Method::RayleighClosedForm, |r0, state| {
            let s = self.scn.sir_threshold / self.serving_scale(r0, state);
            let series = self.taylor_series(s, s, r0, 0)?;
            Ok((series.coeffs[0], series))
        })
    }

    fn integrate_serving_distance<F>(&self, method: Method, conditional: F) -> Result<CoverageResult>
    where
        F: Fn(f64, LinkState) -> Result<(f64, TaylorSeries)>,
    {
        let lambda = self.scn.bs_density;
        let outer_radius = self.quad.outer_radius(lambda);
        let mut edges = vec![0.0];
        edges.extend(los_breakpoints(&self.scn.env, outer_radius).into_iter().filter(|&r| r < outer_radius));
        edges.extend(
            gain_switch_radii(self.scn.bs_height, self.scn.ue_height, &self.scn.pattern)
                .into_iter()
                .filter(|&r| r < outer_radius),
        );
        edges.push(outer_radius);
        edges.sort_by(f64::total_cmp);
        edges.dedup();

        let mut diag = Diagnostics {
            outer_radius,
            ..Diagnostics::default()
        };
        let mut failure = None;
        let integrator = Integrator::new(self.quad.rel_tol, self.quad.abs_tol);
        let outer = integrator.integrate_breaks(
            |r0| {
                if failure.is_some() {
                    return 0.0;
                }
                diag.outer_evaluations += 1;
                let p_los = self.los.at(r0);
                let mut total = 0.0;
                for state in LinkState::BOTH {
                    let weight = match state {
                        LinkState::Los => p_los,
                        LinkState::Nlos => 1.0 - p_los,
                    };
                    if weight == 0.0 {
                        continue;
                    }
                    match conditional(r0, state) {
                        Ok((value, series)) => {
                            diag.inner_integrals += 1;
                            diag.inner_evaluations += series.evaluations;
                            diag.inner_radius = diag.inner_radius.max(series.radius);
                            diag.inner_error = diag.inner_error.max(series.error);
                            diag.truncation_capped |= series.capped;
                            total += weight * value;
                        }
                        Err(e) => {
                            failure = Some(e);
                            return 0.0;
                        }
                    }
                }
                serving_distance_pdf(r0, lambda) * total
            },
            &edges,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        let error_estimate = outer.error + self.quad.outer_trunc_prob + diag.inner_error;
        let probability = checked_probability(outer.value, error_estimate, "coverage probability")?;
        Ok(CoverageResult {
            probability,
            method,
            error_estimate,
            diagnostics: diag,
        })
    }
}

/// `b_0 = exp(a_0)`, `b_j = sum_{i<j} (j - i)/j * a_{j-i} b_i`: Taylor
/// coefficients of `exp(eta)` from those of `eta`.
pub fn compose_exp(a: &[f64]) -> Vec<f64> {
    let mut b = Vec::with_capacity(a.len());
    if a.is_empty() {
        return b;
    }
    b.push(a[0].exp());
    for j in 1..a.len() {
        let inv_j = 1.0 / j as f64;
        let mut acc = 0.0;
        for i in 0..j {
            acc += (j - i) as f64 * inv_j * a[j - i] * b[i];
        }
        b.push(acc);
    }
    b
}

fn checked_probability(value: f64, error: f64, context: &'static str) -> Result<f64> {
    let tolerance = 1e-6 + error;
    if !(value >= -tolerance && value <= 1.0 + tolerance) {
        return Err(CoverageError::ProbabilityOutOfRange {
            value,
            tolerance,
            context,
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Interference Laplace transform conditioned on the serving distance.
pub fn laplace_interference(s: f64, r0: f64, scn: &NetworkScenario, quad: &QuadratureSpec) -> Result<f64> {
    CoverageModel::new(*scn, *quad)?.laplace(s, r0)
}

/// `[L, L', ..., L^(max_order)]` at `s`. Orders above `max(m_L, m_N) - 1`
/// are not needed by any coverage sum and are rejected.
pub fn laplace_derivatives(
    s: f64,
    r0: f64,
    scn: &NetworkScenario,
    quad: &QuadratureSpec,
    max_order: usize,
) -> Result<Vec<f64>> {
    let limit = scn.channel.m_los.max(scn.channel.m_nlos) as usize - 1;
    if max_order > limit {
        return Err(invalid(
            "max_order",
            format!("{max_order} exceeds max(m_los, m_nlos) - 1 = {limit}"),
        ));
    }
    CoverageModel::new(*scn, *quad)?.laplace_derivatives(s, r0, max_order)
}

pub fn conditional_coverage(r0: f64, scn: &NetworkScenario, quad: &QuadratureSpec, state: LinkState) -> Result<f64> {
    CoverageModel::new(*scn, *quad)?.conditional_coverage(r0, state)
}

pub fn coverage_probability(scn: &NetworkScenario, quad: &QuadratureSpec) -> Result<CoverageResult> {
    CoverageModel::new(*scn, *quad)?.coverage()
}

pub fn rayleigh_coverage(scn: &NetworkScenario, quad: &QuadratureSpec) -> Result<CoverageResult> {
    CoverageModel::new(*scn, *quad)?.rayleigh_coverage()
}
