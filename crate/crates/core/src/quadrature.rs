//! Globally adaptive 15-point Gauss-Kronrod quadrature over pre-split panels.
//!
//! Callers pass every known discontinuity of the integrand as a panel edge;
//! inside a panel the integrand is assumed smooth. The panel with the largest
//! error estimate is bisected until the summed error meets the tolerance.
//! Integrands may be vector valued so that several moments sharing the same
//! expensive sub-expressions are integrated on one node set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{CoverageError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Scalar integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Vector-valued integral, one error estimate per component.
#[derive(Debug, Clone, PartialEq)]
pub struct VecEstimate {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evaluations: usize,
    pub panels: usize,
}

impl VecEstimate {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Tolerances and budget of the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self::new(1e-10, 1e-13)
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
    norm: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.norm == other.norm
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm.total_cmp(&other.norm)
    }
}

impl Integrator {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            max_subdivisions: 200_000,
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, lo: f64, hi: f64) -> Result<Estimate> {
        self.integrate_breaks(&mut f, &[lo, hi])
    }

    /// Integrates over `[breaks[0], breaks[last]]` with panel edges at every break.
    pub fn integrate_breaks<F: FnMut(f64) -> f64>(&self, mut f: F, breaks: &[f64]) -> Result<Estimate> {
        let est = self.integrate_vec(|x, out| out[0] = f(x), 1, breaks)?;
        Ok(Estimate {
            value: est.values[0],
            error: est.errors[0],
            evaluations: est.evaluations,
        })
    }

    /// Integrates a `dim`-component integrand. `f(x, out)` writes the
    /// components at `x` into `out`.
    ///
    /// Convergence is declared when the largest component error is below
    /// `max(abs_tol, rel_tol * max_j |I_j|)`.
    pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(&self, mut f: F, dim: usize, breaks: &[f64]) -> Result<VecEstimate> {
        assert!(dim >= 1, "integrand needs at least one component");
        assert!(breaks.len() >= 2, "need at least one panel");
        let mut scratch = vec![0.0; 15 * dim];
        let mut heap = BinaryHeap::with_capacity(breaks.len());
        let mut evaluations = 0;
        for w in breaks.windows(2) {
            debug_assert!(w[1] >= w[0], "breaks must be ascending");
            if w[1] > w[0] {
                heap.push(gk15(&mut f, w[0], w[1], dim, &mut scratch));
                evaluations += 15;
            }
        }
        let panels = heap.len();
        if heap.is_empty() {
            return Ok(VecEstimate {
                values: vec![0.0; dim],
                errors: vec![0.0; dim],
                evaluations,
                panels,
            });
        }

        let (mut values, mut errors) = totals(&heap, dim);
        let mut subdivisions = 0;
        loop {
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let err = errors.iter().copied().fold(0.0, f64::max);
            let target = self.abs_tol.max(self.rel_tol * scale);
            if err <= target {
                // Running sums drift; report exact totals.
                let (values, errors) = totals(&heap, dim);
                return Ok(VecEstimate {
                    values,
                    errors,
                    evaluations,
                    panels,
                });
            }
            let worst = heap.pop().expect("heap is non-empty");
            let mid = 0.5 * (worst.lo + worst.hi);
            if subdivisions >= self.max_subdivisions || mid <= worst.lo || mid >= worst.hi {
                return Err(CoverageError::Quadrature {
                    lo: breaks[0],
                    hi: *breaks.last().unwrap(),
                    error: err,
                    evaluations,
                });
            }
            let left = gk15(&mut f, worst.lo, mid, dim, &mut scratch);
            let right = gk15(&mut f, mid, worst.hi, dim, &mut scratch);
            for j in 0..dim {
                values[j] += left.values[j] + right.values[j] - worst.values[j];
                errors[j] = (errors[j] + left.errors[j] + right.errors[j] - worst.errors[j]).max(0.0);
            }
            heap.push(left);
            heap.push(right);
            evaluations += 30;
            subdivisions += 1;
            if subdivisions % 256 == 0 {
                (values, errors) = totals(&heap, dim);
            }
        }
    }
}

fn totals(heap: &BinaryHeap<Panel>, dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut values = vec![0.0; dim];
    let mut errors = vec![0.0; dim];
    for p in heap.iter() {
        for j in 0..dim {
            values[j] += p.values[j];
            errors[j] += p.errors[j];
        }
    }
    (values, errors)
}

fn gk15<F: FnMut(f64, &mut [f64])>(f: &mut F, lo: f64, hi: f64, dim: usize, buf: &mut [f64]) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    // buf row k holds f at node k: rows 0..7 left nodes, 7 center, 8..15 right nodes.
    for k in 0..7 {
        let dx = half * XGK[k];
        f(center - dx, &mut buf[k * dim..(k + 1) * dim]);
        f(center + dx, &mut buf[(14 - k) * dim..(15 - k) * dim]);
    }
    f(center, &mut buf[7 * dim..8 * dim]);

    let mut values = Vec::with_capacity(dim);
    let mut errors = Vec::with_capacity(dim);
    for j in 0..dim {
        let at = |k: usize| buf[k * dim + j];
        let fc = at(7);
        let mut kronrod = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        let mut abs = WGK[7] * fc.abs();
        for k in 0..7 {
            let (a, b) = (at(k), at(14 - k));
            kronrod += WGK[k] * (a + b);
            abs += WGK[k] * (a.abs() + b.abs());
            if k % 2 == 1 {
                gauss += WG[k / 2] * (a + b);
            }
        }
        let mean = 0.5 * kronrod;
        let mut asc = WGK[7] * (fc - mean).abs();
        for k in 0..7 {
            asc += WGK[k] * ((at(k) - mean).abs() + (at(14 - k) - mean).abs());
        }
        let value = kronrod * half;
        let resasc = asc * half.abs();
        let resabs = abs * half.abs();
        let mut err = ((kronrod - gauss) * half).abs();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        let roundoff = 50.0 * f64::EPSILON * resabs;
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && roundoff > err {
            err = roundoff;
        }
        if !value.is_finite() {
            err = f64::INFINITY;
        }
        values.push(value);
        errors.push(err);
    }
    let norm = errors.iter().copied().fold(0.0, f64::max);
    Panel {
        lo,
        hi,
        values,
        errors,
        norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = Integrator::default();
        let est = q.integrate(|x| 3.0 * x * x + 2.0 * x + 1.0, 0.0, 2.0).unwrap();
        assert!((est.value - 14.0).abs() < 1e-13);
        assert_eq!(est.evaluations, 15);
    }

    #[test]
    fn smooth_transcendental() {
        let q = Integrator::new(1e-12, 1e-15);
        let est = q.integrate(|x| (-x * x).exp(), 0.0, 10.0).unwrap();
        let want = 0.5 * std::f64::consts::PI.sqrt();
        assert!((est.value - want).abs() < 1e-12);
    }

    #[test]
    fn step_function_is_exact_when_pre_split() {
        let q = Integrator::default();
        let f = |x: f64| if x < 1.3 { 2.0 } else { -1.0 };
        let est = q.integrate_breaks(f, &[0.0, 1.3, 3.0]).unwrap();
        assert!((est.value - (2.0 * 1.3 - 1.7)).abs() < 1e-13);
        assert_eq!(est.evaluations, 30);
    }

    #[test]
    fn step_function_without_split_still_converges() {
        let q = Integrator::new(1e-8, 1e-10);
        let f = |x: f64| if x < 1.3 { 2.0 } else { -1.0 };
        let est = q.integrate(f, 0.0, 3.0).unwrap();
        assert!((est.value - 0.9).abs() < 1e-7);
    }

    #[test]
    fn vector_components_share_nodes() {
        let q = Integrator::new(1e-12, 1e-15);
        let est = q
            .integrate_vec(
                |x, out| {
                    out[0] = 1.0;
                    out[1] = x;
                    out[2] = x.sin();
                },
                3,
                &[0.0, 1.0, std::f64::consts::PI],
            )
            .unwrap();
        assert!((est.values[0] - std::f64::consts::PI).abs() < 1e-13);
        assert!((est.values[1] - 0.5 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert!((est.values[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let mut q = Integrator::new(1e-15, 0.0);
        q.max_subdivisions = 3;
        let err = q.integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0).unwrap_err();
        assert!(matches!(err, CoverageError::Quadrature { .. }));
    }

    #[test]
    fn empty_panels_are_skipped() {
        let q = Integrator::default();
        let est = q.integrate_breaks(|_| 1.0, &[1.0, 1.0, 2.0, 2.0]).unwrap();
        assert!((est.value - 1.0).abs() < 1e-15);
    }
}
