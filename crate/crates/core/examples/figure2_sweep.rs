//! Coverage versus drone altitude for three fading models, with the
//! qualitative checks printed after the curve peaks.

use uav_coverage::experiments::{assess_figure2, figure2_preset, sweep};
use uav_coverage::Method;

fn main() -> uav_coverage::Result<()> {
    let result = sweep(&figure2_preset())?;
    for curve in result.curves(Method::Analytic) {
        let (h, p) = curve.argmax().unwrap_or((f64::NAN, f64::NAN));
        println!("{:<8} peak {p:.4} at {h} m, at 150 m {:.4}", curve.name(), curve.value_at(150.0).unwrap_or(f64::NAN));
    }
    for a in assess_figure2(&result) {
        println!("{a}");
    }
    result.write_csv(std::io::stdout()).map_err(|e| uav_coverage::CoverageError::Config(e.to_string()))
}
