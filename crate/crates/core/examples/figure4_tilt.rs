//! Optimal drone altitude for several BS downtilts.

use uav_coverage::experiments::{assess_figure4, figure4_preset, sweep};
use uav_coverage::Method;

fn main() -> uav_coverage::Result<()> {
    let spec = figure4_preset();
    let result = sweep(&spec)?;
    for curve in result.curves(Method::Analytic) {
        if let Some((h, p)) = curve.argmax() {
            println!("tilt {:<4} best altitude {h} m (coverage {p:.4})", curve.name());
        }
    }
    for a in assess_figure4(&result, spec.base.bs_height) {
        println!("{a}");
    }
    Ok(())
}
