//! Interference Laplace transform and its scaled derivatives, checked against
//! central finite differences.

use uav_coverage::{CoverageModel, NetworkScenario, QuadratureSpec};

fn main() -> uav_coverage::Result<()> {
    let quad = QuadratureSpec { rel_tol: 1e-12, abs_tol: 1e-15, ..QuadratureSpec::default() };
    let model = CoverageModel::new(NetworkScenario::reference(), quad)?;
    let r0 = 60.0;
    let s = 1.0 / model.serving_scale(r0, uav_coverage::LinkState::Los);
    let derivs = model.laplace_derivatives(s, r0, 3)?;
    println!("r0 = {r0} m, s = {s:.4e}");
    for (k, d) in derivs.iter().enumerate() {
        println!("  L^({k})(s) = {d:.6e}");
    }
    let h = s * 1e-4;
    let fd = (model.laplace(s + h, r0)? - model.laplace(s - h, r0)?) / (2.0 * h);
    println!("finite difference of L: {fd:.6e}");
    Ok(())
}
