//! Coverage versus BS height across environments and downtilts, for ground
//! users (or aerial users with `aerial` as the first argument).

use uav_coverage::experiments::{assess_plateau, figure3_preset, sweep, UserKind};
use uav_coverage::Method;

fn main() -> uav_coverage::Result<()> {
    let user = match std::env::args().nth(1).as_deref() {
        Some("aerial") => UserKind::Aerial,
        _ => UserKind::Ground,
    };
    let result = sweep(&figure3_preset(user))?;
    println!("{} users", user.name());
    for curve in result.curves(Method::Analytic) {
        let ps: Vec<String> = curve.points.iter().map(|(_, p, _)| format!("{p:.3}")).collect();
        println!("  {:<22} {}", curve.name(), ps.join(" "));
    }
    for a in assess_plateau(&result, 0.01) {
        println!("{a}");
    }
    Ok(())
}
