//! Reduced-size cross-validation of the analytic model against simulation.

use uav_coverage::experiments::{validate, ValidationSpec};
use uav_coverage::{NetworkScenario, SimulationSpec};

fn main() -> uav_coverage::Result<()> {
    let spec = ValidationSpec {
        simulation: SimulationSpec { num_drops: 5_000, ..SimulationSpec::default() },
        conditional_drops: 5_000,
        ..ValidationSpec::default()
    };
    let report = validate(&NetworkScenario::reference(), &spec)?;
    print!("{report}");
    println!("overall: {}", if report.passed() { "pass" } else { "FAIL" });
    Ok(())
}
