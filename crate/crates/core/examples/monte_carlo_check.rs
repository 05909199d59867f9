//! Monte Carlo estimate of the reference coverage next to the analytic value.
//! Pass a drop count as the first argument (default 20000).

use uav_coverage::analytic::coverage_probability;
use uav_coverage::{NetworkScenario, QuadratureSpec, SimulationSpec, Simulator};

fn main() -> uav_coverage::Result<()> {
    let drops = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let scn = NetworkScenario::reference();
    let analytic = coverage_probability(&scn, &QuadratureSpec::default())?.probability;
    let sim = Simulator::new(scn, SimulationSpec { num_drops: drops, ..SimulationSpec::default() })?;
    let est = sim.estimate_coverage();
    let z = (est.probability - analytic) / est.std_error;
    println!("analytic   {analytic:.5}");
    println!("simulated  {:.5} +/- {:.5}  ({} drops, z = {z:.2})", est.probability, est.std_error, est.num_drops);
    println!("mean BS count per drop {:.1}", est.diagnostics.mean_bs_count);
    Ok(())
}
