//! Analytic coverage of the reference scenario under each fading model.

use uav_coverage::analytic::{coverage_probability, rayleigh_coverage};
use uav_coverage::{NetworkScenario, QuadratureSpec};

fn main() -> uav_coverage::Result<()> {
    let quad = QuadratureSpec::default();
    let scn = NetworkScenario::reference();
    let res = coverage_probability(&scn, &quad)?;
    println!("Nakagami (3,1): {:.6} (error {:.1e})", res.probability, res.error_estimate);

    let ray = rayleigh_coverage(&scn, &quad)?;
    println!("Rayleigh closed form: {:.6}", ray.probability);

    for (l, n) in [(1, 1), (100, 100)] {
        let p = coverage_probability(&scn.with_fading(l, n), &quad)?.probability;
        println!("Nakagami ({l},{n}): {p:.6}");
    }
    Ok(())
}
