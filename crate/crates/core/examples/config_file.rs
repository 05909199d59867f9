//! Builds a scenario from TOML text, including a custom environment.

use uav_coverage::analytic::coverage_probability;
use uav_coverage::config::ConfigFile;

const TEXT: &str = r#"
[scenario]
ue_height = 100.0
environment = "dense"

[antenna]
downtilt_deg = 10.0

[environments.dense]
building_fraction = 0.6
buildings_per_km2 = 400.0
height_scale = 25.0
"#;

fn main() -> uav_coverage::Result<()> {
    let cfg = ConfigFile::parse(TEXT)?;
    let scn = cfg.scenario()?;
    let res = coverage_probability(&scn, &cfg.quadrature_spec())?;
    println!("coverage {:.5}", res.probability);
    println!("--- effective configuration ---\n{}", cfg.to_toml());
    Ok(())
}
