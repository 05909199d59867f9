//! Line-of-sight probability versus ground distance for the four built-in
//! environments, seen from a ground user and from a drone.

use uav_coverage::channel::{los_probability, EnvironmentPreset, LinkGeometry};

fn main() -> uav_coverage::Result<()> {
    let distances = [10.0, 50.0, 100.0, 200.0, 400.0, 800.0];
    for ue_height in [1.5, 60.0] {
        println!("UE at {ue_height} m, BS at 30 m");
        for env in EnvironmentPreset::ALL {
            let params = env.params();
            let row: Vec<String> = distances
                .iter()
                .map(|&r| {
                    let geom = LinkGeometry::new(r, 30.0, ue_height)?;
                    Ok(format!("{:.3}", los_probability(&geom, &params)))
                })
                .collect::<uav_coverage::Result<_>>()?;
            println!("  {:<16} {}", env.name(), row.join("  "));
        }
    }
    Ok(())
}
