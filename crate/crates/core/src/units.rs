//! Conversions applied once at the configuration boundary.
//!
//! Everything inside the library works in meters, radians, BSs per m² and
//! linear power ratios.

/// Power ratio in dB to linear scale: `10^(x/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Density in BSs per km² to BSs per m².
pub fn per_km2_to_per_m2(density: f64) -> f64 {
    density * 1e-6
}

pub fn per_m2_to_per_km2(density: f64) -> f64 {
    density * 1e6
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn los_intercept_from_db() {
        // -41.1 dB is 10^-4.11
        let a = db_to_linear(-41.1);
        assert!((a / 10f64.powf(-4.11) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_conversion() {
        assert!((per_km2_to_per_m2(50.0) - 5e-5).abs() < 1e-20);
        assert!((per_m2_to_per_km2(5e-5) - 50.0).abs() < 1e-12);
    }
}
