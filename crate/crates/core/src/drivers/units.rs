/// GtC per ppm of atmospheric CO2.
pub const GTC_PER_PPM: f64 = 2.1275;
/// Pre-industrial concentration used by the RCP forcing formula.
pub const RCP_BASE_PPM: f64 = 285.0;
/// Doubling forcing used by the RCP forcing formula, W/m².
pub const RCP_F2X: f64 = 3.68;

/// Atmospheric mass in 1000 GtC for a concentration in ppm.
pub fn concentration_to_mass(ppm: f64) -> f64 {
    ppm * GTC_PER_PPM / 1000.0
}

/// Concentration in ppm for an atmospheric mass in 1000 GtC.
pub fn mass_to_concentration(mass: f64) -> f64 {
    mass * 1000.0 / GTC_PER_PPM
}

/// CO2 forcing in W/m² for each concentration.
pub fn co2_forcing_series(ppm: &[f64], base_ppm: f64, f2x: f64) -> Vec<f64> {
    ppm.iter().map(|c| f2x * (c / base_ppm).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn conversions() {
        assert_abs_diff_eq!(concentration_to_mass(400.0), 0.851, epsilon = 1e-12);
        assert_abs_diff_eq!(mass_to_concentration(0.851), 400.0, epsilon = 1e-9);
        let f = co2_forcing_series(&[285.0, 570.0, 1140.0], RCP_BASE_PPM, RCP_F2X);
        assert_eq!(f, vec![0.0, 3.68, 7.36]);
    }

    proptest! {
        #[test]
        fn round_trip(ppm in 1.0f64..5000.0) {
            prop_assert!((mass_to_concentration(concentration_to_mass(ppm)) - ppm).abs() < 1e-9);
        }
    }
}
