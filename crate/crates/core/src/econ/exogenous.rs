use serde::{Deserialize, Serialize};

use super::{EconError, EconVintage, ExogenousParams};
use crate::Scalar;

/// Population in millions at period `t`.
pub fn labor<S: Scalar>(t: S, p: &ExogenousParams<S>) -> S {
    p.labor0 + (p.labor_inf - p.labor0) * (S::one() - (-p.t_step * p.labor_rate * t).exp())
}

/// Relative population growth per unit time at period `t`.
pub fn growth_labor<S: Scalar>(t: S, p: &ExogenousParams<S>) -> S {
    let rate = p.t_step * p.labor_rate;
    rate / (p.labor_inf / (p.labor_inf - p.labor0) * (rate * t).exp() - S::one())
}

/// Total factor productivity at period `t`.
pub fn tfp<S: Scalar>(t: S, p: &ExogenousParams<S>) -> S {
    let d = p.t_step * p.tfp_decline;
    p.tfp0 * (p.t_step * p.tfp_growth0 * (S::one() - (-d * t).exp()) / d).exp()
}

/// Carbon intensity of gross output at period `t`.
pub fn carbon_intensity<S: Scalar>(t: S, p: &ExogenousParams<S>) -> S {
    let d = p.t_step * p.sigma_decline;
    let g = p.t_step * p.sigma_growth0;
    match p.vintage {
        EconVintage::Dice2007 => p.sigma0 * (g * (S::one() - (-d * t).exp()) / d).exp(),
        EconVintage::Dice2016 => p.sigma0 * (g / (S::one() + d).ln() * ((S::one() + d).powf(t) - S::one())).exp(),
    }
}

/// Abatement cost coefficient at period `t` given the carbon intensity.
pub fn abatement_coeff<S: Scalar>(t: S, sigma: S, theta2: S, p: &ExogenousParams<S>) -> S {
    let decay = (-p.backstop_decline * t).exp();
    let thousand = S::lit(1000.0);
    match p.vintage {
        EconVintage::Dice2007 => p.backstop_price0 * (S::one() + decay) * thousand * sigma / theta2,
        EconVintage::Dice2016 => p.backstop_price0 * decay * thousand * p.c2co2 * sigma / theta2,
    }
}

/// Land-use emissions in 1000 GtC per year at period `t`.
pub fn land_emissions<S: Scalar>(t: S, p: &ExogenousParams<S>) -> S {
    p.land0 * (-p.t_step * p.land_decline * t).exp()
}

/// Non-CO2 forcing law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FexMode {
    /// Linear ramp from `fex0` to `fex1`, constant afterwards.
    Linear,
    /// Fixed share of the CO2 forcing.
    Proportional(f64),
}

impl FexMode {
    /// Default share of non-CO2 forcing in the proportional law.
    pub const DEFAULT_SHARE: f64 = 0.3;

    pub fn proportional() -> Self {
        FexMode::Proportional(Self::DEFAULT_SHARE)
    }
}

/// Non-CO2 forcing in W/m² at period `t`.
pub fn exogenous_forcing<S: Scalar>(
    t: S,
    p: &ExogenousParams<S>,
    mode: FexMode,
    f_co2: Option<S>,
) -> Result<S, EconError> {
    match mode {
        FexMode::Linear => {
            let ramp = p.fex_ramp_years / p.t_step;
            Ok(p.fex0 + (p.fex1 - p.fex0) / ramp * t.min(ramp))
        }
        FexMode::Proportional(share) => f_co2
            .map(|f| S::lit(share) * f)
            .ok_or(EconError::MissingCo2Forcing),
    }
}

/// Precomputed exogenous series, one entry per period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExogenousPath<S = f64> {
    pub params: ExogenousParams<S>,
    pub labor: Vec<S>,
    pub tfp: Vec<S>,
    pub sigma: Vec<S>,
    pub theta1: Vec<S>,
    pub e_land: Vec<S>,
    /// Linear-ramp non-CO2 forcing.
    pub f_ex: Vec<S>,
}

impl<S: Scalar> ExogenousPath<S> {
    /// Evaluates every law for periods `offset .. offset + n`.
    pub fn generate(p: &ExogenousParams<S>, theta2: S, offset: usize, n: usize) -> Self {
        let mut out = Self {
            params: *p,
            labor: Vec::with_capacity(n),
            tfp: Vec::with_capacity(n),
            sigma: Vec::with_capacity(n),
            theta1: Vec::with_capacity(n),
            e_land: Vec::with_capacity(n),
            f_ex: Vec::with_capacity(n),
        };
        for k in offset..offset + n {
            let t = S::lit(k as f64);
            let sigma = carbon_intensity(t, p);
            out.labor.push(labor(t, p));
            out.tfp.push(tfp(t, p));
            out.sigma.push(sigma);
            out.theta1.push(abatement_coeff(t, sigma, theta2, p));
            out.e_land.push(land_emissions(t, p));
            out.f_ex
                .push(exogenous_forcing(t, p, FexMode::Linear, None).expect("linear mode needs no input"));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.labor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labor.is_empty()
    }

    /// Copy of periods `from ..`.
    pub fn tail(&self, from: usize) -> Self {
        Self {
            params: self.params,
            labor: self.labor[from..].to_vec(),
            tfp: self.tfp[from..].to_vec(),
            sigma: self.sigma[from..].to_vec(),
            theta1: self.theta1[from..].to_vec(),
            e_land: self.e_land[from..].to_vec(),
            f_ex: self.f_ex[from..].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::EconPreset;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn d16() -> ExogenousParams<f64> {
        EconPreset::dice2016(5.0).exo
    }

    #[test]
    fn labor_examples() {
        let p = d16();
        assert_eq!(labor(0.0, &p), 7403.0);
        assert_abs_diff_eq!(labor(1e6, &p), 11500.0, epsilon = 1e-9);
        assert_abs_diff_eq!(labor(1.0, &p), 7403.0 + 4097.0 * (1.0 - (-0.134f64).exp()), epsilon = 1e-9);
    }

    #[test]
    fn labor_growth_matches_derivative() {
        let p = d16();
        let h = 1e-5;
        for t in [0.0, 3.0, 20.0] {
            let fd = (labor(t + h, &p) - labor(t - h, &p)) / (2.0 * h) / labor(t, &p);
            assert_abs_diff_eq!(growth_labor(t, &p), fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn tfp_examples() {
        let p = d16();
        assert_eq!(tfp(0.0, &p), 5.115);
        let expected = 5.115 * (5.0 * 0.0152 * (1.0 - (-5.0f64 * 0.005).exp()) / (5.0 * 0.005)).exp();
        assert_abs_diff_eq!(tfp(1.0, &p), expected, epsilon = 1e-12);
        let mut fast = p;
        fast.tfp_decline = 1e6;
        assert_abs_diff_eq!(tfp(3.0, &fast), 5.115, epsilon = 1e-6);
    }

    #[test]
    fn carbon_intensity_examples() {
        assert_eq!(carbon_intensity(0.0, &d16()), 0.00009556);
        assert_eq!(carbon_intensity(0.0, &EconPreset::dice2007(10.0).exo), 0.00013418);
        // spreadsheet-style evaluation for 2100
        let growth: f64 = 5.0 * -0.0152;
        let base: f64 = 1.0 + 5.0 * 0.001;
        let mut pow = 1.0;
        for _ in 0..17 {
            pow *= base;
        }
        let expected = 0.00009556 * (growth / base.ln() * (pow - 1.0)).exp();
        assert_abs_diff_eq!(carbon_intensity(17.0, &d16()), expected, epsilon = 1e-18);
    }

    #[test]
    fn abatement_coeff_examples() {
        let p = d16();
        assert_abs_diff_eq!(abatement_coeff(0.0, 0.00009556, 2.6, &p), 0.07411, epsilon = 5e-6);
        let mut flat = p;
        flat.backstop_decline = 0.0;
        let ratio0 = abatement_coeff(0.0, 1.0, 2.6, &flat);
        for t in [1.0, 7.0, 40.0] {
            let s = carbon_intensity(t, &flat);
            assert_abs_diff_eq!(abatement_coeff(t, s, 2.6, &flat), ratio0 * s, epsilon = 1e-15);
        }
        let q = EconPreset::dice2007(10.0).exo;
        let expected = 0.585 * 2.0 * 1000.0 * 0.00013418 / 2.8;
        assert_abs_diff_eq!(abatement_coeff(0.0, 0.00013418, 2.8, &q), expected, epsilon = 1e-15);
    }

    #[test]
    fn land_emission_examples() {
        let p = d16();
        assert_eq!(land_emissions(0.0, &p), 0.000709);
        assert_abs_diff_eq!(land_emissions(17.0, &p), 0.000709 * (-5.0f64 * 0.023 * 17.0).exp(), epsilon = 1e-18);
        let mut flat = p;
        flat.land_decline = 0.0;
        assert_eq!(land_emissions(30.0, &flat), 0.000709);
    }

    #[test]
    fn exogenous_forcing_examples() {
        let p = d16();
        assert_eq!(exogenous_forcing(0.0, &p, FexMode::Linear, None).unwrap(), 0.5);
        assert_abs_diff_eq!(exogenous_forcing(17.0, &p, FexMode::Linear, None).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(exogenous_forcing(40.0, &p, FexMode::Linear, None).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            exogenous_forcing(3.0, &p, FexMode::proportional(), Some(3.45)).unwrap(),
            1.035,
            epsilon = 1e-12
        );
        assert_eq!(
            exogenous_forcing(3.0, &p, FexMode::proportional(), None),
            Err(EconError::MissingCo2Forcing)
        );
    }

    #[test]
    fn path_regeneration_is_bit_identical() {
        let p = EconPreset::<f64>::dice2016(1.0);
        let a = ExogenousPath::generate(&p.exo, p.params.theta2, 0, 1000);
        let b = ExogenousPath::generate(&p.exo, p.params.theta2, 0, 1000);
        assert_eq!(a, b);
        let tail = ExogenousPath::generate(&p.exo, p.params.theta2, 50, 950);
        assert_eq!(a.tail(50), tail);
    }

    #[test]
    fn series_positive_and_monotone_over_1000_years() {
        for (p, theta2) in [
            (EconPreset::<f64>::dice2016(1.0), 2.6),
            (EconPreset::<f64>::dice2016(5.0), 2.6),
            (EconPreset::<f64>::dice2007(10.0), 2.8),
        ] {
            let n = (1000.0 / p.exo.t_step) as usize;
            let path = ExogenousPath::generate(&p.exo, theta2, 0, n);
            for k in 1..n {
                assert!(path.labor[k] >= path.labor[k - 1]);
                if (k as f64) * p.exo.t_step <= 300.0 {
                    assert!(path.labor[k] > path.labor[k - 1]);
                }
                assert!(path.sigma[k] < path.sigma[k - 1]);
                assert!(path.e_land[k] < path.e_land[k - 1]);
                assert!(path.sigma[k] > 0.0 && path.sigma[k].is_finite());
                assert!(path.theta1[k] > 0.0 && path.theta1[k].is_finite());
            }
        }
    }

    proptest! {
        #[test]
        fn labor_bounded(t in 0.0f64..500.0) {
            let p = d16();
            let l = labor(t, &p);
            prop_assert!(l >= 7403.0 && l <= 11500.0);
        }
    }
}
