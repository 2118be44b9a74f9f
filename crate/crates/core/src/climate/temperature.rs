use serde::{Deserialize, Serialize};

use super::ClimateError;
use crate::Scalar;

/// Temperature anomalies above pre-industrial in K.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Temperature<S = f64> {
    /// Atmosphere and upper ocean layer.
    pub at: S,
    /// Deep ocean layer.
    pub oc: S,
}

impl<S: Scalar> Temperature<S> {
    pub fn new(at: S, oc: S) -> Self {
        Self { at, oc }
    }
}

/// Two-layer energy balance coefficients. Rates are per year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TempParams<S = f64> {
    /// Inverse heat capacity of the upper layer, K per (W/m²) per year.
    pub c1: S,
    /// Heat exchange coefficient between layers, W/m² per K.
    pub c3: S,
    /// Deep-ocean relaxation rate, 1/year.
    pub c4: S,
    /// Forcing from a doubling of CO2, W/m².
    pub f_2xco2: S,
    /// Equilibrium climate sensitivity, K.
    pub t_2xco2: S,
}

impl<S: Scalar> TempParams<S> {
    pub fn new(c1: S, c3: S, c4: S, f_2xco2: S, t_2xco2: S) -> Result<Self, ClimateError> {
        let p = Self {
            c1,
            c3,
            c4,
            f_2xco2,
            t_2xco2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ClimateError> {
        for (name, v) in [
            ("c1", self.c1),
            ("c3", self.c3),
            ("c4", self.c4),
            ("f_2xco2", self.f_2xco2),
            ("t_2xco2", self.t_2xco2),
        ] {
            if !(v > S::zero()) || !v.is_finite() {
                return Err(ClimateError::InvalidParameter {
                    name,
                    reason: format!("must be strictly positive, got {:?}", v),
                });
            }
        }
        Ok(())
    }

    /// Climate feedback parameter in W/m² per K.
    pub fn lambda(&self) -> S {
        self.f_2xco2 / self.t_2xco2
    }

    /// Copy with `c1` and `c4` multiplied by `factor`.
    pub fn scaled(&self, factor: S) -> Self {
        Self {
            c1: self.c1 * factor,
            c4: self.c4 * factor,
            ..*self
        }
    }

    /// Rejects time steps for which the explicit update is unstable.
    pub fn check_step(&self, dt: S) -> Result<(), ClimateError> {
        if dt * self.c1 * (self.lambda() + self.c3) >= S::lit(2.0) {
            return Err(ClimateError::UnstableStep {
                dt: dt.to_f64().unwrap_or(f64::NAN),
                reason: "dt*c1*(lambda+c3) >= 2",
            });
        }
        Ok(())
    }
}

/// Total radiative forcing in W/m².
pub fn forcing<S: Scalar>(m_at: S, m_base: S, f_ex: S, p: &TempParams<S>) -> Result<S, ClimateError> {
    if !(m_at > S::zero()) {
        return Err(ClimateError::NonPositiveMass(m_at.to_f64().unwrap_or(f64::NAN)));
    }
    if !(m_base > S::zero()) {
        return Err(ClimateError::NonPositiveMass(m_base.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(p.f_2xco2 * (m_at / m_base).log2() + f_ex)
}

/// Advances both layers by `dt` years under forcing `f`.
pub fn step_temperature<S: Scalar>(t: &Temperature<S>, f: S, p: &TempParams<S>, dt: S) -> Temperature<S> {
    let gap = t.at - t.oc;
    Temperature {
        at: t.at + dt * p.c1 * (f - p.lambda() * t.at - p.c3 * gap),
        oc: t.oc + dt * p.c4 * gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn cdice() -> TempParams<f64> {
        TempParams::new(0.137, 0.73, 0.00689, 3.45, 3.25).unwrap()
    }

    #[test]
    fn forcing_examples() {
        let p = cdice();
        assert_eq!(forcing(0.607, 0.607, 0.0, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(forcing(1.214, 0.607, 0.0, &p).unwrap(), 3.45, epsilon = 1e-12);
        assert_abs_diff_eq!(forcing(4.0 * 0.607, 0.607, 0.0, &p).unwrap(), 6.90, epsilon = 1e-12);
        assert_abs_diff_eq!(forcing(0.607, 0.607, 0.5, &p).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn forcing_rejects_nonpositive_mass() {
        assert!(matches!(
            forcing(0.0, 0.607, 0.0, &cdice()),
            Err(ClimateError::NonPositiveMass(_))
        ));
        assert!(forcing(-1.0, 0.607, 0.0, &cdice()).is_err());
    }

    #[test]
    fn lambda_is_derived() {
        let mut p = cdice();
        assert_abs_diff_eq!(p.lambda(), 3.45 / 3.25, epsilon = 1e-15);
        p.t_2xco2 = 2.0;
        assert_abs_diff_eq!(p.lambda(), 1.725, epsilon = 1e-15);
    }

    #[test]
    fn zero_forcing_keeps_equilibrium() {
        let t = step_temperature(&Temperature::new(0.0, 0.0), 0.0, &cdice(), 1.0);
        assert_eq!(t, Temperature::new(0.0, 0.0));
    }

    #[test]
    fn one_step_from_rest() {
        let t = step_temperature(&Temperature::new(0.0, 0.0), 6.9, &cdice(), 1.0);
        assert_abs_diff_eq!(t.at, 0.9453, epsilon = 1e-12);
        assert_eq!(t.oc, 0.0);
    }

    #[test]
    fn quadrupling_fixed_point() {
        let p = cdice();
        let mut t = Temperature::new(0.0, 0.0);
        for _ in 0..20_000 {
            t = step_temperature(&t, 6.9, &p, 1.0);
        }
        assert_abs_diff_eq!(t.at, 6.5, epsilon = 1e-9);
        assert_abs_diff_eq!(t.oc, 6.5, epsilon = 1e-9);
    }

    #[test]
    fn nonpositive_parameters_rejected() {
        assert!(TempParams::new(0.137, 0.73, 0.00689, 3.45, 0.0).is_err());
        assert!(TempParams::new(-0.1, 0.73, 0.00689, 3.45, 3.25).is_err());
    }

    #[test]
    fn unstable_step_rejected() {
        assert!(cdice().check_step(1.0).is_ok());
        assert!(cdice().check_step(10.0).is_err());
    }

    proptest! {
        #[test]
        fn steady_state_is_f_over_lambda(f in -2.0f64..10.0) {
            let p = cdice();
            let eq = f / p.lambda();
            let t = step_temperature(&Temperature::new(eq, eq), f, &p, 1.0);
            prop_assert!((t.at - eq).abs() < 1e-12 && (t.oc - eq).abs() < 1e-12);
        }
    }
}
