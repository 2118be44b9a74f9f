use serde::{Deserialize, Serialize};

use super::ClimateError;
use crate::Scalar;

/// Carbon mass per reservoir in 1000 GtC.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CarbonMass<S = f64> {
    /// Atmosphere.
    pub at: S,
    /// Upper ocean and biosphere.
    pub uo: S,
    /// Lower ocean.
    pub lo: S,
}

impl<S: Scalar> CarbonMass<S> {
    pub fn new(at: S, uo: S, lo: S) -> Self {
        Self { at, uo, lo }
    }

    pub fn total(&self) -> S {
        self.at + self.uo + self.lo
    }

    pub fn as_array(&self) -> [S; 3] {
        [self.at, self.uo, self.lo]
    }

    pub fn from_array(a: [S; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// Transfer coefficients and equilibrium masses of the three-box carbon cycle.
///
/// Rates are per year. The equilibrium ratios `r1`, `r2` are always derived
/// from `m_eq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarbonParams<S = f64> {
    /// Atmosphere to upper-ocean transfer rate.
    pub b12: S,
    /// Upper-ocean to lower-ocean transfer rate.
    pub b23: S,
    /// Pre-industrial equilibrium masses.
    pub m_eq: CarbonMass<S>,
}

impl<S: Scalar> CarbonParams<S> {
    /// Builds validated parameters.
    pub fn new(b12: S, b23: S, m_eq: CarbonMass<S>) -> Result<Self, ClimateError> {
        let p = Self { b12, b23, m_eq };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ClimateError> {
        let unit = |name, v: S| {
            if v > S::zero() && v < S::one() {
                Ok(())
            } else {
                Err(ClimateError::InvalidParameter {
                    name,
                    reason: format!("must lie in (0, 1), got {:?}", v),
                })
            }
        };
        unit("b12", self.b12)?;
        unit("b23", self.b23)?;
        for (name, v) in [
            ("m_eq.at", self.m_eq.at),
            ("m_eq.uo", self.m_eq.uo),
            ("m_eq.lo", self.m_eq.lo),
        ] {
            if !(v > S::zero()) {
                return Err(ClimateError::InvalidParameter {
                    name,
                    reason: format!("must be positive, got {:?}", v),
                });
            }
        }
        Ok(())
    }

    /// Atmosphere to upper-ocean equilibrium mass ratio.
    pub fn r1(&self) -> S {
        self.m_eq.at / self.m_eq.uo
    }

    /// Upper-ocean to lower-ocean equilibrium mass ratio.
    pub fn r2(&self) -> S {
        self.m_eq.uo / self.m_eq.lo
    }

    /// Copy with both transfer rates multiplied by `factor`.
    pub fn scaled(&self, factor: S) -> Self {
        Self {
            b12: self.b12 * factor,
            b23: self.b23 * factor,
            m_eq: self.m_eq,
        }
    }

    /// Rejects time steps for which the explicit update is unstable.
    pub fn check_step(&self, dt: S) -> Result<(), ClimateError> {
        let load = dt * (self.b12 * (S::one() + self.r1()) + self.b23);
        if load >= S::one() {
            return Err(ClimateError::UnstableStep {
                dt: dt.to_f64().unwrap_or(f64::NAN),
                reason: "dt*(b12*(1+r1)+b23) >= 1",
            });
        }
        Ok(())
    }
}

/// Column-stochastic transfer matrix; `m[dest][src]` is the fraction of the
/// source reservoir found in the destination after one step.
pub type TransferMatrix<S> = [[S; 3]; 3];

/// Assembles the one-step transfer matrix from per-step coefficients.
pub fn build_transfer_matrix<S: Scalar>(p: &CarbonParams<S>) -> Result<TransferMatrix<S>, ClimateError> {
    let b12 = p.b12;
    let b23 = p.b23;
    let b11 = S::one() - b12;
    let b21 = b12 * p.r1();
    let b22 = S::one() - b21 - b23;
    let b32 = b23 * p.r2();
    let b33 = S::one() - b32;
    for (entry, v) in [
        ("b11", b11),
        ("b12", b12),
        ("b21", b21),
        ("b22", b22),
        ("b23", b23),
        ("b32", b32),
        ("b33", b33),
    ] {
        if v < S::zero() {
            return Err(ClimateError::NegativeTransfer {
                entry,
                value: v.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let z = S::zero();
    Ok([[b11, b21, z], [b12, b22, b32], [z, b23, b33]])
}

/// Advances the reservoirs by `dt` years under emissions `e` (1000 GtC/yr).
pub fn step_carbon<S: Scalar>(
    m: &CarbonMass<S>,
    p: &CarbonParams<S>,
    e: S,
    dt: S,
) -> Result<CarbonMass<S>, ClimateError> {
    p.check_step(dt)?;
    let a = build_transfer_matrix(&p.scaled(dt))?;
    let next = CarbonMass {
        at: a[0][0] * m.at + a[0][1] * m.uo + dt * e,
        uo: a[1][0] * m.at + a[1][1] * m.uo + a[1][2] * m.lo,
        lo: a[2][1] * m.uo + a[2][2] * m.lo,
    };
    for (reservoir, v) in [("at", next.at), ("uo", next.uo), ("lo", next.lo)] {
        if v < S::zero() {
            return Err(ClimateError::NegativeMass {
                reservoir,
                value: v.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(next)
}
