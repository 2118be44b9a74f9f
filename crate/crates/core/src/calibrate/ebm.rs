use serde::{Deserialize, Serialize};

use super::CalibrateError;
use crate::climate::TempParams;

/// Fast and slow e-folding times of the two-layer model, in years.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EbmTimescales {
    pub fast: f64,
    /// Infinite when the deep ocean is decoupled.
    pub slow: f64,
}

/// Timescales of the continuous-time system for coefficients that apply over
/// `period` years.
pub fn ebm_timescales(p: &TempParams<f64>, period: f64) -> Result<EbmTimescales, CalibrateError> {
    let lambda = p.lambda();
    let a11 = -p.c1 * (lambda + p.c3);
    let a12 = p.c1 * p.c3;
    let a21 = p.c4;
    let a22 = -p.c4;
    let tr = a11 + a22;
    let det = a11 * a22 - a12 * a21;
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        return Err(CalibrateError::ComplexEigenvalues(disc));
    }
    let root = disc.sqrt();
    let fast = (tr - root) / 2.0;
    let slow = (tr + root) / 2.0;
    Ok(EbmTimescales {
        fast: -period / fast,
        slow: if slow < 0.0 { -period / slow } else { f64::INFINITY },
    })
}
