use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::CalibrateError;
use crate::climate::{build_transfer_matrix, CarbonParams};

/// Eigen decomposition summary of the carbon transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarbonEigen {
    /// Unit eigenvalue of the conserving system followed by the fast and slow modes.
    pub eigenvalues: [f64; 3],
    /// Half-lives in years of the fast and slow modes; `None` when the mode does not decay.
    pub half_lives: [Option<f64>; 2],
}

fn half_life(ev: f64, dt: f64) -> Option<f64> {
    (ev > 0.0 && ev < 1.0).then(|| dt * 0.5f64.ln() / ev.ln())
}

/// Closed-form eigenvalues of the transfer matrix for coefficients that apply
/// over `dt` years, cross-checked against a numeric solver.
pub fn carbon_eigen(p: &CarbonParams<f64>, dt: f64) -> Result<CarbonEigen, CalibrateError> {
    let (r1, r2) = (p.r1(), p.r2());
    let (b12, b23) = (p.b12, p.b23);
    let g = 1.0 - b12 * (1.0 + r1) - b23 * (1.0 + r2);
    // the non-unit pair has sum 1 + g and product b11 b22 - b12 b21 + b22 b33 - b23 b32 + b11 b33 - (1 + g)
    let a = build_transfer_matrix(p)?;
    let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[1][1] * a[2][2] - a[1][2] * a[2][1] + a[0][0] * a[2][2];
    let product = minors - (1.0 + g);
    let disc = (1.0 + g) * (1.0 + g) - 4.0 * product;
    if disc < -1e-15 {
        return Err(CalibrateError::ComplexEigenvalues(disc));
    }
    let h = disc.max(0.0).sqrt();
    let fast = (1.0 + g - h) / 2.0;
    let slow = (1.0 + g + h) / 2.0;

    let mut numeric = numeric_eigenvalues(p)?;
    numeric.sort_by(|x, y| x.total_cmp(y));
    let mut closed = [fast, slow, 1.0];
    closed.sort_by(|x, y| x.total_cmp(y));
    let gap = closed
        .iter()
        .zip(&numeric)
        .map(|(c, n)| (c - n).abs())
        .fold(0.0, f64::max);
    if gap > 1e-10 {
        return Err(CalibrateError::EigenMismatch(gap));
    }
    Ok(CarbonEigen {
        eigenvalues: [1.0, fast, slow],
        half_lives: [half_life(fast, dt), half_life(slow, dt)],
    })
}

/// Eigenvalues of the assembled transfer matrix from a general solver.
pub fn numeric_eigenvalues(p: &CarbonParams<f64>) -> Result<[f64; 3], CalibrateError> {
    let a = build_transfer_matrix(p)?;
    let m = Matrix3::from_fn(|i, j| a[i][j]);
    let ev = m.complex_eigenvalues();
    let worst = ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst > 1e-12 {
        return Err(CalibrateError::ComplexEigenvalues(-worst));
    }
    Ok([ev[0].re, ev[1].re, ev[2].re])
}
