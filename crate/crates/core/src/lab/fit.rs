//! Power-law fits `error ≈ C · δ^γ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub gamma_fit: f64,
    pub c_fit: f64,
    pub r2: f64,
}

/// Least-squares line through `(ln δ, ln error)`.
pub fn fit_rate(deltas: &[f64], errors: &[f64]) -> Result<RateFit> {
    if deltas.len() != errors.len() {
        return Err(Error::ShapeMismatch {
            expected: deltas.len(),
            found: errors.len(),
        });
    }
    if deltas.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "a rate fit needs at least 3 points, got {}",
            deltas.len()
        )));
    }
    if let Some(v) = deltas.iter().chain(errors).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "rate fit values must be positive and finite, got {v}"
        )));
    }
    let x: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("rate fit needs at least two distinct deltas".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(RateFit {
        gamma_fit: slope,
        c_fit: intercept.exp(),
        r2,
    })
}
