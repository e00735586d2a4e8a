//! Gaussian decay-rate fit of a localized mode.

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::lattice::Field;

pub const DEFAULT_WINDOW: (f64, f64) = (0.5, 2.5);
const MIN_NODES: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub alpha: f64,
    pub r_squared: f64,
    /// Annulus `[r_min, r_max]`.
    pub window: (f64, f64),
    pub nodes: usize,
}

/// Fits `‖v(z)‖ ∝ exp(−α|z|²)` over the default annulus.
pub fn fit_gaussian_decay(mode: &Field) -> Result<DecayFit, AnalysisError> {
    fit_gaussian_decay_in(mode, DEFAULT_WINDOW)
}

/// Weighted least squares of `ln‖v‖` against `−|z|²`, weights `‖v‖²`, over
/// the nodes with `r_min ≤ |z| ≤ r_max`.
pub fn fit_gaussian_decay_in(mode: &Field, window: (f64, f64)) -> Result<DecayFit, AnalysisError> {
    let grid = mode.grid();
    let mut pts = Vec::new();
    for (k, z) in grid.coords().enumerate() {
        let r = z.norm();
        if r < window.0 || r > window.1 {
            continue;
        }
        let density = mode.node_density(k);
        if density == 0.0 {
            return Err(AnalysisError::VanishingMode);
        }
        // ln‖v‖ = ½ ln‖v‖², weight ‖v‖²
        pts.push((-(r * r), 0.5 * density.ln(), density));
    }
    if pts.len() < MIN_NODES {
        return Err(AnalysisError::InsufficientWindow(pts.len()));
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y, w) in &pts {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
        syy += w * (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(AnalysisError::InsufficientWindow(pts.len()));
    }
    let alpha = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(DecayFit { alpha, r_squared, window, nodes: pts.len() })
}
