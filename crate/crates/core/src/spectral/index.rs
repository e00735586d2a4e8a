//! Zero-mode counting, the Witten index `Δ = n₋ − n₊` and the partner
//! spectrum pairing check.

use serde::{Deserialize, Serialize};

use super::eigen::{low_spectrum, EigenOptions, EigenReport};
use super::winding::{winding_number, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use crate::error::SpectralError;
use crate::lattice::GridSpec;
use crate::susy::{DefectOperatorSet, ModelSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexParams {
    pub eigen: EigenOptions,
    pub gap_threshold: f64,
    /// Defaults to half the box width.
    pub loc_radius: Option<f64>,
    pub loc_min: f64,
    pub winding_radius: f64,
    pub winding_samples: usize,
}

impl Default for IndexParams {
    fn default() -> Self {
        Self {
            eigen: EigenOptions::with_k(10),
            gap_threshold: 0.5,
            loc_radius: None,
            loc_min: 0.95,
            winding_radius: DEFAULT_RADIUS,
            winding_samples: DEFAULT_SAMPLES,
        }
    }
}

impl IndexParams {
    pub fn loc_radius_for(&self, grid: &GridSpec) -> f64 {
        self.loc_radius.unwrap_or(grid.half_width() / 2.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeCount {
    pub count: usize,
    /// Localization fraction of every sub-gap eigenvector, counted or not.
    pub fractions: Vec<f64>,
    /// Some eigenvalue lies within 10% of the threshold.
    pub ambiguous: bool,
    /// Every computed eigenvalue is below the threshold, so the count is a
    /// lower bound only.
    pub saturated: bool,
}

/// Counts eigenpairs below `gap_threshold` whose eigenvectors keep at least
/// `loc_min` of their mass inside `|z| < loc_radius`.
pub fn count_zero_modes(
    report: &EigenReport,
    grid: &GridSpec,
    gap_threshold: f64,
    loc_radius: f64,
    loc_min: f64,
) -> Result<ZeroModeCount, SpectralError> {
    if !(gap_threshold > 0.0) {
        return Err(SpectralError::InvalidParameter(format!("gap threshold must be positive, got {gap_threshold}")));
    }
    let mut out = ZeroModeCount { count: 0, fractions: Vec::new(), ambiguous: false, saturated: false };
    for (i, &lambda) in report.eigenvalues.iter().enumerate() {
        if (lambda - gap_threshold).abs() <= 0.1 * gap_threshold {
            out.ambiguous = true;
        }
        if lambda >= gap_threshold {
            continue;
        }
        let fraction = report.mode_field(i, grid)?.localization_fraction(loc_radius)?;
        out.fractions.push(fraction);
        if fraction >= loc_min {
            out.count += 1;
        }
    }
    out.saturated = !report.is_empty() && report.eigenvalues.iter().all(|&l| l < gap_threshold);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WittenIndexReport {
    pub schema_version: u32,
    pub n_minus: usize,
    pub n_plus: usize,
    pub delta: i64,
    pub gap_threshold: f64,
    pub loc_radius: f64,
    pub loc_min: f64,
    /// Localization of the sub-gap modes of `H₋`.
    pub localization_fractions: Vec<f64>,
    pub plus_localization_fractions: Vec<f64>,
    pub ambiguous: bool,
    pub saturated: bool,
    pub winding: Option<i64>,
    pub winding_error: Option<String>,
    pub winding_agrees: Option<bool>,
    pub spectrum_minus: EigenReport,
    pub spectrum_plus: EigenReport,
    pub grid: GridSpec,
    pub model: Option<ModelSpec>,
}

/// Discretizes `set` on `grid`, solves both partner Hamiltonians and counts
/// their localized zero modes; the winding of the lower-left entry of `D` is
/// attached as an independent estimate.
pub fn witten_index(set: &DefectOperatorSet, grid: &GridSpec, params: &IndexParams) -> Result<WittenIndexReport, SpectralError> {
    let disc = set.discretize(grid);
    let (minus, plus) = rayon::join(
        || low_spectrum(&disc.h_minus, "H_minus", &params.eigen),
        || low_spectrum(&disc.h_plus, "H_plus", &params.eigen),
    );
    let (minus, plus) = (minus?, plus?);
    let radius = params.loc_radius_for(grid);
    let cm = count_zero_modes(&minus, grid, params.gap_threshold, radius, params.loc_min)?;
    let cp = count_zero_modes(&plus, grid, params.gap_threshold, radius, params.loc_min)?;
    let delta = cm.count as i64 - cp.count as i64;

    let (winding, winding_error) = if set.components() == 2 {
        match winding_number(set.d.entry(1, 0), params.winding_radius, params.winding_samples) {
            Ok(w) => (Some(w), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("winding needs a 2x2 operator".to_string()))
    };

    Ok(WittenIndexReport {
        schema_version: SCHEMA_VERSION,
        n_minus: cm.count,
        n_plus: cp.count,
        delta,
        gap_threshold: params.gap_threshold,
        loc_radius: radius,
        loc_min: params.loc_min,
        localization_fractions: cm.fractions,
        plus_localization_fractions: cp.fractions,
        ambiguous: cm.ambiguous || cp.ambiguous,
        saturated: cm.saturated || cp.saturated,
        winding,
        winding_error,
        winding_agrees: winding.map(|w| w == delta),
        spectrum_minus: minus,
        spectrum_plus: plus,
        grid: *grid,
        model: set.model.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub cutoff: f64,
    pub tol: f64,
    /// `(H₋ value, H₊ partner)`.
    pub matched: Vec<(f64, f64)>,
    pub unmatched_minus: Vec<f64>,
    pub unmatched_plus: Vec<f64>,
    pub all_matched: bool,
    /// The `H₋` solve reached past `cutoff`, so the window was fully resolved.
    pub window_complete: bool,
}

/// Matches every `H₋` eigenvalue in `(gap, cutoff)` one-to-one with an `H₊`
/// eigenvalue within `tol`, nearest first.
pub fn pairing_check(minus: &EigenReport, plus: &EigenReport, gap: f64, cutoff: f64, tol: f64) -> PairingReport {
    let in_window = |l: f64| l > gap && l < cutoff;
    let mut free: Vec<f64> = plus.eigenvalues.clone();
    let mut report = PairingReport {
        cutoff,
        tol,
        matched: Vec::new(),
        unmatched_minus: Vec::new(),
        unmatched_plus: Vec::new(),
        all_matched: true,
        window_complete: minus.is_empty() || minus.eigenvalues.iter().any(|&l| l >= cutoff),
    };
    for &l in minus.eigenvalues.iter().filter(|&&l| in_window(l)) {
        let best = free
            .iter()
            .enumerate()
            .map(|(j, &p)| (j, (p - l).abs()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, _)) => report.matched.push((l, free.remove(j))),
            None => {
                report.unmatched_minus.push(l);
                report.all_matched = false;
            }
        }
    }
    report.unmatched_plus = free.into_iter().filter(|&p| in_window(p)).collect();
    report
}
