//! Discretization-order study of the `H₋` spectrum against the oscillator
//! levels `0` and `1`.

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::lattice::GridSpec;
use crate::spectral::{low_spectrum, EigenOptions};
use crate::susy::{DefectOperatorSet, ModelSpec};

pub const CONVERGENCE_HEADER: &str = "half_width,n,h,lambda_1,lambda_2,error_1,error_2";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub half_width: f64,
    pub n: usize,
    pub h: f64,
    pub lambda_1: f64,
    pub lambda_2: f64,
    pub error_1: f64,
    pub error_2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Sorted by decreasing spacing.
    pub rows: Vec<ConvergenceRow>,
    /// Fitted `p` in `error ∝ h^p` for the lowest eigenvalue.
    pub order_first: f64,
    /// Same for the second eigenvalue.
    pub order_second: f64,
    pub monotone_first: bool,
    pub monotone_second: bool,
    pub warnings: Vec<String>,
}

/// Default grids: `h ≈ 0.21, 0.105, 0.053` at `L = 5`.
pub fn default_grids() -> Vec<GridSpec> {
    [49, 96, 191].iter().map(|&n| GridSpec::new(5.0, n).expect("valid grid")).collect()
}

pub fn convergence_study(grids: &[GridSpec], model: &ModelSpec, opts: &EigenOptions) -> Result<ConvergenceReport, AnalysisError> {
    let mut grids = grids.to_vec();
    grids.sort_by(|a, b| b.spacing().total_cmp(&a.spacing()));
    grids.dedup_by(|a, b| (a.spacing() - b.spacing()).abs() <= 1e-12 * b.spacing());
    if grids.len() < 3 {
        return Err(AnalysisError::DegenerateGrids(grids.len()));
    }
    let set = DefectOperatorSet::from_model(model)?;
    let opts = EigenOptions { k: opts.k.max(3), ..opts.clone() };
    let mut rows = Vec::with_capacity(grids.len());
    for g in &grids {
        let disc = set.discretize(g);
        let r = low_spectrum(&disc.h_minus, "H_minus", &opts)?;
        let (l1, l2) = (r.eigenvalues[0], r.eigenvalues[1]);
        rows.push(ConvergenceRow {
            half_width: g.half_width(),
            n: g.n(),
            h: g.spacing(),
            lambda_1: l1,
            lambda_2: l2,
            error_1: l1.abs(),
            error_2: (l2 - 1.0).abs(),
        });
    }
    let monotone = |f: fn(&ConvergenceRow) -> f64| rows.windows(2).all(|w| f(&w[1]) < f(&w[0]));
    let monotone_first = monotone(|r| r.error_1);
    let monotone_second = monotone(|r| r.error_2);
    let mut warnings = Vec::new();
    if !monotone_first {
        warnings.push("lowest-eigenvalue error is not monotone in h".to_string());
    }
    if !monotone_second {
        warnings.push("second-eigenvalue error is not monotone in h".to_string());
    }
    Ok(ConvergenceReport {
        order_first: fit_order(&rows, |r| r.error_1),
        order_second: fit_order(&rows, |r| r.error_2),
        rows,
        monotone_first,
        monotone_second,
        warnings,
    })
}

/// Least-squares slope of `ln error` against `ln h`.
fn fit_order(rows: &[ConvergenceRow], err: fn(&ConvergenceRow) -> f64) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| err(r) > 0.0).map(|r| (r.h.ln(), err(r).ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn convergence_to_csv(report: &ConvergenceReport) -> String {
    let mut out = format!("{CONVERGENCE_HEADER}\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.half_width, r.n, r.h, r.lambda_1, r.lambda_2, r.error_1, r.error_2
        ));
    }
    out
}
