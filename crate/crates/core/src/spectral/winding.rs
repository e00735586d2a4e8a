//! Topological cross-check: phase winding of a mass entry around the origin.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::SpectralError;
use crate::opcalc::OperatorExpression;

pub const DEFAULT_RADIUS: f64 = 1.0;
pub const DEFAULT_SAMPLES: usize = 256;
const MIN_SAMPLES: usize = 64;
const ZERO_CUTOFF: f64 = 1e-12;

/// Winding number of a derivative-free entry along `|z| = radius`, from the
/// sum of principal-branch phase increments between neighbouring samples.
pub fn winding_number(multiplier: &OperatorExpression, radius: f64, samples: usize) -> Result<i64, SpectralError> {
    if samples < MIN_SAMPLES {
        return Err(SpectralError::InvalidParameter(format!("need at least {MIN_SAMPLES} contour samples, got {samples}")));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(SpectralError::InvalidParameter(format!("contour radius must be positive, got {radius}")));
    }
    let values: Vec<Complex64> = (0..=samples)
        .map(|j| {
            let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64);
            multiplier.evaluate(z).ok_or(SpectralError::NotMultiplication)
        })
        .collect::<Result<_, _>>()?;
    if let Some(small) = values.iter().map(|v| v.norm()).find(|&m| m < ZERO_CUTOFF) {
        return Err(SpectralError::ZeroOnContour(small));
    }
    let total: f64 = values.windows(2).map(|w| (w[1] / w[0]).arg()).sum();
    Ok((total / (2.0 * PI)).round() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcalc::coeff::{int, rational, real};

    #[test]
    fn simple_zero() {
        assert_eq!(winding_number(&OperatorExpression::z(), 1.0, 256), Ok(1));
        assert_eq!(winding_number(&OperatorExpression::zbar(), 1.0, 256), Ok(-1));
    }

    #[test]
    fn positive_rescaling_keeps_winding() {
        let scaled = OperatorExpression::z().scale(&real(rational(1, 2)));
        assert_eq!(winding_number(&scaled, 1.0, 256), Ok(1));
        // sampled phases coincide pointwise with the unscaled entry
        for j in 0..64 {
            let z = Complex64::from_polar(1.0, j as f64 * 0.1);
            let (a, b) = (scaled.evaluate(z).unwrap(), OperatorExpression::z().evaluate(z).unwrap());
            assert!((a.arg() - b.arg()).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_does_not_wind() {
        assert_eq!(winding_number(&OperatorExpression::one(), 1.0, 256), Ok(0));
    }

    #[test]
    fn second_degree_entries() {
        let z2 = OperatorExpression::z().compose(&OperatorExpression::z());
        assert_eq!(winding_number(&z2, 1.0, 256), Ok(2));
        // z − 2 has its zero outside the unit circle
        let shifted = &OperatorExpression::z() - &OperatorExpression::constant(int(2));
        assert_eq!(winding_number(&shifted, 1.0, 256), Ok(0));
        assert_eq!(winding_number(&shifted, 3.0, 256), Ok(1));
    }

    #[test]
    fn errors() {
        let shifted = &OperatorExpression::z() - &OperatorExpression::constant(int(1));
        assert!(matches!(winding_number(&shifted, 1.0, 256), Err(SpectralError::ZeroOnContour(_))));
        assert_eq!(winding_number(&OperatorExpression::d(), 1.0, 256), Err(SpectralError::NotMultiplication));
        assert!(winding_number(&OperatorExpression::z(), 1.0, 16).is_err());
        assert!(winding_number(&OperatorExpression::zero(), 1.0, 256).is_err());
    }
}
