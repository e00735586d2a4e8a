//! Exact complex-rational coefficients.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact complex number with arbitrary-precision rational parts.
pub type Coeff = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Coeff {
    Coeff::new(BigRational::from_integer(value.into()), BigRational::zero())
}

pub fn real(value: BigRational) -> Coeff {
    Coeff::new(value, BigRational::zero())
}

pub fn imag_unit() -> Coeff {
    Coeff::new(BigRational::zero(), BigRational::one())
}

/// Converts a float to the simplest rational that round-trips through `f64`,
/// so decimal inputs like `0.19` become `19/100` rather than a dyadic fraction.
pub fn rational_from_f64(value: f64) -> Option<BigRational> {
    if !value.is_finite() {
        return None;
    }
    if let Some(r) = Ratio::<i64>::approximate_float(value) {
        if r.to_f64() == Some(value) {
            return Some(BigRational::new((*r.numer()).into(), (*r.denom()).into()));
        }
    }
    BigRational::from_float(value)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn to_complex64(c: &Coeff) -> Complex64 {
    Complex64::new(to_f64(&c.re), to_f64(&c.im))
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / falling(k, k)
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders `(re+imi)`, e.g. `(-1+0i)` or `(1/2-3/4i)`.
pub fn render(c: &Coeff) -> String {
    let sign = if c.im.is_negative() { '-' } else { '+' };
    format!("({}{}{}i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Inverse of [`render`].
pub fn parse(s: &str) -> Option<Coeff> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let inner = inner.strip_suffix('i')?;
    // split at the sign separating the imaginary part; skip a leading sign
    let split = inner
        .char_indices()
        .skip(1)
        .filter(|&(_, ch)| ch == '+' || ch == '-')
        .map(|(i, _)| i)
        .last()?;
    let (re, im) = inner.split_at(split);
    let sign = if im.starts_with('-') { -1 } else { 1 };
    let im = parse_rational(&im[1..])?;
    Some(Coeff::new(parse_rational(re)?, im * BigRational::from_integer(sign.into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse_agree() {
        let samples = [
            int(-1),
            Coeff::new(rational(1, 2), rational(-3, 4)),
            Coeff::new(rational(0, 1), rational(7, 3)),
            int(0),
        ];
        for c in samples {
            let text = render(&c);
            assert_eq!(parse(&text), Some(c), "{text}");
        }
        assert_eq!(render(&int(-1)), "(-1+0i)");
    }

    #[test]
    fn decimal_floats_become_short_rationals() {
        assert_eq!(rational_from_f64(0.19), Some(rational(19, 100)));
        assert_eq!(rational_from_f64(0.3), Some(rational(3, 10)));
        assert_eq!(rational_from_f64(f64::NAN), None);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(2, 3), BigInt::from(0));
        assert_eq!(binomial(4, 2), BigInt::from(6));
    }
}
