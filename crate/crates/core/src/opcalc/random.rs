//! Seeded random operators for property checks.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rand::Rng;

use super::block::BlockOperator;
use super::coeff::Coeff;
use super::expr::{OperatorExpression, OperatorTerm, Powers};

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=4)))
}

pub fn random_coeff<R: Rng>(rng: &mut R) -> Coeff {
    Complex::new(small_rational(rng), small_rational(rng))
}

/// Up to `max_terms` monomials with total degree (multiplications plus
/// derivatives) at most `max_degree`.
pub fn random_expression<R: Rng>(rng: &mut R, max_degree: u32, max_terms: usize) -> OperatorExpression {
    let count = rng.gen_range(1..=max_terms.max(1));
    OperatorExpression::from_terms((0..count).map(|_| {
        let mut budget = rng.gen_range(0..=max_degree);
        let mut take = |rng: &mut R| {
            let p = rng.gen_range(0..=budget);
            budget -= p;
            p
        };
        let powers = Powers::new(take(rng), take(rng), take(rng), take(rng));
        OperatorTerm::new(random_coeff(rng), powers)
    }))
}

pub fn random_block<R: Rng>(rng: &mut R, rows: usize, cols: usize, max_degree: u32) -> BlockOperator {
    let entries = (0..rows * cols).map(|_| random_expression(rng, max_degree, 3)).collect();
    BlockOperator::new(rows, cols, entries).expect("shape is consistent")
}
