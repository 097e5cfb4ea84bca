//! Scalar abstraction for sums of dyadic weights `2^{-k}`.
//!
//! Kraft and normalization sums are evaluated in any type implementing
//! [`Weight`]: exact big rationals for verdicts, `f64`/`f32` for quick
//! reporting. Floating-point types never back a pass/fail decision.

use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Weight: Clone + PartialOrd + Zero + One + Add<Output = Self> {
    /// `2^{-k}`.
    fn dyadic(k: usize) -> Self;

    fn approx(&self) -> f64;
}

impl Weight for f64 {
    fn dyadic(k: usize) -> Self {
        (-(k as f64)).exp2()
    }

    fn approx(&self) -> f64 {
        *self
    }
}

impl Weight for f32 {
    fn dyadic(k: usize) -> Self {
        (-(k as f32)).exp2()
    }

    fn approx(&self) -> f64 {
        *self as f64
    }
}

impl Weight for BigRational {
    fn dyadic(k: usize) -> Self {
        BigRational::new(BigInt::one(), BigInt::one() << k)
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// `Σ 2^{-l}` over the given lengths.
pub fn kraft_sum<W: Weight>(lengths: impl IntoIterator<Item = usize>) -> W {
    lengths.into_iter().fold(W::zero(), |acc, l| acc + W::dyadic(l))
}

/// `-log2(w)`, with `+∞` for a zero weight.
pub fn neg_log2<W: Weight>(w: &W) -> f64 {
    if w.is_zero() {
        f64::INFINITY
    } else {
        -w.approx().log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_and_float_agree_on_small_sums() {
        let lengths = [1usize, 2, 3, 3];
        let exact: BigRational = kraft_sum(lengths);
        assert!(exact.is_one());
        let f: f64 = kraft_sum(lengths);
        assert_eq!(f, 1.0);
        let g: f32 = kraft_sum(lengths);
        assert_eq!(g, 1.0);
    }

    #[test]
    fn exact_sum_detects_tiny_excess() {
        // 1 - 2^-60 + 2^-60 + 2^-61 > 1, invisible in f64 after rounding.
        let mut lengths = vec![61usize];
        lengths.extend(1..=60);
        lengths.push(60);
        let exact: BigRational = kraft_sum(lengths.iter().copied());
        assert!(exact > BigRational::one());
    }

    #[test]
    fn neg_log2_of_zero_is_infinite() {
        assert_eq!(neg_log2(&BigRational::zero()), f64::INFINITY);
        assert_eq!(neg_log2(&BigRational::dyadic(5)), 5.0);
    }
}
