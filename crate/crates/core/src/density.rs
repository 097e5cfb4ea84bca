//! Ball counts around a center over a finite universe, and how spread out
//! the pairwise distances of a set are.
//!
//! Balls contain `y ≠ x` from the table universe; `K(x|y)` needs `y` as a
//! condition, so the universe is also the counting universe.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::codes::{index_to_string, BitString};
use crate::complexity::{ComplexityError, ComplexityTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
    #[error("need at least two distinct strings, got {0}")]
    TooFew(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ball {
    B1,
    B3,
}

#[derive(Debug, Clone, Serialize)]
pub struct BallReport {
    pub ball: Ball,
    pub center: BitString,
    pub radius: usize,
    pub restriction: Option<usize>,
    pub count: usize,
    pub log2_count: Option<f64>,
    /// `d − K(d|x)`, or `(n + d − K(x)) / 2` for a length-restricted B3.
    pub reference: Option<f64>,
    pub deviation: Option<f64>,
    /// The ball may hold strings the universe does not: it reaches the
    /// longest universe strings, or the radius reaches the program bound.
    pub truncated: bool,
    pub universe_len: usize,
}

fn ball(table: &ComplexityTable, kind: Ball, x: &BitString, d: usize, n: Option<usize>) -> Result<BallReport, DensityError> {
    table.row(x)?;
    let universe_len = table.universe().iter().map(BitString::len).max().unwrap_or(0);
    let mut count = 0;
    let mut reaches_edge = false;
    for y in table.universe() {
        if y == x || n.is_some_and(|n| y.len() != n) {
            continue;
        }
        let dist = match kind {
            Ball::B1 => table.e1(x, y),
            Ball::B3 => table.e3_sum(x, y),
        };
        match dist {
            Ok(v) if v <= d => {
                count += 1;
                reaches_edge |= y.len() == universe_len;
            }
            Ok(_) | Err(ComplexityError::NotFound { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let k_of = |s: &BitString, c: &BitString| table.k(s, c).ok().map(|k| k as f64);
    let reference = match (kind, n) {
        (Ball::B3, Some(n)) => k_of(x, &BitString::empty()).map(|kx| (n as f64 + d as f64 - kx) / 2.0),
        _ => k_of(&index_to_string(d as u64), x).map(|k| d as f64 - k),
    };
    let log2_count = (count > 0).then(|| (count as f64).log2());
    let deviation = log2_count.zip(reference).map(|(l, r)| l - r);
    // Length-restricted balls inside the universe cannot spill over.
    let truncated = d >= table.max_len() || (reaches_edge && n.is_none_or(|n| n > universe_len));
    Ok(BallReport { ball: kind, center: x.clone(), radius: d, restriction: n, count, log2_count, reference, deviation, truncated, universe_len })
}

/// `#{y ≠ x : E1(x,y) ≤ d}`, optionally only `y` of length `n`.
pub fn ball_b1(table: &ComplexityTable, x: &BitString, d: usize, n: Option<usize>) -> Result<BallReport, DensityError> {
    ball(table, Ball::B1, x, d, n)
}

/// `#{y ≠ x : K(x|y) + K(y|x) ≤ d}`, optionally only `y` of length `n`.
pub fn ball_b3(table: &ComplexityTable, x: &BitString, d: usize, n: Option<usize>) -> Result<BallReport, DensityError> {
    ball(table, Ball::B3, x, d, n)
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersionReport {
    pub size: usize,
    pub pairs: usize,
    pub threshold: i64,
    /// Pairs with `E1 ≥ d − slack`; pairs beyond the program bound count.
    pub far: usize,
    pub beyond_bound: usize,
    pub fraction: f64,
}

pub fn dispersion_check(table: &ComplexityTable, set: &[BitString], d: usize, slack: usize) -> Result<DispersionReport, DensityError> {
    let set: Vec<&BitString> = set.iter().collect::<BTreeSet<_>>().into_iter().collect();
    if set.len() < 2 {
        return Err(DensityError::TooFew(set.len()));
    }
    let threshold = d as i64 - slack as i64;
    let (mut pairs, mut far, mut beyond_bound) = (0, 0, 0);
    for (i, x) in set.iter().enumerate() {
        for y in &set[i + 1..] {
            pairs += 1;
            match table.e1(x, y) {
                Ok(v) => far += usize::from(v as i64 >= threshold),
                Err(ComplexityError::NotFound { .. }) => {
                    beyond_bound += 1;
                    far += 1;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(DispersionReport { size: set.len(), pairs, threshold, far, beyond_bound, fraction: far as f64 / pairs as f64 })
}
