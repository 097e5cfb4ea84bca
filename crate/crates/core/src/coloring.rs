//! Randomized B-colorings of set systems, and the labeling `f(y)` that
//! lets a short color plus a small index pick `y` out of `S_x`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Float;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::codes::{index_to_string, lg_len, BitString};
use crate::complexity::ComplexityTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("bound B = {b} must satisfy 0 < B ≤ N = {n}")]
    BadBound { b: usize, n: usize },
    #[error("no valid coloring in {attempts} attempts with {colors} colors (worst cell {worst_cell} > B = {b})")]
    AttemptsExceeded { attempts: usize, colors: usize, b: usize, worst_cell: usize },
    #[error("no labeled element of color {color} in S_{x}")]
    EmptyList { x: BitString, color: usize },
    #[error("index {idx} out of range for a candidate list of {len}")]
    IndexOutOfRange { idx: usize, len: usize },
    #[error("{0} is not a condition of the labeling")]
    UnknownCondition(BitString),
}

/// Sets over elements `0..elements`.
#[derive(Debug, Clone, Serialize)]
pub struct SetSystem {
    pub elements: usize,
    pub sets: Vec<Vec<usize>>,
    pub b: usize,
}

impl SetSystem {
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn n(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `m` distinct random `n`-subsets of a ground set of size `ground`.
    pub fn random(m: usize, n: usize, ground: usize, b: usize, rng: &mut impl Rng) -> Self {
        let sets = (0..m).map(|_| sample(rng, ground, n).into_vec()).collect();
        Self { elements: ground, sets, b }
    }
}

/// `⌈(N/B)·e·(MN)^{1/B}⌉`, or 1 when `B = N`.
pub fn color_bound<F: Float>(m: usize, n: usize, b: usize) -> Result<usize, ColoringError> {
    if b == 0 || b > n {
        return Err(ColoringError::BadBound { b, n });
    }
    if b == n {
        return Ok(1);
    }
    let f = |v: usize| F::from(v).expect("representable count");
    let e = F::one().exp();
    let bound = f(n) / f(b) * e * (f(m) * f(n)).powf(F::one() / f(b));
    Ok(bound.ceil().to_usize().expect("finite bound"))
}

#[derive(Debug, Clone, Serialize)]
pub struct BColoring {
    pub color_of: Vec<usize>,
    /// Palette size the coloring was drawn from.
    pub palette: usize,
    /// Distinct colors actually assigned.
    pub colors_used: usize,
    pub attempts: usize,
    /// Largest `|S_i ∩ class_j|` over all cells.
    pub max_cell: usize,
}

/// Largest number of same-colored elements in any one set.
pub fn max_cell(system: &SetSystem, color_of: &[usize]) -> usize {
    system
        .sets
        .par_iter()
        .map(|s| {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for &v in s {
                *counts.entry(color_of[v]).or_default() += 1;
            }
            counts.into_values().max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// Palette the lemma prescribes: one color once `B ≥ N`.
pub fn palette_for(system: &SetSystem) -> Result<usize, ColoringError> {
    let n = system.n();
    if system.b == 0 {
        return Err(ColoringError::BadBound { b: 0, n });
    }
    if system.b >= n {
        return Ok(1);
    }
    color_bound::<f64>(system.m(), n, system.b)
}

/// Draw uniform colorings until one has every cell at most `B`.
pub fn randomized_b_coloring(system: &SetSystem, seed: u64, max_attempts: usize) -> Result<BColoring, ColoringError> {
    let palette = palette_for(system)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = usize::MAX;
    for attempt in 1..=max_attempts.max(1) {
        let color_of: Vec<usize> = (0..system.elements).map(|_| rng.gen_range(0..palette)).collect();
        let cell = max_cell(system, &color_of);
        if cell <= system.b {
            let colors_used = color_of.iter().collect::<BTreeSet<_>>().len();
            return Ok(BColoring { color_of, palette, colors_used, attempts: attempt, max_cell: cell });
        }
        worst = worst.min(cell);
    }
    Err(ColoringError::AttemptsExceeded { attempts: max_attempts, colors: palette, b: system.b, worst_cell: worst })
}

#[derive(Debug, Clone, Serialize)]
pub struct Labeling {
    pub k1: usize,
    pub k2: usize,
    pub b: usize,
    /// `S_x` for every condition `x` with `K(x) ≤ k1`, each in canonical order.
    pub lists: BTreeMap<BitString, Vec<BitString>>,
    pub f: BTreeMap<BitString, usize>,
    pub palette: usize,
    pub colors_used: usize,
    /// Bits used to render a color, so every label has the same length.
    pub width: usize,
    pub attempts: usize,
    /// `M` and `N` of the built system.
    pub m: usize,
    pub n: usize,
    /// Size of the enumerated edge set, standing in for the oracle string.
    pub edge_count: usize,
    pub max_cell: usize,
}

impl Labeling {
    pub fn render(&self, color: usize) -> BitString {
        BitString::numeral(color as u64, self.width)
    }

    /// `{y ∈ S_x : f(y) = c}` in canonical order.
    pub fn candidates(&self, x: &BitString, c: usize) -> Result<Vec<&BitString>, ColoringError> {
        let list = self.lists.get(x).ok_or_else(|| ColoringError::UnknownCondition(x.clone()))?;
        Ok(list.iter().filter(|y| self.f.get(*y) == Some(&c)).collect())
    }
}

pub fn sw_label(table: &ComplexityTable, k1: usize, k2: usize, seed: u64, max_attempts: usize) -> Result<Labeling, ColoringError> {
    let mut lists = BTreeMap::new();
    for x in table.universe() {
        if table.k_plain(x).is_ok_and(|k| k <= k1) {
            let mut s: Vec<BitString> = table
                .row(x)
                .expect("universe member")
                .iter()
                .filter(|(_, e)| e.k <= k2)
                .map(|(y, _)| y.clone())
                .collect();
            s.sort();
            lists.insert(x.clone(), s);
        }
    }
    let domain: Vec<BitString> = lists.values().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let id: HashMap<&BitString, usize> = domain.iter().enumerate().map(|(i, y)| (y, i)).collect();
    let system = SetSystem {
        elements: domain.len(),
        sets: lists.values().map(|s| s.iter().map(|y| id[y]).collect()).collect(),
        b: k1 + k2,
    };
    let coloring = if system.sets.is_empty() {
        BColoring { color_of: Vec::new(), palette: 1, colors_used: 0, attempts: 0, max_cell: 0 }
    } else {
        randomized_b_coloring(&system, seed, max_attempts)?
    };
    let f = domain.iter().cloned().zip(coloring.color_of.iter().copied()).collect();
    let width = usize::BITS as usize - (coloring.palette - 1).leading_zeros() as usize;
    Ok(Labeling {
        k1,
        k2,
        b: system.b,
        edge_count: system.sets.iter().map(Vec::len).sum(),
        m: system.m(),
        n: system.n(),
        lists,
        f,
        palette: coloring.palette,
        colors_used: coloring.colors_used,
        width,
        attempts: coloring.attempts,
        max_cell: coloring.max_cell,
    })
}

/// The decoded string and the length of the self-delimiting index code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwDecoded {
    pub y: BitString,
    pub index_code_len: usize,
}

pub fn sw_decode(labeling: &Labeling, x: &BitString, c: usize, idx: usize) -> Result<SwDecoded, ColoringError> {
    let list = labeling.candidates(x, c)?;
    if list.is_empty() {
        return Err(ColoringError::EmptyList { x: x.clone(), color: c });
    }
    let y = list.get(idx).ok_or(ColoringError::IndexOutOfRange { idx, len: list.len() })?;
    Ok(SwDecoded {
        y: (*y).clone(),
        index_code_len: lg_len(2, &index_to_string(idx as u64)).expect("level 2"),
    })
}
