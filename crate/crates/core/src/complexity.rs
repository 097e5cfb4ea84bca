//! Exact budget-bounded conditional complexities over TPM-1 and the
//! distances and cost functions derived from them.
//!
//! Every value here is relative to `(max_len, budget)`: `K(y|x)` is the
//! length of the shortest halting program of at most `max_len` bits, and a
//! missing entry means no such program exists, not that `K` is infinite.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::codes::{index_to_string, pair, string_to_index, BitString};
use crate::machine::{enumerate_halting, for_each_halting, run, ExecBudget};
use crate::scalar::{kraft_sum, neg_log2, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("no program of at most {max_len} bits computes {target} from {condition}")]
    NotFound { target: BitString, condition: BitString, max_len: usize },
    #[error("condition {0} is not in the table universe")]
    NotInUniverse(BitString),
}

/// Best program found for one (condition, target) cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub k: usize,
    pub witness: BitString,
    /// Position of the witness in the global (length, lexicographic) program
    /// order, i.e. the program's index as a string.
    pub discovery_step: u64,
}

#[derive(Debug, Clone)]
pub struct ComplexityTable {
    universe: Vec<BitString>,
    max_len: usize,
    budget: ExecBudget,
    rows: Vec<HashMap<BitString, Entry>>,
    row_of: HashMap<BitString, usize>,
}

/// One enumeration pass for a single condition: the shortest program for
/// each output, first in canonical order.
fn best_programs(x: &BitString, max_len: usize, budget: &ExecBudget) -> HashMap<BitString, Entry> {
    let mut row: HashMap<BitString, Entry> = HashMap::new();
    for h in enumerate_halting(x, max_len, budget) {
        row.entry(h.output).or_insert_with(|| Entry {
            k: h.program.len(),
            discovery_step: string_to_index(&h.program).expect("programs are short"),
            witness: h.program,
        });
    }
    row
}

impl ComplexityTable {
    /// Exhaustive table over `universe` as conditions. Targets are every
    /// output any condition produces, so lookups of strings outside the
    /// universe (pairs, numerals) are still exact within `max_len`.
    pub fn build(universe: &[BitString], max_len: usize, budget: ExecBudget) -> Self {
        let mut universe = universe.to_vec();
        universe.sort();
        universe.dedup();
        let rows: Vec<_> = universe.par_iter().map(|x| best_programs(x, max_len, &budget)).collect();
        let row_of = universe.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        Self { universe, max_len, budget, rows, row_of }
    }

    /// All strings of length `0..=len` as the universe.
    pub fn build_up_to(len: usize, max_len: usize, budget: ExecBudget) -> Self {
        Self::build(&BitString::all_up_to(len).collect::<Vec<_>>(), max_len, budget)
    }

    pub fn universe(&self) -> &[BitString] {
        &self.universe
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn budget(&self) -> ExecBudget {
        self.budget
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.row_of.contains_key(x)
    }

    /// Every recorded output for condition `x`.
    pub fn row(&self, x: &BitString) -> Result<&HashMap<BitString, Entry>, ComplexityError> {
        self.row_of
            .get(x)
            .map(|&i| &self.rows[i])
            .ok_or_else(|| ComplexityError::NotInUniverse(x.clone()))
    }

    pub fn entry(&self, y: &BitString, x: &BitString) -> Result<&Entry, ComplexityError> {
        self.row(x)?.get(y).ok_or_else(|| ComplexityError::NotFound {
            target: y.clone(),
            condition: x.clone(),
            max_len: self.max_len,
        })
    }

    /// `K(y|x)`.
    pub fn k(&self, y: &BitString, x: &BitString) -> Result<usize, ComplexityError> {
        self.entry(y, x).map(|e| e.k)
    }

    /// `K(y) = K(y|ε)`.
    pub fn k_plain(&self, y: &BitString) -> Result<usize, ComplexityError> {
        self.k(y, &BitString::empty())
    }

    /// `E1(x,y) = max{K(x|y), K(y|x)}`.
    pub fn e1(&self, x: &BitString, y: &BitString) -> Result<usize, ComplexityError> {
        Ok(self.k(x, y)?.max(self.k(y, x)?))
    }

    /// `K(x|y) + K(y|x)`.
    pub fn e3_sum(&self, x: &BitString, y: &BitString) -> Result<usize, ComplexityError> {
        Ok(self.k(x, y)? + self.k(y, x)?)
    }

    /// `W(y|x) = K(x) - K(y)`: cost of turning `x` into `y`.
    pub fn w_cost(&self, x: &BitString, y: &BitString) -> Result<i64, ComplexityError> {
        Ok(self.k_plain(x)? as i64 - self.k_plain(y)? as i64)
    }

    /// `W'(y|x) = K(x|y) - K(y|x)`.
    pub fn w_prime(&self, x: &BitString, y: &BitString) -> Result<i64, ComplexityError> {
        Ok(self.k(x, y)? as i64 - self.k(y, x)? as i64)
    }

    /// `I(x:y) = K(x) + K(y) - K(⟨x,y⟩)`.
    pub fn mutual_info(&self, x: &BitString, y: &BitString) -> Result<i64, ComplexityError> {
        let joint = self.k_plain(&pair(x, y))?;
        Ok(self.k_plain(x)? as i64 + self.k_plain(y)? as i64 - joint as i64)
    }

    /// Sum of `2^{-K(y|x)}` over every recorded target of condition `x`.
    pub fn normalization<W: Weight>(&self, x: &BitString) -> Result<W, ComplexityError> {
        Ok(kraft_sum(self.row(x)?.values().map(|e| e.k)))
    }
}

/// `K(y|x)` for a condition outside any table.
pub fn conditional_k(y: &BitString, x: &BitString, max_len: usize, budget: &ExecBudget) -> Option<Entry> {
    best_programs(x, max_len, budget).remove(y)
}

/// Shortest single program that maps `x` to `y` and `y` to `x`.
pub fn e0(x: &BitString, y: &BitString, max_len: usize, budget: &ExecBudget) -> Option<Entry> {
    enumerate_halting(x, max_len, budget)
        .into_iter()
        .filter(|h| &h.output == y)
        .find(|h| run(&h.program, y, budget).output() == Some(x))
        .map(|h| Entry {
            k: h.program.len(),
            discovery_step: string_to_index(&h.program).expect("programs are short"),
            witness: h.program,
        })
}

/// `-log2 Σ 2^{-l(p)}` over halting programs of at most `max_len` bits that
/// compute `y` from `x`; `+∞` if there are none.
pub fn entropy_sum(y: &BitString, x: &BitString, max_len: usize, budget: &ExecBudget) -> f64 {
    let mut lengths = Vec::new();
    for_each_halting(x, max_len, budget, |p, out, _| {
        if out == y {
            lengths.push(p.len());
        }
    });
    neg_log2(&kraft_sum::<BigRational>(lengths))
}

/// Measured constants of the admissibility axioms on a finite universe.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub universe_size: usize,
    pub symmetry_violations: usize,
    /// Smallest `c` with `E1(x,z) ≤ E1(x,y) + E1(y,z) + c` on every triple.
    pub triangle_c: Option<i64>,
    /// Largest `Σ_{y≠x} 2^{-E1(x,y)}` over centers, approximated for display.
    pub max_normalization: f64,
    pub normalization_ok: bool,
    /// Cells where some leg of `E1` was not found.
    pub missing: usize,
}

pub fn check_admissible(table: &ComplexityTable, universe: &[BitString]) -> AdmissibilityReport {
    let n = universe.len();
    let e1: Vec<Vec<Option<usize>>> = universe
        .iter()
        .map(|x| universe.iter().map(|y| table.e1(x, y).ok()).collect())
        .collect();
    let missing = e1.iter().flatten().filter(|v| v.is_none()).count();
    let mut symmetry_violations = 0;
    for i in 0..n {
        for j in 0..n {
            if e1[i][j] != e1[j][i] {
                symmetry_violations += 1;
            }
        }
    }
    let mut triangle_c: Option<i64> = None;
    for i in 0..n {
        for j in 0..n {
            let Some(a) = e1[i][j] else { continue };
            for k in 0..n {
                let (Some(b), Some(c)) = (e1[j][k], e1[i][k]) else { continue };
                let slack = c as i64 - a as i64 - b as i64;
                triangle_c = Some(triangle_c.map_or(slack, |t| t.max(slack)));
            }
        }
    }
    let mut max_norm: Option<BigRational> = None;
    for i in 0..n {
        let sum: BigRational =
            kraft_sum((0..n).filter(|&j| j != i).filter_map(|j| e1[i][j]));
        if max_norm.as_ref().is_none_or(|m| &sum > m) {
            max_norm = Some(sum);
        }
    }
    let max_norm = max_norm.unwrap_or_default();
    AdmissibilityReport {
        universe_size: n,
        symmetry_violations,
        triangle_c,
        max_normalization: max_norm.approx(),
        normalization_ok: max_norm <= BigRational::one(),
        missing,
    }
}

/// Both sides of `K(x,y) = K(x) + K(y | ⟨x, K(x)⟩)` and their difference.
#[derive(Debug, Clone, Serialize)]
pub struct AdditionCheck {
    pub joint: usize,
    pub k_x: usize,
    pub k_y_given_x_kx: usize,
    pub deviation: i64,
}

pub fn addition_check(table: &ComplexityTable, x: &BitString, y: &BitString) -> Result<AdditionCheck, ComplexityError> {
    let joint = table.k_plain(&pair(x, y))?;
    let k_x = table.k_plain(x)?;
    let cond = pair(x, &index_to_string(k_x as u64));
    let k_y = conditional_k(y, &cond, table.max_len(), &table.budget())
        .ok_or_else(|| ComplexityError::NotFound { target: y.clone(), condition: cond, max_len: table.max_len() })?
        .k;
    Ok(AdditionCheck { joint, k_x, k_y_given_x_kx: k_y, deviation: joint as i64 - (k_x + k_y) as i64 })
}

/// `max |W'(z|x) - W'(y|x) - W'(z|y)|` over triples with all legs found.
pub fn w_prime_nontransitivity(table: &ComplexityTable, universe: &[BitString]) -> i64 {
    let mut worst = 0;
    for x in universe {
        for y in universe {
            let Ok(xy) = table.w_prime(x, y) else { continue };
            for z in universe {
                if let (Ok(yz), Ok(xz)) = (table.w_prime(y, z), table.w_prime(x, z)) {
                    worst = worst.max((xz - xy - yz).abs());
                }
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    E1,
    E0,
    E3Sum,
    W,
    WPrime,
    Mi,
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "e1" => Metric::E1,
            "e0" => Metric::E0,
            "e3sum" => Metric::E3Sum,
            "w" => Metric::W,
            "wprime" => Metric::WPrime,
            "mi" => Metric::Mi,
            other => return Err(format!("unknown metric {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceRow {
    pub x: BitString,
    pub y: BitString,
    pub metric: Metric,
    /// `None` when a needed complexity was not found within the budget.
    pub value: Option<i64>,
    pub witness: Option<BitString>,
}

/// Evaluates `metric` on one pair. The witness is the program realizing the
/// value when there is a single one (`E0`, or the larger leg of `E1`).
pub fn evaluate(table: &ComplexityTable, metric: Metric, x: &BitString, y: &BitString) -> DistanceRow {
    let (value, witness) = match metric {
        Metric::E1 => match (table.entry(x, y), table.entry(y, x)) {
            (Ok(a), Ok(b)) => {
                let w = if a.k >= b.k { a } else { b };
                (Some(w.k as i64), Some(w.witness.clone()))
            }
            _ => (None, None),
        },
        Metric::E0 => match e0(x, y, table.max_len(), &table.budget()) {
            Some(e) => (Some(e.k as i64), Some(e.witness)),
            None => (None, None),
        },
        Metric::E3Sum => (table.e3_sum(x, y).ok().map(|v| v as i64), None),
        Metric::W => (table.w_cost(x, y).ok(), None),
        Metric::WPrime => (table.w_prime(x, y).ok(), None),
        Metric::Mi => (table.mutual_info(x, y).ok(), None),
    };
    DistanceRow { x: x.clone(), y: y.clone(), metric, value, witness }
}
