//! Conversion graph: edges `{x·d, y}` for every pair with `K(x|y) ≤ k1` and
//! `K(y|x) ≤ k2`, greedily colored so each color class is a matching.
//!
//! A color plus the node on one side identifies the node on the other side,
//! which is what makes a `k1 + O(1)` bit description sufficient both ways.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::codes::{index_to_string, lg_len, BitString};
use crate::complexity::ComplexityTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConversionError {
    #[error("k1 = {k1} exceeds k2 = {k2}")]
    BadOrder { k1: usize, k2: usize },
    #[error("pair #{seq} needs color {color}, beyond the {limit}-color bound")]
    ColorOverflow { seq: usize, color: usize, limit: usize },
    #[error("x = {x} has {count} partners; the offset no longer fits in {l} bits")]
    OffsetOverflow { x: BitString, count: usize, l: usize },
    #[error("no edge of color {color} at {node}")]
    NotFound { color: usize, node: BitString },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatedPair {
    pub x: BitString,
    pub y: BitString,
    /// Later of the two witnesses' discovery steps.
    pub step: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRelation {
    pub k1: usize,
    pub k2: usize,
    pub l: usize,
    pub pairs: Vec<RelatedPair>,
}

/// All universe pairs with `K(x|y) ≤ k1` and `K(y|x) ≤ k2`, ordered by
/// (step, x, y).
pub fn enumerate_pairs(table: &ComplexityTable, k1: usize, k2: usize) -> Result<PairRelation, ConversionError> {
    if k1 > k2 {
        return Err(ConversionError::BadOrder { k1, k2 });
    }
    let mut pairs = Vec::new();
    for x in table.universe() {
        for y in table.universe() {
            let (Ok(xy), Ok(yx)) = (table.entry(x, y), table.entry(y, x)) else { continue };
            if xy.k <= k1 && yx.k <= k2 {
                pairs.push(RelatedPair {
                    x: x.clone(),
                    y: y.clone(),
                    step: xy.discovery_step.max(yx.discovery_step),
                });
            }
        }
    }
    pairs.sort_by(|a, b| (a.step, &a.x, &a.y).cmp(&(b.step, &b.x, &b.y)));
    Ok(PairRelation { k1, k2, l: k2 - k1, pairs })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    /// `x·d`.
    pub xd: BitString,
    pub y: BitString,
    pub d: BitString,
    pub color: usize,
    pub seq: usize,
}

#[derive(Debug, Clone)]
pub struct ConversionGraph {
    pub k1: usize,
    pub k2: usize,
    pub edges: Vec<Edge>,
    pub per_x_counter: HashMap<BitString, usize>,
    adjacency: HashMap<BitString, Vec<usize>>,
}

impl ConversionGraph {
    pub fn color_limit(&self) -> usize {
        1 << (self.k1 + 3)
    }

    pub fn max_color(&self) -> Option<usize> {
        self.edges.iter().map(|e| e.color).max()
    }

    /// Edges touching `v`, in insertion order; a self-loop appears once.
    pub fn edges_at(&self, v: &BitString) -> impl Iterator<Item = &Edge> {
        self.adjacency.get(v).into_iter().flatten().map(|&i| &self.edges[i])
    }

    /// Whether every node sees each color at most once.
    pub fn is_proper(&self) -> bool {
        self.adjacency.values().all(|ids| {
            let mut colors: Vec<_> = ids.iter().map(|&i| self.edges[i].color).collect();
            colors.sort_unstable();
            colors.windows(2).all(|w| w[0] != w[1])
        })
    }

    fn attach(&mut self, v: &BitString, id: usize) {
        let list = self.adjacency.entry(v.clone()).or_default();
        if list.last() != Some(&id) {
            list.push(id);
        }
    }
}

pub fn build_graph(rel: &PairRelation) -> Result<ConversionGraph, ConversionError> {
    let mut g = ConversionGraph {
        k1: rel.k1,
        k2: rel.k2,
        edges: Vec::with_capacity(rel.pairs.len()),
        per_x_counter: HashMap::new(),
        adjacency: HashMap::new(),
    };
    let limit = g.color_limit();
    for (seq, p) in rel.pairs.iter().enumerate() {
        let i = g.per_x_counter.entry(p.x.clone()).or_insert(0);
        let offset = *i >> rel.k1;
        if offset >= 1 << rel.l {
            return Err(ConversionError::OffsetOverflow { x: p.x.clone(), count: *i, l: rel.l });
        }
        *i += 1;
        let d = BitString::numeral(offset as u64, rel.l);
        let xd = p.x.concat(&d);
        let yd = p.y.concat(&d);
        let mut taken: Vec<usize> = [&xd, &p.x, &yd, &p.y]
            .into_iter()
            .flat_map(|v| g.edges_at(v).map(|e| e.color))
            .collect();
        taken.sort_unstable();
        taken.dedup();
        let color = taken.iter().enumerate().find(|&(k, &c)| k != c).map_or(taken.len(), |(k, _)| k);
        if color >= limit {
            return Err(ConversionError::ColorOverflow { seq, color, limit });
        }
        g.edges.push(Edge { xd: xd.clone(), y: p.y.clone(), d, color, seq });
        g.attach(&xd, seq);
        g.attach(&p.y, seq);
    }
    Ok(g)
}

pub fn build(table: &ComplexityTable, k1: usize, k2: usize) -> Result<ConversionGraph, ConversionError> {
    build_graph(&enumerate_pairs(table, k1, k2)?)
}

fn other_end<'a>(e: &'a Edge, v: &BitString) -> &'a BitString {
    if &e.xd == v {
        &e.y
    } else {
        &e.xd
    }
}

/// The neighbor of `v` along its unique `c`-colored edge.
pub fn decode_from_node(g: &ConversionGraph, c: usize, v: &BitString) -> Result<BitString, ConversionError> {
    g.edges_at(v)
        .find(|e| e.color == c)
        .map(|e| other_end(e, v).clone())
        .ok_or_else(|| ConversionError::NotFound { color: c, node: v.clone() })
}

/// Recovers `y` from `x`, the color and `d`: the earliest `c`-colored edge at
/// `x·d` or `x` leads to `y` or `y·d` respectively. Works from either side
/// of a pair.
pub fn decode_with_d(g: &ConversionGraph, c: usize, d: &BitString, x: &BitString) -> Result<BitString, ConversionError> {
    let xd = x.concat(d);
    let at_xd = g.edges_at(&xd).find(|e| e.color == c).map(|e| (e.seq, other_end(e, &xd).clone()));
    let at_x = g.edges_at(x).find(|e| e.color == c).and_then(|e| {
        let n = other_end(e, x);
        let cut = n.len().checked_sub(d.len())?;
        (d.is_empty() || n.slice(cut, n.len()) == *d).then(|| (e.seq, n.slice(0, cut)))
    });
    let best = match (at_xd, at_x) {
        (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
        (a, b) => a.or(b),
    };
    best.map(|(_, y)| y).ok_or(ConversionError::NotFound { color: c, node: xd })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DescriptorBudget {
    /// Fixed-width color field, `k1 + 3` bits.
    pub color_bits: usize,
    /// `lg_3` codes of `k1` and `k2`, standing in for `K(k1, k2)`.
    pub param_bits: usize,
    /// Offset `d`, needed only by the one-sided decoder.
    pub d_bits: usize,
}

impl DescriptorBudget {
    pub fn total(&self) -> usize {
        self.color_bits + self.param_bits
    }

    pub fn total_with_d(&self) -> usize {
        self.total() + self.d_bits
    }
}

pub fn descriptor_length(k1: usize, k2: usize) -> DescriptorBudget {
    let lg3 = |k: usize| lg_len(3, &index_to_string(k as u64)).expect("small parameters");
    DescriptorBudget { color_bits: k1 + 3, param_bits: lg3(k1) + lg3(k2), d_bits: k2.saturating_sub(k1) }
}

/// The color rendered as a `(k1 + 3)`-bit field.
pub fn color_field(k1: usize, color: usize) -> BitString {
    BitString::numeral(color as u64, k1 + 3)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CodecReport {
    pub pairs: usize,
    pub failures: usize,
    pub max_color: Option<usize>,
    pub color_limit: usize,
    pub max_partners: usize,
}

impl CodecReport {
    pub fn verified(&self) -> bool {
        self.failures == 0 && self.max_color.is_none_or(|c| c < self.color_limit)
    }
}

/// Round-trips every edge through both decoders in both directions.
pub fn verify_codec(g: &ConversionGraph) -> CodecReport {
    let mut failures = 0;
    for e in &g.edges {
        let x = e.xd.slice(0, e.xd.len() - e.d.len());
        let checks = [
            decode_from_node(g, e.color, &e.xd).ok() == Some(e.y.clone()),
            decode_from_node(g, e.color, &e.y).ok() == Some(e.xd.clone()),
            decode_with_d(g, e.color, &e.d, &x).ok() == Some(e.y.clone()),
            decode_with_d(g, e.color, &e.d, &e.y).ok() == Some(x),
        ];
        failures += checks.iter().filter(|ok| !**ok).count();
    }
    CodecReport {
        pairs: g.edges.len(),
        failures,
        max_color: g.max_color(),
        color_limit: g.color_limit(),
        max_partners: g.per_x_counter.values().copied().max().unwrap_or(0),
    }
}
