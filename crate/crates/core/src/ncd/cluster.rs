//! Average-linkage agglomerative clustering.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Dendrogram {
    Leaf(String),
    Join { height: f64, left: Box<Dendrogram>, right: Box<Dendrogram> },
}

impl Dendrogram {
    pub fn labels(&self) -> Vec<&str> {
        match self {
            Dendrogram::Leaf(l) => vec![l.as_str()],
            Dendrogram::Join { left, right, .. } => {
                let mut v = left.labels();
                v.extend(right.labels());
                v
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Dendrogram::Leaf(_) => 1,
            Dendrogram::Join { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// The two label sets of the root split; `None` for a single leaf.
    pub fn top_split(&self) -> Option<(BTreeSet<String>, BTreeSet<String>)> {
        match self {
            Dendrogram::Leaf(_) => None,
            Dendrogram::Join { left, right, .. } => Some((
                left.labels().into_iter().map(String::from).collect(),
                right.labels().into_iter().map(String::from).collect(),
            )),
        }
    }

    pub fn to_newick(&self) -> String {
        format!("{self};")
    }

    fn height(&self) -> f64 {
        match self {
            Dendrogram::Leaf(_) => 0.0,
            Dendrogram::Join { height, .. } => *height,
        }
    }
}

fn quote(label: &str) -> String {
    if label.chars().any(|c| "()[]':;,".contains(c) || c.is_whitespace()) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

impl fmt::Display for Dendrogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dendrogram::Leaf(l) => write!(f, "{}", quote(l)),
            Dendrogram::Join { height, left, right } => {
                // Branch length = half the merge distance minus the child's own height.
                let bl = |c: &Dendrogram| (height / 2.0 - c.height() / 2.0).max(0.0);
                write!(f, "({}:{:.6},{}:{:.6})", left, bl(left), right, bl(right))
            }
        }
    }
}

/// UPGMA over a symmetric matrix. Ties go to the lexicographically
/// smallest pair of current cluster ids, so the result is deterministic.
pub fn average_linkage(labels: &[String], dist: &[Vec<f64>]) -> Option<Dendrogram> {
    let n = labels.len();
    if n == 0 || dist.len() != n || dist.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut clusters: Vec<Option<(Dendrogram, usize)>> =
        labels.iter().map(|l| Some((Dendrogram::Leaf(l.clone()), 1))).collect();
    let mut d: Vec<Vec<f64>> = dist.to_vec();
    for _ in 1..n {
        let alive: Vec<usize> = (0..clusters.len()).filter(|&i| clusters[i].is_some()).collect();
        let mut best: Option<(f64, usize, usize)> = None;
        for (ai, &i) in alive.iter().enumerate() {
            for &j in &alive[ai + 1..] {
                if best.is_none_or(|(bd, _, _)| d[i][j] < bd) {
                    best = Some((d[i][j], i, j));
                }
            }
        }
        let (h, i, j) = best?;
        let (a, na) = clusters[i].take()?;
        let (b, nb) = clusters[j].take()?;
        let row: Vec<f64> = (0..clusters.len())
            .map(|k| (d[i][k] * na as f64 + d[j][k] * nb as f64) / (na + nb) as f64)
            .collect();
        for (k, v) in row.iter().enumerate() {
            d[k].push(*v);
        }
        let mut row = row;
        row.push(0.0);
        d.push(row);
        clusters.push(Some((Dendrogram::Join { height: h, left: Box::new(a), right: Box::new(b) }, na + nb)));
    }
    clusters.into_iter().flatten().next().map(|(t, _)| t)
}
