//! Compression-based distances between real files: a compressed length
//! stands in for complexity, and `C(ab) − min(C(a), C(b))` for the larger
//! of the two conditional complexities.

mod cluster;
mod corpus;
pub mod lz;

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use num_traits::Float;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use cluster::{average_linkage, Dendrogram};
pub use corpus::{fixture_corpus, CorpusFile};

#[derive(Debug, Error)]
pub enum NcdError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("compressor {name} failed: {detail}")]
    Compressor { name: String, detail: String },
    #[error("need at least two inputs, got {0}")]
    TooFew(usize),
    #[error("both inputs are empty")]
    Empty,
    #[error("unknown compressor {0:?}; use `builtin` or `cmd:<program>`")]
    UnknownCompressor(String),
}

pub trait Compressor: Sync {
    fn name(&self) -> String;

    /// Compressed size in bits.
    fn compress_len(&self, data: &[u8]) -> Result<u64, NcdError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Builtin;

impl Compressor for Builtin {
    fn name(&self) -> String {
        "builtin".into()
    }

    fn compress_len(&self, data: &[u8]) -> Result<u64, NcdError> {
        Ok(lz::compressed_bits(data))
    }
}

/// Any program reading raw bytes on stdin and writing compressed bytes on
/// stdout, e.g. `cmd:gzip -9c`.
#[derive(Debug, Clone)]
pub struct CommandCompressor {
    pub program: String,
    pub args: Vec<String>,
}

impl Compressor for CommandCompressor {
    fn name(&self) -> String {
        std::iter::once(self.program.as_str()).chain(self.args.iter().map(String::as_str)).collect::<Vec<_>>().join(" ")
    }

    fn compress_len(&self, data: &[u8]) -> Result<u64, NcdError> {
        let fail = |detail: String| NcdError::Compressor { name: self.name(), detail };
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| fail(e.to_string()))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let input = data.to_vec();
        let writer = std::thread::spawn(move || stdin.write_all(&input));
        let out = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
        writer.join().expect("writer thread").map_err(|e| fail(e.to_string()))?;
        if !out.status.success() {
            return Err(fail(format!("exit status {}", out.status)));
        }
        Ok(out.stdout.len() as u64 * 8)
    }
}

/// `builtin` or `cmd:<program> [args...]`.
pub fn compressor_from_spec(spec: &str) -> Result<Box<dyn Compressor>, NcdError> {
    if spec == "builtin" {
        return Ok(Box::new(Builtin));
    }
    let cmd = spec.strip_prefix("cmd:").ok_or_else(|| NcdError::UnknownCompressor(spec.into()))?;
    let mut parts = cmd.split_whitespace().map(String::from);
    let program = parts.next().ok_or_else(|| NcdError::UnknownCompressor(spec.into()))?;
    Ok(Box::new(CommandCompressor { program, args: parts.collect() }))
}

fn concat(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut ab = Vec::with_capacity(a.len() + b.len());
    ab.extend_from_slice(a);
    ab.extend_from_slice(b);
    ab
}

/// `C(ab) − min(C(a), C(b))`, in bits.
pub fn e1_estimate(a: &[u8], b: &[u8], comp: &dyn Compressor) -> Result<i64, NcdError> {
    let (ca, cb) = (comp.compress_len(a)?, comp.compress_len(b)?);
    Ok(comp.compress_len(&concat(a, b))? as i64 - ca.min(cb) as i64)
}

fn ncd_from<F: Float>(cab: u64, ca: u64, cb: u64) -> F {
    let f = |v: u64| F::from(v).expect("bit counts fit");
    (f(cab) - f(ca.min(cb))) / f(ca.max(cb))
}

/// `(C(ab) − min(C(a), C(b))) / max(C(a), C(b))`.
pub fn ncd<F: Float>(a: &[u8], b: &[u8], comp: &dyn Compressor) -> Result<F, NcdError> {
    if a.is_empty() && b.is_empty() {
        return Err(NcdError::Empty);
    }
    let (ca, cb) = (comp.compress_len(a)?, comp.compress_len(b)?);
    Ok(ncd_from(comp.compress_len(&concat(a, b))?, ca, cb))
}

/// Raw cells `values[i][j] = ncd(item_i, item_j)` with `item_i` first in
/// the concatenation, so the matrix is only approximately symmetric.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.len()).map(|i| self.values[i][i]).fold(0.0, f64::max)
    }

    pub fn symmetry_gap(&self) -> f64 {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (self.values[i][j] - self.values[j][i]).abs())
            .fold(0.0, f64::max)
    }

    /// Mean of the two orders, zero on the diagonal.
    pub fn symmetrized(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { (self.values[i][j] + self.values[j][i]) / 2.0 }).collect())
            .collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            out.push('\t');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.values) {
            out.push_str(l);
            for v in row {
                out.push_str(&format!("\t{v:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn distance_matrix(items: &[(String, Vec<u8>)], comp: &dyn Compressor) -> Result<DistanceMatrix, NcdError> {
    if items.len() < 2 {
        return Err(NcdError::TooFew(items.len()));
    }
    let singles: Vec<u64> = items.par_iter().map(|(_, d)| comp.compress_len(d)).collect::<Result<_, _>>()?;
    let n = items.len();
    let cells: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let cab = comp.compress_len(&concat(&items[i].1, &items[j].1))?;
            Ok(ncd_from(cab, singles[i], singles[j]))
        })
        .collect::<Result<_, NcdError>>()?;
    Ok(DistanceMatrix {
        labels: items.iter().map(|(l, _)| l.clone()).collect(),
        values: cells.chunks(n).map(<[f64]>::to_vec).collect(),
    })
}

/// Regular files of `dir`, sorted by name.
pub fn load_dir(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, NcdError> {
    let read_err = |path: &Path, source| NcdError::Read { path: path.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| read_err(dir, e))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let data = std::fs::read(&p).map_err(|e| read_err(&p, e))?;
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, data))
        })
        .collect()
}
