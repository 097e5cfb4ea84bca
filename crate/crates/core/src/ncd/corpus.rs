//! A seeded two-family corpus: repetitive files built from one motif with
//! sparse mutations, and random files sharing an incompressible base with
//! a tenth of their bytes re-drawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FILE_LEN: usize = 2048;
pub const PER_FAMILY: usize = 4;

#[derive(Debug, Clone)]
pub struct CorpusFile {
    pub name: String,
    pub family: &'static str,
    pub data: Vec<u8>,
}

pub fn fixture_corpus(seed: u64) -> Vec<CorpusFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let motif: Vec<u8> = (0..24).map(|_| rng.gen_range(b'a'..=b'z')).collect();
    let base: Vec<u8> = (0..FILE_LEN).map(|_| rng.gen()).collect();
    let mut files = Vec::new();
    for i in 0..PER_FAMILY {
        let mut data: Vec<u8> = motif.iter().copied().cycle().take(FILE_LEN).collect();
        for _ in 0..FILE_LEN / 64 {
            let at = rng.gen_range(0..FILE_LEN);
            data[at] = rng.gen_range(b'a'..=b'z');
        }
        files.push(CorpusFile { name: format!("rep{i}"), family: "repetitive", data });
    }
    for i in 0..PER_FAMILY {
        let data = base.iter().map(|&b| if rng.gen_bool(0.1) { rng.gen() } else { b }).collect();
        files.push(CorpusFile { name: format!("rnd{i}"), family: "random", data });
    }
    files
}
