//! Greedy LZ77 over the whole input with three token kinds: a literal
//! byte, a copy of earlier bytes, and a copy of the bitwise complement of
//! earlier bytes. Lengths and offsets use the self-delimiting level-1 code,
//! and the stream starts with the level-2 code of the input length.

use crate::codes::{decode_lg, encode_lg, index_to_string, string_to_index, BitString};

const MIN_MATCH: usize = 4;
const HASH_BITS: u32 = 14;
const MAX_CHAIN: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Literal(u8),
    Copy { offset: usize, len: usize },
    Complement { offset: usize, len: usize },
}

fn hash4(b: [u8; 4]) -> usize {
    (u32::from_le_bytes(b).wrapping_mul(0x9E37_79B1) >> (32 - HASH_BITS)) as usize
}

fn gram(data: &[u8], i: usize) -> Option<[u8; 4]> {
    data.get(i..i + 4).map(|s| [s[0], s[1], s[2], s[3]])
}

/// Greedy parse using hash chains over every earlier position.
fn parse(data: &[u8]) -> Vec<Token> {
    let mut head = vec![usize::MAX; 1 << HASH_BITS];
    let mut prev = vec![usize::MAX; data.len()];
    let insert = |head: &mut Vec<usize>, prev: &mut Vec<usize>, i: usize| {
        if let Some(g) = gram(data, i) {
            let h = hash4(g);
            prev[i] = head[h];
            head[h] = i;
        }
    };
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < data.len() {
        let mut best: Option<Token> = None;
        let mut best_len = MIN_MATCH - 1;
        if let Some(g) = gram(data, i) {
            for complement in [false, true] {
                let key = if complement { g.map(|b| !b) } else { g };
                let mut j = head[hash4(key)];
                let mut steps = 0;
                while j != usize::MAX && steps < MAX_CHAIN {
                    let len = (0..data.len() - i)
                        .take_while(|&k| {
                            let src = data[j + k];
                            data[i + k] == if complement { !src } else { src }
                        })
                        .count();
                    if len > best_len {
                        best_len = len;
                        let offset = i - j;
                        best = Some(if complement { Token::Complement { offset, len } } else { Token::Copy { offset, len } });
                    }
                    j = prev[j];
                    steps += 1;
                }
            }
        }
        let advance = match best {
            Some(t) => {
                tokens.push(t);
                best_len
            }
            None => {
                tokens.push(Token::Literal(data[i]));
                1
            }
        };
        for k in i..i + advance {
            insert(&mut head, &mut prev, k);
        }
        i += advance;
    }
    tokens
}

fn push_number(out: &mut BitString, n: usize) {
    out.extend_from(&encode_lg(1, &index_to_string(n as u64)).expect("level 1"));
}

pub fn compress(data: &[u8]) -> BitString {
    let mut out = encode_lg(2, &index_to_string(data.len() as u64)).expect("level 2");
    for t in parse(data) {
        match t {
            Token::Literal(b) => {
                out.push(false);
                (0..8).rev().for_each(|k| out.push(b >> k & 1 == 1));
            }
            Token::Copy { offset, len } | Token::Complement { offset, len } => {
                out.push(true);
                out.push(matches!(t, Token::Complement { .. }));
                push_number(&mut out, offset - 1);
                push_number(&mut out, len - MIN_MATCH);
            }
        }
    }
    out
}

pub fn compressed_bits(data: &[u8]) -> u64 {
    compress(data).len() as u64
}

/// Inverse of [`compress`]; `None` on a malformed stream.
pub fn decompress(bits: &BitString) -> Option<Vec<u8>> {
    let b = bits.bits();
    let number = |pos: &mut usize| -> Option<usize> {
        let (s, used) = decode_lg(1, &b[*pos..]).ok()?;
        *pos += used;
        string_to_index::<u64>(&s).map(|v| v as usize)
    };
    let (len_str, mut pos) = decode_lg(2, b).ok()?;
    let n = string_to_index::<u64>(&len_str)? as usize;
    let mut out: Vec<u8> = Vec::with_capacity(n);
    while out.len() < n {
        let flag = *b.get(pos)?;
        pos += 1;
        if !flag {
            let byte = b.get(pos..pos + 8)?.iter().fold(0u8, |acc, &bit| acc << 1 | bit as u8);
            pos += 8;
            out.push(byte);
            continue;
        }
        let complement = *b.get(pos)?;
        pos += 1;
        let offset = number(&mut pos)? + 1;
        let len = number(&mut pos)? + MIN_MATCH;
        let start = out.len().checked_sub(offset)?;
        for k in 0..len {
            let src = out[start + k];
            out.push(if complement { !src } else { src });
        }
    }
    (out.len() == n && pos == b.len()).then_some(out)
}
