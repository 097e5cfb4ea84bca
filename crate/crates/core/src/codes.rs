//! Binary strings, the string/number bijection, the `lg_i` ladder of
//! self-delimiting codes and the pairing function built on `lg_2`.
//!
//! Strings and numbers are identified through the length-increasing
//! lexicographic order `ε, 0, 1, 00, 01, 10, 11, 000, ...`, so the `n`-th
//! string is the binary numeral of `n + 1` with its leading `1` removed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{PrimInt, Unsigned};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Highest ladder level supported by [`encode_lg`] and [`decode_lg`].
pub const MAX_LEVEL: u8 = 3;

/// Largest unary run `lg_0` will emit. Keeps a stray huge index from
/// allocating gigabytes of ones.
const MAX_UNARY: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code level {0} outside 0..=3")]
    InvalidLevel(u8),
    #[error("stream ends before the codeword is complete")]
    Truncated,
    #[error("value does not fit the target integer type")]
    Overflow,
    #[error("invalid bit character {0:?}")]
    InvalidChar(char),
}

/// A finite binary string. Ordered by length first, then lexicographically,
/// which is the canonical enumeration order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Parses `'0'`/`'1'` text. The empty string and `"-"` both denote ε.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let text = text.trim();
        if text == "-" {
            return Ok(Self::empty());
        }
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CodeError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_bits)
    }

    /// Same as [`parse`](Self::parse) but panics on bad input; meant for
    /// literals in tests and fixtures.
    pub fn lit(text: &str) -> Self {
        Self::parse(text).unwrap_or_else(|e| panic!("bad bit literal {text:?}: {e}"))
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        Self::from_bits(self.bits[start..end].to_vec())
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// All strings of length exactly `len`, in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        let start = (1u64 << len) - 1;
        (start..start + (1u64 << len)).map(index_to_string)
    }

    /// All strings of length `0..=max_len`, in canonical order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..(1u64 << (max_len + 1)) - 1).map(index_to_string)
    }

    /// The `n`-th string of length `len` read as a big-endian numeral.
    pub fn numeral(n: u64, len: usize) -> BitString {
        Self::from_bits((0..len).rev().map(|i| i < 64 && (n >> i) & 1 == 1).collect())
    }

    /// Big-endian value of the bits; `None` when it does not fit in `u64`.
    pub fn numeral_value(&self) -> Option<u64> {
        if self.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl FromStr for BitString {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter.into_iter().collect())
    }
}

/// The `n`-th string in length-increasing lexicographic order.
pub fn index_to_string<N: PrimInt + Unsigned>(n: N) -> BitString {
    let n = n.to_u128().expect("unsigned primitive fits u128");
    let m = n + 1;
    let width = 128 - m.leading_zeros() as usize;
    (0..width - 1).rev().map(|i| (m >> i) & 1 == 1).collect()
}

/// Inverse of [`index_to_string`]; `None` if the index overflows `N`.
pub fn string_to_index<N: PrimInt + Unsigned>(x: &BitString) -> Option<N> {
    let one = N::one();
    let mut acc = one;
    for &b in x.bits() {
        acc = acc.checked_mul(&(one + one))?;
        if b {
            acc = acc.checked_add(&one)?;
        }
    }
    Some(acc - one)
}

/// `lg_0(x) = 1^x 0` with `x` read as its index; `lg_i(x) = lg_{i-1}(l(x)) x`.
pub fn encode_lg(level: u8, x: &BitString) -> Result<BitString, CodeError> {
    let mut out = BitString::empty();
    encode_into(level, x, &mut out)?;
    Ok(out)
}

fn encode_into(level: u8, x: &BitString, out: &mut BitString) -> Result<(), CodeError> {
    match level {
        0 => {
            let n: u64 = string_to_index(x).ok_or(CodeError::Overflow)?;
            if n > MAX_UNARY {
                return Err(CodeError::Overflow);
            }
            out.bits.extend(std::iter::repeat_n(true, n as usize));
            out.push(false);
            Ok(())
        }
        1..=MAX_LEVEL => {
            encode_into(level - 1, &index_to_string(x.len() as u64), out)?;
            out.extend_from(x);
            Ok(())
        }
        other => Err(CodeError::InvalidLevel(other)),
    }
}

/// Length of `lg_level(x)` without building it.
pub fn lg_len(level: u8, x: &BitString) -> Result<usize, CodeError> {
    match level {
        0 => {
            let n: u64 = string_to_index(x).ok_or(CodeError::Overflow)?;
            usize::try_from(n + 1).map_err(|_| CodeError::Overflow)
        }
        1..=MAX_LEVEL => Ok(lg_len(level - 1, &index_to_string(x.len() as u64))? + x.len()),
        other => Err(CodeError::InvalidLevel(other)),
    }
}

/// Decodes one level-`level` codeword from the front of `stream`, returning
/// the payload and the number of bits consumed. Never reads past the end of
/// the codeword.
pub fn decode_lg(level: u8, stream: &[bool]) -> Result<(BitString, usize), CodeError> {
    match level {
        0 => {
            let ones = stream.iter().take_while(|&&b| b).count();
            if ones == stream.len() {
                return Err(CodeError::Truncated);
            }
            Ok((index_to_string(ones as u64), ones + 1))
        }
        1..=MAX_LEVEL => {
            let (len_str, used) = decode_lg(level - 1, stream)?;
            let len: u64 = string_to_index(&len_str).ok_or(CodeError::Overflow)?;
            let len = usize::try_from(len).map_err(|_| CodeError::Overflow)?;
            let end = used.checked_add(len).ok_or(CodeError::Overflow)?;
            if end > stream.len() {
                return Err(CodeError::Truncated);
            }
            Ok((BitString::from_bits(stream[used..end].to_vec()), end))
        }
        other => Err(CodeError::InvalidLevel(other)),
    }
}

/// `⟨x, y⟩ = lg_2(x) y`.
pub fn pair(x: &BitString, y: &BitString) -> BitString {
    let mut out = encode_lg(2, x).expect("lg_2 is total on strings that fit in memory");
    out.extend_from(y);
    out
}

pub fn unpair(z: &BitString) -> Result<(BitString, BitString), CodeError> {
    let (x, used) = decode_lg(2, z.bits())?;
    Ok((x, z.slice(used, z.len())))
}

pub fn pair_first(z: &BitString) -> Result<BitString, CodeError> {
    unpair(z).map(|(x, _)| x)
}

pub fn pair_second(z: &BitString) -> Result<BitString, CodeError> {
    unpair(z).map(|(_, y)| y)
}
