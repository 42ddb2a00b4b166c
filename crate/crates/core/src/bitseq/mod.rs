//! Bit strings with rank and select.
//!
//! Two representations share the [`BitRankSelect`] interface:
//!
//! - [`PlainBitSeq`] stores the `n` payload bits verbatim plus a two-level rank
//!   directory and sampled select hints.
//! - [`CompressedBitSeq`] cuts the string into 15-bit blocks and stores each block
//!   as a 4-bit class (its popcount) and an offset of `⌈lg C(15, class)⌉` bits
//!   identifying the block among all blocks of that class. The offsets sum to at
//!   most `⌈lg C(n, m)⌉` plus one rounding bit per block.
//!
//! Positions are 1-based at this interface: `rank(b, i)` counts the `b` bits in
//! `B[1..=i]` and `select(b, k)` returns the 1-based position of the `k`-th `b`.
//!
//! # Probe bounds
//!
//! Rank is one superblock read, one block read and at most four word popcounts
//! (plain) or at most 31 class reads and one block decode (compressed). Select
//! reads one sample, binary-searches the superblocks between two consecutive
//! samples (samples are taken every [`SELECT_SAMPLE`] occurrences) and finishes
//! with the rank-level scan inside one superblock.

mod plain;
mod rrr;

pub use plain::PlainBitSeq;
pub(crate) use plain::RankDirectory;
pub use rrr::{offset_bound, CompressedBitSeq};

use num_bigint::BigUint;
use serde::Serialize;

use crate::{Error, Result};

/// One select hint is stored every this many occurrences of a bit value.
pub const SELECT_SAMPLE: usize = 512;

/// Space used by a structure, split into the stored data and its auxiliary index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub payload_bits: u64,
    pub directory_bits: u64,
    pub total_bits: u64,
}

impl SizeReport {
    pub fn new(payload_bits: u64, directory_bits: u64) -> Self {
        SizeReport {
            payload_bits,
            directory_bits,
            total_bits: payload_bits + directory_bits,
        }
    }
}

/// Rank/select over a static bit string, 1-based.
pub trait BitRankSelect {
    /// Number of bits `n`.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of 1 bits.
    fn count_ones(&self) -> usize;

    fn count(&self, bit: bool) -> usize {
        if bit {
            self.count_ones()
        } else {
            self.len() - self.count_ones()
        }
    }

    /// Bit at 1-based position `pos`.
    fn get(&self, pos: usize) -> Result<bool>;

    /// Number of `bit` values among the first `i` bits, `0 <= i <= n`.
    fn rank(&self, bit: bool, i: usize) -> Result<usize>;

    /// 1-based position of the `k`-th `bit`, `1 <= k <= count(bit)`.
    fn select(&self, bit: bool, k: usize) -> Result<usize>;

    fn size_report(&self) -> SizeReport;
}

pub(crate) fn check_rank_arg(i: usize, len: usize) -> Result<()> {
    if i > len {
        return Err(Error::range(format!("rank position {i} outside [0, {len}]")));
    }
    Ok(())
}

pub(crate) fn check_select_arg(k: usize, count: usize, bit: bool) -> Result<()> {
    if k == 0 || k > count {
        return Err(Error::range(format!(
            "select{} argument {k} outside [1, {count}]",
            bit as u8
        )));
    }
    Ok(())
}

/// Parses a string of `'0'`/`'1'` characters.
pub fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::contract(format!("not a bit character: {other:?}"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// `⌈lg x⌉` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x >= 1);
    (64 - (x - 1).leading_zeros()) as u64
}

/// Number of bits needed to write any value in `[0, x]`.
pub fn bits_for(x: u64) -> u64 {
    (64 - x.leading_zeros()) as u64
}

/// `⌈lg C(n, m)⌉`, exact.
///
/// A floating point estimate is used when it is far from an integer; otherwise the
/// binomial is evaluated exactly.
pub fn ceil_log2_binomial(n: u64, m: u64) -> u64 {
    assert!(m <= n, "C({n}, {m}) undefined");
    let k = m.min(n - m);
    if k == 0 {
        return 0;
    }
    let approx: f64 = (0..k)
        .map(|t| ((n - t) as f64).log2() - ((t + 1) as f64).log2())
        .sum();
    let frac = approx - approx.floor();
    if frac > 1e-6 && frac < 1.0 - 1e-6 {
        return approx.ceil() as u64;
    }
    let mut c = BigUint::from(1u32);
    for t in 0..k {
        c *= n - t;
        c /= t + 1;
    }
    (c - 1u32).bits()
}

/// Growable bit buffer used by the packed payloads.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct RawBits {
    words: Vec<u64>,
    len: usize,
}

impl RawBits {
    pub(crate) fn with_len(len: usize) -> Self {
        RawBits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub(crate) fn from_bools(bits: &[bool]) -> Self {
        let mut raw = RawBits::with_len(bits.len());
        for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            raw.words[i / 64] |= 1 << (i % 64);
        }
        raw
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub(crate) fn push(&mut self, bit: bool) {
        self.push_bits(bit as u64, 1);
    }

    /// Appends the low `width` bits of `value`, least significant first.
    pub(crate) fn push_bits(&mut self, value: u64, width: usize) {
        debug_assert!(width <= 64);
        if width == 0 {
            return;
        }
        let end = self.len + width;
        self.words.resize(end.div_ceil(64), 0);
        let value = if width == 64 {
            value
        } else {
            value & ((1u64 << width) - 1)
        };
        let (w, o) = (self.len / 64, self.len % 64);
        self.words[w] |= value << o;
        if o + width > 64 {
            self.words[w + 1] |= value >> (64 - o);
        }
        self.len = end;
    }

    /// Reads `width <= 64` bits starting at `pos`.
    #[inline]
    pub(crate) fn get_bits(&self, pos: usize, width: usize) -> u64 {
        if width == 0 {
            return 0;
        }
        debug_assert!(pos + width <= self.len);
        let (w, o) = (pos / 64, pos % 64);
        let mut v = self.words[w] >> o;
        if o + width > 64 {
            v |= self.words[w + 1] << (64 - o);
        }
        if width == 64 {
            v
        } else {
            v & ((1u64 << width) - 1)
        }
    }

    pub(crate) fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Position (0-based) of the `k`-th set bit of `word`, `k >= 1`.
#[inline]
pub(crate) fn select_in_word(mut word: u64, k: usize) -> usize {
    debug_assert!(k >= 1 && k <= word.count_ones() as usize);
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}
