use super::{
    check_rank_arg, check_select_arg, select_in_word, BitRankSelect, RawBits, SizeReport,
    SELECT_SAMPLE,
};
use crate::{Error, Result};

const SUPERBLOCK_BITS: usize = 2048;
const BLOCK_BITS: usize = 256;
const WORDS_PER_BLOCK: usize = BLOCK_BITS / 64;
const BLOCKS_PER_SUPER: usize = SUPERBLOCK_BITS / BLOCK_BITS;

/// Multiplier `c` of the published directory bound `c·n/lg n + c′`.
///
/// The directory is `64` bits per 2048-bit superblock, `16` bits per 256-bit block
/// and `32` bits per select sample, about `0.157·n` bits in total, which is below
/// `10·n/lg n` for every `n < 2^64`.
pub const PLAIN_OVERHEAD_C: f64 = 10.0;
/// Additive constant `c′` of the published directory bound.
pub const PLAIN_OVERHEAD_C_PRIME: f64 = 256.0;

/// Two-level rank directory with sampled select over a sequence of 64-bit words.
///
/// The words are not owned; every query receives a closure yielding word `i` with
/// the bits past `len` cleared. This lets the same directory index a stored bit
/// string or a virtual one (e.g. occurrences of a two-bit pattern).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RankDirectory {
    len: usize,
    ones: usize,
    /// Absolute rank at every superblock boundary, plus a final sentinel.
    supers: Vec<u64>,
    /// Rank relative to the enclosing superblock at every block boundary.
    blocks: Vec<u16>,
    /// Superblock holding occurrence `1 + t·SELECT_SAMPLE` of a 1 (resp. 0).
    samples1: Vec<u32>,
    samples0: Vec<u32>,
}

impl RankDirectory {
    pub(crate) fn build(len: usize, word: impl Fn(usize) -> u64) -> Self {
        let nwords = len.div_ceil(64);
        let nblocks = len.div_ceil(BLOCK_BITS);
        let mut supers = Vec::with_capacity(len / SUPERBLOCK_BITS + 2);
        let mut blocks = Vec::with_capacity(nblocks);
        let mut samples1 = Vec::new();
        let mut samples0 = Vec::new();
        let (mut total, mut local) = (0usize, 0usize);
        let mut zeros = 0usize;
        for wi in 0..nwords {
            if wi % WORDS_PER_BLOCK == 0 {
                let b = wi / WORDS_PER_BLOCK;
                if b % BLOCKS_PER_SUPER == 0 {
                    supers.push(total as u64);
                    local = 0;
                }
                blocks.push(local as u16);
            }
            let valid = if (wi + 1) * 64 <= len { 64 } else { len - wi * 64 };
            let pop1 = word(wi).count_ones() as usize;
            let pop0 = valid - pop1;
            let sb = ((wi * 64) / SUPERBLOCK_BITS) as u32;
            while samples1.len() * SELECT_SAMPLE < total + pop1 {
                samples1.push(sb);
            }
            while samples0.len() * SELECT_SAMPLE < zeros + pop0 {
                samples0.push(sb);
            }
            total += pop1;
            local += pop1;
            zeros += pop0;
        }
        // sentinel
        supers.push(total as u64);
        RankDirectory {
            len,
            ones: total,
            supers,
            blocks,
            samples1,
            samples0,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn ones(&self) -> usize {
        self.ones
    }

    /// Ones in `[0, i)`.
    #[inline]
    pub(crate) fn rank1(&self, i: usize, word: impl Fn(usize) -> u64) -> usize {
        debug_assert!(i <= self.len);
        if i == self.len {
            return self.ones;
        }
        let b = i / BLOCK_BITS;
        let mut r = self.supers[i / SUPERBLOCK_BITS] as usize + self.blocks[b] as usize;
        let w_end = i / 64;
        for w in b * WORDS_PER_BLOCK..w_end {
            r += word(w).count_ones() as usize;
        }
        let o = i % 64;
        if o > 0 {
            r += (word(w_end) & ((1u64 << o) - 1)).count_ones() as usize;
        }
        r
    }

    fn super_count(&self, s: usize, bit: bool) -> usize {
        let ones = self.supers[s] as usize;
        if bit {
            ones
        } else {
            (s * SUPERBLOCK_BITS).min(self.len) - ones
        }
    }

    /// 0-based position of the `k`-th `bit`, `1 <= k <= count(bit)`.
    pub(crate) fn select(&self, k: usize, bit: bool, word: impl Fn(usize) -> u64) -> usize {
        let samples = if bit { &self.samples1 } else { &self.samples0 };
        let t = (k - 1) / SELECT_SAMPLE;
        let lo = samples[t] as usize;
        let hi = samples
            .get(t + 1)
            .map_or(self.supers.len() - 2, |&s| s as usize);
        // last superblock s in [lo, hi] whose start count is < k
        let (mut a, mut b) = (lo, hi);
        while a < b {
            let mid = (a + b).div_ceil(2);
            if self.super_count(mid, bit) < k {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        let s = a;
        let mut r = self.super_count(s, bit);
        let first_block = s * BLOCKS_PER_SUPER;
        let last_block = (first_block + BLOCKS_PER_SUPER).min(self.blocks.len());
        let block_count = |cand: usize| {
            let rel = self.blocks[cand] as usize;
            if bit {
                rel
            } else {
                (cand - first_block) * BLOCK_BITS - rel
            }
        };
        let mut blk = first_block;
        for cand in first_block + 1..last_block {
            if r + block_count(cand) < k {
                blk = cand;
            } else {
                break;
            }
        }
        r += block_count(blk);
        let mut wi = blk * WORDS_PER_BLOCK;
        loop {
            let mut w = word(wi);
            if !bit {
                w = !w;
                let valid = self.len - wi * 64;
                if valid < 64 {
                    w &= (1u64 << valid) - 1;
                }
            }
            let pop = w.count_ones() as usize;
            if r + pop >= k {
                return wi * 64 + select_in_word(w, k - r);
            }
            r += pop;
            wi += 1;
        }
    }

    pub(crate) fn bits(&self) -> u64 {
        self.supers.len() as u64 * 64
            + self.blocks.len() as u64 * 16
            + (self.samples1.len() + self.samples0.len()) as u64 * 32
    }
}

/// Uncompressed bit string with a two-level rank directory and sampled select.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainBitSeq {
    bits: RawBits,
    dir: RankDirectory,
}

impl PlainBitSeq {
    pub fn new(bits: &[bool]) -> Self {
        Self::from_raw(RawBits::from_bools(bits))
    }

    /// Builds from a bit iterator.
    pub fn from_iter_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut raw = RawBits::default();
        for b in bits {
            raw.push(b);
        }
        Self::from_raw(raw)
    }

    pub(crate) fn from_raw(bits: RawBits) -> Self {
        let words = bits.words();
        let dir = RankDirectory::build(bits.len(), |i| words[i]);
        PlainBitSeq { bits, dir }
    }

    /// Bit at 0-based position `i`.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    /// Ones in the first `i` bits (0-based prefix `[0, i)`), `i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        let words = self.bits.words();
        self.dir.rank1(i, |w| words[w])
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// 0-based position of the `k`-th one, `1 <= k <= count_ones`.
    pub fn select1(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.dir.ones());
        let words = self.bits.words();
        self.dir.select(k, true, |w| words[w])
    }

    /// 0-based position of the `k`-th zero.
    pub fn select0(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.dir.len() - self.dir.ones());
        let words = self.bits.words();
        self.dir.select(k, false, |w| words[w])
    }

    fn select_impl(&self, k: usize, bit: bool) -> usize {
        let words = self.bits.words();
        self.dir.select(k, bit, |w| words[w])
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.bits.to_bools()
    }

    pub(crate) fn raw(&self) -> &RawBits {
        &self.bits
    }

    pub fn directory_bits(&self) -> u64 {
        self.dir.bits()
    }

    /// The published directory bound `c·n/lg n + c′` (with `lg n` floored at 1).
    pub fn directory_bound(n: usize) -> f64 {
        let lg = (n.max(2) as f64).log2();
        PLAIN_OVERHEAD_C * n as f64 / lg + PLAIN_OVERHEAD_C_PRIME
    }
}

impl BitRankSelect for PlainBitSeq {
    fn len(&self) -> usize {
        self.bits.len()
    }

    fn count_ones(&self) -> usize {
        self.dir.ones()
    }

    fn get(&self, pos: usize) -> Result<bool> {
        if pos == 0 || pos > self.bits.len() {
            return Err(Error::range(format!(
                "bit position {pos} outside [1, {}]",
                self.bits.len()
            )));
        }
        Ok(self.bits.get(pos - 1))
    }

    fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        check_rank_arg(i, self.bits.len())?;
        Ok(if bit { self.rank1(i) } else { self.rank0(i) })
    }

    fn select(&self, bit: bool, k: usize) -> Result<usize> {
        check_select_arg(k, self.count(bit), bit)?;
        Ok(self.select_impl(k, bit) + 1)
    }

    fn size_report(&self) -> SizeReport {
        SizeReport::new(self.bits.len() as u64, self.directory_bits())
    }
}
