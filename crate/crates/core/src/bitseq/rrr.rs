use super::{
    check_rank_arg, check_select_arg, BitRankSelect, RawBits, SizeReport,
    SELECT_SAMPLE,
};
use crate::{Error, Result};

/// Bits per block.
pub const BLOCK_LEN: usize = 15;
/// Blocks per superblock.
pub const SUPER_BLOCKS: usize = 32;
const SUPER_LEN: usize = BLOCK_LEN * SUPER_BLOCKS;
const CLASS_BITS: usize = 4;

const fn binomial_table() -> [[u16; 16]; 16] {
    let mut t = [[0u16; 16]; 16];
    let mut n = 0;
    while n < 16 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOM: [[u16; 16]; 16] = binomial_table();

const fn width_table() -> [[u8; 16]; 16] {
    let mut w = [[0u8; 16]; 16];
    let mut n = 0;
    while n < 16 {
        let mut k = 0;
        while k <= n {
            let c = BINOM[n][k] as u32;
            // ceil(lg c)
            w[n][k] = (32 - (c - 1).leading_zeros()) as u8;
            k += 1;
        }
        n += 1;
    }
    w
}

static WIDTH: [[u8; 16]; 16] = width_table();

/// Offset width for a block of `len` bits holding `class` ones.
#[inline]
pub fn offset_width(len: usize, class: usize) -> usize {
    WIDTH[len][class] as usize
}

/// Rank of `block` among the `len`-bit strings with the same popcount, using the
/// combinatorial number system over the set-bit positions.
pub fn encode_block(block: u16) -> u16 {
    let mut offset = 0u16;
    let mut j = 0;
    let mut w = block;
    while w != 0 {
        let p = w.trailing_zeros() as usize;
        j += 1;
        offset += BINOM[p][j];
        w &= w - 1;
    }
    offset
}

/// Inverse of [`encode_block`].
pub fn decode_block(len: usize, class: usize, mut offset: u16) -> u16 {
    let mut block = 0u16;
    let mut p = len;
    for j in (1..=class).rev() {
        // largest p' < p with C(p', j) <= offset
        p -= 1;
        while BINOM[p][j] > offset {
            p -= 1;
        }
        block |= 1 << p;
        offset -= BINOM[p][j];
    }
    block
}

/// Class/offset compressed bit string.
///
/// Payload is the concatenated block offsets; block classes are part of the
/// directory (see [`CompressedBitSeq::class_bits`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedBitSeq {
    len: usize,
    ones: usize,
    classes: RawBits,
    offsets: RawBits,
    /// Ones before each superblock, plus a final sentinel.
    super_rank: Vec<u64>,
    /// Offset-stream position of each superblock's first block.
    super_ptr: Vec<u64>,
    samples1: Vec<u32>,
    samples0: Vec<u32>,
}

impl CompressedBitSeq {
    pub fn new(bits: &[bool]) -> Self {
        let len = bits.len();
        let nblocks = len.div_ceil(BLOCK_LEN);
        let mut classes = RawBits::default();
        let mut offsets = RawBits::default();
        for chunk in bits.chunks(BLOCK_LEN) {
            let word = chunk
                .iter()
                .enumerate()
                .fold(0u16, |acc, (i, &bit)| acc | ((bit as u16) << i));
            let class = word.count_ones() as usize;
            classes.push_bits(class as u64, CLASS_BITS);
            offsets.push_bits(encode_block(word) as u64, offset_width(chunk.len(), class));
        }
        debug_assert_eq!(classes.len(), nblocks * CLASS_BITS);
        Self::assemble(len, classes, offsets)
    }

    pub(crate) fn from_parts(len: usize, classes: RawBits, offsets: RawBits) -> Result<Self> {
        let nblocks = len.div_ceil(BLOCK_LEN);
        if classes.len() != nblocks * CLASS_BITS {
            return Err(Error::format("class stream length mismatch"));
        }
        let mut need = 0usize;
        for b in 0..nblocks {
            let blen = BLOCK_LEN.min(len - b * BLOCK_LEN);
            let c = classes.get_bits(b * CLASS_BITS, CLASS_BITS) as usize;
            if c > blen {
                return Err(Error::format("block class exceeds block length"));
            }
            let w = offset_width(blen, c);
            if need + w > offsets.len()
                || offsets.get_bits(need, w) >= BINOM[blen][c] as u64
            {
                return Err(Error::format("corrupt offset stream"));
            }
            need += w;
        }
        if need != offsets.len() {
            return Err(Error::format("offset stream length mismatch"));
        }
        Ok(Self::assemble(len, classes, offsets))
    }

    fn assemble(len: usize, classes: RawBits, offsets: RawBits) -> Self {
        let nblocks = len.div_ceil(BLOCK_LEN);
        let mut super_rank = Vec::with_capacity(nblocks / SUPER_BLOCKS + 2);
        let mut super_ptr = Vec::with_capacity(nblocks / SUPER_BLOCKS + 1);
        let mut samples1 = Vec::new();
        let mut samples0 = Vec::new();
        let (mut ones, mut ptr) = (0usize, 0usize);
        for b in 0..nblocks {
            let sb = b / SUPER_BLOCKS;
            if b % SUPER_BLOCKS == 0 {
                super_rank.push(ones as u64);
                super_ptr.push(ptr as u64);
            }
            let blen = BLOCK_LEN.min(len - b * BLOCK_LEN);
            let c = classes.get_bits(b * CLASS_BITS, CLASS_BITS) as usize;
            let zeros_before = b * BLOCK_LEN - ones;
            while samples1.len() * SELECT_SAMPLE < ones + c {
                samples1.push(sb as u32);
            }
            while samples0.len() * SELECT_SAMPLE < zeros_before + blen - c {
                samples0.push(sb as u32);
            }
            ones += c;
            ptr += offset_width(blen, c);
        }
        super_rank.push(ones as u64);
        CompressedBitSeq {
            len,
            ones,
            classes,
            offsets,
            super_rank,
            super_ptr,
            samples1,
            samples0,
        }
    }

    #[inline]
    fn class(&self, b: usize) -> usize {
        self.classes.get_bits(b * CLASS_BITS, CLASS_BITS) as usize
    }

    #[inline]
    fn block_len(&self, b: usize) -> usize {
        BLOCK_LEN.min(self.len - b * BLOCK_LEN)
    }

    /// Decodes block `b` given the offset-stream position of its offset.
    #[inline]
    fn decode_at(&self, b: usize, ptr: usize) -> u16 {
        let blen = self.block_len(b);
        let c = self.class(b);
        let w = offset_width(blen, c);
        decode_block(blen, c, self.offsets.get_bits(ptr, w) as u16)
    }

    /// Walks from the start of block `b`'s superblock to block `b`, returning
    /// (ones before `b`, offset pointer of `b`).
    fn locate(&self, b: usize) -> (usize, usize) {
        let sb = b / SUPER_BLOCKS;
        let mut r = self.super_rank[sb] as usize;
        let mut ptr = self.super_ptr[sb] as usize;
        for blk in sb * SUPER_BLOCKS..b {
            let c = self.class(blk);
            r += c;
            ptr += offset_width(BLOCK_LEN, c);
        }
        (r, ptr)
    }

    /// Ones in the 0-based prefix `[0, i)`.
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if i == self.len {
            return self.ones;
        }
        let b = i / BLOCK_LEN;
        let (r, ptr) = self.locate(b);
        let o = i % BLOCK_LEN;
        if o == 0 {
            return r;
        }
        let block = self.decode_at(b, ptr);
        r + (block & ((1u16 << o) - 1)).count_ones() as usize
    }

    fn super_count(&self, s: usize, bit: bool) -> usize {
        let ones = self.super_rank[s] as usize;
        if bit {
            ones
        } else {
            (s * SUPER_LEN).min(self.len) - ones
        }
    }

    /// 0-based position of the `k`-th `bit`.
    fn select_impl(&self, k: usize, bit: bool) -> usize {
        let samples = if bit { &self.samples1 } else { &self.samples0 };
        let t = (k - 1) / SELECT_SAMPLE;
        let lo = samples[t] as usize;
        let hi = samples
            .get(t + 1)
            .map_or(self.super_ptr.len() - 1, |&s| s as usize);
        let (mut a, mut z) = (lo, hi);
        while a < z {
            let mid = (a + z).div_ceil(2);
            if self.super_count(mid, bit) < k {
                a = mid;
            } else {
                z = mid - 1;
            }
        }
        let sb = a;
        let mut r = self.super_count(sb, bit);
        let mut ptr = self.super_ptr[sb] as usize;
        let mut b = sb * SUPER_BLOCKS;
        loop {
            let blen = self.block_len(b);
            let c = self.class(b);
            let cnt = if bit { c } else { blen - c };
            if r + cnt >= k {
                let mut block = decode_block(blen, c, self.offsets.get_bits(ptr, offset_width(blen, c)) as u16);
                if !bit {
                    block = !block & ((1u16 << blen) - 1);
                }
                let mut w = block;
                for _ in 1..k - r {
                    w &= w - 1;
                }
                return b * BLOCK_LEN + w.trailing_zeros() as usize;
            }
            r += cnt;
            ptr += offset_width(blen, c);
            b += 1;
        }
    }

    pub fn select1(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.ones);
        self.select_impl(k, true)
    }

    pub fn select0(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.len - self.ones);
        self.select_impl(k, false)
    }

    pub fn bit(&self, i: usize) -> bool {
        let b = i / BLOCK_LEN;
        let (_, ptr) = self.locate(b);
        (self.decode_at(b, ptr) >> (i % BLOCK_LEN)) & 1 == 1
    }

    pub fn block_count(&self) -> usize {
        self.len.div_ceil(BLOCK_LEN)
    }

    /// Bits spent on block offsets.
    pub fn offset_bits(&self) -> u64 {
        self.offsets.len() as u64
    }

    /// Bits spent on block classes.
    pub fn class_bits(&self) -> u64 {
        self.classes.len() as u64
    }

    pub fn directory_bits(&self) -> u64 {
        self.class_bits()
            + (self.super_rank.len() + self.super_ptr.len()) as u64 * 64
            + (self.samples1.len() + self.samples0.len()) as u64 * 32
    }

    pub fn to_bools(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.len);
        let mut ptr = 0;
        for b in 0..self.block_count() {
            let blen = self.block_len(b);
            let block = self.decode_at(b, ptr);
            ptr += offset_width(blen, self.class(b));
            out.extend((0..blen).map(|i| (block >> i) & 1 == 1));
        }
        out
    }

    pub(crate) fn class_stream(&self) -> &RawBits {
        &self.classes
    }

    pub(crate) fn offset_stream(&self) -> &RawBits {
        &self.offsets
    }
}

impl BitRankSelect for CompressedBitSeq {
    fn len(&self) -> usize {
        self.len
    }

    fn count_ones(&self) -> usize {
        self.ones
    }

    fn get(&self, pos: usize) -> Result<bool> {
        if pos == 0 || pos > self.len {
            return Err(Error::range(format!(
                "bit position {pos} outside [1, {}]",
                self.len
            )));
        }
        Ok(self.bit(pos - 1))
    }

    fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        check_rank_arg(i, self.len)?;
        let ones = self.rank1(i);
        Ok(if bit { ones } else { i - ones })
    }

    fn select(&self, bit: bool, k: usize) -> Result<usize> {
        check_select_arg(k, self.count(bit), bit)?;
        Ok(self.select_impl(k, bit) + 1)
    }

    fn size_report(&self) -> SizeReport {
        SizeReport::new(self.offset_bits(), self.directory_bits())
    }
}

/// Upper bound on the offset payload: `⌈lg C(n, m)⌉` plus one rounding bit per block.
pub fn offset_bound(n: usize, m: usize) -> u64 {
    super::ceil_log2_binomial(n as u64, m as u64) + n.div_ceil(BLOCK_LEN) as u64
}
