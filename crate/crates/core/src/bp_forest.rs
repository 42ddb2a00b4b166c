//! Balanced-parentheses forests.
//!
//! A forest of `N` nodes is written as `2N` parentheses in preorder, `(` = 1 and
//! `)` = 0. Node ids are preorder ranks starting at 0. A forest with more than one
//! root is stored inside a virtual super-root pair so that every navigation
//! operation works on a single tree; the wrapper never shows up in node ids or in
//! the serialized form.
//!
//! Navigation is driven by the prefix excess `E(t)` = opens − closes among the
//! first `t` parentheses. The excess is indexed by a min/max tree over blocks of
//! [`EXCESS_BLOCK`] parentheses, so forward/backward excess searches and range
//! minima cost `O(EXCESS_BLOCK + lg N)`. Leaves (`"()"`) and internal nodes
//! (`"(("`) are ranked and selected through rank directories over the pattern
//! occurrences, computed on the fly from the parenthesis words.

use std::fmt;

use crate::bitseq::{PlainBitSeq, RankDirectory, SizeReport};
use crate::{Error, Result};

/// Parentheses per excess block.
pub const EXCESS_BLOCK: usize = 256;
/// Bits per node of the excess tree (min, max, count of leaves at the minimum).
pub const EXCESS_NODE_BITS: u64 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Summary {
    min: i32,
    max: i32,
    /// Positions `t` with `E(t) == min` where a leaf `"()"` starts.
    leaves_at_min: u32,
}

const EMPTY: Summary = Summary {
    min: i32::MAX,
    max: i32::MIN,
    leaves_at_min: 0,
};

impl Summary {
    fn point(e: i32, leaf: bool) -> Self {
        Summary {
            min: e,
            max: e,
            leaves_at_min: leaf as u32,
        }
    }

    fn combine(self, other: Summary) -> Summary {
        let min = self.min.min(other.min);
        let mut leaves_at_min = 0;
        if self.min == min {
            leaves_at_min += self.leaves_at_min;
        }
        if other.min == min {
            leaves_at_min += other.leaves_at_min;
        }
        Summary {
            min,
            max: self.max.max(other.max),
            leaves_at_min,
        }
    }

    fn contains(&self, target: i32) -> bool {
        self.min <= target && target <= self.max
    }
}

/// Min/max tree over excess blocks; heap layout with leaves at `size + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ExcessTree {
    nblocks: usize,
    size: usize,
    nodes: Vec<Summary>,
}

impl ExcessTree {
    fn build(block_summaries: Vec<Summary>) -> Self {
        let nblocks = block_summaries.len();
        let size = nblocks.next_power_of_two().max(1);
        let mut nodes = vec![EMPTY; 2 * size];
        nodes[size..size + nblocks].copy_from_slice(&block_summaries);
        for i in (1..size).rev() {
            nodes[i] = nodes[2 * i].combine(nodes[2 * i + 1]);
        }
        ExcessTree {
            nblocks,
            size,
            nodes,
        }
    }

    /// Leftmost block `>= from` whose excess range contains `target`.
    fn first_block(&self, from: usize, target: i32) -> Option<usize> {
        if from >= self.nblocks {
            return None;
        }
        self.first_rec(1, 0, self.size, from, target)
    }

    fn first_rec(&self, node: usize, nl: usize, nr: usize, from: usize, target: i32) -> Option<usize> {
        if nr <= from || !self.nodes[node].contains(target) {
            return None;
        }
        if nr - nl == 1 {
            return Some(nl);
        }
        let mid = (nl + nr) / 2;
        self.first_rec(2 * node, nl, mid, from, target)
            .or_else(|| self.first_rec(2 * node + 1, mid, nr, from, target))
    }

    /// Rightmost block `<= upto` whose excess range contains `target`.
    fn last_block(&self, upto: usize, target: i32) -> Option<usize> {
        self.last_rec(1, 0, self.size, upto, target)
    }

    fn last_rec(&self, node: usize, nl: usize, nr: usize, upto: usize, target: i32) -> Option<usize> {
        if nl > upto || !self.nodes[node].contains(target) {
            return None;
        }
        if nr - nl == 1 {
            return Some(nl);
        }
        let mid = (nl + nr) / 2;
        self.last_rec(2 * node + 1, mid, nr, upto, target)
            .or_else(|| self.last_rec(2 * node, nl, mid, upto, target))
    }

    /// Summary over blocks `[lo, hi]`.
    fn range(&self, lo: usize, hi: usize) -> Summary {
        let (mut l, mut r) = (lo + self.size, hi + self.size + 1);
        let (mut left, mut right) = (EMPTY, EMPTY);
        while l < r {
            if l & 1 == 1 {
                left = left.combine(self.nodes[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                right = self.nodes[r].combine(right);
            }
            l /= 2;
            r /= 2;
        }
        left.combine(right)
    }

    /// Finds the block in `[lo, hi]` holding the `k`-th leaf at excess `min`,
    /// where `min` is the minimum over that range. Returns the block and the
    /// remaining rank inside it; otherwise subtracts the blocks' count from `k`.
    fn select_at_min(&self, lo: usize, hi: usize, min: i32, k: &mut u32) -> Option<usize> {
        self.select_rec(1, 0, self.size, lo, hi, min, k)
    }

    #[allow(clippy::too_many_arguments)]
    fn select_rec(
        &self,
        node: usize,
        nl: usize,
        nr: usize,
        lo: usize,
        hi: usize,
        min: i32,
        k: &mut u32,
    ) -> Option<usize> {
        if nr <= lo || nl > hi || self.nodes[node].min > min {
            return None;
        }
        let inside = lo <= nl && nr - 1 <= hi;
        if inside && self.nodes[node].leaves_at_min < *k {
            *k -= self.nodes[node].leaves_at_min;
            return None;
        }
        if nr - nl == 1 {
            return Some(nl);
        }
        let mid = (nl + nr) / 2;
        self.select_rec(2 * node, nl, mid, lo, hi, min, k)
            .or_else(|| self.select_rec(2 * node + 1, mid, nr, lo, hi, min, k))
    }

    fn bits(&self) -> u64 {
        self.nodes.len() as u64 * EXCESS_NODE_BITS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pattern {
    /// `"()"`
    Leaf,
    /// `"(("`
    Internal,
}

/// Word `i` of the occurrence bitmap of a two-parenthesis pattern.
#[inline]
fn pattern_word(words: &[u64], i: usize, pattern: Pattern) -> u64 {
    let w = words[i];
    let next = (w >> 1) | words.get(i + 1).map_or(0, |&n| n << 63);
    match pattern {
        Pattern::Leaf => w & !next,
        Pattern::Internal => w & next,
    }
}

/// A balanced-parentheses ordered forest.
#[derive(Clone, PartialEq, Eq)]
pub struct BpForest {
    /// Parentheses including the wrapper pair when `wrapped`.
    parens: PlainBitSeq,
    wrapped: bool,
    nodes: usize,
    excess: ExcessTree,
    leaf_dir: RankDirectory,
    internal_dir: RankDirectory,
}

impl fmt::Debug for BpForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BpForest")
            .field("parens", &self.to_paren_string())
            .field("wrapped", &self.wrapped)
            .finish()
    }
}

impl BpForest {
    /// Builds the forest whose node `v` has parent `parents[v]` (`None` for roots).
    ///
    /// Node ids must already be a preorder: every parent precedes its children and
    /// a node's parent lies on the path from the previous node to its root.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        let mut bits = Vec::with_capacity(2 * parents.len());
        let mut stack: Vec<usize> = Vec::new();
        for (v, &p) in parents.iter().enumerate() {
            match p {
                Some(p) if p >= v => {
                    return Err(Error::structure(format!(
                        "node {v} has parent {p}, which does not precede it"
                    )))
                }
                Some(p) => {
                    while stack.last().is_some_and(|&top| top != p) {
                        stack.pop();
                        bits.push(false);
                    }
                    if stack.is_empty() {
                        return Err(Error::structure(format!(
                            "node {v}: parent {p} is closed already, ids are not a preorder"
                        )));
                    }
                }
                None => {
                    while stack.pop().is_some() {
                        bits.push(false);
                    }
                }
            }
            stack.push(v);
            bits.push(true);
        }
        bits.extend(std::iter::repeat_n(false, stack.len()));
        Self::from_bits(&bits)
    }

    /// Builds from a literal `"(()())"` string.
    pub fn from_paren_string(s: &str) -> Result<Self> {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '(' => Ok(true),
                ')' => Ok(false),
                other => Err(Error::structure(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }

    /// Builds from parentheses (`true` = open), without wrapper.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut excess = 0i64;
        let mut roots = 0usize;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                if excess == 0 {
                    roots += 1;
                }
                excess += 1;
            } else {
                excess -= 1;
                if excess < 0 {
                    return Err(Error::structure(format!(
                        "unbalanced parentheses: excess negative at position {}",
                        i + 1
                    )));
                }
            }
        }
        if excess != 0 {
            return Err(Error::structure(format!(
                "unbalanced parentheses: {excess} unclosed"
            )));
        }
        let wrapped = roots > 1;
        let parens = if wrapped {
            PlainBitSeq::from_iter_bits(
                std::iter::once(true)
                    .chain(bits.iter().copied())
                    .chain(std::iter::once(false)),
            )
        } else {
            PlainBitSeq::new(bits)
        };
        Ok(Self::index(parens, wrapped, bits.len() / 2))
    }

    fn index(parens: PlainBitSeq, wrapped: bool, nodes: usize) -> Self {
        let len = parens.raw().len();
        let mut summaries = Vec::with_capacity((len + 1).div_ceil(EXCESS_BLOCK));
        let mut cur = EMPTY;
        let mut e = 0i32;
        for t in 0..=len {
            let leaf = t + 1 < len && parens.bit(t) && !parens.bit(t + 1);
            cur = cur.combine(Summary::point(e, leaf));
            if t < len {
                e += if parens.bit(t) { 1 } else { -1 };
            }
            if (t + 1) % EXCESS_BLOCK == 0 || t == len {
                summaries.push(cur);
                cur = EMPTY;
            }
        }
        let words = parens.raw().words();
        let leaf_dir = RankDirectory::build(len, |i| pattern_word(words, i, Pattern::Leaf));
        let internal_dir =
            RankDirectory::build(len, |i| pattern_word(words, i, Pattern::Internal));
        BpForest {
            excess: ExcessTree::build(summaries),
            parens,
            wrapped,
            nodes,
            leaf_dir,
            internal_dir,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_dir.ones()
    }

    pub fn internal_count(&self) -> usize {
        self.internal_dir.ones() - self.wrapped as usize
    }

    pub fn is_wrapped(&self) -> bool {
        self.wrapped
    }

    /// Parentheses without the wrapper, `true` = open.
    pub fn bits(&self) -> Vec<bool> {
        let all = self.parens.to_bools();
        if self.wrapped {
            all[1..all.len() - 1].to_vec()
        } else {
            all
        }
    }

    /// Literal parenthesis form, without the wrapper.
    pub fn to_paren_string(&self) -> String {
        self.bits()
            .into_iter()
            .map(|b| if b { '(' } else { ')' })
            .collect()
    }

    /// Parent array (`None` for roots), the inverse of [`BpForest::from_parents`].
    pub fn to_parents(&self) -> Vec<Option<usize>> {
        let mut parents = Vec::with_capacity(self.nodes);
        let mut stack = Vec::new();
        for b in self.bits() {
            if b {
                let v = parents.len();
                parents.push(stack.last().copied());
                stack.push(v);
            } else {
                stack.pop();
            }
        }
        parents
    }

    // ---- positions and excess -------------------------------------------------

    fn plen(&self) -> usize {
        self.parens.raw().len()
    }

    #[inline]
    fn w(&self) -> usize {
        self.wrapped as usize
    }

    /// `E(t)`, the excess of the first `t` parentheses.
    #[inline]
    fn excess_at(&self, t: usize) -> i32 {
        (2 * self.parens.rank1(t)) as i32 - t as i32
    }

    #[inline]
    fn step(&self, t: usize) -> i32 {
        if self.parens.bit(t) {
            1
        } else {
            -1
        }
    }

    #[inline]
    fn leaf_start(&self, t: usize) -> bool {
        t + 1 < self.plen() && self.parens.bit(t) && !self.parens.bit(t + 1)
    }

    fn block_end(&self, b: usize) -> usize {
        ((b + 1) * EXCESS_BLOCK).min(self.plen() + 1)
    }

    /// Smallest `t >= from` with `E(t) == target`.
    fn fwd_search(&self, from: usize, target: i32) -> Option<usize> {
        let len = self.plen();
        if from > len {
            return None;
        }
        let scan = |start: usize, end: usize| {
            let mut e = self.excess_at(start);
            for t in start..end {
                if e == target {
                    return Some(t);
                }
                if t < len {
                    e += self.step(t);
                }
            }
            None
        };
        let b0 = from / EXCESS_BLOCK;
        if let Some(t) = scan(from, self.block_end(b0)) {
            return Some(t);
        }
        let b = self.excess.first_block(b0 + 1, target)?;
        scan(b * EXCESS_BLOCK, self.block_end(b))
    }

    /// Largest `t <= from` with `E(t) == target`.
    fn bwd_search(&self, from: usize, target: i32) -> Option<usize> {
        let scan = |start: usize, end_incl: usize| {
            let mut e = self.excess_at(end_incl);
            let mut t = end_incl;
            loop {
                if e == target {
                    return Some(t);
                }
                if t == start {
                    return None;
                }
                t -= 1;
                e -= self.step(t);
            }
        };
        let b0 = from / EXCESS_BLOCK;
        if let Some(t) = scan(b0 * EXCESS_BLOCK, from) {
            return Some(t);
        }
        if b0 == 0 {
            return None;
        }
        let b = self.excess.last_block(b0 - 1, target)?;
        scan(b * EXCESS_BLOCK, self.block_end(b) - 1)
    }

    fn scan_summary(&self, lo: usize, hi: usize) -> Summary {
        let mut e = self.excess_at(lo);
        let mut s = EMPTY;
        for t in lo..=hi {
            s = s.combine(Summary::point(e, self.leaf_start(t)));
            if t < self.plen() {
                e += self.step(t);
            }
        }
        s
    }

    /// Minimum of `E(t)` over `t ∈ [lo, hi]` with the number of leaf starts there.
    fn range_min(&self, lo: usize, hi: usize) -> Summary {
        let (blo, bhi) = (lo / EXCESS_BLOCK, hi / EXCESS_BLOCK);
        if blo == bhi {
            return self.scan_summary(lo, hi);
        }
        let mut s = self.scan_summary(lo, self.block_end(blo) - 1);
        if blo + 1 < bhi {
            s = s.combine(self.excess.range(blo + 1, bhi - 1));
        }
        s.combine(self.scan_summary(bhi * EXCESS_BLOCK, hi))
    }

    /// The `k`-th `t ∈ [lo, hi]` (1-based) with `E(t) == min` where a leaf starts;
    /// `min` must be the minimum excess over the range.
    fn select_leaf_at_min(&self, lo: usize, hi: usize, min: i32, k: usize) -> Option<usize> {
        let mut k = k as u32;
        let scan = |start: usize, end_incl: usize, k: &mut u32| {
            let mut e = self.excess_at(start);
            for t in start..=end_incl {
                if e == min && self.leaf_start(t) {
                    *k -= 1;
                    if *k == 0 {
                        return Some(t);
                    }
                }
                if t < self.plen() {
                    e += self.step(t);
                }
            }
            None
        };
        let (blo, bhi) = (lo / EXCESS_BLOCK, hi / EXCESS_BLOCK);
        if blo == bhi {
            return scan(lo, hi, &mut k);
        }
        if let Some(t) = scan(lo, self.block_end(blo) - 1, &mut k) {
            return Some(t);
        }
        if blo + 1 < bhi {
            if let Some(b) = self.excess.select_at_min(blo + 1, bhi - 1, min, &mut k) {
                return scan(b * EXCESS_BLOCK, self.block_end(b) - 1, &mut k);
            }
        }
        scan(bhi * EXCESS_BLOCK, hi, &mut k)
    }

    // ---- node-level navigation --------------------------------------------------

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.nodes {
            return Err(Error::range(format!(
                "node {v} outside [0, {})",
                self.nodes
            )));
        }
        Ok(())
    }

    /// Position of node `v`'s opening parenthesis.
    #[inline]
    fn open(&self, v: usize) -> usize {
        self.parens.select1(v + 1 + self.w())
    }

    /// Node whose opening parenthesis is at `t`.
    #[inline]
    fn node_at(&self, t: usize) -> usize {
        self.parens.rank1(t) - self.w()
    }

    /// Position of the parenthesis closing the one opened at `t`.
    fn close(&self, t: usize) -> usize {
        self.fwd_search(t + 1, self.excess_at(t))
            .expect("balanced parentheses")
            - 1
    }

    /// Depth of `v`; roots have depth 0.
    pub fn depth(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.excess_at(self.open(v)) as usize - self.w())
    }

    pub fn is_leaf(&self, v: usize) -> Result<bool> {
        self.check_node(v)?;
        Ok(!self.parens.bit(self.open(v) + 1))
    }

    /// Parent of `v`, `None` for a root.
    pub fn parent(&self, v: usize) -> Result<Option<usize>> {
        self.check_node(v)?;
        let t = self.open(v);
        let d = self.excess_at(t);
        if d as usize == self.w() {
            return Ok(None);
        }
        let q = self.bwd_search(t - 1, d - 1).expect("enclosing parenthesis");
        Ok(Some(self.node_at(q)))
    }

    /// Last node (in preorder) of `v`'s subtree.
    pub fn subtree_last(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        let c = self.close(self.open(v));
        Ok(self.parens.rank1(c) - 1 - self.w())
    }

    /// Whether `a` is an ancestor of `v` or equal to it.
    pub fn is_ancestor(&self, a: usize, v: usize) -> Result<bool> {
        self.check_node(a)?;
        self.check_node(v)?;
        let (ta, tv) = (self.open(a), self.open(v));
        Ok(ta <= tv && tv <= self.close(ta))
    }

    /// Lowest common ancestor of `u` and `v`; `None` when they lie in different
    /// trees of the forest (their only common ancestor is the virtual super-root).
    pub fn lca(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Ok(Some(u));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let (ta, tb) = (self.open(a), self.open(b));
        if tb <= self.close(ta) {
            return Ok(Some(a));
        }
        // leftmost minimum of E over (ta, tb] is one level below the lca
        let m = self.range_min(ta + 1, tb).min;
        let q = self.bwd_search(ta, m - 1).expect("lca parenthesis");
        if self.wrapped && q == 0 {
            return Ok(None);
        }
        Ok(Some(self.node_at(q)))
    }

    /// The child of `a` on the path from `a` down to `v`.
    pub fn child_toward(&self, a: usize, v: usize) -> Result<usize> {
        if !self.is_ancestor(a, v)? || a == v {
            return Err(Error::contract(format!(
                "node {a} is not a proper ancestor of node {v}"
            )));
        }
        let target = self.excess_at(self.open(a)) + 1;
        let q = self
            .bwd_search(self.open(v), target)
            .expect("child parenthesis");
        Ok(self.node_at(q))
    }

    /// Number of leaves among nodes `0..=v`.
    pub fn leaf_rank(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        let words = self.parens.raw().words();
        Ok(self
            .leaf_dir
            .rank1(self.open(v) + 1, |i| pattern_word(words, i, Pattern::Leaf)))
    }

    /// The `k`-th leaf in preorder, `k >= 1`.
    pub fn leaf_select(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.leaf_count() {
            return Err(Error::range(format!(
                "leaf rank {k} outside [1, {}]",
                self.leaf_count()
            )));
        }
        let words = self.parens.raw().words();
        let t = self
            .leaf_dir
            .select(k, true, |i| pattern_word(words, i, Pattern::Leaf));
        Ok(self.node_at(t))
    }

    /// Number of internal nodes among nodes `0..=v`.
    pub fn internal_rank(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        let words = self.parens.raw().words();
        let r = self
            .internal_dir
            .rank1(self.open(v) + 1, |i| pattern_word(words, i, Pattern::Internal));
        Ok(r - self.w())
    }

    /// The `k`-th internal node in preorder, `k >= 1`.
    pub fn internal_select(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.internal_count() {
            return Err(Error::range(format!(
                "internal rank {k} outside [1, {}]",
                self.internal_count()
            )));
        }
        let words = self.parens.raw().words();
        let t = self
            .internal_dir
            .select(k + self.w(), true, |i| pattern_word(words, i, Pattern::Internal));
        Ok(self.node_at(t))
    }

    /// Number of left siblings of `v` that are leaves.
    pub fn leaf_children_left_of(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        let t = self.open(v);
        let d = self.excess_at(t);
        let start = if d == 0 {
            // unwrapped root: no siblings
            return Ok(0);
        } else {
            self.bwd_search(t - 1, d - 1).expect("enclosing parenthesis") + 1
        };
        if start == t {
            return Ok(0);
        }
        let s = self.range_min(start, t - 1);
        debug_assert_eq!(s.min, d);
        Ok(s.leaves_at_min as usize)
    }

    /// The `p`-th (1-based) child of `u` that is a leaf.
    pub fn leaf_child_select(&self, u: usize, p: usize) -> Result<usize> {
        self.check_node(u)?;
        let t = self.open(u);
        let c = self.close(t);
        if p == 0 || c == t + 1 {
            return Err(Error::range(format!("node {u} has no leaf child {p}")));
        }
        let min = self.excess_at(t) + 1;
        let s = self.range_min(t + 1, c - 1);
        if p > s.leaves_at_min as usize {
            return Err(Error::range(format!(
                "node {u} has {} leaf children, asked for #{p}",
                s.leaves_at_min
            )));
        }
        let q = self
            .select_leaf_at_min(t + 1, c - 1, min, p)
            .expect("leaf child exists");
        Ok(self.node_at(q))
    }

    /// Bits of the auxiliary indexes: paren rank directory, wrapper pair, excess
    /// tree and both pattern directories.
    pub fn aux_bits(&self) -> u64 {
        self.parens.directory_bits()
            + 2 * self.w() as u64
            + self.excess.bits()
            + self.leaf_dir.bits()
            + self.internal_dir.bits()
    }

    /// Published bound on [`BpForest::aux_bits`] for `len` parentheses: three
    /// rank directories at the plain directory bound, two wrapper bits, and an
    /// excess tree of at most `4·⌈(len+1)/EXCESS_BLOCK⌉` nodes.
    pub fn aux_bound(len: usize) -> f64 {
        let wrapped_len = len + 2;
        3.0 * PlainBitSeq::directory_bound(wrapped_len)
            + 2.0
            + (4 * (wrapped_len + 1).div_ceil(EXCESS_BLOCK)) as f64 * EXCESS_NODE_BITS as f64
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport::new(2 * self.nodes as u64, self.aux_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_FOREST: &str = "(()()(())()())(()()())(())";

    /// Ancestors of `v` from `v` up to its root.
    fn chain(parents: &[Option<usize>], mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(p) = parents[v] {
            out.push(p);
            v = p;
        }
        out
    }

    fn lca_oracle(parents: &[Option<usize>], u: usize, v: usize) -> Option<usize> {
        let cu = chain(parents, u);
        chain(parents, v).into_iter().find(|x| cu.contains(x))
    }

    fn lrm_example_parents() -> Vec<Option<usize>> {
        // PSV tree of (4,5,9,6,8,1,3,7,2) over nodes 0..=9
        vec![None, Some(0), Some(1), Some(2), Some(2), Some(4), Some(0), Some(6), Some(7), Some(6)]
    }

    #[test]
    fn small_shapes() {
        let f = BpForest::from_parents(&[None]).unwrap();
        assert_eq!(f.to_paren_string(), "()");
        let f = BpForest::from_parents(&[None, Some(0), Some(1)]).unwrap();
        assert_eq!(f.to_paren_string(), "((()))");
        let f = BpForest::from_parents(&[]).unwrap();
        assert_eq!(f.to_paren_string(), "");
        assert_eq!(f.node_count(), 0);
    }

    #[test]
    fn rejects_bad_parent_arrays() {
        assert!(matches!(
            BpForest::from_parents(&[None, Some(1)]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            BpForest::from_parents(&[None, Some(2), None]),
            Err(Error::Structure(_))
        ));
        // 3's parent 1 was closed when 2 (child of 0) opened
        assert!(matches!(
            BpForest::from_parents(&[None, Some(0), Some(0), Some(1)]),
            Err(Error::Structure(_))
        ));
        assert!(BpForest::from_paren_string("(()").is_err());
        assert!(BpForest::from_paren_string(")(").is_err());
    }

    #[test]
    fn lrm_example_navigation() {
        let parents = lrm_example_parents();
        let f = BpForest::from_parents(&parents).unwrap();
        assert!(!f.is_wrapped());
        assert_eq!(f.lca(3, 9).unwrap(), Some(0));
        assert_eq!(f.lca(1, 5).unwrap(), Some(1));
        assert_eq!(f.lca(7, 7).unwrap(), Some(7));
        assert_eq!(f.child_toward(0, 9).unwrap(), 6);
        assert_eq!(f.child_toward(2, 5).unwrap(), 4);
        assert_eq!(f.child_toward(4, 5).unwrap(), 5);
        assert!(matches!(f.child_toward(3, 5), Err(Error::Contract(_))));
        assert!(matches!(f.child_toward(5, 5), Err(Error::Contract(_))));
        assert!(matches!(f.lca(0, 10), Err(Error::Range(_))));
        assert_eq!(f.to_parents(), parents);
        let depths: Vec<usize> = (0..10).map(|v| f.depth(v).unwrap()).collect();
        assert_eq!(depths, vec![0, 1, 2, 3, 3, 4, 1, 2, 3, 2]);
    }

    #[test]
    fn example_partition_forest() {
        let f = BpForest::from_paren_string(EXAMPLE_FOREST).unwrap();
        assert!(f.is_wrapped());
        assert_eq!(f.to_paren_string(), EXAMPLE_FOREST);
        assert_eq!(f.node_count(), 13);
        assert_eq!(f.leaf_count(), 9);
        assert_eq!(f.internal_count(), 4);
        // preorder: 0 = (4,5,6,8), 3 = (9), 7 = (1,3,7), 11 = (2); the rest are leaves
        let third_leaf = f.leaf_select(3).unwrap();
        let owner = f.parent(third_leaf).unwrap().unwrap();
        assert_eq!(f.internal_rank(owner).unwrap(), 2);
        let seventh = f.leaf_select(7).unwrap();
        let root = f.parent(seventh).unwrap().unwrap();
        assert_eq!(f.parent(root).unwrap(), None);
        assert_eq!(f.internal_rank(root).unwrap(), 3);
        assert_eq!(f.internal_select(1).unwrap(), 0);
        assert_eq!(f.leaf_children_left_of(f.leaf_select(5).unwrap()).unwrap(), 3);
        assert_eq!(f.leaf_child_select(0, 4).unwrap(), f.leaf_select(5).unwrap());
        assert!(f.leaf_child_select(0, 5).is_err());
        // roots live in different trees
        assert_eq!(f.lca(1, seventh).unwrap(), None);
        let size = f.size_report();
        assert_eq!(size.payload_bits, 26);
    }

    /// Every ordered forest with `n` nodes, as parent arrays in preorder.
    fn all_forests(n: usize) -> Vec<Vec<Option<usize>>> {
        fn rec(n: usize, cur: &mut Vec<Option<usize>>, path: &mut Vec<usize>, out: &mut Vec<Vec<Option<usize>>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let v = cur.len();
            // attach v to any node on the rightmost path, or as a new root
            for depth in 0..=path.len() {
                let saved = path.clone();
                path.truncate(depth);
                cur.push(path.last().copied());
                path.push(v);
                rec(n, cur, path, out);
                cur.pop();
                *path = saved;
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }

    fn check_against_oracle(parents: &[Option<usize>]) {
        let f = BpForest::from_parents(parents).unwrap();
        let n = parents.len();
        assert_eq!(f.to_parents(), parents);
        let children = |u: usize| (0..n).filter(move |&c| parents[c] == Some(u));
        let is_leaf = |u: usize| !parents.contains(&Some(u));
        let mut leaf_seen = 0;
        let mut internal_seen = 0;
        for v in 0..n {
            assert_eq!(f.parent(v).unwrap(), parents[v]);
            assert_eq!(f.is_leaf(v).unwrap(), is_leaf(v));
            if is_leaf(v) {
                leaf_seen += 1;
                assert_eq!(f.leaf_select(leaf_seen).unwrap(), v);
            } else {
                internal_seen += 1;
                assert_eq!(f.internal_select(internal_seen).unwrap(), v);
            }
            assert_eq!(f.leaf_rank(v).unwrap(), leaf_seen);
            assert_eq!(f.internal_rank(v).unwrap(), internal_seen);
            let siblings: Vec<usize> = (0..v).filter(|&s| parents[s] == parents[v]).collect();
            let left_leaves = siblings.iter().filter(|&&s| is_leaf(s)).count();
            assert_eq!(f.leaf_children_left_of(v).unwrap(), left_leaves, "node {v}");
            let leaf_children: Vec<usize> = children(v).filter(|&c| is_leaf(c)).collect();
            for (p, &c) in leaf_children.iter().enumerate() {
                assert_eq!(f.leaf_child_select(v, p + 1).unwrap(), c);
            }
            assert!(f.leaf_child_select(v, leaf_children.len() + 1).is_err());
            let last = (v + 1..n).take_while(|&w| chain(parents, w).contains(&v)).last().unwrap_or(v);
            assert_eq!(f.subtree_last(v).unwrap(), last);
            for u in 0..n {
                assert_eq!(f.lca(u, v).unwrap(), lca_oracle(parents, u, v), "lca({u},{v})");
                let anc = chain(parents, v);
                if anc.contains(&u) && u != v {
                    let want = anc[anc.iter().position(|&x| x == u).unwrap() - 1];
                    assert_eq!(f.child_toward(u, v).unwrap(), want);
                } else {
                    assert!(f.child_toward(u, v).is_err());
                }
            }
        }
    }

    #[test]
    fn exhaustive_small_forests() {
        // all ordered forests up to 7 nodes here; the integration suite goes to 12
        for n in 1..=7 {
            for parents in all_forests(n) {
                check_against_oracle(&parents);
            }
        }
    }

    #[test]
    fn large_random_forest_spans_blocks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &n in &[300usize, 700, 1500] {
            let mut parents: Vec<Option<usize>> = Vec::with_capacity(n);
            let mut path: Vec<usize> = Vec::new();
            for v in 0..n {
                let keep = if path.is_empty() { 0 } else { rng.gen_range(0..=path.len()) };
                // bias towards deep trees so excess blocks matter
                let keep = if rng.gen_bool(0.7) { path.len() } else { keep };
                path.truncate(keep);
                parents.push(path.last().copied());
                path.push(v);
            }
            let f = BpForest::from_parents(&parents).unwrap();
            assert_eq!(f.to_parents(), parents);
            for _ in 0..400 {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                assert_eq!(f.lca(u, v).unwrap(), lca_oracle(&parents, u, v));
                assert_eq!(f.parent(v).unwrap(), parents[v]);
                let anc = chain(&parents, v);
                if anc.len() > 1 {
                    let i = rng.gen_range(1..anc.len());
                    assert_eq!(f.child_toward(anc[i], v).unwrap(), anc[i - 1]);
                }
                let siblings = (0..v).filter(|&s| parents[s] == parents[v]);
                let left = siblings.filter(|&s| !parents.contains(&Some(s))).count();
                assert_eq!(f.leaf_children_left_of(v).unwrap(), left);
            }
            assert!((f.aux_bits() as f64) <= BpForest::aux_bound(2 * n));
        }
    }
}
