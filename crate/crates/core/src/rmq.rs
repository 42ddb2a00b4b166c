//! Range-minimum indices on LRM-trees.
//!
//! All indices return the position of the leftmost minimum of `A[i..=j]`
//! (1-based, ties broken by position).
//!
//! - [`PlainRmqIndex`] keeps only the parentheses of the LRM-tree: `rmq(i, j)` is
//!   `i` when `i` is an ancestor of `j`, and otherwise the child of `lca(i, j)` on
//!   the path to `j`. No access to `A`.
//! - [`StrictRunsRmqIndex`] marks the strict-run heads in a compressed bit string
//!   `B` and indexes the array of heads `A′` with a plain index. No access to `A`.
//! - [`RunsRmqIndex`] does the same with (non-strict) runs and resolves the one
//!   remaining candidate with a single comparison on `A`.

use serde::Serialize;

use crate::bitseq::{offset_bound, BitRankSelect, CompressedBitSeq};
use crate::bp_forest::BpForest;
use crate::lrm::{build_lrm_tree, ranked_less, run_heads, Counter, LrmTree};
use crate::{Error, Result};

fn check_query(i: usize, j: usize, n: usize) -> Result<()> {
    if i == 0 || i > j || j > n {
        return Err(Error::range(format!(
            "query range [{i}, {j}] not within 1 <= i <= j <= {n}"
        )));
    }
    Ok(())
}

fn check_nonempty(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::contract("cannot index an empty array"));
    }
    Ok(())
}

/// Itemized size of an RMQ index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RmqSize {
    pub n: usize,
    /// Number of heads indexed by the inner tree (`n` for the plain index).
    pub heads: usize,
    /// `2·(heads + 1)` parentheses of the LRM-tree.
    pub tree_paren_bits: u64,
    pub tree_aux_bits: u64,
    /// Offsets of the compressed head bit string (0 for the plain index).
    pub head_payload_bits: u64,
    /// Classes and directories of the head bit string.
    pub head_directory_bits: u64,
    /// `tree_paren_bits + head_payload_bits`.
    pub payload_bits: u64,
    pub total_bits: u64,
}

/// Non-systematic index storing the LRM-tree parentheses only.
#[derive(Debug, Clone)]
pub struct PlainRmqIndex {
    bp: BpForest,
    n: usize,
}

impl PlainRmqIndex {
    /// Builds the index and returns it with the data comparisons spent.
    pub fn build(values: &[i64]) -> Result<(Self, u64)> {
        check_nonempty(values.len())?;
        let (tree, cmp) = build_lrm_tree(values);
        Ok((Self::from_tree(&tree), cmp))
    }

    pub fn from_tree(tree: &LrmTree) -> Self {
        PlainRmqIndex {
            bp: tree.bp().clone(),
            n: tree.len(),
        }
    }

    pub(crate) fn from_bp(bp: BpForest) -> Result<Self> {
        if bp.node_count() < 2 || bp.is_wrapped() {
            return Err(Error::structure("RMQ tree must be a single tree with n >= 1"));
        }
        let n = bp.node_count() - 1;
        Ok(PlainRmqIndex { bp, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bp(&self) -> &BpForest {
        &self.bp
    }

    /// Leftmost minimum of `A[i..=j]`.
    pub fn query(&self, i: usize, j: usize) -> Result<usize> {
        check_query(i, j, self.n)?;
        Ok(self.query_unchecked(i, j))
    }

    fn query_unchecked(&self, i: usize, j: usize) -> usize {
        if i == j {
            return i;
        }
        let l = self
            .bp
            .lca(i, j)
            .expect("valid nodes")
            .expect("single tree");
        if l == i {
            i
        } else {
            self.bp.child_toward(l, j).expect("lca is a proper ancestor")
        }
    }

    /// Previous smaller value of `i` (0 = artificial minimum).
    pub fn psv(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(Error::range(format!("psv position {i} outside [1, {}]", self.n)));
        }
        Ok(self.bp.parent(i)?.expect("position has a parent"))
    }

    pub fn size(&self) -> RmqSize {
        let paren = 2 * (self.n as u64 + 1);
        let aux = self.bp.aux_bits();
        RmqSize {
            n: self.n,
            heads: self.n,
            tree_paren_bits: paren,
            tree_aux_bits: aux,
            head_payload_bits: 0,
            head_directory_bits: 0,
            payload_bits: paren,
            total_bits: paren + aux,
        }
    }
}

/// Head bits plus a plain index over the head values; shared by both run indices.
#[derive(Debug, Clone)]
struct HeadsIndex {
    heads: CompressedBitSeq,
    head_index: PlainRmqIndex,
}

impl HeadsIndex {
    fn build(values: &[i64], strict: bool) -> Result<(Self, u64)> {
        check_nonempty(values.len())?;
        let bits = run_heads(values, strict);
        let head_values: Vec<i64> = bits
            .iter()
            .zip(values)
            .filter(|(&b, _)| b)
            .map(|(_, &v)| v)
            .collect();
        let (head_index, cmp) = PlainRmqIndex::build(&head_values)?;
        Ok((
            HeadsIndex {
                heads: CompressedBitSeq::new(&bits),
                head_index,
            },
            cmp,
        ))
    }

    fn from_parts(heads: CompressedBitSeq, head_index: PlainRmqIndex) -> Result<Self> {
        if heads.count_ones() != head_index.len() {
            return Err(Error::structure(format!(
                "{} run heads but the head index covers {}",
                heads.count_ones(),
                head_index.len()
            )));
        }
        if heads.is_empty() || !heads.bit(0) {
            return Err(Error::structure("position 1 must start a run"));
        }
        Ok(HeadsIndex { heads, head_index })
    }

    fn size(&self) -> RmqSize {
        let inner = self.head_index.size();
        let rep = self.heads.size_report();
        let payload = inner.tree_paren_bits + rep.payload_bits;
        RmqSize {
            n: self.heads.len(),
            heads: inner.n,
            tree_paren_bits: inner.tree_paren_bits,
            tree_aux_bits: inner.tree_aux_bits,
            head_payload_bits: rep.payload_bits,
            head_directory_bits: rep.directory_bits,
            payload_bits: payload,
            total_bits: payload + inner.tree_aux_bits + rep.directory_bits,
        }
    }

    /// Published payload ceiling `2ρ + ⌈lg C(n, ρ)⌉ + overhead`, where the overhead
    /// is one rounding bit per 15-bit block plus the two parentheses of the root.
    fn payload_bound(&self) -> u64 {
        let rho = self.heads.count_ones();
        2 * rho as u64 + offset_bound(self.heads.len(), rho) + 2
    }
}

/// Non-systematic index over strict-run heads.
#[derive(Debug, Clone)]
pub struct StrictRunsRmqIndex {
    inner: HeadsIndex,
}

impl StrictRunsRmqIndex {
    pub fn build(values: &[i64]) -> Result<(Self, u64)> {
        let (inner, cmp) = HeadsIndex::build(values, true)?;
        Ok((StrictRunsRmqIndex { inner }, cmp))
    }

    pub(crate) fn from_parts(heads: CompressedBitSeq, head_index: PlainRmqIndex) -> Result<Self> {
        Ok(StrictRunsRmqIndex {
            inner: HeadsIndex::from_parts(heads, head_index)?,
        })
    }

    pub fn len(&self) -> usize {
        self.inner.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of strict runs `ρ′`.
    pub fn runs(&self) -> usize {
        self.inner.heads.count_ones()
    }

    pub fn heads(&self) -> &CompressedBitSeq {
        &self.inner.heads
    }

    pub fn head_index(&self) -> &PlainRmqIndex {
        &self.inner.head_index
    }

    /// Leftmost minimum of `A[i..=j]`, without reading `A`.
    pub fn query(&self, i: usize, j: usize) -> Result<usize> {
        check_query(i, j, self.len())?;
        let b = &self.inner.heads;
        let x = b.rank1(i);
        let y = b.rank1(j);
        let m_head = self.inner.head_index.query_unchecked(x, y);
        let m = b.select1(m_head) + 1;
        Ok(if m < i { i } else { m })
    }

    pub fn size(&self) -> RmqSize {
        self.inner.size()
    }

    pub fn payload_bound(&self) -> u64 {
        self.inner.payload_bound()
    }
}

/// Systematic index over run heads; each query reads `A` at most once.
#[derive(Debug, Clone)]
pub struct RunsRmqIndex {
    inner: HeadsIndex,
}

impl RunsRmqIndex {
    pub fn build(values: &[i64]) -> Result<(Self, u64)> {
        let (inner, cmp) = HeadsIndex::build(values, false)?;
        Ok((RunsRmqIndex { inner }, cmp))
    }

    pub(crate) fn from_parts(heads: CompressedBitSeq, head_index: PlainRmqIndex) -> Result<Self> {
        Ok(RunsRmqIndex {
            inner: HeadsIndex::from_parts(heads, head_index)?,
        })
    }

    pub fn len(&self) -> usize {
        self.inner.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of runs `ρ`.
    pub fn runs(&self) -> usize {
        self.inner.heads.count_ones()
    }

    pub fn heads(&self) -> &CompressedBitSeq {
        &self.inner.heads
    }

    pub fn head_index(&self) -> &PlainRmqIndex {
        &self.inner.head_index
    }

    /// Leftmost minimum of `A[i..=j]`; `values` must be the array the index was
    /// built on. Every comparison of two values is added to `counter`.
    pub fn query(&self, values: &[i64], i: usize, j: usize, counter: &mut Counter) -> Result<usize> {
        if values.len() != self.len() {
            return Err(Error::structure(format!(
                "index built for n = {}, got an array of length {}",
                self.len(),
                values.len()
            )));
        }
        check_query(i, j, self.len())?;
        let b = &self.inner.heads;
        let x = b.rank1(i);
        let y = b.rank1(j);
        if x == y {
            return Ok(i);
        }
        let m_head = self.inner.head_index.query_unchecked(x + 1, y);
        let m = b.select1(m_head) + 1;
        counter.tick();
        Ok(if ranked_less(values, i, m) { i } else { m })
    }

    pub fn size(&self) -> RmqSize {
        self.inner.size()
    }

    pub fn payload_bound(&self) -> u64 {
        self.inner.payload_bound()
    }
}

/// Tree-entropy accounting of an LRM-tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeEntropy {
    /// `lg( multinomial(N; n_0, n_1, …) / N )` with `N` the node count.
    pub bits: f64,
    /// `N = n + 1`: the artificial root is counted as a node.
    pub node_count: usize,
    /// `n_k` = number of nodes with `k` children.
    pub degree_histogram: Vec<usize>,
    /// Runs `ρ` of the array (= `n_0` for `n >= 1`).
    pub runs: usize,
    /// `2ρ·lg n`.
    pub bound_bits: f64,
}

fn log2_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).log2()).sum()
}

/// Tree entropy of the LRM-tree and the `2ρ·lg n` ceiling it is checked against.
pub fn tree_entropy_bits(tree: &LrmTree) -> TreeEntropy {
    let hist = tree.degree_histogram();
    let node_count = tree.len() + 1;
    let bits = log2_factorial(node_count)
        - hist.iter().map(|&c| log2_factorial(c)).sum::<f64>()
        - (node_count as f64).log2();
    let runs = tree.leaf_count();
    let n = tree.len();
    let bound_bits = if n == 0 {
        0.0
    } else {
        2.0 * runs as f64 * (n as f64).log2()
    };
    TreeEntropy {
        bits,
        node_count,
        degree_histogram: hist,
        runs,
        bound_bits,
    }
}
