//! Left-to-right-minima trees.
//!
//! For `A[1..n]` with the artificial minimum `A[0] = −∞`, node `i` of the tree has
//! parent `psv(i) = max{ j < i : A[j] < A[i] }`. Children are ordered by position,
//! so the preorder of the tree is `0, 1, …, n` and node ids coincide with positions.
//!
//! Equal values are ranked by position (an earlier occurrence is smaller), so every
//! comparison here is on the pair `(A[i], i)` and every array behaves like a
//! permutation.

use std::cmp::Ordering;
use std::str::FromStr;

use crate::bp_forest::BpForest;
use crate::{Error, Result};

/// Counts data comparisons of one operation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counter {
    count: u64,
}

impl Counter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn tick(&mut self) {
        self.count += 1;
    }

    pub fn add(&mut self, n: u64) {
        self.count += n;
    }

    pub fn get(&self) -> u64 {
        self.count
    }
}

/// `(A[i], i) < (A[j], j)`, 1-based positions.
#[inline]
pub fn ranked_less(values: &[i64], i: usize, j: usize) -> bool {
    (values[i - 1], i) < (values[j - 1], j)
}

/// Integer input array `A[1..n]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InputArray {
    values: Vec<i64>,
}

impl InputArray {
    pub fn new(values: Vec<i64>) -> Self {
        InputArray { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ranks `1..=n` of the values, ties broken by position.
    pub fn ranks(&self) -> Vec<usize> {
        ranks(&self.values)
    }

    pub fn to_text(&self) -> String {
        let mut s = self
            .values
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        s.push('\n');
        s
    }
}

impl FromStr for InputArray {
    type Err = Error;

    /// Whitespace-separated signed decimal integers.
    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (ln, line) in s.lines().enumerate() {
            let mut col = 0;
            for token in line.split_whitespace() {
                // column of the token start, 1-based, in characters
                let offset = line[col..].find(token).expect("token in line") + col;
                col = offset + token.len();
                let v = token.parse::<i64>().map_err(|e| Error::Parse {
                    line: ln + 1,
                    column: line[..offset].chars().count() + 1,
                    message: format!("{token:?}: {e}"),
                })?;
                values.push(v);
            }
        }
        Ok(InputArray { values })
    }
}

impl From<Vec<i64>> for InputArray {
    fn from(values: Vec<i64>) -> Self {
        InputArray::new(values)
    }
}

/// Ranks `1..=n` of `values`, ties broken by position.
pub fn ranks(values: &[i64]) -> Vec<usize> {
    let mut order: Vec<(i64, usize)> = values.iter().copied().zip(0..).collect();
    order.sort_unstable();
    let mut r = vec![0; values.len()];
    for (rank, &(_, i)) in order.iter().enumerate() {
        r[i] = rank + 1;
    }
    r
}

/// The LRM-tree of an array.
#[derive(Debug, Clone)]
pub struct LrmTree {
    /// `parents[i] = psv(i)` for `i >= 1`; `parents[0]` is unused (0).
    parents: Vec<usize>,
    bp: BpForest,
    depths: Vec<u32>,
    leaves: usize,
}

/// Builds the LRM-tree with the rightmost-branch stack scan.
///
/// Returns the tree and the number of data comparisons charged: one for every node
/// popped off the rightmost branch and one for every insertion (the comparison
/// that stops the climb, against `A[0] = −∞` when the branch is exhausted). The
/// total never exceeds `2n`.
pub fn build_lrm_tree(values: &[i64]) -> (LrmTree, u64) {
    let (parents, cmp) = psv_parents(values);
    let mut depths = vec![0u32; parents.len()];
    for i in 1..parents.len() {
        depths[i] = depths[parents[i]] + 1;
    }
    (LrmTree::from_psv(parents, depths), cmp)
}

/// Parent array of the LRM-tree (`parents[i] = psv(i)`, `parents[0] = 0`) and the
/// comparisons spent, without building the parentheses.
pub fn psv_parents(values: &[i64]) -> (Vec<usize>, u64) {
    let n = values.len();
    let mut counter = Counter::new();
    let mut parents = vec![0usize; n + 1];
    // rightmost branch, node 0 at the bottom
    let mut branch: Vec<usize> = Vec::with_capacity(64);
    branch.push(0);
    for i in 1..=n {
        loop {
            let top = *branch.last().expect("root stays on the branch");
            counter.tick();
            if top == 0 || ranked_less(values, top, i) {
                break;
            }
            branch.pop();
        }
        parents[i] = *branch.last().expect("root stays on the branch");
        branch.push(i);
    }
    (parents, counter.get())
}

impl LrmTree {
    fn from_psv(parents: Vec<usize>, depths: Vec<u32>) -> Self {
        let n = parents.len() - 1;
        let mut has_child = vec![false; n + 1];
        for &p in &parents[1..] {
            has_child[p] = true;
        }
        let leaves = has_child.iter().filter(|&&c| !c).count();
        let as_options: Vec<Option<usize>> = std::iter::once(None)
            .chain(parents[1..].iter().map(|&p| Some(p)))
            .collect();
        let bp = BpForest::from_parents(&as_options).expect("psv array is a preorder tree");
        LrmTree {
            parents,
            bp,
            depths,
            leaves,
        }
    }

    /// Rebuilds a tree from its parentheses (node 0 = root, `n + 1` nodes).
    pub fn from_bp(bp: BpForest) -> Result<Self> {
        if bp.node_count() == 0 || bp.is_wrapped() {
            return Err(Error::structure("an LRM-tree has exactly one root"));
        }
        let ps = bp.to_parents();
        let mut parents = vec![0usize; ps.len()];
        let mut depths = vec![0u32; ps.len()];
        for (i, p) in ps.iter().enumerate().skip(1) {
            let p = p.ok_or_else(|| Error::structure("an LRM-tree has exactly one root"))?;
            parents[i] = p;
            depths[i] = depths[p] + 1;
        }
        let mut tree = LrmTree::from_psv(parents, depths);
        tree.bp = bp;
        Ok(tree)
    }

    /// Array length `n` (the tree has `n + 1` nodes).
    pub fn len(&self) -> usize {
        self.parents.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Previous smaller value of position `i`, `1 <= i <= n`; 0 is the artificial minimum.
    pub fn psv(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::range(format!(
                "psv position {i} outside [1, {}]",
                self.len()
            )));
        }
        Ok(self.parents[i])
    }

    /// `psv` for all nodes; entry 0 is unused.
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn bp(&self) -> &BpForest {
        &self.bp
    }

    /// Depth of every node listed in preorder (which is position order).
    pub fn depths_preorder(&self) -> &[u32] {
        &self.depths
    }

    /// Number of leaves, equal to the number of runs of the array.
    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    /// Out-degree histogram: entry `k` counts the nodes with `k` children.
    pub fn degree_histogram(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.parents.len()];
        for &p in &self.parents[1..] {
            deg[p] += 1;
        }
        let max = deg.iter().copied().max().unwrap_or(0);
        let mut hist = vec![0usize; max + 1];
        for d in deg {
            hist[d] += 1;
        }
        hist
    }
}

/// Run-head bits: bit `i` is set iff position `i` starts a run.
///
/// A run continues while `(A[i-1], i-1) < (A[i], i)`; a strict run additionally
/// requires consecutive ranks.
pub fn run_heads(values: &[i64], strict: bool) -> Vec<bool> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let mut heads = vec![false; n];
    heads[0] = true;
    if strict {
        let r = ranks(values);
        for i in 1..n {
            heads[i] = r[i] != r[i - 1] + 1;
        }
    } else {
        for i in 1..n {
            heads[i] = values[i - 1].cmp(&values[i]) == Ordering::Greater;
        }
    }
    heads
}

/// Number of runs (or strict runs).
pub fn run_count(values: &[i64], strict: bool) -> usize {
    run_heads(values, strict).iter().filter(|&&b| b).count()
}
