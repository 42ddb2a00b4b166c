//! Partition entropy, LRM-partitions and entropy-adaptive merge sort.
//!
//! A partition covers `A[1..n]` by ascending subsequences. Merging its parts along a
//! Huffman tree over the part lengths costs at most `n(1 + H)` comparisons, where
//! `H = Σ (nᵢ/n)·lg(n/nᵢ)` is the entropy of the length vector.
//!
//! The LRM-partition peels the deepest root-to-leaf path off the LRM-tree and
//! recurses on the subtrees left hanging, so it never compares data. Its entropy is
//! never larger than the entropy of the run partition.

use std::collections::VecDeque;

use serde::Serialize;

use crate::lrm::{psv_parents, ranked_less, ranks, run_heads, Counter, LrmTree};
use crate::{Error, Result};

/// Entropy `H = Σ (nᵢ/n)·lg(n/nᵢ)` of a vector of positive lengths.
pub fn entropy(lengths: &[usize]) -> Result<f64> {
    if lengths.is_empty() {
        return Err(Error::contract("entropy of an empty length vector"));
    }
    if let Some(k) = lengths.iter().position(|&l| l == 0) {
        return Err(Error::contract(format!("length {} is zero", k + 1)));
    }
    let n = lengths.iter().sum::<usize>() as f64;
    Ok(lengths
        .iter()
        .map(|&l| {
            let l = l as f64;
            l / n * (n / l).log2()
        })
        .sum())
}

/// How a partition was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionKind {
    Runs,
    StrictRuns,
    Lrm,
}

/// A cover of positions `1..=n` by ascending subsequences, ordered by first position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
    kind: PartitionKind,
    ops: u64,
}

impl Partition {
    /// Wraps explicit parts; see [`Partition::validate`] for the checks against `A`.
    pub fn new(mut parts: Vec<Vec<usize>>, kind: PartitionKind) -> Self {
        parts.sort_by_key(|p| p.first().copied().unwrap_or(usize::MAX));
        Partition { parts, kind, ops: 0 }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `vPartition`: the part lengths.
    pub fn lengths(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Entropy of the lengths; 0 for the empty partition.
    pub fn entropy(&self) -> f64 {
        if self.parts.is_empty() {
            0.0
        } else {
            entropy(&self.lengths()).expect("parts are nonempty")
        }
    }

    /// Index operations spent extracting the partition.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Checks that the parts cover `1..=n` exactly once and ascend in `A`.
    pub fn validate(&self, values: &[i64]) -> Result<()> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for (k, part) in self.parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::structure(format!("part {} is empty", k + 1)));
            }
            for (idx, &p) in part.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(Error::structure(format!(
                        "part {} holds position {p} outside [1, {n}]",
                        k + 1
                    )));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::structure(format!("position {p} appears twice")));
                }
                if idx > 0 {
                    let q = part[idx - 1];
                    if q >= p || !ranked_less(values, q, p) {
                        return Err(Error::structure(format!(
                            "part {} does not ascend at positions {q}, {p}",
                            k + 1
                        )));
                    }
                }
            }
        }
        if let Some(p) = seen.iter().skip(1).position(|&s| !s) {
            return Err(Error::structure(format!("position {} is not covered", p + 1)));
        }
        Ok(())
    }
}

/// Partition into maximal runs (`strict` = runs of consecutive values).
pub fn run_partition(values: &[i64], strict: bool) -> Partition {
    let heads = run_heads(values, strict);
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (i, &h) in heads.iter().enumerate() {
        if h {
            parts.push(Vec::new());
        }
        parts.last_mut().expect("position 1 is a head").push(i + 1);
    }
    let kind = if strict {
        PartitionKind::StrictRuns
    } else {
        PartitionKind::Runs
    };
    Partition {
        parts,
        kind,
        ops: values.len() as u64,
    }
}

/// LRM-partition of the tree: deepest root-to-leaf paths, leftmost first on ties.
/// No data comparisons are made.
pub fn lrm_partition(tree: &LrmTree) -> Partition {
    partition_of_parents(tree.parents())
}

/// LRM-partition from the parent array alone.
fn partition_of_parents(parents: &[usize]) -> Partition {
    let n = parents.len() - 1;
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut ops = 0u64;
    // each node continues its part into the tallest child, the leftmost one on ties;
    // this is the path of the leftmost deepest node below it
    let mut height = vec![0usize; n + 1];
    let mut next = vec![0usize; n + 1];
    for v in (1..=n).rev() {
        let u = parents[v];
        if height[v] + 1 >= height[u] {
            height[u] = height[v] + 1;
            next[u] = v;
        }
        ops += 1;
    }
    for v in 1..=n {
        if parents[v] != 0 && next[parents[v]] == v {
            continue;
        }
        let mut path = vec![v];
        let mut w = v;
        while next[w] != 0 {
            w = next[w];
            path.push(w);
        }
        ops += path.len() as u64;
        parts.push(path);
    }
    Partition {
        parts,
        kind: PartitionKind::Lrm,
        ops,
    }
}

/// Node of a [`MergeTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeNode {
    /// Leaf holding part `k` (0-based).
    Leaf(usize),
    Internal { left: usize, right: usize },
}

/// Binary merge schedule with one leaf per part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeTree {
    nodes: Vec<MergeNode>,
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    leaf_of_part: Vec<usize>,
    /// Children before parents.
    merge_order: Vec<usize>,
    build_ops: u64,
}

impl MergeTree {
    /// Checks that `nodes` form a binary tree under `root` with leaves for parts
    /// `0..parts` exactly once.
    pub fn from_nodes(nodes: Vec<MergeNode>, root: usize) -> Result<Self> {
        let bad = |m: &str| Error::structure(format!("merge tree: {m}"));
        if root >= nodes.len() {
            return Err(bad("root out of range"));
        }
        let parts = nodes
            .iter()
            .filter(|n| matches!(n, MergeNode::Leaf(_)))
            .count();
        let mut parent = vec![None; nodes.len()];
        let mut depth = vec![0usize; nodes.len()];
        let mut leaf_of_part = vec![usize::MAX; parts];
        let mut visited = vec![false; nodes.len()];
        let mut preorder = Vec::with_capacity(nodes.len());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut visited[v], true) {
                return Err(bad("node reached twice"));
            }
            preorder.push(v);
            match nodes[v] {
                MergeNode::Leaf(k) => {
                    if k >= parts || leaf_of_part[k] != usize::MAX {
                        return Err(bad("leaf part ids are not a permutation"));
                    }
                    leaf_of_part[k] = v;
                }
                MergeNode::Internal { left, right } => {
                    for c in [right, left] {
                        if c >= nodes.len() {
                            return Err(bad("child out of range"));
                        }
                        parent[c] = Some(v);
                        depth[c] = depth[v] + 1;
                        stack.push(c);
                    }
                }
            }
        }
        if preorder.len() != nodes.len() {
            return Err(bad("unreachable nodes"));
        }
        let merge_order = preorder
            .iter()
            .rev()
            .copied()
            .filter(|&v| matches!(nodes[v], MergeNode::Internal { .. }))
            .collect();
        Ok(MergeTree {
            nodes,
            root,
            parent,
            depth,
            leaf_of_part,
            merge_order,
            build_ops: 0,
        })
    }

    pub fn nodes(&self) -> &[MergeNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Number of parts (leaves).
    pub fn parts(&self) -> usize {
        self.leaf_of_part.len()
    }

    pub fn leaf_of_part(&self, k: usize) -> usize {
        self.leaf_of_part[k]
    }

    /// Internal nodes with children before parents.
    pub fn merge_order(&self) -> &[usize] {
        &self.merge_order
    }

    /// Code length of every part.
    pub fn depths(&self) -> Vec<usize> {
        self.leaf_of_part.iter().map(|&v| self.depth[v]).collect()
    }

    pub fn max_leaf_depth(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// `Σ nᵢ·depthᵢ` for part lengths `nᵢ`.
    pub fn weighted_path_length(&self, lengths: &[usize]) -> u64 {
        self.depths()
            .iter()
            .zip(lengths)
            .map(|(&d, &l)| (d * l) as u64)
            .sum()
    }

    /// Heap operations spent building the plan.
    pub fn build_ops(&self) -> u64 {
        self.build_ops
    }

    /// Shape in preorder (`true` = internal) and the part ids of the leaves in preorder.
    pub fn to_preorder(&self) -> (Vec<bool>, Vec<usize>) {
        let mut shape = Vec::with_capacity(self.nodes.len());
        let mut leaves = Vec::with_capacity(self.parts());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            match self.nodes[v] {
                MergeNode::Leaf(k) => {
                    shape.push(false);
                    leaves.push(k);
                }
                MergeNode::Internal { left, right } => {
                    shape.push(true);
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        (shape, leaves)
    }

    /// Inverse of [`MergeTree::to_preorder`]; node ids become preorder ranks.
    pub fn from_preorder(shape: &[bool], leaves: &[usize]) -> Result<Self> {
        let bad = || Error::structure("merge tree preorder is malformed");
        let mut nodes = Vec::with_capacity(shape.len());
        let mut leaf_iter = leaves.iter();
        // internal nodes waiting for a child; `true` once the left child is set
        let mut open: Vec<(usize, bool)> = Vec::new();
        for (v, &internal) in shape.iter().enumerate() {
            if v > 0 {
                let (p, has_left) = open.last_mut().ok_or_else(bad)?;
                match &mut nodes[*p] {
                    MergeNode::Internal { left, right } => {
                        if *has_left {
                            *right = v;
                            open.pop();
                        } else {
                            *left = v;
                            *has_left = true;
                        }
                    }
                    MergeNode::Leaf(_) => return Err(bad()),
                }
            }
            if internal {
                nodes.push(MergeNode::Internal { left: 0, right: 0 });
                open.push((v, false));
            } else {
                nodes.push(MergeNode::Leaf(*leaf_iter.next().ok_or_else(bad)?));
            }
        }
        if nodes.is_empty() || !open.is_empty() || leaf_iter.next().is_some() {
            return Err(bad());
        }
        MergeTree::from_nodes(nodes, 0)
    }
}

/// Removes the lighter front, ties going to the earlier id.
fn pop_lightest(
    leaves: &mut VecDeque<(usize, usize)>,
    merged: &mut VecDeque<(usize, usize)>,
) -> (usize, usize) {
    match (leaves.front(), merged.front()) {
        (Some(a), Some(b)) if b < a => merged.pop_front(),
        (Some(_), _) => leaves.pop_front(),
        _ => merged.pop_front(),
    }
    .expect("two nodes")
}

/// Huffman tree over the lengths. The two lightest nodes are merged first, ties
/// going to the node created earlier; the first one popped becomes the left child.
pub fn huffman_merge_plan(lengths: &[usize]) -> Result<MergeTree> {
    if lengths.is_empty() {
        return Err(Error::contract("merge plan over no parts"));
    }
    let mut nodes: Vec<MergeNode> = (0..lengths.len()).map(MergeNode::Leaf).collect();
    // two-queue Huffman: sorted leaves, and internal nodes whose weights arrive in order
    let mut leaves: VecDeque<(usize, usize)> = lengths.iter().copied().zip(0..).collect();
    leaves.make_contiguous().sort_unstable();
    let mut merged: VecDeque<(usize, usize)> = VecDeque::with_capacity(lengths.len());
    let mut ops = lengths.len() as u64;
    for _ in 1..lengths.len() {
        let (wl, left) = pop_lightest(&mut leaves, &mut merged);
        let (wr, right) = pop_lightest(&mut leaves, &mut merged);
        merged.push_back((wl + wr, nodes.len()));
        nodes.push(MergeNode::Internal { left, right });
        ops += 3;
    }
    let root = nodes.len() - 1;
    let mut tree = MergeTree::from_nodes(nodes, root)?;
    tree.build_ops = ops;
    Ok(tree)
}

/// Result of merging along a plan.
#[derive(Debug, Clone)]
pub struct MergeOutcome {
    /// Positions in ascending order of `(A[i], i)`.
    pub order: Vec<usize>,
    /// For every internal node id, the origin of each merged element (`false` = left);
    /// empty unless requested.
    pub node_bits: Vec<Vec<bool>>,
    /// Index operations (elements moved).
    pub ops: u64,
}

/// Merges the parts bottom-up along the plan, charging every data comparison.
pub(crate) fn merge_parts(
    values: &[i64],
    parts: &[Vec<usize>],
    plan: &MergeTree,
    counter: &mut Counter,
    record_bits: bool,
) -> MergeOutcome {
    // lay the parts out in left-to-right leaf order so every subtree is a contiguous range
    let mut span = vec![(0usize, 0usize, 0usize); plan.nodes.len()];
    let mut buf = Vec::with_capacity(values.len());
    let mut stack = vec![(plan.root, false)];
    while let Some((v, done)) = stack.pop() {
        match plan.nodes[v] {
            MergeNode::Leaf(k) => {
                let start = buf.len();
                buf.extend(parts[k].iter().map(|&i| (values[i - 1], i)));
                span[v] = (start, buf.len(), buf.len());
            }
            MergeNode::Internal { left, right } if done => {
                span[v] = (span[left].0, span[left].2, span[right].2);
            }
            MergeNode::Internal { left, right } => {
                stack.extend([(v, true), (right, false), (left, false)]);
            }
        }
    }
    let mut node_bits: Vec<Vec<bool>> = if record_bits {
        vec![Vec::new(); plan.nodes.len()]
    } else {
        Vec::new()
    };
    let mut scratch = Vec::with_capacity(values.len());
    let mut ops = 0u64;
    for &v in &plan.merge_order {
        let (start, mid, end) = span[v];
        let (a, b) = buf[start..end].split_at(mid - start);
        scratch.clear();
        let mut bits = Vec::with_capacity(if record_bits { end - start } else { 0 });
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            counter.tick();
            // (value, position) order, as in `ranked_less`
            let right = b[y] < a[x];
            if right {
                scratch.push(b[y]);
                y += 1;
            } else {
                scratch.push(a[x]);
                x += 1;
            }
            if record_bits {
                bits.push(right);
            }
        }
        scratch.extend_from_slice(&a[x..]);
        scratch.extend_from_slice(&b[y..]);
        if record_bits {
            bits.extend(std::iter::repeat_n(false, a.len() - x));
            bits.extend(std::iter::repeat_n(true, b.len() - y));
            node_bits[v] = bits;
        }
        buf[start..end].copy_from_slice(&scratch);
        ops += (end - start) as u64;
    }
    MergeOutcome {
        order: buf.into_iter().map(|(_, i)| i).collect(),
        node_bits,
        ops,
    }
}

/// Sorts `A` by merging the parts of a valid partition along `plan`.
pub fn merge_sort_partition(
    values: &[i64],
    partition: &Partition,
    plan: &MergeTree,
    counter: &mut Counter,
) -> Result<Vec<i64>> {
    partition.validate(values)?;
    if plan.parts() != partition.len() {
        return Err(Error::structure(format!(
            "merge plan has {} leaves for {} parts",
            plan.parts(),
            partition.len()
        )));
    }
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let outcome = merge_parts(values, partition.parts(), plan, counter, false);
    Ok(outcome.order.iter().map(|&p| values[p - 1]).collect())
}

/// Disorder measures of an array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureReport {
    pub n: usize,
    /// Runs `ρ`.
    pub rho: usize,
    /// Strict runs `ρ′`.
    pub rho_strict: usize,
    /// Minimum number of ascending subsequences covering `A`.
    pub n_sus: usize,
    pub h_runs: f64,
    pub h_lrm: f64,
}

/// Counters and measures of one sort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SortStats {
    pub n: usize,
    pub rho: usize,
    pub rho_strict: usize,
    pub n_sus: usize,
    pub h_runs: f64,
    pub h_lrm: f64,
    /// Comparisons spent finding the partition.
    pub cmp_build: u64,
    /// Comparisons spent merging.
    pub cmp_merge: u64,
    pub cmp_total: u64,
    pub internal_ops: u64,
    pub max_leaf_depth: usize,
    /// Weighted path length of the merge plan.
    pub merge_cost_bound: u64,
}

/// Length of the longest strictly descending subsequence of the ranks, which equals
/// the least number of ascending subsequences covering the array.
fn n_sus(ranks: &[usize]) -> usize {
    let mut tails: Vec<usize> = Vec::new();
    // longest ascending subsequence of the reversed ranks
    for &r in ranks.iter().rev() {
        let k = tails.partition_point(|&t| t < r);
        if k == tails.len() {
            tails.push(r);
        } else {
            tails[k] = r;
        }
    }
    tails.len()
}

/// Measures from the ranks of `(A[i], i)`.
fn measures_of(values: &[i64], lrm: &Partition, ranks: &[usize]) -> MeasureReport {
    let mut run_len: Vec<usize> = Vec::new();
    for h in run_heads(values, false) {
        if h {
            run_len.push(0);
        }
        *run_len.last_mut().expect("first position heads a run") += 1;
    }
    MeasureReport {
        n: values.len(),
        rho: run_len.len(),
        rho_strict: usize::from(!ranks.is_empty())
            + ranks.windows(2).filter(|w| w[1] != w[0] + 1).count(),
        n_sus: n_sus(ranks),
        h_runs: entropy(&run_len).unwrap_or(0.0),
        h_lrm: lrm.entropy(),
    }
}

/// Disorder measures `ρ`, `ρ′`, nSUS, `H(vRuns)` and `H(vLRM)`.
pub fn measures(values: &[i64]) -> Result<MeasureReport> {
    if values.is_empty() {
        return Err(Error::contract("measures of an empty array"));
    }
    let (parents, _) = psv_parents(values);
    Ok(measures_of(values, &partition_of_parents(&parents), &ranks(values)))
}

fn sort_with(
    values: &[i64],
    partition: &Partition,
    lrm: &Partition,
    cmp_build: u64,
) -> (Vec<i64>, SortStats) {
    let n = values.len();
    let mut stats = SortStats {
        n,
        rho: 0,
        rho_strict: 0,
        n_sus: 0,
        h_runs: 0.0,
        h_lrm: 0.0,
        cmp_build,
        cmp_merge: 0,
        cmp_total: cmp_build,
        internal_ops: partition.ops(),
        max_leaf_depth: 0,
        merge_cost_bound: 0,
    };
    if values.is_empty() {
        return (Vec::new(), stats);
    }
    let lengths = partition.lengths();
    let plan = huffman_merge_plan(&lengths).expect("n >= 1");
    let mut counter = Counter::new();
    let outcome = merge_parts(values, partition.parts(), &plan, &mut counter, false);
    stats.cmp_merge = counter.get();
    stats.cmp_total = cmp_build + stats.cmp_merge;
    stats.internal_ops += plan.build_ops() + outcome.ops;
    stats.max_leaf_depth = plan.max_leaf_depth();
    stats.merge_cost_bound = plan.weighted_path_length(&lengths);
    // the merged order already ranks every position
    let mut r = vec![0usize; n];
    for (k, &p) in outcome.order.iter().enumerate() {
        r[p - 1] = k + 1;
    }
    let m = measures_of(values, lrm, &r);
    stats.rho = m.rho;
    stats.rho_strict = m.rho_strict;
    stats.n_sus = m.n_sus;
    stats.h_runs = m.h_runs;
    stats.h_lrm = m.h_lrm;
    let sorted = outcome.order.iter().map(|&p| values[p - 1]).collect();
    (sorted, stats)
}

/// LRM-sort: LRM-tree, LRM-partition, Huffman merge. At most `n(3 + H(vLRM))`
/// comparisons.
pub fn sort_lrm(values: &[i64]) -> (Vec<i64>, SortStats) {
    let (parents, cmp_build) = psv_parents(values);
    let lrm = partition_of_parents(&parents);
    sort_with(values, &lrm, &lrm, cmp_build)
}

/// Natural merge sort over the run partition (`n − 1` comparisons to find the runs).
pub fn sort_runs_baseline(values: &[i64]) -> (Vec<i64>, SortStats) {
    let runs = run_partition(values, false);
    let (parents, _) = psv_parents(values);
    let lrm = partition_of_parents(&parents);
    sort_with(values, &runs, &lrm, values.len().saturating_sub(1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrm::build_lrm_tree;

    const PI: [i64; 9] = [4, 5, 9, 6, 8, 1, 3, 7, 2];

    #[test]
    fn entropy_examples() {
        assert!((entropy(&[4, 1, 3, 1]).unwrap() - 1.7527).abs() < 1e-4);
        assert_eq!(entropy(&[7]).unwrap(), 0.0);
        assert!((entropy(&[1, 1]).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(entropy(&[]), Err(Error::Contract(_))));
        assert!(matches!(entropy(&[2, 0]), Err(Error::Contract(_))));
    }

    #[test]
    fn lrm_partition_examples() {
        let (t, _) = build_lrm_tree(&PI);
        let p = lrm_partition(&t);
        assert_eq!(p.parts(), &[vec![1, 2, 4, 5], vec![3], vec![6, 7, 8], vec![9]]);
        assert_eq!(p.lengths(), vec![4, 1, 3, 1]);
        p.validate(&PI).unwrap();

        let (t, _) = build_lrm_tree(&[1, 2, 3, 4]);
        assert_eq!(lrm_partition(&t).parts(), &[vec![1, 2, 3, 4]]);
        let (t, _) = build_lrm_tree(&[4, 3, 2, 1]);
        assert_eq!(lrm_partition(&t).parts(), &[vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn huffman_examples() {
        let t = huffman_merge_plan(&[4, 1, 3, 1]).unwrap();
        assert_eq!(t.depths(), vec![1, 3, 2, 3]);
        assert_eq!(t.weighted_path_length(&[4, 1, 3, 1]), 16);
        assert_eq!(huffman_merge_plan(&[1]).unwrap().depths(), vec![0]);
        assert_eq!(huffman_merge_plan(&[1, 1, 1, 1]).unwrap().depths(), vec![2; 4]);
        assert!(matches!(huffman_merge_plan(&[]), Err(Error::Contract(_))));

        let (shape, leaves) = t.to_preorder();
        let back = MergeTree::from_preorder(&shape, &leaves).unwrap();
        assert_eq!(back.depths(), t.depths());
        assert_eq!(back.to_preorder(), (shape, leaves));
    }

    #[test]
    fn merge_examples() {
        let (t, _) = build_lrm_tree(&PI);
        let p = lrm_partition(&t);
        let plan = huffman_merge_plan(&p.lengths()).unwrap();
        let mut c = Counter::new();
        let sorted = merge_sort_partition(&PI, &p, &plan, &mut c).unwrap();
        assert_eq!(sorted, (1..=9).collect::<Vec<i64>>());
        assert!(c.get() <= 16);

        let bad = Partition::new(vec![vec![1, 3], vec![2]], PartitionKind::Runs);
        let plan = huffman_merge_plan(&[2, 1]).unwrap();
        assert!(matches!(
            merge_sort_partition(&[1, 3, 0], &bad, &plan, &mut c),
            Err(Error::Structure(_))
        ));

        // two parts of lengths 3 and 2 merge in at most 4 comparisons
        let two = Partition::new(vec![vec![1, 2, 3], vec![4, 5]], PartitionKind::Runs);
        let plan = huffman_merge_plan(&two.lengths()).unwrap();
        let mut c = Counter::new();
        merge_sort_partition(&[1, 3, 5, 2, 4], &two, &plan, &mut c).unwrap();
        assert!(c.get() <= 4);
    }

    #[test]
    fn sort_examples() {
        let (sorted, s) = sort_lrm(&PI);
        assert_eq!(sorted, (1..=9).collect::<Vec<i64>>());
        assert!(s.cmp_total <= 42);
        assert_eq!(s.cmp_total, s.cmp_build + s.cmp_merge);
        assert_eq!(s.merge_cost_bound, 16);

        let asc: Vec<i64> = (1..=1000).collect();
        let (_, s) = sort_lrm(&asc);
        assert_eq!(s.cmp_build, 1000);
        assert_eq!(s.cmp_merge, 0);

        let (out, s) = sort_lrm(&[]);
        assert!(out.is_empty());
        assert_eq!(s.cmp_total, 0);

        let (runs_sorted, s) = sort_runs_baseline(&PI);
        assert_eq!(runs_sorted, sorted);
        assert_eq!(run_partition(&PI, false).lengths(), vec![3, 2, 3, 1]);
        assert_eq!(s.rho, 4);
        let (_, s) = sort_runs_baseline(&asc);
        assert_eq!(s.cmp_merge, 0);

        let dup = [3, 1, 3, 1, 2];
        assert_eq!(sort_lrm(&dup).0, vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn measure_examples() {
        let m = measures(&[2, 3, 4, 1, 5, 6, 7, 8]).unwrap();
        assert_eq!((m.rho, m.rho_strict), (2, 3));
        let m = measures(&PI).unwrap();
        assert_eq!((m.rho, m.n_sus), (4, 4));
        assert!((m.h_runs - 1.891).abs() < 1e-3);
        assert!((m.h_lrm - 1.7527).abs() < 1e-4);
        let m = measures(&[1, 2, 3]).unwrap();
        assert_eq!((m.rho, m.rho_strict, m.n_sus), (1, 1, 1));
        assert_eq!((m.h_runs, m.h_lrm), (0.0, 0.0));
        assert!(matches!(measures(&[]), Err(Error::Contract(_))));
    }
}
