//! Compressed permutations.
//!
//! A permutation `π` of `1..=n` is stored as
//!
//! - the *partition forest*: one internal node per part of the LRM-partition, ordered
//!   by first position, with the positions of each part as leaf children. Parts nest
//!   properly, so `2(n + ρ)` parentheses suffice, and position `i` maps to
//!   `(s, p)` = (part, offset inside the part) with leaf and internal rank/select.
//! - the *merge bits*: along a Huffman merge tree over the part lengths, every
//!   internal node stores, for each element of its merged output, whether it came
//!   from the left (0) or the right (1) child.
//!
//! Merging the ascending parts of a permutation yields `1, 2, …, n`, so the offset
//! reached at the root is the value itself. `π(i)` ascends from the leaf of part `s`
//! with select; `π⁻¹(v)` descends from the root with rank.
//!
//! Previous-smaller-value and range-minimum queries on `π` need the LRM-tree
//! parentheses, which are kept only when requested at encoding time.

use serde::Serialize;

use crate::bitseq::{bits_for, BitRankSelect, PlainBitSeq};
use crate::bp_forest::BpForest;
use crate::lrm::{build_lrm_tree, Counter};
use crate::partition_sort::{huffman_merge_plan, lrm_partition, merge_parts, MergeNode, MergeTree};
use crate::rmq::PlainRmqIndex;
use crate::{Error, Result};

/// Itemized size of a [`PermCode`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PermSize {
    pub n: usize,
    pub rho: usize,
    /// `2(n + ρ)`.
    pub forest_paren_bits: u64,
    pub forest_aux_bits: u64,
    /// Merge bits, equal to the weighted path length of the merge tree.
    pub merge_payload_bits: u64,
    pub merge_directory_bits: u64,
    /// Preorder shape, leaf part ids and one payload pointer per internal node.
    pub merge_shape_bits: u64,
    /// `2(n + 1)` when the LRM-tree is kept, else 0.
    pub lrm_paren_bits: u64,
    pub lrm_aux_bits: u64,
    pub total_bits: u64,
    pub h_lrm: f64,
    /// `n·(1 + H(vLRM))`, the ceiling on the merge payload.
    pub merge_payload_bound: f64,
}

/// A permutation stored as a partition forest plus merge bits.
#[derive(Debug, Clone)]
pub struct PermCode {
    n: usize,
    forest: BpForest,
    plan: MergeTree,
    part_len: Vec<usize>,
    /// Indexed by merge-tree node id; `None` for leaves.
    node_bits: Vec<Option<PlainBitSeq>>,
    lrm: Option<PlainRmqIndex>,
    comparisons: u64,
}

/// Checks that `values` is a permutation of `1..=n`.
pub fn check_permutation(values: &[i64]) -> Result<()> {
    let n = values.len();
    let mut seen = vec![0usize; n + 1];
    for (k, &v) in values.iter().enumerate() {
        let pos = k + 1;
        if v < 1 || v as u64 > n as u64 {
            return Err(Error::contract(format!(
                "not a permutation: value {v} at position {pos} outside [1, {n}]"
            )));
        }
        let slot = &mut seen[v as usize];
        if *slot != 0 {
            return Err(Error::contract(format!(
                "not a permutation: value {v} at position {pos} repeats position {}",
                *slot
            )));
        }
        *slot = pos;
    }
    Ok(())
}

/// Parentheses of the partition forest; parts must be ordered by first position.
fn forest_parens(n: usize, parts: &[Vec<usize>]) -> Result<Vec<bool>> {
    let mut part_of = vec![0usize; n + 1];
    for (k, part) in parts.iter().enumerate() {
        for &p in part {
            part_of[p] = k;
        }
    }
    let mut bits = Vec::with_capacity(2 * (n + parts.len()));
    let mut open: Vec<usize> = Vec::new();
    for p in 1..=n {
        let k = part_of[p];
        let part = &parts[k];
        if part[0] == p {
            bits.push(true);
            open.push(k);
        }
        if open.last() != Some(&k) {
            return Err(Error::structure(format!(
                "parts do not nest: position {p} falls inside another part"
            )));
        }
        bits.extend([true, false]);
        if *part.last().expect("nonempty part") == p {
            bits.push(false);
            open.pop();
        }
    }
    Ok(bits)
}

impl PermCode {
    /// Encodes `π`; `with_index` keeps the LRM-tree for PSV and RMQ queries.
    pub fn encode(values: &[i64], with_index: bool) -> Result<Self> {
        check_permutation(values)?;
        if values.is_empty() {
            return Err(Error::contract("cannot encode an empty permutation"));
        }
        let n = values.len();
        let (tree, build_cmp) = build_lrm_tree(values);
        let partition = lrm_partition(&tree);
        let forest = BpForest::from_bits(&forest_parens(n, partition.parts())?)?;
        let part_len = partition.lengths();
        let plan = huffman_merge_plan(&part_len)?;
        let mut counter = Counter::new();
        let outcome = merge_parts(values, partition.parts(), &plan, &mut counter, true);
        let node_bits = plan
            .nodes()
            .iter()
            .zip(outcome.node_bits)
            .map(|(node, bits)| match node {
                MergeNode::Leaf(_) => None,
                MergeNode::Internal { .. } => Some(PlainBitSeq::new(&bits)),
            })
            .collect();
        let lrm = with_index.then(|| PlainRmqIndex::from_tree(&tree));
        Ok(PermCode {
            n,
            forest,
            plan,
            part_len,
            node_bits,
            lrm,
            comparisons: build_cmp + counter.get(),
        })
    }

    /// Reassembles a code from stored parts, checking that they fit together.
    pub(crate) fn from_parts(
        forest: BpForest,
        plan: MergeTree,
        node_bits: Vec<Option<PlainBitSeq>>,
        lrm: Option<PlainRmqIndex>,
    ) -> Result<Self> {
        let n = forest.leaf_count();
        let rho = forest.internal_count();
        if n == 0 || forest.node_count() != n + rho {
            return Err(Error::structure("partition forest must have leaves and parts"));
        }
        // every leaf hangs from a part node, and parts have no part-free gaps
        let parents = forest.to_parents();
        let mut part_len = vec![0usize; rho];
        let mut internal_rank = vec![0usize; parents.len()];
        let mut next = 0;
        for v in 0..parents.len() {
            if !forest.is_leaf(v)? {
                internal_rank[v] = next;
                next += 1;
            } else {
                let u = parents[v].ok_or_else(|| Error::structure("leaf without a part"))?;
                part_len[internal_rank[u]] += 1;
            }
        }
        if part_len.contains(&0) {
            return Err(Error::structure("a part holds no position"));
        }
        if plan.parts() != rho || node_bits.len() != plan.nodes().len() {
            return Err(Error::structure("merge tree does not match the forest"));
        }
        // bottom-up sizes, then check the bit strings against them
        let mut size = vec![0usize; plan.nodes().len()];
        for (k, &l) in part_len.iter().enumerate() {
            size[plan.leaf_of_part(k)] = l;
        }
        for &v in plan.merge_order() {
            let MergeNode::Internal { left, right } = plan.nodes()[v] else {
                unreachable!("merge order holds internal nodes")
            };
            size[v] = size[left] + size[right];
            let ok = node_bits[v].as_ref().is_some_and(|b| {
                let len = b.len();
                len == size[v] && b.rank1(len) == size[right]
            });
            if !ok {
                return Err(Error::structure(format!("merge bits of node {v} are malformed")));
            }
        }
        if let Some(idx) = &lrm {
            if idx.len() != n {
                return Err(Error::structure("LRM-tree length differs from the permutation"));
            }
        }
        Ok(PermCode {
            n,
            forest,
            plan,
            part_len,
            node_bits,
            lrm,
            comparisons: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of parts `ρ`.
    pub fn runs(&self) -> usize {
        self.part_len.len()
    }

    pub fn forest(&self) -> &BpForest {
        &self.forest
    }

    pub fn plan(&self) -> &MergeTree {
        &self.plan
    }

    pub fn part_lengths(&self) -> &[usize] {
        &self.part_len
    }

    pub(crate) fn node_bits(&self) -> &[Option<PlainBitSeq>] {
        &self.node_bits
    }

    pub fn lrm_index(&self) -> Option<&PlainRmqIndex> {
        self.lrm.as_ref()
    }

    /// Data comparisons spent by [`PermCode::encode`] (0 for a loaded code).
    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    fn check_position(&self, i: usize, what: &str) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::range(format!("{what} {i} outside [1, {}]", self.n)));
        }
        Ok(())
    }

    /// Part `s` (1-based) holding position `i`, and the offset `p` of `i` inside it.
    pub fn map(&self, i: usize) -> Result<(usize, usize)> {
        self.check_position(i, "position")?;
        let leaf = self.forest.leaf_select(i)?;
        let u = self.forest.parent(leaf)?.expect("leaves hang from parts");
        let s = self.forest.internal_rank(u)?;
        let p = 1 + self.forest.leaf_children_left_of(leaf)?;
        Ok((s, p))
    }

    /// Position of the `p`-th element of part `s`.
    pub fn unmap(&self, s: usize, p: usize) -> Result<usize> {
        let u = self.forest.internal_select(s)?;
        let leaf = self.forest.leaf_child_select(u, p)?;
        self.forest.leaf_rank(leaf)
    }

    fn bits(&self, v: usize) -> &PlainBitSeq {
        self.node_bits[v].as_ref().expect("internal node")
    }

    /// `π(i)`.
    pub fn apply(&self, i: usize) -> Result<usize> {
        Ok(self.apply_traced(i)?.0)
    }

    /// `π(i)` and the number of merge-tree levels climbed.
    pub fn apply_traced(&self, i: usize) -> Result<(usize, usize)> {
        let (s, mut p) = self.map(i)?;
        let mut v = self.plan.leaf_of_part(s - 1);
        let mut levels = 0;
        while let Some(u) = self.plan.parent(v) {
            let from_right = matches!(self.plan.nodes()[u], MergeNode::Internal { right, .. } if right == v);
            let b = self.bits(u);
            p = if from_right { b.select1(p) } else { b.select0(p) } + 1;
            v = u;
            levels += 1;
        }
        Ok((p, levels))
    }

    /// `π⁻¹(v)`.
    pub fn inverse(&self, value: usize) -> Result<usize> {
        self.check_position(value, "value")?;
        let mut v = self.plan.root();
        let mut q = value;
        while let MergeNode::Internal { left, right } = self.plan.nodes()[v] {
            let b = self.bits(v);
            if b.bit(q - 1) {
                q = b.rank1(q);
                v = right;
            } else {
                q = b.rank0(q);
                v = left;
            }
        }
        let MergeNode::Leaf(k) = self.plan.nodes()[v] else {
            unreachable!("descent ends at a leaf")
        };
        self.unmap(k + 1, q)
    }

    fn index(&self) -> Result<&PlainRmqIndex> {
        self.lrm.as_ref().ok_or_else(|| {
            Error::Capability("PSV/RMQ queries need a code encoded with the LRM-tree index".into())
        })
    }

    /// Previous smaller value of position `i` (0 = none).
    pub fn psv_query(&self, i: usize) -> Result<usize> {
        self.index()?.psv(i)
    }

    /// Position of the minimum of `π[i..=j]`.
    pub fn rmq_query(&self, i: usize, j: usize) -> Result<usize> {
        self.index()?.query(i, j)
    }

    /// Merge-tree payload pointers and shape, as stored.
    fn shape_bits(&self) -> u64 {
        let rho = self.runs() as u64;
        let payload = self.merge_payload_bits();
        (2 * rho - 1) + rho * bits_for(rho) + (rho - 1) * bits_for(payload)
    }

    fn merge_payload_bits(&self) -> u64 {
        self.node_bits
            .iter()
            .flatten()
            .map(|b| b.len() as u64)
            .sum()
    }

    pub fn size_report(&self) -> PermSize {
        let rho = self.runs();
        let forest_paren_bits = 2 * (self.n + rho) as u64;
        let forest_aux_bits = self.forest.aux_bits();
        let merge_payload_bits = self.merge_payload_bits();
        let merge_directory_bits = self.node_bits.iter().flatten().map(|b| b.directory_bits()).sum();
        let merge_shape_bits = self.shape_bits();
        let (lrm_paren_bits, lrm_aux_bits) = self.lrm.as_ref().map_or((0, 0), |idx| {
            let s = idx.size();
            (s.tree_paren_bits, s.tree_aux_bits)
        });
        let h_lrm = crate::partition_sort::entropy(&self.part_len).expect("parts are nonempty");
        PermSize {
            n: self.n,
            rho,
            forest_paren_bits,
            forest_aux_bits,
            merge_payload_bits,
            merge_directory_bits,
            merge_shape_bits,
            lrm_paren_bits,
            lrm_aux_bits,
            total_bits: forest_paren_bits
                + forest_aux_bits
                + merge_payload_bits
                + merge_directory_bits
                + merge_shape_bits
                + lrm_paren_bits
                + lrm_aux_bits,
            h_lrm,
            merge_payload_bound: self.n as f64 * (1.0 + h_lrm),
        }
    }
}
