//! Forest navigation against a parent-array oracle.

use lrmkit::bp_forest::BpForest;
use lrmkit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain pointer representation of a forest, derived from its parentheses.
struct Oracle {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    last: Vec<usize>,
}

impl Oracle {
    fn new(bits: &[bool]) -> Self {
        let mut parent = Vec::new();
        let mut depth = Vec::new();
        let mut last = Vec::new();
        let mut open: Vec<usize> = Vec::new();
        for &b in bits {
            if b {
                let v = parent.len();
                parent.push(open.last().copied());
                depth.push(open.len());
                last.push(v);
                open.push(v);
            } else {
                let v = open.pop().unwrap();
                last[v] = parent.len() - 1;
            }
        }
        let mut children = vec![Vec::new(); parent.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        Oracle { parent, children, depth, last }
    }

    fn ancestors(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(p) = self.parent[v] {
            out.push(p);
            v = p;
        }
        out
    }

    fn lca(&self, u: usize, v: usize) -> Option<usize> {
        let au = self.ancestors(u);
        self.ancestors(v).into_iter().find(|a| au.contains(a))
    }

    fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    fn siblings(&self, v: usize) -> Vec<usize> {
        match self.parent[v] {
            Some(p) => self.children[p].clone(),
            None => (0..self.parent.len()).filter(|&u| self.parent[u].is_none()).collect(),
        }
    }
}

/// Per-node queries, all against the oracle.
fn check_nodes(f: &BpForest, o: &Oracle) {
    let n = o.parent.len();
    assert_eq!(f.node_count(), n);
    let leaves = (0..n).filter(|&v| o.is_leaf(v)).count();
    assert_eq!(f.leaf_count(), leaves);
    assert_eq!(f.internal_count(), n - leaves);
    let (mut lr, mut ir) = (0, 0);
    for v in 0..n {
        assert_eq!(f.parent(v).unwrap(), o.parent[v], "parent({v})");
        assert_eq!(f.depth(v).unwrap(), o.depth[v], "depth({v})");
        assert_eq!(f.subtree_last(v).unwrap(), o.last[v], "subtree_last({v})");
        assert_eq!(f.is_leaf(v).unwrap(), o.is_leaf(v), "is_leaf({v})");
        if o.is_leaf(v) {
            lr += 1;
            assert_eq!(f.leaf_select(lr).unwrap(), v);
        } else {
            ir += 1;
            assert_eq!(f.internal_select(ir).unwrap(), v);
        }
        assert_eq!(f.leaf_rank(v).unwrap(), lr, "leaf_rank({v})");
        assert_eq!(f.internal_rank(v).unwrap(), ir, "internal_rank({v})");

        let sib = o.siblings(v);
        let left_leaves = sib.iter().take_while(|&&u| u != v).filter(|&&u| o.is_leaf(u)).count();
        // siblings of unwrapped roots are not reported
        if o.parent[v].is_some() || f.is_wrapped() {
            assert_eq!(f.leaf_children_left_of(v).unwrap(), left_leaves, "leaf_children_left_of({v})");
        }
        let leaf_kids: Vec<usize> = o.children[v].iter().copied().filter(|&c| o.is_leaf(c)).collect();
        for (p, &c) in leaf_kids.iter().enumerate() {
            assert_eq!(f.leaf_child_select(v, p + 1).unwrap(), c);
        }
        assert!(matches!(f.leaf_child_select(v, leaf_kids.len() + 1), Err(Error::Range(_))));
        assert!(matches!(f.leaf_child_select(v, 0), Err(Error::Range(_))));

        // every proper ancestor routes back toward v
        let anc = o.ancestors(v);
        for w in anc.windows(2) {
            assert_eq!(f.child_toward(w[1], v).unwrap(), w[0], "child_toward({}, {v})", w[1]);
        }
        assert!(matches!(f.child_toward(v, v), Err(Error::Contract(_))));
    }
    assert!(matches!(f.parent(n), Err(Error::Range(_))));
    assert!(matches!(f.leaf_select(leaves + 1), Err(Error::Range(_))));
    assert!(matches!(f.internal_select(0), Err(Error::Range(_))));
    assert_eq!(f.to_parents(), o.parent);
}

fn check_pairs(f: &BpForest, o: &Oracle, pairs: impl IntoIterator<Item = (usize, usize)>) {
    for (u, v) in pairs {
        assert_eq!(f.lca(u, v).unwrap(), o.lca(u, v), "lca({u}, {v})");
        let anc = o.ancestors(v).contains(&u);
        assert_eq!(f.is_ancestor(u, v).unwrap(), anc, "is_ancestor({u}, {v})");
    }
}

/// Every balanced word with `n` pairs, as bit vectors.
fn dyck_words(n: usize) -> Vec<Vec<bool>> {
    fn go(open: usize, close: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if open == 0 && close == 0 {
            out.push(cur.clone());
            return;
        }
        if open > 0 {
            cur.push(true);
            go(open - 1, close + 1, cur, out);
            cur.pop();
        }
        if close > 0 {
            cur.push(false);
            go(open, close - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

#[test]
fn exhaustive_small_forests_all_pairs() {
    let catalan = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
    for n in 1..=9 {
        let words = dyck_words(n);
        assert_eq!(words.len(), catalan[n]);
        for bits in words {
            let f = BpForest::from_bits(&bits).unwrap();
            let o = Oracle::new(&bits);
            assert_eq!(f.bits(), bits);
            check_nodes(&f, &o);
            check_pairs(&f, &o, (0..n).flat_map(|u| (0..n).map(move |v| (u, v))));
        }
    }
}

#[test]
fn exhaustive_forests_up_to_twelve_nodes() {
    for n in 10..=12 {
        for bits in dyck_words(n) {
            let f = BpForest::from_bits(&bits).unwrap();
            let o = Oracle::new(&bits);
            check_nodes(&f, &o);
            check_pairs(&f, &o, (0..n).map(|u| (u, (u * 7 + 3) % n)));
        }
    }
}

/// Random forest as parentheses: mostly deep, with occasional long climbs.
fn random_forest(rng: &mut ChaCha8Rng, nodes: usize, p_close: f64) -> Vec<bool> {
    let mut bits = Vec::with_capacity(2 * nodes);
    let mut open = 0usize;
    let mut made = 0usize;
    while made < nodes {
        if open > 0 && rng.gen_bool(p_close) {
            bits.push(false);
            open -= 1;
        } else {
            bits.push(true);
            open += 1;
            made += 1;
        }
    }
    bits.extend(std::iter::repeat_n(false, open));
    bits
}

#[test]
fn large_random_forests_cross_many_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (nodes, p_close) in [(20_000, 0.5), (20_000, 0.3), (20_000, 0.6), (100_000, 0.48)] {
        let bits = random_forest(&mut rng, nodes, p_close);
        let f = BpForest::from_bits(&bits).unwrap();
        let o = Oracle::new(&bits);
        check_nodes_sampled(&f, &o, &mut rng);
        let pairs: Vec<(usize, usize)> = (0..2000)
            .map(|_| (rng.gen_range(0..nodes), rng.gen_range(0..nodes)))
            .collect();
        check_pairs(&f, &o, pairs);
    }
}

/// Like [`check_nodes`] but with cheap per-node checks only, for big trees.
fn check_nodes_sampled(f: &BpForest, o: &Oracle, rng: &mut ChaCha8Rng) {
    let n = o.parent.len();
    assert_eq!(f.to_parents(), o.parent);
    let mut lr = 0;
    for v in 0..n {
        lr += usize::from(o.is_leaf(v));
        assert_eq!(f.parent(v).unwrap(), o.parent[v]);
        assert_eq!(f.subtree_last(v).unwrap(), o.last[v]);
        assert_eq!(f.leaf_rank(v).unwrap(), lr);
    }
    for _ in 0..2000 {
        let v = rng.gen_range(0..n);
        assert_eq!(f.depth(v).unwrap(), o.depth[v]);
        if let Some(p) = o.parent[v] {
            let root = *o.ancestors(v).last().unwrap();
            if root != v {
                let below_root = o.ancestors(v)[o.ancestors(v).len() - 2];
                assert_eq!(f.child_toward(root, v).unwrap(), below_root);
            }
            assert_eq!(f.child_toward(p, v).unwrap(), v);
            let left = o.children[p].iter().take_while(|&&u| u != v).filter(|&&u| o.is_leaf(u)).count();
            assert_eq!(f.leaf_children_left_of(v).unwrap(), left);
        }
    }
}

#[test]
fn auxiliary_bits_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for nodes in [1, 2, 10, 127, 128, 129, 1000, 5000, 50_000, 200_000] {
        let bits = random_forest(&mut rng, nodes, 0.5);
        let f = BpForest::from_bits(&bits).unwrap();
        let bound = BpForest::aux_bound(bits.len());
        assert!(f.aux_bits() as f64 <= bound, "{nodes} nodes: {} > {bound}", f.aux_bits());
        let size = f.size_report();
        assert_eq!(size.payload_bits, 2 * nodes as u64);
        assert_eq!(size.directory_bits, f.aux_bits());
    }
}

#[test]
fn paren_strings_and_parent_arrays_round_trip() {
    let s = "(()()(())()())(()()())(())";
    let f = BpForest::from_paren_string(s).unwrap();
    assert_eq!(f.to_paren_string(), s);
    assert!(f.is_wrapped());
    assert_eq!(f.node_count(), 13);
    let g = BpForest::from_parents(&f.to_parents()).unwrap();
    assert_eq!(g.to_paren_string(), s);

    let single = BpForest::from_paren_string("(()(()))").unwrap();
    assert!(!single.is_wrapped());
    assert_eq!(single.lca(1, 3).unwrap(), Some(0));
    assert_eq!(f.lca(1, 9).unwrap(), None);
}

#[test]
fn malformed_parentheses_are_rejected() {
    for bad in [")(", "(()", "())(", "(x)", "((())"] {
        assert!(
            matches!(BpForest::from_paren_string(bad), Err(Error::Structure(_))),
            "{bad} accepted"
        );
    }
    assert!(matches!(BpForest::from_parents(&[None, Some(2), None]), Err(Error::Structure(_))));
    // node 3's parent 1 was closed when node 2 (a child of 0) opened
    assert!(matches!(
        BpForest::from_parents(&[None, Some(0), Some(0), Some(1)]),
        Err(Error::Structure(_))
    ));
}
