//! LRM-trees against a quadratic previous-smaller-value oracle.

use lrmkit::bitseq::bits_to_string;
use lrmkit::lrm::{build_lrm_tree, psv_parents, ranks, run_count, run_heads, InputArray, LrmTree};
use lrmkit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `psv(i)`: the last `j < i` with `(A[j], j) < (A[i], i)`, or 0.
fn psv_oracle(values: &[i64]) -> Vec<usize> {
    let mut out = vec![0; values.len() + 1];
    for i in 1..=values.len() {
        out[i] = (1..i).rev().find(|&j| values[j - 1] <= values[i - 1]).unwrap_or(0);
    }
    out
}

/// Runs by scanning: a new run starts wherever the sequence drops.
fn runs_oracle(values: &[i64]) -> usize {
    if values.is_empty() {
        return 0;
    }
    1 + values.windows(2).filter(|w| w[1] < w[0]).count()
}

fn check_tree(values: &[i64]) {
    let n = values.len();
    let (tree, cmp) = build_lrm_tree(values);
    let want = psv_oracle(values);
    assert_eq!(tree.parents(), &want[..], "{values:?}");
    for i in 1..=n {
        assert_eq!(tree.psv(i).unwrap(), want[i]);
    }
    assert!(cmp <= 2 * n as u64, "{values:?}: {cmp} comparisons");
    assert!(cmp >= n as u64, "{values:?}: {cmp} comparisons");
    assert_eq!(psv_parents(values), (want.clone(), cmp));

    // structure agrees with the parent array
    let bp = tree.bp();
    assert_eq!(bp.node_count(), n + 1);
    for v in 1..=n {
        assert_eq!(bp.parent(v).unwrap(), Some(want[v]));
        assert_eq!(bp.depth(v).unwrap(), tree.depths_preorder()[v] as usize);
    }
    let runs = runs_oracle(values);
    assert_eq!(tree.leaf_count(), runs.max(usize::from(n == 0)));
    assert_eq!(run_count(values, false), runs);

    let hist = tree.degree_histogram();
    assert_eq!(hist.iter().sum::<usize>(), n + 1);
    assert_eq!(hist.iter().enumerate().map(|(k, c)| k * c).sum::<usize>(), n);

    let rebuilt = LrmTree::from_bp(bp.clone()).unwrap();
    assert_eq!(rebuilt.parents(), tree.parents());
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[i64])) {
    let mut a: Vec<i64> = (1..=n as i64).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            a.swap(j, i);
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn all_permutations_up_to_eight() {
    for n in 0..=8 {
        let mut count = 0;
        for_each_permutation(n, |v| {
            check_tree(v);
            count += 1;
        });
        assert_eq!(count, (1..=n).product::<usize>());
    }
}

#[test]
fn all_permutations_of_nine_parents_and_counts() {
    for_each_permutation(9, |v| {
        let (parents, cmp) = psv_parents(v);
        assert_eq!(parents, psv_oracle(v));
        assert!(cmp <= 18);
    });
}

#[test]
fn random_arrays_with_duplicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..1000 {
        let n = rng.gen_range(0..=2048);
        let hi = rng.gen_range(1..=(n as i64).max(1));
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-hi..=hi)).collect();
        check_tree(&v);
    }
}

#[test]
fn sorted_input_costs_exactly_n() {
    for n in [0, 1, 2, 3, 100, 10_000] {
        let asc: Vec<i64> = (0..n as i64).collect();
        let (tree, cmp) = build_lrm_tree(&asc);
        assert_eq!(cmp, n as u64);
        assert_eq!(tree.leaf_count(), 1);
        // equal values continue a run as well
        let flat = vec![7i64; n];
        assert_eq!(build_lrm_tree(&flat).1, n as u64);
    }
    // strictly decreasing: every node hangs from the root
    let desc: Vec<i64> = (0..1000).rev().collect();
    let (tree, cmp) = build_lrm_tree(&desc);
    assert!(tree.parents()[1..].iter().all(|&p| p == 0));
    assert_eq!(cmp, 1999);
}

#[test]
fn run_head_examples() {
    let a = [2, 3, 4, 1, 5, 6, 7, 8];
    assert_eq!(bits_to_string(&run_heads(&a, false)), "10010000");
    assert_eq!(bits_to_string(&run_heads(&a, true)), "10011000");
    assert_eq!(bits_to_string(&run_heads(&[3, 4, 5, 6, 7], true)), "10000");
    assert_eq!(run_count(&a, false), 2);
    assert_eq!(run_count(&a, true), 3);
    assert!(run_heads(&[], true).is_empty());
}

#[test]
fn ranks_break_ties_by_position() {
    assert_eq!(ranks(&[5, 1, 5, 1]), vec![3, 1, 4, 2]);
    // strict runs follow consecutive ranks, so equal values chain
    assert_eq!(run_count(&[5, 1, 5, 1], true), 4);
    assert_eq!(run_count(&[1, 1, 2, 2], true), 1);
}

#[test]
fn psv_rejects_out_of_range() {
    let (tree, _) = build_lrm_tree(&[3, 1, 2]);
    assert!(matches!(tree.psv(0), Err(Error::Range(_))));
    assert!(matches!(tree.psv(4), Err(Error::Range(_))));
}

#[test]
fn input_parsing_reports_line_and_column() {
    let a: InputArray = "4 5 9\n  6 -8\n\n1".parse().unwrap();
    assert_eq!(a.values(), &[4, 5, 9, 6, -8, 1]);
    assert_eq!(a.to_text(), "4 5 9 6 -8 1\n");

    match "1 2\n3  x7 4".parse::<InputArray>() {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
        other => panic!("expected a parse error, got {other:?}"),
    }
    match "99999999999999999999".parse::<InputArray>() {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let empty: InputArray = "".parse().unwrap();
    assert!(empty.is_empty());
}

#[test]
fn from_bp_requires_a_single_root() {
    let bp = lrmkit::bp_forest::BpForest::from_paren_string("()()").unwrap();
    assert!(matches!(LrmTree::from_bp(bp), Err(Error::Structure(_))));
}
