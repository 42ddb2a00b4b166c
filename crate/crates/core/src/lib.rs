//! LRM-trees and the structures built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`bitseq`]: bit strings with rank/select, plain and class/offset compressed.
//! - [`bp_forest`]: balanced-parentheses forests with excess-based navigation.
//! - [`lrm`]: left-to-right-minima trees (previous-smaller-value trees).
//! - [`rmq`]: three range-minimum indices built on LRM-trees.
//! - [`partition_sort`]: partition entropy, LRM-partitions and entropy-adaptive merge sort.
//! - [`permcode`]: a compressed permutation with forward and inverse application.
//! - [`container`]: the `LRMK` on-disk container.
//! - [`cli`]: the command-line front end (also used by the `lrmkit` binary).
//!
//! Positions in every public API are 1-based; node ids of trees are preorder ranks
//! starting at 0.

pub mod bitseq;
pub mod bp_forest;
pub mod cli;
pub mod container;
mod error;
pub mod lrm;
pub mod partition_sort;
pub mod permcode;
pub mod rmq;

pub use error::{Error, Result};
