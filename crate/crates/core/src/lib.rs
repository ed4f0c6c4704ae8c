//! Cross-sections of Green's relations on the monoid of order-preserving
//! transformations of a finite chain.
//!
//! R-cross-sections are parameterized by decreasing binary search trees,
//! L-cross-sections by respectful full binary trees. This crate builds both,
//! checks them against exhaustive search at small sizes, and decides when two
//! R-cross-sections are isomorphic.

pub mod classify;
pub mod error;
pub mod iso;
pub mod lsection;
pub mod oracle;
pub mod partition;
pub mod phi;
pub mod section;
pub mod transform;
pub mod tree;

pub use error::{Error, Result};
pub use partition::{ConvexPartition, SetPartition};
pub use section::{CrossSection, Direction, GreenRelation};
pub use transform::Transformation;
pub use tree::{BinaryTree, OrderedTree};

use serde::{Deserialize, Serialize};

/// Size caps for operations whose cost explodes with `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Enumerating all of `O_n`.
    pub on_max: usize,
    /// Enumerating set partitions for the full transformation monoid.
    pub tn_max: usize,
    /// Enumerating all tree shapes.
    pub tree_max: usize,
    /// Exhaustive R-cross-section search.
    pub brute_r_max: usize,
    /// Exhaustive L-cross-section search.
    pub brute_l_max: usize,
    /// Semigroup order accepted by the isomorphism oracle.
    pub iso_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            on_max: 10,
            tn_max: 6,
            tree_max: 12,
            brute_r_max: 5,
            brute_l_max: 4,
            iso_max: 64,
        }
    }
}

impl Limits {
    /// Lifts every cap to what the data types can hold.
    pub fn unlimited() -> Self {
        Limits {
            on_max: transform::MAX_POINTS,
            tn_max: 12,
            tree_max: 20,
            brute_r_max: 12,
            brute_l_max: 12,
            iso_max: usize::MAX,
        }
    }
}
