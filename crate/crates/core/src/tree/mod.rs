//! Binary trees: plain shapes, search trees on `1..n`, and inner trees.

pub mod binary;
pub mod decreasing;
pub mod inner;
pub mod ordered;

pub use binary::BinaryTree;
pub use decreasing::{enumerate_decreasing, require_decreasing, Component};
pub use inner::InnerTree;
pub use ordered::{Bounds, Diagram, Gender, OrderedTree};
