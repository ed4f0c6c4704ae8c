//! Inner trees: full binary trees of gap-cell intervals.
//!
//! Cell `i'` sits between labels `i` and `i + 1`. An interval `[i', j']`
//! with `i < j` splits at the highest label `x` with `i < x <= j` into the
//! son `[i', (x-1)']` and the daughter `[x', j']`.

use std::fmt;

use super::binary::BinaryTree;
use super::ordered::OrderedTree;

/// A full binary tree whose vertices carry cell intervals, in preorder.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct InnerTree {
    shape: BinaryTree,
    cells: Vec<(u8, u8)>,
}

impl InnerTree {
    pub fn empty() -> Self {
        InnerTree::default()
    }

    /// Inner tree spanning the labels `lo..=hi`, i.e. cells `lo'..(hi-1)'`.
    pub fn of_range(t: &OrderedTree, lo: u8, hi: u8) -> Self {
        if lo >= hi {
            return InnerTree::empty();
        }
        let mut cells = Vec::new();
        let mut kids: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        fn go(
            t: &OrderedTree,
            i: u8,
            j: u8,
            cells: &mut Vec<(u8, u8)>,
            kids: &mut Vec<(Option<usize>, Option<usize>)>,
        ) -> usize {
            let id = cells.len();
            cells.push((i, j));
            kids.push((None, None));
            if i < j {
                let x = t.highest_in(i + 1, j).expect("range is nonempty");
                let s = go(t, i, x - 1, cells, kids);
                let d = go(t, x, j, cells, kids);
                kids[id] = (Some(s), Some(d));
            }
            id
        }
        go(t, lo, hi - 1, &mut cells, &mut kids);
        let shape = BinaryTree::from_children(Some(0), |v| kids[v]);
        // go() already numbers vertices in preorder
        debug_assert_eq!(shape.len(), cells.len());
        InnerTree { shape, cells }
    }

    pub fn shape(&self) -> &BinaryTree {
        &self.shape
    }

    /// Cell interval `(i, j)` of each vertex, in preorder.
    pub fn cells(&self) -> &[(u8, u8)] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.shape.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.shape.leaf_count()
    }

    pub fn subordinates(&self, other: &InnerTree) -> bool {
        self.shape.subordinates(&other.shape)
    }
}

impl fmt::Debug for InnerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn cell(c: (u8, u8)) -> String {
            if c.0 == c.1 {
                format!("[{}']", c.0)
            } else {
                format!("[{}',{}']", c.0, c.1)
            }
        }
        fn go(t: &InnerTree, v: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str(&cell(t.cells[v]))?;
            if let (Some(s), Some(d)) = (t.shape.son(v), t.shape.daughter(v)) {
                f.write_str("(")?;
                go(t, s, f)?;
                f.write_str(" ")?;
                go(t, d, f)?;
                f.write_str(")")?;
            }
            Ok(())
        }
        match self.shape.root() {
            None => f.write_str("∅"),
            Some(r) => go(self, r, f),
        }
    }
}

impl OrderedTree {
    /// The inner tree `Γ`, rooted at `[1', (n-1)']`; empty when `n = 1`.
    pub fn inner_tree(&self) -> InnerTree {
        InnerTree::of_range(self, 1, self.n() as u8)
    }

    /// `Γ_l(x)`, rooted at `[a', (x-1)']` for canonical bounds `(a, b)`.
    pub fn left_inner(&self, x: u8) -> InnerTree {
        InnerTree::of_range(self, self.canonical_bounds(x).low, x)
    }

    /// `Γ_r(x)`, rooted at `[x', (b-1)']` for canonical bounds `(a, b)`.
    pub fn right_inner(&self, x: u8) -> InnerTree {
        InnerTree::of_range(self, x, self.canonical_bounds(x).high)
    }
}
