//! Unlabelled binary tree shapes with gendered children.

use std::fmt;

/// Child slots of one vertex. Vertex ids index into the arena of the owning
/// [`BinaryTree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Node {
    pub son: Option<usize>,
    pub daughter: Option<usize>,
    pub parent: Option<usize>,
}

/// A rooted binary tree where each child is either the son (left) or the
/// daughter (right). Vertices are stored in preorder with the root at id 0,
/// so two trees are equal exactly when their shapes are.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryTree {
    nodes: Vec<Node>,
}

impl BinaryTree {
    pub fn empty() -> Self {
        BinaryTree { nodes: Vec::new() }
    }

    pub fn leaf() -> Self {
        BinaryTree {
            nodes: vec![Node::default()],
        }
    }

    /// A new root with the given son and daughter subtrees; empty trees
    /// become missing children.
    pub fn join(son: &BinaryTree, daughter: &BinaryTree) -> Self {
        let mut nodes = Vec::with_capacity(1 + son.len() + daughter.len());
        nodes.push(Node::default());
        if !son.is_empty() {
            nodes[0].son = Some(1);
            append(&mut nodes, son, 0);
        }
        if !daughter.is_empty() {
            let at = nodes.len();
            nodes[0].daughter = Some(at);
            append(&mut nodes, daughter, 0);
        }
        BinaryTree { nodes }
    }

    /// Builds a tree from a child lookup, re-indexing into preorder.
    pub fn from_children<F>(root: Option<usize>, children: F) -> Self
    where
        F: Fn(usize) -> (Option<usize>, Option<usize>),
    {
        let mut nodes = Vec::new();
        let Some(root) = root else {
            return BinaryTree { nodes };
        };
        // explicit stack: (external id, parent slot, is_son)
        let mut stack = vec![(root, None::<usize>, false)];
        while let Some((ext, parent, is_son)) = stack.pop() {
            let id = nodes.len();
            nodes.push(Node {
                parent,
                ..Node::default()
            });
            if let Some(p) = parent {
                if is_son {
                    nodes[p].son = Some(id);
                } else {
                    nodes[p].daughter = Some(id);
                }
            }
            let (s, d) = children(ext);
            if let Some(d) = d {
                stack.push((d, Some(id), false));
            }
            if let Some(s) = s {
                stack.push((s, Some(id), true));
            }
        }
        BinaryTree { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        (!self.nodes.is_empty()).then_some(0)
    }

    pub fn node(&self, v: usize) -> &Node {
        &self.nodes[v]
    }

    pub fn son(&self, v: usize) -> Option<usize> {
        self.nodes[v].son
    }

    pub fn daughter(&self, v: usize) -> Option<usize> {
        self.nodes[v].daughter
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.nodes[v].parent
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.nodes[v].son.is_none() && self.nodes[v].daughter.is_none()
    }

    pub fn depth(&self, mut v: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[v].parent {
            v = p;
            d += 1;
        }
        d
    }

    /// Every vertex has zero or two children.
    pub fn is_full(&self) -> bool {
        self.nodes.iter().all(|n| n.son.is_some() == n.daughter.is_some())
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.son.is_none() && n.daughter.is_none())
            .count()
    }

    /// Leaf count of every subtree, indexed by vertex.
    pub fn subtree_leaves(&self) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        // preorder reversed visits children before parents
        for v in (0..self.len()).rev() {
            let n = &self.nodes[v];
            out[v] = match (n.son, n.daughter) {
                (None, None) => 1,
                (s, d) => s.map_or(0, |s| out[s]) + d.map_or(0, |d| out[d]),
            };
        }
        out
    }

    /// Size of every subtree, indexed by vertex.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut out = vec![1; self.len()];
        for v in (0..self.len()).rev() {
            let n = &self.nodes[v];
            out[v] += n.son.map_or(0, |s| out[s]) + n.daughter.map_or(0, |d| out[d]);
        }
        out
    }

    pub fn subtree(&self, v: usize) -> BinaryTree {
        BinaryTree::from_children(Some(v), |u| (self.nodes[u].son, self.nodes[u].daughter))
    }

    /// Vertices in symmetric (left, root, right) order.
    pub fn inorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut cur = self.root();
        while cur.is_some() || !stack.is_empty() {
            while let Some(v) = cur {
                stack.push(v);
                cur = self.nodes[v].son;
            }
            let v = stack.pop().expect("loop guard");
            out.push(v);
            cur = self.nodes[v].daughter;
        }
        out
    }

    /// Gender-swapped copy.
    pub fn mirror(&self) -> BinaryTree {
        BinaryTree::from_children(self.root(), |u| (self.nodes[u].daughter, self.nodes[u].son))
    }

    /// `self ↪ other`: a root-preserving map sending sons to sons and
    /// daughters to daughters. Such a map is unique when it exists.
    pub fn subordinates(&self, other: &BinaryTree) -> bool {
        self.embedding(other).is_some()
    }

    /// The embedding behind [`BinaryTree::subordinates`], as a vertex map.
    pub fn embedding(&self, other: &BinaryTree) -> Option<Vec<usize>> {
        let mut image = vec![usize::MAX; self.len()];
        let Some(root) = self.root() else {
            return Some(image);
        };
        let other_root = other.root()?;
        let mut stack = vec![(root, other_root)];
        while let Some((u, w)) = stack.pop() {
            image[u] = w;
            let (a, b) = (&self.nodes[u], &other.nodes[w]);
            match (a.son, b.son) {
                (Some(x), Some(y)) => stack.push((x, y)),
                (Some(_), None) => return None,
                _ => {}
            }
            match (a.daughter, b.daughter) {
                (Some(x), Some(y)) => stack.push((x, y)),
                (Some(_), None) => return None,
                _ => {}
            }
        }
        Some(image)
    }

    /// A gender-preserving bijection onto `other`, if the shapes agree.
    pub fn iso_witness(&self, other: &BinaryTree) -> Option<Vec<usize>> {
        (self == other).then(|| (0..self.len()).collect())
    }

    /// A gender-swapping bijection onto `other`, if one is the mirror of the other.
    pub fn anti_witness(&self, other: &BinaryTree) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let mut map = vec![usize::MAX; self.len()];
        let Some(root) = self.root() else {
            return Some(Vec::new());
        };
        let mut stack = vec![(root, 0usize)];
        while let Some((u, w)) = stack.pop() {
            map[u] = w;
            let (a, b) = (&self.nodes[u], &other.nodes[w]);
            match (a.son, b.daughter) {
                (Some(x), Some(y)) => stack.push((x, y)),
                (None, None) => {}
                _ => return None,
            }
            match (a.daughter, b.son) {
                (Some(x), Some(y)) => stack.push((x, y)),
                (None, None) => {}
                _ => return None,
            }
        }
        Some(map)
    }

    /// All shapes with `n` vertices. Smaller sons come first, then shapes are
    /// ordered recursively, so the listing is deterministic.
    pub fn all_shapes(n: usize) -> Vec<BinaryTree> {
        let mut table: Vec<Vec<BinaryTree>> = vec![vec![BinaryTree::empty()]];
        for size in 1..=n {
            let mut here = Vec::new();
            for left in 0..size {
                let right = size - 1 - left;
                for s in &table[left] {
                    for d in &table[right] {
                        here.push(BinaryTree::join(s, d));
                    }
                }
            }
            table.push(here);
        }
        table.swap_remove(n)
    }

    /// All full binary trees with `leaves` leaves.
    pub fn all_full(leaves: usize) -> Vec<BinaryTree> {
        if leaves == 0 {
            return Vec::new();
        }
        let mut table: Vec<Vec<BinaryTree>> = vec![Vec::new(), vec![BinaryTree::leaf()]];
        for k in 2..=leaves {
            let mut here = Vec::new();
            for left in 1..k {
                for s in &table[left] {
                    for d in &table[k - left] {
                        here.push(BinaryTree::join(s, d));
                    }
                }
            }
            table.push(here);
        }
        table.swap_remove(leaves)
    }

    /// Nested-parenthesis form: `(son,daughter)`, `.` for a missing child,
    /// `*` for a leaf.
    pub fn to_brackets(&self) -> String {
        fn go(t: &BinaryTree, v: Option<usize>, out: &mut String) {
            match v {
                None => out.push('.'),
                Some(v) if t.is_leaf(v) => out.push('*'),
                Some(v) => {
                    out.push('(');
                    go(t, t.son(v), out);
                    out.push(',');
                    go(t, t.daughter(v), out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(self, self.root(), &mut s);
        s
    }
}

fn append(nodes: &mut Vec<Node>, sub: &BinaryTree, parent: usize) {
    let base = nodes.len();
    for (i, n) in sub.nodes.iter().enumerate() {
        nodes.push(Node {
            son: n.son.map(|c| c + base),
            daughter: n.daughter.map(|c| c + base),
            parent: if i == 0 {
                Some(parent)
            } else {
                n.parent.map(|p| p + base)
            },
        });
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_brackets())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(n: usize) -> usize {
        // C(2n, n) / (n + 1) computed exactly in u128
        let mut c: u128 = 1;
        for k in 0..n as u128 {
            c = c * 2 * (2 * k + 1) / (k + 2);
        }
        c as usize
    }

    #[test]
    fn shape_counts_are_catalan() {
        for n in 0..=9 {
            let shapes = BinaryTree::all_shapes(n);
            assert_eq!(shapes.len(), catalan(n), "n = {n}");
            let unique: std::collections::HashSet<_> = shapes.iter().collect();
            assert_eq!(unique.len(), shapes.len());
        }
        for k in 1..=7 {
            assert_eq!(BinaryTree::all_full(k).len(), catalan(k - 1));
        }
    }

    #[test]
    fn join_and_from_children_agree() {
        let l = BinaryTree::leaf();
        let t = BinaryTree::join(&BinaryTree::join(&l, &BinaryTree::empty()), &l);
        let rebuilt = BinaryTree::from_children(t.root(), |v| (t.son(v), t.daughter(v)));
        assert_eq!(t, rebuilt);
        assert_eq!(t.to_brackets(), "((*,.),*)");
        assert_eq!(t.subtree(1).to_brackets(), "(*,.)");
        assert_eq!(t.mirror().to_brackets(), "(*,(.,*))");
    }

    #[test]
    fn subordination_examples() {
        let l = BinaryTree::leaf();
        let e = BinaryTree::empty();
        let via_son = BinaryTree::join(&l, &e);
        let via_daughter = BinaryTree::join(&e, &l);
        assert!(e.subordinates(&via_son));
        assert!(e.subordinates(&e));
        assert!(l.subordinates(&via_daughter));
        assert!(!l.subordinates(&e));
        assert!(!via_son.subordinates(&via_daughter));
        assert!(via_son.subordinates(&BinaryTree::join(&l, &l)));
    }

    #[test]
    fn witnesses() {
        let l = BinaryTree::leaf();
        let left_comb = BinaryTree::join(&BinaryTree::join(&l, &l), &l);
        let right_comb = BinaryTree::join(&l, &BinaryTree::join(&l, &l));
        assert!(left_comb.iso_witness(&right_comb).is_none());
        let w = left_comb.anti_witness(&right_comb).unwrap();
        assert_eq!(w[0], 0);
        assert!(left_comb.anti_witness(&left_comb).is_none());
        let balanced = BinaryTree::join(&BinaryTree::join(&l, &l), &BinaryTree::join(&l, &l));
        assert!(balanced.anti_witness(&balanced).is_some());
    }

    #[test]
    fn counting_helpers() {
        let l = BinaryTree::leaf();
        let t = BinaryTree::join(&BinaryTree::join(&l, &l), &l);
        assert!(t.is_full());
        assert_eq!(t.leaf_count(), 3);
        assert_eq!(t.subtree_leaves()[0], 3);
        assert_eq!(t.subtree_sizes()[0], 5);
        assert_eq!(t.inorder(), vec![2, 1, 3, 0, 4]);
        assert_eq!(t.depth(3), 2);
    }
}
