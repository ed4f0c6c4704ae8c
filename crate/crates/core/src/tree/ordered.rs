//! Binary search trees on the labels `1..n`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::binary::BinaryTree;
use crate::error::{Error, Result};

/// A binary tree on `1..n` with the search property: everything under the
/// son of `x` is below `x`, everything under the daughter is above.
///
/// Vertices are looked up by label; index 0 of each table is unused.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedTree {
    n: usize,
    root: u8,
    parent: Vec<Option<u8>>,
    son: Vec<Option<u8>>,
    daughter: Vec<Option<u8>>,
}

/// The interval bracketing a vertex, inherited down its root path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub low: u8,
    pub high: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Son,
    Daughter,
}

impl OrderedTree {
    /// Labels `shape` by its in-order traversal, the only labelling with the
    /// search property.
    pub fn from_shape(shape: &BinaryTree) -> Result<Self> {
        let n = shape.len();
        if n == 0 || n > crate::transform::MAX_POINTS {
            return Err(Error::InvalidTree(format!("a tree needs 1..=64 vertices, got {n}")));
        }
        let mut label = vec![0u8; n];
        for (i, v) in shape.inorder().into_iter().enumerate() {
            label[v] = i as u8 + 1;
        }
        let mut t = OrderedTree::bare(n, label[0]);
        for v in 0..n {
            let x = label[v] as usize;
            t.son[x] = shape.son(v).map(|c| label[c]);
            t.daughter[x] = shape.daughter(v).map(|c| label[c]);
            t.parent[x] = shape.parent(v).map(|p| label[p]);
        }
        Ok(t)
    }

    fn bare(n: usize, root: u8) -> Self {
        OrderedTree {
            n,
            root,
            parent: vec![None; n + 1],
            son: vec![None; n + 1],
            daughter: vec![None; n + 1],
        }
    }

    /// Builds a tree from explicit child links and checks every structural
    /// requirement.
    pub fn from_links(n: usize, root: u8, links: &BTreeMap<u8, (Option<u8>, Option<u8>)>) -> Result<Self> {
        if n == 0 || n > crate::transform::MAX_POINTS {
            return Err(Error::InvalidTree(format!("n = {n} is out of range")));
        }
        let in_range = |x: u8| x >= 1 && x as usize <= n;
        if !in_range(root) {
            return Err(Error::InvalidTree(format!("root {root} is outside 1..={n}")));
        }
        let mut t = OrderedTree::bare(n, root);
        for (&v, &(s, d)) in links {
            if !in_range(v) {
                return Err(Error::InvalidTree(format!("vertex {v} is outside 1..={n}")));
            }
            for (child, slot) in [(s, Gender::Son), (d, Gender::Daughter)] {
                let Some(c) = child else { continue };
                if !in_range(c) {
                    return Err(Error::InvalidTree(format!("child {c} of {v} is outside 1..={n}")));
                }
                if c == root || t.parent[c as usize].is_some() {
                    return Err(Error::InvalidTree(format!("vertex {c} has more than one parent")));
                }
                t.parent[c as usize] = Some(v);
                match slot {
                    Gender::Son => t.son[v as usize] = Some(c),
                    Gender::Daughter => t.daughter[v as usize] = Some(c),
                }
            }
        }
        // reachability from the root, and the search property via in-order
        let shape = t.shape();
        if shape.len() != n {
            return Err(Error::InvalidTree(format!(
                "only {} of {n} vertices are reachable from the root",
                shape.len()
            )));
        }
        let relabelled = OrderedTree::from_shape(&shape)?;
        if relabelled != t {
            return Err(Error::InvalidTree(
                "labels violate the search property (in-order traversal is not 1..n)".into(),
            ));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> u8 {
        self.root
    }

    pub fn parent(&self, v: u8) -> Option<u8> {
        self.parent[v as usize]
    }

    pub fn son(&self, v: u8) -> Option<u8> {
        self.son[v as usize]
    }

    pub fn daughter(&self, v: u8) -> Option<u8> {
        self.daughter[v as usize]
    }

    pub fn child(&self, v: u8, g: Gender) -> Option<u8> {
        match g {
            Gender::Son => self.son(v),
            Gender::Daughter => self.daughter(v),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = u8> {
        1..=self.n as u8
    }

    pub fn shape(&self) -> BinaryTree {
        BinaryTree::from_children(Some(self.root as usize), |v| {
            (self.son[v].map(usize::from), self.daughter[v].map(usize::from))
        })
    }

    /// `ω(v)`: the path `v, p(v), ..., root`.
    pub fn omega(&self, v: u8) -> Vec<u8> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Path bitmask of `ω(v)`, bit `x - 1` for label `x`.
    pub fn omega_mask(&self, v: u8) -> u64 {
        self.omega(v).iter().fold(0, |m, &x| m | 1u64 << (x - 1))
    }

    /// Whether `x` lies strictly below `y`.
    pub fn is_strict_descendant(&self, x: u8, y: u8) -> bool {
        let mut cur = x;
        while let Some(p) = self.parent(cur) {
            if p == y {
                return true;
            }
            cur = p;
        }
        false
    }

    pub fn level(&self, v: u8) -> usize {
        self.omega(v).len() - 1
    }

    /// Level of every label, index 0 unused.
    pub fn levels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n + 1];
        for v in self.labels() {
            out[v as usize] = self.level(v);
        }
        out
    }

    pub fn height(&self) -> usize {
        self.labels().map(|v| self.level(v)).max().unwrap_or(0)
    }

    /// Canonical bounds: the root gets `(1, n)`; a son of `v` inherits
    /// `(a, v)` and a daughter `(v, b)` from the bounds `(a, b)` of `v`.
    pub fn canonical_bounds(&self, v: u8) -> Bounds {
        let mut b = Bounds {
            low: 1,
            high: self.n as u8,
        };
        let path = self.omega(v);
        for w in path.windows(2).rev() {
            let (child, parent) = (w[0], w[1]);
            if self.son(parent) == Some(child) {
                b.high = parent;
            } else {
                b.low = parent;
            }
        }
        b
    }

    /// The highest vertex with a label in `lo..=hi`; `None` for an empty range.
    pub fn highest_in(&self, lo: u8, hi: u8) -> Option<u8> {
        if lo > hi {
            return None;
        }
        let mut v = Some(self.root);
        while let Some(x) = v {
            if x < lo {
                v = self.daughter(x);
            } else if x > hi {
                v = self.son(x);
            } else {
                return Some(x);
            }
        }
        None
    }

    /// Relabel `x ↦ n + 1 - x` and swap genders.
    pub fn mirror(&self) -> OrderedTree {
        let n = self.n as u8;
        let flip = |x: u8| n + 1 - x;
        let mut t = OrderedTree::bare(self.n, flip(self.root));
        for v in self.labels() {
            let w = flip(v) as usize;
            t.parent[w] = self.parent(v).map(flip);
            t.son[w] = self.daughter(v).map(flip);
            t.daughter[w] = self.son(v).map(flip);
        }
        t
    }

    /// Rebuilds a tree from the level of each label. Fails if the levels are
    /// not those of a search tree.
    pub fn from_levels(levels: &[usize]) -> Result<Self> {
        let n = levels.len();
        if n == 0 {
            return Err(Error::InvalidTree("no levels given".into()));
        }
        build_from_levels(levels, 1, n as u8).and_then(|(root, t)| {
            let mut tree = OrderedTree::bare(n, root);
            tree.parent = t.parent;
            tree.son = t.son;
            tree.daughter = t.daughter;
            if (1..=n as u8).any(|x| tree.level(x) != levels[x as usize - 1]) {
                return Err(Error::InvalidTree("levels are not those of a search tree".into()));
            }
            Ok(tree)
        })
    }

    /// Level per label, as `(label, level)` pairs in label order.
    pub fn diagram(&self) -> Diagram {
        Diagram {
            n: self.n,
            level: self.labels().map(|v| (v, self.level(v))).collect(),
        }
    }

    /// The unfolded grid: one column per label, one row per level.
    pub fn render_ascii(&self) -> String {
        let w = self.n.to_string().len() + 1;
        let lw = self.height().to_string().len();
        let mut out = String::new();
        let _ = write!(out, "{:lw$} |", "");
        for v in self.labels() {
            let _ = write!(out, "{v:>w$}");
        }
        out.push('\n');
        let _ = writeln!(out, "{}-+{}", "-".repeat(lw), "-".repeat(w * self.n));
        let levels = self.levels();
        for q in 0..=self.height() {
            let mut row = format!("{q:>lw$} |");
            for v in self.labels() {
                if levels[v as usize] == q {
                    let _ = write!(row, "{v:>w$}");
                } else {
                    let _ = write!(row, "{:>w$}", "");
                }
            }
            out.push_str(row.trim_end());
            out.push('\n');
        }
        out
    }

    pub fn render_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n  node [shape=circle];\n");
        for v in self.labels() {
            let _ = writeln!(out, "  {v};");
        }
        for v in self.labels() {
            if let Some(s) = self.son(v) {
                let _ = writeln!(out, "  {v} -> {s} [label=\"s\"];");
            }
            if let Some(d) = self.daughter(v) {
                let _ = writeln!(out, "  {v} -> {d} [label=\"d\"];");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Every tree on `n` labels, in [`BinaryTree::all_shapes`] order.
    pub fn all(n: usize, limits: &crate::Limits) -> Result<Vec<OrderedTree>> {
        if n == 0 || n > limits.tree_max {
            return Err(Error::Guard {
                what: "enumerating trees",
                n,
                limit: limits.tree_max,
            });
        }
        BinaryTree::all_shapes(n).iter().map(OrderedTree::from_shape).collect()
    }

    /// Chain with root 1 and only daughters.
    pub fn right_chain(n: usize) -> Self {
        let mut t = OrderedTree::bare(n, 1);
        for v in 1..n as u8 {
            t.daughter[v as usize] = Some(v + 1);
            t.parent[v as usize + 1] = Some(v);
        }
        t
    }
}

struct Links {
    parent: Vec<Option<u8>>,
    son: Vec<Option<u8>>,
    daughter: Vec<Option<u8>>,
}

fn build_from_levels(levels: &[usize], lo: u8, hi: u8) -> Result<(u8, Links)> {
    let n = levels.len();
    let mut links = Links {
        parent: vec![None; n + 1],
        son: vec![None; n + 1],
        daughter: vec![None; n + 1],
    };
    // the root of each range is its unique shallowest label
    fn go(levels: &[usize], lo: u8, hi: u8, links: &mut Links) -> Result<Option<u8>> {
        if lo > hi {
            return Ok(None);
        }
        let min = (lo..=hi).map(|x| levels[x as usize - 1]).min().expect("nonempty");
        let mut tops = (lo..=hi).filter(|&x| levels[x as usize - 1] == min);
        let top = tops.next().expect("nonempty");
        if tops.next().is_some() {
            return Err(Error::InvalidTree(format!(
                "two labels in {lo}..={hi} share the top level {min}"
            )));
        }
        let s = go(levels, lo, top - 1, links)?;
        let d = go(levels, top + 1, hi, links)?;
        links.son[top as usize] = s;
        links.daughter[top as usize] = d;
        for c in [s, d].into_iter().flatten() {
            links.parent[c as usize] = Some(top);
        }
        Ok(Some(top))
    }
    let root = go(levels, lo, hi, &mut links)?.expect("nonempty range");
    Ok((root, links))
}

/// Level of each label in an [`OrderedTree`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub n: usize,
    pub level: BTreeMap<u8, usize>,
}

impl Diagram {
    pub fn to_tree(&self) -> Result<OrderedTree> {
        let levels: Vec<usize> = (1..=self.n as u8)
            .map(|x| {
                self.level
                    .get(&x)
                    .copied()
                    .ok_or_else(|| Error::InvalidTree(format!("label {x} has no level")))
            })
            .collect::<Result<_>>()?;
        OrderedTree::from_levels(&levels)
    }
}

#[derive(Serialize, Deserialize, Default)]
struct RawChildren {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    son: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    daughter: Option<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawTree {
    n: usize,
    root: u8,
    #[serde(default)]
    nodes: BTreeMap<String, RawChildren>,
}

impl Serialize for OrderedTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // keys sorted numerically rather than as strings
        let mut ordered: Vec<(u8, RawChildren)> = self
            .labels()
            .filter(|&v| self.son(v).is_some() || self.daughter(v).is_some())
            .map(|v| {
                (
                    v,
                    RawChildren {
                        son: self.son(v),
                        daughter: self.daughter(v),
                    },
                )
            })
            .collect();
        ordered.sort_by_key(|(v, _)| *v);
        use serde::ser::SerializeMap;
        struct Nodes<'a>(&'a [(u8, RawChildren)]);
        impl Serialize for Nodes<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(&k.to_string(), v)?;
                }
                m.end()
            }
        }
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("OrderedTree", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("root", &self.root)?;
        st.serialize_field("nodes", &Nodes(&ordered))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for OrderedTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTree::deserialize(d)?;
        let mut links = BTreeMap::new();
        for (k, c) in raw.nodes {
            let v: u8 = k
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("node key {k:?} is not a label")))?;
            links.insert(v, (c.son, c.daughter));
        }
        OrderedTree::from_links(raw.n, raw.root, &links).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &OrderedTree, v: Option<u8>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match v {
                None => f.write_str("."),
                Some(v) if t.son(v).is_none() && t.daughter(v).is_none() => write!(f, "{v}"),
                Some(v) => {
                    write!(f, "{v}(")?;
                    go(t, t.son(v), f)?;
                    f.write_str(",")?;
                    go(t, t.daughter(v), f)?;
                    f.write_str(")")
                }
            }
        }
        go(self, Some(self.root), f)
    }
}

impl fmt::Display for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
