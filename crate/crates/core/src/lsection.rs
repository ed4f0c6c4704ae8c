//! Respectful trees, their L-cross-sections, and the bridge to R-cross-sections
//! with two fixed points.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::section::{CrossSection, GreenRelation, Universe};
use crate::transform::Transformation;
use crate::tree::{BinaryTree, OrderedTree};
use crate::Limits;

/// Every non-root vertex subordinates its parent.
pub fn is_respectful(g: &BinaryTree) -> Result<bool> {
    if !g.is_full() {
        return Err(Error::domain("respectfulness is defined for full binary trees only"));
    }
    let subtrees: Vec<BinaryTree> = (0..g.len()).map(|v| g.subtree(v)).collect();
    Ok((0..g.len()).all(|v| match g.parent(v) {
        None => true,
        Some(p) => subtrees[v].subordinates(&subtrees[p]),
    }))
}

/// The two-condition form: a son's nephew subordinates him, and a
/// daughter's niece subordinates her.
pub fn is_respectful_by_kin(g: &BinaryTree) -> Result<bool> {
    if !g.is_full() {
        return Err(Error::domain("respectfulness is defined for full binary trees only"));
    }
    for p in 0..g.len() {
        let (Some(s), Some(d)) = (g.son(p), g.daughter(p)) else {
            continue;
        };
        if let Some(nephew) = g.son(d) {
            if !g.subtree(nephew).subordinates(&g.subtree(s)) {
                return Ok(false);
            }
        }
        if let Some(niece) = g.daughter(s) {
            if !g.subtree(niece).subordinates(&g.subtree(d)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn require_respectful(g: &BinaryTree) -> Result<()> {
    if is_respectful(g)? {
        Ok(())
    } else {
        Err(Error::NotRespectful(format!("{g:?}")))
    }
}

/// All respectful trees with `leaves` leaves.
pub fn enumerate_respectful(leaves: usize, limits: &Limits) -> Result<Vec<BinaryTree>> {
    if leaves == 0 || leaves > limits.tree_max {
        return Err(Error::Guard {
            what: "enumerating respectful trees",
            n: leaves,
            limit: limits.tree_max,
        });
    }
    Ok(BinaryTree::all_full(leaves)
        .into_iter()
        .filter(|g| is_respectful(g).unwrap_or(false))
        .collect())
}

/// A full binary tree with its faithful interval marking under a linear order
/// `u_1 ≺ ... ≺ u_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedTree {
    shape: BinaryTree,
    order: Vec<u8>,
    /// Per vertex, the 0-based positions `(p, q)` of `[u_{p+1}, u_{q+1}]`.
    marking: Vec<(usize, usize)>,
}

impl MarkedTree {
    /// The unique faithful marking: the root gets every position and each
    /// son takes as many leading positions as he has leaves.
    pub fn new(shape: &BinaryTree, order: &[u8]) -> Result<Self> {
        if !shape.is_full() || shape.is_empty() {
            return Err(Error::domain("a faithful marking needs a nonempty full binary tree"));
        }
        let n = shape.leaf_count();
        if order.len() != n {
            return Err(Error::domain(format!(
                "{n} leaves but an order of {} points",
                order.len()
            )));
        }
        let mut seen = vec![false; n + 1];
        for &u in order {
            if u == 0 || u as usize > n || std::mem::replace(&mut seen[u as usize], true) {
                return Err(Error::domain(format!("{order:?} is not a permutation of 1..{n}")));
            }
        }
        let leaves = shape.subtree_leaves();
        let mut marking = vec![(0, 0); shape.len()];
        marking[0] = (0, n - 1);
        for v in 0..shape.len() {
            let (p, q) = marking[v];
            if let (Some(s), Some(d)) = (shape.son(v), shape.daughter(v)) {
                let t = p + leaves[s] - 1;
                marking[s] = (p, t);
                marking[d] = (t + 1, q);
            }
        }
        Ok(MarkedTree {
            shape: shape.clone(),
            order: order.to_vec(),
            marking,
        })
    }

    pub fn natural(shape: &BinaryTree) -> Result<Self> {
        let order: Vec<u8> = (1..=shape.leaf_count() as u8).collect();
        MarkedTree::new(shape, &order)
    }

    pub fn shape(&self) -> &BinaryTree {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[u8] {
        &self.order
    }

    /// Points of the interval marking vertex `v`, in `≺` order.
    pub fn interval(&self, v: usize) -> &[u8] {
        let (p, q) = self.marking[v];
        &self.order[p..=q]
    }

    /// Interval of `v` as its first and last point under `≺`.
    pub fn ends(&self, v: usize) -> (u8, u8) {
        let (p, q) = self.marking[v];
        (self.order[p], self.order[q])
    }

    fn position_mask(&self, m: u64) -> u128 {
        self.order
            .iter()
            .enumerate()
            .filter(|(_, &u)| m >> (u - 1) & 1 == 1)
            .fold(0u128, |acc, (i, _)| acc | 1u128 << i)
    }

    fn vertex_covers(&self, v: usize, positions: u128) -> bool {
        let (p, q) = self.marking[v];
        let span = if q - p + 1 >= 128 {
            u128::MAX
        } else {
            ((1u128 << (q - p + 1)) - 1) << p
        };
        positions & !span == 0
    }

    /// `⟨M⟩`: the smallest marked vertex containing `m` (a label bitmask).
    pub fn hull(&self, m: u64) -> Result<usize> {
        if m == 0 {
            return Err(Error::domain("hull of an empty set"));
        }
        let positions = self.position_mask(m);
        if positions.count_ones() != m.count_ones() {
            return Err(Error::domain("set contains points outside the marked tree"));
        }
        let mut v = 0;
        loop {
            let next = [self.shape.son(v), self.shape.daughter(v)]
                .into_iter()
                .flatten()
                .find(|&c| self.vertex_covers(c, positions));
            match next {
                Some(c) => v = c,
                None => return Ok(v),
            }
        }
    }

    /// `α_M`: the representative with image `M`, built by walking the domain
    /// tree `A` and the target hull `B` down together.
    pub fn alpha(&self, m: u64) -> Result<Transformation> {
        let n = self.n();
        let mut images = vec![0u8; n];
        self.alpha_at(0, m, &mut images)?;
        Transformation::new(images)
    }

    fn alpha_at(&self, a: usize, m: u64, images: &mut [u8]) -> Result<()> {
        if m == 0 {
            return Err(Error::NotRespectful(format!(
                "the domain vertex {:?} meets an empty target",
                self.ends(a)
            )));
        }
        if m.count_ones() == 1 {
            let target = m.trailing_zeros() as u8 + 1;
            for &x in self.interval(a) {
                images[x as usize - 1] = target;
            }
            return Ok(());
        }
        let b = self.hull(m)?;
        let (Some(sa), Some(da)) = (self.shape.son(a), self.shape.daughter(a)) else {
            return Err(Error::NotRespectful(format!(
                "the leaf {:?} meets a target of {} points",
                self.ends(a),
                m.count_ones()
            )));
        };
        let (sb, db) = (
            self.shape.son(b).expect("a hull of two or more points is internal"),
            self.shape
                .daughter(b)
                .expect("a hull of two or more points is internal"),
        );
        let mask_of = |v: usize| self.interval(v).iter().fold(0u64, |acc, &u| acc | 1u64 << (u - 1));
        self.alpha_at(sa, m & mask_of(sb), images)?;
        self.alpha_at(da, m & mask_of(db), images)
    }

    /// `L^Γ = {α_M : ∅ ≠ M ⊆ 1..n}`, validated as an L-cross-section: of
    /// `O_n` for the natural order, of the full monoid otherwise.
    pub fn l_cross_section(&self) -> Result<CrossSection> {
        require_respectful(&self.shape)?;
        let n = self.n();
        if n > 20 {
            return Err(Error::Guard {
                what: "building an L-cross-section",
                n,
                limit: 20,
            });
        }
        let elements = (1..1u64 << n).map(|m| self.alpha(m)).collect::<Result<Vec<_>>>()?;
        let s = CrossSection::new(n, GreenRelation::L, elements)?;
        let natural = self.order.iter().enumerate().all(|(i, &u)| u as usize == i + 1);
        s.validate_in(if natural {
            Universe::OrderPreserving
        } else {
            Universe::Full
        })?;
        Ok(s)
    }
}

/// Shorthand for the natural-order L-cross-section of a respectful tree.
pub fn l_cross_section(g: &BinaryTree) -> Result<CrossSection> {
    MarkedTree::natural(g)?.l_cross_section()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityKind {
    None,
    Iso,
    Anti,
    Both,
}

/// How two trees relate up to mirror reflection, with vertex bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similarity {
    pub iso: Option<Vec<usize>>,
    pub anti: Option<Vec<usize>>,
}

impl Similarity {
    pub fn kind(&self) -> SimilarityKind {
        match (self.iso.is_some(), self.anti.is_some()) {
            (false, false) => SimilarityKind::None,
            (true, false) => SimilarityKind::Iso,
            (false, true) => SimilarityKind::Anti,
            (true, true) => SimilarityKind::Both,
        }
    }

    pub fn is_similar(&self) -> bool {
        self.iso.is_some() || self.anti.is_some()
    }
}

pub fn similar(g1: &BinaryTree, g2: &BinaryTree) -> Similarity {
    Similarity {
        iso: g1.iso_witness(g2),
        anti: g1.anti_witness(g2),
    }
}

/// `{α* : α ∈ L} ∪ {const_fix}` on `n + 1` points, validated.
pub fn dual_r_cross_section(l: &CrossSection, fix: u8) -> Result<CrossSection> {
    if l.relation() != GreenRelation::L {
        return Err(Error::domain("the dual bridge takes an L-cross-section"));
    }
    let n = l.n();
    if fix != 1 && fix as usize != n + 1 {
        return Err(Error::domain(format!("the fixed constant must be 1 or {}", n + 1)));
    }
    let mut elements = l
        .elements()
        .iter()
        .map(Transformation::higgins_dual)
        .collect::<Result<Vec<_>>>()?;
    elements.push(Transformation::constant(n + 1, fix));
    let s = CrossSection::new(n + 1, GreenRelation::R, elements)?;
    s.validate()?;
    Ok(s)
}

/// The elementary tree on `k + 1` points whose inner tree is `g` (with `k`
/// leaves), rooted at 1 or `k + 1`.
pub fn elementary_from_respectful(g: &BinaryTree, root: u8) -> Result<OrderedTree> {
    require_respectful(g)?;
    let k = g.leaf_count();
    let top = (k + 1) as u8;
    let other = match root {
        1 => top,
        r if r == top => 1,
        r => return Err(Error::domain(format!("the root must be 1 or {top}, not {r}"))),
    };
    let mut links: BTreeMap<u8, (Option<u8>, Option<u8>)> = BTreeMap::new();
    let mut attach = |parent: u8, child: u8| {
        let e = links.entry(parent).or_default();
        if child < parent {
            e.0 = Some(child);
        } else {
            e.1 = Some(child);
        }
    };
    attach(root, other);
    let leaves = g.subtree_leaves();
    // (vertex of g, lo, hi, endpoint already placed below which the rest hangs)
    let mut stack = vec![(0usize, 1u8, top, other)];
    while let Some((a, lo, hi, deeper)) = stack.pop() {
        let (Some(s), Some(d)) = (g.son(a), g.daughter(a)) else {
            continue;
        };
        let x = lo + leaves[s] as u8;
        attach(deeper, x);
        stack.push((s, lo, x, x));
        stack.push((d, x, hi, x));
    }
    OrderedTree::from_links(k + 1, root, &links)
}

/// The inner tree of an elementary tree, checked to be respectful.
pub fn respectful_from_elementary(t: &OrderedTree) -> Result<BinaryTree> {
    if !t.is_elementary() {
        return Err(Error::InvalidTree(format!("{t} is not elementary")));
    }
    let g = t.inner_tree().shape().clone();
    if !is_respectful(&g)? {
        return Err(Error::Internal(format!(
            "inner tree of elementary {t} is not respectful"
        )));
    }
    Ok(g)
}

/// Each map of `l` beside its dual, one pair per line.
pub fn render_arrows(l: &CrossSection) -> Result<String> {
    let mut out = String::new();
    let rows: Vec<(String, String)> = l
        .elements()
        .iter()
        .map(|a| Ok((a.to_string(), a.higgins_dual()?.to_string())))
        .collect::<Result<_>>()?;
    let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let _ = writeln!(out, "{:<w$}   α*", "α");
    for (a, d) in rows {
        let _ = writeln!(out, "{a:<w$}   {d}");
    }
    Ok(out)
}

#[derive(Serialize, Deserialize, Default)]
struct RawFullNode {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    son: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    daughter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    marking: Option<[u8; 2]>,
}

/// JSON form of a full binary tree with its natural faithful marking.
#[derive(Serialize, Deserialize)]
pub struct FullTreeDocument {
    /// Number of leaves.
    pub n: usize,
    pub root: usize,
    nodes: BTreeMap<String, RawFullNode>,
}

impl FullTreeDocument {
    pub fn from_tree(g: &BinaryTree) -> Result<Self> {
        let marked = MarkedTree::natural(g)?;
        let nodes = (0..g.len())
            .map(|v| {
                let (lo, hi) = marked.ends(v);
                (
                    v.to_string(),
                    RawFullNode {
                        son: g.son(v),
                        daughter: g.daughter(v),
                        marking: Some([lo, hi]),
                    },
                )
            })
            .collect();
        Ok(FullTreeDocument {
            n: g.leaf_count(),
            root: 0,
            nodes,
        })
    }

    /// Rebuilds the tree; markings, where given, must agree with the
    /// natural faithful marking.
    pub fn to_tree(&self) -> Result<BinaryTree> {
        let mut kids: BTreeMap<usize, (Option<usize>, Option<usize>)> = BTreeMap::new();
        for (k, node) in &self.nodes {
            let id: usize = k
                .parse()
                .map_err(|_| Error::InvalidTree(format!("node key {k:?} is not an id")))?;
            kids.insert(id, (node.son, node.daughter));
        }
        let mut parents: BTreeMap<usize, usize> = BTreeMap::new();
        for (&v, &(s, d)) in &kids {
            for c in [s, d].into_iter().flatten() {
                if c == self.root || parents.insert(c, v).is_some() {
                    return Err(Error::InvalidTree(format!("node {c} has more than one parent")));
                }
            }
        }
        let g = BinaryTree::from_children(Some(self.root), |v| kids.get(&v).copied().unwrap_or_default());
        if !g.is_full() {
            return Err(Error::InvalidTree(
                "the node table does not describe a full binary tree".into(),
            ));
        }
        if g.leaf_count() != self.n {
            return Err(Error::InvalidTree(format!(
                "declared {} leaves but the tree has {}",
                self.n,
                g.leaf_count()
            )));
        }
        let marked = MarkedTree::natural(&g)?;
        // map document ids onto preorder ids by walking both in step
        let mut stack = vec![(self.root, 0usize)];
        while let Some((doc, pre)) = stack.pop() {
            if let Some(node) = self.nodes.get(&doc.to_string()) {
                if let Some([lo, hi]) = node.marking {
                    if marked.ends(pre) != (lo, hi) {
                        return Err(Error::InvalidTree(format!(
                            "node {doc} is marked [{lo},{hi}] but its faithful marking is {:?}",
                            marked.ends(pre)
                        )));
                    }
                }
                if let (Some(s), Some(d)) = (node.son, node.daughter) {
                    stack.push((s, g.son(pre).expect("full")));
                    stack.push((d, g.daughter(pre).expect("full")));
                }
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf() -> BinaryTree {
        BinaryTree::leaf()
    }

    fn join(a: &BinaryTree, b: &BinaryTree) -> BinaryTree {
        BinaryTree::join(a, b)
    }

    fn right_comb(k: usize) -> BinaryTree {
        let mut g = leaf();
        for _ in 1..k {
            g = join(&leaf(), &g);
        }
        g
    }

    fn left_comb(k: usize) -> BinaryTree {
        let mut g = leaf();
        for _ in 1..k {
            g = join(&g, &leaf());
        }
        g
    }

    fn t(images: &[u8]) -> Transformation {
        Transformation::new(images.to_vec()).unwrap()
    }

    fn figure_non_respectful() -> BinaryTree {
        let pair = join(&leaf(), &leaf());
        let five = join(&leaf(), &pair);
        let nine = join(&five, &pair);
        join(&nine, &leaf())
    }

    fn figure_respectful() -> BinaryTree {
        let pair = join(&leaf(), &leaf());
        let five = join(&leaf(), &pair);
        let nine = join(&five, &pair);
        join(&nine, &pair)
    }

    #[test]
    fn respectful_examples() {
        assert!(!is_respectful(&figure_non_respectful()).unwrap());
        assert!(!is_respectful_by_kin(&figure_non_respectful()).unwrap());
        assert!(is_respectful(&figure_respectful()).unwrap());
        assert!(is_respectful_by_kin(&figure_respectful()).unwrap());
        assert!(is_respectful(&leaf()).unwrap());
        assert!(is_respectful(&join(&leaf(), &BinaryTree::empty())).is_err());
    }

    #[test]
    fn both_forms_agree() {
        for k in 1..=8 {
            for g in BinaryTree::all_full(k) {
                assert_eq!(is_respectful(&g).unwrap(), is_respectful_by_kin(&g).unwrap(), "{g:?}");
            }
        }
    }

    #[test]
    fn marking_of_the_figure() {
        let m = MarkedTree::natural(&figure_respectful()).unwrap();
        let ends: Vec<(u8, u8)> = (0..m.shape().len()).map(|v| m.ends(v)).collect();
        assert_eq!(
            ends,
            vec![
                (1, 7),
                (1, 5),
                (1, 3),
                (1, 1),
                (2, 3),
                (2, 2),
                (3, 3),
                (4, 5),
                (4, 4),
                (5, 5),
                (6, 7),
                (6, 6),
                (7, 7)
            ]
        );
        let two = MarkedTree::natural(&join(&leaf(), &leaf())).unwrap();
        assert_eq!((two.ends(0), two.ends(1), two.ends(2)), ((1, 2), (1, 1), (2, 2)));
    }

    #[test]
    fn hull_and_alpha() {
        let g1 = MarkedTree::natural(&left_comb(4)).unwrap();
        assert_eq!(g1.ends(g1.hull(0b0101).unwrap()), (1, 3));
        assert_eq!(g1.ends(g1.hull(0b1001).unwrap()), (1, 4));
        assert_eq!(g1.ends(g1.hull(0b0100).unwrap()), (3, 3));
        assert_eq!(g1.alpha(0b1011).unwrap(), t(&[1, 1, 2, 4]));

        let l = MarkedTree::natural(&right_comb(3)).unwrap();
        assert_eq!(l.alpha(0b011).unwrap(), t(&[1, 2, 2]));
        assert_eq!(l.alpha(0b111).unwrap(), Transformation::identity(3));
    }

    #[test]
    fn fig_dual_l_section() {
        let l = l_cross_section(&right_comb(3)).unwrap();
        let expected = [
            t(&[1, 2, 2]),
            t(&[1, 3, 3]),
            t(&[2, 3, 3]),
            t(&[1, 1, 1]),
            t(&[2, 2, 2]),
            t(&[3, 3, 3]),
            t(&[1, 2, 3]),
        ];
        let want = CrossSection::new(3, GreenRelation::L, expected.to_vec()).unwrap();
        assert_eq!(l, want);
    }

    #[test]
    fn similarity() {
        let s = similar(&left_comb(4), &right_comb(4));
        assert_eq!(s.kind(), SimilarityKind::Anti);
        assert_eq!(similar(&left_comb(4), &left_comb(4)).kind(), SimilarityKind::Iso);
        let bal = join(&join(&leaf(), &leaf()), &join(&leaf(), &leaf()));
        assert_eq!(similar(&bal, &bal).kind(), SimilarityKind::Both);
    }

    #[test]
    fn elementary_trees() {
        let two = elementary_from_respectful(&leaf(), 2).unwrap();
        assert_eq!((two.root(), two.son(2)), (2, Some(1)));
        let comb = elementary_from_respectful(&right_comb(3), 1).unwrap();
        assert_eq!(format!("{comb:?}"), "1(.,4(2(.,3),.))");
        assert!(comb.is_decreasing());

        // T₂(5) is elementary with a left comb as inner tree
        let g = left_comb(4);
        let t2: OrderedTree = serde_json::from_str(
            r#"{"n":5,"root":5,"nodes":{"5":{"son":1},"1":{"daughter":4},"4":{"son":3},"3":{"son":2}}}"#,
        )
        .unwrap();
        assert_eq!(elementary_from_respectful(&g, 5).unwrap(), t2);
        assert_eq!(respectful_from_elementary(&t2).unwrap(), g);
        for root in [1, 5] {
            let e = elementary_from_respectful(&g, root).unwrap();
            assert!(e.is_elementary());
            assert!(e.is_decreasing());
            assert_eq!(e.inner_tree().shape(), &g);
        }
        // the inner tree of the non-elementary T(5) is not respectful
        let inner_t5 = join(&leaf(), &join(&join(&leaf(), &leaf()), &leaf()));
        assert!(elementary_from_respectful(&inner_t5, 1).is_err());
        assert!(elementary_from_respectful(&g, 3).is_err());
    }

    #[test]
    fn dual_bridge_example() {
        let l = l_cross_section(&right_comb(3)).unwrap();
        for fix in [1, 4] {
            let r = dual_r_cross_section(&l, fix).unwrap();
            assert_eq!(r.len(), 8);
            assert_eq!(r.fixed_points().into_iter().collect::<Vec<_>>(), vec![1, 4]);
        }
        assert!(dual_r_cross_section(&l, 2).is_err());
    }

    #[test]
    fn document_round_trip() {
        let g = figure_respectful();
        let doc = FullTreeDocument::from_tree(&g).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: FullTreeDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_tree().unwrap(), g);
        let tampered = text.replace("\"marking\":[1,5]", "\"marking\":[1,4]");
        let bad: FullTreeDocument = serde_json::from_str(&tampered).unwrap();
        assert!(bad.to_tree().is_err());
    }
}
